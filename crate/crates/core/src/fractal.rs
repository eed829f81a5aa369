//! Conjugate embeddings of β- and (−β)-integers as planar point clouds, with
//! exporters and a few geometric comparisons between clouds.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::base::{BaseContext, Sign};
use crate::error::{Error, Result};
use crate::field::DEFAULT_EMBEDDING_BITS;
use crate::integers::{enumerate_beta_integers, enumerate_negbeta_integers, WindowSpec};
use crate::word::Digit;

pub type Point = (f64, f64);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CloudSource {
    PosBase,
    NegBase,
}

/// How Q(β) is mapped to the plane.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Plane {
    /// z ↦ (Re z′, Im z′) for the non-real conjugate with this index.
    Complex(usize),
    /// z ↦ (z′, z″) for two real conjugates.
    Real(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointCloud {
    pub points: Vec<Point>,
    pub source: CloudSource,
    pub count: usize,
    pub plane: Plane,
    /// ⌊β⌋/(1−|β′|): bound on |z′| in every chosen embedding.
    pub bound: f64,
    /// Digit strings a_k⋯a_0 of the embedded integers, in point order.
    #[serde(skip)]
    pub digits: Vec<Vec<Digit>>,
}

/// The complex conjugate in the upper half plane when there is one, else the
/// two smallest real conjugates other than β.
pub fn default_plane(ctx: &BaseContext) -> Result<Plane> {
    let field = ctx.field();
    let roots = field.conjugate_roots(DEFAULT_EMBEDDING_BITS);
    let beta = field.beta_embedding_index();
    let n = roots.len();
    let others: Vec<usize> = (0..n).filter(|&i| i != beta).collect();
    if others.is_empty() {
        return Err(Error::BadEmbeddingIndex { index: 1, available: n });
    }
    let z = |i: usize| roots[i].to_complex64();
    if let Some(&i) = others.iter().find(|&&i| z(i).im > 0.0) {
        return Ok(Plane::Complex(i));
    }
    let real: Vec<usize> = others.iter().copied().filter(|&i| z(i).im == 0.0).collect();
    match real.as_slice() {
        [a, b, ..] => Ok(Plane::Real(*a, *b)),
        _ => Err(Error::BadEmbeddingIndex { index: n, available: n }),
    }
}

fn plane_conjugates(ctx: &BaseContext, plane: Plane) -> Result<Vec<Complex64>> {
    let roots = ctx.field().conjugate_roots(DEFAULT_EMBEDDING_BITS);
    let get = |i: usize| {
        roots
            .get(i)
            .map(|r| r.to_complex64())
            .ok_or(Error::BadEmbeddingIndex { index: i, available: roots.len() })
    };
    match plane {
        Plane::Complex(i) => Ok(vec![get(i)?]),
        Plane::Real(i, j) => Ok(vec![get(i)?, get(j)?]),
    }
}

/// Σ a_i γ^i by Horner, digits most significant first.
fn horner(digits: &[Digit], gamma: Complex64) -> Complex64 {
    digits.iter().fold(Complex64::new(0.0, 0.0), |acc, &d| acc * gamma + d as f64)
}

fn embed_digits(digits: &[Digit], gammas: &[Complex64], plane: Plane) -> Point {
    match plane {
        Plane::Complex(_) => {
            let z = horner(digits, gammas[0]);
            (z.re, z.im)
        }
        Plane::Real(..) => (horner(digits, gammas[0]).re, horner(digits, gammas[1]).re),
    }
}

pub fn point_cloud(ctx: &BaseContext, which: Sign, count: usize) -> Result<PointCloud> {
    point_cloud_in(ctx, which, count, default_plane(ctx)?)
}

/// The first `count` integers by absolute value, embedded in `plane`.
/// For the positive base these are the nonnegative β-integers.
pub fn point_cloud_in(ctx: &BaseContext, which: Sign, count: usize, plane: Plane) -> Result<PointCloud> {
    let conj = plane_conjugates(ctx, plane)?;
    let modulus = conj.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if modulus >= 1.0 {
        return Err(Error::UnboundedEmbedding);
    }
    let digits: Vec<Vec<Digit>> = match which {
        Sign::Negative => {
            let w = enumerate_negbeta_integers(ctx, &WindowSpec::Count(count))?;
            let mut pts: Vec<(f64, Vec<Digit>)> =
                w.points.into_iter().map(|p| (p.value.to_f64().abs(), p.digits)).collect();
            pts.sort_by(|a, b| a.0.total_cmp(&b.0));
            pts.into_iter().take(count).map(|p| p.1).collect()
        }
        Sign::Positive => {
            if count == 0 {
                vec![]
            } else {
                let w = enumerate_beta_integers(ctx, &WindowSpec::Count(count - 1), false)?;
                w.points.into_iter().map(|p| p.digits).collect()
            }
        }
    };
    let gammas: Vec<Complex64> = match which {
        Sign::Negative => conj.iter().map(|c| -c).collect(),
        Sign::Positive => conj,
    };
    let points = digits.iter().map(|d| embed_digits(d, &gammas, plane)).collect();
    let source = match which {
        Sign::Negative => CloudSource::NegBase,
        Sign::Positive => CloudSource::PosBase,
    };
    let bound = ctx.beta_floor() as f64 / (1.0 - modulus);
    Ok(PointCloud { points, source, count: digits.len(), plane, bound, digits })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExportFormat {
    Csv,
    Json,
    Svg,
}

impl std::str::FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ExportFormat::Csv),
            "json" => Ok(ExportFormat::Json),
            "svg" => Ok(ExportFormat::Svg),
            _ => Err(Error::ParseError(format!("unknown export format '{s}'"))),
        }
    }
}

pub const SVG_SIZE: u32 = 800;
pub const SVG_RADIUS_PX: f64 = 0.5;

impl PointCloud {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("x,y\n");
        for (x, y) in &self.points {
            s.push_str(&format!("{x},{y}\n"));
        }
        s
    }

    pub fn to_json(&self) -> Value {
        json!(self.points.iter().map(|&(x, y)| [x, y]).collect::<Vec<_>>())
    }

    /// Scatter plot over the square [−bound, bound]², y axis pointing up.
    pub fn to_svg(&self) -> String {
        let b = if self.bound.is_finite() && self.bound > 0.0 { self.bound } else { 1.0 };
        let r = SVG_RADIUS_PX * 2.0 * b / SVG_SIZE as f64;
        let mut s = format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SVG_SIZE}\" height=\"{SVG_SIZE}\" viewBox=\"{} {} {} {}\">\n",
            -b,
            -b,
            2.0 * b,
            2.0 * b
        );
        for (x, y) in &self.points {
            s.push_str(&format!("<circle cx=\"{x}\" cy=\"{}\" r=\"{r}\"/>\n", -y));
        }
        s.push_str("</svg>\n");
        s
    }

    pub fn render(&self, format: ExportFormat) -> String {
        match format {
            ExportFormat::Csv => self.to_csv(),
            ExportFormat::Json => self.to_json().to_string(),
            ExportFormat::Svg => self.to_svg(),
        }
    }

    pub fn export(&self, format: ExportFormat, path: &Path) -> Result<()> {
        fs::write(path, self.render(format)).map_err(Error::from)
    }

    pub fn within_bound(&self) -> bool {
        let eps = 1e-9 * self.bound.max(1.0);
        self.points.iter().all(|&(x, y)| match self.plane {
            Plane::Complex(_) => x.hypot(y) <= self.bound + eps,
            Plane::Real(..) => x.abs() <= self.bound + eps && y.abs() <= self.bound + eps,
        })
    }
}

fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Convex hull, counter-clockwise, by the monotone chain.
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut p = points.to_vec();
    p.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    p.dedup();
    if p.len() < 3 {
        return p;
    }
    let mut hull: Vec<Point> = Vec::with_capacity(2 * p.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Point>> = if pass == 0 { Box::new(p.iter()) } else { Box::new(p.iter().rev()) };
        for &q in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], q) <= 0.0 {
                hull.pop();
            }
            hull.push(q);
        }
        hull.pop();
    }
    hull
}

pub fn hull_area(points: &[Point]) -> f64 {
    let h = convex_hull(points);
    let n = h.len();
    if n < 3 {
        return 0.0;
    }
    0.5 * (0..n).map(|i| h[i].0 * h[(i + 1) % n].1 - h[(i + 1) % n].0 * h[i].1).sum::<f64>().abs()
}

pub fn diameter(points: &[Point]) -> f64 {
    let h = convex_hull(points);
    let mut best: f64 = 0.0;
    for (i, a) in h.iter().enumerate() {
        for b in &h[i + 1..] {
            best = best.max((a.0 - b.0).hypot(a.1 - b.1));
        }
    }
    best
}

pub fn centroid(points: &[Point]) -> Point {
    let n = points.len().max(1) as f64;
    let (sx, sy) = points.iter().fold((0.0, 0.0), |(sx, sy), p| (sx + p.0, sy + p.1));
    (sx / n, sy / n)
}

/// Bucket grid for nearest-neighbour queries.
struct Grid {
    origin: Point,
    cell: f64,
    cols: usize,
    rows: usize,
    cells: Vec<Vec<Point>>,
}

impl Grid {
    fn new(points: &[Point]) -> Self {
        let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
        for p in points {
            x0 = x0.min(p.0);
            y0 = y0.min(p.1);
            x1 = x1.max(p.0);
            y1 = y1.max(p.1);
        }
        let side = (points.len() as f64).sqrt().ceil().max(1.0);
        let cell = ((x1 - x0).max(y1 - y0) / side).max(1e-12);
        let cols = ((x1 - x0) / cell) as usize + 1;
        let rows = ((y1 - y0) / cell) as usize + 1;
        let mut cells = vec![Vec::new(); cols * rows];
        for &p in points {
            let (c, r) = (((p.0 - x0) / cell) as usize, ((p.1 - y0) / cell) as usize);
            cells[r * cols + c].push(p);
        }
        Grid { origin: (x0, y0), cell, cols, rows, cells }
    }

    fn nearest(&self, q: Point) -> f64 {
        let fc = ((q.0 - self.origin.0) / self.cell).floor() as i64;
        let fr = ((q.1 - self.origin.1) / self.cell).floor() as i64;
        let mut best = f64::INFINITY;
        let max_ring = self.cols.max(self.rows) as i64 + fc.abs() + fr.abs();
        for ring in 0..=max_ring {
            // every point outside the ring is at least (ring−1)·cell away
            if best <= (ring as f64 - 1.0) * self.cell {
                break;
            }
            for r in fr - ring..=fr + ring {
                for c in fc - ring..=fc + ring {
                    if (r - fr).abs() != ring && (c - fc).abs() != ring {
                        continue;
                    }
                    if r < 0 || c < 0 || r >= self.rows as i64 || c >= self.cols as i64 {
                        continue;
                    }
                    for p in &self.cells[r as usize * self.cols + c as usize] {
                        best = best.min((p.0 - q.0).hypot(p.1 - q.1));
                    }
                }
            }
        }
        best
    }
}

/// Mean distance from each point of `a` to its nearest point in `b`.
pub fn mean_nearest_distance(a: &[Point], b: &[Point]) -> f64 {
    if a.is_empty() || b.is_empty() {
        return f64::NAN;
    }
    let g = Grid::new(b);
    a.iter().map(|&q| g.nearest(q)).sum::<f64>() / a.len() as f64
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Alignment {
    /// Added to the first cloud.
    pub translation: Point,
    pub mean_nearest: f64,
    pub diameter: f64,
    /// mean_nearest / diameter.
    pub relative: f64,
    pub hull_area_a: f64,
    pub hull_area_b: f64,
}

/// Translate `a` so the centroids coincide and measure how far it sits from
/// `b`: mean nearest-neighbour distance in both directions, relative to the
/// diameter of `b`.
pub fn align(a: &[Point], b: &[Point]) -> Alignment {
    let (ca, cb) = (centroid(a), centroid(b));
    let t = (cb.0 - ca.0, cb.1 - ca.1);
    let moved: Vec<Point> = a.iter().map(|p| (p.0 + t.0, p.1 + t.1)).collect();
    let mean = 0.5 * (mean_nearest_distance(&moved, b) + mean_nearest_distance(b, &moved));
    let d = diameter(b);
    Alignment {
        translation: t,
        mean_nearest: mean,
        diameter: d,
        relative: mean / d,
        hull_area_a: hull_area(&moved),
        hull_area_b: hull_area(b),
    }
}
