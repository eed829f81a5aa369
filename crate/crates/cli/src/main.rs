mod config;
mod render;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use serde_json::{json, Value};

use negabeta::admissibility::{is_admissible_beta, is_admissible_negbeta, NegReferences, PosReference};
use negabeta::expansion::{
    evaluate_gamma, evaluate_positive, expand_beta, expand_negbeta, expand_real_beta, expand_real_negbeta,
    reference_l_decided, reference_r_star, renyi_one, renyi_one_star,
};
use negabeta::fractal::{hull_area, point_cloud_in, default_plane, ExportFormat, Plane};
use negabeta::integers::{
    delta_definitions, delta_gap, enumerate_beta_integers, enumerate_negbeta_integers, gap_coincidences,
    positive_gaps, DeltaMethod, WindowSpec,
};
use negabeta::word::parse_digits;
use negabeta::substitution::{
    canonical_substitution_beta, check_commutation, conjugacy_witness, finite_morphism_with_horizon, fixed_biword,
};
use negabeta::{BaseContext, DigitWord, Error, FieldElement, RootSelector, Sign};

use config::{load_config, Overrides, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "negabeta", version, about = "Numeration in positive and negative algebraic bases")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// Integer polynomial with β as a real root, e.g. "x^3-x^2-x-1".
    #[arg(long, global = true)]
    poly: Option<String>,
    /// "largest" or the index of the real root (ascending).
    #[arg(long, global = true)]
    root: Option<String>,
    /// pos or neg.
    #[arg(long, global = true)]
    sign: Option<String>,
    /// Maximum orbit steps before a reference word counts as undecided
    #[arg(long, global = true)]
    orbit_budget: Option<usize>,
    /// Refinement budget for comparisons, in bits (also NEGABETA_PRECISION_BITS)
    #[arg(long, global = true)]
    precision_bits: Option<u32>,
    /// key=value file; command-line flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Human-readable output instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    /// Write the result to this file instead of stdout
    #[arg(long, short = 'o', global = true)]
    output: Option<PathBuf>,
    /// json, csv or svg where applicable.
    #[arg(long, global = true)]
    format: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Facts about the base.
    Base,
    /// Pointed expansion of an element of Q(β), written in powers of b.
    Expand {
        #[arg(long, allow_hyphen_values = true)]
        value: String,
        /// Emit this many digits of the orbit of a point of the domain instead.
        #[arg(long)]
        digits: Option<usize>,
    },
    /// Reference words of the chosen system.
    Reference,
    /// Admissibility of an eventually periodic word such as 10(1); exit 1 if not.
    Admissible {
        #[arg(long)]
        word: String,
    },
    /// A window of integers around 0.
    Integers {
        /// Points on each side of 0.
        #[arg(long, conflicts_with = "bound")]
        count: Option<usize>,
        /// All points with |z| ≤ bound (a rational such as 7/2).
        #[arg(long)]
        bound: Option<String>,
        /// Include −Z_β⁺ in the positive system.
        #[arg(long)]
        symmetric: bool,
    },
    /// Gap values with their coincidence classes.
    Distances {
        #[arg(long, default_value_t = 8)]
        k_max: usize,
        /// Also evaluate every gap with this method.
        #[arg(long)]
        method: Option<String>,
    },
    /// The antimorphism, its projection and the finite morphisms.
    Morphism {
        #[arg(long, default_value_t = negabeta::substitution::DEFAULT_HORIZON)]
        horizon: usize,
        #[arg(long, default_value_t = 32)]
        conjugacy_max: usize,
        /// Also check invariance of a segment of this many letters per side.
        #[arg(long)]
        biword: Option<usize>,
    },
    /// Conjugate-embedding point cloud.
    Fractal {
        #[arg(long, default_value_t = 1000)]
        count: usize,
        /// complex:i or real:i,j (indices of conjugate roots).
        #[arg(long)]
        plane: Option<String>,
    },
    /// Re-check an `integers` JSON file.
    Verify {
        #[arg(long)]
        input: PathBuf,
    },
}

/// What a command produced: a JSON value, or raw text for csv/svg exports.
enum Payload {
    Json(Value),
    Text(String),
}

struct Outcome {
    payload: Payload,
    code: u8,
}

impl Outcome {
    fn ok(v: Value) -> Self {
        Outcome { payload: Payload::Json(v), code: 0 }
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::DegenerateDegree => "DegenerateDegree",
        Error::NoSuchRoot(_) => "NoSuchRoot",
        Error::DivisionByZero => "DivisionByZero",
        Error::NonInvertible => "NonInvertible",
        Error::RefinementBudgetExceeded(_) => "RefinementBudgetExceeded",
        Error::BadEmbeddingIndex { .. } => "BadEmbeddingIndex",
        Error::OutOfDomain(_) => "OutOfDomain",
        Error::UndecidedReference(_) => "UndecidedReference",
        Error::UndecidedInput => "UndecidedInput",
        Error::HypothesisViolated(_) => "HypothesisViolated",
        Error::TrivialSet => "TrivialSet",
        Error::NotSofic => "NotSofic",
        Error::CommutationFailed(_) => "CommutationFailed",
        Error::NotParry => "NotParry",
        Error::UnboundedEmbedding => "UnboundedEmbedding",
        Error::IoFailure(_) => "IoFailure",
        Error::ParseError(_) => "ParseError",
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::ParseError(_) => 2,
        Error::UndecidedReference(_) => 3,
        Error::TrivialSet => 4,
        _ => 5,
    }
}

fn context(cfg: &RunConfig) -> negabeta::Result<BaseContext> {
    let poly = cfg.base_poly.as_deref().ok_or_else(|| Error::ParseError("missing --poly".into()))?;
    let selector = RootSelector::from_str(&cfg.root_selector)?;
    BaseContext::with_budgets(poly.parse()?, selector, cfg.budgets)
}

fn element_json(x: &FieldElement) -> Value {
    json!({ "exact": x.to_string(), "approx": x.to_f64() })
}

fn cmd_base(ctx: &BaseContext) -> negabeta::Result<Value> {
    let field = ctx.field();
    let roots = field.conjugate_roots(negabeta::field::DEFAULT_EMBEDDING_BITS);
    let conj: Vec<Value> = roots
        .iter()
        .map(|r| {
            let z = r.to_complex64();
            json!([z.re, z.im])
        })
        .collect();
    Ok(json!({
        "poly": ctx.polynomial().to_string(),
        "degree": field.degree(),
        "beta": element_json(ctx.beta()),
        "beta_floor": ctx.beta_floor(),
        "beta_is_integer": ctx.beta_is_integer(),
        "alphabet_max": { "pos": ctx.alphabet_max(Sign::Positive), "neg": ctx.alphabet_max(Sign::Negative) },
        "l": element_json(ctx.l()),
        "r": element_json(ctx.r()),
        "conjugates": conj,
        "beta_index": field.beta_embedding_index(),
    }))
}

fn cmd_expand(ctx: &BaseContext, sign: Sign, value: &str, digits: Option<usize>) -> negabeta::Result<Value> {
    let x = FieldElement::parse(ctx.field(), value)?;
    if let Some(n) = digits {
        let d = match sign {
            Sign::Negative => expand_negbeta(ctx, &x, n)?,
            Sign::Positive => expand_beta(ctx, &x, n)?,
        };
        return Ok(json!({ "value": x.to_string(), "sign": sign, "digits": negabeta::word::digits_to_string(&d) }));
    }
    let e = match sign {
        Sign::Negative => expand_real_negbeta(ctx, &x)?,
        Sign::Positive => expand_real_beta(ctx, &x)?,
    };
    Ok(json!({
        "value": x.to_string(),
        "sign": sign,
        "pointed": e.to_string(),
        "integer_part": negabeta::word::digits_to_string(&e.integer_part),
        "fractional_part": e.fractional_part.to_string(),
        "decided": e.fractional_part.is_decided(),
    }))
}

fn cmd_reference(ctx: &BaseContext, sign: Sign) -> negabeta::Result<Value> {
    Ok(match sign {
        Sign::Negative => json!({
            "sign": sign,
            "d_l": reference_l_decided(ctx)?,
            "d_r_star": reference_r_star(ctx)?,
        }),
        Sign::Positive => json!({
            "sign": sign,
            "d_one": renyi_one(ctx)?,
            "d_one_star": renyi_one_star(ctx)?,
        }),
    })
}

fn cmd_admissible(ctx: &BaseContext, sign: Sign, word: &str) -> negabeta::Result<Outcome> {
    let w: DigitWord = word.parse()?;
    let ok = match sign {
        Sign::Negative => is_admissible_negbeta(ctx, &w)?,
        Sign::Positive => is_admissible_beta(ctx, &w)?,
    };
    Ok(Outcome { payload: Payload::Json(json!({ "word": w, "sign": sign, "admissible": ok })), code: if ok { 0 } else { 1 } })
}

fn window_spec(count: Option<usize>, bound: Option<&str>) -> negabeta::Result<WindowSpec> {
    match (count, bound) {
        (_, Some(b)) => BigRational::from_str(b.trim())
            .map(WindowSpec::Bound)
            .map_err(|_| Error::ParseError(format!("bad bound '{b}'"))),
        (Some(n), None) => Ok(WindowSpec::Count(n)),
        (None, None) => Ok(WindowSpec::Count(8)),
    }
}

fn cmd_integers(ctx: &BaseContext, cfg: &RunConfig, spec: &WindowSpec, symmetric: bool) -> negabeta::Result<Payload> {
    let w = match cfg.sign {
        Sign::Negative => enumerate_negbeta_integers(ctx, spec)?,
        Sign::Positive => enumerate_beta_integers(ctx, spec, symmetric)?,
    };
    match cfg.format.as_deref() {
        None | Some("json") => Ok(Payload::Json(w.to_json(ctx))),
        Some("csv") => Ok(Payload::Text(w.to_csv())),
        Some(f) => Err(Error::ParseError(format!("integers cannot be written as '{f}'"))),
    }
}

fn cmd_distances(ctx: &BaseContext, sign: Sign, k_max: usize, method: Option<&str>) -> negabeta::Result<Value> {
    if sign == Sign::Positive {
        let gaps = positive_gaps(ctx)?;
        return Ok(json!({
            "sign": sign,
            "d_one_star": renyi_one_star(ctx)?,
            "deltas": gaps.iter().enumerate().map(|(i, g)| json!({"i": i, "exact": g.to_string(), "approx": g.to_f64()})).collect::<Vec<_>>(),
        }));
    }
    let table = gap_coincidences(ctx, k_max)?;
    let mut out = json!({ "sign": sign, "table": table.to_json() });
    if let Some(m) = method {
        let m: DeltaMethod = m.parse()?;
        let vals = (0..=k_max)
            .map(|k| delta_gap(ctx, k, m).map(|v| json!({"k": k, "exact": v.to_string(), "agrees": v == table.entries[k]})))
            .collect::<negabeta::Result<Vec<_>>>()?;
        out["method"] = json!({ "name": m.to_string(), "values": vals });
    }
    Ok(out)
}

fn cmd_morphism(ctx: &BaseContext, horizon: usize, conjugacy_max: usize, biword: Option<usize>) -> negabeta::Result<Value> {
    let fm = finite_morphism_with_horizon(ctx, horizon)?;
    let top = fm.projection.map.len() - 1;
    let commutation = check_commutation(&fm.projection, &fm.phi_full, top);
    let mut out = fm.to_json();
    out["commutation"] = json!(commutation);
    match canonical_substitution_beta(ctx) {
        Ok(canon) => {
            let sq = canon.square();
            let w = conjugacy_witness(&fm.psi, &sq, conjugacy_max);
            out["canonical"] = canon.to_json();
            out["canonical_squared"] = sq.to_json();
            out["conjugacy_witness"] = w.map(|u| Value::String(sq.format(&u))).unwrap_or(Value::Null);
        }
        Err(Error::NotParry) => {
            out["canonical"] = Value::Null;
        }
        Err(e) => return Err(e),
    }
    if let Some(n) = biword {
        let (bi, ok) = fixed_biword(ctx, n)?;
        let projected = bi.project(&fm.projection);
        out["biword"] = json!({
            "left": fm.phi_full.format(&bi.left),
            "right": fm.phi_full.format(&bi.right),
            "invariant_full": ok,
            "projected_left": fm.psi.format(&projected.left),
            "projected_right": fm.psi.format(&projected.right),
            "invariant_projected": projected.is_fixed_by(&fm.psi),
        });
    }
    Ok(out)
}

fn parse_plane(s: &str) -> negabeta::Result<Plane> {
    let bad = || Error::ParseError(format!("bad plane '{s}' (complex:i or real:i,j)"));
    if let Some(i) = s.strip_prefix("complex:") {
        return i.trim().parse().map(Plane::Complex).map_err(|_| bad());
    }
    let rest = s.strip_prefix("real:").ok_or_else(bad)?;
    let (a, b) = rest.split_once(',').ok_or_else(bad)?;
    Ok(Plane::Real(a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn export_format(cfg: &RunConfig) -> negabeta::Result<ExportFormat> {
    if let Some(f) = &cfg.format {
        return f.parse();
    }
    let ext = cfg.output.as_ref().and_then(|p| p.extension()).and_then(|e| e.to_str());
    Ok(ext.and_then(|e| e.parse().ok()).unwrap_or(ExportFormat::Json))
}

fn cmd_fractal(ctx: &BaseContext, cfg: &RunConfig, count: usize, plane: Option<&str>) -> negabeta::Result<Payload> {
    let plane = match plane {
        Some(p) => parse_plane(p)?,
        None => default_plane(ctx)?,
    };
    let cloud = point_cloud_in(ctx, cfg.sign, count, plane)?;
    let format = export_format(cfg)?;
    match &cfg.output {
        Some(path) => {
            cloud.export(format, path)?;
            Ok(Payload::Json(json!({
                "path": path.display().to_string(),
                "format": format,
                "source": cloud.source,
                "count": cloud.count,
                "plane": cloud.plane,
                "bound": cloud.bound,
                "within_bound": cloud.within_bound(),
                "hull_area": hull_area(&cloud.points),
            })))
        }
        None => Ok(match format {
            ExportFormat::Json => Payload::Json(cloud.to_json()),
            f => Payload::Text(cloud.render(f)),
        }),
    }
}

/// Admissibility of every listed expansion, its exact value, the order of
/// the values and the gap letters, all recomputed from scratch.
fn cmd_verify(cfg: &RunConfig, input: &Path) -> negabeta::Result<Outcome> {
    let text = std::fs::read_to_string(input)?;
    let doc: Value = serde_json::from_str(&text).map_err(|e| Error::ParseError(format!("{}: {e}", input.display())))?;
    let field = |k: &str| doc.get(k).ok_or_else(|| Error::ParseError(format!("window json lacks '{k}'")));
    let mut cfg = cfg.clone();
    if cfg.base_poly.is_none() {
        cfg.base_poly = field("base")?.as_str().map(str::to_string);
    }
    let sign: Sign = field("sign")?.as_str().unwrap_or_default().parse()?;
    let ctx = context(&cfg)?;
    let points = field("points")?.as_array().ok_or_else(|| Error::ParseError("points must be an array".into()))?;
    let letters: Vec<usize> = field("gap_letters")?
        .as_array()
        .ok_or_else(|| Error::ParseError("gap_letters must be an array".into()))?
        .iter()
        .map(|v| v.as_u64().map(|x| x as usize).ok_or_else(|| Error::ParseError("gap letters must be integers".into())))
        .collect::<negabeta::Result<_>>()?;

    let mut bad_admissible = Vec::new();
    let mut bad_value = Vec::new();
    let mut values = Vec::new();
    let neg_refs = if sign == Sign::Negative { Some(NegReferences::of(&ctx)?) } else { None };
    let pos_ref = if sign == Sign::Positive { Some(PosReference::of(&ctx)?) } else { None };
    for (i, p) in points.iter().enumerate() {
        let raw = p.get("digits").and_then(Value::as_str).ok_or_else(|| Error::ParseError(format!("point {i} lacks digits")))?;
        let (negated, body) = match raw.strip_prefix('-') {
            Some(b) => (true, b),
            None => (false, raw),
        };
        let digits = parse_digits(body)?;
        let admissible = match (&neg_refs, &pos_ref) {
            (Some(r), _) => !negated && r.admits_finite(&digits),
            (_, Some(r)) => r.admits_finite(&digits),
            _ => unreachable!(),
        };
        if !admissible {
            bad_admissible.push(i);
        }
        let mut v = match sign {
            Sign::Negative => evaluate_gamma(&ctx, &digits),
            Sign::Positive => evaluate_positive(&ctx, &digits),
        };
        if negated {
            v = -v;
        }
        let coords = p
            .get("value_exact")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::ParseError(format!("point {i} lacks value_exact")))?
            .iter()
            .map(|c| {
                c.as_str()
                    .and_then(|s| BigRational::from_str(s).ok())
                    .ok_or_else(|| Error::ParseError(format!("point {i}: bad coordinate {c}")))
            })
            .collect::<negabeta::Result<Vec<_>>>()?;
        if ctx.element(coords) != v {
            bad_value.push(i);
        }
        values.push(v);
    }
    let mut increasing = true;
    for w in values.windows(2) {
        if w[1].compare(&w[0])? != std::cmp::Ordering::Greater {
            increasing = false;
        }
    }
    let mut bad_gap = Vec::new();
    if letters.len() + 1 != values.len().max(1) {
        bad_gap.push(letters.len());
    } else {
        let top = letters.iter().copied().max().unwrap_or(0);
        let deltas = match sign {
            Sign::Negative => delta_definitions(&ctx, top)?,
            Sign::Positive => positive_gaps(&ctx)?,
        };
        for (i, &a) in letters.iter().enumerate() {
            let gap = &values[i + 1] - &values[i];
            if deltas.get(a) != Some(&gap) {
                bad_gap.push(i);
            }
        }
    }
    let valid = bad_admissible.is_empty() && bad_value.is_empty() && increasing && bad_gap.is_empty();
    Ok(Outcome {
        payload: Payload::Json(json!({
            "points": points.len(),
            "inadmissible": bad_admissible,
            "wrong_values": bad_value,
            "increasing": increasing,
            "wrong_gap_letters": bad_gap,
            "valid": valid,
        })),
        code: if valid { 0 } else { 1 },
    })
}

fn run(cli: &Cli) -> negabeta::Result<Outcome> {
    let base_cfg = match &cli.global.config {
        Some(p) => load_config(p)?,
        None => RunConfig::from_env()?,
    };
    let g = &cli.global;
    let cfg = base_cfg.apply(&Overrides {
        poly: g.poly.clone(),
        root: g.root.clone(),
        sign: g.sign.clone(),
        orbit_budget: g.orbit_budget,
        precision_bits: g.precision_bits,
        output: g.output.clone(),
        format: g.format.clone(),
        pretty: g.pretty,
    })?;
    if let Command::Verify { input } = &cli.cmd {
        return cmd_verify(&cfg, input);
    }
    let ctx = context(&cfg)?;
    let sign = cfg.sign;
    match &cli.cmd {
        Command::Base => Ok(Outcome::ok(cmd_base(&ctx)?)),
        Command::Expand { value, digits } => Ok(Outcome::ok(cmd_expand(&ctx, sign, value, *digits)?)),
        Command::Reference => Ok(Outcome::ok(cmd_reference(&ctx, sign)?)),
        Command::Admissible { word } => cmd_admissible(&ctx, sign, word),
        Command::Integers { count, bound, symmetric } => {
            let spec = window_spec(*count, bound.as_deref())?;
            Ok(Outcome { payload: cmd_integers(&ctx, &cfg, &spec, *symmetric)?, code: 0 })
        }
        Command::Distances { k_max, method } => Ok(Outcome::ok(cmd_distances(&ctx, sign, *k_max, method.as_deref())?)),
        Command::Morphism { horizon, conjugacy_max, biword } => {
            Ok(Outcome::ok(cmd_morphism(&ctx, *horizon, *conjugacy_max, *biword)?))
        }
        Command::Fractal { count, plane } => Ok(Outcome { payload: cmd_fractal(&ctx, &cfg, *count, plane.as_deref())?, code: 0 }),
        Command::Verify { .. } => unreachable!(),
    }
}

fn emit(cli: &Cli, out: &Outcome) -> std::io::Result<()> {
    let text = match &out.payload {
        Payload::Json(v) if cli.global.pretty => render::pretty(v),
        Payload::Json(v) => format!("{v}\n"),
        Payload::Text(t) => t.clone(),
    };
    // fractal writes its own file; everything else honours --output here
    let to_file = matches!(out.payload, Payload::Text(_)) || !matches!(cli.cmd, Command::Fractal { .. });
    match (&cli.global.output, to_file) {
        (Some(path), true) => std::fs::write(path, text),
        _ => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => match emit(&cli, &out) {
            Ok(()) => ExitCode::from(out.code),
            Err(e) => {
                eprintln!("{}", json!({"error": "IoFailure", "message": e.to_string()}));
                ExitCode::from(5)
            }
        },
        Err(e) => {
            eprintln!("{}", json!({"error": error_kind(&e), "message": e.to_string()}));
            ExitCode::from(exit_code(&e))
        }
    }
}
