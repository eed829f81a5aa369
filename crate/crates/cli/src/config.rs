//! Flat `key=value` run configuration. Keys mirror the command-line flags;
//! flags given on the command line win over the file.

use std::path::{Path, PathBuf};

use negabeta::base::DEFAULT_ORBIT_BUDGET;
use negabeta::field::DEFAULT_REFINEMENT_BITS;
use negabeta::{Budgets, Error, Result, RootSelector, Sign};

pub const PRECISION_ENV: &str = "NEGABETA_PRECISION_BITS";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub base_poly: Option<String>,
    pub root_selector: String,
    pub sign: Sign,
    pub budgets: Budgets,
    pub output: Option<PathBuf>,
    pub format: Option<String>,
    pub pretty: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            base_poly: None,
            root_selector: "largest".into(),
            sign: Sign::Negative,
            budgets: Budgets { orbit_steps: DEFAULT_ORBIT_BUDGET, refinement_bits: DEFAULT_REFINEMENT_BITS },
            output: None,
            format: None,
            pretty: false,
        }
    }
}

/// Values given on the command line, all optional.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub poly: Option<String>,
    pub root: Option<String>,
    pub sign: Option<String>,
    pub orbit_budget: Option<usize>,
    pub precision_bits: Option<u32>,
    pub output: Option<PathBuf>,
    pub format: Option<String>,
    pub pretty: bool,
}

fn bad(key: &str, msg: &str) -> Error {
    Error::ParseError(format!("config key '{key}': {msg}"))
}

fn positive<T: std::str::FromStr + PartialOrd + Default>(key: &str, v: &str) -> Result<T> {
    let n: T = v.parse().map_err(|_| bad(key, &format!("'{v}' is not a number")))?;
    if n <= T::default() {
        return Err(bad(key, "must be positive"));
    }
    Ok(n)
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(bad(key, &format!("'{v}' is not a boolean"))),
    }
}

impl RunConfig {
    /// Defaults, with the refinement budget taken from the environment when set.
    pub fn from_env() -> Result<Self> {
        let mut c = RunConfig::default();
        if let Ok(v) = std::env::var(PRECISION_ENV) {
            c.budgets.refinement_bits = positive(PRECISION_ENV, v.trim())?;
        }
        Ok(c)
    }

    pub fn parse_str(mut self, text: &str) -> Result<Self> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::ParseError(format!("config line {}: expected key=value, got '{line}'", n + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            match key.replace('-', "_").as_str() {
                "poly" | "base_poly" => self.base_poly = Some(value.to_string()),
                "root" | "root_selector" => {
                    value.parse::<RootSelector>().map_err(|_| bad(key, &format!("bad root selector '{value}'")))?;
                    self.root_selector = value.to_string();
                }
                "sign" => self.sign = value.parse().map_err(|_| bad(key, &format!("bad sign '{value}'")))?,
                "orbit_budget" => self.budgets.orbit_steps = positive(key, value)?,
                "precision_bits" | "refinement_bits" => self.budgets.refinement_bits = positive(key, value)?,
                "output" => self.output = Some(PathBuf::from(value)),
                "format" => self.format = Some(value.to_string()),
                "pretty" => self.pretty = parse_bool(key, value)?,
                _ => return Err(bad(key, "unknown key")),
            }
        }
        Ok(self)
    }

    pub fn apply(mut self, o: &Overrides) -> Result<Self> {
        if let Some(p) = &o.poly {
            self.base_poly = Some(p.clone());
        }
        if let Some(r) = &o.root {
            r.parse::<RootSelector>()?;
            self.root_selector = r.clone();
        }
        if let Some(s) = &o.sign {
            self.sign = s.parse()?;
        }
        if let Some(b) = o.orbit_budget {
            self.budgets.orbit_steps = b;
        }
        if let Some(b) = o.precision_bits {
            self.budgets.refinement_bits = b;
        }
        if let Some(p) = &o.output {
            self.output = Some(p.clone());
        }
        if let Some(f) = &o.format {
            self.format = Some(f.clone());
        }
        self.pretty |= o.pretty;
        if self.budgets.orbit_steps == 0 || self.budgets.refinement_bits == 0 {
            return Err(Error::ParseError("budgets must be positive".into()));
        }
        Ok(self)
    }
}

pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)?;
    RunConfig::from_env()?.parse_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_is_default() {
        assert_eq!(RunConfig::default().parse_str("").unwrap(), RunConfig::default());
    }

    #[test]
    fn flag_wins() {
        let c = RunConfig::default().parse_str("orbit_budget = 50\n# note\nsign=pos").unwrap();
        assert_eq!(c.budgets.orbit_steps, 50);
        assert_eq!(c.sign, Sign::Positive);
        let o = Overrides { orbit_budget: Some(100), ..Default::default() };
        assert_eq!(c.apply(&o).unwrap().budgets.orbit_steps, 100);
    }

    #[test]
    fn bad_key_named() {
        let e = RunConfig::default().parse_str("colour=blue").unwrap_err();
        assert!(matches!(&e, Error::ParseError(m) if m.contains("colour")));
        let e = RunConfig::default().parse_str("orbit_budget=-3").unwrap_err();
        assert!(matches!(&e, Error::ParseError(m) if m.contains("orbit_budget")));
    }
}
