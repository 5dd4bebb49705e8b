//! Run configuration as a flat `key = value` text file.
//!
//! Values are layered: built-in defaults, then a config file, then
//! `UNIMODAL_<KEY>` environment variables, then command-line flags. Every
//! layer goes through [`RunConfig::set`], so all of them accept the same
//! syntax.

use std::fmt;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::str::FromStr;

use unimodal::families::Family;
use unimodal::CoeffSet;

pub const ENV_PREFIX: &str = "UNIMODAL_";

/// Keys accepted by [`RunConfig::set`], in file order.
pub const KEYS: &[&str] = &[
    "command",
    "family",
    "n",
    "p",
    "coeff_set",
    "epsilon",
    "seed",
    "count",
    "enum_budget",
    "degree_budget",
    "quad_tol",
    "totient_limit",
    "isolator",
    "workers",
    "output",
    "plot",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

/// Inclusive integer range written `a..b`, `a..=b` or `a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Span {
    pub lo: u64,
    pub hi: u64,
}

impl Span {
    pub fn iter(self) -> RangeInclusive<u64> {
        self.lo..=self.hi
    }
}

impl FromStr for Span {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, ConfigError> {
        let bad = || ConfigError(format!("bad range {s:?}; expected a..b or a single integer"));
        let num = |t: &str| t.trim().parse::<u64>().map_err(|_| bad());
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
            None => {
                let v = num(s)?;
                (v, v)
            }
        };
        if lo > hi {
            return Err(bad());
        }
        Ok(Span { lo, hi })
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.lo, self.hi)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Option<String>,
    pub family: Family,
    pub n: Span,
    pub p: Span,
    /// Coefficient set for seeded random instances.
    pub coeff_set: CoeffSet,
    pub epsilon: f64,
    pub seed: u64,
    /// Instance count for seeded runs; `None` keeps each command's default.
    pub count: Option<usize>,
    /// Largest family size a census will enumerate.
    pub enum_budget: u128,
    /// Largest `d_m` (and `k`) the construction verifiers will build.
    pub degree_budget: u64,
    pub quad_tol: f64,
    pub totient_limit: u64,
    pub isolator: String,
    /// Worker threads; `0` lets the pool pick.
    pub workers: usize,
    pub output: Option<PathBuf>,
    pub plot: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: None,
            family: Family::SelfReciprocalLittlewood,
            n: Span { lo: 1, hi: 16 },
            p: Span { lo: 3, hi: 101 },
            coeff_set: CoeffSet::new([-1, 0, 1]).unwrap(),
            epsilon: 0.1,
            seed: 1,
            count: None,
            enum_budget: 1 << 24,
            degree_budget: unimodal::machinery::DEFAULT_DEGREE_BUDGET,
            quad_tol: unimodal::analysis::DEFAULT_REL_TOL,
            totient_limit: 1_000_000,
            isolator: "auto".into(),
            workers: 0,
            output: None,
            plot: None,
        }
    }
}

fn parse<T: FromStr>(key: &str, v: &str) -> Result<T, ConfigError> {
    v.parse().map_err(|_| ConfigError(format!("{key}: cannot parse {v:?}")))
}

fn positive<T: PartialOrd + Default>(key: &str, v: T) -> Result<T, ConfigError> {
    if v > T::default() {
        Ok(v)
    } else {
        Err(ConfigError(format!("{key} must be positive")))
    }
}

fn fmt_set(s: &CoeffSet) -> String {
    s.as_vec().iter().map(i64::to_string).collect::<Vec<_>>().join(",")
}

fn opt_path(v: &str) -> Option<PathBuf> {
    (!v.is_empty()).then(|| PathBuf::from(v))
}

impl RunConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let v = value.trim();
        match key {
            "command" => self.command = (!v.is_empty()).then(|| v.to_string()),
            "family" => self.family = v.parse().map_err(|e| ConfigError(format!("family: {e}")))?,
            "n" => self.n = v.parse()?,
            "p" => self.p = v.parse()?,
            "coeff_set" => {
                let vals: Vec<i64> = v.split(',').map(|t| parse("coeff_set", t.trim())).collect::<Result<_, _>>()?;
                self.coeff_set = CoeffSet::new(vals).map_err(|e| ConfigError(format!("coeff_set: {e}")))?;
            }
            "epsilon" => {
                let e: f64 = parse(key, v)?;
                if !(e > 0.0 && e < 1.0) {
                    return Err(ConfigError(format!("epsilon must lie in (0, 1), got {v}")));
                }
                self.epsilon = e;
            }
            "seed" => self.seed = parse(key, v)?,
            "count" => self.count = if v.is_empty() { None } else { Some(positive(key, parse(key, v)?)?) },
            "enum_budget" => self.enum_budget = positive(key, parse(key, v)?)?,
            "degree_budget" => self.degree_budget = positive(key, parse(key, v)?)?,
            "quad_tol" => {
                let t: f64 = parse(key, v)?;
                if !(t > 0.0 && t.is_finite()) {
                    return Err(ConfigError("quad_tol must be positive".into()));
                }
                self.quad_tol = t;
            }
            "totient_limit" => self.totient_limit = positive(key, parse(key, v)?)?,
            "isolator" => {
                unimodal::zerocount::isolator_by_name(v).map_err(|e| ConfigError(format!("isolator: {e}")))?;
                self.isolator = v.to_string();
            }
            "workers" => self.workers = parse(key, v)?,
            "output" => self.output = opt_path(v),
            "plot" => self.plot = opt_path(v),
            other => return Err(ConfigError(format!("unknown config key {other:?}"))),
        }
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<String> {
        let path = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string()).unwrap_or_default();
        Some(match key {
            "command" => self.command.clone().unwrap_or_default(),
            "family" => self.family.name().to_string(),
            "n" => self.n.to_string(),
            "p" => self.p.to_string(),
            "coeff_set" => fmt_set(&self.coeff_set),
            // `{:?}` prints the shortest string that parses back to the same value.
            "epsilon" => format!("{:?}", self.epsilon),
            "seed" => self.seed.to_string(),
            "count" => self.count.map(|c| c.to_string()).unwrap_or_default(),
            "enum_budget" => self.enum_budget.to_string(),
            "degree_budget" => self.degree_budget.to_string(),
            "quad_tol" => format!("{:?}", self.quad_tol),
            "totient_limit" => self.totient_limit.to_string(),
            "isolator" => self.isolator.clone(),
            "workers" => self.workers.to_string(),
            "output" => path(&self.output),
            "plot" => path(&self.plot),
            _ => return None,
        })
    }

    /// Applies `key = value` lines; blank lines and `#` comments are ignored.
    pub fn apply_text(&mut self, text: &str) -> Result<(), ConfigError> {
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| ConfigError(format!("line {}: expected key = value", i + 1)))?;
            self.set(k.trim(), v).map_err(|e| ConfigError(format!("line {}: {e}", i + 1)))?;
        }
        Ok(())
    }

    pub fn apply_env<I: IntoIterator<Item = (String, String)>>(&mut self, vars: I) -> Result<(), ConfigError> {
        let mut pairs: Vec<(String, String)> = vars
            .into_iter()
            .filter_map(|(k, v)| k.strip_prefix(ENV_PREFIX).map(|k| (k.to_ascii_lowercase(), v)))
            .filter(|(k, _)| KEYS.contains(&k.as_str()))
            .collect();
        pairs.sort();
        for (k, v) in pairs {
            self.set(&k, &v).map_err(|e| ConfigError(format!("{ENV_PREFIX}{}: {e}", k.to_ascii_uppercase())))?;
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        KEYS.iter().map(|k| format!("{k} = {}\n", self.get(k).unwrap())).collect()
    }

    pub fn from_text(text: &str) -> Result<Self, ConfigError> {
        let mut c = Self::default();
        c.apply_text(text)?;
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spans() {
        assert_eq!("1..16".parse::<Span>().unwrap(), Span { lo: 1, hi: 16 });
        assert_eq!("1..=16".parse::<Span>().unwrap(), Span { lo: 1, hi: 16 });
        assert_eq!("7".parse::<Span>().unwrap(), Span { lo: 7, hi: 7 });
        assert!("5..2".parse::<Span>().is_err());
        assert!("a..b".parse::<Span>().is_err());
    }

    #[test]
    fn set_validates() {
        let mut c = RunConfig::default();
        assert!(c.set("epsilon", "1.5").is_err());
        assert!(c.set("enum_budget", "0").is_err());
        assert!(c.set("isolator", "magic").is_err());
        assert!(c.set("bogus", "1").is_err());
        c.set("family", "skew-littlewood").unwrap();
        assert_eq!(c.family, Family::SkewReciprocalLittlewood);
    }

    #[test]
    fn env_layer_overrides_file() {
        let mut c = RunConfig::from_text("seed = 3\ndegree_budget = 500\n").unwrap();
        c.apply_env([("UNIMODAL_DEGREE_BUDGET".to_string(), "77".to_string()), ("HOME".into(), "/".into())])
            .unwrap();
        assert_eq!(c.seed, 3);
        assert_eq!(c.degree_budget, 77);
    }
}
