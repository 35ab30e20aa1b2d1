use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use thiserror::Error;

use crate::planar_map::QUADRANGULATION_ORACLE_BOUND;
use crate::schemes::SCHEME_K_BOUND;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConfigError {
    #[error("line {line}: expected key = value")]
    Syntax { line: usize },
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("bad value `{value}` for `{key}`")]
    BadValue { key: String, value: String },
    #[error("`{0}` must not be empty")]
    EmptyGrid(&'static str),
    #[error("`{key}` out of range: {reason}")]
    OutOfRange { key: &'static str, reason: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExperimentKind {
    Scaling,
    Stars,
    Covering,
    Verify,
}

impl FromStr for ExperimentKind {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "scaling" => Ok(Self::Scaling),
            "stars" => Ok(Self::Stars),
            "covering" => Ok(Self::Covering),
            "verify" => Ok(Self::Verify),
            _ => Err(()),
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Scaling => "scaling",
            Self::Stars => "stars",
            Self::Covering => "covering",
            Self::Verify => "verify",
        })
    }
}

/// Everything an experiment run depends on. Read from `key = value` lines;
/// `#` starts a comment.
///
/// | key | meaning | default |
/// |---|---|---|
/// | `kind` | `scaling`, `stars`, `covering` or `verify` | `scaling` |
/// | `n` | face counts, e.g. `1024,4096` or `2^10..2^16` | `1024` |
/// | `replicas` | sampled maps per size | `10` |
/// | `eps` | ε grid | `0.05,0.1,0.2,0.4` |
/// | `beta` | β grid (A₁ only) | `0.5` |
/// | `tuples` | vertex tuples per map (stars) | `10` |
/// | `seed` | master seed | `0` |
/// | `threads` | worker threads | `1` |
/// | `out` | output file (stdout if unset) | |
/// | `max_quad_n` | quadrangulation census bound | `3` |
/// | `max_lm_n` | labeled-map census bound | `4` |
/// | `census_k` | largest face count minus one for scheme checks | `3` |
/// | `golden_dir` | golden scheme census directory | `data/census` |
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub n: Vec<usize>,
    pub replicas: usize,
    pub eps: Vec<f64>,
    pub beta: Vec<f64>,
    pub tuples: usize,
    pub seed: u64,
    pub threads: usize,
    pub out: Option<PathBuf>,
    pub max_quad_n: usize,
    pub max_lm_n: usize,
    pub census_k: usize,
    pub golden_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            kind: ExperimentKind::Scaling,
            n: vec![1024],
            replicas: 10,
            eps: vec![0.05, 0.1, 0.2, 0.4],
            beta: vec![0.5],
            tuples: 10,
            seed: 0,
            threads: 1,
            out: None,
            max_quad_n: 3,
            max_lm_n: 4,
            census_k: 3,
            golden_dir: PathBuf::from("data/census"),
        }
    }
}

fn bad(key: &str, value: &str) -> ConfigError {
    ConfigError::BadValue {
        key: key.to_string(),
        value: value.to_string(),
    }
}

fn parse_size(key: &str, s: &str) -> Result<usize, ConfigError> {
    let s = s.trim();
    if let Some((b, e)) = s.split_once('^') {
        let b: usize = b.trim().parse().map_err(|_| bad(key, s))?;
        let e: u32 = e.trim().parse().map_err(|_| bad(key, s))?;
        return b.checked_pow(e).ok_or_else(|| bad(key, s));
    }
    s.parse().map_err(|_| bad(key, s))
}

fn parse_sizes(key: &str, s: &str) -> Result<Vec<usize>, ConfigError> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((lo, hi)) = part.split_once("..") {
            // Powers of two between the bounds.
            let (lo, hi) = (parse_size(key, lo)?, parse_size(key, hi)?);
            if lo == 0 || !lo.is_power_of_two() || lo > hi {
                return Err(bad(key, part));
            }
            let mut x = lo;
            while x <= hi {
                out.push(x);
                x *= 2;
            }
        } else {
            out.push(parse_size(key, part)?);
        }
    }
    Ok(out)
}

fn parse_floats(key: &str, s: &str) -> Result<Vec<f64>, ConfigError> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(|| bad(key, p)))
        .collect()
}

impl ExperimentConfig {
    pub fn for_kind(kind: ExperimentKind) -> Self {
        Self {
            kind,
            ..Self::default()
        }
    }

    /// Parses a config file on top of the defaults.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = Self::default();
        cfg.apply(text)?;
        Ok(cfg)
    }

    /// Applies `key = value` lines on top of the current values.
    pub fn apply(&mut self, text: &str) -> Result<(), ConfigError> {
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or(ConfigError::Syntax { line: i + 1 })?;
            self.set(k.trim(), v.trim().trim_matches('"'))?;
        }
        self.validate()
    }

    /// Sets one key; the config is not revalidated.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let one = |v: &str| parse_size(key, v);
        match key {
            "kind" => self.kind = value.parse().map_err(|_| bad(key, value))?,
            "n" => self.n = parse_sizes(key, value)?,
            "replicas" => self.replicas = one(value)?,
            "eps" => self.eps = parse_floats(key, value)?,
            "beta" => self.beta = parse_floats(key, value)?,
            "tuples" => self.tuples = one(value)?,
            "seed" => self.seed = value.parse().map_err(|_| bad(key, value))?,
            "threads" => self.threads = one(value)?,
            "out" => self.out = Some(PathBuf::from(value)),
            "max_quad_n" => self.max_quad_n = one(value)?,
            "max_lm_n" => self.max_lm_n = one(value)?,
            "census_k" => self.census_k = one(value)?,
            "golden_dir" => self.golden_dir = PathBuf::from(value),
            _ => return Err(ConfigError::UnknownKey(key.to_string())),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.n.is_empty() {
            return Err(ConfigError::EmptyGrid("n"));
        }
        if self.eps.is_empty() {
            return Err(ConfigError::EmptyGrid("eps"));
        }
        if self.beta.is_empty() {
            return Err(ConfigError::EmptyGrid("beta"));
        }
        let range = |key, reason: &str| ConfigError::OutOfRange {
            key,
            reason: reason.to_string(),
        };
        if self.n.contains(&0) {
            return Err(range("n", "sizes must be at least 1"));
        }
        if self.replicas == 0 {
            return Err(range("replicas", "must be at least 1"));
        }
        if self.tuples == 0 {
            return Err(range("tuples", "must be at least 1"));
        }
        if self.threads == 0 {
            return Err(range("threads", "must be at least 1"));
        }
        if self.eps.iter().any(|&e| e <= 0.0) {
            return Err(range("eps", "values must be positive"));
        }
        if self.beta.iter().any(|&b| !(0.0..1.0).contains(&b)) {
            return Err(range("beta", "values must lie in [0, 1)"));
        }
        if self.max_quad_n > QUADRANGULATION_ORACLE_BOUND {
            return Err(range("max_quad_n", &format!("at most {QUADRANGULATION_ORACLE_BOUND}")));
        }
        if self.max_lm_n > 5 {
            return Err(range("max_lm_n", "at most 5"));
        }
        if !(2..=SCHEME_K_BOUND).contains(&self.census_k) {
            return Err(range("census_k", &format!("between 2 and {SCHEME_K_BOUND}")));
        }
        Ok(())
    }
}
