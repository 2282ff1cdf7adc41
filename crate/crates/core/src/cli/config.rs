//! Line-based run configuration.
//!
//! ```text
//! # comment
//! [model]
//! Lambda = 22614/53
//! omega = 1/31
//! ...
//! [timescale]
//! kind = uniform        # or: union
//! t0 = 0
//! h = 1
//! n_steps = 7
//! ```
//!
//! Values are decimals or rational literals `a/b`. Unknown sections, unknown
//! keys and duplicates are errors.

use std::collections::BTreeMap;
use std::path::PathBuf;

use thiserror::Error;

use crate::model::{SaiqhParams, Violation, COMPARTMENTS};
use crate::timescale::TimeScale;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: syntax error: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: unknown section [{name}]")]
    UnknownSection { line: usize, name: String },
    #[error("line {line}: unknown key `{key}` in section [{section}]")]
    UnknownKey { line: usize, section: String, key: String },
    #[error("duplicate section [{name}] (lines {first} and {second})")]
    DuplicateSection { name: String, first: usize, second: usize },
    #[error("duplicate key `{key}` in section [{section}] (lines {first} and {second})")]
    DuplicateKey { section: String, key: String, first: usize, second: usize },
    #[error("missing section [{0}]")]
    MissingSection(String),
    #[error("missing key `{key}` in section [{section}]")]
    MissingKey { section: String, key: String },
    #[error("line {line}: `{key}` expects {expected}, got `{value}`")]
    Type { line: usize, key: String, expected: &'static str, value: String },
    #[error("line {line}: {msg}")]
    Value { line: usize, msg: String },
    #[error("invalid model parameters: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidModel(Vec<Violation>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum TimeScaleConfig {
    Uniform { t0: f64, h: f64, n_steps: usize },
    Union { segments: Vec<(f64, f64)>, dense_step: f64 },
}

impl TimeScaleConfig {
    pub fn build(&self) -> crate::Result<TimeScale> {
        match self {
            TimeScaleConfig::Uniform { t0, h, n_steps } => TimeScale::uniform(*t0, *h, *n_steps),
            TimeScaleConfig::Union { segments, dense_step } => TimeScale::union(segments, *dense_step),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisConfig {
    pub transient_fraction: f64,
    pub lambda_lower: Option<f64>,
    pub lambda_upper: Option<f64>,
    pub m_override: Option<f64>,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig { transient_fraction: 0.5, lambda_lower: None, lambda_upper: None, m_override: None }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputConfig {
    pub csv_path: Option<PathBuf>,
    pub svg_path: Option<PathBuf>,
    /// Significant digits written for every real number.
    pub precision: usize,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig { csv_path: None, svg_path: None, precision: 17 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model: SaiqhParams,
    pub timescale: Option<TimeScaleConfig>,
    pub initial: Option<[f64; COMPARTMENTS]>,
    pub analysis: AnalysisConfig,
    pub output: OutputConfig,
    /// Published values to compare against, keyed by report name.
    pub reference: BTreeMap<String, f64>,
}

impl RunConfig {
    /// Lambda bounds from the analysis section, falling back to the model section.
    pub fn lambda_bounds(&self) -> Option<(f64, f64)> {
        let lo = self.analysis.lambda_lower.or(self.model.lambda_lower)?;
        let hi = self.analysis.lambda_upper.or(self.model.lambda_upper)?;
        Some((lo, hi))
    }
}

const MODEL_KEYS: [&str; 22] = [
    "Lambda", "omega", "n", "phi", "p", "gamma", "q", "nu", "delta1", "delta2", "f1", "f2", "f3", "eta", "k", "alpha1",
    "alpha2", "beta", "lA", "lH", "lambdaL", "lambdaU",
];
const TIMESCALE_KEYS: [&str; 6] = ["kind", "t0", "h", "n_steps", "segments", "dense_step"];
const INITIAL_KEYS: [&str; 6] = ["x1", "x2", "x3", "x4", "x5", "x6"];
const ANALYSIS_KEYS: [&str; 4] = ["transient_fraction", "lambdaL", "lambdaU", "M_override"];
const OUTPUT_KEYS: [&str; 3] = ["csv_path", "svg_path", "precision"];
pub const REFERENCE_KEYS: [&str; 16] =
    ["A", "B", "psi", "one_minus_psi_mu", "m1", "m2", "m3", "m4", "m5", "m6", "M1", "M2", "M3", "M4", "M5", "M6"];

fn known_keys(section: &str) -> Option<&'static [&'static str]> {
    Some(match section {
        "model" => &MODEL_KEYS,
        "timescale" => &TIMESCALE_KEYS,
        "initial" => &INITIAL_KEYS,
        "analysis" => &ANALYSIS_KEYS,
        "output" => &OUTPUT_KEYS,
        "reference" => &REFERENCE_KEYS,
        _ => return None,
    })
}

#[derive(Debug)]
struct Entry {
    value: String,
    line: usize,
}

#[derive(Debug)]
struct Section {
    name: String,
    entries: BTreeMap<String, Entry>,
}

impl Section {
    fn raw(&self, key: &str) -> Option<&Entry> {
        self.entries.get(key)
    }

    fn real(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        self.raw(key)
            .map(|e| {
                parse_real(&e.value).ok_or_else(|| ConfigError::Type {
                    line: e.line,
                    key: key.to_string(),
                    expected: "a real number or a/b",
                    value: e.value.clone(),
                })
            })
            .transpose()
    }

    fn require_real(&self, key: &str) -> Result<f64, ConfigError> {
        self.real(key)?.ok_or_else(|| self.missing(key))
    }

    fn integer(&self, key: &str) -> Result<Option<usize>, ConfigError> {
        self.raw(key)
            .map(|e| {
                e.value.parse::<usize>().map_err(|_| ConfigError::Type {
                    line: e.line,
                    key: key.to_string(),
                    expected: "a nonnegative integer",
                    value: e.value.clone(),
                })
            })
            .transpose()
    }

    fn missing(&self, key: &str) -> ConfigError {
        ConfigError::MissingKey { section: self.name.clone(), key: key.to_string() }
    }
}

/// Decimal literal or rational `a/b`, finite only.
pub fn parse_real(s: &str) -> Option<f64> {
    let v = match s.split_once('/') {
        Some((a, b)) => {
            let num: f64 = a.trim().parse().ok()?;
            let den: f64 = b.trim().parse().ok()?;
            if den == 0.0 {
                return None;
            }
            num / den
        }
        None => s.trim().parse().ok()?,
    };
    v.is_finite().then_some(v)
}

/// `[a, b], [c, d], [e]` with `[e]` shorthand for the point `[e, e]`.
fn parse_segments(s: &str) -> Option<Vec<(f64, f64)>> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let inner = compact.strip_prefix('[')?.strip_suffix(']')?;
    inner
        .split("],[")
        .map(|pair| {
            let parts: Vec<&str> = pair.split(',').collect();
            match parts.as_slice() {
                [a] => parse_real(a).map(|v| (v, v)),
                [a, b] => Some((parse_real(a)?, parse_real(b)?)),
                _ => None,
            }
        })
        .collect()
}

fn tokenize(text: &str) -> Result<Vec<Section>, ConfigError> {
    let mut sections: Vec<Section> = Vec::new();
    let mut section_lines: BTreeMap<String, usize> = BTreeMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| ConfigError::Syntax { line, msg: format!("unterminated section header `{content}`") })?
                .trim()
                .to_string();
            if known_keys(&name).is_none() {
                return Err(ConfigError::UnknownSection { line, name });
            }
            if let Some(&first) = section_lines.get(&name) {
                return Err(ConfigError::DuplicateSection { name, first, second: line });
            }
            section_lines.insert(name.clone(), line);
            sections.push(Section { name, entries: BTreeMap::new() });
            continue;
        }

        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| ConfigError::Syntax { line, msg: format!("expected `key = value`, got `{content}`") })?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || value.is_empty() {
            return Err(ConfigError::Syntax { line, msg: format!("expected `key = value`, got `{content}`") });
        }
        let section = sections
            .last_mut()
            .ok_or_else(|| ConfigError::Syntax { line, msg: format!("key `{key}` appears before any section") })?;
        let known = known_keys(&section.name).expect("section validated at its header");
        if !known.contains(&key) {
            return Err(ConfigError::UnknownKey { line, section: section.name.clone(), key: key.to_string() });
        }
        if let Some(prev) = section.entries.get(key) {
            return Err(ConfigError::DuplicateKey {
                section: section.name.clone(),
                key: key.to_string(),
                first: prev.line,
                second: line,
            });
        }
        section.entries.insert(key.to_string(), Entry { value: value.to_string(), line });
    }
    Ok(sections)
}

fn parse_model(sec: &Section) -> Result<SaiqhParams, ConfigError> {
    let r = |k: &str| sec.require_real(k);
    let params = SaiqhParams {
        recruitment: r("Lambda")?,
        omega: r("omega")?,
        n: r("n")?,
        phi: r("phi")?,
        p: r("p")?,
        gamma: r("gamma")?,
        q: r("q")?,
        nu: r("nu")?,
        delta1: r("delta1")?,
        delta2: r("delta2")?,
        f1: r("f1")?,
        f2: r("f2")?,
        f3: r("f3")?,
        eta: r("eta")?,
        k: r("k")?,
        alpha1: r("alpha1")?,
        alpha2: r("alpha2")?,
        beta: r("beta")?,
        l_a: r("lA")?,
        l_h: r("lH")?,
        lambda_lower: sec.real("lambdaL")?,
        lambda_upper: sec.real("lambdaU")?,
    };
    let violations = params.validate();
    if !violations.is_empty() {
        return Err(ConfigError::InvalidModel(violations));
    }
    Ok(params)
}

fn parse_timescale(sec: &Section) -> Result<TimeScaleConfig, ConfigError> {
    let kind = sec.raw("kind").ok_or_else(|| sec.missing("kind"))?;
    let reject = |keys: &[&str]| -> Result<(), ConfigError> {
        for k in keys {
            if let Some(e) = sec.raw(k) {
                return Err(ConfigError::Value {
                    line: e.line,
                    msg: format!("key `{k}` does not apply to kind = {}", kind.value),
                });
            }
        }
        Ok(())
    };
    match kind.value.as_str() {
        "uniform" => {
            reject(&["segments", "dense_step"])?;
            Ok(TimeScaleConfig::Uniform {
                t0: sec.real("t0")?.unwrap_or(0.0),
                h: sec.require_real("h")?,
                n_steps: sec.integer("n_steps")?.ok_or_else(|| sec.missing("n_steps"))?,
            })
        }
        "union" => {
            reject(&["t0", "h", "n_steps"])?;
            let e = sec.raw("segments").ok_or_else(|| sec.missing("segments"))?;
            let segments = parse_segments(&e.value).ok_or_else(|| ConfigError::Type {
                line: e.line,
                key: "segments".into(),
                expected: "a list like `[0, 1], [2, 3]`",
                value: e.value.clone(),
            })?;
            Ok(TimeScaleConfig::Union { segments, dense_step: sec.require_real("dense_step")? })
        }
        other => Err(ConfigError::Type {
            line: kind.line,
            key: "kind".into(),
            expected: "`uniform` or `union`",
            value: other.to_string(),
        }),
    }
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let sections = tokenize(text)?;
    let find = |name: &str| sections.iter().find(|s| s.name == name);

    let model_sec = find("model").ok_or_else(|| ConfigError::MissingSection("model".into()))?;
    let model = parse_model(model_sec)?;

    let timescale = find("timescale").map(parse_timescale).transpose()?;

    let initial = find("initial")
        .map(|sec| -> Result<[f64; COMPARTMENTS], ConfigError> {
            let mut x = [0.0; COMPARTMENTS];
            for (i, key) in INITIAL_KEYS.iter().enumerate() {
                x[i] = sec.require_real(key)?;
            }
            Ok(x)
        })
        .transpose()?;

    let mut analysis = AnalysisConfig::default();
    if let Some(sec) = find("analysis") {
        if let Some(f) = sec.real("transient_fraction")? {
            analysis.transient_fraction = f;
        }
        analysis.lambda_lower = sec.real("lambdaL")?;
        analysis.lambda_upper = sec.real("lambdaU")?;
        analysis.m_override = sec.real("M_override")?;
        for key in ["lambdaL", "lambdaU"] {
            if let (Some(e), true) = (sec.raw(key), model_sec.raw(key).is_some()) {
                return Err(ConfigError::Value {
                    line: e.line,
                    msg: format!("`{key}` is set in both [model] and [analysis]"),
                });
            }
        }
    }

    let mut output = OutputConfig::default();
    if let Some(sec) = find("output") {
        output.csv_path = sec.raw("csv_path").map(|e| PathBuf::from(&e.value));
        output.svg_path = sec.raw("svg_path").map(|e| PathBuf::from(&e.value));
        if let Some(p) = sec.integer("precision")? {
            if !(1..=17).contains(&p) {
                let line = sec.raw("precision").map_or(0, |e| e.line);
                return Err(ConfigError::Value { line, msg: format!("precision must be in 1..=17, got {p}") });
            }
            output.precision = p;
        }
    }

    let mut reference = BTreeMap::new();
    if let Some(sec) = find("reference") {
        for key in REFERENCE_KEYS {
            if let Some(v) = sec.real(key)? {
                reference.insert(key.to_string(), v);
            }
        }
    }

    Ok(RunConfig { model, timescale, initial, analysis, output, reference })
}
