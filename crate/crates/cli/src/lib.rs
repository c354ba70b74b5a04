//! Command-line surface for `orlicz-core`: classification, σ tables,
//! conjugation, the example matrix, seminorm estimation and the acceptance
//! suite.

pub mod acceptance;
pub mod commands;
pub mod examples;

use std::path::Path;

use orlicz_core::{OrliczError, SmoothnessParams, YoungFunction, YoungSpec};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid --{field}: {message}")]
    Config { field: &'static str, message: String },

    #[error(transparent)]
    Core(#[from] OrliczError),

    #[error("cannot write {path}: {source}")]
    Io { path: String, source: std::io::Error },

    #[error("malformed manifest: {0}")]
    Manifest(String),
}

impl CliError {
    pub fn config(field: &'static str, message: impl Into<String>) -> Self {
        Self::Config { field, message: message.into() }
    }

    /// Process exit code for this failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) => exit_code_for(e),
            _ => 1,
        }
    }
}

/// 2 for a missing embedding, 3 for inadmissible smoothness, 4 when a
/// verdict could not be reached, 1 otherwise.
pub fn exit_code_for(e: &OrliczError) -> i32 {
    match e {
        OrliczError::NoEmbedding { .. } => 2,
        OrliczError::Inadmissible { .. } => 3,
        OrliczError::Inconclusive(_) => 4,
        _ => 1,
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Parse a Young-function descriptor.
///
/// Accepted forms: the mini-language (`power:p=2`, `powerlog:p0=,alpha0=,p=,alpha=`,
/// `exp:gamma0=,gamma=`, `table:path=`, `linfty`), a JSON object in the
/// serialised [`YoungSpec`] form, or a path to a two-column CSV table.
pub fn parse_young(text: &str) -> Result<YoungFunction> {
    let text = text.trim();
    let bad = |m: String| CliError::config("young", m);
    if text.starts_with('{') {
        let spec: YoungSpec = serde_json::from_str(text).map_err(|e| bad(format!("JSON descriptor: {e}")))?;
        return YoungFunction::from_spec(&spec).map_err(|e| bad(e.to_string()));
    }
    if text.ends_with(".csv") && !text.contains(':') {
        return young_from_table(text);
    }
    let (kind, rest) = text.split_once(':').unwrap_or((text, ""));
    let mut params: Vec<(String, String)> = Vec::new();
    for item in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| bad(format!("expected key=value, found `{item}`")))?;
        if params.iter().any(|(seen, _)| seen == k.trim()) {
            return Err(bad(format!("parameter `{}` given twice", k.trim())));
        }
        params.push((k.trim().to_string(), v.trim().to_string()));
    }
    let allowed: &[&str] = match kind {
        "power" => &["p", "coef"],
        "powerlog" => &["p0", "alpha0", "p", "alpha", "crossover"],
        "exp" => &["gamma0", "gamma"],
        "table" => &["path"],
        "linfty" => &["threshold"],
        other => {
            return Err(bad(format!(
                "unknown family `{other}`; expected power, powerlog, exp, table or linfty"
            )))
        }
    };
    if let Some((k, _)) = params.iter().find(|(k, _)| !allowed.contains(&k.as_str())) {
        return Err(bad(format!("unknown parameter `{k}` for {kind}; allowed: {}", allowed.join(", "))));
    }
    let get = |k: &str| params.iter().find(|(key, _)| key == k).map(|(_, v)| v.as_str());
    let num = |k: &str| -> Result<Option<f64>> {
        get(k)
            .map(|v| v.parse::<f64>().map_err(|_| bad(format!("parameter `{k}` = `{v}` is not a number"))))
            .transpose()
    };
    let need = |k: &str| -> Result<f64> { num(k)?.ok_or_else(|| bad(format!("{kind} needs parameter `{k}`"))) };
    let built = match kind {
        "power" => YoungFunction::scaled_power(need("p")?, num("coef")?.unwrap_or(1.0)),
        "powerlog" => YoungFunction::power_log_with_crossover(
            need("p0")?,
            need("alpha0")?,
            need("p")?,
            need("alpha")?,
            num("crossover")?.unwrap_or(1.0),
        ),
        "exp" => YoungFunction::exponential(need("gamma0")?, need("gamma")?),
        "table" => return young_from_table(get("path").ok_or_else(|| bad("table needs parameter `path`".into()))?),
        _ => YoungFunction::gauge(num("threshold")?.unwrap_or(1.0)),
    };
    built.map_err(|e| bad(e.to_string()))
}

fn young_from_table(path: &str) -> Result<YoungFunction> {
    let table = orlicz_core::TabulatedMonotone::from_csv_path(Path::new(path))
        .map_err(|e| CliError::config("young", format!("table `{path}`: {e}")))?;
    Ok(YoungFunction::tabulated(table))
}

/// Validated inputs shared by the subcommands.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub young_text: String,
    pub young: YoungFunction,
    pub params: SmoothnessParams,
    /// `σ` tables span `[10^-d, 10^d]`.
    pub grid_decades: u32,
    pub points_per_decade: usize,
    /// Overrides the equivalence ratio bound.
    pub tol_ratio: Option<f64>,
    pub seed: Option<u64>,
    pub format: Format,
}

impl RunConfig {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        young: &str,
        n: u32,
        s: f64,
        grid_decades: u32,
        points_per_decade: usize,
        tol_ratio: Option<f64>,
        seed: Option<u64>,
        format: Format,
    ) -> Result<Self> {
        let young_fn = parse_young(young)?;
        if n == 0 {
            return Err(CliError::config("n", "dimension must be at least 1"));
        }
        let params = SmoothnessParams::new(n, s).map_err(|e| CliError::config("s", e.to_string()))?;
        if grid_decades == 0 || grid_decades > 300 {
            return Err(CliError::config("grid-decades", format!("must lie in 1..=300, got {grid_decades}")));
        }
        if points_per_decade == 0 {
            return Err(CliError::config("points-per-decade", "must be positive"));
        }
        if let Some(t) = tol_ratio {
            if !(t > 1.0) || !t.is_finite() {
                return Err(CliError::config("tol-ratio", format!("must be a finite number above 1, got {t}")));
            }
        }
        Ok(Self {
            young_text: young.to_string(),
            young: young_fn,
            params,
            grid_decades,
            points_per_decade,
            tol_ratio,
            seed,
            format,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mini_language_families() {
        assert_eq!(parse_young("power:p=2").unwrap().eval(3.0), 9.0);
        assert_eq!(parse_young("power:p=2,coef=2").unwrap().eval(1.0), 2.0);
        assert!(parse_young("powerlog:p0=2,alpha0=0,p=4,alpha=4").is_ok());
        assert!(parse_young("exp:gamma0=-1,gamma=1").is_ok());
        assert_eq!(parse_young("linfty").unwrap().eval(2.0), f64::INFINITY);
        let json = r#"{"kind":"power","p":3}"#;
        assert_eq!(parse_young(json).unwrap().eval(2.0), 8.0);
    }

    #[test]
    fn mini_language_errors_name_the_field() {
        for bad in ["power", "power:q=2", "power:p=x", "powerlog:p0=2", "cubic:p=3", "power:p=2,p=3", "power:p=0.5"] {
            let e = parse_young(bad).unwrap_err();
            assert!(e.to_string().starts_with("invalid --young"), "{bad}: {e}");
            assert_eq!(e.exit_code(), 1);
        }
    }

    #[test]
    fn config_validation() {
        assert!(RunConfig::new("power:p=2", 1, 0.5, 6, 4, None, None, Format::Json).is_ok());
        let e = RunConfig::new("power:p=2", 1, 2.0, 6, 4, None, None, Format::Json).unwrap_err();
        assert!(e.to_string().starts_with("invalid --s"));
        let e = RunConfig::new("power:p=2", 0, 0.5, 6, 4, None, None, Format::Json).unwrap_err();
        assert!(e.to_string().starts_with("invalid --n"));
        let e = RunConfig::new("power:p=2", 1, 0.5, 6, 4, Some(0.5), None, Format::Json).unwrap_err();
        assert!(e.to_string().starts_with("invalid --tol-ratio"));
    }
}
