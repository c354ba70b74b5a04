//! The closed-form example matrix and its versioned manifest.

use orlicz_core::{classify_regime, sigma, verify_equivalence, Asymptote, End, EquivalenceConfig, OrliczError, SmoothnessParams};
use serde::{Deserialize, Serialize};

use crate::{parse_young, CliError, Result};

/// Manifest bundled with the binary.
pub const MANIFEST: &str = include_str!("../data/examples.toml");

#[derive(Clone, Debug, Deserialize)]
pub struct Manifest {
    pub version: u32,
    pub defaults: EquivalenceConfig,
    #[serde(rename = "row")]
    pub rows: Vec<Row>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expectation {
    Equivalent,
    NoEmbedding,
    Inadmissible,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowEnd {
    Zero,
    Inf,
}

impl From<RowEnd> for End {
    fn from(e: RowEnd) -> Self {
        match e {
            RowEnd::Zero => End::NearZero,
            RowEnd::Inf => End::NearInfinity,
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
pub struct Row {
    pub id: String,
    pub young: String,
    pub n: u32,
    pub s: f64,
    #[serde(default = "equivalent")]
    pub expect: Expectation,
    pub end: Option<RowEnd>,
    pub asymptote: Option<Asymptote>,
    pub start_exponent: Option<f64>,
    pub decades: Option<f64>,
}

fn equivalent() -> Expectation {
    Expectation::Equivalent
}

impl Manifest {
    pub fn bundled() -> Result<Self> {
        Self::parse(MANIFEST)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let m: Manifest = toml::from_str(text).map_err(|e| CliError::Manifest(e.to_string()))?;
        for row in &m.rows {
            if row.expect == Expectation::Equivalent && (row.end.is_none() || row.asymptote.is_none()) {
                return Err(CliError::Manifest(format!("row `{}` needs `end` and `asymptote`", row.id)));
            }
        }
        Ok(m)
    }
}

/// Outcome of one manifest row.
#[derive(Clone, Debug, Serialize)]
pub struct RowResult {
    pub id: String,
    pub young: String,
    pub n: u32,
    pub s: f64,
    pub expect: Expectation,
    pub end: Option<RowEnd>,
    pub spread: Option<f64>,
    pub slope: Option<f64>,
    pub observed: String,
    pub pass: bool,
}

/// Evaluate one row; `tol_ratio` overrides the manifest ratio bound.
pub fn run_row(row: &Row, defaults: &EquivalenceConfig, tol_ratio: Option<f64>) -> RowResult {
    let mut out = RowResult {
        id: row.id.clone(),
        young: row.young.clone(),
        n: row.n,
        s: row.s,
        expect: row.expect,
        end: row.end,
        spread: None,
        slope: None,
        observed: String::new(),
        pass: false,
    };
    let setup = parse_young(&row.young).and_then(|a| {
        SmoothnessParams::new(row.n, row.s).map(|p| (a, p)).map_err(CliError::from)
    });
    let (a, params) = match setup {
        Ok(v) => v,
        Err(e) => {
            out.observed = e.to_string();
            return out;
        }
    };
    match row.expect {
        Expectation::NoEmbedding | Expectation::Inadmissible => {
            let verdict = classify_regime(&a, &params);
            out.observed = match &verdict {
                Ok((regime, _)) => format!("embedding ({regime})"),
                Err(OrliczError::NoEmbedding { gate, .. }) => format!("no_embedding ({gate:?} diverges)"),
                Err(OrliczError::Inadmissible { .. }) => "inadmissible".into(),
                Err(e) => e.to_string(),
            };
            out.pass = matches!(
                (row.expect, &verdict),
                (Expectation::NoEmbedding, Err(OrliczError::NoEmbedding { .. }))
                    | (Expectation::Inadmissible, Err(OrliczError::Inadmissible { .. }))
            );
        }
        Expectation::Equivalent => {
            let end: End = row.end.expect("validated").into();
            let asym = row.asymptote.expect("validated");
            let mut cfg = *defaults;
            if let Some(e) = row.start_exponent {
                cfg.start_exponent = if end == End::NearZero { -e } else { e };
            }
            if let Some(d) = row.decades {
                cfg.decades = d;
            }
            if let Some(t) = tol_ratio {
                cfg.ratio_bound = t;
            }
            let report = sigma(&a, &params).and_then(|m| verify_equivalence(|r| m.eval(r), |r| asym.eval(r, end), end, &cfg));
            match report {
                Ok(rep) => {
                    out.spread = Some(rep.spread);
                    out.slope = Some(rep.slope);
                    out.observed = format!("spread {:.3}, slope {:+.4}", rep.spread, rep.slope);
                    out.pass = rep.verdict;
                }
                Err(e) => out.observed = e.to_string(),
            }
        }
    }
    out
}

/// Every row of the manifest, in order.
pub fn run_manifest(m: &Manifest, tol_ratio: Option<f64>) -> Vec<RowResult> {
    m.rows.iter().map(|r| run_row(r, &m.defaults, tol_ratio)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_manifest_parses() {
        let m = Manifest::bundled().unwrap();
        assert_eq!(m.version, 1);
        assert!(m.rows.len() >= 30);
        let mut ids: Vec<&str> = m.rows.iter().map(|r| r.id.as_str()).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), m.rows.len(), "row ids must be unique");
    }

    #[test]
    fn rows_missing_an_asymptote_are_rejected() {
        let text = "version = 1\n[defaults]\ndecades = 8.0\npoints_per_decade = 16\nstart_exponent = 0.0\nratio_bound = 10.0\nslope_tol = 0.02\nslope_decades = 3.0\n[[row]]\nid = \"x\"\nyoung = \"power:p=5\"\nn = 2\ns = 0.5\n";
        assert!(Manifest::parse(text).is_err());
    }
}
