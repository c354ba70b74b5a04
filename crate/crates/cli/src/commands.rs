//! Subcommand bodies. Each returns the rendered output and the exit code so
//! that the binary only has to route bytes.

use std::fmt::Write as _;

use orlicz_core::{
    classify_regime, gagliardo_modular, make_trial, seminorm, sigma, ConvergenceReport, Estimator, ModularEstimate, OrliczError,
    SampledFunction, TrialKind, YoungFunction,
};
use serde::Serialize;

use crate::examples::{run_manifest, Manifest, RowResult};
use crate::{exit_code_for, CliError, Format, Result, RunConfig};

/// Rendered output plus process exit code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub text: String,
    pub exit: i32,
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report types serialise");
    s.push('\n');
    s
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

#[derive(Serialize)]
struct ClassifyReport {
    young: String,
    n: u32,
    s: f64,
    admissible: bool,
    verdict: &'static str,
    regime: Option<String>,
    gates: Vec<ConvergenceReport>,
    message: Option<String>,
}

/// Regime, gate verdicts and admissibility.
pub fn classify(cfg: &RunConfig) -> Outcome {
    let a = &cfg.young;
    let mut report = ClassifyReport {
        young: a.describe(),
        n: cfg.params.n(),
        s: cfg.params.s(),
        admissible: true,
        verdict: "embedding",
        regime: None,
        gates: Vec::new(),
        message: None,
    };
    let exit = match classify_regime(a, &cfg.params) {
        Ok((regime, gates)) => {
            report.regime = Some(regime.to_string());
            report.gates = gates;
            0
        }
        Err(e) => {
            report.verdict = match &e {
                OrliczError::NoEmbedding { report: gate, .. } => {
                    report.gates.push((**gate).clone());
                    "no_embedding"
                }
                OrliczError::Inadmissible { .. } => {
                    report.admissible = false;
                    "inadmissible"
                }
                OrliczError::Inconclusive(_) => "inconclusive",
                _ => "error",
            };
            report.message = Some(e.to_string());
            exit_code_for(&e)
        }
    };
    let text = match cfg.format {
        Format::Json => json(&report),
        Format::Csv => {
            let mut s = String::from("verdict,regime,gate,gate_verdict,method,dual_verdict\n");
            let regime = report.regime.clone().unwrap_or_default();
            if report.gates.is_empty() {
                let _ = writeln!(s, "{},{regime},,,,", report.verdict);
            }
            for g in &report.gates {
                let dual = g.dual_verdict.map(|d| format!("{d:?}")).unwrap_or_default();
                let _ = writeln!(s, "{},{regime},{:?},{:?},{:?},{dual}", report.verdict, g.gate, g.verdict, g.method);
            }
            s
        }
    };
    Outcome { text, exit }
}

/// Grid `10^{k/ppd}` for `k ∈ [−d·ppd, d·ppd]`; the endpoints are exactly `10^{±d}`.
pub fn log_grid(decades: u32, per_decade: usize) -> Vec<f64> {
    let m = decades as i64 * per_decade as i64;
    (-m..=m)
        .map(|k| {
            if k % per_decade as i64 == 0 {
                10f64.powi((k / per_decade as i64) as i32)
            } else {
                10f64.powf(k as f64 / per_decade as f64)
            }
        })
        .collect()
}

#[derive(Serialize)]
struct SigmaRow {
    r: f64,
    theta: Option<f64>,
    rho: Option<f64>,
    sigma: f64,
}

#[derive(Serialize)]
struct SigmaTable {
    young: String,
    n: u32,
    s: f64,
    regime: String,
    rows: Vec<SigmaRow>,
}

/// `(r, ϑ, ϱ, σ)` on the configured grid.
pub fn sigma_table(cfg: &RunConfig) -> Result<Outcome> {
    let m = sigma(&cfg.young, &cfg.params)?;
    let regime = m.regime().map(|r| r.to_string()).unwrap_or_default();
    let (th, rh) = m.components();
    let rows: Vec<SigmaRow> = log_grid(cfg.grid_decades, cfg.points_per_decade)
        .into_iter()
        .map(|r| SigmaRow { r, theta: th.as_ref().map(|t| t.eval(r)), rho: rh.as_ref().map(|t| t.eval(r)), sigma: m.eval(r) })
        .collect();
    let text = match cfg.format {
        Format::Json => json(&SigmaTable { young: cfg.young.describe(), n: cfg.params.n(), s: cfg.params.s(), regime, rows }),
        Format::Csv => {
            let mut s = String::from("r,theta,rho,sigma,regime\n");
            for row in &rows {
                let _ = writeln!(s, "{},{},{},{},{regime}", row.r, opt(row.theta), opt(row.rho), row.sigma);
            }
            s
        }
    };
    Ok(Outcome { text, exit: 0 })
}

#[derive(Serialize)]
struct ConjugateRow {
    t: f64,
    a: f64,
    conjugate: f64,
    inverse: f64,
    conjugate_inverse: f64,
}

/// `A`, `Ã` and their inverses on a log grid.
pub fn conjugate(a: &YoungFunction, decades: u32, per_decade: usize, format: Format) -> Outcome {
    let b = a.conjugate();
    let rows: Vec<ConjugateRow> = log_grid(decades, per_decade)
        .into_iter()
        .map(|t| ConjugateRow { t, a: a.eval(t), conjugate: b.eval(t), inverse: a.inverse(t), conjugate_inverse: b.inverse(t) })
        .collect();
    let text = match format {
        Format::Json => json(&serde_json::json!({ "young": a.describe(), "conjugate": b.describe(), "rows": rows })),
        Format::Csv => {
            let mut s = String::from("t,a,conjugate,inverse,conjugate_inverse\n");
            for r in &rows {
                let _ = writeln!(s, "{},{},{},{},{}", r.t, r.a, r.conjugate, r.inverse, r.conjugate_inverse);
            }
            s
        }
    };
    Outcome { text, exit: 0 }
}

/// The example matrix; exit 0 iff every row passes.
pub fn verify_examples(tol_ratio: Option<f64>, format: Format) -> Result<Outcome> {
    let m = Manifest::bundled()?;
    let rows = run_manifest(&m, tol_ratio);
    Ok(render_rows(&rows, format))
}

pub fn render_rows(rows: &[RowResult], format: Format) -> Outcome {
    let passed = rows.iter().filter(|r| r.pass).count();
    let exit = if passed == rows.len() { 0 } else { 1 };
    let text = match format {
        Format::Json => json(&serde_json::json!({ "passed": passed, "total": rows.len(), "rows": rows })),
        Format::Csv => {
            let mut s = String::from("id,young,n,s,expect,end,spread,slope,observed,pass\n");
            for r in rows {
                let end = r.end.map(|e| format!("{e:?}").to_lowercase()).unwrap_or_default();
                let _ = writeln!(
                    s,
                    "{},\"{}\",{},{},{:?},{end},{},{},\"{}\",{}",
                    r.id,
                    r.young,
                    r.n,
                    r.s,
                    r.expect,
                    opt(r.spread),
                    opt(r.slope),
                    r.observed,
                    if r.pass { "PASS" } else { "FAIL" }
                );
            }
            s
        }
    };
    Outcome { text, exit }
}

/// Options of the seminorm subcommand beyond the shared config.
#[derive(Clone, Debug)]
pub struct SeminormRequest {
    pub trial: TrialKind,
    /// Profile CSV; the indicator of `(0, 1)` when absent.
    pub profile: Option<String>,
    pub scale: Option<f64>,
    pub monte_carlo: bool,
    pub samples: usize,
}

#[derive(Serialize)]
struct SeminormReport {
    young: String,
    n: u32,
    s: f64,
    trial: TrialKind,
    modular: ModularEstimate,
    seminorm: Option<f64>,
}

/// `J_{s,A}` and the seminorm of a trial function.
pub fn seminorm_cmd(cfg: &RunConfig, req: &SeminormRequest) -> Result<Outcome> {
    let estimator = if req.monte_carlo {
        let seed = cfg.seed.ok_or_else(|| CliError::config("seed", "the Monte Carlo estimator needs an explicit seed"))?;
        if req.samples < 2 {
            return Err(CliError::config("samples", "need at least 2 samples"));
        }
        Estimator::monte_carlo(seed, req.samples)
    } else {
        Estimator::RadialQuadrature
    };
    let profile = match (&req.profile, req.trial) {
        (_, TrialKind::ScalingFamily) => None,
        (Some(p), _) => Some(
            SampledFunction::from_csv_path(std::path::Path::new(p)).map_err(|e| CliError::config("profile", e.to_string()))?,
        ),
        (None, _) => Some(SampledFunction::indicator(0.0, 1.0)?),
    };
    let scale = match req.trial {
        TrialKind::ScalingFamily => Some(req.scale.unwrap_or(1.0)),
        _ => req.scale,
    };
    let trial = make_trial(req.trial, profile, &cfg.params, scale)?;
    let modular = gagliardo_modular(&cfg.young, &cfg.params, &trial, estimator)?;
    let norm = seminorm(&cfg.young, &cfg.params, &trial, estimator)?;
    let report = SeminormReport {
        young: cfg.young.describe(),
        n: cfg.params.n(),
        s: cfg.params.s(),
        trial: req.trial,
        modular,
        seminorm: norm.value.is_finite().then_some(norm.value),
    };
    let text = match cfg.format {
        Format::Json => json(&report),
        Format::Csv => format!(
            "young,n,s,trial,modular,stderr,method,seed,samples,seminorm\n\"{}\",{},{},{:?},{},{},{},{},{},{}\n",
            report.young,
            report.n,
            report.s,
            report.trial,
            report.modular.value,
            report.modular.stderr,
            report.modular.method,
            report.modular.seed.map(|s| s.to_string()).unwrap_or_default(),
            report.modular.samples.map(|s| s.to_string()).unwrap_or_default(),
            opt(report.seminorm)
        ),
    };
    Ok(Outcome { text, exit: 0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(young: &str, n: u32, s: f64) -> RunConfig {
        RunConfig::new(young, n, s, 4, 4, None, Some(1), Format::Json).unwrap()
    }

    #[test]
    fn classify_exit_codes() {
        assert_eq!(classify(&cfg("power:p=5", 2, 0.5)).exit, 0);
        assert!(classify(&cfg("power:p=5", 2, 0.5)).text.contains("Subcritical01"));
        let no = classify(&cfg("exp:gamma0=-1,gamma=1", 2, 1.5));
        assert_eq!(no.exit, 2, "{}", no.text);
        assert!(no.text.contains("origin_grad"));
        assert_eq!(classify(&cfg("power:p=2", 1, 2.5)).exit, 3);
    }

    #[test]
    fn grid_endpoints_are_exact() {
        let g = log_grid(3, 7);
        assert_eq!(g[0], 1e-3);
        assert_eq!(*g.last().unwrap(), 1e3);
        assert_eq!(g.len(), 43);
    }

    #[test]
    fn sigma_table_is_deterministic_and_monotone() {
        let mut c = cfg("power:p=5", 2, 0.5);
        c.format = Format::Csv;
        let t1 = sigma_table(&c).unwrap().text;
        let t2 = sigma_table(&c).unwrap().text;
        assert_eq!(t1, t2);
        let sig: Vec<f64> = t1.lines().skip(1).map(|l| l.split(',').nth(3).unwrap().parse().unwrap()).collect();
        assert!(sig.windows(2).all(|w| w[1] >= w[0] / 4.0));
    }
}
