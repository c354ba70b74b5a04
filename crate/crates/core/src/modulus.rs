//! Moduli of continuity `ϑ_s`, `ϱ_s` and the optimal `σ_s`, plus an
//! operational test for asymptotic equivalence `f ≈ g`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::conditions::{build_e, build_f, classify_gate, Band, BuiltFunction, ConvergenceReport, Gate, SmoothnessParams, Verdict};
use crate::error::{OrliczError, Result};
use crate::quad;
use crate::young::YoungFunction;

/// Which formula produced a modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    /// `0 < s < 1`: `σ = ϑ`.
    Subcritical01,
    /// `1 < s < n`, tail gradient integral diverges: `σ = ϑ + ϱ`.
    Mid1nCaseI,
    /// `1 < s < n`, tail gradient integral converges: `σ = r` on `(0,1)`, `ϑ + ϱ` beyond.
    Mid1nCaseII,
    /// `n < s < n + 1`, tail gradient integral diverges: `σ = ϱ`.
    SuperNCaseI,
    /// `n < s < n + 1`, tail gradient integral converges: `σ = r` on `(0,1)`, `ϱ` beyond.
    SuperNCaseII,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Regime::Subcritical01 => "Subcritical01",
            Regime::Mid1nCaseI => "Mid1n_Case_i",
            Regime::Mid1nCaseII => "Mid1n_Case_ii",
            Regime::SuperNCaseI => "Super_n_Case_i",
            Regime::SuperNCaseII => "Super_n_Case_ii",
        };
        f.write_str(s)
    }
}

#[derive(Clone)]
enum Kind {
    /// `1 / (r^{n-s} E^{-1}(r^{-n}))`.
    Theta { e: Arc<BuiltFunction>, n: f64, s: f64 },
    /// `1 / (r^{n-s} F^{-1}(r^{-n}))`.
    Rho { f: Arc<BuiltFunction>, n: f64, s: f64 },
    Sum(Box<ModulusOfContinuity>, Box<ModulusOfContinuity>),
    /// `r` on `(0,1)`, the inner modulus on `[1, ∞)`.
    LinearBelowOne(Box<ModulusOfContinuity>),
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

/// An evaluatable modulus `r ↦ ω(r)` with its construction.
#[derive(Clone)]
pub struct ModulusOfContinuity {
    kind: Kind,
    regime: Option<Regime>,
    gates: Vec<ConvergenceReport>,
}

impl fmt::Debug for ModulusOfContinuity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match &self.kind {
            Kind::Theta { .. } => "theta",
            Kind::Rho { .. } => "rho",
            Kind::Sum(..) => "theta+rho",
            Kind::LinearBelowOne(_) => "piecewise",
            Kind::Custom(_) => "custom",
        };
        f.debug_struct("ModulusOfContinuity").field("kind", &k).field("regime", &self.regime).finish()
    }
}

impl ModulusOfContinuity {
    /// Wrap an arbitrary positive function.
    pub fn from_fn<F: Fn(f64) -> f64 + Send + Sync + 'static>(f: F) -> Self {
        Self { kind: Kind::Custom(Arc::new(f)), regime: None, gates: Vec::new() }
    }

    /// `ln ω(e^x)`.
    pub fn ln_eval(&self, x: f64) -> f64 {
        match &self.kind {
            Kind::Theta { e, n, s } => -((n - s) * x + e.ln_inverse_at_ln(-n * x)),
            Kind::Rho { f, n, s } => -((n - s) * x + f.ln_inverse_at_ln(-n * x)),
            Kind::Sum(a, b) => quad::log_add_exp(a.ln_eval(x), b.ln_eval(x)),
            Kind::LinearBelowOne(inner) => {
                if x < 0.0 { x } else { inner.ln_eval(x) }
            }
            Kind::Custom(f) => f(x.exp()).ln(),
        }
    }

    pub fn eval(&self, r: f64) -> f64 {
        self.ln_eval(r.ln()).exp()
    }

    pub fn regime(&self) -> Option<Regime> {
        self.regime
    }

    /// Gate reports collected while constructing the modulus.
    pub fn gates(&self) -> &[ConvergenceReport] {
        &self.gates
    }

    /// `(ϑ part, ϱ part)` for moduli assembled from both.
    pub fn components(&self) -> (Option<ModulusOfContinuity>, Option<ModulusOfContinuity>) {
        let strip = |m: &ModulusOfContinuity| ModulusOfContinuity { kind: m.kind.clone(), regime: None, gates: Vec::new() };
        match &self.kind {
            Kind::Theta { .. } => (Some(strip(self)), None),
            Kind::Rho { .. } => (None, Some(strip(self))),
            Kind::Sum(a, b) => (Some((**a).clone()), Some((**b).clone())),
            Kind::LinearBelowOne(inner) => inner.components(),
            Kind::Custom(_) => (None, None),
        }
    }

    /// Ratio of the two one-sided values at the junction `r = 1` of a
    /// piecewise modulus.
    pub fn junction_ratio(&self) -> Option<f64> {
        match &self.kind {
            Kind::LinearBelowOne(inner) => Some(inner.eval(1.0)),
            _ => None,
        }
    }

    /// Samples `ω(10^{-k})`, `k = 1..12`.
    pub fn vanishing_check(&self) -> VanishingCheck {
        let vals: Vec<f64> = (1..=12).map(|k| self.eval(10f64.powi(-k))).collect();
        VanishingCheck {
            decreasing: vals.windows(2).all(|w| w[1] < w[0]),
            final_ratio: vals[11] / self.eval(1.0),
        }
    }

    /// Strictly decreasing along `r = 10^{-k}`, `k = 1..12`.
    ///
    /// Slowly vanishing moduli such as `r^{0.1}` or `(log(1+1/r))^{-1/4}`
    /// stay above `10^{-3} ω(1)` on this grid, so the final ratio is
    /// reported in [`vanishing_check`](Self::vanishing_check) but not required.
    pub fn vanishes_at_zero(&self) -> bool {
        self.vanishing_check().decreasing
    }

    /// `max_r ω(r) / min_{r' ≥ r} ω(r')` on a geometric grid over
    /// `[10^-8, 10^8]`; bounded for functions equivalent to a non-decreasing one.
    pub fn monotonicity_defect(&self) -> f64 {
        let vals: Vec<f64> = (0..=320).map(|k| self.ln_eval((-8.0 + 0.05 * k as f64) * std::f64::consts::LN_10)).collect();
        let mut suffix_min = f64::INFINITY;
        let mut worst: f64 = 1.0;
        for v in vals.iter().rev() {
            suffix_min = suffix_min.min(*v);
            worst = worst.max((v - suffix_min).exp());
        }
        worst
    }
}

/// Behaviour of `ω` along `r = 10^{-k}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VanishingCheck {
    pub decreasing: bool,
    /// `ω(10^{-12}) / ω(1)`.
    pub final_ratio: f64,
}

/// `ϑ_s(r) = 1/(r^{n-s} E^{-1}(r^{-n}))`.
pub fn theta(a: &YoungFunction, params: &SmoothnessParams) -> Result<ModulusOfContinuity> {
    let e = build_e(a, params)?;
    let gates = e.provenance.gates.clone();
    Ok(ModulusOfContinuity {
        kind: Kind::Theta { e: Arc::new(e), n: params.n() as f64, s: params.s() },
        regime: None,
        gates,
    })
}

/// `ϱ_s(r) = 1/(r^{n-s} F^{-1}(r^{-n}))`.
pub fn rho(a: &YoungFunction, params: &SmoothnessParams) -> Result<ModulusOfContinuity> {
    let f = build_f(a, params)?;
    let gates = f.provenance.gates.clone();
    Ok(ModulusOfContinuity {
        kind: Kind::Rho { f: Arc::new(f), n: params.n() as f64, s: params.s() },
        regime: None,
        gates,
    })
}

fn gate_or_fail(a: &YoungFunction, params: &SmoothnessParams, gate: Gate) -> Result<ConvergenceReport> {
    let r = classify_gate(a, params, gate)?;
    match r.verdict {
        Verdict::Converges => Ok(r),
        Verdict::Diverges => Err(OrliczError::NoEmbedding { gate, report: Box::new(r) }),
        Verdict::Inconclusive => Err(OrliczError::Inconclusive(format!("gate {gate} could not be decided"))),
    }
}

/// Regime and gate reports without building any modulus.
pub fn classify_regime(a: &YoungFunction, params: &SmoothnessParams) -> Result<(Regime, Vec<ConvergenceReport>)> {
    match params.band() {
        Band::Beyond => Err(OrliczError::Inadmissible { n: params.n(), s: params.s() }),
        Band::Below1 => Ok((Regime::Subcritical01, vec![gate_or_fail(a, params, Gate::TailSub)?])),
        Band::Between1AndN | Band::AboveN => {
            let mut gates = Vec::new();
            if params.band() == Band::Between1AndN {
                gates.push(gate_or_fail(a, params, Gate::TailSub)?);
            }
            gates.push(gate_or_fail(a, params, Gate::OriginGrad)?);
            let tail = classify_gate(a, params, Gate::TailGrad)?;
            let lipschitz = match tail.verdict {
                Verdict::Converges => true,
                Verdict::Diverges => false,
                Verdict::Inconclusive => {
                    return Err(OrliczError::Inconclusive(format!("gate {} could not be decided", Gate::TailGrad)))
                }
            };
            gates.push(tail);
            let regime = match (params.band(), lipschitz) {
                (Band::Between1AndN, false) => Regime::Mid1nCaseI,
                (Band::Between1AndN, true) => Regime::Mid1nCaseII,
                (_, false) => Regime::SuperNCaseI,
                (_, true) => Regime::SuperNCaseII,
            };
            Ok((regime, gates))
        }
    }
}

/// The optimal modulus of continuity `σ_s` for `A`.
pub fn sigma(a: &YoungFunction, params: &SmoothnessParams) -> Result<ModulusOfContinuity> {
    let (regime, gates) = classify_regime(a, params)?;
    let kind = match regime {
        Regime::Subcritical01 => theta(a, params)?.kind,
        Regime::Mid1nCaseI | Regime::Mid1nCaseII => {
            let sum = Kind::Sum(Box::new(theta(a, params)?), Box::new(rho(a, params)?));
            if regime == Regime::Mid1nCaseII {
                Kind::LinearBelowOne(Box::new(ModulusOfContinuity { kind: sum, regime: None, gates: Vec::new() }))
            } else {
                sum
            }
        }
        Regime::SuperNCaseI => rho(a, params)?.kind,
        Regime::SuperNCaseII => Kind::LinearBelowOne(Box::new(rho(a, params)?)),
    };
    Ok(ModulusOfContinuity { kind, regime: Some(regime), gates })
}

/// End of `(0, ∞)` at which an equivalence is tested.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum End {
    NearZero,
    NearInfinity,
}

/// Grid and thresholds of [`verify_equivalence`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceConfig {
    pub decades: f64,
    pub points_per_decade: usize,
    /// `log10` of the grid point farthest from the tested end.
    pub start_exponent: f64,
    /// Bound `C` on `max(f/g) / min(f/g)`.
    pub ratio_bound: f64,
    pub slope_tol: f64,
    /// Number of decades nearest the end used for the slope.
    pub slope_decades: f64,
}

impl Default for EquivalenceConfig {
    fn default() -> Self {
        Self { decades: 8.0, points_per_decade: 16, start_exponent: 0.0, ratio_bound: 10.0, slope_tol: 0.02, slope_decades: 3.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub end: End,
    pub r_first: f64,
    pub r_last: f64,
    pub ratio_min: f64,
    pub ratio_max: f64,
    /// `ratio_max / ratio_min`.
    pub spread: f64,
    /// Log-log slope of `f/g` over the decades nearest the end.
    pub slope: f64,
    pub verdict: bool,
}

/// Operational `f ≈ g` at one end: the ratio stays within a factor `C`
/// over the grid and flattens out towards the end.
pub fn verify_equivalence<F, G>(f: F, g: G, end: End, config: &EquivalenceConfig) -> Result<EquivalenceReport>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    let count = (config.decades * config.points_per_decade as f64).round() as usize;
    let dir = if end == End::NearZero { -1.0 } else { 1.0 };
    let mut lr = Vec::with_capacity(count + 1);
    let mut lq = Vec::with_capacity(count + 1);
    for i in 0..=count {
        let e = config.start_exponent + dir * i as f64 / config.points_per_decade as f64;
        let r = 10f64.powf(e);
        let (fv, gv) = (f(r), g(r));
        if !(fv > 0.0 && fv.is_finite()) || !(gv > 0.0 && gv.is_finite()) {
            return Err(OrliczError::Evaluation { at: r, detail: format!("f = {fv}, g = {gv}; both must be positive and finite") });
        }
        lr.push(r.ln());
        lq.push(fv.ln() - gv.ln());
    }
    let ratio_min = lq.iter().cloned().fold(f64::INFINITY, f64::min).exp();
    let ratio_max = lq.iter().cloned().fold(f64::NEG_INFINITY, f64::max).exp();
    let tail = ((config.slope_decades * config.points_per_decade as f64).round() as usize + 1).min(lr.len());
    let slope = quad::ls_slope(&lr[lr.len() - tail..], &lq[lq.len() - tail..]);
    let spread = ratio_max / ratio_min;
    Ok(EquivalenceReport {
        end,
        r_first: lr[0].exp(),
        r_last: lr[lr.len() - 1].exp(),
        ratio_min,
        ratio_max,
        spread,
        slope,
        verdict: spread <= config.ratio_bound && slope.abs() < config.slope_tol,
    })
}

/// `r^power · L^log_power · (ln L)^loglog_power` with `L = ln(1 + 1/r)` near
/// zero and `L = ln(1 + r)` near infinity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Asymptote {
    #[serde(default)]
    pub power: f64,
    #[serde(default)]
    pub log_power: f64,
    #[serde(default)]
    pub loglog_power: f64,
}

impl Asymptote {
    pub fn eval(&self, r: f64, end: End) -> f64 {
        let l = match end {
            End::NearZero => (1.0 / r).ln_1p(),
            End::NearInfinity => r.ln_1p(),
        };
        let mut v = r.powf(self.power);
        if self.log_power != 0.0 {
            v *= l.powf(self.log_power);
        }
        if self.loglog_power != 0.0 {
            v *= l.ln().powf(self.loglog_power);
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_equivalent() {
        let r = verify_equivalence(|r| r, |r| r, End::NearZero, &EquivalenceConfig::default()).unwrap();
        assert!(r.verdict);
        assert_eq!(r.ratio_min, 1.0);
        assert_eq!(r.ratio_max, 1.0);
    }

    #[test]
    fn log_factor_breaks_equivalence() {
        let r = verify_equivalence(|r| r, |r| r * (1.0 / r).ln_1p(), End::NearZero, &EquivalenceConfig::default()).unwrap();
        assert!(!r.verdict);
    }

    #[test]
    fn nonpositive_values_are_reported() {
        let e = verify_equivalence(|r| r - 0.5, |r| r, End::NearZero, &EquivalenceConfig::default()).unwrap_err();
        assert!(matches!(e, OrliczError::Evaluation { .. }));
    }

    #[test]
    fn classical_holder_exponent() {
        let params = SmoothnessParams::new(2, 0.5).unwrap();
        let s = sigma(&YoungFunction::power(5.0).unwrap(), &params).unwrap();
        assert_eq!(s.regime(), Some(Regime::Subcritical01));
        let rep = verify_equivalence(|r| s.eval(r), |r| r.powf(0.1), End::NearZero, &EquivalenceConfig::default()).unwrap();
        assert!(rep.verdict, "{rep:?}");
        assert!(s.vanishes_at_zero());
        assert!((s.vanishing_check().final_ratio - 10f64.powf(-1.2)).abs() < 1e-6);
        assert!(s.monotonicity_defect() <= 4.0);
    }

    #[test]
    fn lipschitz_regime_is_linear_near_zero() {
        let params = SmoothnessParams::new(3, 1.5).unwrap();
        let s = sigma(&YoungFunction::power_log(2.0, 0.0, 7.0, 0.0).unwrap(), &params).unwrap();
        assert_eq!(s.regime(), Some(Regime::Mid1nCaseII));
        assert_eq!(s.eval(0.25), 0.25);
        assert!(s.junction_ratio().unwrap() > 0.0);
    }

    #[test]
    fn admissibility_and_gates() {
        let p = SmoothnessParams::new(1, 2.5).unwrap();
        assert!(matches!(sigma(&YoungFunction::power(2.0).unwrap(), &p), Err(OrliczError::Inadmissible { .. })));
        let p = SmoothnessParams::new(2, 0.5).unwrap();
        assert!(matches!(sigma(&YoungFunction::power(3.0).unwrap(), &p), Err(OrliczError::NoEmbedding { .. })));
    }

    #[test]
    fn theta_matches_conjugate_form() {
        let params = SmoothnessParams::new(2, 0.5).unwrap();
        let a = YoungFunction::power_log(2.0, 0.0, 5.0, 1.0).unwrap();
        let th = theta(&a, &params).unwrap();
        let e = build_e(&a, &params).unwrap();
        let b = e.conjugate();
        let rep = verify_equivalence(
            |r| th.eval(r),
            |r| r.powf(0.5) * b.inverse(r.powi(-2)),
            End::NearZero,
            &EquivalenceConfig { start_exponent: 6.0, decades: 12.0, ..Default::default() },
        )
        .unwrap();
        assert!(rep.spread <= 2.0, "{rep:?}");
    }
}
