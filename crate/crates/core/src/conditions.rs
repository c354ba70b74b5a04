//! Gate integrals and the auxiliary Young functions `E`, `F`, `Â`, `I`.
//!
//! Gates are improper integrals of `(t/A(t))^σ` at one end of `(0, ∞)`.
//! For functions with known tail shapes the verdict follows from exponent
//! arithmetic; otherwise per-decade increments are computed and classified.
//! Each verdict is cross-checked through the conjugate criterion
//! `∫ Ã(t)/t^{1+q} dt` with `q = σ + 1`.

use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{OrliczError, Result};
use crate::quad::{self, log_add_exp, ln_segment};
use crate::table::{self, TabulatedMonotone, TailModel};
use crate::young::{Tail, YoungFunction};

/// Dimension `n` and smoothness `s` of a fractional space.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmoothnessParams {
    n: u32,
    s: f64,
}

/// Position of `s` relative to `1` and `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Band {
    /// `0 < s < 1`.
    Below1,
    /// `1 < s < n`.
    Between1AndN,
    /// `n < s < n + 1`.
    AboveN,
    /// `s > n + 1`: no embedding into uniformly continuous functions.
    Beyond,
}

/// Distance from an integer below which `s` is rejected.
pub const INTEGER_GUARD: f64 = 1e-9;

impl SmoothnessParams {
    pub fn new(n: u32, s: f64) -> Result<Self> {
        if n == 0 {
            return Err(OrliczError::Domain("dimension n must be positive".into()));
        }
        if !(s > 0.0) || !s.is_finite() {
            return Err(OrliczError::Domain(format!("smoothness s must be positive and finite, got {s}")));
        }
        if (s - s.round()).abs() < INTEGER_GUARD {
            return Err(OrliczError::Domain(format!("smoothness s = {s} is (within 1e-9 of) an integer")));
        }
        Ok(Self { n, s })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    /// `[s]`.
    pub fn int_part(&self) -> u32 {
        self.s.floor() as u32
    }

    /// `{s} = s - [s]`.
    pub fn frac_part(&self) -> f64 {
        self.s - self.s.floor()
    }

    /// Lebesgue measure of the unit ball in `R^n`.
    pub fn omega_n(&self) -> f64 {
        quad::unit_ball_volume(self.n)
    }

    pub fn band(&self) -> Band {
        let n = self.n as f64;
        if self.s < 1.0 {
            Band::Below1
        } else if self.s < n {
            Band::Between1AndN
        } else if self.s < n + 1.0 {
            Band::AboveN
        } else {
            Band::Beyond
        }
    }

    /// `n / (n - s)`.
    pub fn sub_exponent(&self) -> f64 {
        let n = self.n as f64;
        n / (n - self.s)
    }

    /// `n / (n - (s - 1))`.
    pub fn grad_exponent(&self) -> f64 {
        let n = self.n as f64;
        n / (n - self.s + 1.0)
    }
}

/// The four gate integrals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Gate {
    /// `∫^∞ (t/A)^{s/(n-s)} dt < ∞`.
    TailSub,
    /// `∫_0 (t/A)^{(s-1)/(n-s+1)} dt < ∞`.
    OriginGrad,
    /// `∫_0 (t/A)^{s/(n-s)} dt < ∞`.
    OriginSub,
    /// `∫^∞ (t/A)^{(s-1)/(n-s+1)} dt < ∞`.
    TailGrad,
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Gate::TailSub => "tail_sub: ∫^∞ (t/A(t))^(s/(n-s)) dt",
            Gate::OriginGrad => "origin_grad: ∫_0 (t/A(t))^((s-1)/(n-s+1)) dt",
            Gate::OriginSub => "origin_sub: ∫_0 (t/A(t))^(s/(n-s)) dt",
            Gate::TailGrad => "tail_grad: ∫^∞ (t/A(t))^((s-1)/(n-s+1)) dt",
        };
        f.write_str(s)
    }
}

impl Gate {
    pub const ALL: [Gate; 4] = [Gate::TailSub, Gate::OriginGrad, Gate::OriginSub, Gate::TailGrad];

    pub fn at_infinity(&self) -> bool {
        matches!(self, Gate::TailSub | Gate::TailGrad)
    }

    /// Exponent `σ` of `(t/A)^σ`.
    pub fn exponent(&self, p: &SmoothnessParams) -> f64 {
        let n = p.n as f64;
        match self {
            Gate::TailSub | Gate::OriginSub => p.s / (n - p.s),
            Gate::OriginGrad | Gate::TailGrad => (p.s - 1.0) / (n - p.s + 1.0),
        }
    }

    pub fn compatible(&self, p: &SmoothnessParams) -> bool {
        let n = p.n as f64;
        match self {
            Gate::TailSub | Gate::OriginSub => p.s < n,
            Gate::OriginGrad | Gate::TailGrad => p.s > 1.0 && p.s < n + 1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Converges,
    Diverges,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    NumericTailFit,
}

/// Integrand `t^power |ln t|^log_power` near the relevant end.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Shape {
    pub power: f64,
    pub log_power: f64,
}

/// Outcome of one gate classification.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub gate: Gate,
    pub verdict: Verdict,
    pub method: Method,
    /// Closed-form integrand shape, when the tail of `A` is known.
    pub shape: Option<Shape>,
    /// Local exponents `log10(increment_{k+1}/increment_k)` per decade.
    pub exponent_trace: Vec<f64>,
    pub dual_verdict: Option<Verdict>,
    pub dual_method: Option<Method>,
    pub dual_shape: Option<Shape>,
}

impl ConvergenceReport {
    pub fn converges(&self) -> bool {
        self.verdict == Verdict::Converges
    }

    /// Both criteria were evaluated and agree.
    pub fn dual_agrees(&self) -> bool {
        self.dual_verdict == Some(self.verdict)
    }
}

const EXP_TOL: f64 = 1e-10;

/// Convergence of `∫ t^e |ln t|^b dt` near `∞` or near `0`.
fn shape_verdict(sh: Shape, at_infinity: bool) -> Verdict {
    let (e, b) = (sh.power, sh.log_power);
    let critical = (e + 1.0).abs() <= EXP_TOL;
    let converges = if critical {
        b < -1.0 - EXP_TOL
    } else if at_infinity {
        e < -1.0
    } else {
        e > -1.0
    };
    if critical && (b + 1.0).abs() <= EXP_TOL {
        return Verdict::Diverges;
    }
    if converges { Verdict::Converges } else { Verdict::Diverges }
}

fn primal_closed(tail: Tail, sigma: f64, at_infinity: bool) -> (Verdict, Option<Shape>) {
    match tail {
        Tail::PowerLog { exponent, log_power } => {
            let sh = Shape { power: (1.0 - exponent) * sigma, log_power: -log_power * sigma };
            (shape_verdict(sh, at_infinity), Some(sh))
        }
        // t/A vanishes identically or faster than every power near ∞.
        Tail::Infinite | Tail::Super if at_infinity => (Verdict::Converges, None),
        // t/A is infinite or blows up faster than every power near 0.
        Tail::Zero | Tail::Super if !at_infinity => (Verdict::Diverges, None),
        _ => (Verdict::Inconclusive, None),
    }
}

fn dual_closed(tail: Tail, q: f64, at_infinity: bool) -> (Verdict, Option<Shape>) {
    match tail {
        Tail::PowerLog { exponent, log_power } => {
            let sh = Shape { power: exponent - 1.0 - q, log_power };
            (shape_verdict(sh, at_infinity), Some(sh))
        }
        Tail::Zero if !at_infinity => (Verdict::Converges, None),
        Tail::Super if !at_infinity => (Verdict::Converges, None),
        Tail::Infinite | Tail::Super if at_infinity => (Verdict::Diverges, None),
        _ => (Verdict::Inconclusive, None),
    }
}

const DECADES: usize = 40;

/// Per-decade increments of `∫ exp(g(x)) dx` moving towards the chosen end.
fn decade_increments<G: Fn(f64) -> f64>(g: G, at_infinity: bool) -> Vec<f64> {
    let l10 = std::f64::consts::LN_10;
    (0..DECADES)
        .map(|k| {
            let (a, b) = if at_infinity {
                (k as f64 * l10, (k + 1) as f64 * l10)
            } else {
                (-((k + 1) as f64) * l10, -(k as f64) * l10)
            };
            let mut infinite = false;
            let q = quad::tanh_sinh(
                |x| {
                    let v = g(x);
                    if v == f64::INFINITY {
                        infinite = true;
                    }
                    v.exp()
                },
                a,
                b,
                1e-8,
            );
            if infinite { f64::INFINITY } else { q.value }
        })
        .collect()
}

/// Classify increments: geometric decay converges, non-decay diverges.
fn increments_verdict(inc: &[f64]) -> (Verdict, Vec<f64>) {
    if inc.iter().any(|v| *v == f64::INFINITY) {
        return (Verdict::Diverges, Vec::new());
    }
    let trace: Vec<f64> = inc.windows(2).map(|w| (w[1] / w[0]).log10()).collect();
    let n = inc.len();
    let tail = &inc[n - 4..];
    if tail.iter().all(|v| *v == 0.0) {
        return (Verdict::Converges, trace);
    }
    let ratios: Vec<f64> = tail.windows(2).map(|w| w[1] / w[0]).collect();
    let verdict = if ratios.iter().all(|r| *r < 0.9) {
        Verdict::Converges
    } else if ratios.iter().all(|r| *r >= 0.98) {
        Verdict::Diverges
    } else {
        Verdict::Inconclusive
    };
    (verdict, trace)
}

/// Decide a gate integral for `A`.
pub fn classify_gate(a: &YoungFunction, params: &SmoothnessParams, gate: Gate) -> Result<ConvergenceReport> {
    if !gate.compatible(params) {
        return Err(OrliczError::Domain(format!(
            "gate {gate} is not defined for n = {}, s = {}",
            params.n, params.s
        )));
    }
    let sigma = gate.exponent(params);
    let q = sigma + 1.0;
    let at_inf = gate.at_infinity();

    let primal_tail = if at_inf { a.tail_at_infinity() } else { a.tail_at_zero() };
    let (verdict, method, shape, trace) = match primal_tail {
        Some(t) if a.is_symbolic() => {
            let (v, sh) = primal_closed(t, sigma, at_inf);
            (v, Method::ClosedForm, sh, Vec::new())
        }
        _ => {
            let inc = decade_increments(|x| sigma * (x - a.ln_at_ln(x)) + x, at_inf);
            let (v, tr) = increments_verdict(&inc);
            (v, Method::NumericTailFit, None, tr)
        }
    };

    let dual_tail = if at_inf { a.conjugate_tail_at_infinity() } else { a.conjugate_tail_at_zero() };
    let (dual_verdict, dual_method, dual_shape) = match dual_tail {
        Some(t) if a.is_symbolic() => {
            let (v, sh) = dual_closed(t, q, at_inf);
            (v, Method::ClosedForm, sh)
        }
        _ => {
            let c = a.conjugate();
            let inc = decade_increments(|x| c.ln_at_ln(x) - q * x, at_inf);
            (increments_verdict(&inc).0, Method::NumericTailFit, None)
        }
    };

    Ok(ConvergenceReport {
        gate,
        verdict,
        method,
        shape,
        exponent_trace: trace,
        dual_verdict: Some(dual_verdict),
        dual_method: Some(dual_method),
        dual_shape,
    })
}

/// Source and gate evidence of a constructed function.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Provenance {
    pub construction: String,
    pub source: String,
    pub params: SmoothnessParams,
    pub gates: Vec<ConvergenceReport>,
}

/// A Young function built from another one, with its provenance.
#[derive(Clone, Debug)]
pub struct BuiltFunction {
    pub function: YoungFunction,
    pub provenance: Provenance,
}

impl Deref for BuiltFunction {
    type Target = YoungFunction;
    fn deref(&self) -> &YoungFunction {
        &self.function
    }
}

impl BuiltFunction {
    pub fn table(&self) -> &TabulatedMonotone {
        self.function.as_table().expect("built functions are tabulated")
    }

    /// The table as CSV `(t, value)` rows plus the tail models as JSON.
    pub fn export(&self) -> (String, String) {
        let t = self.table();
        let mut csv = String::from("t,value\n");
        for (x, v) in t.points() {
            csv.push_str(&format!("{x:e},{v:e}\n"));
        }
        let tails = serde_json::json!({
            "lower": t.lower_tail(),
            "upper": t.upper_tail(),
            "provenance": self.provenance,
        });
        (csv, serde_json::to_string_pretty(&tails).unwrap_or_default())
    }
}

/// Grid for the conjugate used by the integral constructions (`ln t`).
const CONJ_SPAN: f64 = 250.0;
const CONJ_PER_DECADE: f64 = 24.0;

fn conjugate_table(a: &YoungFunction) -> Result<TabulatedMonotone> {
    a.conjugate().to_table(-CONJ_SPAN, CONJ_SPAN, CONJ_PER_DECADE / std::f64::consts::LN_10)
}

fn require(a: &YoungFunction, params: &SmoothnessParams, gate: Gate) -> Result<ConvergenceReport> {
    let report = classify_gate(a, params, gate)?;
    if report.verdict != Verdict::Converges {
        return Err(OrliczError::NoEmbedding { gate, report: Box::new(report) });
    }
    Ok(report)
}

/// `ln ∫_{x}^{∞} exp(c + k u + β ln|u| - μ u) du` for a tail model from `x`.
fn model_integral(model: TailModel, x: f64, mu: f64, upward: bool) -> f64 {
    match model {
        TailModel::Zero => f64::NEG_INFINITY,
        TailModel::Infinite => f64::INFINITY,
        TailModel::PowerLog { ln_coef, exponent, log_power } => {
            let lnabs = |u: f64| u.abs().max(1.0).ln();
            // Direction-adjusted power: the integrand behaves like e^{rate·d}.
            let rate = if upward { exponent - mu } else { mu - exponent };
            let lp = log_power;
            let diverges = rate > EXP_TOL || (rate.abs() <= EXP_TOL && lp >= -1.0 - EXP_TOL);
            if diverges {
                return f64::INFINITY;
            }
            let w0 = ln_coef + (exponent - mu) * x + lp * lnabs(x);
            let g = |d: f64| {
                let u = if upward { x + d } else { x - d };
                (ln_coef + (exponent - mu) * u + lp * lnabs(u) - w0).exp()
            };
            let q = quad::integrate_to_infinity(g, 0.0, 1e-10);
            w0 + q.value.ln()
        }
    }
}

/// Shape of `t^μ ∫_t^∞ τ^{k-μ-1}|ln τ|^β dτ` (upper) or
/// `t^{-μ'}∫_0^t ...` (lower) for a tail of the integrand `τ^k |ln τ|^β`;
/// `None` for the double-logarithmic borderline.
fn integral_tail(tail: TailModel, mu: f64, upper_integral: bool, converged: bool) -> Option<TailModel> {
    match tail {
        TailModel::PowerLog { exponent, log_power, .. } => {
            if converged {
                return Some(TailModel::PowerLog { ln_coef: 0.0, exponent: mu, log_power: 0.0 });
            }
            let gap = if upper_integral { mu - exponent } else { exponent - mu };
            if gap > EXP_TOL {
                Some(TailModel::PowerLog { ln_coef: 0.0, exponent, log_power })
            } else if gap.abs() <= EXP_TOL && (log_power + 1.0).abs() > EXP_TOL {
                Some(TailModel::PowerLog { ln_coef: 0.0, exponent: mu, log_power: log_power + 1.0 })
            } else {
                None
            }
        }
        other => Some(other),
    }
}

fn fitted_or(model: Option<TailModel>, xs: &[f64], ys: &[f64], lower: bool) -> TailModel {
    if let Some(m) = model {
        return m;
    }
    let take = 2 * CONJ_PER_DECADE as usize + 1;
    let k = xs.len();
    let (sx, sy) = if lower { (&xs[..take], &ys[..take]) } else { (&xs[k - take..], &ys[k - take..]) };
    table::fit_power_log(sx, sy)
}

/// `(ln t_i, ln ∫_{t_i}^∞ Ã(τ) τ^{-1-μ} dτ)` on the conjugate grid.
fn upper_cumulative(ct: &TabulatedMonotone, mu: f64) -> (Vec<f64>, Vec<f64>, f64) {
    let xs = ct.ln_grid().to_vec();
    let w: Vec<f64> = xs.iter().zip(ct.ln_values()).map(|(x, v)| v - mu * x).collect();
    let n = xs.len();
    let tail = model_integral(ct.upper_tail(), xs[n - 1], mu, true);
    let mut acc = vec![0.0; n];
    acc[n - 1] = tail;
    for i in (0..n - 1).rev() {
        acc[i] = log_add_exp(acc[i + 1], ln_segment(xs[i + 1] - xs[i], w[i], w[i + 1]));
    }
    let lower_rest = model_integral(ct.lower_tail(), xs[0], mu, false);
    (xs, acc, lower_rest)
}

/// `(ln t_i, ln ∫_0^{t_i} Ã(τ) τ^{-1-μ} dτ)` on the conjugate grid.
fn lower_cumulative(ct: &TabulatedMonotone, mu: f64) -> (Vec<f64>, Vec<f64>) {
    let xs = ct.ln_grid().to_vec();
    let w: Vec<f64> = xs.iter().zip(ct.ln_values()).map(|(x, v)| v - mu * x).collect();
    let n = xs.len();
    let mut acc = vec![0.0; n];
    acc[0] = model_integral(ct.lower_tail(), xs[0], mu, false);
    for i in 1..n {
        acc[i] = log_add_exp(acc[i - 1], ln_segment(xs[i] - xs[i - 1], w[i - 1], w[i]));
    }
    (xs, acc)
}

fn finish(
    construction: &str,
    a: &YoungFunction,
    params: &SmoothnessParams,
    gates: Vec<ConvergenceReport>,
    xs: Vec<f64>,
    ys: Vec<f64>,
    lower: Option<TailModel>,
    upper: Option<TailModel>,
) -> Result<BuiltFunction> {
    let finite: Vec<usize> = (0..xs.len()).filter(|&i| ys[i].is_finite()).collect();
    if finite.len() < 2 * CONJ_PER_DECADE as usize + 1 {
        return Err(OrliczError::Inconclusive(format!("{construction}: too few finite samples")));
    }
    let lower = fitted_or(lower, &xs[finite[0]..], &ys[finite[0]..], true);
    let last = *finite.last().unwrap();
    let upper = fitted_or(upper, &xs[..=last], &ys[..=last], false);
    let table = TabulatedMonotone::from_log_samples(xs, ys, lower, upper)?;
    let label = format!("{construction}[{}; n={}, s={}]", a.describe(), params.n, params.s);
    Ok(BuiltFunction {
        function: YoungFunction::tabulated(table).with_label(label),
        provenance: Provenance {
            construction: construction.into(),
            source: a.describe(),
            params: *params,
            gates,
        },
    })
}

/// `E(t) = t^{n/(n-s)} ∫_t^∞ Ã(τ) τ^{-1-n/(n-s)} dτ`.
pub fn build_e(a: &YoungFunction, params: &SmoothnessParams) -> Result<BuiltFunction> {
    if params.s >= params.n as f64 {
        return Err(OrliczError::Domain("E requires s < n".into()));
    }
    let report = require(a, params, Gate::TailSub)?;
    let q = params.sub_exponent();
    let ct = conjugate_table(a)?;
    let (xs, acc, lower_rest) = upper_cumulative(&ct, q);
    if acc.iter().any(|v| *v == f64::INFINITY) {
        return Err(OrliczError::Precondition("the tail integral defining E diverges".into()));
    }
    let ys: Vec<f64> = xs.iter().zip(&acc).map(|(x, v)| q * x + v).collect();
    let upper = integral_tail(ct.upper_tail(), q, true, false);
    let lower = integral_tail(ct.lower_tail(), q, true, lower_rest.is_finite());
    finish("E", a, params, vec![report], xs, ys, lower, upper)
}

/// `F(t) = t^{n/(n-s+1)} ∫_0^t Ã(τ) τ^{-1-n/(n-s+1)} dτ`.
pub fn build_f(a: &YoungFunction, params: &SmoothnessParams) -> Result<BuiltFunction> {
    let n = params.n as f64;
    if !(params.s > 1.0 && params.s < n + 1.0) {
        return Err(OrliczError::Domain("F requires 1 < s < n + 1".into()));
    }
    let report = require(a, params, Gate::OriginGrad)?;
    let q = params.grad_exponent();
    let ct = conjugate_table(a)?;
    let (xs, acc) = lower_cumulative(&ct, q);
    if acc[0] == f64::INFINITY {
        return Err(OrliczError::Precondition("the origin integral defining F diverges".into()));
    }
    let ys: Vec<f64> = xs.iter().zip(&acc).map(|(x, v)| q * x + v).collect();
    let upper_total = model_integral(ct.upper_tail(), *xs.last().unwrap(), q, true);
    let upper = integral_tail(ct.upper_tail(), q, false, upper_total.is_finite() && ct.upper_tail() != TailModel::Infinite);
    let lower = integral_tail(ct.lower_tail(), q, false, false);
    finish("F", a, params, vec![report], xs, ys, lower, upper)
}

/// `I(t) = t^{n/(n-s)} ∫_0^t Ã(τ) τ^{n/(s-n)-1} dτ` for `n < s < n + 1`.
pub fn build_i(a: &YoungFunction, params: &SmoothnessParams) -> Result<BuiltFunction> {
    let n = params.n as f64;
    if !(params.s > n && params.s < n + 1.0) {
        return Err(OrliczError::Domain("I requires n < s < n + 1".into()));
    }
    let m = n / (params.s - n);
    let ct = conjugate_table(a)?;
    let (xs, acc) = lower_cumulative(&ct, -m);
    if acc[0] == f64::INFINITY {
        return Err(OrliczError::Precondition("the origin integral defining I diverges".into()));
    }
    let ys: Vec<f64> = xs.iter().zip(&acc).map(|(x, v)| v - m * x).collect();
    let shape = |t: TailModel| match t {
        TailModel::PowerLog { exponent, log_power, .. } => {
            Some(TailModel::PowerLog { ln_coef: 0.0, exponent, log_power })
        }
        other => Some(other),
    };
    finish("I", a, params, Vec::new(), xs, ys, shape(ct.lower_tail()), shape(ct.upper_tail()))
}

/// `Â` from the nested integral for its inverse density.
pub fn build_hat_a(a: &YoungFunction, params: &SmoothnessParams) -> Result<BuiltFunction> {
    let n = params.n as f64;
    let s = params.s;
    if s >= n {
        return Err(OrliczError::Domain("Â requires s < n".into()));
    }
    let report = require(a, params, Gate::OriginSub)?;
    let sigma = s / (n - s);
    let per_unit = 32.0 / std::f64::consts::LN_10;
    let span = 120.0;
    let count = (2.0 * span * per_unit).ceil() as usize;
    let xs: Vec<f64> = (0..=count).map(|i| -span + 2.0 * span * i as f64 / count as f64).collect();
    let la: Vec<f64> = xs.iter().map(|&x| a.ln_density_at_ln(x)).collect();
    let keep: Vec<usize> = (0..xs.len()).filter(|&i| la[i].is_finite()).collect();
    if keep.len() < 3 {
        return Err(OrliczError::Inconclusive("density of A is not finite and positive on the grid".into()));
    }
    let xs: Vec<f64> = keep.iter().map(|&i| xs[i]).collect();
    let la: Vec<f64> = keep.iter().map(|&i| la[i]).collect();
    let m = xs.len();

    // Inner integral G(t) = ∫_0^t a^{-σ}.
    let g: Vec<f64> = xs.iter().zip(&la).map(|(x, l)| x - sigma * l).collect();
    let k0 = (g[1] - g[0]) / (xs[1] - xs[0]);
    if !(k0 > 0.0) {
        return Err(OrliczError::Inconclusive("inner integral for Â diverges near 0".into()));
    }
    let mut lg = vec![0.0; m];
    lg[0] = g[0] - k0.ln();
    for i in 1..m {
        lg[i] = log_add_exp(lg[i - 1], ln_segment(xs[i] - xs[i - 1], g[i - 1], g[i]));
    }

    // Outer integral H(x) = ∫_x^∞ G^{-n/s} a^{-n/(n-s)} dt.
    let h: Vec<f64> = (0..m).map(|i| xs[i] - n / s * lg[i] - n / (n - s) * la[i]).collect();
    let k1 = (h[m - 1] - h[m - 2]) / (xs[m - 1] - xs[m - 2]);
    if !(k1 < 0.0) {
        return Err(OrliczError::Inconclusive("outer integral for Â diverges at infinity".into()));
    }
    let mut lh = vec![0.0; m];
    lh[m - 1] = h[m - 1] - (-k1).ln();
    for i in (0..m - 1).rev() {
        lh[i] = log_add_exp(lh[i + 1], ln_segment(xs[i + 1] - xs[i], h[i], h[i + 1]));
    }

    // Curve (â^{-1}(r), r) with r = a(t).
    let mut pts: Vec<(f64, f64)> = Vec::with_capacity(m);
    for i in 0..m {
        let lx = s / (s - n) * lh[i];
        if let Some(&(px, pr)) = pts.last() {
            if !(lx > px) || !(la[i] > pr) {
                continue;
            }
        }
        pts.push((lx, la[i]));
    }
    if pts.len() < 3 {
        return Err(OrliczError::Inconclusive("inverse density of Â is degenerate".into()));
    }
    let kappa = ((pts[1].1 - pts[0].1) / (pts[1].0 - pts[0].0)).max(0.0);
    let mut lhat = Vec::with_capacity(pts.len());
    lhat.push(pts[0].1 + pts[0].0 - (kappa + 1.0).ln());
    for j in 1..pts.len() {
        let (u0, r0) = pts[j - 1];
        let (u1, r1) = pts[j];
        let prev = lhat[j - 1];
        lhat.push(log_add_exp(prev, ln_segment(u1 - u0, r0 + u0, r1 + u1)));
    }
    let lx: Vec<f64> = pts.iter().map(|p| p.0).collect();
    finish("Â", a, params, vec![report], lx, lhat, None, None)
}

/// Value of the bounded quantity `E(t) t^{-n/(n-s)}` at the largest grid point,
/// the quantity that must stay bounded as `t → ∞`.
pub fn e_growth_ratio(e: &BuiltFunction, params: &SmoothnessParams, t: f64) -> f64 {
    (e.ln_at_ln(t.ln()) - params.sub_exponent() * t.ln()).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn params_validation() {
        assert!(SmoothnessParams::new(2, 1.0).is_err());
        assert!(SmoothnessParams::new(2, 1.0 + 1e-12).is_err());
        assert!(SmoothnessParams::new(0, 0.5).is_err());
        let p = SmoothnessParams::new(3, 2.25).unwrap();
        assert_eq!(p.int_part(), 2);
        assert!((p.frac_part() - 0.25).abs() < 1e-15);
        assert!(rel(p.omega_n(), 4.0 / 3.0 * std::f64::consts::PI) < 1e-14);
    }

    #[test]
    fn power_tail_sub() {
        let p = SmoothnessParams::new(2, 0.5).unwrap();
        let r = classify_gate(&YoungFunction::power(5.0).unwrap(), &p, Gate::TailSub).unwrap();
        assert_eq!(r.verdict, Verdict::Converges);
        assert!(r.dual_agrees());
        let r = classify_gate(&YoungFunction::power(4.0).unwrap(), &p, Gate::TailSub).unwrap();
        assert_eq!(r.verdict, Verdict::Diverges);
    }

    #[test]
    fn critical_log_tail_diverges() {
        let p = SmoothnessParams::new(2, 0.5).unwrap();
        let a = YoungFunction::power_log(2.0, 0.0, 4.0, 3.0).unwrap();
        let r = classify_gate(&a, &p, Gate::TailSub).unwrap();
        assert_eq!(r.verdict, Verdict::Diverges);
        assert!(r.dual_agrees());
    }

    #[test]
    fn exponential_origin_grad_diverges() {
        let p = SmoothnessParams::new(2, 1.5).unwrap();
        for g0 in [-0.5, -1.0, -3.0] {
            let a = YoungFunction::exponential(g0, 1.0).unwrap();
            let r = classify_gate(&a, &p, Gate::OriginGrad).unwrap();
            assert_eq!(r.verdict, Verdict::Diverges);
            assert!(r.dual_agrees());
        }
    }

    #[test]
    fn incompatible_gate_is_domain_error() {
        let p = SmoothnessParams::new(2, 0.5).unwrap();
        assert!(matches!(
            classify_gate(&YoungFunction::power(2.0).unwrap(), &p, Gate::OriginGrad),
            Err(OrliczError::Domain(_))
        ));
    }

    #[test]
    fn numeric_gate_on_table() {
        let p = SmoothnessParams::new(2, 0.5).unwrap();
        let pts: Vec<(f64, f64)> = (0..=80).map(|k| {
            let t = 10f64.powf(-4.0 + 0.1 * k as f64);
            (t, t.powi(5))
        }).collect();
        let a = YoungFunction::tabulated(TabulatedMonotone::from_points(&pts).unwrap());
        let r = classify_gate(&a, &p, Gate::TailSub).unwrap();
        assert_eq!(r.method, Method::NumericTailFit);
        assert_eq!(r.verdict, Verdict::Converges);
        assert_eq!(r.dual_verdict, Some(Verdict::Converges));
    }

    #[test]
    fn e_for_power_is_closed_form() {
        let (n, s, p) = (2u32, 0.5, 5.0);
        let params = SmoothnessParams::new(n, s).unwrap();
        let e = build_e(&YoungFunction::power(p).unwrap(), &params).unwrap();
        let pp = p / (p - 1.0);
        let q = params.sub_exponent();
        let c = (p - 1.0) * p.powf(-pp) / (q - pp);
        for &t in &[1e-5, 0.1, 1.0, 30.0, 1e6] {
            assert!(rel(e.eval(t), c * t.powf(pp)) < 1e-8, "t={t}");
        }
        assert_eq!(e.eval(0.0), 0.0);
        assert!(e_growth_ratio(&e, &params, 1e60) < 1e-4);
    }

    #[test]
    fn f_for_power() {
        let params = SmoothnessParams::new(3, 1.5).unwrap();
        let p = 2.0;
        let f = build_f(&YoungFunction::power(p).unwrap(), &params).unwrap();
        let q1 = params.grad_exponent();
        let pp = p / (p - 1.0);
        let c = (p - 1.0) * p.powf(-pp) / (pp - q1);
        for &t in &[1e-5, 1.0, 1e6] {
            assert!(rel(f.eval(t), c * t.powf(pp)) < 1e-8, "t={t}");
        }
    }

    #[test]
    fn i_for_square() {
        let params = SmoothnessParams::new(1, 1.5).unwrap();
        let i = build_i(&YoungFunction::power(2.0).unwrap(), &params).unwrap();
        for &t in &[1e-3, 0.5, 2.0, 1e4] {
            assert!(rel(i.eval(t), t * t / 16.0) < 1e-8, "t={t}");
        }
    }

    #[test]
    fn hat_a_grows_like_power() {
        let params = SmoothnessParams::new(3, 0.5).unwrap();
        let h = build_hat_a(&YoungFunction::power(2.0).unwrap(), &params).unwrap();
        let k = (h.ln_at_ln(10.0) - h.ln_at_ln(-10.0)) / 20.0;
        assert!((k - 2.0).abs() < 0.05, "{k}");
        assert_eq!(h.eval(0.0), 0.0);
    }

    #[test]
    fn failing_gate_blocks_construction() {
        let params = SmoothnessParams::new(2, 0.5).unwrap();
        let err = build_e(&YoungFunction::power(3.0).unwrap(), &params).unwrap_err();
        assert!(matches!(err, OrliczError::NoEmbedding { gate: Gate::TailSub, .. }));
    }
}
