//! Young functions and their calculus.
//!
//! Every function is evaluated in log-log coordinates (`ln A(e^x)`), which
//! keeps power, power-log and exponential families finite over hundreds of
//! decades. Values of `+∞` are genuine (gauge functions, conjugates of
//! functions with bounded slope), never overflow artefacts.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{OrliczError, Result};
use crate::quad::{self, log_add_exp, softplus};
use crate::table::{self, generic_ln_inverse, TabulatedMonotone, TailModel, LN_SPAN};

fn one() -> f64 {
    1.0
}

/// Serializable description of a Young function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum YoungSpec {
    /// `coef · t^p`.
    Power {
        p: f64,
        #[serde(default = "one")]
        coef: f64,
    },
    /// `t^{p0} (log(1+1/t))^{alpha0}` near 0 and `t^p (log(1+t))^alpha` near ∞.
    PowerLog {
        p0: f64,
        alpha0: f64,
        p: f64,
        alpha: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        crossover: Option<f64>,
    },
    /// `exp(-t^{1/gamma0})` near 0 and `exp(t^gamma)` near ∞.
    Exponential { gamma0: f64, gamma: f64 },
    /// `0` on `[0, threshold]`, `∞` beyond.
    LinftyGauge {
        #[serde(default = "one")]
        threshold: f64,
    },
    /// Samples read from a CSV file or given inline.
    Table {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        path: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        points: Option<Vec<(f64, f64)>>,
    },
}

/// Asymptotic shape of a function at one end of `(0, ∞)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum Tail {
    /// Identically zero near the end.
    Zero,
    /// Identically `+∞` near the end.
    Infinite,
    /// `t^exponent |ln t|^log_power`.
    PowerLog { exponent: f64, log_power: f64 },
    /// Faster than every power: decays faster near 0, grows faster near ∞.
    Super,
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Piece {
    /// `t^p0 (ln(1+1/t))^a0`.
    PlZero { p0: f64, a0: f64 },
    /// `t^p (ln(1+t))^a`.
    PlInf { p: f64, a: f64 },
    /// `exp(-t^beta)` with `beta < 0`.
    ExpZero { beta: f64 },
    /// `exp(t^gamma)`.
    ExpInf { gamma: f64 },
}

impl Piece {
    fn ln_val(&self, x: f64) -> f64 {
        match *self {
            Piece::PlZero { p0, a0 } => {
                let l = softplus(-x);
                p0 * x + if a0 == 0.0 { 0.0 } else { a0 * l.ln() }
            }
            Piece::PlInf { p, a } => {
                let m = softplus(x);
                p * x + if a == 0.0 { 0.0 } else { a * m.ln() }
            }
            Piece::ExpZero { beta } => -(beta * x).exp(),
            Piece::ExpInf { gamma } => (gamma * x).exp(),
        }
    }

    fn ln_der(&self, x: f64) -> f64 {
        match *self {
            Piece::PlZero { p0, a0 } => {
                let l = softplus(-x);
                // (1+t) ln(1+1/t)
                let w = softplus(x).exp() * l;
                let factor = p0 - a0 / w;
                if !(factor > 0.0) {
                    return f64::NEG_INFINITY;
                }
                (p0 - 1.0) * x + if a0 == 0.0 { 0.0 } else { a0 * l.ln() } + factor.ln()
            }
            Piece::PlInf { p, a } => {
                let m = softplus(x);
                // t / ((1+t) ln(1+t))
                let ratio = (x - softplus(x)).exp() / m;
                let factor = p + a * ratio;
                if !(factor > 0.0) {
                    return f64::NEG_INFINITY;
                }
                (p - 1.0) * x + if a == 0.0 { 0.0 } else { a * m.ln() } + factor.ln()
            }
            Piece::ExpZero { beta } => (-beta).ln() + (beta - 1.0) * x - (beta * x).exp(),
            Piece::ExpInf { gamma } => gamma.ln() + (gamma - 1.0) * x + (gamma * x).exp(),
        }
    }
}

/// Parameters of a glued family (power-log or exponential).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Family {
    PowerLog { p0: f64, alpha0: f64, p: f64, alpha: f64 },
    Exponential { gamma0: f64, gamma: f64 },
}

/// `A = A0 + A∞`: `A0` follows the near-zero profile up to `t0` and its
/// tangent beyond; `A∞` is the near-infinity profile minus its tangent at
/// `t1`, cut off below `t1`. Both summands are convex when the profiles are
/// convex on their pieces, so `A` is a Young function with the prescribed
/// behaviour at both ends.
#[derive(Clone, Debug)]
struct Glued {
    family: Family,
    crossover: f64,
    zero: Piece,
    inf: Option<Piece>,
    x0: f64,
    ln_g0: f64,
    ln_dg0: f64,
    x1: f64,
    ln_h1: f64,
    ln_dh1: f64,
}

const SCAN_STEP: f64 = 0.02;
const SCAN_SPAN: f64 = 300.0;

impl Glued {
    fn new(family: Family, crossover: f64) -> Self {
        let (zero, inf) = match family {
            Family::PowerLog { p0, alpha0, p, alpha } => {
                let inf = if p == 1.0 && alpha == 0.0 { None } else { Some(Piece::PlInf { p, a: alpha }) };
                (Piece::PlZero { p0, a0: alpha0 }, inf)
            }
            Family::Exponential { gamma0, gamma } => {
                (Piece::ExpZero { beta: 1.0 / gamma0 }, Some(Piece::ExpInf { gamma }))
            }
        };
        let xc = crossover.ln();
        let x0 = convex_limit_below(&zero, xc);
        let x1 = inf.map(|h| convex_limit_above(&h, xc)).unwrap_or(xc);
        let (ln_h1, ln_dh1) = inf.map(|h| (h.ln_val(x1), h.ln_der(x1))).unwrap_or((0.0, 0.0));
        Glued {
            family,
            crossover,
            zero,
            inf,
            x0,
            ln_g0: zero.ln_val(x0),
            ln_dg0: zero.ln_der(x0),
            x1,
            ln_h1,
            ln_dh1,
        }
    }

    fn ln_a0(&self, x: f64) -> f64 {
        if x <= self.x0 {
            self.zero.ln_val(x)
        } else {
            // g0 + g0'(t - t0) = g0' (t + c) with c = g0/g0' - t0 <= 0
            let c = (self.ln_g0 - self.ln_dg0).exp() - self.x0.exp();
            self.ln_dg0 + x + (c * (-x).exp()).ln_1p()
        }
    }

    fn ln_ainf(&self, x: f64) -> f64 {
        let Some(h) = self.inf else { return f64::NEG_INFINITY };
        if x <= self.x1 {
            return f64::NEG_INFINITY;
        }
        let ln_h = h.ln_val(x);
        let c = (self.ln_h1 - self.ln_dh1).exp() - self.x1.exp();
        let ln_tan = self.ln_dh1 + x + (c * (-x).exp()).ln_1p();
        let r = (ln_tan - ln_h).exp();
        if r >= 1.0 { f64::NEG_INFINITY } else { ln_h + (-r).ln_1p() }
    }

    fn ln_at_ln(&self, x: f64) -> f64 {
        log_add_exp(self.ln_a0(x), self.ln_ainf(x))
    }

    fn ln_density(&self, x: f64) -> f64 {
        let a0 = if x <= self.x0 { self.zero.ln_der(x) } else { self.ln_dg0 };
        let ainf = match self.inf {
            Some(h) if x > self.x1 => {
                let d = h.ln_der(x);
                let r = (self.ln_dh1 - d).exp();
                if r >= 1.0 { f64::NEG_INFINITY } else { d + (-r).ln_1p() }
            }
            _ => f64::NEG_INFINITY,
        };
        log_add_exp(a0, ainf)
    }

    fn kinks(&self) -> [f64; 2] {
        [self.x0.exp(), self.x1.exp()]
    }
}

fn monotone_step(prev: f64, next: f64) -> bool {
    if prev == f64::NEG_INFINITY {
        return true;
    }
    next >= prev - 1e-12 * prev.abs().max(1.0)
}

/// Largest scan point `x ≤ xc` below which the piece's derivative is
/// non-decreasing; falls back to `xc` when the piece is nowhere convex
/// near zero so that the axiom check exposes the defect.
fn convex_limit_below(piece: &Piece, xc: f64) -> f64 {
    let n = ((xc + SCAN_SPAN) / SCAN_STEP).ceil() as usize;
    let xs: Vec<f64> = (0..=n).map(|i| -SCAN_SPAN + (xc + SCAN_SPAN) * i as f64 / n as f64).collect();
    let ds: Vec<f64> = xs.iter().map(|&x| piece.ln_der(x)).collect();
    for i in 0..n {
        if ds[i + 1].is_nan() || !monotone_step(ds[i], ds[i + 1]) {
            return if i == 0 { xc } else { xs[i] };
        }
    }
    xc
}

/// Smallest scan point `x ≥ xc` above which the piece's derivative is
/// non-decreasing.
fn convex_limit_above(piece: &Piece, xc: f64) -> f64 {
    let n = ((SCAN_SPAN - xc) / SCAN_STEP).ceil() as usize;
    let xs: Vec<f64> = (0..=n).map(|i| xc + (SCAN_SPAN - xc) * i as f64 / n as f64).collect();
    let ds: Vec<f64> = xs.iter().map(|&x| piece.ln_der(x)).collect();
    for i in (0..n).rev() {
        if ds[i].is_nan() || !monotone_step(ds[i], ds[i + 1]) {
            return if i + 1 == n { xc } else { xs[i + 1] };
        }
    }
    xc
}

#[derive(Clone, Debug)]
enum Repr {
    Power { p: f64, coef: f64 },
    Gauge { threshold: f64 },
    Glued(Arc<Glued>),
    Conjugate(Arc<YoungFunction>),
    Table(Arc<TabulatedMonotone>),
}

/// A Young function `A : [0,∞) → [0,∞]`.
#[derive(Clone, Debug)]
pub struct YoungFunction {
    repr: Repr,
    label: Option<String>,
}

impl YoungFunction {
    /// `t^p`, `p ≥ 1`.
    pub fn power(p: f64) -> Result<Self> {
        Self::scaled_power(p, 1.0)
    }

    /// `coef · t^p`, `p ≥ 1`, `coef > 0`.
    pub fn scaled_power(p: f64, coef: f64) -> Result<Self> {
        if !(p >= 1.0) || !p.is_finite() {
            return Err(OrliczError::Domain(format!("power exponent must be >= 1, got {p}")));
        }
        if !(coef > 0.0) || !coef.is_finite() {
            return Err(OrliczError::Domain(format!("power coefficient must be positive, got {coef}")));
        }
        Ok(Self::from_repr(Repr::Power { p, coef }))
    }

    /// `t^{p0}(log(1+1/t))^{α0}` near 0, `t^p(log(1+t))^α` near ∞, glued at 1.
    pub fn power_log(p0: f64, alpha0: f64, p: f64, alpha: f64) -> Result<Self> {
        Self::power_log_with_crossover(p0, alpha0, p, alpha, 1.0)
    }

    /// As [`power_log`](Self::power_log) with an explicit crossover point.
    ///
    /// Parameters outside the admissible ranges are accepted so that
    /// [`check_axioms`](Self::check_axioms) can report the defect.
    pub fn power_log_with_crossover(p0: f64, alpha0: f64, p: f64, alpha: f64, crossover: f64) -> Result<Self> {
        for (name, v) in [("p0", p0), ("alpha0", alpha0), ("p", p), ("alpha", alpha)] {
            if !v.is_finite() {
                return Err(OrliczError::Domain(format!("{name} must be finite")));
            }
        }
        if !(p0 > 0.0) || !(p > 0.0) {
            return Err(OrliczError::Domain("power-log exponents must be positive".into()));
        }
        if !(crossover > 0.0) || !crossover.is_finite() {
            return Err(OrliczError::Domain(format!("crossover must be positive, got {crossover}")));
        }
        let fam = Family::PowerLog { p0, alpha0, p, alpha };
        Ok(Self::from_repr(Repr::Glued(Arc::new(Glued::new(fam, crossover)))))
    }

    /// `exp(-t^{1/γ0})` near 0 (`γ0 < 0`) and `exp(t^γ)` near ∞ (`γ > 0`).
    pub fn exponential(gamma0: f64, gamma: f64) -> Result<Self> {
        if !(gamma0 < 0.0) || !gamma0.is_finite() {
            return Err(OrliczError::Domain(format!("gamma0 must be negative, got {gamma0}")));
        }
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(OrliczError::Domain(format!("gamma must be positive, got {gamma}")));
        }
        let fam = Family::Exponential { gamma0, gamma };
        Ok(Self::from_repr(Repr::Glued(Arc::new(Glued::new(fam, 1.0)))))
    }

    /// The gauge of `L^∞`: 0 on `[0,1]`, `∞` beyond.
    pub fn linfty_gauge() -> Self {
        Self::from_repr(Repr::Gauge { threshold: 1.0 })
    }

    /// 0 on `[0,threshold]`, `∞` beyond.
    pub fn gauge(threshold: f64) -> Result<Self> {
        if !(threshold > 0.0) || !threshold.is_finite() {
            return Err(OrliczError::Domain(format!("gauge threshold must be positive, got {threshold}")));
        }
        Ok(Self::from_repr(Repr::Gauge { threshold }))
    }

    pub fn tabulated(table: TabulatedMonotone) -> Self {
        Self::from_repr(Repr::Table(Arc::new(table)))
    }

    /// The conjugate evaluated numerically even where a closed form exists.
    pub fn numeric_conjugate(a: &YoungFunction) -> Self {
        Self::from_repr(Repr::Conjugate(Arc::new(a.clone())))
    }

    pub fn from_spec(spec: &YoungSpec) -> Result<Self> {
        match spec {
            YoungSpec::Power { p, coef } => Self::scaled_power(*p, *coef),
            YoungSpec::PowerLog { p0, alpha0, p, alpha, crossover } => {
                Self::power_log_with_crossover(*p0, *alpha0, *p, *alpha, crossover.unwrap_or(1.0))
            }
            YoungSpec::Exponential { gamma0, gamma } => Self::exponential(*gamma0, *gamma),
            YoungSpec::LinftyGauge { threshold } => Self::gauge(*threshold),
            YoungSpec::Table { path, points } => {
                let table = match (path, points) {
                    (_, Some(pts)) => TabulatedMonotone::from_points(pts)?,
                    (Some(p), None) => TabulatedMonotone::from_csv_path(std::path::Path::new(p))?,
                    (None, None) => return Err(OrliczError::Malformed("table needs `path` or `points`".into())),
                };
                Ok(Self::tabulated(table))
            }
        }
    }

    fn from_repr(repr: Repr) -> Self {
        Self { repr, label: None }
    }

    /// Attach a human-readable label used in reports.
    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    /// Description of this function for reports and provenance.
    pub fn describe(&self) -> String {
        if let Some(l) = &self.label {
            return l.clone();
        }
        match &self.repr {
            Repr::Power { p, coef } if *coef == 1.0 => format!("power(p={p})"),
            Repr::Power { p, coef } => format!("power(p={p},coef={coef})"),
            Repr::Gauge { threshold } if *threshold == 1.0 => "linfty_gauge".into(),
            Repr::Gauge { threshold } => format!("gauge(threshold={threshold})"),
            Repr::Glued(g) => match g.family {
                Family::PowerLog { p0, alpha0, p, alpha } => {
                    format!("power_log(p0={p0},alpha0={alpha0},p={p},alpha={alpha})")
                }
                Family::Exponential { gamma0, gamma } => format!("exp(gamma0={gamma0},gamma={gamma})"),
            },
            Repr::Conjugate(b) => format!("conjugate({})", b.describe()),
            Repr::Table(t) => format!("table({} samples)", t.ln_grid().len()),
        }
    }

    /// Serializable description, when the function is a base family.
    pub fn spec(&self) -> Option<YoungSpec> {
        match &self.repr {
            Repr::Power { p, coef } => Some(YoungSpec::Power { p: *p, coef: *coef }),
            Repr::Gauge { threshold } => Some(YoungSpec::LinftyGauge { threshold: *threshold }),
            Repr::Glued(g) => Some(match g.family {
                Family::PowerLog { p0, alpha0, p, alpha } => YoungSpec::PowerLog {
                    p0,
                    alpha0,
                    p,
                    alpha,
                    crossover: if g.crossover == 1.0 { None } else { Some(g.crossover) },
                },
                Family::Exponential { gamma0, gamma } => YoungSpec::Exponential { gamma0, gamma },
            }),
            Repr::Table(t) => Some(YoungSpec::Table { path: None, points: Some(t.points()) }),
            Repr::Conjugate(_) => None,
        }
    }

    /// Glued-family parameters, when applicable.
    pub fn family(&self) -> Option<Family> {
        match &self.repr {
            Repr::Glued(g) => Some(g.family),
            _ => None,
        }
    }

    pub fn as_table(&self) -> Option<&TabulatedMonotone> {
        match &self.repr {
            Repr::Table(t) => Some(t),
            _ => None,
        }
    }

    /// True when the function is built from closed-form pieces (conjugates of
    /// such functions included), so its tails are known exactly.
    pub fn is_symbolic(&self) -> bool {
        match &self.repr {
            Repr::Table(_) => false,
            Repr::Conjugate(b) => b.is_symbolic(),
            _ => true,
        }
    }

    /// `ln A(e^x)`.
    pub fn ln_at_ln(&self, x: f64) -> f64 {
        if x == f64::NEG_INFINITY {
            return f64::NEG_INFINITY;
        }
        match &self.repr {
            Repr::Power { p, coef } => coef.ln() + p * x,
            Repr::Gauge { threshold } => {
                if x <= threshold.ln() { f64::NEG_INFINITY } else { f64::INFINITY }
            }
            Repr::Glued(g) => g.ln_at_ln(x),
            Repr::Conjugate(b) => conjugate_at_ln(b, x).0,
            Repr::Table(t) => t.ln_at_ln(x),
        }
    }

    /// `A(t)`; `t < 0` is a domain error.
    pub fn evaluate(&self, t: f64) -> Result<f64> {
        if t < 0.0 || t.is_nan() {
            return Err(OrliczError::Domain(format!("Young functions are defined on [0,∞), got t = {t}")));
        }
        Ok(self.eval(t))
    }

    /// `A(t)` for `t ≥ 0` (no domain check).
    pub fn eval(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        if let Repr::Power { p, coef } = self.repr {
            return coef * t.powf(p);
        }
        self.ln_at_ln(t.ln()).exp()
    }

    /// `ln a(e^x)` where `a` is the left-continuous density.
    pub fn ln_density_at_ln(&self, x: f64) -> f64 {
        match &self.repr {
            Repr::Power { p, coef } => (coef * p).ln() + (p - 1.0) * x,
            Repr::Gauge { threshold } => {
                if x <= threshold.ln() { f64::NEG_INFINITY } else { f64::INFINITY }
            }
            Repr::Glued(g) => g.ln_density(x),
            Repr::Conjugate(b) => conjugate_at_ln(b, x).1,
            Repr::Table(t) => {
                let v = t.ln_at_ln(x);
                let k = t.slope_at_ln(x);
                if k <= 0.0 || v == f64::NEG_INFINITY { f64::NEG_INFINITY } else { v + k.ln() - x }
            }
        }
    }

    /// `a(t)`.
    pub fn density(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return self.density_at_zero();
        }
        self.ln_density_at_ln(t.ln()).exp()
    }

    /// `ln A^{-1}(e^y)` with `A^{-1}(y) = sup{t : A(t) ≤ y}`.
    pub fn ln_inverse_at_ln(&self, y: f64) -> f64 {
        match &self.repr {
            Repr::Power { p, coef } => (y - coef.ln()) / p,
            Repr::Gauge { threshold } => threshold.ln(),
            _ => generic_ln_inverse(|x| self.ln_at_ln(x), y),
        }
    }

    /// Generalized right-continuous inverse `A^{-1}(y) = sup{t ≥ 0 : A(t) ≤ y}`.
    pub fn inverse(&self, y: f64) -> f64 {
        if y < 0.0 || y.is_nan() {
            return f64::NAN;
        }
        self.ln_inverse_at_ln(y.ln()).exp()
    }

    /// The Young conjugate `Ã(t) = sup_τ (τt − A(τ))`; closed form where available.
    pub fn conjugate(&self) -> YoungFunction {
        match &self.repr {
            Repr::Power { p, coef } if *p == 1.0 => Self::from_repr(Repr::Gauge { threshold: *coef }),
            Repr::Power { p, coef } => {
                let q = p / (p - 1.0);
                let c = (p - 1.0) * coef * (coef * p).powf(-q);
                Self::from_repr(Repr::Power { p: q, coef: c })
            }
            Repr::Gauge { threshold } => Self::from_repr(Repr::Power { p: 1.0, coef: *threshold }),
            Repr::Conjugate(b) => (**b).clone(),
            _ => Self::numeric_conjugate(self),
        }
    }

    /// `sup{t : A(t) < ∞}`.
    pub fn finiteness_threshold(&self) -> f64 {
        match &self.repr {
            Repr::Gauge { threshold } => *threshold,
            Repr::Table(t) => match t.upper_tail() {
                TailModel::Infinite => {
                    let lv = t.ln_values();
                    let j = lv.iter().rposition(|v| v.is_finite()).unwrap_or(0);
                    t.ln_grid()[j].exp()
                }
                _ => f64::INFINITY,
            },
            Repr::Conjugate(b) => b.density_at_infinity(),
            _ => f64::INFINITY,
        }
    }

    /// `sup{t : A(t) = 0}`.
    pub fn zero_threshold(&self) -> f64 {
        match &self.repr {
            Repr::Gauge { threshold } => *threshold,
            Repr::Table(t) => match t.lower_tail() {
                TailModel::Zero => {
                    let lv = t.ln_values();
                    let i = lv.iter().position(|v| v.is_finite()).unwrap_or(0);
                    if i == 0 { t.ln_grid()[0].exp() } else { t.ln_grid()[i - 1].exp() }
                }
                _ => 0.0,
            },
            Repr::Conjugate(b) => b.density_at_zero(),
            _ => 0.0,
        }
    }

    /// `a(0+)`.
    pub fn density_at_zero(&self) -> f64 {
        match &self.repr {
            Repr::Power { p, coef } => if *p == 1.0 { *coef } else { 0.0 },
            Repr::Gauge { .. } => 0.0,
            Repr::Glued(g) => match g.family {
                Family::PowerLog { p0, alpha0, .. } if p0 == 1.0 && alpha0 == 0.0 => 1.0,
                _ => 0.0,
            },
            Repr::Conjugate(b) => b.zero_threshold(),
            Repr::Table(t) => {
                let x = t.ln_grid()[0] - 1.0;
                if (t.slope_at_ln(x) - 1.0).abs() < 1e-9 { t.ln_at_ln(x).exp() / x.exp() } else { 0.0 }
            }
        }
    }

    /// `lim_{t→∞} a(t)`.
    pub fn density_at_infinity(&self) -> f64 {
        match &self.repr {
            Repr::Power { p, coef } => if *p == 1.0 { *coef } else { f64::INFINITY },
            Repr::Gauge { .. } => f64::INFINITY,
            Repr::Glued(g) => if g.inf.is_none() { g.ln_dg0.exp() } else { f64::INFINITY },
            Repr::Conjugate(b) => b.finiteness_threshold(),
            Repr::Table(t) => match t.upper_tail() {
                TailModel::Infinite => f64::INFINITY,
                TailModel::PowerLog { exponent, log_power, ln_coef } => {
                    if exponent > 1.0 || (exponent == 1.0 && log_power > 0.0) {
                        f64::INFINITY
                    } else if exponent == 1.0 && log_power == 0.0 {
                        ln_coef.exp()
                    } else {
                        0.0
                    }
                }
                TailModel::Zero => 0.0,
            },
        }
    }

    /// Points where the density may jump or have a kink.
    pub fn kinks(&self) -> Vec<f64> {
        match &self.repr {
            Repr::Gauge { threshold } => vec![*threshold],
            Repr::Glued(g) => g.kinks().to_vec(),
            _ => Vec::new(),
        }
    }

    /// Exact asymptotic shape near 0, when known symbolically.
    pub fn tail_at_zero(&self) -> Option<Tail> {
        match &self.repr {
            Repr::Power { p, .. } => Some(Tail::PowerLog { exponent: *p, log_power: 0.0 }),
            Repr::Gauge { .. } => Some(Tail::Zero),
            Repr::Glued(g) => match g.family {
                Family::PowerLog { p0, alpha0, .. } => Some(Tail::PowerLog { exponent: p0, log_power: alpha0 }),
                Family::Exponential { .. } => Some(Tail::Super),
            },
            Repr::Conjugate(b) => b.conjugate_tail_at_zero(),
            Repr::Table(_) => None,
        }
    }

    /// Exact asymptotic shape near ∞, when known symbolically.
    pub fn tail_at_infinity(&self) -> Option<Tail> {
        match &self.repr {
            Repr::Power { p, .. } => Some(Tail::PowerLog { exponent: *p, log_power: 0.0 }),
            Repr::Gauge { .. } => Some(Tail::Infinite),
            Repr::Glued(g) => match g.family {
                Family::PowerLog { p, alpha, .. } => Some(Tail::PowerLog { exponent: p, log_power: alpha }),
                Family::Exponential { .. } => Some(Tail::Super),
            },
            Repr::Conjugate(b) => b.conjugate_tail_at_infinity(),
            Repr::Table(_) => None,
        }
    }

    /// Shape of `Ã` near 0 derived from the shape of `A`.
    pub fn conjugate_tail_at_zero(&self) -> Option<Tail> {
        if let Repr::Glued(g) = &self.repr {
            if let Family::Exponential { gamma0, .. } = g.family {
                return Some(Tail::PowerLog { exponent: 1.0, log_power: gamma0 });
            }
        }
        if let Repr::Conjugate(b) = &self.repr {
            return b.tail_at_zero();
        }
        conjugate_power_tail(self.tail_at_zero()?, false)
    }

    /// Shape of `Ã` near ∞ derived from the shape of `A`.
    pub fn conjugate_tail_at_infinity(&self) -> Option<Tail> {
        if let Repr::Glued(g) = &self.repr {
            if let Family::Exponential { gamma, .. } = g.family {
                return Some(Tail::PowerLog { exponent: 1.0, log_power: 1.0 / gamma });
            }
        }
        if let Repr::Conjugate(b) = &self.repr {
            return b.tail_at_infinity();
        }
        conjugate_power_tail(self.tail_at_infinity()?, true)
    }

    /// Sample `ln A` on a uniform grid in `ln t` and wrap it as a table.
    /// Known thresholds become exact nodes; tails follow the symbolic shape
    /// when available and a fitted power-log model otherwise.
    pub fn to_table(&self, x_lo: f64, x_hi: f64, per_unit: f64) -> Result<TabulatedMonotone> {
        let n = ((x_hi - x_lo) * per_unit).ceil().max(2.0) as usize;
        let mut xs: Vec<f64> = (0..=n).map(|i| x_lo + (x_hi - x_lo) * i as f64 / n as f64).collect();
        let z = self.zero_threshold();
        let f = self.finiteness_threshold();
        if z > 0.0 && z.ln() > x_lo && z.ln() < x_hi {
            xs.push(z.ln());
        }
        if f.is_finite() && f.ln() > x_lo && f.ln() < x_hi {
            xs.push(f.ln() - 1e-12);
        }
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        xs.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
        let ys: Vec<f64> = xs.iter().map(|&x| self.ln_at_ln(x)).collect();
        let model = |tail: Option<Tail>, lower: bool| -> TailModel {
            match tail {
                Some(Tail::Zero) => TailModel::Zero,
                Some(Tail::Infinite) => TailModel::Infinite,
                Some(Tail::PowerLog { exponent, log_power }) => {
                    TailModel::PowerLog { ln_coef: 0.0, exponent, log_power }
                }
                _ => {
                    let k = xs.len();
                    let take = (2.0 * std::f64::consts::LN_10 * per_unit).ceil() as usize + 1;
                    let take = take.min(k);
                    let (sx, sy): (Vec<f64>, Vec<f64>) = if lower {
                        (xs[..take].to_vec(), ys[..take].to_vec())
                    } else {
                        (xs[k - take..].to_vec(), ys[k - take..].to_vec())
                    };
                    if sy.iter().all(|v| v.is_finite()) {
                        table::fit_power_log(&sx, &sy)
                    } else if lower {
                        TailModel::Zero
                    } else {
                        TailModel::Infinite
                    }
                }
            }
        };
        let lower = model(self.tail_at_zero(), true);
        let upper = model(self.tail_at_infinity(), false);
        TabulatedMonotone::from_log_samples(xs, ys, lower, upper)
    }
}

fn conjugate_power_tail(tail: Tail, at_infinity: bool) -> Option<Tail> {
    match tail {
        Tail::Zero => Some(Tail::PowerLog { exponent: 1.0, log_power: 0.0 }),
        Tail::Infinite => Some(Tail::PowerLog { exponent: 1.0, log_power: 0.0 }),
        Tail::Super => None,
        Tail::PowerLog { exponent, log_power } => {
            if exponent > 1.0 {
                Some(Tail::PowerLog {
                    exponent: exponent / (exponent - 1.0),
                    log_power: -log_power / (exponent - 1.0),
                })
            } else if exponent == 1.0 && log_power == 0.0 {
                Some(if at_infinity { Tail::Infinite } else { Tail::Zero })
            } else if exponent == 1.0 && ((at_infinity && log_power > 0.0) || (!at_infinity && log_power < 0.0)) {
                Some(Tail::Super)
            } else {
                None
            }
        }
    }
}

/// `(ln Ã(e^x), ln τ*)` where `τ*` maximizes `τ e^x − A(τ)`.
///
/// Works on `v = ln τ`. The region where `τt − A(τ) > 0` is `v < v1` with
/// `v1` the crossing of the non-decreasing `ln(A(τ)/τ)` with `x`; the
/// maximum is located by golden-section search on `ln(τt − A(τ))`.
fn conjugate_at_ln(base: &YoungFunction, x: f64) -> (f64, f64) {
    if x == f64::NEG_INFINITY {
        return (f64::NEG_INFINITY, f64::NEG_INFINITY);
    }
    let m = |v: f64| base.ln_at_ln(v) - v;
    if !(m(-LN_SPAN) < x) {
        return (f64::NEG_INFINITY, f64::NEG_INFINITY);
    }
    if m(LN_SPAN) < x {
        return (f64::INFINITY, f64::INFINITY);
    }
    let v1 = quad::bisect_last_true(|v| m(v) < x, -LN_SPAN, LN_SPAN, 90).unwrap_or(-LN_SPAN);
    let psi = |v: f64| {
        let d = m(v) - x;
        if d < 0.0 { v + x + (-d.exp_m1()).ln() } else { f64::NEG_INFINITY }
    };
    let mut k = 0.5;
    let mut lo;
    loop {
        lo = v1 - 2.0 * k;
        if lo <= -LN_SPAN {
            lo = -LN_SPAN;
            break;
        }
        if psi(lo) < psi(v1 - k) {
            break;
        }
        k *= 2.0;
    }
    let (vstar, val) = quad::golden_max(psi, lo, v1, 1e-14);
    (val, vstar)
}

/// One index estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", content = "value", rename_all = "snake_case")]
pub enum IndexValue {
    Finite(f64),
    Infinite,
    Inconclusive,
}

/// Estimates of one lower Matuszewska–Orlicz index.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct IndexEstimate {
    /// Via liminf of `A⁻¹(λt)/A⁻¹(t)` as `λ → 0`.
    pub via_inverse: IndexValue,
    /// Via liminf of `A(λt)/A(t)` as `λ → ∞`; `None` when `A` is not
    /// finite-valued or vanishes away from 0.
    pub via_ratio: Option<IndexValue>,
    pub value: IndexValue,
    /// Both routes applied and agreed within 0.05.
    pub agree: bool,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct IndexReport {
    pub at_zero: IndexEstimate,
    pub at_infinity: IndexEstimate,
}

const INDEX_WINDOWS: [f64; 2] = [100.0, 200.0];

impl YoungFunction {
    /// Numerical lower indices `(i0, i∞)`.
    pub fn matuszewska_indices(&self) -> IndexReport {
        IndexReport { at_zero: self.index_at(false), at_infinity: self.index_at(true) }
    }

    fn index_at(&self, at_infinity: bool) -> IndexEstimate {
        let ratio_applicable = self.finiteness_threshold() == f64::INFINITY && self.zero_threshold() == 0.0;
        let inv = estimate_index(|w| self.liminf_inverse_ratios(w, at_infinity), true);
        let rat = ratio_applicable.then(|| estimate_index(|w| self.liminf_ratios(w, at_infinity), false));
        let (value, agree) = match (inv, rat) {
            (IndexValue::Finite(a), Some(IndexValue::Finite(b))) => {
                if (a - b).abs() <= 0.05 { (IndexValue::Finite(a), true) } else { (IndexValue::Inconclusive, false) }
            }
            (IndexValue::Infinite, Some(IndexValue::Infinite)) => (IndexValue::Infinite, true),
            (a, None) => (a, false),
            (IndexValue::Inconclusive, Some(b)) => (b, false),
            (a, Some(IndexValue::Inconclusive)) => (a, false),
            _ => (IndexValue::Inconclusive, false),
        };
        IndexEstimate { via_inverse: inv, via_ratio: rat, value, agree }
    }

    /// `(ln λ, min_t ln(A⁻¹(λt)/A⁻¹(t)))` for `λ = 2^{-k}`, `t` in a window at depth `w`.
    fn liminf_inverse_ratios(&self, w: f64, at_infinity: bool) -> Vec<(f64, f64)> {
        let window: Vec<f64> = (0..=20).map(|j| if at_infinity { w + j as f64 } else { -w - j as f64 }).collect();
        (1..=10)
            .map(|k| {
                let ll = -(k as f64) * std::f64::consts::LN_2;
                let m = window
                    .iter()
                    .map(|&y| self.ln_inverse_at_ln(y + ll) - self.ln_inverse_at_ln(y))
                    .fold(f64::INFINITY, f64::min);
                (ll, m)
            })
            .collect()
    }

    /// `(ln λ, min_t ln(A(λt)/A(t)))` for `λ = 2^k`.
    fn liminf_ratios(&self, w: f64, at_infinity: bool) -> Vec<(f64, f64)> {
        let window: Vec<f64> = (0..=20).map(|j| if at_infinity { w + j as f64 } else { -w - j as f64 }).collect();
        (1..=10)
            .map(|k| {
                let ll = k as f64 * std::f64::consts::LN_2;
                let m = window
                    .iter()
                    .map(|&x| self.ln_at_ln(x + ll) - self.ln_at_ln(x))
                    .fold(f64::INFINITY, f64::min);
                (ll, m)
            })
            .collect()
    }
}

/// Index from the secants through the last three points; a second, deeper
/// window separates superpolynomial behaviour from a large finite index.
fn estimate_index<F: Fn(f64) -> Vec<(f64, f64)>>(series: F, inverse_route: bool) -> IndexValue {
    let mut est = Vec::new();
    for &w in &INDEX_WINDOWS {
        let pts = series(w);
        let n = pts.len();
        if pts.iter().any(|p| !p.1.is_finite()) {
            if pts.iter().any(|p| p.1 == f64::INFINITY) && !inverse_route {
                return IndexValue::Infinite;
            }
            return IndexValue::Inconclusive;
        }
        let s1 = (pts[n - 2].1 - pts[n - 3].1) / (pts[n - 2].0 - pts[n - 3].0);
        let s2 = (pts[n - 1].1 - pts[n - 2].1) / (pts[n - 1].0 - pts[n - 2].0);
        if !inverse_route && s1.min(s2) > 1e3 {
            est.push(f64::INFINITY);
            continue;
        }
        if (s1 - s2).abs() > 0.1 {
            return IndexValue::Inconclusive;
        }
        let i2 = if !inverse_route {
            s2
        } else if s2 > 1e-12 {
            1.0 / s2
        } else {
            f64::INFINITY
        };
        est.push(i2);
    }
    let (a, b) = (est[0], est[1]);
    if a.is_infinite() || b.is_infinite() || b > 1e3 {
        return IndexValue::Infinite;
    }
    if (a - b).abs() <= 0.05 * a.max(1.0) {
        IndexValue::Finite(b)
    } else if b > 1.5 * a && b > 20.0 {
        IndexValue::Infinite
    } else {
        IndexValue::Inconclusive
    }
}

/// One axiom check.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AxiomCheck {
    pub name: String,
    pub passed: bool,
    /// Arguments at which the check failed first.
    pub witness: Option<Vec<f64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AxiomReport {
    pub function: String,
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

const AXIOM_SEED: u64 = 0x5eed_a110;

impl YoungFunction {
    /// Run the Young-function axioms on a deterministic grid `[1e-8, 1e8]`.
    pub fn check_axioms(&self) -> AxiomReport {
        let grid: Vec<f64> = (0..=320).map(|k| 10f64.powf(-8.0 + 0.05 * k as f64)).collect();
        let vals: Vec<f64> = grid.iter().map(|&t| self.eval(t)).collect();
        let tol = if self.is_symbolic() { 1e-9 } else { 1e-6 };
        let mut checks = Vec::new();
        let mut push = |name: &str, witness: Option<Vec<f64>>| {
            checks.push(AxiomCheck { name: name.into(), passed: witness.is_none(), witness });
        };

        push("vanishes_at_zero", (self.eval(0.0) != 0.0).then(|| vec![0.0]));

        let w = (0..grid.len() - 1).find(|&i| vals[i + 1] < vals[i] * (1.0 - tol)).map(|i| vec![grid[i], grid[i + 1]]);
        push("non_decreasing", w);

        let w = if vals.iter().all(|v| *v == vals[0]) { Some(vec![grid[0], grid[grid.len() - 1]]) } else { None };
        push("non_constant", w);

        let mut rng = ChaCha8Rng::seed_from_u64(AXIOM_SEED);
        let mut pairs: Vec<(f64, f64)> = grid.windows(3).map(|w| (w[0], w[2])).collect();
        for _ in 0..500 {
            let a = 10f64.powf(rng.gen_range(-8.0..8.0));
            let b = a * 10f64.powf(rng.gen_range(0.0..2.0));
            pairs.push((a, b));
        }
        let w = pairs.iter().find_map(|&(x, y)| {
            let (ax, ay) = (self.eval(x), self.eval(y));
            if !ay.is_finite() || !ax.is_finite() {
                return None;
            }
            let mid = self.eval(0.5 * (x + y));
            (mid > 0.5 * (ax + ay) * (1.0 + tol) + 1e-300).then(|| vec![x, y])
        });
        push("convex_midpoint", w);

        let w = (0..grid.len() - 1).find_map(|i| {
            let (r0, r1) = (vals[i] / grid[i], vals[i + 1] / grid[i + 1]);
            (r0.is_finite() && r1 < r0 * (1.0 - tol)).then(|| vec![grid[i], grid[i + 1]])
        });
        push("ratio_non_decreasing", w);

        let w = [1.5, 2.0, 4.0, 10.0].iter().find_map(|&k| {
            grid.iter().zip(&vals).find_map(|(&t, &v)| {
                let rhs = self.eval(k * t);
                (v.is_finite() && k * v > rhs * (1.0 + tol) + 1e-300).then(|| vec![k, t])
            })
        });
        push("scaling_kt", w);

        push("density_integrates", self.density_consistency_witness());

        AxiomReport { function: self.describe(), checks }
    }

    fn density_consistency_witness(&self) -> Option<Vec<f64>> {
        let tol = if self.is_symbolic() { 1e-6 } else { 2e-2 };
        let mut breaks: Vec<f64> = self.kinks();
        if let Some(t) = self.as_table() {
            breaks.extend(t.ln_grid().iter().map(|x| x.exp()));
        }
        let t_lo = 1e-6;
        let base = self.eval(t_lo);
        for &t in &[1e-3, 0.5, 1.0, 2.0, 10.0, 1e3] {
            let at = self.eval(t);
            if !at.is_finite() || !base.is_finite() {
                continue;
            }
            let mut pts = vec![t_lo, t];
            pts.extend(breaks.iter().copied().filter(|&b| b > t_lo && b < t));
            let q = quad::integrate_pieces(|tau| self.density(tau), &pts, 1e-10);
            let expect = at - base;
            if (q.value - expect).abs() > tol * expect.abs().max(at * 1e-9) + 1e-14 {
                return Some(vec![t]);
            }
        }
        None
    }
}

/// Region on which domination is tested.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Range {
    Global,
    NearZero,
    NearInfinity,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DominationReport {
    pub range: Range,
    /// Smallest `c = 2^k` on the search grid with `B(t) ≤ A(ct)` on the test grid.
    pub constant: Option<f64>,
    /// Threshold of the tested region (`0` for the global range).
    pub threshold: f64,
    /// For failures: `(t, B(t)/A(c_max t))` at the worst grid points.
    pub witnesses: Vec<(f64, f64)>,
}

impl DominationReport {
    pub fn holds(&self) -> bool {
        self.constant.is_some()
    }
}

/// Does `a` dominate `b` (`B(t) ≤ A(ct)`) on the requested range?
pub fn dominates(a: &YoungFunction, b: &YoungFunction, range: Range) -> DominationReport {
    let (lo, hi, threshold) = match range {
        Range::Global => (-8.0, 8.0, 0.0),
        Range::NearZero => (-8.0, 0.0, 1.0),
        Range::NearInfinity => (0.0, 8.0, 1.0),
    };
    let n = ((hi - lo) * 20.0) as usize;
    let xs: Vec<f64> = (0..=n).map(|k| (lo + (hi - lo) * k as f64 / n as f64) * std::f64::consts::LN_10).collect();
    let lb: Vec<f64> = xs.iter().map(|&x| b.ln_at_ln(x)).collect();
    let holds = |lc: f64| xs.iter().zip(&lb).all(|(&x, &yb)| yb <= a.ln_at_ln(x + lc) + 1e-12 * yb.abs().max(1.0));
    for k in -20..=20 {
        let lc = k as f64 * std::f64::consts::LN_2;
        if holds(lc) {
            return DominationReport { range, constant: Some(2f64.powi(k)), threshold, witnesses: Vec::new() };
        }
    }
    let lc = 20.0 * std::f64::consts::LN_2;
    let mut w: Vec<(f64, f64)> = xs
        .iter()
        .zip(&lb)
        .filter_map(|(&x, &yb)| {
            let d = yb - a.ln_at_ln(x + lc);
            (d > 0.0).then(|| (x.exp(), d.exp()))
        })
        .collect();
    w.sort_by(|p, q| p.0.partial_cmp(&q.0).unwrap());
    let keep = w.len().saturating_sub(8);
    DominationReport { range, constant: None, threshold, witnesses: w.split_off(keep) }
}

/// Mutual domination on the range.
pub fn equivalent(a: &YoungFunction, b: &YoungFunction, range: Range) -> bool {
    dominates(a, b, range).holds() && dominates(b, a, range).holds()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn evaluate_basic() {
        let a = YoungFunction::power(2.0).unwrap();
        assert_eq!(a.evaluate(3.0).unwrap(), 9.0);
        assert_eq!(a.evaluate(0.0).unwrap(), 0.0);
        assert!(a.evaluate(-1.0).is_err());
        let g = YoungFunction::linfty_gauge();
        assert_eq!(g.eval(0.5), 0.0);
        assert_eq!(g.eval(2.0), f64::INFINITY);
    }

    #[test]
    fn inverse_examples() {
        let a = YoungFunction::power(2.0).unwrap();
        assert!(rel(a.inverse(4.0), 2.0) < 1e-14);
        assert_eq!(a.inverse(0.0), 0.0);
        assert_eq!(YoungFunction::linfty_gauge().inverse(7.0), 1.0);
    }

    #[test]
    fn generic_inverse_matches_evaluation() {
        let a = YoungFunction::power_log(2.0, 1.0, 3.0, -0.5).unwrap();
        for &y in &[1e-6, 0.3, 5.0, 1e7] {
            let t = a.inverse(y);
            assert!(rel(a.eval(t), y) < 1e-10, "y={y}");
        }
    }

    #[test]
    fn conjugate_closed_forms() {
        let c = YoungFunction::power(2.0).unwrap().conjugate();
        assert!(rel(c.eval(3.0), 9.0 / 4.0) < 1e-14);
        let g = YoungFunction::linfty_gauge().conjugate();
        assert!(rel(g.eval(2.5), 2.5) < 1e-14);
        let p1 = YoungFunction::power(1.0).unwrap().conjugate();
        assert_eq!(p1.eval(0.7), 0.0);
        assert_eq!(p1.eval(1.3), f64::INFINITY);
    }

    #[test]
    fn numeric_conjugate_of_power() {
        for &p in &[1.2, 2.0, 5.0] {
            let a = YoungFunction::power(p).unwrap();
            let num = YoungFunction::numeric_conjugate(&a);
            let q = p / (p - 1.0);
            for &t in &[1e-4, 0.1, 1.0, 7.0, 1e5] {
                let exact = (p - 1.0) * (t / p).powf(q);
                assert!(rel(num.eval(t), exact) < 1e-10, "p={p} t={t}");
            }
        }
    }

    #[test]
    fn numeric_conjugate_of_gauge_and_linear() {
        let g = YoungFunction::numeric_conjugate(&YoungFunction::linfty_gauge());
        assert!(rel(g.eval(3.0), 3.0) < 1e-10);
        let l = YoungFunction::numeric_conjugate(&YoungFunction::power(1.0).unwrap());
        assert_eq!(l.eval(0.5), 0.0);
        assert_eq!(l.eval(1.5), f64::INFINITY);
    }

    #[test]
    fn conjugate_density_is_inverse_density() {
        let a = YoungFunction::power_log(2.0, 0.0, 3.0, 1.0).unwrap();
        let c = a.conjugate();
        for &t in &[0.01, 1.0, 50.0] {
            let tau = c.density(t);
            assert!(rel(a.density(tau), t) < 1e-6, "t={t}");
        }
    }

    #[test]
    fn glued_families_satisfy_axioms() {
        let fams = [
            YoungFunction::power_log(2.0, 1.0, 4.0, -1.0).unwrap(),
            YoungFunction::power_log(1.0, -0.5, 2.0, 3.0).unwrap(),
            YoungFunction::power_log(1.0, 0.0, 1.0, 0.5).unwrap(),
            YoungFunction::power_log(5.0, -3.0, 1.5, -0.2).unwrap(),
            YoungFunction::exponential(-1.0, 1.0).unwrap(),
            YoungFunction::exponential(-0.5, 2.0).unwrap(),
        ];
        for a in &fams {
            let r = a.check_axioms();
            assert!(r.all_passed(), "{r:?}");
        }
    }

    #[test]
    fn inadmissible_power_log_fails_axioms() {
        let a = YoungFunction::power_log(1.0, 0.5, 2.0, 0.0).unwrap();
        assert!(!a.check_axioms().all_passed());
    }

    #[test]
    fn concave_table_fails_convexity() {
        let pts: Vec<(f64, f64)> = (1..=40).map(|k| {
            let t = 0.25 * k as f64;
            (t, t.sqrt())
        }).collect();
        let a = YoungFunction::tabulated(TabulatedMonotone::from_points(&pts).unwrap());
        let r = a.check_axioms();
        let c = r.check("convex_midpoint").unwrap();
        assert!(!c.passed && c.witness.is_some());
    }

    #[test]
    fn glued_asymptotics() {
        let a = YoungFunction::power_log(2.0, 1.0, 4.0, -1.0).unwrap();
        for &t in &[1e-30f64, 1e-50] {
            let target = t * t * (1.0 + 1.0 / t).ln();
            assert!(rel(a.eval(t), target) < 1e-6);
        }
        let t = 1e40f64;
        let target = t.powi(4) / (1.0 + t).ln();
        assert!(rel(a.eval(t), target) < 1e-6);
    }

    #[test]
    fn indices_examples() {
        let r = YoungFunction::power(3.0).unwrap().matuszewska_indices();
        assert!(matches!(r.at_zero.value, IndexValue::Finite(v) if (v - 3.0).abs() < 1e-9));
        assert!(matches!(r.at_infinity.value, IndexValue::Finite(v) if (v - 3.0).abs() < 1e-9));
        let r = YoungFunction::power_log(2.0, 1.0, 4.0, -1.0).unwrap().matuszewska_indices();
        assert!(matches!(r.at_zero.value, IndexValue::Finite(v) if (v - 2.0).abs() < 0.05), "{r:?}");
        assert!(matches!(r.at_infinity.value, IndexValue::Finite(v) if (v - 4.0).abs() < 0.05), "{r:?}");
        assert!(r.at_zero.agree && r.at_infinity.agree);
        let r = YoungFunction::exponential(-1.0, 1.0).unwrap().matuszewska_indices();
        assert_eq!(r.at_infinity.value, IndexValue::Infinite, "{r:?}");
    }

    #[test]
    fn domination_examples() {
        let p2 = YoungFunction::power(2.0).unwrap();
        let p1 = YoungFunction::power(1.0).unwrap();
        let r = dominates(&p2, &p2, Range::Global);
        assert_eq!(r.constant, Some(1.0));
        let r = dominates(&p2, &p1, Range::NearInfinity);
        assert_eq!(r.constant, Some(1.0));
        assert_eq!(r.threshold, 1.0);
        let r = dominates(&p1, &p2, Range::NearInfinity);
        assert!(!r.holds());
        assert!(!r.witnesses.is_empty());
        assert!(r.witnesses.windows(2).all(|w| w[1].1 >= w[0].1));
    }

    #[test]
    fn spec_roundtrip_json() {
        let s = r#"{"kind":"power_log","p0":2,"alpha0":1,"p":4,"alpha":-1}"#;
        let spec: YoungSpec = serde_json::from_str(s).unwrap();
        let a = YoungFunction::from_spec(&spec).unwrap();
        assert_eq!(a.spec().unwrap(), spec);
    }
}
