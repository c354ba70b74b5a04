//! Luxemburg and Orlicz–Lorentz norms, decreasing rearrangements, Hölder
//! checks and the kernel norms that realise the moduli as weighted norms.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::conditions::SmoothnessParams;
use crate::error::{OrliczError, Result};
use crate::quad::{self, log_add_exp};
use crate::young::{Tail, YoungFunction};

/// Power continuation `coef · x^exponent` beyond the last breakpoint.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerTail {
    pub coef: f64,
    pub exponent: f64,
}

/// A step function on `[grid[0], grid[last])`: `values[i]` on
/// `[grid[i], grid[i+1])`, zero to the left of the grid, and zero or a power
/// tail to the right.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampledFunction {
    grid: Vec<f64>,
    values: Vec<f64>,
    tail: Option<PowerTail>,
}

impl SampledFunction {
    /// `values.len() + 1` strictly increasing nonnegative breakpoints.
    pub fn step(grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if grid.len() != values.len() + 1 || values.is_empty() {
            return Err(OrliczError::Malformed(format!(
                "a step function needs one more breakpoint than values (got {} and {})",
                grid.len(),
                values.len()
            )));
        }
        if grid[0] < 0.0 || grid.iter().any(|x| !x.is_finite()) {
            return Err(OrliczError::Malformed("breakpoints must be finite and nonnegative".into()));
        }
        if let Some(w) = grid.windows(2).find(|w| w[1] <= w[0]) {
            return Err(OrliczError::Malformed(format!("breakpoints must increase strictly ({} then {})", w[0], w[1])));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(OrliczError::Malformed(format!("values must be finite, got {v}")));
        }
        Ok(Self { grid, values, tail: None })
    }

    /// Continue by `coef · x^exponent` on `[grid[last], ∞)`.
    pub fn with_tail(mut self, tail: PowerTail) -> Result<Self> {
        if !tail.coef.is_finite() || !tail.exponent.is_finite() {
            return Err(OrliczError::Malformed("tail parameters must be finite".into()));
        }
        self.tail = Some(tail);
        Ok(self)
    }

    /// `χ_{(a,b)}`.
    pub fn indicator(a: f64, b: f64) -> Result<Self> {
        if a <= 0.0 {
            Self::step(vec![0.0, b], vec![1.0])
        } else {
            Self::step(vec![0.0, a, b], vec![0.0, 1.0])
        }
    }

    /// The constant `c` on `(0, l)`.
    pub fn constant(c: f64, l: f64) -> Result<Self> {
        Self::step(vec![0.0, l], vec![c])
    }

    /// Midpoint step approximation of `f` on `cells` equal cells of `[a, b]`.
    pub fn from_fn<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cells: usize) -> Result<Self> {
        let h = (b - a) / cells as f64;
        let grid: Vec<f64> = (0..=cells).map(|i| a + h * i as f64).collect();
        let values = (0..cells).map(|i| f(a + h * (i as f64 + 0.5))).collect();
        Self::step(grid, values)
    }

    /// Rows `(abscissa, value)`; each value holds up to the next abscissa and
    /// the last row only closes the domain.
    pub fn from_csv_path(path: &Path) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_path(path)
            .map_err(|e| OrliczError::Malformed(format!("{}: {e}", path.display())))?;
        let mut grid = Vec::new();
        let mut values = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| OrliczError::Malformed(format!("{}: {e}", path.display())))?;
            let parse = |k: usize| -> Option<f64> { rec.get(k).and_then(|s| s.parse::<f64>().ok()) };
            match (parse(0), parse(1)) {
                (Some(x), Some(v)) => {
                    grid.push(x);
                    values.push(v);
                }
                // A leading non-numeric row is a header.
                _ if i == 0 => continue,
                _ => return Err(OrliczError::Malformed(format!("{}: row {} is not numeric", path.display(), i + 1))),
            }
        }
        values.pop();
        Self::step(grid, values)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("abscissa,value\n");
        for (x, v) in self.grid.iter().zip(&self.values) {
            out.push_str(&format!("{x},{v}\n"));
        }
        out.push_str(&format!("{},0\n", self.grid[self.grid.len() - 1]));
        out
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn tail(&self) -> Option<PowerTail> {
        self.tail
    }

    /// Right end of the stepped part.
    pub fn support_end(&self) -> f64 {
        self.grid[self.grid.len() - 1]
    }

    /// Length of the domain `(grid[0], end)`, infinite with a tail.
    pub fn domain_length(&self) -> f64 {
        if self.tail.is_some() { f64::INFINITY } else { self.support_end() - self.grid[0] }
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x < self.grid[0] {
            return 0.0;
        }
        let end = self.support_end();
        if x >= end {
            return match self.tail {
                Some(t) => t.coef * x.powf(t.exponent),
                None => 0.0,
            };
        }
        let i = self.grid.partition_point(|&g| g <= x) - 1;
        self.values[i]
    }

    /// `(left, right, value)` for each cell.
    pub fn cells(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.grid.windows(2).zip(&self.values).map(|(w, &v)| (w[0], w[1], v))
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| c * v).collect(),
            tail: self.tail.map(|t| PowerTail { coef: c * t.coef, exponent: t.exponent }),
        }
    }

    pub fn abs(&self) -> Self {
        Self {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| v.abs()).collect(),
            tail: self.tail.map(|t| PowerTail { coef: t.coef.abs(), exponent: t.exponent }),
        }
    }

    pub fn sup_abs(&self) -> f64 {
        let cells = self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        match self.tail {
            Some(t) if t.exponent > 0.0 => f64::INFINITY,
            Some(t) => cells.max(t.coef.abs() * self.support_end().powf(t.exponent)),
            None => cells,
        }
    }

    /// `|{x : |u(x)| > t}|` for the stepped part and the tail.
    pub fn distribution(&self, t: f64) -> f64 {
        let mut m: f64 = self.cells().filter(|c| c.2.abs() > t).map(|c| c.1 - c.0).sum();
        if let Some(tl) = self.tail {
            let x0 = self.support_end();
            let c = tl.coef.abs();
            if c > 0.0 {
                if tl.exponent >= 0.0 {
                    if c * x0.powf(tl.exponent) > t || tl.exponent > 0.0 {
                        return f64::INFINITY;
                    }
                } else if t <= 0.0 {
                    return f64::INFINITY;
                } else {
                    let x1 = (t / c).powf(1.0 / tl.exponent);
                    m += (x1 - x0).max(0.0);
                }
            }
        }
        m
    }

    /// True when `|u|` never increases across breakpoints.
    pub fn is_non_increasing(&self) -> bool {
        self.values.windows(2).all(|w| w[1].abs() <= w[0].abs())
            && self.tail.is_none_or(|t| {
                t.exponent <= 0.0 && t.coef.abs() * self.support_end().powf(t.exponent) <= self.values[self.values.len() - 1].abs()
            })
    }
}

/// A weighted interval `(a, b) ⊆ (0, ∞)`.
#[derive(Clone)]
pub struct MeasureSpec {
    pub a: f64,
    pub b: f64,
    weight: Option<Arc<dyn Fn(f64) -> f64 + Send + Sync>>,
}

impl std::fmt::Debug for MeasureSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MeasureSpec")
            .field("a", &self.a)
            .field("b", &self.b)
            .field("weighted", &self.weight.is_some())
            .finish()
    }
}

impl Default for MeasureSpec {
    fn default() -> Self {
        Self::lebesgue(0.0, f64::INFINITY)
    }
}

impl MeasureSpec {
    pub fn lebesgue(a: f64, b: f64) -> Self {
        Self { a, b, weight: None }
    }

    pub fn weighted<W: Fn(f64) -> f64 + Send + Sync + 'static>(a: f64, b: f64, w: W) -> Self {
        Self { a, b, weight: Some(Arc::new(w)) }
    }

    pub fn is_lebesgue(&self) -> bool {
        self.weight.is_none()
    }

    fn weight_at(&self, x: f64) -> f64 {
        self.weight.as_ref().map_or(1.0, |w| w(x))
    }

    /// Measure of `[l, r] ∩ (a, b)`.
    fn mass(&self, l: f64, r: f64) -> f64 {
        let (l, r) = (l.max(self.a), r.min(self.b));
        if r <= l {
            return 0.0;
        }
        match &self.weight {
            None => r - l,
            Some(w) => quad::tanh_sinh(|x| w(x), l, r, 1e-12).value,
        }
    }
}

/// Outcome of a Luxemburg-type root find.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormResult {
    /// The norm; `+∞` (serialised as `null`) when no finite `λ` works.
    pub value: f64,
    pub modular_at_value: f64,
    pub iterations: usize,
}

impl NormResult {
    pub fn is_infinite(&self) -> bool {
        self.value == f64::INFINITY
    }
}

const LN_LAMBDA_SPAN: f64 = 700.0;
const NORM_REL_TOL: f64 = 1e-10;

/// `inf{λ > 0 : modular(λ) ≤ 1}` for a non-increasing modular, by bracketing
/// and bisection in `ln λ`. The returned `λ` is on the unit-ball side.
pub fn solve_unit_ball<M: FnMut(f64) -> f64>(mut modular: M, guess: f64) -> NormResult {
    let mut iterations = 0;
    let mut m = |l: f64| {
        iterations += 1;
        modular(l.exp())
    };
    let start = if guess > 0.0 && guess.is_finite() { guess.ln() } else { 0.0 };
    let m0 = m(start);
    let (mut lo, mut hi, mut m_hi);
    if m0 <= 1.0 {
        hi = start;
        m_hi = m0;
        let mut step = 1.0;
        loop {
            let l = hi - step;
            if l < -LN_LAMBDA_SPAN {
                return NormResult { value: 0.0, modular_at_value: m(-LN_LAMBDA_SPAN), iterations };
            }
            let v = m(l);
            if v > 1.0 {
                lo = l;
                break;
            }
            hi = l;
            m_hi = v;
            step *= 2.0;
        }
    } else {
        lo = start;
        let mut step = 1.0;
        loop {
            let l = lo + step;
            if l > LN_LAMBDA_SPAN {
                return NormResult { value: f64::INFINITY, modular_at_value: f64::INFINITY, iterations };
            }
            let v = m(l);
            if v <= 1.0 {
                hi = l;
                m_hi = v;
                break;
            }
            lo = l;
            step *= 2.0;
        }
    }
    while hi - lo > NORM_REL_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = m(mid);
        if v <= 1.0 {
            hi = mid;
            m_hi = v;
        } else {
            lo = mid;
        }
    }
    NormResult { value: hi.exp(), modular_at_value: m_hi, iterations }
}

/// `∫ A(|f|/λ) dm` for a step function.
pub fn modular(a: &YoungFunction, f: &SampledFunction, m: &MeasureSpec, lambda: f64) -> f64 {
    let masses: Vec<(f64, f64)> = f.cells().map(|(l, r, v)| (v.abs(), m.mass(l, r))).collect();
    let tail = f.tail.map(|t| (t, f.support_end().max(m.a), m.b));
    step_modular(a, &masses, tail, m, lambda)
}

fn step_modular(a: &YoungFunction, masses: &[(f64, f64)], tail: Option<(PowerTail, f64, f64)>, m: &MeasureSpec, lambda: f64) -> f64 {
    let mut total = 0.0;
    for &(v, w) in masses {
        if w > 0.0 && v > 0.0 {
            total += a.eval(v / lambda) * w;
        }
    }
    if let Some((t, lo, hi)) = tail {
        if hi == f64::INFINITY && t.coef != 0.0 {
            if t.exponent == 0.0 {
                // A constant tail is integrable only where `A` still vanishes.
                if a.eval(t.coef.abs() / lambda) > 0.0 {
                    return f64::INFINITY;
                }
                return total;
            }
            if !power_tail_converges(a, t.exponent) {
                return f64::INFINITY;
            }
        }
        if hi > lo && t.coef != 0.0 {
            let g = |x: f64| {
                let y = a.eval(t.coef.abs() * x.powf(t.exponent) / lambda);
                if y == 0.0 { 0.0 } else { y * m.weight_at(x) }
            };
            total += if hi.is_finite() { quad::tanh_sinh(g, lo, hi, 1e-12).value } else { quad::integrate_to_infinity(g, lo, 1e-12).value };
        }
    }
    total
}

/// Whether `∫^∞ A(c x^e) dx` is finite, read off the behaviour of `A` at zero.
fn power_tail_converges(a: &YoungFunction, e: f64) -> bool {
    if e >= 0.0 {
        return false;
    }
    match a.tail_at_zero() {
        Some(Tail::Zero) | Some(Tail::Super) => true,
        Some(Tail::PowerLog { exponent, log_power }) => {
            let k = e * exponent;
            k < -1.0 || (k == -1.0 && log_power < -1.0)
        }
        Some(Tail::Infinite) => false,
        // Unknown shape: compare `A(t)` with `t^{-1/e}` at a small argument.
        None => {
            let t: f64 = 1e-30;
            a.eval(t) < t.powf(-1.0 / e) * 1e-3
        }
    }
}

/// Luxemburg norm of a step function.
pub fn luxemburg_norm(a: &YoungFunction, f: &SampledFunction, m: &MeasureSpec) -> NormResult {
    let masses: Vec<(f64, f64)> = f.cells().map(|(l, r, v)| (v.abs(), m.mass(l, r))).collect();
    let tail = f.tail.map(|t| (t, f.support_end().max(m.a), m.b));
    let guess = masses.iter().fold(0.0f64, |g, &(v, _)| g.max(v));
    solve_unit_ball(|l| step_modular(a, &masses, tail, m, l), guess)
}

/// Integral of a callable over `(m.a, m.b)`, split at `breaks` and at the
/// decades in between.
fn integrate_callable<F: Fn(f64) -> f64>(f: F, m: &MeasureSpec, breaks: &[f64]) -> f64 {
    let mut pts: Vec<f64> = vec![m.a];
    pts.extend(breaks.iter().copied().filter(|&x| x > m.a && x < m.b));
    let lo = m.a.max(1e-300);
    let hi_decade = if m.b.is_finite() { m.b.log10().ceil() as i32 } else { 30 };
    for k in (lo.log10().floor() as i32).max(-300)..=hi_decade {
        let x = 10f64.powi(k);
        if x > m.a && x < m.b {
            pts.push(x);
        }
    }
    let g = |x: f64| {
        let v = f(x);
        if v == 0.0 { 0.0 } else { v * m.weight_at(x) }
    };
    if m.b.is_finite() {
        pts.push(m.b);
        quad::integrate_pieces(g, &pts, 1e-12).value
    } else {
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let last = *pts.last().unwrap();
        quad::integrate_pieces(&g, &pts, 1e-12).value + quad::integrate_to_infinity(&g, last, 1e-12).value
    }
}

/// Luxemburg norm of a callable, integrated adaptively; `breaks` marks
/// known discontinuities.
pub fn luxemburg_norm_fn<F: Fn(f64) -> f64>(a: &YoungFunction, f: F, m: &MeasureSpec, breaks: &[f64]) -> NormResult {
    solve_unit_ball(|l| integrate_callable(|x| a.eval(f(x).abs() / l), m, breaks), 1.0)
}

/// The non-increasing right-continuous rearrangement of `|u|` on `(0, |supp|)`.
pub fn decreasing_rearrangement(u: &SampledFunction) -> Result<SampledFunction> {
    if u.tail.is_some() {
        return Err(OrliczError::Precondition(
            "rearrangement needs a bounded-support step function; drop the tail first".into(),
        ));
    }
    let mut cells: Vec<(f64, f64)> = u.cells().map(|(l, r, v)| (v.abs(), r - l)).collect();
    cells.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap());
    let mut grid = vec![0.0];
    let mut values: Vec<f64> = Vec::new();
    let mut at = 0.0;
    for (v, w) in cells {
        at += w;
        if values.last() == Some(&v) {
            *grid.last_mut().unwrap() = at;
        } else {
            values.push(v);
            grid.push(at);
        }
    }
    SampledFunction::step(grid, values)
}

/// Lorentz-type norm together with whether the norm condition on `A` holds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LorentzNorm {
    pub norm: NormResult,
    /// `∫^∞ A(t)/t^{1+q} dt < ∞`; `None` when the tail of `A` is unknown.
    pub norm_condition: Option<bool>,
}

/// `‖r^{-1/q} u*(r)‖_{L^A(0, |supp u|)}`.
pub fn orlicz_lorentz_norm(a: &YoungFunction, q: f64, u: &SampledFunction) -> Result<LorentzNorm> {
    if !(q > 1.0) {
        return Err(OrliczError::Domain(format!("the Lorentz exponent must exceed 1, got q = {q}")));
    }
    let star = decreasing_rearrangement(u)?;
    let norm_condition = match a.tail_at_infinity() {
        Some(Tail::PowerLog { exponent, log_power }) => Some(exponent < q || (exponent == q && log_power < -1.0)),
        Some(Tail::Zero) => Some(true),
        Some(Tail::Infinite) => Some(true),
        Some(Tail::Super) => Some(false),
        None => None,
    };
    let m = MeasureSpec::lebesgue(0.0, star.support_end());
    let inv_q = 1.0 / q;
    let norm = luxemburg_norm_fn(a, |r| r.powf(-inv_q) * star.eval(r), &m, star.grid());
    Ok(LorentzNorm { norm, norm_condition })
}

/// Cumulative form of one kernel modular.
///
/// With `ρ = r^n e^w` and `y = c·n·ln r − ln λ`, the modular equals
/// `r^n G(y)` where `G(y) = |c|^{-1} e^{-y/c} ∫_I Ã(e^x) e^{x/c} dx` and `I`
/// is `[y, ∞)` or `(-∞, y]`. `ln G` is tabulated once per function.
#[derive(Clone, Debug)]
struct KernelTable {
    c: f64,
    ys: Vec<f64>,
    ln_g: Vec<f64>,
}

const KERNEL_SPAN: f64 = 300.0;
const KERNEL_STEP: f64 = 0.05;

impl KernelTable {
    fn build(conj: &YoungFunction, tails: (Option<Tail>, Option<Tail>), c: f64, upper: bool) -> Self {
        let count = (2.0 * KERNEL_SPAN / KERNEL_STEP).round() as usize;
        let xs: Vec<f64> = (0..=count).map(|i| -KERNEL_SPAN + KERNEL_STEP * i as f64).collect();
        let ln_conj: Vec<f64> = xs.iter().map(|&x| conj.ln_at_ln(x)).collect();
        let phi: Vec<f64> = xs.iter().zip(&ln_conj).map(|(x, l)| l + x / c).collect();
        // Log-slope of Ã at an end, from the symbolic tail when known.
        let end_slope = |at_upper: bool| -> f64 {
            let tail = if at_upper { tails.1 } else { tails.0 };
            let x = if at_upper { KERNEL_SPAN } else { -KERNEL_SPAN };
            match tail {
                Some(Tail::PowerLog { exponent, log_power }) => exponent + log_power / x,
                Some(Tail::Zero) => f64::INFINITY,
                Some(Tail::Infinite) | Some(Tail::Super) => f64::INFINITY,
                None => {
                    let (a, b) = if at_upper { (count - 1, count) } else { (0, 1) };
                    (ln_conj[b] - ln_conj[a]) / KERNEL_STEP
                }
            }
        };
        let mut ln_h = vec![f64::NEG_INFINITY; count + 1];
        if upper {
            let k = end_slope(true) + 1.0 / c;
            let mut acc = if phi[count] == f64::NEG_INFINITY {
                f64::NEG_INFINITY
            } else if k < 0.0 {
                phi[count] - (-k).ln()
            } else {
                f64::INFINITY
            };
            ln_h[count] = acc;
            for i in (0..count).rev() {
                acc = log_add_exp(acc, quad::ln_segment(KERNEL_STEP, phi[i], phi[i + 1]));
                ln_h[i] = acc;
            }
        } else {
            let k = end_slope(false) + 1.0 / c;
            let mut acc = if phi[0] == f64::NEG_INFINITY {
                f64::NEG_INFINITY
            } else if k > 0.0 {
                phi[0] - k.ln()
            } else {
                f64::INFINITY
            };
            ln_h[0] = acc;
            for i in 0..count {
                acc = log_add_exp(acc, quad::ln_segment(KERNEL_STEP, phi[i], phi[i + 1]));
                ln_h[i + 1] = acc;
            }
        }
        let ln_g = xs.iter().zip(&ln_h).map(|(y, h)| -c.abs().ln() - y / c + h).collect();
        Self { c, ys: xs, ln_g }
    }

    /// `ln λ` solving `n ln r + ln G(y) = 0`, or `None` for an infinite norm.
    fn ln_lambda(&self, n_ln_r: f64) -> Option<f64> {
        let target = -n_ln_r;
        let ok: Vec<usize> = (0..self.ys.len()).filter(|&i| self.ln_g[i].is_finite()).collect();
        if ok.len() < 2 {
            return None;
        }
        let (first, last) = (ok[0], ok[ok.len() - 1]);
        let y = if target <= self.ln_g[first] {
            let j = ok[1];
            let slope = (self.ln_g[j] - self.ln_g[first]) / (self.ys[j] - self.ys[first]);
            self.ys[first] + (target - self.ln_g[first]) / slope
        } else if target >= self.ln_g[last] {
            let j = ok[ok.len() - 2];
            let slope = (self.ln_g[last] - self.ln_g[j]) / (self.ys[last] - self.ys[j]);
            if last + 1 < self.ys.len() {
                // The modular jumps to +∞ just beyond: the norm sits at the jump.
                self.ys[last]
            } else {
                self.ys[last] + (target - self.ln_g[last]) / slope
            }
        } else {
            let k = ok.partition_point(|&i| self.ln_g[i] < target);
            let (i0, i1) = (ok[k - 1], ok[k]);
            let t = (target - self.ln_g[i0]) / (self.ln_g[i1] - self.ln_g[i0]);
            self.ys[i0] + t * (self.ys[i1] - self.ys[i0])
        };
        y.is_finite().then(|| self.c * n_ln_r - y)
    }
}

/// Kernel norms `K0(r) = ‖ρ^{-1+s/n} χ_{(0,r^n)}‖_{L^Ã}` and
/// `K∞(r) = r ‖ρ^{-1+(s-1)/n} χ_{(r^n,∞)}‖_{L^Ã}`, tabulated for fast
/// evaluation over many `r`.
#[derive(Clone, Debug)]
pub struct KernelNorms {
    n: f64,
    near: Option<KernelTable>,
    far: Option<KernelTable>,
}

impl KernelNorms {
    pub fn new(a: &YoungFunction, params: &SmoothnessParams) -> Self {
        let n = params.n() as f64;
        let s = params.s();
        let conj = a.conjugate();
        let tails = (a.conjugate_tail_at_zero(), a.conjugate_tail_at_infinity());
        let c0 = s / n - 1.0;
        let near = Some(KernelTable::build(&conj, tails, c0, c0 < 0.0));
        let c1 = (s - 1.0) / n - 1.0;
        let far = (c1 < 0.0).then(|| KernelTable::build(&conj, tails, c1, false));
        Self { n, near, far }
    }

    fn eval_table(t: &Option<KernelTable>, n: f64, r: f64) -> f64 {
        t.as_ref().and_then(|t| t.ln_lambda(n * r.ln())).map_or(f64::INFINITY, f64::exp)
    }

    /// `K0(r)`; `+∞` when the norm diverges.
    pub fn near(&self, r: f64) -> f64 {
        Self::eval_table(&self.near, self.n, r)
    }

    /// `K∞(r)`; `+∞` when the norm diverges.
    pub fn far(&self, r: f64) -> f64 {
        r * Self::eval_table(&self.far, self.n, r)
    }
}

/// `(K0(r), K∞(r))` for a single `r`; use [`KernelNorms`] for sweeps.
pub fn kernel_norms(a: &YoungFunction, params: &SmoothnessParams, r: f64) -> Result<(f64, f64)> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(OrliczError::Domain(format!("kernel norms need r > 0, got {r}")));
    }
    let k = KernelNorms::new(a, params);
    Ok((k.near(r), k.far(r)))
}

/// Hölder and Hardy–Littlewood inequalities for one pair of step functions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HolderReport {
    /// `∫|uv| dm`.
    pub product_integral: f64,
    pub norm_u: f64,
    /// `‖v‖` in the conjugate space.
    pub norm_v: f64,
    /// `2 ‖u‖_{L^A} ‖v‖_{L^Ã}`.
    pub holder_bound: f64,
    pub holder_holds: bool,
    /// `∫ u* v*` (Lebesgue).
    pub rearranged_integral: f64,
    pub hardy_littlewood_holds: bool,
}

fn product_integral(u: &SampledFunction, v: &SampledFunction, m: &MeasureSpec) -> f64 {
    let mut pts: Vec<f64> = u.grid.iter().chain(&v.grid).copied().collect();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    let mut total = 0.0;
    for w in pts.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        let uv = (u.eval(mid) * v.eval(mid)).abs();
        if uv > 0.0 {
            total += uv * m.mass(w[0], w[1]);
        }
    }
    let end = pts[pts.len() - 1].max(m.a);
    if u.tail.is_some() && v.tail.is_some() && m.b > end {
        let g = |x: f64| (u.eval(x) * v.eval(x)).abs() * m.weight_at(x);
        total += if m.b.is_finite() { quad::tanh_sinh(g, end, m.b, 1e-12).value } else { quad::integrate_to_infinity(g, end, 1e-12).value };
    }
    total
}

pub fn holder_check(u: &SampledFunction, v: &SampledFunction, a: &YoungFunction, m: &MeasureSpec) -> HolderReport {
    let lhs = product_integral(u, v, m);
    let norm_u = luxemburg_norm(a, u, m).value;
    let norm_v = luxemburg_norm(&a.conjugate(), v, m).value;
    let bound = if norm_u == 0.0 || norm_v == 0.0 { 0.0 } else { 2.0 * norm_u * norm_v };
    let rearranged = match (decreasing_rearrangement(u), decreasing_rearrangement(v)) {
        (Ok(us), Ok(vs)) => product_integral(&us, &vs, &MeasureSpec::default()),
        _ => f64::NAN,
    };
    let lebesgue_lhs = if m.is_lebesgue() && m.a <= 0.0 && m.b == f64::INFINITY {
        lhs
    } else {
        product_integral(u, v, &MeasureSpec::default())
    };
    let slack = |x: f64| x * (1.0 + 1e-9) + 1e-300;
    HolderReport {
        product_integral: lhs,
        norm_u,
        norm_v,
        holder_bound: bound,
        holder_holds: lhs <= slack(bound),
        rearranged_integral: rearranged,
        hardy_littlewood_holds: rearranged.is_nan() || lebesgue_lhs <= slack(rearranged),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modulus::{rho, theta, verify_equivalence, End, EquivalenceConfig};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1e-300)
    }

    #[test]
    fn constant_norm_matches_inverse() {
        let a = YoungFunction::power_log(2.0, 0.0, 3.0, 1.0).unwrap();
        let (c, l) = (3.0, 2.5);
        let f = SampledFunction::constant(c, l).unwrap();
        let got = luxemburg_norm(&a, &f, &MeasureSpec::default());
        let want = c / a.inverse(1.0 / l);
        assert!(close(got.value, want, 1e-8), "{} vs {want}", got.value);
        assert!(got.modular_at_value <= 1.0);
    }

    #[test]
    fn singular_profile_norm_is_sqrt_two() {
        let a = YoungFunction::power(2.0).unwrap();
        let m = MeasureSpec::lebesgue(0.0, 1.0);
        let got = luxemburg_norm_fn(&a, |r| r.powf(-0.25), &m, &[]);
        assert!(close(got.value, 2f64.sqrt(), 1e-9), "{}", got.value);
    }

    #[test]
    fn zero_function_has_zero_norm() {
        let a = YoungFunction::power(3.0).unwrap();
        let f = SampledFunction::constant(0.0, 4.0).unwrap();
        assert_eq!(luxemburg_norm(&a, &f, &MeasureSpec::default()).value, 0.0);
    }

    #[test]
    fn divergent_modular_gives_infinite_norm() {
        // t^{-1/2} is not square integrable near 0.
        let a = YoungFunction::power(2.0).unwrap();
        let f = SampledFunction::constant(0.0, 1.0).unwrap().with_tail(PowerTail { coef: 1.0, exponent: -0.4 }).unwrap();
        assert!(luxemburg_norm(&a, &f, &MeasureSpec::default()).is_infinite());
    }

    #[test]
    fn power_tail_norm_matches_closed_form() {
        // ∫_1^∞ x^{-2}/λ² dx = 1/λ².
        let a = YoungFunction::power(2.0).unwrap();
        let f = SampledFunction::constant(0.0, 1.0).unwrap().with_tail(PowerTail { coef: 1.0, exponent: -1.0 }).unwrap();
        let got = luxemburg_norm(&a, &f, &MeasureSpec::default());
        assert!(close(got.value, 1.0, 1e-8), "{}", got.value);
    }

    #[test]
    fn rearrangement_examples() {
        let ind = SampledFunction::indicator(2.0, 5.0).unwrap();
        let star = decreasing_rearrangement(&ind).unwrap();
        assert_eq!(star.grid(), &[0.0, 3.0, 5.0]);
        assert_eq!(star.values(), &[1.0, 0.0]);

        let lin = SampledFunction::from_fn(|x| x, 0.0, 1.0, 1000).unwrap();
        let star = decreasing_rearrangement(&lin).unwrap();
        for r in [0.05, 0.3, 0.77] {
            assert!((star.eval(r) - (1.0 - r)).abs() < 2e-3);
        }
        for t in [0.1, 0.5, 0.9] {
            assert!((star.distribution(t) - lin.distribution(t)).abs() < 1e-12);
        }

        let c = SampledFunction::constant(1.5, 3.0).unwrap();
        assert_eq!(decreasing_rearrangement(&c).unwrap(), c);
    }

    #[test]
    fn lorentz_norm_of_indicator() {
        let (p, q) = (2.0, 3.0);
        let a = YoungFunction::power(p).unwrap();
        let u = SampledFunction::indicator(0.0, 1.0).unwrap();
        let got = orlicz_lorentz_norm(&a, q, &u).unwrap();
        let want = (1.0 / (1.0 - p / q)).powf(1.0 / p);
        assert!(close(got.norm.value, want, 1e-8), "{} vs {want}", got.norm.value);
        assert_eq!(got.norm_condition, Some(true));
        let twice = orlicz_lorentz_norm(&a, q, &u.scaled(2.0)).unwrap();
        assert!(close(twice.norm.value, 2.0 * want, 1e-8));
        assert!(orlicz_lorentz_norm(&a, 1.0, &u).is_err());
        let zero = SampledFunction::constant(0.0, 1.0).unwrap();
        assert_eq!(orlicz_lorentz_norm(&a, q, &zero).unwrap().norm.value, 0.0);
    }

    #[test]
    fn kernel_near_closed_form() {
        let a = YoungFunction::power(2.0).unwrap();
        let params = SmoothnessParams::new(1, 0.75).unwrap();
        let k = KernelNorms::new(&a, &params);
        for r in [1e-4f64, 0.03, 1.0, 7.0, 1e4] {
            let want = r.powf(0.25) / 2f64.sqrt();
            assert!(close(k.near(r), want, 1e-6), "r = {r}: {} vs {want}", k.near(r));
        }
    }

    #[test]
    fn kernel_norms_track_moduli() {
        let a = YoungFunction::power_log(2.0, 0.0, 7.0, 0.0).unwrap();
        let params = SmoothnessParams::new(3, 1.5).unwrap();
        let k = KernelNorms::new(&a, &params);
        let th = theta(&a, &params).unwrap();
        let rh = rho(&a, &params).unwrap();
        let cfg = EquivalenceConfig::default();
        for end in [End::NearZero, End::NearInfinity] {
            let r0 = verify_equivalence(|r| k.near(r), |r| th.eval(r), end, &cfg).unwrap();
            assert!(r0.verdict, "{r0:?}");
            let r1 = verify_equivalence(|r| k.far(r), |r| rh.eval(r), end, &cfg).unwrap();
            assert!(r1.verdict, "{r1:?}");
        }
    }

    #[test]
    fn holder_examples() {
        let a = YoungFunction::power(2.0).unwrap();
        let u = SampledFunction::indicator(0.0, 1.0).unwrap();
        let rep = holder_check(&u, &u, &a, &MeasureSpec::default());
        assert!(close(rep.product_integral, 1.0, 1e-12));
        assert!(rep.holder_holds && rep.hardy_littlewood_holds);
        let zero = SampledFunction::constant(0.0, 1.0).unwrap();
        let rep = holder_check(&zero, &u, &a, &MeasureSpec::default());
        assert_eq!(rep.product_integral, 0.0);
        assert!(rep.holder_holds);
    }

    #[test]
    fn csv_round_trip() {
        let f = SampledFunction::step(vec![0.0, 0.5, 2.0], vec![3.0, 1.0]).unwrap();
        let dir = std::env::temp_dir().join(format!("orlicz-sampled-{}.csv", std::process::id()));
        std::fs::write(&dir, f.to_csv()).unwrap();
        let g = SampledFunction::from_csv_path(&dir).unwrap();
        std::fs::remove_file(&dir).ok();
        assert_eq!(f, g);
    }
}
