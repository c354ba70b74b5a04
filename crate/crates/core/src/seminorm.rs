//! The Gagliardo modular `J_{s,A}`, the fractional seminorm, trial-function
//! families, the pointwise modular bound and Hölder-quotient measurement.
//!
//! Both estimators reduce `J` to weighted samples `(v, w)` so that
//! `J(u/λ) = Σ w·A(v/λ) + Σ w'·Φ_A(v'/λ)` for every `λ`, where
//! `Φ_A(y) = ∫_0^y A(τ)/τ dτ` absorbs the analytically integrated near and
//! far ranges of `|x − y|`. The seminorm then only re-weights the samples.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conditions::{build_e, SmoothnessParams};
use crate::error::{OrliczError, Result};
use crate::modulus::ModulusOfContinuity;
use crate::norms::{solve_unit_ball, NormResult, SampledFunction};
use crate::quad::{self, log_add_exp, tanh_sinh_rule};
use crate::young::{YoungFunction, YoungSpec};

type PointFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
type RadialFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A function on `R^n` equal to `background` outside the centred ball of
/// radius `radius`.
#[derive(Clone)]
pub struct Field {
    n: u32,
    eval: PointFn,
    radial: Option<RadialFn>,
    radius: f64,
    background: f64,
    /// Radii (radial fields) or positions (`n = 1`) where the field is not smooth.
    breaks: Vec<f64>,
}

impl std::fmt::Debug for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Field")
            .field("n", &self.n)
            .field("radial", &self.radial.is_some())
            .field("radius", &self.radius)
            .field("background", &self.background)
            .finish()
    }
}

impl Field {
    /// `u(x) = profile(|x|)`.
    pub fn radial<F>(n: u32, profile: F, radius: f64, background: f64, mut breaks: Vec<f64>) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let profile: RadialFn = Arc::new(profile);
        let p = profile.clone();
        breaks.retain(|b| *b >= 0.0 && *b <= radius);
        breaks.extend([0.0, radius]);
        sort_dedup(&mut breaks);
        Self {
            n,
            eval: Arc::new(move |x: &[f64]| p(norm(x))),
            radial: Some(profile),
            radius,
            background,
            breaks,
        }
    }

    /// A function of one variable with the listed non-smooth points.
    pub fn line<F>(f: F, radius: f64, background: f64, mut breaks: Vec<f64>) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        breaks.retain(|b| b.abs() <= radius);
        breaks.extend([-radius, radius]);
        sort_dedup(&mut breaks);
        Self { n: 1, eval: Arc::new(move |x: &[f64]| f(x[0])), radial: None, radius, background, breaks }
    }

    /// A general function on `R^n`; only the Monte Carlo estimator applies
    /// when `n ≥ 2`.
    pub fn general<F>(n: u32, f: F, radius: f64, background: f64) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        let breaks = if n == 1 { vec![-radius, radius] } else { vec![0.0, radius] };
        Self { n, eval: Arc::new(f), radial: None, radius, background, breaks }
    }

    pub fn constant(n: u32, c: f64) -> Self {
        Self::radial(n, move |_| c, 1.0, c, Vec::new())
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn background(&self) -> f64 {
        self.background
    }

    pub fn is_radial(&self) -> bool {
        self.radial.is_some()
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        if norm(x) >= self.radius {
            return self.background;
        }
        (self.eval)(x)
    }

    fn eval_radius(&self, r: f64) -> f64 {
        if r >= self.radius {
            return self.background;
        }
        match &self.radial {
            Some(p) => p(r),
            None => {
                let mut x = vec![0.0; self.n as usize];
                x[0] = r;
                (self.eval)(&x)
            }
        }
    }

    /// `amplitude · u(x / dilation)`.
    pub fn rescaled(&self, amplitude: f64, dilation: f64) -> Self {
        let inner = self.eval.clone();
        let eval: PointFn = Arc::new(move |x: &[f64]| {
            let y: Vec<f64> = x.iter().map(|v| v / dilation).collect();
            amplitude * inner(&y)
        });
        let radial = self.radial.clone().map(|p| -> RadialFn { Arc::new(move |r| amplitude * p(r / dilation)) });
        Self {
            n: self.n,
            eval,
            radial,
            radius: self.radius * dilation,
            background: amplitude * self.background,
            breaks: self.breaks.iter().map(|b| b * dilation).collect(),
        }
    }

    pub fn scaled(&self, c: f64) -> Self {
        self.rescaled(c, 1.0)
    }

    /// Non-smooth positions on the line (`n = 1`), mirrored for radial fields.
    fn line_breaks(&self) -> Vec<f64> {
        let mut b: Vec<f64> = if self.radial.is_some() {
            self.breaks.iter().flat_map(|&r| [r, -r]).collect()
        } else {
            self.breaks.clone()
        };
        sort_dedup(&mut b);
        b
    }
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn sort_dedup(v: &mut Vec<f64>) {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * a.abs().max(b.abs()).max(1e-300));
}

/// `∫_0^y A(τ)/τ dτ`.
#[derive(Clone, Debug)]
enum LogIntegral {
    Power { p: f64, coef: f64 },
    Gauge { threshold: f64 },
    /// `ln Φ(e^y)` on a uniform grid in `y`.
    Table { y0: f64, step: f64, ln_phi: Vec<f64>, low_slope: f64 },
}

const PHI_SPAN: f64 = 250.0;
const PHI_STEP: f64 = 0.02;

impl LogIntegral {
    fn new(a: &YoungFunction) -> Self {
        match a.spec() {
            Some(YoungSpec::Power { p, coef }) => return Self::Power { p, coef },
            Some(YoungSpec::LinftyGauge { threshold }) => return Self::Gauge { threshold },
            _ => {}
        }
        let count = (2.0 * PHI_SPAN / PHI_STEP).round() as usize;
        let ys: Vec<f64> = (0..=count).map(|i| -PHI_SPAN + PHI_STEP * i as f64).collect();
        let la: Vec<f64> = ys.iter().map(|&y| a.ln_at_ln(y)).collect();
        // Below the grid `A(e^v) ≈ A(e^{y0}) e^{k (v − y0)}`.
        let low_slope = ((la[1] - la[0]) / PHI_STEP).max(1.0);
        let mut acc = if la[0].is_finite() { la[0] - low_slope.ln() } else { f64::NEG_INFINITY };
        let mut ln_phi = Vec::with_capacity(count + 1);
        ln_phi.push(acc);
        for i in 0..count {
            acc = log_add_exp(acc, quad::ln_segment(PHI_STEP, la[i], la[i + 1]));
            ln_phi.push(acc);
        }
        Self::Table { y0: -PHI_SPAN, step: PHI_STEP, ln_phi, low_slope }
    }

    fn eval(&self, y: f64) -> f64 {
        if !(y > 0.0) {
            return 0.0;
        }
        match *self {
            Self::Power { p, coef } => coef * y.powf(p) / p,
            Self::Gauge { threshold } => {
                if y <= threshold { 0.0 } else { f64::INFINITY }
            }
            Self::Table { y0, step, ref ln_phi, low_slope } => {
                let ly = y.ln();
                let pos = (ly - y0) / step;
                let last = ln_phi.len() - 1;
                if pos <= 0.0 {
                    return (ln_phi[0] + low_slope * (ly - y0)).exp();
                }
                if pos >= last as f64 {
                    let k = (ln_phi[last] - ln_phi[last - 1]) / step;
                    return (ln_phi[last] + k * (ly - y0 - step * last as f64)).exp();
                }
                let i = pos.floor() as usize;
                let t = pos - i as f64;
                let (l0, l1) = (ln_phi[i], ln_phi[i + 1]);
                if l1 == f64::INFINITY {
                    return f64::INFINITY;
                }
                if l0 == f64::NEG_INFINITY {
                    return (l1 + (t - 1.0) * 50.0).exp();
                }
                (l0 + t * (l1 - l0)).exp()
            }
        }
    }
}

/// How `J` is estimated.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum Estimator {
    /// Nested tanh-sinh quadrature: over `(x, ±, |x−y|)` on the line and over
    /// `(|x|, angle, |x−y|)` for radial fields in higher dimension.
    RadialQuadrature,
    /// Importance sampling with `|x − y|` log-uniform; the seed is mandatory.
    MonteCarlo { seed: u64, samples: usize, max_rel_stderr: f64 },
}

impl Estimator {
    pub fn monte_carlo(seed: u64, samples: usize) -> Self {
        Self::MonteCarlo { seed, samples, max_rel_stderr: 0.05 }
    }

    fn name(&self) -> &'static str {
        match self {
            Self::RadialQuadrature => "radial_quadrature",
            Self::MonteCarlo { .. } => "monte_carlo",
        }
    }
}

/// Value of `J` with its error bar.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModularEstimate {
    pub value: f64,
    pub stderr: f64,
    pub method: String,
    pub seed: Option<u64>,
    #[serde(rename = "N")]
    pub samples: Option<usize>,
    /// The small-scale contributions did not settle.
    pub diverges: bool,
}

/// What the modular is applied to: a field of fractional order below one,
/// or the top-order derivative of a trial function.
#[derive(Clone, Copy)]
pub enum Subject<'a> {
    Field(&'a Field),
    Trial(&'a TrialFunction),
}

impl<'a> From<&'a Field> for Subject<'a> {
    fn from(f: &'a Field) -> Self {
        Subject::Field(f)
    }
}

impl<'a> From<&'a TrialFunction> for Subject<'a> {
    fn from(t: &'a TrialFunction) -> Self {
        Subject::Trial(t)
    }
}

fn resolve(params: &SmoothnessParams, subject: Subject<'_>) -> Result<(Field, f64)> {
    match subject {
        Subject::Field(f) => {
            if params.s() >= 1.0 {
                return Err(OrliczError::Precondition(format!(
                    "a bare field takes fractional orders below 1 (s = {}); pass a trial function for higher orders",
                    params.s()
                )));
            }
            if f.n != params.n() {
                return Err(OrliczError::Precondition(format!("field lives in R^{}, parameters say n = {}", f.n, params.n())));
            }
            Ok((f.clone(), params.s()))
        }
        Subject::Trial(t) => Ok((t.top_derivative()?, params.frac_part())),
    }
}

#[derive(Clone, Debug)]
enum Store {
    Rule { main: Vec<(f64, f64)>, log: Vec<(f64, f64)> },
    /// Per Monte Carlo sample: main, far and near contributions.
    Samples(Vec<[(f64, f64); 3]>),
}

/// `J(u/λ)` for all `λ` from one set of samples.
#[derive(Clone, Debug)]
pub struct GagliardoSamples {
    store: Store,
    phi: LogIntegral,
    estimator: Estimator,
    diverges: bool,
}

const LINE_STEP: f64 = 0.25;
const OUTER_STEP: f64 = 0.25;
const CHUNK: f64 = 2.0;
const MAX_CHUNKS: usize = 40;
const MC_BATCH: usize = 1 << 14;

impl GagliardoSamples {
    pub fn build<'a>(a: &YoungFunction, params: &SmoothnessParams, u: impl Into<Subject<'a>>, estimator: Estimator) -> Result<Self> {
        let (field, sigma) = resolve(params, u.into())?;
        let phi = LogIntegral::new(a);
        let (store, diverges) = match estimator {
            Estimator::RadialQuadrature => {
                let proxy = |v: f64| {
                    let y = a.eval(v);
                    if y.is_finite() { y } else { v * v }
                };
                let mut main = Vec::new();
                let mut log = Vec::new();
                let div = if field.n == 1 {
                    quadrature_line(&field, sigma, &proxy, &mut main, &mut log)
                } else if field.radial.is_some() {
                    quadrature_radial(&field, sigma, &proxy, &mut main, &mut log)
                } else {
                    return Err(OrliczError::Precondition(
                        "deterministic quadrature in dimension ≥ 2 needs a radial field; use Monte Carlo".into(),
                    ));
                };
                (Store::Rule { main, log }, div)
            }
            Estimator::MonteCarlo { seed, samples, .. } => (Store::Samples(monte_carlo(&field, sigma, seed, samples)), false),
        };
        Ok(Self { store, phi, estimator, diverges })
    }

    pub fn diverges(&self) -> bool {
        self.diverges
    }

    /// `(J(u/λ), standard error)`.
    pub fn modular(&self, a: &YoungFunction, lambda: f64) -> (f64, f64) {
        if self.diverges {
            return (f64::INFINITY, 0.0);
        }
        let fa = |v: f64| if v > 0.0 { a.eval(v / lambda) } else { 0.0 };
        match &self.store {
            Store::Rule { main, log } => {
                let mut total = 0.0;
                for &(v, w) in main {
                    let y = fa(v);
                    if y != 0.0 {
                        total += w * y;
                    }
                }
                for &(v, w) in log {
                    let y = self.phi.eval(v / lambda);
                    if y != 0.0 {
                        total += w * y;
                    }
                }
                (total, 0.0)
            }
            Store::Samples(s) => {
                let term = |(v, w): (f64, f64), f: &dyn Fn(f64) -> f64| {
                    let y = f(v);
                    if y == 0.0 { 0.0 } else { w * y }
                };
                let phi = |v: f64| self.phi.eval(v / lambda);
                let (mut sum, mut sum2) = (0.0, 0.0);
                for row in s {
                    let t = term(row[0], &fa) + term(row[1], &phi) + term(row[2], &phi);
                    sum += t;
                    sum2 += t * t;
                }
                let n = s.len() as f64;
                let mean = sum / n;
                let var = (sum2 / n - mean * mean).max(0.0) * n / (n - 1.0).max(1.0);
                (mean, (var / n).sqrt())
            }
        }
    }

    pub fn estimate(&self, a: &YoungFunction) -> Result<ModularEstimate> {
        let (value, stderr) = self.modular(a, 1.0);
        let (seed, samples) = match self.estimator {
            Estimator::MonteCarlo { seed, samples, max_rel_stderr } => {
                if value > 0.0 && stderr > max_rel_stderr * value {
                    return Err(OrliczError::Inconclusive(format!(
                        "Monte Carlo relative standard error {:.3e} exceeds the cap {max_rel_stderr:.3e}",
                        stderr / value
                    )));
                }
                (Some(seed), Some(samples))
            }
            Estimator::RadialQuadrature => (None, None),
        };
        Ok(ModularEstimate {
            value,
            stderr,
            method: self.estimator.name().to_string(),
            seed,
            samples,
            diverges: self.diverges,
        })
    }
}

/// Integral over `w = ln ρ ∈ (−∞, ln top]` of `A(Δ(ρ)/ρ^σ)`, recorded as
/// samples; `delta` returns `(Δ, pair weight)`. Returns true on divergence.
fn line_samples<D, P>(delta: D, mut breaks: Vec<f64>, top: f64, sigma: f64, weight: f64, proxy: &P, out: &mut Vec<(f64, f64)>) -> bool
where
    D: Fn(f64) -> (f64, f64),
    P: Fn(f64) -> f64,
{
    breaks.retain(|&b| b > 0.0 && b < top);
    breaks.push(top);
    let mut lw: Vec<f64> = breaks.iter().map(|b| b.ln()).collect();
    sort_dedup(&mut lw);
    let mut total = 0.0;
    let piece = |lo: f64, hi: f64, out: &mut Vec<(f64, f64)>| -> f64 {
        let mut part = 0.0;
        for (w, wt) in tanh_sinh_rule(lo, hi, LINE_STEP) {
            let rho = w.exp();
            let (d, pair) = delta(rho);
            if d == 0.0 {
                continue;
            }
            let v = d * rho.powf(-sigma);
            let ww = weight * wt * pair;
            out.push((v, ww));
            part += ww * proxy(v);
        }
        part
    };
    for i in (1..lw.len()).rev() {
        let (lo, hi) = (lw[i - 1], lw[i]);
        let pieces = ((hi - lo) / CHUNK).ceil().max(1.0) as usize;
        for k in 0..pieces {
            let a = lo + (hi - lo) * k as f64 / pieces as f64;
            let b = lo + (hi - lo) * (k + 1) as f64 / pieces as f64;
            total += piece(a, b, out);
        }
    }
    let mut hi = lw[0];
    let mut quiet = 0;
    let mut prev = f64::INFINITY;
    for _ in 0..MAX_CHUNKS {
        let part = piece(hi - CHUNK, hi, out);
        total += part;
        hi -= CHUNK;
        if !total.is_finite() {
            return true;
        }
        if part <= 1e-12 * total || total == 0.0 {
            quiet += 1;
            if quiet >= 2 {
                return false;
            }
        } else {
            quiet = 0;
        }
        if part > 0.0 {
            prev = part;
        }
    }
    // Still contributing after many chunks: divergent unless the chunks decay.
    let last = piece(hi - CHUNK, hi, &mut Vec::new());
    last > 0.5 * prev && last > 1e-9 * total
}

fn quadrature_line<P: Fn(f64) -> f64>(
    field: &Field,
    sigma: f64,
    proxy: &P,
    main: &mut Vec<(f64, f64)>,
    log: &mut Vec<(f64, f64)>,
) -> bool {
    let r = field.radius;
    let pts = field.line_breaks();
    let top = 2.0 * r;
    let mut diverges = false;
    for piece in pts.windows(2) {
        for (x, wx) in tanh_sinh_rule(piece[0], piece[1], OUTER_STEP) {
            let ux = field.eval(&[x]);
            for dir in [1.0, -1.0] {
                let breaks: Vec<f64> = pts.iter().map(|&p| dir * (p - x)).filter(|&d| d > 0.0).collect();
                let delta = |rho: f64| {
                    let y = x + dir * rho;
                    let pair = if y.abs() < r { 0.5 } else { 1.0 };
                    ((field.eval(&[y]) - ux).abs(), pair)
                };
                diverges |= line_samples(delta, breaks, top, sigma, 2.0 * wx, proxy, main);
                let far = (ux - field.background).abs();
                if far > 0.0 {
                    log.push((far * top.powf(-sigma), 2.0 * wx / sigma));
                }
            }
        }
    }
    diverges
}

fn quadrature_radial<P: Fn(f64) -> f64>(
    field: &Field,
    sigma: f64,
    proxy: &P,
    main: &mut Vec<(f64, f64)>,
    log: &mut Vec<(f64, f64)>,
) -> bool {
    let n = field.n;
    let r = field.radius;
    let top = 2.0 * r;
    let sphere = quad::sphere_area(n);
    let factor = 2.0 * sphere * quad::sphere_area(n - 1);
    let radii = field.breaks.clone();
    let mut diverges = false;
    for piece in radii.windows(2) {
        for (r1, w1) in tanh_sinh_rule(piece[0], piece[1], OUTER_STEP) {
            let u1 = field.eval_radius(r1);
            let far = (u1 - field.background).abs();
            if far > 0.0 {
                log.push((far * top.powf(-sigma), 2.0 * sphere * sphere * r1.powi(n as i32 - 1) * w1 / sigma));
            }
            let mut thetas = vec![0.0, std::f64::consts::FRAC_PI_2, std::f64::consts::PI];
            for &b in &radii {
                if b > 0.0 && b < r1 {
                    let t = (b / r1).asin();
                    thetas.extend([t, std::f64::consts::PI - t]);
                }
            }
            sort_dedup(&mut thetas);
            for tp in thetas.windows(2) {
                for (th, wt) in tanh_sinh_rule(tp[0], tp[1], OUTER_STEP) {
                    let (c, s) = (th.cos(), th.sin());
                    let weight = factor * r1.powi(n as i32 - 1) * w1 * s.powi(n as i32 - 2) * wt;
                    if weight == 0.0 {
                        continue;
                    }
                    let mut breaks = Vec::new();
                    for &b in &radii {
                        let disc = b * b - r1 * r1 * s * s;
                        if disc >= 0.0 {
                            let q = disc.sqrt();
                            breaks.extend([-r1 * c + q, -r1 * c - q]);
                        }
                    }
                    let delta = |rho: f64| {
                        let ry = (r1 * r1 + rho * rho + 2.0 * r1 * rho * c).max(0.0).sqrt();
                        let pair = if ry < r { 0.5 } else { 1.0 };
                        ((field.eval_radius(ry) - u1).abs(), pair)
                    };
                    diverges |= line_samples(delta, breaks, top, sigma, weight, proxy, main);
                }
            }
        }
    }
    diverges
}

fn unit_vector(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    if n == 1 {
        return vec![if rng.gen::<bool>() { 1.0 } else { -1.0 }];
    }
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let l = norm(&v);
        if l > 1e-12 {
            return v.into_iter().map(|c| c / l).collect();
        }
    }
}

fn monte_carlo(field: &Field, sigma: f64, seed: u64, samples: usize) -> Vec<[(f64, f64); 3]> {
    let n = field.n as usize;
    let r = field.radius;
    let ball = quad::unit_ball_volume(field.n) * r.powi(n as i32);
    let sphere = quad::sphere_area(field.n);
    let top = 2.0 * r;
    let bottom = 1e-4 * r;
    let span = (top / bottom).ln();
    let eps = 1e-2 * bottom;
    let w_main = 2.0 * ball * sphere * span;
    let w_far = 2.0 * ball * sphere / sigma;
    let w_near = ball * sphere / (1.0 - sigma);
    let batches = samples.div_ceil(MC_BATCH);
    let rows: Vec<Vec<[(f64, f64); 3]>> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b as u64);
            let count = MC_BATCH.min(samples - b * MC_BATCH);
            let mut out = Vec::with_capacity(count);
            let mut y = vec![0.0; n];
            for _ in 0..count {
                let dir = unit_vector(n, &mut rng);
                let rad = r * rng.gen::<f64>().powf(1.0 / n as f64);
                let x: Vec<f64> = if n == 1 { vec![rad * dir[0]] } else { unit_vector(n, &mut rng).into_iter().map(|c| c * rad).collect() };
                let omega = unit_vector(n, &mut rng);
                let rho = (bottom.ln() + span * rng.gen::<f64>()).exp();
                let ux = field.eval(&x);
                for k in 0..n {
                    y[k] = x[k] + rho * omega[k];
                }
                let pair = if norm(&y) < r { 0.5 } else { 1.0 };
                let main = ((field.eval(&y) - ux).abs() * rho.powf(-sigma), w_main * pair);
                let far = ((ux - field.background).abs() * top.powf(-sigma), w_far);
                for k in 0..n {
                    y[k] = x[k] + eps * omega[k];
                }
                let up = field.eval(&y);
                for k in 0..n {
                    y[k] = x[k] - eps * omega[k];
                }
                let grad = (up - field.eval(&y)).abs() / (2.0 * eps);
                let near = (grad * bottom.powf(1.0 - sigma), w_near);
                out.push([main, far, near]);
            }
            out
        })
        .collect();
    rows.into_iter().flatten().collect()
}

/// `J_{s,A}(u)`; for trial functions of order `s > 1` the modular of the
/// top-order derivative with the fractional part of `s`.
pub fn gagliardo_modular<'a>(
    a: &YoungFunction,
    params: &SmoothnessParams,
    u: impl Into<Subject<'a>>,
    estimator: Estimator,
) -> Result<ModularEstimate> {
    GagliardoSamples::build(a, params, u, estimator)?.estimate(a)
}

/// `inf{λ > 0 : J(u/λ) ≤ 1}`; infinite when `J` diverges at every scale.
pub fn seminorm<'a>(a: &YoungFunction, params: &SmoothnessParams, u: impl Into<Subject<'a>>, estimator: Estimator) -> Result<NormResult> {
    let samples = GagliardoSamples::build(a, params, u, estimator)?;
    Ok(seminorm_from(&samples, a))
}

/// Seminorm from prebuilt samples.
pub fn seminorm_from(samples: &GagliardoSamples, a: &YoungFunction) -> NormResult {
    if samples.diverges() {
        return NormResult { value: f64::INFINITY, modular_at_value: f64::INFINITY, iterations: 0 };
    }
    solve_unit_ball(|l| samples.modular(a, l).0, 1.0)
}

/// The trial families used to test optimality and necessity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrialKind {
    /// `u(x) = ∫_{ω_n|x|^n}^∞ f(r) r^{-1+s/n} dr`, for `s < 1`.
    Radial,
    /// The `[s]`-fold iterated version of [`TrialKind::Radial`].
    RadialHigher,
    /// `x_1` times the iterated profile integral with exponent `(s−1)/n`.
    Odd,
    /// `u_k(x) = k^{s−n} ξ(x/k)` for a fixed bump `ξ` with `∇ξ(0) ≠ 0`.
    ScalingFamily,
}

/// `I(t) = ∫_t^∞ f(r) r^α (r − t)^m dr` for a step profile and `m ∈ {0, 1}`.
#[derive(Clone, Debug)]
struct ProfileIntegral {
    grid: Vec<f64>,
    values: Vec<f64>,
    alpha: f64,
    order: u32,
    /// Suffix sums of `∫ f r^α` and `∫ f r^{α+1}` over whole cells.
    tail0: Vec<f64>,
    tail1: Vec<f64>,
}

fn power_integral(beta: f64, a: f64, b: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    if (beta + 1.0).abs() < 1e-14 {
        return (b / a).ln();
    }
    if a == 0.0 {
        return if beta > -1.0 { b.powf(beta + 1.0) / (beta + 1.0) } else { f64::INFINITY };
    }
    (b.powf(beta + 1.0) - a.powf(beta + 1.0)) / (beta + 1.0)
}

impl ProfileIntegral {
    fn new(f: &SampledFunction, alpha: f64, order: u32) -> Self {
        let grid = f.grid().to_vec();
        let values = f.values().to_vec();
        let k = values.len();
        let mut tail0 = vec![0.0; k + 1];
        let mut tail1 = vec![0.0; k + 1];
        for i in (0..k).rev() {
            let v = values[i];
            let c0 = if v == 0.0 { 0.0 } else { v * power_integral(alpha, grid[i], grid[i + 1]) };
            let c1 = if v == 0.0 { 0.0 } else { v * power_integral(alpha + 1.0, grid[i], grid[i + 1]) };
            tail0[i] = tail0[i + 1] + c0;
            tail1[i] = tail1[i + 1] + c1;
        }
        Self { grid, values, alpha, order, tail0, tail1 }
    }

    /// `∫_t^∞ f(r) r^β dr` for `β ∈ {α, α+1}`.
    fn tail(&self, t: f64, plus_one: bool) -> f64 {
        let (beta, sums) = if plus_one { (self.alpha + 1.0, &self.tail1) } else { (self.alpha, &self.tail0) };
        let end = self.grid[self.grid.len() - 1];
        if t >= end {
            return 0.0;
        }
        if t <= self.grid[0] {
            return sums[0];
        }
        let i = self.grid.partition_point(|&g| g <= t) - 1;
        let v = self.values[i];
        let part = if v == 0.0 { 0.0 } else { v * power_integral(beta, t, self.grid[i + 1]) };
        part + sums[i + 1]
    }

    fn value(&self, t: f64) -> f64 {
        match self.order {
            0 => self.tail(t, false),
            _ => {
                let far = self.tail(t, true);
                if t > 0.0 { far - t * self.tail(t, false) } else { far }
            }
        }
    }

    /// `dI/dt` for `m = 1`.
    fn slope(&self, t: f64) -> f64 {
        if t > 0.0 { -self.tail(t, false) } else { 0.0 }
    }
}

/// `∫_a^b f(r) r^β dr` for a step profile.
fn profile_moment(f: &SampledFunction, beta: f64, a: f64, b: f64) -> f64 {
    f.cells()
        .map(|(l, r, v)| {
            let (l, r) = (l.max(a), r.min(b));
            if r <= l || v == 0.0 { 0.0 } else { v * power_integral(beta, l, r) }
        })
        .sum()
}

/// `ξ(x) = (1 + x_1/2) exp(1 − 1/(1 − |x|²))` on the unit ball.
pub fn bump(x: &[f64]) -> f64 {
    let r2: f64 = x.iter().map(|v| v * v).sum();
    if r2 >= 1.0 {
        return 0.0;
    }
    (1.0 + 0.5 * x[0]) * (1.0 - 1.0 / (1.0 - r2)).exp()
}

/// A trial function together with the data its bounds refer to.
#[derive(Clone)]
pub struct TrialFunction {
    kind: TrialKind,
    params: SmoothnessParams,
    profile: Option<SampledFunction>,
    scale: f64,
    integral: Option<Arc<ProfileIntegral>>,
}

impl std::fmt::Debug for TrialFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TrialFunction")
            .field("kind", &self.kind)
            .field("params", &self.params)
            .field("scale", &self.scale)
            .finish()
    }
}

fn check_profile(f: &SampledFunction) -> Result<()> {
    if f.tail().is_some() {
        return Err(OrliczError::Precondition("trial profiles must have bounded support".into()));
    }
    if let Some(v) = f.values().iter().find(|v| **v < 0.0) {
        return Err(OrliczError::Precondition(format!("trial profiles must be nonnegative, found {v}")));
    }
    if let Some(w) = f.values().windows(2).find(|w| w[1] > w[0]) {
        return Err(OrliczError::Precondition(format!(
            "trial profiles must be non-increasing, found {} followed by {}",
            w[0], w[1]
        )));
    }
    if f.grid()[0] > 0.0 && f.values().iter().any(|v| *v > 0.0) {
        return Err(OrliczError::Precondition("a non-increasing profile cannot vanish near 0 and be positive later".into()));
    }
    Ok(())
}

/// Build a trial function; `profile` is required except for the scaling
/// family, which needs the scale `k`.
pub fn make_trial(kind: TrialKind, profile: Option<SampledFunction>, params: &SmoothnessParams, k: Option<f64>) -> Result<TrialFunction> {
    let n = params.n() as f64;
    let s = params.s();
    let order = params.int_part();
    if kind == TrialKind::ScalingFamily {
        let k = k.ok_or_else(|| OrliczError::Precondition("the scaling family needs a scale k".into()))?;
        if !(k > 0.0) {
            return Err(OrliczError::Precondition(format!("scale must be positive, got {k}")));
        }
        return Ok(TrialFunction { kind, params: *params, profile: None, scale: k, integral: None });
    }
    let f = profile.ok_or_else(|| OrliczError::Precondition("this trial kind needs a profile".into()))?;
    check_profile(&f)?;
    let (alpha, needed) = match kind {
        TrialKind::Radial => (-1.0 + s / n, 0),
        TrialKind::RadialHigher => (-2.0 + s / n, 1),
        TrialKind::Odd => (-2.0 + (s - 1.0) / n, 1),
        TrialKind::ScalingFamily => unreachable!(),
    };
    if order != needed {
        return Err(OrliczError::Precondition(format!(
            "{kind:?} trials are implemented for [s] = {needed}, got s = {s}"
        )));
    }
    let integral = Arc::new(ProfileIntegral::new(&f, alpha, needed));
    Ok(TrialFunction { kind, params: *params, profile: Some(f), scale: 1.0, integral: Some(integral) })
}

impl TrialFunction {
    pub fn kind(&self) -> TrialKind {
        self.kind
    }

    pub fn profile(&self) -> Option<&SampledFunction> {
        self.profile.as_ref()
    }

    fn t_of(&self, x: &[f64]) -> f64 {
        let n = self.params.n();
        self.params.omega_n() * norm(x).powi(n as i32)
    }

    /// Radius of the support ball.
    pub fn support_radius(&self) -> f64 {
        match &self.profile {
            Some(f) => (f.support_end() / self.params.omega_n()).powf(1.0 / self.params.n() as f64),
            None => self.scale,
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match self.kind {
            TrialKind::ScalingFamily => {
                let k = self.scale;
                let y: Vec<f64> = x.iter().map(|v| v / k).collect();
                k.powf(self.params.s() - self.params.n() as f64) * bump(&y)
            }
            TrialKind::Radial | TrialKind::RadialHigher => self.integral.as_ref().unwrap().value(self.t_of(x)),
            TrialKind::Odd => x[0] * self.integral.as_ref().unwrap().value(self.t_of(x)),
        }
    }

    /// The function whose fractional modular of order `{s}` defines the
    /// seminorm: `u` itself for `s < 1`, its derivative for odd trials on
    /// the line.
    pub fn top_derivative(&self) -> Result<Field> {
        let n = self.params.n();
        let radius = self.support_radius();
        let order = self.params.int_part();
        match (self.kind, order) {
            (TrialKind::ScalingFamily, 0) => {
                let t = self.clone();
                Ok(if n == 1 {
                    Field::line(move |x| t.eval(&[x]), radius, 0.0, Vec::new())
                } else {
                    Field::general(n, move |x| t.eval(x), radius, 0.0)
                })
            }
            (TrialKind::Radial, 0) => {
                let ig = self.integral.clone().unwrap();
                let omega = self.params.omega_n();
                let breaks = self.radial_breaks();
                Ok(Field::radial(n, move |r| ig.value(omega * r.powi(n as i32)), radius, 0.0, breaks))
            }
            (TrialKind::Odd, 1) if n == 1 => {
                // u(x) = x I(2|x|), so u'(x) = I(t) + t I'(t) with t = 2|x|.
                let ig = self.integral.clone().unwrap();
                let breaks = self.radial_breaks();
                Ok(Field::radial(
                    1,
                    move |r| {
                        let t = 2.0 * r;
                        ig.value(t) + t * ig.slope(t)
                    },
                    radius,
                    0.0,
                    breaks,
                ))
            }
            _ => Err(OrliczError::Precondition(format!(
                "the order-{order} derivative of {:?} trials is available on the line for odd trials only (n = {n})",
                self.kind
            ))),
        }
    }

    fn radial_breaks(&self) -> Vec<f64> {
        let n = self.params.n() as f64;
        let omega = self.params.omega_n();
        self.profile
            .as_ref()
            .map(|f| f.grid().iter().map(|g| (g / omega).powf(1.0 / n)).collect())
            .unwrap_or_default()
    }

    /// Lower bound on `|u(0) − u(x)|` for radial kinds and on
    /// `|u(x_1 e_1) − u(0)|` for odd trials.
    pub fn difference_lower_bound(&self, x: &[f64]) -> Option<f64> {
        let f = self.profile.as_ref()?;
        let n = self.params.n() as f64;
        let s = self.params.s();
        let m = self.params.int_part();
        let fact = (1..=m).map(|i| i as f64).product::<f64>();
        let omega = self.params.omega_n();
        match self.kind {
            TrialKind::Radial | TrialKind::RadialHigher => {
                Some(profile_moment(f, -1.0 + s / n, 0.0, self.t_of(x)) / fact)
            }
            TrialKind::Odd => {
                let x1 = x[0].abs();
                let lo = 2.0 * omega * x1.powf(n);
                Some(2f64.powi(-(m as i32)) * x1 * profile_moment(f, -1.0 + (s - 1.0) / n, lo, f64::INFINITY) / fact)
            }
            TrialKind::ScalingFamily => None,
        }
    }
}

/// Left and right sides of the pointwise modular inequality at one pair.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModularBoundReport {
    pub difference: f64,
    /// `|x−y|^s B^{-1}(J/|x−y|^n)`, the bound without its constant.
    pub scale: f64,
    /// `difference / scale`; the smallest admissible constant at this pair.
    pub ratio: f64,
}

impl ModularBoundReport {
    pub fn holds_with(&self, c: f64) -> bool {
        self.difference <= c * self.scale * (1.0 + 1e-12)
    }
}

/// `J` and `B = Ẽ` prepared once for many pairs.
pub struct ModularBound {
    params: SmoothnessParams,
    field: Field,
    modular: f64,
    b: YoungFunction,
}

impl ModularBound {
    pub fn new<'a>(a: &YoungFunction, params: &SmoothnessParams, u: impl Into<Subject<'a>>) -> Result<Self> {
        if params.s() >= 1.0 {
            return Err(OrliczError::Precondition(format!("the modular bound needs s < 1, got {}", params.s())));
        }
        let (field, _) = resolve(params, u.into())?;
        let est = gagliardo_modular(a, params, &field, Estimator::RadialQuadrature)?;
        if est.diverges || !est.value.is_finite() {
            return Err(OrliczError::Precondition("the Gagliardo modular of u diverges".into()));
        }
        let e = build_e(a, params)?;
        let b = e.conjugate();
        Ok(Self { params: *params, field, modular: est.value, b })
    }

    pub fn modular(&self) -> f64 {
        self.modular
    }

    /// `|x−y|^s B^{-1}(J/|x−y|^n)` as a function of the distance alone.
    pub fn scale_at(&self, d: f64) -> f64 {
        if d == 0.0 || self.modular == 0.0 {
            return 0.0;
        }
        d.powf(self.params.s()) * self.b.inverse(self.modular / d.powi(self.params.n() as i32))
    }

    /// `|u(x) − u(y)|`.
    pub fn difference(&self, x: &[f64], y: &[f64]) -> f64 {
        (self.field.eval(x) - self.field.eval(y)).abs()
    }

    pub fn check(&self, x: &[f64], y: &[f64]) -> ModularBoundReport {
        let d: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        let difference = self.difference(x, y);
        let scale = self.scale_at(d);
        let ratio = if difference == 0.0 { 0.0 } else { difference / scale };
        ModularBoundReport { difference, scale, ratio }
    }
}

/// One-shot form of [`ModularBound::check`].
pub fn check_modular_bound<'a>(
    a: &YoungFunction,
    params: &SmoothnessParams,
    u: impl Into<Subject<'a>>,
    x: &[f64],
    y: &[f64],
) -> Result<ModularBoundReport> {
    Ok(ModularBound::new(a, params, u)?.check(x, y))
}

/// Deterministic sources of point pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum PairSampler {
    Pairs(Vec<(Vec<f64>, Vec<f64>)>),
    /// `x` uniform in a ball and `|x−y|` log-uniform within each of
    /// `decades` decades below `radius`.
    Stratified { n: u32, seed: u64, radius: f64, decades: u32, per_decade: usize },
}

impl PairSampler {
    pub fn pairs(&self) -> Vec<(Vec<f64>, Vec<f64>)> {
        match self {
            Self::Pairs(p) => p.clone(),
            Self::Stratified { n, seed, radius, decades, per_decade } => {
                let n = *n as usize;
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let mut out = Vec::with_capacity(*decades as usize * per_decade);
                for k in 0..*decades {
                    for _ in 0..*per_decade {
                        let dir = unit_vector(n, &mut rng);
                        let rad = radius * rng.gen::<f64>().powf(1.0 / n as f64);
                        let x: Vec<f64> = dir.iter().map(|c| c * rad).collect();
                        let omega = unit_vector(n, &mut rng);
                        let d = radius * 10f64.powf(-(k as f64) - rng.gen::<f64>());
                        let y: Vec<f64> = x.iter().zip(&omega).map(|(a, o)| a + d * o).collect();
                        out.push((x, y));
                    }
                }
                out
            }
        }
    }
}

/// `sup |u(x) − u(y)| / ω(|x − y|)` over the sampled pairs.
pub fn holder_quotient<U: Fn(&[f64]) -> f64>(u: U, omega: &ModulusOfContinuity, sampler: &PairSampler) -> f64 {
    sampler
        .pairs()
        .iter()
        .map(|(x, y)| {
            let d: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
            let diff = (u(x) - u(y)).abs();
            if diff == 0.0 { 0.0 } else { diff / omega.eval(d) }
        })
        .fold(0.0, f64::max)
}

/// Replace `g` on `(0, 2R)` by its mean over `(R, 2R)`.
pub fn flatten_tail(g: &SampledFunction, r: f64) -> Result<SampledFunction> {
    if !(r > 0.0) {
        return Err(OrliczError::Precondition(format!("R must be positive, got {r}")));
    }
    if let Some((l, _, v)) = g.cells().find(|c| c.2 < 0.0) {
        return Err(OrliczError::Precondition(format!("g must be nonnegative; g = {v} at {l}")));
    }
    if let Some((l, _, v)) = g.cells().find(|c| c.0 < r && c.2 != 0.0) {
        return Err(OrliczError::Precondition(format!("g must vanish on (0, R); g = {v} at {l}")));
    }
    let beyond: Vec<(f64, f64, f64)> = g.cells().filter(|c| c.1 > r).collect();
    if let Some(w) = beyond.windows(2).find(|w| w[1].2 > w[0].2) {
        return Err(OrliczError::Precondition(format!(
            "g must be non-increasing on (R, ∞); it rises from {} to {} at {}",
            w[0].2, w[1].2, w[1].0
        )));
    }
    let avg = profile_moment(g, 0.0, r, 2.0 * r) / r;
    let mut grid = vec![0.0, 2.0 * r];
    let mut values = vec![avg];
    for (_, right, v) in g.cells().filter(|c| c.1 > 2.0 * r) {
        values.push(v);
        grid.push(right);
    }
    let f = SampledFunction::step(grid, values)?;
    match g.tail() {
        Some(t) => f.with_tail(t),
        None => Ok(f),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: u32, s: f64) -> SmoothnessParams {
        SmoothnessParams::new(n, s).unwrap()
    }

    #[test]
    fn constants_have_zero_modular() {
        let a = YoungFunction::power(2.0).unwrap();
        let c = Field::constant(1, 3.0);
        let est = gagliardo_modular(&a, &params(1, 0.5), &c, Estimator::RadialQuadrature).unwrap();
        assert_eq!(est.value, 0.0);
        let mc = gagliardo_modular(&a, &params(1, 0.5), &c, Estimator::monte_carlo(7, 20_000)).unwrap();
        assert_eq!(mc.value, 0.0);
        assert_eq!(seminorm(&a, &params(1, 0.5), &c, Estimator::RadialQuadrature).unwrap().value, 0.0);
    }

    #[test]
    fn radial_trial_value_at_origin() {
        let p = params(1, 0.5);
        let f = SampledFunction::indicator(0.0, 1.0).unwrap();
        let u = make_trial(TrialKind::Radial, Some(f), &p, None).unwrap();
        assert!((u.eval(&[0.0]) - 2.0).abs() < 1e-12);
        // u(x) = 2(1 − √(2|x|)) on |x| < 1/2.
        assert!((u.eval(&[0.125]) - 1.0).abs() < 1e-12);
        assert_eq!(u.eval(&[0.7]), 0.0);
    }

    #[test]
    fn odd_trial_vanishes_at_origin() {
        let p = params(1, 1.5);
        let f = SampledFunction::step(vec![0.0, 0.5, 1.0], vec![2.0, 1.0]).unwrap();
        let u = make_trial(TrialKind::Odd, Some(f), &p, None).unwrap();
        assert_eq!(u.eval(&[0.0]), 0.0);
        // The derivative field matches a central difference of u.
        let du = u.top_derivative().unwrap();
        for x in [0.05, 0.2, 0.3] {
            let h = 1e-6;
            let fd = (u.eval(&[x + h]) - u.eval(&[x - h])) / (2.0 * h);
            assert!((du.eval(&[x]) - fd).abs() < 1e-5, "{x}: {} vs {fd}", du.eval(&[x]));
        }
    }

    #[test]
    fn scaling_family_at_unit_scale_is_the_bump() {
        let p = params(2, 0.5);
        let u = make_trial(TrialKind::ScalingFamily, None, &p, Some(1.0)).unwrap();
        for x in [[0.0, 0.0], [0.3, -0.2], [0.9, 0.1]] {
            assert_eq!(u.eval(&x), bump(&x));
        }
    }

    #[test]
    fn quadrature_power_two_closed_form() {
        // u = (1 − |x|)_+ on the line with A = t²; oracle: nested adaptive quadrature.
        let a = YoungFunction::power(2.0).unwrap();
        let p = params(1, 0.5);
        let u = Field::radial(1, |r| (1.0 - r).max(0.0), 1.0, 0.0, vec![]);
        let est = gagliardo_modular(&a, &p, &u, Estimator::RadialQuadrature).unwrap();
        let g = |x: f64| (1.0 - x.abs()).max(0.0);
        let inner = |x: f64| {
            if !x.is_finite() {
                return 0.0;
            }
            let f = |y: f64| {
                let d = (x - y).abs();
                if d == 0.0 { 0.0 } else { ((g(x) - g(y)) / d).powi(2) }
            };
            quad::integrate_pieces(f, &[-1.0, 0.0, 1.0, x], 1e-10).value
                + quad::integrate_to_infinity(|y| f(y), 1.0, 1e-10).value
                + quad::integrate_to_infinity(|y| f(-y), 1.0, 1e-10).value
        };
        let oracle = quad::integrate_pieces(inner, &[-1.0, 0.0, 1.0], 1e-8).value
            + 2.0 * quad::integrate_to_infinity(|x| inner(x), 1.0, 1e-8).value;
        assert!((est.value - oracle).abs() < 1e-4 * oracle, "{} vs {oracle}", est.value);
    }

    #[test]
    fn monte_carlo_agrees_with_quadrature() {
        let a = YoungFunction::power(2.0).unwrap();
        let p = params(1, 0.5);
        let f = SampledFunction::step(vec![0.0, 0.5, 1.0], vec![1.0, 0.5]).unwrap();
        let u = make_trial(TrialKind::Radial, Some(f), &p, None).unwrap();
        let rq = gagliardo_modular(&a, &p, &u, Estimator::RadialQuadrature).unwrap();
        let mc = gagliardo_modular(&a, &p, &u, Estimator::monte_carlo(11, 200_000)).unwrap();
        assert!((rq.value - mc.value).abs() < 4.0 * mc.stderr, "{} vs {} ± {}", rq.value, mc.value, mc.stderr);
    }

    #[test]
    fn monte_carlo_is_reproducible() {
        let a = YoungFunction::power(3.0).unwrap();
        let p = params(2, 0.5);
        let u = Field::radial(2, |r| (1.0 - r * r).max(0.0), 1.0, 0.0, vec![]);
        let e1 = gagliardo_modular(&a, &p, &u, Estimator::monte_carlo(5, 50_000)).unwrap();
        let e2 = gagliardo_modular(&a, &p, &u, Estimator::monte_carlo(5, 50_000)).unwrap();
        assert_eq!(e1, e2);
    }

    #[test]
    fn radial_quadrature_in_the_plane_matches_monte_carlo() {
        let a = YoungFunction::power(2.0).unwrap();
        let p = params(2, 0.5);
        let u = Field::radial(2, |r| (1.0 - r * r).max(0.0), 1.0, 0.0, vec![]);
        let rq = gagliardo_modular(&a, &p, &u, Estimator::RadialQuadrature).unwrap();
        let mc = gagliardo_modular(&a, &p, &u, Estimator::monte_carlo(3, 200_000)).unwrap();
        assert!((rq.value - mc.value).abs() < 4.0 * mc.stderr, "{} vs {} ± {}", rq.value, mc.value, mc.stderr);
    }

    #[test]
    fn seminorm_is_homogeneous() {
        let a = YoungFunction::power_log(2.0, 0.0, 3.0, 1.0).unwrap();
        let p = params(1, 0.5);
        let u = Field::radial(1, |r| (1.0 - r).max(0.0), 1.0, 0.0, vec![]);
        let s1 = seminorm(&a, &p, &u, Estimator::RadialQuadrature).unwrap().value;
        let s2 = seminorm(&a, &p, &u.scaled(2.0), Estimator::RadialQuadrature).unwrap().value;
        assert!((s2 - 2.0 * s1).abs() < 1e-6 * s1, "{s1} {s2}");
    }

    #[test]
    fn flatten_tail_examples() {
        let r = 1.5;
        let g = SampledFunction::indicator(r, 2.0 * r).unwrap();
        let f = flatten_tail(&g, r).unwrap();
        assert_eq!(f.grid(), &[0.0, 2.0 * r]);
        assert!((f.values()[0] - 1.0).abs() < 1e-12);

        let g = SampledFunction::step(vec![0.0, r, 3.0 * r], vec![0.0, 1.0]).unwrap();
        let f = flatten_tail(&g, r).unwrap();
        assert_eq!(f.grid(), &[0.0, 2.0 * r, 3.0 * r]);
        assert_eq!(f.values(), &[1.0, 1.0]);

        let bad = SampledFunction::step(vec![0.0, 1.0, 2.0], vec![1.0, 1.0]).unwrap();
        assert!(flatten_tail(&bad, 1.5).is_err());
    }

    #[test]
    fn lower_bounds_hold() {
        let p = params(1, 0.5);
        let f = SampledFunction::step(vec![0.0, 0.3, 1.0], vec![2.0, 1.0]).unwrap();
        let u = make_trial(TrialKind::Radial, Some(f.clone()), &p, None).unwrap();
        for x in [0.01, 0.1, 0.4] {
            let lb = u.difference_lower_bound(&[x]).unwrap();
            assert!((u.eval(&[0.0]) - u.eval(&[x])).abs() >= lb * (1.0 - 1e-12));
        }
        let p = params(1, 1.5);
        let u = make_trial(TrialKind::Odd, Some(f), &p, None).unwrap();
        for x in [0.01, 0.1, 0.4] {
            let lb = u.difference_lower_bound(&[x]).unwrap();
            assert!((u.eval(&[x]) - u.eval(&[0.0])).abs() >= lb * (1.0 - 1e-12));
        }
    }
}
