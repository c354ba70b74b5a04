//! Quadrature and log-domain helpers shared by the other modules.
//!
//! Integrals in this crate range over many decades and often carry
//! integrable endpoint singularities, so the workhorse is double-exponential
//! (tanh-sinh) quadrature applied piecewise between known breakpoints.

/// Result of a quadrature call.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    /// Difference between the last two refinement levels.
    pub error: f64,
}

/// `ln(e^a + e^b)` without overflow.
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    if a == f64::INFINITY || b == f64::INFINITY {
        return f64::INFINITY;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// `ln(1 + e^x)`.
pub fn softplus(x: f64) -> f64 {
    if x > 35.0 {
        x + (-x).exp()
    } else if x < -35.0 {
        x.exp()
    } else {
        x.exp().ln_1p()
    }
}

/// `ln((e^d - 1)/d)`, continuous at `d = 0`.
pub fn ln_expm1_over(d: f64) -> f64 {
    if d.abs() < 1e-8 {
        d / 2.0
    } else if d > 0.0 {
        d + (-(-d).exp_m1()).ln() - d.ln()
    } else {
        (-d.exp_m1()).ln() - (-d).ln()
    }
}

/// `ln ∫_0^h exp(wa + (wb - wa) x / h) dx` for a log-linear segment.
pub fn ln_segment(h: f64, wa: f64, wb: f64) -> f64 {
    match (wa.is_finite(), wb.is_finite()) {
        (true, true) => h.ln() + wa + ln_expm1_over(wb - wa),
        (false, true) if wa < 0.0 => h.ln() + wb - std::f64::consts::LN_2,
        (true, false) if wb < 0.0 => h.ln() + wa - std::f64::consts::LN_2,
        (false, false) if wa < 0.0 && wb < 0.0 => f64::NEG_INFINITY,
        _ => f64::INFINITY,
    }
}

const MAX_LEVEL: usize = 9;

/// Tanh-sinh quadrature of `f` on a finite interval `[a, b]`.
///
/// Nodes never touch the endpoints; the distance to the nearer endpoint is
/// computed directly so singular integrands at `a = 0` resolve down to
/// subnormal scales.
pub fn tanh_sinh<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, rel_tol: f64) -> Quadrature {
    if !(b > a) {
        return Quadrature { value: 0.0, error: 0.0 };
    }
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let floor_left = if a == 0.0 { 1e-300 } else { a.abs() * 4.0 * f64::EPSILON };
    let floor_right = if b == 0.0 { 1e-300 } else { b.abs() * 4.0 * f64::EPSILON };
    let pi2 = std::f64::consts::FRAC_PI_2;

    // Sum over nodes j*h for j in the given parity class (all when step == 1).
    let eval_level = |h: f64, start: i64, step: i64, f: &mut F| -> f64 {
        let mut sum = 0.0;
        if start == 0 {
            sum += pi2 * f(mid);
        }
        let mut j = if start == 0 { step } else { start };
        loop {
            let t = j as f64 * h;
            let u = pi2 * t.sinh();
            let e2u = (2.0 * u).exp();
            // 1 - tanh(u) = 2 / (e^{2u} + 1)
            let comp = 2.0 / (e2u + 1.0);
            let delta = half * comp;
            let cu = u.cosh();
            let w = pi2 * t.cosh() / (cu * cu);
            let left_ok = delta > floor_left;
            let right_ok = delta > floor_right;
            if !w.is_finite() || w < 1e-300 || !(left_ok || right_ok) {
                break;
            }
            let xl = a + delta;
            let xr = b - delta;
            let mut contrib = 0.0;
            if left_ok && xl > a && xl < b {
                let v = f(xl);
                if v != 0.0 {
                    contrib += v;
                }
            }
            if right_ok && xr < b && xr > a {
                let v = f(xr);
                if v != 0.0 {
                    contrib += v;
                }
            }
            sum += w * contrib;
            j += step;
            if j > 10_000 {
                break;
            }
        }
        sum
    };

    let mut h = 1.0;
    let mut sum = eval_level(h, 0, 1, &mut f);
    let mut prev = sum * h * half;
    let mut err = f64::INFINITY;
    for _level in 1..=MAX_LEVEL {
        h *= 0.5;
        sum += eval_level(h, 1, 2, &mut f);
        let cur = sum * h * half;
        err = (cur - prev).abs();
        if err <= rel_tol * cur.abs() || (cur == 0.0 && prev == 0.0) {
            return Quadrature { value: cur, error: err };
        }
        if !cur.is_finite() {
            return Quadrature { value: cur, error: f64::INFINITY };
        }
        prev = cur;
    }
    Quadrature { value: prev, error: err }
}

/// Fixed tanh-sinh nodes and weights on `[a, b]` with step `h` in the
/// transformed variable, truncated where weights drop below `1e-18`.
pub fn tanh_sinh_rule(a: f64, b: f64, h: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    if !(b > a) {
        return out;
    }
    let half = 0.5 * (b - a);
    let pi2 = std::f64::consts::FRAC_PI_2;
    out.push((0.5 * (a + b), half * h * pi2));
    let mut j = 1;
    loop {
        let t = j as f64 * h;
        let u = pi2 * t.sinh();
        let delta = half * 2.0 / ((2.0 * u).exp() + 1.0);
        let cu = u.cosh();
        let w = half * h * pi2 * t.cosh() / (cu * cu);
        if !(w > 1e-18 * half) || !(delta > 0.0) {
            break;
        }
        let (xl, xr) = (a + delta, b - delta);
        if xl > a && xl < b {
            out.push((xl, w));
        }
        if xr < b && xr > a {
            out.push((xr, w));
        }
        j += 1;
    }
    out
}

/// Tanh-sinh over consecutive breakpoints (sorted, deduplicated internally).
pub fn integrate_pieces<F: FnMut(f64) -> f64>(mut f: F, breaks: &[f64], rel_tol: f64) -> Quadrature {
    let mut pts: Vec<f64> = breaks.iter().copied().filter(|x| x.is_finite()).collect();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * a.abs().max(b.abs()));
    let mut total = Quadrature { value: 0.0, error: 0.0 };
    for w in pts.windows(2) {
        let q = tanh_sinh(&mut f, w[0], w[1], rel_tol);
        total.value += q.value;
        total.error += q.error;
    }
    total
}

/// `∫_a^∞ f` via `x = a + e^w` on `w ∈ [w_lo, w_hi]`, split into unit chunks,
/// stopping once chunks fall below `rel_tol` of the running total.
pub fn integrate_to_infinity<F: FnMut(f64) -> f64>(mut f: F, a: f64, rel_tol: f64) -> Quadrature {
    let scale = if a > 0.0 { a } else { 1.0 };
    let mut g = |w: f64| {
        let d = scale * w.exp();
        let v = f(a + d);
        if v == 0.0 { 0.0 } else { v * d }
    };
    let mut total = Quadrature { value: 0.0, error: 0.0 };
    // Near a: w from -60 up to 0.
    let q = tanh_sinh(&mut g, -60.0, 0.0, rel_tol);
    total.value += q.value;
    total.error += q.error;
    let mut w = 0.0;
    let mut quiet = 0;
    while w < 700.0 {
        let q = tanh_sinh(&mut g, w, w + 2.0, rel_tol);
        total.value += q.value;
        total.error += q.error;
        w += 2.0;
        if q.value.abs() <= 1e-16 * total.value.abs() {
            quiet += 1;
            if quiet >= 3 {
                break;
            }
        } else {
            quiet = 0;
        }
        if !total.value.is_finite() {
            break;
        }
    }
    total
}

/// Golden-section maximisation of a unimodal function on `[lo, hi]`.
/// Returns `(argmax, max)`.
pub fn golden_max<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..300 {
        if (hi - lo).abs() <= tol * (1.0 + x1.abs()) {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        }
    }
    if f1 >= f2 { (x1, f1) } else { (x2, f2) }
}

/// Largest `x` in `[lo, hi]` with `pred(x)` true, for a predicate that is
/// true on a lower set. Returns `None` when `pred(lo)` fails.
pub fn bisect_last_true<P: FnMut(f64) -> bool>(mut pred: P, lo: f64, hi: f64, iters: usize) -> Option<f64> {
    if !pred(lo) {
        return None;
    }
    if pred(hi) {
        return Some(hi);
    }
    let (mut a, mut b) = (lo, hi);
    for _ in 0..iters {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if pred(m) {
            a = m;
        } else {
            b = m;
        }
    }
    Some(a)
}

/// Least-squares slope of `ys` against `xs`.
pub fn ls_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    sxy / sxx
}

/// Volume of the unit ball in `R^n`.
pub fn unit_ball_volume(n: u32) -> f64 {
    match n {
        0 => 1.0,
        1 => 2.0,
        _ => 2.0 * std::f64::consts::PI / n as f64 * unit_ball_volume(n - 2),
    }
}

/// Surface area of the unit sphere `S^{n-1}` in `R^n`.
pub fn sphere_area(n: u32) -> f64 {
    n as f64 * unit_ball_volume(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_rule_integrates_endpoint_singularity() {
        let q: f64 = tanh_sinh_rule(0.0, 1.0, 0.5).iter().map(|(x, w)| w / x.sqrt()).sum();
        assert!((q - 2.0).abs() < 1e-6, "{q}");
        let q: f64 = tanh_sinh_rule(-1.0, 2.0, 0.25).iter().map(|(x, w)| w * x.exp()).sum();
        assert!((q - (2f64.exp() - (-1f64).exp())).abs() < 1e-8, "{}", q - (2f64.exp() - (-1f64).exp()));
    }

    #[test]
    fn tanh_sinh_polynomial() {
        let q = tanh_sinh(|x| x * x, 0.0, 3.0, 1e-12);
        assert!((q.value - 9.0).abs() < 1e-10);
    }

    #[test]
    fn tanh_sinh_endpoint_singularity() {
        let q = tanh_sinh(|x| x.powf(-0.5), 0.0, 1.0, 1e-10);
        assert!((q.value - 2.0).abs() < 1e-8, "{q:?}");
        let q = tanh_sinh(|x| (-x).powf(-0.75), -1.0, 0.0, 1e-10);
        assert!((q.value - 4.0).abs() < 1e-6, "{q:?}");
    }

    #[test]
    fn infinite_range() {
        let q = integrate_to_infinity(|x| (-x).exp(), 0.0, 1e-12);
        assert!((q.value - 1.0).abs() < 1e-9, "{q:?}");
        let q = integrate_to_infinity(|x| x.powf(-1.5), 1.0, 1e-12);
        assert!((q.value - 2.0).abs() < 1e-8, "{q:?}");
    }

    #[test]
    fn log_segment_matches_direct() {
        let (h, wa, wb) = (0.3, -1.0, 0.5);
        let direct = tanh_sinh(|x| (wa + (wb - wa) * x / h).exp(), 0.0, h, 1e-13).value;
        assert!((ln_segment(h, wa, wb).exp() - direct).abs() < 1e-12);
        assert!((ln_segment(h, 0.2, 0.2).exp() - h * 0.2f64.exp()).abs() < 1e-14);
    }

    #[test]
    fn golden_finds_parabola_peak() {
        let (x, v) = golden_max(|x| -(x - 1.3) * (x - 1.3) + 2.0, -5.0, 5.0, 1e-12);
        assert!((x - 1.3).abs() < 1e-6);
        assert!((v - 2.0).abs() < 1e-12);
    }

    #[test]
    fn ball_volumes() {
        assert!((unit_ball_volume(2) - std::f64::consts::PI).abs() < 1e-15);
        assert!((unit_ball_volume(3) - 4.0 / 3.0 * std::f64::consts::PI).abs() < 1e-14);
        assert_eq!(sphere_area(1), 2.0);
    }
}
