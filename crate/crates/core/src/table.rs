//! Monotone functions sampled on a grid in log-log coordinates, with
//! power-log tail models beyond the sampled range.

use serde::{Deserialize, Serialize};

use crate::error::OrliczError;

/// Extrapolation model beyond one end of a table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum TailModel {
    /// Identically zero beyond the end (only meaningful at the lower end).
    Zero,
    /// Identically `+∞` beyond the end (only meaningful at the upper end).
    Infinite,
    /// `ln f = ln_coef + exponent·ln t + log_power·ln|ln t|`.
    PowerLog { ln_coef: f64, exponent: f64, log_power: f64 },
}

impl TailModel {
    fn ln_at(&self, x: f64, lower: bool) -> f64 {
        match *self {
            TailModel::Zero => {
                if lower { f64::NEG_INFINITY } else { f64::INFINITY }
            }
            TailModel::Infinite => f64::INFINITY,
            TailModel::PowerLog { ln_coef, exponent, log_power } => {
                ln_coef + exponent * x + log_power * log_abs_clamped(x)
            }
        }
    }

    /// Local log-log slope of the model at `x`.
    fn slope_at(&self, x: f64) -> f64 {
        match *self {
            TailModel::PowerLog { exponent, log_power, .. } => {
                if x.abs() > 1.0 { exponent + log_power / x } else { exponent }
            }
            _ => 0.0,
        }
    }

    /// Pin the model so that it passes through `(x, y)`.
    fn anchored(self, x: f64, y: f64) -> Self {
        match self {
            TailModel::PowerLog { exponent, log_power, .. } => TailModel::PowerLog {
                ln_coef: y - exponent * x - log_power * log_abs_clamped(x),
                exponent,
                log_power,
            },
            other => other,
        }
    }
}

fn log_abs_clamped(x: f64) -> f64 {
    x.abs().max(1.0).ln()
}

/// Fit `y ≈ c + q x + β ln|x|` by least squares; falls back to a pure power
/// when the log column is degenerate or the abscissae straddle `|x| < e`.
pub fn fit_power_log(xs: &[f64], ys: &[f64]) -> TailModel {
    let n = xs.len();
    assert!(n >= 2);
    let use_log = n >= 3 && xs.iter().all(|x| x.abs() > std::f64::consts::E);
    if use_log {
        let cols: Vec<[f64; 3]> = xs.iter().map(|&x| [1.0, x, log_abs_clamped(x)]).collect();
        if let Some(sol) = least_squares3(&cols, ys) {
            if sol.iter().all(|v| v.is_finite()) {
                return TailModel::PowerLog { ln_coef: sol[0], exponent: sol[1], log_power: sol[2] };
            }
        }
    }
    let q = crate::quad::ls_slope(xs, ys);
    let my = ys.iter().sum::<f64>() / n as f64;
    let mx = xs.iter().sum::<f64>() / n as f64;
    TailModel::PowerLog { ln_coef: my - q * mx, exponent: q, log_power: 0.0 }
}

fn least_squares3(cols: &[[f64; 3]], ys: &[f64]) -> Option<[f64; 3]> {
    let mut m = [[0.0f64; 4]; 3];
    for (c, y) in cols.iter().zip(ys) {
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] += c[i] * c[j];
            }
            m[i][3] += c[i] * y;
        }
    }
    for col in 0..3 {
        let piv = (col..3).max_by(|&a, &b| m[a][col].abs().partial_cmp(&m[b][col].abs()).unwrap())?;
        if m[piv][col].abs() < 1e-300 {
            return None;
        }
        m.swap(col, piv);
        for r in 0..3 {
            if r != col {
                let f = m[r][col] / m[col][col];
                for k in col..4 {
                    m[r][k] -= f * m[col][k];
                }
            }
        }
    }
    let sol = [m[0][3] / m[0][0], m[1][3] / m[1][1], m[2][3] / m[2][2]];
    // Reject fits whose log column is numerically indistinguishable from the constant.
    let spread = cols.iter().map(|c| c[2]).fold(f64::NEG_INFINITY, f64::max)
        - cols.iter().map(|c| c[2]).fold(f64::INFINITY, f64::min);
    if spread < 1e-3 { None } else { Some(sol) }
}

/// A non-decreasing function stored as `(ln t, ln value)` samples.
///
/// Inside the grid the function is a power law on each cell; a cell whose
/// left value is zero is interpolated linearly in the value instead. Beyond
/// the grid the tail models take over.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TabulatedMonotone {
    ln_t: Vec<f64>,
    ln_v: Vec<f64>,
    lower: TailModel,
    upper: TailModel,
}

impl TabulatedMonotone {
    /// Build from log samples; tails are anchored to the end nodes.
    pub fn from_log_samples(
        ln_t: Vec<f64>,
        ln_v: Vec<f64>,
        lower: TailModel,
        upper: TailModel,
    ) -> Result<Self, OrliczError> {
        if ln_t.len() < 2 || ln_t.len() != ln_v.len() {
            return Err(OrliczError::Malformed("table needs at least two samples of equal length".into()));
        }
        if ln_t.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(OrliczError::Malformed("table abscissae must be strictly increasing".into()));
        }
        if ln_v.iter().any(|v| v.is_nan()) {
            return Err(OrliczError::Malformed("table values must not be NaN".into()));
        }
        let first_finite = ln_v.iter().position(|v| v.is_finite());
        let last_finite = ln_v.iter().rposition(|v| v.is_finite());
        let (lower, upper) = match (first_finite, last_finite) {
            (Some(i), Some(j)) => {
                let lower = if i == 0 { lower.anchored(ln_t[0], ln_v[0]) } else { TailModel::Zero };
                let upper = if j == ln_t.len() - 1 {
                    upper.anchored(ln_t[j], ln_v[j])
                } else {
                    TailModel::Infinite
                };
                (lower, upper)
            }
            _ => (lower, upper),
        };
        Ok(Self { ln_t, ln_v, lower, upper })
    }

    /// Build from `(t, value)` pairs as found in a CSV file; tails are fitted
    /// as powers on the two outermost decades of data.
    pub fn from_points(points: &[(f64, f64)]) -> Result<Self, OrliczError> {
        if points.len() < 2 {
            return Err(OrliczError::Malformed("table needs at least two rows".into()));
        }
        let mut ln_t = Vec::with_capacity(points.len());
        let mut ln_v = Vec::with_capacity(points.len());
        for (k, &(t, v)) in points.iter().enumerate() {
            if !(t > 0.0) || !t.is_finite() {
                return Err(OrliczError::Malformed(format!("row {k}: t must be positive and finite, got {t}")));
            }
            if v < 0.0 || v.is_nan() {
                return Err(OrliczError::Malformed(format!("row {k}: value must be nonnegative, got {v}")));
            }
            ln_t.push(t.ln());
            ln_v.push(v.ln());
        }
        let finite: Vec<usize> = (0..ln_v.len()).filter(|&i| ln_v[i].is_finite()).collect();
        if finite.len() < 2 {
            return Err(OrliczError::Malformed("table needs two positive finite values".into()));
        }
        let decade = std::f64::consts::LN_10;
        let first = finite[0];
        let last = *finite.last().unwrap();
        let lo_idx: Vec<usize> = finite.iter().copied().filter(|&i| ln_t[i] <= ln_t[first] + 2.0 * decade).collect();
        let hi_idx: Vec<usize> = finite.iter().copied().filter(|&i| ln_t[i] >= ln_t[last] - 2.0 * decade).collect();
        let pick = |idx: &[usize], alt: [usize; 2]| -> (Vec<f64>, Vec<f64>) {
            let idx: Vec<usize> = if idx.len() >= 2 { idx.to_vec() } else { alt.to_vec() };
            (idx.iter().map(|&i| ln_t[i]).collect(), idx.iter().map(|&i| ln_v[i]).collect())
        };
        let (xl, yl) = pick(&lo_idx, [finite[0], finite[1]]);
        let (xh, yh) = pick(&hi_idx, [finite[finite.len() - 2], last]);
        let as_power = |m: TailModel| match m {
            TailModel::PowerLog { ln_coef, exponent, .. } => TailModel::PowerLog { ln_coef, exponent, log_power: 0.0 },
            o => o,
        };
        let lower = as_power(fit_power_log(&xl, &yl));
        let upper = as_power(fit_power_log(&xh, &yh));
        Self::from_log_samples(ln_t, ln_v, lower, upper)
    }

    /// Read `t,value` rows (optional header) from a CSV file.
    pub fn from_csv_path(path: &std::path::Path) -> Result<Self, OrliczError> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .from_path(path)
            .map_err(|e| OrliczError::Malformed(format!("{}: {e}", path.display())))?;
        let mut pts = Vec::new();
        for (k, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| OrliczError::Malformed(format!("{}: {e}", path.display())))?;
            if rec.len() < 2 {
                return Err(OrliczError::Malformed(format!("row {k}: expected two columns")));
            }
            let (a, b) = (rec[0].parse::<f64>(), rec[1].parse::<f64>());
            match (a, b) {
                (Ok(t), Ok(v)) => pts.push((t, v)),
                _ if k == 0 => continue,
                _ => return Err(OrliczError::Malformed(format!("row {k}: non-numeric entry"))),
            }
        }
        Self::from_points(&pts)
    }

    pub fn ln_grid(&self) -> &[f64] {
        &self.ln_t
    }

    pub fn ln_values(&self) -> &[f64] {
        &self.ln_v
    }

    pub fn lower_tail(&self) -> TailModel {
        self.lower
    }

    pub fn upper_tail(&self) -> TailModel {
        self.upper
    }

    /// `ln f(e^x)`.
    pub fn ln_at_ln(&self, x: f64) -> f64 {
        let n = self.ln_t.len();
        if x.is_nan() {
            return f64::NAN;
        }
        if x < self.ln_t[0] {
            return self.lower.ln_at(x, true);
        }
        if x > self.ln_t[n - 1] {
            return self.upper.ln_at(x, false);
        }
        let i = self.ln_t.partition_point(|&g| g <= x).saturating_sub(1).min(n - 2);
        let (xa, xb) = (self.ln_t[i], self.ln_t[i + 1]);
        let (ya, yb) = (self.ln_v[i], self.ln_v[i + 1]);
        if x == xb {
            return yb;
        }
        if ya.is_finite() && yb.is_finite() {
            ya + (yb - ya) * (x - xa) / (xb - xa)
        } else if ya == f64::NEG_INFINITY && yb.is_finite() {
            let (ta, tb) = (xa.exp(), xb.exp());
            let frac = (x.exp() - ta) / (tb - ta);
            if frac <= 0.0 { f64::NEG_INFINITY } else { yb + frac.ln() }
        } else if yb == f64::INFINITY {
            ya
        } else {
            ya
        }
    }

    /// Local log-log slope `d ln f / d ln t` at `x` (right derivative).
    pub fn slope_at_ln(&self, x: f64) -> f64 {
        let n = self.ln_t.len();
        if x < self.ln_t[0] {
            return self.lower.slope_at(x);
        }
        if x >= self.ln_t[n - 1] {
            return self.upper.slope_at(x);
        }
        let i = self.ln_t.partition_point(|&g| g <= x).saturating_sub(1).min(n - 2);
        let (ya, yb) = (self.ln_v[i], self.ln_v[i + 1]);
        if ya.is_finite() && yb.is_finite() {
            (yb - ya) / (self.ln_t[i + 1] - self.ln_t[i])
        } else if ya == f64::NEG_INFINITY && yb.is_finite() {
            // Linear in value: slope = t / (t - ta).
            let ta = self.ln_t[i].exp();
            let t = x.exp();
            if t > ta { t / (t - ta) } else { f64::INFINITY }
        } else {
            0.0
        }
    }

    /// `sup{x : ln f(e^x) ≤ y}` in log coordinates.
    pub fn ln_inverse_at_ln(&self, y: f64) -> f64 {
        generic_ln_inverse(|x| self.ln_at_ln(x), y)
    }

    /// Sampled pairs `(t, value)` for CSV export.
    pub fn points(&self) -> Vec<(f64, f64)> {
        self.ln_t.iter().zip(&self.ln_v).map(|(x, y)| (x.exp(), y.exp())).collect()
    }
}

pub(crate) const LN_SPAN: f64 = 2000.0;

/// `sup{x : g(x) ≤ y}` for a non-decreasing `g` on `[-LN_SPAN, LN_SPAN]`;
/// returns `±∞` when the set is everything or empty.
pub(crate) fn generic_ln_inverse<G: FnMut(f64) -> f64>(mut g: G, y: f64) -> f64 {
    if y.is_nan() {
        return f64::NAN;
    }
    if g(LN_SPAN) <= y {
        return f64::INFINITY;
    }
    if !(g(-LN_SPAN) <= y) {
        return f64::NEG_INFINITY;
    }
    crate::quad::bisect_last_true(|x| g(x) <= y, -LN_SPAN, LN_SPAN, 80).unwrap_or(f64::NEG_INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cubic_table() -> TabulatedMonotone {
        let pts: Vec<(f64, f64)> = (0..41).map(|k| {
            let t = 10f64.powf(-2.0 + 0.1 * k as f64);
            (t, t.powi(3))
        }).collect();
        TabulatedMonotone::from_points(&pts).unwrap()
    }

    #[test]
    fn interpolates_power_exactly() {
        let tab = cubic_table();
        for &t in &[0.0123, 0.5, 3.3, 77.0] {
            let v = tab.ln_at_ln(f64::ln(t)).exp();
            assert!((v / t.powi(3) - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn tails_extrapolate_power() {
        let tab = cubic_table();
        for &t in &[1e-5, 1e5] {
            let v = tab.ln_at_ln(f64::ln(t)).exp();
            assert!((v / t.powi(3) - 1.0).abs() < 1e-8, "t={t} v={v}");
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let tab = cubic_table();
        let x = tab.ln_inverse_at_ln(f64::ln(8.0));
        assert!((x.exp() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn zero_region_and_threshold() {
        let ln_t = vec![0.0, 1.0, 2.0, 3.0];
        let ln_v = vec![f64::NEG_INFINITY, 0.0, 1.0, f64::INFINITY];
        let tab = TabulatedMonotone::from_log_samples(ln_t, ln_v, TailModel::Zero, TailModel::Infinite).unwrap();
        assert_eq!(tab.ln_at_ln(-1.0), f64::NEG_INFINITY);
        assert_eq!(tab.ln_at_ln(4.0), f64::INFINITY);
        // linear in value on the first cell
        let mid = 0.5f64.mul_add(1f64.exp() - 1.0, 1.0).ln();
        assert!((tab.ln_at_ln(mid).exp() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn rejects_unsorted() {
        assert!(TabulatedMonotone::from_points(&[(2.0, 1.0), (1.0, 2.0)]).is_err());
    }

    #[test]
    fn fit_recovers_log_power() {
        let xs: Vec<f64> = (0..20).map(|k| 50.0 + k as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 0.3 + 1.5 * x - 2.0 * x.ln()).collect();
        match fit_power_log(&xs, &ys) {
            TailModel::PowerLog { exponent, log_power, .. } => {
                assert!((exponent - 1.5).abs() < 1e-8);
                assert!((log_power + 2.0).abs() < 1e-6);
            }
            _ => panic!(),
        }
    }
}
