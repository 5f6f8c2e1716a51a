//! Radial weights `omega` on the unit disc and decay profiles `W`.
//!
//! A radial weight is viewed in log-coordinates: with `x = log r < 0` the
//! function `u(x) = -log omega(e^x)` is increasing, and the reciprocal weight
//! `1/omega` is log-convex exactly when `u` is convex. Supporting lines of `u`
//! are the minorant power functions `a r^beta <= 1/omega(r)` the envelope
//! module is built from.

use crate::numeric::{delta_from_x, x_from_delta};
use crate::{Error, Result};
use std::fmt;
use std::sync::Arc;

/// Radial, continuous, strictly decreasing weight with `omega(r) -> 0`.
#[derive(Clone)]
pub struct RadialWeight {
    family: WeightFamily,
}

#[derive(Clone)]
enum WeightFamily {
    /// `omega(r) = (1-r)^alpha`
    Power { alpha: f64 },
    /// `omega(r) = exp(-c / (1-r)^p)`
    Exponential { c: f64, p: f64 },
    /// Piecewise-linear in `(x, u)` coordinates; knots have strictly
    /// increasing `x` and strictly increasing `u`.
    Table { knots: Vec<(f64, f64)> },
    /// Arbitrary evaluator `r -> omega(r)`; slopes use central differences.
    Custom {
        name: String,
        omega: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    },
}

impl fmt::Debug for RadialWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RadialWeight({})", self.describe())
    }
}

impl RadialWeight {
    pub fn power(alpha: f64) -> Result<RadialWeight> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::Argument(format!(
                "power weight needs alpha > 0, got {alpha}"
            )));
        }
        Ok(RadialWeight {
            family: WeightFamily::Power { alpha },
        })
    }

    pub fn exponential(c: f64, p: f64) -> Result<RadialWeight> {
        if !(c > 0.0 && p > 0.0 && c.is_finite() && p.is_finite()) {
            return Err(Error::Argument(format!(
                "exponential weight needs c > 0 and p > 0, got c={c}, p={p}"
            )));
        }
        Ok(RadialWeight {
            family: WeightFamily::Exponential { c, p },
        })
    }

    /// Builds a table weight from `(r, omega(r))` samples. Samples are
    /// converted to log-coordinates and interpolated linearly there.
    pub fn from_samples(samples: &[(f64, f64)]) -> Result<RadialWeight> {
        if samples.len() < 2 {
            return Err(Error::Argument(
                "table weight needs at least 2 samples".into(),
            ));
        }
        let mut knots = Vec::with_capacity(samples.len());
        for &(r, w) in samples {
            if !(r > 0.0 && r < 1.0) {
                return Err(Error::Argument(format!(
                    "table weight sample radius must lie in (0,1), got {r}"
                )));
            }
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::Argument(format!(
                    "table weight values must be positive, got {w}"
                )));
            }
            knots.push((r.ln(), -w.ln()));
        }
        Self::from_log_knots(knots)
    }

    /// Builds a table weight directly from `(x, u)` knots, `x = log r`,
    /// `u = -log omega`.
    pub fn from_log_knots(knots: Vec<(f64, f64)>) -> Result<RadialWeight> {
        if knots.len() < 2 {
            return Err(Error::Argument("table weight needs at least 2 knots".into()));
        }
        for w in knots.windows(2) {
            if !(w[0].0 < w[1].0) {
                return Err(Error::Argument(
                    "table weight knots must have strictly increasing x".into(),
                ));
            }
            if !(w[0].1 < w[1].1) {
                return Err(Error::Argument(
                    "table weight must be strictly decreasing (u strictly increasing)".into(),
                ));
            }
        }
        if !knots.iter().all(|k| k.0 < 0.0 && k.1.is_finite()) {
            return Err(Error::Argument("table weight knots must have x < 0".into()));
        }
        Ok(RadialWeight {
            family: WeightFamily::Table { knots },
        })
    }

    pub fn custom<F>(name: &str, omega: F) -> RadialWeight
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        RadialWeight {
            family: WeightFamily::Custom {
                name: name.to_string(),
                omega: Arc::new(omega),
            },
        }
    }

    pub fn describe(&self) -> String {
        match &self.family {
            WeightFamily::Power { alpha } => format!("power(alpha={alpha})"),
            WeightFamily::Exponential { c, p } => format!("exponential(c={c}, p={p})"),
            WeightFamily::Table { knots } => format!("table({} knots)", knots.len()),
            WeightFamily::Custom { name, .. } => format!("custom({name})"),
        }
    }

    /// `omega(r)` with the domain check. Checked entry point for callers
    /// holding a plain radius.
    pub fn eval(&self, r: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&r) {
            return Err(Error::Domain(format!(
                "weight evaluation needs 0 <= r < 1, got {r}"
            )));
        }
        Ok(self.eval_delta(1.0 - r))
    }

    /// `omega(1 - delta)` for `delta in (0, 1]`.
    pub fn eval_delta(&self, delta: f64) -> f64 {
        match &self.family {
            WeightFamily::Power { alpha } => delta.powf(*alpha),
            WeightFamily::Exponential { c, p } => (-c / delta.powf(*p)).exp(),
            WeightFamily::Table { .. } => (-self.u(x_from_delta(delta))).exp(),
            WeightFamily::Custom { omega, .. } => omega(1.0 - delta),
        }
    }

    /// `u(x) = -log omega(e^x)` with the domain check.
    pub fn eval_log(&self, x: f64) -> Result<f64> {
        if !(x < 0.0) {
            return Err(Error::Domain(format!(
                "log-coordinate evaluation needs x < 0, got {x}"
            )));
        }
        Ok(self.u(x))
    }

    /// `u(x)` without the domain check; `x < 0` assumed.
    pub(crate) fn u(&self, x: f64) -> f64 {
        match &self.family {
            WeightFamily::Power { alpha } => -alpha * crate::numeric::ln_one_minus_exp(x),
            WeightFamily::Exponential { c, p } => {
                c * (-p * crate::numeric::ln_one_minus_exp(x)).exp()
            }
            WeightFamily::Table { knots } => {
                let (i, j) = bracketing_knots(knots, x);
                let (x0, u0) = knots[i];
                let (x1, u1) = knots[j];
                u0 + (u1 - u0) * (x - x0) / (x1 - x0)
            }
            WeightFamily::Custom { omega, .. } => -omega(x.exp()).ln(),
        }
    }

    /// Slope of `u` at `x`. Analytic for the built-in families; the left
    /// segment slope at table kinks; a symmetric difference otherwise.
    pub(crate) fn u_prime(&self, x: f64) -> f64 {
        match &self.family {
            WeightFamily::Power { alpha } => alpha / (-x).exp_m1(),
            WeightFamily::Exponential { c, p } => {
                let delta = delta_from_x(x);
                c * p * x.exp() * (-(p + 1.0) * delta.ln()).exp()
            }
            // partition_point lands on the left segment at an exact knot, so
            // kinks use the left slope
            WeightFamily::Table { knots } => {
                let (i, j) = bracketing_knots(knots, x);
                (knots[j].1 - knots[i].1) / (knots[j].0 - knots[i].0)
            }
            WeightFamily::Custom { .. } => {
                let h = 1e-7 * x.abs().max(1e-7);
                let hi = (x + h).min(-1e-308);
                let lo = x - h;
                (self.u(hi) - self.u(lo)) / (hi - lo)
            }
        }
    }

    /// Checks the weight invariants on a sample grid, in log-coordinates so
    /// that weights far below the f64 underflow threshold stay checkable:
    /// strict decrease (`u` strictly increasing) and decay to zero
    /// (`omega(1-1e-8) < 1e-3 * omega(0)`).
    pub fn validate(&self) -> Result<()> {
        let mut prev = f64::NEG_INFINITY;
        for i in 0..64 {
            // deltas from 0.999 down to 1e-8, geometric
            let t = i as f64 / 63.0;
            let delta = 0.999 * (1e-8f64 / 0.999).powf(t);
            let u = self.u(x_from_delta(delta));
            if !u.is_finite() {
                return Err(Error::Precondition(format!(
                    "weight must be positive and finite, got -log omega = {u} at delta={delta}"
                )));
            }
            if u <= prev {
                return Err(Error::Precondition(format!(
                    "weight must be strictly decreasing; violated near delta={delta}"
                )));
            }
            prev = u;
        }
        // omega(1-1e-8) < 1e-3 * omega(0), compared as u values
        let u0 = self.u(x_from_delta(1.0 - 1e-12));
        if !(self.u(x_from_delta(1e-8)) > u0 + 1e3f64.ln()) {
            return Err(Error::Precondition(
                "weight must tend to 0: omega(1-1e-8) < 1e-3 * omega(0) fails".into(),
            ));
        }
        Ok(())
    }
}

fn bracketing_knots(knots: &[(f64, f64)], x: f64) -> (usize, usize) {
    // extrapolates with the first/last segment outside the knot range
    let n = knots.len();
    match knots.partition_point(|k| k.0 < x) {
        0 => (0, 1),
        i if i >= n => (n - 2, n - 1),
        i => (i - 1, i),
    }
}

/// Discrete log-convexity report for `1/omega`.
#[derive(Debug, Clone)]
pub struct ConvexityReport {
    pub passed: bool,
    /// Minimal slope difference over consecutive grid triples.
    pub min_second_difference: f64,
    /// First triple `(x0, x1, x2)` violating convexity, if any.
    pub first_violation: Option<(f64, f64, f64)>,
    pub tol: f64,
}

/// Tests convexity of `u(x) = -log omega(e^x)` by divided second differences
/// over consecutive grid triples: both secant slopes around each interior
/// point must be non-decreasing up to `-tol`.
pub fn check_log_convex(w: &RadialWeight, x_grid: &[f64], tol: f64) -> Result<ConvexityReport> {
    if x_grid.len() < 3 {
        return Err(Error::Argument(
            "log-convexity check needs at least 3 grid points".into(),
        ));
    }
    for pair in x_grid.windows(2) {
        if !(pair[0] < pair[1]) {
            return Err(Error::Argument(
                "log-convexity grid must be strictly increasing".into(),
            ));
        }
    }
    if !(*x_grid.last().unwrap() < 0.0) {
        return Err(Error::Argument("log-convexity grid must satisfy x < 0".into()));
    }
    let u: Vec<f64> = x_grid.iter().map(|&x| w.u(x)).collect();
    let mut min_d2 = f64::INFINITY;
    let mut first_violation = None;
    for i in 1..x_grid.len() - 1 {
        let s0 = (u[i] - u[i - 1]) / (x_grid[i] - x_grid[i - 1]);
        let s1 = (u[i + 1] - u[i]) / (x_grid[i + 1] - x_grid[i]);
        let d2 = s1 - s0;
        if d2 < min_d2 {
            min_d2 = d2;
        }
        if d2 < -tol && first_violation.is_none() {
            first_violation = Some((x_grid[i - 1], x_grid[i], x_grid[i + 1]));
        }
    }
    Ok(ConvexityReport {
        passed: first_violation.is_none(),
        min_second_difference: min_d2,
        first_violation,
        tol,
    })
}

/// Uniform grid in `x` for convexity checks.
pub fn uniform_x_grid(a: f64, b: f64, points: usize) -> Vec<f64> {
    assert!(points >= 3 && a < b);
    (0..points)
        .map(|i| a + (b - a) * i as f64 / (points - 1) as f64)
        .collect()
}

/// Non-increasing decay profile `W: [0,1) -> (0,1]`, the little-o rate.
///
/// Evaluation applies `min(1, raw(r)/norm)`; `normalize_decay` sets `norm`
/// to the raw `W(0)` so that `W(0) = 1` afterwards. The inverse-log family
/// carries its cap at 1 as part of the family definition.
#[derive(Clone, Debug)]
pub struct DecayFunction {
    family: DecayFamily,
    norm: f64,
}

#[derive(Clone, Debug)]
enum DecayFamily {
    /// `W(r) = min(1, scale / |log(1-r)|)`
    InverseLog { scale: f64 },
    /// `W(r) = (1-r)^gamma`
    PowerDelta { gamma: f64 },
    /// Samples `(delta_i, w_i)` with delta decreasing toward 0; linear
    /// interpolation in `(log delta, w)`, constant beyond the ends.
    Table { knots: Vec<(f64, f64)> },
    /// Degenerate big-O mode `W == 1`.
    ConstantOne,
}

impl DecayFunction {
    pub fn inverse_log() -> DecayFunction {
        DecayFunction {
            family: DecayFamily::InverseLog { scale: 1.0 },
            norm: 1.0,
        }
    }

    pub fn inverse_log_scaled(scale: f64) -> Result<DecayFunction> {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::Argument(format!(
                "inverse-log scale must be positive, got {scale}"
            )));
        }
        Ok(DecayFunction {
            family: DecayFamily::InverseLog { scale },
            norm: 1.0,
        })
    }

    pub fn power_delta(gamma: f64) -> Result<DecayFunction> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::Argument(format!(
                "power decay needs gamma > 0, got {gamma}"
            )));
        }
        Ok(DecayFunction {
            family: DecayFamily::PowerDelta { gamma },
            norm: 1.0,
        })
    }

    pub fn constant_one() -> DecayFunction {
        DecayFunction {
            family: DecayFamily::ConstantOne,
            norm: 1.0,
        }
    }

    /// Table from `(delta, value)` samples, any order; sorted internally by
    /// decreasing radius (increasing delta ordering is normalized away).
    pub fn from_delta_samples(samples: &[(f64, f64)]) -> Result<DecayFunction> {
        if samples.is_empty() {
            return Err(Error::Argument("decay table needs samples".into()));
        }
        let mut knots: Vec<(f64, f64)> = samples.to_vec();
        knots.sort_by(|a, b| b.0.total_cmp(&a.0)); // delta decreasing = r increasing
        for &(d, v) in &knots {
            if !(d > 0.0 && d <= 1.0) {
                return Err(Error::Argument(format!(
                    "decay table delta must lie in (0,1], got {d}"
                )));
            }
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Argument(format!(
                    "decay table values must be positive, got {v}"
                )));
            }
        }
        for w in knots.windows(2) {
            if w[1].1 > w[0].1 {
                return Err(Error::Argument(
                    "decay table must be non-increasing in r".into(),
                ));
            }
        }
        Ok(DecayFunction {
            family: DecayFamily::Table { knots },
            norm: 1.0,
        })
    }

    pub fn is_constant_one(&self) -> bool {
        matches!(self.family, DecayFamily::ConstantOne)
    }

    pub fn describe(&self) -> String {
        let base = match &self.family {
            DecayFamily::InverseLog { scale } => format!("inverse-log(scale={scale})"),
            DecayFamily::PowerDelta { gamma } => format!("power(gamma={gamma})"),
            DecayFamily::Table { knots } => format!("table({} knots)", knots.len()),
            DecayFamily::ConstantOne => "constant-one".to_string(),
        };
        if self.norm != 1.0 {
            format!("{base}/norm({})", self.norm)
        } else {
            base
        }
    }

    fn raw_delta(&self, delta: f64) -> f64 {
        match &self.family {
            // the cap at 1 near r = 0 is part of the family definition
            DecayFamily::InverseLog { scale } => {
                let l = delta.ln().abs();
                if l == 0.0 {
                    1.0
                } else {
                    (scale / l).min(1.0)
                }
            }
            DecayFamily::PowerDelta { gamma } => delta.powf(*gamma),
            DecayFamily::Table { knots } => {
                if delta >= knots[0].0 {
                    return knots[0].1;
                }
                if delta <= knots[knots.len() - 1].0 {
                    return knots[knots.len() - 1].1;
                }
                let i = knots.partition_point(|k| k.0 > delta);
                let (d0, v0) = knots[i - 1];
                let (d1, v1) = knots[i];
                let t = (delta.ln() - d0.ln()) / (d1.ln() - d0.ln());
                v0 + (v1 - v0) * t
            }
            DecayFamily::ConstantOne => 1.0,
        }
    }

    /// `W(1 - delta)`.
    pub fn eval_delta(&self, delta: f64) -> f64 {
        (self.raw_delta(delta) / self.norm).min(1.0)
    }

    /// `W(r)` with the domain check.
    pub fn eval(&self, r: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&r) {
            return Err(Error::Domain(format!(
                "decay evaluation needs 0 <= r < 1, got {r}"
            )));
        }
        Ok(self.eval_delta(1.0 - r))
    }

    /// Checks `0 < W <= 1`, monotonicity on a grid, and (unless constant-one)
    /// decay toward 0.
    pub fn validate_normalized(&self) -> Result<()> {
        let mut prev = f64::INFINITY;
        for i in 0..64 {
            let t = i as f64 / 63.0;
            let delta = 1.0f64 * (1e-10f64).powf(t);
            let v = self.eval_delta(delta);
            if !(v > 0.0 && v <= 1.0) {
                return Err(Error::Precondition(format!(
                    "normalized decay must satisfy 0 < W <= 1, got {v}"
                )));
            }
            if v > prev + 1e-15 {
                return Err(Error::Precondition(
                    "decay function must be non-increasing".into(),
                ));
            }
            prev = v.min(prev);
        }
        Ok(())
    }
}

/// Rescales so that `W(0) = 1`: returns `r -> min(1, W(r)/W(0))`. Idempotent.
pub fn normalize_decay(w: &DecayFunction) -> Result<DecayFunction> {
    let w0 = w.raw_delta(1.0);
    if !(w0 > 0.0 && w0.is_finite()) {
        return Err(Error::Precondition(format!(
            "normalization needs finite W(0) > 0, got {w0}"
        )));
    }
    Ok(DecayFunction {
        family: w.family.clone(),
        norm: w0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_weight_examples() {
        // (power(1), r=0) -> 1 ; (power(2), r=0.5) -> 0.25
        assert_eq!(RadialWeight::power(1.0).unwrap().eval(0.0).unwrap(), 1.0);
        assert_eq!(RadialWeight::power(2.0).unwrap().eval(0.5).unwrap(), 0.25);
        // exponential(1,1) at r=0.9: scalar oracle e^{-10}
        let w = RadialWeight::exponential(1.0, 1.0).unwrap();
        let got = w.eval(0.9).unwrap();
        let oracle = (-1.0f64 / (1.0 - 0.9)).exp();
        assert!((got - oracle).abs() <= 1e-15 * oracle);
        // domain errors
        assert!(w.eval(1.0).is_err());
        assert!(w.eval(-0.1).is_err());
    }

    #[test]
    fn eval_log_weight_examples() {
        let w = RadialWeight::power(1.0).unwrap();
        let x = 0.5f64.ln();
        assert!((w.eval_log(x).unwrap() - 2.0f64.ln()).abs() < 1e-15);
        // x -> -inf limit: u -> 0+
        assert!(w.eval_log(-700.0).unwrap() > 0.0);
        assert!(w.eval_log(-700.0).unwrap() < 1e-300f64.max(1e-200));
        // exponential(1,1) at x = log 0.9: u = 1/(1-0.9) = 10
        let we = RadialWeight::exponential(1.0, 1.0).unwrap();
        let u = we.eval_log(0.9f64.ln()).unwrap();
        assert!((u - 10.0).abs() < 1e-12);
        assert!(we.eval_log(0.0).is_err());
    }

    #[test]
    fn analytic_slopes_match_differences() {
        for w in [
            RadialWeight::power(1.0).unwrap(),
            RadialWeight::power(0.5).unwrap(),
            RadialWeight::exponential(1.0, 1.0).unwrap(),
            RadialWeight::exponential(2.0, 1.5).unwrap(),
        ] {
            for &x in &[-2.0f64, -0.5, -0.05, -0.001] {
                let h = 1e-6 * x.abs();
                let num = (w.u(x + h) - w.u(x - h)) / (2.0 * h);
                let ana = w.u_prime(x);
                assert!(
                    (num - ana).abs() <= 1e-4 * ana.abs(),
                    "{}: x={x} num={num} ana={ana}",
                    w.describe()
                );
            }
        }
    }

    #[test]
    fn log_convexity_passes_for_builtin_families() {
        // analytic oracle: u''(x) > 0 for these families (power: e^x/(1-e^x)^2 > 0)
        let grid = uniform_x_grid(-3.0, -0.01, 200);
        for w in [
            RadialWeight::power(0.5).unwrap(),
            RadialWeight::power(1.0).unwrap(),
            RadialWeight::power(2.0).unwrap(),
            RadialWeight::exponential(1.0, 1.0).unwrap(),
            RadialWeight::exponential(2.0, 1.0).unwrap(),
            RadialWeight::exponential(1.0, 2.0).unwrap(),
        ] {
            let rep = check_log_convex(&w, &grid, 1e-9).unwrap();
            assert!(rep.passed, "{} min_d2={}", w.describe(), rep.min_second_difference);
        }
    }

    #[test]
    fn oscillatory_reciprocal_weight_is_actually_log_convex() {
        // 1/omega = (2 + cos(log(1/(1-r))))/(1-r): u'' = s''[(1+phi') + e^x phi'']
        // stays positive (|phi'| <= 1/sqrt(3), phi'' >= -1/3, e^x < 1), so the
        // discrete check passes despite the oscillation.
        let w = RadialWeight::custom("oscillatory", |r| {
            (1.0 - r) / (2.0 + (1.0 / (1.0 - r)).ln().cos())
        });
        w.validate().unwrap();
        let grid = uniform_x_grid(-3.0, -0.01, 200);
        let rep = check_log_convex(&w, &grid, 1e-9).unwrap();
        assert!(rep.passed, "min_d2={}", rep.min_second_difference);
        assert!(rep.min_second_difference > 0.0);
    }

    #[test]
    fn non_convex_table_weight_fails_with_located_triple() {
        // u has slopes 2, 1, 3: the slope dip at the middle knot breaks
        // convexity while u stays strictly increasing (omega decreasing).
        let w = RadialWeight::from_log_knots(vec![
            (-2.0, 1.0),
            (-1.5, 2.0),
            (-1.0, 2.5),
            (-0.5, 4.0),
        ])
        .unwrap();
        let grid = uniform_x_grid(-1.9, -0.1, 200);
        let rep = check_log_convex(&w, &grid, 1e-9).unwrap();
        assert!(!rep.passed);
        assert!(rep.min_second_difference < 0.0);
        let (a, b, c) = rep.first_violation.expect("violating triple");
        // the dip is at the knot x = -1.5
        assert!(a < -1.5 && c > -1.5, "triple ({a},{b},{c}) should straddle the kink");
    }

    #[test]
    fn convexity_grid_validation() {
        let w = RadialWeight::power(1.0).unwrap();
        assert!(check_log_convex(&w, &[-2.0, -1.0], 1e-9).is_err());
        assert!(check_log_convex(&w, &[-2.0, -1.0, -1.5], 1e-9).is_err());
        assert!(check_log_convex(&w, &[-2.0, -1.0, 0.5], 1e-9).is_err());
    }

    #[test]
    fn decay_normalization_examples() {
        // constant-one -> identity
        let w = normalize_decay(&DecayFunction::constant_one()).unwrap();
        assert_eq!(w.eval_delta(0.5), 1.0);
        // W(r) = 2/|log(1-r)| clamped at 1: W(0)=1 already, W(1-e^-4) = 2/4
        let w = DecayFunction::inverse_log_scaled(2.0).unwrap();
        let n = normalize_decay(&w).unwrap();
        let v = n.eval_delta((-4.0f64).exp());
        assert!((v - 0.5).abs() < 1e-15, "got {v}");
        // table with W(0)=4: all samples divided by 4
        let t = DecayFunction::from_delta_samples(&[(1.0, 4.0), (0.1, 2.0), (0.01, 1.0)]).unwrap();
        let n = normalize_decay(&t).unwrap();
        assert!((n.eval_delta(1.0) - 1.0).abs() < 1e-15);
        assert!((n.eval_delta(0.01) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn normalize_is_idempotent() {
        let t = DecayFunction::from_delta_samples(&[(1.0, 3.0), (0.2, 1.5), (1e-4, 0.1)]).unwrap();
        let n1 = normalize_decay(&t).unwrap();
        let n2 = normalize_decay(&n1).unwrap();
        for i in 0..100 {
            let delta = 1.0 * (1e-9f64).powf(i as f64 / 99.0);
            let a = n1.eval_delta(delta);
            let b = n2.eval_delta(delta);
            assert!((a - b).abs() <= 1e-15 * a.abs().max(1e-300));
        }
    }

    #[test]
    fn weight_monotonicity_and_log_monotonicity() {
        for w in [
            RadialWeight::power(1.0).unwrap(),
            RadialWeight::exponential(1.0, 1.0).unwrap(),
        ] {
            w.validate().unwrap();
            let mut prev_u = f64::NEG_INFINITY;
            for i in 0..200 {
                let x = -3.0 + 2.99 * i as f64 / 199.0;
                let u = w.u(x);
                assert!(u > prev_u);
                prev_u = u;
            }
        }
    }

    #[test]
    fn inverse_log_is_capped_and_decaying() {
        let w = DecayFunction::inverse_log();
        assert_eq!(w.eval(0.0).unwrap(), 1.0);
        assert_eq!(w.eval(0.3).unwrap(), 1.0); // |log 0.7| < 1 -> capped
        assert!(w.eval_delta(1e-9) < 0.05);
        w.validate_normalized().unwrap();
    }
}
