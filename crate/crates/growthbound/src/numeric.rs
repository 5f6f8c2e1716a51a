//! Low-level floating-point helpers: error-free transforms, compensated
//! summation, exact fixed-point angles and a bisection driver.

/// Angle stored as a binary fraction of a full turn.
///
/// Phases of monomials `z^n` are reduced mod 2*pi in integer arithmetic:
/// `n * turns` wraps exactly in `u64`, so the phase of `z^n` stays accurate
/// for exponents far beyond 2^53.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Angle {
    pub turns: u64,
}

impl Angle {
    pub const ZERO: Angle = Angle { turns: 0 };

    /// i-th of n equispaced angles, largest multiple of 2^64/n not above i/n.
    pub fn grid(i: u64, n: u64) -> Angle {
        debug_assert!(n > 0 && i < n);
        Angle {
            turns: (((i as u128) << 64) / n as u128) as u64,
        }
    }

    pub fn from_radians(theta: f64) -> Angle {
        let t = (theta / std::f64::consts::TAU).rem_euclid(1.0);
        // t in [0,1); scaling by 2^64 may round up to 2^64 -> wrap to 0
        let scaled = t * 1.8446744073709552e19;
        Angle {
            turns: if scaled >= 1.8446744073709552e19 {
                0
            } else {
                scaled as u64
            },
        }
    }

    pub fn radians(self) -> f64 {
        self.turns as f64 / 1.8446744073709552e19 * std::f64::consts::TAU
    }

    pub fn wrapping_add(self, other: Angle) -> Angle {
        Angle {
            turns: self.turns.wrapping_add(other.turns),
        }
    }

    /// Phase of `z^n` when `arg z` is this angle, as (sin, cos)-ready radians
    /// centered in (-pi, pi].
    pub fn monomial_phase(self, n: u128) -> f64 {
        let frac = (n as u64).wrapping_mul(self.turns);
        // centered turn in (-1/2, 1/2] for better conditioning of 2*pi*t
        let t = frac as f64 / 1.8446744073709552e19;
        let t = if t >= 0.5 { t - 1.0 } else { t };
        std::f64::consts::TAU * t
    }
}

/// Error-free sum: returns (s, e) with s + e == a + b exactly.
#[inline]
pub fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

/// Error-free product via FMA: returns (p, e) with p + e == a * b exactly.
#[inline]
pub fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

/// Neumaier-compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, v: f64) {
        let (s, e) = two_sum(self.sum, v);
        self.sum = s;
        self.comp += e;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// log(1 - exp(x)) for x < 0, i.e. log of the radial coordinate delta = 1 - e^x.
pub fn ln_one_minus_exp(x: f64) -> f64 {
    debug_assert!(x < 0.0);
    if x < -0.693 {
        (-x.exp()).ln_1p()
    } else {
        (-x.exp_m1()).ln()
    }
}

/// delta = 1 - e^x for x <= 0, computed without cancellation.
#[inline]
pub fn delta_from_x(x: f64) -> f64 {
    -x.exp_m1()
}

/// x = log r = log(1 - delta) for delta in (0, 1].
#[inline]
pub fn x_from_delta(delta: f64) -> f64 {
    (-delta).ln_1p()
}

/// Bisection of a monotone predicate on a bracket `[lo, hi]` (lo < hi allowed
/// in either coordinate direction as long as `pred(lo) == false`,
/// `pred(hi) == true`). Runs to floating-point exhaustion or `max_iter`.
/// Returns (lo, hi) with the bracket collapsed to adjacent doubles when
/// possible; the invariant `!pred(lo) && pred(hi)` is preserved.
pub fn bisect_to_exhaustion<F: FnMut(f64) -> bool>(
    mut lo: f64,
    mut hi: f64,
    max_iter: usize,
    mut pred: F,
) -> (f64, f64) {
    for _ in 0..max_iter {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo, hi)
}

/// Full-precision decimal formatting that round-trips f64 exactly.
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Geometric grid in delta between `d_hi` and `d_lo` (inclusive endpoints),
/// ordered from larger delta (smaller r) to smaller delta.
pub fn geometric_deltas(d_hi: f64, d_lo: f64, points: usize) -> Vec<f64> {
    assert!(points >= 2 && d_hi > 0.0 && d_lo > 0.0);
    let (a, b) = (d_hi.ln(), d_lo.ln());
    (0..points)
        .map(|i| {
            if i == 0 {
                d_hi
            } else if i == points - 1 {
                d_lo
            } else {
                let t = i as f64 / (points - 1) as f64;
                (a + (b - a) * t).exp()
            }
        })
        .collect()
}

/// Tracks a minimum together with its deterministic tie-broken location.
/// Location order: smallest k, then smallest delta, then smallest angle.
#[derive(Debug, Clone, Copy)]
pub struct ArgMin {
    pub value: f64,
    pub k: usize,
    pub delta: f64,
    pub angle_turns: u64,
}

impl ArgMin {
    pub fn seed() -> ArgMin {
        ArgMin {
            value: f64::INFINITY,
            k: usize::MAX,
            delta: f64::INFINITY,
            angle_turns: u64::MAX,
        }
    }

    pub fn update(&mut self, other: ArgMin) {
        use std::cmp::Ordering::*;
        let better = match other.value.total_cmp(&self.value) {
            Less => true,
            Greater => false,
            Equal => match other.k.cmp(&self.k) {
                Less => true,
                Greater => false,
                Equal => match other.delta.total_cmp(&self.delta) {
                    Less => true,
                    Greater => false,
                    Equal => other.angle_turns < self.angle_turns,
                },
            },
        };
        if better {
            *self = other;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_sum_exact() {
        let (s, e) = two_sum(1e16, 1.0);
        assert_eq!(s, 1e16);
        assert_eq!(e, 1.0);
    }

    #[test]
    fn two_prod_exact() {
        let a = 1.0 + 2f64.powi(-30);
        let b = 1.0 - 2f64.powi(-30);
        let (p, e) = two_prod(a, b);
        // a*b = 1 - 2^-60 exactly
        assert_eq!(p + e, 1.0 - 2f64.powi(-60));
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut acc = CompensatedSum::default();
        acc.add(1e16);
        for _ in 0..10 {
            acc.add(0.1);
        }
        acc.add(-1e16);
        assert!((acc.value() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn angle_grid_monomial_phase_is_exact() {
        // n * (i/8 turn) mod 1 turn, n = 2^40 + 5, i = 3
        let a = Angle::grid(3, 8);
        let n: u128 = (1u128 << 40) + 5;
        let phase = a.monomial_phase(n);
        // (n * 3/8) mod 1 = ((2^40+5)*3/8) mod 1 = (15/8) mod 1 = 7/8 -> centered -1/8
        let expected = -std::f64::consts::TAU / 8.0;
        assert!((phase - expected).abs() < 1e-15);
    }

    #[test]
    fn delta_x_roundtrip() {
        for &d in &[1e-18, 1e-10, 0.3, 0.9] {
            let x = x_from_delta(d);
            assert!((delta_from_x(x) - d).abs() <= 1e-16 * d.max(1e-300));
        }
    }

    #[test]
    fn bisection_exhausts_bracket() {
        let target = 0.123456789;
        let (lo, hi) = bisect_to_exhaustion(0.0, 1.0, 200, |x| x >= target);
        assert!(lo < target && target <= hi);
        assert!(hi - lo <= f64::EPSILON);
    }

    #[test]
    fn format_roundtrips() {
        for &v in &[1.0, -3.5e-300, 0.1 + 0.2, 1.0 - 1e-14] {
            let s = format_f64(v);
            assert_eq!(s.parse::<f64>().unwrap(), v);
        }
    }
}
