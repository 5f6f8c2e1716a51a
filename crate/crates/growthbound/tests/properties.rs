//! Property tests for the structural invariants: monotonicity of weights,
//! convexity of the built-in families, coefficient recurrences, evaluator
//! symmetries, and order-independence of the report reductions.

use growthbound::coefficients::{nu_from_deltas, ru_coefficients, Offset};
use growthbound::numeric::{Angle, ArgMin};
use growthbound::series::{SparseSeries, Term};
use growthbound::weights::{check_log_convex, normalize_decay, uniform_x_grid, DecayFunction, RadialWeight};
use num_complex::Complex64;
use proptest::prelude::*;

fn alpha() -> impl Strategy<Value = f64> {
    0.5..2.5f64
}

fn exp_params() -> impl Strategy<Value = (f64, f64)> {
    (0.5..3.0f64, 0.5..2.0f64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn power_weights_decrease_and_u_increases(a in alpha()) {
        let w = RadialWeight::power(a).unwrap();
        let mut prev_w = f64::INFINITY;
        let mut prev_u = f64::NEG_INFINITY;
        for i in 0..100 {
            let x = -4.0 + 3.95 * i as f64 / 99.0;
            let delta = -(x as f64).exp_m1();
            let wv = w.eval_delta(delta);
            let uv = w.eval_log(x).unwrap();
            prop_assert!(wv < prev_w);
            prop_assert!(uv > prev_u);
            prev_w = wv;
            prev_u = uv;
        }
    }

    #[test]
    fn builtin_families_are_log_convex((c, p) in exp_params(), a in alpha()) {
        let grid = uniform_x_grid(-3.0, -0.01, 200);
        for w in [RadialWeight::power(a).unwrap(), RadialWeight::exponential(c, p).unwrap()] {
            let rep = check_log_convex(&w, &grid, 1e-9).unwrap();
            prop_assert!(rep.passed, "{}: {}", w.describe(), rep.min_second_difference);
        }
    }

    #[test]
    fn coefficient_recurrence_invariants(
        gamma in 0.1..3.0f64,
        j_count in 2usize..40,
        half in proptest::bool::ANY,
    ) {
        let w = normalize_decay(&DecayFunction::power_delta(gamma).unwrap()).unwrap();
        let offset = if half { Offset::Half } else { Offset::Zero };
        let seq = ru_coefficients(&w, 100, j_count, offset).unwrap();
        seq.check_invariants(&w).unwrap();
    }

    #[test]
    fn nu_ratio_bound_holds(seed_delta in 0.01..0.09f64, shrink in 0.2..0.8f64, k in 3usize..40) {
        let w = DecayFunction::inverse_log();
        let mut t = Vec::with_capacity(k);
        let mut d = seed_delta;
        for _ in 0..k {
            t.push(d);
            d *= shrink;
        }
        let nu = nu_from_deltas(&w, 0.095, &t).unwrap();
        nu.check_invariants().unwrap();
    }

    #[test]
    fn eval_respects_conjugation(re in -0.7..0.7f64, im in -0.7..0.7f64) {
        prop_assume!(re * re + im * im < 0.9);
        let pair = growthbound::build_bloch_pair(&DecayFunction::inverse_log(), 100, 5).unwrap();
        let z = Complex64::new(re, im);
        let a = pair.f.eval(z, false).unwrap();
        let b = pair.f.eval(z.conj(), false).unwrap();
        prop_assert!((a - b.conj()).norm() <= 1e-12 * a.norm().max(1e-300));
    }

    #[test]
    fn reverse_triangle_consistency(delta_exp in 1.0..12.0f64, angle in proptest::num::u64::ANY) {
        // |sum| >= dominant - sum of others whenever the right side is positive
        let pair = growthbound::build_bloch_pair(&DecayFunction::inverse_log(), 100, 6).unwrap();
        let delta = 10f64.powf(-delta_exp);
        let rt = pair.f.at_radius(delta, true).unwrap();
        let (lb, ub) = rt.triangle_bounds();
        let v = rt.eval_at_angle(Angle { turns: angle }).value.norm();
        prop_assert!(v <= ub * (1.0 + 1e-12));
        if lb > 0.0 {
            prop_assert!(v >= lb - ub * 1e-12);
        }
    }

    #[test]
    fn argmin_reduction_is_order_independent(values in proptest::collection::vec((0.0..1.0f64, 0usize..8, 0.0..1.0f64, 0u64..16), 1..60)) {
        let mut fwd = ArgMin::seed();
        for &(v, k, d, a) in &values {
            fwd.update(ArgMin { value: v, k, delta: d, angle_turns: a });
        }
        let mut rev = ArgMin::seed();
        for &(v, k, d, a) in values.iter().rev() {
            rev.update(ArgMin { value: v, k, delta: d, angle_turns: a });
        }
        prop_assert_eq!(fwd.value.to_bits(), rev.value.to_bits());
        prop_assert_eq!(fwd.k, rev.k);
        prop_assert_eq!(fwd.delta.to_bits(), rev.delta.to_bits());
        prop_assert_eq!(fwd.angle_turns, rev.angle_turns);
    }

    #[test]
    fn monomial_phase_matches_direct_powers(n in 1u128..500, turns in proptest::num::u64::ANY) {
        // for moderate exponents the exact-phase path must agree with
        // direct polar exponentiation
        let s = SparseSeries::new(vec![Term { n, log_c: 0.0 }]).unwrap();
        let angle = Angle { turns };
        let mine = s.eval_polar(0.3, angle, false).unwrap().to_complex();
        let direct = Complex64::from_polar(
            0.7f64.powi(n as i32),
            (angle.radians() * n as f64).rem_euclid(std::f64::consts::TAU),
        );
        prop_assert!((mine - direct).norm() <= 1e-9 * direct.norm().max(1e-300));
    }
}
