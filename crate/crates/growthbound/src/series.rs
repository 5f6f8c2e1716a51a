//! Sparse lacunary power series and the function pairs built from them.
//!
//! Coefficients are stored as logs and radii as `delta = 1 - r`, so series
//! whose coefficients or values leave the f64 range (growth pairs over
//! steep weights routinely reach `e^{10^5}`) evaluate exactly like tame
//! ones. A term's magnitude exponent `log c + n log r` is assembled with
//! error-free transforms, the phase `n arg z` is reduced mod 2 pi in integer
//! arithmetic, and the final sum is compensated.

use crate::coefficients::{ru_coefficients, CoeffSeq, NuSeq, Offset};
use crate::envelope::Envelope;
use crate::numeric::{format_f64, two_prod, two_sum, Angle, CompensatedSum};
use crate::weights::DecayFunction;
use crate::{Error, Result};
use num_complex::Complex64;

/// One monomial `exp(log_c) * z^n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub n: u128,
    pub log_c: f64,
}

/// Finitely truncated power series with sparse integer exponents, positive
/// coefficients, a scale factor and a rotation applied as `z -> e^{i theta} z`.
#[derive(Debug, Clone)]
pub struct SparseSeries {
    pub terms: Vec<Term>,
    pub scale: f64,
    pub rotation: Angle,
}

/// A complex value in split representation `e^{ln_scale} * value`.
#[derive(Debug, Clone, Copy)]
pub struct Scaled {
    pub ln_scale: f64,
    pub value: Complex64,
}

impl Scaled {
    pub const ZERO: Scaled = Scaled {
        ln_scale: f64::NEG_INFINITY,
        value: Complex64::new(0.0, 0.0),
    };

    /// `log |self|`; `-inf` for zero.
    pub fn ln_abs(&self) -> f64 {
        let n = self.value.norm();
        if n == 0.0 {
            f64::NEG_INFINITY
        } else {
            self.ln_scale + n.ln()
        }
    }

    /// Collapses to a plain complex number (may overflow to inf or
    /// underflow to 0).
    pub fn to_complex(&self) -> Complex64 {
        if self.value.norm() == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            self.value * self.ln_scale.exp()
        }
    }
}

/// `log(e^a + e^b)` robust against spread.
pub fn ln_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

impl SparseSeries {
    pub fn new(terms: Vec<Term>) -> Result<SparseSeries> {
        for pair in terms.windows(2) {
            if pair[0].n >= pair[1].n {
                return Err(Error::Argument(
                    "series exponents must be strictly increasing".into(),
                ));
            }
        }
        if terms.iter().any(|t| !t.log_c.is_finite()) {
            return Err(Error::Argument(
                "series coefficients must be positive and finite in log form".into(),
            ));
        }
        Ok(SparseSeries {
            terms,
            scale: 1.0,
            rotation: Angle::ZERO,
        })
    }

    pub fn with_rotation(mut self, rotation: Angle) -> SparseSeries {
        self.rotation = rotation;
        self
    }

    pub fn with_scale(mut self, scale: f64) -> SparseSeries {
        self.scale = scale;
        self
    }

    /// Per-term magnitude data at a fixed radius; shared by every angle.
    /// `deriv` evaluates the term-wise derivative series.
    pub fn at_radius(&self, delta: f64, deriv: bool) -> Result<RadialTerms<'_>> {
        if !(delta > 0.0 && delta <= 1.0) {
            return Err(Error::Domain(format!(
                "series evaluation needs |z| < 1, got delta = {delta}"
            )));
        }
        let ln_r = (-delta).ln_1p();
        let ln_scale_term = self.scale.ln();
        let mut ln_mags = Vec::with_capacity(self.terms.len());
        let mut m = f64::NEG_INFINITY;
        for t in &self.terms {
            if deriv && t.n == 0 {
                // derivative of a constant: keep alignment, contributes nothing
                ln_mags.push((f64::NEG_INFINITY, 0.0));
                continue;
            }
            let n_eff = if deriv { t.n - 1 } else { t.n };
            // log c + n_eff * log r, with the product and sum error-free
            let (p_hi, p_lo) = two_prod(n_eff as f64, ln_r);
            let mut log_c = t.log_c + ln_scale_term;
            if deriv {
                log_c += (t.n as f64).ln();
            }
            let (s_hi, s_lo) = two_sum(p_hi, log_c);
            let lo = s_lo + p_lo;
            if s_hi > m {
                m = s_hi;
            }
            ln_mags.push((s_hi, lo));
        }
        let mags: Vec<f64> = ln_mags
            .iter()
            .map(|&(hi, lo)| {
                if hi == f64::NEG_INFINITY {
                    0.0
                } else {
                    ((hi - m) + lo).exp()
                }
            })
            .collect();
        Ok(RadialTerms {
            series: self,
            deriv,
            ln_scale: m,
            mags,
        })
    }

    /// Evaluates at `r = 1 - delta`, `arg z` given as an exact angle.
    pub fn eval_polar(&self, delta: f64, angle: Angle, deriv: bool) -> Result<Scaled> {
        Ok(self.at_radius(delta, deriv)?.eval_at_angle(angle))
    }

    /// Plain complex evaluation. Prefer [`SparseSeries::eval_polar`] when
    /// `|z|` is close to 1; this entry point reconstructs `delta = 1 - |z|`
    /// from the Cartesian form and collapses the scaled result.
    pub fn eval(&self, z: Complex64, deriv: bool) -> Result<Complex64> {
        let norm2 = z.norm_sqr();
        if !(norm2 < 1.0) {
            return Err(Error::Domain(format!(
                "series evaluation needs |z| < 1, got |z|^2 = {norm2}"
            )));
        }
        if norm2 == 0.0 {
            // only a constant term survives at the origin
            if !deriv {
                if let Some(t) = self.terms.first() {
                    if t.n == 0 {
                        return Ok(Complex64::new(self.scale * t.log_c.exp(), 0.0));
                    }
                }
            }
            return Ok(Complex64::new(0.0, 0.0));
        }
        let r = norm2.sqrt();
        let delta = (1.0 - norm2) / (1.0 + r);
        let angle = Angle::from_radians(z.im.atan2(z.re));
        Ok(self.eval_polar(delta, angle, deriv)?.to_complex())
    }

    /// CSV serialization: a header comment, then
    /// `exponent,coefficient,log_coefficient` rows.
    pub fn render_csv(&self, kind: &str) -> String {
        let mut out = format!(
            "# kind={kind} scale={} theta_turns={}\n",
            format_f64(self.scale),
            self.rotation.turns
        );
        out.push_str("exponent,coefficient,log_coefficient\n");
        for t in &self.terms {
            out.push_str(&format!(
                "{},{},{}\n",
                t.n,
                format_f64(t.log_c.exp()),
                format_f64(t.log_c)
            ));
        }
        out
    }

    /// Parses the output of [`SparseSeries::render_csv`]; returns the series
    /// and the kind string from the header.
    pub fn parse_csv(text: &str) -> Result<(SparseSeries, String)> {
        let mut kind = String::new();
        let mut scale = 1.0;
        let mut rotation = Angle::ZERO;
        let mut terms = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line == "exponent,coefficient,log_coefficient" {
                continue;
            }
            if let Some(rest) = line.strip_prefix("# ") {
                for field in rest.split_whitespace() {
                    if let Some((key, value)) = field.split_once('=') {
                        match key {
                            "kind" => kind = value.to_string(),
                            "scale" => {
                                scale = value
                                    .parse()
                                    .map_err(|e| Error::Argument(format!("bad scale {value}: {e}")))?
                            }
                            "theta_turns" => {
                                rotation = Angle {
                                    turns: value.parse().map_err(|e| {
                                        Error::Argument(format!("bad theta {value}: {e}"))
                                    })?,
                                }
                            }
                            _ => {}
                        }
                    }
                }
                continue;
            }
            let mut fields = line.split(',');
            let n: u128 = fields
                .next()
                .ok_or_else(|| Error::Argument("missing exponent".into()))?
                .parse()
                .map_err(|e| Error::Argument(format!("bad exponent: {e}")))?;
            let _linear_coeff = fields.next();
            let log_c: f64 = fields
                .next()
                .ok_or_else(|| Error::Argument("missing log coefficient".into()))?
                .parse()
                .map_err(|e| Error::Argument(format!("bad log coefficient: {e}")))?;
            terms.push(Term { n, log_c });
        }
        let mut s = SparseSeries::new(terms)?;
        s.scale = scale;
        s.rotation = rotation;
        Ok((s, kind))
    }
}

/// Magnitude profile of a series at one radius.
pub struct RadialTerms<'a> {
    series: &'a SparseSeries,
    deriv: bool,
    /// Common magnitude exponent; term i has modulus `mags[i] * e^{ln_scale}`.
    pub ln_scale: f64,
    /// Term moduli relative to `e^{ln_scale}`, in term order.
    pub mags: Vec<f64>,
}

impl RadialTerms<'_> {
    /// Compensated complex sum at the given angle (rotation included).
    pub fn eval_at_angle(&self, angle: Angle) -> Scaled {
        let total = self.series.rotation.wrapping_add(angle);
        let mut re = CompensatedSum::default();
        let mut im = CompensatedSum::default();
        for (t, &mag) in self.series.terms.iter().zip(&self.mags) {
            if mag == 0.0 {
                continue;
            }
            let n_eff = if self.deriv { t.n - 1 } else { t.n };
            let (s, c) = total.monomial_phase(n_eff).sin_cos();
            re.add(mag * c);
            im.add(mag * s);
        }
        Scaled {
            ln_scale: self.ln_scale,
            value: Complex64::new(re.value(), im.value()),
        }
    }

    /// Angle-free bounds `(lower, upper)` for the modulus relative to
    /// `e^{ln_scale}`: reverse/plain triangle inequality with the largest
    /// term as the dominant one.
    pub fn triangle_bounds(&self) -> (f64, f64) {
        let mut sum = 0.0;
        let mut max = 0.0f64;
        for &m in &self.mags {
            sum += m;
            if m > max {
                max = m;
            }
        }
        (2.0 * max - sum, sum)
    }

    /// Modulus of term `i` relative to `e^{ln_scale}`.
    pub fn mag(&self, i: usize) -> f64 {
        self.mags[i]
    }
}

/// Which construction produced a pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairKind {
    Bloch,
    Vmoa,
    Growth,
}

impl PairKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            PairKind::Bloch => "bloch",
            PairKind::Vmoa => "vmoa",
            PairKind::Growth => "growth",
        }
    }

    pub fn parse(s: &str) -> Result<PairKind> {
        match s {
            "bloch" => Ok(PairKind::Bloch),
            "vmoa" => Ok(PairKind::Vmoa),
            "growth" => Ok(PairKind::Growth),
            other => Err(Error::Argument(format!("unknown pair kind {other}"))),
        }
    }
}

/// Construction parameters a pair carries with it.
#[derive(Debug, Clone)]
pub enum Provenance {
    Bloch {
        q: u32,
        j_count: usize,
        decay_desc: String,
    },
    Growth {
        h: f64,
        x0: f64,
        /// `1 - t_k` for k = 0..=K; index 0 is `t_0`.
        t_deltas: Vec<f64>,
        /// Division exponent used to clear the common zero at the origin.
        n1: u128,
        /// Set once `remove_common_zeros` has chosen the rotation.
        zeros_cleared: bool,
        decay_desc: String,
        weight_desc: String,
    },
}

impl Provenance {
    /// `1 - t_2`, the zero-search radius for growth pairs.
    pub fn t2_delta(&self) -> Option<f64> {
        match self {
            Provenance::Growth { t_deltas, .. } => t_deltas.get(2).copied(),
            _ => None,
        }
    }
}

/// The extremal pair `(f, g)` with alternating responsibility intervals.
#[derive(Debug, Clone)]
pub struct FunctionPair {
    pub f: SparseSeries,
    pub g: SparseSeries,
    pub kind: PairKind,
    pub provenance: Provenance,
}

/// Builds the lacunary pair for the Bloch/VMOA constructions:
/// `f = sum a_j z^{q^j}`, `g = sum b_j z^{q^{j+1/2}}` with the coefficient
/// recurrence run at offsets 0 and 1/2 respectively.
pub fn build_bloch_pair(w: &DecayFunction, q: u32, j_count: usize) -> Result<FunctionPair> {
    let root = (q as f64).sqrt().round() as u32;
    if root * root != q {
        return Err(Error::Argument(format!(
            "q must be a perfect square so that q^(j+1/2) is an integer, got {q}"
        )));
    }
    if j_count < 2 {
        return Err(Error::Argument("need at least 2 terms".into()));
    }
    let a = ru_coefficients(w, q, j_count, Offset::Zero)?;
    let b = ru_coefficients(w, q, j_count, Offset::Half)?;
    let f = series_from_coeffs(&a, q, 0)?;
    let g = series_from_coeffs(&b, q, root)?;
    let kind = if w.is_constant_one() {
        PairKind::Bloch
    } else {
        PairKind::Vmoa
    };
    Ok(FunctionPair {
        f,
        g,
        kind,
        provenance: Provenance::Bloch {
            q,
            j_count,
            decay_desc: w.describe(),
        },
    })
}

/// Exponents `q^j` (half_factor = 0) or `sqrt(q) * q^j` otherwise.
fn series_from_coeffs(coeffs: &CoeffSeq, q: u32, half_factor: u32) -> Result<SparseSeries> {
    let mut terms = Vec::with_capacity(coeffs.len());
    let mut exp: u128 = q as u128;
    for j in 1..=coeffs.len() {
        let n = if half_factor == 0 {
            exp
        } else {
            exp.checked_mul(half_factor as u128)
                .ok_or_else(|| Error::Range("exponent overflow".into()))?
        };
        terms.push(Term {
            n,
            log_c: coeffs.a(j).ln(),
        });
        exp = exp
            .checked_mul(q as u128)
            .ok_or_else(|| Error::Range("exponent overflow".into()))?;
    }
    SparseSeries::new(terms)
}

/// Builds the growth pair from an envelope and its `nu` sequence:
/// `f` takes the odd-indexed terms `nu_k a_k z^{n_k}` divided by `z^{n_1}`
/// (so `f(0) = nu_1 a_1 > 0`), `g` the even-indexed ones.
pub fn build_growth_pair(env: &Envelope, nu: &NuSeq) -> Result<FunctionPair> {
    let kk = env.k_count();
    if kk < 3 {
        return Err(Error::Argument(format!(
            "growth pair needs at least 3 envelope segments, got {kk}"
        )));
    }
    if nu.len() != kk {
        return Err(Error::Argument(format!(
            "nu sequence length {} does not match envelope length {kk}",
            nu.len()
        )));
    }
    let n1 = env.segments[0].n;
    let mut f_terms = Vec::new();
    let mut g_terms = Vec::new();
    for k in 1..=kk {
        let s = &env.segments[k - 1];
        let term = Term {
            n: if k % 2 == 1 { s.n - n1 } else { s.n },
            log_c: s.log_a + nu.nu(k).ln(),
        };
        if k % 2 == 1 {
            f_terms.push(term);
        } else {
            g_terms.push(term);
        }
    }
    let mut t_deltas = Vec::with_capacity(kk + 1);
    t_deltas.push(env.t0_delta);
    t_deltas.extend(env.segments.iter().map(|s| s.t_delta));
    Ok(FunctionPair {
        f: SparseSeries::new(f_terms)?,
        g: SparseSeries::new(g_terms)?,
        kind: PairKind::Growth,
        provenance: Provenance::Growth {
            h: env.h,
            x0: env.x0,
            t_deltas,
            n1,
            zeros_cleared: false,
            decay_desc: String::new(),
            weight_desc: String::new(),
        },
    })
}

/// Locates the zeros of `f` in the closed disc of the given radius and
/// rotates `g` so that `min_j |g(e^{i theta} z_j)|` is maximal over a grid
/// of candidate angles. The achieved minimum must come out positive.
pub fn remove_common_zeros(
    pair: &FunctionPair,
    radius: f64,
    angle_grid: usize,
    refine_tol: f64,
) -> Result<(FunctionPair, crate::zeros::ZeroReport)> {
    if pair.kind != PairKind::Growth {
        return Err(Error::Precondition(
            "zero removal applies to growth pairs".into(),
        ));
    }
    if !(radius > 0.0 && radius < 1.0) {
        return Err(Error::Argument(format!(
            "zero search radius must lie in (0,1), got {radius}"
        )));
    }
    if angle_grid == 0 {
        return Err(Error::Argument("angle grid must be non-empty".into()));
    }
    let zeros = crate::zeros::find_zeros_in_disc(&pair.f, radius, refine_tol)?;

    let mut best_turns = 0u64;
    let mut best_score = f64::NEG_INFINITY;
    if zeros.is_empty() {
        best_score = f64::INFINITY;
    } else {
        // per-zero polar data is rotation-independent
        let polar: Vec<(f64, Angle)> = zeros
            .iter()
            .map(|z| {
                let norm2 = z.norm_sqr();
                let r = norm2.sqrt();
                let delta = (1.0 - norm2) / (1.0 + r);
                (delta, Angle::from_radians(z.im.atan2(z.re)))
            })
            .collect();
        let r_max = zeros.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
        let g_scoring = crate::zeros::prune_for_disc(&pair.g, r_max.max(1e-6));
        for i in 0..angle_grid {
            let theta = Angle::grid(i as u64, angle_grid as u64);
            let mut score = f64::INFINITY;
            for &(delta, ang) in &polar {
                let v = g_scoring
                    .eval_polar(delta, ang.wrapping_add(theta), false)?
                    .ln_abs();
                if v < score {
                    score = v;
                }
            }
            if score > best_score {
                best_score = score;
                best_turns = theta.turns;
            }
        }
        if best_score == f64::NEG_INFINITY {
            return Err(Error::Instability(
                "every candidate rotation leaves |g| at zero on some zero of f".into(),
            ));
        }
    }

    let mut out = pair.clone();
    out.g.rotation = Angle { turns: best_turns };
    if let Provenance::Growth { zeros_cleared, .. } = &mut out.provenance {
        *zeros_cleared = true;
    }
    let report = crate::zeros::ZeroReport {
        zeros,
        theta_turns: best_turns,
        min_ln_abs_g: best_score,
        radius,
    };
    Ok((out, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::DecayFunction;

    fn vmoa_pair() -> FunctionPair {
        build_bloch_pair(&DecayFunction::inverse_log(), 100, 8).unwrap()
    }

    #[test]
    fn vmoa_series_shape() {
        let pair = vmoa_pair();
        // f = sum j^{-1} z^{100^j}
        let mut exp = 100u128;
        for (j, t) in pair.f.terms.iter().enumerate() {
            assert_eq!(t.n, exp);
            let a = t.log_c.exp();
            assert!((a - 1.0 / (j as f64 + 1.0)).abs() <= 1e-14);
            exp *= 100;
        }
        // g exponents are 10 * 100^j, interleaving f's in log scale
        let mut exp = 1000u128;
        for t in &pair.g.terms {
            assert_eq!(t.n, exp);
            exp *= 100;
        }
        assert_eq!(pair.kind, PairKind::Vmoa);
    }

    #[test]
    fn constant_one_pair_is_unit_coefficients() {
        let pair = build_bloch_pair(&DecayFunction::constant_one(), 100, 4).unwrap();
        assert_eq!(pair.kind, PairKind::Bloch);
        assert_eq!(
            pair.f.terms.iter().map(|t| t.n).collect::<Vec<_>>(),
            vec![100, 10_000, 1_000_000, 100_000_000]
        );
        assert!(pair.f.terms.iter().all(|t| t.log_c == 0.0));
    }

    #[test]
    fn q_must_be_a_perfect_square() {
        assert!(build_bloch_pair(&DecayFunction::inverse_log(), 99, 4).is_err());
        assert!(build_bloch_pair(&DecayFunction::inverse_log(), 4, 4).is_ok());
    }

    #[test]
    fn eval_at_origin_and_conjugation() {
        let pair = vmoa_pair();
        // no constant term: f(0) = 0
        assert_eq!(
            pair.f.eval(Complex64::new(0.0, 0.0), false).unwrap(),
            Complex64::new(0.0, 0.0)
        );
        // real coefficients: f(conj z) = conj f(z)
        let z = Complex64::new(0.57, 0.63);
        let a = pair.f.eval(z, false).unwrap();
        let b = pair.f.eval(z.conj(), false).unwrap();
        assert!((a.re - b.re).abs() <= 1e-12 * a.norm().max(1e-300));
        assert!((a.im + b.im).abs() <= 1e-12 * a.norm().max(1e-300));
    }

    #[test]
    fn eval_vmoa_at_099_matches_frozen_value() {
        // first term 0.99^100 dominates; frozen with a 40-digit reference
        let pair = vmoa_pair();
        let v = pair.f.eval(Complex64::new(0.99, 0.0), false).unwrap();
        assert!(
            (v.re - 0.3660323412732295).abs() < 1e-14,
            "f(0.99) = {}",
            v.re
        );
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn domain_errors() {
        let pair = vmoa_pair();
        assert!(pair.f.eval(Complex64::new(1.0, 0.0), false).is_err());
        assert!(pair.f.eval_polar(0.0, Angle::ZERO, false).is_err());
        assert!(pair.f.eval_polar(-0.5, Angle::ZERO, false).is_err());
    }

    #[test]
    fn derivative_of_single_monomial() {
        // d/dz z^5 = 5 z^4
        let s = SparseSeries::new(vec![Term { n: 5, log_c: 0.0 }]).unwrap();
        let z = Complex64::new(0.3, 0.4);
        let d = s.eval(z, true).unwrap();
        let expected = 5.0 * z.powu(4);
        assert!((d - expected).norm() <= 1e-14 * expected.norm());
        // derivative skips a constant term
        let c =
            SparseSeries::new(vec![Term { n: 0, log_c: 0.0 }, Term { n: 3, log_c: 0.0 }]).unwrap();
        let d = c.eval(z, true).unwrap();
        let expected = 3.0 * z.powu(2);
        assert!((d - expected).norm() <= 1e-14 * expected.norm());
    }

    #[test]
    fn rotation_grid_invariance_of_modulus_profile() {
        // rotating by a grid angle permutes the angle grid, so the max of
        // |g| over the grid is exactly invariant
        let pair = vmoa_pair();
        let angles = 64u64;
        let delta = 1e-3;
        let base = pair.g.clone();
        let rotated = pair.g.clone().with_rotation(Angle::grid(5, angles));
        let max_of = |s: &SparseSeries| -> f64 {
            let rt = s.at_radius(delta, false).unwrap();
            (0..angles)
                .map(|i| rt.eval_at_angle(Angle::grid(i, angles)).value.norm())
                .fold(f64::NEG_INFINITY, f64::max)
        };
        assert_eq!(max_of(&base), max_of(&rotated));
    }

    #[test]
    fn triangle_bounds_bracket_true_modulus() {
        let pair = vmoa_pair();
        for &delta in &[1e-2, 1e-4, 1e-7, 1e-11] {
            let rt = pair.f.at_radius(delta, true).unwrap();
            let (lb, ub) = rt.triangle_bounds();
            for i in 0..32 {
                let v = rt.eval_at_angle(Angle::grid(i, 32)).value.norm();
                assert!(v <= ub * (1.0 + 1e-12));
                assert!(v >= lb - ub * 1e-12, "delta={delta} angle {i}: {v} < {lb}");
            }
        }
    }

    #[test]
    fn growth_pair_splits_parities_and_shifts_f() {
        let w = crate::weights::RadialWeight::exponential(1.0, 1.0).unwrap();
        let env = crate::envelope::build_envelope(&w, 8.0, -0.1, 1e-3, 64).unwrap();
        let nu = crate::coefficients::nu_coefficients(&DecayFunction::inverse_log(), &env).unwrap();
        let pair = build_growth_pair(&env, &nu).unwrap();
        let n1 = env.segments[0].n;
        // f(0) = nu_1 a_1 > 0 after the shift
        let f0 = pair.f.eval(Complex64::new(0.0, 0.0), false).unwrap();
        assert!((f0.re - env.segments[0].log_a.exp()).abs() <= 1e-10 * f0.re);
        // exponent parity: f uses n_1, n_3, ...; g uses n_2, n_4, ...
        for (i, t) in pair.f.terms.iter().enumerate() {
            assert_eq!(t.n, env.segments[2 * i].n - n1);
        }
        for (i, t) in pair.g.terms.iter().enumerate() {
            assert_eq!(t.n, env.segments[2 * i + 1].n);
        }
    }

    #[test]
    fn growth_pair_needs_three_segments() {
        let w = crate::weights::RadialWeight::power(1.0).unwrap();
        let env = crate::envelope::build_envelope(&w, 8.0, -0.1, 1e-6, 64).unwrap();
        let nu = crate::coefficients::nu_coefficients(&DecayFunction::inverse_log(), &env).unwrap();
        assert!(matches!(
            build_growth_pair(&env, &nu),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn csv_roundtrip_is_exact() {
        let pair = vmoa_pair();
        let text = pair.g.render_csv("vmoa");
        let (back, kind) = SparseSeries::parse_csv(&text).unwrap();
        assert_eq!(kind, "vmoa");
        assert_eq!(back.terms.len(), pair.g.terms.len());
        for (a, b) in pair.g.terms.iter().zip(&back.terms) {
            assert_eq!(a.n, b.n);
            assert_eq!(a.log_c, b.log_c);
        }
        assert_eq!(back.scale, pair.g.scale);
        assert_eq!(back.rotation, pair.g.rotation);
    }

    #[test]
    fn huge_coefficient_series_evaluates_in_scaled_space() {
        // coefficients near e^{5000} would overflow plain f64 evaluation
        let s = SparseSeries::new(vec![
            Term {
                n: 10,
                log_c: 4000.0,
            },
            Term {
                n: 1000,
                log_c: 5000.0,
            },
        ])
        .unwrap();
        let v = s.eval_polar(1e-3, Angle::grid(3, 7), false).unwrap();
        assert!(v.ln_scale > 3990.0);
        assert!(v.value.norm() > 0.0 && v.value.norm().is_finite());
        let expected = 5000.0 + 1000.0 * (-1e-3f64).ln_1p();
        assert!((v.ln_abs() - expected).abs() < 1.0);
    }
}
