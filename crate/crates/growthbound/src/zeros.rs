//! Zero location for sparse polynomial sections by argument-principle
//! winding counts, with Newton refinement.
//!
//! Subdivision runs in logarithmic coordinates `w = log z`: the search disc
//! becomes the rectangle `[log r_in, log radius] x [v0, v0 + 2 pi]`, whose
//! cells are annular sectors. Contours therefore never leave the disc (a
//! z-plane square poking past the rim would wake exponents that are dormant
//! inside), vertical edges have constant radius so one radial magnitude
//! pass serves every sample on them, and the inner cutoff `r_in` is chosen
//! so the lowest-order term dominates everything else by `e^{30}` below it,
//! which leaves the origin as the only possible zero there.
//!
//! Phase tracking along edges is adaptive: any segment whose observed phase
//! step exceeds 1 radian is bisected, with a base sample density tied to
//! the largest live exponent so that monomial-dominated stretches cannot
//! alias. Each split checks that the children windings sum to the parent's.

use crate::numeric::{delta_from_x, Angle};
use crate::series::{SparseSeries, Term};
use crate::{Error, Result};
use num_complex::Complex64;

/// Outcome of `remove_common_zeros`.
#[derive(Debug, Clone)]
pub struct ZeroReport {
    /// Zeros of `f` in the closed disc, sorted by (re, im).
    pub zeros: Vec<Complex64>,
    /// Chosen rotation for `g`, as a binary fraction of a turn.
    pub theta_turns: u64,
    /// `min_j log |g(e^{i theta} z_j)|` at the chosen rotation
    /// (`+inf` when `f` has no zeros in the disc).
    pub min_ln_abs_g: f64,
    /// Search radius.
    pub radius: f64,
}

impl ZeroReport {
    pub fn theta_radians(&self) -> f64 {
        Angle {
            turns: self.theta_turns,
        }
        .radians()
    }

    /// Linear achieved minimum (may underflow to 0 for extreme scales).
    pub fn min_abs_g(&self) -> f64 {
        self.min_ln_abs_g.exp()
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "zero search radius {:.6}: {} zeros, theta = {:.12} rad (turns {}), min log|g| at zeros = {:.6e}\n",
            self.radius,
            self.zeros.len(),
            self.theta_radians(),
            self.theta_turns,
            self.min_ln_abs_g,
        ));
        for z in &self.zeros {
            out.push_str(&format!(
                "{} {}\n",
                crate::numeric::format_f64(z.re),
                crate::numeric::format_f64(z.im)
            ));
        }
        out
    }
}

/// Annular sector in log coordinates: `u = log |z|`, `v = arg z` (unwrapped).
#[derive(Debug, Clone, Copy)]
struct LogRect {
    u0: f64,
    u1: f64,
    v0: f64,
    v1: f64,
}

impl LogRect {
    fn center(&self) -> (f64, f64) {
        (0.5 * (self.u0 + self.u1), 0.5 * (self.v0 + self.v1))
    }

    fn contains(&self, u: f64, v: f64, slack: f64) -> bool {
        if u < self.u0 - slack || u > self.u1 + slack {
            return false;
        }
        // v taken modulo a full turn relative to the rect's seam
        let dv = (v - self.v0).rem_euclid(std::f64::consts::TAU);
        dv <= (self.v1 - self.v0) + slack || dv >= std::f64::consts::TAU - slack
    }
}

fn angle_of(v: f64) -> Angle {
    Angle::from_radians(v)
}

/// Evaluates the section at `z = e^{u + iv}` (scaled value).
fn eval_log(s: &SparseSeries, u: f64, v: f64) -> crate::series::Scaled {
    let delta = delta_from_x(u);
    s.eval_polar(delta, angle_of(v), false)
        .expect("u < 0 inside the disc")
}

fn arg_checked(value: Complex64, u: f64, v: f64) -> Result<f64> {
    if value.norm() == 0.0 {
        return Err(Error::Instability(format!(
            "boundary sample hit a zero at log-coordinates ({u}, {v})"
        )));
    }
    Ok(value.im.atan2(value.re))
}

/// Largest exponent still relevant at radius `e^u` (density estimate).
fn live_exponent(s: &SparseSeries, u: f64) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for t in &s.terms {
        let v = t.log_c + t.n as f64 * u;
        if v > best {
            best = v;
        }
    }
    let mut n_max = 1.0f64;
    for t in &s.terms {
        if t.log_c + t.n as f64 * u > best - 700.0 {
            n_max = n_max.max(t.n as f64);
        }
    }
    n_max
}

/// Phase change along one edge with adaptive bisection.
fn edge_phase<F>(arg_at: F, base: usize) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let base = base.clamp(8, 4_000_000);
    let mut total = 0.0f64;
    let mut t_prev = 0.0f64;
    let mut arg_prev = arg_at(0.0)?;
    for i in 1..=base {
        let t = i as f64 / base as f64;
        let arg = arg_at(t)?;
        total += phase_delta(&arg_at, t_prev, arg_prev, t, arg, 52)?;
        t_prev = t;
        arg_prev = arg;
    }
    Ok(total)
}

fn phase_delta<F>(
    arg_at: &F,
    t_a: f64,
    arg_a: f64,
    t_b: f64,
    arg_b: f64,
    depth: u32,
) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut d = arg_b - arg_a;
    while d > std::f64::consts::PI {
        d -= std::f64::consts::TAU;
    }
    while d < -std::f64::consts::PI {
        d += std::f64::consts::TAU;
    }
    if d.abs() <= 1.0 {
        return Ok(d);
    }
    if depth == 0 {
        return Err(Error::Instability(
            "phase tracking failed; a zero sits on the contour".into(),
        ));
    }
    let t_mid = 0.5 * (t_a + t_b);
    let arg_mid = arg_at(t_mid)?;
    Ok(phase_delta(arg_at, t_a, arg_a, t_mid, arg_mid, depth - 1)?
        + phase_delta(arg_at, t_mid, arg_mid, t_b, arg_b, depth - 1)?)
}

/// Winding of the section along the boundary of an annular sector.
fn winding(s: &SparseSeries, rect: LogRect) -> Result<i64> {
    let n_live = live_exponent(s, rect.u1);
    // base density: ~8 samples per radian of worst-case monomial phase
    let v_base = ((rect.v1 - rect.v0) * n_live * 1.3).ceil() as usize + 8;
    let u_base = 64usize;

    let mut total = 0.0f64;
    // bottom: u from u0 to u1 at v0
    total += edge_phase(
        |t| {
            let u = rect.u0 + (rect.u1 - rect.u0) * t;
            let v = rect.v0;
            arg_checked(eval_log(s, u, v).value, u, v)
        },
        u_base,
    )?;
    // right: v from v0 to v1 at u1 (fixed radius, reuse the magnitude pass)
    {
        let rt = s
            .at_radius(delta_from_x(rect.u1), false)
            .expect("inside the disc");
        total += edge_phase(
            |t| {
                let v = rect.v0 + (rect.v1 - rect.v0) * t;
                arg_checked(rt.eval_at_angle(angle_of(v)).value, rect.u1, v)
            },
            v_base,
        )?;
    }
    // top: u from u1 to u0 at v1
    total += edge_phase(
        |t| {
            let u = rect.u1 - (rect.u1 - rect.u0) * t;
            let v = rect.v1;
            arg_checked(eval_log(s, u, v).value, u, v)
        },
        u_base,
    )?;
    // left: v from v1 to v0 at u0
    {
        let rt = s
            .at_radius(delta_from_x(rect.u0), false)
            .expect("inside the disc");
        total += edge_phase(
            |t| {
                let v = rect.v1 - (rect.v1 - rect.v0) * t;
                arg_checked(rt.eval_at_angle(angle_of(v)).value, rect.u0, v)
            },
            v_base,
        )?;
    }
    let w = total / std::f64::consts::TAU;
    let rounded = w.round();
    if (w - rounded).abs() > 0.05 {
        return Err(Error::Instability(format!(
            "winding number {w} is not close to an integer on log-rect \
             [{}, {}] x [{}, {}]",
            rect.u0, rect.u1, rect.v0, rect.v1
        )));
    }
    Ok(rounded as i64)
}

fn newton_refine(s: &SparseSeries, start: Complex64, tol: f64) -> Option<Complex64> {
    let mut z = start;
    for _ in 0..80 {
        let f = eval_cartesian(s, z, false);
        let fp = eval_cartesian(s, z, true);
        if fp.value.norm() == 0.0 {
            return None;
        }
        if f.value.norm() == 0.0 {
            return Some(z);
        }
        let step = (f.value / fp.value) * (f.ln_scale - fp.ln_scale).exp();
        if !step.re.is_finite() || !step.im.is_finite() {
            return None;
        }
        z -= step;
        if step.norm() <= tol {
            return Some(z);
        }
    }
    None
}

/// Cartesian wrapper over the polar evaluator (Newton steps live in z).
fn eval_cartesian(s: &SparseSeries, z: Complex64, deriv: bool) -> crate::series::Scaled {
    let norm2 = z.norm_sqr();
    if norm2 == 0.0 {
        if !deriv {
            if let Some(t) = s.terms.first() {
                if t.n == 0 {
                    return crate::series::Scaled {
                        ln_scale: t.log_c + s.scale.ln(),
                        value: Complex64::new(1.0, 0.0),
                    };
                }
            }
        }
        return crate::series::Scaled::ZERO;
    }
    let r = norm2.sqrt();
    let delta = (1.0 - norm2) / (1.0 + r);
    let angle = Angle::from_radians(z.im.atan2(z.re));
    s.eval_polar(delta.max(1e-300), angle, deriv)
        .expect("Newton iterate inside the disc")
}

/// All zeros of the (finite) series in the closed disc `|z| <= radius`.
pub(crate) fn find_zeros_in_disc(
    s: &SparseSeries,
    radius: f64,
    refine_tol: f64,
) -> Result<Vec<Complex64>> {
    if s.terms.is_empty() {
        return Ok(Vec::new());
    }
    if !(refine_tol > 0.0) {
        return Err(Error::Argument(
            "refinement tolerance must be positive".into(),
        ));
    }
    // terms dominated by e^{-700} everywhere in the disc never influence
    // winding or refinement at f64 precision
    let s = &prune_for_disc(s, radius);
    let mut zeros: Vec<Complex64> = Vec::new();
    let first = s.terms[0];
    if first.n > 0 {
        // the common monomial factor z^{n_first} puts a zero at the origin
        zeros.push(Complex64::new(0.0, 0.0));
    }

    // inner cutoff: below r_in every other term is e^{-30}-dominated by the
    // lowest-order one, so the annulus [r_in, radius] holds all other zeros
    let mut ln_r_in = radius.ln();
    for t in s.terms.iter().skip(1) {
        let cross = (first.log_c - t.log_c - 30.0) / (t.n - first.n) as f64;
        if cross < ln_r_in {
            ln_r_in = cross;
        }
    }
    if ln_r_in >= radius.ln() {
        // dominated everywhere in the disc: no zeros away from the origin
        return Ok(zeros);
    }

    let seam = 0.2345678901234567; // keeps the angular seam off the axes
    let root = LogRect {
        u0: ln_r_in,
        u1: radius.ln(),
        v0: seam,
        v1: seam + std::f64::consts::TAU,
    };
    let w_root = winding(s, root)?;
    let min_side = (100.0 * refine_tol).max(1e-9);
    let mut stack: Vec<(LogRect, i64, u32)> = vec![(root, w_root, 0)];

    while let Some((rect, w, depth)) = stack.pop() {
        if w <= 0 {
            continue;
        }
        let (du, dv) = (rect.u1 - rect.u0, rect.v1 - rect.v0);
        let side = du.max(dv);
        if w == 1 || side <= min_side {
            let (uc, vc) = rect.center();
            let zc = Complex64::from_polar(uc.exp(), vc.rem_euclid(std::f64::consts::TAU));
            if let Some(z) = newton_refine(s, zc, refine_tol) {
                let zu = z.norm().ln();
                let zv = z.im.atan2(z.re);
                // accept only a zero strictly inside this cell; anything
                // else belongs to a neighbour, so shrink until the basin of
                // the cell's own zero captures the center
                if w == 1 && rect.contains(zu, zv, (10.0 * refine_tol).max(1e-11)) {
                    zeros.push(z);
                    continue;
                }
            }
            if side <= min_side {
                return Err(Error::Instability(format!(
                    "failed to refine an isolated zero near log-coordinates ({uc}, {vc})"
                )));
            }
        }
        // split the longer side, slightly off-center so zeros avoid edges
        let f = 0.5 + 1e-6 * ((depth % 11) as f64 - 5.0);
        let children: [LogRect; 2] = if du >= dv {
            let um = rect.u0 + du * f;
            [
                LogRect { u1: um, ..rect },
                LogRect { u0: um, ..rect },
            ]
        } else {
            let vm = rect.v0 + dv * f;
            [
                LogRect { v1: vm, ..rect },
                LogRect { v0: vm, ..rect },
            ]
        };
        let wa = winding(s, children[0])?;
        let wb = winding(s, children[1])?;
        if wa + wb != w {
            return Err(Error::Instability(format!(
                "zero count mismatch between subdivision levels: parent {w}, children {}",
                wa + wb
            )));
        }
        if wa > 0 {
            stack.push((children[0], wa, depth + 1));
        }
        if wb > 0 {
            stack.push((children[1], wb, depth + 1));
        }
    }

    zeros.retain(|z| z.norm() <= radius * (1.0 + 1e-12));
    zeros.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let merge_tol = (10.0 * refine_tol).max(1e-13);
    let mut out: Vec<Complex64> = Vec::with_capacity(zeros.len());
    for z in zeros {
        if out
            .iter()
            .rev()
            .take(64)
            .any(|p| (z - p).norm() <= merge_tol)
        {
            continue;
        }
        out.push(z);
    }
    Ok(out)
}

/// Drops terms that stay below `e^{-700}` of the dominant term everywhere in
/// the disc `|z| <= radius`: for exponents above the dominant one the gap at
/// the rim only widens inward.
pub(crate) fn prune_for_disc(s: &SparseSeries, radius: f64) -> SparseSeries {
    let ln_r = radius.ln();
    let lnmag = |t: &Term| -> f64 { t.log_c + t.n as f64 * ln_r };
    let (mut n_dom, mut best) = (0u128, f64::NEG_INFINITY);
    for t in &s.terms {
        let v = lnmag(t);
        if v > best {
            best = v;
            n_dom = t.n;
        }
    }
    let kept: Vec<Term> = s
        .terms
        .iter()
        .filter(|t| t.n <= n_dom || lnmag(t) > best - 700.0)
        .copied()
        .collect();
    SparseSeries {
        terms: kept,
        scale: s.scale,
        rotation: s.rotation,
    }
}
