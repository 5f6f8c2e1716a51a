//! Inductive coefficient sequences.
//!
//! `ru_coefficients` produces the lacunary-series coefficients
//! `a_1 = 1, a_j = max(W(1 - q^{-(j+offset)}), (j-1)/j * a_{j-1})`; the same
//! recurrence over an envelope's breakpoints gives the `nu_k` sequence and its
//! step majorant `hat W`.

use crate::envelope::Envelope;
use crate::weights::DecayFunction;
use crate::{Error, Result};

/// Which argument of the max won at each step of the recurrence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `W(...)` value was taken (also on exact ties).
    Decay,
    /// `(j-1)/j * a_{j-1}` was taken.
    Ratio,
}

/// Interval offset: 0 samples `W` at `1 - q^{-j}`, 1/2 at `1 - q^{-(j+1/2)}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Offset {
    Zero,
    Half,
}

impl Offset {
    fn value(self) -> f64 {
        match self {
            Offset::Zero => 0.0,
            Offset::Half => 0.5,
        }
    }
}

/// Coefficients `a_1..a_J` of one lacunary series.
#[derive(Debug, Clone)]
pub struct CoeffSeq {
    /// `values[j-1] = a_j`
    pub values: Vec<f64>,
    pub q: u32,
    pub offset: Offset,
    /// Winning branch per step; `branches[0]` corresponds to `a_2`.
    pub branches: Vec<Branch>,
}

/// Runs the coefficient recurrence for `j = 1..=j_count`.
pub fn ru_coefficients(
    w: &DecayFunction,
    q: u32,
    j_count: usize,
    offset: Offset,
) -> Result<CoeffSeq> {
    if q < 2 {
        return Err(Error::Argument(format!("q must be at least 2, got {q}")));
    }
    if j_count < 1 {
        return Err(Error::Argument("need at least one coefficient".into()));
    }
    let lnq = (q as f64).ln();
    let mut values = Vec::with_capacity(j_count);
    let mut branches = Vec::with_capacity(j_count.saturating_sub(1));
    values.push(1.0);
    for j in 2..=j_count {
        let delta = (-(j as f64 + offset.value()) * lnq).exp();
        let decay = w.eval_delta(delta);
        let ratio = (j as f64 - 1.0) / j as f64 * values[j - 2];
        if decay >= ratio {
            values.push(decay);
            branches.push(Branch::Decay);
        } else {
            values.push(ratio);
            branches.push(Branch::Ratio);
        }
    }
    Ok(CoeffSeq {
        values,
        q,
        offset,
        branches,
    })
}

impl CoeffSeq {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `a_j`, 1-based.
    pub fn a(&self, j: usize) -> f64 {
        self.values[j - 1]
    }

    /// Invariant check: `a_1 = 1`, non-increasing, `a_j >= 1/j`, and branch
    /// values reproduce the recurrence bitwise.
    pub fn check_invariants(&self, w: &DecayFunction) -> Result<()> {
        if self.values[0] != 1.0 {
            return Err(Error::Construction("a_1 must equal 1".into()));
        }
        let lnq = (self.q as f64).ln();
        for j in 2..=self.len() {
            let a = self.values[j - 1];
            let prev = self.values[j - 2];
            if a > prev {
                return Err(Error::Construction(format!(
                    "sequence must be non-increasing, a_{j} > a_{}",
                    j - 1
                )));
            }
            if a < 1.0 / j as f64 {
                return Err(Error::Construction(format!("a_{j} < 1/{j}")));
            }
            let delta = (-(j as f64 + self.offset.value()) * lnq).exp();
            let expected = match self.branches[j - 2] {
                Branch::Decay => w.eval_delta(delta),
                Branch::Ratio => (j as f64 - 1.0) / j as f64 * prev,
            };
            if a.to_bits() != expected.to_bits() {
                return Err(Error::Construction(format!(
                    "a_{j} does not equal its recorded max-argument bitwise"
                )));
            }
        }
        Ok(())
    }
}

/// The `nu` sequence attached to an envelope's breakpoints, plus the step
/// majorant `hat W`.
#[derive(Debug, Clone)]
pub struct NuSeq {
    /// `values[k-1] = nu_k`, k = 1..=K.
    pub values: Vec<f64>,
    /// `1 - t_0`
    pub t0_delta: f64,
    /// `1 - t_k` for k = 1..=K (decreasing).
    pub t_deltas: Vec<f64>,
}

/// `nu_1 = 1, nu_k = max(W(t_k), (k-1)/k * nu_{k-1})` over the envelope's
/// breakpoints.
pub fn nu_coefficients(w: &DecayFunction, env: &Envelope) -> Result<NuSeq> {
    let t_deltas: Vec<f64> = env.segments.iter().map(|s| s.t_delta).collect();
    nu_from_deltas(w, env.t0_delta, &t_deltas)
}

/// Recurrence over explicit breakpoint deltas.
pub fn nu_from_deltas(w: &DecayFunction, t0_delta: f64, t_deltas: &[f64]) -> Result<NuSeq> {
    if t_deltas.is_empty() {
        return Err(Error::Argument("nu recurrence needs a non-empty t sequence".into()));
    }
    let mut values = Vec::with_capacity(t_deltas.len());
    values.push(1.0);
    for k in 2..=t_deltas.len() {
        let decay = w.eval_delta(t_deltas[k - 1]);
        let ratio = (k as f64 - 1.0) / k as f64 * values[k - 2];
        values.push(decay.max(ratio));
    }
    Ok(NuSeq {
        values,
        t0_delta,
        t_deltas: t_deltas.to_vec(),
    })
}

impl NuSeq {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `nu_k`, 1-based.
    pub fn nu(&self, k: usize) -> f64 {
        self.values[k - 1]
    }

    /// A constant-one sequence over the same breakpoints (big-O mode).
    pub fn constant_one_like(&self) -> NuSeq {
        NuSeq {
            values: vec![1.0; self.values.len()],
            t0_delta: self.t0_delta,
            t_deltas: self.t_deltas.clone(),
        }
    }

    /// Step function `hat W(r)` for `r = 1 - delta`:
    /// 1 on `[0, t_1)`, `nu_k` on `[t_k, t_{k+1})`; errors at `r >= t_K`.
    pub fn hat_w_delta(&self, delta: f64) -> Result<f64> {
        let last = *self.t_deltas.last().unwrap();
        if delta <= last {
            return Err(Error::Range(format!(
                "hat W undefined at delta={delta}: envelope too short (t_K delta={last})"
            )));
        }
        // largest k with t_k <= r, i.e. t_deltas[k-1] >= delta
        let k = self.t_deltas.partition_point(|&d| d >= delta);
        if k == 0 {
            Ok(1.0)
        } else {
            Ok(self.values[k - 1])
        }
    }

    /// Convenience wrapper over radii.
    pub fn hat_w(&self, r: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&r) {
            return Err(Error::Domain(format!("hat W needs 0 <= r < 1, got {r}")));
        }
        self.hat_w_delta(1.0 - r)
    }

    /// Invariants: `nu_1 = 1`, non-increasing, `nu_k >= 1/k`, and the ratio
    /// bound `nu_m <= (k/m) nu_k` for all m < k.
    pub fn check_invariants(&self) -> Result<()> {
        if self.values[0] != 1.0 {
            return Err(Error::Construction("nu_1 must equal 1".into()));
        }
        for k in 2..=self.len() {
            if self.values[k - 1] > self.values[k - 2] {
                return Err(Error::Construction(format!("nu_{k} > nu_{}", k - 1)));
            }
            if self.values[k - 1] < 1.0 / k as f64 {
                return Err(Error::Construction(format!("nu_{k} < 1/{k}")));
            }
        }
        for k in 1..=self.len() {
            for m in 1..k {
                let lhs = self.values[m - 1];
                let rhs = k as f64 / m as f64 * self.values[k - 1];
                if lhs > rhs * (1.0 + 1e-14) {
                    return Err(Error::Construction(format!(
                        "ratio bound nu_{m} <= ({k}/{m}) nu_{k} violated"
                    )));
                }
            }
        }
        Ok(())
    }
}
