//! Quasiprobability decompositions of non-Gaussian channels and the
//! simulation-cost measure derived from them.
//!
//! A target channel is expanded as Λ = Σ_i w_i B_i over the Gaussian basis,
//! with Σ_i |w_i| minimal. That minimal L1 norm W(Λ) ≥ 1 governs both the
//! sampling overhead (variance grows as W²) and the sample count needed for
//! a given accuracy.

use std::sync::Arc;

use dashmap::DashMap;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::channels::{ptm_noisy_rot_zz, BasisChannelSet, ChannelPTM};
use crate::error::{Error, Result};
use crate::lp;

/// A decomposition whose reconstruction misses the target by more than
/// this (entrywise, over the whole transfer matrix) is rejected.
pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-8;

/// Signed weights of a channel over a basis, in basis order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuasiDecomposition {
    pub weights: Vec<f64>,
    /// Σ|w_i|, the simulation-cost measure W.
    pub l1_norm: f64,
    /// max |Σ w_i B_i - Λ| over all transfer-matrix entries.
    pub residual: f64,
}

impl QuasiDecomposition {
    /// The sampling distribution |w_i| / Σ|w|.
    pub fn probabilities(&self) -> Vec<f64> {
        self.weights
            .iter()
            .map(|w| w.abs() / self.l1_norm)
            .collect()
    }

    /// Sign carried into the estimator when channel `i` is drawn.
    pub fn sign(&self, i: usize) -> f64 {
        if self.weights[i] < 0.0 {
            -1.0
        } else {
            1.0
        }
    }
}

/// L1-minimal expansion of `target` over `basis`.
///
/// All 256 transfer-matrix entries are imposed as equality constraints;
/// linearly dependent rows are eliminated inside the solver and the full
/// residual is checked afterwards, so a target outside the basis span is
/// reported as [`Error::InfeasibleTarget`] rather than silently projected.
pub fn solve_l1(
    target: &ChannelPTM,
    basis: &BasisChannelSet,
    residual_tol: f64,
) -> Result<QuasiDecomposition> {
    let n = basis.len();
    let mut a = DMatrix::zeros(256, n);
    for (i, ch) in basis.channels().iter().enumerate() {
        let m = ch.ptm.matrix();
        for row in 0..16 {
            for col in 0..16 {
                a[(16 * row + col, i)] = m[(row, col)];
            }
        }
    }
    let b = DVector::from_fn(256, |k, _| target.matrix()[(k / 16, k % 16)]);
    let sol = lp::solve_l1_min(&a, &b)?;
    let residual = (&a * DVector::from_column_slice(&sol.x) - &b).amax();
    if residual > residual_tol {
        return Err(Error::InfeasibleTarget { residual });
    }
    Ok(QuasiDecomposition {
        weights: sol.x,
        l1_norm: sol.objective,
        residual,
    })
}

/// W(θ, p): the cost of the four-body Majorana rotation by θ under
/// two-mode dephasing of strength p.
pub fn nonlinearity(theta: f64, p: f64, basis: &BasisChannelSet) -> Result<f64> {
    Ok(solve_l1(&ptm_noisy_rot_zz(theta, p)?, basis, DEFAULT_RESIDUAL_TOL)?.l1_norm)
}

/// Memoises decompositions of the (θ, p) target family. Keys are rounded
/// to 10⁻¹², which is far below any distinction the solver could resolve;
/// safe to share across threads.
pub struct DecompositionCache {
    basis: BasisChannelSet,
    residual_tol: f64,
    map: DashMap<(i64, i64), Arc<QuasiDecomposition>>,
}

impl DecompositionCache {
    pub fn new(basis: BasisChannelSet, residual_tol: f64) -> Self {
        DecompositionCache {
            basis,
            residual_tol,
            map: DashMap::new(),
        }
    }

    pub fn standard() -> Self {
        Self::new(BasisChannelSet::standard(), DEFAULT_RESIDUAL_TOL)
    }

    pub fn basis(&self) -> &BasisChannelSet {
        &self.basis
    }

    fn quantise(v: f64) -> i64 {
        (v * 1e12).round() as i64
    }

    pub fn get(&self, theta: f64, p: f64) -> Result<Arc<QuasiDecomposition>> {
        let key = (Self::quantise(theta), Self::quantise(p));
        if let Some(hit) = self.map.get(&key) {
            return Ok(hit.clone());
        }
        let target = ptm_noisy_rot_zz(theta, p)?;
        let decomposition = Arc::new(solve_l1(&target, &self.basis, self.residual_tol)?);
        let entry = self.map.entry(key).or_insert(decomposition);
        Ok(entry.clone())
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// Samples sufficient for an additive-error ε estimate with confidence
/// 1 - δ when the quasiprobability estimate is bounded by the total L1
/// norm: N = ⌈2 W² ln(2/δ) / ε²⌉.
pub fn hoeffding_samples(l1_norm: f64, epsilon: f64, delta: f64) -> Result<u64> {
    if !(epsilon > 0.0 && epsilon.is_finite() && delta > 0.0 && delta < 1.0) {
        return Err(Error::BadAccuracy { epsilon, delta });
    }
    if !(l1_norm.is_finite() && l1_norm >= 0.0) {
        return Err(Error::BadAccuracy { epsilon, delta });
    }
    let n = (2.0 * l1_norm * l1_norm / (epsilon * epsilon) * (2.0 / delta).ln()).ceil();
    Ok(n as u64)
}

/// Cost of one gate inside a circuit-level report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateCost {
    /// Position of the gate in the submitted list.
    pub gate: usize,
    pub theta: f64,
    pub p: f64,
    pub w: f64,
}

/// Per-gate costs and their product, the circuit-level upper bound on W.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostReport {
    pub per_gate: Vec<GateCost>,
    pub total_w: f64,
    /// Σ log₁₀ Wg — stays finite even when the product overflows.
    pub log10_total: f64,
}

impl CostReport {
    /// Hoeffding sample count for simulating the whole circuit to
    /// additive error ε at confidence 1 - δ.
    pub fn samples_for(&self, epsilon: f64, delta: f64) -> Result<u64> {
        hoeffding_samples(self.total_w, epsilon, delta)
    }
}

/// Costs a circuit given as (θ, p) pairs, one per non-Gaussian gate.
/// Composition of channels is submultiplicative in W, so the product of
/// the per-gate values bounds the circuit's cost from above.
pub fn circuit_cost(gates: &[(f64, f64)], cache: &DecompositionCache) -> Result<CostReport> {
    let mut per_gate = Vec::with_capacity(gates.len());
    let mut total_w = 1.0;
    let mut log10_total = 0.0;
    for (gate, &(theta, p)) in gates.iter().enumerate() {
        let w = cache.get(theta, p)?.l1_norm;
        total_w *= w;
        log10_total += w.log10();
        per_gate.push(GateCost { gate, theta, p, w });
    }
    Ok(CostReport {
        per_gate,
        total_w,
        log10_total,
    })
}
