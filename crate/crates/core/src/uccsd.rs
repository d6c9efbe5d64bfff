//! Unitary coupled-cluster ansatz front end: amplitude ingestion, circuit
//! construction and circuit-level cost reports.
//!
//! Single excitations exponentiate to quadratic Majorana rotations and cost
//! nothing to simulate; each double excitation splits into eight commuting
//! four-body Majorana rotations, and those carry both the dephasing noise
//! and the sampling cost.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nonlinearity::{circuit_cost, CostReport, DecompositionCache};
use crate::sampler::{CircuitIR, Gate, Observable};

/// Product W above which the circuit no longer fits the reference compute
/// budget (one day at 10⁶ workers, 1 ms per sample).
pub const SIMULATABLE_BUDGET: f64 = 3e3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingleAmplitude {
    pub a: usize,
    pub i: usize,
    pub t: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DoubleAmplitude {
    pub a: usize,
    pub b: usize,
    pub i: usize,
    pub j: usize,
    pub t: f64,
}

/// Cluster amplitudes over 1-based spin orbitals. `occ` and `virt` must be
/// disjoint; excitations go from occupied (`i`, `j`) to virtual (`a`, `b`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeSet {
    pub n_spin_orbitals: usize,
    pub occ: Vec<usize>,
    pub virt: Vec<usize>,
    #[serde(default)]
    pub t1: Vec<SingleAmplitude>,
    #[serde(default)]
    pub t2: Vec<DoubleAmplitude>,
}

impl AmplitudeSet {
    pub fn validate(&self) -> Result<()> {
        let n = self.n_spin_orbitals;
        if n == 0 {
            return Err(Error::BadAmplitudes("zero spin orbitals".into()));
        }
        for (name, list) in [("occ", &self.occ), ("virt", &self.virt)] {
            for &o in list {
                if o == 0 || o > n {
                    return Err(Error::BadAmplitudes(format!(
                        "{name} orbital {o} outside 1..={n}"
                    )));
                }
            }
            let mut sorted = list.to_vec();
            sorted.sort_unstable();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::BadAmplitudes(format!("duplicate {name} orbital")));
            }
        }
        if let Some(&o) = self.occ.iter().find(|o| self.virt.contains(o)) {
            return Err(Error::BadAmplitudes(format!(
                "orbital {o} listed as both occupied and virtual"
            )));
        }
        for s in &self.t1 {
            if !self.virt.contains(&s.a) || !self.occ.contains(&s.i) {
                return Err(Error::BadAmplitudes(format!(
                    "t1 ({}, {}) must excite occupied → virtual",
                    s.a, s.i
                )));
            }
            if !s.t.is_finite() {
                return Err(Error::BadAmplitudes(format!("t1 amplitude {}", s.t)));
            }
        }
        for d in &self.t2 {
            if d.a == d.b || d.i == d.j {
                return Err(Error::BadAmplitudes(format!(
                    "t2 ({}, {}, {}, {}) has a repeated orbital",
                    d.a, d.b, d.i, d.j
                )));
            }
            if !self.virt.contains(&d.a)
                || !self.virt.contains(&d.b)
                || !self.occ.contains(&d.i)
                || !self.occ.contains(&d.j)
            {
                return Err(Error::BadAmplitudes(format!(
                    "t2 ({}, {}, {}, {}) must excite occupied pair → virtual pair",
                    d.a, d.b, d.i, d.j
                )));
            }
            if !d.t.is_finite() {
                return Err(Error::BadAmplitudes(format!("t2 amplitude {}", d.t)));
            }
        }
        Ok(())
    }
}

pub fn load_amplitudes<P: AsRef<Path>>(path: P) -> Result<AmplitudeSet> {
    let text = std::fs::read_to_string(path)?;
    let amps: AmplitudeSet = serde_json::from_str(&text)?;
    amps.validate()?;
    Ok(amps)
}

/// One factor of a double excitation: Majorana parity per leg (a, b, i, j)
/// — 0 selects index 2x-1, 1 selects 2x — and the sign σ of the exponent
/// in exp(σ i (t/8) c c c c).
const DOUBLE_TERMS: [([usize; 4], f64); 8] = [
    ([0, 0, 0, 1], -1.0),
    ([0, 0, 1, 0], -1.0),
    ([0, 1, 0, 0], -1.0),
    ([0, 1, 1, 1], 1.0),
    ([1, 0, 0, 0], -1.0),
    ([1, 0, 1, 1], 1.0),
    ([1, 1, 0, 1], 1.0),
    ([1, 1, 1, 0], 1.0),
];

/// Builds the Trotterized ansatz circuit from the Hartree–Fock reference.
///
/// Each step applies the double excitations, then the singles, matching
/// the operator product (singles leftmost, hence applied last). A double
/// with amplitude t becomes eight four-body rotations of angle ±t/8, each
/// dephased with probability `noise_p`; a single with amplitude t becomes
/// the two plane rotations exp((t/2) c_{2a-1} c_{2i-1}) exp((t/2) c_{2a} c_{2i}).
/// The observable is the Z-parity word over the occupied orbitals.
pub fn build_circuit(amps: &AmplitudeSet, trotter_n: usize, noise_p: f64) -> Result<CircuitIR> {
    amps.validate()?;
    if trotter_n == 0 {
        return Err(Error::BadAmplitudes("trotter_n must be positive".into()));
    }
    if !(0.0..=1.0).contains(&noise_p) {
        return Err(Error::BadProbability { value: noise_p });
    }
    let n = amps.n_spin_orbitals;
    let mut init = vec![0u8; n];
    for &o in &amps.occ {
        init[o - 1] = 1;
    }
    let step = 1.0 / trotter_n as f64;
    let mut gates = Vec::with_capacity(trotter_n * (8 * amps.t2.len() + 2 * amps.t1.len()));
    for _ in 0..trotter_n {
        for d in &amps.t2 {
            let legs = [d.a, d.b, d.i, d.j];
            for (parity, sigma) in DOUBLE_TERMS {
                let mut idx = [0usize; 4];
                for (slot, (&leg, par)) in legs.iter().zip(parity).enumerate() {
                    idx[slot] = 2 * leg - 1 + par;
                }
                gates.push(Gate::FourBodyRotation {
                    idx,
                    angle: -sigma * d.t * step / 8.0,
                    noise_p,
                });
            }
        }
        for s in &amps.t1 {
            let angle = s.t * step / 2.0;
            gates.push(Gate::GaussianRotation {
                idx: [2 * s.a - 1, 2 * s.i - 1],
                angle,
                noise_p: 0.0,
            });
            gates.push(Gate::GaussianRotation {
                idx: [2 * s.a, 2 * s.i],
                angle,
                noise_p: 0.0,
            });
        }
    }
    let letters: String = (1..=n)
        .map(|o| if amps.occ.contains(&o) { 'Z' } else { 'I' })
        .collect();
    let circuit = CircuitIR {
        n_modes: n,
        init,
        gates,
        observable: Observable::Pauli(letters),
    };
    circuit.validate()?;
    Ok(circuit)
}

/// Circuit-level cost plus the fixed-budget feasibility flag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BudgetedCostReport {
    #[serde(flatten)]
    pub cost: CostReport,
    pub budget: f64,
    pub simulatable: bool,
}

pub fn cost_report(circuit: &CircuitIR, cache: &DecompositionCache) -> Result<BudgetedCostReport> {
    let params: Vec<(f64, f64)> = circuit
        .gates
        .iter()
        .filter_map(|g| match g {
            Gate::FourBodyRotation { angle, noise_p, .. } => Some((*angle, *noise_p)),
            Gate::GaussianRotation { .. } => None,
        })
        .collect();
    let cost = circuit_cost(&params, cache)?;
    let simulatable = cost.total_w <= SIMULATABLE_BUDGET;
    Ok(BudgetedCostReport {
        cost,
        budget: SIMULATABLE_BUDGET,
        simulatable,
    })
}

/// Four-body gate count as a function of system size for the supported
/// ansatz families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum N4Formula {
    /// Chain of m hydrogens in a minimal basis: 2m spin orbitals, m
    /// occupied. All (a<b, i<j) doubles, eight rotations each:
    /// N₄(m) = 8 · C(m,2)².
    #[serde(rename = "hydrogen-chain")]
    HydrogenChain,
}

impl N4Formula {
    pub fn n4(&self, m: u64) -> u64 {
        match self {
            N4Formula::HydrogenChain => {
                let pairs = m * m.saturating_sub(1) / 2;
                8 * pairs * pairs
            }
        }
    }
}

/// Geometric-mean cost extrapolation from a reference circuit to larger
/// systems of the same family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtrapolationReport {
    /// Geometric mean of the per-gate costs at the reference size; ≥ 1.
    pub geo_mean_w: f64,
    #[serde(rename = "n4_of_m")]
    pub formula: N4Formula,
}

impl ExtrapolationReport {
    /// Predicted total cost for system size m: geo_mean_w^N₄(m).
    pub fn predicted_w(&self, m: u64) -> f64 {
        // computed through logs so large gate counts cannot overflow the
        // intermediate product
        (self.formula.n4(m) as f64 * self.geo_mean_w.ln()).exp()
    }

    /// Largest m whose prediction fits the budget; `None` when every m
    /// does (geometric mean exactly 1), `Some(0)` when none does.
    pub fn largest_within(&self, budget: f64) -> Option<u64> {
        if budget < 1.0 {
            return Some(0);
        }
        if self.geo_mean_w <= 1.0 {
            return None;
        }
        let mut m = 1;
        while self.predicted_w(m + 1) <= budget {
            m += 1;
        }
        Some(m)
    }
}

/// Geometric mean of per-gate costs, paired with a gate-count formula for
/// prediction at other sizes.
pub fn extrapolate(per_gate_ws: &[f64], formula: N4Formula) -> Result<ExtrapolationReport> {
    if per_gate_ws.is_empty() {
        return Err(Error::BadAmplitudes("no gate costs to extrapolate".into()));
    }
    let mut log_sum = 0.0;
    for &w in per_gate_ws {
        if !(w.is_finite() && w >= 1.0 - 1e-9) {
            return Err(Error::BadAmplitudes(format!("gate cost {w} below one")));
        }
        log_sum += w.max(1.0).ln();
    }
    let geo_mean_w = (log_sum / per_gate_ws.len() as f64).exp();
    Ok(ExtrapolationReport {
        geo_mean_w,
        formula,
    })
}
