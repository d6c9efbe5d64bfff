//! Monte-Carlo quasiprobability simulation of noisy fermionic circuits.
//!
//! Gaussian rotations propagate the covariance matrix directly. Each
//! four-body rotation is conjugated into the canonical four-Majorana frame,
//! where its (noisy) channel has a quasiprobability expansion over the
//! Gaussian basis: one basis channel is drawn per gate and executed, and
//! the product of weight signs times the total L1 norm turns the averaged
//! observable into an unbiased estimate.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

use crate::channels::apply_channel_steps;
use crate::error::{Error, Result};
use crate::gaussian::{GaussianState, OrthogonalRotation};
use crate::nonlinearity::{hoeffding_samples, DecompositionCache, QuasiDecomposition};
use crate::oracle::{self, DenseState};
use crate::pauli::{MajoranaMonomial, PauliString, Phase};

/// Samples per work unit; partial sums are combined in chunk order, so the
/// result is independent of how chunks are scheduled across workers.
const CHUNK: u64 = 8192;

/// One gate of a circuit. Angles are generator angles: a two-body gate is
/// the unitary exp(g c_i c_j) (the covariance-matrix rotation angle is 2g)
/// and a four-body gate is exp(-iθ c_i c_j c_k c_l).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum Gate {
    #[serde(rename = "g2")]
    GaussianRotation {
        idx: [usize; 2],
        angle: f64,
        /// Accepted for schema uniformity but must be zero: quadratic
        /// rotations are simulated exactly, without a noise model.
        #[serde(default)]
        noise_p: f64,
    },
    #[serde(rename = "g4")]
    FourBodyRotation {
        idx: [usize; 4],
        angle: f64,
        /// Two-mode dephasing strength attached to the gate.
        #[serde(default)]
        noise_p: f64,
    },
}

/// Measured quantity at the end of a circuit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Observable {
    /// A Pauli letter word over all modes, e.g. "ZZI".
    #[serde(rename = "pauli")]
    Pauli(String),
    /// A product of distinct Majorana operators, made Hermitian by the
    /// phase -i when the reversal parity of the product is odd.
    #[serde(rename = "majorana")]
    Majorana { indices: Vec<usize> },
}

/// Resolved, validated form of an [`Observable`].
#[derive(Debug, Clone)]
pub enum ObservableOp {
    Pauli(PauliString),
    Monomial(MajoranaMonomial),
}

impl Observable {
    pub fn resolve(&self, n_modes: usize) -> Result<ObservableOp> {
        match self {
            Observable::Pauli(word) => {
                let p = PauliString::from_letters(word, Phase::PlusOne)?;
                if p.n_qubits() != n_modes {
                    return Err(Error::BadPauliWord(format!(
                        "observable has {} letters, circuit has {} modes",
                        p.n_qubits(),
                        n_modes
                    )));
                }
                Ok(ObservableOp::Pauli(p))
            }
            Observable::Majorana { indices } => {
                let mut seen = indices.clone();
                seen.sort_unstable();
                if seen.windows(2).any(|w| w[0] == w[1]) {
                    return Err(Error::RepeatedIndex { index: seen[0] });
                }
                let d = indices.len();
                let coeff = if (d * (d - 1) / 2) % 2 == 1 {
                    Phase::MinusI
                } else {
                    Phase::PlusOne
                };
                MajoranaMonomial::new(n_modes, indices, coeff).map(ObservableOp::Monomial)
            }
        }
    }
}

impl ObservableOp {
    pub fn evaluate(&self, state: &GaussianState) -> Result<f64> {
        match self {
            ObservableOp::Pauli(p) => state.pauli_expectation(p),
            ObservableOp::Monomial(m) => Ok(state.expect_monomial(m)?.re),
        }
    }
}

/// A circuit over `n_modes` fermionic modes with a product initial state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircuitIR {
    pub n_modes: usize,
    pub init: Vec<u8>,
    pub gates: Vec<Gate>,
    pub observable: Observable,
}

impl CircuitIR {
    pub fn validate(&self) -> Result<()> {
        if self.n_modes == 0 {
            return Err(Error::BadCircuit("circuit has zero modes".into()));
        }
        if self.init.len() != self.n_modes {
            return Err(Error::BadCircuit(format!(
                "init lists {} occupations for {} modes",
                self.init.len(),
                self.n_modes
            )));
        }
        if let Some(&bad) = self.init.iter().find(|&&b| b > 1) {
            return Err(Error::BadOccupation { value: bad });
        }
        let limit = 2 * self.n_modes;
        for (pos, gate) in self.gates.iter().enumerate() {
            let (idx, angle, noise_p): (&[usize], f64, f64) = match gate {
                Gate::GaussianRotation {
                    idx,
                    angle,
                    noise_p,
                } => {
                    if *noise_p != 0.0 {
                        return Err(Error::BadCircuit(format!(
                            "gate {pos}: quadratic rotations have no noise model (noise_p = {noise_p})"
                        )));
                    }
                    (idx, *angle, *noise_p)
                }
                Gate::FourBodyRotation {
                    idx,
                    angle,
                    noise_p,
                } => (idx, *angle, *noise_p),
            };
            if !angle.is_finite() {
                return Err(Error::BadCircuit(format!("gate {pos}: angle {angle}")));
            }
            if !(0.0..=1.0).contains(&noise_p) {
                return Err(Error::BadProbability { value: noise_p });
            }
            for &i in idx {
                if i == 0 || i > limit {
                    return Err(Error::IndexOutOfRange {
                        index: i,
                        limit,
                    });
                }
            }
            for (a, &i) in idx.iter().enumerate() {
                if idx[a + 1..].contains(&i) {
                    return Err(Error::RepeatedIndex { index: i });
                }
            }
        }
        self.observable.resolve(self.n_modes).map(|_| ())
    }
}

/// Sampling effort: an explicit count, or a Hoeffding-derived count for
/// additive error ε at confidence 1 - δ.
#[derive(Debug, Clone, Copy)]
pub enum SampleBudget {
    Fixed(u64),
    Accuracy { epsilon: f64, delta: f64 },
}

/// Outcome of a sampling run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateResult {
    pub mean: f64,
    pub std_error: f64,
    pub n_samples: u64,
    /// Product of the per-gate L1 norms; every weighted sample lies in
    /// [-l1_total, l1_total].
    pub l1_total: f64,
    pub seed: u64,
}

/// The orthogonal frame change taking Majorana directions (i, j, k, l) to
/// (1, 2, 3, 4), completed by keeping the remaining directions in order.
pub fn frame_rotation(
    i: usize,
    j: usize,
    k: usize,
    l: usize,
    n_modes: usize,
) -> Result<OrthogonalRotation> {
    OrthogonalRotation::bring_to_front(n_modes, &[i, j, k, l])
}

enum PlanStep {
    Rotate {
        i: usize,
        j: usize,
        matrix_angle: f64,
    },
    FourBody {
        frame: OrthogonalRotation,
        frame_back: OrthogonalRotation,
        decomposition: Arc<QuasiDecomposition>,
        /// Cumulative sampling probabilities over basis channels.
        cumulative: Vec<f64>,
    },
}

/// Everything fixed across samples: resolved steps, decompositions and the
/// total L1 norm.
struct SamplePlan<'a> {
    cache: &'a DecompositionCache,
    init: Vec<u8>,
    steps: Vec<PlanStep>,
    observable: ObservableOp,
    l1_total: f64,
}

impl<'a> SamplePlan<'a> {
    fn prepare(circuit: &CircuitIR, cache: &'a DecompositionCache) -> Result<Self> {
        circuit.validate()?;
        let mut steps = Vec::with_capacity(circuit.gates.len());
        let mut l1_total = 1.0;
        for gate in &circuit.gates {
            match gate {
                Gate::GaussianRotation { idx, angle, .. } => steps.push(PlanStep::Rotate {
                    i: idx[0],
                    j: idx[1],
                    matrix_angle: 2.0 * angle,
                }),
                Gate::FourBodyRotation {
                    idx,
                    angle,
                    noise_p,
                } => {
                    let decomposition = cache.get(*angle, *noise_p)?;
                    l1_total *= decomposition.l1_norm;
                    let mut acc = 0.0;
                    let cumulative = decomposition
                        .probabilities()
                        .iter()
                        .map(|p| {
                            acc += p;
                            acc
                        })
                        .collect();
                    let frame = frame_rotation(idx[0], idx[1], idx[2], idx[3], circuit.n_modes)?;
                    let frame_back = frame.inverse();
                    steps.push(PlanStep::FourBody {
                        frame,
                        frame_back,
                        decomposition,
                        cumulative,
                    });
                }
            }
        }
        Ok(SamplePlan {
            cache,
            init: circuit.init.clone(),
            steps,
            observable: circuit.observable.resolve(circuit.n_modes)?,
            l1_total,
        })
    }

    /// One trajectory. Each sample owns an independent counter-derived RNG
    /// stream, so the value depends only on (seed, sample index).
    fn sample(&self, seed: u64, index: u64) -> Result<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        let mut state = GaussianState::from_occupation(&self.init)?;
        let mut sign = 1.0f64;
        for step in &self.steps {
            match step {
                PlanStep::Rotate {
                    i,
                    j,
                    matrix_angle,
                } => state.rotate_plane(*i, *j, *matrix_angle)?,
                PlanStep::FourBody {
                    frame,
                    frame_back,
                    decomposition,
                    cumulative,
                } => {
                    state.apply_rotation(frame)?;
                    let u: f64 = rng.random();
                    let pick = cumulative
                        .partition_point(|&c| c <= u)
                        .min(cumulative.len() - 1);
                    sign *= decomposition.sign(pick);
                    let channel = &self.cache.basis().channels()[pick];
                    apply_channel_steps(&mut state, &channel.exec.steps, &mut rng)?;
                    state.apply_rotation(frame_back)?;
                }
            }
        }
        let value = sign * self.l1_total * self.observable.evaluate(&state)?;
        debug_assert!(value.abs() <= self.l1_total + 1e-9);
        Ok(value)
    }
}

/// Product of the per-gate L1 norms of `circuit`.
pub fn circuit_l1_total(circuit: &CircuitIR, cache: &DecompositionCache) -> Result<f64> {
    circuit.validate()?;
    let mut total = 1.0;
    for gate in &circuit.gates {
        if let Gate::FourBodyRotation { angle, noise_p, .. } = gate {
            total *= cache.get(*angle, *noise_p)?.l1_norm;
        }
    }
    Ok(total)
}

/// Hoeffding sample count for the circuit's total L1 norm.
pub fn required_samples(
    circuit: &CircuitIR,
    cache: &DecompositionCache,
    epsilon: f64,
    delta: f64,
) -> Result<u64> {
    hoeffding_samples(circuit_l1_total(circuit, cache)?, epsilon, delta)
}

/// Runs the quasiprobability estimator. The result is bit-for-bit
/// reproducible for a given (circuit, seed), independent of the worker
/// count: samples are indexed globally and partial sums combine in chunk
/// order.
pub fn run(
    circuit: &CircuitIR,
    cache: &DecompositionCache,
    budget: SampleBudget,
    seed: u64,
) -> Result<EstimateResult> {
    let plan = SamplePlan::prepare(circuit, cache)?;
    let n_samples = match budget {
        SampleBudget::Fixed(n) => {
            if n == 0 {
                return Err(Error::BadCircuit("zero samples requested".into()));
            }
            n
        }
        SampleBudget::Accuracy { epsilon, delta } => {
            hoeffding_samples(plan.l1_total, epsilon, delta)?
        }
    };

    let n_chunks = n_samples.div_ceil(CHUNK);
    let partials: Vec<(f64, f64, f64, f64)> = (0..n_chunks)
        .into_par_iter()
        .map(|chunk| {
            let start = chunk * CHUNK;
            let end = (start + CHUNK).min(n_samples);
            let mut sum = 0.0;
            let mut sum_sq = 0.0;
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for index in start..end {
                let v = plan.sample(seed, index)?;
                sum += v;
                sum_sq += v * v;
                lo = lo.min(v);
                hi = hi.max(v);
            }
            Ok((sum, sum_sq, lo, hi))
        })
        .collect::<Result<_>>()?;

    let (sum, sum_sq, lo, hi) = partials.iter().fold(
        (0.0, 0.0, f64::INFINITY, f64::NEG_INFINITY),
        |(a, b, l, h), &(s, q, cl, ch)| (a + s, b + q, l.min(cl), h.max(ch)),
    );
    // A degenerate sample distribution (e.g. a circuit with no four-body
    // gates) has the common value as its mean, exactly; the running sums
    // would report spurious rounding-level variance.
    let (mean, std_error) = if lo == hi {
        (lo, 0.0)
    } else {
        let n = n_samples as f64;
        let mean = sum / n;
        let var = ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
        (mean, (var / n).sqrt())
    };
    Ok(EstimateResult {
        mean,
        std_error,
        n_samples,
        l1_total: plan.l1_total,
        seed,
    })
}

/// Exact expectation of the circuit's observable by dense density-matrix
/// evolution; exponential in the mode count and intended for cross-checks
/// on small systems.
pub fn dense_reference(circuit: &CircuitIR) -> Result<f64> {
    circuit.validate()?;
    let mut state = DenseState::from_bits(&circuit.init)?;
    let n = circuit.n_modes;
    for gate in &circuit.gates {
        match gate {
            Gate::GaussianRotation { idx, angle, .. } => {
                state.apply(&oracle::rotation_step(n, idx[0], idx[1], 2.0 * angle)?);
            }
            Gate::FourBodyRotation {
                idx,
                angle,
                noise_p,
            } => {
                state.apply(&oracle::four_body_step(n, *idx, *angle)?);
                if *noise_p > 0.0 {
                    state.apply(&oracle::dephasing_mixture(n, *idx, *noise_p)?);
                }
            }
        }
    }
    let word = match circuit.observable.resolve(n)? {
        ObservableOp::Pauli(p) => p,
        ObservableOp::Monomial(m) => crate::pauli::jw_monomial(&m)?,
    };
    Ok(state.expect(&word)?.re)
}
