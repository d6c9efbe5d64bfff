//! Cross-engine consistency suite.
//!
//! Replays random circuits on the covariance engine and the dense oracle
//! side by side, comparing measurement probabilities and every Pauli
//! expectation, and re-derives the channel library's transfer matrices
//! from dense simulation. The CLI exposes this as `validate`; it is the
//! runtime counterpart of the unit tests, usable on any build.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::channels::{dense_steps, ptm_dephasing, ptm_noisy_rot_zz, ptm_rot_zz, BasisChannelSet};
use crate::error::Result;
use crate::gaussian::GaussianState;
use crate::nonlinearity::{solve_l1, DEFAULT_RESIDUAL_TOL};
use crate::oracle::{self, DenseState, DenseStep};
use crate::pauli::{PauliString, Phase};

/// Outcome of one named consistency check.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl Check {
    fn measured(name: &'static str, max_deviation: f64, tolerance: f64, detail: String) -> Self {
        Check {
            name,
            passed: max_deviation <= tolerance,
            max_deviation,
            tolerance,
            detail,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Number of random circuits the suite replays by default.
pub const DEFAULT_CIRCUITS: usize = 200;

pub fn run_suite(n_circuits: usize, seed: u64) -> Result<ValidationReport> {
    let mut checks = vec![basis_ptms_match_dense()?, transfer_matrix_identities(seed)?];
    checks.push(random_circuits_agree(n_circuits, seed)?);
    checks.push(reference_decomposition_residual()?);
    checks.push(lp_certificates(seed)?);
    Ok(ValidationReport { checks })
}

/// Every basis channel's stored PTM against dense extraction of its
/// executable recipe.
fn basis_ptms_match_dense() -> Result<Check> {
    let basis = BasisChannelSet::standard();
    let mut worst = 0.0f64;
    for ch in basis.channels() {
        let steps = dense_steps(2, &ch.exec.steps)?;
        let extracted = oracle::extract_ptm(&steps)?;
        worst = worst.max((extracted - ch.ptm.matrix()).amax());
    }
    Ok(Check::measured(
        "basis-ptm-dense-extraction",
        worst,
        1e-10,
        format!("{} channels", basis.len()),
    ))
}

/// Closed-form transfer matrices against dense extraction, and the
/// composition rule against matrix products.
fn transfer_matrix_identities(seed: u64) -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7074_6d73);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let theta: f64 = rng.random_range(-1.6..1.6);
        let dense = oracle::extract_ptm(&[oracle::four_body_step(2, [1, 2, 3, 4], theta)?])?;
        worst = worst.max((dense - ptm_rot_zz(theta).matrix()).amax());

        let p: f64 = rng.random_range(0.0..0.75);
        let dense = oracle::extract_ptm(&[oracle::dephasing_mixture(2, [1, 2, 3, 4], p)?])?;
        worst = worst.max((dense - ptm_dephasing(p)?.matrix()).amax());

        let noisy = ptm_noisy_rot_zz(theta, p)?;
        let product = ptm_dephasing(p)?.matrix() * ptm_rot_zz(theta).matrix();
        worst = worst.max((noisy.matrix() - product).amax());

        let chained = oracle::extract_ptm(&[
            oracle::four_body_step(2, [1, 2, 3, 4], theta)?,
            oracle::dephasing_mixture(2, [1, 2, 3, 4], p)?,
        ])?;
        worst = worst.max((chained - noisy.matrix()).amax());
    }
    Ok(Check::measured(
        "transfer-matrix-identities",
        worst,
        1e-12,
        "rotation, dephasing, composition × 20 angles".into(),
    ))
}

enum Op {
    Rotate { i: usize, j: usize, angle: f64 },
    ZFlip { qubit: usize },
    Measure { qubit: usize },
}

/// Random Gaussian circuits (rotations, Z flips, measurements with agreed
/// outcomes) replayed on both engines; compares branch probabilities and
/// the full Pauli expectation table.
fn random_circuits_agree(n_circuits: usize, seed: u64) -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let mut measurements = 0usize;
    for _ in 0..n_circuits {
        let n = rng.random_range(2..=5usize);
        let bits: Vec<u8> = (0..n).map(|_| u8::from(rng.random::<bool>())).collect();
        let mut g = GaussianState::from_occupation(&bits)?;
        let mut d = DenseState::from_bits(&bits)?;

        let depth = rng.random_range(1..=20usize);
        for _ in 0..depth {
            match draw_op(&mut rng, n) {
                Op::Rotate { i, j, angle } => {
                    g.rotate_plane(i, j, angle)?;
                    d.apply(&oracle::rotation_step(n, i, j, angle)?);
                }
                Op::ZFlip { qubit } => {
                    g.flip_pauli_z(qubit)?;
                    let z = PauliString::single(n, qubit, 'Z')?;
                    d.apply(&DenseStep::PauliMixture(vec![(1.0, z)]));
                }
                Op::Measure { qubit } => {
                    // collapse both engines onto the likelier branch
                    let outcome: i8 = if g.expect_z(qubit)? >= 0.0 { 1 } else { -1 };
                    let p_dense = d.measure_prob(qubit, outcome)?;
                    let (_, p_cov) = g.measure_pair(qubit, Some(outcome), &mut rng)?;
                    worst = worst.max((p_dense - p_cov).abs());
                    d.collapse(qubit, outcome)?;
                    measurements += 1;
                }
            }
        }
        worst = worst.max(expectation_table_deviation(&g, &d, n)?);
    }
    Ok(Check::measured(
        "covariance-vs-dense-circuits",
        worst,
        1e-8,
        format!("{n_circuits} circuits, {measurements} measurements"),
    ))
}

fn draw_op<R: Rng>(rng: &mut R, n: usize) -> Op {
    let dim = 2 * n;
    match rng.random_range(0..10u8) {
        0..=5 => {
            let i = rng.random_range(1..=dim);
            let mut j = rng.random_range(1..=dim - 1);
            if j >= i {
                j += 1;
            }
            Op::Rotate {
                i,
                j,
                angle: rng.random_range(-3.2..3.2),
            }
        }
        6..=7 => Op::ZFlip {
            qubit: rng.random_range(1..=n),
        },
        _ => Op::Measure {
            qubit: rng.random_range(1..=n),
        },
    }
}

/// Max |⟨P⟩_covariance − ⟨P⟩_dense| over every Pauli word on n qubits.
fn expectation_table_deviation(g: &GaussianState, d: &DenseState, n: usize) -> Result<f64> {
    let mut worst = 0.0f64;
    for code in 0..4usize.pow(n as u32) {
        let letters: String = (0..n)
            .map(|q| match (code >> (2 * q)) & 3 {
                0 => 'I',
                1 => 'X',
                2 => 'Y',
                _ => 'Z',
            })
            .collect();
        let word = PauliString::from_letters(&letters, Phase::PlusOne)?;
        let dense = d.expect(&word)?;
        let cov = g.pauli_expectation(&word)?;
        worst = worst.max((dense.re - cov).abs()).max(dense.im.abs());
    }
    Ok(worst)
}

/// The explicit mixture-plus-measurement expansion of the four-body
/// rotation, rebuilt from labelled basis channels and checked entrywise.
fn reference_decomposition_residual() -> Result<Check> {
    let basis = BasisChannelSet::standard();
    let mut worst = 0.0f64;
    for k in 1..=31 {
        let theta = 0.05 * k as f64;
        let (c, s) = (theta.cos(), theta.sin());
        let weights = [
            ("I⊗I", c * c),
            ("Z⊗Z", s * s),
            ("K1+", c * s),
            ("K1-", -c * s),
            ("K2+", c * s),
            ("K2-", -c * s),
        ];
        let mut sum: DMatrix<f64> = DMatrix::zeros(16, 16);
        for (label, w) in weights {
            let ch = basis
                .by_label(label)
                .unwrap_or_else(|| panic!("basis lacks {label}"));
            sum += w * ch.ptm.matrix();
        }
        worst = worst.max((sum - ptm_rot_zz(theta).matrix()).amax());
    }
    Ok(Check::measured(
        "reference-decomposition-residual",
        worst,
        1e-8,
        "31 angles".into(),
    ))
}

/// Optimality certificates: reconstruction residual, unit weight sum and
/// the W ≥ 1 floor for decompositions across the (θ, p) plane.
fn lp_certificates(seed: u64) -> Result<Check> {
    let basis = BasisChannelSet::standard();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6c70);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let theta: f64 = rng.random_range(-1.5..1.5);
        let p: f64 = rng.random_range(0.0..0.15);
        let d = solve_l1(&ptm_noisy_rot_zz(theta, p)?, &basis, DEFAULT_RESIDUAL_TOL)?;
        worst = worst.max(d.residual);
        let sum: f64 = d.weights.iter().sum();
        worst = worst.max((sum - 1.0).abs());
        worst = worst.max(1.0 - d.l1_norm); // negative when W ≥ 1
    }
    Ok(Check::measured(
        "lp-certificates",
        worst,
        1e-7,
        "10 random targets".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes_on_this_build() {
        let report = run_suite(40, 11).unwrap();
        for check in &report.checks {
            assert!(
                check.passed,
                "{} deviated {:.3e} (tolerance {:.1e}): {}",
                check.name, check.max_deviation, check.tolerance, check.detail
            );
        }
        assert!(report.passed());
        assert_eq!(report.checks.len(), 5);
    }

    #[test]
    fn report_serialises_for_the_cli() {
        let report = run_suite(2, 3).unwrap();
        let text = serde_json::to_string(&report).unwrap();
        assert!(text.contains("basis-ptm-dense-extraction"));
        assert!(text.contains("max_deviation"));
    }
}
