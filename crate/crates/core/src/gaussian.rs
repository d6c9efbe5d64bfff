//! Covariance-matrix simulation of fermionic linear optics.
//!
//! A Gaussian state of n modes is stored as the real antisymmetric 2n × 2n
//! matrix M with M_{μν} = -i⟨c_μ c_ν⟩ for μ ≠ ν. Gaussian unitaries act as
//! orthogonal congruences M ↦ R M Rᵀ, occupation measurements update M in
//! O(n²), and expectation values of Majorana monomials are Pfaffians of
//! submatrices. Majorana indices are 1-based throughout the public API.

use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{majorana_from_pauli, MajoranaMonomial, PauliString};
use crate::pfaffian::pfaffian_in_place;
use num_complex::Complex64;

const ORTHOGONALITY_TOL: f64 = 1e-10;

/// An orthogonal frame change of the 2n Majorana operators,
/// c_a ↦ Σ_μ R_{aμ} c_μ.
#[derive(Debug, Clone)]
pub struct OrthogonalRotation {
    n_modes: usize,
    kind: RotationKind,
}

#[derive(Debug, Clone)]
enum RotationKind {
    /// Row a of R is the unit vector e_{perm[a]} (0-based).
    Permutation(Vec<usize>),
    Dense(DMatrix<f64>),
}

impl OrthogonalRotation {
    /// Signed-free relabelling: new mode operator a reads old operator
    /// `rows[a]` (1-based).
    pub fn permutation(n_modes: usize, rows: &[usize]) -> Result<Self> {
        let dim = 2 * n_modes;
        if rows.len() != dim {
            return Err(Error::SizeMismatch {
                left: rows.len(),
                right: dim,
            });
        }
        let mut seen = vec![false; dim];
        let mut perm = Vec::with_capacity(dim);
        for &r in rows {
            if r == 0 || r > dim {
                return Err(Error::IndexOutOfRange { index: r, limit: dim });
            }
            if seen[r - 1] {
                return Err(Error::RepeatedIndex { index: r });
            }
            seen[r - 1] = true;
            perm.push(r - 1);
        }
        Ok(OrthogonalRotation {
            n_modes,
            kind: RotationKind::Permutation(perm),
        })
    }

    /// The permutation that relabels the listed Majorana indices (1-based)
    /// as c_1, c_2, … in order, with the remaining indices following in
    /// ascending order.
    pub fn bring_to_front(n_modes: usize, leading: &[usize]) -> Result<Self> {
        let dim = 2 * n_modes;
        let mut rows = Vec::with_capacity(dim);
        rows.extend_from_slice(leading);
        for r in 1..=dim {
            if !leading.contains(&r) {
                rows.push(r);
            }
        }
        Self::permutation(n_modes, &rows)
    }

    pub fn dense(n_modes: usize, r: DMatrix<f64>) -> Result<Self> {
        let dim = 2 * n_modes;
        if r.nrows() != dim || r.ncols() != dim {
            return Err(Error::SizeMismatch {
                left: r.nrows(),
                right: dim,
            });
        }
        let gram = r.transpose() * &r;
        let mut deviation = 0.0f64;
        for i in 0..dim {
            for j in 0..dim {
                let want = if i == j { 1.0 } else { 0.0 };
                deviation = deviation.max((gram[(i, j)] - want).abs());
            }
        }
        if deviation > ORTHOGONALITY_TOL {
            return Err(Error::NotOrthogonal { deviation });
        }
        Ok(OrthogonalRotation {
            n_modes,
            kind: RotationKind::Dense(r),
        })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn is_permutation(&self) -> bool {
        matches!(self.kind, RotationKind::Permutation(_))
    }

    /// R⁻¹ = Rᵀ.
    pub fn inverse(&self) -> Self {
        let kind = match &self.kind {
            RotationKind::Permutation(perm) => {
                let mut inv = vec![0usize; perm.len()];
                for (a, &mu) in perm.iter().enumerate() {
                    inv[mu] = a;
                }
                RotationKind::Permutation(inv)
            }
            RotationKind::Dense(r) => RotationKind::Dense(r.transpose()),
        };
        OrthogonalRotation {
            n_modes: self.n_modes,
            kind,
        }
    }
}

/// Fermionic Gaussian state of `n_modes` modes.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GaussianState {
    n_modes: usize,
    dim: usize,
    /// Row-major 2n × 2n antisymmetric covariance matrix.
    m: Vec<f64>,
}

impl GaussianState {
    /// Product state with the given mode occupations (0 or 1).
    pub fn from_occupation(occ: &[u8]) -> Result<Self> {
        if occ.is_empty() {
            return Err(Error::EmptyOccupation);
        }
        let n_modes = occ.len();
        let dim = 2 * n_modes;
        let mut m = vec![0.0f64; dim * dim];
        for (k, &o) in occ.iter().enumerate() {
            let s = match o {
                0 => 1.0,
                1 => -1.0,
                other => return Err(Error::BadOccupation { value: other }),
            };
            m[2 * k * dim + 2 * k + 1] = s;
            m[(2 * k + 1) * dim + 2 * k] = -s;
        }
        Ok(GaussianState { n_modes, dim, m })
    }

    pub fn vacuum(n_modes: usize) -> Result<Self> {
        Self::from_occupation(&vec![0u8; n_modes])
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    /// Covariance entry M_{μν} = -i⟨c_μ c_ν⟩, 1-based.
    pub fn entry(&self, mu: usize, nu: usize) -> f64 {
        self.m[(mu - 1) * self.dim + (nu - 1)]
    }

    /// ⟨Z_k⟩ = M_{2k-1, 2k}.
    pub fn expect_z(&self, qubit: usize) -> Result<f64> {
        self.check_qubit(qubit)?;
        Ok(self.entry(2 * qubit - 1, 2 * qubit))
    }

    pub fn to_dmatrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.dim, self.dim, |r, c| self.m[r * self.dim + c])
    }

    fn check_index(&self, mu: usize) -> Result<()> {
        if mu == 0 || mu > self.dim {
            return Err(Error::IndexOutOfRange {
                index: mu,
                limit: self.dim,
            });
        }
        Ok(())
    }

    fn check_qubit(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.n_modes {
            return Err(Error::IndexOutOfRange {
                index: k,
                limit: self.n_modes,
            });
        }
        Ok(())
    }

    /// Congruence by the plane rotation that mixes Majorana directions i
    /// and j (1-based): rows (i, j) of R are
    /// (cos φ, sin φ) and (-sin φ, cos φ). Runs in O(n).
    pub fn rotate_plane(&mut self, i: usize, j: usize, angle: f64) -> Result<()> {
        self.check_index(i)?;
        self.check_index(j)?;
        if i == j {
            return Err(Error::DegeneratePair { index: i });
        }
        let (s, c) = angle.sin_cos();
        let (i, j) = (i - 1, j - 1);
        for col in 0..self.dim {
            let a = self.m[i * self.dim + col];
            let b = self.m[j * self.dim + col];
            self.m[i * self.dim + col] = c * a + s * b;
            self.m[j * self.dim + col] = c * b - s * a;
        }
        for row in 0..self.dim {
            let a = self.m[row * self.dim + i];
            let b = self.m[row * self.dim + j];
            self.m[row * self.dim + i] = c * a + s * b;
            self.m[row * self.dim + j] = c * b - s * a;
        }
        // the (i, j) block is exactly skew again up to round-off; pin it
        self.m[i * self.dim + i] = 0.0;
        self.m[j * self.dim + j] = 0.0;
        self.m[j * self.dim + i] = -self.m[i * self.dim + j];
        Ok(())
    }

    /// M ↦ R M Rᵀ.
    pub fn apply_rotation(&mut self, rot: &OrthogonalRotation) -> Result<()> {
        if rot.n_modes != self.n_modes {
            return Err(Error::SizeMismatch {
                left: rot.n_modes,
                right: self.n_modes,
            });
        }
        match &rot.kind {
            RotationKind::Permutation(perm) => {
                let old = self.m.clone();
                for a in 0..self.dim {
                    for b in 0..self.dim {
                        self.m[a * self.dim + b] = old[perm[a] * self.dim + perm[b]];
                    }
                }
            }
            RotationKind::Dense(r) => {
                let rotated = r * self.to_dmatrix() * r.transpose();
                for a in 0..self.dim {
                    self.m[a * self.dim + a] = 0.0;
                    for b in a + 1..self.dim {
                        let v = 0.5 * (rotated[(a, b)] - rotated[(b, a)]);
                        self.m[a * self.dim + b] = v;
                        self.m[b * self.dim + a] = -v;
                    }
                }
            }
        }
        Ok(())
    }

    /// ρ ↦ Z_k ρ Z_k: flips the sign of c_{2k-1} and c_{2k}.
    pub fn flip_pauli_z(&mut self, qubit: usize) -> Result<()> {
        self.check_qubit(qubit)?;
        self.negate_majoranas(&[2 * qubit - 1, 2 * qubit])
    }

    /// Conjugation by a product of the listed Majorana operators (1-based):
    /// c_μ ↦ -c_μ for listed μ, everything else untouched. Covariance
    /// entries with exactly one endpoint in the set change sign.
    pub fn negate_majoranas(&mut self, indices: &[usize]) -> Result<()> {
        let mut flip = vec![false; self.dim];
        for &mu in indices {
            self.check_index(mu)?;
            flip[mu - 1] = !flip[mu - 1];
        }
        for a in 0..self.dim {
            for b in 0..self.dim {
                if flip[a] != flip[b] {
                    self.m[a * self.dim + b] = -self.m[a * self.dim + b];
                }
            }
        }
        Ok(())
    }

    /// Measure the occupation of `qubit` (Z basis). Samples the outcome
    /// from `rng` unless it is forced or already deterministic; returns
    /// (outcome, probability of that outcome) and collapses the state.
    pub fn measure_pair<R: Rng + ?Sized>(
        &mut self,
        qubit: usize,
        forced: Option<i8>,
        rng: &mut R,
    ) -> Result<(i8, f64)> {
        self.check_qubit(qubit)?;
        let a = 2 * qubit - 2;
        let b = 2 * qubit - 1;
        let raw = self.m[a * self.dim + b];
        if raw.abs() > 1.0 + 1e-9 {
            return Err(Error::CovarianceOutOfRange { value: raw });
        }
        let mean = raw.clamp(-1.0, 1.0);

        let outcome: i8 = match forced {
            Some(s) if s != 0 => s.signum(),
            Some(_) => return Err(Error::BadProbability { value: 0.0 }),
            None => {
                if mean.abs() >= 1.0 - 1e-12 {
                    // deterministic: do not consume randomness
                    if mean > 0.0 {
                        1
                    } else {
                        -1
                    }
                } else if rng.random::<f64>() < (1.0 + mean) / 2.0 {
                    1
                } else {
                    -1
                }
            }
        };
        let s = f64::from(outcome);
        let prob = (1.0 + s * mean) / 2.0;
        if prob < 1e-12 {
            return Err(Error::ImpossibleOutcome { probability: prob });
        }

        // M'_{μν} = M_{μν} - s (M_{μa} M_{νb} - M_{μb} M_{νa}) / (1 + s m)
        let factor = s / (1.0 + s * mean);
        let col_a: Vec<f64> = (0..self.dim).map(|r| self.m[r * self.dim + a]).collect();
        let col_b: Vec<f64> = (0..self.dim).map(|r| self.m[r * self.dim + b]).collect();
        for mu in 0..self.dim {
            if mu == a || mu == b {
                continue;
            }
            for nu in 0..self.dim {
                if nu == a || nu == b {
                    continue;
                }
                self.m[mu * self.dim + nu] -=
                    factor * (col_a[mu] * col_b[nu] - col_b[mu] * col_a[nu]);
            }
        }
        for r in 0..self.dim {
            self.m[r * self.dim + a] = 0.0;
            self.m[r * self.dim + b] = 0.0;
            self.m[a * self.dim + r] = 0.0;
            self.m[b * self.dim + r] = 0.0;
        }
        self.m[a * self.dim + b] = s;
        self.m[b * self.dim + a] = -s;
        Ok((outcome, prob))
    }

    /// Wick's theorem: ⟨c_{s₁} ⋯ c_{s₂k}⟩ = i^k Pf(M[S, S]) for the sorted
    /// index set S, zero for odd degree.
    pub fn expect_monomial(&self, mono: &MajoranaMonomial) -> Result<Complex64> {
        if mono.n_modes() != self.n_modes {
            return Err(Error::SizeMismatch {
                left: mono.n_modes(),
                right: self.n_modes,
            });
        }
        let idx = mono.indices();
        let d = idx.len();
        if d % 2 == 1 {
            return Ok(Complex64::ZERO);
        }
        let pf = if d == 0 {
            1.0
        } else {
            let mut sub = vec![0.0f64; d * d];
            for (r, &mu) in idx.iter().enumerate() {
                for (c, &nu) in idx.iter().enumerate() {
                    sub[r * d + c] = self.m[(mu - 1) * self.dim + (nu - 1)];
                }
            }
            pfaffian_in_place(&mut sub, d)
        };
        let i_pow = Complex64::i().powu((d / 2) as u32);
        Ok(mono.coeff().as_complex() * i_pow * pf)
    }

    /// Expectation of a Hermitian Pauli operator via its Majorana image.
    pub fn pauli_expectation(&self, p: &PauliString) -> Result<f64> {
        if !p.is_hermitian() {
            return Err(Error::NonHermitianOperator);
        }
        let mono = majorana_from_pauli(p);
        // for a Hermitian monomial the phase i^{d/2}·coeff is exactly ±1
        Ok(self.expect_monomial(&mono)?.re)
    }
}
