//! Dense density-matrix reference backend.
//!
//! Exact on a handful of qubits and deliberately naive: every operation is a
//! linear map on the full 2^n × 2^n matrix. The covariance-matrix engine is
//! checked against this module, never the other way around, so nothing here
//! is allowed to share code with the fast path.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::{jw_monomial, MajoranaMonomial, PauliString, Phase};

/// Dense matrices grow as 4^n; the reference backend is only ever asked
/// about small systems.
pub const MAX_DENSE_QUBITS: usize = 6;

/// One linear step of a channel, in density-matrix language.
#[derive(Debug, Clone)]
pub enum DenseStep {
    /// ρ ↦ e^{iθP} ρ e^{-iθP} for a Hermitian Pauli `P`.
    Rotation { angle: f64, pauli: PauliString },
    /// ρ ↦ Σ_i w_i P_i ρ P_i for Hermitian Paulis with w_i ≥ 0.
    PauliMixture(Vec<(f64, PauliString)>),
    /// Non-selective Z measurement of `qubit` followed by an
    /// outcome-conditioned correction:
    /// ρ ↦ C_+(Π_+ ρ Π_+) + C_-(Π_- ρ Π_-).
    MeasureFeedforward {
        qubit: usize,
        plus: Vec<DenseStep>,
        minus: Vec<DenseStep>,
    },
}

/// A 2^n × 2^n complex matrix in row-major order. Usually a density matrix,
/// but every step is linear, so Pauli words can be pushed through directly
/// when assembling transfer matrices.
#[derive(Debug, Clone)]
pub struct DenseState {
    n_qubits: usize,
    dim: usize,
    a: Vec<Complex64>,
}

impl DenseState {
    fn zeros(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_DENSE_QUBITS {
            return Err(Error::IndexOutOfRange {
                index: n_qubits,
                limit: MAX_DENSE_QUBITS,
            });
        }
        let dim = 1usize << n_qubits;
        Ok(DenseState {
            n_qubits,
            dim,
            a: vec![Complex64::ZERO; dim * dim],
        })
    }

    /// |bits⟩⟨bits| with qubit j stored in bit j-1 (the Jordan–Wigner mask
    /// convention).
    pub fn computational(n_qubits: usize, bits: u64) -> Result<Self> {
        let mut s = Self::zeros(n_qubits)?;
        if bits >> n_qubits != 0 {
            return Err(Error::IndexOutOfRange {
                index: bits as usize,
                limit: s.dim - 1,
            });
        }
        let b = bits as usize;
        s.a[b * s.dim + b] = Complex64::ONE;
        Ok(s)
    }

    /// Product state with the given per-qubit occupations (1 = |1⟩).
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        let mut packed = 0u64;
        for (j, &b) in bits.iter().enumerate() {
            match b {
                0 => {}
                1 => packed |= 1 << j,
                other => return Err(Error::BadOccupation { value: other }),
            }
        }
        Self::computational(bits.len(), packed)
    }

    /// The matrix of a Pauli operator, used as channel input when
    /// extracting transfer matrices.
    pub fn from_pauli(p: &PauliString) -> Result<Self> {
        let mut s = Self::zeros(p.n_qubits())?;
        let x = p.x_mask() as usize;
        let z = p.z_mask();
        let phase = Phase::from_exponent(p.xz_exponent()).as_complex();
        // P|c⟩ = i^k (-1)^{z·c} |c ⊕ x⟩
        for c in 0..s.dim {
            let sign = parity_sign(z & c as u64);
            s.a[(c ^ x) * s.dim + c] = phase * sign;
        }
        Ok(s)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|r| self.a[r * self.dim + r]).sum()
    }

    /// Tr(P · A) without materialising the product.
    pub fn expect(&self, p: &PauliString) -> Result<Complex64> {
        if p.n_qubits() != self.n_qubits {
            return Err(Error::SizeMismatch {
                left: p.n_qubits(),
                right: self.n_qubits,
            });
        }
        let x = p.x_mask() as usize;
        let z = p.z_mask();
        let phase = Phase::from_exponent(p.xz_exponent()).as_complex();
        let mut acc = Complex64::ZERO;
        for r in 0..self.dim {
            // (PA)[r, r] with P[r, y] supported on y = r ⊕ x
            let y = r ^ x;
            acc += parity_sign(z & y as u64) * self.a[y * self.dim + r];
        }
        Ok(phase * acc)
    }

    fn left_mul(&self, p: &PauliString) -> Vec<Complex64> {
        let x = p.x_mask() as usize;
        let z = p.z_mask();
        let phase = Phase::from_exponent(p.xz_exponent()).as_complex();
        let mut out = vec![Complex64::ZERO; self.a.len()];
        for r in 0..self.dim {
            let src = (r ^ x) * self.dim;
            let f = phase * parity_sign(z & (r ^ x) as u64);
            for c in 0..self.dim {
                out[r * self.dim + c] = f * self.a[src + c];
            }
        }
        out
    }

    fn right_mul(&self, p: &PauliString) -> Vec<Complex64> {
        let x = p.x_mask() as usize;
        let z = p.z_mask();
        let phase = Phase::from_exponent(p.xz_exponent()).as_complex();
        let mut out = vec![Complex64::ZERO; self.a.len()];
        for r in 0..self.dim {
            for c in 0..self.dim {
                let f = phase * parity_sign(z & c as u64);
                out[r * self.dim + c] = f * self.a[r * self.dim + (c ^ x)];
            }
        }
        out
    }

    fn conjugate(&self, p: &PauliString) -> Vec<Complex64> {
        debug_assert!(p.is_hermitian());
        let left = DenseState {
            n_qubits: self.n_qubits,
            dim: self.dim,
            a: self.left_mul(p),
        };
        left.right_mul(p)
    }

    pub fn apply(&mut self, step: &DenseStep) {
        match step {
            DenseStep::Rotation { angle, pauli } => {
                debug_assert!(pauli.is_hermitian());
                let (s, c) = angle.sin_cos();
                let pa = self.left_mul(pauli);
                let ap = self.right_mul(pauli);
                let pap = DenseState {
                    n_qubits: self.n_qubits,
                    dim: self.dim,
                    a: pa.clone(),
                }
                .right_mul(pauli);
                let ics = Complex64::new(0.0, c * s);
                for (i, out) in self.a.iter_mut().enumerate() {
                    *out = c * c * *out + ics * (pa[i] - ap[i]) + s * s * pap[i];
                }
            }
            DenseStep::PauliMixture(terms) => {
                let mut out = vec![Complex64::ZERO; self.a.len()];
                for (w, p) in terms {
                    debug_assert!(*w >= 0.0 && p.is_hermitian());
                    for (o, t) in out.iter_mut().zip(self.conjugate(p)) {
                        *o += *w * t;
                    }
                }
                self.a = out;
            }
            DenseStep::MeasureFeedforward { qubit, plus, minus } => {
                let mut up = self.clone();
                up.project(*qubit, 1);
                up.apply_all(plus);
                let mut down = self.clone();
                down.project(*qubit, -1);
                down.apply_all(minus);
                for (i, out) in self.a.iter_mut().enumerate() {
                    *out = up.a[i] + down.a[i];
                }
            }
        }
    }

    pub fn apply_all(&mut self, steps: &[DenseStep]) {
        for step in steps {
            self.apply(step);
        }
    }

    /// Probability of reading `outcome` (±1) when measuring Z on `qubit`.
    pub fn measure_prob(&self, qubit: usize, outcome: i8) -> Result<f64> {
        let z = PauliString::single(self.n_qubits, qubit, 'Z')?;
        let expect = self.expect(&z)?.re;
        Ok((1.0 + f64::from(outcome.signum()) * expect) / 2.0)
    }

    /// Unnormalised projection Π_s A Π_s onto the Z = `outcome` eigenspace
    /// of `qubit`.
    pub fn project(&mut self, qubit: usize, outcome: i8) {
        let bit = 1usize << (qubit - 1);
        let keep = if outcome > 0 { 0 } else { bit };
        for r in 0..self.dim {
            for c in 0..self.dim {
                if r & bit != keep || c & bit != keep {
                    self.a[r * self.dim + c] = Complex64::ZERO;
                }
            }
        }
    }

    /// Project onto a forced measurement outcome and renormalise.
    /// Returns the probability the outcome had.
    pub fn collapse(&mut self, qubit: usize, outcome: i8) -> Result<f64> {
        let prob = self.measure_prob(qubit, outcome)?;
        if prob < 1e-12 {
            return Err(Error::ImpossibleOutcome { probability: prob });
        }
        self.project(qubit, outcome);
        let inv = Complex64::new(1.0 / prob, 0.0);
        for v in &mut self.a {
            *v *= inv;
        }
        Ok(prob)
    }
}

fn parity_sign(bits: u64) -> Complex64 {
    if bits.count_ones() % 2 == 0 {
        Complex64::ONE
    } else {
        -Complex64::ONE
    }
}

/// The sixteen two-qubit Pauli words in transfer-matrix order:
/// index 4·a₁ + a₂ with letters ordered I, X, Y, Z.
pub fn ptm_word(index: usize) -> PauliString {
    const LETTERS: [char; 4] = ['I', 'X', 'Y', 'Z'];
    let letters: String = [LETTERS[index / 4 % 4], LETTERS[index % 4]].iter().collect();
    PauliString::from_letters(&letters, Phase::PlusOne).expect("two valid letters")
}

/// Pauli transfer matrix of a two-qubit channel given as dense steps:
/// T[out, in] = Tr(P_out · Λ(P_in)) / 4.
pub fn extract_ptm(steps: &[DenseStep]) -> Result<DMatrix<f64>> {
    let mut t = DMatrix::zeros(16, 16);
    for col in 0..16 {
        let mut state = DenseState::from_pauli(&ptm_word(col))?;
        state.apply_all(steps);
        for row in 0..16 {
            let tr = state.expect(&ptm_word(row))?;
            debug_assert!(tr.im.abs() < 1e-10);
            t[(row, col)] = tr.re / 4.0;
        }
    }
    Ok(t)
}

/// Hermitian Pauli word of the Majorana pair -i c_i c_j.
pub fn pair_word(n_modes: usize, i: usize, j: usize) -> Result<PauliString> {
    let m = MajoranaMonomial::new(n_modes, &[i, j], Phase::MinusI)?;
    if !m.is_hermitian() {
        return Err(Error::DegeneratePair { index: i });
    }
    jw_monomial(&m)
}

/// Hermitian Pauli word of the Majorana quadruple -c_i c_j c_k c_l.
pub fn quad_word(n_modes: usize, idx: [usize; 4]) -> Result<PauliString> {
    let m = MajoranaMonomial::new(n_modes, &idx, Phase::MinusOne)?;
    if m.degree() != 4 {
        return Err(Error::RepeatedIndex { index: idx[0] });
    }
    jw_monomial(&m)
}

/// Dense form of the Gaussian rotation that acts on the covariance matrix
/// as the plane rotation R(φ) in the (i, j) plane: U = exp((φ/2) c_i c_j).
pub fn rotation_step(n_modes: usize, i: usize, j: usize, matrix_angle: f64) -> Result<DenseStep> {
    // exp(g c_i c_j) = exp(i g · (-i c_i c_j)) with -i c_i c_j Hermitian
    Ok(DenseStep::Rotation {
        angle: matrix_angle / 2.0,
        pauli: pair_word(n_modes, i, j)?,
    })
}

/// Dense form of the four-body gate exp(-iθ c_i c_j c_k c_l).
pub fn four_body_step(n_modes: usize, idx: [usize; 4], theta: f64) -> Result<DenseStep> {
    let m = MajoranaMonomial::new(n_modes, &idx, Phase::PlusOne)?;
    if m.degree() != 4 {
        return Err(Error::RepeatedIndex { index: idx[0] });
    }
    Ok(DenseStep::Rotation {
        angle: -theta,
        pauli: jw_monomial(&m)?,
    })
}

/// Fermionic dephasing attached to a four-body gate on modes (i, j, k, l):
/// identity with probability 1-p, otherwise one of the three Hermitian
/// words -i c_i c_j, -i c_k c_l, or their product, each with weight p/3.
pub fn dephasing_mixture(n_modes: usize, idx: [usize; 4], p: f64) -> Result<DenseStep> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::BadProbability { value: p });
    }
    let n_qubits = n_modes; // JW: one qubit per mode
    let first = pair_word(n_modes, idx[0], idx[1])?;
    let second = pair_word(n_modes, idx[2], idx[3])?;
    let both = crate::pauli::pauli_multiply(&first, &second)?;
    Ok(DenseStep::PauliMixture(vec![
        (1.0 - p, PauliString::identity(n_qubits)),
        (p / 3.0, first),
        (p / 3.0, second),
        (p / 3.0, both),
    ]))
}
