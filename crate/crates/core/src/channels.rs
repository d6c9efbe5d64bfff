//! Two-qubit channels in Pauli-transfer-matrix form, plus the basis of
//! Gaussian channels over which non-Gaussian gates are decomposed.
//!
//! A transfer matrix T maps Pauli coefficient vectors: if
//! ρ = ¼ Σ r_P P then Λ(ρ) = ¼ Σ (T r)_P P, with the sixteen two-qubit
//! words ordered as in [`crate::oracle::ptm_word`]. All basis channels act
//! on the canonical frame of four Majorana operators c₁…c₄ (two modes),
//! where Z₁ = -i c₁c₂ and Z₂ = -i c₃c₄.

use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::GaussianState;
use crate::oracle::{self, ptm_word, DenseStep};
use crate::pauli::{pauli_multiply, PauliString, Phase};

/// Channels closer than this (entrywise) are treated as the same element
/// when assembling a basis.
pub const DEDUP_TOL: f64 = 1e-12;

/// A labelled 16 × 16 Pauli transfer matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelPTM {
    pub label: String,
    m: DMatrix<f64>,
}

impl ChannelPTM {
    pub fn new(label: impl Into<String>, m: DMatrix<f64>) -> Self {
        assert_eq!((m.nrows(), m.ncols()), (16, 16));
        ChannelPTM {
            label: label.into(),
            m,
        }
    }

    pub fn identity() -> Self {
        Self::new("I⊗I", DMatrix::identity(16, 16))
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &ChannelPTM) -> ChannelPTM {
        ChannelPTM {
            label: format!("{}∘{}", self.label, other.label),
            m: &self.m * &other.m,
        }
    }

    pub fn distance(&self, other: &ChannelPTM) -> f64 {
        (&self.m - &other.m).amax()
    }
}

/// One primitive operation of a channel on the Gaussian engine.
/// Majorana indices and qubits refer to the canonical frame (1-based).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum ChannelStep {
    /// Plane rotation of Majorana directions (i, j) by the matrix angle.
    Rotate { i: usize, j: usize, angle: f64 },
    /// ρ ↦ Z_q ρ Z_q.
    ZFlip { qubit: usize },
    /// Z measurement with an outcome-conditioned continuation.
    Measure {
        qubit: usize,
        plus: Vec<ChannelStep>,
        minus: Vec<ChannelStep>,
    },
}

/// Runs channel steps on a Gaussian state, sampling measurement outcomes
/// from `rng` (deterministic outcomes consume no randomness).
pub fn apply_channel_steps<R: Rng + ?Sized>(
    state: &mut GaussianState,
    steps: &[ChannelStep],
    rng: &mut R,
) -> Result<()> {
    for step in steps {
        match step {
            ChannelStep::Rotate { i, j, angle } => state.rotate_plane(*i, *j, *angle)?,
            ChannelStep::ZFlip { qubit } => state.flip_pauli_z(*qubit)?,
            ChannelStep::Measure { qubit, plus, minus } => {
                let (outcome, _) = state.measure_pair(*qubit, None, rng)?;
                let branch = if outcome > 0 { plus } else { minus };
                apply_channel_steps(state, branch, rng)?;
            }
        }
    }
    Ok(())
}

/// The same steps as linear maps on a dense density matrix, for
/// cross-checking against [`crate::oracle`].
pub fn dense_steps(n_modes: usize, steps: &[ChannelStep]) -> Result<Vec<DenseStep>> {
    steps
        .iter()
        .map(|step| match step {
            ChannelStep::Rotate { i, j, angle } => oracle::rotation_step(n_modes, *i, *j, *angle),
            ChannelStep::ZFlip { qubit } => Ok(DenseStep::PauliMixture(vec![(
                1.0,
                PauliString::single(n_modes, *qubit, 'Z')?,
            )])),
            ChannelStep::Measure { qubit, plus, minus } => Ok(DenseStep::MeasureFeedforward {
                qubit: *qubit,
                plus: dense_steps(n_modes, plus)?,
                minus: dense_steps(n_modes, minus)?,
            }),
        })
        .collect()
}

/// An executable recipe for one channel on the canonical two-mode frame.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExecChannel {
    pub label: String,
    pub steps: Vec<ChannelStep>,
}

/// A basis element: transfer matrix plus the recipe that realises it.
#[derive(Debug, Clone)]
pub struct BasisChannel {
    pub ptm: ChannelPTM,
    pub exec: ExecChannel,
}

/// Summary of a basis, suitable for machine-readable output.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BasisManifest {
    pub size: usize,
    pub labels: Vec<String>,
}

/// An ordered set of basis channels with duplicate transfer matrices
/// removed.
#[derive(Debug, Clone)]
pub struct BasisChannelSet {
    channels: Vec<BasisChannel>,
}

impl BasisChannelSet {
    /// The standard basis: all sixteen products of the single-qubit
    /// channels {Rz(π/4), Rz(-π/4), identity, Z conjugation}, the four
    /// measurement-plus-feedforward channels, and e^{±iπ/4 G} for the four
    /// quadratic generators G ∈ {XX, YY, XY, YX}.
    pub fn standard() -> Self {
        Self::with_extra_angles(&[]).expect("standard basis construction cannot fail")
    }

    /// Standard basis extended by e^{±iφG} for every extra angle φ and all
    /// four quadratic generators.
    pub fn with_extra_angles(angles: &[f64]) -> Result<Self> {
        let mut set = BasisChannelSet {
            channels: Vec::new(),
        };
        for a in SinglePiece::ALL {
            for b in SinglePiece::ALL {
                set.push_dedup(product_channel(a, b));
            }
        }
        for alpha in [1i8, -1] {
            set.push_dedup(measure_channel(1, alpha));
            set.push_dedup(measure_channel(2, alpha));
        }
        let quarter = std::f64::consts::FRAC_PI_4;
        for g in QuadraticGenerator::ALL {
            for sign in [1.0, -1.0] {
                let label = format!("R{}{}", g.tag(), if sign > 0.0 { '+' } else { '-' });
                set.push_dedup(generator_channel(g, sign * quarter, label));
            }
        }
        for &phi in angles {
            if !phi.is_finite() {
                return Err(Error::BadPauliWord(format!(
                    "extra rotation angle {phi} is not finite"
                )));
            }
            for g in QuadraticGenerator::ALL {
                for sign in [1.0, -1.0] {
                    let label = format!("R{}({:+.6})", g.tag(), sign * phi);
                    set.push_dedup(generator_channel(g, sign * phi, label));
                }
            }
        }
        Ok(set)
    }

    fn push_dedup(&mut self, ch: BasisChannel) {
        if self
            .channels
            .iter()
            .all(|existing| existing.ptm.distance(&ch.ptm) > DEDUP_TOL)
        {
            self.channels.push(ch);
        }
    }

    pub fn len(&self) -> usize {
        self.channels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.channels.is_empty()
    }

    pub fn channels(&self) -> &[BasisChannel] {
        &self.channels
    }

    pub fn by_label(&self, label: &str) -> Option<&BasisChannel> {
        self.channels.iter().find(|c| c.ptm.label == label)
    }

    pub fn manifest(&self) -> BasisManifest {
        BasisManifest {
            size: self.channels.len(),
            labels: self.channels.iter().map(|c| c.ptm.label.clone()).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SinglePiece {
    Identity,
    ZConj,
    RzPlus,
    RzMinus,
}

impl SinglePiece {
    const ALL: [SinglePiece; 4] = [
        SinglePiece::RzPlus,
        SinglePiece::RzMinus,
        SinglePiece::Identity,
        SinglePiece::ZConj,
    ];

    fn label(self) -> &'static str {
        match self {
            SinglePiece::Identity => "I",
            SinglePiece::ZConj => "Z",
            SinglePiece::RzPlus => "Rz+",
            SinglePiece::RzMinus => "Rz-",
        }
    }

    /// 4 × 4 transfer matrix in I, X, Y, Z order.
    fn ptm(self) -> DMatrix<f64> {
        match self {
            SinglePiece::Identity => DMatrix::identity(4, 4),
            SinglePiece::ZConj => DMatrix::from_diagonal(&nalgebra::dvector![1.0, -1.0, -1.0, 1.0]),
            SinglePiece::RzPlus => rz_quarter_ptm(1.0),
            SinglePiece::RzMinus => rz_quarter_ptm(-1.0),
        }
    }

    /// Steps realising the piece on `qubit`.
    fn steps(self, qubit: usize) -> Vec<ChannelStep> {
        let half = std::f64::consts::FRAC_PI_2;
        match self {
            SinglePiece::Identity => vec![],
            SinglePiece::ZConj => vec![ChannelStep::ZFlip { qubit }],
            // e^{iφZ_q} = exp(φ c_{2q-1} c_{2q}): matrix angle 2φ
            SinglePiece::RzPlus => vec![ChannelStep::Rotate {
                i: 2 * qubit - 1,
                j: 2 * qubit,
                angle: half,
            }],
            SinglePiece::RzMinus => vec![ChannelStep::Rotate {
                i: 2 * qubit - 1,
                j: 2 * qubit,
                angle: -half,
            }],
        }
    }
}

/// Transfer matrix of ρ ↦ e^{i s π/4 Z} ρ e^{-i s π/4 Z}: X ↦ -sY, Y ↦ sX.
fn rz_quarter_ptm(sign: f64) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(4, 4);
    m[(0, 0)] = 1.0;
    m[(3, 3)] = 1.0;
    m[(2, 1)] = -sign;
    m[(1, 2)] = sign;
    m
}

/// Transfer matrix of ρ ↦ Π_s ρ Π_s for the Z projector on one qubit.
fn projector_ptm(s: f64) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(4, 4);
    m[(0, 0)] = 0.5;
    m[(3, 3)] = 0.5;
    m[(0, 3)] = 0.5 * s;
    m[(3, 0)] = 0.5 * s;
    m
}

fn product_channel(a: SinglePiece, b: SinglePiece) -> BasisChannel {
    let label = format!("{}⊗{}", a.label(), b.label());
    let m = a.ptm().kronecker(&b.ptm());
    let mut steps = a.steps(1);
    steps.extend(b.steps(2));
    BasisChannel {
        ptm: ChannelPTM::new(label.clone(), m),
        exec: ExecChannel { label, steps },
    }
}

/// Measure qubit `measured` in the Z basis, then rotate the other qubit by
/// e^{i s α π/4 Z} conditioned on the outcome s.
fn measure_channel(measured: usize, alpha: i8) -> BasisChannel {
    let label = format!("K{}{}", measured, if alpha > 0 { '+' } else { '-' });
    let a = f64::from(alpha);
    let mut m = DMatrix::zeros(16, 16);
    for s in [1.0, -1.0] {
        let (first, second) = if measured == 1 {
            (projector_ptm(s), rz_quarter_ptm(s * a))
        } else {
            (rz_quarter_ptm(s * a), projector_ptm(s))
        };
        m += first.kronecker(&second);
    }
    let other = 3 - measured;
    let feedforward = |s: f64| {
        vec![ChannelStep::Rotate {
            i: 2 * other - 1,
            j: 2 * other,
            angle: s * a * std::f64::consts::FRAC_PI_2,
        }]
    };
    let steps = vec![ChannelStep::Measure {
        qubit: measured,
        plus: feedforward(1.0),
        minus: feedforward(-1.0),
    }];
    BasisChannel {
        ptm: ChannelPTM::new(label.clone(), m),
        exec: ExecChannel { label, steps },
    }
}

#[derive(Debug, Clone, Copy)]
enum QuadraticGenerator {
    Xx,
    Yy,
    Xy,
    Yx,
}

impl QuadraticGenerator {
    const ALL: [QuadraticGenerator; 4] = [
        QuadraticGenerator::Xx,
        QuadraticGenerator::Yy,
        QuadraticGenerator::Xy,
        QuadraticGenerator::Yx,
    ];

    fn tag(self) -> &'static str {
        match self {
            QuadraticGenerator::Xx => "xx",
            QuadraticGenerator::Yy => "yy",
            QuadraticGenerator::Xy => "xy",
            QuadraticGenerator::Yx => "yx",
        }
    }

    fn word(self) -> PauliString {
        let letters = match self {
            QuadraticGenerator::Xx => "XX",
            QuadraticGenerator::Yy => "YY",
            QuadraticGenerator::Xy => "XY",
            QuadraticGenerator::Yx => "YX",
        };
        PauliString::from_letters(letters, Phase::PlusOne).expect("fixed two-letter word")
    }

    /// The plane rotation realising e^{iφG} on Majorana directions:
    /// X₁X₂ = -i c₂c₃, X₁Y₂ = -i c₂c₄, Y₁X₂ = +i c₁c₃, Y₁Y₂ = +i c₁c₄.
    fn rotate_step(self, phi: f64) -> ChannelStep {
        let (i, j, sign) = match self {
            QuadraticGenerator::Xx => (2, 3, 1.0),
            QuadraticGenerator::Xy => (2, 4, 1.0),
            QuadraticGenerator::Yx => (1, 3, -1.0),
            QuadraticGenerator::Yy => (1, 4, -1.0),
        };
        ChannelStep::Rotate {
            i,
            j,
            angle: sign * 2.0 * phi,
        }
    }
}

fn generator_channel(g: QuadraticGenerator, phi: f64, label: String) -> BasisChannel {
    BasisChannel {
        ptm: ChannelPTM::new(label.clone(), ptm_pauli_rotation(&g.word(), phi)),
        exec: ExecChannel {
            label,
            steps: vec![g.rotate_step(phi)],
        },
    }
}

/// Transfer matrix of the unitary channel ρ ↦ e^{iφG} ρ e^{-iφG} for a
/// Hermitian two-qubit Pauli word G: words commuting with G are fixed,
/// anticommuting words rotate as Q ↦ cos(2φ) Q + i sin(2φ) G·Q.
pub fn ptm_pauli_rotation(g: &PauliString, phi: f64) -> DMatrix<f64> {
    assert!(g.n_qubits() == 2 && g.is_hermitian() && g.phase() == Phase::PlusOne);
    let (s2, c2) = (2.0 * phi).sin_cos();
    let mut m = DMatrix::zeros(16, 16);
    for col in 0..16 {
        let q = ptm_word(col);
        if q.commutes_with(g) {
            m[(col, col)] = 1.0;
            continue;
        }
        m[(col, col)] = c2;
        let prod = pauli_multiply(g, &q).expect("same qubit count");
        // G and Q anticommute, so G·Q carries a ±i phase and the image
        // coefficient i·sin(2φ)·(±i) is real
        let coeff = match prod.phase() {
            Phase::PlusI => -s2,
            Phase::MinusI => s2,
            _ => unreachable!("product of anticommuting Hermitian words"),
        };
        m[(word_index(&prod), col)] = coeff;
    }
    m
}

/// Position of a word's letters in transfer-matrix order.
fn word_index(p: &PauliString) -> usize {
    let rank = |c: char| match c {
        'I' => 0,
        'X' => 1,
        'Y' => 2,
        _ => 3,
    };
    4 * rank(p.letter(1)) + rank(p.letter(2))
}

/// ρ ↦ e^{iθ Z₁Z₂} ρ e^{-iθ Z₁Z₂}, the canonical form of the four-body
/// Majorana rotation exp(-iθ c₁c₂c₃c₄).
pub fn ptm_rot_zz(theta: f64) -> ChannelPTM {
    let zz = PauliString::from_letters("ZZ", Phase::PlusOne).expect("fixed word");
    ChannelPTM::new(format!("rot_zz({theta})"), ptm_pauli_rotation(&zz, theta))
}

/// Two-mode fermionic dephasing: identity with probability 1-p, otherwise
/// conjugation by one of Z₁, Z₂, Z₁Z₂ with probability p/3 each. Diagonal
/// with 1 on the words built from {I, Z} and 1 - 4p/3 on the rest.
pub fn ptm_dephasing(p: f64) -> Result<ChannelPTM> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::BadProbability { value: p });
    }
    let beta = 1.0 - 4.0 * p / 3.0;
    let mut m = DMatrix::zeros(16, 16);
    for i in 0..16 {
        let z_class = ptm_word(i).letters().chars().all(|c| c == 'I' || c == 'Z');
        m[(i, i)] = if z_class { 1.0 } else { beta };
    }
    Ok(ChannelPTM::new(format!("dephase({p})"), m))
}

/// The decomposition target: dephasing composed with the Z₁Z₂ rotation
/// (the two commute, so the order is irrelevant).
pub fn ptm_noisy_rot_zz(theta: f64, p: f64) -> Result<ChannelPTM> {
    Ok(ptm_dephasing(p)?.compose(&ptm_rot_zz(theta)))
}
