//! Exact algebra for signed Pauli strings and Majorana monomials, plus the
//! Jordan-Wigner map between them.
//!
//! Phases live in the cyclic group {+1, +i, −1, −i} and are tracked as exact
//! exponents of i, never as floats: every transfer-matrix entry downstream is
//! built from these signs.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported register: masks are single u64 words.
pub const MAX_QUBITS: usize = 64;

/// A fourth root of unity i^k.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Phase {
    #[serde(rename = "+1")]
    PlusOne,
    #[serde(rename = "+i")]
    PlusI,
    #[serde(rename = "-1")]
    MinusOne,
    #[serde(rename = "-i")]
    MinusI,
}

impl Phase {
    pub fn from_exponent(k: u8) -> Self {
        match k % 4 {
            0 => Phase::PlusOne,
            1 => Phase::PlusI,
            2 => Phase::MinusOne,
            _ => Phase::MinusI,
        }
    }

    /// Exponent k with this phase equal to i^k.
    pub fn exponent(self) -> u8 {
        match self {
            Phase::PlusOne => 0,
            Phase::PlusI => 1,
            Phase::MinusOne => 2,
            Phase::MinusI => 3,
        }
    }

    pub fn mul(self, rhs: Self) -> Self {
        Phase::from_exponent(self.exponent() + rhs.exponent())
    }

    pub fn conj(self) -> Self {
        Phase::from_exponent(4 - self.exponent())
    }

    pub fn negate(self) -> Self {
        Phase::from_exponent(self.exponent() + 2)
    }

    pub fn is_real(self) -> bool {
        self.exponent() % 2 == 0
    }

    pub fn as_complex(self) -> Complex64 {
        match self {
            Phase::PlusOne => Complex64::new(1.0, 0.0),
            Phase::PlusI => Complex64::new(0.0, 1.0),
            Phase::MinusOne => Complex64::new(-1.0, 0.0),
            Phase::MinusI => Complex64::new(0.0, -1.0),
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Phase::PlusOne => "+1",
            Phase::PlusI => "+i",
            Phase::MinusOne => "-1",
            Phase::MinusI => "-i",
        };
        f.write_str(s)
    }
}

/// A signed n-qubit Pauli word `phase · X^x · Z^z` in symplectic form.
///
/// The stored exponent is relative to the X-then-Z product; the coefficient
/// seen in front of the I/X/Y/Z letter word differs by i^{-|x∧z|} (one factor
/// of i per Y letter, since Y = iXZ). Constructors and accessors speak in
/// letter terms, which is what every formula in this crate is written in.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PauliString {
    n_qubits: usize,
    k: u8, // exponent of i in front of X^x Z^z
    x_mask: u64,
    z_mask: u64,
}

impl PauliString {
    pub fn identity(n_qubits: usize) -> Self {
        assert!(n_qubits >= 1 && n_qubits <= MAX_QUBITS);
        PauliString { n_qubits, k: 0, x_mask: 0, z_mask: 0 }
    }

    /// Build from a letter word like "ZIY" (qubit 1 first) and an overall
    /// letter-phase.
    pub fn from_letters(letters: &str, phase: Phase) -> Result<Self> {
        let n = letters.chars().count();
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::BadPauliWord(format!(
                "word length {n} outside 1..={MAX_QUBITS}"
            )));
        }
        let mut x_mask = 0u64;
        let mut z_mask = 0u64;
        for (bit, ch) in letters.chars().enumerate() {
            match ch {
                'I' | 'i' => {}
                'X' | 'x' => x_mask |= 1 << bit,
                'Y' | 'y' => {
                    x_mask |= 1 << bit;
                    z_mask |= 1 << bit;
                }
                'Z' | 'z' => z_mask |= 1 << bit,
                other => {
                    return Err(Error::BadPauliWord(format!("unexpected letter {other:?}")))
                }
            }
        }
        // letter word = i^{-|x∧z|} X^x Z^z, so X^x Z^z carries an extra i^{|x∧z|}
        let ys = (x_mask & z_mask).count_ones() as u8;
        Ok(PauliString {
            n_qubits: n,
            k: (phase.exponent() + ys) % 4,
            x_mask,
            z_mask,
        })
    }

    /// Single letter on one qubit (1-based), identity elsewhere, phase +1.
    pub fn single(n_qubits: usize, qubit: usize, letter: char) -> Result<Self> {
        if qubit == 0 || qubit > n_qubits {
            return Err(Error::IndexOutOfRange { index: qubit, limit: n_qubits });
        }
        let mut letters: Vec<char> = vec!['I'; n_qubits];
        letters[qubit - 1] = letter;
        PauliString::from_letters(&letters.iter().collect::<String>(), Phase::PlusOne)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn x_mask(&self) -> u64 {
        self.x_mask
    }

    pub fn z_mask(&self) -> u64 {
        self.z_mask
    }

    /// Exponent of i in front of the X^x Z^z normal form.
    pub fn xz_exponent(&self) -> u8 {
        self.k
    }

    /// Coefficient in front of the I/X/Y/Z letter word.
    pub fn phase(&self) -> Phase {
        let ys = (self.x_mask & self.z_mask).count_ones() as u8;
        Phase::from_exponent(self.k + 4 - ys % 4)
    }

    /// Letter on `qubit` (1-based), ignoring the overall phase.
    pub fn letter(&self, qubit: usize) -> char {
        let bit = 1u64 << (qubit - 1);
        match (self.x_mask & bit != 0, self.z_mask & bit != 0) {
            (false, false) => 'I',
            (true, false) => 'X',
            (true, true) => 'Y',
            (false, true) => 'Z',
        }
    }

    pub fn letters(&self) -> String {
        (1..=self.n_qubits).map(|q| self.letter(q)).collect()
    }

    /// Number of non-identity letters.
    pub fn weight(&self) -> u32 {
        (self.x_mask | self.z_mask).count_ones()
    }

    pub fn is_identity_word(&self) -> bool {
        self.x_mask == 0 && self.z_mask == 0
    }

    pub fn set_phase(&mut self, phase: Phase) {
        let ys = (self.x_mask & self.z_mask).count_ones() as u8;
        self.k = (phase.exponent() + ys) % 4;
    }

    pub fn scaled(&self, phase: Phase) -> Self {
        let mut out = self.clone();
        out.k = (out.k + phase.exponent()) % 4;
        out
    }

    /// True iff P† = P, i.e. the expectation of P is real in every state.
    pub fn is_hermitian(&self) -> bool {
        // (i^k X^x Z^z)† = i^{-k} (-1)^{|x∧z|} X^x Z^z
        let ys = (self.x_mask & self.z_mask).count_ones() as u8;
        (2 * self.k + 2 * ys) % 4 == 0
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let cross = (self.x_mask & other.z_mask).count_ones()
            + (self.z_mask & other.x_mask).count_ones();
        cross % 2 == 0
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}·{}", self.phase(), self.letters())
    }
}

/// Group product a·b with the exact phase.
pub fn pauli_multiply(a: &PauliString, b: &PauliString) -> Result<PauliString> {
    if a.n_qubits != b.n_qubits {
        return Err(Error::SizeMismatch { left: a.n_qubits, right: b.n_qubits });
    }
    // (X^xa Z^za)(X^xb Z^zb) = (-1)^{|za ∧ xb|} X^{xa⊕xb} Z^{za⊕zb}
    let swaps = (a.z_mask & b.x_mask).count_ones() as u8;
    Ok(PauliString {
        n_qubits: a.n_qubits,
        k: (a.k + b.k + 2 * (swaps % 2)) % 4,
        x_mask: a.x_mask ^ b.x_mask,
        z_mask: a.z_mask ^ b.z_mask,
    })
}

/// An ordered product of Majorana operators `coeff · c_{i1} c_{i2} …` on n
/// modes (2n Majorana indices, 1-based). Normalization sorts the indices by
/// adjacent transpositions (each flips the sign) and cancels repeated indices
/// (c² = 1), so `indices` is always strictly increasing.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct MajoranaMonomial {
    n_modes: usize,
    indices: Vec<usize>,
    coeff: Phase,
}

impl MajoranaMonomial {
    pub fn new(n_modes: usize, indices: &[usize], coeff: Phase) -> Result<Self> {
        if n_modes == 0 || 2 * n_modes > 2 * MAX_QUBITS {
            return Err(Error::IndexOutOfRange { index: n_modes, limit: MAX_QUBITS });
        }
        for &idx in indices {
            if idx == 0 || idx > 2 * n_modes {
                return Err(Error::IndexOutOfRange { index: idx, limit: 2 * n_modes });
            }
        }
        let mut m = MajoranaMonomial { n_modes, indices: indices.to_vec(), coeff };
        m.normalize();
        Ok(m)
    }

    pub fn identity(n_modes: usize) -> Self {
        MajoranaMonomial { n_modes, indices: Vec::new(), coeff: Phase::PlusOne }
    }

    fn normalize(&mut self) {
        // insertion sort, counting transpositions
        let v = &mut self.indices;
        let mut sign_flips = 0usize;
        for i in 1..v.len() {
            let mut j = i;
            while j > 0 && v[j - 1] > v[j] {
                v.swap(j - 1, j);
                sign_flips += 1;
                j -= 1;
            }
        }
        if sign_flips % 2 == 1 {
            self.coeff = self.coeff.negate();
        }
        // c_i c_i = 1: drop adjacent equal pairs (no sign; they are adjacent)
        let mut out = Vec::with_capacity(v.len());
        let mut i = 0;
        while i < v.len() {
            if i + 1 < v.len() && v[i] == v[i + 1] {
                i += 2;
            } else {
                out.push(v[i]);
                i += 1;
            }
        }
        self.indices = out;
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn coeff(&self) -> Phase {
        self.coeff
    }

    pub fn degree(&self) -> usize {
        self.indices.len()
    }

    pub fn scaled(&self, phase: Phase) -> Self {
        let mut out = self.clone();
        out.coeff = out.coeff.mul(phase);
        out
    }

    /// Concatenation product, renormalized.
    pub fn multiply(&self, rhs: &MajoranaMonomial) -> Result<MajoranaMonomial> {
        if self.n_modes != rhs.n_modes {
            return Err(Error::SizeMismatch { left: self.n_modes, right: rhs.n_modes });
        }
        let mut indices = self.indices.clone();
        indices.extend_from_slice(&rhs.indices);
        MajoranaMonomial::new(self.n_modes, &indices, self.coeff.mul(rhs.coeff))
    }

    /// True iff the normalized monomial equals its adjoint. Reversing d
    /// Hermitian factors costs d(d−1)/2 transpositions, so
    /// m† = conj(coeff)·(−1)^{d(d−1)/2}·c_S.
    pub fn is_hermitian(&self) -> bool {
        let d = self.indices.len();
        let reversal = (d * d.saturating_sub(1) / 2) % 2 == 1;
        let adj = if reversal { self.coeff.conj().negate() } else { self.coeff.conj() };
        adj == self.coeff
    }
}

impl fmt::Display for MajoranaMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.coeff)?;
        for idx in &self.indices {
            write!(f, "·c{idx}")?;
        }
        Ok(())
    }
}

/// Jordan-Wigner image of a single Majorana operator:
/// c_{2j−1} = X_j · Z_{j−1} ⋯ Z_1 and c_{2j} = Y_j · Z_{j−1} ⋯ Z_1.
pub fn jw_majorana(index: usize, n_modes: usize) -> Result<PauliString> {
    if index == 0 || index > 2 * n_modes {
        return Err(Error::IndexOutOfRange { index, limit: 2 * n_modes });
    }
    assert!(n_modes <= MAX_QUBITS);
    let j = index.div_ceil(2); // qubit, 1-based
    let tail = (1u64 << (j - 1)) - 1; // Z on qubits 1..j-1
    let (x_mask, z_mask, k) = if index % 2 == 1 {
        (1u64 << (j - 1), tail, 0)
    } else {
        // Y = iXZ contributes one power of i to the X^x Z^z normal form
        (1u64 << (j - 1), tail | (1u64 << (j - 1)), 1)
    };
    Ok(PauliString { n_qubits: n_modes, k, x_mask, z_mask })
}

/// Jordan-Wigner image of a normalized monomial (product of the single-index
/// images, with the coefficient folded into the phase).
pub fn jw_monomial(m: &MajoranaMonomial) -> Result<PauliString> {
    let mut acc = PauliString::identity(m.n_modes());
    acc.k = m.coeff().exponent();
    for &idx in m.indices() {
        let factor = jw_majorana(idx, m.n_modes())?;
        acc = pauli_multiply(&acc, &factor)?;
    }
    Ok(acc)
}

/// Inverse Jordan-Wigner map. Every signed Pauli string is the image of a
/// unique signed Majorana monomial: the mode-l index pair membership follows
/// from b_l = z_l ⊕ (⊕_{j>l} x_j) and a_l = x_l ⊕ b_l, and the coefficient is
/// fixed by re-encoding the recovered index set.
pub fn majorana_from_pauli(p: &PauliString) -> MajoranaMonomial {
    let n = p.n_qubits();
    let mut indices = Vec::new();
    let mut suffix_x = 0u8; // parity of x bits above the current qubit
    let mut b = vec![0u8; n];
    let mut a = vec![0u8; n];
    for l in (0..n).rev() {
        let x_l = ((p.x_mask >> l) & 1) as u8;
        let z_l = ((p.z_mask >> l) & 1) as u8;
        b[l] = z_l ^ suffix_x;
        a[l] = x_l ^ b[l];
        suffix_x ^= x_l;
    }
    for l in 0..n {
        if a[l] == 1 {
            indices.push(2 * l + 1);
        }
        if b[l] == 1 {
            indices.push(2 * l + 2);
        }
    }
    let monomial = MajoranaMonomial::new(n, &indices, Phase::PlusOne)
        .expect("recovered indices are in range");
    let image = jw_monomial(&monomial).expect("image of a valid monomial");
    debug_assert_eq!(image.x_mask, p.x_mask);
    debug_assert_eq!(image.z_mask, p.z_mask);
    let coeff = Phase::from_exponent(p.k + 4 - image.k % 4);
    monomial.scaled(coeff)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn word(s: &str) -> PauliString {
        PauliString::from_letters(s, Phase::PlusOne).unwrap()
    }

    #[test]
    fn phase_group_table() {
        assert_eq!(Phase::PlusI.mul(Phase::PlusI), Phase::MinusOne);
        assert_eq!(Phase::MinusI.mul(Phase::PlusI), Phase::PlusOne);
        assert_eq!(Phase::MinusOne.negate(), Phase::PlusOne);
        assert_eq!(Phase::PlusI.conj(), Phase::MinusI);
        assert_eq!(Phase::from_exponent(7), Phase::MinusI);
    }

    #[test]
    fn single_qubit_products() {
        let x = word("X");
        let y = word("Y");
        let z = word("Z");
        let xy = pauli_multiply(&x, &y).unwrap();
        assert_eq!(xy.letters(), "Z");
        assert_eq!(xy.phase(), Phase::PlusI);
        let zz = pauli_multiply(&z, &z).unwrap();
        assert!(zz.is_identity_word());
        assert_eq!(zz.phase(), Phase::PlusOne);
        let yx = pauli_multiply(&y, &x).unwrap();
        assert_eq!(yx.phase(), Phase::MinusI);
    }

    #[test]
    fn two_qubit_product_with_sign() {
        let xx = word("XX");
        let zz = word("ZZ");
        let p = pauli_multiply(&xx, &zz).unwrap();
        assert_eq!(p.letters(), "YY");
        assert_eq!(p.phase(), Phase::MinusOne);
    }

    #[test]
    fn identity_is_neutral() {
        let p = PauliString::from_letters("XZY", Phase::MinusI).unwrap();
        let e = PauliString::identity(3);
        assert_eq!(pauli_multiply(&p, &e).unwrap(), p);
        assert_eq!(pauli_multiply(&e, &p).unwrap(), p);
    }

    #[test]
    fn display_round_trip() {
        let p = PauliString::from_letters("ZIY", Phase::MinusI).unwrap();
        assert_eq!(p.to_string(), "-i·ZIY");
        assert_eq!(p.phase(), Phase::MinusI);
        assert_eq!(p.letters(), "ZIY");
    }

    #[test]
    fn jw_single_majoranas() {
        let c1 = jw_majorana(1, 2).unwrap();
        assert_eq!(c1.letters(), "XI");
        assert_eq!(c1.phase(), Phase::PlusOne);
        let c2 = jw_majorana(2, 2).unwrap();
        assert_eq!(c2.letters(), "YI");
        assert_eq!(c2.phase(), Phase::PlusOne);
        let c4 = jw_majorana(4, 2).unwrap();
        assert_eq!(c4.letters(), "ZY");
        assert_eq!(c4.phase(), Phase::PlusOne);
        assert!(jw_majorana(5, 2).is_err());
    }

    #[test]
    fn jw_pair_identities() {
        // the six two-mode identities, for every admissible k on 4 modes
        let n = 4;
        let cases: [(&dyn Fn(usize) -> (Vec<usize>, Phase), &dyn Fn(usize) -> String); 6] = [
            (
                &|k| (vec![2 * k - 1, 2 * k], Phase::MinusI),
                &|k| single_word(4, &[(k, 'Z')]),
            ),
            (
                &|k| (vec![2 * k, 2 * k + 1], Phase::MinusI),
                &|k| single_word(4, &[(k, 'X'), (k + 1, 'X')]),
            ),
            (
                &|k| (vec![2 * k, 2 * k + 2], Phase::MinusI),
                &|k| single_word(4, &[(k, 'X'), (k + 1, 'Y')]),
            ),
            (
                &|k| (vec![2 * k - 1, 2 * k + 1], Phase::PlusI),
                &|k| single_word(4, &[(k, 'Y'), (k + 1, 'X')]),
            ),
            (
                &|k| (vec![2 * k - 1, 2 * k + 2], Phase::PlusI),
                &|k| single_word(4, &[(k, 'Y'), (k + 1, 'Y')]),
            ),
            (
                &|k| (vec![2 * k + 1, 2 * k + 2], Phase::MinusI),
                &|k| single_word(4, &[(k + 1, 'Z')]),
            ),
        ];
        for (mk, expect) in cases {
            for k in 1..n {
                let (idx, coeff) = mk(k);
                let m = MajoranaMonomial::new(n, &idx, coeff).unwrap();
                let p = jw_monomial(&m).unwrap();
                assert_eq!(p.phase(), Phase::PlusOne, "monomial {m}");
                assert_eq!(p.letters(), expect(k), "monomial {m}");
            }
        }
    }

    fn single_word(n: usize, letters: &[(usize, char)]) -> String {
        let mut out = vec!['I'; n];
        for &(q, l) in letters {
            out[q - 1] = l;
        }
        out.into_iter().collect()
    }

    #[test]
    fn four_body_monomial_is_zz() {
        let m = MajoranaMonomial::new(2, &[1, 2, 3, 4], Phase::PlusOne).unwrap();
        let p = jw_monomial(&m).unwrap();
        assert_eq!(p.letters(), "ZZ");
        assert_eq!(p.phase(), Phase::MinusOne);
    }

    #[test]
    fn monomial_normalization() {
        let m = MajoranaMonomial::new(3, &[4, 1], Phase::PlusOne).unwrap();
        assert_eq!(m.indices(), &[1, 4]);
        assert_eq!(m.coeff(), Phase::MinusOne);
        let sq = m.multiply(&m).unwrap();
        assert_eq!(sq.degree(), 0);
        // (−c1c4)(−c1c4) = c1c4c1c4 = −1
        assert_eq!(sq.coeff(), Phase::MinusOne);
        let collapse = MajoranaMonomial::new(3, &[2, 2, 2], Phase::PlusI).unwrap();
        assert_eq!(collapse.indices(), &[2]);
    }

    #[test]
    fn hermiticity_rules() {
        assert!(MajoranaMonomial::new(2, &[1, 2], Phase::MinusI).unwrap().is_hermitian());
        assert!(!MajoranaMonomial::new(2, &[1, 2], Phase::PlusOne).unwrap().is_hermitian());
        assert!(MajoranaMonomial::new(2, &[1, 2, 3, 4], Phase::PlusOne).unwrap().is_hermitian());
        assert!(MajoranaMonomial::new(2, &[1], Phase::PlusOne).unwrap().is_hermitian());
        assert!(word("XIZ").is_hermitian());
        assert!(!word("XIZ").scaled(Phase::PlusI).is_hermitian());
    }

    #[test]
    fn inverse_jw_round_trip_handpicked() {
        for (letters, phase) in [
            ("Z", Phase::PlusOne),
            ("XY", Phase::MinusI),
            ("YZX", Phase::PlusI),
            ("IZYX", Phase::MinusOne),
            ("XXXX", Phase::PlusOne),
        ] {
            let p = PauliString::from_letters(letters, phase).unwrap();
            let m = majorana_from_pauli(&p);
            let back = jw_monomial(&m).unwrap();
            assert_eq!(back, p, "{letters}");
        }
    }

    #[test]
    fn jw_squares_to_identity() {
        for n in 1..=5 {
            for k in 1..=2 * n {
                let p = jw_majorana(k, n).unwrap();
                let sq = pauli_multiply(&p, &p).unwrap();
                assert!(sq.is_identity_word());
                assert_eq!(sq.phase(), Phase::PlusOne);
            }
        }
    }

    proptest! {
        #[test]
        fn product_is_associative(
            seeds in proptest::collection::vec(0u64..4, 3),
            n in 1usize..6,
        ) {
            let ps: Vec<PauliString> = seeds
                .iter()
                .enumerate()
                .map(|(i, &s)| random_word(n, s.wrapping_add(i as u64 * 17)))
                .collect();
            let left = pauli_multiply(&pauli_multiply(&ps[0], &ps[1]).unwrap(), &ps[2]).unwrap();
            let right = pauli_multiply(&ps[0], &pauli_multiply(&ps[1], &ps[2]).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn square_phase_is_real(s in 0u64..1 << 16, n in 1usize..6) {
            let p = random_word(n, s);
            let sq = pauli_multiply(&p, &p).unwrap();
            prop_assert!(sq.is_identity_word());
            prop_assert!(sq.phase().is_real());
        }

        #[test]
        fn inverse_jw_round_trip(s in 0u64..1 << 20, n in 1usize..6) {
            let p = random_word(n, s);
            let m = majorana_from_pauli(&p);
            let back = jw_monomial(&m).unwrap();
            prop_assert_eq!(back, p);
        }

        #[test]
        fn pair_images_anticommute_iff_one_shared_index(
            i in 1usize..10, j in 1usize..10, k in 1usize..10, l in 1usize..10,
        ) {
            let n = 5;
            prop_assume!(i != j && k != l);
            let a = jw_monomial(&MajoranaMonomial::new(n, &[i, j], Phase::PlusOne).unwrap()).unwrap();
            let b = jw_monomial(&MajoranaMonomial::new(n, &[k, l], Phase::PlusOne).unwrap()).unwrap();
            let shared = [i, j].iter().filter(|x| [k, l].contains(x)).count();
            prop_assert_eq!(a.commutes_with(&b), shared != 1);
        }
    }

    fn random_word(n: usize, seed: u64) -> PauliString {
        // cheap deterministic word generator, two bits per letter
        let mut letters = String::new();
        let mut s = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
        for _ in 0..n {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            letters.push(['I', 'X', 'Y', 'Z'][(s >> 60) as usize % 4]);
        }
        let phase = Phase::from_exponent((s >> 32) as u8 % 4);
        PauliString::from_letters(&letters, phase).unwrap()
    }
}
