//! Pfaffian of a real antisymmetric matrix via Parlett-Reid-style
//! skew-symmetric elimination with partial pivoting, O(k³).

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Antisymmetry tolerance accepted by [`pfaffian`].
pub const ANTISYMMETRY_TOL: f64 = 1e-10;

/// Pfaffian of `a`, validating shape and antisymmetry first.
///
/// Pf([[0, a], [−a, 0]]) = a, and Pf(A)² = det(A).
pub fn pfaffian(a: &DMatrix<f64>) -> Result<f64> {
    let k = a.nrows();
    if k != a.ncols() || k % 2 == 1 {
        return Err(Error::OddDimension { dim: k });
    }
    let mut deviation = 0.0f64;
    for i in 0..k {
        for j in i..k {
            deviation = deviation.max((a[(i, j)] + a[(j, i)]).abs());
        }
    }
    if deviation > ANTISYMMETRY_TOL {
        return Err(Error::NotAntisymmetric { deviation });
    }
    let mut buf: Vec<f64> = Vec::with_capacity(k * k);
    for i in 0..k {
        for j in 0..k {
            buf.push(a[(i, j)]);
        }
    }
    Ok(pfaffian_in_place(&mut buf, k))
}

/// Pfaffian of a row-major k×k skew-symmetric buffer. Destroys the buffer.
/// No validation: callers guarantee shape and antisymmetry.
pub(crate) fn pfaffian_in_place(a: &mut [f64], k: usize) -> f64 {
    debug_assert_eq!(a.len(), k * k);
    debug_assert_eq!(k % 2, 0);
    if k == 0 {
        return 1.0;
    }
    let at = |a: &[f64], i: usize, j: usize| a[i * k + j];
    let mut pf = 1.0f64;
    for step in (0..k - 1).step_by(2) {
        // partial pivot: largest |A[i, step]| below the diagonal
        let mut ip = step + 1;
        let mut best = at(a, step + 1, step).abs();
        for i in step + 2..k {
            let v = at(a, i, step).abs();
            if v > best {
                best = v;
                ip = i;
            }
        }
        if best == 0.0 {
            return 0.0; // zero column ⇒ singular ⇒ Pf = 0
        }
        if ip != step + 1 {
            swap_rows_cols(a, k, ip, step + 1);
            pf = -pf;
        }
        let pivot = at(a, step, step + 1);
        pf *= pivot;
        if step + 2 >= k {
            break;
        }
        // Gauss transform on the trailing block (a congruence, Pf-invariant):
        // with τ_j = A[step, j]/pivot and v_j = A[j, step+1],
        // A[i, j] += τ_i·v_j − v_i·τ_j for i, j ≥ step+2. The two outer
        // products are exact negatives entrywise, so skew symmetry survives
        // in floating point without a cleanup pass.
        let tail = k - (step + 2);
        let mut tau = vec![0.0f64; tail];
        let mut v = vec![0.0f64; tail];
        for t in 0..tail {
            tau[t] = at(a, step, step + 2 + t) / pivot;
            v[t] = at(a, step + 2 + t, step + 1);
        }
        for i in 0..tail {
            if tau[i] == 0.0 && v[i] == 0.0 {
                continue;
            }
            let row = (step + 2 + i) * k + step + 2;
            for j in 0..tail {
                a[row + j] += tau[i] * v[j] - v[i] * tau[j];
            }
        }
    }
    pf
}

fn swap_rows_cols(a: &mut [f64], k: usize, p: usize, q: usize) {
    for j in 0..k {
        a.swap(p * k + j, q * k + j);
    }
    for i in 0..k {
        a.swap(i * k + p, i * k + q);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Recursive perfect-matching expansion: the 15-term sum at k = 6.
    fn pfaffian_brute(a: &DMatrix<f64>) -> f64 {
        fn go(a: &DMatrix<f64>, live: &[usize]) -> f64 {
            if live.is_empty() {
                return 1.0;
            }
            let first = live[0];
            let mut total = 0.0;
            for (pos, &j) in live.iter().enumerate().skip(1) {
                let rest: Vec<usize> = live[1..]
                    .iter()
                    .copied()
                    .filter(|&x| x != j)
                    .collect();
                let sign = if pos % 2 == 1 { 1.0 } else { -1.0 };
                total += sign * a[(first, j)] * go(a, &rest);
            }
            total
        }
        let live: Vec<usize> = (0..a.nrows()).collect();
        go(a, &live)
    }

    fn random_skew(k: usize, seed: u64) -> DMatrix<f64> {
        let mut s = seed;
        let mut next = move || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        let mut m = DMatrix::zeros(k, k);
        for i in 0..k {
            for j in i + 1..k {
                let v = next();
                m[(i, j)] = v;
                m[(j, i)] = -v;
            }
        }
        m
    }

    #[test]
    fn two_by_two_is_upper_entry() {
        let m = DMatrix::from_row_slice(2, 2, &[0.0, 3.0, -3.0, 0.0]);
        assert_relative_eq!(pfaffian(&m).unwrap(), 3.0);
    }

    #[test]
    fn block_diagonal_multiplies() {
        let mut m = DMatrix::zeros(4, 4);
        m[(0, 1)] = 2.0;
        m[(1, 0)] = -2.0;
        m[(2, 3)] = -0.75;
        m[(3, 2)] = 0.75;
        assert_relative_eq!(pfaffian(&m).unwrap(), -1.5, epsilon = 1e-14);
    }

    #[test]
    fn rejects_odd_and_asymmetric() {
        assert!(pfaffian(&DMatrix::zeros(3, 3)).is_err());
        let mut m = DMatrix::zeros(2, 2);
        m[(0, 1)] = 1.0;
        m[(1, 0)] = -1.0 + 1e-6;
        assert!(pfaffian(&m).is_err());
    }

    #[test]
    fn matches_matching_expansion() {
        for seed in 0..40u64 {
            let k = 2 + 2 * (seed as usize % 3); // 2, 4, 6
            let m = random_skew(k, seed.wrapping_add(7));
            let fast = pfaffian(&m).unwrap();
            let slow = pfaffian_brute(&m);
            assert_relative_eq!(fast, slow, epsilon = 1e-10, max_relative = 1e-8);
        }
    }

    #[test]
    fn square_equals_determinant() {
        for seed in 0..20u64 {
            let k = 8;
            let m = random_skew(k, seed.wrapping_mul(31).wrapping_add(3));
            let pf = pfaffian(&m).unwrap();
            let det = m.determinant();
            assert_relative_eq!(pf * pf, det, max_relative = 1e-8, epsilon = 1e-12);
        }
    }

    #[test]
    fn singular_matrix_gives_zero() {
        // rank-deficient skew matrix: embed a zero row/column pair
        let mut m = random_skew(6, 11);
        for j in 0..6 {
            m[(2, j)] = 0.0;
            m[(j, 2)] = 0.0;
        }
        assert_relative_eq!(pfaffian(&m).unwrap(), 0.0, epsilon = 1e-12);
    }
}
