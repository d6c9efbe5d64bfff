//! Dense two-phase simplex for the L1-minimising linear program
//! min Σ_i |x_i| subject to A x = b,
//! solved in standard form over the split x = q⁺ - q⁻ with q± ≥ 0. The
//! systems here are tiny (a few hundred rows before reduction, a few dozen
//! columns), so a dense tableau beats anything clever.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Phase-1 objective above this value means the reduced system was not
/// solvable, which for a full-row-rank reduction cannot happen unless the
/// arithmetic broke down.
const PHASE1_TOL: f64 = 1e-9;
/// Entries below this are treated as zero during pivot selection.
const PIVOT_TOL: f64 = 1e-10;
/// Reduced costs must beat this to qualify as improving.
const COST_TOL: f64 = 1e-11;
/// After this many pivots without progress, fall back to Bland's rule.
const STALL_LIMIT: usize = 200;

pub(crate) const MAX_ITERATIONS: usize = 100_000;

#[derive(Debug, Clone)]
pub(crate) struct LpSolution {
    /// Signed weights, one per column of A.
    pub x: Vec<f64>,
    /// Σ|x| at the optimum.
    pub objective: f64,
}

/// Minimises Σ|x| subject to A x = b. Rows of A may be linearly dependent
/// or even inconsistent with b; a full-pivot reduction picks an independent
/// subset first, and the caller is expected to judge the residual of the
/// returned solution against the *full* system.
pub(crate) fn solve_l1_min(a: &DMatrix<f64>, b: &DVector<f64>) -> Result<LpSolution> {
    assert_eq!(a.nrows(), b.len());
    let rows = independent_rows(a);
    let m = rows.len();
    let n = a.ncols();
    if m == 0 {
        // A is (numerically) zero; x = 0 is optimal for any consistent b
        return Ok(LpSolution {
            x: vec![0.0; n],
            objective: 0.0,
        });
    }

    let mut tableau = Tableau::new(a, b, &rows);
    tableau.run_phase1()?;
    tableau.run_phase2()?;
    Ok(tableau.solution())
}

/// Indices of a maximal linearly independent subset of rows, chosen by
/// Gaussian elimination with full pivoting.
fn independent_rows(a: &DMatrix<f64>) -> Vec<usize> {
    let (nr, nc) = (a.nrows(), a.ncols());
    let mut w = a.clone();
    let mut available: Vec<usize> = (0..nr).collect();
    let mut col_used = vec![false; nc];
    let mut picked = Vec::new();
    loop {
        let mut best = PIVOT_TOL;
        let mut pivot: Option<(usize, usize)> = None;
        for (slot, &r) in available.iter().enumerate() {
            for c in 0..nc {
                if !col_used[c] && w[(r, c)].abs() > best {
                    best = w[(r, c)].abs();
                    pivot = Some((slot, c));
                }
            }
        }
        let Some((slot, c)) = pivot else { break };
        let r = available.remove(slot);
        picked.push(r);
        col_used[c] = true;
        for &other in &available {
            let factor = w[(other, c)] / w[(r, c)];
            if factor == 0.0 {
                continue;
            }
            for cc in 0..nc {
                let delta = factor * w[(r, cc)];
                w[(other, cc)] -= delta;
            }
        }
        if picked.len() == nc.min(nr) {
            break;
        }
    }
    picked.sort_unstable();
    picked
}

/// Dense simplex tableau over columns [q⁺ | q⁻ | artificials | rhs].
struct Tableau {
    m: usize,
    n: usize, // original variable count; structural columns are 2n
    /// (m + 1) rows × (2n + m + 1) columns; last row is the cost row.
    t: DMatrix<f64>,
    basis: Vec<usize>,
    iterations: usize,
}

impl Tableau {
    fn new(a: &DMatrix<f64>, b: &DVector<f64>, rows: &[usize]) -> Self {
        let m = rows.len();
        let n = a.ncols();
        let cols = 2 * n + m + 1;
        let mut t = DMatrix::zeros(m + 1, cols);
        for (i, &r) in rows.iter().enumerate() {
            let flip = if b[r] < 0.0 { -1.0 } else { 1.0 };
            for j in 0..n {
                t[(i, j)] = flip * a[(r, j)];
                t[(i, n + j)] = -flip * a[(r, j)];
            }
            t[(i, 2 * n + i)] = 1.0;
            t[(i, cols - 1)] = flip * b[r];
        }
        // phase-1 reduced costs: minimize the artificial sum, so subtract
        // every constraint row from the (zero) cost row
        for i in 0..m {
            for j in 0..cols {
                let delta = t[(i, j)];
                t[(m, j)] -= delta;
            }
        }
        for i in 0..m {
            t[(m, 2 * n + i)] = 0.0;
        }
        Tableau {
            m,
            n,
            t,
            basis: (0..m).map(|i| 2 * n + i).collect(),
            iterations: 0,
        }
    }

    fn rhs_col(&self) -> usize {
        2 * self.n + self.m
    }

    fn objective(&self) -> f64 {
        -self.t[(self.m, self.rhs_col())]
    }

    /// Pivot loop for the current cost row. `allow_artificial` keeps the
    /// artificial columns eligible (phase 1 only).
    fn optimise(&mut self, allow_artificial: bool) -> Result<()> {
        let mut best_seen = f64::INFINITY;
        let mut stalled = 0usize;
        loop {
            self.iterations += 1;
            if self.iterations > MAX_ITERATIONS {
                return Err(Error::SolverStalled {
                    iterations: MAX_ITERATIONS,
                });
            }
            let bland = stalled > STALL_LIMIT;
            let limit = if allow_artificial {
                2 * self.n + self.m
            } else {
                2 * self.n
            };
            let mut entering: Option<usize> = None;
            let mut most_negative = -COST_TOL;
            for j in 0..limit {
                let d = self.t[(self.m, j)];
                if d < -COST_TOL {
                    if bland {
                        entering = Some(j);
                        break;
                    }
                    if d < most_negative {
                        most_negative = d;
                        entering = Some(j);
                    }
                }
            }
            let Some(enter) = entering else {
                return Ok(()); // optimal
            };

            let rhs = self.rhs_col();
            let mut leave: Option<usize> = None;
            let mut best_ratio = f64::INFINITY;
            for i in 0..self.m {
                let coeff = self.t[(i, enter)];
                if coeff > PIVOT_TOL {
                    let ratio = self.t[(i, rhs)] / coeff;
                    let better = ratio < best_ratio - 1e-12
                        || (ratio < best_ratio + 1e-12
                            && leave.is_some_and(|l| self.basis[i] < self.basis[l]));
                    if leave.is_none() || better {
                        best_ratio = ratio;
                        leave = Some(i);
                    }
                }
            }
            let Some(row) = leave else {
                // the objective is bounded below by zero, so an unbounded
                // ray can only mean the arithmetic fell apart
                return Err(Error::SolverStalled {
                    iterations: self.iterations,
                });
            };

            self.pivot(row, enter);
            let obj = self.objective();
            if obj < best_seen - 1e-12 {
                best_seen = obj;
                stalled = 0;
            } else {
                stalled += 1;
            }
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let cols = self.rhs_col() + 1;
        let inv = 1.0 / self.t[(row, col)];
        for j in 0..cols {
            self.t[(row, j)] *= inv;
        }
        self.t[(row, col)] = 1.0;
        for i in 0..=self.m {
            if i == row {
                continue;
            }
            let factor = self.t[(i, col)];
            if factor == 0.0 {
                continue;
            }
            for j in 0..cols {
                let delta = factor * self.t[(row, j)];
                self.t[(i, j)] -= delta;
            }
            self.t[(i, col)] = 0.0;
        }
        self.basis[row] = col;
    }

    fn run_phase1(&mut self) -> Result<()> {
        self.optimise(true)?;
        if self.objective() > PHASE1_TOL {
            // unreachable for a full-row-rank reduction, kept as a guard
            return Err(Error::SolverStalled {
                iterations: self.iterations,
            });
        }
        // drive out any artificial variable still basic at level zero
        for i in 0..self.m {
            if self.basis[i] < 2 * self.n {
                continue;
            }
            let pivot_col = (0..2 * self.n).find(|&j| self.t[(i, j)].abs() > PIVOT_TOL);
            if let Some(j) = pivot_col {
                self.pivot(i, j);
            }
        }
        Ok(())
    }

    fn run_phase2(&mut self) -> Result<()> {
        // rebuild the cost row for c = 1 on every structural column
        let cols = self.rhs_col() + 1;
        for j in 0..cols {
            self.t[(self.m, j)] = if j < 2 * self.n { 1.0 } else { 0.0 };
        }
        for i in 0..self.m {
            if self.basis[i] >= 2 * self.n {
                continue; // a leftover artificial basic has cost zero
            }
            let factor = 1.0;
            for j in 0..cols {
                let delta = factor * self.t[(i, j)];
                self.t[(self.m, j)] -= delta;
            }
        }
        for i in 0..self.m {
            self.t[(self.m, self.basis[i])] = 0.0;
        }
        self.optimise(false)
    }

    fn solution(&self) -> LpSolution {
        let rhs = self.rhs_col();
        let mut split = vec![0.0f64; 2 * self.n];
        for i in 0..self.m {
            if self.basis[i] < 2 * self.n {
                split[self.basis[i]] = self.t[(i, rhs)];
            }
        }
        let x: Vec<f64> = (0..self.n).map(|j| split[j] - split[self.n + j]).collect();
        LpSolution {
            objective: x.iter().map(|v| v.abs()).sum(),
            x,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn residual(a: &DMatrix<f64>, x: &[f64], b: &DVector<f64>) -> f64 {
        (a * DVector::from_column_slice(x) - b).amax()
    }

    #[test]
    fn single_variable_both_signs() {
        let a = DMatrix::from_row_slice(1, 1, &[1.0]);
        for target in [3.0, -2.0] {
            let b = DVector::from_column_slice(&[target]);
            let sol = solve_l1_min(&a, &b).unwrap();
            assert_abs_diff_eq!(sol.x[0], target, epsilon = 1e-12);
            assert_abs_diff_eq!(sol.objective, target.abs(), epsilon = 1e-12);
        }
    }

    #[test]
    fn prefers_the_sparse_representation() {
        // x₃ = 1 satisfies both rows at cost 1; x₁ = x₂ = 1 would cost 2
        let a = DMatrix::from_row_slice(2, 3, &[1.0, 0.0, 1.0, 0.0, 1.0, 1.0]);
        let b = DVector::from_column_slice(&[1.0, 1.0]);
        let sol = solve_l1_min(&a, &b).unwrap();
        assert_abs_diff_eq!(sol.objective, 1.0, epsilon = 1e-10);
        assert!(residual(&a, &sol.x, &b) < 1e-10);
    }

    #[test]
    fn mixed_signs_and_degenerate_optimum() {
        let a = DMatrix::from_row_slice(1, 2, &[1.0, 1.0]);
        let b = DVector::from_column_slice(&[1.0]);
        let sol = solve_l1_min(&a, &b).unwrap();
        assert_abs_diff_eq!(sol.objective, 1.0, epsilon = 1e-12);
        assert!(residual(&a, &sol.x, &b) < 1e-12);

        let a = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, -1.0]);
        let b = DVector::from_column_slice(&[0.0, 4.0]);
        let sol = solve_l1_min(&a, &b).unwrap();
        assert_abs_diff_eq!(sol.x[0], 2.0, epsilon = 1e-10);
        assert_abs_diff_eq!(sol.x[1], -2.0, epsilon = 1e-10);
        assert_abs_diff_eq!(sol.objective, 4.0, epsilon = 1e-10);
    }

    #[test]
    fn duplicate_rows_are_reduced_away() {
        let base = DMatrix::from_row_slice(1, 2, &[2.0, 1.0]);
        let mut stacked = DMatrix::zeros(5, 2);
        for r in 0..5 {
            stacked.set_row(r, &base.row(0));
        }
        let b = DVector::from_element(5, 3.0);
        let sol = solve_l1_min(&stacked, &b).unwrap();
        assert!(residual(&stacked, &sol.x, &b) < 1e-10);
        // cheapest point on 2x + y = 3 is x = 1.5
        assert_abs_diff_eq!(sol.objective, 1.5, epsilon = 1e-10);
    }

    #[test]
    fn inconsistent_rows_leave_a_visible_residual() {
        let a = DMatrix::from_row_slice(2, 1, &[1.0, 1.0]);
        let b = DVector::from_column_slice(&[1.0, 2.0]);
        let sol = solve_l1_min(&a, &b).unwrap();
        // the reduction keeps one row; the other is off by a full unit
        assert!(residual(&a, &sol.x, &b) > 0.9);
    }

    #[test]
    fn zero_matrix_returns_zero() {
        let a = DMatrix::zeros(3, 4);
        let b = DVector::zeros(3);
        let sol = solve_l1_min(&a, &b).unwrap();
        assert_eq!(sol.x, vec![0.0; 4]);
        assert_eq!(sol.objective, 0.0);
    }

    #[test]
    fn independent_rows_of_rank_deficient_matrix() {
        // row₂ = 2·row₀, row₃ = row₀ + row₁
        let a = DMatrix::from_row_slice(
            4,
            3,
            &[1.0, 0.0, 2.0, 0.0, 1.0, 1.0, 2.0, 0.0, 4.0, 1.0, 1.0, 3.0],
        );
        let rows = independent_rows(&a);
        assert_eq!(rows.len(), 2);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn never_beats_a_known_feasible_point(seed in 0u64..10_000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = rng.random_range(1..5usize);
            let n = m + rng.random_range(1..6usize);
            let a = DMatrix::from_fn(m, n, |_, _| rng.random_range(-2.0..2.0));
            let x0: Vec<f64> = (0..n).map(|_| rng.random_range(-1.5..1.5)).collect();
            let b = &a * DVector::from_column_slice(&x0);
            let sol = solve_l1_min(&a, &b).unwrap();
            let feasible_cost: f64 = x0.iter().map(|v| v.abs()).sum();
            prop_assert!(residual(&a, &sol.x, &b) < 1e-8);
            prop_assert!(sol.objective <= feasible_cost + 1e-8);
        }
    }
}
