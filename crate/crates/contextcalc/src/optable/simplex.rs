//! Dense two-phase simplex with Bland's rule for small equality-form LPs:
//! minimize `c.x` subject to `A x = b`, `x >= 0`.
//!
//! The tables this crate solves have at most a few hundred columns, so a
//! full-tableau method with strict anti-cycling is the right trade.

/// Pivot / reduced-cost tolerance.
const PIVOT_TOL: f64 = 1e-9;
/// Phase-1 feasibility slack.
const FEAS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    pub x: Vec<f64>,
    pub objective: f64,
    /// Max-abs constraint violation of `x` against the original system.
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub constraints: Vec<Vec<f64>>,
    pub rhs: Vec<f64>,
}

impl LinearProgram {
    pub fn solve(&self) -> LpSolution {
        let first = self.solve_inner(false);
        if first.status == LpStatus::IterationLimit {
            // Restart once with reversed variable scan order.
            let second = self.solve_inner(true);
            if second.status != LpStatus::IterationLimit {
                return second;
            }
        }
        first
    }

    fn residual_of(&self, x: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for (row, b) in self.constraints.iter().zip(self.rhs.iter()) {
            let lhs: f64 = row.iter().zip(x.iter()).map(|(a, v)| a * v).sum();
            worst = worst.max((lhs - b).abs());
        }
        worst
    }

    fn solve_inner(&self, reversed: bool) -> LpSolution {
        let m = self.constraints.len();
        let n = self.objective.len();
        let n_total = n + m;

        // Tableau with artificial columns appended; rows flipped so rhs >= 0.
        let mut tab = vec![vec![0.0_f64; n_total]; m];
        let mut rhs = vec![0.0_f64; m];
        for r in 0..m {
            let flip = if self.rhs[r] < 0.0 { -1.0 } else { 1.0 };
            for (t, c) in tab[r].iter_mut().zip(self.constraints[r].iter()) {
                *t = flip * c;
            }
            rhs[r] = flip * self.rhs[r];
            tab[r][n + r] = 1.0;
        }
        let mut basis: Vec<usize> = (n..n_total).collect();

        let scan: Vec<usize> = if reversed {
            (0..n).rev().collect()
        } else {
            (0..n).collect()
        };

        let max_iters = 2000 + 200 * (n_total + m);

        // Phase 1: minimize the artificial sum.
        let phase1_cost: Vec<f64> = (0..n_total).map(|j| if j >= n { 1.0 } else { 0.0 }).collect();
        let status1 = simplex_iterate(
            &mut tab,
            &mut rhs,
            &mut basis,
            &phase1_cost,
            &scan,
            n, // artificials may leave but not enter
            max_iters,
        );
        if status1 == LpStatus::IterationLimit {
            return LpSolution {
                status: LpStatus::IterationLimit,
                x: vec![0.0; n],
                objective: f64::NAN,
                residual: f64::NAN,
            };
        }
        let art_sum: f64 = basis
            .iter()
            .zip(rhs.iter())
            .filter(|(b, _)| **b >= n)
            .map(|(_, v)| v)
            .sum();
        if art_sum > FEAS_TOL {
            return LpSolution {
                status: LpStatus::Infeasible,
                x: vec![0.0; n],
                objective: f64::NAN,
                residual: f64::NAN,
            };
        }
        // Drive lingering artificials out of the basis where a pivot exists.
        for r in 0..m {
            if basis[r] >= n {
                if let Some(&j) = scan.iter().find(|&&j| tab[r][j].abs() > PIVOT_TOL) {
                    pivot(&mut tab, &mut rhs, &mut basis, r, j);
                }
            }
        }

        // Phase 2 on the real objective; artificial columns stay blocked.
        let mut cost = vec![0.0_f64; n_total];
        cost[..n].copy_from_slice(&self.objective);
        let status2 = simplex_iterate(&mut tab, &mut rhs, &mut basis, &cost, &scan, n, max_iters);
        if status2 != LpStatus::Optimal {
            return LpSolution {
                status: status2,
                x: vec![0.0; n],
                objective: f64::NAN,
                residual: f64::NAN,
            };
        }

        let mut x = vec![0.0_f64; n];
        for (r, &b) in basis.iter().enumerate() {
            if b < n {
                x[b] = rhs[r];
            }
        }
        let objective: f64 = self
            .objective
            .iter()
            .zip(x.iter())
            .map(|(c, v)| c * v)
            .sum();
        LpSolution {
            status: LpStatus::Optimal,
            x: x.clone(),
            objective,
            residual: self.residual_of(&x),
        }
    }
}

fn pivot(tab: &mut [Vec<f64>], rhs: &mut [f64], basis: &mut [usize], r: usize, c: usize) {
    let piv = tab[r][c];
    for v in tab[r].iter_mut() {
        *v /= piv;
    }
    rhs[r] /= piv;
    let pivot_row = tab[r].clone();
    let pivot_rhs = rhs[r];
    for (i, row) in tab.iter_mut().enumerate() {
        if i == r {
            continue;
        }
        let factor = row[c];
        if factor == 0.0 {
            continue;
        }
        for (v, p) in row.iter_mut().zip(pivot_row.iter()) {
            *v -= factor * p;
        }
        row[c] = 0.0;
        rhs[i] -= factor * pivot_rhs;
    }
    basis[r] = c;
}

/// Runs Bland-rule simplex until optimal, unbounded, or the iteration cap.
/// Columns `>= block_from` may leave the basis but never enter.
fn simplex_iterate(
    tab: &mut [Vec<f64>],
    rhs: &mut [f64],
    basis: &mut [usize],
    cost: &[f64],
    scan: &[usize],
    block_from: usize,
    max_iters: usize,
) -> LpStatus {
    let m = tab.len();
    for _ in 0..max_iters {
        // Reduced costs relative to the current basis.
        let entering = scan
            .iter()
            .copied()
            .filter(|&j| j < block_from && !basis.contains(&j))
            .find(|&j| {
                let zj: f64 = (0..m).map(|r| cost[basis[r]] * tab[r][j]).sum();
                cost[j] - zj < -PIVOT_TOL
            });
        let Some(col) = entering else {
            return LpStatus::Optimal;
        };
        // Ratio test, Bland tie-break on the smallest basis label.
        let mut best: Option<(f64, usize)> = None;
        for r in 0..m {
            if tab[r][col] > PIVOT_TOL {
                let ratio = rhs[r] / tab[r][col];
                match best {
                    None => best = Some((ratio, r)),
                    Some((br, brow)) => {
                        if ratio < br - 1e-12
                            || ((ratio - br).abs() <= 1e-12 && basis[r] < basis[brow])
                        {
                            best = Some((ratio, r));
                        }
                    }
                }
            }
        }
        let Some((_, row)) = best else {
            return LpStatus::Unbounded;
        };
        pivot(tab, rhs, basis, row, col);
    }
    LpStatus::IterationLimit
}
