//! A minimal dense two-phase simplex solver for the tiny linear programs the
//! degradedness checks produce (a few dozen variables and constraints).
//!
//! Solves `min c·x  s.t.  A x = b, x ≥ 0` with Bland's anti-cycling rule.
//! Callers are expected to bring their own slack variables.

use crate::{Error, Result};

const PIVOT_TOL: f64 = 1e-11;
const COST_TOL: f64 = 1e-10;

pub(crate) struct LpSolution {
    pub objective: f64,
    pub x: Vec<f64>,
}

struct Tableau {
    /// m rows of n coefficients followed by the right-hand side.
    rows: Vec<Vec<f64>>,
    /// Reduced-cost row followed by the negated objective value.
    cost: Vec<f64>,
    basis: Vec<usize>,
    n: usize,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let piv = self.rows[row][col];
        for v in self.rows[row].iter_mut() {
            *v /= piv;
        }
        let pivot_row = self.rows[row].clone();
        for (r, other) in self.rows.iter_mut().enumerate() {
            if r == row {
                continue;
            }
            let factor = other[col];
            if factor != 0.0 {
                for (v, &p) in other.iter_mut().zip(&pivot_row) {
                    *v -= factor * p;
                }
            }
        }
        let factor = self.cost[col];
        if factor != 0.0 {
            for (v, &p) in self.cost.iter_mut().zip(&pivot_row) {
                *v -= factor * p;
            }
        }
        self.basis[row] = col;
    }

    /// Runs simplex iterations until optimal. Bland's rule: entering variable
    /// is the lowest-index negative reduced cost; leaving row breaks ratio
    /// ties by lowest basis index.
    fn optimize(&mut self) -> Result<()> {
        loop {
            let Some(col) = (0..self.n).find(|&j| self.cost[j] < -COST_TOL) else {
                return Ok(());
            };
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.rows.len() {
                let a = self.rows[r][col];
                if a > PIVOT_TOL {
                    let ratio = self.rows[r][self.n] / a;
                    let better = match leave {
                        None => true,
                        Some((lr, lratio)) => {
                            ratio < lratio - PIVOT_TOL
                                || (ratio <= lratio + PIVOT_TOL
                                    && self.basis[r] < self.basis[lr])
                        }
                    };
                    if better {
                        leave = Some((r, ratio));
                    }
                }
            }
            let Some((row, _)) = leave else {
                return Err(Error::Internal("unbounded linear program".into()));
            };
            self.pivot(row, col);
        }
    }
}

/// Minimizes `c·x` over `{A x = b, x ≥ 0}`. `a` is row-major with `b.len()`
/// rows. Returns an error if the program is infeasible or unbounded.
pub(crate) fn solve_min(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> Result<LpSolution> {
    let m = b.len();
    let n = c.len();
    assert!(a.len() == m && a.iter().all(|r| r.len() == n));

    // Phase 1: artificial basis, minimize the artificial mass.
    let mut rows = Vec::with_capacity(m);
    for (i, row) in a.iter().enumerate() {
        let flip = b[i] < 0.0;
        let mut r: Vec<f64> = row.iter().map(|&v| if flip { -v } else { v }).collect();
        r.resize(n + m + 1, 0.0);
        r[n + i] = 1.0;
        r[n + m] = if flip { -b[i] } else { b[i] };
        rows.push(r);
    }
    let mut cost = vec![0.0; n + m + 1];
    for j in 0..n + m + 1 {
        let direct = if (n..n + m).contains(&j) { 1.0 } else { 0.0 };
        let through_basis: f64 = rows.iter().map(|r| r[j]).sum();
        cost[j] = direct - through_basis;
    }
    let mut t = Tableau {
        rows,
        cost,
        basis: (n..n + m).collect(),
        n: n + m,
    };
    t.optimize()?;
    let phase1 = -t.cost[t.n];
    if phase1 > 1e-8 {
        return Err(Error::Internal(format!(
            "infeasible linear program (artificial mass {phase1:.3e})"
        )));
    }

    // Drive any leftover zero-level artificials out of the basis.
    for r in 0..m {
        if t.basis[r] >= n {
            if let Some(col) = (0..n).find(|&j| t.rows[r][j].abs() > PIVOT_TOL) {
                t.pivot(r, col);
            }
            // A fully-zero structural row is redundant; the artificial stays
            // basic at level zero and never re-enters the objective.
        }
    }

    // Phase 2: real objective expressed over the current basis.
    let mut cost = vec![0.0; t.n + 1];
    for j in 0..t.n + 1 {
        let direct = if j < n { c[j] } else { 0.0 };
        let through_basis: f64 = t
            .rows
            .iter()
            .enumerate()
            .map(|(r, row)| {
                let bi = t.basis[r];
                if bi < n {
                    c[bi] * row[j]
                } else {
                    0.0
                }
            })
            .sum();
        cost[j] = direct - through_basis;
    }
    // Forbid artificials from re-entering.
    for j in n..t.n {
        if cost[j] < 0.0 {
            cost[j] = 0.0;
        }
    }
    t.cost = cost;
    t.optimize()?;

    let mut x = vec![0.0; n];
    for (r, &bi) in t.basis.iter().enumerate() {
        if bi < n {
            x[bi] = t.rows[r][t.n];
        }
    }
    let objective: f64 = c.iter().zip(&x).map(|(ci, xi)| ci * xi).sum();
    Ok(LpSolution { objective, x })
}
