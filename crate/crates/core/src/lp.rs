//! Dense two-phase simplex for small problems in equality form
//! `min c·x  s.t.  A x = b, x ≥ 0`.
//!
//! Bland's rule keeps degenerate problems (which marginal problems always
//! are) from cycling. Redundant equality rows are detected after phase one
//! and dropped.

use crate::error::{Error, Result};

/// Phase-one objective above which a system is declared infeasible.
pub const LP_TOLERANCE: f64 = 1e-9;

const PIVOT_EPS: f64 = 1e-11;
const MAX_ITERATIONS: usize = 100_000;

#[derive(Debug, Clone, PartialEq)]
pub enum LpSolution {
    Optimal {
        x: Vec<f64>,
        value: f64,
    },
    /// Smallest total constraint violation reachable with `x ≥ 0`.
    Infeasible {
        infeasibility: f64,
    },
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    basis: Vec<usize>,
    /// Number of structural columns; artificials follow.
    n: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            *v /= p;
        }
        self.rhs[r] /= p;
        let (prow, prhs) = (self.rows[r].clone(), self.rhs[r]);
        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            let f = self.rows[i][c];
            if f != 0.0 {
                for (v, pv) in self.rows[i].iter_mut().zip(&prow) {
                    *v -= f * pv;
                }
                self.rhs[i] -= f * prhs;
                if self.rhs[i] < 0.0 && self.rhs[i] > -PIVOT_EPS {
                    self.rhs[i] = 0.0;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Runs simplex iterations over the columns `0..ncols`. Returns `false`
    /// when the objective is unbounded below.
    fn optimize(&mut self, cost: &[f64], ncols: usize) -> Result<bool> {
        for _ in 0..MAX_ITERATIONS {
            let entering = (0..ncols).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let d = cost[j]
                    - self
                        .rows
                        .iter()
                        .zip(&self.basis)
                        .map(|(row, &b)| cost[b] * row[j])
                        .sum::<f64>();
                d < -PIVOT_EPS
            });
            let Some(e) = entering else {
                return Ok(true);
            };
            let mut leaving: Option<(usize, f64)> = None;
            for i in 0..self.rows.len() {
                let a = self.rows[i][e];
                if a <= PIVOT_EPS {
                    continue;
                }
                let ratio = self.rhs[i] / a;
                leaving = match leaving {
                    None => Some((i, ratio)),
                    Some((k, best)) => {
                        if ratio < best - 1e-14 || (ratio <= best + 1e-14 && self.basis[i] < self.basis[k]) {
                            Some((i, ratio))
                        } else {
                            Some((k, best))
                        }
                    }
                };
            }
            let Some((r, _)) = leaving else {
                return Ok(false);
            };
            self.pivot(r, e);
        }
        Err(Error::LinearProgram(format!(
            "no convergence after {MAX_ITERATIONS} pivots"
        )))
    }

    fn solution(&self) -> Vec<f64> {
        let mut x = vec![0.0; self.n];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.n {
                x[b] = self.rhs[i].max(0.0);
            }
        }
        x
    }
}

fn check_shape(c: Option<&[f64]>, a: &[Vec<f64>], b: &[f64]) -> Result<usize> {
    let n = a.first().map_or(0, Vec::len);
    if n == 0 || a.len() != b.len() || a.iter().any(|r| r.len() != n) {
        return Err(Error::LinearProgram("malformed constraint matrix".into()));
    }
    if c.is_some_and(|c| c.len() != n) {
        return Err(Error::LinearProgram(
            "objective length differs from column count".into(),
        ));
    }
    Ok(n)
}

/// Phase one. On success the tableau holds a feasible basis over the
/// structural columns only.
fn phase_one(a: &[Vec<f64>], b: &[f64]) -> Result<std::result::Result<Tableau, f64>> {
    let n = check_shape(None, a, b)?;
    let m = a.len();
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for (i, (row, &bi)) in a.iter().zip(b).enumerate() {
        let s = if bi < 0.0 { -1.0 } else { 1.0 };
        let mut r: Vec<f64> = row.iter().map(|v| s * v).collect();
        r.extend((0..m).map(|k| if k == i { 1.0 } else { 0.0 }));
        rows.push(r);
        rhs.push(s * bi);
    }
    let mut t = Tableau {
        rows,
        rhs,
        basis: (n..n + m).collect(),
        n,
    };
    let cost: Vec<f64> = (0..n + m).map(|j| if j < n { 0.0 } else { 1.0 }).collect();
    t.optimize(&cost, n + m)?;
    let infeasibility: f64 = t
        .basis
        .iter()
        .zip(&t.rhs)
        .filter(|(&bv, _)| bv >= n)
        .map(|(_, r)| r.abs())
        .sum();
    if infeasibility > LP_TOLERANCE {
        return Ok(Err(infeasibility));
    }
    // Pivot remaining (zero-level) artificials out, or drop their rows as
    // redundant.
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] < n {
            i += 1;
            continue;
        }
        let col = (0..n).find(|&j| !t.basis.contains(&j) && t.rows[i][j].abs() > 1e-9);
        match col {
            Some(j) => {
                t.pivot(i, j);
                i += 1;
            }
            None => {
                t.rows.remove(i);
                t.rhs.remove(i);
                t.basis.remove(i);
            }
        }
    }
    Ok(Ok(t))
}

/// Some `x ≥ 0` with `A x = b`, or the phase-one infeasibility.
pub fn feasible_point(a: &[Vec<f64>], b: &[f64]) -> Result<std::result::Result<Vec<f64>, f64>> {
    Ok(phase_one(a, b)?.map(|t| t.solution()))
}

/// Minimizes `c·x` subject to `A x = b`, `x ≥ 0`.
pub fn minimize(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> Result<LpSolution> {
    let n = check_shape(Some(c), a, b)?;
    let mut t = match phase_one(a, b)? {
        Ok(t) => t,
        Err(infeasibility) => return Ok(LpSolution::Infeasible { infeasibility }),
    };
    if !t.optimize(c, n)? {
        return Ok(LpSolution::Unbounded);
    }
    let x = t.solution();
    let value = c.iter().zip(&x).map(|(ci, xi)| ci * xi).sum();
    Ok(LpSolution::Optimal { x, value })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_optimum() {
        // min -x - y  s.t. x + 2y + s1 = 4, 3x + y + s2 = 6
        let a = vec![vec![1.0, 2.0, 1.0, 0.0], vec![3.0, 1.0, 0.0, 1.0]];
        let sol = minimize(&[-1.0, -1.0, 0.0, 0.0], &a, &[4.0, 6.0]).unwrap();
        let LpSolution::Optimal { x, value } = sol else {
            panic!("{sol:?}")
        };
        assert!((value + 2.8).abs() < 1e-12);
        assert!((x[0] - 1.6).abs() < 1e-12 && (x[1] - 1.2).abs() < 1e-12);
    }

    #[test]
    fn infeasible_and_unbounded() {
        let a = vec![vec![1.0, 1.0]];
        assert!(matches!(
            minimize(&[0.0, 0.0], &a, &[-1.0]).unwrap(),
            LpSolution::Infeasible { infeasibility } if (infeasibility - 1.0).abs() < 1e-12
        ));
        let a = vec![vec![1.0, -1.0]];
        assert_eq!(minimize(&[0.0, -1.0], &a, &[1.0]).unwrap(), LpSolution::Unbounded);
    }

    #[test]
    fn redundant_rows_are_dropped() {
        let a = vec![vec![1.0, 1.0, 0.0], vec![2.0, 2.0, 0.0], vec![0.0, 1.0, 1.0]];
        let x = feasible_point(&a, &[1.0, 2.0, 0.5]).unwrap().unwrap();
        assert!((x[0] + x[1] - 1.0).abs() < 1e-12);
        assert!((x[1] + x[2] - 0.5).abs() < 1e-12);
        assert!(x.iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn malformed_input() {
        assert!(minimize(&[1.0], &[vec![1.0, 2.0]], &[1.0]).is_err());
        assert!(feasible_point(&[], &[]).is_err());
    }
}
