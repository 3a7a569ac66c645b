//! A small dense simplex solver in dictionary form.
//!
//! Solves `maximize c . x  subject to  A x <= b, x >= 0`. Only the
//! non-basic columns are stored, so a problem with many constraints and few
//! structural variables (the shape of every margin LP in this crate) costs
//! `O(m * n)` per pivot. Infeasible starting dictionaries go through the
//! auxiliary-variable phase one. Pivoting follows Dantzig's rule and falls
//! back to Bland's rule after a run of degenerate pivots.

use alloc::vec::Vec;

use crate::{Error, Result};

const PIVOT_TOL: f64 = 1e-11;
const DEGENERATE_RUN: usize = 50;

#[derive(Debug, Clone, PartialEq)]
pub struct StandardLp {
    pub objective: Vec<f64>,
    pub rows: Vec<Vec<f64>>,
    pub rhs: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Optimal,
    Unbounded,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StandardSolution {
    pub status: Status,
    /// Primal values; meaningful only when optimal.
    pub x: Vec<f64>,
    pub value: f64,
}

/// `x_basic[i] = rhs[i] + sum_j coef[i][j] * x_nonbasic[j]`,
/// `z = z0 + sum_j obj[j] * x_nonbasic[j]`.
struct Dictionary {
    cols: usize,
    coef: Vec<f64>,
    rhs: Vec<f64>,
    obj: Vec<f64>,
    z0: f64,
    basic: Vec<usize>,
    nonbasic: Vec<usize>,
    pivots: usize,
    limit: usize,
}

enum Outcome {
    Optimal,
    Unbounded,
}

impl Dictionary {
    fn row(&self, i: usize) -> &[f64] {
        &self.coef[i * self.cols..(i + 1) * self.cols]
    }

    fn pivot(&mut self, r: usize, s: usize) {
        let cols = self.cols;
        let a = self.coef[r * cols + s];
        // Solve row r for the entering variable.
        let inv = 1.0 / a;
        self.rhs[r] = -self.rhs[r] * inv;
        for j in 0..cols {
            self.coef[r * cols + j] = if j == s { inv } else { -self.coef[r * cols + j] * inv };
        }
        let (pivot_row, pivot_rhs) = (self.row(r).to_vec(), self.rhs[r]);
        for i in 0..self.rhs.len() {
            if i == r {
                continue;
            }
            let c = self.coef[i * cols + s];
            if c == 0.0 {
                continue;
            }
            self.rhs[i] += c * pivot_rhs;
            let row = &mut self.coef[i * cols..(i + 1) * cols];
            for (j, x) in row.iter_mut().enumerate() {
                if j == s {
                    *x = c * pivot_row[s];
                } else {
                    *x += c * pivot_row[j];
                }
            }
        }
        let c = self.obj[s];
        if c != 0.0 {
            self.z0 += c * pivot_rhs;
            for j in 0..cols {
                self.obj[j] = if j == s { c * pivot_row[s] } else { self.obj[j] + c * pivot_row[j] };
            }
        }
        core::mem::swap(&mut self.basic[r], &mut self.nonbasic[s]);
        self.pivots += 1;
    }

    fn entering(&self, bland: bool) -> Option<usize> {
        let candidates = (0..self.cols).filter(|&j| self.obj[j] > PIVOT_TOL);
        if bland {
            candidates.min_by_key(|&j| self.nonbasic[j])
        } else {
            candidates.max_by(|&a, &b| self.obj[a].total_cmp(&self.obj[b]))
        }
    }

    fn leaving(&self, s: usize) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for i in 0..self.rhs.len() {
            let a = self.coef[i * self.cols + s];
            if a >= -PIVOT_TOL {
                continue;
            }
            let ratio = self.rhs[i].max(0.0) / -a;
            best = match best {
                None => Some((i, ratio)),
                Some((_, r)) if ratio < r - PIVOT_TOL => Some((i, ratio)),
                Some((k, r)) if ratio <= r + PIVOT_TOL && self.basic[i] < self.basic[k] => {
                    Some((i, ratio.min(r)))
                }
                keep => keep,
            };
        }
        best.map(|(i, _)| i)
    }

    fn optimize(&mut self) -> Result<Outcome> {
        let mut degenerate = 0;
        loop {
            if self.pivots > self.limit {
                return Err(Error::LpIterationLimit(self.limit));
            }
            let Some(s) = self.entering(degenerate >= DEGENERATE_RUN) else {
                return Ok(Outcome::Optimal);
            };
            let Some(r) = self.leaving(s) else {
                return Ok(Outcome::Unbounded);
            };
            if self.rhs[r] <= PIVOT_TOL {
                degenerate += 1;
            } else {
                degenerate = 0;
            }
            self.pivot(r, s);
        }
    }

    fn drop_column(&mut self, s: usize) {
        let cols = self.cols;
        let mut coef = Vec::with_capacity(self.rhs.len() * (cols - 1));
        for i in 0..self.rhs.len() {
            let row = &self.coef[i * cols..(i + 1) * cols];
            coef.extend(row.iter().enumerate().filter(|(j, _)| *j != s).map(|(_, x)| *x));
        }
        self.coef = coef;
        self.obj.remove(s);
        self.nonbasic.remove(s);
        self.cols -= 1;
    }
}

pub fn maximize(lp: &StandardLp) -> Result<StandardSolution> {
    let n = lp.objective.len();
    let m = lp.rows.len();
    if lp.rhs.len() != m || lp.rows.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidParameter("LP rows and right-hand side disagree in shape"));
    }
    let needs_phase_one = lp.rhs.iter().any(|&b| b < 0.0);
    let cols = n + usize::from(needs_phase_one);
    let mut coef = Vec::with_capacity(m * cols);
    for row in &lp.rows {
        coef.extend(row.iter().map(|a| -a));
        if needs_phase_one {
            coef.push(1.0);
        }
    }
    let aux = n + m;
    let mut dict = Dictionary {
        cols,
        coef,
        rhs: lp.rhs.clone(),
        obj: alloc::vec![0.0; cols],
        z0: 0.0,
        basic: (n..n + m).collect(),
        nonbasic: (0..n).chain(needs_phase_one.then_some(aux)).collect(),
        pivots: 0,
        limit: 10_000 + 50 * (m + n),
    };

    if needs_phase_one {
        dict.obj[n] = -1.0;
        let r = (0..m)
            .min_by(|&a, &b| dict.rhs[a].total_cmp(&dict.rhs[b]))
            .expect("negative rhs implies at least one row");
        dict.pivot(r, n);
        dict.optimize()?;
        if dict.z0 < -1e-9 {
            return Ok(StandardSolution { status: Status::Infeasible, x: Vec::new(), value: f64::NAN });
        }
        if let Some(r) = dict.basic.iter().position(|&v| v == aux) {
            let s = (0..dict.cols)
                .max_by(|&a, &b| dict.row(r)[a].abs().total_cmp(&dict.row(r)[b].abs()))
                .expect("dictionary has columns");
            dict.pivot(r, s);
        }
        let s = dict.nonbasic.iter().position(|&v| v == aux).expect("auxiliary is non-basic");
        dict.drop_column(s);
        // Re-express the real objective over the current non-basic variables.
        dict.obj.iter_mut().for_each(|c| *c = 0.0);
        dict.z0 = 0.0;
        for (k, &c) in lp.objective.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            if let Some(j) = dict.nonbasic.iter().position(|&v| v == k) {
                dict.obj[j] += c;
            } else if let Some(i) = dict.basic.iter().position(|&v| v == k) {
                dict.z0 += c * dict.rhs[i];
                for j in 0..dict.cols {
                    dict.obj[j] += c * dict.coef[i * dict.cols + j];
                }
            }
        }
    } else {
        dict.obj.copy_from_slice(&lp.objective);
    }

    match dict.optimize()? {
        Outcome::Unbounded => Ok(StandardSolution {
            status: Status::Unbounded,
            x: Vec::new(),
            value: f64::INFINITY,
        }),
        Outcome::Optimal => {
            let mut x = alloc::vec![0.0; n];
            for (i, &v) in dict.basic.iter().enumerate() {
                if v < n {
                    x[v] = dict.rhs[i].max(0.0);
                }
            }
            Ok(StandardSolution { status: Status::Optimal, x, value: dict.z0 })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn lp(objective: Vec<f64>, rows: Vec<Vec<f64>>, rhs: Vec<f64>) -> StandardLp {
        StandardLp { objective, rows, rhs }
    }

    #[test]
    fn textbook_problem() {
        // max 5x + 4y + 3z; 2x+3y+z<=5, 4x+y+2z<=11, 3x+4y+2z<=8 -> 13 at (2,0,1)
        let sol = maximize(&lp(
            vec![5.0, 4.0, 3.0],
            vec![vec![2.0, 3.0, 1.0], vec![4.0, 1.0, 2.0], vec![3.0, 4.0, 2.0]],
            vec![5.0, 11.0, 8.0],
        ))
        .unwrap();
        assert_eq!(sol.status, Status::Optimal);
        assert!((sol.value - 13.0).abs() < 1e-9);
        assert!((sol.x[0] - 2.0).abs() < 1e-9 && sol.x[1].abs() < 1e-9 && (sol.x[2] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn phase_one_problem() {
        // max x - y; -2x + y <= -1 (2x - y >= 1), x + y <= 3 -> optimum at (3, 0)
        let sol = maximize(&lp(vec![1.0, -1.0], vec![vec![-2.0, 1.0], vec![1.0, 1.0]], vec![-1.0, 3.0])).unwrap();
        assert_eq!(sol.status, Status::Optimal);
        assert!((sol.value - 3.0).abs() < 1e-9);
    }

    #[test]
    fn infeasible_and_unbounded() {
        let inf = maximize(&lp(vec![1.0], vec![vec![1.0], vec![-1.0]], vec![1.0, -2.0])).unwrap();
        assert_eq!(inf.status, Status::Infeasible);
        let unb = maximize(&lp(vec![1.0, 0.0], vec![vec![-1.0, 1.0]], vec![1.0])).unwrap();
        assert_eq!(unb.status, Status::Unbounded);
    }

    #[test]
    fn degenerate_problem_terminates() {
        // Beale's cycling example under the textbook rule.
        let sol = maximize(&lp(
            vec![0.75, -20.0, 0.5, -6.0],
            vec![
                vec![0.25, -8.0, -1.0, 9.0],
                vec![0.5, -12.0, -0.5, 3.0],
                vec![0.0, 0.0, 1.0, 0.0],
            ],
            vec![0.0, 0.0, 1.0],
        ))
        .unwrap();
        assert_eq!(sol.status, Status::Optimal);
        assert!((sol.value - 1.25).abs() < 1e-9);
    }

    #[test]
    fn shape_mismatch_is_error() {
        assert!(maximize(&lp(vec![1.0], vec![vec![1.0, 2.0]], vec![1.0])).is_err());
    }
}
