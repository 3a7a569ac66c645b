//! The margin LP behind potential optimality.
//!
//! For a candidate `t` and competitors `s_1..s_k`, find weights `w` in the
//! constrained simplex maximizing the margin `eps` such that every competitor
//! scores at least `eps` worse than `t`: `(s_k - t) . w >= eps`. A strictly
//! positive optimum means `t` is the unique top-1 tuple for some admissible `w`.

use alloc::vec::Vec;

use crate::model::{check_dim, Tuple, WeightConstraintSet};
use crate::simplex::{self, StandardLp, Status};
use crate::{Result, WeightVector};

#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    dim: usize,
    /// One row per competitor: `s - t`.
    margins: Vec<Vec<f64>>,
    constraints: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpSolution {
    Optimal { weights: WeightVector, eps: f64 },
    Unbounded,
    Infeasible,
}

impl LpSolution {
    /// The optimal margin, `+inf` when unbounded and `-inf` when infeasible.
    pub fn eps(&self) -> f64 {
        match self {
            LpSolution::Optimal { eps, .. } => *eps,
            LpSolution::Unbounded => f64::INFINITY,
            LpSolution::Infeasible => f64::NEG_INFINITY,
        }
    }
}

impl LpProblem {
    pub fn new<'a, I>(t: &Tuple, competitors: I, c: &WeightConstraintSet) -> Result<Self>
    where
        I: IntoIterator<Item = &'a Tuple>,
    {
        check_dim(c.dim(), t.dim())?;
        let mut margins = Vec::new();
        for s in competitors {
            check_dim(t.dim(), s.dim())?;
            margins.push(s.values().iter().zip(t.values()).map(|(a, b)| a - b).collect());
        }
        Ok(Self { dim: t.dim(), margins, constraints: c.rows().to_vec() })
    }

    pub fn competitors(&self) -> usize {
        self.margins.len()
    }

    /// Standard form after eliminating `w_d = 1 - sum_{i<d} w_i` and splitting
    /// the free margin into `eps+ - eps-`. Variables: `w_1..w_{d-1}, eps+, eps-`.
    fn standard_form(&self) -> StandardLp {
        let d = self.dim;
        let n = d + 1;
        let mut rows = Vec::with_capacity(1 + self.constraints.len() + self.margins.len());
        let mut rhs = Vec::with_capacity(rows.capacity());

        // w_d >= 0
        let mut simplex_row = alloc::vec![1.0; d - 1];
        simplex_row.extend([0.0, 0.0]);
        rows.push(simplex_row);
        rhs.push(1.0);

        // a . w >= 0  ->  -sum (a_i - a_d) w_i <= a_d
        for a in &self.constraints {
            let mut row: Vec<f64> = (0..d - 1).map(|i| a[d - 1] - a[i]).collect();
            row.extend([0.0, 0.0]);
            rows.push(row);
            rhs.push(a[d - 1]);
        }
        // g . w - eps >= 0  ->  -sum (g_i - g_d) w_i + eps+ - eps- <= g_d
        for g in &self.margins {
            let mut row: Vec<f64> = (0..d - 1).map(|i| g[d - 1] - g[i]).collect();
            row.extend([1.0, -1.0]);
            rows.push(row);
            rhs.push(g[d - 1]);
        }
        let mut objective = alloc::vec![0.0; n];
        objective[d - 1] = 1.0;
        objective[d] = -1.0;
        StandardLp { objective, rows, rhs }
    }
}

pub fn lp_solve(p: &LpProblem) -> Result<LpSolution> {
    let d = p.dim;
    let sol = simplex::maximize(&p.standard_form())?;
    Ok(match sol.status {
        Status::Unbounded => LpSolution::Unbounded,
        Status::Infeasible => LpSolution::Infeasible,
        Status::Optimal => {
            let mut w: Vec<f64> = sol.x[..d - 1].to_vec();
            let last = 1.0 - w.iter().sum::<f64>();
            w.push(last.max(0.0));
            let total: f64 = w.iter().sum();
            w.iter_mut().for_each(|x| *x /= total);
            let eps = sol.x[d - 1] - sol.x[d];
            LpSolution::Optimal { weights: WeightVector::new(w)?, eps }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg;
    use crate::model::fixtures::*;
    use crate::model::dot;
    use alloc::vec;
    use itertools::Itertools;
    use proptest::prelude::*;

    /// Independent optimum: enumerate every vertex of the (w, eps) feasible
    /// region by solving each choice of `d` active inequalities together with
    /// `sum(w) = 1`, and take the best feasible margin.
    fn vertex_oracle(t: &Tuple, comps: &[Tuple], c: &WeightConstraintSet) -> f64 {
        let d = t.dim();
        let n = d + 1;
        // rows over (w, eps) meaning row . x >= 0
        let mut ineqs: Vec<Vec<f64>> = Vec::new();
        for i in 0..d {
            let mut r = vec![0.0; n];
            r[i] = 1.0;
            ineqs.push(r);
        }
        for a in c.rows() {
            let mut r = a.clone();
            r.push(0.0);
            ineqs.push(r);
        }
        for s in comps {
            let mut r: Vec<f64> = s.values().iter().zip(t.values()).map(|(x, y)| x - y).collect();
            r.push(-1.0);
            ineqs.push(r);
        }
        let mut best = f64::NEG_INFINITY;
        for active in (0..ineqs.len()).combinations(d) {
            let mut a = Vec::new();
            for &k in &active {
                a.extend_from_slice(&ineqs[k]);
            }
            let mut eq = vec![1.0; d];
            eq.push(0.0);
            a.extend(eq);
            let mut b = vec![0.0; n];
            b[d] = 1.0;
            if let Some(x) = linalg::solve(a, b, n) {
                if ineqs.iter().all(|g| dot(g, &x) >= -1e-9) {
                    best = best.max(x[d]);
                }
            }
        }
        best
    }

    #[test]
    fn identical_competitor_has_zero_margin() {
        let a = tuple(0, &[0.3, 0.8]);
        let twin = tuple(1, &[0.3, 0.8]);
        let p = LpProblem::new(&a, [&twin], &w1_over_w2()).unwrap();
        assert!(lp_solve(&p).unwrap().eps().abs() < 1e-12);
    }

    #[test]
    fn a_beats_e_with_margin() {
        let r = locations();
        let t = r.tuples();
        let p = LpProblem::new(&t[A as usize], [&t[E as usize]], &w1_over_w2()).unwrap();
        match lp_solve(&p).unwrap() {
            LpSolution::Optimal { weights, eps } => {
                assert!((eps - 0.30).abs() < 1e-9);
                assert!((weights.as_slice()[0] - 1.0).abs() < 1e-9);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn b_never_wins() {
        let r = locations();
        let t = r.tuples();
        let p = LpProblem::new(&t[B as usize], [&t[A as usize], &t[E as usize]], &w1_over_w2()).unwrap();
        let sol = lp_solve(&p).unwrap();
        assert!(sol.eps() <= 0.0, "{sol:?}");
        // best compromise at w = (2/3, 1/3), where both margins equal -0.05
        assert!((sol.eps() - -0.05).abs() < 1e-9);
    }

    #[test]
    fn no_competitors_is_unbounded() {
        let a = tuple(0, &[0.3, 0.8]);
        let p = LpProblem::new(&a, [], &w1_over_w2()).unwrap();
        assert_eq!(lp_solve(&p).unwrap(), LpSolution::Unbounded);
    }

    fn instance() -> impl Strategy<Value = (usize, Vec<Vec<f64>>, Vec<Vec<f64>>)> {
        (2usize..=4).prop_flat_map(|d| {
            (
                Just(d),
                prop::collection::vec(prop::collection::vec(0.0f64..1.0, d), 2..7),
                prop::collection::vec(prop::collection::vec(-1.0f64..1.0, d), 0..3),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn matches_vertex_enumeration((d, pts, rows) in instance()) {
            let Ok(c) = WeightConstraintSet::new(d, rows) else { return Ok(()); };
            let t = Tuple::new(0, pts[0].clone()).unwrap();
            let comps: Vec<Tuple> = pts[1..].iter().enumerate().map(|(i, v)| Tuple::new(i as u64 + 1, v.clone()).unwrap()).collect();
            let sol = lp_solve(&LpProblem::new(&t, &comps, &c).unwrap()).unwrap();
            let expected = vertex_oracle(&t, &comps, &c);
            prop_assert!((sol.eps() - expected).abs() < 1e-7, "simplex {} vs oracle {}", sol.eps(), expected);
            if let LpSolution::Optimal { weights, eps } = &sol {
                prop_assert!(c.admits(weights.as_slice(), 1e-7));
                for s in &comps {
                    let m = dot(weights.as_slice(), s.values()) - dot(weights.as_slice(), t.values());
                    prop_assert!(m >= eps - 1e-7);
                }
            }
        }
    }
}
