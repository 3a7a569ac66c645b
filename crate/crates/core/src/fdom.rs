//! F-dominance through the vertices of the weight polytope.
//!
//! For linear scores, `f(t) <= f(s)` for every admissible weighting iff it
//! holds at every vertex of the polytope, so each test is a comparison of the
//! two tuples' vertex score vectors.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::model::{check_dim, dot, Tuple, TupleId, WeightConstraintSet};
use crate::polytope::{enumerate_vertices, sorting_weight, PolytopeVertices};
use crate::{Result, WeightVector, STRICTNESS_TOL};

#[derive(Debug, Clone, PartialEq)]
pub struct FDomContext {
    vertices: PolytopeVertices,
    sort_w: WeightVector,
}

/// Presort key: centroid score, then values, then id.
#[derive(Debug, Clone, PartialEq)]
pub struct SortKey {
    pub primary: f64,
    pub values: Vec<f64>,
    pub id: TupleId,
}

impl Eq for SortKey {}

impl Ord for SortKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.primary
            .total_cmp(&other.primary)
            .then_with(|| {
                self.values
                    .iter()
                    .zip(&other.values)
                    .map(|(a, b)| a.total_cmp(b))
                    .find(|o| o.is_ne())
                    .unwrap_or(Ordering::Equal)
            })
            .then_with(|| self.id.cmp(&other.id))
    }
}

impl PartialOrd for SortKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Vertex scores of one tuple, cached for repeated dominance tests.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    pub key: f64,
    pub scores: Vec<f64>,
}

impl FDomContext {
    pub fn new(c: &WeightConstraintSet) -> Result<Self> {
        Ok(Self::from_vertices(enumerate_vertices(c)?))
    }

    pub fn from_vertices(vertices: PolytopeVertices) -> Self {
        let sort_w = sorting_weight(&vertices);
        Self { vertices, sort_w }
    }

    pub fn dim(&self) -> usize {
        self.sort_w.dim()
    }

    pub fn vertices(&self) -> &PolytopeVertices {
        &self.vertices
    }

    pub fn sort_weight(&self) -> &WeightVector {
        &self.sort_w
    }

    pub fn f_dominates(&self, t: &Tuple, s: &Tuple) -> Result<bool> {
        check_dim(self.dim(), t.dim())?;
        check_dim(self.dim(), s.dim())?;
        Ok(self.dominates_values(t.values(), s.values()))
    }

    /// Whether the point `q` lies in the F-dominance region of `t`.
    pub fn in_dominance_region(&self, t: &Tuple, q: &[f64]) -> Result<bool> {
        check_dim(self.dim(), t.dim())?;
        check_dim(self.dim(), q.len())?;
        Ok(self.dominates_values(t.values(), q))
    }

    pub fn dominates_values(&self, t: &[f64], s: &[f64]) -> bool {
        let mut strict = false;
        for v in self.vertices.vertices() {
            let diff = dot(v.as_slice(), s) - dot(v.as_slice(), t);
            if diff < -STRICTNESS_TOL {
                return false;
            }
            strict |= diff > STRICTNESS_TOL;
        }
        strict
    }

    pub fn sort_key(&self, t: &Tuple) -> SortKey {
        SortKey {
            primary: dot(self.sort_w.as_slice(), t.values()),
            values: t.values().to_vec(),
            id: t.id(),
        }
    }

    pub fn profile(&self, t: &Tuple) -> Profile {
        Profile {
            key: dot(self.sort_w.as_slice(), t.values()),
            scores: self
                .vertices
                .vertices()
                .iter()
                .map(|v| dot(v.as_slice(), t.values()))
                .collect(),
        }
    }

    /// Indices of `tuples` in ascending presort order.
    pub fn presort(&self, tuples: &[Tuple]) -> Vec<usize> {
        let keys: Vec<SortKey> = tuples.iter().map(|t| self.sort_key(t)).collect();
        let mut order: Vec<usize> = (0..tuples.len()).collect();
        order.sort_unstable_by(|&a, &b| keys[a].cmp(&keys[b]));
        order
    }
}

impl Profile {
    /// F-dominance decided on cached vertex scores.
    #[inline]
    pub fn dominates(&self, other: &Profile) -> bool {
        let mut strict = false;
        for (a, b) in self.scores.iter().zip(&other.scores) {
            let diff = b - a;
            if diff < -STRICTNESS_TOL {
                return false;
            }
            strict |= diff > STRICTNESS_TOL;
        }
        strict
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::dominates;
    use crate::model::fixtures::*;
    use crate::Dataset;
    use alloc::vec;
    use proptest::prelude::*;

    fn ctx() -> FDomContext {
        FDomContext::new(&w1_over_w2()).unwrap()
    }

    #[test]
    fn worked_example_pairs() {
        let r = locations();
        let t = r.tuples();
        let c = ctx();
        assert!(c.f_dominates(&t[A as usize], &t[H as usize]).unwrap());
        assert!(c.f_dominates(&t[E as usize], &t[I as usize]).unwrap());
        assert!(!c.f_dominates(&t[A as usize], &t[B as usize]).unwrap());
    }

    #[test]
    fn dominance_region_examples() {
        let r = locations();
        let t = r.tuples();
        let c = ctx();
        assert!(c.in_dominance_region(&t[A as usize], &[0.50, 0.70]).unwrap());
        assert!(!c.in_dominance_region(&t[A as usize], &[0.30, 0.80]).unwrap());
        assert!(c.in_dominance_region(&t[B as usize], &[1.0, 1.0]).unwrap());
        assert!(c.in_dominance_region(&t[B as usize], &[1.0]).is_err());
    }

    #[test]
    fn sort_key_examples() {
        let c = ctx();
        let a = tuple(0, &[0.30, 0.80]);
        let e = tuple(4, &[0.60, 0.20]);
        assert!((c.sort_key(&a).primary - 0.425).abs() < 1e-12);
        assert!((c.sort_key(&e).primary - 0.50).abs() < 1e-12);
        let x = tuple(3, &[0.4, 0.4]);
        let y = tuple(7, &[0.4, 0.4]);
        assert!(c.sort_key(&x) < c.sort_key(&y));
        assert_eq!(c.presort(&[y, x]), vec![1, 0]);
    }

    #[test]
    fn dimension_mismatch() {
        let c = ctx();
        assert!(c.f_dominates(&tuple(0, &[0.1, 0.2, 0.3]), &tuple(1, &[0.1, 0.2, 0.3])).is_err());
    }

    /// Dense-sampling check of F-dominance: the vertex test must agree with
    /// scores evaluated across a fine grid of admissible weights (d = 2).
    #[test]
    fn vertex_test_agrees_with_weight_sweep() {
        let c = ctx();
        let r = locations();
        for t in r.tuples() {
            for s in r.tuples() {
                let mut all_le = true;
                let mut some_lt = false;
                for k in 0..=1000 {
                    let l = 0.5 + 0.5 * k as f64 / 1000.0;
                    let ft = l * t.values()[0] + (1.0 - l) * t.values()[1];
                    let fs = l * s.values()[0] + (1.0 - l) * s.values()[1];
                    all_le &= ft <= fs + 1e-12;
                    some_lt |= ft < fs - 1e-12;
                }
                assert_eq!(c.f_dominates(t, s).unwrap(), all_le && some_lt, "{t:?} {s:?}");
            }
        }
    }

    fn random_case() -> impl Strategy<Value = (usize, Vec<Vec<f64>>, Vec<Vec<f64>>)> {
        (2usize..=4).prop_flat_map(|d| {
            (
                Just(d),
                prop::collection::vec(prop::collection::vec(0.0f64..1.0, d), 1..60),
                prop::collection::vec(prop::collection::vec(-1.0f64..1.0, d), 0..3),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn f_dominance_properties((d, rows, cons) in random_case()) {
            let Ok(c) = WeightConstraintSet::new(d, cons) else { return Ok(()); };
            let ctx = FDomContext::new(&c).unwrap();
            let r = Dataset::from_rows(d, rows).unwrap();
            let t = r.tuples();
            let order = ctx.presort(t);
            let rank: Vec<usize> = {
                let mut rank = vec![0; t.len()];
                for (pos, &i) in order.iter().enumerate() { rank[i] = pos; }
                rank
            };
            for (i, x) in t.iter().enumerate() {
                prop_assert!(!ctx.f_dominates(x, x).unwrap());
                for (j, y) in t.iter().enumerate() {
                    let fd = ctx.f_dominates(x, y).unwrap();
                    if dominates(x, y).unwrap() {
                        prop_assert!(fd);
                    }
                    prop_assert_eq!(fd, ctx.profile(x).dominates(&ctx.profile(y)));
                    if fd {
                        prop_assert!(!ctx.f_dominates(y, x).unwrap());
                        // a later tuple with a strictly larger key never dominates an earlier one
                        prop_assert!(!(rank[i] > rank[j] && ctx.sort_key(x).primary > ctx.sort_key(y).primary));
                        for z in t {
                            if ctx.f_dominates(y, z).unwrap() {
                                prop_assert!(ctx.f_dominates(x, z).unwrap());
                            }
                        }
                    }
                }
            }
        }

        #[test]
        fn full_simplex_matches_pareto_in_2d(rows in prop::collection::vec(prop::collection::vec(0.0f64..1.0, 2), 1..40)) {
            let ctx = FDomContext::new(&WeightConstraintSet::unconstrained(2).unwrap()).unwrap();
            let r = Dataset::from_rows(2, rows).unwrap();
            for x in r.tuples() {
                for y in r.tuples() {
                    prop_assert_eq!(ctx.f_dominates(x, y).unwrap(), dominates(x, y).unwrap());
                }
            }
        }
    }
}
