//! Tuples, datasets, weight constraints and classical dominance.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::{polytope, Error, Result, FEASIBILITY_TOL};

pub type TupleId = u64;

/// A point in `[0,1]^d` with an identifier unique within its dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct Tuple {
    id: TupleId,
    values: Vec<f64>,
}

impl Tuple {
    pub fn new(id: TupleId, values: Vec<f64>) -> Result<Self> {
        for (index, &value) in values.iter().enumerate() {
            if !value.is_finite() || !(0.0..=1.0).contains(&value) {
                return Err(Error::ValueOutOfRange { id, index, value });
            }
        }
        Ok(Self { id, values })
    }

    pub fn id(&self) -> TupleId {
        self.id
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }
}

/// An ordered collection of tuples sharing one dimensionality.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    dim: usize,
    tuples: Vec<Tuple>,
}

impl Dataset {
    pub fn new(dim: usize, tuples: Vec<Tuple>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::DimensionTooSmall(dim));
        }
        let mut seen = BTreeSet::new();
        for t in &tuples {
            if t.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: t.dim() });
            }
            if !seen.insert(t.id) {
                return Err(Error::DuplicateId(t.id));
            }
        }
        Ok(Self { dim, tuples })
    }

    /// Builds a dataset from raw rows, numbering tuples in order of appearance.
    pub fn from_rows<I>(dim: usize, rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = Vec<f64>>,
    {
        let tuples = rows
            .into_iter()
            .enumerate()
            .map(|(i, values)| Tuple::new(i as TupleId, values))
            .collect::<Result<Vec<_>>>()?;
        Self::new(dim, tuples)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tuples(&self) -> &[Tuple] {
        &self.tuples
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn into_tuples(self) -> Vec<Tuple> {
        self.tuples
    }
}

/// A weight vector on the probability simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        let sum: f64 = weights.iter().sum();
        if weights.iter().any(|&w| !w.is_finite() || w < -FEASIBILITY_TOL)
            || (sum - 1.0).abs() > FEASIBILITY_TOL
        {
            return Err(Error::InvalidWeights);
        }
        Ok(Self(weights))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

/// Homogeneous constraints `a . w >= 0` on the scoring weights.
///
/// The simplex constraints `w >= 0` and `sum(w) = 1` always apply on top of
/// the explicit rows. Construction fails when the resulting polytope is empty.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightConstraintSet {
    dim: usize,
    rows: Vec<Vec<f64>>,
}

impl WeightConstraintSet {
    pub fn new(dim: usize, rows: Vec<Vec<f64>>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::DimensionTooSmall(dim));
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: bad.len() });
        }
        if rows.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter("constraint coefficients must be finite"));
        }
        if polytope::extreme_points(dim, &rows).is_empty() {
            return Err(Error::InfeasibleConstraints);
        }
        Ok(Self { dim, rows })
    }

    /// The full simplex: every non-negative weighting is allowed.
    pub fn unconstrained(dim: usize) -> Result<Self> {
        Self::new(dim, Vec::new())
    }

    /// Constraints `w_i >= w_j` for each `(i, j)` pair (0-based indices).
    pub fn preferring(dim: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut rows = Vec::with_capacity(pairs.len());
        for &(i, j) in pairs {
            if i >= dim || j >= dim {
                return Err(Error::InvalidParameter("weight index out of range"));
            }
            let mut row = alloc::vec![0.0; dim];
            row[i] += 1.0;
            row[j] -= 1.0;
            rows.push(row);
        }
        Self::new(dim, rows)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    /// Whether `w` satisfies the simplex and every row within `tol`.
    pub fn admits(&self, w: &[f64], tol: f64) -> bool {
        w.len() == self.dim
            && w.iter().all(|&x| x >= -tol)
            && (w.iter().sum::<f64>() - 1.0).abs() <= tol
            && self.rows.iter().all(|a| dot(a, w) >= -tol)
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// Pareto dominance on raw values, smaller is better.
#[inline]
pub fn dominates_values(t: &[f64], s: &[f64]) -> bool {
    let mut strict = false;
    for (a, b) in t.iter().zip(s) {
        if a > b {
            return false;
        }
        strict |= a < b;
    }
    strict
}

/// `t` dominates `s`: no worse on every attribute and better on one.
pub fn dominates(t: &Tuple, s: &Tuple) -> Result<bool> {
    check_dim(t.dim(), s.dim())?;
    Ok(dominates_values(&t.values, &s.values))
}

/// Linear score `sum_i w_i * t_i`.
pub fn score(w: &WeightVector, t: &Tuple) -> Result<f64> {
    check_dim(w.dim(), t.dim())?;
    Ok(dot(w.as_slice(), &t.values))
}

/// Quadratic all-pairs skyline; returns ids in ascending order.
pub fn skyline_bruteforce(r: &Dataset) -> Vec<TupleId> {
    let mut ids: Vec<TupleId> = r
        .tuples
        .iter()
        .filter(|t| !r.tuples.iter().any(|s| dominates_values(&s.values, &t.values)))
        .map(|t| t.id)
        .collect();
    ids.sort_unstable();
    ids
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    #[test]
    fn dominance_examples() {
        let r = locations();
        let t = r.tuples();
        assert!(dominates(&t[0], &t[3]).unwrap());
        assert!(!dominates(&t[1], &t[2]).unwrap());
        assert!(!dominates(&t[0], &t[0]).unwrap());
    }

    #[test]
    fn dominance_dim_mismatch() {
        let t = tuple(0, &[0.1, 0.2]);
        let s = tuple(1, &[0.1, 0.2, 0.3]);
        assert_eq!(
            dominates(&t, &s),
            Err(Error::DimensionMismatch { expected: 2, found: 3 })
        );
    }

    #[test]
    fn score_examples() {
        let w = WeightVector::new(vec![0.5, 0.5]).unwrap();
        let a = tuple(0, &[0.30, 0.80]);
        let b = tuple(1, &[0.55, 0.45]);
        assert!((score(&w, &a).unwrap() - 0.55).abs() < 1e-15);
        assert!((score(&w, &b).unwrap() - 0.50).abs() < 1e-15);
        let unit = WeightVector::new(vec![1.0, 0.0]).unwrap();
        assert_eq!(score(&unit, &a).unwrap(), 0.30);
        assert!(score(&w, &tuple(2, &[0.1, 0.1, 0.1])).is_err());
    }

    #[test]
    fn skyline_examples() {
        assert_eq!(skyline_bruteforce(&locations()), vec![A, B, E, H, I]);
        let one = Dataset::from_rows(2, vec![vec![0.4, 0.4]]).unwrap();
        assert_eq!(skyline_bruteforce(&one), vec![0]);
        let twins = Dataset::from_rows(2, vec![vec![0.4, 0.4], vec![0.4, 0.4]]).unwrap();
        assert_eq!(skyline_bruteforce(&twins), vec![0, 1]);
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(Tuple::new(3, vec![0.5, 1.5]), Err(Error::ValueOutOfRange { id: 3, index: 1, .. })));
        assert!(Tuple::new(3, vec![f64::NAN, 0.5]).is_err());
        assert_eq!(Dataset::from_rows(1, vec![vec![0.5]]), Err(Error::DimensionTooSmall(1)));
        let dup = vec![tuple(1, &[0.1, 0.1]), tuple(1, &[0.2, 0.2])];
        assert_eq!(Dataset::new(2, dup), Err(Error::DuplicateId(1)));
        assert_eq!(WeightVector::new(vec![0.7, 0.7]), Err(Error::InvalidWeights));
        assert_eq!(WeightVector::new(vec![1.1, -0.1]), Err(Error::InvalidWeights));
    }

    #[test]
    fn infeasible_constraints_rejected() {
        // w1 >= 2 w2 and w2 >= 2 w1 only meet at the origin, off the simplex.
        let rows = vec![vec![1.0, -2.0], vec![-2.0, 1.0]];
        assert_eq!(WeightConstraintSet::new(2, rows), Err(Error::InfeasibleConstraints));
        // -w1 - w2 >= 0 contradicts sum(w) = 1.
        assert_eq!(
            WeightConstraintSet::new(3, vec![vec![-1.0, -1.0, -1.0]]),
            Err(Error::InfeasibleConstraints)
        );
    }

    fn points(n: usize, d: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
        prop::collection::vec(prop::collection::vec(0u8..=10, d), 1..n)
            .prop_map(|rows| rows.into_iter().map(|r| r.into_iter().map(|v| v as f64 / 10.0).collect()).collect())
    }

    proptest! {
        #[test]
        fn dominance_is_a_strict_order(rows in points(30, 3)) {
            let r = Dataset::from_rows(3, rows).unwrap();
            let t = r.tuples();
            for x in t {
                prop_assert!(!dominates(x, x).unwrap());
                for y in t {
                    if dominates(x, y).unwrap() {
                        prop_assert!(!dominates(y, x).unwrap());
                        for z in t {
                            if dominates(y, z).unwrap() {
                                prop_assert!(dominates(x, z).unwrap());
                            }
                        }
                    }
                }
            }
        }

        #[test]
        fn best_scoring_tuple_is_on_skyline(rows in points(40, 3), raw in prop::collection::vec(0.01f64..1.0, 3)) {
            let r = Dataset::from_rows(3, rows).unwrap();
            let total: f64 = raw.iter().sum();
            let w = WeightVector::new(raw.iter().map(|x| x / total).collect()).unwrap();
            let sky = skyline_bruteforce(&r);
            prop_assert!(!sky.is_empty());
            let best = r.tuples().iter().map(|t| score(&w, t).unwrap()).fold(f64::INFINITY, f64::min);
            let minimizers: Vec<_> = r.tuples().iter().filter(|t| score(&w, t).unwrap() <= best + 1e-12).collect();
            prop_assert!(minimizers.iter().any(|t| sky.contains(&t.id())));
        }
    }
}
