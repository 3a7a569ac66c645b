//! Vertex enumeration for the weight polytope
//! `{ w : w >= 0, sum(w) = 1, a . w >= 0 for every constraint row a }`.
//!
//! The polytope lives in a `(d-1)`-dimensional affine space, so every vertex is
//! pinned down by `d-1` active inequalities plus the simplex equality. We try
//! every such subset of the inequality system, keep the feasible solutions and
//! deduplicate them. That is exhaustive but exact, and `d` and the number of
//! constraint rows are small in practice.

use alloc::vec::Vec;
use core::cmp::Ordering;

use itertools::Itertools;

use crate::{linalg, model::WeightConstraintSet, Error, Result, WeightVector, FEASIBILITY_TOL};

/// Extreme points of a weight polytope, sorted lexicographically.
#[derive(Debug, Clone, PartialEq)]
pub struct PolytopeVertices {
    vertices: Vec<WeightVector>,
}

impl PolytopeVertices {
    pub fn vertices(&self) -> &[WeightVector] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].dim()
    }
}

pub fn enumerate_vertices(c: &WeightConstraintSet) -> Result<PolytopeVertices> {
    let points = extreme_points(c.dim(), c.rows());
    if points.is_empty() {
        return Err(Error::InfeasibleConstraints);
    }
    let vertices = points
        .into_iter()
        .map(WeightVector::new)
        .collect::<Result<Vec<_>>>()?;
    Ok(PolytopeVertices { vertices })
}

/// Centroid of the vertices, renormalized onto the simplex. Being a convex
/// combination of vertices it satisfies every constraint, which makes it a
/// valid member of the scoring family to presort by.
pub fn sorting_weight(v: &PolytopeVertices) -> WeightVector {
    let d = v.dim();
    let mut mean = alloc::vec![0.0; d];
    for w in &v.vertices {
        for (m, x) in mean.iter_mut().zip(w.as_slice()) {
            *m += x;
        }
    }
    let total: f64 = mean.iter().sum();
    for m in &mut mean {
        *m /= total;
    }
    WeightVector::new(mean).expect("centroid of simplex points lies on the simplex")
}

pub(crate) fn extreme_points(dim: usize, rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
    // Inequalities g . w >= 0: the non-negativity bounds first, then the rows.
    let mut ineqs: Vec<Vec<f64>> = (0..dim)
        .map(|i| {
            let mut e = alloc::vec![0.0; dim];
            e[i] = 1.0;
            e
        })
        .collect();
    ineqs.extend(rows.iter().cloned());

    let mut found: Vec<Vec<f64>> = Vec::new();
    for active in (0..ineqs.len()).combinations(dim - 1) {
        let mut a = Vec::with_capacity(dim * dim);
        for &k in &active {
            a.extend_from_slice(&ineqs[k]);
        }
        a.extend(core::iter::repeat_n(1.0, dim));
        let mut b = alloc::vec![0.0; dim];
        b[dim - 1] = 1.0;
        let Some(w) = linalg::solve(a, b, dim) else {
            continue;
        };
        let feasible = ineqs
            .iter()
            .all(|g| crate::model::dot(g, &w) >= -FEASIBILITY_TOL);
        if !feasible {
            continue;
        }
        let w = clean(w);
        if !found.iter().any(|v| same_point(v, &w)) {
            found.push(w);
        }
    }
    found.sort_by(|x, y| lex_cmp(x, y));
    found
}

/// Snaps tiny negative round-off to zero and renormalizes.
fn clean(mut w: Vec<f64>) -> Vec<f64> {
    for x in w.iter_mut() {
        if x.abs() <= FEASIBILITY_TOL * 1e-3 {
            *x = 0.0;
        }
        *x = x.max(0.0);
    }
    let total: f64 = w.iter().sum();
    for x in w.iter_mut() {
        *x /= total;
    }
    w
}

fn same_point(x: &[f64], y: &[f64]) -> bool {
    x.iter().zip(y).all(|(a, b)| (a - b).abs() <= FEASIBILITY_TOL)
}

fn lex_cmp(x: &[f64], y: &[f64]) -> Ordering {
    x.iter()
        .zip(y)
        .map(|(a, b)| a.total_cmp(b))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}
