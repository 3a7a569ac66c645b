//! Sequential flexible-skyline operators.
//!
//! `ND` uses a presorted window scan with vertex-based F-dominance tests.
//! `PO` runs over an `ND` set and solves margin LPs against a doubling prefix
//! of the competitors, discarding a candidate as soon as some prefix already
//! beats it.

use alloc::vec::Vec;

use crate::fdom::{FDomContext, Profile};
use crate::lp::{lp_solve, LpProblem};
use crate::model::{check_dim, Tuple, TupleId, WeightConstraintSet};
use crate::{Result, PO_MARGIN_TOL};

/// Non-dominated flexible skyline; returns ids in ascending order.
pub fn nd_sve1f(tuples: &[Tuple], ctx: &FDomContext) -> Vec<TupleId> {
    sorted_ids(tuples, nd_sve1f_indices(tuples, ctx))
}

/// Indices (into `tuples`) of the ND members, in presort order.
pub fn nd_sve1f_indices(tuples: &[Tuple], ctx: &FDomContext) -> Vec<usize> {
    let profiles: Vec<Profile> = tuples.iter().map(|t| ctx.profile(t)).collect();
    let mut window: Vec<usize> = Vec::new();
    for i in ctx.presort(tuples) {
        let p = &profiles[i];
        // newest first
        if window.iter().rev().any(|&w| profiles[w].dominates(p)) {
            continue;
        }
        // Only reachable when scores tie within the strictness tolerance.
        window.retain(|&w| !p.dominates(&profiles[w]));
        window.push(i);
    }
    window
}

/// `t` is the strict top-1 tuple among `competitors` for some admissible
/// weighting.
pub fn is_potentially_optimal(
    t: &Tuple,
    competitors: &[&Tuple],
    c: &WeightConstraintSet,
) -> Result<bool> {
    if competitors.is_empty() {
        check_dim(c.dim(), t.dim())?;
        return Ok(true);
    }
    let sol = lp_solve(&LpProblem::new(t, competitors.iter().copied(), c)?)?;
    Ok(sol.eps() > PO_MARGIN_TOL)
}

/// Incremental test: solve against the first 2, 4, 8, ... competitors and
/// stop at the first prefix whose margin is not positive. Competitors should
/// come strongest-first so that losers drop out early; the verdict does not
/// depend on the order.
pub fn is_potentially_optimal_incremental(
    t: &Tuple,
    competitors: &[&Tuple],
    c: &WeightConstraintSet,
) -> Result<bool> {
    if competitors.is_empty() {
        return is_potentially_optimal(t, competitors, c);
    }
    let mut k = 2usize;
    loop {
        let upto = k.min(competitors.len());
        if !is_potentially_optimal(t, &competitors[..upto], c)? {
            return Ok(false);
        }
        if upto == competitors.len() {
            return Ok(true);
        }
        k *= 2;
    }
}

/// Potentially optimal flexible skyline of an ND set; ids ascending.
///
/// `nd` is trusted to be an ND set.
pub fn po_popi2(nd: &[Tuple], c: &WeightConstraintSet, ctx: &FDomContext) -> Result<Vec<TupleId>> {
    Ok(sorted_ids(nd, po_popi2_indices(nd, c, ctx)?))
}

pub fn po_popi2_indices(nd: &[Tuple], c: &WeightConstraintSet, ctx: &FDomContext) -> Result<Vec<usize>> {
    let order = ctx.presort(nd);
    let mut keep = Vec::new();
    let mut competitors: Vec<&Tuple> = Vec::with_capacity(nd.len());
    for (pos, &i) in order.iter().enumerate() {
        competitors.clear();
        competitors.extend(
            order
                .iter()
                .enumerate()
                .filter(|&(p, _)| p != pos)
                .map(|(_, &j)| &nd[j]),
        );
        if is_potentially_optimal_incremental(&nd[i], &competitors, c)? {
            keep.push(i);
        }
    }
    Ok(keep)
}

pub(crate) fn sorted_ids(tuples: &[Tuple], indices: Vec<usize>) -> Vec<TupleId> {
    let mut ids: Vec<TupleId> = indices.into_iter().map(|i| tuples[i].id()).collect();
    ids.sort_unstable();
    ids
}
