//! Quadratic reference implementations used by the verification harness.

use alloc::vec::Vec;

use crate::fdom::FDomContext;
use crate::model::{Tuple, TupleId, WeightConstraintSet};
use crate::sequential::is_potentially_optimal;
use crate::Result;

/// All-pairs ND filter; ids ascending.
pub fn nd_bruteforce(tuples: &[Tuple], ctx: &FDomContext) -> Vec<TupleId> {
    let mut ids: Vec<TupleId> = tuples
        .iter()
        .filter(|t| {
            !tuples
                .iter()
                .any(|s| ctx.dominates_values(s.values(), t.values()))
        })
        .map(Tuple::id)
        .collect();
    ids.sort_unstable();
    ids
}

/// One full margin LP per tuple against all the others; ids ascending.
pub fn po_full_lp(tuples: &[Tuple], c: &WeightConstraintSet) -> Result<Vec<TupleId>> {
    let mut ids = Vec::new();
    for t in tuples {
        let others: Vec<&Tuple> = tuples.iter().filter(|s| s.id() != t.id()).collect();
        if is_potentially_optimal(t, &others, c)? {
            ids.push(t.id());
        }
    }
    ids.sort_unstable();
    Ok(ids)
}
