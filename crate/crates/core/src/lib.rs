//! Flexible skyline operators over normalized numeric tuples.
//!
//! The crate computes the non-dominated (`ND`) and potentially optimal (`PO`)
//! flexible skylines for a family of linear scoring functions whose weights
//! are restricted by a set of homogeneous linear constraints. Everything here
//! is pure computation over immutable inputs and works without `std`; the
//! companion `flexsky` crate adds the parallel engine, file formats and CLI.
//!
//! Conventions: attribute values live in `[0,1]` and smaller is better.

#![no_std]
#![deny(rust_2018_idioms, missing_debug_implementations)]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;
mod linalg;

pub mod datagen;
pub mod fdom;
pub mod lp;
pub mod model;
pub mod oracle;
pub mod partition;
pub mod polytope;
pub mod sequential;
pub mod simplex;

pub use error::{Error, Result};
pub use fdom::{FDomContext, SortKey};
pub use lp::{lp_solve, LpProblem, LpSolution};
pub use model::{
    dominates, score, skyline_bruteforce, Dataset, Tuple, TupleId, WeightConstraintSet,
    WeightVector,
};
pub use polytope::{enumerate_vertices, sorting_weight, PolytopeVertices};
pub use sequential::{is_potentially_optimal, nd_sve1f, po_popi2};

/// Feasibility and deduplication tolerance for weight vectors.
pub const FEASIBILITY_TOL: f64 = 1e-9;

/// Two scores closer than this count as equal when deciding F-dominance.
pub const STRICTNESS_TOL: f64 = 1e-12;

/// A tuple is potentially optimal only if its best margin exceeds this.
pub const PO_MARGIN_TOL: f64 = 1e-9;
