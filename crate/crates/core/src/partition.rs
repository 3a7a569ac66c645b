//! Horizontal partitioning strategies.
//!
//! Grid and Angular map each tuple to a cell of a regular grid over the
//! attribute space or over its hyperspherical angles; Sliced ranks tuples on a
//! single attribute and cuts the ranking into equal runs; Random is the
//! seeded uniform baseline.

use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;
use core::fmt;
use core::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{dominates_values, Tuple};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Strategy {
    Grid,
    Angular,
    Sliced,
    Random,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [Strategy::Grid, Strategy::Angular, Strategy::Sliced, Strategy::Random];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Grid => "grid",
            Strategy::Angular => "angular",
            Strategy::Sliced => "sliced",
            Strategy::Random => "random",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "grid" => Ok(Strategy::Grid),
            "angular" => Ok(Strategy::Angular),
            "sliced" => Ok(Strategy::Sliced),
            "random" => Ok(Strategy::Random),
            _ => Err(Error::InvalidParameter("strategy must be grid, angular, sliced or random")),
        }
    }
}

/// Assignment of tuples to partitions. `assignment[i]` is the partition of
/// the `i`-th tuple of the slice the plan was built from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionPlan {
    pub strategy: Strategy,
    pub partitions: usize,
    /// Slices per dimension, for Grid and Angular.
    pub slices: Option<usize>,
    pub assignment: Vec<usize>,
}

impl PartitionPlan {
    /// Tuple indices grouped by partition.
    pub fn groups(&self) -> Vec<Vec<usize>> {
        let mut groups = alloc::vec![Vec::new(); self.partitions];
        for (i, &p) in self.assignment.iter().enumerate() {
            groups[p].push(i);
        }
        groups
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = alloc::vec![0; self.partitions];
        for &p in &self.assignment {
            sizes[p] += 1;
        }
        sizes
    }
}

/// Largest `m >= 1` with `m^exp <= p`.
pub fn slices_for(p: usize, exp: usize) -> usize {
    let mut m = 1usize;
    while (m + 1).checked_pow(exp as u32).is_some_and(|v| v <= p) {
        m += 1;
    }
    m
}

#[inline]
fn cell_index(x: f64, m: usize) -> usize {
    let idx = libm::floor(x * m as f64);
    if idx <= 0.0 {
        0
    } else {
        (idx as usize).min(m - 1)
    }
}

pub fn grid_assign(values: &[f64], m: usize) -> usize {
    let mut index = 0;
    let mut stride = 1;
    for &x in values {
        index += cell_index(x, m) * stride;
        stride *= m;
    }
    index
}

/// Hyperspherical angles `phi_1..phi_{d-1}` of a first-orthant point.
pub fn angles(values: &[f64]) -> Vec<f64> {
    let d = values.len();
    let mut tail = alloc::vec![0.0; d + 1];
    for i in (0..d).rev() {
        tail[i] = tail[i + 1] + values[i] * values[i];
    }
    (0..d - 1)
        .map(|i| {
            if values[i] == 0.0 {
                FRAC_PI_2
            } else {
                libm::atan(libm::sqrt(tail[i + 1]) / values[i])
            }
        })
        .collect()
}

pub fn angular_assign(values: &[f64], m: usize) -> usize {
    if values.iter().all(|&x| x == 0.0) {
        return 0;
    }
    let mut index = 0;
    let mut stride = 1;
    for phi in angles(values) {
        index += cell_index(phi / FRAC_PI_2, m) * stride;
        stride *= m;
    }
    index
}

pub fn grid_plan(tuples: &[Tuple], dim: usize, p: usize) -> PartitionPlan {
    let m = slices_for(p.max(1), dim);
    PartitionPlan {
        strategy: Strategy::Grid,
        partitions: m.pow(dim as u32),
        slices: Some(m),
        assignment: tuples.iter().map(|t| grid_assign(t.values(), m)).collect(),
    }
}

pub fn angular_plan(tuples: &[Tuple], dim: usize, p: usize) -> PartitionPlan {
    let m = slices_for(p.max(1), dim - 1);
    PartitionPlan {
        strategy: Strategy::Angular,
        partitions: m.pow(dim as u32 - 1),
        slices: Some(m),
        assignment: tuples.iter().map(|t| angular_assign(t.values(), m)).collect(),
    }
}

/// Rank on attribute `slice_dim` (ties by id) and cut into `p` runs.
pub fn sliced_assign(tuples: &[Tuple], p: usize, slice_dim: usize) -> PartitionPlan {
    let p = p.max(1);
    let n = tuples.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_unstable_by(|&a, &b| {
        tuples[a].values()[slice_dim]
            .total_cmp(&tuples[b].values()[slice_dim])
            .then_with(|| tuples[a].id().cmp(&tuples[b].id()))
    });
    let mut assignment = alloc::vec![0; n];
    if n >= 2 {
        for (rank, &i) in order.iter().enumerate() {
            assignment[i] = (rank * p / (n - 1)).min(p - 1);
        }
    }
    PartitionPlan { strategy: Strategy::Sliced, partitions: p, slices: None, assignment }
}

pub fn random_assign(tuples: &[Tuple], p: usize, seed: u64) -> PartitionPlan {
    let p = p.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    PartitionPlan {
        strategy: Strategy::Random,
        partitions: p,
        slices: None,
        assignment: tuples.iter().map(|_| rng.random_range(0..p)).collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlanOptions {
    pub slice_dim: usize,
    pub seed: u64,
}

pub fn plan(
    strategy: Strategy,
    tuples: &[Tuple],
    dim: usize,
    p: usize,
    opts: PlanOptions,
) -> Result<PartitionPlan> {
    if p == 0 {
        return Err(Error::InvalidParameter("number of partitions must be at least 1"));
    }
    if dim < 2 {
        return Err(Error::DimensionTooSmall(dim));
    }
    Ok(match strategy {
        Strategy::Grid => grid_plan(tuples, dim, p),
        Strategy::Angular => angular_plan(tuples, dim, p),
        Strategy::Sliced => {
            if opts.slice_dim >= dim {
                return Err(Error::InvalidParameter("slicing dimension out of range"));
            }
            sliced_assign(tuples, p, opts.slice_dim)
        }
        Strategy::Random => random_assign(tuples, p, opts.seed),
    })
}

/// Corners of one grid cell plus whether any tuple fell into it.
#[derive(Debug, Clone, PartialEq)]
pub struct GridCell {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
    pub occupied: bool,
}

/// Bounds of every cell of an `m^dim` grid, flagged by the plan's occupancy.
pub fn grid_cells(dim: usize, m: usize, occupancy: &[usize]) -> Vec<GridCell> {
    let total = m.pow(dim as u32);
    (0..total)
        .map(|cell| {
            let mut rest = cell;
            let mut min = Vec::with_capacity(dim);
            let mut max = Vec::with_capacity(dim);
            for _ in 0..dim {
                let k = rest % m;
                rest /= m;
                min.push(k as f64 / m as f64);
                max.push((k + 1) as f64 / m as f64);
            }
            GridCell { min, max, occupied: occupancy.get(cell).is_some_and(|&n| n > 0) }
        })
        .collect()
}

/// Cells whose every tuple is dominated by any tuple of some occupied cell:
/// `j` is pruned when an occupied `i` has `max_i` dominating `min_j`.
pub fn grid_filter(cells: &[GridCell]) -> Vec<usize> {
    (0..cells.len())
        .filter(|&j| {
            cells
                .iter()
                .any(|ci| ci.occupied && dominates_values(&ci.max, &cells[j].min))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Dataset;
    use alloc::vec;
    use proptest::prelude::{prop, prop_assert, prop_assert_eq, proptest};
    use proptest::strategy::Strategy as _;

    #[test]
    fn grid_assign_examples() {
        assert_eq!(grid_assign(&[0.30, 0.80], 2), 2);
        assert_eq!(grid_assign(&[1.0, 1.0], 2), 3);
        for m in 1..6 {
            assert_eq!(grid_assign(&[0.0, 0.0, 0.0], m), 0);
        }
        assert_eq!(grid_assign(&[0.99, 0.5, 0.1], 3), 2 + 3);
    }

    #[test]
    fn grid_filter_examples() {
        let occ = |m: usize, cell: usize| {
            let mut v = vec![0; m * m];
            v[cell] = 1;
            v
        };
        // equal corners (0.5,0.5): not strict
        assert!(grid_filter(&grid_cells(2, 2, &occ(2, 0))).is_empty());
        // (1/3,1/3) dominates (2/3,2/3), and also the corners (2/3,1/3), (1/3,2/3)
        let pruned = grid_filter(&grid_cells(2, 3, &occ(3, 0)));
        assert_eq!(pruned, vec![5, 7, 8]);
        assert!(grid_filter(&grid_cells(2, 3, &[0; 9])).is_empty());
    }

    #[test]
    fn angular_assign_examples() {
        assert_eq!(angular_assign(&[1.0, 0.5], 2), 0);
        assert_eq!(angular_assign(&[0.5, 1.0], 2), 1);
        assert_eq!(angular_assign(&[0.7, 0.0], 2), 0);
        assert_eq!(angular_assign(&[0.0, 0.0, 0.0], 3), 0);
        // on the A_2 axis: phi = pi/2 -> clamped to the last slice
        assert_eq!(angular_assign(&[0.0, 0.6], 4), 3);
        let phi = angles(&[1.0, 0.5]);
        assert!((phi[0] - 0.463_647_609).abs() < 1e-9);
    }

    #[test]
    fn sliced_examples() {
        let r = Dataset::from_rows(2, (0..9).map(|i| vec![i as f64 / 10.0, 0.5])).unwrap();
        let plan = sliced_assign(r.tuples(), 3, 0);
        assert_eq!(plan.assignment, vec![0, 0, 0, 1, 1, 1, 2, 2, 2]);
        let single = sliced_assign(r.tuples(), 1, 0);
        assert!(single.assignment.iter().all(|&p| p == 0));
        let two = Dataset::from_rows(2, vec![vec![0.9, 0.1], vec![0.1, 0.9]]).unwrap();
        assert_eq!(sliced_assign(two.tuples(), 2, 0).assignment, vec![1, 0]);
        assert_eq!(sliced_assign(two.tuples(), 2, 1).assignment, vec![0, 1]);
    }

    #[test]
    fn random_examples() {
        let r = crate::datagen::generate(&crate::datagen::GenSpec::new(
            crate::datagen::Distribution::Independent,
            10_000,
            2,
            3,
        ))
        .unwrap();
        assert!(random_assign(r.tuples(), 1, 9).assignment.iter().all(|&p| p == 0));
        assert_eq!(random_assign(r.tuples(), 10, 9), random_assign(r.tuples(), 10, 9));
        // binomial(10000, 0.1): sigma = 30
        for size in random_assign(r.tuples(), 10, 9).sizes() {
            assert!((size as f64 - 1000.0).abs() <= 150.0, "{size}");
        }
    }

    #[test]
    fn effective_partition_counts() {
        assert_eq!(slices_for(32, 4), 2);
        assert_eq!(slices_for(32, 3), 3);
        assert_eq!(slices_for(100, 4), 3);
        assert_eq!(slices_for(81, 4), 3);
        assert_eq!(slices_for(3, 2), 1);
        assert_eq!(slices_for(1, 7), 1);
        let none: [Tuple; 0] = [];
        assert_eq!(grid_plan(&none, 4, 32).partitions, 16);
        assert_eq!(angular_plan(&none, 4, 32).partitions, 27);
        assert!(plan(Strategy::Sliced, &none, 2, 4, PlanOptions { slice_dim: 2, seed: 0 }).is_err());
        assert!(plan(Strategy::Grid, &none, 2, 0, PlanOptions { slice_dim: 0, seed: 0 }).is_err());
    }

    #[test]
    fn strategy_parsing() {
        for s in Strategy::ALL {
            assert_eq!(s.name().parse::<Strategy>().unwrap(), s);
        }
        assert!("hash".parse::<Strategy>().is_err());
    }

    fn dataset(d: usize) -> impl proptest::strategy::Strategy<Value = Dataset> {
        prop::collection::vec(prop::collection::vec(0.0f64..=1.0, d), 2..200)
            .prop_map(move |rows| Dataset::from_rows(d, rows).unwrap())
    }

    proptest! {
        #[test]
        fn plans_cover_and_sliced_balances(r in dataset(3), p in 1usize..40, seed in 0u64..100) {
            for s in Strategy::ALL {
                let plan = plan(s, r.tuples(), 3, p, PlanOptions { slice_dim: (seed % 3) as usize, seed }).unwrap();
                prop_assert_eq!(plan.assignment.len(), r.len());
                prop_assert!(plan.assignment.iter().all(|&i| i < plan.partitions));
                let covered: usize = plan.groups().iter().map(Vec::len).sum();
                prop_assert_eq!(covered, r.len());
                if s == Strategy::Sliced {
                    let sizes = plan.sizes();
                    let (lo, hi) = (sizes.iter().min().unwrap(), sizes.iter().max().unwrap());
                    prop_assert!(hi - lo <= 1, "{:?}", sizes);
                }
            }
        }

        #[test]
        fn pruned_cells_hold_only_dominated_tuples(r in dataset(2), m in 1usize..6) {
            let plan = grid_plan(r.tuples(), 2, m * m);
            let cells = grid_cells(2, m, &plan.sizes());
            let pruned = grid_filter(&cells);
            let sky = crate::skyline_bruteforce(&r);
            for (i, t) in r.tuples().iter().enumerate() {
                if pruned.contains(&plan.assignment[i]) {
                    prop_assert!(!sky.contains(&t.id()));
                }
            }
        }
    }
}
