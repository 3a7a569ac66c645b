//! Seeded synthetic datasets in the usual skyline benchmark regimes.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, Normal};

use crate::{Dataset, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Distribution {
    Anticorrelated,
    Correlated,
    Independent,
}

impl Distribution {
    pub fn name(self) -> &'static str {
        match self {
            Distribution::Anticorrelated => "anticorrelated",
            Distribution::Correlated => "correlated",
            Distribution::Independent => "independent",
        }
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Distribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "anticorrelated" | "anti" => Ok(Distribution::Anticorrelated),
            "correlated" | "corr" => Ok(Distribution::Correlated),
            "independent" | "indep" | "uniform" => Ok(Distribution::Independent),
            _ => Err(Error::InvalidParameter(
                "distribution must be anticorrelated, correlated or independent",
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenSpec {
    pub kind: Distribution,
    pub n: usize,
    pub dim: usize,
    pub seed: u64,
    /// Standard deviation of the normal jitter (anticorrelated and correlated).
    pub jitter: f64,
}

impl GenSpec {
    pub const DEFAULT_JITTER: f64 = 0.05;

    pub fn new(kind: Distribution, n: usize, dim: usize, seed: u64) -> Self {
        Self { kind, n, dim, seed, jitter: Self::DEFAULT_JITTER }
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParameter("dataset size must be at least 1"));
        }
        if !(2..=16).contains(&self.dim) {
            return Err(Error::InvalidParameter("dimensionality must be between 2 and 16"));
        }
        if !(self.jitter.is_finite() && self.jitter > 0.0) {
            return Err(Error::InvalidParameter("jitter must be a positive number"));
        }
        Ok(())
    }
}

const MAX_REDRAWS: usize = 64;

pub fn generate(spec: &GenSpec) -> Result<Dataset> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let jitter = Normal::new(0.0, spec.jitter).map_err(|_| Error::InvalidParameter("jitter"))?;
    let d = spec.dim;
    let rows = (0..spec.n).map(|_| match spec.kind {
        Distribution::Independent => (0..d).map(|_| rng.random::<f64>()).collect(),
        Distribution::Correlated => {
            let base: f64 = rng.random();
            (0..d).map(|_| clamp(base + jitter.sample(&mut rng))).collect()
        }
        Distribution::Anticorrelated => anticorrelated_point(&mut rng, &jitter, d),
    });
    Dataset::from_rows(d, rows.collect::<Vec<Vec<f64>>>())
}

/// Draw a plane `sum(x) = d * v` with `v` near 0.5, then shift mass between
/// neighbouring coordinates, which moves the point uniformly along the plane.
/// Points leaving the unit cube are redrawn a bounded number of times and
/// clamped after that.
fn anticorrelated_point(rng: &mut ChaCha8Rng, jitter: &Normal<f64>, d: usize) -> Vec<f64> {
    let mut x = alloc::vec![0.0; d];
    for _ in 0..MAX_REDRAWS {
        let v = clamp(0.5 + jitter.sample(rng));
        let spread = v.min(1.0 - v);
        x.iter_mut().for_each(|c| *c = v);
        for i in 0..d {
            let h = rng.random_range(-spread..=spread);
            x[i] += h;
            x[(i + 1) % d] -= h;
        }
        if x.iter().all(|c| (0.0..=1.0).contains(c)) {
            return x;
        }
    }
    x.into_iter().map(clamp).collect()
}

fn clamp(x: f64) -> f64 {
    x.clamp(0.0, 1.0)
}
