//! Seeded random specs: every pair `i < j` takes each offset in `[-m, m]` independently
//! with probability `density`.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::arrangement::ArrangementSpec;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct SpecSampler {
    n: usize,
    m: usize,
    density: f64,
    rng: SplitMix64,
}

impl SpecSampler {
    pub fn new(n: usize, m: usize, density: f64, seed: u64) -> Result<Self> {
        if n == 0 || !(0.0..=1.0).contains(&density) {
            return Err(Error::MalformedSpec(format!(
                "sampler needs n >= 1 and density in [0, 1], got n = {n}, density = {density}"
            )));
        }
        Ok(Self {
            n,
            m,
            density,
            rng: SplitMix64::seed_from_u64(seed),
        })
    }

    fn unit(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn sample(&mut self) -> ArrangementSpec {
        let m = self.m as i64;
        let mut entries = Vec::new();
        let n = self.n as i64;
        for i in 1..=n {
            for j in i + 1..=n {
                let set: Vec<i64> = (-m..=m).filter(|_| self.unit() < self.density).collect();
                entries.push((i, j, set));
            }
        }
        ArrangementSpec::new(self.n, entries).expect("sampled entries are well formed")
    }
}

impl Iterator for SpecSampler {
    type Item = ArrangementSpec;

    fn next(&mut self) -> Option<ArrangementSpec> {
        Some(self.sample())
    }
}
