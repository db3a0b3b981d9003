use std::collections::HashMap;

use qcut_core::Quasipartition;
use rand_chacha::ChaCha8Rng;

use crate::{SamplerConfig, SamplingError};

/// Finite support with exact probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct ExplicitDistribution {
    support: Vec<(Quasipartition, f64)>,
}

impl ExplicitDistribution {
    /// Validates masses and merges equal members.
    pub fn new(atoms: Vec<(Quasipartition, f64)>) -> Result<Self, SamplingError> {
        let n = atoms.first().map(|(q, _)| q.size());
        let mut index: HashMap<Quasipartition, usize> = HashMap::new();
        let mut support: Vec<(Quasipartition, f64)> = Vec::new();
        let mut total = 0.0;
        for (q, p) in atoms {
            if !(p >= 0.0 && p.is_finite()) {
                return Err(SamplingError::BadDistribution(format!("mass {p}")));
            }
            if Some(q.size()) != n {
                return Err(SamplingError::BadDistribution("members differ in size".into()));
            }
            total += p;
            match index.get(&q) {
                Some(&i) => support[i].1 += p,
                None => {
                    index.insert(q.clone(), support.len());
                    support.push((q, p));
                }
            }
        }
        if (total - 1.0).abs() > 1e-9 {
            return Err(SamplingError::BadDistribution(format!("masses sum to {total}")));
        }
        Ok(Self { support })
    }

    pub fn support(&self) -> &[(Quasipartition, f64)] {
        &self.support
    }

    pub fn size(&self) -> usize {
        self.support.first().map_or(0, |(q, _)| q.size())
    }

    /// `Pr[(x,y) ∉ Q]` for every ordered pair, row-major.
    pub fn separation(&self) -> Vec<f64> {
        let n = self.size();
        let mut out = vec![0.0; n * n];
        for (q, p) in &self.support {
            for x in 0..n {
                for y in 0..n {
                    if !q.contains(x, y) {
                        out[x * n + y] += p;
                    }
                }
            }
        }
        out
    }

    pub fn mass_of(&self, q: &Quasipartition) -> f64 {
        self.support.iter().find(|(s, _)| s == q).map_or(0.0, |(_, p)| *p)
    }
}

pub type Generator<'a> = Box<dyn Fn(&mut ChaCha8Rng) -> Quasipartition + Sync + 'a>;

pub enum QuasipartitionDistribution<'a> {
    Explicit(ExplicitDistribution),
    Sampler { config: SamplerConfig, draw: Generator<'a> },
}

impl<'a> QuasipartitionDistribution<'a> {
    pub fn sampler(config: SamplerConfig, draw: impl Fn(&mut ChaCha8Rng) -> Quasipartition + Sync + 'a) -> Self {
        Self::Sampler {
            config,
            draw: Box::new(draw),
        }
    }

    /// Draws sample `index`; explicit laws have no generator.
    pub fn draw(&self, index: u64) -> Option<Quasipartition> {
        match self {
            Self::Explicit(_) => None,
            Self::Sampler { config, draw } => Some(draw(&mut config.rng(index))),
        }
    }
}

/// Total variation distance between an explicit law and the empirical law
/// of `samples`.
pub fn total_variation(law: &ExplicitDistribution, samples: &[Quasipartition]) -> f64 {
    let mut counts: HashMap<&Quasipartition, usize> = HashMap::new();
    for q in samples {
        *counts.entry(q).or_default() += 1;
    }
    let n = samples.len().max(1) as f64;
    let mut tv = 0.0;
    for (q, p) in law.support() {
        let c = counts.remove(q).unwrap_or(0) as f64;
        tv += (p - c / n).abs();
    }
    tv += counts.values().map(|&c| c as f64 / n).sum::<f64>();
    tv / 2.0
}
