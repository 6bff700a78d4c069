//! Seeded random instances whose majorization premise holds by construction.
//!
//! The default sampler starts from `A + B`, applies random Dalton transfers
//! (one unit from a part to a strictly smaller one) to obtain some
//! `e ≺ A + B`, deals the parts of `e` into `k` groups and adds each group to
//! a random non-increasing `t^i`. The union of the differences `d^i − t^i`
//! is then exactly `e`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::translation::{lemma_to_theorem, LemmaInstance, TheoremInstance};
use crate::Partition;

const REJECTION_ATTEMPTS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeneratorError {
    #[error("invalid generator configuration: {0}")]
    Config(String),
    #[error("rejection sampler found no premise-satisfying instance in {0} attempts")]
    RejectionExhausted(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum GeneratorMode {
    #[default]
    Lemma,
    Theorem,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Sampler {
    #[default]
    Dalton,
    Rejection,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub seed: u64,
    pub k: usize,
    pub s: usize,
    pub max_part: u64,
    pub max_transfer_steps: usize,
    #[serde(default)]
    pub mode: GeneratorMode,
    #[serde(default)]
    pub sampler: Sampler,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            k: 2,
            s: 3,
            max_part: 3,
            max_transfer_steps: 4,
            mode: GeneratorMode::Lemma,
            sampler: Sampler::Dalton,
        }
    }
}

impl GeneratorConfig {
    fn validate(&self) -> Result<(), GeneratorError> {
        if self.k == 0 {
            return Err(GeneratorError::Config("k must be at least 1".into()));
        }
        if self.s == 0 {
            return Err(GeneratorError::Config("s must be at least 1".into()));
        }
        if self.max_part > u64::from(u16::MAX) {
            return Err(GeneratorError::Config(format!(
                "max_part {} is larger than {}",
                self.max_part,
                u16::MAX
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum GeneratedInstance {
    Lemma(LemmaInstance),
    Theorem(TheoremInstance),
}

/// Deterministic stream of instances: equal configurations give equal streams.
pub struct InstanceStream {
    config: GeneratorConfig,
    rng: ChaCha8Rng,
}

impl InstanceStream {
    pub fn new(config: GeneratorConfig) -> Result<Self, GeneratorError> {
        config.validate()?;
        let rng = ChaCha8Rng::seed_from_u64(config.seed);
        Ok(Self { config, rng })
    }

    pub fn config(&self) -> &GeneratorConfig {
        &self.config
    }

    pub fn next_lemma(&mut self) -> Result<LemmaInstance, GeneratorError> {
        match self.config.sampler {
            Sampler::Dalton => Ok(self.dalton()),
            Sampler::Rejection => self.rejection(),
        }
    }

    pub fn next_theorem(&mut self) -> Result<TheoremInstance, GeneratorError> {
        let lemma = self.next_lemma()?;
        Ok(lemma_to_theorem(&lemma).expect("generated instances satisfy the premise"))
    }

    /// Next instance in the configured mode.
    pub fn next_instance(&mut self) -> Result<GeneratedInstance, GeneratorError> {
        Ok(match self.config.mode {
            GeneratorMode::Lemma => GeneratedInstance::Lemma(self.next_lemma()?),
            GeneratorMode::Theorem => GeneratedInstance::Theorem(self.next_theorem()?),
        })
    }

    fn random_partition(&mut self, len: usize) -> Partition {
        let max = self.config.max_part;
        Partition::from_unsorted((0..len).map(|_| self.rng.gen_range(0..=max)))
    }

    fn dalton(&mut self) -> LemmaInstance {
        let s = self.config.s;
        let a = self.random_partition(s);
        let b = self.random_partition(s);
        let mut e = a.plus(&b).into_parts();
        let steps = self.rng.gen_range(0..=self.config.max_transfer_steps);
        for _ in 0..steps {
            if e.is_empty() {
                break;
            }
            let donor = self.rng.gen_range(0..e.len());
            // receivers: strictly smaller parts, or a fresh zero part at the end
            let receivers: Vec<usize> = (0..=e.len())
                .filter(|&j| j != donor && e.get(j).copied().unwrap_or(0) < e[donor])
                .collect();
            let &receiver = receivers
                .choose(&mut self.rng)
                .expect("a fresh zero part always qualifies");
            e[donor] -= 1;
            if receiver == e.len() {
                e.push(1);
            } else {
                e[receiver] += 1;
            }
            e = Partition::from_unsorted(e).into_parts();
        }

        let k = self.config.k;
        let mut groups: Vec<Vec<u64>> = vec![Vec::new(); k];
        for part in e {
            groups[self.rng.gen_range(0..k)].push(part);
        }
        let pairs = groups
            .into_iter()
            .map(|g| {
                let t = self.random_partition(s);
                let d = t.plus(&Partition::from_unsorted(g));
                (d, t)
            })
            .collect();
        LemmaInstance::new(pairs, a, b).expect("d = t + group dominates t")
    }

    fn rejection(&mut self) -> Result<LemmaInstance, GeneratorError> {
        let (k, s) = (self.config.k, self.config.s);
        for _ in 0..REJECTION_ATTEMPTS {
            let pairs = (0..k)
                .map(|_| {
                    let t = self.random_partition(s);
                    let gap = self.random_partition(s);
                    (t.plus(&gap), t)
                })
                .collect();
            let a = self.random_partition(s);
            let b = self.random_partition(s);
            let inst = LemmaInstance::new(pairs, a, b).expect("d = t + gap dominates t");
            if inst.premise_holds() {
                return Ok(inst);
            }
        }
        Err(GeneratorError::RejectionExhausted(REJECTION_ATTEMPTS))
    }
}

/// First instance of the stream for `config`.
pub fn generate_lemma_instance(config: &GeneratorConfig) -> Result<LemmaInstance, GeneratorError> {
    InstanceStream::new(config.clone())?.next_lemma()
}

pub fn generate_theorem_instance(
    config: &GeneratorConfig,
) -> Result<TheoremInstance, GeneratorError> {
    InstanceStream::new(config.clone())?.next_theorem()
}
