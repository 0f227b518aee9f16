//! Seeded instance generation.
//!
//! Every generator draws from ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
//! `seed_from_u64(seed)`, and picks indices with `random_range`. Both are
//! value-stable across platforms, so a `(kind, n, m, seed)` tuple names the same
//! framework everywhere.

use std::collections::BTreeSet;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::framework::{ArgumentId, Attack, Framework};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GenKind {
    Random,
    Complete,
    SymmetricIrreflexive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenSpec {
    pub n: u32,
    pub m: usize,
    pub seed: u64,
    pub kind: GenKind,
}

impl GenSpec {
    pub fn generate(&self) -> Result<Framework> {
        match self.kind {
            GenKind::Random => random_framework(self.n, self.m, self.seed),
            GenKind::Complete => {
                let f = complete_framework(self.n)?;
                if self.m != f.attack_count() {
                    return Err(Error::precondition(format!(
                        "a complete framework on {} arguments has {} attacks, not {}",
                        self.n,
                        f.attack_count(),
                        self.m
                    )));
                }
                Ok(f)
            }
            GenKind::SymmetricIrreflexive => symmetric_framework(self.n, self.m, self.seed),
        }
    }

    /// `af_<n>_<m>_<seed>.apx`
    pub fn file_name(&self) -> String {
        format!("af_{}_{}_{}.apx", self.n, self.m, self.seed)
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `m` distinct ordered pairs drawn uniformly from all `n * n` pairs,
/// self-attacks included. Duplicate draws are rejected and redrawn.
pub fn random_framework(n: u32, m: usize, seed: u64) -> Result<Framework> {
    if n == 0 {
        return Err(Error::precondition("a framework needs at least one argument"));
    }
    let max = n as usize * n as usize;
    if m > max {
        return Err(Error::precondition(format!(
            "{m} attacks requested but {n} arguments allow at most {max}"
        )));
    }
    let mut rng = rng(seed);
    let mut attacks = BTreeSet::new();
    while attacks.len() < m {
        let s = rng.random_range(0..n);
        let t = rng.random_range(0..n);
        attacks.insert(Attack::new(s, t));
    }
    Framework::new((0..n).map(ArgumentId), attacks)
}

/// Every ordered pair, including all `n` self-attacks.
pub fn complete_framework(n: u32) -> Result<Framework> {
    if n == 0 {
        return Err(Error::precondition("a framework needs at least one argument"));
    }
    Framework::new(
        (0..n).map(ArgumentId),
        (0..n).flat_map(|s| (0..n).map(move |t| Attack::new(s, t))),
    )
}

/// `m / 2` distinct unordered pairs of different arguments, each inserted in
/// both directions.
pub fn symmetric_framework(n: u32, m: usize, seed: u64) -> Result<Framework> {
    if n == 0 {
        return Err(Error::precondition("a framework needs at least one argument"));
    }
    if !m.is_multiple_of(2) {
        return Err(Error::precondition("a symmetric framework needs an even attack count"));
    }
    let max = n as usize * (n as usize - 1);
    if m > max {
        return Err(Error::precondition(format!(
            "{m} symmetric attacks requested but {n} arguments allow at most {max}"
        )));
    }
    let mut rng = rng(seed);
    let mut pairs = BTreeSet::new();
    while pairs.len() < m / 2 {
        let a = rng.random_range(0..n);
        let b = rng.random_range(0..n);
        if a != b {
            pairs.insert((a.min(b), a.max(b)));
        }
    }
    Framework::new(
        (0..n).map(ArgumentId),
        pairs
            .into_iter()
            .flat_map(|(a, b)| [Attack::new(a, b), Attack::new(b, a)]),
    )
}
