//! Stable semantics: label legality, stable-labeling checks, the labeling
//! search, and an exhaustive subset oracle used to check it.
//!
//! The search starts from the labeling where every argument is `in` and
//! repeatedly applies a transition step to an illegally-in argument: the
//! argument is relabeled `out`, and every argument that the step leaves
//! illegally `out` is relabeled `undec`. Under stable semantics a branch that
//! produces an `undec` argument can never recover (labels only move from `in`
//! to `out`), so it is abandoned immediately. Leaves without illegally-in
//! arguments are stable labelings.
//!
//! Every illegally-in argument is a branching choice. Different orders of the
//! same transitions reach the same labeling, so visited labelings are
//! remembered and each is expanded once.

use std::collections::{BTreeSet, HashSet};
use std::time::Instant;

use fixedbitset::FixedBitSet;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::framework::{ArgumentId, Extension, Framework, Labeling, LegalityStatus};

/// Largest framework the subset oracle accepts.
pub const BRUTE_FORCE_LIMIT: usize = 24;

/// Order in which illegally-in arguments are tried. Only the traversal order
/// depends on it, never the result.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SearchStrategy {
    #[default]
    LowestId,
    SeededRandom(u64),
}

pub fn argument_legality(f: &Framework, l: &Labeling, a: ArgumentId) -> LegalityStatus {
    let all_attackers_out = f.attackers(a).all(|b| l.out.contains(&b));
    let some_attacker_in = f.attackers(a).any(|b| l.in_.contains(&b));
    if l.in_.contains(&a) {
        if all_attackers_out {
            LegalityStatus::LegallyIn
        } else {
            LegalityStatus::IllegallyIn
        }
    } else if l.out.contains(&a) {
        if some_attacker_in {
            LegalityStatus::LegallyOut
        } else {
            LegalityStatus::IllegallyOut
        }
    } else if !all_attackers_out && !some_attacker_in {
        LegalityStatus::LegallyUndec
    } else {
        LegalityStatus::IllegallyUndec
    }
}

/// No illegally-in, illegally-out or legally-undec argument, and `undec` is
/// empty. Returns `false` when `l` is not a labeling of `f`.
pub fn is_stable_labeling(f: &Framework, l: &Labeling) -> bool {
    if !l.is_labeling_of(f) || !l.undec.is_empty() {
        return false;
    }
    f.arguments().iter().all(|&a| {
        !matches!(
            argument_legality(f, l, a),
            LegalityStatus::IllegallyIn | LegalityStatus::IllegallyOut | LegalityStatus::LegallyUndec
        )
    })
}

/// The extension-based reading of the same condition: `in` is a stable
/// extension and the rest is `out`.
pub fn is_stable_by_extension(f: &Framework, l: &Labeling) -> bool {
    l.is_labeling_of(f) && l.undec.is_empty() && f.is_stable_extension(&Extension::new(l.in_.clone()))
}

pub fn labeling_from_extension(f: &Framework, e: &Extension) -> Result<Labeling> {
    if !f.is_stable_extension(e) {
        return Err(Error::NotStable);
    }
    Ok(Labeling::from_in_set(f, e))
}

pub fn extension_from_labeling(l: &Labeling) -> Extension {
    Extension::new(l.in_.clone())
}

/// All stable extensions by checking every subset of the arguments.
pub fn enumerate_stable_bruteforce(f: &Framework) -> Result<BTreeSet<Extension>> {
    let n = f.len();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::precondition(format!(
            "brute-force enumeration is limited to {BRUTE_FORCE_LIMIT} arguments, got {n}"
        )));
    }
    let mut attacks_of = vec![0u32; n];
    for (pos, mask) in attacks_of.iter_mut().enumerate() {
        for &t in f.targets_at(pos) {
            *mask |= 1 << t;
        }
    }
    let full: u32 = (1u32 << n) - 1;
    let mut found = BTreeSet::new();
    for set in 0..=full {
        let mut attacked = 0u32;
        let mut rest = set;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            attacked |= attacks_of[i];
        }
        if attacked & set == 0 && (attacked | set) == full {
            found.insert(
                (0..n)
                    .filter(|i| set >> i & 1 == 1)
                    .map(|i| f.id_at(i))
                    .collect(),
            );
        }
    }
    Ok(found)
}

/// Counters from one run of the labeling search.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub expanded: u64,
    pub pruned: u64,
}

/// Stable labelings of `f`, sorted.
pub fn enumerate_stable(f: &Framework, strategy: SearchStrategy) -> Vec<Labeling> {
    enumerate_stable_until(f, strategy, None).expect("search without a deadline cannot time out")
}

/// Like [`enumerate_stable`], giving up with [`Error::TimedOut`] once
/// `deadline` has passed.
pub fn enumerate_stable_until(
    f: &Framework,
    strategy: SearchStrategy,
    deadline: Option<Instant>,
) -> Result<Vec<Labeling>> {
    Ok(search(f, strategy, deadline)?.0)
}

pub fn enumerate_stable_with_stats(
    f: &Framework,
    strategy: SearchStrategy,
    deadline: Option<Instant>,
) -> Result<(Vec<Labeling>, SearchStats)> {
    search(f, strategy, deadline)
}

const DEADLINE_CHECK_EVERY: u64 = 128;

fn search(
    f: &Framework,
    strategy: SearchStrategy,
    deadline: Option<Instant>,
) -> Result<(Vec<Labeling>, SearchStats)> {
    let n = f.len();
    let mut rng = match strategy {
        SearchStrategy::LowestId => None,
        SearchStrategy::SeededRandom(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
    };
    let mut stats = SearchStats::default();
    let mut leaves: BTreeSet<Labeling> = BTreeSet::new();

    let mut root = FixedBitSet::with_capacity(n);
    root.insert_range(..);
    let mut visited: HashSet<FixedBitSet> = HashSet::new();
    visited.insert(root.clone());
    let mut stack = vec![root];
    let mut candidates: Vec<usize> = Vec::with_capacity(n);

    while let Some(labels_in) = stack.pop() {
        stats.expanded += 1;
        if stats.expanded % DEADLINE_CHECK_EVERY == 0 {
            if let Some(d) = deadline {
                if Instant::now() >= d {
                    return Err(Error::TimedOut);
                }
            }
        }

        candidates.clear();
        candidates.extend(labels_in.ones().filter(|&a| {
            f.attackers_at(a).iter().any(|&b| labels_in.contains(b as usize))
        }));

        if candidates.is_empty() {
            leaves.insert(to_labeling(f, &labels_in));
            continue;
        }
        if let Some(rng) = rng.as_mut() {
            candidates.shuffle(rng);
        }

        // Pushed in reverse so the first candidate is expanded first.
        for &x in candidates.iter().rev() {
            let mut next = labels_in.clone();
            next.set(x, false);
            if makes_undec(f, &next, x) {
                stats.pruned += 1;
                continue;
            }
            if visited.insert(next.clone()) {
                stack.push(next);
            }
        }
    }
    Ok((leaves.into_iter().collect(), stats))
}

/// After `x` moved to `out`, does `x` or one of its out-labeled targets lack
/// an attacker labeled `in`? Such an argument would be relabeled `undec`.
fn makes_undec(f: &Framework, labels_in: &FixedBitSet, x: usize) -> bool {
    let illegally_out = |z: usize| {
        !f.attackers_at(z)
            .iter()
            .any(|&b| labels_in.contains(b as usize))
    };
    illegally_out(x)
        || f.targets_at(x)
            .iter()
            .map(|&z| z as usize)
            .any(|z| z != x && !labels_in.contains(z) && illegally_out(z))
}

fn to_labeling(f: &Framework, labels_in: &FixedBitSet) -> Labeling {
    let mut l = Labeling::default();
    for pos in 0..f.len() {
        if labels_in.contains(pos) {
            l.in_.insert(f.id_at(pos));
        } else {
            l.out.insert(f.id_at(pos));
        }
    }
    l
}
