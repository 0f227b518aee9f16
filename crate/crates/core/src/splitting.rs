//! Bidirectional splitting under stable semantics.
//!
//! Given a cut `(a1, a2, r3)` of `f0`:
//!
//! 1. [`assume_attacked`] adds to `f1 = f0|a1` one shadow argument `.a` per
//!    argument `a` of `a1` attacked from `a2`, with `a` and `.a` attacking each
//!    other. `.a` is `in` exactly when `a` is `out` and may owe its defeat to
//!    `a2`.
//! 2. The stable extensions `e1` of the modified `f1` are enumerated.
//! 3. For each `e1`, [`remove_attacked`] turns `f2 = f0|a2` into a framework
//!    whose stable extensions are exactly the completions of `e1`.
//! 4. [`combine`] joins each pair; the joined labeling is re-checked on `f0`.
//!
//! Fresh arguments get ids above every id of `f0` and carry their provenance,
//! so stripping them is structural.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::framework::{ArgumentId, Attack, Cut, Extension, Framework, Labeling};
use crate::semantics::{enumerate_stable_until, extension_from_labeling, is_stable_labeling, SearchStrategy};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Provenance {
    /// `.a`: stands for "a is attacked from the other side".
    Shadow(ArgumentId),
    /// `:a`: self-attacking, forces an external attacker of `a` in.
    Gadget(ArgumentId),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FreshArgument {
    pub id: ArgumentId,
    pub provenance: Provenance,
}

/// A sub-framework after the splitting modifications.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModifiedFramework {
    /// The unmodified restriction the modifications started from.
    pub base: Framework,
    pub framework: Framework,
    pub fresh: Vec<FreshArgument>,
    pub removed: BTreeSet<ArgumentId>,
    /// Attacks added before any removal took place.
    pub added_attacks: usize,
}

impl ModifiedFramework {
    pub fn fresh_for(&self, provenance: Provenance) -> Option<ArgumentId> {
        self.fresh
            .iter()
            .find(|fa| fa.provenance == provenance)
            .map(|fa| fa.id)
    }

    pub fn is_fresh(&self, a: ArgumentId) -> bool {
        self.fresh.iter().any(|fa| fa.id == a)
    }
}

fn first_fresh_id(cut: &Cut) -> u32 {
    cut.a1
        .iter()
        .chain(&cut.a2)
        .map(|a| a.0)
        .max()
        .map_or(0, |m| m + 1)
}

fn named(f: &Framework, ids: impl IntoIterator<Item = ArgumentId>) -> Vec<(ArgumentId, Arc<str>)> {
    ids.into_iter()
        .map(|a| (a, f.name_arc(a).expect("argument has a name")))
        .collect()
}

/// Adds a shadow `.a` with attacks `(a, .a)` and `(.a, a)` for every distinct
/// `a` in `f1` that is attacked from outside `f1` by an attack in `cut.r3`.
pub fn assume_attacked(f1: &Framework, cut: &Cut) -> ModifiedFramework {
    let mut next = first_fresh_id(cut).max(f1.max_id().map_or(0, |m| m.0 + 1));
    let mut args = named(f1, f1.arguments().iter().copied());
    let mut attacks: BTreeSet<Attack> = f1.attacks().iter().copied().collect();
    let mut fresh = Vec::new();
    let mut shadowed = BTreeSet::new();

    for at in &cut.r3 {
        let a = at.target;
        if f1.contains(a) && !f1.contains(at.source) && shadowed.insert(a) {
            let shadow = ArgumentId(next);
            next += 1;
            let name = format!(".{}", f1.name(a).unwrap());
            args.push((shadow, Arc::from(name)));
            attacks.insert(Attack::new(a, shadow));
            attacks.insert(Attack::new(shadow, a));
            fresh.push(FreshArgument {
                id: shadow,
                provenance: Provenance::Shadow(a),
            });
        }
    }
    let added_attacks = 2 * fresh.len();
    ModifiedFramework {
        base: f1.clone(),
        framework: Framework::from_parts(args, attacks.into_iter().collect()),
        fresh,
        removed: BTreeSet::new(),
        added_attacks,
    }
}

/// Builds the modified `f2` for one stable extension `e1` of the modified `f1`.
///
/// With `E = e1 ∩ a1`, in two passes over `r3`:
///
/// * gadgets and self-loops, for `(b, a)` with `b ∈ a2`, `a ∈ a1`:
///   - `a ∉ E` and no attacker of `a` is in `E`: ensure a self-attacking gadget
///     `:a` exists and add `(b, :a)`;
///   - `a ∈ E`: add `(b, b)`;
/// * removals, for `(b, a)` with `b ∈ E`, `a ∈ a2`: drop `a` and every attack
///   touching it, gadget attacks included.
pub fn remove_attacked(f0: &Framework, cut: &Cut, e1: &Extension) -> Result<ModifiedFramework> {
    cut.verify(f0)?;
    let f1m = assume_attacked(&f0.restrict_unchecked(&cut.a1), cut);
    if !f1m.framework.is_stable_extension(e1) {
        return Err(Error::precondition(
            "e1 is not a stable extension of the modified first part",
        ));
    }
    Ok(remove_attacked_unchecked(f0, cut, &f0.restrict_unchecked(&cut.a2), e1))
}

fn remove_attacked_unchecked(f0: &Framework, cut: &Cut, f2: &Framework, e1: &Extension) -> ModifiedFramework {
    let in_e = |a: ArgumentId| cut.a1.contains(&a) && e1.contains(a);
    let mut next = first_fresh_id(cut);
    let mut added: BTreeSet<Attack> = BTreeSet::new();
    let mut gadgets: BTreeMap<ArgumentId, ArgumentId> = BTreeMap::new();
    let mut fresh = Vec::new();

    for at in &cut.r3 {
        let (b, a) = (at.source, at.target);
        if !(cut.a2.contains(&b) && cut.a1.contains(&a)) {
            continue;
        }
        if in_e(a) {
            if !f2.contains_attack(Attack::new(b, b)) {
                added.insert(Attack::new(b, b));
            }
        } else if !f0.attackers(a).any(in_e) {
            let gadget = *gadgets.entry(a).or_insert_with(|| {
                let g = ArgumentId(next);
                next += 1;
                fresh.push(FreshArgument {
                    id: g,
                    provenance: Provenance::Gadget(a),
                });
                g
            });
            added.insert(Attack::new(gadget, gadget));
            added.insert(Attack::new(b, gadget));
        }
    }
    let added_attacks = added.len();

    let removed: BTreeSet<ArgumentId> = cut
        .r3
        .iter()
        .filter(|at| in_e(at.source) && cut.a2.contains(&at.target))
        .map(|at| at.target)
        .collect();

    let mut args = named(f2, f2.arguments().iter().copied().filter(|a| !removed.contains(a)));
    for fa in &fresh {
        let Provenance::Gadget(a) = fa.provenance else { unreachable!() };
        args.push((fa.id, Arc::from(format!(":{}", f0.name(a).unwrap()))));
    }
    let attacks: Vec<Attack> = f2
        .attacks()
        .iter()
        .copied()
        .chain(added)
        .filter(|at| !removed.contains(&at.source) && !removed.contains(&at.target))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();

    ModifiedFramework {
        base: f2.clone(),
        framework: Framework::from_parts(args, attacks),
        fresh,
        removed,
        added_attacks,
    }
}

/// `in = (e1 ∩ a1) ∪ (e2 ∩ a2)`, everything else of `f0` is `out`.
pub fn combine(e1: &Extension, e2: &Extension, cut: &Cut, f0: &Framework) -> Labeling {
    let in_: BTreeSet<ArgumentId> = e1
        .iter()
        .filter(|a| cut.a1.contains(a))
        .chain(e2.iter().filter(|a| cut.a2.contains(a)))
        .copied()
        .collect();
    let out = f0
        .arguments()
        .iter()
        .copied()
        .filter(|a| !in_.contains(a))
        .collect();
    Labeling {
        in_,
        out,
        undec: BTreeSet::new(),
    }
}

/// What happened for one stable extension of the modified first part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Branch {
    pub e1: Extension,
    pub f2_arguments: usize,
    pub f2_attacks: usize,
    pub gadgets: usize,
    pub added_attacks: usize,
    pub removed: usize,
    pub f2_labelings: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitResult {
    pub cut: Cut,
    pub f1_modified: ModifiedFramework,
    pub f1_labelings: usize,
    pub f2_runs: usize,
    pub branches: Vec<Branch>,
    /// Sorted.
    pub combined: Vec<Labeling>,
    /// Joined labelings that failed the final stability check on `f0`.
    pub discarded: usize,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SplitOptions {
    pub strategy: SearchStrategy,
    pub deadline: Option<Instant>,
}

pub fn split_enumerate_stable(f0: &Framework, cut: &Cut) -> Result<SplitResult> {
    split_enumerate_stable_with(f0, cut, &SplitOptions::default())
}

pub fn split_enumerate_stable_with(f0: &Framework, cut: &Cut, opts: &SplitOptions) -> Result<SplitResult> {
    cut.verify(f0)?;
    let f1 = f0.restrict_unchecked(&cut.a1);
    let f2 = f0.restrict_unchecked(&cut.a2);
    let f1m = assume_attacked(&f1, cut);
    let f1_labelings = enumerate_stable_until(&f1m.framework, opts.strategy, opts.deadline)?;

    let mut branches = Vec::with_capacity(f1_labelings.len());
    let mut combined = BTreeSet::new();
    let mut discarded = 0;
    for l1 in &f1_labelings {
        let e1 = extension_from_labeling(l1);
        let f2m = remove_attacked_unchecked(f0, cut, &f2, &e1);
        let f2_labelings = enumerate_stable_until(&f2m.framework, opts.strategy, opts.deadline)?;
        for l2 in &f2_labelings {
            let l = combine(&e1, &extension_from_labeling(l2), cut, f0);
            if is_stable_labeling(f0, &l) {
                combined.insert(l);
            } else {
                discarded += 1;
            }
        }
        branches.push(Branch {
            e1,
            f2_arguments: f2m.framework.len(),
            f2_attacks: f2m.framework.attack_count(),
            gadgets: f2m.fresh.len(),
            added_attacks: f2m.added_attacks,
            removed: f2m.removed.len(),
            f2_labelings: f2_labelings.len(),
        });
    }

    Ok(SplitResult {
        cut: cut.clone(),
        f1_labelings: f1_labelings.len(),
        f2_runs: branches.len(),
        f1_modified: f1m,
        branches,
        combined: combined.into_iter().collect(),
        discarded,
    })
}
