//! Argumentation frameworks: arguments, the attack relation, and the
//! structural predicates the rest of the crate is built on.
//!
//! Arguments are dense integer ids with a side table of display names. A
//! framework produced by parsing or generation uses ids `0..n`; restrictions
//! and modified sub-frameworks keep the ids of the framework they came from so
//! that results can be combined without any renaming.

pub(crate) mod cut;
mod labeling;
mod scc;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock};

pub use cut::{cross_attacks, is_unidirectional, Cut};
pub use labeling::{Extension, Label, Labeling, LegalityStatus};
pub use scc::scc_decomposition;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct ArgumentId(pub u32);

impl ArgumentId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for ArgumentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u32> for ArgumentId {
    fn from(v: u32) -> Self {
        ArgumentId(v)
    }
}

/// `source` attacks `target`. Ordered lexicographically by (source, target).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Attack {
    pub source: ArgumentId,
    pub target: ArgumentId,
}

impl Attack {
    pub fn new(source: impl Into<ArgumentId>, target: impl Into<ArgumentId>) -> Self {
        Attack {
            source: source.into(),
            target: target.into(),
        }
    }

    pub fn is_self_attack(&self) -> bool {
        self.source == self.target
    }
}

impl fmt::Display for Attack {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.source, self.target)
    }
}

/// A structural problem found by [`validate_framework`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    EmptyArgumentSet,
    DuplicateArgument(ArgumentId),
    DuplicateName(String),
    DanglingEndpoint(ArgumentId),
    DuplicateAttack(Attack),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyArgumentSet => write!(f, "empty argument set"),
            Violation::DuplicateArgument(a) => write!(f, "duplicate argument {a}"),
            Violation::DuplicateName(n) => write!(f, "duplicate name {n}"),
            Violation::DanglingEndpoint(a) => write!(f, "dangling endpoint {a}"),
            Violation::DuplicateAttack(at) => write!(f, "duplicate attack {at}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks raw framework parts. Every violation is reported, not just the first.
pub fn validate_framework(arguments: &[ArgumentId], attacks: &[Attack]) -> ValidationReport {
    let mut violations = Vec::new();
    if arguments.is_empty() {
        violations.push(Violation::EmptyArgumentSet);
    }
    let mut seen = BTreeSet::new();
    for &a in arguments {
        if !seen.insert(a) {
            violations.push(Violation::DuplicateArgument(a));
        }
    }
    let mut dangling = BTreeSet::new();
    let mut seen_attacks = BTreeSet::new();
    for &at in attacks {
        for end in [at.source, at.target] {
            if !seen.contains(&end) && dangling.insert(end) {
                violations.push(Violation::DanglingEndpoint(end));
            }
        }
        if !seen_attacks.insert(at) {
            violations.push(Violation::DuplicateAttack(at));
        }
    }
    ValidationReport { violations }
}

const NO_SLOT: u32 = u32::MAX;

/// An argumentation framework `(A, R)`.
///
/// Immutable once built. Adjacency is stored by position in the sorted
/// argument list; positions are what the solvers work with internally.
#[derive(Clone)]
pub struct Framework {
    args: Vec<ArgumentId>,
    names: Vec<Arc<str>>,
    attacks: Vec<Attack>,
    slot: Vec<u32>,
    attackers: Vec<Vec<u32>>,
    targets: Vec<Vec<u32>>,
    by_name: OnceLock<HashMap<Arc<str>, ArgumentId>>,
}

impl Framework {
    /// Builds a framework whose arguments get the default names `a<id>`.
    pub fn new(
        arguments: impl IntoIterator<Item = ArgumentId>,
        attacks: impl IntoIterator<Item = Attack>,
    ) -> Result<Self> {
        let named = arguments
            .into_iter()
            .map(|a| (a, default_name(a)))
            .collect::<Vec<_>>();
        Self::with_names(named, attacks)
    }

    pub fn with_names(
        arguments: Vec<(ArgumentId, String)>,
        attacks: impl IntoIterator<Item = Attack>,
    ) -> Result<Self> {
        let attacks: Vec<Attack> = attacks.into_iter().collect();
        let ids: Vec<ArgumentId> = arguments.iter().map(|(a, _)| *a).collect();
        let mut report = validate_framework(&ids, &attacks);
        let mut names = BTreeSet::new();
        for (_, n) in &arguments {
            if !names.insert(n.as_str()) {
                report.violations.push(Violation::DuplicateName(n.clone()));
            }
        }
        if !report.is_ok() {
            return Err(Error::InvalidFramework(report.violations));
        }
        let mut named: Vec<(ArgumentId, Arc<str>)> =
            arguments.into_iter().map(|(a, n)| (a, Arc::from(n))).collect();
        named.sort_by_key(|(a, _)| *a);
        let mut attacks = attacks;
        attacks.sort_unstable();
        Ok(Self::from_parts(named, attacks))
    }

    /// Framework over ids `0..n` with the given attack pairs.
    pub fn from_pairs(n: u32, pairs: &[(u32, u32)]) -> Result<Self> {
        Self::new(
            (0..n).map(ArgumentId),
            pairs.iter().map(|&(s, t)| Attack::new(s, t)),
        )
    }

    /// Assembles a framework from parts that are already known to be valid:
    /// arguments sorted and unique, attacks sorted, unique and internal.
    /// The argument list may be empty here; modified sub-frameworks can lose
    /// every argument.
    pub(crate) fn from_parts(named: Vec<(ArgumentId, Arc<str>)>, attacks: Vec<Attack>) -> Self {
        debug_assert!(named.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(attacks.windows(2).all(|w| w[0] < w[1]));
        let (args, names): (Vec<_>, Vec<_>) = named.into_iter().unzip();
        let max = args.last().map_or(0, |a| a.index() + 1);
        let mut slot = vec![NO_SLOT; max];
        for (pos, a) in args.iter().enumerate() {
            slot[a.index()] = pos as u32;
        }
        let mut attackers = vec![Vec::new(); args.len()];
        let mut targets = vec![Vec::new(); args.len()];
        for at in &attacks {
            let s = slot[at.source.index()];
            let t = slot[at.target.index()];
            debug_assert!(s != NO_SLOT && t != NO_SLOT);
            targets[s as usize].push(t);
            attackers[t as usize].push(s);
        }
        Framework {
            args,
            names,
            attacks,
            slot,
            attackers,
            targets,
            by_name: OnceLock::new(),
        }
    }

    pub fn arguments(&self) -> &[ArgumentId] {
        &self.args
    }

    /// Attacks in lexicographic (source, target) order.
    pub fn attacks(&self) -> &[Attack] {
        &self.attacks
    }

    pub fn len(&self) -> usize {
        self.args.len()
    }

    pub fn is_empty(&self) -> bool {
        self.args.is_empty()
    }

    pub fn attack_count(&self) -> usize {
        self.attacks.len()
    }

    pub fn max_id(&self) -> Option<ArgumentId> {
        self.args.last().copied()
    }

    pub fn contains(&self, a: ArgumentId) -> bool {
        self.position(a).is_some()
    }

    pub fn contains_attack(&self, at: Attack) -> bool {
        self.attacks.binary_search(&at).is_ok()
    }

    pub fn position(&self, a: ArgumentId) -> Option<usize> {
        match self.slot.get(a.index()) {
            Some(&p) if p != NO_SLOT => Some(p as usize),
            _ => None,
        }
    }

    pub(crate) fn id_at(&self, pos: usize) -> ArgumentId {
        self.args[pos]
    }

    pub(crate) fn attackers_at(&self, pos: usize) -> &[u32] {
        &self.attackers[pos]
    }

    pub(crate) fn targets_at(&self, pos: usize) -> &[u32] {
        &self.targets[pos]
    }

    /// Attackers of `a` in ascending id order.
    pub fn attackers(&self, a: ArgumentId) -> impl Iterator<Item = ArgumentId> + '_ {
        let list = self.position(a).map_or(&[][..], |p| &self.attackers[p][..]);
        list.iter().map(|&p| self.args[p as usize])
    }

    /// Targets of `a` in ascending id order.
    pub fn targets(&self, a: ArgumentId) -> impl Iterator<Item = ArgumentId> + '_ {
        let list = self.position(a).map_or(&[][..], |p| &self.targets[p][..]);
        list.iter().map(|&p| self.args[p as usize])
    }

    pub fn name(&self, a: ArgumentId) -> Option<&str> {
        self.position(a).map(|p| &*self.names[p])
    }

    pub(crate) fn name_arc(&self, a: ArgumentId) -> Option<Arc<str>> {
        self.position(a).map(|p| self.names[p].clone())
    }

    pub fn id_of(&self, name: &str) -> Option<ArgumentId> {
        self.by_name
            .get_or_init(|| {
                self.names
                    .iter()
                    .cloned()
                    .zip(self.args.iter().copied())
                    .collect()
            })
            .get(name)
            .copied()
    }

    /// The sub-framework induced by `s`: arguments `s` and every attack with
    /// both endpoints in `s`. Names and ids are preserved.
    pub fn restrict(&self, s: &BTreeSet<ArgumentId>) -> Result<Framework> {
        if s.is_empty() {
            return Err(Error::precondition("cannot restrict to an empty set"));
        }
        if let Some(&a) = s.iter().find(|&&a| !self.contains(a)) {
            return Err(Error::UnknownArgument(a));
        }
        Ok(self.restrict_unchecked(s))
    }

    pub(crate) fn restrict_unchecked(&self, s: &BTreeSet<ArgumentId>) -> Framework {
        let named = s
            .iter()
            .map(|&a| (a, self.names[self.position(a).unwrap()].clone()))
            .collect();
        let attacks = self
            .attacks
            .iter()
            .filter(|at| s.contains(&at.source) && s.contains(&at.target))
            .copied()
            .collect();
        Framework::from_parts(named, attacks)
    }

    /// No attack has both endpoints in `s`.
    pub fn is_conflict_free(&self, s: &Extension) -> bool {
        s.iter()
            .all(|&a| self.targets(a).all(|t| !s.contains(t)))
    }

    /// Every attacker of `a` is attacked by some member of `s`.
    pub fn is_acceptable(&self, s: &Extension, a: ArgumentId) -> bool {
        self.attackers(a)
            .all(|b| self.attackers(b).any(|c| s.contains(c)))
    }

    /// Conflict-free and attacks every argument outside `s`.
    pub fn is_stable_extension(&self, s: &Extension) -> bool {
        if !s.iter().all(|&a| self.contains(a)) || !self.is_conflict_free(s) {
            return false;
        }
        self.args
            .iter()
            .filter(|a| !s.contains(**a))
            .all(|&a| self.attackers(a).any(|b| s.contains(b)))
    }
}

impl PartialEq for Framework {
    fn eq(&self, other: &Self) -> bool {
        self.args == other.args && self.names == other.names && self.attacks == other.attacks
    }
}

impl Eq for Framework {}

impl fmt::Debug for Framework {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Framework")
            .field("arguments", &self.args)
            .field("attacks", &self.attacks)
            .finish()
    }
}

pub(crate) fn default_name(a: ArgumentId) -> String {
    format!("a{}", a.0)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// The five-argument framework with a single stable extension {1, 4}.
    pub fn f_ex() -> Framework {
        Framework::from_pairs(5, &[(4, 0), (4, 3), (0, 1), (1, 2), (2, 0)]).unwrap()
    }

    pub fn ids(v: &[u32]) -> BTreeSet<ArgumentId> {
        v.iter().map(|&a| ArgumentId(a)).collect()
    }

    pub fn ext(v: &[u32]) -> Extension {
        Extension::from_iter(v.iter().map(|&a| ArgumentId(a)))
    }

    #[test]
    fn dangling_endpoint_is_reported() {
        let args: Vec<_> = (0..5).map(ArgumentId).collect();
        let report = validate_framework(&args, &[Attack::new(0, 7)]);
        assert_eq!(report.violations, vec![Violation::DanglingEndpoint(ArgumentId(7))]);
        assert_eq!(report.violations[0].to_string(), "dangling endpoint 7");
    }

    #[test]
    fn example_framework_validates() {
        let f = f_ex();
        assert!(validate_framework(f.arguments(), f.attacks()).is_ok());
    }

    #[test]
    fn empty_and_duplicates() {
        let report = validate_framework(&[], &[]);
        assert_eq!(report.violations, vec![Violation::EmptyArgumentSet]);
        assert_eq!(report.violations[0].to_string(), "empty argument set");

        let err = Framework::from_pairs(2, &[(0, 1), (0, 1)]).unwrap_err();
        assert!(matches!(err, Error::InvalidFramework(ref v) if v == &[Violation::DuplicateAttack(Attack::new(0, 1))]));
        assert!(Framework::from_pairs(0, &[]).is_err());
    }

    #[test]
    fn self_attacks_are_allowed() {
        let f = Framework::from_pairs(1, &[(0, 0)]).unwrap();
        assert_eq!(f.attackers(ArgumentId(0)).collect::<Vec<_>>(), vec![ArgumentId(0)]);
    }

    #[test]
    fn conflict_freeness() {
        let f = f_ex();
        assert!(f.is_conflict_free(&ext(&[1, 4])));
        assert!(!f.is_conflict_free(&ext(&[0, 1])));
        assert!(f.is_conflict_free(&ext(&[])));
    }

    #[test]
    fn acceptability() {
        let f = f_ex();
        // 0 attacks 1 and 4 attacks 0.
        assert!(f.is_acceptable(&ext(&[4]), ArgumentId(1)));
        assert!(f.is_acceptable(&ext(&[]), ArgumentId(4)));
        assert!(!f.is_acceptable(&ext(&[]), ArgumentId(1)));

        let selfish = Framework::from_pairs(1, &[(0, 0)]).unwrap();
        assert!(selfish.is_acceptable(&ext(&[0]), ArgumentId(0)));
    }

    #[test]
    fn restriction() {
        let f = f_ex();
        let r = f.restrict(&ids(&[0, 3, 4])).unwrap();
        assert_eq!(r.attacks(), &[Attack::new(4, 0), Attack::new(4, 3)]);
        assert_eq!(r.name(ArgumentId(3)), Some("a3"));

        assert_eq!(f.restrict(&ids(&[0, 1, 2, 3, 4])).unwrap(), f);
        assert_eq!(f.restrict(&ids(&[1, 2])).unwrap().attacks(), &[Attack::new(1, 2)]);
        assert!(f.restrict(&ids(&[])).is_err());
        assert!(matches!(f.restrict(&ids(&[9])), Err(Error::UnknownArgument(_))));
    }

    #[test]
    fn names_round_trip() {
        let f = Framework::with_names(
            vec![(ArgumentId(0), "x".into()), (ArgumentId(1), "y".into())],
            [Attack::new(0, 1)],
        )
        .unwrap();
        for &a in f.arguments() {
            assert_eq!(f.id_of(f.name(a).unwrap()), Some(a));
        }
        assert!(Framework::with_names(
            vec![(ArgumentId(0), "x".into()), (ArgumentId(1), "x".into())],
            []
        )
        .is_err());
    }
}
