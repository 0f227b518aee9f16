use std::collections::BTreeSet;
use std::fmt;

use super::{ArgumentId, Framework};
use crate::error::{Error, Result};

/// A set of arguments, typically the `in` part of a labeling.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Extension(BTreeSet<ArgumentId>);

impl Extension {
    pub fn new(members: BTreeSet<ArgumentId>) -> Self {
        Extension(members)
    }

    pub fn members(&self) -> &BTreeSet<ArgumentId> {
        &self.0
    }

    pub fn into_members(self) -> BTreeSet<ArgumentId> {
        self.0
    }

    pub fn contains(&self, a: ArgumentId) -> bool {
        self.0.contains(&a)
    }

    pub fn iter(&self) -> impl Iterator<Item = &ArgumentId> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromIterator<ArgumentId> for Extension {
    fn from_iter<I: IntoIterator<Item = ArgumentId>>(iter: I) -> Self {
        Extension(iter.into_iter().collect())
    }
}

/// Three-way partition of a framework's arguments.
///
/// Ordering is lexicographic on (in, out, undec), which is what result
/// rendering relies on for a canonical labeling order.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Labeling {
    pub in_: BTreeSet<ArgumentId>,
    pub out: BTreeSet<ArgumentId>,
    pub undec: BTreeSet<ArgumentId>,
}

impl Labeling {
    /// Builds a labeling of `f`, checking that the three sets partition its
    /// arguments.
    pub fn for_framework(
        f: &Framework,
        in_: BTreeSet<ArgumentId>,
        out: BTreeSet<ArgumentId>,
        undec: BTreeSet<ArgumentId>,
    ) -> Result<Self> {
        let l = Labeling { in_, out, undec };
        if !l.is_labeling_of(f) {
            return Err(Error::precondition(
                "in, out and undec must partition the framework's arguments",
            ));
        }
        Ok(l)
    }

    /// The labeling `(e, A \ e, {})`. Does not check stability.
    pub(crate) fn from_in_set(f: &Framework, e: &Extension) -> Self {
        let out = f
            .arguments()
            .iter()
            .copied()
            .filter(|&a| !e.contains(a))
            .collect();
        Labeling {
            in_: e.members().clone(),
            out,
            undec: BTreeSet::new(),
        }
    }

    pub fn is_labeling_of(&self, f: &Framework) -> bool {
        let total = self.in_.len() + self.out.len() + self.undec.len();
        total == f.len()
            && self
                .in_
                .iter()
                .chain(&self.out)
                .chain(&self.undec)
                .all(|&a| f.contains(a))
            && self.in_.is_disjoint(&self.out)
            && self.in_.is_disjoint(&self.undec)
            && self.out.is_disjoint(&self.undec)
    }

    pub fn label_of(&self, a: ArgumentId) -> Option<Label> {
        if self.in_.contains(&a) {
            Some(Label::In)
        } else if self.out.contains(&a) {
            Some(Label::Out)
        } else if self.undec.contains(&a) {
            Some(Label::Undec)
        } else {
            None
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Label {
    In,
    Out,
    Undec,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LegalityStatus {
    LegallyIn,
    LegallyOut,
    LegallyUndec,
    IllegallyIn,
    IllegallyOut,
    IllegallyUndec,
}

impl LegalityStatus {
    pub fn is_legal(self) -> bool {
        matches!(
            self,
            LegalityStatus::LegallyIn | LegalityStatus::LegallyOut | LegalityStatus::LegallyUndec
        )
    }
}

impl fmt::Display for LegalityStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LegalityStatus::LegallyIn => "legally-in",
            LegalityStatus::LegallyOut => "legally-out",
            LegalityStatus::LegallyUndec => "legally-undec",
            LegalityStatus::IllegallyIn => "illegally-in",
            LegalityStatus::IllegallyOut => "illegally-out",
            LegalityStatus::IllegallyUndec => "illegally-undec",
        })
    }
}
