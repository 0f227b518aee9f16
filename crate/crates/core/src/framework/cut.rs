use std::collections::BTreeSet;

use super::{ArgumentId, Attack, Framework};
use crate::error::{Error, Result};

/// A two-way partition `(a1, a2)` of a framework together with the attacks
/// crossing it. `k` counts the attacks from `a2` into `a1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cut {
    pub a1: BTreeSet<ArgumentId>,
    pub a2: BTreeSet<ArgumentId>,
    pub r3: Vec<Attack>,
    pub k: usize,
}

impl Cut {
    /// Recomputes every derived field from `a1` and checks it against `f`.
    pub fn verify(&self, f: &Framework) -> Result<()> {
        let expected = cross_attacks(f, &self.a1)?;
        if expected != *self {
            return Err(Error::precondition(format!(
                "cut does not match framework (expected a2={:?}, r3 of {} attacks, k={})",
                expected.a2,
                expected.r3.len(),
                expected.k
            )));
        }
        Ok(())
    }

    /// Attacks from `a2` into `a1`.
    pub fn backward_attacks(&self) -> impl Iterator<Item = &Attack> {
        self.r3.iter().filter(|at| self.a2.contains(&at.source))
    }

    /// The same partition with the sides exchanged.
    pub fn swapped(&self, f: &Framework) -> Cut {
        cross_attacks_unchecked(f, &self.a2)
    }
}

/// The cut induced by `a1`: `a2` is its complement, `r3` every attack with
/// endpoints on different sides (sorted), and `k` the number of `a2 -> a1`
/// attacks.
pub fn cross_attacks(f: &Framework, a1: &BTreeSet<ArgumentId>) -> Result<Cut> {
    if a1.is_empty() {
        return Err(Error::precondition("a1 must be non-empty"));
    }
    if let Some(&a) = a1.iter().find(|&&a| !f.contains(a)) {
        return Err(Error::UnknownArgument(a));
    }
    if a1.len() == f.len() {
        return Err(Error::precondition("a1 must be a proper subset"));
    }
    Ok(cross_attacks_unchecked(f, a1))
}

pub(crate) fn cross_attacks_unchecked(f: &Framework, a1: &BTreeSet<ArgumentId>) -> Cut {
    let a2: BTreeSet<ArgumentId> = f
        .arguments()
        .iter()
        .copied()
        .filter(|a| !a1.contains(a))
        .collect();
    let mut k = 0;
    let r3: Vec<Attack> = f
        .attacks()
        .iter()
        .filter(|at| a1.contains(&at.source) != a1.contains(&at.target))
        .inspect(|at| {
            if a1.contains(&at.target) {
                k += 1;
            }
        })
        .copied()
        .collect();
    Cut {
        a1: a1.clone(),
        a2,
        r3,
        k,
    }
}

/// Every crossing attack goes from `a1` to `a2`.
pub fn is_unidirectional(c: &Cut) -> bool {
    c.r3.iter()
        .all(|at| c.a1.contains(&at.source) && c.a2.contains(&at.target))
}
