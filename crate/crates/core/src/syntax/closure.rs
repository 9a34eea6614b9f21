use std::collections::{BTreeSet, HashSet};

use super::formula::{Formula, Logic};

/// The closure of a seed formula: the primed closure (the least set
/// containing the seed and `true U X false`, closed under the decomposition
/// rules) together with the negation of each of its members.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureSet {
    seed: Formula,
    logic: Logic,
    primed: BTreeSet<Formula>,
    members: BTreeSet<Formula>,
    size_bound: usize,
}

/// `true U X false`: "a final state is eventually reached".
pub fn finite_horizon() -> Formula {
    Formula::eventually(Formula::next_false())
}

/// Formulas that one application of the decomposition rules adds for `f`.
fn decompose(f: &Formula, logic: Logic) -> Vec<Formula> {
    match f {
        Formula::True | Formula::Prop(_) => vec![],
        Formula::Not(g) => vec![(**g).clone()],
        Formula::And(a, b) => vec![(**a).clone(), (**b).clone()],
        Formula::WeakNext(g) => {
            let mut out = vec![(**g).clone()];
            if let Formula::Not(h) = &**g {
                out.push(Formula::next((**h).clone()));
            }
            out
        }
        Formula::Until(a, b) => vec![(**a).clone(), (**b).clone(), Formula::strong_next(f.clone())],
        Formula::AbsWeakNext(g) if logic == Logic::Caret => {
            let mut out = vec![(**g).clone()];
            if let Formula::Not(h) = &**g {
                out.push(Formula::abs_next((**h).clone()));
            }
            out
        }
        Formula::AbsUntil(a, b) if logic == Logic::Caret => {
            vec![(**a).clone(), (**b).clone(), Formula::abs_strong_next(f.clone())]
        }
        Formula::AbsWeakNext(_) | Formula::AbsUntil(_, _) => vec![],
    }
}

/// Computes the closure of `f`.
///
/// In [`Logic::Caret`] mode the abstract operators get the same rules as
/// their global counterparts.
pub fn closure(f: &Formula, logic: Logic) -> ClosureSet {
    let mut primed = HashSet::new();
    let mut work = vec![f.clone(), finite_horizon()];
    while let Some(g) = work.pop() {
        if primed.contains(&g) {
            continue;
        }
        work.extend(decompose(&g, logic));
        primed.insert(g);
    }
    let primed: BTreeSet<Formula> = primed.into_iter().collect();
    let members = primed.iter().flat_map(|g| [g.clone(), g.negation()]).collect();
    ClosureSet {
        seed: f.clone(),
        logic,
        primed,
        members,
        size_bound: ClosureSet::bound_for(f),
    }
}

impl ClosureSet {
    /// Upper bound on `|Cl|` for a seed: each node contributes at most five
    /// primed members, the horizon formula brings at most ten more, and
    /// negation at most doubles the count.
    pub fn bound_for(seed: &Formula) -> usize {
        2 * (5 * seed.size() + 10)
    }

    pub fn seed(&self) -> &Formula {
        &self.seed
    }

    pub fn logic(&self) -> Logic {
        self.logic
    }

    /// All members, the primed closure plus negations.
    pub fn members(&self) -> &BTreeSet<Formula> {
        &self.members
    }

    /// The primed closure.
    pub fn primed(&self) -> &BTreeSet<Formula> {
        &self.primed
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.members.contains(f)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn size_bound(&self) -> usize {
        self.size_bound
    }

    /// Distinct members with leading negations stripped, ordered children
    /// first. These are the independent truth values an atom decides.
    pub fn bases(&self) -> Vec<Formula> {
        let mut bases: Vec<Formula> = self
            .primed
            .iter()
            .map(|g| g.strip_negations().0.clone())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        bases.sort_by(|a, b| a.size().cmp(&b.size()).then_with(|| a.cmp(b)));
        bases
    }
}
