use std::collections::HashMap;

use crate::syntax::{closure, finite_horizon, ClosureSet, Formula, Logic};

use super::{StructureClass, TableauError};

/// A closure member resolved to the independent truth value it reads,
/// possibly negated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Lit {
    pub base: usize,
    pub negated: bool,
}

impl Lit {
    fn value(self, bits: u64) -> bool {
        (bits >> self.base) & 1 == 1 && !self.negated || (bits >> self.base) & 1 == 0 && self.negated
    }
}

/// How a base's truth value is fixed inside an atom.
#[derive(Clone, Copy, Debug)]
pub(crate) enum Rule {
    True,
    /// Propositions and weak-next formulas: chosen freely.
    Free,
    And(Lit, Lit),
    /// `left U right` holds iff `right`, or `left` and not `X !(left U right)`.
    Until {
        left: Lit,
        right: Lit,
        next_not: usize,
    },
}

/// A maximal locally consistent subset of the closure, stored as one bit per
/// base formula (bit set = base is a member, clear = its negation is).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    bits: u64,
}

impl Atom {
    pub fn bits(self) -> u64 {
        self.bits
    }

    fn has(self, base: usize) -> bool {
        (self.bits >> base) & 1 == 1
    }
}

/// The closure of a formula indexed for atom manipulation.
#[derive(Clone, Debug)]
pub struct AtomSpace {
    closure: ClosureSet,
    bases: Vec<Formula>,
    index: HashMap<Formula, usize>,
    pub(crate) rules: Vec<Rule>,
    pub(crate) next_bases: Vec<(usize, Lit)>,
    pub(crate) until_bases: Vec<usize>,
    prop_bases: Vec<usize>,
    next_false: usize,
    horizon: usize,
}

/// Closure cap used when none is given: at most this many closure formulas
/// up to negation.
pub const DEFAULT_CLOSURE_CAP: usize = 24;

impl AtomSpace {
    pub fn new(f: &Formula, cap: usize) -> Result<Self, TableauError> {
        if !f.is_ltl() {
            return Err(TableauError::NotLtl(f.to_string()));
        }
        Self::from_closure(closure(f, Logic::Ltl), cap)
    }

    pub fn from_closure(closure: ClosureSet, cap: usize) -> Result<Self, TableauError> {
        if closure.logic() != Logic::Ltl || !closure.seed().is_ltl() {
            return Err(TableauError::NotLtl(closure.seed().to_string()));
        }
        let bases = closure.bases();
        if bases.len() > cap.min(64) {
            return Err(TableauError::ClosureTooLarge {
                size: bases.len(),
                cap,
            });
        }
        let index: HashMap<Formula, usize> = bases.iter().cloned().enumerate().map(|(i, b)| (b, i)).collect();
        let lit = |g: &Formula| {
            let (base, negated) = g.strip_negations();
            Lit {
                base: index[base],
                negated,
            }
        };
        let mut rules = Vec::with_capacity(bases.len());
        let mut next_bases = Vec::new();
        let mut until_bases = Vec::new();
        let mut prop_bases = Vec::new();
        for (i, b) in bases.iter().enumerate() {
            let rule = match b {
                Formula::True => Rule::True,
                Formula::Prop(_) => {
                    prop_bases.push(i);
                    Rule::Free
                }
                Formula::WeakNext(g) => {
                    next_bases.push((i, lit(g)));
                    Rule::Free
                }
                Formula::And(a, c) => Rule::And(lit(a), lit(c)),
                Formula::Until(a, c) => {
                    until_bases.push(i);
                    Rule::Until {
                        left: lit(a),
                        right: lit(c),
                        next_not: index[&Formula::next(Formula::not(b.clone()))],
                    }
                }
                Formula::Not(_) | Formula::AbsWeakNext(_) | Formula::AbsUntil(_, _) => {
                    unreachable!("bases are stripped LTL formulas")
                }
            };
            rules.push(rule);
        }
        let next_false = index[&Formula::next_false()];
        let horizon = index[&finite_horizon()];
        Ok(AtomSpace {
            closure,
            bases,
            index,
            rules,
            next_bases,
            until_bases,
            prop_bases,
            next_false,
            horizon,
        })
    }

    pub fn closure(&self) -> &ClosureSet {
        &self.closure
    }

    pub fn bases(&self) -> &[Formula] {
        &self.bases
    }

    pub(crate) fn lit(&self, f: &Formula) -> Option<Lit> {
        let (base, negated) = f.strip_negations();
        self.index.get(base).map(|&base| Lit { base, negated })
    }

    /// Whether `f` is a member of the atom; `None` if `f` is not in the
    /// closure (up to double negation).
    pub fn contains(&self, atom: Atom, f: &Formula) -> Option<bool> {
        self.lit(f).map(|l| l.value(atom.bits))
    }

    pub(crate) fn holds(&self, atom: Atom, l: Lit) -> bool {
        l.value(atom.bits)
    }

    /// The closure members in the atom.
    pub fn members(&self, atom: Atom) -> Vec<Formula> {
        self.closure
            .members()
            .iter()
            .filter(|g| self.contains(atom, g) == Some(true))
            .cloned()
            .collect()
    }

    /// Propositions in the atom.
    pub fn props(&self, atom: Atom) -> impl Iterator<Item = &str> + '_ {
        self.prop_bases
            .iter()
            .filter(move |&&i| atom.has(i))
            .map(|&i| match &self.bases[i] {
                Formula::Prop(p) => p.as_str(),
                _ => unreachable!(),
            })
    }

    /// Atoms containing `X false`, the only ones without successors.
    pub fn is_terminal(&self, atom: Atom) -> bool {
        atom.has(self.next_false)
    }

    pub fn has_horizon(&self, atom: Atom) -> bool {
        atom.has(self.horizon)
    }

    /// Fills in the determined bases given the free ones.
    fn complete(&self, mut bits: u64) -> u64 {
        for (i, rule) in self.rules.iter().enumerate() {
            let value = match *rule {
                Rule::Free => continue,
                Rule::True => true,
                Rule::And(a, b) => a.value(bits) && b.value(bits),
                Rule::Until {
                    left,
                    right,
                    next_not,
                } => right.value(bits) || left.value(bits) && (bits >> next_not) & 1 == 0,
            };
            if value {
                bits |= 1 << i;
            } else {
                bits &= !(1 << i);
            }
        }
        bits
    }

    /// Every atom of the class, ordered by bit vector.
    pub fn enumerate_atoms(&self, class: StructureClass) -> Vec<Atom> {
        let mut atoms = Vec::new();
        // terminal atoms: every X-formula is forced in, only propositions vary
        if class != StructureClass::Inf {
            let all_next: u64 = self.next_bases.iter().map(|(i, _)| 1u64 << i).sum();
            for_each_assignment(&self.prop_bases, |props| {
                atoms.push(Atom {
                    bits: self.complete(props | all_next),
                });
            });
        }
        let free: Vec<usize> = self
            .prop_bases
            .iter()
            .copied()
            .chain(
                self.next_bases
                    .iter()
                    .map(|(i, _)| *i)
                    .filter(|&i| i != self.next_false),
            )
            .collect();
        for_each_assignment(&free, |bits| {
            atoms.push(Atom {
                bits: self.complete(bits),
            });
        });
        if class == StructureClass::Fin {
            atoms.retain(|&a| self.has_horizon(a));
        }
        atoms.sort();
        atoms
    }
}

fn for_each_assignment(positions: &[usize], mut f: impl FnMut(u64)) {
    let n = positions.len();
    for combo in 0u64..(1u64 << n) {
        let mut bits = 0;
        for (k, &pos) in positions.iter().enumerate() {
            if (combo >> k) & 1 == 1 {
                bits |= 1 << pos;
            }
        }
        f(bits);
    }
}

/// The atoms of `closure` for `class`: every assignment of truth values to
/// the closure that respects the local rules.
pub fn enumerate_atoms(
    closure: &ClosureSet,
    class: StructureClass,
) -> Result<Vec<Vec<Formula>>, TableauError> {
    let space = AtomSpace::from_closure(closure.clone(), DEFAULT_CLOSURE_CAP)?;
    Ok(space
        .enumerate_atoms(class)
        .into_iter()
        .map(|a| space.members(a))
        .collect())
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::syntax::parse_formula;

    fn ltl(text: &str) -> Formula {
        parse_formula(text, Logic::Ltl).unwrap()
    }

    /// Second implementation of the atom conditions, phrased directly on
    /// member sets of the closure.
    fn is_atom(c: &ClosureSet, m: &BTreeSet<Formula>, class: StructureClass) -> bool {
        let has = |f: &Formula| m.contains(f);
        let xf = Formula::next_false();
        for g in c.primed() {
            if has(g) == has(&g.negation()) {
                return false;
            }
            let truth = |f: &Formula| {
                // membership of a formula up to stacked negations
                let (base, neg) = f.strip_negations();
                has(base) != neg
            };
            match g {
                Formula::True if !has(g) => return false,
                Formula::And(a, b) if truth(g) != (truth(a) && truth(b)) => return false,
                Formula::Until(a, b) => {
                    let strong = Formula::strong_next(g.clone());
                    if truth(g) != (truth(b) || truth(a) && truth(&strong)) {
                        return false;
                    }
                }
                Formula::WeakNext(_) if has(&xf) && !has(g) => return false,
                _ => {}
            }
        }
        match class {
            StructureClass::Gen => true,
            StructureClass::Fin => has(&finite_horizon()),
            StructureClass::Inf => !has(&xf),
        }
    }

    fn brute_atoms(f: &Formula, class: StructureClass) -> BTreeSet<BTreeSet<Formula>> {
        let c = closure(f, Logic::Ltl);
        let bases = c.bases();
        let mut out = BTreeSet::new();
        for combo in 0u64..(1 << bases.len()) {
            let m: BTreeSet<Formula> = c
                .members()
                .iter()
                .filter(|g| {
                    let (base, neg) = g.strip_negations();
                    let i = bases.iter().position(|b| b == base).unwrap();
                    ((combo >> i) & 1 == 1) != neg
                })
                .cloned()
                .collect();
            if is_atom(&c, &m, class) {
                out.insert(m);
            }
        }
        out
    }

    #[test]
    fn enumeration_matches_subset_filter() {
        for text in ["p", "p U q", "X !p", "!(p U X p)", "G p & F !p"] {
            let f = ltl(text);
            for class in StructureClass::ALL {
                let fast: BTreeSet<BTreeSet<Formula>> = enumerate_atoms(&closure(&f, Logic::Ltl), class)
                    .unwrap()
                    .into_iter()
                    .map(|a| a.into_iter().collect())
                    .collect();
                assert_eq!(fast, brute_atoms(&f, class), "{text} {class:?}");
            }
        }
    }

    #[test]
    fn class_constraints() {
        let c = closure(&ltl("p"), Logic::Ltl);
        let xf = Formula::next_false();
        for atom in enumerate_atoms(&c, StructureClass::Inf).unwrap() {
            assert!(!atom.contains(&xf));
            assert!(atom.contains(&Formula::not(xf.clone())));
        }
        for atom in enumerate_atoms(&c, StructureClass::Fin).unwrap() {
            assert!(atom.contains(&finite_horizon()));
        }
        // the proposition is decided everywhere
        for atom in enumerate_atoms(&c, StructureClass::Gen).unwrap() {
            assert!(atom.contains(&ltl("p")) != atom.contains(&ltl("!p")));
        }
    }

    #[test]
    fn terminal_atoms_discharge_their_untils() {
        let space = AtomSpace::new(&ltl("(p U q) & (q U X p)"), DEFAULT_CLOSURE_CAP).unwrap();
        for atom in space.enumerate_atoms(StructureClass::Gen) {
            if !space.is_terminal(atom) {
                continue;
            }
            for &u in &space.until_bases {
                if let Rule::Until { right, .. } = space.rules[u] {
                    if atom.has(u) {
                        assert!(space.holds(atom, right));
                    }
                }
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        let big = ltl("(p U q) U ((q U p) U (X p U X q))");
        assert!(matches!(
            AtomSpace::new(&big, 10),
            Err(TableauError::ClosureTooLarge { cap: 10, .. })
        ));
        assert!(matches!(
            AtomSpace::new(&parse_formula("Xa p", Logic::Caret).unwrap(), 24),
            Err(TableauError::NotLtl(_))
        ));
    }
}
