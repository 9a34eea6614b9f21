use std::collections::BTreeSet;
use std::fmt;

/// Which grammar a formula (or closure) lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Logic {
    /// Plain linear temporal logic: `X` and `U` only.
    Ltl,
    /// Calls and returns: adds the abstract operators `Xa` and `Ua`.
    Caret,
}

impl fmt::Display for Logic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Logic::Ltl => f.write_str("ltl"),
            Logic::Caret => f.write_str("caret"),
        }
    }
}

/// Core abstract syntax. Every abbreviation (`|`, `->`, `<->`, `false`,
/// `F`, `G`, `N` and their abstract versions) is expanded by the builders
/// below, so only these eight constructors ever appear in a tree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    Prop(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    /// Weak next: holds at the last state of a finite trace.
    WeakNext(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    /// Weak abstract next: holds when there is no abstract successor.
    AbsWeakNext(Box<Formula>),
    AbsUntil(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn tt() -> Formula {
        Formula::True
    }

    pub fn ff() -> Formula {
        Formula::not(Formula::True)
    }

    pub fn prop(name: impl Into<String>) -> Formula {
        Formula::Prop(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    /// `a | b`, i.e. `!(!a & !b)`.
    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::not(Formula::and(Formula::not(a), Formula::not(b)))
    }

    /// `a -> b`, i.e. `!a | b`.
    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::or(Formula::not(a), b)
    }

    /// `a <-> b`, i.e. `(a -> b) & (b -> a)`.
    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(Formula::implies(a.clone(), b.clone()), Formula::implies(b, a))
    }

    pub fn next(f: Formula) -> Formula {
        Formula::WeakNext(Box::new(f))
    }

    /// Strong next `N f`, i.e. `!X !f`.
    pub fn strong_next(f: Formula) -> Formula {
        Formula::not(Formula::next(Formula::not(f)))
    }

    pub fn until(a: Formula, b: Formula) -> Formula {
        Formula::Until(Box::new(a), Box::new(b))
    }

    /// `F f`, i.e. `true U f`.
    pub fn eventually(f: Formula) -> Formula {
        Formula::until(Formula::True, f)
    }

    /// `G f`, i.e. `!F !f`.
    pub fn always(f: Formula) -> Formula {
        Formula::not(Formula::eventually(Formula::not(f)))
    }

    pub fn abs_next(f: Formula) -> Formula {
        Formula::AbsWeakNext(Box::new(f))
    }

    pub fn abs_strong_next(f: Formula) -> Formula {
        Formula::not(Formula::abs_next(Formula::not(f)))
    }

    pub fn abs_until(a: Formula, b: Formula) -> Formula {
        Formula::AbsUntil(Box::new(a), Box::new(b))
    }

    pub fn abs_eventually(f: Formula) -> Formula {
        Formula::abs_until(Formula::True, f)
    }

    pub fn abs_always(f: Formula) -> Formula {
        Formula::not(Formula::abs_eventually(Formula::not(f)))
    }

    /// `X false`: true exactly at the final state of a finite trace.
    pub fn next_false() -> Formula {
        Formula::next(Formula::ff())
    }

    /// Node count of the core tree.
    pub fn size(&self) -> usize {
        match self {
            Formula::True | Formula::Prop(_) => 1,
            Formula::Not(a) | Formula::WeakNext(a) | Formula::AbsWeakNext(a) => 1 + a.size(),
            Formula::And(a, b) | Formula::Until(a, b) | Formula::AbsUntil(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// True when no abstract operator occurs anywhere in the tree.
    pub fn is_ltl(&self) -> bool {
        match self {
            Formula::True | Formula::Prop(_) => true,
            Formula::Not(a) | Formula::WeakNext(a) => a.is_ltl(),
            Formula::And(a, b) | Formula::Until(a, b) => a.is_ltl() && b.is_ltl(),
            Formula::AbsWeakNext(_) | Formula::AbsUntil(_, _) => false,
        }
    }

    /// The smallest grammar the formula belongs to.
    pub fn logic(&self) -> Logic {
        if self.is_ltl() {
            Logic::Ltl
        } else {
            Logic::Caret
        }
    }

    /// Proposition names occurring in the formula.
    pub fn props(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Prop(p) = f {
                out.insert(p.as_str());
            }
        });
        out
    }

    /// Pre-order traversal.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Formula)) {
        f(self);
        match self {
            Formula::True | Formula::Prop(_) => {}
            Formula::Not(a) | Formula::WeakNext(a) | Formula::AbsWeakNext(a) => a.visit(f),
            Formula::And(a, b) | Formula::Until(a, b) | Formula::AbsUntil(a, b) => {
                a.visit(f);
                b.visit(f);
            }
        }
    }

    /// Distinct subformulas, children before parents.
    pub fn subformulas(&self) -> Vec<&Formula> {
        fn go<'a>(
            f: &'a Formula,
            seen: &mut std::collections::HashSet<&'a Formula>,
            out: &mut Vec<&'a Formula>,
        ) {
            if seen.contains(f) {
                return;
            }
            match f {
                Formula::True | Formula::Prop(_) => {}
                Formula::Not(a) | Formula::WeakNext(a) | Formula::AbsWeakNext(a) => go(a, seen, out),
                Formula::And(a, b) | Formula::Until(a, b) | Formula::AbsUntil(a, b) => {
                    go(a, seen, out);
                    go(b, seen, out);
                }
            }
            seen.insert(f);
            out.push(f);
        }
        let mut out = Vec::new();
        go(self, &mut Default::default(), &mut out);
        out
    }

    /// The formula with every leading negation removed, and whether an odd
    /// number of them was removed.
    pub fn strip_negations(&self) -> (&Formula, bool) {
        let mut f = self;
        let mut negated = false;
        while let Formula::Not(inner) = f {
            f = inner;
            negated = !negated;
        }
        (f, negated)
    }

    /// Negation with single-negation collapse: `!g` for `g`, and `g` for `!g`.
    pub fn negation(&self) -> Formula {
        match self {
            Formula::Not(inner) => (**inner).clone(),
            other => Formula::not(other.clone()),
        }
    }

    /// Splits `a -> b` (in its desugared form `!(!!a & !b)`) into `(a, b)`.
    pub fn as_implication(&self) -> Option<(&Formula, &Formula)> {
        if let Formula::Not(inner) = self {
            if let Formula::And(l, r) = &**inner {
                if let (Formula::Not(l), Formula::Not(r)) = (&**l, &**r) {
                    if let Formula::Not(a) = &**l {
                        return Some((a, r));
                    }
                }
            }
        }
        None
    }

    /// Replaces every proposition named in `map` by its image.
    pub fn substitute(&self, map: &impl Fn(&str) -> Option<Formula>) -> Formula {
        match self {
            Formula::True => Formula::True,
            Formula::Prop(p) => map(p).unwrap_or_else(|| self.clone()),
            Formula::Not(a) => Formula::not(a.substitute(map)),
            Formula::And(a, b) => Formula::and(a.substitute(map), b.substitute(map)),
            Formula::WeakNext(a) => Formula::next(a.substitute(map)),
            Formula::Until(a, b) => Formula::until(a.substitute(map), b.substitute(map)),
            Formula::AbsWeakNext(a) => Formula::abs_next(a.substitute(map)),
            Formula::AbsUntil(a, b) => Formula::abs_until(a.substitute(map), b.substitute(map)),
        }
    }
}

/// Fully parenthesized concrete syntax that parses back to the same tree.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => f.write_str("true"),
            Formula::Prop(p) => f.write_str(p),
            Formula::Not(a) => write!(f, "!({a})"),
            Formula::And(a, b) => write!(f, "({a} & {b})"),
            Formula::WeakNext(a) => write!(f, "X {a}"),
            Formula::Until(a, b) => write!(f, "({a} U {b})"),
            Formula::AbsWeakNext(a) => write!(f, "Xa {a}"),
            Formula::AbsUntil(a, b) => write!(f, "({a} Ua {b})"),
        }
    }
}

/// Prints a formula in the concrete syntax accepted by
/// [`parse_formula`](crate::syntax::parse_formula).
pub fn print_formula(f: &Formula) -> String {
    f.to_string()
}

/// Node count of the core tree.
pub fn formula_size(f: &Formula) -> usize {
    f.size()
}
