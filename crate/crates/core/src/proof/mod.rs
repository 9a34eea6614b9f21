//! Hilbert-style proofs in the axiom systems `ax`, `ax-gen`, `ax-inf`,
//! `ax-fin` and `ax-cr`.
//!
//! Each step names exactly one justification: an axiom instance with
//! explicit bindings, a propositional tautology, modus ponens, or one of the
//! generalization and induction rules for `X`/`U` (and `Xa`/`Ua` in
//! `ax-cr`). Checking is purely syntactic.

mod cr;
mod schema;
mod script;
mod taut;

use std::fmt;

pub use cr::{expand_cr, CrError};
pub use schema::{
    check_axiom_instance, instantiate, list_axioms, Bindings, InstanceError, ListedAxiom, Params, RuleKind,
    Schema, SystemId,
};
pub use script::{parse_proof, Justification, ProofScript, ScriptError, Step};
pub use taut::{check_tautology, TautError, MAX_TAUT_LETTERS};

use crate::syntax::Formula;

/// Why a step was rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Failure {
    /// A premise index that is not an earlier step.
    ForwardReference {
        premise: usize,
    },
    Instance(InstanceError),
    NotAnInstance {
        schema: Schema,
    },
    NotATautology,
    Taut(TautError),
    /// Modus ponens whose second premise is not `first -> conclusion`.
    BadMp,
    BadPremiseShape(&'static str),
    BadConclusion(&'static str),
    RuleNotAdmissible(RuleKind),
    AbstractInLtlSystem,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::ForwardReference { premise } => {
                write!(f, "premise {premise} is not an earlier step")
            }
            Failure::Instance(e) => e.fmt(f),
            Failure::NotAnInstance { schema } => {
                write!(f, "formula is not the stated instance of {schema}")
            }
            Failure::NotATautology => f.write_str("formula is not a propositional tautology"),
            Failure::Taut(e) => e.fmt(f),
            Failure::BadMp => f.write_str("second premise is not `first premise -> formula`"),
            Failure::BadPremiseShape(want) => write!(f, "premise does not have the shape {want}"),
            Failure::BadConclusion(want) => write!(f, "formula does not have the shape {want}"),
            Failure::RuleNotAdmissible(rule) => {
                write!(f, "rule {} is not part of this system", rule.keyword())
            }
            Failure::AbstractInLtlSystem => f.write_str("abstract operators need system ax-cr"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Ok,
    /// First failing step (1-based).
    Failure {
        step: usize,
        reason: Failure,
    },
}

impl Verdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, Verdict::Ok)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Ok => f.write_str("OK"),
            Verdict::Failure { step, reason } => write!(f, "step {step}: {reason}"),
        }
    }
}

/// Checks every step in order and reports the first failure.
pub fn check_proof(s: &ProofScript) -> Verdict {
    for (k, step) in s.steps.iter().enumerate() {
        if let Err(reason) = check_step(s, k, step) {
            return Verdict::Failure { step: k + 1, reason };
        }
    }
    Verdict::Ok
}

fn check_step(s: &ProofScript, k: usize, step: &Step) -> Result<(), Failure> {
    let f = &step.formula;
    if !s.system.is_caret() && !f.is_ltl() {
        return Err(Failure::AbstractInLtlSystem);
    }
    let premise = |i: usize| {
        if i >= 1 && i <= k {
            Ok(&s.steps[i - 1].formula)
        } else {
            Err(Failure::ForwardReference { premise: i })
        }
    };
    match &step.justification {
        Justification::Axiom {
            schema,
            params,
            bindings,
        } => match check_axiom_instance(s.system, *schema, params, bindings, f) {
            Ok(true) => Ok(()),
            Ok(false) => Err(Failure::NotAnInstance { schema: *schema }),
            Err(e) => Err(Failure::Instance(e)),
        },
        Justification::Taut => match check_tautology(f) {
            Ok(true) => Ok(()),
            Ok(false) => Err(Failure::NotATautology),
            Err(e) => Err(Failure::Taut(e)),
        },
        Justification::Mp(i, j) => {
            let (a, b) = (premise(*i)?, premise(*j)?);
            if *b == Formula::implies(a.clone(), f.clone()) {
                Ok(())
            } else {
                Err(Failure::BadMp)
            }
        }
        Justification::Rule(rule, i) => {
            if !s.system.admits_rule(*rule) {
                return Err(Failure::RuleNotAdmissible(*rule));
            }
            let p = premise(*i)?;
            match rule {
                RuleKind::GenNext => generalization(p, f, Formula::next, "X φ"),
                RuleKind::GenAbsNext => generalization(p, f, Formula::abs_next, "Xa φ"),
                RuleKind::IndUntil => induction(p, f, false),
                RuleKind::IndAbsUntil => induction(p, f, true),
            }
        }
    }
}

fn generalization(
    premise: &Formula,
    f: &Formula,
    op: fn(Formula) -> Formula,
    shape: &'static str,
) -> Result<(), Failure> {
    if *f == op(premise.clone()) {
        Ok(())
    } else {
        Err(Failure::BadConclusion(shape))
    }
}

/// From `φ' -> !ψ & X φ'` infer `φ' -> !(φ U ψ)` (or the abstract mirror).
fn induction(premise: &Formula, f: &Formula, abstract_: bool) -> Result<(), Failure> {
    let (premise_shape, conclusion_shape) = if abstract_ {
        ("φ' -> !ψ & Xa φ'", "φ' -> !(φ Ua ψ)")
    } else {
        ("φ' -> !ψ & X φ'", "φ' -> !(φ U ψ)")
    };
    let bad_premise = Failure::BadPremiseShape(premise_shape);
    let (inv, body) = premise.as_implication().ok_or(bad_premise.clone())?;
    let Formula::And(not_psi, next_inv) = body else {
        return Err(bad_premise);
    };
    let Formula::Not(psi) = not_psi.as_ref() else {
        return Err(bad_premise);
    };
    let stepped = match (next_inv.as_ref(), abstract_) {
        (Formula::WeakNext(g), false) | (Formula::AbsWeakNext(g), true) => g.as_ref(),
        _ => return Err(bad_premise),
    };
    if stepped != inv {
        return Err(bad_premise);
    }

    let bad_conclusion = Failure::BadConclusion(conclusion_shape);
    let (inv2, negated) = f.as_implication().ok_or(bad_conclusion.clone())?;
    let Formula::Not(until) = negated else {
        return Err(bad_conclusion);
    };
    let target = match (until.as_ref(), abstract_) {
        (Formula::Until(_, b), false) | (Formula::AbsUntil(_, b), true) => b.as_ref(),
        _ => return Err(bad_conclusion),
    };
    if inv2 != inv || target != psi.as_ref() {
        return Err(bad_conclusion);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn verdict(text: &str) -> Verdict {
        check_proof(&parse_proof(text).unwrap())
    }

    #[test]
    fn generalization_of_a_tautology() {
        assert!(verdict("system: ax-cr\n1. true ; taut\n2. X true ; gen-x 1\n").is_ok());
    }

    #[test]
    fn induction_rule() {
        let script = "system: ax-gen\n\
                      1. false -> !q & X false ; taut\n\
                      2. false -> !(r U q) ; ind-u 1\n";
        assert!(verdict(script).is_ok());
        let p = |s: &str| crate::syntax::parse_formula(s, crate::Logic::Ltl).unwrap();
        assert!(induction(&p("a -> !q & X a"), &p("a -> !(r U q)"), false).is_ok());
        assert!(induction(&p("a -> !q & X a"), &p("a -> !(r U p)"), false).is_err());
        assert!(induction(&p("a -> !q & X b"), &p("a -> !(r U q)"), false).is_err());
        assert!(induction(&p("a -> !q & X a"), &p("b -> !(r U q)"), false).is_err());
        assert!(induction(&p("a -> q & X a"), &p("a -> !(r U q)"), false).is_err());
    }

    #[test]
    fn failures_name_the_step() {
        let v = verdict("system: ax\n1. true ; taut\n2. X false ; gen-x 1\n");
        assert_eq!(
            v,
            Verdict::Failure {
                step: 2,
                reason: Failure::BadConclusion("X φ")
            }
        );
        let v = verdict("system: ax\n1. true ; mp 1 2\n");
        assert_eq!(
            v,
            Verdict::Failure {
                step: 1,
                reason: Failure::ForwardReference { premise: 1 }
            }
        );
        let abstract_step = ProofScript {
            system: SystemId::AxGen,
            steps: vec![Step {
                formula: Formula::abs_next(Formula::tt()),
                justification: Justification::Taut,
            }],
        };
        assert_eq!(
            check_proof(&abstract_step),
            Verdict::Failure {
                step: 1,
                reason: Failure::AbstractInLtlSystem
            }
        );
        let v = verdict("system: ax-gen\n1. true ; taut\n2. true ; gen-xa 1\n");
        assert_eq!(
            v,
            Verdict::Failure {
                step: 2,
                reason: Failure::RuleNotAdmissible(RuleKind::GenAbsNext)
            }
        );
        let v = verdict("system: ax-gen\n1. !X false ; axiom Inf\n");
        assert!(matches!(
            v,
            Verdict::Failure {
                step: 1,
                reason: Failure::Instance(InstanceError::NotAdmissible { .. })
            }
        ));
    }
}
