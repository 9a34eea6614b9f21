//! Truth of formulas on traces.
//!
//! Every trace kind is turned into a [`Frame`]: its canonical positions, the
//! global successor of each (absent at the end of a finite trace) and, for
//! structured lassos, the canonicalized abstract successor. Because truth on
//! a lasso is periodic past the prefix, evaluating on the canonical positions
//! of that graph is exact. Subformulas are evaluated bottom-up into one truth
//! vector each; until walks the successor graph from every position, stopping
//! at a revisit.

use std::collections::HashMap;

use thiserror::Error;

use crate::syntax::Formula;
use crate::trace::{
    abstract_successor, FiniteTrace, Label, LassoTrace, Periodic, StateTag, StructuredLassoTrace, Trace,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("abstract operator in `{0}` cannot be evaluated on an unstructured trace")]
    AbstractOperator(String),
    #[error("position {pos} is outside a finite trace of length {len}")]
    OutOfRange { pos: usize, len: usize },
}

/// The position graph a trace induces.
#[derive(Clone, Debug)]
pub struct Frame<'t> {
    labels: Vec<&'t Label>,
    tags: Option<Vec<StateTag>>,
    next: Vec<Option<usize>>,
    abs_next: Option<Vec<Option<usize>>>,
    prefix_len: usize,
    loop_len: Option<usize>,
}

impl<'t> Frame<'t> {
    pub fn finite(t: &'t FiniteTrace) -> Self {
        let n = t.len();
        Frame {
            labels: t.states().iter().collect(),
            tags: None,
            next: (0..n).map(|k| (k + 1 < n).then_some(k + 1)).collect(),
            abs_next: None,
            prefix_len: n,
            loop_len: None,
        }
    }

    pub fn lasso(t: &'t LassoTrace) -> Self {
        let n = t.canonical_len();
        Frame {
            labels: (0..n).map(|k| t.state(k)).collect(),
            tags: None,
            next: (0..n).map(|k| Some(t.canonical_next(k))).collect(),
            abs_next: None,
            prefix_len: t.prefix_len(),
            loop_len: Some(t.loop_len()),
        }
    }

    pub fn structured(t: &'t StructuredLassoTrace) -> Self {
        let n = t.canonical_len();
        Frame {
            labels: (0..n).map(|k| &t.state(k).props).collect(),
            tags: Some((0..n).map(|k| t.tag(k)).collect()),
            next: (0..n).map(|k| Some(t.canonical_next(k))).collect(),
            abs_next: Some(
                (0..n)
                    .map(|k| {
                        abstract_successor(t, k)
                            .position()
                            .map(|j| t.canonical_position(j))
                    })
                    .collect(),
            ),
            prefix_len: t.prefix_len(),
            loop_len: Some(t.loop_len()),
        }
    }

    pub fn of(t: &'t Trace) -> Self {
        match t {
            Trace::Finite(t) => Frame::finite(t),
            Trace::Lasso(t) => Frame::lasso(t),
            Trace::Structured(t) => Frame::structured(t),
        }
    }

    /// Number of canonical positions.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn is_structured(&self) -> bool {
        self.abs_next.is_some()
    }

    /// Maps any position of the (unrolled) trace to its canonical index.
    pub fn canonical(&self, i: usize) -> Result<usize, EvalError> {
        match self.loop_len {
            Some(period) => Ok(crate::trace::canonical_position(self.prefix_len, period, i)),
            None if i < self.len() => Ok(i),
            None => Err(EvalError::OutOfRange {
                pos: i,
                len: self.len(),
            }),
        }
    }

    fn holds(&self, k: usize, p: &str) -> bool {
        self.labels[k].contains(p) || self.tags.as_ref().is_some_and(|tags| tags[k].name() == p)
    }
}

/// Least-fixpoint until along a functional successor graph.
fn until_along(succ: &[Option<usize>], left: &[bool], right: &[bool]) -> Vec<bool> {
    let n = succ.len();
    (0..n)
        .map(|start| {
            let mut k = start;
            for _ in 0..=n {
                if right[k] {
                    return true;
                }
                if !left[k] {
                    return false;
                }
                match succ[k] {
                    Some(next) => k = next,
                    None => return false,
                }
            }
            // every position on the cycle satisfies left but not right
            false
        })
        .collect()
}

fn next_along(succ: &[Option<usize>], inner: &[bool]) -> Vec<bool> {
    succ.iter().map(|s| s.is_none_or(|k| inner[k])).collect()
}

/// Memoized evaluation over one trace. Truth vectors, once computed, are
/// reused by later queries on the same context.
pub struct EvalContext<'t> {
    frame: Frame<'t>,
    memo: HashMap<Formula, Vec<bool>>,
}

impl<'t> EvalContext<'t> {
    pub fn new(frame: Frame<'t>) -> Self {
        EvalContext {
            frame,
            memo: HashMap::new(),
        }
    }

    pub fn frame(&self) -> &Frame<'t> {
        &self.frame
    }

    /// Truth of `f` at every canonical position.
    pub fn truth(&mut self, f: &Formula) -> Result<&[bool], EvalError> {
        if !self.frame.is_structured() && !f.is_ltl() {
            return Err(EvalError::AbstractOperator(f.to_string()));
        }
        if !self.memo.contains_key(f) {
            for g in f.subformulas() {
                if self.memo.contains_key(g) {
                    continue;
                }
                let values = self.compute(g);
                self.memo.insert(g.clone(), values);
            }
        }
        Ok(&self.memo[f])
    }

    /// Truth of `f` at position `i` (any position, for lassos).
    pub fn eval(&mut self, i: usize, f: &Formula) -> Result<bool, EvalError> {
        let k = self.frame.canonical(i)?;
        Ok(self.truth(f)?[k])
    }

    fn get(&self, f: &Formula) -> &[bool] {
        &self.memo[f]
    }

    fn compute(&self, f: &Formula) -> Vec<bool> {
        let n = self.frame.len();
        match f {
            Formula::True => vec![true; n],
            Formula::Prop(p) => (0..n).map(|k| self.frame.holds(k, p)).collect(),
            Formula::Not(a) => self.get(a).iter().map(|v| !v).collect(),
            Formula::And(a, b) => self
                .get(a)
                .iter()
                .zip(self.get(b))
                .map(|(x, y)| *x && *y)
                .collect(),
            Formula::WeakNext(a) => next_along(&self.frame.next, self.get(a)),
            Formula::Until(a, b) => until_along(&self.frame.next, self.get(a), self.get(b)),
            Formula::AbsWeakNext(a) => {
                next_along(self.frame.abs_next.as_ref().expect("structured"), self.get(a))
            }
            Formula::AbsUntil(a, b) => until_along(
                self.frame.abs_next.as_ref().expect("structured"),
                self.get(a),
                self.get(b),
            ),
        }
    }
}

/// Traces that LTL formulas are evaluated on.
pub trait LinearTrace {
    fn frame(&self) -> Frame<'_>;
}

impl LinearTrace for FiniteTrace {
    fn frame(&self) -> Frame<'_> {
        Frame::finite(self)
    }
}

impl LinearTrace for LassoTrace {
    fn frame(&self) -> Frame<'_> {
        Frame::lasso(self)
    }
}

/// Truth of an LTL formula at position `i` of a finite trace or lasso.
pub fn eval_ltl<T: LinearTrace + ?Sized>(t: &T, i: usize, f: &Formula) -> Result<bool, EvalError> {
    EvalContext::new(t.frame()).eval(i, f)
}

/// Truth of a CaRet formula at position `i` of a structured lasso. The
/// propositions `call`, `ret` and `int` also hold where they name the tag.
pub fn eval_caret(t: &StructuredLassoTrace, i: usize, f: &Formula) -> bool {
    EvalContext::new(Frame::structured(t))
        .eval(i, f)
        .expect("structured frames evaluate every formula at every position")
}

/// Truth at position `i` of whichever kind of trace `t` is.
pub fn eval(t: &Trace, i: usize, f: &Formula) -> Result<bool, EvalError> {
    EvalContext::new(Frame::of(t)).eval(i, f)
}

/// True iff `f` holds at every canonical position of `t`.
pub fn eval_everywhere(t: &Trace, f: &Formula) -> Result<bool, EvalError> {
    Ok(first_failure(t, f)?.is_none())
}

/// The first canonical position where `f` is false, if any.
pub fn first_failure(t: &Trace, f: &Formula) -> Result<Option<usize>, EvalError> {
    let mut ctx = EvalContext::new(Frame::of(t));
    Ok(ctx.truth(f)?.iter().position(|v| !v))
}
