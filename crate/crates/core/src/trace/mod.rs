//! Finite traces, lassos and call/return structured lassos.
//!
//! Infinite traces are always ultimately periodic and presented as a
//! `prefix` followed by a nonempty `cycle` repeated forever. Positions past
//! the prefix are identified with their representative in the first copy of
//! the cycle (see [`Periodic::canonical_position`]).

mod format;
mod matching;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

pub use format::parse_trace;
pub use matching::{abstract_successor, brute_matching_return, matching_return, ScanOutcome};

/// The propositions true at a state.
pub type Label = BTreeSet<String>;

/// Builds a label from proposition names.
pub fn label<I, S>(props: I) -> Label
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    props.into_iter().map(Into::into).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("a finite trace needs at least one state")]
    Empty,
    #[error("the loop of a lasso needs at least one state")]
    EmptyLoop,
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StateTag {
    Call,
    Ret,
    Int,
}

impl StateTag {
    pub const ALL: [StateTag; 3] = [StateTag::Call, StateTag::Ret, StateTag::Int];

    /// The proposition name that holds at states carrying this tag.
    pub fn name(self) -> &'static str {
        match self {
            StateTag::Call => "call",
            StateTag::Ret => "ret",
            StateTag::Int => "int",
        }
    }
}

impl fmt::Display for StateTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Result of the abstract successor and matching-return maps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AbsPosition {
    At(usize),
    Undefined,
}

impl AbsPosition {
    pub fn position(self) -> Option<usize> {
        match self {
            AbsPosition::At(j) => Some(j),
            AbsPosition::Undefined => None,
        }
    }

    pub fn is_defined(self) -> bool {
        matches!(self, AbsPosition::At(_))
    }
}

impl fmt::Display for AbsPosition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AbsPosition::At(j) => write!(f, "{j}"),
            AbsPosition::Undefined => f.write_str("undefined"),
        }
    }
}

/// A nonempty finite sequence of states.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteTrace {
    states: Vec<Label>,
}

impl FiniteTrace {
    pub fn new(states: Vec<Label>) -> Result<Self, TraceError> {
        if states.is_empty() {
            return Err(TraceError::Empty);
        }
        Ok(FiniteTrace { states })
    }

    pub fn states(&self) -> &[Label] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    /// Always false: finite traces have at least one state.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn last(&self) -> usize {
        self.states.len() - 1
    }
}

/// Shared arithmetic for ultimately periodic traces.
pub trait Periodic {
    fn prefix_len(&self) -> usize;
    fn loop_len(&self) -> usize;

    /// Number of distinct positions: the prefix plus one copy of the loop.
    fn canonical_len(&self) -> usize {
        self.prefix_len() + self.loop_len()
    }

    fn canonical_position(&self, i: usize) -> usize {
        canonical_position(self.prefix_len(), self.loop_len(), i)
    }

    /// Global successor of a canonical position, again canonical.
    fn canonical_next(&self, k: usize) -> usize {
        if k + 1 == self.canonical_len() {
            self.prefix_len()
        } else {
            k + 1
        }
    }
}

/// `i` for prefix positions, otherwise its representative in the first loop
/// copy.
pub fn canonical_position(prefix_len: usize, loop_len: usize, i: usize) -> usize {
    if i < prefix_len {
        i
    } else {
        prefix_len + (i - prefix_len) % loop_len
    }
}

/// The infinite trace `prefix · cycle^ω`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LassoTrace {
    prefix: Vec<Label>,
    cycle: Vec<Label>,
}

impl LassoTrace {
    pub fn new(prefix: Vec<Label>, cycle: Vec<Label>) -> Result<Self, TraceError> {
        if cycle.is_empty() {
            return Err(TraceError::EmptyLoop);
        }
        Ok(LassoTrace { prefix, cycle })
    }

    pub fn prefix(&self) -> &[Label] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[Label] {
        &self.cycle
    }

    /// Label of any position of the unrolled trace.
    pub fn state(&self, i: usize) -> &Label {
        let k = self.canonical_position(i);
        if k < self.prefix.len() {
            &self.prefix[k]
        } else {
            &self.cycle[k - self.prefix.len()]
        }
    }
}

impl Periodic for LassoTrace {
    fn prefix_len(&self) -> usize {
        self.prefix.len()
    }

    fn loop_len(&self) -> usize {
        self.cycle.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StructuredState {
    pub props: Label,
    pub tag: StateTag,
}

impl StructuredState {
    pub fn new(tag: StateTag, props: Label) -> Self {
        StructuredState { props, tag }
    }
}

/// An infinite lasso whose states each carry exactly one call/ret/int tag.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StructuredLassoTrace {
    prefix: Vec<StructuredState>,
    cycle: Vec<StructuredState>,
}

impl StructuredLassoTrace {
    pub fn new(prefix: Vec<StructuredState>, cycle: Vec<StructuredState>) -> Result<Self, TraceError> {
        if cycle.is_empty() {
            return Err(TraceError::EmptyLoop);
        }
        Ok(StructuredLassoTrace { prefix, cycle })
    }

    /// Shorthand for unlabeled states given only by their tags.
    pub fn from_tags(prefix: &[StateTag], cycle: &[StateTag]) -> Result<Self, TraceError> {
        let states = |tags: &[StateTag]| {
            tags.iter()
                .map(|&t| StructuredState::new(t, Label::new()))
                .collect()
        };
        StructuredLassoTrace::new(states(prefix), states(cycle))
    }

    pub fn prefix(&self) -> &[StructuredState] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[StructuredState] {
        &self.cycle
    }

    pub fn state(&self, i: usize) -> &StructuredState {
        let k = self.canonical_position(i);
        if k < self.prefix.len() {
            &self.prefix[k]
        } else {
            &self.cycle[k - self.prefix.len()]
        }
    }

    pub fn tag(&self, i: usize) -> StateTag {
        self.state(i).tag
    }
}

impl Periodic for StructuredLassoTrace {
    fn prefix_len(&self) -> usize {
        self.prefix.len()
    }

    fn loop_len(&self) -> usize {
        self.cycle.len()
    }
}

/// Any of the three trace kinds, as read from the text format.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Trace {
    Finite(FiniteTrace),
    Lasso(LassoTrace),
    Structured(StructuredLassoTrace),
}

impl Trace {
    /// Number of distinct positions.
    pub fn canonical_len(&self) -> usize {
        match self {
            Trace::Finite(t) => t.len(),
            Trace::Lasso(t) => t.canonical_len(),
            Trace::Structured(t) => t.canonical_len(),
        }
    }
}

impl From<FiniteTrace> for Trace {
    fn from(t: FiniteTrace) -> Self {
        Trace::Finite(t)
    }
}

impl From<LassoTrace> for Trace {
    fn from(t: LassoTrace) -> Self {
        Trace::Lasso(t)
    }
}

impl From<StructuredLassoTrace> for Trace {
    fn from(t: StructuredLassoTrace) -> Self {
        Trace::Structured(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_positions() {
        assert_eq!(canonical_position(2, 3, 8), 2);
        assert_eq!(canonical_position(0, 1, 7), 0);
        assert_eq!(canonical_position(2, 3, 1), 1);
        assert_eq!(canonical_position(2, 3, 4), 4);
        assert_eq!(canonical_position(2, 3, 5), 2);
    }

    #[test]
    fn constructors_enforce_nonempty() {
        assert_eq!(FiniteTrace::new(vec![]), Err(TraceError::Empty));
        assert_eq!(
            LassoTrace::new(vec![label(["p"])], vec![]),
            Err(TraceError::EmptyLoop)
        );
        assert!(LassoTrace::new(vec![], vec![Label::new()]).is_ok());
    }

    #[test]
    fn lasso_state_lookup_wraps() {
        let t = LassoTrace::new(vec![label(["a"])], vec![label(["b"]), label(["c"])]).unwrap();
        assert_eq!(t.state(0), &label(["a"]));
        assert_eq!(t.state(3), &label(["b"]));
        assert_eq!(t.state(4), &label(["c"]));
        assert_eq!(t.canonical_next(2), 1);
    }
}
