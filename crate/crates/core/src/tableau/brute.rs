//! Exhaustive model search over small traces, independent of the atom
//! machinery: formulas are evaluated on position bitmasks, with until
//! computed as a least fixpoint.

use std::collections::HashMap;

use crate::syntax::Formula;
use crate::trace::{FiniteTrace, Label, LassoTrace, Trace};

use super::StructureClass;

/// Largest trace the oracle enumerates.
pub const MAX_BRUTE_TOTAL: usize = 10;
/// Largest proposition alphabet the oracle accepts.
pub const MAX_BRUTE_ALPHABET: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BruteVerdict {
    Satisfiable(Trace),
    UnsatisfiableUpToBound,
}

impl BruteVerdict {
    pub fn is_satisfiable(&self) -> bool {
        matches!(self, BruteVerdict::Satisfiable(_))
    }
}

#[derive(Clone, Copy)]
enum Node {
    True,
    Prop(usize),
    Not(usize),
    And(usize, usize),
    Next(usize),
    Until(usize, usize),
}

/// A formula flattened into evaluation order.
pub(crate) struct Program {
    nodes: Vec<Node>,
    props: Vec<String>,
}

impl Program {
    pub fn compile(f: &Formula) -> Program {
        let props: Vec<String> = f.props().into_iter().map(str::to_string).collect();
        let mut nodes = Vec::new();
        let mut seen = HashMap::new();
        compile_into(f, &props, &mut nodes, &mut seen);
        Program { nodes, props }
    }

    /// Positions where the formula holds on a trace of `n` states whose
    /// proposition `k` is true at the positions in `masks[k]`. With
    /// `loop_start` the last state is followed by `loop_start`, otherwise
    /// the trace is finite.
    pub fn eval(&self, n: usize, loop_start: Option<usize>, masks: &[u16], scratch: &mut Vec<u16>) -> u16 {
        let full: u16 = ((1u32 << n) - 1) as u16;
        let last: u16 = 1 << (n - 1);
        // value at the successor, with `at_end` giving the value past the
        // final state of a finite trace
        let shift = |s: u16, at_end: bool| -> u16 {
            let wrap = match loop_start {
                Some(l) => s >> l & 1 == 1,
                None => at_end,
            };
            (s >> 1) | if wrap { last } else { 0 }
        };
        scratch.clear();
        for node in &self.nodes {
            let v = match *node {
                Node::True => full,
                Node::Prop(k) => masks[k],
                Node::Not(a) => !scratch[a] & full,
                Node::And(a, b) => scratch[a] & scratch[b],
                Node::Next(a) => shift(scratch[a], true),
                Node::Until(a, b) => {
                    let (a, b) = (scratch[a], scratch[b]);
                    let mut z = b;
                    loop {
                        let next = b | (a & shift(z, false));
                        if next == z {
                            break z;
                        }
                        z = next;
                    }
                }
            };
            scratch.push(v);
        }
        *scratch.last().expect("nonempty program")
    }
}

fn compile_into(
    f: &Formula,
    props: &[String],
    nodes: &mut Vec<Node>,
    seen: &mut HashMap<Formula, usize>,
) -> usize {
    if let Some(&i) = seen.get(f) {
        return i;
    }
    let mut sub = |g: &Formula| compile_into(g, props, nodes, seen);
    let node = match f {
        Formula::True => Node::True,
        Formula::Prop(p) => Node::Prop(props.iter().position(|q| q == p).expect("known prop")),
        Formula::Not(a) => Node::Not(sub(a)),
        Formula::And(a, b) => {
            let a = sub(a);
            Node::And(a, sub(b))
        }
        Formula::WeakNext(a) => Node::Next(sub(a)),
        Formula::Until(a, b) => {
            let a = sub(a);
            Node::Until(a, sub(b))
        }
        Formula::AbsWeakNext(_) | Formula::AbsUntil(_, _) => {
            panic!("the brute-force oracle takes LTL formulas only")
        }
    };
    nodes.push(node);
    seen.insert(f.clone(), nodes.len() - 1);
    nodes.len() - 1
}

fn labels(props: &[String], n: usize, masks: &[u16]) -> Vec<Label> {
    (0..n)
        .map(|i| {
            props
                .iter()
                .zip(masks)
                .filter(|(_, &m)| m >> i & 1 == 1)
                .map(|(p, _)| p.clone())
                .collect()
        })
        .collect()
}

/// Calls `visit` with every assignment of `k` masks over `n` positions until
/// it returns true.
fn any_assignment(k: usize, n: usize, mut visit: impl FnMut(&[u16]) -> bool) -> bool {
    let width = k * n;
    let mut masks = vec![0u16; k];
    for combo in 0u64..(1u64 << width) {
        for (j, m) in masks.iter_mut().enumerate() {
            *m = ((combo >> (j * n)) & ((1 << n) - 1)) as u16;
        }
        if visit(&masks) {
            return true;
        }
    }
    false
}

/// Searches every finite trace (classes fin and gen) of length at most
/// `max_total` and every lasso (classes inf and gen) with prefix plus loop
/// at most `max_total`, over the formula's own propositions, for one that
/// satisfies `f` at position 0. Finite traces are tried first, shortest
/// first.
///
/// # Panics
/// If `f` is not LTL, uses more than [`MAX_BRUTE_ALPHABET`] propositions,
/// or `max_total` is 0 or exceeds [`MAX_BRUTE_TOTAL`].
pub fn brute_force_sat(f: &Formula, class: StructureClass, max_total: usize) -> BruteVerdict {
    assert!(
        (1..=MAX_BRUTE_TOTAL).contains(&max_total),
        "trace bound must be between 1 and {MAX_BRUTE_TOTAL}"
    );
    let program = Program::compile(f);
    let k = program.props.len();
    assert!(
        k <= MAX_BRUTE_ALPHABET,
        "at most {MAX_BRUTE_ALPHABET} propositions"
    );
    let mut scratch = Vec::new();
    let mut found = None;

    if class != StructureClass::Inf {
        for n in 1..=max_total {
            if any_assignment(k, n, |masks| {
                if program.eval(n, None, masks, &mut scratch) & 1 == 1 {
                    found = Some(Trace::Finite(
                        FiniteTrace::new(labels(&program.props, n, masks)).expect("nonempty"),
                    ));
                    return true;
                }
                false
            }) {
                break;
            }
        }
    }
    if found.is_none() && class != StructureClass::Fin {
        'outer: for n in 1..=max_total {
            for l in 0..n {
                if any_assignment(k, n, |masks| {
                    if program.eval(n, Some(l), masks, &mut scratch) & 1 == 1 {
                        let mut states = labels(&program.props, n, masks);
                        let cycle = states.split_off(l);
                        found = Some(Trace::Lasso(
                            LassoTrace::new(states, cycle).expect("nonempty loop"),
                        ));
                        return true;
                    }
                    false
                }) {
                    break 'outer;
                }
            }
        }
    }
    match found {
        Some(t) => BruteVerdict::Satisfiable(t),
        None => BruteVerdict::UnsatisfiableUpToBound,
    }
}
