use std::collections::HashMap;

use thiserror::Error;

use crate::syntax::Formula;

/// Most distinct opaque subformulas a tautology check will enumerate.
pub const MAX_TAUT_LETTERS: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{count} distinct non-Boolean subformulas, above the limit of {MAX_TAUT_LETTERS}")]
pub struct TautError {
    pub count: usize,
}

enum Node {
    True,
    Letter(usize),
    Not(usize),
    And(usize, usize),
}

struct Abstraction<'f> {
    nodes: Vec<Node>,
    letters: HashMap<&'f Formula, usize>,
}

impl<'f> Abstraction<'f> {
    fn add(&mut self, f: &'f Formula) -> usize {
        let node = match f {
            Formula::True => Node::True,
            Formula::Not(a) => Node::Not(self.add(a)),
            Formula::And(a, b) => {
                let a = self.add(a);
                Node::And(a, self.add(b))
            }
            _ => {
                let next = self.letters.len();
                Node::Letter(*self.letters.entry(f).or_insert(next))
            }
        };
        self.nodes.push(node);
        self.nodes.len() - 1
    }
}

/// Propositional validity, treating every maximal subformula whose head is
/// not `!`, `&` or `true` as an opaque letter.
pub fn check_tautology(f: &Formula) -> Result<bool, TautError> {
    let mut abs = Abstraction {
        nodes: Vec::new(),
        letters: HashMap::new(),
    };
    abs.add(f);
    let k = abs.letters.len();
    if k > MAX_TAUT_LETTERS {
        return Err(TautError { count: k });
    }
    // 64 valuations per word: letters below 6 vary inside a word, the rest
    // are constant across it
    const PATTERNS: [u64; 6] = [
        0xAAAA_AAAA_AAAA_AAAA,
        0xCCCC_CCCC_CCCC_CCCC,
        0xF0F0_F0F0_F0F0_F0F0,
        0xFF00_FF00_FF00_FF00,
        0xFFFF_0000_FFFF_0000,
        0xFFFF_FFFF_0000_0000,
    ];
    let live: u64 = if k >= 6 { !0 } else { (1u64 << (1 << k)) - 1 };
    let words = 1u64 << k.saturating_sub(6);
    let mut values: Vec<u64> = Vec::with_capacity(abs.nodes.len());
    for word in 0..words {
        values.clear();
        for node in &abs.nodes {
            let v = match *node {
                Node::True => !0,
                Node::Letter(i) if i < 6 => PATTERNS[i],
                Node::Letter(i) => {
                    if word >> (i - 6) & 1 == 1 {
                        !0
                    } else {
                        0
                    }
                }
                Node::Not(a) => !values[a],
                Node::And(a, b) => values[a] & values[b],
            };
            values.push(v);
        }
        if values.last().expect("nonempty") & live != live {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, Logic};

    fn taut(text: &str) -> bool {
        check_tautology(&parse_formula(text, Logic::Caret).unwrap()).unwrap()
    }

    #[test]
    fn examples() {
        assert!(taut("p -> p"));
        assert!(taut("X p & (X p -> q) -> q"));
        assert!(!taut("X p -> p"));
        assert!(taut("true"));
        assert!(!taut("false"));
        assert!(taut("(p U q) | !(p U q)"));
        assert!(!taut("(p U q) | !(q U p)"));
        assert!(taut("Xa false & (Xa false -> X ret) -> X ret"));
    }

    #[test]
    fn many_letters() {
        let names: Vec<String> = (0..20).map(|i| format!("p{i}")).collect();
        let conj = names.join(" & ");
        assert!(taut(&format!("{conj} -> p19")));
        assert!(!taut(&format!("{conj} -> !p7")));
        let too_many = format!("{conj} & q -> q");
        assert_eq!(
            check_tautology(&parse_formula(&too_many, Logic::Ltl).unwrap()),
            Err(TautError { count: 21 })
        );
    }

    #[test]
    fn falsified_only_in_high_words() {
        // only the valuation with all seven letters true falsifies it
        assert!(!taut("!(a & b & c & d & e & f & g)"));
    }
}
