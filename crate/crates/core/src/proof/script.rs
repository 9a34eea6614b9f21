//! Text format of proof scripts.
//!
//! ```text
//! system: ax-gen
//! # comment
//! 1. true ; taut
//! 2. X true ; gen-x 1
//! 3. X p <-> X false | N p ; axiom T3' bind φ=p
//! 4. call & X (int U (ret & q)) -> Na q ; axiom C5 n=0 bind φ=q
//! ```

use std::fmt;

use thiserror::Error;

use crate::syntax::{parse_formula, Formula, Logic};

use super::schema::{Bindings, Params, RuleKind, Schema, SystemId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Justification {
    Axiom {
        schema: Schema,
        params: Params,
        bindings: Bindings,
    },
    Taut,
    Mp(usize, usize),
    Rule(RuleKind, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub formula: Formula,
    pub justification: Justification,
}

/// A numbered sequence of steps; step `k` (1-based) is `steps[k - 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofScript {
    pub system: SystemId,
    pub steps: Vec<Step>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ScriptError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ScriptError {
    ScriptError {
        line,
        message: message.into(),
    }
}

fn metavariable(name: &str) -> Option<char> {
    match name {
        "φ" | "phi" => Some('φ'),
        "ψ" | "psi" => Some('ψ'),
        _ => None,
    }
}

fn parse_index(line: usize, word: Option<&str>) -> Result<usize, ScriptError> {
    let word = word.ok_or_else(|| err(line, "missing step number"))?;
    word.parse()
        .map_err(|_| err(line, format!("`{word}` is not a step number")))
}

fn single(line: usize, words: &mut std::str::SplitWhitespace<'_>) -> Result<usize, ScriptError> {
    let i = parse_index(line, words.next())?;
    if let Some(extra) = words.next() {
        return Err(err(line, format!("unexpected `{extra}`")));
    }
    Ok(i)
}

fn parse_justification(line: usize, text: &str, logic: Logic) -> Result<Justification, ScriptError> {
    let mut words = text.split_whitespace();
    let keyword = words.next().ok_or_else(|| err(line, "missing justification"))?;
    match keyword {
        "taut" => match words.next() {
            None => Ok(Justification::Taut),
            Some(extra) => Err(err(line, format!("unexpected `{extra}`"))),
        },
        "mp" => {
            let i = parse_index(line, words.next())?;
            let j = single(line, &mut words)?;
            Ok(Justification::Mp(i, j))
        }
        "gen-x" => Ok(Justification::Rule(RuleKind::GenNext, single(line, &mut words)?)),
        "ind-u" => Ok(Justification::Rule(RuleKind::IndUntil, single(line, &mut words)?)),
        "gen-xa" => Ok(Justification::Rule(
            RuleKind::GenAbsNext,
            single(line, &mut words)?,
        )),
        "ind-ua" => Ok(Justification::Rule(
            RuleKind::IndAbsUntil,
            single(line, &mut words)?,
        )),
        "axiom" => parse_axiom(line, text.trim_start()["axiom".len()..].trim(), logic),
        other => Err(err(line, format!("unknown justification `{other}`"))),
    }
}

fn parse_axiom(line: usize, text: &str, logic: Logic) -> Result<Justification, ScriptError> {
    // `bind` is a keyword only as a whole word; everything between two of
    // them is one binding
    let mut segments = Vec::new();
    let mut current = String::new();
    for word in text.split_whitespace() {
        if word == "bind" {
            segments.push(std::mem::take(&mut current));
        } else {
            if !current.is_empty() {
                current.push(' ');
            }
            current.push_str(word);
        }
    }
    segments.push(current);

    let mut head = segments[0].split_whitespace();
    let name = head.next().ok_or_else(|| err(line, "missing axiom name"))?;
    let schema: Schema = name.parse().map_err(|e: String| err(line, e))?;
    let mut params = Params::new();
    for kv in head {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| err(line, format!("expected `name=value`, found `{kv}`")))?;
        let v: u32 = v
            .parse()
            .map_err(|_| err(line, format!("`{v}` is not a nonnegative integer")))?;
        if params.insert(k.to_string(), v).is_some() {
            return Err(err(line, format!("parameter `{k}` given twice")));
        }
    }
    let mut bindings = Bindings::new();
    for seg in &segments[1..] {
        let (var, formula) = seg
            .split_once('=')
            .ok_or_else(|| err(line, format!("expected `bind φ=<formula>`, found `{seg}`")))?;
        let var = metavariable(var.trim())
            .ok_or_else(|| err(line, format!("unknown metavariable `{}`", var.trim())))?;
        let f = parse_formula(formula.trim(), logic).map_err(|e| err(line, e.to_string()))?;
        if bindings.insert(var, f).is_some() {
            return Err(err(line, format!("metavariable {var} bound twice")));
        }
    }
    Ok(Justification::Axiom {
        schema,
        params,
        bindings,
    })
}

/// Reads a proof script. Step numbers must run 1, 2, 3, ... in order.
pub fn parse_proof(text: &str) -> Result<ProofScript, ScriptError> {
    let mut system = None;
    let mut steps = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let Some(system) = system else {
            let id = body
                .strip_prefix("system:")
                .ok_or_else(|| err(line, "the first line must be `system: <id>`"))?;
            system = Some(id.trim().parse::<SystemId>().map_err(|e| err(line, e))?);
            continue;
        };
        let logic = if system.is_caret() {
            Logic::Caret
        } else {
            Logic::Ltl
        };
        let (number, rest) = body
            .split_once('.')
            .ok_or_else(|| err(line, "expected `<n>. <formula> ; <justification>`"))?;
        let number = parse_index(line, Some(number.trim()))?;
        if number != steps.len() + 1 {
            return Err(err(
                line,
                format!("expected step {}, found step {number}", steps.len() + 1),
            ));
        }
        let (formula, justification) = rest
            .rsplit_once(';')
            .ok_or_else(|| err(line, "missing `;` before the justification"))?;
        let formula = parse_formula(formula.trim(), logic).map_err(|e| err(line, e.to_string()))?;
        let justification = parse_justification(line, justification, logic)?;
        steps.push(Step {
            formula,
            justification,
        });
    }
    let system = system.ok_or_else(|| err(text.lines().count().max(1), "missing `system:` line"))?;
    Ok(ProofScript { system, steps })
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Justification::Axiom {
                schema,
                params,
                bindings,
            } => {
                write!(f, "axiom {schema}")?;
                for (k, v) in params {
                    write!(f, " {k}={v}")?;
                }
                for (var, g) in bindings {
                    write!(f, " bind {var}={g}")?;
                }
                Ok(())
            }
            Justification::Taut => f.write_str("taut"),
            Justification::Mp(i, j) => write!(f, "mp {i} {j}"),
            Justification::Rule(kind, i) => write!(f, "{} {i}", kind.keyword()),
        }
    }
}

impl fmt::Display for ProofScript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "system: {}", self.system)?;
        for (k, step) in self.steps.iter().enumerate() {
            writeln!(f, "{}. {} ; {}", k + 1, step.formula, step.justification)?;
        }
        Ok(())
    }
}
