//! Line-oriented text format.
//!
//! ```text
//! # comment
//! @call p q      <- optional tag, then propositions
//! -              <- the empty proposition set
//! loop:          <- separates prefix from loop; absent for finite traces
//! @ret p
//! ```
//!
//! Tags are required on every state of a structured trace and forbidden in
//! plain traces. Structured traces must have a loop.

use std::fmt;

use super::{
    FiniteTrace, Label, LassoTrace, StateTag, StructuredLassoTrace, StructuredState, Trace, TraceError,
};

fn format_err(line: usize, message: impl Into<String>) -> TraceError {
    TraceError::Format {
        line,
        message: message.into(),
    }
}

fn is_identifier(word: &str) -> bool {
    let mut chars = word.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
        && word != "true"
        && word != "false"
}

struct Line {
    number: usize,
    tag: Option<StateTag>,
    props: Label,
}

fn parse_state(number: usize, text: &str) -> Result<Line, TraceError> {
    let mut words = text.split_whitespace().peekable();
    let tag = match words.peek() {
        Some(w) if w.starts_with('@') => {
            let tag = match *w {
                "@call" => StateTag::Call,
                "@ret" => StateTag::Ret,
                "@int" => StateTag::Int,
                other => return Err(format_err(number, format!("unknown tag `{other}`"))),
            };
            words.next();
            Some(tag)
        }
        _ => None,
    };
    let words: Vec<&str> = words.collect();
    let props = match words.as_slice() {
        [] => return Err(format_err(number, "missing propositions (use `-` for none)")),
        ["-"] => Label::new(),
        _ => {
            let mut props = Label::new();
            for w in words {
                if !is_identifier(w) {
                    return Err(format_err(number, format!("invalid proposition `{w}`")));
                }
                props.insert(w.to_string());
            }
            props
        }
    };
    Ok(Line { number, tag, props })
}

/// Reads a trace in the text format. The presence of tags and of a `loop:`
/// line decides which kind of trace comes back.
pub fn parse_trace(text: &str) -> Result<Trace, TraceError> {
    let mut prefix = Vec::new();
    let mut cycle = Vec::new();
    let mut loop_line = None;
    for (index, raw) in text.lines().enumerate() {
        let number = index + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if line == "loop:" {
            if loop_line.is_some() {
                return Err(format_err(number, "second `loop:` separator"));
            }
            loop_line = Some(number);
            continue;
        }
        let state = parse_state(number, line)?;
        if loop_line.is_some() {
            cycle.push(state);
        } else {
            prefix.push(state);
        }
    }

    let all = prefix.iter().chain(cycle.iter());
    let tagged = all.clone().filter(|s| s.tag.is_some()).count();
    let total = prefix.len() + cycle.len();
    if tagged > 0 && tagged < total {
        let first = all
            .clone()
            .find(|s| s.tag.is_none())
            .or_else(|| all.clone().find(|s| s.tag.is_some()))
            .map_or(0, |s| s.number);
        return Err(format_err(first, "either every state carries a tag or none does"));
    }

    match (tagged > 0, loop_line) {
        (true, None) => Err(format_err(
            text.lines().count(),
            "structured traces are infinite and need a `loop:` section",
        )),
        (true, Some(line)) => {
            let states = |v: Vec<Line>| {
                v.into_iter()
                    .map(|s| StructuredState::new(s.tag.expect("checked above"), s.props))
                    .collect()
            };
            StructuredLassoTrace::new(states(prefix), states(cycle))
                .map(Trace::Structured)
                .map_err(|_| format_err(line, "empty loop"))
        }
        (false, Some(line)) => {
            let labels = |v: Vec<Line>| v.into_iter().map(|s| s.props).collect();
            LassoTrace::new(labels(prefix), labels(cycle))
                .map(Trace::Lasso)
                .map_err(|_| format_err(line, "empty loop"))
        }
        (false, None) => FiniteTrace::new(prefix.into_iter().map(|s| s.props).collect()).map(Trace::Finite),
    }
}

fn write_label(f: &mut fmt::Formatter<'_>, props: &Label) -> fmt::Result {
    if props.is_empty() {
        return f.write_str("-");
    }
    for (i, p) in props.iter().enumerate() {
        if i > 0 {
            f.write_str(" ")?;
        }
        f.write_str(p)?;
    }
    Ok(())
}

impl fmt::Display for FiniteTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in self.states() {
            write_label(f, s)?;
            writeln!(f)?;
        }
        Ok(())
    }
}

impl fmt::Display for LassoTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in self.prefix() {
            write_label(f, s)?;
            writeln!(f)?;
        }
        writeln!(f, "loop:")?;
        for s in self.cycle() {
            write_label(f, s)?;
            writeln!(f)?;
        }
        Ok(())
    }
}

impl fmt::Display for StructuredLassoTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let state = |f: &mut fmt::Formatter<'_>, s: &StructuredState| {
            write!(f, "@{} ", s.tag)?;
            write_label(f, &s.props)?;
            writeln!(f)
        };
        for s in self.prefix() {
            state(f, s)?;
        }
        writeln!(f, "loop:")?;
        for s in self.cycle() {
            state(f, s)?;
        }
        Ok(())
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Trace::Finite(t) => t.fmt(f),
            Trace::Lasso(t) => t.fmt(f),
            Trace::Structured(t) => t.fmt(f),
        }
    }
}
