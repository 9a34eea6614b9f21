use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::syntax::{parse_template, Formula};

use super::cr::{expand_cr, CrError};

/// The five axiom systems.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SystemId {
    /// Infinite traces, with the unweakened `T2`/`T3`.
    Ax,
    AxGen,
    AxInf,
    AxFin,
    /// CaRet over structured traces.
    AxCr,
}

impl SystemId {
    pub const ALL: [SystemId; 5] = [
        SystemId::Ax,
        SystemId::AxGen,
        SystemId::AxInf,
        SystemId::AxFin,
        SystemId::AxCr,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SystemId::Ax => "ax",
            SystemId::AxGen => "ax-gen",
            SystemId::AxInf => "ax-inf",
            SystemId::AxFin => "ax-fin",
            SystemId::AxCr => "ax-cr",
        }
    }

    pub fn is_caret(self) -> bool {
        self == SystemId::AxCr
    }

    /// Axiom schemas of the system, in listing order.
    pub fn schemas(self) -> &'static [Schema] {
        use Schema::*;
        match self {
            SystemId::Ax => &[T1, T2, T3],
            SystemId::AxGen => &[T1, T2p, T3p],
            SystemId::AxInf => &[T1, T2p, T3p, Inf],
            SystemId::AxFin => &[T1, T2p, T3p, Fin],
            SystemId::AxCr => &[G1, G2, G3, G4, A1, A2, A3, C1, C2, C3, C4, C5, C6],
        }
    }

    pub fn admits(self, schema: Schema) -> bool {
        self.schemas().contains(&schema)
    }

    pub fn admits_rule(self, rule: RuleKind) -> bool {
        match rule {
            RuleKind::GenAbsNext | RuleKind::IndAbsUntil => self.is_caret(),
            _ => true,
        }
    }
}

impl fmt::Display for SystemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SystemId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SystemId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| format!("unknown system `{s}` (expected ax, ax-gen, ax-inf, ax-fin or ax-cr)"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Schema {
    T1,
    T2,
    T3,
    T2p,
    T3p,
    Inf,
    Fin,
    G1,
    G2,
    G3,
    G4,
    A1,
    A2,
    A3,
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
}

impl Schema {
    pub const ALL: [Schema; 20] = [
        Schema::T1,
        Schema::T2,
        Schema::T3,
        Schema::T2p,
        Schema::T3p,
        Schema::Inf,
        Schema::Fin,
        Schema::G1,
        Schema::G2,
        Schema::G3,
        Schema::G4,
        Schema::A1,
        Schema::A2,
        Schema::A3,
        Schema::C1,
        Schema::C2,
        Schema::C3,
        Schema::C4,
        Schema::C5,
        Schema::C6,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Schema::T1 => "T1",
            Schema::T2 => "T2",
            Schema::T3 => "T3",
            Schema::T2p => "T2'",
            Schema::T3p => "T3'",
            Schema::Inf => "Inf",
            Schema::Fin => "Fin",
            Schema::G1 => "G1",
            Schema::G2 => "G2",
            Schema::G3 => "G3",
            Schema::G4 => "G4",
            Schema::A1 => "A1",
            Schema::A2 => "A2",
            Schema::A3 => "A3",
            Schema::C1 => "C1",
            Schema::C2 => "C2",
            Schema::C3 => "C3",
            Schema::C4 => "C4",
            Schema::C5 => "C5",
            Schema::C6 => "C6",
        }
    }

    /// Template in the concrete syntax with metavariables `φ` and `ψ`.
    pub fn template(self) -> &'static str {
        match self {
            Schema::T1 | Schema::G1 => "X φ & X (φ -> ψ) -> X ψ",
            Schema::T2 => "φ U ψ <-> ψ | (φ & X (φ U ψ))",
            Schema::T3 => "X !φ -> !X φ",
            Schema::T2p | Schema::G2 => "φ U ψ <-> ψ | (φ & N (φ U ψ))",
            Schema::T3p | Schema::G3 => "X φ <-> X false | N φ",
            Schema::Inf | Schema::G4 => "!X false",
            Schema::Fin => "F X false",
            Schema::A1 => "Xa φ & Xa (φ -> ψ) -> Xa ψ",
            Schema::A2 => "φ Ua ψ <-> ψ | (φ & Na (φ Ua ψ))",
            Schema::A3 => "Xa φ <-> Xa false | Na φ",
            Schema::C1 => "(call & !ret & !int) | (!call & ret & !int) | (!call & !ret & int)",
            Schema::C2 => "!call & X !ret -> (X φ <-> Na φ)",
            Schema::C3 => "!call & X ret -> Xa false",
            Schema::C4 => "Na φ -> F φ",
            Schema::C5 => "call & X CR(0; n, n)(ret & φ) -> Na φ",
            Schema::C6 => "call & X CR(0; m, n)(G !ret) -> Xa false",
        }
    }

    /// Metavariables the template mentions.
    pub fn metavariables(self) -> &'static [char] {
        match self {
            Schema::T1 | Schema::G1 | Schema::A1 | Schema::T2 | Schema::T2p | Schema::G2 | Schema::A2 => {
                &['φ', 'ψ']
            }
            Schema::Inf | Schema::G4 | Schema::Fin | Schema::C1 | Schema::C3 | Schema::C6 => &[],
            _ => &['φ'],
        }
    }

    /// Integer parameters of the CR families.
    pub fn parameters(self) -> &'static [&'static str] {
        match self {
            Schema::C5 => &["n"],
            Schema::C6 => &["m", "n"],
            _ => &[],
        }
    }
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Schema {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Schema::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown axiom schema `{s}`"))
    }
}

/// Inference rules other than modus ponens.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RuleKind {
    GenNext,
    IndUntil,
    GenAbsNext,
    IndAbsUntil,
}

impl RuleKind {
    pub fn keyword(self) -> &'static str {
        match self {
            RuleKind::GenNext => "gen-x",
            RuleKind::IndUntil => "ind-u",
            RuleKind::GenAbsNext => "gen-xa",
            RuleKind::IndAbsUntil => "ind-ua",
        }
    }
}

/// Metavariable bindings of an axiom instance.
pub type Bindings = BTreeMap<char, Formula>;
/// Integer parameters (`n`, `m`) of an axiom instance.
pub type Params = BTreeMap<String, u32>;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("axiom {schema} is not part of {system}")]
    NotAdmissible { schema: Schema, system: SystemId },
    #[error("axiom {schema} needs a binding for {var}")]
    MissingBinding { schema: Schema, var: char },
    #[error("axiom {schema} has no metavariable {var}")]
    UnexpectedBinding { schema: Schema, var: char },
    #[error("axiom {schema} needs parameter {name}")]
    MissingParameter { schema: Schema, name: &'static str },
    #[error("axiom {schema} takes no parameter {name}")]
    UnexpectedParameter { schema: Schema, name: String },
    #[error("axiom C6 needs m > n")]
    C6Parameters,
    #[error(transparent)]
    Cr(#[from] CrError),
}

/// An entry of an axiom system listing: either a schema or a rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ListedAxiom {
    pub id: &'static str,
    pub text: String,
}

fn rule_entries(system: SystemId) -> Vec<ListedAxiom> {
    let entry = |id: &'static str, text: &str| ListedAxiom {
        id,
        text: text.to_string(),
    };
    let (gen, ind) = if system.is_caret() {
        ("RG1", "RG2")
    } else {
        ("RT1", "RT2")
    };
    vec![
        entry(gen, "from φ infer X φ"),
        entry(ind, "from φ' -> !ψ & X φ' infer φ' -> !(φ U ψ)"),
    ]
}

/// The schemas and rules of a system with their templates.
pub fn list_axioms(system: SystemId) -> Vec<ListedAxiom> {
    let entry = |id: &'static str, text: &str| ListedAxiom {
        id,
        text: text.to_string(),
    };
    let mut out = vec![
        entry("Prop", "all propositional tautologies"),
        entry("MP", "from φ and φ -> ψ infer ψ"),
    ];
    let schemas = system.schemas();
    let (first, rest) = if system.is_caret() {
        schemas.split_at(4)
    } else {
        (schemas, &[][..])
    };
    out.extend(first.iter().map(|s| entry(s.name(), s.template())));
    out.extend(rule_entries(system));
    if system.is_caret() {
        let (abs, calls) = rest.split_at(3);
        out.extend(abs.iter().map(|s| entry(s.name(), s.template())));
        out.push(entry("RA1", "from φ infer Xa φ"));
        out.push(entry("RA2", "from φ' -> !ψ & Xa φ' infer φ' -> !(φ Ua ψ)"));
        out.extend(calls.iter().map(|s| entry(s.name(), s.template())));
    }
    out
}

fn param(schema: Schema, params: &Params, name: &'static str) -> Result<u32, InstanceError> {
    params
        .get(name)
        .copied()
        .ok_or(InstanceError::MissingParameter { schema, name })
}

/// The instance of `schema` under the given parameters and bindings, fully
/// desugared.
pub fn instantiate(schema: Schema, params: &Params, bindings: &Bindings) -> Result<Formula, InstanceError> {
    for var in schema.metavariables() {
        if !bindings.contains_key(var) {
            return Err(InstanceError::MissingBinding { schema, var: *var });
        }
    }
    if let Some(&var) = bindings.keys().find(|v| !schema.metavariables().contains(v)) {
        return Err(InstanceError::UnexpectedBinding { schema, var });
    }
    if let Some(name) = params.keys().find(|k| !schema.parameters().contains(&k.as_str())) {
        return Err(InstanceError::UnexpectedParameter {
            schema,
            name: name.clone(),
        });
    }
    let fill = |text: &str| {
        parse_template(text).substitute(&|name: &str| {
            let mut chars = name.chars();
            let c = chars.next()?;
            if chars.next().is_some() {
                return None;
            }
            bindings.get(&c).cloned()
        })
    };
    let call = Formula::prop("call");
    match schema {
        Schema::C5 => {
            let n = param(schema, params, "n")?;
            let inner = Formula::and(Formula::prop("ret"), bindings[&'φ'].clone());
            Ok(Formula::implies(
                Formula::and(call, Formula::next(expand_cr(0, n, n, &inner)?)),
                Formula::abs_strong_next(bindings[&'φ'].clone()),
            ))
        }
        Schema::C6 => {
            let m = param(schema, params, "m")?;
            let n = param(schema, params, "n")?;
            if m <= n {
                return Err(InstanceError::C6Parameters);
            }
            let inner = Formula::always(Formula::not(Formula::prop("ret")));
            Ok(Formula::implies(
                Formula::and(call, Formula::next(expand_cr(0, m, n, &inner)?)),
                Formula::abs_next(Formula::ff()),
            ))
        }
        _ => Ok(fill(schema.template())),
    }
}

/// Whether `f` is exactly the instance of `schema` with these parameters and
/// bindings.
pub fn check_axiom_instance(
    system: SystemId,
    schema: Schema,
    params: &Params,
    bindings: &Bindings,
    f: &Formula,
) -> Result<bool, InstanceError> {
    if !system.admits(schema) {
        return Err(InstanceError::NotAdmissible { schema, system });
    }
    Ok(instantiate(schema, params, bindings)? == *f)
}
