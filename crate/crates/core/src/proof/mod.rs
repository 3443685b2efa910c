//! Hilbert-style proof systems and a line-by-line proof checker.
//!
//! A script is a list of formulas, each justified as an axiom instance, by
//! modus ponens, by a unary rule, by substitution, or as one of the
//! script's premises. Line numbers are 1-based. Lines that depend on a
//! premise may not be substituted into, so a premise script reads as a
//! derived rule: whenever the premises are theorems, so is every line.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::Identity;
use crate::formula::{
    is_metavariable, parse, parse_schema, print, Formula, ParseError, Shape, Substitution,
};

pub mod corpus;
pub mod tactic;

pub use corpus::{script_corpus, CorpusEntry};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    Mp,
    Subst,
    /// `F A -> B` / `A -> H B`
    GcFhIntro,
    /// `A -> H B` / `F A -> B`
    GcFhElim,
    /// `P A -> B` / `A -> G B`
    GcPgIntro,
    /// `A -> G B` / `P A -> B`
    GcPgElim,
    /// `A` / `G A`
    Rg,
    /// `A` / `H A`
    Rh,
    /// `A -> B` / `F A -> F B`
    Rmf,
    /// `A -> B` / `P A -> P B`
    Rmp,
}

impl Rule {
    pub const ALL: [Rule; 10] = [
        Rule::Mp,
        Rule::Subst,
        Rule::GcFhIntro,
        Rule::GcFhElim,
        Rule::GcPgIntro,
        Rule::GcPgElim,
        Rule::Rg,
        Rule::Rh,
        Rule::Rmf,
        Rule::Rmp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Mp => "MP",
            Rule::Subst => "SUBST",
            Rule::GcFhIntro => "GC_FH_intro",
            Rule::GcFhElim => "GC_FH_elim",
            Rule::GcPgIntro => "GC_PG_intro",
            Rule::GcPgElim => "GC_PG_elim",
            Rule::Rg => "RG",
            Rule::Rh => "RH",
            Rule::Rmf => "RMF",
            Rule::Rmp => "RMP",
        }
    }

    pub fn from_name(s: &str) -> Option<Rule> {
        Rule::ALL.into_iter().find(|r| r.name() == s)
    }

    /// Conclusion of a one-premise rule, or `None` if the premise has the
    /// wrong shape. `MP` and `SUBST` are not one-premise rules.
    pub fn apply(self, premise: &Formula) -> Option<Formula> {
        let imp = |f: &Formula| match f {
            Formula::Imp(a, b) => Some(((**a).clone(), (**b).clone())),
            _ => None,
        };
        match self {
            Rule::Mp | Rule::Subst => None,
            Rule::Rg => Some(Formula::box_g(premise.clone())),
            Rule::Rh => Some(Formula::box_h(premise.clone())),
            Rule::Rmf => {
                imp(premise).map(|(a, b)| Formula::imp(Formula::dia_f(a), Formula::dia_f(b)))
            }
            Rule::Rmp => {
                imp(premise).map(|(a, b)| Formula::imp(Formula::dia_p(a), Formula::dia_p(b)))
            }
            Rule::GcFhIntro => match imp(premise)? {
                (Formula::DiaF(a), b) => Some(Formula::imp(*a, Formula::box_h(b))),
                _ => None,
            },
            Rule::GcFhElim => match imp(premise)? {
                (a, Formula::BoxH(b)) => Some(Formula::imp(Formula::dia_f(a), *b)),
                _ => None,
            },
            Rule::GcPgIntro => match imp(premise)? {
                (Formula::DiaP(a), b) => Some(Formula::imp(*a, Formula::box_g(b))),
                _ => None,
            },
            Rule::GcPgElim => match imp(premise)? {
                (a, Formula::BoxG(b)) => Some(Formula::imp(Formula::dia_p(a), *b)),
                _ => None,
            },
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Binding of metavariables found by [`match_schema`].
pub type Binding = BTreeMap<String, Formula>;

/// The unique binding that turns `schema` into `f`, if any. Lowercase
/// variables in the schema must match themselves.
pub fn match_schema(schema: &Formula, f: &Formula) -> Option<Binding> {
    fn go(s: &Formula, f: &Formula, b: &mut Binding) -> bool {
        match (s.shape(), f.shape()) {
            (Shape::Var(m), _) if is_metavariable(m) => match b.get(m) {
                Some(prev) => prev == f,
                None => {
                    b.insert(m.to_string(), f.clone());
                    true
                }
            },
            (Shape::Var(x), Shape::Var(y)) => x == y,
            (Shape::Top, Shape::Top) | (Shape::Bot, Shape::Bot) => true,
            (Shape::Unary(o1, a1), Shape::Unary(o2, a2)) => o1 == o2 && go(a1, a2, b),
            (Shape::Binary(o1, a1, c1), Shape::Binary(o2, a2, c2)) => {
                o1 == o2 && go(a1, a2, b) && go(c1, c2, b)
            }
            _ => false,
        }
    }
    let mut b = Binding::new();
    go(schema, f, &mut b).then_some(b)
}

pub fn instantiate(schema: &Formula, b: &Binding) -> Formula {
    schema.substitute(b)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofSystem {
    name: String,
    axioms: Vec<(String, Formula)>,
    rules: Vec<Rule>,
    required: Vec<Identity>,
}

impl ProofSystem {
    /// `axioms` pairs names with schema text; `required` names the algebraic
    /// identities that define the system's algebra class.
    pub fn new(
        name: &str,
        axioms: &[(&str, &str)],
        rules: &[Rule],
        required: &[Identity],
    ) -> ProofSystem {
        let axioms = axioms
            .iter()
            .map(|(n, s)| {
                (
                    n.to_string(),
                    parse_schema(s).unwrap_or_else(|e| panic!("schema {n}: {e}")),
                )
            })
            .collect();
        ProofSystem {
            name: name.to_string(),
            axioms,
            rules: rules.to_vec(),
            required: required.to_vec(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn axioms(&self) -> &[(String, Formula)] {
        &self.axioms
    }

    pub fn axiom(&self, name: &str) -> Option<&Formula> {
        self.axioms.iter().find(|(n, _)| n == name).map(|(_, s)| s)
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn has_rule(&self, r: Rule) -> bool {
        self.rules.contains(&r)
    }

    pub fn required_identities(&self) -> &[Identity] {
        &self.required
    }

    /// Whether the matching algebra class includes the Fischer Servi identities.
    pub fn is_fs_class(&self) -> bool {
        self.required.contains(&Identity::Fs1) || self.required.contains(&Identity::D1)
    }
}

/// Intuitionistic propositional basis shared by every system.
pub const INTUITIONISTIC_BASE: [(&str, &str); 12] = [
    ("A1", "A -> (B -> A)"),
    ("A2", "(A -> (B -> C)) -> ((A -> B) -> (A -> C))"),
    ("A3", "A & B -> A"),
    ("A4", "A & B -> B"),
    ("A5", "A -> (B -> A & B)"),
    ("A6", "A -> A | B"),
    ("A7", "B -> A | B"),
    ("A8", "(A -> C) -> ((B -> C) -> (A | B -> C))"),
    ("A9", "(A -> B) -> ((A -> ~B) -> ~A)"),
    ("A10", "~A -> (A -> B)"),
    ("BOT", "bot -> A"),
    ("TOP", "A -> top"),
];

pub const FS_AXIOMS: [(&str, &str); 4] = [
    ("FS1", "F(A -> B) -> (G A -> F B)"),
    ("FS2", "P(A -> B) -> (H A -> P B)"),
    ("FS3", "(F A -> G B) -> G(A -> B)"),
    ("FS4", "(P A -> H B) -> H(A -> B)"),
];

pub const DUNN_AXIOMS: [(&str, &str); 2] = [
    ("D1", "F A & G B -> F(A & B)"),
    ("D2", "P A & H B -> P(A & B)"),
];

/// The tense axioms, numbered from 2; axiom 1 is the intuitionistic base.
pub const TENSE_AXIOMS: [(&str, &str); 20] = [
    ("IK2", "G(A -> B) -> (G A -> G B)"),
    ("IK2'", "H(A -> B) -> (H A -> H B)"),
    ("IK3", "G(A & B) <-> G A & G B"),
    ("IK3'", "H(A & B) <-> H A & H B"),
    ("IK4", "F(A | B) <-> F A | F B"),
    ("IK4'", "P(A | B) <-> P A | P B"),
    ("IK5", "G(A -> B) -> (F A -> F B)"),
    ("IK5'", "H(A -> B) -> (P A -> P B)"),
    ("IK6", "G A & F B -> F(A & B)"),
    ("IK6'", "H A & P B -> P(A & B)"),
    ("IK7", "G ~A -> ~F A"),
    ("IK7'", "H ~A -> ~P A"),
    ("IK8", "F H A -> A"),
    ("IK8'", "P G A -> A"),
    ("IK9", "A -> H F A"),
    ("IK9'", "A -> G P A"),
    ("IK10", "(F A -> G B) -> G(A -> B)"),
    ("IK10'", "(P A -> H B) -> H(A -> B)"),
    ("IK11", "F(A -> B) -> (G A -> F B)"),
    ("IK11'", "P(A -> B) -> (H A -> P B)"),
];

fn tense(names: &[&str]) -> Vec<(&'static str, &'static str)> {
    names
        .iter()
        .map(|n| {
            *TENSE_AXIOMS
                .iter()
                .find(|(m, _)| m == n)
                .expect("tense axiom")
        })
        .collect()
}

fn system(
    name: &str,
    extra: &[(&str, &str)],
    rules: &[Rule],
    required: &[Identity],
) -> ProofSystem {
    let axioms: Vec<(&str, &str)> = INTUITIONISTIC_BASE
        .iter()
        .copied()
        .chain(extra.iter().copied())
        .collect();
    let mut all = vec![Rule::Mp, Rule::Subst];
    all.extend_from_slice(rules);
    ProofSystem::new(name, &axioms, &all, required)
}

const GC_RULES: [Rule; 4] = [
    Rule::GcFhIntro,
    Rule::GcFhElim,
    Rule::GcPgIntro,
    Rule::GcPgElim,
];

pub fn builtin_systems() -> Vec<ProofSystem> {
    use Identity::*;
    let fs = |n: usize| [FS_AXIOMS[n - 1]];
    vec![
        system("IntGC", &[], &[Rule::GcFhIntro, Rule::GcFhElim], &[]),
        system("Int2GC", &[], &GC_RULES, &[]),
        system(
            "Int2GC+FS",
            &[FS_AXIOMS[0], FS_AXIOMS[1]],
            &GC_RULES,
            &[Fs1, Fs2],
        ),
        system("Int2GC+FS-alt-D", &DUNN_AXIOMS, &GC_RULES, &[D1, D2]),
        system("Int2GC+{FS1}", &fs(1), &GC_RULES, &[Fs1]),
        system("Int2GC+{FS2}", &fs(2), &GC_RULES, &[Fs2]),
        system("Int2GC+{FS3}", &fs(3), &GC_RULES, &[Fs3]),
        system("Int2GC+{FS4}", &fs(4), &GC_RULES, &[Fs4]),
        system(
            "IKt-Ewald",
            &TENSE_AXIOMS,
            &[Rule::Rg, Rule::Rh],
            &[Fs1, Fs2],
        ),
        system(
            "IKt-reduced",
            &tense(&[
                "IK2", "IK2'", "IK5", "IK5'", "IK8", "IK8'", "IK9", "IK9'", "IK11", "IK11'",
            ]),
            &[Rule::Rg, Rule::Rh],
            &[Fs1, Fs2],
        ),
        system(
            "Int2GC-tense",
            &tense(&["IK2", "IK2'", "IK8", "IK8'", "IK9", "IK9'"]),
            &[Rule::Rg, Rule::Rh, Rule::Rmf, Rule::Rmp],
            &[],
        ),
    ]
}

pub fn builtin_system(name: &str) -> Option<ProofSystem> {
    builtin_systems().into_iter().find(|s| s.name == name)
}

/// Serialized proof: formulas are kept as text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofScript {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub system: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub premises: Vec<String>,
    pub lines: Vec<ScriptLine>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScriptLine {
    pub f: String,
    pub just: Justification,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Justification {
    Axiom {
        name: String,
    },
    /// Line `i` is `A`, line `j` is `A -> current`.
    Mp {
        i: usize,
        j: usize,
    },
    Rule {
        name: String,
        i: usize,
    },
    Subst {
        i: usize,
        map: BTreeMap<String, String>,
    },
    Premise {
        k: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProofError {
    #[error("unknown proof system `{0}`")]
    UnknownSystem(String),
    #[error("premise {index}: {error}")]
    PremiseSyntax { index: usize, error: ParseError },
    #[error("line {line}: {error}")]
    Syntax { line: usize, error: ParseError },
    #[error("line {line}: bad axiom instance: {reason}")]
    BadAxiomInstance { line: usize, reason: String },
    #[error("line {line}: bad rule application: {reason}")]
    BadRuleApplication { line: usize, reason: String },
    #[error("line {line}: cites line {cited}, which does not precede it")]
    ForwardReference { line: usize, cited: usize },
    #[error("line {line}: bad premise reference: {reason}")]
    BadPremise { line: usize, reason: String },
    #[error("script has no lines")]
    Empty,
}

impl ProofError {
    /// The offending line, when the error is tied to one.
    pub fn line(&self) -> Option<usize> {
        match self {
            ProofError::Syntax { line, .. }
            | ProofError::BadAxiomInstance { line, .. }
            | ProofError::BadRuleApplication { line, .. }
            | ProofError::ForwardReference { line, .. }
            | ProofError::BadPremise { line, .. } => Some(*line),
            _ => None,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ProofError::UnknownSystem(_) => "UnknownSystem",
            ProofError::PremiseSyntax { .. } => "PremiseSyntax",
            ProofError::Syntax { .. } => "Syntax",
            ProofError::BadAxiomInstance { .. } => "BadAxiomInstance",
            ProofError::BadRuleApplication { .. } => "BadRuleApplication",
            ProofError::ForwardReference { .. } => "ForwardReference",
            ProofError::BadPremise { .. } => "BadPremise",
            ProofError::Empty => "Empty",
        }
    }
}

/// A checked script.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verified {
    pub system: String,
    pub premises: Vec<Formula>,
    pub lines: Vec<Formula>,
    /// Whether each line depends on a premise.
    pub uses_premises: Vec<bool>,
}

impl Verified {
    pub fn conclusion(&self) -> &Formula {
        self.lines.last().expect("nonempty")
    }
}

pub fn check_proof(script: &ProofScript) -> Result<Verified, ProofError> {
    let sys = builtin_system(&script.system)
        .ok_or_else(|| ProofError::UnknownSystem(script.system.clone()))?;
    check_proof_in(script, &sys)
}

pub fn check_proof_in(script: &ProofScript, sys: &ProofSystem) -> Result<Verified, ProofError> {
    if script.lines.is_empty() {
        return Err(ProofError::Empty);
    }
    let premises: Vec<Formula> = script
        .premises
        .iter()
        .enumerate()
        .map(|(i, p)| {
            parse(p).map_err(|error| ProofError::PremiseSyntax {
                index: i + 1,
                error,
            })
        })
        .collect::<Result<_, _>>()?;
    let mut lines: Vec<Formula> = Vec::with_capacity(script.lines.len());
    let mut dep: Vec<bool> = Vec::with_capacity(script.lines.len());
    for (idx, l) in script.lines.iter().enumerate() {
        let line = idx + 1;
        let f = parse(&l.f).map_err(|error| ProofError::Syntax { line, error })?;
        let cite = |i: usize| -> Result<usize, ProofError> {
            if i == 0 || i >= line {
                Err(ProofError::ForwardReference { line, cited: i })
            } else {
                Ok(i - 1)
            }
        };
        let rule_err = |reason: String| ProofError::BadRuleApplication { line, reason };
        let d = match &l.just {
            Justification::Axiom { name } => {
                let schema = sys
                    .axiom(name)
                    .ok_or_else(|| ProofError::BadAxiomInstance {
                        line,
                        reason: format!("system {} has no axiom {name}", sys.name),
                    })?;
                if match_schema(schema, &f).is_none() {
                    return Err(ProofError::BadAxiomInstance {
                        line,
                        reason: format!(
                            "`{}` is not an instance of {name}: {}",
                            print(&f),
                            print(schema)
                        ),
                    });
                }
                false
            }
            Justification::Mp { i, j } => {
                let (i, j) = (cite(*i)?, cite(*j)?);
                if !sys.has_rule(Rule::Mp) {
                    return Err(rule_err(format!("system {} has no rule MP", sys.name)));
                }
                if lines[j] != Formula::imp(lines[i].clone(), f.clone()) {
                    return Err(rule_err(format!(
                        "line {} is not `{} -> {}`",
                        j + 1,
                        print(&lines[i]),
                        print(&f)
                    )));
                }
                dep[i] || dep[j]
            }
            Justification::Rule { name, i } => {
                let i = cite(*i)?;
                let rule = Rule::from_name(name)
                    .ok_or_else(|| rule_err(format!("unknown rule {name}")))?;
                if !sys.has_rule(rule) || matches!(rule, Rule::Mp | Rule::Subst) {
                    return Err(rule_err(format!(
                        "system {} has no one-premise rule {name}",
                        sys.name
                    )));
                }
                match rule.apply(&lines[i]) {
                    Some(c) if c == f => {}
                    Some(c) => {
                        return Err(rule_err(format!(
                            "{name} on line {} gives `{}`",
                            i + 1,
                            print(&c)
                        )))
                    }
                    None => {
                        return Err(rule_err(format!("{name} does not apply to line {}", i + 1)))
                    }
                }
                dep[i]
            }
            Justification::Subst { i, map } => {
                let i = cite(*i)?;
                if !sys.has_rule(Rule::Subst) {
                    return Err(rule_err(format!("system {} has no rule SUBST", sys.name)));
                }
                if dep[i] {
                    return Err(rule_err(format!("line {} depends on a premise", i + 1)));
                }
                let mut s = Substitution::new();
                for (k, v) in map {
                    let g = parse(v).map_err(|error| ProofError::Syntax { line, error })?;
                    s.insert(k.clone(), g);
                }
                let c = lines[i].substitute(&s);
                if c != f {
                    return Err(rule_err(format!(
                        "substitution into line {} gives `{}`",
                        i + 1,
                        print(&c)
                    )));
                }
                false
            }
            Justification::Premise { k } => {
                let p = k
                    .checked_sub(1)
                    .and_then(|k| premises.get(k))
                    .ok_or_else(|| ProofError::BadPremise {
                        line,
                        reason: format!("no premise {k}"),
                    })?;
                if *p != f {
                    return Err(ProofError::BadPremise {
                        line,
                        reason: format!("premise {k} is `{}`", print(p)),
                    });
                }
                true
            }
        };
        lines.push(f);
        dep.push(d);
    }
    Ok(Verified {
        system: sys.name.clone(),
        premises,
        lines,
        uses_premises: dep,
    })
}
