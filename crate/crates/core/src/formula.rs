//! The bimodal intuitionistic language shared by every proof system and
//! semantics in this crate.
//!
//! The four modal letters are written as tense operators: `F` and `H` form
//! one Galois pair (`F A -> B` iff `A -> H B`), `P` and `G` the other
//! (`P A -> B` iff `A -> G B`).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::rc::Rc;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Var(String),
    Top,
    Bot,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    /// `F A`, the left adjoint of `H`.
    DiaF(Box<Formula>),
    /// `G A`, the right adjoint of `P`.
    BoxG(Box<Formula>),
    /// `P A`, the left adjoint of `G`.
    DiaP(Box<Formula>),
    /// `H A`, the right adjoint of `F`.
    BoxH(Box<Formula>),
}

/// Simultaneous replacement of variables by formulas.
pub type Substitution = BTreeMap<String, Formula>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum UnOp {
    Not,
    DiaF,
    BoxG,
    DiaP,
    BoxH,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BinOp {
    And,
    Or,
    Imp,
}

impl UnOp {
    pub const ALL: [UnOp; 5] = [UnOp::Not, UnOp::DiaF, UnOp::BoxG, UnOp::DiaP, UnOp::BoxH];

    pub fn apply(self, f: Formula) -> Formula {
        let b = Box::new(f);
        match self {
            UnOp::Not => Formula::Not(b),
            UnOp::DiaF => Formula::DiaF(b),
            UnOp::BoxG => Formula::BoxG(b),
            UnOp::DiaP => Formula::DiaP(b),
            UnOp::BoxH => Formula::BoxH(b),
        }
    }

    pub fn is_modal(self) -> bool {
        self != UnOp::Not
    }

    /// The prefix symbol in the concrete syntax.
    pub fn symbol(self) -> &'static str {
        match self {
            UnOp::Not => "~",
            UnOp::DiaF => "F",
            UnOp::BoxG => "G",
            UnOp::DiaP => "P",
            UnOp::BoxH => "H",
        }
    }
}

impl fmt::Display for UnOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl BinOp {
    pub const ALL: [BinOp; 3] = [BinOp::And, BinOp::Or, BinOp::Imp];

    pub fn apply(self, l: Formula, r: Formula) -> Formula {
        let (l, r) = (Box::new(l), Box::new(r));
        match self {
            BinOp::And => Formula::And(l, r),
            BinOp::Or => Formula::Or(l, r),
            BinOp::Imp => Formula::Imp(l, r),
        }
    }
}

/// Borrowed view of the top constructor of a formula.
pub enum Shape<'a> {
    Var(&'a str),
    Top,
    Bot,
    Unary(UnOp, &'a Formula),
    Binary(BinOp, &'a Formula, &'a Formula),
}

impl Formula {
    pub fn var(name: impl Into<String>) -> Formula {
        Formula::Var(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Formula) -> Formula {
        Formula::Not(Box::new(a))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    /// `(a -> b) & (b -> a)`; there is no biconditional constructor.
    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(Formula::imp(a.clone(), b.clone()), Formula::imp(b, a))
    }

    pub fn dia_f(a: Formula) -> Formula {
        Formula::DiaF(Box::new(a))
    }

    pub fn box_g(a: Formula) -> Formula {
        Formula::BoxG(Box::new(a))
    }

    pub fn dia_p(a: Formula) -> Formula {
        Formula::DiaP(Box::new(a))
    }

    pub fn box_h(a: Formula) -> Formula {
        Formula::BoxH(Box::new(a))
    }

    pub fn shape(&self) -> Shape<'_> {
        match self {
            Formula::Var(v) => Shape::Var(v),
            Formula::Top => Shape::Top,
            Formula::Bot => Shape::Bot,
            Formula::Not(a) => Shape::Unary(UnOp::Not, a),
            Formula::DiaF(a) => Shape::Unary(UnOp::DiaF, a),
            Formula::BoxG(a) => Shape::Unary(UnOp::BoxG, a),
            Formula::DiaP(a) => Shape::Unary(UnOp::DiaP, a),
            Formula::BoxH(a) => Shape::Unary(UnOp::BoxH, a),
            Formula::And(a, b) => Shape::Binary(BinOp::And, a, b),
            Formula::Or(a, b) => Shape::Binary(BinOp::Or, a, b),
            Formula::Imp(a, b) => Shape::Binary(BinOp::Imp, a, b),
        }
    }

    /// Constructor nesting depth; atoms have depth 0.
    pub fn depth(&self) -> usize {
        match self.shape() {
            Shape::Var(_) | Shape::Top | Shape::Bot => 0,
            Shape::Unary(_, a) => 1 + a.depth(),
            Shape::Binary(_, a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    pub fn size(&self) -> usize {
        match self.shape() {
            Shape::Var(_) | Shape::Top | Shape::Bot => 1,
            Shape::Unary(_, a) => 1 + a.size(),
            Shape::Binary(_, a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Variables in sorted order.
    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self.shape() {
            Shape::Var(v) => {
                out.insert(v.to_string());
            }
            Shape::Top | Shape::Bot => {}
            Shape::Unary(_, a) => a.collect_vars(out),
            Shape::Binary(_, a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    pub fn is_modal_free(&self) -> bool {
        match self.shape() {
            Shape::Var(_) | Shape::Top | Shape::Bot => true,
            Shape::Unary(op, a) => !op.is_modal() && a.is_modal_free(),
            Shape::Binary(_, a, b) => a.is_modal_free() && b.is_modal_free(),
        }
    }

    pub fn substitute(&self, s: &Substitution) -> Formula {
        match self.shape() {
            Shape::Var(v) => s.get(v).cloned().unwrap_or_else(|| self.clone()),
            Shape::Top | Shape::Bot => self.clone(),
            Shape::Unary(op, a) => op.apply(a.substitute(s)),
            Shape::Binary(op, a, b) => op.apply(a.substitute(s), b.substitute(s)),
        }
    }

    /// Postfix program for repeated evaluation. Variables are numbered in
    /// the order of [`Formula::vars`].
    pub fn compile(&self) -> Compiled {
        let vars: Vec<String> = self.vars().into_iter().collect();
        let mut code = Vec::with_capacity(self.size());
        self.emit(&vars, &mut code);
        Compiled { vars, code }
    }

    fn emit(&self, vars: &[String], code: &mut Vec<Instr>) {
        match self.shape() {
            Shape::Var(v) => code.push(Instr::Var(
                vars.binary_search_by(|x| x.as_str().cmp(v)).unwrap(),
            )),
            Shape::Top => code.push(Instr::Top),
            Shape::Bot => code.push(Instr::Bot),
            Shape::Unary(op, a) => {
                a.emit(vars, code);
                code.push(Instr::Unary(op));
            }
            Shape::Binary(op, a, b) => {
                a.emit(vars, code);
                b.emit(vars, code);
                code.push(Instr::Binary(op));
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Instr {
    Var(usize),
    Top,
    Bot,
    Unary(UnOp),
    Binary(BinOp),
}

/// A formula flattened to postfix form.
#[derive(Debug, Clone)]
pub struct Compiled {
    pub vars: Vec<String>,
    pub code: Vec<Instr>,
}

/// Anything a formula can be evaluated in: a finite algebra, a Kripke model
/// (values are world sets), and so on.
pub trait Interpretation {
    type Value: Copy;
    fn top(&self) -> Self::Value;
    fn bot(&self) -> Self::Value;
    fn unary(&self, op: UnOp, a: Self::Value) -> Self::Value;
    fn binary(&self, op: BinOp, a: Self::Value, b: Self::Value) -> Self::Value;
}

impl Compiled {
    /// Evaluate with `vals[i]` the value of `self.vars[i]`.
    pub fn eval<I: Interpretation>(
        &self,
        interp: &I,
        vals: &[I::Value],
        stack: &mut Vec<I::Value>,
    ) -> I::Value {
        stack.clear();
        for ins in &self.code {
            let v = match *ins {
                Instr::Var(i) => vals[i],
                Instr::Top => interp.top(),
                Instr::Bot => interp.bot(),
                Instr::Unary(op) => {
                    let a = stack.pop().unwrap();
                    interp.unary(op, a)
                }
                Instr::Binary(op) => {
                    let b = stack.pop().unwrap();
                    let a = stack.pop().unwrap();
                    interp.binary(op, a, b)
                }
            };
            stack.push(v);
        }
        stack.pop().expect("empty program")
    }
}

/// `s1` then `s2`: maps x to `s1(x)[s2]`, and acts as `s2` off the domain of `s1`.
pub fn compose_substitutions(s1: &Substitution, s2: &Substitution) -> Substitution {
    let mut out: Substitution = s1
        .iter()
        .map(|(k, v)| (k.clone(), v.substitute(s2)))
        .collect();
    for (k, v) in s2 {
        out.entry(k.clone()).or_insert_with(|| v.clone());
    }
    out
}

// ---------------------------------------------------------------------------
// Printing

const PREC_IMP: u8 = 1;
const PREC_OR: u8 = 2;
const PREC_AND: u8 = 3;
const PREC_UNARY: u8 = 4;
const PREC_ATOM: u8 = 5;

fn prec(f: &Formula) -> u8 {
    match f.shape() {
        Shape::Var(_) | Shape::Top | Shape::Bot => PREC_ATOM,
        Shape::Unary(..) => PREC_UNARY,
        Shape::Binary(BinOp::And, ..) => PREC_AND,
        Shape::Binary(BinOp::Or, ..) => PREC_OR,
        Shape::Binary(BinOp::Imp, ..) => PREC_IMP,
    }
}

fn write_prec(f: &Formula, min: u8, out: &mut String) {
    let paren = prec(f) < min;
    if paren {
        out.push('(');
    }
    match f.shape() {
        Shape::Var(v) => out.push_str(v),
        Shape::Top => out.push_str("top"),
        Shape::Bot => out.push_str("bot"),
        Shape::Unary(op, a) => {
            out.push_str(match op {
                UnOp::Not => "~",
                UnOp::DiaF => "F ",
                UnOp::BoxG => "G ",
                UnOp::DiaP => "P ",
                UnOp::BoxH => "H ",
            });
            write_prec(a, PREC_UNARY, out);
        }
        Shape::Binary(op, a, b) => {
            let (lmin, sym, rmin) = match op {
                BinOp::And => (PREC_AND, " & ", PREC_UNARY),
                BinOp::Or => (PREC_OR, " | ", PREC_AND),
                BinOp::Imp => (PREC_OR, " -> ", PREC_IMP),
            };
            write_prec(a, lmin, out);
            out.push_str(sym);
            write_prec(b, rmin, out);
        }
    }
    if paren {
        out.push(')');
    }
}

/// Minimal-parenthesis rendering in the concrete syntax accepted by [`parse`].
pub fn print(f: &Formula) -> String {
    let mut s = String::new();
    write_prec(f, 0, &mut s);
    s
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print(self))
    }
}

// ---------------------------------------------------------------------------
// Parsing

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at byte {offset}: expected {}, found {found}", .expected.join(" or "))]
pub struct ParseError {
    pub offset: usize,
    pub expected: Vec<String>,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Top,
    Bot,
    Not,
    Modal(UnOp),
    And,
    Or,
    Imp,
    Iff,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Top => "`top`".into(),
            Tok::Bot => "`bot`".into(),
            Tok::Not => "`~`".into(),
            Tok::Modal(op) => format!("`{}`", modal_letter(*op)),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Imp => "`->`".into(),
            Tok::Iff => "`<->`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn modal_letter(op: UnOp) -> char {
    match op {
        UnOp::DiaF => 'F',
        UnOp::BoxG => 'G',
        UnOp::DiaP => 'P',
        UnOp::BoxH => 'H',
        UnOp::Not => '~',
    }
}

fn lex(text: &str, schema: bool) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |offset: usize, found: String| ParseError {
        offset,
        expected: vec!["a formula token".into()],
        found,
    };
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'~' => {
                out.push((start, Tok::Not));
                i += 1;
            }
            b'&' => {
                out.push((start, Tok::And));
                i += 1;
            }
            b'|' => {
                out.push((start, Tok::Or));
                i += 1;
            }
            b'(' => {
                out.push((start, Tok::LParen));
                i += 1;
            }
            b')' => {
                out.push((start, Tok::RParen));
                i += 1;
            }
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                out.push((start, Tok::Imp));
                i += 2;
            }
            b'<' if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') => {
                out.push((start, Tok::Iff));
                i += 3;
            }
            b'a'..=b'z' | b'A'..=b'Z' => {
                let mut j = i + 1;
                let ident_tail = |b: u8| b.is_ascii_alphanumeric() || b == b'_';
                if c.is_ascii_uppercase() {
                    // Modal letters are single-character prefix operators.
                    let single = matches!(c, b'F' | b'G' | b'P' | b'H');
                    if single && (!schema || !bytes.get(j).copied().is_some_and(ident_tail)) {
                        let op = match c {
                            b'F' => UnOp::DiaF,
                            b'G' => UnOp::BoxG,
                            b'P' => UnOp::DiaP,
                            _ => UnOp::BoxH,
                        };
                        out.push((start, Tok::Modal(op)));
                        i += 1;
                        continue;
                    }
                    if !schema {
                        return Err(err(start, format!("`{}`", c as char)));
                    }
                }
                while j < bytes.len() && ident_tail(bytes[j]) {
                    j += 1;
                }
                let word = &text[i..j];
                let tok = match word {
                    "top" => Tok::Top,
                    "bot" => Tok::Bot,
                    _ => Tok::Ident(word.to_string()),
                };
                out.push((start, tok));
                i = j;
            }
            _ => {
                let ch = text[i..].chars().next().unwrap();
                return Err(err(start, format!("`{ch}`")));
            }
        }
    }
    out.push((bytes.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn fail<T>(&self, expected: &[&str]) -> Result<T, ParseError> {
        let (offset, tok) = &self.toks[self.pos];
        Err(ParseError {
            offset: *offset,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: tok.describe(),
        })
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.imp()?;
        while *self.peek() == Tok::Iff {
            self.pos += 1;
            let rhs = self.imp()?;
            acc = Formula::iff(acc, rhs);
        }
        Ok(acc)
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Imp {
            self.pos += 1;
            let rhs = self.imp()?;
            return Ok(Formula::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.and()?;
        while *self.peek() == Tok::Or {
            self.pos += 1;
            acc = Formula::or(acc, self.and()?);
        }
        Ok(acc)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.unary()?;
        while *self.peek() == Tok::And {
            self.pos += 1;
            acc = Formula::and(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Not => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Tok::Modal(op) => {
                self.pos += 1;
                Ok(op.apply(self.unary()?))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        const ATOM: &[&str] = &["variable", "`top`", "`bot`", "`(`", "`~`", "modal operator"];
        match self.peek().clone() {
            Tok::Top => {
                self.pos += 1;
                Ok(Formula::Top)
            }
            Tok::Bot => {
                self.pos += 1;
                Ok(Formula::Bot)
            }
            Tok::Ident(name) => {
                self.pos += 1;
                Ok(Formula::Var(name))
            }
            Tok::LParen => {
                self.pos += 1;
                let f = self.formula()?;
                if *self.peek() != Tok::RParen {
                    return self.fail(&["`)`", "`&`", "`|`", "`->`", "`<->`"]);
                }
                self.pos += 1;
                Ok(f)
            }
            _ => self.fail(ATOM),
        }
    }
}

fn parse_with(text: &str, schema: bool) -> Result<Formula, ParseError> {
    let toks = lex(text, schema)?;
    let mut p = Parser { toks, pos: 0 };
    let f = p.formula()?;
    if *p.peek() != Tok::End {
        return p.fail(&["`&`", "`|`", "`->`", "`<->`", "end of input"]);
    }
    Ok(f)
}

/// Parse the concrete syntax:
///
/// ```text
/// formula := imp ( "<->" imp )*
/// imp     := or ( "->" imp )?
/// or      := and ( "|" and )*
/// and     := unary ( "&" unary )*
/// unary   := ( "~" | "F" | "G" | "P" | "H" ) unary | atom
/// atom    := "top" | "bot" | VAR | "(" formula ")"
/// ```
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    parse_with(text, false)
}

/// Like [`parse`], but uppercase identifiers other than the four modal
/// letters are accepted as metavariables (`A`, `B`, `C`, ...).
pub fn parse_schema(text: &str) -> Result<Formula, ParseError> {
    parse_with(text, true)
}

pub fn is_metavariable(name: &str) -> bool {
    name.chars().next().is_some_and(|c| c.is_ascii_uppercase())
}

// ---------------------------------------------------------------------------
// Enumeration

/// Number of formulas of depth at most `depth` over `nvars` variables.
///
/// `N(0) = nvars + 2` and `N(d) = N(0) + 5 N(d-1) + 3 N(d-1)^2`: five unary
/// and three binary constructors.
pub fn count_formulas(nvars: usize, depth: usize) -> u128 {
    let atoms = nvars as u128 + 2;
    let mut n = atoms;
    for _ in 0..depth {
        n = atoms + 5 * n + 3 * n * n;
    }
    n
}

/// Deterministic stream of every formula over `vars` with depth at most
/// `max_depth`, each exactly once, in order of increasing depth.
pub fn enumerate_formulas(vars: &[&str], max_depth: usize) -> FormulaStream {
    let atoms: Vec<Formula> = vars
        .iter()
        .map(|v| Formula::var(*v))
        .chain([Formula::Top, Formula::Bot])
        .collect();
    let mut all = atoms.clone();
    let mut boundary = 0;
    // Materialize all levels except the last, which is streamed.
    for _ in 1..max_depth {
        let level: Vec<Formula> = LevelIter::new(Rc::new(all.clone()), boundary).collect();
        boundary = all.len();
        all.extend(level);
    }
    FormulaStream {
        prefix: if max_depth == 0 {
            Vec::new()
        } else {
            all.clone()
        },
        prefix_pos: 0,
        last: if max_depth == 0 {
            LevelIter::atoms(atoms)
        } else {
            LevelIter::new(Rc::new(all), boundary)
        },
    }
}

pub struct FormulaStream {
    prefix: Vec<Formula>,
    prefix_pos: usize,
    last: LevelIter,
}

impl Iterator for FormulaStream {
    type Item = Formula;

    fn next(&mut self) -> Option<Formula> {
        if self.prefix_pos < self.prefix.len() {
            self.prefix_pos += 1;
            return Some(self.prefix[self.prefix_pos - 1].clone());
        }
        self.last.next()
    }
}

/// Formulas of exactly one more than the maximum depth in `all`, where
/// `all[boundary..]` are the formulas of maximal depth.
struct LevelIter {
    all: Rc<Vec<Formula>>,
    boundary: usize,
    // 0..5: unary ops; 5..8: binary ops; 8: done; 9: plain atom list.
    stage: usize,
    i: usize,
    j: usize,
}

impl LevelIter {
    fn new(all: Rc<Vec<Formula>>, boundary: usize) -> Self {
        LevelIter {
            all,
            boundary,
            stage: 0,
            i: boundary,
            j: 0,
        }
    }

    fn atoms(atoms: Vec<Formula>) -> Self {
        LevelIter {
            all: Rc::new(atoms),
            boundary: 0,
            stage: 9,
            i: 0,
            j: 0,
        }
    }
}

impl Iterator for LevelIter {
    type Item = Formula;

    fn next(&mut self) -> Option<Formula> {
        let n = self.all.len();
        loop {
            match self.stage {
                0..=4 => {
                    if self.i < n {
                        self.i += 1;
                        return Some(UnOp::ALL[self.stage].apply(self.all[self.i - 1].clone()));
                    }
                    self.stage += 1;
                    self.i = if self.stage == 5 { 0 } else { self.boundary };
                    self.j = 0;
                }
                5..=7 => {
                    if self.i >= n {
                        self.stage += 1;
                        self.i = 0;
                        self.j = 0;
                        continue;
                    }
                    if self.j >= n {
                        self.i += 1;
                        self.j = 0;
                        continue;
                    }
                    let (i, j) = (self.i, self.j);
                    self.j += 1;
                    if i < self.boundary && j < self.boundary {
                        // Skip pairs that are both too shallow.
                        self.j = self.boundary;
                        continue;
                    }
                    let op = BinOp::ALL[self.stage - 5];
                    return Some(op.apply(self.all[i].clone(), self.all[j].clone()));
                }
                9 => {
                    if self.i < n {
                        self.i += 1;
                        return Some(self.all[self.i - 1].clone());
                    }
                    return None;
                }
                _ => return None,
            }
        }
    }
}
