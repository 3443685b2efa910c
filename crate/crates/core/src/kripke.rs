//! Finite Kripke frames and models for IntGC, Int2GC and Int2GC+FS.
//!
//! Relations are bit matrices (one `u64` row per world, so at most 64
//! worlds). Composition is diagrammatic: `x (S;T) y` iff `x S z` and
//! `z T y` for some `z`. The FS conditions are written with this reading;
//! the other one swaps them.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use rayon::prelude::*;
use thiserror::Error;

use crate::alg_semantics::Odometer;
use crate::algebra::{Elem, FiniteLattice, H2GCAlgebra, HeytingAlgebra, UnaryOp};
use crate::formula::{BinOp, Formula, Interpretation, UnOp};

pub const MAX_WORLDS: usize = 64;

/// Search caps on the world count, per frame kind.
pub const INTGC_CAP: usize = 4;
pub const INT2GC_CAP: usize = 3;
pub const FS_CAP: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Relation {
    n: usize,
    rows: Vec<u64>,
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl Relation {
    pub fn empty(n: usize) -> Relation {
        assert!(n <= MAX_WORLDS, "at most {MAX_WORLDS} worlds");
        Relation {
            n,
            rows: vec![0; n],
        }
    }

    pub fn identity(n: usize) -> Relation {
        let mut r = Relation::empty(n);
        for x in 0..n {
            r.set(x, x);
        }
        r
    }

    pub fn full(n: usize) -> Relation {
        Relation {
            n,
            rows: vec![full_mask(n); n],
        }
    }

    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Relation {
        let mut r = Relation::empty(n);
        for &(x, y) in pairs {
            r.set(x, y);
        }
        r
    }

    /// Bit `x*n + y` of `code` is the pair `(x, y)`; needs `n*n <= 64`.
    pub fn from_code(n: usize, code: u64) -> Relation {
        let rows = (0..n).map(|x| (code >> (x * n)) & full_mask(n)).collect();
        Relation { n, rows }
    }

    pub fn code(&self) -> u64 {
        assert!(self.n * self.n <= 64);
        self.rows
            .iter()
            .enumerate()
            .fold(0, |acc, (x, &r)| acc | (r << (x * self.n)))
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|&r| r == 0)
    }

    pub fn get(&self, x: usize, y: usize) -> bool {
        self.rows[x] >> y & 1 == 1
    }

    pub fn set(&mut self, x: usize, y: usize) {
        self.rows[x] |= 1 << y;
    }

    /// Successors of `x` as a bit set.
    pub fn row(&self, x: usize) -> u64 {
        self.rows[x]
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|x| {
                (0..self.n)
                    .filter(move |&y| self.get(x, y))
                    .map(move |y| (x, y))
            })
            .collect()
    }

    pub fn converse(&self) -> Relation {
        let mut r = Relation::empty(self.n);
        for (x, y) in self.pairs() {
            r.set(y, x);
        }
        r
    }

    /// `self ; other`
    pub fn then(&self, other: &Relation) -> Relation {
        compose(self, other)
    }

    pub fn union(&self, other: &Relation) -> Relation {
        Relation {
            n: self.n,
            rows: self
                .rows
                .iter()
                .zip(&other.rows)
                .map(|(a, b)| a | b)
                .collect(),
        }
    }

    pub fn intersection(&self, other: &Relation) -> Relation {
        Relation {
            n: self.n,
            rows: self
                .rows
                .iter()
                .zip(&other.rows)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.first_outside(other).is_none()
    }

    /// First pair of `self` (row-major) that is not in `other`.
    pub fn first_outside(&self, other: &Relation) -> Option<(usize, usize)> {
        self.rows
            .iter()
            .zip(&other.rows)
            .enumerate()
            .find_map(|(x, (a, b))| {
                let d = a & !b;
                (d != 0).then(|| (x, d.trailing_zeros() as usize))
            })
    }

    pub fn reflexive_transitive_closure(&self) -> Relation {
        let mut r = self.union(&Relation::identity(self.n));
        for k in 0..self.n {
            for x in 0..self.n {
                if r.get(x, k) {
                    r.rows[x] |= r.rows[k];
                }
            }
        }
        r
    }

    /// `new[p[x]][p[y]] = self[x][y]`
    pub fn permuted(&self, p: &[usize]) -> Relation {
        let mut r = Relation::empty(self.n);
        for (x, y) in self.pairs() {
            r.set(p[x], p[y]);
        }
        r
    }
}

/// `x (s;t) y` iff there is `z` with `x s z` and `z t y`.
pub fn compose(s: &Relation, t: &Relation) -> Relation {
    assert_eq!(s.n, t.n, "relations over different world sets");
    let rows = s
        .rows
        .iter()
        .map(|&r| {
            let mut out = 0;
            let mut bits = r;
            while bits != 0 {
                let z = bits.trailing_zeros() as usize;
                out |= t.rows[z];
                bits &= bits - 1;
            }
            out
        })
        .collect();
    Relation { n: s.n, rows }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FrameKind {
    IntGc,
    Int2Gc,
    Fs,
}

impl FrameKind {
    pub const ALL: [FrameKind; 3] = [FrameKind::IntGc, FrameKind::Int2Gc, FrameKind::Fs];

    pub fn name(self) -> &'static str {
        match self {
            FrameKind::IntGc => "intgc",
            FrameKind::Int2Gc => "int2gc",
            FrameKind::Fs => "fs",
        }
    }

    pub fn from_name(s: &str) -> Option<FrameKind> {
        FrameKind::ALL.into_iter().find(|k| k.name() == s)
    }

    pub fn cap(self) -> usize {
        match self {
            FrameKind::IntGc => INTGC_CAP,
            FrameKind::Int2Gc => INT2GC_CAP,
            FrameKind::Fs => FS_CAP,
        }
    }
}

impl fmt::Display for FrameKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntGcFrame {
    pub worlds: Vec<String>,
    pub leq: Relation,
    pub r: Relation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Int2GcFrame {
    pub worlds: Vec<String>,
    pub leq: Relation,
    pub r1: Relation,
    pub r2: Relation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FsFrame {
    pub worlds: Vec<String>,
    pub leq: Relation,
    pub r: Relation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Frame {
    IntGc(IntGcFrame),
    Int2Gc(Int2GcFrame),
    Fs(FsFrame),
}

impl Frame {
    pub fn kind(&self) -> FrameKind {
        match self {
            Frame::IntGc(_) => FrameKind::IntGc,
            Frame::Int2Gc(_) => FrameKind::Int2Gc,
            Frame::Fs(_) => FrameKind::Fs,
        }
    }

    pub fn worlds(&self) -> &[String] {
        match self {
            Frame::IntGc(f) => &f.worlds,
            Frame::Int2Gc(f) => &f.worlds,
            Frame::Fs(f) => &f.worlds,
        }
    }

    pub fn len(&self) -> usize {
        self.worlds().len()
    }

    pub fn is_empty(&self) -> bool {
        self.worlds().is_empty()
    }

    pub fn world(&self, name: &str) -> Option<usize> {
        self.worlds().iter().position(|w| w == name)
    }

    pub fn leq(&self) -> &Relation {
        match self {
            Frame::IntGc(f) => &f.leq,
            Frame::Int2Gc(f) => &f.leq,
            Frame::Fs(f) => &f.leq,
        }
    }

    /// The relations read by the satisfaction clauses: `F`/`H` along the
    /// first, `P`/`G` along the second. IntGC frames have no second one.
    pub fn semantic_relations(&self) -> (Relation, Option<Relation>) {
        match self {
            Frame::IntGc(f) => (f.r.clone(), None),
            Frame::Int2Gc(f) => (f.r1.clone(), Some(f.r2.clone())),
            Frame::Fs(f) => {
                let geq = f.leq.converse();
                (f.r.then(&geq), Some(f.leq.then(&f.r)))
            }
        }
    }
}

/// A failed frame condition. Pairs are world indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum FrameViolation {
    #[error("preorder is not reflexive at ({0}, {0})")]
    NotReflexive(usize),
    #[error("preorder is not transitive: ({0}, {1}) is missing")]
    NotTransitive(usize, usize),
    #[error("condition {cond} fails at ({}, {})", pair.0, pair.1)]
    Condition {
        cond: &'static str,
        pair: (usize, usize),
    },
}

pub fn check_preorder(leq: &Relation) -> Result<(), FrameViolation> {
    if let Some(x) = (0..leq.len()).find(|&x| !leq.get(x, x)) {
        return Err(FrameViolation::NotReflexive(x));
    }
    match compose(leq, leq).first_outside(leq) {
        Some((x, y)) => Err(FrameViolation::NotTransitive(x, y)),
        None => Ok(()),
    }
}

fn require(cond: &'static str, lhs: Relation, rhs: &Relation) -> Result<(), FrameViolation> {
    match lhs.first_outside(rhs) {
        Some(pair) => Err(FrameViolation::Condition { cond, pair }),
        None => Ok(()),
    }
}

/// `>= ; R ; >=` inside `R`.
pub fn check_r1(leq: &Relation, r: &Relation) -> Result<(), FrameViolation> {
    let geq = leq.converse();
    require("R1", geq.then(r).then(&geq), r)
}

pub fn check_r2(leq: &Relation, r1: &Relation) -> Result<(), FrameViolation> {
    let geq = leq.converse();
    require("R2", geq.then(r1).then(&geq), r1)
}

pub fn check_r3(leq: &Relation, r2: &Relation) -> Result<(), FrameViolation> {
    require("R3", leq.then(r2).then(leq), r2)
}

/// `R ; <=` inside `<= ; R`, then `>= ; R` inside `R ; >=`.
pub fn check_r4_r5(leq: &Relation, r: &Relation) -> Result<(), FrameViolation> {
    let geq = leq.converse();
    require("R4", r.then(leq), &leq.then(r))?;
    require("R5", geq.then(r), &r.then(&geq))
}

/// Preorder plus the conditions of the frame's kind; the witness is the
/// first offending pair.
pub fn check_frame(frame: &Frame) -> Result<(), FrameViolation> {
    check_preorder(frame.leq())?;
    match frame {
        Frame::IntGc(f) => check_r1(&f.leq, &f.r),
        Frame::Int2Gc(f) => {
            check_r2(&f.leq, &f.r1)?;
            check_r3(&f.leq, &f.r2)
        }
        Frame::Fs(f) => check_r4_r5(&f.leq, &f.r),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KripkeError {
    #[error("invalid input frame: {0}")]
    InvalidInputFrame(FrameViolation),
    #[error("variable `{0}` has no value")]
    UnboundVariable(String),
    #[error("`{0}` is not interpreted in IntGC frames")]
    NotInLanguage(UnOp),
    #[error("valuation of `{var}` is not up-closed: {lower} is in, {upper} above it is not")]
    NotUpClosed {
        var: String,
        lower: usize,
        upper: usize,
    },
    #[error("world count {requested} exceeds the cap of {cap}")]
    CapExceeded { requested: usize, cap: usize },
    #[error("level {0} is empty")]
    EmptyLevel(usize),
    #[error("world `{0}` occurs twice")]
    DuplicateWorld(String),
    #[error("unknown world `{0}`")]
    UnknownWorld(String),
    #[error("world count {0} exceeds {MAX_WORLDS}")]
    TooManyWorlds(usize),
}

/// `R1 = R ; >=`, `R2 = <= ; R`.
pub fn derived_int2gc_frame(f: &FsFrame) -> Result<Int2GcFrame, KripkeError> {
    check_frame(&Frame::Fs(f.clone())).map_err(KripkeError::InvalidInputFrame)?;
    let geq = f.leq.converse();
    Ok(Int2GcFrame {
        worlds: f.worlds.clone(),
        leq: f.leq.clone(),
        r1: f.r.then(&geq),
        r2: f.leq.then(&f.r),
    })
}

/// `(X, <=, R1)` and `(X, <=, R2^-1)`.
pub fn split_intgc_frames(f: &Int2GcFrame) -> Result<(IntGcFrame, IntGcFrame), KripkeError> {
    check_frame(&Frame::Int2Gc(f.clone())).map_err(KripkeError::InvalidInputFrame)?;
    let a = IntGcFrame {
        worlds: f.worlds.clone(),
        leq: f.leq.clone(),
        r: f.r1.clone(),
    };
    let b = IntGcFrame {
        worlds: f.worlds.clone(),
        leq: f.leq.clone(),
        r: f.r2.converse(),
    };
    Ok((a, b))
}

/// Inverse of [`split_intgc_frames`]. Both halves must share worlds and order.
pub fn join_intgc_frames(a: &IntGcFrame, b: &IntGcFrame) -> Int2GcFrame {
    assert_eq!(a.worlds, b.worlds);
    assert_eq!(a.leq, b.leq);
    Int2GcFrame {
        worlds: a.worlds.clone(),
        leq: a.leq.clone(),
        r1: a.r.clone(),
        r2: b.r.converse(),
    }
}

/// Valuation as world bit sets.
pub type KripkeValuation = BTreeMap<String, u64>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeModel {
    pub frame: Frame,
    pub valuation: KripkeValuation,
}

/// First `(x, y)` with `x <= y`, `x` in `set` and `y` not.
pub fn up_closure_gap(leq: &Relation, set: u64) -> Option<(usize, usize)> {
    (0..leq.len()).filter(|&x| set >> x & 1 == 1).find_map(|x| {
        let gap = leq.row(x) & !set;
        (gap != 0).then(|| (x, gap.trailing_zeros() as usize))
    })
}

impl KripkeModel {
    /// Rejects valuations that are not up-closed.
    pub fn new(frame: Frame, valuation: KripkeValuation) -> Result<KripkeModel, KripkeError> {
        for (var, &set) in &valuation {
            if let Some((lower, upper)) = up_closure_gap(frame.leq(), set) {
                return Err(KripkeError::NotUpClosed {
                    var: var.clone(),
                    lower,
                    upper,
                });
            }
        }
        Ok(KripkeModel { frame, valuation })
    }

    /// No up-closure check; for building deliberately broken models.
    pub fn new_unchecked(frame: Frame, valuation: KripkeValuation) -> KripkeModel {
        KripkeModel { frame, valuation }
    }

    /// The set of worlds where `f` holds.
    pub fn denotation(&self, f: &Formula) -> Result<u64, KripkeError> {
        let sem = Semantics::new(&self.frame);
        sem.admits(f)?;
        let prog = f.compile();
        let vals = prog
            .vars
            .iter()
            .map(|v| {
                self.valuation
                    .get(v)
                    .copied()
                    .ok_or_else(|| KripkeError::UnboundVariable(v.clone()))
            })
            .collect::<Result<Vec<u64>, _>>()?;
        Ok(prog.eval(&sem, &vals, &mut Vec::new()))
    }

    pub fn satisfies(&self, w: usize, f: &Formula) -> Result<bool, KripkeError> {
        Ok(self.denotation(f)? >> w & 1 == 1)
    }
}

/// The first `P` or `G` in `f`, if any.
fn second_pair_op(f: &Formula) -> Option<UnOp> {
    f.compile().code.into_iter().find_map(|ins| match ins {
        crate::formula::Instr::Unary(op @ (UnOp::DiaP | UnOp::BoxG)) => Some(op),
        _ => None,
    })
}

/// A frame with its semantic relations and their converses precomputed,
/// evaluating formulas to world sets.
pub struct Semantics {
    n: usize,
    leq: Relation,
    r1: Relation,
    r1c: Relation,
    r2: Option<(Relation, Relation)>,
}

impl Semantics {
    pub fn new(frame: &Frame) -> Semantics {
        let (r1, r2) = frame.semantic_relations();
        Semantics {
            n: frame.len(),
            leq: frame.leq().clone(),
            r1c: r1.converse(),
            r1,
            r2: r2.map(|r| {
                let c = r.converse();
                (r, c)
            }),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn mask(&self) -> u64 {
        full_mask(self.n)
    }

    /// Errors if `f` uses `P` or `G` and there is no second relation.
    pub fn admits(&self, f: &Formula) -> Result<(), KripkeError> {
        match second_pair_op(f) {
            Some(op) if self.r2.is_none() => Err(KripkeError::NotInLanguage(op)),
            _ => Ok(()),
        }
    }

    fn collect(&self, pred: impl Fn(usize) -> bool) -> u64 {
        (0..self.n)
            .filter(|&x| pred(x))
            .fold(0, |acc, x| acc | 1 << x)
    }
}

impl Interpretation for Semantics {
    type Value = u64;

    fn top(&self) -> u64 {
        self.mask()
    }

    fn bot(&self) -> u64 {
        0
    }

    fn unary(&self, op: UnOp, a: u64) -> u64 {
        let r2 = || self.r2.as_ref().expect("P/G need a second relation");
        match op {
            UnOp::Not => self.collect(|x| self.leq.row(x) & a == 0),
            UnOp::DiaF => self.collect(|x| self.r1.row(x) & a != 0),
            UnOp::BoxH => self.collect(|x| self.r1c.row(x) & !a == 0),
            UnOp::DiaP => self.collect(|x| r2().1.row(x) & a != 0),
            UnOp::BoxG => self.collect(|x| r2().0.row(x) & !a == 0),
        }
    }

    fn binary(&self, op: BinOp, a: u64, b: u64) -> u64 {
        match op {
            BinOp::And => a & b,
            BinOp::Or => a | b,
            BinOp::Imp => self.collect(|x| self.leq.row(x) & a & !b == 0),
        }
    }
}

/// All up-closed subsets of a preorder, in ascending bit order.
pub fn up_sets(leq: &Relation) -> Vec<u64> {
    let mut out = Vec::new();
    // Each world is decided in index order; `inside` worlds pull their
    // successors in, `outside` worlds push their predecessors out.
    fn go(leq: &Relation, x: usize, inside: u64, outside: u64, out: &mut Vec<u64>) {
        if x == leq.len() {
            out.push(inside);
            return;
        }
        if inside >> x & 1 == 1 || outside >> x & 1 == 1 {
            return go(leq, x + 1, inside, outside, out);
        }
        let down = (0..leq.len())
            .filter(|&y| leq.get(y, x))
            .fold(0u64, |a, y| a | 1 << y);
        if down & inside == 0 {
            go(leq, x + 1, inside, outside | down, out);
        }
        let up = leq.row(x);
        if up & outside == 0 {
            go(leq, x + 1, inside | up, outside, out);
        }
    }
    go(leq, 0, 0, 0, &mut out);
    out.sort_unstable();
    out
}

/// A refuting valuation and world.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeWitness {
    pub valuation: KripkeValuation,
    pub world: usize,
}

/// `None` if `f` holds at every world under every up-set valuation of its
/// variables; otherwise the first failure (valuations in odometer order
/// over ascending up-sets, then the lowest world).
pub fn frame_countermodel(
    f: &Formula,
    frame: &Frame,
) -> Result<Option<KripkeWitness>, KripkeError> {
    let sem = Semantics::new(frame);
    sem.admits(f)?;
    Ok(countermodel_in(f, &sem, &up_sets(frame.leq())))
}

fn countermodel_in(f: &Formula, sem: &Semantics, ups: &[u64]) -> Option<KripkeWitness> {
    let prog = f.compile();
    let mask = sem.mask();
    let mut stack = Vec::new();
    let mut vals = vec![0u64; prog.vars.len()];
    let mut od = Odometer::new(ups.len(), prog.vars.len());
    while let Some(idx) = od.next_slice() {
        for (v, &i) in vals.iter_mut().zip(idx) {
            *v = ups[i];
        }
        let d = prog.eval(sem, &vals, &mut stack);
        if d != mask {
            let world = (!d & mask).trailing_zeros() as usize;
            let valuation = prog
                .vars
                .iter()
                .cloned()
                .zip(vals.iter().copied())
                .collect();
            return Some(KripkeWitness { valuation, world });
        }
        od.advance();
    }
    None
}

pub fn valid_in_frame(f: &Formula, frame: &Frame) -> Result<bool, KripkeError> {
    Ok(frame_countermodel(f, frame)?.is_none())
}

/// A pair `lower <= upper` where `formula` holds at `lower` only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PersistenceViolation {
    pub formula: Formula,
    pub lower: usize,
    pub upper: usize,
}

/// First formula whose denotation is not up-closed, if any.
pub fn check_persistence(
    m: &KripkeModel,
    formulas: &[Formula],
) -> Result<Option<PersistenceViolation>, KripkeError> {
    for f in formulas {
        let d = m.denotation(f)?;
        if let Some((lower, upper)) = up_closure_gap(m.frame.leq(), d) {
            return Ok(Some(PersistenceViolation {
                formula: f.clone(),
                lower,
                upper,
            }));
        }
    }
    Ok(None)
}

fn world_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("w{i}")).collect()
}

/// Every preorder on `n` labelled worlds, by ascending code.
pub fn all_preorders(n: usize) -> Vec<Relation> {
    let off: Vec<(usize, usize)> = (0..n)
        .flat_map(|x| (0..n).filter(move |&y| y != x).map(move |y| (x, y)))
        .collect();
    let mut out: Vec<Relation> = (0..1u64 << off.len())
        .map(|bits| {
            let mut r = Relation::identity(n);
            for (i, &(x, y)) in off.iter().enumerate() {
                if bits >> i & 1 == 1 {
                    r.set(x, y);
                }
            }
            r
        })
        .filter(|r| check_preorder(r).is_ok())
        .collect();
    out.sort_by_key(Relation::code);
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    (0..n).permutations(n).collect()
}

/// One preorder per isomorphism class (the least code in its class),
/// with its automorphisms.
pub fn preorder_classes(n: usize) -> Vec<(Relation, Vec<Vec<usize>>)> {
    let perms = permutations(n);
    let mut reps: Vec<Relation> = all_preorders(n)
        .into_iter()
        .filter(|r| perms.iter().all(|p| r.permuted(p).code() >= r.code()))
        .collect();
    reps.sort_by_key(Relation::code);
    reps.into_iter()
        .map(|r| {
            let auts = perms
                .iter()
                .filter(|p| r.permuted(p) == r)
                .cloned()
                .collect();
            (r, auts)
        })
        .collect()
}

fn all_relations(n: usize) -> impl Iterator<Item = Relation> {
    (0..1u64 << (n * n)).map(move |c| Relation::from_code(n, c))
}

fn orbit_min(rel: &Relation, auts: &[Vec<usize>]) -> bool {
    let c = rel.code();
    auts.iter().all(|p| rel.permuted(p).code() >= c)
}

fn orbit_min_pair(a: &Relation, b: &Relation, auts: &[Vec<usize>]) -> bool {
    let c = (a.code(), b.code());
    auts.iter()
        .all(|p| (a.permuted(p).code(), b.permuted(p).code()) >= c)
}

/// Frames of `kind` with exactly `n` worlds, one per isomorphism class.
pub fn frames_of_size(kind: FrameKind, n: usize) -> Vec<Frame> {
    let worlds = world_names(n);
    let mut out = Vec::new();
    for (leq, auts) in preorder_classes(n) {
        match kind {
            FrameKind::IntGc => {
                for r in
                    all_relations(n).filter(|r| check_r1(&leq, r).is_ok() && orbit_min(r, &auts))
                {
                    out.push(Frame::IntGc(IntGcFrame {
                        worlds: worlds.clone(),
                        leq: leq.clone(),
                        r,
                    }));
                }
            }
            FrameKind::Fs => {
                for r in
                    all_relations(n).filter(|r| check_r4_r5(&leq, r).is_ok() && orbit_min(r, &auts))
                {
                    out.push(Frame::Fs(FsFrame {
                        worlds: worlds.clone(),
                        leq: leq.clone(),
                        r,
                    }));
                }
            }
            FrameKind::Int2Gc => {
                let r1s: Vec<Relation> = all_relations(n)
                    .filter(|r| check_r2(&leq, r).is_ok())
                    .collect();
                let r2s: Vec<Relation> = all_relations(n)
                    .filter(|r| check_r3(&leq, r).is_ok())
                    .collect();
                for r1 in &r1s {
                    for r2 in &r2s {
                        if orbit_min_pair(r1, r2, &auts) {
                            out.push(Frame::Int2Gc(Int2GcFrame {
                                worlds: worlds.clone(),
                                leq: leq.clone(),
                                r1: r1.clone(),
                                r2: r2.clone(),
                            }));
                        }
                    }
                }
            }
        }
    }
    out
}

/// Frames of `kind` with 1 to `max_worlds` worlds, up to isomorphism,
/// ascending by size.
pub fn enumerate_frames(kind: FrameKind, max_worlds: usize) -> Result<Vec<Frame>, KripkeError> {
    if max_worlds > kind.cap() {
        return Err(KripkeError::CapExceeded {
            requested: max_worlds,
            cap: kind.cap(),
        });
    }
    Ok((1..=max_worlds)
        .flat_map(|n| frames_of_size(kind, n))
        .collect())
}

/// First frame (ascending size, enumeration order) with a refuting
/// valuation. `jobs > 1` checks each size in parallel and keeps the
/// sequential winner.
pub fn find_kripke_countermodel(
    f: &Formula,
    max_worlds: usize,
    kind: FrameKind,
    jobs: usize,
) -> Result<Option<(KripkeModel, usize)>, KripkeError> {
    if max_worlds > kind.cap() {
        return Err(KripkeError::CapExceeded {
            requested: max_worlds,
            cap: kind.cap(),
        });
    }
    if kind == FrameKind::IntGc {
        if let Some(op) = second_pair_op(f) {
            return Err(KripkeError::NotInLanguage(op));
        }
    }
    let probe = |frame: &Frame| {
        let sem = Semantics::new(frame);
        countermodel_in(f, &sem, &up_sets(frame.leq())).map(|w| (frame.clone(), w))
    };
    let pool = (jobs > 1).then(|| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .expect("thread pool")
    });
    for n in 1..=max_worlds {
        let frames = frames_of_size(kind, n);
        let hit = match &pool {
            Some(pool) => pool.install(|| frames.par_iter().find_map_first(probe)),
            None => frames.iter().find_map(probe),
        };
        if let Some((frame, w)) = hit {
            return Ok(Some((
                KripkeModel {
                    frame,
                    valuation: w.valuation,
                },
                w.world,
            )));
        }
    }
    Ok(None)
}

/// `x <= y` iff `x = y` or `x` sits on a strictly lower level; `R` relates
/// worlds on the same level.
pub fn build_preference_frame<S: AsRef<str>>(levels: &[Vec<S>]) -> Result<FsFrame, KripkeError> {
    let mut worlds: Vec<String> = Vec::new();
    let mut level_of = Vec::new();
    for (i, level) in levels.iter().enumerate() {
        if level.is_empty() {
            return Err(KripkeError::EmptyLevel(i));
        }
        for w in level {
            let w = w.as_ref().to_string();
            if worlds.contains(&w) {
                return Err(KripkeError::DuplicateWorld(w));
            }
            worlds.push(w);
            level_of.push(i);
        }
    }
    if levels.is_empty() {
        return Err(KripkeError::EmptyLevel(0));
    }
    let n = worlds.len();
    if n > MAX_WORLDS {
        return Err(KripkeError::TooManyWorlds(n));
    }
    let mut leq = Relation::identity(n);
    let mut r = Relation::empty(n);
    for x in 0..n {
        for y in 0..n {
            if level_of[x] < level_of[y] {
                leq.set(x, y);
            }
            if level_of[x] == level_of[y] {
                r.set(x, y);
            }
        }
    }
    Ok(FsFrame { worlds, leq, r })
}

/// The algebra of up-sets with the modal operators read off the frame.
/// Element `i` is the `i`-th up-set of [`up_sets`]; names list member
/// worlds. `None` for IntGC frames, which have no `P`/`G`.
pub fn complex_algebra(frame: &Frame) -> Option<H2GCAlgebra> {
    let sem = Semantics::new(frame);
    sem.r2.as_ref()?;
    let ups = up_sets(frame.leq());
    let m = ups.len();
    let index = |s: u64| ups.binary_search(&s).expect("up-set");
    let names: Vec<String> = ups
        .iter()
        .map(|&s| {
            let ws: Vec<&str> = (0..frame.len())
                .filter(|&x| s >> x & 1 == 1)
                .map(|x| frame.worlds()[x].as_str())
                .collect();
            format!("{{{}}}", ws.join(","))
        })
        .collect();
    let mut leq = vec![false; m * m];
    let mut meet = vec![0; m * m];
    let mut join = vec![0; m * m];
    let mut imp = vec![0; m * m];
    for i in 0..m {
        for j in 0..m {
            let (a, b) = (ups[i], ups[j]);
            leq[i * m + j] = a & !b == 0;
            meet[i * m + j] = index(a & b);
            join[i * m + j] = index(a | b);
            imp[i * m + j] = index(sem.binary(BinOp::Imp, a, b));
        }
    }
    let lattice = FiniteLattice::from_tables(names, leq, meet, join, index(0), index(sem.mask()));
    let heyting = HeytingAlgebra::from_tables(lattice, imp);
    let op = |o: UnOp| {
        UnaryOp(
            ups.iter()
                .map(|&s| index(sem.unary(o, s)) as Elem)
                .collect(),
        )
    };
    Some(H2GCAlgebra::new(
        heyting,
        op(UnOp::DiaF),
        op(UnOp::BoxG),
        op(UnOp::DiaP),
        op(UnOp::BoxH),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{check_h2gc, check_identity, Identity};
    use crate::formula::{enumerate_formulas, parse};

    fn two_chain(r: &[(usize, usize)]) -> FsFrame {
        FsFrame {
            worlds: world_names(2),
            leq: Relation::from_pairs(2, &[(0, 0), (1, 1), (0, 1)]),
            r: Relation::from_pairs(2, r),
        }
    }

    #[test]
    fn composition_convention() {
        let s = Relation::from_pairs(2, &[(0, 1)]);
        let t = Relation::from_pairs(2, &[(1, 1)]);
        assert_eq!(compose(&s, &t), s);
        assert_eq!(compose(&t, &s), Relation::empty(2));
        let r = Relation::from_pairs(3, &[(0, 2), (1, 1)]);
        assert_eq!(compose(&Relation::identity(3), &r), r);
        let f = two_chain(&[(0, 0), (1, 1), (0, 1)]);
        assert_eq!(f.leq.converse().then(&f.r), Relation::full(2));
    }

    #[test]
    fn frame_conditions() {
        let good = Frame::Fs(two_chain(&[(0, 0), (1, 1), (0, 1)]));
        assert_eq!(check_frame(&good), Ok(()));
        let bad = Frame::Fs(two_chain(&[(0, 1)]));
        assert_eq!(
            check_frame(&bad),
            Err(FrameViolation::Condition {
                cond: "R5",
                pair: (1, 1)
            })
        );
        let mut f = two_chain(&[]);
        f.leq = Relation::from_pairs(2, &[(0, 0), (0, 1)]);
        assert_eq!(
            check_frame(&Frame::Fs(f)),
            Err(FrameViolation::NotReflexive(1))
        );
        let leq = Relation::from_pairs(3, &[(0, 0), (1, 1), (2, 2), (0, 1), (1, 2)]);
        assert_eq!(
            check_preorder(&leq),
            Err(FrameViolation::NotTransitive(0, 2))
        );
    }

    #[test]
    fn derived_and_split_frames() {
        let f = two_chain(&[(0, 0), (1, 1), (0, 1)]);
        let d = derived_int2gc_frame(&f).unwrap();
        assert_eq!(d.r1, f.r.then(&f.leq.converse()));
        assert_eq!(d.r1, Relation::full(2));
        assert_eq!(check_frame(&Frame::Int2Gc(d.clone())), Ok(()));
        let id = FsFrame {
            worlds: world_names(3),
            leq: Relation::identity(3),
            r: Relation::identity(3),
        };
        let d = derived_int2gc_frame(&id).unwrap();
        assert_eq!(
            (d.r1.clone(), d.r2.clone()),
            (Relation::identity(3), Relation::identity(3))
        );
        let (a, b) = split_intgc_frames(&d).unwrap();
        assert_eq!(a.r, Relation::identity(3));
        assert_eq!(join_intgc_frames(&a, &b), d);
        let mut bad = d;
        bad.leq = Relation::from_pairs(3, &[(0, 0), (1, 1), (2, 2), (0, 1)]);
        bad.r1 = Relation::empty(3);
        bad.r2 = Relation::from_pairs(3, &[(1, 2)]);
        assert!(matches!(
            split_intgc_frames(&bad),
            Err(KripkeError::InvalidInputFrame(FrameViolation::Condition {
                cond: "R3",
                ..
            }))
        ));
    }

    #[test]
    fn satisfaction_examples() {
        let f = Frame::Fs(two_chain(&[(0, 0), (1, 1), (0, 1)]));
        let m = KripkeModel::new(
            f.clone(),
            [("p".to_string(), 0b10), ("q".to_string(), 0)].into(),
        )
        .unwrap();
        assert!(m.satisfies(0, &parse("F p").unwrap()).unwrap());
        assert!(!m.satisfies(0, &parse("p").unwrap()).unwrap());
        assert!(m.satisfies(1, &parse("p").unwrap()).unwrap());
        assert!(!m.satisfies(0, &parse("p -> q").unwrap()).unwrap());
        assert_eq!(
            m.satisfies(0, &parse("r").unwrap()),
            Err(KripkeError::UnboundVariable("r".into()))
        );
        assert!(matches!(
            KripkeModel::new(f, [("p".to_string(), 0b01)].into()),
            Err(KripkeError::NotUpClosed {
                lower: 0,
                upper: 1,
                ..
            })
        ));
    }

    /// Satisfaction read straight off the clauses, with explicit loops.
    fn oracle(frame: &Frame, val: &KripkeValuation, x: usize, f: &Formula) -> bool {
        use crate::formula::Shape;
        let n = frame.len();
        let (r1, r2) = frame.semantic_relations();
        let leq = frame.leq();
        let holds = |y: usize, g: &Formula| oracle(frame, val, y, g);
        match f.shape() {
            Shape::Var(p) => val[p] >> x & 1 == 1,
            Shape::Top => true,
            Shape::Bot => false,
            Shape::Unary(UnOp::Not, a) => (0..n).all(|y| !leq.get(x, y) || !holds(y, a)),
            Shape::Unary(UnOp::DiaF, a) => (0..n).any(|y| r1.get(x, y) && holds(y, a)),
            Shape::Unary(UnOp::BoxH, a) => (0..n).all(|y| !r1.get(y, x) || holds(y, a)),
            Shape::Unary(UnOp::DiaP, a) => {
                (0..n).any(|y| r2.as_ref().unwrap().get(y, x) && holds(y, a))
            }
            Shape::Unary(UnOp::BoxG, a) => {
                (0..n).all(|y| !r2.as_ref().unwrap().get(x, y) || holds(y, a))
            }
            Shape::Binary(BinOp::And, a, b) => holds(x, a) && holds(x, b),
            Shape::Binary(BinOp::Or, a, b) => holds(x, a) || holds(x, b),
            Shape::Binary(BinOp::Imp, a, b) => {
                (0..n).all(|y| !leq.get(x, y) || !holds(y, a) || holds(y, b))
            }
        }
    }

    #[test]
    fn bitset_semantics_matches_oracle() {
        let formulas: Vec<Formula> = enumerate_formulas(&["p"], 2).step_by(37).collect();
        for kind in [FrameKind::Fs, FrameKind::Int2Gc] {
            for frame in enumerate_frames(kind, 2).unwrap().iter().step_by(3) {
                for &p in &up_sets(frame.leq()) {
                    let val: KripkeValuation = [("p".to_string(), p)].into();
                    let m = KripkeModel::new(frame.clone(), val.clone()).unwrap();
                    for f in &formulas {
                        let d = m.denotation(f).unwrap();
                        for x in 0..frame.len() {
                            assert_eq!(d >> x & 1 == 1, oracle(frame, &val, x, f), "{f} at {x}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn up_set_enumeration() {
        let chain = Relation::from_pairs(3, &[(0, 1), (1, 2)]).reflexive_transitive_closure();
        assert_eq!(up_sets(&chain), vec![0b000, 0b100, 0b110, 0b111]);
        assert_eq!(up_sets(&Relation::identity(3)).len(), 8);
        // Two worlds in one cluster move together.
        assert_eq!(up_sets(&Relation::full(2)), vec![0, 0b11]);
        for leq in all_preorders(3) {
            let brute: Vec<u64> = (0..8)
                .filter(|&s| up_closure_gap(&leq, s).is_none())
                .collect();
            assert_eq!(up_sets(&leq), brute);
        }
    }

    #[test]
    fn preorder_counts() {
        // Labelled preorders on 1..4 points, and their isomorphism classes.
        let labelled: Vec<usize> = (1..=4).map(|n| all_preorders(n).len()).collect();
        assert_eq!(labelled, vec![1, 4, 29, 355]);
        let classes: Vec<usize> = (1..=4).map(|n| preorder_classes(n).len()).collect();
        assert_eq!(classes, vec![1, 3, 9, 33]);
    }

    #[test]
    fn frame_enumeration_is_up_to_isomorphism() {
        // Brute force: dedupe all labelled frames by their orbit minimum.
        for kind in [FrameKind::Fs, FrameKind::IntGc] {
            for n in 1..=3 {
                let perms = permutations(n);
                let mut seen = std::collections::BTreeSet::new();
                for leq in all_preorders(n) {
                    for r in all_relations(n) {
                        let frame = match kind {
                            FrameKind::Fs => Frame::Fs(FsFrame {
                                worlds: world_names(n),
                                leq: leq.clone(),
                                r: r.clone(),
                            }),
                            _ => Frame::IntGc(IntGcFrame {
                                worlds: world_names(n),
                                leq: leq.clone(),
                                r: r.clone(),
                            }),
                        };
                        if check_frame(&frame).is_ok() {
                            let key = perms
                                .iter()
                                .map(|p| (leq.permuted(p).code(), r.permuted(p).code()))
                                .min()
                                .unwrap();
                            seen.insert(key);
                        }
                    }
                }
                assert_eq!(frames_of_size(kind, n).len(), seen.len(), "{kind} {n}");
            }
        }
        for f in enumerate_frames(FrameKind::Int2Gc, 2).unwrap() {
            assert_eq!(check_frame(&f), Ok(()));
        }
        assert!(matches!(
            enumerate_frames(FrameKind::Int2Gc, 4),
            Err(KripkeError::CapExceeded { cap: 3, .. })
        ));
    }

    #[test]
    fn validity_and_countermodels() {
        let unit = parse("p -> H F p").unwrap();
        for f in enumerate_frames(FrameKind::Fs, 3).unwrap() {
            assert!(valid_in_frame(&unit, &f).unwrap());
            assert!(valid_in_frame(&Formula::Top, &f).unwrap());
        }
        assert_eq!(
            find_kripke_countermodel(&unit, 3, FrameKind::Fs, 1).unwrap(),
            None
        );
        let (m, w) = find_kripke_countermodel(&parse("G p -> p").unwrap(), 4, FrameKind::Fs, 1)
            .unwrap()
            .unwrap();
        assert!(m.frame.len() <= 2);
        assert!(!m.satisfies(w, &parse("G p -> p").unwrap()).unwrap());
        let (m, _) = find_kripke_countermodel(&Formula::Bot, 2, FrameKind::IntGc, 1)
            .unwrap()
            .unwrap();
        assert_eq!(m.frame.len(), 1);
        let dv = parse("G(p|q) -> G p | F q").unwrap();
        let seq = find_kripke_countermodel(&dv, 4, FrameKind::Fs, 1).unwrap();
        assert!(seq.is_some());
        assert_eq!(
            find_kripke_countermodel(&dv, 4, FrameKind::Fs, 3).unwrap(),
            seq
        );
        assert!(matches!(
            find_kripke_countermodel(&parse("P p").unwrap(), 2, FrameKind::IntGc, 1),
            Err(KripkeError::NotInLanguage(UnOp::DiaP))
        ));
    }

    #[test]
    fn persistence() {
        let fs: Vec<Formula> = enumerate_formulas(&["p"], 2).collect();
        for frame in enumerate_frames(FrameKind::Fs, 2).unwrap() {
            for &p in &up_sets(frame.leq()) {
                let m = KripkeModel::new(frame.clone(), [("p".to_string(), p)].into()).unwrap();
                assert_eq!(check_persistence(&m, &fs).unwrap(), None);
            }
        }
        let broken = KripkeModel::new_unchecked(
            Frame::Fs(two_chain(&[(0, 0), (1, 1)])),
            [("p".to_string(), 0b01)].into(),
        );
        let v = check_persistence(&broken, &[parse("p").unwrap()])
            .unwrap()
            .unwrap();
        assert_eq!((v.lower, v.upper), (0, 1));
        let discrete = Frame::Fs(FsFrame {
            worlds: world_names(2),
            leq: Relation::identity(2),
            r: Relation::full(2),
        });
        let m = KripkeModel::new(discrete, [("p".to_string(), 0b01)].into()).unwrap();
        assert_eq!(check_persistence(&m, &fs).unwrap(), None);
    }

    #[test]
    fn preference_frames() {
        let f = build_preference_frame(&[vec!["x1"], vec!["x2"]]).unwrap();
        assert_eq!(f.leq, Relation::from_pairs(2, &[(0, 0), (1, 1), (0, 1)]));
        assert_eq!(f.r, Relation::identity(2));
        let g = build_preference_frame(&[vec!["x1", "x2"]]).unwrap();
        assert_eq!(
            (g.leq.clone(), g.r.clone()),
            (Relation::identity(2), Relation::full(2))
        );
        assert_eq!(
            build_preference_frame::<&str>(&[vec!["a"], vec![]]),
            Err(KripkeError::EmptyLevel(1))
        );
        let gh = parse("G p <-> H p").unwrap();
        for levels in [
            vec![vec!["a", "b"], vec!["c"]],
            vec![vec!["a"], vec!["b", "c"], vec!["d"]],
        ] {
            let f = Frame::Fs(build_preference_frame(&levels).unwrap());
            assert_eq!(check_frame(&f), Ok(()));
            assert!(valid_in_frame(&gh, &f).unwrap());
        }
    }

    #[test]
    fn complex_algebras_are_h2gc() {
        for kind in [FrameKind::Fs, FrameKind::Int2Gc] {
            for f in enumerate_frames(kind, 2).unwrap() {
                let alg = complex_algebra(&f).unwrap();
                assert!(check_h2gc(&alg), "{f:?}");
                if kind == FrameKind::Fs {
                    assert!(
                        check_identity(&alg, Identity::Fs1) && check_identity(&alg, Identity::Fs2)
                    );
                }
            }
        }
    }
}
