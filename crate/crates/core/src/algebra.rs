//! Finite Heyting algebras with two Galois pairs.
//!
//! Elements are indices into a fixed carrier order; every table is a flat
//! vector. Algebras produced by the enumerators are labelled `0`, `a`, `b`,
//! ... , `1` along a canonical linear extension of the order.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use itertools::Itertools;
use thiserror::Error;

use crate::formula::{BinOp, Interpretation, UnOp};

pub type Elem = usize;

/// Largest carrier size the enumerators accept.
pub const DEFAULT_SIZE_CAP: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("not a partial order: `{0}` and `{1}` are distinct but each below the other")]
    NotAPartialOrder(String, String),
    #[error("not a lattice: `{0}` and `{1}` have no {2}")]
    NotALattice(String, String, &'static str),
    #[error("order has no bottom or no top")]
    NoBounds,
    #[error("not a Heyting algebra: no relative pseudocomplement {0} -> {1}")]
    NotHeyting(String, String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("operation `{0}` is not total: no value for `{1}`")]
    IncompleteTable(String, String),
    #[error("requested size {requested} exceeds the cap of {cap}")]
    CapExceeded { requested: usize, cap: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteLattice {
    names: Vec<String>,
    leq: Vec<bool>,
    meet: Vec<Elem>,
    join: Vec<Elem>,
    bottom: Elem,
    top: Elem,
}

impl FiniteLattice {
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, a: Elem) -> &str {
        &self.names[a]
    }

    pub fn elem(&self, name: &str) -> Option<Elem> {
        self.names.iter().position(|n| n == name)
    }

    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.leq[a * self.len() + b]
    }

    pub fn meet(&self, a: Elem, b: Elem) -> Elem {
        self.meet[a * self.len() + b]
    }

    pub fn join(&self, a: Elem, b: Elem) -> Elem {
        self.join[a * self.len() + b]
    }

    pub fn bottom(&self) -> Elem {
        self.bottom
    }

    pub fn top(&self) -> Elem {
        self.top
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.len()
    }

    pub fn join_all(&self, xs: impl IntoIterator<Item = Elem>) -> Elem {
        xs.into_iter().fold(self.bottom, |acc, x| self.join(acc, x))
    }

    pub fn meet_all(&self, xs: impl IntoIterator<Item = Elem>) -> Elem {
        xs.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    /// Pairs `(a, b)` with `a < b` and nothing strictly between.
    pub fn covers(&self) -> Vec<(Elem, Elem)> {
        let n = self.len();
        let lt = |a: Elem, b: Elem| a != b && self.leq(a, b);
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if lt(a, b) && !(0..n).any(|c| lt(a, c) && lt(c, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn is_distributive(&self) -> bool {
        let n = self.len();
        (0..n).all(|a| {
            (0..n).all(|b| {
                (0..n).all(|c| {
                    self.meet(a, self.join(b, c)) == self.join(self.meet(a, b), self.meet(a, c))
                })
            })
        })
    }

    /// Nonzero elements that are not the join of the elements strictly below.
    pub fn join_irreducibles(&self) -> Vec<Elem> {
        self.elements()
            .filter(|&j| {
                j != self.bottom
                    && self.join_all(self.elements().filter(|&x| x != j && self.leq(x, j))) != j
            })
            .collect()
    }

    /// Assemble from precomputed tables. The caller guarantees consistency.
    pub(crate) fn from_tables(
        names: Vec<String>,
        leq: Vec<bool>,
        meet: Vec<Elem>,
        join: Vec<Elem>,
        bottom: Elem,
        top: Elem,
    ) -> Self {
        FiniteLattice {
            names,
            leq,
            meet,
            join,
            bottom,
            top,
        }
    }

    /// Rename and reorder along `perm`, where `perm[new] = old`.
    pub fn permuted(&self, perm: &[Elem], names: Vec<String>) -> FiniteLattice {
        let n = self.len();
        let mut inv = vec![0; n];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let mut leq = vec![false; n * n];
        let mut meet = vec![0; n * n];
        let mut join = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                leq[i * n + j] = self.leq(perm[i], perm[j]);
                meet[i * n + j] = inv[self.meet(perm[i], perm[j])];
                join[i * n + j] = inv[self.join(perm[i], perm[j])];
            }
        }
        FiniteLattice {
            names,
            leq,
            meet,
            join,
            bottom: inv[self.bottom],
            top: inv[self.top],
        }
    }
}

/// Build a bounded lattice from generating order pairs `(below, above)`.
pub fn build_lattice<S: AsRef<str>>(
    elements: &[S],
    order_pairs: &[(S, S)],
) -> Result<FiniteLattice, AlgebraError> {
    let names: Vec<String> = elements.iter().map(|s| s.as_ref().to_string()).collect();
    let n = names.len();
    let mut seen = BTreeSet::new();
    for nm in &names {
        if !seen.insert(nm.as_str()) {
            return Err(AlgebraError::DuplicateElement(nm.clone()));
        }
    }
    let idx = |s: &str| {
        names
            .iter()
            .position(|x| x == s)
            .ok_or_else(|| AlgebraError::UnknownElement(s.to_string()))
    };
    let mut leq = vec![false; n * n];
    for i in 0..n {
        leq[i * n + i] = true;
    }
    for (a, b) in order_pairs {
        let (a, b) = (idx(a.as_ref())?, idx(b.as_ref())?);
        leq[a * n + b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if leq[i * n + k] {
                for j in 0..n {
                    if leq[k * n + j] {
                        leq[i * n + j] = true;
                    }
                }
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if leq[i * n + j] && leq[j * n + i] {
                return Err(AlgebraError::NotAPartialOrder(
                    names[i].clone(),
                    names[j].clone(),
                ));
            }
        }
    }
    let bottom = (0..n)
        .find(|&b| (0..n).all(|x| leq[b * n + x]))
        .ok_or(AlgebraError::NoBounds)?;
    let top = (0..n)
        .find(|&t| (0..n).all(|x| leq[x * n + t]))
        .ok_or(AlgebraError::NoBounds)?;
    let mut meet = vec![0; n * n];
    let mut join = vec![0; n * n];
    for a in 0..n {
        for b in 0..n {
            let lower: Vec<Elem> = (0..n)
                .filter(|&x| leq[x * n + a] && leq[x * n + b])
                .collect();
            let glb = lower
                .iter()
                .copied()
                .find(|&g| lower.iter().all(|&x| leq[x * n + g]));
            meet[a * n + b] = glb.ok_or_else(|| {
                AlgebraError::NotALattice(names[a].clone(), names[b].clone(), "meet")
            })?;
            let upper: Vec<Elem> = (0..n)
                .filter(|&x| leq[a * n + x] && leq[b * n + x])
                .collect();
            let lub = upper
                .iter()
                .copied()
                .find(|&l| upper.iter().all(|&x| leq[l * n + x]));
            join[a * n + b] = lub.ok_or_else(|| {
                AlgebraError::NotALattice(names[a].clone(), names[b].clone(), "join")
            })?;
        }
    }
    Ok(FiniteLattice {
        names,
        leq,
        meet,
        join,
        bottom,
        top,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeytingAlgebra {
    lattice: FiniteLattice,
    rpc: Vec<Elem>,
}

impl std::ops::Deref for HeytingAlgebra {
    type Target = FiniteLattice;
    fn deref(&self) -> &FiniteLattice {
        &self.lattice
    }
}

impl HeytingAlgebra {
    pub fn lattice(&self) -> &FiniteLattice {
        &self.lattice
    }

    pub fn imp(&self, a: Elem, b: Elem) -> Elem {
        self.rpc[a * self.len() + b]
    }

    pub fn neg(&self, a: Elem) -> Elem {
        self.imp(a, self.bottom())
    }

    pub(crate) fn from_tables(lattice: FiniteLattice, rpc: Vec<Elem>) -> Self {
        HeytingAlgebra { lattice, rpc }
    }

    pub fn permuted(&self, perm: &[Elem], names: Vec<String>) -> HeytingAlgebra {
        heyting_from_lattice(self.lattice.permuted(perm, names)).expect("isomorphic copy")
    }
}

/// Compute `a -> b` as the join of all `x` with `a & x <= b`, rejecting the
/// lattice when that join is not itself such an `x`.
pub fn heyting_from_lattice(l: FiniteLattice) -> Result<HeytingAlgebra, AlgebraError> {
    let n = l.len();
    let mut rpc = vec![0; n * n];
    for a in 0..n {
        for b in 0..n {
            let c = l.join_all((0..n).filter(|&x| l.leq(l.meet(a, x), b)));
            if !l.leq(l.meet(a, c), b) {
                return Err(AlgebraError::NotHeyting(
                    l.name(a).to_string(),
                    l.name(b).to_string(),
                ));
            }
            rpc[a * n + b] = c;
        }
    }
    Ok(HeytingAlgebra { lattice: l, rpc })
}

/// A total map on a carrier, stored as a table.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UnaryOp(pub Vec<Elem>);

impl UnaryOp {
    pub fn identity(n: usize) -> Self {
        UnaryOp((0..n).collect())
    }

    pub fn constant(n: usize, c: Elem) -> Self {
        UnaryOp(vec![c; n])
    }

    pub fn apply(&self, a: Elem) -> Elem {
        self.0[a]
    }

    pub fn compose(&self, then: &UnaryOp) -> UnaryOp {
        UnaryOp(self.0.iter().map(|&x| then.0[x]).collect())
    }

    /// Conjugate by `perm` (`perm[new] = old`): the same map on a relabelled carrier.
    pub fn permuted(&self, perm: &[Elem]) -> UnaryOp {
        let mut inv = vec![0; perm.len()];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        UnaryOp(perm.iter().map(|&old| inv[self.0[old]]).collect())
    }
}

pub fn is_monotone(l: &FiniteLattice, f: &UnaryOp) -> bool {
    l.elements().all(|a| {
        l.elements()
            .all(|b| !l.leq(a, b) || l.leq(f.apply(a), f.apply(b)))
    })
}

/// `phi(a) <= b` iff `a <= psi(b)` for all `a`, `b`.
pub fn is_galois_pair(l: &FiniteLattice, phi: &UnaryOp, psi: &UnaryOp) -> bool {
    l.elements().all(|a| {
        l.elements()
            .all(|b| l.leq(phi.apply(a), b) == l.leq(a, psi.apply(b)))
    })
}

/// The equational characterisation: `phi` preserves binary joins, `psi`
/// binary meets, `a = a & psi(phi(a))` and `a = a | phi(psi(a))`.
pub fn is_galois_pair_equational(l: &FiniteLattice, phi: &UnaryOp, psi: &UnaryOp) -> bool {
    let gc1 = l.elements().all(|a| {
        l.elements().all(|b| {
            phi.apply(l.join(a, b)) == l.join(phi.apply(a), phi.apply(b))
                && psi.apply(l.meet(a, b)) == l.meet(psi.apply(a), psi.apply(b))
        })
    });
    let gc2 = l.elements().all(|a| {
        a == l.meet(a, psi.apply(phi.apply(a))) && a == l.join(a, phi.apply(psi.apply(a)))
    });
    gc1 && gc2
}

/// Upper adjoint of a join-preserving map, if there is one.
pub fn right_adjoint(l: &FiniteLattice, phi: &UnaryOp) -> Option<UnaryOp> {
    if phi.apply(l.bottom()) != l.bottom() {
        return None;
    }
    for a in l.elements() {
        for b in l.elements() {
            if phi.apply(l.join(a, b)) != l.join(phi.apply(a), phi.apply(b)) {
                return None;
            }
        }
    }
    Some(UnaryOp(
        l.elements()
            .map(|q| l.join_all(l.elements().filter(|&p| l.leq(phi.apply(p), q))))
            .collect(),
    ))
}

/// Lower adjoint of a meet-preserving map, if there is one.
pub fn left_adjoint(l: &FiniteLattice, psi: &UnaryOp) -> Option<UnaryOp> {
    if psi.apply(l.top()) != l.top() {
        return None;
    }
    for a in l.elements() {
        for b in l.elements() {
            if psi.apply(l.meet(a, b)) != l.meet(psi.apply(a), psi.apply(b)) {
                return None;
            }
        }
    }
    Some(UnaryOp(
        l.elements()
            .map(|p| l.meet_all(l.elements().filter(|&q| l.leq(p, psi.apply(q)))))
            .collect(),
    ))
}

/// A Heyting algebra with operation tables for `F`, `G`, `P`, `H`.
///
/// The intended pairings are `fdia -| hbox` and `pdia -| gbox`; the
/// constructor does not enforce them, see [`check_h2gc`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct H2GCAlgebra {
    pub heyting: HeytingAlgebra,
    pub fdia: UnaryOp,
    pub gbox: UnaryOp,
    pub pdia: UnaryOp,
    pub hbox: UnaryOp,
}

impl std::ops::Deref for H2GCAlgebra {
    type Target = HeytingAlgebra;
    fn deref(&self) -> &HeytingAlgebra {
        &self.heyting
    }
}

impl H2GCAlgebra {
    pub fn new(
        heyting: HeytingAlgebra,
        fdia: UnaryOp,
        gbox: UnaryOp,
        pdia: UnaryOp,
        hbox: UnaryOp,
    ) -> Self {
        let n = heyting.len();
        for op in [&fdia, &gbox, &pdia, &hbox] {
            assert_eq!(op.0.len(), n, "operation table size");
            assert!(op.0.iter().all(|&x| x < n), "operation value out of range");
        }
        H2GCAlgebra {
            heyting,
            fdia,
            gbox,
            pdia,
            hbox,
        }
    }

    /// All four operations are the identity.
    pub fn identity_ops(heyting: HeytingAlgebra) -> Self {
        let id = UnaryOp::identity(heyting.len());
        H2GCAlgebra::new(heyting, id.clone(), id.clone(), id.clone(), id)
    }

    /// Build from the two lower adjoints.
    pub fn from_lower(heyting: HeytingAlgebra, fdia: UnaryOp, pdia: UnaryOp) -> Option<Self> {
        let hbox = right_adjoint(&heyting, &fdia)?;
        let gbox = right_adjoint(&heyting, &pdia)?;
        Some(H2GCAlgebra::new(heyting, fdia, gbox, pdia, hbox))
    }

    pub fn op(&self, op: UnOp) -> Option<&UnaryOp> {
        match op {
            UnOp::DiaF => Some(&self.fdia),
            UnOp::BoxG => Some(&self.gbox),
            UnOp::DiaP => Some(&self.pdia),
            UnOp::BoxH => Some(&self.hbox),
            UnOp::Not => None,
        }
    }

    pub fn permuted(&self, perm: &[Elem], names: Vec<String>) -> H2GCAlgebra {
        H2GCAlgebra {
            heyting: self.heyting.permuted(perm, names),
            fdia: self.fdia.permuted(perm),
            gbox: self.gbox.permuted(perm),
            pdia: self.pdia.permuted(perm),
            hbox: self.hbox.permuted(perm),
        }
    }

    pub fn is_fs(&self) -> bool {
        check_identity(self, Identity::Fs1) && check_identity(self, Identity::Fs2)
    }
}

impl Interpretation for H2GCAlgebra {
    type Value = Elem;

    fn top(&self) -> Elem {
        self.heyting.top()
    }

    fn bot(&self) -> Elem {
        self.heyting.bottom()
    }

    fn unary(&self, op: UnOp, a: Elem) -> Elem {
        match op {
            UnOp::Not => self.neg(a),
            UnOp::DiaF => self.fdia.apply(a),
            UnOp::BoxG => self.gbox.apply(a),
            UnOp::DiaP => self.pdia.apply(a),
            UnOp::BoxH => self.hbox.apply(a),
        }
    }

    fn binary(&self, op: BinOp, a: Elem, b: Elem) -> Elem {
        match op {
            BinOp::And => self.meet(a, b),
            BinOp::Or => self.join(a, b),
            BinOp::Imp => self.imp(a, b),
        }
    }
}

pub fn check_h2gc(alg: &H2GCAlgebra) -> bool {
    is_galois_pair(&alg.heyting, &alg.fdia, &alg.hbox)
        && is_galois_pair(&alg.heyting, &alg.pdia, &alg.gbox)
}

/// The Fischer Servi identities and their Dunn-style counterparts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Identity {
    Fs1,
    Fs2,
    Fs3,
    Fs4,
    D1,
    D2,
}

impl Identity {
    pub const ALL: [Identity; 6] = [
        Identity::Fs1,
        Identity::Fs2,
        Identity::Fs3,
        Identity::Fs4,
        Identity::D1,
        Identity::D2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::Fs1 => "fs1",
            Identity::Fs2 => "fs2",
            Identity::Fs3 => "fs3",
            Identity::Fs4 => "fs4",
            Identity::D1 => "d1",
            Identity::D2 => "d2",
        }
    }

    pub fn from_name(s: &str) -> Option<Identity> {
        Identity::ALL
            .into_iter()
            .find(|i| i.name().eq_ignore_ascii_case(s))
    }

    /// Left-hand side of the inequality `lhs <= rhs`.
    fn sides(self, alg: &H2GCAlgebra, a: Elem, b: Elem) -> (Elem, Elem) {
        let h = &alg.heyting;
        let (f, g, p, hb) = (&alg.fdia, &alg.gbox, &alg.pdia, &alg.hbox);
        match self {
            Identity::Fs1 => (f.apply(h.imp(a, b)), h.imp(g.apply(a), f.apply(b))),
            Identity::Fs2 => (p.apply(h.imp(a, b)), h.imp(hb.apply(a), p.apply(b))),
            Identity::Fs3 => (h.imp(f.apply(a), g.apply(b)), g.apply(h.imp(a, b))),
            Identity::Fs4 => (h.imp(p.apply(a), hb.apply(b)), hb.apply(h.imp(a, b))),
            Identity::D1 => (h.meet(f.apply(a), g.apply(b)), f.apply(h.meet(a, b))),
            Identity::D2 => (h.meet(p.apply(a), hb.apply(b)), p.apply(h.meet(a, b))),
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// First pair `(a, b)` in row-major order at which the identity fails.
pub fn identity_witness(alg: &H2GCAlgebra, which: Identity) -> Option<(Elem, Elem)> {
    let h = &alg.heyting;
    h.elements()
        .cartesian_product(h.elements())
        .find(|&(a, b)| {
            let (l, r) = which.sides(alg, a, b);
            !h.leq(l, r)
        })
}

pub fn check_identity(alg: &H2GCAlgebra, which: Identity) -> bool {
    identity_witness(alg, which).is_none()
}

/// Verdicts for all six identities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FsFlags {
    pub fs1: bool,
    pub fs2: bool,
    pub fs3: bool,
    pub fs4: bool,
    pub d1: bool,
    pub d2: bool,
}

pub fn fs_flags(alg: &H2GCAlgebra) -> FsFlags {
    FsFlags {
        fs1: check_identity(alg, Identity::Fs1),
        fs2: check_identity(alg, Identity::Fs2),
        fs3: check_identity(alg, Identity::Fs3),
        fs4: check_identity(alg, Identity::Fs4),
        d1: check_identity(alg, Identity::D1),
        d2: check_identity(alg, Identity::D2),
    }
}

/// Prime filters as sorted element lists: the principal filters of the
/// join-irreducibles, ordered by size and then lexicographically.
pub fn prime_filters(l: &FiniteLattice) -> Vec<Vec<Elem>> {
    let mut out: Vec<Vec<Elem>> = l
        .join_irreducibles()
        .into_iter()
        .map(|j| l.elements().filter(|&x| l.leq(j, x)).collect())
        .collect();
    out.sort_by(|a: &Vec<Elem>, b: &Vec<Elem>| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Order-preserving bijections of the carrier onto itself.
pub fn automorphisms(l: &FiniteLattice) -> Vec<Vec<Elem>> {
    let n = l.len();
    let mut out = Vec::new();
    let mut perm = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn go(
        l: &FiniteLattice,
        i: usize,
        perm: &mut Vec<Elem>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<Elem>>,
    ) {
        let n = l.len();
        if i == n {
            out.push(perm.clone());
            return;
        }
        for c in 0..n {
            if used[c] {
                continue;
            }
            if (0..i).all(|k| l.leq(k, i) == l.leq(perm[k], c) && l.leq(i, k) == l.leq(c, perm[k]))
            {
                used[c] = true;
                perm[i] = c;
                go(l, i + 1, perm, used, out);
                used[c] = false;
            }
        }
        perm[i] = usize::MAX;
    }
    go(l, 0, &mut perm, &mut used, &mut out);
    out
}

/// Labels `0`, `a`, `b`, ... , `1` for a carrier of size `n`.
pub fn standard_names(n: usize) -> Vec<String> {
    match n {
        0 => vec![],
        1 => vec!["0".into()],
        _ => std::iter::once("0".to_string())
            .chain((0..n - 2).map(|i| ((b'a' + i as u8) as char).to_string()))
            .chain(std::iter::once("1".to_string()))
            .collect(),
    }
}

/// Bit code of the strict upper triangle of the order under `perm`
/// (`perm[new] = old`), most significant bit first.
fn order_code(l: &FiniteLattice, perm: &[Elem]) -> u128 {
    let n = l.len();
    let mut code = 0u128;
    for i in 0..n {
        for j in i + 1..n {
            code = (code << 1) | l.leq(perm[i], perm[j]) as u128;
        }
    }
    code
}

/// Relabel along the linear extension with the smallest order code, so
/// that isomorphic lattices come out identical.
pub fn canonical_lattice(l: &FiniteLattice) -> (FiniteLattice, u128) {
    let n = l.len();
    let mut best: Option<(u128, Vec<Elem>)> = None;
    for perm in (0..n).permutations(n) {
        let is_ext = (0..n).all(|i| (i + 1..n).all(|j| !l.leq(perm[j], perm[i])));
        if !is_ext {
            continue;
        }
        let code = order_code(l, &perm);
        if best.as_ref().is_none_or(|(c, _)| code < *c) {
            best = Some((code, perm));
        }
    }
    let (code, perm) = best.expect("a finite order has a linear extension");
    (l.permuted(&perm, standard_names(n)), code)
}

/// Down-set lattice of a poset given by its order matrix.
fn downset_lattice(m: usize, below: &[bool]) -> FiniteLattice {
    let mut sets: Vec<u32> = Vec::new();
    for s in 0u32..(1 << m) {
        let closed =
            (0..m).all(|i| s >> i & 1 == 0 || (0..m).all(|j| !below[j * m + i] || s >> j & 1 == 1));
        if closed {
            sets.push(s);
        }
    }
    let n = sets.len();
    let pos: HashMap<u32, Elem> = sets.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let mut leq = vec![false; n * n];
    let mut meet = vec![0; n * n];
    let mut join = vec![0; n * n];
    for i in 0..n {
        for j in 0..n {
            leq[i * n + j] = sets[i] & !sets[j] == 0;
            meet[i * n + j] = pos[&(sets[i] & sets[j])];
            join[i * n + j] = pos[&(sets[i] | sets[j])];
        }
    }
    FiniteLattice::from_tables(
        (0..n).map(|i| i.to_string()).collect(),
        leq,
        meet,
        join,
        pos[&0],
        pos[&((1u32 << m) - 1)],
    )
}

/// One Heyting algebra per isomorphism class with at most `max_size`
/// elements, ordered by size and then by canonical order code.
///
/// Every finite distributive lattice is the lattice of down-sets of its
/// poset of join-irreducibles, so the search runs over posets with at
/// most `max_size - 1` points.
pub fn enumerate_heyting(max_size: usize) -> Result<Vec<HeytingAlgebra>, AlgebraError> {
    enumerate_heyting_capped(max_size, DEFAULT_SIZE_CAP)
}

pub fn enumerate_heyting_capped(
    max_size: usize,
    cap: usize,
) -> Result<Vec<HeytingAlgebra>, AlgebraError> {
    if max_size > cap {
        return Err(AlgebraError::CapExceeded {
            requested: max_size,
            cap,
        });
    }
    let mut found: Vec<(usize, u128, FiniteLattice)> = Vec::new();
    let mut seen = BTreeSet::new();
    for m in 0..max_size {
        // Posets on 0..m whose order is contained in the natural order.
        let slots: Vec<(usize, usize)> = (0..m)
            .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
            .collect();
        for bits in 0u64..(1 << slots.len()) {
            let mut below = vec![false; m * m];
            for i in 0..m {
                below[i * m + i] = true;
            }
            for (k, &(i, j)) in slots.iter().enumerate() {
                if bits >> k & 1 == 1 {
                    below[i * m + j] = true;
                }
            }
            let transitive = (0..m).all(|i| {
                (0..m).all(|j| {
                    !below[i * m + j] || (0..m).all(|k| !below[j * m + k] || below[i * m + k])
                })
            });
            if !transitive {
                continue;
            }
            let l = downset_lattice(m, &below);
            if l.len() > max_size {
                continue;
            }
            let (canon, code) = canonical_lattice(&l);
            if seen.insert((canon.len(), code)) {
                found.push((canon.len(), code, canon));
            }
        }
    }
    found.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
    Ok(found
        .into_iter()
        .map(|(_, _, l)| heyting_from_lattice(l).expect("distributive"))
        .collect())
}

/// Every Galois pair `(phi, psi)` on the lattice.
///
/// Join-preserving maps on a finite distributive lattice correspond to
/// monotone maps from the join-irreducibles, extended by joins.
pub fn enumerate_galois_pairs(l: &FiniteLattice) -> Vec<(UnaryOp, UnaryOp)> {
    let js = l.join_irreducibles();
    let k = js.len();
    let mut out = Vec::new();
    let mut vals = vec![0; k];
    fn go(
        l: &FiniteLattice,
        js: &[Elem],
        i: usize,
        vals: &mut Vec<Elem>,
        out: &mut Vec<(UnaryOp, UnaryOp)>,
    ) {
        if i == js.len() {
            let phi = UnaryOp(
                l.elements()
                    .map(|x| {
                        l.join_all((0..js.len()).filter(|&t| l.leq(js[t], x)).map(|t| vals[t]))
                    })
                    .collect(),
            );
            let psi = right_adjoint(l, &phi).expect("join-preserving by construction");
            out.push((phi, psi));
            return;
        }
        for v in l.elements() {
            let ok = (0..js.len()).all(|t| {
                if t == i || (t > i) {
                    return true;
                }
                let (jt, ji) = (js[t], js[i]);
                (!l.leq(jt, ji) || l.leq(vals[t], v)) && (!l.leq(ji, jt) || l.leq(v, vals[t]))
            });
            if ok {
                vals[i] = v;
                go(l, js, i + 1, vals, out);
            }
        }
    }
    go(l, &js, 0, &mut vals, &mut out);
    out
}

/// Lazily enumerates H2GC algebras up to isomorphism of the full signature.
pub struct H2gcStream {
    heyting: std::vec::IntoIter<HeytingAlgebra>,
    require_fs: bool,
    current: Option<H2gcBlock>,
}

struct H2gcBlock {
    h: HeytingAlgebra,
    pairs: Vec<(UnaryOp, UnaryOp)>,
    // For each automorphism, the index permutation it induces on `pairs`.
    actions: Vec<Vec<usize>>,
    i: usize,
    j: usize,
}

impl H2gcBlock {
    fn new(h: HeytingAlgebra) -> Self {
        let pairs = enumerate_galois_pairs(&h);
        let index: HashMap<&UnaryOp, usize> = pairs
            .iter()
            .enumerate()
            .map(|(i, (phi, _))| (phi, i))
            .collect();
        let actions = automorphisms(&h)
            .into_iter()
            .filter(|p| p.iter().enumerate().any(|(i, &x)| i != x))
            .map(|perm| {
                pairs
                    .iter()
                    .map(|(phi, _)| index[&phi.permuted(&perm)])
                    .collect()
            })
            .collect();
        H2gcBlock {
            h,
            pairs,
            actions,
            i: 0,
            j: 0,
        }
    }

    fn is_orbit_min(&self, i: usize, j: usize) -> bool {
        self.actions.iter().all(|act| (act[i], act[j]) >= (i, j))
    }
}

impl Iterator for H2gcStream {
    type Item = H2GCAlgebra;

    fn next(&mut self) -> Option<H2GCAlgebra> {
        loop {
            if self.current.is_none() {
                self.current = Some(H2gcBlock::new(self.heyting.next()?));
            }
            let b = self.current.as_mut().unwrap();
            if b.i >= b.pairs.len() {
                self.current = None;
                continue;
            }
            let (i, j) = (b.i, b.j);
            b.j += 1;
            if b.j == b.pairs.len() {
                b.j = 0;
                b.i += 1;
            }
            if !b.is_orbit_min(i, j) {
                continue;
            }
            let alg = H2GCAlgebra::new(
                b.h.clone(),
                b.pairs[i].0.clone(),
                b.pairs[j].1.clone(),
                b.pairs[j].0.clone(),
                b.pairs[i].1.clone(),
            );
            if self.require_fs && !alg.is_fs() {
                continue;
            }
            return Some(alg);
        }
    }
}

/// H2GC algebras (or H2GC+FS algebras when `require_fs`) with at most
/// `max_size` elements, one per isomorphism class.
pub fn enumerate_h2gc(max_size: usize, require_fs: bool) -> Result<H2gcStream, AlgebraError> {
    Ok(H2gcStream {
        heyting: enumerate_heyting(max_size)?.into_iter(),
        require_fs,
        current: None,
    })
}
