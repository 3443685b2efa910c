//! Rough H-sets: H-valued fuzzy sets on a finite universe, approximated
//! through an H-valued relation.
//!
//! `F` and `P` are upper approximations along `R` and its converse, `H`
//! and `G` the matching lower ones, so `F -| H` and `P -| G`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::alg_semantics::Odometer;
use crate::algebra::{
    enumerate_heyting, Elem, FiniteLattice, H2GCAlgebra, HeytingAlgebra, UnaryOp,
};
use crate::formula::UnOp;

/// Default bound on the carrier of [`power_algebra`].
pub const POWER_CAP: usize = 512;

/// Values indexed by universe position.
pub type HSet = Vec<Elem>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RoughError {
    #[error("set has {found} values but the universe has {expected} points")]
    UniverseMismatch { expected: usize, found: usize },
    #[error("relation must be {n} by {n}")]
    RelationShape { n: usize },
    #[error("value {0} is not an element of the algebra")]
    UnknownElement(Elem),
    #[error("power algebra would have {requested} elements, over the cap of {cap}")]
    CapExceeded { requested: usize, cap: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoughContext {
    pub algebra: HeytingAlgebra,
    pub universe: Vec<String>,
    /// `relation[x][y]` is the degree of `x R y`.
    pub relation: Vec<Vec<Elem>>,
}

impl RoughContext {
    pub fn new(
        algebra: HeytingAlgebra,
        universe: Vec<String>,
        relation: Vec<Vec<Elem>>,
    ) -> Result<Self, RoughError> {
        let n = universe.len();
        if relation.len() != n || relation.iter().any(|row| row.len() != n) {
            return Err(RoughError::RelationShape { n });
        }
        if let Some(&bad) = relation.iter().flatten().find(|&&a| a >= algebra.len()) {
            return Err(RoughError::UnknownElement(bad));
        }
        Ok(RoughContext {
            algebra,
            universe,
            relation,
        })
    }

    pub fn len(&self) -> usize {
        self.universe.len()
    }

    pub fn is_empty(&self) -> bool {
        self.universe.is_empty()
    }

    fn check(&self, phi: &[Elem]) -> Result<(), RoughError> {
        if phi.len() != self.len() {
            return Err(RoughError::UniverseMismatch {
                expected: self.len(),
                found: phi.len(),
            });
        }
        match phi.iter().find(|&&a| a >= self.algebra.len()) {
            Some(&a) => Err(RoughError::UnknownElement(a)),
            None => Ok(()),
        }
    }

    /// Degree of `x R y`, or of `y R x` when `converse`.
    fn r(&self, x: usize, y: usize, converse: bool) -> Elem {
        if converse {
            self.relation[y][x]
        } else {
            self.relation[x][y]
        }
    }

    fn upper(&self, phi: &[Elem], converse: bool) -> HSet {
        let h = &self.algebra;
        (0..self.len())
            .map(|x| {
                (0..self.len()).fold(h.bottom(), |acc, y| {
                    h.join(acc, h.meet(self.r(x, y, converse), phi[y]))
                })
            })
            .collect()
    }

    fn lower(&self, phi: &[Elem], converse: bool) -> HSet {
        let h = &self.algebra;
        (0..self.len())
            .map(|x| {
                (0..self.len()).fold(h.top(), |acc, y| {
                    h.meet(acc, h.imp(self.r(x, y, converse), phi[y]))
                })
            })
            .collect()
    }

    /// `x |-> join_y R(x,y) & phi(y)`
    pub fn dia_f(&self, phi: &[Elem]) -> Result<HSet, RoughError> {
        self.check(phi)?;
        Ok(self.upper(phi, false))
    }

    /// `x |-> meet_y R(y,x) -> phi(y)`
    pub fn box_h(&self, phi: &[Elem]) -> Result<HSet, RoughError> {
        self.check(phi)?;
        Ok(self.lower(phi, true))
    }

    /// `x |-> join_y R(y,x) & phi(y)`
    pub fn dia_p(&self, phi: &[Elem]) -> Result<HSet, RoughError> {
        self.check(phi)?;
        Ok(self.upper(phi, true))
    }

    /// `x |-> meet_y R(x,y) -> phi(y)`
    pub fn box_g(&self, phi: &[Elem]) -> Result<HSet, RoughError> {
        self.check(phi)?;
        Ok(self.lower(phi, false))
    }

    /// The operator for a modal symbol; `~` is pointwise negation.
    pub fn apply(&self, op: UnOp, phi: &[Elem]) -> Result<HSet, RoughError> {
        match op {
            UnOp::DiaF => self.dia_f(phi),
            UnOp::BoxH => self.box_h(phi),
            UnOp::DiaP => self.dia_p(phi),
            UnOp::BoxG => self.box_g(phi),
            UnOp::Not => {
                self.check(phi)?;
                Ok(phi.iter().map(|&a| self.algebra.neg(a)).collect())
            }
        }
    }

    pub fn leq(&self, phi: &[Elem], psi: &[Elem]) -> bool {
        phi.iter().zip(psi).all(|(&a, &b)| self.algebra.leq(a, b))
    }

    pub fn meet(&self, phi: &[Elem], psi: &[Elem]) -> HSet {
        phi.iter()
            .zip(psi)
            .map(|(&a, &b)| self.algebra.meet(a, b))
            .collect()
    }

    pub fn join(&self, phi: &[Elem], psi: &[Elem]) -> HSet {
        phi.iter()
            .zip(psi)
            .map(|(&a, &b)| self.algebra.join(a, b))
            .collect()
    }

    pub fn constant(&self, a: Elem) -> HSet {
        vec![a; self.len()]
    }

    /// Number of H-sets, saturating.
    pub fn set_count(&self) -> usize {
        (0..self.len()).fold(1usize, |acc, _| acc.saturating_mul(self.algebra.len()))
    }

    /// Every H-set, first universe point varying slowest.
    pub fn all_sets(&self) -> Vec<HSet> {
        let mut out = Vec::new();
        let mut od = Odometer::new(self.algebra.len(), self.len());
        while let Some(s) = od.next_slice() {
            out.push(s.to_vec());
            od.advance();
        }
        out
    }

    /// `<a,b>` from the values' names.
    pub fn set_name(&self, phi: &[Elem]) -> String {
        let names: Vec<&str> = phi.iter().map(|&a| self.algebra.name(a)).collect();
        format!("<{}>", names.join(","))
    }
}

pub fn power_algebra(ctx: &RoughContext) -> Result<H2GCAlgebra, RoughError> {
    power_algebra_capped(ctx, POWER_CAP)
}

/// All H-sets with pointwise operations and the four approximations.
/// Element order is that of [`RoughContext::all_sets`].
pub fn power_algebra_capped(ctx: &RoughContext, cap: usize) -> Result<H2GCAlgebra, RoughError> {
    let m = ctx.set_count();
    if m > cap {
        return Err(RoughError::CapExceeded { requested: m, cap });
    }
    let sets = ctx.all_sets();
    let base = ctx.algebra.len();
    let index = |s: &[Elem]| s.iter().fold(0usize, |acc, &a| acc * base + a);
    let h = &ctx.algebra;
    let pointwise = |f: &dyn Fn(Elem, Elem) -> Elem| {
        let mut t = vec![0; m * m];
        for (i, a) in sets.iter().enumerate() {
            for (j, b) in sets.iter().enumerate() {
                let c: HSet = a.iter().zip(b).map(|(&x, &y)| f(x, y)).collect();
                t[i * m + j] = index(&c);
            }
        }
        t
    };
    let meet = pointwise(&|x, y| h.meet(x, y));
    let join = pointwise(&|x, y| h.join(x, y));
    let imp = pointwise(&|x, y| h.imp(x, y));
    let leq: Vec<bool> = sets
        .iter()
        .flat_map(|a| sets.iter().map(move |b| ctx.leq(a, b)))
        .collect();
    let names = sets.iter().map(|s| ctx.set_name(s)).collect();
    let lattice = FiniteLattice::from_tables(
        names,
        leq,
        meet,
        join,
        index(&ctx.constant(h.bottom())),
        index(&ctx.constant(h.top())),
    );
    let heyting = HeytingAlgebra::from_tables(lattice, imp);
    let op = |o: UnOp| {
        UnaryOp(
            sets.iter()
                .map(|s| index(&ctx.apply(o, s).expect("in range")))
                .collect(),
        )
    };
    Ok(H2GCAlgebra::new(
        heyting,
        op(UnOp::DiaF),
        op(UnOp::BoxG),
        op(UnOp::DiaP),
        op(UnOp::BoxH),
    ))
}

/// Which pairs of H-sets [`verify_rough_laws`] visits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LawCoverage {
    Exhaustive,
    Sampled { pairs: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoughLawFailure {
    pub law: &'static str,
    pub phi: HSet,
    pub psi: HSet,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RoughLawReport {
    pub pairs_checked: usize,
    pub laws_checked: usize,
    pub failures: Vec<RoughLawFailure>,
}

impl RoughLawReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Names of the laws, in checking order.
pub const ROUGH_LAWS: [&str; 14] = [
    "mono-F",
    "mono-G",
    "mono-P",
    "mono-H",
    "unit-FH",
    "counit-FH",
    "unit-PG",
    "counit-PG",
    "adj-FH",
    "adj-PG",
    "d1",
    "d2",
    "mono-F-join",
    "mono-G-meet",
];

/// Check the approximation laws on pairs `(phi, psi)` without building the
/// power algebra: monotonicity, units and counits, both adjunctions, d1
/// and d2.
pub fn verify_rough_laws(ctx: &RoughContext, coverage: LawCoverage) -> RoughLawReport {
    let mut report = RoughLawReport {
        laws_checked: ROUGH_LAWS.len(),
        ..Default::default()
    };
    let mut visit = |phi: &[Elem], psi: &[Elem]| {
        report.pairs_checked += 1;
        for law in check_pair(ctx, phi, psi) {
            report.failures.push(RoughLawFailure {
                law,
                phi: phi.to_vec(),
                psi: psi.to_vec(),
            });
        }
    };
    match coverage {
        LawCoverage::Exhaustive => {
            let sets = ctx.all_sets();
            for phi in &sets {
                for psi in &sets {
                    visit(phi, psi);
                }
            }
        }
        LawCoverage::Sampled { pairs, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = ctx.algebra.len();
            let mut draw = || {
                (0..ctx.len())
                    .map(|_| rng.gen_range(0..m))
                    .collect::<HSet>()
            };
            for _ in 0..pairs {
                let (phi, psi) = (draw(), draw());
                visit(&phi, &psi);
            }
        }
    }
    report
}

fn check_pair(ctx: &RoughContext, phi: &[Elem], psi: &[Elem]) -> Vec<&'static str> {
    let (f, g, p, h) = (
        ctx.upper(phi, false),
        ctx.lower(phi, false),
        ctx.upper(phi, true),
        ctx.lower(phi, true),
    );
    let (f2, g2, p2, h2) = (
        ctx.upper(psi, false),
        ctx.lower(psi, false),
        ctx.upper(psi, true),
        ctx.lower(psi, true),
    );
    let le = |a: &[Elem], b: &[Elem]| ctx.leq(a, b);
    let mut bad = Vec::new();
    if le(phi, psi) {
        for (law, a, b) in [
            ("mono-F", &f, &f2),
            ("mono-G", &g, &g2),
            ("mono-P", &p, &p2),
            ("mono-H", &h, &h2),
        ] {
            if !le(a, b) {
                bad.push(law);
            }
        }
    }
    let checks: [(&'static str, bool); 10] = [
        ("unit-FH", le(phi, &ctx.lower(&f, true))),
        ("counit-FH", le(&ctx.upper(&h, false), phi)),
        ("unit-PG", le(phi, &ctx.lower(&p, false))),
        ("counit-PG", le(&ctx.upper(&g, true), phi)),
        ("adj-FH", le(&f, psi) == le(phi, &h2)),
        ("adj-PG", le(&p, psi) == le(phi, &g2)),
        (
            "d1",
            le(&ctx.meet(&f, &g2), &ctx.upper(&ctx.meet(phi, psi), false)),
        ),
        (
            "d2",
            le(&ctx.meet(&p, &h2), &ctx.upper(&ctx.meet(phi, psi), true)),
        ),
        // Joins go through F, meets through G.
        (
            "mono-F-join",
            ctx.upper(&ctx.join(phi, psi), false) == ctx.join(&f, &f2),
        ),
        (
            "mono-G-meet",
            ctx.lower(&ctx.meet(phi, psi), false) == ctx.meet(&g, &g2),
        ),
    ];
    bad.extend(checks.iter().filter(|(_, ok)| !ok).map(|(law, _)| *law));
    bad
}

/// Both sides of the two D-or inequalities at every point:
/// `G(phi | psi) <= G phi | F psi` and `H(phi | psi) <= H phi | P psi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DVeeReport {
    pub g_lhs: HSet,
    pub g_rhs: HSet,
    pub h_lhs: HSet,
    pub h_rhs: HSet,
}

impl DVeeReport {
    /// Points where the `G`/`F` inequality fails.
    pub fn g_failures(&self, ctx: &RoughContext) -> Vec<usize> {
        (0..ctx.len())
            .filter(|&x| !ctx.algebra.leq(self.g_lhs[x], self.g_rhs[x]))
            .collect()
    }

    pub fn h_failures(&self, ctx: &RoughContext) -> Vec<usize> {
        (0..ctx.len())
            .filter(|&x| !ctx.algebra.leq(self.h_lhs[x], self.h_rhs[x]))
            .collect()
    }
}

pub fn dvee_report(
    ctx: &RoughContext,
    phi: &[Elem],
    psi: &[Elem],
) -> Result<DVeeReport, RoughError> {
    let both = ctx.join(phi, psi);
    Ok(DVeeReport {
        g_lhs: ctx.box_g(&both)?,
        g_rhs: ctx.join(&ctx.box_g(phi)?, &ctx.dia_f(psi)?),
        h_lhs: ctx.box_h(&both)?,
        h_rhs: ctx.join(&ctx.box_h(phi)?, &ctx.dia_p(psi)?),
    })
}

/// A context with a Heyting algebra of at most `max_h` elements (drawn
/// from the enumerated ones), 1 to `max_u` points, and a uniform random
/// relation.
pub fn random_context(seed: u64, max_h: usize, max_u: usize) -> RoughContext {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let algebras = enumerate_heyting(max_h).expect("within cap");
    let algebra = algebras[rng.gen_range(0..algebras.len())].clone();
    let n = rng.gen_range(1..=max_u);
    let m = algebra.len();
    let relation = (0..n)
        .map(|_| (0..n).map(|_| rng.gen_range(0..m)).collect())
        .collect();
    let universe = (0..n).map(|i| format!("u{i}")).collect();
    RoughContext::new(algebra, universe, relation).expect("well formed")
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::alg_semantics::{algebra_countervaluation, eval};
    use crate::algebra::{
        build_lattice, check_h2gc, check_identity, heyting_from_lattice, Identity,
    };
    use crate::formula::parse;

    /// Two points, `H = 2^2 (+) 1`, diagonal `a`, off-diagonal `b`.
    pub(crate) fn two_point_context() -> (RoughContext, HSet, HSet) {
        let l = build_lattice(
            &["0", "a", "b", "c", "1"],
            &[("0", "a"), ("0", "b"), ("a", "c"), ("b", "c"), ("c", "1")],
        )
        .unwrap();
        let h = heyting_from_lattice(l).unwrap();
        let (a, b) = (h.elem("a").unwrap(), h.elem("b").unwrap());
        let ctx = RoughContext::new(
            h.clone(),
            vec!["x".into(), "y".into()],
            vec![vec![a, b], vec![b, a]],
        )
        .unwrap();
        let phi = ctx.constant(h.bottom());
        let psi = ctx.constant(h.top());
        (ctx, phi, psi)
    }

    #[test]
    fn two_point_context_values() {
        let (ctx, phi, psi) = two_point_context();
        let h = &ctx.algebra;
        let c = h.elem("c").unwrap();
        let r = dvee_report(&ctx, &phi, &psi).unwrap();
        assert_eq!(r.g_lhs, vec![h.top(), h.top()]);
        assert_eq!(r.g_rhs, vec![c, c]);
        assert_eq!(r.h_lhs, vec![h.top(), h.top()]);
        assert_eq!(r.h_rhs, vec![c, c]);
        assert_eq!(r.g_failures(&ctx), vec![0, 1]);
        assert_eq!(ctx.box_g(&phi).unwrap(), vec![h.bottom(); 2]);
        assert_eq!(ctx.dia_f(&psi).unwrap(), vec![c; 2]);
        assert_eq!(
            ctx.box_g(&[0]),
            Err(RoughError::UniverseMismatch {
                expected: 2,
                found: 1
            })
        );
    }

    #[test]
    fn two_point_context_power_algebra() {
        let (ctx, phi, psi) = two_point_context();
        let alg = power_algebra(&ctx).unwrap();
        assert_eq!(alg.len(), 25);
        assert!(check_h2gc(&alg));
        for id in Identity::ALL {
            assert!(check_identity(&alg, id), "{id}");
        }
        let dv = parse("G(p|q) -> G p | F q").unwrap();
        let idx = |s: &[Elem]| alg.elem(&ctx.set_name(s)).unwrap();
        let v = [("p".to_string(), idx(&phi)), ("q".to_string(), idx(&psi))].into();
        assert_ne!(eval(&dv, &alg, &v).unwrap(), alg.top());
        assert!(algebra_countervaluation(&dv, &alg).is_some());
        assert!(matches!(
            power_algebra_capped(&ctx, 24),
            Err(RoughError::CapExceeded {
                requested: 25,
                cap: 24
            })
        ));
    }

    #[test]
    fn crisp_identity_relation_is_neutral() {
        let (ctx, ..) = two_point_context();
        let (z, o) = (ctx.algebra.bottom(), ctx.algebra.top());
        let id = RoughContext::new(
            ctx.algebra.clone(),
            ctx.universe.clone(),
            vec![vec![o, z], vec![z, o]],
        )
        .unwrap();
        for s in id.all_sets() {
            for op in [UnOp::DiaF, UnOp::BoxG, UnOp::DiaP, UnOp::BoxH] {
                assert_eq!(id.apply(op, &s).unwrap(), s);
            }
        }
    }

    #[test]
    fn constant_full_relation() {
        let (ctx, ..) = two_point_context();
        let o = ctx.algebra.top();
        let full = RoughContext::new(
            ctx.algebra.clone(),
            ctx.universe.clone(),
            vec![vec![o, o], vec![o, o]],
        )
        .unwrap();
        let h = &full.algebra;
        for s in full.all_sets() {
            assert_eq!(
                full.dia_f(&s).unwrap(),
                full.constant(h.join_all(s.iter().copied()))
            );
            assert_eq!(
                full.box_g(&s).unwrap(),
                full.constant(h.meet_all(s.iter().copied()))
            );
        }
    }

    #[test]
    fn laws_hold_on_example_and_random_contexts() {
        let (ctx, ..) = two_point_context();
        let r = verify_rough_laws(&ctx, LawCoverage::Exhaustive);
        assert!(r.passed(), "{:?}", r.failures.first());
        assert_eq!(r.pairs_checked, 625);
        for seed in 0..20 {
            let ctx = random_context(seed, 5, 3);
            let r = verify_rough_laws(&ctx, LawCoverage::Sampled { pairs: 300, seed });
            assert!(r.passed(), "seed {seed}: {:?}", r.failures.first());
        }
    }

    #[test]
    fn power_algebra_agrees_with_module_checks() {
        for seed in 0..10 {
            let ctx = random_context(seed, 4, 2);
            let alg = power_algebra(&ctx).unwrap();
            assert!(check_h2gc(&alg));
            assert!(check_identity(&alg, Identity::D1) && check_identity(&alg, Identity::D2));
        }
        let h = heyting_from_lattice(build_lattice(&["0", "1"], &[("0", "1")]).unwrap()).unwrap();
        let one = RoughContext::new(h, vec!["x".into()], vec![vec![1]]).unwrap();
        let alg = power_algebra(&one).unwrap();
        assert_eq!(alg.len(), 2);
        assert_eq!(alg.fdia.0, vec![0, 1]);
        assert_eq!(alg.gbox.0, vec![0, 1]);
    }

    /// Classical rough approximations on a crisp relation.
    fn classical_upper(rel: &[Vec<bool>], set: &[bool]) -> Vec<bool> {
        (0..set.len())
            .map(|x| (0..set.len()).any(|y| rel[x][y] && set[y]))
            .collect()
    }

    fn classical_lower(rel: &[Vec<bool>], set: &[bool]) -> Vec<bool> {
        (0..set.len())
            .map(|x| (0..set.len()).all(|y| !rel[x][y] || set[y]))
            .collect()
    }

    #[test]
    fn two_valued_case_is_classical() {
        let h = heyting_from_lattice(build_lattice(&["0", "1"], &[("0", "1")]).unwrap()).unwrap();
        for code in 0u32..512 {
            let rel: Vec<Vec<bool>> = (0..3)
                .map(|x| (0..3).map(|y| code >> (3 * x + y) & 1 == 1).collect())
                .collect();
            let table = rel
                .iter()
                .map(|row| row.iter().map(|&b| b as Elem).collect())
                .collect();
            let ctx = RoughContext::new(h.clone(), vec!["a".into(), "b".into(), "c".into()], table)
                .unwrap();
            for s in ctx.all_sets() {
                let crisp: Vec<bool> = s.iter().map(|&a| a == 1).collect();
                let back = |v: Vec<bool>| v.into_iter().map(|b| b as Elem).collect::<HSet>();
                assert_eq!(ctx.dia_f(&s).unwrap(), back(classical_upper(&rel, &crisp)));
                assert_eq!(ctx.box_g(&s).unwrap(), back(classical_lower(&rel, &crisp)));
            }
        }
    }

    #[test]
    fn fold_order_does_not_matter() {
        // Reversing the universe permutes the result the same way.
        for seed in 0..10 {
            let ctx = random_context(seed, 5, 3);
            let n = ctx.len();
            let rev: Vec<Vec<Elem>> = (0..n)
                .map(|x| (0..n).map(|y| ctx.relation[n - 1 - x][n - 1 - y]).collect())
                .collect();
            let mut names = ctx.universe.clone();
            names.reverse();
            let other = RoughContext::new(ctx.algebra.clone(), names, rev).unwrap();
            for s in ctx.all_sets() {
                let mut r = s.clone();
                r.reverse();
                for op in [UnOp::DiaF, UnOp::BoxG, UnOp::DiaP, UnOp::BoxH] {
                    let mut a = ctx.apply(op, &s).unwrap();
                    a.reverse();
                    assert_eq!(a, other.apply(op, &r).unwrap());
                }
            }
        }
    }
}
