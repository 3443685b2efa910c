//! Canonical frames of finite H2GC algebras. Worlds are the prime filters,
//! ordered by inclusion.

use crate::alg_semantics::{eval, AlgValuation};
use crate::algebra::{check_identity, prime_filters, Elem, FiniteLattice, H2GCAlgebra, Identity};
use crate::formula::Formula;
use crate::kripke::{
    Frame, FsFrame, Int2GcFrame, KripkeModel, KripkeValuation, Relation, MAX_WORLDS,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CanonicalKind {
    Int2Gc,
    Fs,
}

/// Both characterizations of each canonical relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalRelations {
    /// `y` inside the `F`-preimage of `x`.
    pub r1: Relation,
    /// `H`-preimage of `y` inside `x`.
    pub r1_alt: Relation,
    /// `G`-preimage of `x` inside `y`.
    pub r2: Relation,
    /// `x` inside the `P`-preimage of `y`.
    pub r2_alt: Relation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalFrame {
    /// Prime filters as sorted element lists, in world order.
    pub filters: Vec<Vec<Elem>>,
    pub frame: Frame,
    pub relations: CanonicalRelations,
    /// Set when the FS construction was asked of an algebra failing fs1 or
    /// fs2; the frame may then break (R4)/(R5).
    pub not_fs: bool,
}

fn membership(alg: &H2GCAlgebra, filters: &[Vec<Elem>]) -> Vec<Vec<bool>> {
    filters
        .iter()
        .map(|f| {
            let mut m = vec![false; alg.len()];
            for &a in f {
                m[a] = true;
            }
            m
        })
        .collect()
}

/// `{a,b}`-style name from carrier names in carrier order.
pub fn filter_name(l: &FiniteLattice, filter: &[Elem]) -> String {
    let names: Vec<&str> = filter.iter().map(|&a| l.name(a)).collect();
    format!("{{{}}}", names.join(","))
}

pub fn canonical_relations(alg: &H2GCAlgebra) -> CanonicalRelations {
    let filters = prime_filters(alg);
    let mem = membership(alg, &filters);
    let n = filters.len();
    assert!(n <= MAX_WORLDS, "too many prime filters");
    let elems: Vec<Elem> = alg.elements().collect();
    let mut rels = CanonicalRelations {
        r1: Relation::empty(n),
        r1_alt: Relation::empty(n),
        r2: Relation::empty(n),
        r2_alt: Relation::empty(n),
    };
    for x in 0..n {
        for y in 0..n {
            let (mx, my) = (&mem[x], &mem[y]);
            if elems.iter().all(|&a| !my[a] || mx[alg.fdia.apply(a)]) {
                rels.r1.set(x, y);
            }
            if elems.iter().all(|&a| !my[alg.hbox.apply(a)] || mx[a]) {
                rels.r1_alt.set(x, y);
            }
            if elems.iter().all(|&a| !mx[alg.gbox.apply(a)] || my[a]) {
                rels.r2.set(x, y);
            }
            if elems.iter().all(|&a| !mx[a] || my[alg.pdia.apply(a)]) {
                rels.r2_alt.set(x, y);
            }
        }
    }
    rels
}

pub fn canonical_frame(alg: &H2GCAlgebra, kind: CanonicalKind) -> CanonicalFrame {
    let filters = prime_filters(alg);
    let n = filters.len();
    let worlds: Vec<String> = filters.iter().map(|f| filter_name(alg, f)).collect();
    let mut leq = Relation::empty(n);
    for x in 0..n {
        for y in 0..n {
            if filters[x].iter().all(|a| filters[y].contains(a)) {
                leq.set(x, y);
            }
        }
    }
    let relations = canonical_relations(alg);
    let (frame, not_fs) = match kind {
        CanonicalKind::Int2Gc => (
            Frame::Int2Gc(Int2GcFrame {
                worlds,
                leq,
                r1: relations.r1.clone(),
                r2: relations.r2.clone(),
            }),
            false,
        ),
        CanonicalKind::Fs => {
            let r = relations.r1.intersection(&relations.r2);
            let fs = check_identity(alg, Identity::Fs1) && check_identity(alg, Identity::Fs2);
            (Frame::Fs(FsFrame { worlds, leq, r }), !fs)
        }
    };
    CanonicalFrame {
        filters,
        frame,
        relations,
        not_fs,
    }
}

/// `x` in `v*(p)` iff `v(p)` is in `x`.
pub fn canonical_valuation(
    alg: &H2GCAlgebra,
    v: &AlgValuation,
    kind: CanonicalKind,
) -> (CanonicalFrame, KripkeModel) {
    let cf = canonical_frame(alg, kind);
    let valuation: KripkeValuation = v
        .iter()
        .map(|(p, &a)| {
            let set = cf
                .filters
                .iter()
                .enumerate()
                .filter(|(_, f)| f.contains(&a))
                .fold(0u64, |s, (i, _)| s | 1 << i);
            (p.clone(), set)
        })
        .collect();
    let model = KripkeModel::new(cf.frame.clone(), valuation).expect("filters above grow");
    (cf, model)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyLemmaFailure {
    pub formula: Formula,
    pub world: String,
    pub satisfied: bool,
    pub value: Elem,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct KeyLemmaReport {
    pub instances: usize,
    pub failures: Vec<KeyLemmaFailure>,
}

impl KeyLemmaReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// For each formula and prime filter `x`: `x` satisfies the formula in the
/// canonical model iff its value lies in `x`. Variables missing from `v`
/// make the formula count as a failure at every world.
pub fn key_lemma_check(
    alg: &H2GCAlgebra,
    v: &AlgValuation,
    formulas: &[Formula],
    kind: CanonicalKind,
) -> KeyLemmaReport {
    let (cf, model) = canonical_valuation(alg, v, kind);
    let mut report = KeyLemmaReport::default();
    for f in formulas {
        let (Ok(value), Ok(den)) = (eval(f, alg, v), model.denotation(f)) else {
            report.failures.push(KeyLemmaFailure {
                formula: f.clone(),
                world: String::new(),
                satisfied: false,
                value: alg.bottom(),
            });
            continue;
        };
        for (i, filter) in cf.filters.iter().enumerate() {
            report.instances += 1;
            let satisfied = den >> i & 1 == 1;
            if satisfied != filter.contains(&value) {
                report.failures.push(KeyLemmaFailure {
                    formula: f.clone(),
                    world: cf.frame.worlds()[i].clone(),
                    satisfied,
                    value,
                });
            }
        }
    }
    report
}

/// The first prime filter (in [`prime_filters`] order) containing `base`
/// and missing every element of `forbidden`.
pub fn prime_filter_extension(
    l: &FiniteLattice,
    base: &[Elem],
    forbidden: &[Elem],
) -> Option<Vec<Elem>> {
    prime_filters(l)
        .into_iter()
        .find(|f| base.iter().all(|a| f.contains(a)) && forbidden.iter().all(|a| !f.contains(a)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_lattice, enumerate_h2gc, heyting_from_lattice, UnaryOp};
    use crate::formula::enumerate_formulas;
    use crate::kripke::check_frame;

    fn three_chain_alg() -> H2GCAlgebra {
        let h = heyting_from_lattice(
            build_lattice(&["0", "u", "1"], &[("0", "u"), ("u", "1")]).unwrap(),
        )
        .unwrap();
        H2GCAlgebra::new(
            h,
            UnaryOp::identity(3),
            UnaryOp::constant(3, 2),
            UnaryOp::constant(3, 0),
            UnaryOp::identity(3),
        )
    }

    #[test]
    fn three_chain_canonical_frame() {
        let cf = canonical_frame(&three_chain_alg(), CanonicalKind::Int2Gc);
        assert_eq!(cf.frame.worlds(), ["{1}", "{u,1}"]);
        let Frame::Int2Gc(f) = &cf.frame else {
            panic!()
        };
        // R1 is reverse inclusion, R2 is empty.
        assert_eq!(f.r1, f.leq.converse());
        assert_eq!(f.r2, Relation::empty(2));
        assert_eq!(check_frame(&cf.frame), Ok(()));
        assert!(!cf.not_fs);
    }

    #[test]
    fn identity_ops_on_two_elements() {
        let h = heyting_from_lattice(build_lattice(&["0", "1"], &[("0", "1")]).unwrap()).unwrap();
        let cf = canonical_frame(&H2GCAlgebra::identity_ops(h), CanonicalKind::Int2Gc);
        assert_eq!(cf.frame.worlds(), ["{1}"]);
        assert_eq!(cf.relations.r1, Relation::identity(1));
        assert_eq!(cf.relations.r2, Relation::identity(1));
    }

    #[test]
    fn canonical_valuations() {
        let alg = three_chain_alg();
        let v = |a: Elem| [("p".to_string(), a)].into();
        let (_, m) = canonical_valuation(&alg, &v(2), CanonicalKind::Int2Gc);
        assert_eq!(m.valuation["p"], 0b11);
        let (_, m) = canonical_valuation(&alg, &v(0), CanonicalKind::Int2Gc);
        assert_eq!(m.valuation["p"], 0);
        let (_, m) = canonical_valuation(&alg, &v(1), CanonicalKind::Int2Gc);
        assert_eq!(m.valuation["p"], 0b10);
    }

    #[test]
    fn both_characterizations_agree() {
        for alg in enumerate_h2gc(4, false).unwrap() {
            let r = canonical_relations(&alg);
            assert_eq!(r.r1, r.r1_alt);
            assert_eq!(r.r2, r.r2_alt);
        }
    }

    #[test]
    fn preimages_form_a_galois_connection() {
        // Over up-closed subsets of the carrier, not only prime filters.
        for alg in enumerate_h2gc(4, false).unwrap().step_by(7) {
            let n = alg.len();
            let ups: Vec<u64> = (0..1u64 << n)
                .filter(|&s| {
                    (0..n).all(|a| {
                        s >> a & 1 == 0 || (0..n).all(|b| !alg.leq(a, b) || s >> b & 1 == 1)
                    })
                })
                .collect();
            let pre = |op: &UnaryOp, s: u64| {
                (0..n)
                    .filter(|&a| s >> op.apply(a) & 1 == 1)
                    .fold(0u64, |t, a| t | 1 << a)
            };
            for &x in &ups {
                for &y in &ups {
                    let lhs = pre(&alg.hbox, x) & !y == 0;
                    let rhs = x & !pre(&alg.fdia, y) == 0;
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn key_lemma_on_small_algebras() {
        let formulas: Vec<Formula> = enumerate_formulas(&["p"], 2).collect();
        for alg in enumerate_h2gc(3, true).unwrap() {
            for a in alg.elements() {
                let v: AlgValuation = [("p".to_string(), a)].into();
                for kind in [CanonicalKind::Fs, CanonicalKind::Int2Gc] {
                    let r = key_lemma_check(&alg, &v, &formulas, kind);
                    assert!(r.passed(), "{:?}", r.failures.first());
                    assert_eq!(r.instances > 0, alg.len() > 1);
                }
            }
        }
        for alg in enumerate_h2gc(3, false).unwrap() {
            let cf = canonical_frame(&alg, CanonicalKind::Fs);
            assert_eq!(cf.not_fs, !alg.is_fs());
            let cf = canonical_frame(&alg, CanonicalKind::Int2Gc);
            assert_eq!(check_frame(&cf.frame), Ok(()));
        }
    }

    #[test]
    fn filter_extensions() {
        let chain = build_lattice(&["0", "u", "1"], &[("0", "u"), ("u", "1")]).unwrap();
        assert_eq!(prime_filter_extension(&chain, &[2], &[]), Some(vec![2]));
        let l = build_lattice(
            &["0", "a", "b", "c", "1"],
            &[("0", "a"), ("0", "b"), ("a", "c"), ("b", "c"), ("c", "1")],
        )
        .unwrap();
        let c = l.elem("c").unwrap();
        let got = prime_filter_extension(&l, &[c, l.top()], &[l.bottom()]).unwrap();
        assert_eq!(filter_name(&l, &got), "{a,c,1}");
        assert_eq!(
            prime_filter_extension(&l, &[c], &[l.elem("a").unwrap(), l.elem("b").unwrap()]),
            None
        );
    }
}
