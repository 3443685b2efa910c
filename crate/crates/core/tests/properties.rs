use std::sync::OnceLock;

use proptest::prelude::*;

use gclogic::alg_semantics::{eval, AlgValuation};
use gclogic::algebra::{enumerate_h2gc, H2GCAlgebra};
use gclogic::formula::{compose_substitutions, parse, print, Formula, Substitution};
use gclogic::io::{
    algebra_from_json, algebra_to_json, from_json, rough_from_json, rough_to_json, to_json,
    AlgebraJson, RoughDoc, RoughJson,
};
use gclogic::rough::random_context;

fn formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        4 => prop::sample::select(vec!["p", "q", "r"]).prop_map(Formula::var),
        1 => Just(Formula::Top),
        1 => Just(Formula::Bot),
    ];
    leaf.prop_recursive(5, 40, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            inner.clone().prop_map(Formula::dia_f),
            inner.clone().prop_map(Formula::box_g),
            inner.clone().prop_map(Formula::dia_p),
            inner.clone().prop_map(Formula::box_h),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::imp(a, b)),
        ]
    })
}

fn substitution() -> impl Strategy<Value = Substitution> {
    prop::collection::btree_map(
        prop::sample::select(vec!["p", "q", "r"]).prop_map(String::from),
        formula(),
        0..3,
    )
}

fn algebras() -> &'static [H2GCAlgebra] {
    static ALGS: OnceLock<Vec<H2GCAlgebra>> = OnceLock::new();
    ALGS.get_or_init(|| enumerate_h2gc(3, false).unwrap().collect())
}

fn algebra_and_valuation() -> impl Strategy<Value = (usize, AlgValuation)> {
    (0..algebras().len()).prop_flat_map(|i| {
        let n = algebras()[i].len();
        (Just(i), [0..n, 0..n, 0..n]).prop_map(|(i, [p, q, r])| {
            let v = [("p", p), ("q", q), ("r", r)]
                .into_iter()
                .map(|(k, e)| (k.to_string(), e))
                .collect();
            (i, v)
        })
    })
}

proptest! {
    #[test]
    fn print_parse_round_trip(f in formula()) {
        let text = print(&f);
        prop_assert_eq!(parse(&text).unwrap(), f);
    }

    #[test]
    fn substitution_composes(f in formula(), s1 in substitution(), s2 in substitution()) {
        let stepwise = f.substitute(&s1).substitute(&s2);
        prop_assert_eq!(f.substitute(&compose_substitutions(&s1, &s2)), stepwise);
    }

    #[test]
    fn compiled_matches_eval(f in formula(), (i, v) in algebra_and_valuation()) {
        let alg = &algebras()[i];
        let prog = f.compile();
        let vals: Vec<usize> = prog.vars.iter().map(|x| v[x.as_str()]).collect();
        let mut stack = Vec::new();
        prop_assert_eq!(prog.eval(alg, &vals, &mut stack), eval(&f, alg, &v).unwrap());
    }

    #[test]
    fn substitution_is_evaluation(f in formula(), s in substitution(), (i, v) in algebra_and_valuation()) {
        let alg = &algebras()[i];
        let mut w = v.clone();
        for (x, g) in &s {
            w.insert(x.clone(), eval(g, alg, &v).unwrap());
        }
        prop_assert_eq!(eval(&f.substitute(&s), alg, &v).unwrap(), eval(&f, alg, &w).unwrap());
    }

    #[test]
    fn algebra_json_round_trip(i in 0..algebras().len()) {
        let alg = &algebras()[i];
        let text = to_json(&algebra_to_json(alg));
        let doc: AlgebraJson = from_json(&text).unwrap();
        let back = algebra_from_json(&doc).unwrap().to_h2gc();
        prop_assert_eq!(&back, alg);
        prop_assert_eq!(to_json(&algebra_to_json(&back)), text);
    }

    #[test]
    fn rough_json_round_trip(seed in any::<u64>()) {
        let context = random_context(seed, 4, 4);
        let doc = RoughDoc { context, sets: Default::default() };
        let text = to_json(&rough_to_json(&doc));
        let json: RoughJson = from_json(&text).unwrap();
        prop_assert_eq!(rough_from_json(&json).unwrap(), doc);
    }

    #[test]
    fn rough_operators_monotone(seed in any::<u64>(), picks in prop::collection::vec(any::<prop::sample::Index>(), 2)) {
        let ctx = random_context(seed, 4, 3);
        let sets = ctx.all_sets();
        let a = &sets[picks[0].index(sets.len())];
        let b = ctx.join(a, &sets[picks[1].index(sets.len())]);
        prop_assert!(ctx.leq(&ctx.dia_f(a).unwrap(), &ctx.dia_f(&b).unwrap()));
        prop_assert!(ctx.leq(&ctx.box_h(a).unwrap(), &ctx.box_h(&b).unwrap()));
        prop_assert!(ctx.leq(&ctx.dia_p(a).unwrap(), &ctx.dia_p(&b).unwrap()));
        prop_assert!(ctx.leq(&ctx.box_g(a).unwrap(), &ctx.box_g(&b).unwrap()));
    }
}
