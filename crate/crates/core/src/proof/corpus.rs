//! The shipped derivations, generated from proof terms.
//!
//! Schematic facts are proved at variable level over `p`, `q`; derived
//! rules are scripts with premises.

use crate::formula::{parse, Formula};

use super::tactic::{Pf, Tactics};
use super::ProofScript;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusEntry {
    pub name: String,
    pub script: ProofScript,
}

fn f(s: &str) -> Formula {
    parse(s).expect("corpus formula")
}

/// One of the two adjoint pairs: `F -| H` or `P -| G`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Fh,
    Pg,
}

impl Side {
    fn flip(self) -> Side {
        match self {
            Side::Fh => Side::Pg,
            Side::Pg => Side::Fh,
        }
    }

    fn dia(self, a: Formula) -> Formula {
        match self {
            Side::Fh => Formula::dia_f(a),
            Side::Pg => Formula::dia_p(a),
        }
    }

    /// The right adjoint of `dia`.
    fn bx(self, a: Formula) -> Formula {
        match self {
            Side::Fh => Formula::box_h(a),
            Side::Pg => Formula::box_g(a),
        }
    }

    /// The box paired with `dia` in the Fischer Servi axioms.
    fn obox(self, a: Formula) -> Formula {
        self.flip().bx(a)
    }
}

impl Tactics {
    fn unit(&self, s: Side, a: &Formula) -> Pf {
        match s {
            Side::Fh => self.unit_fh(a),
            Side::Pg => self.unit_pg(a),
        }
    }

    fn counit(&self, s: Side, a: &Formula) -> Pf {
        match s {
            Side::Fh => self.counit_fh(a),
            Side::Pg => self.counit_pg(a),
        }
    }

    fn intro(&self, s: Side, t: &Pf) -> Pf {
        match s {
            Side::Fh => self.gc_fh_intro(t),
            Side::Pg => self.gc_pg_intro(t),
        }
    }

    fn elim(&self, s: Side, t: &Pf) -> Pf {
        match s {
            Side::Fh => self.gc_fh_elim(t),
            Side::Pg => self.gc_pg_elim(t),
        }
    }

    fn mono_dia(&self, s: Side, t: &Pf) -> Pf {
        match s {
            Side::Fh => self.mono_f(t),
            Side::Pg => self.mono_p(t),
        }
    }

    fn mono_box(&self, s: Side, t: &Pf) -> Pf {
        match s {
            Side::Fh => self.mono_h(t),
            Side::Pg => self.mono_g(t),
        }
    }

    fn nec_box(&self, s: Side, t: &Pf) -> Pf {
        match s {
            Side::Fh => self.nec_h(t),
            Side::Pg => self.nec_g(t),
        }
    }

    /// `A -> (B -> A & B)` with the conjuncts in either order.
    fn pair_lemma(&self, a: &Formula, b: &Formula, swap: bool) -> Pf {
        let (x, y) = (self.hyp(a), self.hyp(b));
        let body = if swap {
            self.and_intro(&y, &x)
        } else {
            self.and_intro(&x, &y)
        };
        self.lam(a, self.lam(b, body))
    }

    /// `(A -> B) & A -> B`
    fn mp_lemma(&self, a: &Formula, b: &Formula) -> Pf {
        let c = Formula::and(Formula::imp(a.clone(), b.clone()), a.clone());
        let z = self.hyp(&c);
        self.lam(&c, self.mp(&self.and_r(&z), &self.and_l(&z)))
    }

    /// Curry a closed `A & B -> C` into `A -> (B -> C)`.
    fn curry(&self, t: &Pf, a: &Formula, b: &Formula) -> Pf {
        let (x, y) = (self.hyp(a), self.hyp(b));
        self.lam(a, self.lam(b, self.mp(&self.and_intro(&x, &y), t)))
    }

    /// `box A & box B -> box (A & B)`
    fn box_meet(&self, s: Side, a: &Formula, b: &Formula) -> Pf {
        let (ba, bb) = (s.bx(a.clone()), s.bx(b.clone()));
        let d = s.dia(Formula::and(ba.clone(), bb.clone()));
        let left = self.syl(
            &self.mono_dia(s, &self.ax("A3", &[&ba, &bb])),
            &self.counit(s, a),
        );
        let right = self.syl(
            &self.mono_dia(s, &self.ax("A4", &[&ba, &bb])),
            &self.counit(s, b),
        );
        let y = self.hyp(&d);
        let body = self.and_intro(&self.mp(&y, &left), &self.mp(&y, &right));
        self.intro(s, &self.lam(&d, body))
    }

    /// `box (A & B) -> box A & box B`
    fn box_split(&self, s: Side, a: &Formula, b: &Formula) -> Pf {
        let c = s.bx(Formula::and(a.clone(), b.clone()));
        let x = self.hyp(&c);
        let l = self.mp(&x, &self.mono_box(s, &self.ax("A3", &[a, b])));
        let r = self.mp(&x, &self.mono_box(s, &self.ax("A4", &[a, b])));
        self.lam(&c, self.and_intro(&l, &r))
    }

    /// `dia (A | B) -> dia A | dia B`
    fn dia_split(&self, s: Side, a: &Formula, b: &Formula) -> Pf {
        let (da, db) = (s.dia(a.clone()), s.dia(b.clone()));
        let goal = s.bx(Formula::or(da.clone(), db.clone()));
        let lp = self.syl(
            &self.unit(s, a),
            &self.mono_box(s, &self.ax("A6", &[&da, &db])),
        );
        let lq = self.syl(
            &self.unit(s, b),
            &self.mono_box(s, &self.ax("A7", &[&da, &db])),
        );
        let a8 = self.ax("A8", &[a, b, &goal]);
        self.elim(s, &self.mp(&lq, &self.mp(&lp, &a8)))
    }

    /// `dia A | dia B -> dia (A | B)`
    fn dia_join(&self, s: Side, a: &Formula, b: &Formula) -> Pf {
        let (da, db) = (s.dia(a.clone()), s.dia(b.clone()));
        let goal = s.dia(Formula::or(a.clone(), b.clone()));
        let a8 = self.ax("A8", &[&da, &db, &goal]);
        let l = self.mono_dia(s, &self.ax("A6", &[a, b]));
        let r = self.mono_dia(s, &self.ax("A7", &[a, b]));
        self.mp(&r, &self.mp(&l, &a8))
    }

    /// `box (A -> B) -> (box A -> box B)`
    fn box_k(&self, s: Side, a: &Formula, b: &Formula) -> Pf {
        let ab = Formula::imp(a.clone(), b.clone());
        let meet = self.box_meet(s, &ab, a);
        let t = self.syl(&meet, &self.mono_box(s, &self.mp_lemma(a, b)));
        self.curry(&t, &s.bx(ab), &s.bx(a.clone()))
    }

    /// `dia bot -> bot`
    fn dia_bot(&self, s: Side) -> Pf {
        self.elim(s, &self.ax("BOT", &[&s.bx(Formula::Bot)]))
    }
}

/// Axiom names for the Fischer Servi schemas in a given system.
struct FsNames {
    /// `dia(A -> B) -> (obox A -> dia B)`, indexed by side.
    fs: [&'static str; 2],
    /// `(odia A -> box B) -> box(A -> B)`, indexed by side.
    conv: [&'static str; 2],
}

const FS_NAMES: FsNames = FsNames {
    fs: ["FS1", "FS2"],
    conv: ["FS4", "FS3"],
};
const EWALD_NAMES: FsNames = FsNames {
    fs: ["IK11", "IK11'"],
    conv: ["IK10'", "IK10"],
};

fn idx(s: Side) -> usize {
    match s {
        Side::Fh => 0,
        Side::Pg => 1,
    }
}

impl Tactics {
    /// `obox A & dia B -> dia (A & B)` from the FS axiom (Ewald's 6).
    fn box_dia_meet(&self, n: &FsNames, s: Side, a: &Formula, b: &Formula) -> Pf {
        let conj = Formula::and(a.clone(), b.clone());
        let fs = self.ax(n.fs[idx(s)], &[a, &conj]);
        let lemma = self.mono_dia(s, &self.pair_lemma(b, a, true));
        let c = Formula::and(s.obox(a.clone()), s.dia(b.clone()));
        let z = self.hyp(&c);
        let body = self.mp(
            &self.and_l(&z),
            &self.mp(&self.mp(&self.and_r(&z), &lemma), &fs),
        );
        self.lam(&c, body)
    }

    /// `dia A & obox B -> dia (A & B)` from the FS axiom.
    fn dunn_meet(&self, n: &FsNames, s: Side, a: &Formula, b: &Formula) -> Pf {
        let conj = Formula::and(a.clone(), b.clone());
        let fs = self.ax(n.fs[idx(s)], &[b, &conj]);
        let lemma = self.mono_dia(s, &self.ax("A5", &[a, b]));
        let c = Formula::and(s.dia(a.clone()), s.obox(b.clone()));
        let z = self.hyp(&c);
        let body = self.mp(
            &self.and_r(&z),
            &self.mp(&self.mp(&self.and_l(&z), &lemma), &fs),
        );
        self.lam(&c, body)
    }

    /// `obox (A -> B) -> (dia A -> dia B)` (Ewald's 5).
    fn box_dia_k(&self, n: &FsNames, s: Side, a: &Formula, b: &Formula) -> Pf {
        let ab = Formula::imp(a.clone(), b.clone());
        let meet = self.box_dia_meet(n, s, &ab, a);
        let t = self.syl(&meet, &self.mono_dia(s, &self.mp_lemma(a, b)));
        self.curry(&t, &s.obox(ab), &s.dia(a.clone()))
    }

    /// `obox ~A -> ~dia A` (Ewald's 7).
    fn box_not_dia(&self, n: &FsNames, s: Side, a: &Formula) -> Pf {
        let na = Formula::not(a.clone());
        let gna = s.obox(na);
        let da = s.dia(a.clone());
        let k = self.box_dia_k(n, s, a, &Formula::Bot);
        let to_imp = self.mono_box(s.flip(), &self.ax("A10", &[a, &Formula::Bot]));
        let (x, y) = (self.hyp(&gna), self.hyp(&da));
        let dbot = self.mp(&y, &self.mp(&self.mp(&x, &to_imp), &k));
        let refute = self.lam(&da, self.mp(&dbot, &self.dia_bot(s)));
        self.lam(&gna, self.neg_intro(&refute))
    }

    /// From the FS axiom on `s`, its converse partner
    /// `(odia p -> box q) -> box(p -> q)`.
    fn fs_to_conv(&self, n: &FsNames, s: Side, p: &Formula, q: &Formula) -> Pf {
        let (a, b) = (s.flip().dia(p.clone()), s.bx(q.clone()));
        let fs = self.ax(n.fs[idx(s)], &[&a, &b]);
        let h = s.dia(Formula::imp(a.clone(), b.clone()));
        let (x, y) = (self.hyp(&h), self.hyp(p));
        let oa = self.mp(&y, &self.unit(s.flip(), p));
        let dq = self.mp(&oa, &self.mp(&x, &fs));
        let body = self.mp(&dq, &self.counit(s, q));
        self.intro(s, &self.lam(&h, self.lam(p, body)))
    }

    /// From the converse axiom on `s`, the FS axiom
    /// `dia(p -> q) -> (obox p -> dia q)`.
    fn conv_to_fs(&self, n: &FsNames, s: Side, p: &Formula, q: &Formula) -> Pf {
        let (a, b) = (s.obox(p.clone()), s.dia(q.clone()));
        let conv = self.ax(n.conv[idx(s)], &[&a, &b]);
        let pq = Formula::imp(p.clone(), q.clone());
        let oda = s.flip().dia(a.clone());
        let (x, y) = (self.hyp(&pq), self.hyp(&oda));
        let body = self.mp(
            &self.mp(&self.mp(&y, &self.counit(s.flip(), p)), &x),
            &self.unit(s, q),
        );
        let lemma = self.lam(&pq, self.lam(&oda, body));
        self.elim(s, &self.syl(&lemma, &conv))
    }

    /// `dia(p -> q) -> (obox p -> dia q)` from the Dunn axiom.
    fn dunn_to_fs(&self, s: Side, p: &Formula, q: &Formula) -> Pf {
        let pq = Formula::imp(p.clone(), q.clone());
        let d = self.ax(["D1", "D2"][idx(s)], &[&pq, p]);
        let t = self.syl(&d, &self.mono_dia(s, &self.mp_lemma(p, q)));
        self.curry(&t, &s.dia(pq.clone()), &s.obox(p.clone()))
    }
}

fn entry(system: &str, name: &str, build: impl FnOnce(&mut Tactics) -> Pf) -> CorpusEntry {
    let mut t = Tactics::new(system);
    let pf = build(&mut t);
    CorpusEntry {
        name: name.to_string(),
        script: t.script(name, &pf),
    }
}

fn both(t: &Tactics, l: Pf, r: Pf) -> Pf {
    t.and_intro(&l, &r)
}

fn gc_family(out: &mut Vec<CorpusEntry>) {
    let (p, q) = (f("p"), f("q"));
    for (s, tag) in [(Side::Fh, "gc"), (Side::Pg, "gcstar")] {
        let sys = "Int2GC";
        out.push(entry(sys, &format!("{tag}1-unit"), |t| t.unit(s, &p)));
        out.push(entry(sys, &format!("{tag}1-counit"), |t| t.counit(s, &p)));
        out.push(entry(sys, &format!("{tag}2-dia"), |t| {
            both(
                t,
                t.mono_dia(s, &t.unit(s, &p)),
                t.counit(s, &s.dia(p.clone())),
            )
        }));
        out.push(entry(sys, &format!("{tag}2-box"), |t| {
            both(
                t,
                t.unit(s, &s.bx(p.clone())),
                t.mono_box(s, &t.counit(s, &p)),
            )
        }));
        out.push(entry(sys, &format!("{tag}3-box-top"), |t| {
            t.nec_box(s, &t.top())
        }));
        out.push(entry(sys, &format!("{tag}3-not-dia-bot"), |t| {
            t.neg_intro(&t.dia_bot(s))
        }));
        out.push(entry(sys, &format!("{tag}4-box-and"), |t| {
            both(t, t.box_split(s, &p, &q), t.box_meet(s, &p, &q))
        }));
        out.push(entry(sys, &format!("{tag}4-dia-or"), |t| {
            both(t, t.dia_split(s, &p, &q), t.dia_join(s, &p, &q))
        }));
        out.push(entry(sys, &format!("{tag}5"), |t| t.box_k(s, &p, &q)));
    }
}

fn admissibility(out: &mut Vec<CorpusEntry>) {
    let sys = "Int2GC";
    out.push(entry(sys, "adm-RG", |t| {
        let a = t.premise(f("p"));
        t.nec_g(&a)
    }));
    out.push(entry(sys, "adm-RH", |t| {
        let a = t.premise(f("p"));
        t.nec_h(&a)
    }));
    out.push(entry(sys, "adm-RMF", |t| {
        let a = t.premise(f("p -> q"));
        t.mono_f(&a)
    }));
    out.push(entry(sys, "adm-RMP", |t| {
        let a = t.premise(f("p -> q"));
        t.mono_p(&a)
    }));
    out.push(entry(sys, "adm-RMG", |t| {
        let a = t.premise(f("p -> q"));
        t.mono_g(&a)
    }));
    out.push(entry(sys, "adm-RMH", |t| {
        let a = t.premise(f("p -> q"));
        t.mono_h(&a)
    }));
}

fn prop_2_1(out: &mut Vec<CorpusEntry>) {
    let (p, q) = (f("p"), f("q"));
    let n = &FS_NAMES;
    out.push(entry("Int2GC+{FS1}", "fs1-implies-fs4", |t| {
        t.fs_to_conv(n, Side::Fh, &p, &q)
    }));
    out.push(entry("Int2GC+{FS4}", "fs4-implies-fs1", |t| {
        t.conv_to_fs(n, Side::Fh, &p, &q)
    }));
    out.push(entry("Int2GC+{FS2}", "fs2-implies-fs3", |t| {
        t.fs_to_conv(n, Side::Pg, &p, &q)
    }));
    out.push(entry("Int2GC+{FS3}", "fs3-implies-fs2", |t| {
        t.conv_to_fs(n, Side::Pg, &p, &q)
    }));
}

/// Ewald's axioms 2..11' (tense numbering) as variable-level theorems.
const EWALD_NUMBERS: [&str; 20] = [
    "2", "2'", "3", "3'", "4", "4'", "5", "5'", "6", "6'", "7", "7'", "8", "8'", "9", "9'", "10",
    "10'", "11", "11'",
];

/// Ewald's axiom `num` (tense numbering, 2 to 11') over `p`, `q`.
fn ewald_axiom(t: &Tactics, n: &FsNames, num: &str) -> Pf {
    let (p, q) = (&f("p"), &f("q"));
    // Primed axioms live on the P/H side.
    let s = if num.ends_with('\'') {
        Side::Pg
    } else {
        Side::Fh
    };
    // G is the box of the P/G pair and H the box of the F/H pair.
    let gs = s.flip();
    match num.trim_end_matches('\'') {
        "2" => t.box_k(gs, p, q),
        "3" => both(t, t.box_split(gs, p, q), t.box_meet(gs, p, q)),
        "4" => both(t, t.dia_split(s, p, q), t.dia_join(s, p, q)),
        "5" => t.box_dia_k(n, s, p, q),
        "6" => t.box_dia_meet(n, s, p, q),
        "7" => t.box_not_dia(n, s, p),
        "8" => t.counit(s, p),
        "9" => t.unit(s, p),
        // 10 pairs F with G, so it is the converse on the other side.
        "10" => t.fs_to_conv(n, s.flip(), p, q),
        "11" => t.ax(n.fs[idx(s)], &[p, q]),
        other => panic!("no axiom {other}"),
    }
}

fn ewald_axioms(prefix: &str, sys: &str, n: &FsNames, only: Option<&[&str]>) -> Vec<CorpusEntry> {
    EWALD_NUMBERS
        .iter()
        .filter(|num| only.is_none_or(|o| o.contains(num)))
        .map(|num| {
            let name = format!("{prefix}-axiom{}", num.replace('\'', "-prime"));
            entry(sys, &name, |t| ewald_axiom(t, n, num))
        })
        .collect()
}

fn gc_admissible(prefix: &str, sys: &str, out: &mut Vec<CorpusEntry>) {
    // FH: A -> H B / F A -> B, and the other three.
    out.push(entry(sys, &format!("{prefix}-gc-admissible-FH"), |t| {
        let a = t.premise(f("p -> H q"));
        t.gc_fh_elim(&a)
    }));
    out.push(entry(sys, &format!("{prefix}-gc-admissible-HF"), |t| {
        let a = t.premise(f("F p -> q"));
        t.gc_fh_intro(&a)
    }));
    out.push(entry(sys, &format!("{prefix}-gc-admissible-PG"), |t| {
        let a = t.premise(f("p -> G q"));
        t.gc_pg_elim(&a)
    }));
    out.push(entry(sys, &format!("{prefix}-gc-admissible-GP"), |t| {
        let a = t.premise(f("P p -> q"));
        t.gc_pg_intro(&a)
    }));
}

fn dunn(out: &mut Vec<CorpusEntry>) {
    let (p, q) = (f("p"), f("q"));
    out.push(entry("Int2GC+FS", "d1-from-fs1", |t| {
        t.dunn_meet(&FS_NAMES, Side::Fh, &p, &q)
    }));
    out.push(entry("Int2GC+FS", "d2-from-fs2", |t| {
        t.dunn_meet(&FS_NAMES, Side::Pg, &p, &q)
    }));
    out.push(entry("Int2GC+FS-alt-D", "fs1-from-d1", |t| {
        t.dunn_to_fs(Side::Fh, &p, &q)
    }));
    out.push(entry("Int2GC+FS-alt-D", "fs2-from-d2", |t| {
        t.dunn_to_fs(Side::Pg, &p, &q)
    }));
}

/// Every shipped script, in a fixed order.
pub fn script_corpus() -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    gc_family(&mut out);
    admissibility(&mut out);
    prop_2_1(&mut out);
    out.extend(ewald_axioms("ikt", "Int2GC+FS", &FS_NAMES, None));
    gc_admissible("ikt", "IKt-Ewald", &mut out);
    let omitted = ["3", "3'", "4", "4'", "6", "6'", "7", "7'", "10", "10'"];
    out.extend(ewald_axioms(
        "reduced",
        "IKt-reduced",
        &EWALD_NAMES,
        Some(&omitted),
    ));
    gc_admissible("reduced", "IKt-reduced", &mut out);
    gc_admissible("tense", "Int2GC-tense", &mut out);
    dunn(&mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proof::check_proof;

    fn conclusion(name: &str) -> Formula {
        let e = script_corpus()
            .into_iter()
            .find(|e| e.name == name)
            .unwrap();
        check_proof(&e.script).unwrap().conclusion().clone()
    }

    #[test]
    fn every_entry_checks() {
        let corpus = script_corpus();
        let mut names = std::collections::BTreeSet::new();
        for e in &corpus {
            assert!(names.insert(e.name.clone()), "duplicate {}", e.name);
            if let Err(err) = check_proof(&e.script) {
                panic!("{}: {err}", e.name);
            }
        }
    }

    #[test]
    fn conclusions_are_the_intended_formulas() {
        assert_eq!(conclusion("gc1-unit"), f("p -> H F p"));
        assert_eq!(conclusion("gcstar1-counit"), f("P G p -> p"));
        assert_eq!(conclusion("gc2-dia"), f("F p <-> F H F p"));
        assert_eq!(conclusion("gc3-not-dia-bot"), f("~F bot"));
        assert_eq!(conclusion("gcstar3-box-top"), f("G top"));
        assert_eq!(conclusion("gc4-box-and"), f("H(p & q) <-> H p & H q"));
        assert_eq!(conclusion("gcstar4-dia-or"), f("P(p | q) <-> P p | P q"));
        assert_eq!(conclusion("gc5"), f("H(p -> q) -> (H p -> H q)"));
        assert_eq!(
            conclusion("fs1-implies-fs4"),
            f("(P p -> H q) -> H(p -> q)")
        );
        assert_eq!(
            conclusion("fs4-implies-fs1"),
            f("F(p -> q) -> (G p -> F q)")
        );
        assert_eq!(
            conclusion("fs2-implies-fs3"),
            f("(F p -> G q) -> G(p -> q)")
        );
        assert_eq!(
            conclusion("fs3-implies-fs2"),
            f("P(p -> q) -> (H p -> P q)")
        );
        assert_eq!(conclusion("ikt-axiom5"), f("G(p -> q) -> (F p -> F q)"));
        assert_eq!(conclusion("ikt-axiom6"), f("G p & F q -> F(p & q)"));
        assert_eq!(conclusion("ikt-axiom6-prime"), f("H p & P q -> P(p & q)"));
        assert_eq!(conclusion("ikt-axiom7"), f("G ~p -> ~F p"));
        assert_eq!(conclusion("ikt-axiom10"), f("(F p -> G q) -> G(p -> q)"));
        assert_eq!(
            conclusion("reduced-axiom10-prime"),
            f("(P p -> H q) -> H(p -> q)")
        );
        assert_eq!(conclusion("ikt-gc-admissible-FH"), f("F p -> q"));
        assert_eq!(conclusion("d1-from-fs1"), f("F p & G q -> F(p & q)"));
        assert_eq!(conclusion("fs2-from-d2"), f("P(p -> q) -> (H p -> P q)"));
        assert_eq!(conclusion("adm-RG"), f("G p"));
    }

    #[test]
    fn ewald_conclusions_match_the_schemas() {
        use crate::alg_semantics::instantiate_fresh;
        use crate::formula::Formula as Fm;
        let ewald = crate::proof::builtin_system("IKt-Ewald").unwrap();
        let rename = |g: &Fm| {
            let s = [("a".to_string(), f("p")), ("b".to_string(), f("q"))].into();
            g.substitute(&s)
        };
        for e in script_corpus() {
            let Some(num) = e.name.strip_prefix("ikt-axiom") else {
                continue;
            };
            let ax = format!("IK{}", num.replace("-prime", "'"));
            let want = rename(&instantiate_fresh(ewald.axiom(&ax).unwrap()));
            assert_eq!(
                check_proof(&e.script).unwrap().conclusion(),
                &want,
                "{}",
                e.name
            );
        }
    }

    #[test]
    fn premise_scripts_declare_their_premises() {
        for e in script_corpus() {
            let is_rule = e.name.starts_with("adm-") || e.name.contains("gc-admissible");
            assert_eq!(!e.script.premises.is_empty(), is_rule, "{}", e.name);
        }
    }
}
