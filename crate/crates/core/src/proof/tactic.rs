//! Proof terms with hypotheses, compiled to Hilbert lines by bracket
//! abstraction over `A1`/`A2`.
//!
//! Terms are built by corpus code and are not trusted: the compiled script
//! is what gets checked.

use std::collections::{BTreeSet, HashMap};
use std::rc::Rc;

use crate::formula::{print, Formula};

use super::{
    builtin_system, instantiate, Binding, Justification, ProofScript, ProofSystem, Rule, ScriptLine,
};

#[derive(Debug, Clone)]
pub struct Pf(Rc<Node>);

#[derive(Debug)]
struct Node {
    concl: Formula,
    hyps: BTreeSet<Formula>,
    kind: Kind,
}

#[derive(Debug)]
enum Kind {
    Axiom(String),
    Hyp,
    Premise(usize),
    Mp(Pf, Pf),
    Rule(Rule, Pf),
    Lam(Formula, Pf),
}

impl Pf {
    pub fn concl(&self) -> &Formula {
        &self.0.concl
    }

    fn new(concl: Formula, hyps: BTreeSet<Formula>, kind: Kind) -> Pf {
        Pf(Rc::new(Node { concl, hyps, kind }))
    }

    fn is_closed(&self) -> bool {
        self.0.hyps.is_empty()
    }
}

/// Term builder for one proof system.
pub struct Tactics {
    pub sys: ProofSystem,
    premises: Vec<Formula>,
}

impl Tactics {
    pub fn new(system: &str) -> Tactics {
        Tactics {
            sys: builtin_system(system).expect("builtin system"),
            premises: Vec::new(),
        }
    }

    pub fn premise(&mut self, f: Formula) -> Pf {
        let k = match self.premises.iter().position(|p| *p == f) {
            Some(k) => k,
            None => {
                self.premises.push(f.clone());
                self.premises.len() - 1
            }
        };
        Pf::new(f, BTreeSet::new(), Kind::Premise(k + 1))
    }

    /// Axiom instance; `args` binds `A`, `B`, `C` in order.
    pub fn ax(&self, name: &str, args: &[&Formula]) -> Pf {
        let schema = self
            .sys
            .axiom(name)
            .unwrap_or_else(|| panic!("{} has no axiom {name}", self.sys.name()));
        let b: Binding = ["A", "B", "C"]
            .iter()
            .zip(args)
            .map(|(m, f)| (m.to_string(), (*f).clone()))
            .collect();
        Pf::new(
            instantiate(schema, &b),
            BTreeSet::new(),
            Kind::Axiom(name.to_string()),
        )
    }

    pub fn hyp(&self, f: &Formula) -> Pf {
        Pf::new(f.clone(), [f.clone()].into(), Kind::Hyp)
    }

    /// From `a : A` and `ab : A -> B`, conclude `B`.
    pub fn mp(&self, a: &Pf, ab: &Pf) -> Pf {
        let c = match ab.concl() {
            Formula::Imp(x, y) if **x == *a.concl() => (**y).clone(),
            other => panic!(
                "mp: `{}` does not start with `{}`",
                print(other),
                print(a.concl())
            ),
        };
        let hyps = a.0.hyps.union(&ab.0.hyps).cloned().collect();
        Pf::new(c, hyps, Kind::Mp(a.clone(), ab.clone()))
    }

    /// Discharge hypothesis `a`.
    pub fn lam(&self, a: &Formula, body: Pf) -> Pf {
        let mut hyps = body.0.hyps.clone();
        hyps.remove(a);
        Pf::new(
            Formula::imp(a.clone(), body.concl().clone()),
            hyps,
            Kind::Lam(a.clone(), body),
        )
    }

    /// A primitive one-premise rule. The premise must be hypothesis-free.
    pub fn rule(&self, r: Rule, t: &Pf) -> Pf {
        assert!(self.sys.has_rule(r), "{} has no rule {r}", self.sys.name());
        assert!(t.is_closed(), "{r} applied under hypotheses");
        let c = r
            .apply(t.concl())
            .unwrap_or_else(|| panic!("{r} does not apply to `{}`", print(t.concl())));
        Pf::new(c, BTreeSet::new(), Kind::Rule(r, t.clone()))
    }

    // -- propositional helpers ------------------------------------------

    pub fn refl(&self, a: &Formula) -> Pf {
        let x = self.hyp(a);
        self.lam(a, x)
    }

    /// From `A -> B` and `B -> C`, conclude `A -> C`.
    pub fn syl(&self, ab: &Pf, bc: &Pf) -> Pf {
        let a = antecedent(ab.concl());
        let x = self.hyp(&a);
        let b = self.mp(&x, ab);
        let c = self.mp(&b, bc);
        self.lam(&a, c)
    }

    pub fn and_intro(&self, a: &Pf, b: &Pf) -> Pf {
        let ax = self.ax("A5", &[a.concl(), b.concl()]);
        self.mp(b, &self.mp(a, &ax))
    }

    pub fn and_l(&self, t: &Pf) -> Pf {
        let (a, b) = split_and(t.concl());
        self.mp(t, &self.ax("A3", &[&a, &b]))
    }

    pub fn and_r(&self, t: &Pf) -> Pf {
        let (a, b) = split_and(t.concl());
        self.mp(t, &self.ax("A4", &[&a, &b]))
    }

    pub fn or_inl(&self, t: &Pf, b: &Formula) -> Pf {
        self.mp(t, &self.ax("A6", &[t.concl(), b]))
    }

    pub fn or_inr(&self, a: &Formula, t: &Pf) -> Pf {
        self.mp(t, &self.ax("A7", &[a, t.concl()]))
    }

    /// From `A | B`, `A -> C` and `B -> C`, conclude `C`.
    pub fn or_elim(&self, t: &Pf, ac: &Pf, bc: &Pf) -> Pf {
        let (a, b) = split_or(t.concl());
        let c = consequent(ac.concl());
        let ax = self.ax("A8", &[&a, &b, &c]);
        self.mp(t, &self.mp(bc, &self.mp(ac, &ax)))
    }

    /// `bot -> bot`, then `top`.
    pub fn top(&self) -> Pf {
        let bb = self.ax("BOT", &[&Formula::Bot]);
        self.mp(&bb, &self.ax("TOP", &[bb.concl()]))
    }

    /// `~bot`.
    pub fn not_bot(&self) -> Pf {
        let bb = self.ax("BOT", &[&Formula::Bot]);
        let bnb = self.ax("BOT", &[&Formula::not(Formula::Bot)]);
        let a9 = self.ax("A9", &[&Formula::Bot, &Formula::Bot]);
        self.mp(&bnb, &self.mp(&bb, &a9))
    }

    /// From `A -> bot`, conclude `~A`.
    pub fn neg_intro(&self, t: &Pf) -> Pf {
        let a = antecedent(t.concl());
        let nb = self.not_bot();
        let a_nb = self.mp(&nb, &self.ax("A1", &[nb.concl(), &a]));
        let a9 = self.ax("A9", &[&a, &Formula::Bot]);
        self.mp(&a_nb, &self.mp(t, &a9))
    }

    /// From `~A`, conclude `A -> bot`.
    pub fn neg_elim(&self, t: &Pf) -> Pf {
        let a = match t.concl() {
            Formula::Not(a) => (**a).clone(),
            other => panic!("neg_elim on `{}`", print(other)),
        };
        self.mp(t, &self.ax("A10", &[&a, &Formula::Bot]))
    }

    /// `A -> B` from `B` (weakening).
    pub fn weaken(&self, a: &Formula, b: &Pf) -> Pf {
        self.mp(b, &self.ax("A1", &[b.concl(), a]))
    }

    // -- compilation -----------------------------------------------------

    /// Compile a closed term to a checked-format script ending in its
    /// conclusion.
    pub fn script(&self, name: &str, t: &Pf) -> ProofScript {
        assert!(
            t.is_closed(),
            "open hypotheses: {:?}",
            t.0.hyps.iter().map(print).collect::<Vec<_>>()
        );
        let mut c = Compiler {
            tac: self,
            lines: Vec::new(),
            index: HashMap::new(),
            abs: HashMap::new(),
        };
        let last = c.emit(t);
        // Make sure the conclusion is the final line.
        if last + 1 != c.lines.len() {
            let ab = Formula::imp(t.concl().clone(), t.concl().clone());
            let refl = c.emit(&self.refl(t.concl()));
            debug_assert_eq!(c.lines[refl].0, ab);
            c.push_fresh(
                t.concl().clone(),
                Justification::Mp {
                    i: last + 1,
                    j: refl + 1,
                },
            );
        }
        let used: Vec<String> = self.premises.iter().map(print).collect();
        ProofScript {
            name: Some(name.to_string()),
            system: self.sys.name().to_string(),
            premises: used,
            lines: c
                .lines
                .into_iter()
                .map(|(f, just)| ScriptLine { f: print(&f), just })
                .collect(),
        }
    }
}

fn antecedent(f: &Formula) -> Formula {
    match f {
        Formula::Imp(a, _) => (**a).clone(),
        other => panic!("not an implication: `{}`", print(other)),
    }
}

fn consequent(f: &Formula) -> Formula {
    match f {
        Formula::Imp(_, b) => (**b).clone(),
        other => panic!("not an implication: `{}`", print(other)),
    }
}

fn split_and(f: &Formula) -> (Formula, Formula) {
    match f {
        Formula::And(a, b) => ((**a).clone(), (**b).clone()),
        other => panic!("not a conjunction: `{}`", print(other)),
    }
}

fn split_or(f: &Formula) -> (Formula, Formula) {
    match f {
        Formula::Or(a, b) => ((**a).clone(), (**b).clone()),
        other => panic!("not a disjunction: `{}`", print(other)),
    }
}

struct Compiler<'a> {
    tac: &'a Tactics,
    lines: Vec<(Formula, Justification)>,
    index: HashMap<Formula, usize>,
    // The key pointer stays valid because the value keeps its term alive.
    abs: HashMap<(Formula, *const Node), (Pf, Pf)>,
}

impl Compiler<'_> {
    fn push_fresh(&mut self, f: Formula, j: Justification) -> usize {
        self.lines.push((f.clone(), j));
        let at = self.lines.len() - 1;
        self.index.entry(f).or_insert(at);
        at
    }

    /// Emit lines for a closed term, returning the 0-based line of its conclusion.
    fn emit(&mut self, t: &Pf) -> usize {
        if let Some(&at) = self.index.get(t.concl()) {
            return at;
        }
        let just = match &t.0.kind {
            Kind::Axiom(name) => Justification::Axiom { name: name.clone() },
            Kind::Premise(k) => Justification::Premise { k: *k },
            Kind::Hyp => panic!("free hypothesis `{}`", print(t.concl())),
            Kind::Mp(a, ab) => {
                // Axiom implications go after their antecedent, derived
                // ones before it.
                let (i, j) = if matches!(ab.0.kind, Kind::Axiom(_)) {
                    let i = self.emit(a);
                    (i, self.emit(ab))
                } else {
                    let j = self.emit(ab);
                    (self.emit(a), j)
                };
                Justification::Mp { i: i + 1, j: j + 1 }
            }
            Kind::Rule(r, p) => {
                let i = self.emit(p);
                Justification::Rule {
                    name: r.name().to_string(),
                    i: i + 1,
                }
            }
            Kind::Lam(a, body) => {
                let flat = self.abstract_hyp(a, body);
                return self.emit(&flat);
            }
        };
        self.push_fresh(t.concl().clone(), just)
    }

    /// A term for `a -> concl(t)` in which `a` is no longer a hypothesis.
    fn abstract_hyp(&mut self, a: &Formula, t: &Pf) -> Pf {
        let key = (a.clone(), Rc::as_ptr(&t.0));
        if let Some((_, p)) = self.abs.get(&key) {
            return p.clone();
        }
        let tac = self.tac;
        let out = if !t.0.hyps.contains(a) {
            let t = self.eliminate_lams(t);
            tac.weaken(a, &t)
        } else {
            match &t.0.kind {
                Kind::Hyp => {
                    // a -> ((a -> a) -> a), a2, mp, a -> (a -> a), mp
                    let aa = Formula::imp(a.clone(), a.clone());
                    let k1 = tac.ax("A1", &[a, &aa]);
                    let k2 = tac.ax("A2", &[a, &aa, a]);
                    let s = tac.mp(&k1, &k2);
                    let k3 = tac.ax("A1", &[a, a]);
                    tac.mp(&k3, &s)
                }
                Kind::Mp(x, xy) => {
                    let ax_ = self.abstract_hyp(a, x);
                    let axy = self.abstract_hyp(a, xy);
                    let (xf, yf) = (x.concl().clone(), consequent(xy.concl()));
                    let k2 = tac.ax("A2", &[a, &xf, &yf]);
                    tac.mp(&ax_, &tac.mp(&axy, &k2))
                }
                Kind::Lam(b, body) => {
                    let inner = self.abstract_hyp(b, body);
                    self.abstract_hyp(a, &inner)
                }
                Kind::Rule(..) | Kind::Axiom(_) | Kind::Premise(_) => unreachable!("closed term"),
            }
        };
        self.abs.insert(key, (t.clone(), out.clone()));
        out
    }

    /// Replace nested `Lam` nodes in a term with no free occurrence of the
    /// abstracted hypothesis. Closed subterms are left alone; `emit`
    /// handles them.
    fn eliminate_lams(&mut self, t: &Pf) -> Pf {
        if t.is_closed() {
            return t.clone();
        }
        let tac = self.tac;
        match &t.0.kind {
            Kind::Hyp => t.clone(),
            Kind::Mp(x, xy) => {
                let (x, xy) = (self.eliminate_lams(x), self.eliminate_lams(xy));
                tac.mp(&x, &xy)
            }
            Kind::Lam(b, body) => self.abstract_hyp(b, body),
            Kind::Rule(..) | Kind::Axiom(_) | Kind::Premise(_) => unreachable!("closed term"),
        }
    }
}

/// How a system realises monotonicity, necessitation and the Galois
/// rules. Each backend derives the missing ones from what the system has.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    /// The four GC rules are primitive.
    Galois,
    /// `RG`, `RH` with axioms 2, 2', 5, 5', 8, 8', 9, 9'.
    Ewald,
    /// `RG`, `RH`, `RMF`, `RMP` with axioms 2, 2', 8, 8', 9, 9'.
    Tense,
}

impl Tactics {
    pub fn backend(&self) -> Backend {
        if self.sys.has_rule(Rule::GcFhIntro) {
            Backend::Galois
        } else if self.sys.has_rule(Rule::Rmf) {
            Backend::Tense
        } else {
            Backend::Ewald
        }
    }

    pub fn gc_fh_intro(&self, t: &Pf) -> Pf {
        match self.backend() {
            Backend::Galois => self.rule(Rule::GcFhIntro, t),
            _ => {
                // F A -> B gives H F A -> H B; compose with A -> H F A.
                let a = match antecedent(t.concl()) {
                    Formula::DiaF(a) => *a,
                    other => panic!("gc_fh_intro on `{}`", print(&other)),
                };
                self.syl(&self.ax("IK9", &[&a]), &self.mono_h(t))
            }
        }
    }

    pub fn gc_fh_elim(&self, t: &Pf) -> Pf {
        match self.backend() {
            Backend::Galois => self.rule(Rule::GcFhElim, t),
            _ => {
                let b = match consequent(t.concl()) {
                    Formula::BoxH(b) => *b,
                    other => panic!("gc_fh_elim on `{}`", print(&other)),
                };
                self.syl(&self.mono_f(t), &self.ax("IK8", &[&b]))
            }
        }
    }

    pub fn gc_pg_intro(&self, t: &Pf) -> Pf {
        match self.backend() {
            Backend::Galois => self.rule(Rule::GcPgIntro, t),
            _ => {
                let a = match antecedent(t.concl()) {
                    Formula::DiaP(a) => *a,
                    other => panic!("gc_pg_intro on `{}`", print(&other)),
                };
                self.syl(&self.ax("IK9'", &[&a]), &self.mono_g(t))
            }
        }
    }

    pub fn gc_pg_elim(&self, t: &Pf) -> Pf {
        match self.backend() {
            Backend::Galois => self.rule(Rule::GcPgElim, t),
            _ => {
                let b = match consequent(t.concl()) {
                    Formula::BoxG(b) => *b,
                    other => panic!("gc_pg_elim on `{}`", print(&other)),
                };
                self.syl(&self.mono_p(t), &self.ax("IK8'", &[&b]))
            }
        }
    }

    /// `A -> H F A`.
    pub fn unit_fh(&self, a: &Formula) -> Pf {
        match self.backend() {
            Backend::Galois => self.gc_fh_intro(&self.refl(&Formula::dia_f(a.clone()))),
            _ => self.ax("IK9", &[a]),
        }
    }

    /// `F H A -> A`.
    pub fn counit_fh(&self, a: &Formula) -> Pf {
        match self.backend() {
            Backend::Galois => self.gc_fh_elim(&self.refl(&Formula::box_h(a.clone()))),
            _ => self.ax("IK8", &[a]),
        }
    }

    /// `A -> G P A`.
    pub fn unit_pg(&self, a: &Formula) -> Pf {
        match self.backend() {
            Backend::Galois => self.gc_pg_intro(&self.refl(&Formula::dia_p(a.clone()))),
            _ => self.ax("IK9'", &[a]),
        }
    }

    /// `P G A -> A`.
    pub fn counit_pg(&self, a: &Formula) -> Pf {
        match self.backend() {
            Backend::Galois => self.gc_pg_elim(&self.refl(&Formula::box_g(a.clone()))),
            _ => self.ax("IK8'", &[a]),
        }
    }

    /// From `A -> B`, conclude `F A -> F B`.
    pub fn mono_f(&self, t: &Pf) -> Pf {
        match self.backend() {
            Backend::Galois => {
                let b = consequent(t.concl());
                self.gc_fh_elim(&self.syl(t, &self.unit_fh(&b)))
            }
            Backend::Tense => self.rule(Rule::Rmf, t),
            Backend::Ewald => {
                let (a, b) = (antecedent(t.concl()), consequent(t.concl()));
                self.mp(&self.rule(Rule::Rg, t), &self.ax("IK5", &[&a, &b]))
            }
        }
    }

    /// From `A -> B`, conclude `P A -> P B`.
    pub fn mono_p(&self, t: &Pf) -> Pf {
        match self.backend() {
            Backend::Galois => {
                let b = consequent(t.concl());
                self.gc_pg_elim(&self.syl(t, &self.unit_pg(&b)))
            }
            Backend::Tense => self.rule(Rule::Rmp, t),
            Backend::Ewald => {
                let (a, b) = (antecedent(t.concl()), consequent(t.concl()));
                self.mp(&self.rule(Rule::Rh, t), &self.ax("IK5'", &[&a, &b]))
            }
        }
    }

    /// From `A -> B`, conclude `H A -> H B`.
    pub fn mono_h(&self, t: &Pf) -> Pf {
        match self.backend() {
            Backend::Galois => {
                let a = antecedent(t.concl());
                self.gc_fh_intro(&self.syl(&self.counit_fh(&a), t))
            }
            _ => {
                let (a, b) = (antecedent(t.concl()), consequent(t.concl()));
                self.mp(&self.rule(Rule::Rh, t), &self.ax("IK2'", &[&a, &b]))
            }
        }
    }

    /// From `A -> B`, conclude `G A -> G B`.
    pub fn mono_g(&self, t: &Pf) -> Pf {
        match self.backend() {
            Backend::Galois => {
                let a = antecedent(t.concl());
                self.gc_pg_intro(&self.syl(&self.counit_pg(&a), t))
            }
            _ => {
                let (a, b) = (antecedent(t.concl()), consequent(t.concl()));
                self.mp(&self.rule(Rule::Rg, t), &self.ax("IK2", &[&a, &b]))
            }
        }
    }

    /// From `A`, conclude `G A`.
    pub fn nec_g(&self, t: &Pf) -> Pf {
        match self.backend() {
            Backend::Galois => {
                let top = self.top();
                let pt = Formula::dia_p(Formula::Top);
                self.mp(&top, &self.gc_pg_intro(&self.weaken(&pt, t)))
            }
            _ => self.rule(Rule::Rg, t),
        }
    }

    /// From `A`, conclude `H A`.
    pub fn nec_h(&self, t: &Pf) -> Pf {
        match self.backend() {
            Backend::Galois => {
                let top = self.top();
                let ft = Formula::dia_f(Formula::Top);
                self.mp(&top, &self.gc_fh_intro(&self.weaken(&ft, t)))
            }
            _ => self.rule(Rule::Rh, t),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::proof::check_proof;

    #[test]
    fn refl_then_rule_is_the_six_line_script() {
        let t = Tactics::new("Int2GC");
        let fp = parse("F p").unwrap();
        let s = t.script("unit", &t.gc_fh_intro(&t.refl(&fp)));
        assert_eq!(s.lines.len(), 6);
        assert_eq!(s.lines[4].just, Justification::Mp { i: 4, j: 3 });
        assert_eq!(s.lines[5].f, "p -> H F p");
        check_proof(&s).unwrap();
    }

    #[test]
    fn nested_abstraction_compiles() {
        let t = Tactics::new("Int2GC");
        let (p, q) = (parse("p").unwrap(), parse("q").unwrap());
        // p -> (q -> p & q)
        let body = t.and_intro(&t.hyp(&p), &t.hyp(&q));
        let term = t.lam(&p, t.lam(&q, body));
        let s = t.script("pair", &term);
        let v = check_proof(&s).unwrap();
        assert_eq!(v.conclusion(), &parse("p -> q -> p & q").unwrap());
        // q -> (p -> p & q), the order the axiom does not give directly
        let body = t.and_intro(&t.hyp(&p), &t.hyp(&q));
        let term = t.lam(&q, t.lam(&p, body));
        let v = check_proof(&t.script("pair2", &term)).unwrap();
        assert_eq!(v.conclusion(), &parse("q -> p -> p & q").unwrap());
    }

    #[test]
    fn negation_helpers() {
        let t = Tactics::new("Int2GC");
        let p = parse("p").unwrap();
        let pb = Formula::imp(p.clone(), Formula::Bot);
        let term = t.lam(&pb, t.neg_intro(&t.hyp(&pb)));
        let v = check_proof(&t.script("neg", &term)).unwrap();
        assert_eq!(v.conclusion(), &parse("(p -> bot) -> ~p").unwrap());
        let np = Formula::not(p);
        let term = t.lam(&np, t.neg_elim(&t.hyp(&np)));
        check_proof(&t.script("neg2", &term)).unwrap();
        check_proof(&t.script("top", &t.top())).unwrap();
    }

    #[test]
    #[should_panic(expected = "under hypotheses")]
    fn rules_refuse_open_terms() {
        let t = Tactics::new("IKt-Ewald");
        let p = parse("p").unwrap();
        t.rule(Rule::Rg, &t.hyp(&p));
    }
}
