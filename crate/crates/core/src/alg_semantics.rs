//! Valuations into finite H2GC algebras, validity and countermodel search.

use std::collections::BTreeMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::{check_identity, enumerate_h2gc, AlgebraError, Elem, H2GCAlgebra, Identity};
use crate::formula::{Formula, Shape};
use crate::proof::ProofSystem;

/// Assignment of carrier elements to variable names.
pub type AlgValuation = BTreeMap<String, Elem>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("variable `{0}` has no value")]
    UnboundVariable(String),
}

pub fn eval(f: &Formula, alg: &H2GCAlgebra, v: &AlgValuation) -> Result<Elem, EvalError> {
    let h = &alg.heyting;
    Ok(match f.shape() {
        Shape::Var(p) => *v
            .get(p)
            .ok_or_else(|| EvalError::UnboundVariable(p.to_string()))?,
        Shape::Top => h.top(),
        Shape::Bot => h.bottom(),
        Shape::Unary(op, a) => {
            let x = eval(a, alg, v)?;
            match alg.op(op) {
                Some(t) => t.apply(x),
                None => h.neg(x),
            }
        }
        Shape::Binary(op, a, b) => {
            let (x, y) = (eval(a, alg, v)?, eval(b, alg, v)?);
            match op {
                crate::formula::BinOp::And => h.meet(x, y),
                crate::formula::BinOp::Or => h.join(x, y),
                crate::formula::BinOp::Imp => h.imp(x, y),
            }
        }
    })
}

/// Odometer over all assignments of `0..n` to `k` slots; the first slot
/// varies slowest.
pub(crate) struct Odometer {
    n: usize,
    cur: Vec<usize>,
    done: bool,
}

impl Odometer {
    pub(crate) fn new(n: usize, k: usize) -> Self {
        Odometer {
            n,
            cur: vec![0; k],
            done: n == 0 && k > 0,
        }
    }

    pub(crate) fn next_slice(&mut self) -> Option<&[usize]> {
        if self.done {
            return None;
        }
        // Yield the current tuple, then advance lazily on the following call.
        self.done = true;
        Some(&self.cur)
    }

    pub(crate) fn advance(&mut self) {
        for i in (0..self.cur.len()).rev() {
            self.cur[i] += 1;
            if self.cur[i] < self.n {
                self.done = false;
                return;
            }
            self.cur[i] = 0;
        }
    }
}

/// First valuation in lexicographic order (variables sorted by name,
/// elements by carrier index) under which `f` is not 1.
pub fn algebra_countervaluation(f: &Formula, alg: &H2GCAlgebra) -> Option<AlgValuation> {
    let prog = f.compile();
    let top = alg.heyting.top();
    let mut stack = Vec::new();
    let mut od = Odometer::new(alg.len(), prog.vars.len());
    while let Some(vals) = od.next_slice() {
        if prog.eval(alg, vals, &mut stack) != top {
            return Some(
                prog.vars
                    .iter()
                    .cloned()
                    .zip(vals.iter().copied())
                    .collect(),
            );
        }
        od.advance();
    }
    None
}

pub fn valid_in_algebra(f: &Formula, alg: &H2GCAlgebra) -> bool {
    algebra_countervaluation(f, alg).is_none()
}

/// Search the enumerated algebras by ascending size for a refuting
/// valuation. `jobs > 1` spreads each size over a thread pool; the winner
/// is still the first one in enumeration order.
pub fn find_algebraic_countermodel(
    f: &Formula,
    max_size: usize,
    require_fs: bool,
    jobs: usize,
) -> Result<Option<(H2GCAlgebra, AlgValuation)>, AlgebraError> {
    let stream = enumerate_h2gc(max_size, require_fs)?;
    if jobs <= 1 {
        for alg in stream {
            if let Some(v) = algebra_countervaluation(f, &alg) {
                return Ok(Some((alg, v)));
            }
        }
        return Ok(None);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("thread pool");
    let mut batch: Vec<H2GCAlgebra> = Vec::new();
    let mut stream = stream.peekable();
    while let Some(first) = stream.next() {
        let size = first.len();
        batch.clear();
        batch.push(first);
        while let Some(a) = stream.next_if(|a| a.len() == size) {
            batch.push(a);
        }
        let hit = pool.install(|| {
            batch
                .par_iter()
                .find_map_first(|alg| algebra_countervaluation(f, alg).map(|v| (alg.clone(), v)))
        });
        if hit.is_some() {
            return Ok(hit);
        }
    }
    Ok(None)
}

/// Replace each metavariable `A`, `B`, ... by the variable `a`, `b`, ... .
pub fn instantiate_fresh(schema: &Formula) -> Formula {
    let s = schema
        .vars()
        .into_iter()
        .map(|m| {
            let fresh = m.to_lowercase();
            (m, Formula::Var(fresh))
        })
        .collect();
    schema.substitute(&s)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomViolation {
    pub axiom: String,
    pub algebra_index: usize,
    pub algebra_size: usize,
    pub valuation: AlgValuation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomSuiteReport {
    pub system: String,
    pub required: Vec<Identity>,
    pub algebras_checked: usize,
    pub axioms_checked: usize,
    pub violations: Vec<AxiomViolation>,
}

impl AxiomSuiteReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check every axiom of `system` in every enumerated algebra of its
/// class: all H2GC algebras satisfying the system's required identities.
pub fn check_axiom_suite(
    system: &ProofSystem,
    max_size: usize,
) -> Result<AxiomSuiteReport, AlgebraError> {
    let required = system.required_identities().to_vec();
    let axioms: Vec<(String, Formula)> = system
        .axioms()
        .iter()
        .map(|(n, s)| (n.clone(), instantiate_fresh(s)))
        .collect();
    let mut report = AxiomSuiteReport {
        system: system.name().to_string(),
        required: required.clone(),
        algebras_checked: 0,
        axioms_checked: axioms.len(),
        violations: Vec::new(),
    };
    for (idx, alg) in enumerate_h2gc(max_size, false)?
        .filter(|a| required.iter().all(|&i| check_identity(a, i)))
        .enumerate()
    {
        report.algebras_checked += 1;
        for (name, f) in &axioms {
            if let Some(v) = algebra_countervaluation(f, &alg) {
                report.violations.push(AxiomViolation {
                    axiom: name.clone(),
                    algebra_index: idx,
                    algebra_size: alg.len(),
                    valuation: v,
                });
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_lattice, heyting_from_lattice, UnaryOp};
    use crate::formula::parse;

    fn five() -> H2GCAlgebra {
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

    fn val(pairs: &[(&str, Elem)]) -> AlgValuation {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn three_chain_refutes_monotonicity_axiom() {
        let alg = five();
        let f = parse("G(p->q) -> (F p -> F q)").unwrap();
        assert_eq!(eval(&f, &alg, &val(&[("p", 2), ("q", 1)])).unwrap(), 1);
        let w = algebra_countervaluation(&f, &alg).unwrap();
        assert_ne!(eval(&f, &alg, &w).unwrap(), 2);
        assert!(!valid_in_algebra(&f, &alg));
        assert!(valid_in_algebra(&parse("p -> p").unwrap(), &alg));
    }

    #[test]
    fn constants_and_unbound() {
        let alg = five();
        assert_eq!(eval(&Formula::Top, &alg, &val(&[])).unwrap(), 2);
        assert_eq!(eval(&Formula::Bot, &alg, &val(&[])).unwrap(), 0);
        assert_eq!(
            eval(&parse("p & q").unwrap(), &alg, &val(&[("p", 1)])),
            Err(EvalError::UnboundVariable("q".into()))
        );
        let id = H2GCAlgebra::identity_ops(alg.heyting.clone());
        assert_eq!(
            eval(&parse("p -> H F p").unwrap(), &id, &val(&[("p", 1)])).unwrap(),
            2
        );
    }

    #[test]
    fn compiled_evaluation_matches_recursive() {
        let algs: Vec<H2GCAlgebra> = enumerate_h2gc(3, false).unwrap().step_by(5).collect();
        let fs: Vec<Formula> = crate::formula::enumerate_formulas(&["p", "q"], 2)
            .step_by(97)
            .collect();
        let mut stack = Vec::new();
        for alg in &algs {
            for f in &fs {
                let prog = f.compile();
                let mut od = Odometer::new(alg.len(), prog.vars.len());
                while let Some(vals) = od.next_slice() {
                    let v: AlgValuation = prog
                        .vars
                        .iter()
                        .cloned()
                        .zip(vals.iter().copied())
                        .collect();
                    assert_eq!(prog.eval(alg, vals, &mut stack), eval(f, alg, &v).unwrap());
                    od.advance();
                }
            }
        }
    }

    #[test]
    fn gc_unit_is_valid_everywhere() {
        let f = parse("p -> H F p").unwrap();
        for alg in enumerate_h2gc(4, false).unwrap() {
            assert!(valid_in_algebra(&f, &alg));
        }
        assert_eq!(find_algebraic_countermodel(&f, 4, false, 1).unwrap(), None);
    }

    #[test]
    fn bot_needs_two_elements() {
        let (alg, v) = find_algebraic_countermodel(&Formula::Bot, 3, false, 1)
            .unwrap()
            .unwrap();
        assert_eq!(alg.len(), 2);
        assert!(v.is_empty());
    }

    #[test]
    fn parallel_search_picks_the_same_witness() {
        let f = parse("G(p|q) -> G p | F q").unwrap();
        let seq = find_algebraic_countermodel(&f, 4, false, 1).unwrap();
        let par = find_algebraic_countermodel(&f, 4, false, 3).unwrap();
        assert_eq!(seq, par);
    }
}
