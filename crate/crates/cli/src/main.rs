//! `gclogic`: batch front end. Exit status 0 means the check held, 1 that
//! it was refuted (a witness is printed as loadable JSON), 2 a usage or
//! input error.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use gclogic::alg_semantics::{
    algebra_countervaluation, eval, find_algebraic_countermodel, AlgValuation,
};
use gclogic::algebra::{
    check_h2gc, enumerate_h2gc, enumerate_heyting, identity_witness, is_galois_pair, H2GCAlgebra,
    Identity,
};
use gclogic::canonical::{canonical_frame, key_lemma_check, CanonicalKind};
use gclogic::formula::{enumerate_formulas, parse, print, Formula};
use gclogic::io::{
    algebra_witness_to_json, frame_to_json, from_json, kripke_witness_to_json, load_algebra,
    load_frame, load_rough, to_json, LoadedAlgebra,
};
use gclogic::kripke::{
    check_frame, enumerate_frames, find_kripke_countermodel, frame_countermodel, FrameKind,
    FrameViolation, KripkeModel,
};
use gclogic::proof::{check_proof, script_corpus, ProofScript};
use gclogic::rough::{dvee_report, power_algebra, verify_rough_laws, LawCoverage, ROUGH_LAWS};

#[derive(Parser)]
#[command(
    name = "gclogic",
    version,
    about = "Finite models and proof checking for Int2GC, Int2GC+FS and IKt"
)]
struct Cli {
    /// Worker threads for enumeration-backed subcommands.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse formulas (an expression, or a file with one per line) and print them back.
    Parse { input: String },
    /// Check that an algebra file is an H2GC algebra (with --fs, an H2GC+FS algebra).
    CheckAlgebra {
        file: String,
        #[arg(long)]
        fs: bool,
    },
    /// Check the frame conditions of a frame file.
    CheckFrame { file: String },
    /// Evaluate a formula in an algebra.
    Eval {
        #[arg(long)]
        algebra: String,
        /// Assignments `var=element`, then the formula.
        #[arg(long = "val", num_args = 1..)]
        val: Vec<String>,
        expr: Option<String>,
    },
    /// Decide validity in one algebra or one frame.
    Valid {
        #[arg(long, conflicts_with = "frame", required_unless_present = "frame")]
        algebra: Option<String>,
        #[arg(long)]
        frame: Option<String>,
        expr: String,
    },
    /// Search enumerated algebras or frames for a countermodel.
    Countermodel {
        expr: String,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        max: usize,
        /// Restrict to H2GC+FS algebras or FS frames.
        #[arg(long)]
        fs: bool,
    },
    /// Print the canonical frame of an algebra.
    Canonical {
        #[arg(long)]
        algebra: String,
        /// Build the FS frame `R1 & R2` instead of the two-relation one.
        #[arg(long)]
        fs: bool,
        /// Check the key lemma for all one-variable formulas up to this depth.
        #[arg(long = "check-key-lemma")]
        check_key_lemma: Option<usize>,
    },
    /// Apply an approximation operator, or verify the approximation laws.
    Rough {
        file: String,
        #[arg(long, value_enum, requires = "set", conflicts_with = "verify")]
        op: Option<RoughOp>,
        #[arg(long)]
        set: Option<String>,
        #[arg(long, required_unless_present = "op")]
        verify: bool,
        /// Also build the algebra of all H-sets and check it.
        #[arg(long, requires = "verify")]
        power: bool,
    },
    /// Check a proof script.
    Prove { file: String },
    /// Check the built-in proof corpus.
    Corpus {
        #[arg(long = "run-all", required = true)]
        run_all: bool,
    },
    /// Count (or list) enumerated structures by size.
    Enumerate {
        #[arg(long, value_enum)]
        what: What,
        #[arg(long)]
        max: usize,
        /// Frame kind for `--what frames`.
        #[arg(long, default_value = "fs")]
        kind: String,
        /// Print every structure as a JSON line instead of counts.
        #[arg(long)]
        list: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Algebra,
    Kripke,
}

#[derive(Clone, Copy, ValueEnum)]
enum RoughOp {
    #[value(name = "diaF")]
    DiaF,
    #[value(name = "boxG")]
    BoxG,
    #[value(name = "diaP")]
    DiaP,
    #[value(name = "boxH")]
    BoxH,
}

#[derive(Clone, Copy, ValueEnum)]
enum What {
    Heyting,
    H2gc,
    H2gcfs,
    Frames,
}

/// Held, refuted, or bad input.
type Outcome = Result<bool, String>;

fn read(path: &str) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))
}

fn with_file<T, E: std::fmt::Display>(path: &str, r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| format!("{path}: {e}"))
}

fn formula(expr: &str) -> Result<Formula, String> {
    parse(expr).map_err(|e| format!("`{expr}`: {e}"))
}

fn emit(v: &impl serde::Serialize) {
    print!("{}", to_json(v));
}

fn h2gc_for(alg: &LoadedAlgebra, f: &Formula, path: &str) -> Result<H2GCAlgebra, String> {
    if !alg.has_ops() && !f.is_modal_free() {
        return Err(format!(
            "{path}: algebra has no operator tables but the formula is modal"
        ));
    }
    Ok(alg.to_h2gc())
}

fn cmd_parse(input: &str) -> Outcome {
    if Path::new(input).is_file() {
        for (i, line) in read(input)?.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let f = parse(line).map_err(|e| format!("{input}:{}: {e}", i + 1))?;
            println!("{}", print(&f));
        }
    } else {
        println!("{}", print(&formula(input)?));
    }
    Ok(true)
}

fn cmd_check_algebra(file: &str, fs: bool) -> Outcome {
    let alg = with_file(file, load_algebra(&read(file)?))?;
    let LoadedAlgebra::H2gc(alg) = alg else {
        if fs {
            return Err(format!(
                "{file}: no operator tables, so the FS identities are undefined"
            ));
        }
        emit(&json!({"heyting": true, "operators": false}));
        return Ok(true);
    };
    let name = |a| alg.name(a).to_string();
    let pairs = json!({
        "fdia-hbox": is_galois_pair(&alg, &alg.fdia, &alg.hbox),
        "pdia-gbox": is_galois_pair(&alg, &alg.pdia, &alg.gbox),
    });
    let mut identities = serde_json::Map::new();
    for id in Identity::ALL {
        let v = match identity_witness(&alg, id) {
            None => json!("pass"),
            Some((a, b)) => json!({"fails_at": [name(a), name(b)]}),
        };
        identities.insert(id.name().into(), v);
    }
    let h2gc = check_h2gc(&alg);
    let ok = h2gc && (!fs || alg.is_fs());
    emit(
        &json!({"heyting": true, "operators": true, "galois": pairs, "h2gc": h2gc, "fs": alg.is_fs(), "identities": identities}),
    );
    Ok(ok)
}

fn cmd_check_frame(file: &str) -> Outcome {
    let frame = with_file(file, load_frame(&read(file)?))?;
    match check_frame(&frame) {
        Ok(()) => {
            emit(&json!({"kind": frame.kind().name(), "worlds": frame.len(), "ok": true}));
            Ok(true)
        }
        Err(v) => {
            let w = |i: usize| frame.worlds()[i].as_str();
            let violation = match v {
                FrameViolation::NotReflexive(x) => json!({"condition": "reflexive", "at": [w(x)]}),
                FrameViolation::NotTransitive(x, y) => {
                    json!({"condition": "transitive", "at": [w(x), w(y)]})
                }
                FrameViolation::Condition { cond, pair: (x, y) } => {
                    json!({"condition": cond, "at": [w(x), w(y)]})
                }
            };
            emit(
                &json!({"kind": frame.kind().name(), "worlds": frame.len(), "ok": false, "violation": violation}),
            );
            Ok(false)
        }
    }
}

fn cmd_eval(algebra: &str, vals: &[String], expr: &str) -> Outcome {
    let loaded = with_file(algebra, load_algebra(&read(algebra)?))?;
    let f = formula(expr)?;
    let alg = h2gc_for(&loaded, &f, algebra)?;
    let mut v = AlgValuation::new();
    for kv in vals {
        let (k, e) = kv
            .split_once('=')
            .ok_or_else(|| format!("`{kv}`: expected var=element"))?;
        let a = alg
            .elem(e)
            .ok_or_else(|| format!("`{kv}`: unknown element `{e}`"))?;
        v.insert(k.to_string(), a);
    }
    let value = eval(&f, &alg, &v).map_err(|e| e.to_string())?;
    println!("{}", alg.name(value));
    Ok(true)
}

fn cmd_valid(algebra: Option<&str>, frame: Option<&str>, expr: &str) -> Outcome {
    let f = formula(expr)?;
    if let Some(path) = algebra {
        let loaded = with_file(path, load_algebra(&read(path)?))?;
        let alg = h2gc_for(&loaded, &f, path)?;
        return Ok(match algebra_countervaluation(&f, &alg) {
            None => {
                emit(&json!({"valid": true}));
                true
            }
            Some(v) => {
                emit(&algebra_witness_to_json(&alg, &v));
                false
            }
        });
    }
    let path = frame.expect("clap requires one of the two");
    let fr = with_file(path, load_frame(&read(path)?))?;
    match with_file(path, frame_countermodel(&f, &fr))? {
        None => {
            emit(&json!({"valid": true}));
            Ok(true)
        }
        Some(w) => {
            emit(&kripke_witness_to_json(
                &KripkeModel::new_unchecked(fr, w.valuation),
                w.world,
            ));
            Ok(false)
        }
    }
}

fn cmd_countermodel(expr: &str, mode: Mode, max: usize, fs: bool, jobs: usize) -> Outcome {
    let f = formula(expr)?;
    match mode {
        Mode::Algebra => {
            match find_algebraic_countermodel(&f, max, fs, jobs).map_err(|e| e.to_string())? {
                None => {
                    emit(&json!({"countermodel": null, "max": max}));
                    Ok(true)
                }
                Some((alg, v)) => {
                    emit(&algebra_witness_to_json(&alg, &v));
                    Ok(false)
                }
            }
        }
        Mode::Kripke => {
            let kind = if fs { FrameKind::Fs } else { FrameKind::Int2Gc };
            match find_kripke_countermodel(&f, max, kind, jobs).map_err(|e| e.to_string())? {
                None => {
                    emit(&json!({"countermodel": null, "max": max}));
                    Ok(true)
                }
                Some((m, w)) => {
                    emit(&kripke_witness_to_json(&m, w));
                    Ok(false)
                }
            }
        }
    }
}

fn cmd_canonical(path: &str, fs: bool, depth: Option<usize>) -> Outcome {
    let alg = with_file(path, load_algebra(&read(path)?))?.to_h2gc();
    let kind = if fs {
        CanonicalKind::Fs
    } else {
        CanonicalKind::Int2Gc
    };
    let cf = canonical_frame(&alg, kind);
    emit(&frame_to_json(&cf.frame));
    if cf.not_fs {
        eprintln!("warning: the algebra fails fs1 or fs2; the FS frame conditions may not hold");
    }
    let Some(depth) = depth else { return Ok(true) };
    let formulas: Vec<Formula> = enumerate_formulas(&["p"], depth).collect();
    let (mut instances, mut failures) = (0, 0);
    for a in alg.elements() {
        let v: AlgValuation = [("p".to_string(), a)].into();
        let r = key_lemma_check(&alg, &v, &formulas, kind);
        instances += r.instances;
        failures += r.failures.len();
        if let Some(first) = r.failures.first() {
            eprintln!(
                "key lemma fails: p = {}, `{}` at {}: satisfied = {}, value = {}",
                alg.name(a),
                print(&first.formula),
                first.world,
                first.satisfied,
                alg.name(first.value)
            );
        }
    }
    eprintln!(
        "key lemma: {} formulas, {instances} instances, {failures} failures",
        formulas.len()
    );
    Ok(failures == 0)
}

fn cmd_rough_op(path: &str, op: RoughOp, set: &str) -> Outcome {
    let doc = with_file(path, load_rough(&read(path)?))?;
    let phi = with_file(path, doc.set(set))?;
    let c = &doc.context;
    let out = match op {
        RoughOp::DiaF => c.dia_f(phi),
        RoughOp::BoxG => c.box_g(phi),
        RoughOp::DiaP => c.dia_p(phi),
        RoughOp::BoxH => c.box_h(phi),
    }
    .map_err(|e| e.to_string())?;
    let m: BTreeMap<&str, &str> = c
        .universe
        .iter()
        .zip(&out)
        .map(|(x, &a)| (x.as_str(), c.algebra.name(a)))
        .collect();
    emit(&m);
    Ok(true)
}

/// Exhaustive up to this many pairs of H-sets, sampled beyond.
const EXHAUSTIVE_PAIRS: usize = 1 << 20;

fn cmd_rough_verify(path: &str, power: bool) -> Outcome {
    let doc = with_file(path, load_rough(&read(path)?))?;
    let c = &doc.context;
    let n = c.set_count();
    let coverage = if n.saturating_mul(n) <= EXHAUSTIVE_PAIRS {
        LawCoverage::Exhaustive
    } else {
        LawCoverage::Sampled {
            pairs: EXHAUSTIVE_PAIRS,
            seed: 0,
        }
    };
    let report = verify_rough_laws(c, coverage);
    let laws: serde_json::Map<String, Value> = ROUGH_LAWS
        .iter()
        .map(|&law| {
            let fail = report.failures.iter().find(|f| f.law == law);
            let v = match fail {
                None => json!("pass"),
                Some(f) => json!({"fails_at": [c.set_name(&f.phi), c.set_name(&f.psi)]}),
            };
            (law.to_string(), v)
        })
        .collect();
    // D-or at every point for every ordered pair of named sets; only the
    // failures are listed.
    let (mut checked, mut dvee) = (0, Vec::new());
    for (pn, phi) in &doc.sets {
        for (qn, psi) in &doc.sets {
            let r = dvee_report(c, phi, psi).map_err(|e| e.to_string())?;
            for (op, lhs, rhs) in [("G/F", &r.g_lhs, &r.g_rhs), ("H/P", &r.h_lhs, &r.h_rhs)] {
                for (x, name) in c.universe.iter().enumerate() {
                    checked += 1;
                    if !c.algebra.leq(lhs[x], rhs[x]) {
                        dvee.push(json!({
                            "phi": pn, "psi": qn, "ops": op, "point": name,
                            "lhs": c.algebra.name(lhs[x]), "rhs": c.algebra.name(rhs[x]),
                        }));
                    }
                }
            }
        }
    }
    let mut out = json!({
        "coverage": match coverage { LawCoverage::Exhaustive => "exhaustive", LawCoverage::Sampled { .. } => "sampled" },
        "pairs_checked": report.pairs_checked,
        "laws": laws,
        "dvee": {"checked": checked, "failures": dvee},
    });
    let mut ok = report.passed();
    if power {
        let alg = power_algebra(c).map_err(|e| e.to_string())?;
        let dv = formula("G(p|q) -> G p | F q").expect("fixed formula");
        let ids: serde_json::Map<String, Value> = Identity::ALL
            .iter()
            .map(|&id| {
                (
                    id.name().to_string(),
                    json!(identity_witness(&alg, id).is_none()),
                )
            })
            .collect();
        let witness = algebra_countervaluation(&dv, &alg).map(|v| {
            v.iter()
                .map(|(p, &a)| (p.clone(), alg.name(a).to_string()))
                .collect::<BTreeMap<_, _>>()
        });
        let h2gc = check_h2gc(&alg);
        ok &= h2gc;
        out["power"] = json!({
            "elements": alg.len(), "h2gc": h2gc, "identities": ids,
            "dvee_valid": witness.is_none(), "dvee_countervaluation": witness,
        });
    }
    emit(&out);
    Ok(ok)
}

fn cmd_prove(path: &str) -> Outcome {
    let script: ProofScript = with_file(path, from_json(&read(path)?))?;
    match check_proof(&script) {
        Ok(v) => {
            emit(
                &json!({"accepted": true, "system": v.system, "lines": v.lines.len(), "conclusion": print(v.conclusion())}),
            );
            Ok(true)
        }
        Err(e @ gclogic::proof::ProofError::UnknownSystem(_)) => Err(format!("{path}: {e}")),
        Err(e) => {
            emit(
                &json!({"accepted": false, "line": e.line(), "kind": e.kind(), "reason": e.to_string()}),
            );
            Ok(false)
        }
    }
}

fn cmd_corpus(jobs: usize) -> Outcome {
    let corpus = script_corpus();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| e.to_string())?;
    let results: Vec<_> = pool.install(|| {
        corpus
            .par_iter()
            .map(|e| (e, check_proof(&e.script)))
            .collect()
    });
    let mut ok = true;
    for (e, r) in &results {
        match r {
            Ok(v) => println!(
                "ok   {:<32} {:<14} {}",
                e.name,
                e.script.system,
                print(v.conclusion())
            ),
            Err(err) => {
                ok = false;
                println!("FAIL {:<32} {:<14} {err}", e.name, e.script.system);
            }
        }
    }
    println!(
        "{} scripts, {} rejected",
        results.len(),
        results.iter().filter(|(_, r)| r.is_err()).count()
    );
    Ok(ok)
}

fn cmd_enumerate(what: What, max: usize, kind: &str, list: bool) -> Outcome {
    let mut counts: BTreeMap<usize, usize> = (1..=max).map(|n| (n, 0)).collect();
    let mut record = |n: usize, item: Value| {
        *counts.entry(n).or_default() += 1;
        if list {
            println!("{}", serde_json::to_string(&item).expect("serializable"));
        }
    };
    match what {
        What::Heyting => {
            for h in enumerate_heyting(max).map_err(|e| e.to_string())? {
                record(
                    h.len(),
                    serde_json::to_value(gclogic::io::heyting_to_json(&h)).expect("serializable"),
                );
            }
        }
        What::H2gc | What::H2gcfs => {
            for a in enumerate_h2gc(max, matches!(what, What::H2gcfs)).map_err(|e| e.to_string())? {
                record(
                    a.len(),
                    serde_json::to_value(gclogic::io::algebra_to_json(&a)).expect("serializable"),
                );
            }
        }
        What::Frames => {
            let kind =
                FrameKind::from_name(kind).ok_or_else(|| format!("unknown frame kind `{kind}`"))?;
            for f in enumerate_frames(kind, max).map_err(|e| e.to_string())? {
                record(
                    f.len(),
                    serde_json::to_value(frame_to_json(&f)).expect("serializable"),
                );
            }
        }
    }
    if !list {
        let by_size: Vec<usize> = counts.values().copied().collect();
        emit(&json!({"counts": by_size, "total": by_size.iter().sum::<usize>()}));
    }
    Ok(true)
}

fn run(cli: Cli) -> Outcome {
    let jobs = cli.jobs;
    match cli.command {
        Command::Parse { input } => cmd_parse(&input),
        Command::CheckAlgebra { file, fs } => cmd_check_algebra(&file, fs),
        Command::CheckFrame { file } => cmd_check_frame(&file),
        Command::Eval {
            algebra,
            mut val,
            expr,
        } => {
            // `--val` is greedy, so the formula may have landed in it; it is
            // the one argument without `=`.
            let mut exprs: Vec<String> = expr.into_iter().collect();
            val.retain(|v| {
                v.contains('=') || {
                    exprs.push(v.clone());
                    false
                }
            });
            match exprs.as_slice() {
                [e] => cmd_eval(&algebra, &val, e),
                _ => Err("expected exactly one formula".into()),
            }
        }
        Command::Valid {
            algebra,
            frame,
            expr,
        } => cmd_valid(algebra.as_deref(), frame.as_deref(), &expr),
        Command::Countermodel {
            expr,
            mode,
            max,
            fs,
        } => cmd_countermodel(&expr, mode, max, fs, jobs),
        Command::Canonical {
            algebra,
            fs,
            check_key_lemma,
        } => cmd_canonical(&algebra, fs, check_key_lemma),
        Command::Rough {
            file,
            op: Some(op),
            set,
            ..
        } => cmd_rough_op(&file, op, set.as_deref().expect("clap requires --set")),
        Command::Rough { file, power, .. } => cmd_rough_verify(&file, power),
        Command::Prove { file } => cmd_prove(&file),
        Command::Corpus { .. } => cmd_corpus(jobs),
        Command::Enumerate {
            what,
            max,
            kind,
            list,
        } => cmd_enumerate(what, max, &kind, list),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
