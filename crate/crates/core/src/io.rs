//! JSON documents for algebras, frames, models, rough contexts and
//! countermodel witnesses.
//!
//! Loaders check structure only (names resolve, tables are total, the
//! order is a Heyting lattice); semantic checks are left to the callers so
//! that broken inputs can still be reported on. Savers emit a canonical
//! form: loading and saving it again gives the same bytes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::alg_semantics::AlgValuation;
use crate::algebra::{
    build_lattice, heyting_from_lattice, left_adjoint, right_adjoint, AlgebraError, Elem,
    FiniteLattice, H2GCAlgebra, HeytingAlgebra, UnaryOp,
};
use crate::kripke::{
    Frame, FrameKind, FsFrame, Int2GcFrame, IntGcFrame, KripkeError, KripkeModel, KripkeValuation,
    Relation, MAX_WORLDS,
};
use crate::rough::{RoughContext, RoughError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Kripke(#[from] KripkeError),
    #[error(transparent)]
    Rough(#[from] RoughError),
    #[error("table `{table}` maps `{from}` to unknown element `{to}`")]
    BadTableEntry {
        table: String,
        from: String,
        to: String,
    },
    #[error("`{given}` is given but neither `{missing}` nor an adjoint for it exists")]
    NoAdjoint {
        given: &'static str,
        missing: &'static str,
    },
    #[error("operator pair `{0}` is missing while the other pair is present")]
    MissingPair(&'static str),
    #[error("frame kind `{kind}` needs field(s) {needs}")]
    FrameFields { kind: String, needs: &'static str },
    #[error("unknown frame kind `{0}`")]
    UnknownKind(String),
    #[error("unknown point `{0}` in the rough context")]
    UnknownPoint(String),
    #[error("unknown set `{0}`")]
    UnknownSet(String),
}

pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, IoError> {
    serde_json::from_str(text).map_err(|e| IoError::Json(e.to_string()))
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("serializable");
    s.push('\n');
    s
}

type Table = BTreeMap<String, String>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub elements: Vec<String>,
    /// Generating pairs `[lower, upper]`.
    pub order: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fdia: Option<Table>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gbox: Option<Table>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pdia: Option<Table>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hbox: Option<Table>,
}

/// An algebra document: without unary tables it is a plain Heyting algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LoadedAlgebra {
    Heyting(HeytingAlgebra),
    H2gc(H2GCAlgebra),
}

impl LoadedAlgebra {
    pub fn heyting(&self) -> &HeytingAlgebra {
        match self {
            LoadedAlgebra::Heyting(h) => h,
            LoadedAlgebra::H2gc(a) => &a.heyting,
        }
    }

    /// The H2GC algebra, with identity operators standing in when none
    /// were given.
    pub fn to_h2gc(&self) -> H2GCAlgebra {
        match self {
            LoadedAlgebra::Heyting(h) => H2GCAlgebra::identity_ops(h.clone()),
            LoadedAlgebra::H2gc(a) => a.clone(),
        }
    }

    pub fn has_ops(&self) -> bool {
        matches!(self, LoadedAlgebra::H2gc(_))
    }
}

fn lattice_from_json(doc: &AlgebraJson) -> Result<HeytingAlgebra, IoError> {
    let l = build_lattice(&doc.elements, &doc.order)?;
    Ok(heyting_from_lattice(l)?)
}

fn table_from_json(l: &FiniteLattice, name: &str, t: &Table) -> Result<UnaryOp, IoError> {
    for from in t.keys() {
        l.elem(from)
            .ok_or_else(|| AlgebraError::UnknownElement(from.clone()))?;
    }
    l.elements()
        .map(|a| {
            let from = l.name(a);
            let to = t
                .get(from)
                .ok_or_else(|| AlgebraError::IncompleteTable(name.into(), from.into()))?;
            l.elem(to).ok_or_else(|| IoError::BadTableEntry {
                table: name.into(),
                from: from.into(),
                to: to.clone(),
            })
        })
        .collect::<Result<_, _>>()
        .map(UnaryOp)
}

/// A Galois pair from whichever halves are given.
fn pair_from_json(
    l: &FiniteLattice,
    (lname, lower): (&'static str, &Option<Table>),
    (uname, upper): (&'static str, &Option<Table>),
) -> Result<Option<(UnaryOp, UnaryOp)>, IoError> {
    let lower = lower
        .as_ref()
        .map(|t| table_from_json(l, lname, t))
        .transpose()?;
    let upper = upper
        .as_ref()
        .map(|t| table_from_json(l, uname, t))
        .transpose()?;
    Ok(match (lower, upper) {
        (None, None) => None,
        (Some(f), Some(g)) => Some((f, g)),
        (Some(f), None) => {
            let g = right_adjoint(l, &f).ok_or(IoError::NoAdjoint {
                given: lname,
                missing: uname,
            })?;
            Some((f, g))
        }
        (None, Some(g)) => {
            let f = left_adjoint(l, &g).ok_or(IoError::NoAdjoint {
                given: uname,
                missing: lname,
            })?;
            Some((f, g))
        }
    })
}

pub fn algebra_from_json(doc: &AlgebraJson) -> Result<LoadedAlgebra, IoError> {
    let h = lattice_from_json(doc)?;
    let fh = pair_from_json(&h, ("fdia", &doc.fdia), ("hbox", &doc.hbox))?;
    let pg = pair_from_json(&h, ("pdia", &doc.pdia), ("gbox", &doc.gbox))?;
    match (fh, pg) {
        (None, None) => Ok(LoadedAlgebra::Heyting(h)),
        (Some((f, hb)), Some((p, g))) => Ok(LoadedAlgebra::H2gc(H2GCAlgebra::new(h, f, g, p, hb))),
        (None, Some(_)) => Err(IoError::MissingPair("fdia/hbox")),
        (Some(_), None) => Err(IoError::MissingPair("pdia/gbox")),
    }
}

fn table_to_json(l: &FiniteLattice, op: &UnaryOp) -> Table {
    l.elements()
        .map(|a| (l.name(a).to_string(), l.name(op.apply(a)).to_string()))
        .collect()
}

/// Covering pairs in carrier order.
pub fn heyting_to_json(h: &HeytingAlgebra) -> AlgebraJson {
    AlgebraJson {
        elements: h.names().to_vec(),
        order: h
            .covers()
            .into_iter()
            .map(|(a, b)| (h.name(a).to_string(), h.name(b).to_string()))
            .collect(),
        fdia: None,
        gbox: None,
        pdia: None,
        hbox: None,
    }
}

pub fn algebra_to_json(alg: &H2GCAlgebra) -> AlgebraJson {
    AlgebraJson {
        fdia: Some(table_to_json(alg, &alg.fdia)),
        gbox: Some(table_to_json(alg, &alg.gbox)),
        pdia: Some(table_to_json(alg, &alg.pdia)),
        hbox: Some(table_to_json(alg, &alg.hbox)),
        ..heyting_to_json(&alg.heyting)
    }
}

pub fn loaded_to_json(a: &LoadedAlgebra) -> AlgebraJson {
    match a {
        LoadedAlgebra::Heyting(h) => heyting_to_json(h),
        LoadedAlgebra::H2gc(a) => algebra_to_json(a),
    }
}

pub fn load_algebra(text: &str) -> Result<LoadedAlgebra, IoError> {
    algebra_from_json(&from_json(text)?)
}

type Pairs = Vec<(String, String)>;

/// Frame JSON; with `valuation` it is a model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameJson {
    pub kind: String,
    pub worlds: Vec<String>,
    pub leq: Pairs,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<Pairs>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r1: Option<Pairs>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r2: Option<Pairs>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub valuation: Option<BTreeMap<String, Vec<String>>>,
}

fn world_index(worlds: &[String], w: &str) -> Result<usize, KripkeError> {
    worlds
        .iter()
        .position(|x| x == w)
        .ok_or_else(|| KripkeError::UnknownWorld(w.to_string()))
}

fn relation_from_json(worlds: &[String], pairs: &Pairs) -> Result<Relation, IoError> {
    let idx: Vec<(usize, usize)> = pairs
        .iter()
        .map(|(x, y)| Ok((world_index(worlds, x)?, world_index(worlds, y)?)))
        .collect::<Result<_, KripkeError>>()?;
    Ok(Relation::from_pairs(worlds.len(), &idx))
}

fn relation_to_json(worlds: &[String], r: &Relation) -> Pairs {
    r.pairs()
        .into_iter()
        .map(|(x, y)| (worlds[x].clone(), worlds[y].clone()))
        .collect()
}

/// The order is closed reflexively and transitively. Frame conditions are
/// not checked.
pub fn frame_from_json(doc: &FrameJson) -> Result<Frame, IoError> {
    let kind =
        FrameKind::from_name(&doc.kind).ok_or_else(|| IoError::UnknownKind(doc.kind.clone()))?;
    let worlds = doc.worlds.clone();
    if worlds.len() > MAX_WORLDS {
        return Err(KripkeError::TooManyWorlds(worlds.len()).into());
    }
    for (i, w) in worlds.iter().enumerate() {
        if worlds[..i].contains(w) {
            return Err(KripkeError::DuplicateWorld(w.clone()).into());
        }
    }
    let leq = relation_from_json(&worlds, &doc.leq)?.reflexive_transitive_closure();
    let fields = |needs| IoError::FrameFields {
        kind: doc.kind.clone(),
        needs,
    };
    Ok(match kind {
        FrameKind::Int2Gc => {
            let (Some(r1), Some(r2), None) = (&doc.r1, &doc.r2, &doc.r) else {
                return Err(fields("`r1` and `r2` (and no `r`)"));
            };
            let (r1, r2) = (
                relation_from_json(&worlds, r1)?,
                relation_from_json(&worlds, r2)?,
            );
            Frame::Int2Gc(Int2GcFrame {
                worlds,
                leq,
                r1,
                r2,
            })
        }
        FrameKind::IntGc | FrameKind::Fs => {
            let (Some(r), None, None) = (&doc.r, &doc.r1, &doc.r2) else {
                return Err(fields("`r` (and no `r1`/`r2`)"));
            };
            let r = relation_from_json(&worlds, r)?;
            if kind == FrameKind::Fs {
                Frame::Fs(FsFrame { worlds, leq, r })
            } else {
                Frame::IntGc(IntGcFrame { worlds, leq, r })
            }
        }
    })
}

/// `leq` is written without its reflexive pairs.
pub fn frame_to_json(frame: &Frame) -> FrameJson {
    let worlds = frame.worlds().to_vec();
    let leq: Pairs = relation_to_json(&worlds, frame.leq())
        .into_iter()
        .filter(|(x, y)| x != y)
        .collect();
    let mut doc = FrameJson {
        kind: frame.kind().name().into(),
        worlds,
        leq,
        r: None,
        r1: None,
        r2: None,
        valuation: None,
    };
    match frame {
        Frame::IntGc(IntGcFrame { r, .. }) | Frame::Fs(FsFrame { r, .. }) => {
            doc.r = Some(relation_to_json(&doc.worlds, r))
        }
        Frame::Int2Gc(f) => {
            doc.r1 = Some(relation_to_json(&doc.worlds, &f.r1));
            doc.r2 = Some(relation_to_json(&doc.worlds, &f.r2));
        }
    }
    doc
}

/// Rejects valuations that are not up-closed; a missing `valuation` is
/// empty.
pub fn model_from_json(doc: &FrameJson) -> Result<KripkeModel, IoError> {
    let frame = frame_from_json(doc)?;
    let mut valuation = KripkeValuation::new();
    for (p, ws) in doc.valuation.iter().flatten() {
        let set = ws.iter().try_fold(0u64, |s, w| {
            Ok::<_, KripkeError>(s | 1 << world_index(frame.worlds(), w)?)
        })?;
        valuation.insert(p.clone(), set);
    }
    Ok(KripkeModel::new(frame, valuation)?)
}

pub fn model_to_json(m: &KripkeModel) -> FrameJson {
    let worlds = m.frame.worlds();
    let valuation = m
        .valuation
        .iter()
        .map(|(p, &set)| {
            (
                p.clone(),
                (0..worlds.len())
                    .filter(|&i| set >> i & 1 == 1)
                    .map(|i| worlds[i].clone())
                    .collect(),
            )
        })
        .collect();
    FrameJson {
        valuation: Some(valuation),
        ..frame_to_json(&m.frame)
    }
}

pub fn load_frame(text: &str) -> Result<Frame, IoError> {
    frame_from_json(&from_json(text)?)
}

pub fn load_model(text: &str) -> Result<KripkeModel, IoError> {
    model_from_json(&from_json(text)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoughJson {
    pub algebra: AlgebraJson,
    pub universe: Vec<String>,
    /// `relation[x][y]` is the degree of `x R y`; missing entries are bottom.
    pub relation: BTreeMap<String, Table>,
    #[serde(default)]
    pub sets: BTreeMap<String, Table>,
}

/// A context with its named H-sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoughDoc {
    pub context: RoughContext,
    pub sets: BTreeMap<String, Vec<Elem>>,
}

impl RoughDoc {
    pub fn set(&self, name: &str) -> Result<&[Elem], IoError> {
        self.sets
            .get(name)
            .map(Vec::as_slice)
            .ok_or_else(|| IoError::UnknownSet(name.to_string()))
    }
}

fn hset_from_json(
    ctx_h: &HeytingAlgebra,
    universe: &[String],
    t: &Table,
) -> Result<Vec<Elem>, IoError> {
    let mut out = vec![ctx_h.bottom(); universe.len()];
    for (x, v) in t {
        let i = universe
            .iter()
            .position(|u| u == x)
            .ok_or_else(|| IoError::UnknownPoint(x.clone()))?;
        out[i] = ctx_h
            .elem(v)
            .ok_or_else(|| AlgebraError::UnknownElement(v.clone()))?;
    }
    Ok(out)
}

fn hset_to_json(h: &HeytingAlgebra, universe: &[String], s: &[Elem]) -> Table {
    universe
        .iter()
        .zip(s)
        .map(|(x, &a)| (x.clone(), h.name(a).to_string()))
        .collect()
}

pub fn rough_from_json(doc: &RoughJson) -> Result<RoughDoc, IoError> {
    let h = lattice_from_json(&doc.algebra)?;
    let u = &doc.universe;
    for (i, x) in u.iter().enumerate() {
        if u[..i].contains(x) {
            return Err(IoError::Json(format!("point `{x}` occurs twice")));
        }
    }
    let mut relation = vec![vec![h.bottom(); u.len()]; u.len()];
    for (x, row) in &doc.relation {
        let i = u
            .iter()
            .position(|p| p == x)
            .ok_or_else(|| IoError::UnknownPoint(x.clone()))?;
        relation[i] = hset_from_json(&h, u, row)?;
    }
    let sets = doc
        .sets
        .iter()
        .map(|(n, t)| Ok((n.clone(), hset_from_json(&h, u, t)?)))
        .collect::<Result<_, IoError>>()?;
    let context = RoughContext::new(h, u.clone(), relation)?;
    Ok(RoughDoc { context, sets })
}

/// Every relation entry is written out.
pub fn rough_to_json(doc: &RoughDoc) -> RoughJson {
    let c = &doc.context;
    let u = &c.universe;
    RoughJson {
        algebra: heyting_to_json(&c.algebra),
        universe: u.clone(),
        relation: u
            .iter()
            .zip(&c.relation)
            .map(|(x, row)| (x.clone(), hset_to_json(&c.algebra, u, row)))
            .collect(),
        sets: doc
            .sets
            .iter()
            .map(|(n, s)| (n.clone(), hset_to_json(&c.algebra, u, s)))
            .collect(),
    }
}

pub fn load_rough(text: &str) -> Result<RoughDoc, IoError> {
    rough_from_json(&from_json(text)?)
}

/// An algebra with a refuting valuation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraWitnessJson {
    pub algebra: AlgebraJson,
    pub valuation: Table,
}

pub fn algebra_witness_to_json(alg: &H2GCAlgebra, v: &AlgValuation) -> AlgebraWitnessJson {
    AlgebraWitnessJson {
        algebra: algebra_to_json(alg),
        valuation: v
            .iter()
            .map(|(p, &a)| (p.clone(), alg.name(a).to_string()))
            .collect(),
    }
}

pub fn algebra_witness_from_json(
    doc: &AlgebraWitnessJson,
) -> Result<(H2GCAlgebra, AlgValuation), IoError> {
    let alg = algebra_from_json(&doc.algebra)?.to_h2gc();
    let v = doc
        .valuation
        .iter()
        .map(|(p, a)| {
            Ok((
                p.clone(),
                alg.elem(a)
                    .ok_or_else(|| AlgebraError::UnknownElement(a.clone()))?,
            ))
        })
        .collect::<Result<_, IoError>>()?;
    Ok((alg, v))
}

/// A model with the world where the formula fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KripkeWitnessJson {
    pub model: FrameJson,
    pub world: String,
}

pub fn kripke_witness_to_json(m: &KripkeModel, world: usize) -> KripkeWitnessJson {
    KripkeWitnessJson {
        model: model_to_json(m),
        world: m.frame.worlds()[world].clone(),
    }
}

pub fn kripke_witness_from_json(doc: &KripkeWitnessJson) -> Result<(KripkeModel, usize), IoError> {
    let m = model_from_json(&doc.model)?;
    let w = world_index(m.frame.worlds(), &doc.world)?;
    Ok((m, w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{check_h2gc, enumerate_h2gc};
    use crate::kripke::{enumerate_frames, up_sets};
    use crate::rough::tests::two_point_context;

    fn roundtrip<T: Serialize + for<'de> Deserialize<'de>>(doc: &T) -> String {
        let s = to_json(doc);
        let back: T = from_json(&s).unwrap();
        assert_eq!(to_json(&back), s);
        s
    }

    #[test]
    fn algebras_round_trip() {
        for alg in enumerate_h2gc(4, false).unwrap() {
            let doc = algebra_to_json(&alg);
            roundtrip(&doc);
            assert_eq!(algebra_from_json(&doc).unwrap(), LoadedAlgebra::H2gc(alg));
        }
    }

    #[test]
    fn algebra_loading() {
        let text = r#"{"elements":["0","u","1"],"order":[["0","u"],["u","1"]],
            "fdia":{"0":"0","u":"u","1":"1"},"pdia":{"0":"0","u":"0","1":"0"}}"#;
        let LoadedAlgebra::H2gc(a) = load_algebra(text).unwrap() else {
            panic!()
        };
        assert!(check_h2gc(&a));
        assert_eq!(a.hbox.0, vec![0, 1, 2]);
        assert_eq!(a.gbox.0, vec![2, 2, 2]);
        let plain = load_algebra(r#"{"elements":["1","0"],"order":[["0","1"]]}"#).unwrap();
        assert!(!plain.has_ops());
        assert_eq!(plain.heyting().name(plain.heyting().bottom()), "0");
        // Not monotone, so no right adjoint.
        let bad = r#"{"elements":["0","1"],"order":[["0","1"]],"fdia":{"0":"1","1":"0"},"pdia":{"0":"0","1":"1"}}"#;
        assert_eq!(
            load_algebra(bad),
            Err(IoError::NoAdjoint {
                given: "fdia",
                missing: "hbox"
            })
        );
        let partial = r#"{"elements":["0","1"],"order":[["0","1"]],"fdia":{"0":"0"},"hbox":{"0":"0","1":"1"}}"#;
        assert_eq!(
            load_algebra(partial),
            Err(AlgebraError::IncompleteTable("fdia".into(), "1".into()).into())
        );
        let one = r#"{"elements":["0","1"],"order":[["0","1"]],"fdia":{"0":"0","1":"1"}}"#;
        assert_eq!(load_algebra(one), Err(IoError::MissingPair("pdia/gbox")));
        assert!(matches!(load_algebra("{"), Err(IoError::Json(_))));
    }

    #[test]
    fn frames_round_trip() {
        for kind in [FrameKind::IntGc, FrameKind::Int2Gc, FrameKind::Fs] {
            for frame in enumerate_frames(kind, 2).unwrap() {
                let doc = frame_to_json(&frame);
                roundtrip(&doc);
                assert_eq!(frame_from_json(&doc).unwrap(), frame);
                for set in up_sets(frame.leq()) {
                    let m =
                        KripkeModel::new(frame.clone(), [("p".to_string(), set)].into()).unwrap();
                    assert_eq!(model_from_json(&model_to_json(&m)).unwrap(), m);
                }
            }
        }
    }

    #[test]
    fn frame_loading() {
        let text = r#"{"kind":"fs","worlds":["a","b","c"],"leq":[["a","b"],["b","c"]],"r":[]}"#;
        let f = load_frame(text).unwrap();
        assert!(f.leq().get(0, 2) && f.leq().get(1, 1) && !f.leq().get(2, 0));
        let m =
            r#"{"kind":"fs","worlds":["a","b"],"leq":[["a","b"]],"r":[],"valuation":{"p":["a"]}}"#;
        assert!(matches!(
            load_model(m),
            Err(IoError::Kripke(KripkeError::NotUpClosed { .. }))
        ));
        let m =
            r#"{"kind":"fs","worlds":["a","b"],"leq":[["a","b"]],"r":[],"valuation":{"p":["b"]}}"#;
        assert_eq!(load_model(m).unwrap().valuation["p"], 0b10);
        let missing = r#"{"kind":"int2gc","worlds":["a"],"leq":[],"r":[]}"#;
        assert!(matches!(
            load_frame(missing),
            Err(IoError::FrameFields { .. })
        ));
        let unknown = r#"{"kind":"fs","worlds":["a"],"leq":[["a","z"]],"r":[]}"#;
        assert_eq!(
            load_frame(unknown),
            Err(KripkeError::UnknownWorld("z".into()).into())
        );
        let dup = r#"{"kind":"fs","worlds":["a","a"],"leq":[],"r":[]}"#;
        assert_eq!(
            load_frame(dup),
            Err(KripkeError::DuplicateWorld("a".into()).into())
        );
    }

    #[test]
    fn rough_round_trip() {
        let (context, phi, psi) = two_point_context();
        let doc = RoughDoc {
            context,
            sets: [("phi".to_string(), phi), ("psi".to_string(), psi)].into(),
        };
        let json = rough_to_json(&doc);
        roundtrip(&json);
        assert_eq!(rough_from_json(&json).unwrap(), doc);
        assert_eq!(json.relation["x"]["y"], "b");
        let sparse = r#"{"algebra":{"elements":["0","1"],"order":[["0","1"]]},"universe":["x"],"relation":{}}"#;
        assert_eq!(load_rough(sparse).unwrap().context.relation, vec![vec![0]]);
        assert!(matches!(
            load_rough(sparse).unwrap().set("phi"),
            Err(IoError::UnknownSet(_))
        ));
    }

    #[test]
    fn witnesses_round_trip() {
        let alg = enumerate_h2gc(3, false).unwrap().nth(5).unwrap();
        let v: AlgValuation = [("p".to_string(), 1)].into();
        let doc = algebra_witness_to_json(&alg, &v);
        roundtrip(&doc);
        assert_eq!(algebra_witness_from_json(&doc).unwrap(), (alg, v));
    }
}
