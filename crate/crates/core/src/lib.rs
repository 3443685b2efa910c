//! Finite models and Hilbert proofs for intuitionistic logics with two
//! Galois connections, written with tense operators `F`, `G`, `P`, `H`.

pub mod alg_semantics;
pub mod algebra;
pub mod canonical;
pub mod formula;
pub mod io;
pub mod kripke;
pub mod proof;
pub mod rough;
