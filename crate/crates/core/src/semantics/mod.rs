//! Finite denotational semantics: carriers, algebra, models, and evaluation.
//!
//! Everything here is exhaustively enumerable. Types denote finite sets,
//! terms denote tabulated functions, and the two effect layers denote
//! finite monads connected by an inclusion. Because every carrier is
//! enumerable, semantic equality is decidable and disagreements come with
//! concrete environment witnesses.

mod algebra;
mod file;
mod fin;
mod model;
mod soundness;

pub use algebra::{AlgebraError, FinMonoid, FinSemiring, Submonoid};
pub use fin::{
    apply_encoded, decode_table, encode_table, guard_size, pair_index, power, product, sat_pow,
    unpair_index, FinFunction, FinSet, SizeBlowup,
};
pub use file::{serialize_model_file, ConstSpec, ModelFile, ModelFileError};
pub use model::{Model, ModelDiagnostic, SemanticsError};
pub use soundness::{check_model_soundness, SoundnessReport, SoundnessViolation};
