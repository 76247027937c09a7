//! Core toolkit for a simply typed λ-calculus extended with two monadic type
//! constructors: a strong monad `T` and a *central* submonad `S` that embeds
//! into `T` via `iota` and commutes with every `T`-computation.
//!
//! The crate is organised as a pipeline:
//!
//! * [`syntax`] — types, nameless (de Bruijn) terms, parsing, printing,
//!   substitution.
//! * [`theory`] — equational theories (ground types, type axioms, constants,
//!   term axioms), type equality by congruence closure, translations between
//!   theories.
//! * [`typecheck`] — bidirectional-free inference with conversion at every
//!   elimination.
//! * [`equiv`] — a normalizer with replayable traces and a budgeted
//!   equality decision procedure (`Equal` / `Distinct` / `Unknown`).
//! * [`semantics`] — finite-set models: carriers, monoids, semirings,
//!   interpretation of types and terms, soundness fuzzing.
//! * [`centre`] — finite strong monads, centre computation by exhaustive
//!   interchange testing, monad-law suites, and the dihedral
//!   non-centralisability demonstration.
//!
//! Supporting modules: [`fixtures`] (bundled monoids, theories, and models)
//! and [`fuzz`] (seeded generators for well-typed terms and derivable
//! rewrites), both used by the CLI and the test suites.

pub mod centre;
pub mod equiv;
pub mod fixtures;
pub mod fuzz;
pub mod semantics;
pub mod syntax;
pub mod theory;
pub mod typecheck;

/// Default budget for the equality search, in explored rewrite states.
pub const DEFAULT_BUDGET: usize = 2000;

/// Default cap on the cardinality of any materialized finite carrier.
pub const DEFAULT_SIZE_CAP: usize = 1_000_000;

/// Default family of test-object sizes for centrality checks.
pub const DEFAULT_TEST_SIZES: &[usize] = &[1, 2];
