//! Decision procedures for uniqueness and simplicity of relative Cuntz-Pimsner
//! algebras over finite-dimensional coefficient algebras.
//!
//! A correspondence over `A = ⊕_i M_{d_i}` is presented by its dimension
//! sequence and a square matrix of nonnegative multiplicities. Ideals of `A`
//! are subsets of the spectrum `{0..k-1}`, and every analytic question handled
//! here (uniqueness of the relative Cuntz-Pimsner representation, simplicity,
//! gauge-invariant ideal structure) reduces to combinatorics of the dual graph
//! drawn on that spectrum. The `fintop`/`digraph`/`conditions` layers work over
//! arbitrary finite topological vertex spaces so that the graph-level freeness
//! and aperiodicity conditions can be exercised on their own.
//!
//! Every fast decision rule is paired with a literal, quantifier-by-quantifier
//! oracle (`oracle`, `bimodule`) and the test suites insist on agreement.

pub mod bimodule;
pub mod conditions;
pub mod corr;
pub mod digraph;
pub mod fintop;
pub mod instance;
pub mod mask;
pub mod oracle;
pub mod report;
pub mod sweep;
pub mod verdict;
