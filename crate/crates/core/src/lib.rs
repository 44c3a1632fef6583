//! Core library of the q2cert toolkit: decide whether a dense graph admits a
//! symmetric matrix realization with exactly two distinct eigenvalues, and
//! emit independently verifiable certificates.
//!
//! The crate is organized around the stages of the decision procedure:
//!
//! * [`graph`] — bitset graphs, the graph6 codec, elementary operations and
//!   special-family recognizers;
//! * [`rat`] — exact rational matrices and polynomials;
//! * [`structure`] — complement-side structure theory: duplicate-neighborhood
//!   simplification and the spanning-split test;
//! * [`partition`] — the balanced-partition engine and join decompositions;
//! * [`matching`] — Hall-style certification of spanning `K_{n/2} □ K₂`
//!   subgraphs;
//! * [`factory`] — explicit matrix constructions, isospectral lifts, and the
//!   pattern-constrained two-eigenvalue search;
//! * [`verifier`] — independent re-verification (pattern, spectrum, strong
//!   spectral property);
//! * [`oracle`] — small-graph ground truth (bounds and enumeration);
//! * [`cert`] / [`pipeline`] — certificates, the decision procedure, batch
//!   runs, and the conjecture sweep.

pub mod cert;
pub mod factory;
pub mod graph;
pub mod matching;
pub mod oracle;
pub mod partition;
pub mod pipeline;
pub mod rat;
pub mod structure;
pub mod verifier;

// re-exports are completed as modules land
pub use graph::{Graph, GraphError, PartiteSplit, SpecialFamily};
pub use verifier::{MatrixData, SspReport, SspVerdict, Tolerances};
