//! Finite combinatorics of generic selector-function structures.
//!
//! The crate provides:
//!
//! - [`tree`]: finite trees of finite-support functions on end-segments of
//!   levels, with tree order, meet, lexicographic order, restrictions,
//!   concatenation, canonical inclusions, and the all-zeros path;
//! - [`structure`]: finite two-sorted structures where function-element
//!   tuples act as selectors for an equivalence relation, with validation,
//!   generated substructures, embeddings, and seeded random generation;
//! - [`logic`]: quantifier-free terms, literals, and conjunctive diagrams
//!   over a structure, with normalization, evaluation, and a text format;
//! - [`amalgam`]: the constructive strong amalgamation of two extensions
//!   over a common base, joint embedding, and amalgamation-class checks;
//! - [`oracle`]: a bounded-search decision procedure for satisfiability of
//!   a diagram over a base structure in the generic model;
//! - [`indep`]: definable closure, the intersection-based independence
//!   relation, generic extensions, finite Morley sequences, and dividing
//!   checks along those sequences;
//! - [`scenarios`]: end-to-end verifications of specific configurations
//!   (arrays, forking/dividing patterns, transitivity failure, and the
//!   independence-theorem amalgam) producing structured reports.

pub mod amalgam;
pub mod indep;
pub mod logic;
pub mod oracle;
pub mod report;
pub mod rng;
pub mod scenarios;
pub mod structure;
pub mod tree;

pub use report::{Check, Report};
pub use structure::{BaseMap, ElemId, FinStructure, Sort, SortedTuple, StructureBuilder};
