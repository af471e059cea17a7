//! Exact-arithmetic toolkit for discretized configuration complexes.
//!
//! The crate builds the cell complexes `D_k(X)` of ordered `k`-tuples of
//! pairwise vertex-disjoint faces of a finite simplicial complex `X`, their
//! quotients `UD_k(X)` by the symmetric group, and the posets of ordered
//! partial partitions that index their faces. Homology is computed over the
//! integers with a sparse Smith normal form, and [`verify`] cross-checks the
//! closed-form Betti and Euler characteristic counts against those complexes.
//!
//! No floating point is used anywhere; every quantity is an exact integer or
//! rational.

pub mod combinatorics;
pub mod config;
pub mod error;
pub mod homology;
pub mod partitions;
pub mod series;
pub mod simplicial;
pub mod verify;

pub use error::{Error, Result};

/// Arbitrary-precision signed integer used for every count in the crate.
pub type Integer = num_bigint::BigInt;
