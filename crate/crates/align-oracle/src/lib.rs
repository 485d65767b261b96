//! Distance oracles for substring alignment queries.
//!
//! Given two strings `S` and `T`, the structures in this crate answer
//! "what is the optimal alignment score of `S[i..j)` and `T[a..b)`?" for
//! arbitrary substring pairs, much faster than recomputing the textbook
//! dynamic program per query. Everything is phrased as shortest paths in
//! the *alignment graph*: the `(m+1) x (n+1)` grid DAG whose horizontal,
//! vertical and (match-)diagonal edges encode insertions, deletions and
//! aligned character pairs.
//!
//! Three query backends are provided:
//!
//! * [`oracle::OracleIndex`], the main polylog-query oracle. It combines a
//!   recursive rectangle decomposition, per-piece shortest-path forests and
//!   additively weighted Voronoi diagrams of piece boundaries, located via
//!   persistent site sequences.
//! * [`sublinear::WarmupOracle`] in dense mode: per-piece boundary-to-boundary
//!   distance matrices queried with Dijkstra over piece cones.
//! * [`sublinear::WarmupOracle`] in compressed mode: the same matrices stored
//!   as Monge-compressed difference points with a dominance-sum index.
//!
//! [`grid::DpOracle`] is the brute-force reference implementation that grounds
//! all testing.
//!
//! The crate is `no_std` (with `alloc`); IO, the CLI and file formats live in
//! the companion `align-oracle-cli` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod decomp;
pub mod grid;
pub mod mssp;
pub mod oracle;
pub mod rng;
pub mod sublinear;
pub mod voronoi;

pub use grid::{AlignmentGraph, BuildError, CostModel, DpOracle, Vertex};
pub use oracle::{OracleIndex, OracleParams, QueryStats};
pub use sublinear::{StorageMode, WarmupOracle};
