//! Monthly transaction graphs for UTXO and account-based cryptocurrencies.
//!
//! The crate turns normalized transaction records into one graph per calendar
//! month (`MonthlyGraph`) and a running union of those graphs
//! (`CumulativeGraph`), then measures them: size, density, edge-to-vertex
//! ratio, clustering, maximum clique, degree assortativity, repetition ratios,
//! power-law degree exponents, edge-vs-node power models and correlation with
//! a price series.
//!
//! Module map:
//!
//! - [`ingest`]: record formats (JSONL, CSV), month arithmetic, bucketing.
//! - [`explorer`]: JSON block-explorer client with retry, rate limiting and
//!   resumable range fetches.
//! - [`graph`]: address interning, graph construction, degree sequences,
//!   edge sampling and snapshots.
//! - [`adjacency`]: compact undirected CSR graph shared by the metric passes.
//! - [`metrics`]: per-graph structural measures.
//! - [`fitting`]: power-law and power-model fitting, growth rates, correlation.
//! - [`pipeline`]: the monthly run and its report files.
//! - [`synthetic`]: seeded dataset generators used for testing and demos.

pub mod adjacency;
pub mod explorer;
pub mod fitting;
pub mod graph;
pub mod ingest;
pub mod metrics;
pub mod pipeline;
pub mod synthetic;

pub use adjacency::UndirectedGraph;
pub use graph::{AddressTable, CumulativeGraph, GraphView, MonthlyGraph, NodeId};
pub use ingest::{MonthIndex, TxRecord, YearMonth};
