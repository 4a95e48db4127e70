//! Overlapping link communities as local minima of the normalised node cut Ψ.
//!
//! The crate is organised bottom-up:
//!
//! - [`graph`]: graph model, edge-list ingestion, node and link sets;
//! - [`psi`]: Ψ and its incremental updates under single-node moves;
//! - [`line_graph`]: incidence matrix, weighted line graph and Φ on it;
//! - [`greedy`]: seed-link exploration of the Ψ-landscape;
//! - [`oracle`]: exhaustive landscape, minimum certificate, Jaccard distance;
//! - [`hierarchy`]: overlap classification and the containment DAG;
//! - [`report`]: JSON run reports;
//! - [`cli`]: the `nodecut` command line.

pub mod cli;
pub mod community;
pub mod datasets;
pub mod error;
pub mod graph;
pub mod greedy;
pub mod hierarchy;
pub mod line_graph;
pub mod oracle;
pub mod psi;
pub mod report;

pub use community::Community;
pub use error::{Error, Result};
pub use graph::{load_edge_list, Graph, LinkId, LinkSet, NodeId, NodeSet};
pub use greedy::{run_all_seeds, run_from_seed, Exploration, ExploreOptions, TieBreakPolicy, Trajectory};
pub use psi::{psi, SubgraphState};
