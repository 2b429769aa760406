//! Dissemination subgraphs of random networks.
//!
//! Every node of an undirected graph `G` picks one neighbor, and with
//! probability `alpha` a second one. The union of those picks is the
//! dissemination subgraph `D`, on which information is flooded from a single
//! originator. This crate builds `G` and `D`, simulates flooding on `D`
//! (optionally with lossy transmissions), and evaluates the generating-function
//! predictions for the uniform choice rule so the two can be compared.

pub mod analytics;
pub mod degree;
pub mod dissemination;
pub mod error;
pub mod generators;
pub mod graph;
pub mod harness;
pub mod heuristics;
pub mod plot;
pub mod rng;

pub use degree::{DegreeModel, ModelKind, Moments};
pub use error::{Error, Result};
pub use graph::{ComponentLabeling, Graph, NodeId};
pub use heuristics::{ChoiceTable, Heuristic};
