//! Nowhere-zero 3-flow tooling: group connectivity of multigraphs, spanning
//! tree packing, ⟨Z3⟩-reduction and the gadget constructions used to build
//! highly connected graphs that are not Z3-connected.

pub mod canon;
pub mod connectivity;
pub mod flow;
pub mod format;
pub mod gadgets;
pub mod graph;
pub mod oracle;
pub mod orient;
pub mod random;
pub mod reduce;
pub mod report;
pub mod search;
pub mod suites;
pub mod treepack;

pub use graph::{CutCertificate, GraphError, Multigraph};
