//! Finite graph-limit computations on stepfunction graphons: densities,
//! cut and L1 norms, the neighborhood and similarity metrics, regularity
//! partitions, and VC-type dimensions of neighborhood families.

// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod densities;
pub mod error;
pub mod graph;
pub mod io;
pub mod kernel;
pub mod metrics;
pub mod norms;
pub mod partition;
pub mod regularity;
pub mod setsystems;
pub mod zoo;

pub use error::{Error, Result};
pub use graph::{blow_up, Bigraph, Graph};
pub use kernel::{
    bigraphon_from_bigraph, graphon_from_graph, operator_product, StepBigraphon, StepGraphon,
    StepKernel,
};
pub use norms::{cut_norm, cut_norm_auto, l1_norm, CutNormMode, CutNormValue};
pub use partition::{aggregate, refine, Partition};
