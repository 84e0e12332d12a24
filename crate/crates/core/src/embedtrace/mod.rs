//! From an affine embedding of one self-similar set into another to the
//! induced multi-rotation orbit and its dimension threshold.

mod induced;
mod instance;
mod threshold;
mod trace;

pub use induced::{dimension_chain_report, induced_orbit, induced_steps, DimensionChain, InducedOrbit};
pub use instance::{coding_of_point, EmbeddingInstance, SSC_DEPTH};
pub use threshold::{rank_box_bound, threshold_c, two_step_box_bound};
pub use trace::{sn_sequence, Trace, TraceEntry};
