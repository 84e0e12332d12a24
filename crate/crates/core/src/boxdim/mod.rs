//! Covering numbers and box-dimension estimates for finite sets on the circle.

mod cover;
mod difference;
mod export;
mod gaps;
mod profile;

pub use cover::{minimal_arc_cover, scaled_covering_check, scaled_covering_sweep, ScaledCoverCheck, SweepSummary};
pub use difference::{cell_difference, difference_set, DifferenceSet, DIFFERENCE_CELL_BITS, EXACT_DIFFERENCE_LIMIT};
pub use export::{profile_svg, write_profile_csv};
pub use gaps::{gap_profile, GapProfile};
pub use profile::{
    box_dim_estimate, covering_count, covering_profile, covering_profile_with, BoxDimEstimate, CoveringProfile,
    MAX_SCALE, MIN_SCALES,
};
