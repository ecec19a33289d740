//! The Grassmannian tower over a point: `Gr_0 = Grass_r(k^r ⊕ k^r)` down to
//! `Gr_j = Grass_{r−2j}(F^1 ⊕ F^2)` over pairs of partial flags of type
//! `(1^j, r−2j, 1^j)`, the divisors `D_i^{[j]}`, the maps `φ_j`, section
//! spaces, lifts and the pipeline carrying a splitting section of
//! `Y = Flag(k^r)²` down to `Gr_0`.
//!
//! Chart conventions. Each flag is the column flag of a block lower
//! unipotent frame `M_i` (identity diagonal blocks, zeros above them). The
//! fibre point `K = ker q ⊂ F^1 ⊕ F^2` is the column span of a `2n × n`
//! matrix, written in the basis of frame columns `j..r−j−1` of `M_1` then of
//! `M_2`, with an identity at the pivot rows. The pivots are the first basis
//! vectors of both summands followed by the pivots of the next level, so the
//! image of `φ_{j+1}` lies in the chart. Variables are ordered flag 1, flag
//! 2, fibre, each column-major.

mod level;
mod lift;
mod phi;
mod pipeline;

pub use level::{build_tower, divisor_section, expected_dim, TowerLevel};
pub use lift::{lift_section, section_space, Restriction, SectionSpace};
pub use phi::{phi_chart_map, phi_inverse};
pub use pipeline::{
    corollary45_pipeline, default_sigma_y, LevelReport, PipelineOptions, SplitStatus, TowerReport, SPLIT_CELL_LIMIT,
};

use crate::gfpoly::PolyError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TowerError {
    #[error("OutsideBirationalLocus: {0}")]
    OutsideBirationalLocus(String),
    #[error("LiftFailed: {0}")]
    LiftFailed(String),
    #[error("PipelineBroken at level {level}: {reason}")]
    PipelineBroken { level: usize, reason: String },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("rank {0} is below 2")]
    BadRank(usize),
    #[error("bad index: {0}")]
    BadIndex(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}
