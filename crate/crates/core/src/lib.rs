//! Background modeling with merged octree color quantization.
//!
//! A background model is built by storing the quantized colors of each
//! training frame (or group of frames) in a fixed-depth octree, then merging
//! the per-frame trees so that only colors present in at least a threshold
//! fraction of them survive. Incoming pixels whose quantized color is absent
//! from the merged tree of their region are labeled foreground.
//!
//! All tree operations use integer and bitwise arithmetic only.
//!
//! The model is built once from a training segment; there is no online
//! update of a trained model.

pub mod cli;
pub mod color;
pub mod detect;
pub mod error;
pub mod eval;
pub mod frame;
pub mod io;
pub mod model;
pub mod octree;

pub use color::{child_index, quantize_color, Color};
pub use detect::{detect_frame_diff, detect_octree, RunningAverage};
pub use error::{Error, Result};
pub use eval::{emit_report, f0_score, EvalStats, ReportRow, Scores};
pub use frame::{Frame, Mask};
pub use model::{
    build_background_model, build_frame_tree, merge_trees, region_of, BackgroundModel,
    ModelConfig,
};
pub use octree::Octree;

/// Deepest supported tree: one level per bit of an 8-bit channel.
pub const MAX_LEVELS: u8 = 8;

pub(crate) fn check_levels(levels: u8) -> Result<u8> {
    if (1..=MAX_LEVELS).contains(&levels) {
        Ok(levels)
    } else {
        Err(Error::InvalidLevels(levels))
    }
}
