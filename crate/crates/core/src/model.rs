//! Training: per-group region trees merged into a frequency-thresholded
//! background model, plus the binary model file codec.

use std::path::Path;

use crate::color::Color;
use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::octree::{self, Octree};

/// Parameters controlling how a background model is trained.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelConfig {
    /// Tree depth, i.e. bit planes kept per channel.
    pub levels: u8,
    /// Minimum fraction of group trees that must hold a color.
    pub threshold: f64,
    pub grid_rows: u16,
    pub grid_cols: u16,
    /// Frames pooled into one tree before merging.
    pub group_size: usize,
    /// Leading frames used for training; later frames are ignored.
    pub training_frames: usize,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            levels: 4,
            threshold: 0.5,
            grid_rows: 1,
            grid_cols: 1,
            group_size: 1,
            training_frames: 100,
        }
    }
}

impl ModelConfig {
    pub fn validate(&self) -> Result<()> {
        crate::check_levels(self.levels)?;
        check_threshold(self.threshold)?;
        if self.grid_rows == 0 || self.grid_cols == 0 {
            return Err(Error::InvalidConfig(format!(
                "grid must be at least 1x1, got {}x{}",
                self.grid_rows, self.grid_cols
            )));
        }
        if self.group_size == 0 {
            return Err(Error::InvalidConfig("group size must be positive".into()));
        }
        if self.training_frames < self.group_size {
            return Err(Error::InvalidConfig(format!(
                "training frames ({}) must be at least the group size ({})",
                self.training_frames, self.group_size
            )));
        }
        Ok(())
    }
}

fn check_threshold(threshold: f64) -> Result<f64> {
    if threshold > 0.0 && threshold <= 1.0 {
        Ok(threshold)
    } else {
        Err(Error::InvalidThreshold(threshold))
    }
}

/// Grid cell `(row, col)` owning pixel `(x, y)`.
///
/// Cells are assigned by integer division; the last row and column absorb
/// any remainder.
pub fn region_of(x: u32, y: u32, width: u32, height: u32, grid_rows: u16, grid_cols: u16) -> (u16, u16) {
    debug_assert!(x < width && y < height);
    let row = (y as u64 * grid_rows as u64 / height as u64).min(grid_rows as u64 - 1);
    let col = (x as u64 * grid_cols as u64 / width as u64).min(grid_cols as u64 - 1);
    (row as u16, col as u16)
}

/// Row-major region index for every pixel of a frame.
#[derive(Clone, Debug)]
pub(crate) struct RegionMap {
    width: u32,
    height: u32,
    regions: usize,
    index: Vec<u32>,
}

impl RegionMap {
    pub(crate) fn new(width: u32, height: u32, grid_rows: u16, grid_cols: u16) -> Self {
        let mut index = Vec::with_capacity(width as usize * height as usize);
        for y in 0..height {
            for x in 0..width {
                let (r, c) = region_of(x, y, width, height, grid_rows, grid_cols);
                index.push(r as u32 * grid_cols as u32 + c as u32);
            }
        }
        RegionMap {
            width,
            height,
            regions: grid_rows as usize * grid_cols as usize,
            index,
        }
    }

    pub(crate) fn index(&self) -> &[u32] {
        &self.index
    }

    /// One tree per region holding every quantized color of `group`.
    fn build_trees(&self, group: &[Frame], levels: u8) -> Result<Vec<Octree>> {
        let mut trees = vec![Octree::new(levels)?; self.regions];
        for frame in group {
            frame.ensure_dims((self.width, self.height))?;
            for (&color, &region) in frame.pixels().iter().zip(&self.index) {
                trees[region as usize].store(color);
            }
        }
        Ok(trees)
    }
}

/// Tree of every quantized color in `frames` that falls in `region`.
pub fn build_frame_tree(frames: &[Frame], region: (u16, u16), config: &ModelConfig) -> Result<Octree> {
    config.validate()?;
    let first = frames
        .first()
        .ok_or(Error::NotEnoughFrames { needed: 1, found: 0 })?;
    let (width, height) = first.dims();
    let mut tree = Octree::new(config.levels)?;
    for frame in frames {
        frame.ensure_dims((width, height))?;
        for y in 0..height {
            for x in 0..width {
                if region_of(x, y, width, height, config.grid_rows, config.grid_cols) == region {
                    tree.store(frame.get(x, y));
                }
            }
        }
    }
    Ok(tree)
}

/// Merges `roots` so that a path survives iff it appears in at least
/// `threshold` of all trees (empty trees count in the denominator).
pub fn merge_trees(roots: &[Octree], threshold: f64, levels: u8) -> Result<Octree> {
    check_threshold(threshold)?;
    crate::check_levels(levels)?;
    if let Some(t) = roots.iter().find(|t| t.depth() != levels) {
        return Err(Error::DepthMismatch {
            expected: levels,
            found: t.depth(),
        });
    }
    let refs: Vec<&Octree> = roots.iter().collect();
    octree::merge(&refs, threshold)
}

/// Trains a model from the leading `config.training_frames` frames.
///
/// Frames are split into consecutive groups of `config.group_size`; a
/// trailing partial group is discarded.
pub fn build_background_model(frames: &[Frame], config: &ModelConfig) -> Result<BackgroundModel> {
    config.validate()?;
    let training = &frames[..frames.len().min(config.training_frames)];
    if training.len() < config.group_size {
        return Err(Error::NotEnoughFrames {
            needed: config.group_size,
            found: training.len(),
        });
    }
    let (width, height) = training[0].dims();
    let map = RegionMap::new(width, height, config.grid_rows, config.grid_cols);

    let groups = training.len() / config.group_size;
    let mut per_region: Vec<Vec<Octree>> = (0..map.regions).map(|_| Vec::with_capacity(groups)).collect();
    for group in training.chunks_exact(config.group_size) {
        for (region, tree) in map.build_trees(group, config.levels)?.into_iter().enumerate() {
            per_region[region].push(tree);
        }
    }

    let trees = per_region
        .iter()
        .map(|ts| merge_trees(ts, config.threshold, config.levels))
        .collect::<Result<Vec<_>>>()?;

    Ok(BackgroundModel {
        levels: config.levels,
        threshold: config.threshold,
        grid_rows: config.grid_rows,
        grid_cols: config.grid_cols,
        width,
        height,
        trees,
    })
}

const MAGIC: &[u8; 4] = b"OBGM";
const FORMAT_VERSION: u8 = 1;
const HEADER_LEN: usize = 4 + 1 + 1 + 2 + 2 + 4 + 4 + 2;

/// Merged background trees for each region of a fixed-size frame.
///
/// Only the parameters recorded in the model file are kept; group size and
/// training length matter during training only.
#[derive(Clone, Debug, PartialEq)]
pub struct BackgroundModel {
    levels: u8,
    threshold: f64,
    grid_rows: u16,
    grid_cols: u16,
    width: u32,
    height: u32,
    trees: Vec<Octree>,
}

impl BackgroundModel {
    pub fn levels(&self) -> u8 {
        self.levels
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn grid(&self) -> (u16, u16) {
        (self.grid_rows, self.grid_cols)
    }

    pub fn frame_dims(&self) -> (u32, u32) {
        (self.width, self.height)
    }

    /// Region trees in row-major order.
    pub fn trees(&self) -> &[Octree] {
        &self.trees
    }

    pub fn tree(&self, row: u16, col: u16) -> &Octree {
        &self.trees[row as usize * self.grid_cols as usize + col as usize]
    }

    /// Whether `color` at pixel `(x, y)` belongs to the background.
    pub fn is_background(&self, x: u32, y: u32, color: Color) -> bool {
        let (r, c) = region_of(x, y, self.width, self.height, self.grid_rows, self.grid_cols);
        self.tree(r, c).contains(color)
    }

    pub(crate) fn region_map(&self) -> RegionMap {
        RegionMap::new(self.width, self.height, self.grid_rows, self.grid_cols)
    }

    /// Encodes the model in the little-endian `OBGM` format.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_LEN + self.trees.iter().map(|t| t.node_count() + 1).sum::<usize>());
        out.extend_from_slice(MAGIC);
        out.push(FORMAT_VERSION);
        out.push(self.levels);
        out.extend_from_slice(&self.grid_rows.to_le_bytes());
        out.extend_from_slice(&self.grid_cols.to_le_bytes());
        out.extend_from_slice(&self.width.to_le_bytes());
        out.extend_from_slice(&self.height.to_le_bytes());
        let fixed = (self.threshold * 10_000.0).round().clamp(0.0, 10_000.0) as u16;
        out.extend_from_slice(&fixed.to_le_bytes());
        for tree in &self.trees {
            out.push(u8::from(!tree.is_empty()));
            tree.write_preorder(&mut out);
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < HEADER_LEN {
            return Err(Error::ModelFormat(format!(
                "header needs {HEADER_LEN} bytes, file has {}",
                bytes.len()
            )));
        }
        if &bytes[0..4] != MAGIC {
            return Err(Error::ModelFormat("unknown magic".into()));
        }
        if bytes[4] != FORMAT_VERSION {
            return Err(Error::ModelFormat(format!("unsupported version {}", bytes[4])));
        }
        let levels = crate::check_levels(bytes[5])?;
        let u16_at = |i: usize| u16::from_le_bytes([bytes[i], bytes[i + 1]]);
        let u32_at = |i: usize| u32::from_le_bytes([bytes[i], bytes[i + 1], bytes[i + 2], bytes[i + 3]]);
        let grid_rows = u16_at(6);
        let grid_cols = u16_at(8);
        let width = u32_at(10);
        let height = u32_at(14);
        let fixed = u16_at(18);
        if grid_rows == 0 || grid_cols == 0 {
            return Err(Error::ModelFormat("zero grid dimension".into()));
        }
        if fixed == 0 || fixed > 10_000 {
            return Err(Error::ModelFormat(format!("threshold {fixed} out of range")));
        }

        let regions = grid_rows as usize * grid_cols as usize;
        let mut trees = Vec::with_capacity(regions.min(bytes.len()));
        let mut pos = HEADER_LEN;
        for region in 0..regions {
            let flag = *bytes
                .get(pos)
                .ok_or_else(|| Error::ModelFormat(format!("missing record for region {region}")))?;
            pos += 1;
            match flag {
                0 => trees.push(Octree::new(levels)?),
                1 => {
                    let (tree, used) = Octree::read_preorder(&bytes[pos..], levels)
                        .map_err(|e| Error::ModelFormat(format!("region {region}: {e}")))?;
                    pos += used;
                    trees.push(tree);
                }
                other => {
                    return Err(Error::ModelFormat(format!(
                        "region {region}: bad presence flag {other}"
                    )))
                }
            }
        }
        if pos != bytes.len() {
            return Err(Error::ModelFormat(format!("{} trailing bytes", bytes.len() - pos)));
        }
        Ok(BackgroundModel {
            levels,
            threshold: fixed as f64 / 10_000.0,
            grid_rows,
            grid_cols,
            width,
            height,
            trees,
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_bytes()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        Self::from_bytes(&bytes).map_err(|e| e.in_file(path))
    }
}
