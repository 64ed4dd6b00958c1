//! Frame and mask files, numbered frame directories, and synthetic video.

pub mod pnm;
pub mod synth;

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::frame::{ensure_dims, Frame, Mask};

pub use pnm::{read_mask_pgm, read_ppm, write_mask_pgm, write_ppm, PnmError};
pub use synth::{generate_synthetic, Background, MovingBox, Scenario, SynthParams, SyntheticVideo};

pub fn load_ppm(path: impl AsRef<Path>) -> Result<Frame> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    read_ppm(&bytes).map_err(|e| Error::from(e).in_file(path))
}

pub fn save_ppm(path: impl AsRef<Path>, frame: &Frame) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, write_ppm(frame)).map_err(|e| Error::io(path, e))
}

pub fn load_mask(path: impl AsRef<Path>) -> Result<Mask> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    read_mask_pgm(&bytes).map_err(|e| Error::from(e).in_file(path))
}

pub fn save_mask(path: impl AsRef<Path>, mask: &Mask) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, write_mask_pgm(mask)).map_err(|e| Error::io(path, e))
}

/// Conventional name of the `index`-th frame (0-based) of a sequence.
pub fn frame_file_name(index: usize, extension: &str) -> String {
    format!("frame_{:06}.{extension}", index + 1)
}

/// Sorted file names in `dir` with the given extension.
pub fn list_files(dir: impl AsRef<Path>, extension: &str) -> Result<Vec<String>> {
    let dir = dir.as_ref();
    let mut names = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let entry = entry.map_err(|e| Error::io(dir, e))?;
        let path = entry.path();
        if path.is_file() && path.extension().is_some_and(|e| e == extension) {
            if let Some(name) = path.file_name().and_then(|n| n.to_str()) {
                names.push(name.to_owned());
            }
        }
    }
    names.sort();
    Ok(names)
}

/// A directory of PPM frames ordered by file name.
#[derive(Clone, Debug)]
pub struct FrameSequence {
    dir: PathBuf,
    names: Vec<String>,
}

impl FrameSequence {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        let names = list_files(&dir, "ppm")?;
        Ok(FrameSequence { dir, names })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn path(&self, index: usize) -> PathBuf {
        self.dir.join(&self.names[index])
    }

    /// Loads the first `limit` frames (all when `None`), requiring uniform
    /// dimensions.
    pub fn load(&self, limit: Option<usize>) -> Result<Vec<Frame>> {
        let count = limit.map_or(self.len(), |n| n.min(self.len()));
        let mut frames: Vec<Frame> = Vec::with_capacity(count);
        for i in 0..count {
            let path = self.path(i);
            let frame = load_ppm(&path)?;
            if let Some(first) = frames.first() {
                ensure_dims(first.dims(), frame.dims()).map_err(|e| e.in_file(&path))?;
            }
            frames.push(frame);
        }
        Ok(frames)
    }
}

/// Writes frames as `frame_000001.ppm`, ... into `dir`.
pub fn save_sequence(dir: impl AsRef<Path>, frames: &[Frame]) -> Result<()> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    for (i, f) in frames.iter().enumerate() {
        save_ppm(dir.join(frame_file_name(i, "ppm")), f)?;
    }
    Ok(())
}

/// Writes masks as `frame_000001.pgm`, ... into `dir`.
pub fn save_masks(dir: impl AsRef<Path>, masks: &[Mask]) -> Result<()> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    for (i, m) in masks.iter().enumerate() {
        save_mask(dir.join(frame_file_name(i, "pgm")), m)?;
    }
    Ok(())
}
