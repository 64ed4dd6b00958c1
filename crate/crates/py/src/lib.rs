//! Python bindings for the octree background model.

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyBytes;

use octree_bg::io::{self, Scenario};
use octree_bg::{Color, Error, EvalStats, Frame, Mask, ModelConfig, Octree, ReportRow};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io { .. } => PyIOError::new_err(e.to_string()),
        e => PyValueError::new_err(format!("{}: {e}", e.kind())),
    }
}

type Rgb = (u8, u8, u8);

fn rgb(c: Color) -> Rgb {
    (c.red, c.green, c.blue)
}

#[pyfunction]
fn quantize_color(color: Rgb, levels: u8) -> PyResult<Rgb> {
    if !(1..=8).contains(&levels) {
        return Err(to_py(Error::InvalidLevels(levels)));
    }
    Ok(rgb(octree_bg::quantize_color(color.into(), levels)))
}

#[pyfunction]
fn child_index(color: Rgb, bit_position: u8) -> PyResult<usize> {
    if bit_position > 7 {
        return Err(PyValueError::new_err("bit_position must be in 0..=7"));
    }
    Ok(octree_bg::child_index(color.into(), bit_position))
}

#[pyfunction]
fn region_of(x: u32, y: u32, width: u32, height: u32, grid_rows: u16, grid_cols: u16) -> PyResult<(u16, u16)> {
    if x >= width || y >= height || grid_rows == 0 || grid_cols == 0 {
        return Err(PyValueError::new_err("pixel outside frame or empty grid"));
    }
    Ok(octree_bg::region_of(x, y, width, height, grid_rows, grid_cols))
}

#[pyclass(name = "Octree")]
struct PyOctree {
    inner: Octree,
}

#[pymethods]
impl PyOctree {
    #[new]
    #[pyo3(signature = (depth = 4))]
    fn new(depth: u8) -> PyResult<Self> {
        Ok(PyOctree {
            inner: Octree::new(depth).map_err(to_py)?,
        })
    }

    #[getter]
    fn depth(&self) -> u8 {
        self.inner.depth()
    }

    fn store(&mut self, color: Rgb) {
        self.inner.store(color.into());
    }

    fn contains(&self, color: Rgb) -> bool {
        self.inner.contains(color.into())
    }

    fn __contains__(&self, color: Rgb) -> bool {
        self.contains(color)
    }

    fn prune(&self, new_depth: u8) -> PyResult<Self> {
        Ok(PyOctree {
            inner: self.inner.prune(new_depth).map_err(to_py)?,
        })
    }

    fn leaf_colors(&self) -> Vec<Rgb> {
        self.inner.leaf_colors().into_iter().map(rgb).collect()
    }

    fn node_count(&self) -> usize {
        self.inner.node_count()
    }

    fn leaf_count(&self) -> usize {
        self.inner.leaf_count()
    }

    fn is_empty(&self) -> bool {
        self.inner.is_empty()
    }

    fn to_bytes<'py>(&self, py: Python<'py>) -> Bound<'py, PyBytes> {
        PyBytes::new(py, &self.inner.to_bytes())
    }

    #[staticmethod]
    fn from_bytes(data: &[u8], depth: u8) -> PyResult<Self> {
        Ok(PyOctree {
            inner: Octree::from_bytes(data, depth).map_err(to_py)?,
        })
    }

    fn __eq__(&self, other: PyRef<'_, PyOctree>) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Octree(depth={}, leaves={})", self.inner.depth(), self.inner.leaf_count())
    }
}

/// Merges trees with the frequency threshold rule.
#[pyfunction]
fn merge_trees(roots: Vec<PyRef<'_, PyOctree>>, threshold: f64, levels: u8) -> PyResult<PyOctree> {
    let trees: Vec<Octree> = roots.iter().map(|t| t.inner.clone()).collect();
    Ok(PyOctree {
        inner: octree_bg::merge_trees(&trees, threshold, levels).map_err(to_py)?,
    })
}

#[pyclass(name = "Frame")]
struct PyFrame {
    inner: Frame,
}

#[pymethods]
impl PyFrame {
    /// Frame from packed row-major RGB bytes.
    #[new]
    fn new(width: u32, height: u32, data: &[u8]) -> PyResult<Self> {
        Ok(PyFrame {
            inner: Frame::from_rgb_bytes(width, height, data).map_err(to_py)?,
        })
    }

    #[staticmethod]
    fn filled(width: u32, height: u32, color: Rgb) -> Self {
        PyFrame {
            inner: Frame::filled(width, height, color.into()),
        }
    }

    #[getter]
    fn width(&self) -> u32 {
        self.inner.width()
    }

    #[getter]
    fn height(&self) -> u32 {
        self.inner.height()
    }

    fn get(&self, x: u32, y: u32) -> PyResult<Rgb> {
        self.check(x, y)?;
        Ok(rgb(self.inner.get(x, y)))
    }

    fn set(&mut self, x: u32, y: u32, color: Rgb) -> PyResult<()> {
        self.check(x, y)?;
        self.inner.set(x, y, color.into());
        Ok(())
    }

    fn to_bytes<'py>(&self, py: Python<'py>) -> Bound<'py, PyBytes> {
        PyBytes::new(py, &self.inner.to_rgb_bytes())
    }

    fn to_ppm<'py>(&self, py: Python<'py>) -> Bound<'py, PyBytes> {
        PyBytes::new(py, &io::write_ppm(&self.inner))
    }

    #[staticmethod]
    fn from_ppm(data: &[u8]) -> PyResult<Self> {
        Ok(PyFrame {
            inner: io::read_ppm(data).map_err(|e| to_py(e.into()))?,
        })
    }

    fn quantized(&self, levels: u8) -> PyResult<Self> {
        Ok(PyFrame {
            inner: octree_bg::cli::quantize_frame(&self.inner, levels).map_err(to_py)?,
        })
    }

    fn __repr__(&self) -> String {
        format!("Frame({}x{})", self.inner.width(), self.inner.height())
    }
}

impl PyFrame {
    fn check(&self, x: u32, y: u32) -> PyResult<()> {
        if x < self.inner.width() && y < self.inner.height() {
            Ok(())
        } else {
            Err(PyValueError::new_err(format!("pixel ({x}, {y}) outside frame")))
        }
    }
}

#[pyclass(name = "Mask")]
struct PyMask {
    inner: Mask,
}

#[pymethods]
impl PyMask {
    #[new]
    fn new(width: u32, height: u32, values: Vec<bool>) -> PyResult<Self> {
        Ok(PyMask {
            inner: Mask::new(width, height, values).map_err(to_py)?,
        })
    }

    #[getter]
    fn width(&self) -> u32 {
        self.inner.width()
    }

    #[getter]
    fn height(&self) -> u32 {
        self.inner.height()
    }

    /// Row-major foreground flags.
    fn values(&self) -> Vec<bool> {
        self.inner.values().to_vec()
    }

    fn is_foreground(&self, x: u32, y: u32) -> PyResult<bool> {
        if x >= self.inner.width() || y >= self.inner.height() {
            return Err(PyValueError::new_err(format!("pixel ({x}, {y}) outside mask")));
        }
        Ok(self.inner.is_foreground(x, y))
    }

    fn foreground_count(&self) -> usize {
        self.inner.foreground_count()
    }

    fn to_pgm<'py>(&self, py: Python<'py>) -> Bound<'py, PyBytes> {
        PyBytes::new(py, &io::write_mask_pgm(&self.inner))
    }

    #[staticmethod]
    fn from_pgm(data: &[u8]) -> PyResult<Self> {
        Ok(PyMask {
            inner: io::read_mask_pgm(data).map_err(|e| to_py(e.into()))?,
        })
    }

    fn __eq__(&self, other: PyRef<'_, PyMask>) -> bool {
        self.inner == other.inner
    }
}

#[pyclass(name = "BackgroundModel")]
struct PyBackgroundModel {
    inner: octree_bg::BackgroundModel,
}

#[pymethods]
impl PyBackgroundModel {
    #[staticmethod]
    #[pyo3(signature = (frames, levels = 4, threshold = 0.5, grid = (1, 1), group_size = 1, training_frames = 100))]
    fn train(
        frames: Vec<PyRef<'_, PyFrame>>,
        levels: u8,
        threshold: f64,
        grid: (u16, u16),
        group_size: usize,
        training_frames: usize,
    ) -> PyResult<Self> {
        let config = ModelConfig {
            levels,
            threshold,
            grid_rows: grid.0,
            grid_cols: grid.1,
            group_size,
            training_frames,
        };
        let frames: Vec<Frame> = frames.iter().map(|f| f.inner.clone()).collect();
        Ok(PyBackgroundModel {
            inner: octree_bg::build_background_model(&frames, &config).map_err(to_py)?,
        })
    }

    #[getter]
    fn levels(&self) -> u8 {
        self.inner.levels()
    }

    #[getter]
    fn threshold(&self) -> f64 {
        self.inner.threshold()
    }

    #[getter]
    fn grid(&self) -> (u16, u16) {
        self.inner.grid()
    }

    #[getter]
    fn frame_dims(&self) -> (u32, u32) {
        self.inner.frame_dims()
    }

    fn tree(&self, row: u16, col: u16) -> PyResult<PyOctree> {
        let (rows, cols) = self.inner.grid();
        if row >= rows || col >= cols {
            return Err(PyValueError::new_err("region outside grid"));
        }
        Ok(PyOctree {
            inner: self.inner.tree(row, col).clone(),
        })
    }

    fn detect(&self, frame: PyRef<'_, PyFrame>) -> PyResult<PyMask> {
        Ok(PyMask {
            inner: octree_bg::detect_octree(&self.inner, &frame.inner).map_err(to_py)?,
        })
    }

    fn to_bytes<'py>(&self, py: Python<'py>) -> Bound<'py, PyBytes> {
        PyBytes::new(py, &self.inner.to_bytes())
    }

    #[staticmethod]
    fn from_bytes(data: &[u8]) -> PyResult<Self> {
        Ok(PyBackgroundModel {
            inner: octree_bg::BackgroundModel::from_bytes(data).map_err(to_py)?,
        })
    }

    fn save(&self, path: std::path::PathBuf) -> PyResult<()> {
        self.inner.save(path).map_err(to_py)
    }

    #[staticmethod]
    fn load(path: std::path::PathBuf) -> PyResult<Self> {
        Ok(PyBackgroundModel {
            inner: octree_bg::BackgroundModel::load(path).map_err(to_py)?,
        })
    }
}

#[pyfunction]
fn detect_frame_diff(previous: PyRef<'_, PyFrame>, current: PyRef<'_, PyFrame>, diff_threshold: u8) -> PyResult<PyMask> {
    Ok(PyMask {
        inner: octree_bg::detect_frame_diff(&previous.inner, &current.inner, diff_threshold).map_err(to_py)?,
    })
}

#[pyclass(name = "RunningAverage")]
struct PyRunningAverage {
    inner: octree_bg::RunningAverage,
}

#[pymethods]
impl PyRunningAverage {
    #[new]
    fn new() -> Self {
        PyRunningAverage {
            inner: octree_bg::RunningAverage::new(),
        }
    }

    #[getter]
    fn frames_seen(&self) -> u64 {
        self.inner.frames_seen()
    }

    #[pyo3(signature = (frame, diff_threshold = 30))]
    fn apply(&mut self, frame: PyRef<'_, PyFrame>, diff_threshold: u8) -> PyResult<PyMask> {
        Ok(PyMask {
            inner: self.inner.apply(&frame.inner, diff_threshold).map_err(to_py)?,
        })
    }
}

#[pyclass(name = "EvalStats")]
struct PyEvalStats {
    inner: EvalStats,
}

#[pymethods]
impl PyEvalStats {
    #[new]
    #[pyo3(signature = (true_neg = 0, true_pos = 0, false_neg = 0, false_pos = 0))]
    fn new(true_neg: u64, true_pos: u64, false_neg: u64, false_pos: u64) -> Self {
        PyEvalStats {
            inner: EvalStats::new(true_neg, true_pos, false_neg, false_pos),
        }
    }

    #[getter]
    fn true_neg(&self) -> u64 {
        self.inner.true_neg
    }

    #[getter]
    fn true_pos(&self) -> u64 {
        self.inner.true_pos
    }

    #[getter]
    fn false_neg(&self) -> u64 {
        self.inner.false_neg
    }

    #[getter]
    fn false_pos(&self) -> u64 {
        self.inner.false_pos
    }

    fn accumulate(&mut self, predicted: PyRef<'_, PyMask>, truth: PyRef<'_, PyMask>) -> PyResult<()> {
        self.inner.accumulate(&predicted.inner, &truth.inner).map_err(to_py)
    }

    /// `(p0, r0, f0)`, each `None` when undefined.
    fn scores(&self) -> (Option<f64>, Option<f64>, Option<f64>) {
        let s = self.inner.scores();
        (s.p0, s.r0, s.f0)
    }

    fn __repr__(&self) -> String {
        let s = self.inner;
        format!(
            "EvalStats(tn={}, tp={}, fn={}, fp={})",
            s.true_neg, s.true_pos, s.false_neg, s.false_pos
        )
    }
}

#[pyfunction]
fn f0_score(stats: PyRef<'_, PyEvalStats>) -> (Option<f64>, Option<f64>, Option<f64>) {
    stats.scores()
}

#[pyfunction]
fn emit_report(rows: Vec<(String, String, PyRef<'_, PyEvalStats>)>) -> String {
    let rows: Vec<ReportRow> = rows
        .iter()
        .map(|(m, d, s)| ReportRow::new(m.as_str(), d.as_str(), s.inner))
        .collect();
    octree_bg::emit_report(&rows)
}

/// Returns `(frames, truth_masks)` for `static`, `bimodal_flicker` or
/// `moving_box`.
#[pyfunction]
#[pyo3(signature = (scenario, width, height, frames, seed = 0))]
fn generate_synthetic(
    scenario: &str,
    width: u32,
    height: u32,
    frames: usize,
    seed: u64,
) -> PyResult<(Vec<PyFrame>, Vec<PyMask>)> {
    let scenario = match scenario {
        "static" => Scenario::Static,
        "bimodal_flicker" => Scenario::BimodalFlicker,
        "moving_box" => Scenario::MovingBox,
        other => return Err(PyValueError::new_err(format!("unknown scenario {other:?}"))),
    };
    let video = io::generate_synthetic(&scenario.params(width, height, frames, seed)).map_err(to_py)?;
    Ok((
        video.frames.into_iter().map(|inner| PyFrame { inner }).collect(),
        video.truth.into_iter().map(|inner| PyMask { inner }).collect(),
    ))
}

#[pymodule]
fn octree_bg_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyOctree>()?;
    m.add_class::<PyFrame>()?;
    m.add_class::<PyMask>()?;
    m.add_class::<PyBackgroundModel>()?;
    m.add_class::<PyRunningAverage>()?;
    m.add_class::<PyEvalStats>()?;
    m.add_function(wrap_pyfunction!(quantize_color, m)?)?;
    m.add_function(wrap_pyfunction!(child_index, m)?)?;
    m.add_function(wrap_pyfunction!(region_of, m)?)?;
    m.add_function(wrap_pyfunction!(merge_trees, m)?)?;
    m.add_function(wrap_pyfunction!(detect_frame_diff, m)?)?;
    m.add_function(wrap_pyfunction!(f0_score, m)?)?;
    m.add_function(wrap_pyfunction!(emit_report, m)?)?;
    m.add_function(wrap_pyfunction!(generate_synthetic, m)?)?;
    Ok(())
}
