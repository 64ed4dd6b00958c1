//! Command-line front end: `quantize`, `train`, `detect`, `eval`, `synth`
//! and `bench`.
//!
//! Defaults: `--levels 4` and `--count 100` follow the original method;
//! `--threshold 0.5`, `--grid 1x1`, `--group 1` and `--diff-threshold 30`
//! are engineering choices.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::color::quantize_color;
use crate::detect::{detect_frame_diff, detect_octree, RunningAverage};
use crate::error::{Error, Result};
use crate::eval::{emit_report, EvalStats, ReportRow};
use crate::frame::{Frame, Mask};
use crate::io::{self, FrameSequence, Scenario};
use crate::model::{build_background_model, BackgroundModel, ModelConfig};

/// Training throughput below this emits a warning from `bench`.
pub const TRAIN_THROUGHPUT_TARGET: f64 = 1e6;

#[derive(Debug, Parser)]
#[command(name = "octree-bg", version, about = "Octree background modeling and foreground detection")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Re-render an image with every channel cut to its top L bits.
    Quantize(QuantizeArgs),
    /// Train a background model from a directory of frames.
    Train(TrainArgs),
    /// Write one foreground mask per frame.
    Detect(DetectArgs),
    /// Score predicted masks against ground truth (background-oriented F0).
    Eval(EvalArgs),
    /// Generate a synthetic video with ground-truth masks.
    Synth(SynthArgs),
    /// Measure training and detection throughput.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct QuantizeArgs {
    /// Bit planes kept per channel (1-8).
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u8).range(1..=8))]
    pub levels: u8,
    pub input: PathBuf,
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Directory of numbered PPM frames.
    #[arg(long)]
    pub frames: PathBuf,
    /// Octree depth; the default follows the original method.
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u8).range(1..=8))]
    pub levels: u8,
    /// Minimum fraction of group trees holding a color (engineering default).
    #[arg(long, default_value_t = 0.5)]
    pub threshold: f64,
    /// Region grid as ROWSxCOLS (engineering default).
    #[arg(long, default_value = "1x1", value_parser = parse_grid)]
    pub grid: (u16, u16),
    /// Frames per tree before merging (engineering default).
    #[arg(long, default_value_t = 1)]
    pub group: usize,
    /// Leading frames used for training; the default follows the original method.
    #[arg(long, default_value_t = 100)]
    pub count: usize,
    /// Model file to write.
    #[arg(short = 'o', long = "output")]
    pub output: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Octree,
    Framediff,
    Average,
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    /// Trained model; required for the octree method.
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[arg(long)]
    pub frames: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Method::Octree)]
    pub method: Method,
    /// Per-channel change threshold for the baselines (engineering default).
    #[arg(long, default_value_t = 30)]
    pub diff_threshold: u8,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub pred: PathBuf,
    #[arg(long)]
    pub truth: PathBuf,
    #[arg(long)]
    pub method_name: String,
    #[arg(long)]
    pub dataset_name: String,
    /// CSV report to write.
    #[arg(short = 'o', long = "output")]
    pub output: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScenarioArg {
    Static,
    BimodalFlicker,
    MovingBox,
}

impl From<ScenarioArg> for Scenario {
    fn from(s: ScenarioArg) -> Self {
        match s {
            ScenarioArg::Static => Scenario::Static,
            ScenarioArg::BimodalFlicker => Scenario::BimodalFlicker,
            ScenarioArg::MovingBox => Scenario::MovingBox,
        }
    }
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, value_enum)]
    pub scenario: ScenarioArg,
    #[arg(long, default_value_t = 160)]
    pub width: u32,
    #[arg(long, default_value_t = 120)]
    pub height: u32,
    #[arg(long, default_value_t = 100)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output directory; frames go to `frames/`, ground truth to `truth/`.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub frames: PathBuf,
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u8).range(1..=8))]
    pub levels: u8,
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
    pub repeat: u64,
    #[arg(long, default_value_t = 100)]
    pub count: usize,
}

fn parse_grid(s: &str) -> std::result::Result<(u16, u16), String> {
    let (r, c) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected ROWSxCOLS, got {s:?}"))?;
    let parse = |v: &str| match v.trim().parse::<u16>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(format!("grid dimensions must be positive integers, got {s:?}")),
    };
    Ok((parse(r)?, parse(c)?))
}

/// Runs a parsed command, writing human-readable output to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Quantize(a) => cmd_quantize(&a, out),
        Command::Train(a) => cmd_train(&a, out),
        Command::Detect(a) => cmd_detect(&a, out),
        Command::Eval(a) => cmd_eval(&a, out),
        Command::Synth(a) => cmd_synth(&a, out),
        Command::Bench(a) => cmd_bench(&a, out),
    }
}

fn emit(out: &mut dyn Write, line: std::fmt::Arguments<'_>) -> Result<()> {
    writeln!(out, "{line}").map_err(|e| Error::io("<stdout>", e))
}

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

pub fn quantize_frame(frame: &Frame, levels: u8) -> Result<Frame> {
    crate::check_levels(levels)?;
    let pixels = frame.pixels().iter().map(|&c| quantize_color(c, levels)).collect();
    Frame::new(frame.width(), frame.height(), pixels)
}

pub fn cmd_quantize(args: &QuantizeArgs, out: &mut dyn Write) -> Result<()> {
    let frame = io::load_ppm(&args.input)?;
    let quantized = quantize_frame(&frame, args.levels)?;
    io::save_ppm(&args.output, &quantized)?;
    let distinct: BTreeSet<_> = quantized.pixels().iter().collect();
    emit(
        out,
        format_args!(
            "quantized {}x{} at {} levels: {} distinct colors",
            frame.width(),
            frame.height(),
            args.levels,
            distinct.len()
        ),
    )
}

pub fn cmd_train(args: &TrainArgs, out: &mut dyn Write) -> Result<()> {
    let config = ModelConfig {
        levels: args.levels,
        threshold: args.threshold,
        grid_rows: args.grid.0,
        grid_cols: args.grid.1,
        group_size: args.group,
        training_frames: args.count,
    };
    config.validate()?;
    let seq = FrameSequence::open(&args.frames)?;
    let frames = seq.load(Some(args.count))?;
    if frames.len() < config.group_size {
        return Err(Error::NotEnoughFrames {
            needed: config.group_size,
            found: frames.len(),
        });
    }
    let model = build_background_model(&frames, &config)?;
    model.save(&args.output)?;
    let (rows, cols) = model.grid();
    for r in 0..rows {
        for c in 0..cols {
            emit(out, format_args!("region {r},{c}: {} leaves", model.tree(r, c).leaf_count()))?;
        }
    }
    emit(
        out,
        format_args!(
            "trained on {} frames ({} groups) -> {}",
            frames.len(),
            frames.len() / config.group_size,
            args.output.display()
        ),
    )
}

fn mask_name(frame_name: &str) -> String {
    let stem = Path::new(frame_name)
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or(frame_name);
    format!("{stem}.pgm")
}

pub fn cmd_detect(args: &DetectArgs, out: &mut dyn Write) -> Result<()> {
    let seq = FrameSequence::open(&args.frames)?;
    create_dir(&args.out)?;
    let model = match (args.method, &args.model) {
        (Method::Octree, Some(path)) => Some(BackgroundModel::load(path)?),
        (Method::Octree, None) => {
            return Err(Error::InvalidConfig("--model is required for the octree method".into()))
        }
        _ => None,
    };

    let mut previous: Option<Frame> = None;
    let mut average = RunningAverage::new();
    let mut foreground = 0usize;
    for (i, name) in seq.names().iter().enumerate() {
        let path = seq.path(i);
        let frame = io::load_ppm(&path)?;
        let mask: Result<Mask> = match args.method {
            Method::Octree => detect_octree(model.as_ref().expect("loaded above"), &frame),
            Method::Framediff => match &previous {
                Some(prev) => detect_frame_diff(prev, &frame, args.diff_threshold),
                None => Ok(Mask::background(frame.width(), frame.height())),
            },
            Method::Average => average.apply(&frame, args.diff_threshold),
        };
        let mask = mask.map_err(|e| e.in_file(&path))?;
        foreground += mask.foreground_count();
        io::save_mask(args.out.join(mask_name(name)), &mask)?;
        previous = Some(frame);
    }
    emit(
        out,
        format_args!(
            "wrote {} masks to {} ({} foreground pixels)",
            seq.len(),
            args.out.display(),
            foreground
        ),
    )
}

/// Sums confusion counts over every same-named mask pair in two directories.
pub fn evaluate_dirs(pred: &Path, truth: &Path) -> Result<EvalStats> {
    let pred_names = io::list_files(pred, "pgm")?;
    let truth_names = io::list_files(truth, "pgm")?;
    let p: BTreeSet<&String> = pred_names.iter().collect();
    let t: BTreeSet<&String> = truth_names.iter().collect();
    let mut unmatched: Vec<String> = p
        .difference(&t)
        .map(|n| format!("{} (no truth)", pred.join(n).display()))
        .collect();
    unmatched.extend(t.difference(&p).map(|n| format!("{} (no prediction)", truth.join(n).display())));
    if !unmatched.is_empty() {
        return Err(Error::UnmatchedFiles(unmatched));
    }
    let mut stats = EvalStats::default();
    for name in &pred_names {
        let predicted = io::load_mask(pred.join(name))?;
        let expected = io::load_mask(truth.join(name))?;
        stats
            .accumulate(&predicted, &expected)
            .map_err(|e| e.in_file(pred.join(name)))?;
    }
    Ok(stats)
}

pub fn cmd_eval(args: &EvalArgs, out: &mut dyn Write) -> Result<()> {
    let stats = evaluate_dirs(&args.pred, &args.truth)?;
    let report = emit_report(&[ReportRow::new(&args.method_name, &args.dataset_name, stats)]);
    std::fs::write(&args.output, &report).map_err(|e| Error::io(&args.output, e))?;
    out.write_all(report.as_bytes()).map_err(|e| Error::io("<stdout>", e))
}

pub fn cmd_synth(args: &SynthArgs, out: &mut dyn Write) -> Result<()> {
    let params = Scenario::from(args.scenario).params(args.width, args.height, args.count, args.seed);
    let video = io::generate_synthetic(&params)?;
    io::save_sequence(args.out.join("frames"), &video.frames)?;
    io::save_masks(args.out.join("truth"), &video.truth)?;
    emit(
        out,
        format_args!(
            "wrote {} frames of {}x{} to {}",
            video.frames.len(),
            args.width,
            args.height,
            args.out.display()
        ),
    )
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BenchReport {
    pub train_pixels: u64,
    pub detect_pixels: u64,
    pub train_px_per_s: f64,
    pub detect_px_per_s: f64,
}

fn median(mut values: Vec<f64>) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    }
}

/// Median single-threaded throughput over `repeat` runs of training on the
/// leading `config.training_frames` frames and detecting on all of them.
pub fn bench(frames: &[Frame], config: &ModelConfig, repeat: usize) -> Result<BenchReport> {
    let repeat = repeat.max(1);
    let trained = frames.len().min(config.training_frames);
    let frame_pixels = frames.first().map_or(0, |f| f.pixels().len() as u64);
    let train_pixels = trained as u64 * frame_pixels;
    let detect_pixels = frames.len() as u64 * frame_pixels;

    let mut train_rates = Vec::with_capacity(repeat);
    let mut detect_rates = Vec::with_capacity(repeat);
    for _ in 0..repeat {
        let start = Instant::now();
        let model = build_background_model(frames, config)?;
        train_rates.push(train_pixels as f64 / start.elapsed().as_secs_f64().max(1e-9));

        let start = Instant::now();
        let mut foreground = 0;
        for f in frames {
            foreground += detect_octree(&model, f)?.foreground_count();
        }
        std::hint::black_box(foreground);
        detect_rates.push(detect_pixels as f64 / start.elapsed().as_secs_f64().max(1e-9));
    }
    Ok(BenchReport {
        train_pixels,
        detect_pixels,
        train_px_per_s: median(train_rates),
        detect_px_per_s: median(detect_rates),
    })
}

pub fn cmd_bench(args: &BenchArgs, out: &mut dyn Write) -> Result<()> {
    let seq = FrameSequence::open(&args.frames)?;
    let frames = seq.load(None)?;
    let config = ModelConfig {
        levels: args.levels,
        training_frames: args.count.max(1),
        ..ModelConfig::default()
    };
    let report = bench(&frames, &config, args.repeat as usize)?;
    emit(
        out,
        format_args!(
            "train: {:.0} px/s over {} px (median of {})",
            report.train_px_per_s, report.train_pixels, args.repeat
        ),
    )?;
    emit(
        out,
        format_args!(
            "detect: {:.0} px/s over {} px (median of {})",
            report.detect_px_per_s, report.detect_pixels, args.repeat
        ),
    )?;
    if report.train_px_per_s < TRAIN_THROUGHPUT_TARGET {
        emit(
            out,
            format_args!(
                "warning: training throughput {:.0} px/s is below the {:.0} px/s target",
                report.train_px_per_s, TRAIN_THROUGHPUT_TARGET
            ),
        )?;
    }
    Ok(())
}
