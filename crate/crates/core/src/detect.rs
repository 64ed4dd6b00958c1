//! Per-pixel foreground classification: the octree model detector and the
//! frame-differencing and running-average baselines.

use crate::error::Result;
use crate::frame::{ensure_dims, Frame, Mask};
use crate::model::BackgroundModel;

/// Labels a pixel foreground iff its quantized color is absent from the
/// merged tree of its region.
pub fn detect_octree(model: &BackgroundModel, frame: &Frame) -> Result<Mask> {
    frame.ensure_dims(model.frame_dims())?;
    let map = model.region_map();
    let trees = model.trees();
    let values = frame
        .pixels()
        .iter()
        .zip(map.index())
        .map(|(&color, &region)| !trees[region as usize].contains(color))
        .collect();
    Mask::new(frame.width(), frame.height(), values)
}

/// Foreground iff some channel changed by more than `diff_threshold`.
pub fn detect_frame_diff(previous: &Frame, current: &Frame, diff_threshold: u8) -> Result<Mask> {
    ensure_dims(previous.dims(), current.dims())?;
    let values = previous
        .pixels()
        .iter()
        .zip(current.pixels())
        .map(|(p, c)| {
            p.channels()
                .iter()
                .zip(c.channels())
                .any(|(&a, b)| a.abs_diff(b) > diff_threshold)
        })
        .collect();
    Mask::new(current.width(), current.height(), values)
}

/// Running per-pixel mean background.
///
/// The first frame seeds the average and is all background; every later
/// frame is compared against the current mean and then folded into it.
#[derive(Clone, Debug, Default)]
pub struct RunningAverage {
    frames_seen: u64,
    dims: (u32, u32),
    average: Vec<[f64; 3]>,
}

impl RunningAverage {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn frames_seen(&self) -> u64 {
        self.frames_seen
    }

    pub fn average(&self) -> &[[f64; 3]] {
        &self.average
    }

    pub fn apply(&mut self, current: &Frame, diff_threshold: u8) -> Result<Mask> {
        if self.frames_seen == 0 {
            self.dims = current.dims();
            self.average = current
                .pixels()
                .iter()
                .map(|c| c.channels().map(f64::from))
                .collect();
            self.frames_seen = 1;
            return Ok(Mask::background(current.width(), current.height()));
        }
        ensure_dims(self.dims, current.dims())?;
        let threshold = f64::from(diff_threshold);
        let n = (self.frames_seen + 1) as f64;
        let values = self
            .average
            .iter_mut()
            .zip(current.pixels())
            .map(|(mean, color)| {
                let mut foreground = false;
                for (m, v) in mean.iter_mut().zip(color.channels()) {
                    let delta = f64::from(v) - *m;
                    foreground |= delta.abs() > threshold;
                    *m += delta / n;
                }
                foreground
            })
            .collect();
        self.frames_seen += 1;
        Mask::new(current.width(), current.height(), values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::color::Color;
    use crate::error::Error;
    use crate::model::{build_background_model, ModelConfig};

    #[test]
    fn octree_static_video_all_background() {
        let f = Frame::filled(6, 4, Color::new(90, 120, 33));
        let m = build_background_model(&vec![f.clone(); 10], &ModelConfig::default()).unwrap();
        assert!(detect_octree(&m, &f).unwrap().is_all_background());
    }

    #[test]
    fn octree_single_dark_pixel() {
        let gray = Frame::filled(5, 5, Color::new(128, 128, 128));
        for levels in 1..=8 {
            let cfg = ModelConfig { levels, ..ModelConfig::default() };
            let m = build_background_model(&vec![gray.clone(); 4], &cfg).unwrap();
            let mut f = gray.clone();
            f.set(3, 1, Color::BLACK);
            let mask = detect_octree(&m, &f).unwrap();
            assert_eq!(mask.foreground_count(), 1);
            assert!(mask.is_foreground(3, 1));
        }
    }

    #[test]
    fn octree_empty_region_all_foreground() {
        // Left half disagrees across frames, right half is constant.
        let mut a = Frame::filled(4, 2, Color::BLACK);
        let mut b = Frame::filled(4, 2, Color::BLACK);
        for y in 0..2 {
            for x in 0..2 {
                a.set(x, y, Color::WHITE);
                b.set(x, y, Color::new(0, 255, 0));
            }
        }
        let cfg = ModelConfig { threshold: 1.0, grid_cols: 2, ..ModelConfig::default() };
        let m = build_background_model(&[a.clone(), b], &cfg).unwrap();
        assert!(m.tree(0, 0).is_empty());
        let mask = detect_octree(&m, &a).unwrap();
        for y in 0..2 {
            for x in 0..4 {
                assert_eq!(mask.is_foreground(x, y), x < 2);
            }
        }
    }

    #[test]
    fn octree_dimension_mismatch() {
        let m = build_background_model(&[Frame::filled(4, 4, Color::BLACK)], &ModelConfig::default()).unwrap();
        assert!(matches!(
            detect_octree(&m, &Frame::filled(4, 3, Color::BLACK)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn frame_diff_rules() {
        let black = Frame::filled(3, 3, Color::BLACK);
        let white = Frame::filled(3, 3, Color::WHITE);
        assert!(detect_frame_diff(&black, &black, 0).unwrap().is_all_background());
        assert_eq!(detect_frame_diff(&black, &white, 254).unwrap().foreground_count(), 9);
        assert!(detect_frame_diff(&black, &white, 255).unwrap().is_all_background());

        let shifted = Frame::filled(3, 3, Color::new(0, 30, 0));
        assert!(detect_frame_diff(&black, &shifted, 30).unwrap().is_all_background());
        assert_eq!(detect_frame_diff(&black, &shifted, 29).unwrap().foreground_count(), 9);
        assert!(detect_frame_diff(&black, &Frame::filled(2, 3, Color::BLACK), 30).is_err());
    }

    #[test]
    fn running_average_constant_video() {
        let f = Frame::filled(2, 2, Color::new(10, 20, 30));
        let mut avg = RunningAverage::new();
        for _ in 0..20 {
            assert!(avg.apply(&f, 0).unwrap().is_all_background());
        }
        assert_eq!(avg.frames_seen(), 20);
        assert!(avg.average().iter().all(|m| *m == [10.0, 20.0, 30.0]));
    }

    #[test]
    fn running_average_bimodal_pixel() {
        let lo = Frame::filled(1, 1, Color::BLACK);
        let hi = Frame::filled(1, 1, Color::WHITE);
        let mut avg = RunningAverage::new();
        let mut flagged = Vec::new();
        for i in 0..200 {
            let f = if i % 2 == 0 { &lo } else { &hi };
            flagged.push(avg.apply(f, 100).unwrap().is_foreground(0, 0));
        }
        // Mean of an even-length 0/255 alternation is exactly 127.5.
        assert!((avg.average()[0][0] - 127.5).abs() < 1e-9);
        assert!(!flagged[0]);
        assert!(flagged[1..].iter().all(|&f| f));
    }

    #[test]
    fn running_average_dimension_mismatch() {
        let mut avg = RunningAverage::new();
        avg.apply(&Frame::filled(2, 2, Color::BLACK), 30).unwrap();
        assert!(avg.apply(&Frame::filled(3, 2, Color::BLACK), 30).is_err());
    }
}
