//! Seeded synthetic videos with exact ground-truth masks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::color::Color;
use crate::error::{Error, Result};
use crate::frame::{Frame, Mask};

#[derive(Clone, Debug, PartialEq)]
pub enum Background {
    Uniform(Color),
    /// Each pixel draws one palette entry from the seeded generator and
    /// keeps it for the whole video.
    Texture(Vec<Color>),
    /// Each pixel alternates between the two colors every frame, with a
    /// seeded per-pixel phase.
    Flicker(Color, Color),
}

/// Uniform box translated at constant velocity, present from `first_frame`.
#[derive(Clone, Debug, PartialEq)]
pub struct MovingBox {
    pub width: u32,
    pub height: u32,
    pub color: Color,
    pub start: (i64, i64),
    pub velocity: (i64, i64),
    pub first_frame: usize,
}

impl MovingBox {
    /// Top-left corner at frame `t`, if the box is visible then.
    pub fn position(&self, t: usize) -> Option<(i64, i64)> {
        let dt = t.checked_sub(self.first_frame)? as i64;
        Some((self.start.0 + self.velocity.0 * dt, self.start.1 + self.velocity.1 * dt))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SynthParams {
    pub width: u32,
    pub height: u32,
    pub frames: usize,
    pub seed: u64,
    pub background: Background,
    pub moving_box: Option<MovingBox>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scenario {
    Static,
    BimodalFlicker,
    MovingBox,
}

impl Scenario {
    /// Preset parameters for each scenario.
    pub fn params(self, width: u32, height: u32, frames: usize, seed: u64) -> SynthParams {
        let (background, moving_box) = match self {
            Scenario::Static => (
                Background::Texture(vec![
                    Color::new(40, 60, 40),
                    Color::new(90, 110, 70),
                    Color::new(150, 140, 120),
                    Color::new(200, 200, 210),
                ]),
                None,
            ),
            Scenario::BimodalFlicker => (Background::Flicker(Color::new(0, 100, 0), Color::new(0, 160, 0)), None),
            Scenario::MovingBox => {
                let size = 10.min(width).min(height);
                let steps = frames.saturating_sub(1).max(1) as i64;
                let dx = (width - size) as i64 / steps;
                (
                    Background::Uniform(Color::new(110, 110, 110)),
                    Some(MovingBox {
                        width: size,
                        height: size,
                        color: Color::new(220, 40, 40),
                        start: (0, 0),
                        velocity: (dx, 0),
                        first_frame: 0,
                    }),
                )
            }
        };
        SynthParams {
            width,
            height,
            frames,
            seed,
            background,
            moving_box,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SyntheticVideo {
    pub frames: Vec<Frame>,
    pub truth: Vec<Mask>,
}

/// Renders the video described by `params`; a pure function of its input.
pub fn generate_synthetic(params: &SynthParams) -> Result<SyntheticVideo> {
    let (width, height) = (params.width, params.height);
    if width == 0 || height == 0 || params.frames == 0 {
        return Err(Error::InvalidConfig(
            "synthetic video needs positive dimensions and frame count".into(),
        ));
    }
    if let Some(b) = &params.moving_box {
        if b.width == 0 || b.height == 0 {
            return Err(Error::InvalidConfig("moving box needs positive size".into()));
        }
        for t in b.first_frame..params.frames {
            let (x, y) = b.position(t).expect("t >= first_frame");
            if x < 0 || y < 0 || x + b.width as i64 > width as i64 || y + b.height as i64 > height as i64 {
                return Err(Error::BoxOutOfBounds { frame: t });
            }
        }
    }

    let pixel_count = width as usize * height as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    // Per-pixel palette index or flicker phase.
    let per_pixel: Vec<usize> = match &params.background {
        Background::Uniform(_) => vec![0; pixel_count],
        Background::Texture(palette) => {
            if palette.is_empty() {
                return Err(Error::InvalidConfig("texture palette is empty".into()));
            }
            (0..pixel_count).map(|_| rng.random_range(0..palette.len())).collect()
        }
        Background::Flicker(..) => (0..pixel_count).map(|_| rng.random_range(0..2)).collect(),
    };

    let mut frames = Vec::with_capacity(params.frames);
    let mut truth = Vec::with_capacity(params.frames);
    for t in 0..params.frames {
        let pixels = per_pixel
            .iter()
            .map(|&k| match &params.background {
                Background::Uniform(c) => *c,
                Background::Texture(palette) => palette[k],
                Background::Flicker(a, b) => {
                    if (t + k) % 2 == 0 {
                        *a
                    } else {
                        *b
                    }
                }
            })
            .collect();
        let mut frame = Frame::new(width, height, pixels)?;
        let mut mask = Mask::background(width, height);
        if let Some((b, (x0, y0))) = params.moving_box.as_ref().and_then(|b| Some((b, b.position(t)?))) {
            for y in y0 as u32..y0 as u32 + b.height {
                for x in x0 as u32..x0 as u32 + b.width {
                    frame.set(x, y, b.color);
                    mask.set(x, y, true);
                }
            }
        }
        frames.push(frame);
        truth.push(mask);
    }
    Ok(SyntheticVideo { frames, truth })
}
