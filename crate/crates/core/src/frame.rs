use crate::color::Color;
use crate::error::{Error, Result};

/// A dense row-major RGB raster.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    width: u32,
    height: u32,
    pixels: Vec<Color>,
}

impl Frame {
    pub fn new(width: u32, height: u32, pixels: Vec<Color>) -> Result<Self> {
        let expected = width as usize * height as usize;
        if pixels.len() != expected {
            return Err(Error::InvalidFrame(format!(
                "{width}x{height} frame needs {expected} pixels, got {}",
                pixels.len()
            )));
        }
        Ok(Frame {
            width,
            height,
            pixels,
        })
    }

    pub fn filled(width: u32, height: u32, color: Color) -> Self {
        Frame {
            width,
            height,
            pixels: vec![color; width as usize * height as usize],
        }
    }

    /// Builds a frame from packed RGB bytes.
    pub fn from_rgb_bytes(width: u32, height: u32, bytes: &[u8]) -> Result<Self> {
        if bytes.len() != width as usize * height as usize * 3 {
            return Err(Error::InvalidFrame(format!(
                "{width}x{height} frame needs {} bytes, got {}",
                width as usize * height as usize * 3,
                bytes.len()
            )));
        }
        let pixels = bytes
            .chunks_exact(3)
            .map(|p| Color::new(p[0], p[1], p[2]))
            .collect();
        Frame::new(width, height, pixels)
    }

    pub fn to_rgb_bytes(&self) -> Vec<u8> {
        self.pixels.iter().flat_map(|c| c.channels()).collect()
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn dims(&self) -> (u32, u32) {
        (self.width, self.height)
    }

    pub fn pixels(&self) -> &[Color] {
        &self.pixels
    }

    pub fn pixels_mut(&mut self) -> &mut [Color] {
        &mut self.pixels
    }

    pub fn get(&self, x: u32, y: u32) -> Color {
        self.pixels[(y * self.width + x) as usize]
    }

    pub fn set(&mut self, x: u32, y: u32, color: Color) {
        self.pixels[(y * self.width + x) as usize] = color;
    }

    pub(crate) fn ensure_dims(&self, expected: (u32, u32)) -> Result<()> {
        ensure_dims(expected, self.dims())
    }
}

pub(crate) fn ensure_dims(expected: (u32, u32), found: (u32, u32)) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// Binary foreground/background labeling of a frame; `true` is foreground.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mask {
    width: u32,
    height: u32,
    values: Vec<bool>,
}

impl Mask {
    pub fn new(width: u32, height: u32, values: Vec<bool>) -> Result<Self> {
        if values.len() != width as usize * height as usize {
            return Err(Error::InvalidFrame(format!(
                "{width}x{height} mask needs {} values, got {}",
                width as usize * height as usize,
                values.len()
            )));
        }
        Ok(Mask {
            width,
            height,
            values,
        })
    }

    pub fn background(width: u32, height: u32) -> Self {
        Mask {
            width,
            height,
            values: vec![false; width as usize * height as usize],
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn dims(&self) -> (u32, u32) {
        (self.width, self.height)
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    pub fn is_foreground(&self, x: u32, y: u32) -> bool {
        self.values[(y * self.width + x) as usize]
    }

    pub fn set(&mut self, x: u32, y: u32, foreground: bool) {
        self.values[(y * self.width + x) as usize] = foreground;
    }

    pub fn foreground_count(&self) -> usize {
        self.values.iter().filter(|&&v| v).count()
    }

    pub fn is_all_background(&self) -> bool {
        !self.values.iter().any(|&v| v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frame_length_checked() {
        assert!(Frame::new(2, 2, vec![Color::BLACK; 3]).is_err());
        assert!(Frame::from_rgb_bytes(1, 1, &[1, 2]).is_err());
        let f = Frame::from_rgb_bytes(2, 1, &[1, 2, 3, 4, 5, 6]).unwrap();
        assert_eq!(f.get(1, 0), Color::new(4, 5, 6));
        assert_eq!(f.to_rgb_bytes(), vec![1, 2, 3, 4, 5, 6]);
    }

    #[test]
    fn mask_counts() {
        let mut m = Mask::background(3, 2);
        assert!(m.is_all_background());
        m.set(2, 1, true);
        assert!(m.is_foreground(2, 1));
        assert_eq!(m.foreground_count(), 1);
        assert!(Mask::new(3, 2, vec![false; 5]).is_err());
    }
}
