use std::fmt;

/// An 8-bit-per-channel RGB color.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Color {
    pub red: u8,
    pub green: u8,
    pub blue: u8,
}

impl Color {
    pub const BLACK: Color = Color::new(0, 0, 0);
    pub const WHITE: Color = Color::new(255, 255, 255);

    pub const fn new(red: u8, green: u8, blue: u8) -> Self {
        Color { red, green, blue }
    }

    pub const fn channels(self) -> [u8; 3] {
        [self.red, self.green, self.blue]
    }
}

impl From<[u8; 3]> for Color {
    fn from([red, green, blue]: [u8; 3]) -> Self {
        Color { red, green, blue }
    }
}

impl From<(u8, u8, u8)> for Color {
    fn from((red, green, blue): (u8, u8, u8)) -> Self {
        Color { red, green, blue }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.red, self.green, self.blue)
    }
}

/// Octant of `color` at the given bit plane: red bit in position 2, green in
/// 1, blue in 0.
///
/// `bit_position` counts from the least significant bit, so the root of a
/// tree branches on bit 7.
#[inline]
pub fn child_index(color: Color, bit_position: u8) -> usize {
    debug_assert!(bit_position < 8);
    let r = (color.red >> bit_position) & 1;
    let g = (color.green >> bit_position) & 1;
    let b = (color.blue >> bit_position) & 1;
    ((r << 2) | (g << 1) | b) as usize
}

/// Bit mask keeping the `levels` most significant bits of a channel.
#[inline]
pub(crate) fn level_mask(levels: u8) -> u8 {
    debug_assert!(levels <= 8);
    (0xFF00u16 >> levels) as u8
}

/// Keeps the `levels` most significant bits of every channel and zero-fills
/// the rest. This is the color a leaf at depth `levels` stands for.
#[inline]
pub fn quantize_color(color: Color, levels: u8) -> Color {
    let mask = level_mask(levels);
    Color::new(color.red & mask, color.green & mask, color.blue & mask)
}
