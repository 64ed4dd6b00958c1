//! Binary netpbm codecs: P6 frames and P5 foreground masks, maxval 255.

use crate::color::Color;
use crate::frame::{Frame, Mask};

/// A decoding failure, located by byte offset into the input.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PnmError {
    #[error("bad magic at byte {offset}: expected {expected}")]
    BadMagic { offset: usize, expected: &'static str },
    #[error("malformed header at byte {offset}: {reason}")]
    MalformedHeader { offset: usize, reason: &'static str },
    #[error("unsupported maxval {maxval} at byte {offset}")]
    UnsupportedMaxval { offset: usize, maxval: u32 },
    #[error("truncated payload at byte {offset}: need {needed} bytes, have {available}")]
    Truncated {
        offset: usize,
        needed: usize,
        available: usize,
    },
    #[error("non-binary mask value {value} at byte {offset}")]
    NonBinaryMask { offset: usize, value: u8 },
}

struct Header {
    width: u32,
    height: u32,
    data_offset: usize,
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_whitespace_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &'static str) -> Result<(usize, u32), PnmError> {
        self.skip_whitespace_and_comments();
        let start = self.pos;
        let mut value: u32 = 0;
        while let Some(&b) = self.bytes.get(self.pos) {
            if !b.is_ascii_digit() {
                break;
            }
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add(u32::from(b - b'0')))
                .ok_or(PnmError::MalformedHeader {
                    offset: start,
                    reason: "number too large",
                })?;
            self.pos += 1;
        }
        if self.pos == start {
            return Err(PnmError::MalformedHeader { offset: start, reason: what });
        }
        Ok((start, value))
    }
}

fn parse_header(bytes: &[u8], magic: &'static str) -> Result<Header, PnmError> {
    if bytes.len() < 2 || &bytes[..2] != magic.as_bytes() {
        return Err(PnmError::BadMagic { offset: 0, expected: magic });
    }
    let mut cur = Cursor { bytes, pos: 2 };
    if !cur.bytes.get(2).is_some_and(|b| b.is_ascii_whitespace() || *b == b'#') {
        return Err(PnmError::MalformedHeader {
            offset: 2,
            reason: "expected whitespace after magic",
        });
    }
    let (w_at, width) = cur.number("expected width")?;
    let (h_at, height) = cur.number("expected height")?;
    let (m_at, maxval) = cur.number("expected maxval")?;
    if width == 0 {
        return Err(PnmError::MalformedHeader { offset: w_at, reason: "zero width" });
    }
    if height == 0 {
        return Err(PnmError::MalformedHeader { offset: h_at, reason: "zero height" });
    }
    if maxval != 255 {
        return Err(PnmError::UnsupportedMaxval { offset: m_at, maxval });
    }
    match bytes.get(cur.pos) {
        Some(b) if b.is_ascii_whitespace() => {}
        _ => {
            return Err(PnmError::MalformedHeader {
                offset: cur.pos,
                reason: "expected single whitespace after maxval",
            })
        }
    }
    Ok(Header {
        width,
        height,
        data_offset: cur.pos + 1,
    })
}

/// Validates that the payload is present before anything is allocated.
fn payload<'a>(bytes: &'a [u8], header: &Header, channels: usize) -> Result<&'a [u8], PnmError> {
    let available = bytes.len() - header.data_offset;
    let needed = (header.width as usize)
        .checked_mul(header.height as usize)
        .and_then(|n| n.checked_mul(channels))
        .ok_or(PnmError::Truncated {
            offset: header.data_offset,
            needed: usize::MAX,
            available,
        })?;
    if available < needed {
        return Err(PnmError::Truncated {
            offset: header.data_offset,
            needed,
            available,
        });
    }
    Ok(&bytes[header.data_offset..header.data_offset + needed])
}

pub fn read_ppm(bytes: &[u8]) -> Result<Frame, PnmError> {
    let header = parse_header(bytes, "P6")?;
    let data = payload(bytes, &header, 3)?;
    let pixels = data.chunks_exact(3).map(|p| Color::new(p[0], p[1], p[2])).collect();
    Ok(Frame::new(header.width, header.height, pixels).expect("payload length checked"))
}

pub fn write_ppm(frame: &Frame) -> Vec<u8> {
    let mut out = format!("P6\n{} {}\n255\n", frame.width(), frame.height()).into_bytes();
    out.reserve(frame.pixels().len() * 3);
    for c in frame.pixels() {
        out.extend_from_slice(&c.channels());
    }
    out
}

/// Reads a P5 mask where 0 is background and 255 is foreground.
pub fn read_mask_pgm(bytes: &[u8]) -> Result<Mask, PnmError> {
    let header = parse_header(bytes, "P5")?;
    let data = payload(bytes, &header, 1)?;
    let values = data
        .iter()
        .enumerate()
        .map(|(i, &v)| match v {
            0 => Ok(false),
            255 => Ok(true),
            value => Err(PnmError::NonBinaryMask {
                offset: header.data_offset + i,
                value,
            }),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Mask::new(header.width, header.height, values).expect("payload length checked"))
}

pub fn write_mask_pgm(mask: &Mask) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", mask.width(), mask.height()).into_bytes();
    out.extend(mask.values().iter().map(|&fg| if fg { 255u8 } else { 0 }));
    out
}
