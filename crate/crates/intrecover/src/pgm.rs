//! PGM images in ASCII (P2) and binary (P5) form.
//!
//! The writer emits a canonical layout: magic, width and height, and maxval on
//! separate lines; P2 rasters put one image row per line with single spaces.

use std::fs;
use std::path::Path;

use intrecover_core::{Grid, IntImage};

use crate::CliError;

/// Raster encoding.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PgmFormat {
    /// `P2`.
    Ascii,
    /// `P5`, one byte per sample when `maxval < 256`, else two bytes big-endian.
    Binary,
}

/// A grayscale image with its declared maxval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pgm {
    pub image: IntImage,
    pub maxval: u16,
    pub format: PgmFormat,
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::InvalidImage(msg.into())
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_space(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while self.bytes.get(self.pos).is_some_and(|&c| c != b'\n' && c != b'\r') {
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn token(&mut self) -> Result<u32, CliError> {
        self.skip_space();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(invalid(format!("expected a decimal number at byte {start}")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| invalid(format!("number out of range at byte {start}")))
    }
}

impl Pgm {
    /// Uses the smallest maxval (at least 1) covering the image.
    pub fn new(image: IntImage, format: PgmFormat) -> Result<Self, CliError> {
        let max = image.data().iter().copied().max().unwrap_or(0).max(1);
        let maxval = u16::try_from(max).map_err(|_| invalid(format!("pixel value {max} exceeds 65535")))?;
        Pgm::with_maxval(image, maxval, format)
    }

    pub fn with_maxval(image: IntImage, maxval: u16, format: PgmFormat) -> Result<Self, CliError> {
        if maxval == 0 {
            return Err(invalid("maxval must be at least 1"));
        }
        if let Some(v) = image.data().iter().find(|&&v| v < 0 || v > maxval as i64) {
            return Err(invalid(format!("pixel value {v} outside [0, {maxval}]")));
        }
        Ok(Pgm { image, maxval, format })
    }

    pub fn parse(bytes: &[u8]) -> Result<Self, CliError> {
        let format = match bytes.get(..2) {
            Some(b"P2") => PgmFormat::Ascii,
            Some(b"P5") => PgmFormat::Binary,
            _ => return Err(invalid("missing P2/P5 magic number")),
        };
        let mut cur = Cursor { bytes, pos: 2 };
        let width = cur.token()? as usize;
        let height = cur.token()? as usize;
        let maxval = cur.token()?;
        if width == 0 || height == 0 {
            return Err(invalid("image has zero width or height"));
        }
        if !(1..=65535).contains(&maxval) {
            return Err(invalid(format!("maxval {maxval} outside [1, 65535]")));
        }
        let count = width
            .checked_mul(height)
            .ok_or_else(|| invalid("image dimensions overflow"))?;
        let mut data = Vec::with_capacity(count);
        match format {
            PgmFormat::Ascii => {
                for _ in 0..count {
                    data.push(cur.token()? as i64);
                }
            }
            PgmFormat::Binary => {
                if !cur.bytes.get(cur.pos).is_some_and(u8::is_ascii_whitespace) {
                    return Err(invalid("missing whitespace after maxval"));
                }
                let start = cur.pos + 1;
                let width_bytes = if maxval < 256 { 1 } else { 2 };
                let raster = bytes
                    .get(start..start + count * width_bytes)
                    .ok_or_else(|| invalid("raster shorter than width*height"))?;
                if width_bytes == 1 {
                    data.extend(raster.iter().map(|&b| b as i64));
                } else {
                    data.extend(raster.chunks_exact(2).map(|c| u16::from_be_bytes([c[0], c[1]]) as i64));
                }
            }
        }
        if let Some(v) = data.iter().find(|&&v| v > maxval as i64) {
            return Err(invalid(format!("pixel value {v} exceeds maxval {maxval}")));
        }
        let image = Grid::from_vec(height, width, data).map_err(|e| invalid(e.to_string()))?;
        Ok(Pgm {
            image,
            maxval: maxval as u16,
            format,
        })
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let (h, w) = (self.image.rows(), self.image.cols());
        let magic = match self.format {
            PgmFormat::Ascii => "P2",
            PgmFormat::Binary => "P5",
        };
        let mut out = format!("{magic}\n{w} {h}\n{}\n", self.maxval).into_bytes();
        match self.format {
            PgmFormat::Ascii => {
                for r in 0..h {
                    let row: Vec<String> = self.image.row(r).iter().map(i64::to_string).collect();
                    out.extend_from_slice(row.join(" ").as_bytes());
                    out.push(b'\n');
                }
            }
            PgmFormat::Binary => {
                for &v in self.image.data() {
                    if self.maxval < 256 {
                        out.push(v as u8);
                    } else {
                        out.extend_from_slice(&(v as u16).to_be_bytes());
                    }
                }
            }
        }
        out
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
        Pgm::parse(&bytes)
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        fs::write(path, self.to_bytes()).map_err(|e| CliError::io(path, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ascii_with_comments() {
        let src = b"P2\n# comment\n3 2\n# another\n4\n0 1 2\n3 4 0\n";
        let p = Pgm::parse(src).unwrap();
        assert_eq!(p.image.data(), &[0, 1, 2, 3, 4, 0]);
        assert_eq!((p.image.rows(), p.image.cols(), p.maxval), (2, 3, 4));
        assert_eq!(p.to_bytes(), b"P2\n3 2\n4\n0 1 2\n3 4 0\n");
    }

    #[test]
    fn binary_one_and_two_bytes() {
        let mut src = b"P5\n2 1\n255\n".to_vec();
        src.extend_from_slice(&[7, 255]);
        let p = Pgm::parse(&src).unwrap();
        assert_eq!(p.image.data(), &[7, 255]);
        assert_eq!(p.to_bytes(), src);

        let mut src = b"P5\n2 1\n1000\n".to_vec();
        src.extend_from_slice(&[0x03, 0xE8, 0x00, 0x01]);
        let p = Pgm::parse(&src).unwrap();
        assert_eq!(p.image.data(), &[1000, 1]);
        assert_eq!(p.to_bytes(), src);
    }

    #[test]
    fn rejects_bad_files() {
        assert!(Pgm::parse(b"P6\n1 1\n1\n\x00").is_err());
        assert!(Pgm::parse(b"P2\n2 1\n1\n0 2\n").is_err());
        assert!(Pgm::parse(b"P2\n2 1\n70000\n0 2\n").is_err());
        assert!(Pgm::parse(b"P5\n2 2\n255\n\x00").is_err());
        assert!(Pgm::parse(b"P2\n0 1\n1\n").is_err());
        assert!(Pgm::parse(b"P2\n2 1\n1\n0").is_err());
    }

    #[test]
    fn new_picks_maxval() {
        let img = Grid::from_vec(1, 3, vec![0, 5, 2]).unwrap();
        assert_eq!(Pgm::new(img, PgmFormat::Ascii).unwrap().maxval, 5);
        let neg = Grid::from_vec(1, 2, vec![0, -1]).unwrap();
        assert!(Pgm::new(neg, PgmFormat::Binary).is_err());
    }
}
