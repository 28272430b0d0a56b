//! 8-bit grayscale images: binary PGM (P5) and palettized 8-bit BMP.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ImageError {
    #[error("malformed header at byte {offset}: {reason}")]
    Malformed { offset: usize, reason: String },
    #[error("unsupported maxval {maxval} at byte {offset}, only 255 is accepted")]
    UnsupportedMaxval { offset: usize, maxval: u32 },
    #[error("truncated pixel data at byte {offset}: expected {expected} bytes, found {found}")]
    Truncated {
        offset: usize,
        expected: usize,
        found: usize,
    },
    #[error("unsupported BMP at byte {offset}: {reason}")]
    UnsupportedBmp { offset: usize, reason: String },
    #[error("{len} pixels do not fill a {width}x{height} image")]
    Dimensions {
        width: usize,
        height: usize,
        len: usize,
    },
}

/// Row-major grayscale pixel matrix, top row first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self, ImageError> {
        if width.checked_mul(height) != Some(pixels.len()) {
            return Err(ImageError::Dimensions {
                width,
                height,
                len: pixels.len(),
            });
        }
        Ok(GrayImage {
            width,
            height,
            pixels,
        })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Self {
        GrayImage {
            width,
            height,
            pixels: vec![value; width * height],
        }
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> u8) -> Self {
        let mut pixels = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        GrayImage {
            width,
            height,
            pixels,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn pixels_mut(&mut self) -> &mut [u8] {
        &mut self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }

    pub fn rows(&self) -> impl DoubleEndedIterator<Item = &[u8]> {
        self.pixels.chunks(self.width.max(1))
    }

    pub fn into_pixels(self) -> Vec<u8> {
        self.pixels
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImageFormat {
    Pgm,
    Bmp,
}

impl ImageFormat {
    /// Guesses from a file extension (`pgm`, `pnm`, `bmp`).
    pub fn from_extension(ext: &str) -> Option<Self> {
        match ext.to_ascii_lowercase().as_str() {
            "pgm" | "pnm" => Some(ImageFormat::Pgm),
            "bmp" => Some(ImageFormat::Bmp),
            _ => None,
        }
    }
}

/// Decodes a P5 PGM or an 8-bit BMP, detected from the magic bytes.
pub fn read_image(bytes: &[u8]) -> Result<GrayImage, ImageError> {
    match bytes {
        [b'P', b'5', ..] => read_pgm(bytes),
        [b'B', b'M', ..] => read_bmp(bytes),
        _ => Err(ImageError::Malformed {
            offset: 0,
            reason: "expected P5 or BM magic".into(),
        }),
    }
}

pub fn write_image(img: &GrayImage, format: ImageFormat) -> Vec<u8> {
    match format {
        ImageFormat::Pgm => write_pgm(img),
        ImageFormat::Bmp => write_bmp(img),
    }
}

pub fn write_pgm(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width, img.height).into_bytes();
    out.extend_from_slice(&img.pixels);
    out
}

struct PgmCursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl PgmCursor<'_> {
    fn skip_whitespace_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else if b == b'#' {
                while self.bytes.get(self.pos).is_some_and(|&c| c != b'\n') {
                    self.pos += 1;
                }
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<(usize, u32), ImageError> {
        self.skip_whitespace_and_comments();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        let digits = &self.bytes[start..self.pos];
        if digits.is_empty() {
            return Err(ImageError::Malformed {
                offset: start,
                reason: format!("expected {what}"),
            });
        }
        std::str::from_utf8(digits)
            .ok()
            .and_then(|s| s.parse().ok())
            .map(|v| (start, v))
            .ok_or_else(|| ImageError::Malformed {
                offset: start,
                reason: format!("{what} does not fit in 32 bits"),
            })
    }
}

fn read_pgm(bytes: &[u8]) -> Result<GrayImage, ImageError> {
    let mut cur = PgmCursor { bytes, pos: 2 };
    let (_, width) = cur.number("width")?;
    let (_, height) = cur.number("height")?;
    let (maxval_at, maxval) = cur.number("maxval")?;
    if maxval != 255 {
        return Err(ImageError::UnsupportedMaxval {
            offset: maxval_at,
            maxval,
        });
    }
    // exactly one whitespace byte separates the header from the raster
    match bytes.get(cur.pos) {
        Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
        _ => {
            return Err(ImageError::Malformed {
                offset: cur.pos,
                reason: "expected whitespace after maxval".into(),
            })
        }
    }
    let (width, height) = (width as usize, height as usize);
    let expected = width * height;
    let raster = &bytes[cur.pos..];
    if raster.len() < expected {
        return Err(ImageError::Truncated {
            offset: cur.pos,
            expected,
            found: raster.len(),
        });
    }
    GrayImage::new(width, height, raster[..expected].to_vec())
}

const BMP_FILE_HEADER: usize = 14;
const BMP_INFO_HEADER: usize = 40;
const BMP_PALETTE: usize = 256 * 4;

fn bmp_row_stride(width: usize) -> usize {
    width.div_ceil(4) * 4
}

/// Uncompressed 8-bit BMP with an identity gray palette, rows bottom-up.
pub fn write_bmp(img: &GrayImage) -> Vec<u8> {
    let stride = bmp_row_stride(img.width);
    let data_offset = BMP_FILE_HEADER + BMP_INFO_HEADER + BMP_PALETTE;
    let image_size = stride * img.height;
    let mut out = Vec::with_capacity(data_offset + image_size);

    out.extend_from_slice(b"BM");
    out.extend_from_slice(&((data_offset + image_size) as u32).to_le_bytes());
    out.extend_from_slice(&[0; 4]);
    out.extend_from_slice(&(data_offset as u32).to_le_bytes());

    out.extend_from_slice(&(BMP_INFO_HEADER as u32).to_le_bytes());
    out.extend_from_slice(&(img.width as i32).to_le_bytes());
    out.extend_from_slice(&(img.height as i32).to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes());
    out.extend_from_slice(&8u16.to_le_bytes());
    out.extend_from_slice(&0u32.to_le_bytes());
    out.extend_from_slice(&(image_size as u32).to_le_bytes());
    // 2835 px/m = 72 dpi
    out.extend_from_slice(&2835i32.to_le_bytes());
    out.extend_from_slice(&2835i32.to_le_bytes());
    out.extend_from_slice(&256u32.to_le_bytes());
    out.extend_from_slice(&0u32.to_le_bytes());

    for g in 0..=255u8 {
        out.extend_from_slice(&[g, g, g, 0]);
    }

    let padding = [0u8; 3];
    for row in img.rows().rev() {
        out.extend_from_slice(row);
        out.extend_from_slice(&padding[..stride - img.width]);
    }
    out
}

fn le_u16(bytes: &[u8], at: usize) -> Result<u16, ImageError> {
    bytes
        .get(at..at + 2)
        .map(|b| u16::from_le_bytes([b[0], b[1]]))
        .ok_or(ImageError::Malformed {
            offset: at,
            reason: "header ends early".into(),
        })
}

fn le_u32(bytes: &[u8], at: usize) -> Result<u32, ImageError> {
    bytes
        .get(at..at + 4)
        .map(|b| u32::from_le_bytes([b[0], b[1], b[2], b[3]]))
        .ok_or(ImageError::Malformed {
            offset: at,
            reason: "header ends early".into(),
        })
}

fn read_bmp(bytes: &[u8]) -> Result<GrayImage, ImageError> {
    let data_offset = le_u32(bytes, 10)? as usize;
    let info_size = le_u32(bytes, 14)? as usize;
    if info_size < BMP_INFO_HEADER {
        return Err(ImageError::UnsupportedBmp {
            offset: 14,
            reason: format!("info header of {info_size} bytes"),
        });
    }
    let width = le_u32(bytes, 18)? as i32;
    let raw_height = le_u32(bytes, 22)? as i32;
    let bpp = le_u16(bytes, 28)?;
    let compression = le_u32(bytes, 30)?;
    let colors_used = le_u32(bytes, 46)? as usize;

    if width <= 0 || raw_height == 0 || raw_height == i32::MIN {
        return Err(ImageError::Malformed {
            offset: 18,
            reason: format!("bad dimensions {width}x{raw_height}"),
        });
    }
    if bpp != 8 {
        return Err(ImageError::UnsupportedBmp {
            offset: 28,
            reason: format!("{bpp} bits per pixel"),
        });
    }
    if compression != 0 {
        return Err(ImageError::UnsupportedBmp {
            offset: 30,
            reason: format!("compression method {compression}"),
        });
    }

    let palette_at = BMP_FILE_HEADER + info_size;
    let palette_len = if colors_used == 0 { 256 } else { colors_used };
    if palette_len > 256 {
        return Err(ImageError::UnsupportedBmp {
            offset: 46,
            reason: format!("{palette_len} palette entries"),
        });
    }
    let palette_bytes =
        bytes
            .get(palette_at..palette_at + palette_len * 4)
            .ok_or(ImageError::Truncated {
                offset: palette_at,
                expected: palette_len * 4,
                found: bytes.len().saturating_sub(palette_at),
            })?;
    let mut palette = Vec::with_capacity(palette_len);
    for (i, entry) in palette_bytes.chunks_exact(4).enumerate() {
        let (b, g, r) = (entry[0], entry[1], entry[2]);
        if b != g || g != r {
            return Err(ImageError::UnsupportedBmp {
                offset: palette_at + i * 4,
                reason: format!("palette entry {i} is not gray"),
            });
        }
        palette.push(g);
    }

    let (width, height) = (width as usize, raw_height.unsigned_abs() as usize);
    let bottom_up = raw_height > 0;
    let stride = bmp_row_stride(width);
    let expected = stride * height;
    let raster = bytes.get(data_offset..).unwrap_or(&[]);
    // the final row may omit its padding
    let needed = expected - (stride - width);
    if raster.len() < needed {
        return Err(ImageError::Truncated {
            offset: data_offset,
            expected,
            found: raster.len(),
        });
    }

    let mut pixels = Vec::with_capacity(width * height);
    for y in 0..height {
        let stored = if bottom_up { height - 1 - y } else { y };
        let row = &raster[stored * stride..stored * stride + width];
        for (x, &index) in row.iter().enumerate() {
            let gray = *palette
                .get(index as usize)
                .ok_or(ImageError::UnsupportedBmp {
                    offset: data_offset + stored * stride + x,
                    reason: format!("palette index {index} out of range"),
                })?;
            pixels.push(gray);
        }
    }
    GrayImage::new(width, height, pixels)
}
