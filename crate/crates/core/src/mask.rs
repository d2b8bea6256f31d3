//! Binary lesion masks: representation, PNG/PBM/PGM codecs and the mirror
//! transforms used by augmentation and the invariance tests.
//!
//! Coordinates are `(row, col)` with row 0 at the top and col 0 at the left.
//! A `true` pixel is lesion (white), `false` is background (black).

use std::fmt;
use std::io::Cursor;

use crate::error::{Error, Result};

/// Position of a pixel inside a [`BinaryMask`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PixelCoord {
    pub row: usize,
    pub col: usize,
}

/// Mirror axis.
///
/// `Horizontal` flips columns (left and right swap), `Vertical` flips rows
/// (top and bottom swap).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    Horizontal,
    Vertical,
}

/// A row-major grid of lesion/background pixels.
#[derive(Clone)]
pub struct BinaryMask {
    width: usize,
    height: usize,
    pixels: Vec<bool>,
    source_id: Option<String>,
}

// The source id is metadata; two masks are equal when their grids are.
impl PartialEq for BinaryMask {
    fn eq(&self, other: &Self) -> bool {
        self.width == other.width && self.height == other.height && self.pixels == other.pixels
    }
}

impl Eq for BinaryMask {}

impl fmt::Debug for BinaryMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BinaryMask {}x{} {:?}", self.width, self.height, self.source_id)?;
        if self.width * self.height <= 64 * 64 {
            for r in 0..self.height {
                let line: String =
                    (0..self.width).map(|c| if self.get(r, c) { '#' } else { '.' }).collect();
                writeln!(f, "  {line}")?;
            }
        }
        Ok(())
    }
}

impl BinaryMask {
    /// An all-background mask.
    pub fn new(width: usize, height: usize) -> Result<Self> {
        Self::from_pixels(width, height, vec![false; width * height])
    }

    pub fn from_pixels(width: usize, height: usize, pixels: Vec<bool>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidConfig(format!("mask dimensions must be positive, got {width}x{height}")));
        }
        if pixels.len() != width * height {
            return Err(Error::InvalidConfig(format!(
                "{} pixels supplied for a {width}x{height} mask",
                pixels.len()
            )));
        }
        Ok(Self { width, height, pixels, source_id: None })
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> bool) -> Result<Self> {
        let mut pixels = Vec::with_capacity(width * height);
        for r in 0..height {
            for c in 0..width {
                pixels.push(f(r, c));
            }
        }
        Self::from_pixels(width, height, pixels)
    }

    /// Builds a mask from text rows, `#` (or `1`) = lesion, anything else = background.
    pub fn from_rows(rows: &[&str]) -> Result<Self> {
        let height = rows.len();
        let width = rows.first().map_or(0, |r| r.chars().count());
        let mut pixels = Vec::with_capacity(width * height);
        for row in rows {
            if row.chars().count() != width {
                return Err(Error::InvalidConfig("rows of unequal length".into()));
            }
            pixels.extend(row.chars().map(|ch| ch == '#' || ch == '1'));
        }
        Self::from_pixels(width, height, pixels)
    }

    pub fn with_source_id(mut self, id: impl Into<String>) -> Self {
        self.source_id = Some(id.into());
        self
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn source_id(&self) -> Option<&str> {
        self.source_id.as_deref()
    }

    pub fn pixels(&self) -> &[bool] {
        &self.pixels
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> bool {
        self.pixels[row * self.width + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        self.pixels[row * self.width + col] = value;
    }

    /// Number of lesion pixels.
    pub fn count(&self) -> u64 {
        self.pixels.iter().filter(|&&p| p).count() as u64
    }

    /// Lesion pixel coordinates in row-major order.
    pub fn lesion_pixels(&self) -> impl Iterator<Item = PixelCoord> + '_ {
        let w = self.width;
        self.pixels
            .iter()
            .enumerate()
            .filter(|(_, &p)| p)
            .map(move |(i, _)| PixelCoord { row: i / w, col: i % w })
    }

    pub fn mirror(&self, axis: Axis) -> Self {
        let (w, h) = (self.width, self.height);
        let mut pixels = Vec::with_capacity(self.pixels.len());
        match axis {
            Axis::Horizontal => {
                for row in self.pixels.chunks_exact(w) {
                    pixels.extend(row.iter().rev());
                }
            }
            Axis::Vertical => {
                for r in (0..h).rev() {
                    pixels.extend_from_slice(&self.pixels[r * w..(r + 1) * w]);
                }
            }
        }
        Self { width: w, height: h, pixels, source_id: self.source_id.clone() }
    }

    /// Half-turn rotation; identical to mirroring about both axes.
    pub fn rotate180(&self) -> Self {
        let mut pixels = self.pixels.clone();
        pixels.reverse();
        Self { width: self.width, height: self.height, pixels, source_id: self.source_id.clone() }
    }

    /// Surrounds the mask with background rows and columns.
    pub fn pad(&self, top: usize, bottom: usize, left: usize, right: usize) -> Self {
        let width = self.width + left + right;
        let height = self.height + top + bottom;
        let mut pixels = vec![false; width * height];
        for r in 0..self.height {
            let dst = (r + top) * width + left;
            pixels[dst..dst + self.width].copy_from_slice(&self.pixels[r * self.width..(r + 1) * self.width]);
        }
        Self { width, height, pixels, source_id: self.source_id.clone() }
    }

    /// Nearest-neighbour upscaling by an integer factor (each pixel becomes a
    /// `factor x factor` block).
    pub fn upscale(&self, factor: usize) -> Self {
        assert!(factor >= 1, "upscale factor must be positive");
        let width = self.width * factor;
        let height = self.height * factor;
        let mut pixels = Vec::with_capacity(width * height);
        for r in 0..height {
            for c in 0..width {
                pixels.push(self.get(r / factor, c / factor));
            }
        }
        Self { width, height, pixels, source_id: self.source_id.clone() }
    }
}

/// Image container formats understood by [`load_mask`] and [`save_mask`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaskFormat {
    Png,
    /// Portable bitmap. Loads P1 and P4; saves P4.
    Pbm,
    /// Portable graymap. Loads P2 and P5; saves P5.
    Pgm,
}

impl MaskFormat {
    /// Maps a file extension (case-insensitive, without the dot).
    pub fn from_extension(ext: &str) -> Option<Self> {
        match ext.to_ascii_lowercase().as_str() {
            "png" => Some(MaskFormat::Png),
            "pbm" => Some(MaskFormat::Pbm),
            "pgm" => Some(MaskFormat::Pgm),
            _ => None,
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            MaskFormat::Png => "png",
            MaskFormat::Pbm => "pbm",
            MaskFormat::Pgm => "pgm",
        }
    }

    fn sniff(bytes: &[u8]) -> Result<Self> {
        if bytes.starts_with(b"\x89PNG\r\n\x1a\n") {
            return Ok(MaskFormat::Png);
        }
        match bytes {
            [b'P', b'1' | b'4', ..] => Ok(MaskFormat::Pbm),
            [b'P', b'2' | b'5', ..] => Ok(MaskFormat::Pgm),
            [b'P', b'3' | b'6', ..] => Err(Error::UnsupportedFormat("PPM color images are not supported".into())),
            [] => Err(Error::MalformedImage("empty file".into())),
            _ => Err(Error::UnsupportedFormat("expected PNG, PBM or PGM content".into())),
        }
    }
}

/// Non-fatal observations made while decoding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LoadWarning {
    /// Pixels whose value was neither 0 nor the format maximum.
    NonBinaryPixels { count: u64 },
}

/// A decoded mask together with anything worth reporting about its pixels.
#[derive(Debug, Clone)]
pub struct LoadedMask {
    pub mask: BinaryMask,
    pub warnings: Vec<LoadWarning>,
}

impl LoadedMask {
    pub fn is_non_binary(&self) -> bool {
        self.warnings.iter().any(|w| matches!(w, LoadWarning::NonBinaryPixels { .. }))
    }
}

/// Decodes mask bytes. Any nonzero luminance is lesion.
///
/// Without a hint the format is sniffed from the magic bytes. RGB input is
/// reduced through integer luma `299 R + 587 G + 114 B`; alpha is ignored.
pub fn load_mask(bytes: &[u8], hint: Option<MaskFormat>) -> Result<LoadedMask> {
    let format = match hint {
        Some(f) => f,
        None => MaskFormat::sniff(bytes)?,
    };
    let (width, height, levels) = match format {
        MaskFormat::Png => decode_png(bytes)?,
        MaskFormat::Pbm | MaskFormat::Pgm => decode_pnm(bytes, format)?,
    };
    let mut non_binary = 0u64;
    let pixels = levels
        .into_iter()
        .map(|level| {
            if level == Level::Mid {
                non_binary += 1;
            }
            level != Level::Zero
        })
        .collect();
    let mask = BinaryMask::from_pixels(width, height, pixels)
        .map_err(|e| Error::MalformedImage(e.to_string()))?;
    let warnings = if non_binary > 0 { vec![LoadWarning::NonBinaryPixels { count: non_binary }] } else { vec![] };
    Ok(LoadedMask { mask, warnings })
}

/// Encodes a mask. PNG output is 8-bit grayscale holding only 0 and 255.
pub fn save_mask(mask: &BinaryMask, format: MaskFormat) -> Result<Vec<u8>> {
    match format {
        MaskFormat::Png => encode_png(mask),
        MaskFormat::Pbm => Ok(encode_pbm(mask)),
        MaskFormat::Pgm => Ok(encode_pgm(mask)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Level {
    Zero,
    Mid,
    Max,
}

impl Level {
    fn classify(value: u32, max: u32) -> Self {
        if value == 0 {
            Level::Zero
        } else if value >= max {
            Level::Max
        } else {
            Level::Mid
        }
    }
}

fn decode_png(bytes: &[u8]) -> Result<(usize, usize, Vec<Level>)> {
    let malformed = |e: png::DecodingError| Error::MalformedImage(e.to_string());
    let mut decoder = png::Decoder::new(Cursor::new(bytes));
    decoder.set_transformations(png::Transformations::EXPAND);
    let mut reader = decoder.read_info().map_err(malformed)?;
    let size = reader
        .output_buffer_size()
        .ok_or_else(|| Error::MalformedImage("image too large".into()))?;
    let mut buf = vec![0u8; size];
    let info = reader.next_frame(&mut buf).map_err(malformed)?;
    let (width, height) = (info.width as usize, info.height as usize);

    let (channels, has_alpha) = match info.color_type {
        png::ColorType::Grayscale => (1, false),
        png::ColorType::GrayscaleAlpha => (2, true),
        png::ColorType::Rgb => (3, false),
        png::ColorType::Rgba => (4, true),
        png::ColorType::Indexed => {
            return Err(Error::MalformedImage("palette was not expanded".into()));
        }
    };
    let wide = match info.bit_depth {
        png::BitDepth::Eight => false,
        png::BitDepth::Sixteen => true,
        other => return Err(Error::MalformedImage(format!("unexpected bit depth {other:?} after expansion"))),
    };
    let sample_bytes = if wide { 2 } else { 1 };
    let max: u32 = if wide { 65535 } else { 255 };
    let color_channels = if has_alpha { channels - 1 } else { channels };

    let mut levels = Vec::with_capacity(width * height);
    for row in buf.chunks_exact(info.line_size).take(height) {
        for px in row.chunks_exact(channels * sample_bytes).take(width) {
            let sample = |i: usize| -> u32 {
                if wide {
                    u32::from(u16::from_be_bytes([px[2 * i], px[2 * i + 1]]))
                } else {
                    u32::from(px[i])
                }
            };
            let level = if color_channels == 1 {
                Level::classify(sample(0), max)
            } else {
                let luma = 299 * u64::from(sample(0)) + 587 * u64::from(sample(1)) + 114 * u64::from(sample(2));
                if luma == 0 {
                    Level::Zero
                } else if luma == 1000 * u64::from(max) {
                    Level::Max
                } else {
                    Level::Mid
                }
            };
            levels.push(level);
        }
    }
    if levels.len() != width * height {
        return Err(Error::MalformedImage("truncated image data".into()));
    }
    Ok((width, height, levels))
}

fn encode_png(mask: &BinaryMask) -> Result<Vec<u8>> {
    let fail = |e: png::EncodingError| Error::EncodeFailure(e.to_string());
    let mut out = Vec::new();
    {
        let mut encoder = png::Encoder::new(&mut out, mask.width as u32, mask.height as u32);
        encoder.set_color(png::ColorType::Grayscale);
        encoder.set_depth(png::BitDepth::Eight);
        let mut writer = encoder.write_header().map_err(fail)?;
        let data: Vec<u8> = mask.pixels.iter().map(|&p| if p { 255 } else { 0 }).collect();
        writer.write_image_data(&data).map_err(fail)?;
        writer.finish().map_err(fail)?;
    }
    Ok(out)
}

/// Whitespace- and comment-aware tokenizer over a PNM header.
struct PnmHeader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> PnmHeader<'a> {
    fn skip_space(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                b if b.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    fn number(&mut self) -> Result<u32> {
        self.skip_space();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::MalformedImage("expected a number in PNM data".into()));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::MalformedImage("number out of range in PNM data".into()))
    }

    /// Consumes the single whitespace byte that separates header and raster.
    fn raster(mut self) -> Result<&'a [u8]> {
        match self.bytes.get(self.pos) {
            Some(b) if b.is_ascii_whitespace() => {
                self.pos += 1;
                Ok(&self.bytes[self.pos..])
            }
            _ => Err(Error::MalformedImage("missing separator before raster".into())),
        }
    }
}

fn decode_pnm(bytes: &[u8], format: MaskFormat) -> Result<(usize, usize, Vec<Level>)> {
    if bytes.len() < 2 || bytes[0] != b'P' {
        return Err(Error::MalformedImage("missing PNM magic".into()));
    }
    let magic = bytes[1];
    match (format, magic) {
        (MaskFormat::Pbm, b'1' | b'4') | (MaskFormat::Pgm, b'2' | b'5') => {}
        _ => return Err(Error::MalformedImage(format!("magic P{} does not match {format:?}", magic as char))),
    }
    let mut header = PnmHeader { bytes, pos: 2 };
    let width = header.number()? as usize;
    let height = header.number()? as usize;
    if width == 0 || height == 0 {
        return Err(Error::MalformedImage("zero image dimension".into()));
    }
    let n = width
        .checked_mul(height)
        .ok_or_else(|| Error::MalformedImage("image too large".into()))?;
    let truncated = || Error::MalformedImage("truncated raster".into());

    let levels = match magic {
        // PBM: 1 is black (background), 0 is white (lesion).
        b'1' => {
            let mut levels = Vec::with_capacity(n);
            header.skip_space();
            for &b in &bytes[header.pos..] {
                match b {
                    b'0' => levels.push(Level::Max),
                    b'1' => levels.push(Level::Zero),
                    b if b.is_ascii_whitespace() => {}
                    _ => return Err(Error::MalformedImage("unexpected byte in P1 raster".into())),
                }
                if levels.len() == n {
                    break;
                }
            }
            levels
        }
        b'4' => {
            let raster = header.raster()?;
            let stride = width.div_ceil(8);
            if raster.len() < stride * height {
                return Err(truncated());
            }
            let mut levels = Vec::with_capacity(n);
            for row in raster.chunks_exact(stride).take(height) {
                for c in 0..width {
                    let black = row[c / 8] & (0x80 >> (c % 8)) != 0;
                    levels.push(if black { Level::Zero } else { Level::Max });
                }
            }
            levels
        }
        b'2' => {
            let max = header.number()?;
            check_maxval(max)?;
            let mut levels = Vec::with_capacity(n);
            for _ in 0..n {
                let v = header.number().map_err(|_| truncated())?;
                if v > max {
                    return Err(Error::MalformedImage(format!("sample {v} exceeds maxval {max}")));
                }
                levels.push(Level::classify(v, max));
            }
            levels
        }
        _ => {
            let max = header.number()?;
            check_maxval(max)?;
            let raster = header.raster()?;
            let wide = max > 255;
            let needed = if wide { 2 * n } else { n };
            if raster.len() < needed {
                return Err(truncated());
            }
            if wide {
                raster[..needed]
                    .chunks_exact(2)
                    .map(|p| Level::classify(u32::from(u16::from_be_bytes([p[0], p[1]])), max))
                    .collect()
            } else {
                raster[..n].iter().map(|&v| Level::classify(u32::from(v), max)).collect()
            }
        }
    };
    if levels.len() != n {
        return Err(truncated());
    }
    Ok((width, height, levels))
}

fn check_maxval(max: u32) -> Result<()> {
    if max == 0 || max > 65535 {
        return Err(Error::MalformedImage(format!("invalid maxval {max}")));
    }
    Ok(())
}

fn encode_pbm(mask: &BinaryMask) -> Vec<u8> {
    let mut out = format!("P4\n{} {}\n", mask.width, mask.height).into_bytes();
    let stride = mask.width.div_ceil(8);
    for row in mask.pixels.chunks_exact(mask.width) {
        let mut packed = vec![0u8; stride];
        for (c, &lesion) in row.iter().enumerate() {
            if !lesion {
                packed[c / 8] |= 0x80 >> (c % 8);
            }
        }
        out.extend_from_slice(&packed);
    }
    out
}

fn encode_pgm(mask: &BinaryMask) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", mask.width, mask.height).into_bytes();
    out.extend(mask.pixels.iter().map(|&p| if p { 255u8 } else { 0 }));
    out
}
