//! Binary PGM (`P5`) and PPM (`P6`) with maxval 255, plus color-plane
//! separation.
//!
//! Decoding accepts `#` comments and arbitrary whitespace between header
//! fields. Encoding always writes the canonical `P5\n{w} {h}\n255\n` form.
//! Samples are row-major: index `y * width + x`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// One 8-bit channel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImagePlane {
    width: usize,
    height: usize,
    samples: Vec<u8>,
}

impl ImagePlane {
    /// Fails with a shape error if `samples.len() != width * height`.
    pub fn new(width: usize, height: usize, samples: Vec<u8>) -> Result<Self> {
        match width.checked_mul(height) {
            Some(n) if n == samples.len() => Ok(ImagePlane {
                width,
                height,
                samples,
            }),
            _ => Err(Error::ShapeMismatch {
                expected: format!("{width}x{height} samples"),
                found: format!("{} samples", samples.len()),
            }),
        }
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Self {
        ImagePlane {
            width,
            height,
            samples: vec![value; width * height],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn samples(&self) -> &[u8] {
        &self.samples
    }

    pub fn samples_mut(&mut self) -> &mut [u8] {
        &mut self.samples
    }

    pub fn into_samples(self) -> Vec<u8> {
        self.samples
    }

    pub fn row(&self, y: usize) -> &[u8] {
        &self.samples[y * self.width..(y + 1) * self.width]
    }

    fn shape(&self) -> String {
        format!("{}x{}", self.width, self.height)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Channel {
    #[default]
    Red,
    Green,
    Blue,
}

impl Channel {
    pub const ALL: [Channel; 3] = [Channel::Red, Channel::Green, Channel::Blue];

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Channel::Red => "red",
            Channel::Green => "green",
            Channel::Blue => "blue",
        })
    }
}

impl FromStr for Channel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "r" | "red" => Ok(Channel::Red),
            "g" | "green" => Ok(Channel::Green),
            "b" | "blue" => Ok(Channel::Blue),
            _ => Err(format!("unknown plane {s:?}, expected r, g or b")),
        }
    }
}

/// Three planes of identical dimensions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgbImage {
    planes: [ImagePlane; 3],
}

impl RgbImage {
    pub fn from_planes(red: ImagePlane, green: ImagePlane, blue: ImagePlane) -> Result<Self> {
        for other in [&green, &blue] {
            if (other.width, other.height) != (red.width, red.height) {
                return Err(Error::ShapeMismatch {
                    expected: red.shape(),
                    found: other.shape(),
                });
            }
        }
        Ok(RgbImage {
            planes: [red, green, blue],
        })
    }

    /// Builds an image from interleaved `r g b r g b ...` samples.
    pub fn from_interleaved(width: usize, height: usize, data: &[u8]) -> Result<Self> {
        let mut planes = [Vec::new(), Vec::new(), Vec::new()];
        for plane in &mut planes {
            plane.reserve(data.len() / 3);
        }
        for px in data.chunks(3) {
            for (plane, &v) in planes.iter_mut().zip(px) {
                plane.push(v);
            }
        }
        let [r, g, b] = planes;
        RgbImage::from_planes(
            ImagePlane::new(width, height, r)?,
            ImagePlane::new(width, height, g)?,
            ImagePlane::new(width, height, b)?,
        )
    }

    pub fn width(&self) -> usize {
        self.planes[0].width
    }

    pub fn height(&self) -> usize {
        self.planes[0].height
    }

    pub fn plane(&self, which: Channel) -> &ImagePlane {
        &self.planes[which.index()]
    }

    pub fn planes(&self) -> &[ImagePlane; 3] {
        &self.planes
    }

    pub fn interleaved(&self) -> Vec<u8> {
        let [r, g, b] = &self.planes;
        r.samples
            .iter()
            .zip(&g.samples)
            .zip(&b.samples)
            .flat_map(|((&r, &g), &b)| [r, g, b])
            .collect()
    }
}

/// A decoded file: grayscale (`P5`) or RGB (`P6`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Image {
    Gray(ImagePlane),
    Rgb(RgbImage),
}

impl Image {
    pub fn width(&self) -> usize {
        match self {
            Image::Gray(p) => p.width,
            Image::Rgb(img) => img.width(),
        }
    }

    pub fn height(&self) -> usize {
        match self {
            Image::Gray(p) => p.height,
            Image::Rgb(img) => img.height(),
        }
    }
}

impl From<ImagePlane> for Image {
    fn from(plane: ImagePlane) -> Self {
        Image::Gray(plane)
    }
}

impl From<RgbImage> for Image {
    fn from(image: RgbImage) -> Self {
        Image::Rgb(image)
    }
}

struct HeaderReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl HeaderReader<'_> {
    fn skip_whitespace_and_comments(&mut self) {
        while let Some(&c) = self.bytes.get(self.pos) {
            if c == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else if c.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        self.skip_whitespace_and_comments();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::CorruptFile(format!("missing {what} in header")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| Error::CorruptFile(format!("{what} out of range")))
    }
}

/// Decodes a binary PGM or PPM stream. Bytes after the raster are ignored.
pub fn decode(bytes: &[u8]) -> Result<Image> {
    let channels = match bytes.get(..2) {
        Some(b"P5") => 1,
        Some(b"P6") => 3,
        _ => return Err(Error::UnsupportedFormat),
    };
    let mut header = HeaderReader { bytes, pos: 2 };
    if !header.bytes.get(2).is_some_and(|c| c.is_ascii_whitespace() || *c == b'#') {
        return Err(Error::UnsupportedFormat);
    }
    let width = header.number("width")?;
    let height = header.number("height")?;
    let maxval = header.number("maxval")?;
    if maxval != 255 {
        return Err(Error::UnsupportedDepth(maxval.try_into().unwrap_or(u32::MAX)));
    }
    match bytes.get(header.pos) {
        Some(c) if c.is_ascii_whitespace() => header.pos += 1,
        _ => return Err(Error::CorruptFile("missing separator after maxval".into())),
    }
    let raster_len = width
        .checked_mul(height)
        .and_then(|n| n.checked_mul(channels))
        .ok_or_else(|| Error::CorruptFile(format!("dimensions {width}x{height} overflow")))?;
    let raster = bytes
        .get(header.pos..)
        .and_then(|rest| rest.get(..raster_len))
        .ok_or_else(|| {
            Error::CorruptFile(format!(
                "truncated raster: expected {raster_len} bytes, found {}",
                bytes.len() - header.pos
            ))
        })?;
    Ok(match channels {
        1 => Image::Gray(ImagePlane::new(width, height, raster.to_vec())?),
        _ => Image::Rgb(RgbImage::from_interleaved(width, height, raster)?),
    })
}

/// Canonical binary encoding of `image`.
pub fn encode(image: &Image) -> Vec<u8> {
    let (magic, raster) = match image {
        Image::Gray(p) => ("P5", p.samples.clone()),
        Image::Rgb(img) => ("P6", img.interleaved()),
    };
    let mut out = format!("{magic}\n{} {}\n255\n", image.width(), image.height()).into_bytes();
    out.extend_from_slice(&raster);
    out
}

pub fn split_plane(image: &RgbImage, which: Channel) -> ImagePlane {
    image.planes[which.index()].clone()
}

/// Returns `image` with the `which` channel replaced by `plane`.
pub fn merge_plane(image: &RgbImage, which: Channel, plane: ImagePlane) -> Result<RgbImage> {
    if (plane.width, plane.height) != (image.width(), image.height()) {
        return Err(Error::ShapeMismatch {
            expected: image.planes[0].shape(),
            found: plane.shape(),
        });
    }
    let mut merged = image.clone();
    merged.planes[which.index()] = plane;
    Ok(merged)
}
