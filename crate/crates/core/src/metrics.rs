//! Mean squared error and peak signal-to-noise ratio for 8-bit samples.
//!
//! MSE averages over every compared sample, so an RGB image contributes
//! `3 * width * height` samples. PSNR is `10 * log10(255^2 / MSE)`.

use std::fmt;

use crate::error::{Error, Result};
use crate::image_io::{Image, ImagePlane, RgbImage};

pub const PEAK: f64 = 255.0;

/// Anything that can be compared sample by sample.
pub trait SampleGrid {
    /// `(width, height, channels)`.
    fn shape(&self) -> (usize, usize, usize);
    fn channels(&self) -> Vec<&[u8]>;
}

impl SampleGrid for ImagePlane {
    fn shape(&self) -> (usize, usize, usize) {
        (self.width(), self.height(), 1)
    }

    fn channels(&self) -> Vec<&[u8]> {
        vec![self.samples()]
    }
}

impl SampleGrid for RgbImage {
    fn shape(&self) -> (usize, usize, usize) {
        (self.width(), self.height(), 3)
    }

    fn channels(&self) -> Vec<&[u8]> {
        self.planes().iter().map(ImagePlane::samples).collect()
    }
}

impl SampleGrid for Image {
    fn shape(&self) -> (usize, usize, usize) {
        match self {
            Image::Gray(p) => p.shape(),
            Image::Rgb(img) => img.shape(),
        }
    }

    fn channels(&self) -> Vec<&[u8]> {
        match self {
            Image::Gray(p) => p.channels(),
            Image::Rgb(img) => img.channels(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Psnr {
    Db(f64),
    /// The inputs were identical.
    Infinite,
}

impl Psnr {
    pub fn from_mse(mse: f64) -> Psnr {
        if mse == 0.0 {
            Psnr::Infinite
        } else {
            Psnr::Db(10.0 * (PEAK * PEAK / mse).log10())
        }
    }

    pub fn db(self) -> f64 {
        match self {
            Psnr::Db(v) => v,
            Psnr::Infinite => f64::INFINITY,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Psnr::Infinite)
    }
}

/// Four decimals, or `inf`.
impl fmt::Display for Psnr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Psnr::Db(v) => write!(f, "{v:.4}"),
            Psnr::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QualityReport {
    pub mse: f64,
    pub psnr: Psnr,
    pub samples_compared: usize,
}

fn shape_string((w, h, c): (usize, usize, usize)) -> String {
    format!("{w}x{h}x{c}")
}

fn squared_error<T: SampleGrid + ?Sized>(reference: &T, test: &T) -> Result<(u64, usize)> {
    if reference.shape() != test.shape() {
        return Err(Error::ShapeMismatch {
            expected: shape_string(reference.shape()),
            found: shape_string(test.shape()),
        });
    }
    let mut sum = 0u64;
    let mut count = 0usize;
    for (a, b) in reference.channels().into_iter().zip(test.channels()) {
        count += a.len();
        sum += a
            .iter()
            .zip(b)
            .map(|(&x, &y)| {
                let d = x.abs_diff(y) as u64;
                d * d
            })
            .sum::<u64>();
    }
    Ok((sum, count))
}

/// Mean squared error over all samples. Empty inputs give 0.
pub fn mse<T: SampleGrid + ?Sized>(reference: &T, test: &T) -> Result<f64> {
    let (sum, count) = squared_error(reference, test)?;
    Ok(if count == 0 { 0.0 } else { sum as f64 / count as f64 })
}

pub fn psnr<T: SampleGrid + ?Sized>(reference: &T, test: &T) -> Result<QualityReport> {
    let (sum, count) = squared_error(reference, test)?;
    let mse = if count == 0 { 0.0 } else { sum as f64 / count as f64 };
    Ok(QualityReport {
        mse,
        psnr: Psnr::from_mse(mse),
        samples_compared: count,
    })
}
