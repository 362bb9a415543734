//! Per-line boolean instance masks.

use crate::error::{Error, Result};

/// One line instance: a row-major boolean raster with a confidence score.
///
/// Masks in a set may overlap; nothing here enforces disjointness.
#[derive(Debug, Clone, PartialEq)]
pub struct LineMask {
    width: u32,
    height: u32,
    bits: Vec<bool>,
    confidence: f64,
}

impl LineMask {
    /// An all-background mask with confidence 1.
    pub fn new(width: u32, height: u32) -> Self {
        Self {
            width,
            height,
            bits: vec![false; width as usize * height as usize],
            confidence: 1.0,
        }
    }

    pub fn from_bits(width: u32, height: u32, bits: Vec<bool>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::contract("mask dimensions must be at least 1x1"));
        }
        if bits.len() != width as usize * height as usize {
            return Err(Error::contract(format!(
                "mask of {width}x{height} needs {} bits, got {}",
                width as usize * height as usize,
                bits.len()
            )));
        }
        Ok(Self {
            width,
            height,
            bits,
            confidence: 1.0,
        })
    }

    /// Builds a mask from `(x, y)` foreground pixels; out-of-bounds pixels are ignored.
    pub fn from_pixels(width: u32, height: u32, pixels: impl IntoIterator<Item = (i64, i64)>) -> Self {
        let mut m = Self::new(width, height);
        for (x, y) in pixels {
            m.set_checked(x, y, true);
        }
        m
    }

    pub fn with_confidence(mut self, confidence: f64) -> Self {
        self.confidence = confidence;
        self
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn confidence(&self) -> f64 {
        self.confidence
    }

    pub fn set_confidence(&mut self, confidence: f64) {
        self.confidence = confidence;
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, x: u32, y: u32) -> bool {
        self.bits[self.index(x, y)]
    }

    pub fn set(&mut self, x: u32, y: u32, value: bool) {
        let i = self.index(x, y);
        self.bits[i] = value;
    }

    /// Sets the pixel if it is inside the raster. Returns whether it was.
    pub fn set_checked(&mut self, x: i64, y: i64, value: bool) -> bool {
        if x < 0 || y < 0 || x >= self.width as i64 || y >= self.height as i64 {
            return false;
        }
        self.set(x as u32, y as u32, value);
        true
    }

    fn index(&self, x: u32, y: u32) -> usize {
        debug_assert!(x < self.width && y < self.height);
        y as usize * self.width as usize + x as usize
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    /// Foreground pixels in row-major order.
    pub fn foreground(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        let w = self.width as usize;
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(move |(i, _)| ((i % w) as u32, (i / w) as u32))
    }

    /// Foreground row indices of column `x`, ascending.
    pub fn column_rows(&self, x: u32) -> impl Iterator<Item = u32> + '_ {
        (0..self.height).filter(move |&y| self.get(x, y))
    }

    pub fn same_dims(&self, other: &LineMask) -> Result<()> {
        if self.width != other.width || self.height != other.height {
            return Err(Error::DimensionMismatch {
                left_w: self.width,
                left_h: self.height,
                right_w: other.width,
                right_h: other.height,
            });
        }
        Ok(())
    }

    /// Pixel-wise OR of `other` into `self`.
    pub fn union_with(&mut self, other: &LineMask) -> Result<()> {
        self.same_dims(other)?;
        for (a, &b) in self.bits.iter_mut().zip(&other.bits) {
            *a |= b;
        }
        Ok(())
    }

    /// Grows the mask by a centered square of side `thickness`, clipped at the borders.
    pub fn dilate_square(&self, thickness: u32) -> LineMask {
        let r = (thickness.max(1) - 1) as usize / 2;
        if r == 0 {
            return self.clone();
        }
        let (w, h) = (self.width as usize, self.height as usize);
        // separable: horizontal pass, then vertical pass
        let mut horiz = vec![false; w * h];
        for y in 0..h {
            let row = &self.bits[y * w..(y + 1) * w];
            for x in (0..w).filter(|&x| row[x]) {
                let lo = x.saturating_sub(r);
                let hi = (x + r).min(w - 1);
                horiz[y * w + lo..=y * w + hi].fill(true);
            }
        }
        let mut out = vec![false; w * h];
        for y in 0..h {
            for x in 0..w {
                if horiz[y * w + x] {
                    let lo = y.saturating_sub(r);
                    let hi = (y + r).min(h - 1);
                    for yy in lo..=hi {
                        out[yy * w + x] = true;
                    }
                }
            }
        }
        LineMask {
            width: self.width,
            height: self.height,
            bits: out,
            confidence: self.confidence,
        }
    }
}

/// Intersection over union of two equally sized masks; 0 when both are empty.
pub fn mask_iou(a: &LineMask, b: &LineMask) -> Result<f64> {
    a.same_dims(b)?;
    let (mut inter, mut union) = (0usize, 0usize);
    for (&p, &q) in a.bits.iter().zip(&b.bits) {
        inter += (p && q) as usize;
        union += (p || q) as usize;
    }
    if union == 0 {
        return Ok(0.0);
    }
    Ok(inter as f64 / union as f64)
}
