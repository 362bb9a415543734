//! Chart images, plot areas, axis calibration and corpus records.
//!
//! Coordinates are image pixels: origin at the top-left corner, y growing
//! downward. A "higher" data value therefore has a smaller y.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::series::PointSeries;

pub type Rgb = [u8; 3];

pub const WHITE: Rgb = [255, 255, 255];
pub const BLACK: Rgb = [0, 0, 0];

/// Row-major RGB raster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RasterImage {
    width: u32,
    height: u32,
    pixels: Vec<Rgb>,
}

impl RasterImage {
    pub fn filled(width: u32, height: u32, color: Rgb) -> Result<Self> {
        Self::from_pixels(width, height, vec![color; width as usize * height as usize])
    }

    pub fn from_pixels(width: u32, height: u32, pixels: Vec<Rgb>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::contract("image dimensions must be at least 1x1"));
        }
        if pixels.len() != width as usize * height as usize {
            return Err(Error::contract(format!(
                "{width}x{height} image needs {} pixels, got {}",
                width as usize * height as usize,
                pixels.len()
            )));
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn pixels(&self) -> &[Rgb] {
        &self.pixels
    }

    pub fn get(&self, x: u32, y: u32) -> Rgb {
        self.pixels[y as usize * self.width as usize + x as usize]
    }

    pub fn put(&mut self, x: u32, y: u32, c: Rgb) {
        let w = self.width as usize;
        self.pixels[y as usize * w + x as usize] = c;
    }

    pub fn put_checked(&mut self, x: i64, y: i64, c: Rgb) {
        if x >= 0 && y >= 0 && x < self.width as i64 && y < self.height as i64 {
            self.put(x as u32, y as u32, c);
        }
    }
}

/// Half-open pixel box `[x0, x1) x [y0, y1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlotArea {
    pub x0: u32,
    pub y0: u32,
    pub x1: u32,
    pub y1: u32,
}

impl PlotArea {
    pub fn new(x0: u32, y0: u32, x1: u32, y1: u32) -> Result<Self> {
        if x1 <= x0 || y1 <= y0 {
            return Err(Error::contract(format!(
                "plot area ({x0},{y0})-({x1},{y1}) is empty"
            )));
        }
        Ok(Self { x0, y0, x1, y1 })
    }

    /// The whole image.
    pub fn full(width: u32, height: u32) -> Self {
        Self {
            x0: 0,
            y0: 0,
            x1: width,
            y1: height,
        }
    }

    pub fn width(&self) -> u32 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> u32 {
        self.y1 - self.y0
    }

    pub fn contains_pixel(&self, x: u32, y: u32) -> bool {
        x >= self.x0 && x < self.x1 && y >= self.y0 && y < self.y1
    }

    /// Whether a real point falls inside, allowing `slack` pixels on every side
    /// of the pixel-center extent `[x0, x1 - 1]`.
    pub fn contains_point(&self, x: f64, y: f64, slack: f64) -> bool {
        x >= self.x0 as f64 - slack
            && x <= (self.x1 - 1) as f64 + slack
            && y >= self.y0 as f64 - slack
            && y <= (self.y1 - 1) as f64 + slack
    }

    pub fn fits(&self, width: u32, height: u32) -> bool {
        self.x1 <= width && self.y1 <= height
    }

    pub fn pixels(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (self.y0..self.y1).flat_map(move |y| (self.x0..self.x1).map(move |x| (x, y)))
    }
}

/// A pixel coordinate paired with the data value it represents.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisRef {
    pub pixel: f64,
    pub value: f64,
}

/// Two reference pairs per axis defining affine pixel-to-data maps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisCalibration {
    pub x: [AxisRef; 2],
    pub y: [AxisRef; 2],
}

impl AxisCalibration {
    pub fn new(x: [(f64, f64); 2], y: [(f64, f64); 2]) -> Result<Self> {
        let to_refs = |r: [(f64, f64); 2]| r.map(|(pixel, value)| AxisRef { pixel, value });
        let cal = Self {
            x: to_refs(x),
            y: to_refs(y),
        };
        cal.validate()?;
        Ok(cal)
    }

    /// Pixel units in both axes, with y negated so data grows upward.
    pub fn identity() -> Self {
        Self {
            x: [AxisRef { pixel: 0.0, value: 0.0 }, AxisRef { pixel: 1.0, value: 1.0 }],
            y: [AxisRef { pixel: 0.0, value: 0.0 }, AxisRef { pixel: 1.0, value: -1.0 }],
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, refs) in [("x", &self.x), ("y", &self.y)] {
            if refs.iter().any(|r| !r.pixel.is_finite() || !r.value.is_finite()) {
                return Err(Error::Calibration(format!("{name}-axis reference is not finite")));
            }
            if refs[0].pixel == refs[1].pixel {
                return Err(Error::Calibration(format!(
                    "{name}-axis reference pixels are equal ({})",
                    refs[0].pixel
                )));
            }
        }
        Ok(())
    }
}

/// One corpus record: a chart image and the series drawn into it.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartSample {
    pub image: RasterImage,
    pub gt_series: Vec<PointSeries>,
    pub plot_area: PlotArea,
    pub axis_calibration: Option<AxisCalibration>,
    pub metadata: BTreeMap<String, String>,
}

/// Slack allowed around the plot area when checking ground-truth points.
pub const PLOT_AREA_SLACK: f64 = 0.5;

impl ChartSample {
    pub fn validate(&self) -> Result<()> {
        if !self.plot_area.fits(self.image.width(), self.image.height()) {
            return Err(Error::contract("plot area exceeds the image"));
        }
        for (i, s) in self.gt_series.iter().enumerate() {
            if let Some(p) = s
                .iter()
                .find(|p| !self.plot_area.contains_point(p.x, p.y, PLOT_AREA_SLACK))
            {
                return Err(Error::contract(format!(
                    "series {i} point ({}, {}) lies outside the plot area",
                    p.x, p.y
                )));
            }
        }
        if let Some(cal) = &self.axis_calibration {
            cal.validate()?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn calibration_rejects_equal_pixels() {
        let err = AxisCalibration::new([(3.0, 0.0), (3.0, 1.0)], [(0.0, 0.0), (1.0, 1.0)]);
        assert!(matches!(err, Err(Error::Calibration(_))));
    }

    #[test]
    fn plot_area_point_slack() {
        let pa = PlotArea::new(10, 10, 20, 20).unwrap();
        assert!(pa.contains_point(9.5, 19.5, 0.5));
        assert!(!pa.contains_point(9.4, 15.0, 0.5));
        assert_eq!((pa.width(), pa.height()), (10, 10));
        assert!(PlotArea::new(5, 5, 5, 9).is_err());
    }

    #[test]
    fn image_length_checked() {
        assert!(RasterImage::from_pixels(2, 2, vec![WHITE; 3]).is_err());
    }
}
