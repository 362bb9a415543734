//! Bresenham rendering of point series into line masks and chart images.

use crate::chart::{ChartSample, RasterImage, Rgb, BLACK, WHITE};
use crate::error::{Error, Result};
use crate::mask::LineMask;
use crate::series::PointSeries;
use crate::synth::{generate_series, ChartSpec};

/// Ground-truth mask thickness in pixels.
pub const DEFAULT_THICKNESS: u32 = 3;

pub const GRID_COLOR: Rgb = [225, 225, 225];
pub const AXIS_COLOR: Rgb = BLACK;
pub const BACKGROUND: Rgb = WHITE;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StrokeStyle {
    /// Odd, so the stroke stays centered on the traced line.
    pub thickness: u32,
    /// `(on, off)` pixel counts along the traced path.
    pub dash_pattern: Option<(u32, u32)>,
    pub color: Rgb,
}

impl Default for StrokeStyle {
    fn default() -> Self {
        Self {
            thickness: DEFAULT_THICKNESS,
            dash_pattern: None,
            color: BLACK,
        }
    }
}

impl StrokeStyle {
    pub fn validate(&self) -> Result<()> {
        check_thickness(self.thickness)?;
        if let Some((on, _)) = self.dash_pattern {
            if on == 0 {
                return Err(Error::contract("dash pattern needs a non-zero on length"));
            }
        }
        Ok(())
    }
}

fn check_thickness(thickness: u32) -> Result<()> {
    if thickness == 0 || thickness.is_multiple_of(2) {
        return Err(Error::contract(format!(
            "thickness must be odd and >= 1, got {thickness}"
        )));
    }
    Ok(())
}

pub type Pixel = (i64, i64);

/// Bresenham's 8-connected pixel chain from `p0` to `p1`, both inclusive.
///
/// The chain is always traced from the lexicographically smaller endpoint
/// (by x, then y) and reversed when needed, so swapping the endpoints yields
/// exactly the reversed chain and the pixel set never depends on direction.
pub fn bresenham_trace(p0: Pixel, p1: Pixel) -> Vec<Pixel> {
    if p1 < p0 {
        let mut chain = trace_forward(p1, p0);
        chain.reverse();
        chain
    } else {
        trace_forward(p0, p1)
    }
}

fn trace_forward((mut x, mut y): Pixel, (x1, y1): Pixel) -> Vec<Pixel> {
    let dx = (x1 - x).abs();
    let dy = -(y1 - y).abs();
    let sx = if x < x1 { 1 } else { -1 };
    let sy = if y < y1 { 1 } else { -1 };
    let mut err = dx + dy;
    let mut chain = Vec::with_capacity((dx.max(-dy) + 1) as usize);
    loop {
        chain.push((x, y));
        if x == x1 && y == y1 {
            break;
        }
        let e2 = 2 * err;
        if e2 >= dy {
            err += dy;
            x += sx;
        }
        if e2 <= dx {
            err += dx;
            y += sy;
        }
    }
    chain
}

/// Rounds a real coordinate half away from zero to its pixel center.
pub fn round_to_pixel(v: f64) -> i64 {
    v.round() as i64
}

/// The ordered pixel path through all rounded points of `s`, with shared
/// segment endpoints emitted once.
pub fn trace_series(s: &PointSeries) -> Vec<Pixel> {
    let pts: Vec<Pixel> = s
        .iter()
        .map(|p| (round_to_pixel(p.x), round_to_pixel(p.y)))
        .collect();
    if pts.len() == 1 {
        return pts;
    }
    let mut path: Vec<Pixel> = Vec::new();
    for w in pts.windows(2) {
        let chain = bresenham_trace(w[0], w[1]);
        let skip = usize::from(!path.is_empty());
        path.extend(chain.into_iter().skip(skip));
    }
    path
}

/// Renders `s` as a continuous line mask of the given odd thickness.
///
/// The mask is the union of Bresenham chains between consecutive rounded
/// points, dilated by a square of side `thickness` and clipped to the raster.
pub fn render_line_mask(s: &PointSeries, width: u32, height: u32, thickness: u32) -> Result<LineMask> {
    check_thickness(thickness)?;
    if s.len() < 2 {
        return Err(Error::contract("rendering needs at least two points"));
    }
    if width == 0 || height == 0 {
        return Err(Error::contract("raster dimensions must be at least 1x1"));
    }
    let core = LineMask::from_pixels(width, height, trace_series(s));
    let mask = core.dilate_square(thickness);
    if mask.is_empty() {
        return Err(Error::EmptyMask { width, height });
    }
    Ok(mask)
}

/// Pixels of the path that are inked under a dash pattern.
fn dashed(path: &[Pixel], dash: Option<(u32, u32)>) -> Vec<Pixel> {
    match dash {
        None => path.to_vec(),
        Some((on, off)) => {
            let period = (on + off) as usize;
            path.iter()
                .enumerate()
                .filter(|(i, _)| i % period < on as usize)
                .map(|(_, &p)| p)
                .collect()
        }
    }
}

/// Draws the complete chart described by `spec` and returns it together with
/// the exact series used.
///
/// Layer order: background, grid, axes, then lines in series-index order so
/// later lines occlude earlier ones.
pub fn render_chart(spec: &ChartSpec) -> Result<ChartSample> {
    if spec.n_lines == 0 {
        return Err(Error::contract("chart spec has zero lines"));
    }
    spec.validate()?;
    paint_chart(spec, generate_series(spec)?)
}

/// Draws `series` with the styles, grid and layout of `spec`, bypassing
/// series generation. One series per style is required.
pub fn paint_chart(spec: &ChartSpec, series: Vec<PointSeries>) -> Result<ChartSample> {
    if series.len() != spec.styles.len() {
        return Err(Error::contract(format!(
            "{} series for {} styles",
            series.len(),
            spec.styles.len()
        )));
    }
    let pa = spec.plot_area();
    let mut img = RasterImage::filled(spec.width, spec.height, BACKGROUND)?;

    if spec.grid {
        let step_x = (pa.width() / 5).max(1);
        let step_y = (pa.height() / 5).max(1);
        for x in (pa.x0 + step_x..pa.x1).step_by(step_x as usize) {
            for y in pa.y0..pa.y1 {
                img.put(x, y, GRID_COLOR);
            }
        }
        for y in (pa.y0 + step_y..pa.y1).step_by(step_y as usize) {
            for x in pa.x0..pa.x1 {
                img.put(x, y, GRID_COLOR);
            }
        }
    }

    // axes sit outside the plot area: left edge and bottom edge
    let ax = pa.x0 as i64 - 2;
    let ay = pa.y1 as i64 + 1;
    for y in pa.y0 as i64 - 1..=ay {
        img.put_checked(ax, y, AXIS_COLOR);
    }
    for x in ax..=pa.x1 as i64 {
        img.put_checked(x, ay, AXIS_COLOR);
    }

    for (s, style) in series.iter().zip(&spec.styles) {
        let inked = dashed(&trace_series(s), style.dash_pattern);
        let stroke = LineMask::from_pixels(spec.width, spec.height, inked).dilate_square(style.thickness);
        for (x, y) in stroke.foreground() {
            img.put(x, y, style.color);
        }
    }

    let sample = ChartSample {
        image: img,
        gt_series: series,
        plot_area: pa,
        axis_calibration: Some(spec.axis_calibration()),
        metadata: spec.metadata(),
    };
    sample.validate()?;
    Ok(sample)
}

/// Ground-truth masks for every series of a sample, at `thickness`.
pub fn render_gt_masks(sample: &ChartSample, thickness: u32) -> Result<Vec<LineMask>> {
    sample
        .gt_series
        .iter()
        .map(|s| render_line_mask(s, sample.image.width(), sample.image.height(), thickness))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(pts: &[(f64, f64)]) -> PointSeries {
        PointSeries::new(pts.iter().copied()).unwrap()
    }

    #[test]
    fn degenerate_trace() {
        assert_eq!(bresenham_trace((0, 0), (0, 0)), vec![(0, 0)]);
    }

    #[test]
    fn diagonal_trace() {
        assert_eq!(bresenham_trace((0, 0), (3, 3)), vec![(0, 0), (1, 1), (2, 2), (3, 3)]);
    }

    #[test]
    fn shallow_trace() {
        // err starts at dx+dy = 2; steps: x only, x+y, x only
        assert_eq!(bresenham_trace((0, 0), (3, 1)), vec![(0, 0), (1, 0), (2, 1), (3, 1)]);
    }

    #[test]
    fn reversed_trace_is_reversed_chain() {
        let mut fwd = bresenham_trace((2, 7), (-5, 1));
        fwd.reverse();
        assert_eq!(fwd, bresenham_trace((-5, 1), (2, 7)));
    }

    #[test]
    fn horizontal_mask_thickness_one() {
        let m = render_line_mask(&series(&[(0.0, 5.0), (9.0, 5.0)]), 10, 10, 1).unwrap();
        let fg: Vec<_> = m.foreground().collect();
        assert_eq!(fg, (0..10).map(|x| (x, 5)).collect::<Vec<_>>());
    }

    #[test]
    fn horizontal_mask_thickness_three() {
        let m = render_line_mask(&series(&[(0.0, 5.0), (9.0, 5.0)]), 10, 10, 3).unwrap();
        for y in 0..10 {
            for x in 0..10 {
                assert_eq!(m.get(x, y), (4..=6).contains(&y), "pixel ({x},{y})");
            }
        }
    }

    #[test]
    fn thin_mask_equals_trace() {
        let m = render_line_mask(&series(&[(0.0, 0.0), (3.0, 1.0)]), 8, 8, 1).unwrap();
        let expected = LineMask::from_pixels(8, 8, bresenham_trace((0, 0), (3, 1)));
        assert_eq!(m, expected);
    }

    #[test]
    fn rounding_is_half_away_from_zero() {
        assert_eq!(round_to_pixel(2.5), 3);
        assert_eq!(round_to_pixel(-2.5), -3);
        assert_eq!(round_to_pixel(2.49), 2);
    }

    #[test]
    fn rejects_even_thickness_and_offscreen_series() {
        let s = series(&[(0.0, 0.0), (3.0, 1.0)]);
        assert!(matches!(render_line_mask(&s, 8, 8, 2), Err(Error::Contract(_))));
        let off = series(&[(-50.0, -50.0), (-20.0, -40.0)]);
        assert!(matches!(render_line_mask(&off, 8, 8, 3), Err(Error::EmptyMask { .. })));
    }

    #[test]
    fn dash_pattern_skips_pixels() {
        let path: Vec<Pixel> = (0..10).map(|x| (x, 0)).collect();
        let inked = dashed(&path, Some((3, 2)));
        assert_eq!(inked, vec![(0, 0), (1, 0), (2, 0), (5, 0), (6, 0), (7, 0)]);
    }

    #[test]
    fn crossing_masks_overlap() {
        let a = render_line_mask(&series(&[(0.0, 0.0), (19.0, 19.0)]), 20, 20, 3).unwrap();
        let b = render_line_mask(&series(&[(0.0, 19.0), (19.0, 0.0)]), 20, 20, 3).unwrap();
        let mut union = a.clone();
        union.union_with(&b).unwrap();
        assert!(a.count() + b.count() > union.count());
    }

    proptest::proptest! {
        #[test]
        fn thin_mask_is_union_of_segment_traces(
            ys in proptest::collection::vec(-5.0f64..45.0, 2..8),
            xs in proptest::collection::vec(0.5f64..9.0, 8),
        ) {
            let mut x = -2.0;
            let pts: Vec<(f64, f64)> = ys.iter().zip(&xs).map(|(&y, &dx)| { x += dx; (x, y) }).collect();
            let s = series(&pts);
            let m = render_line_mask(&s, 40, 40, 1);
            let mut expected = LineMask::new(40, 40);
            for w in pts.windows(2) {
                let p0 = (round_to_pixel(w[0].0), round_to_pixel(w[0].1));
                let p1 = (round_to_pixel(w[1].0), round_to_pixel(w[1].1));
                for (px, py) in bresenham_trace(p0, p1) {
                    expected.set_checked(px, py, true);
                }
            }
            match m {
                Ok(m) => proptest::prop_assert_eq!(m, expected),
                Err(_) => proptest::prop_assert!(expected.is_empty()),
            }
        }

        #[test]
        fn count_monotone_in_thickness(ys in proptest::collection::vec(0.0f64..30.0, 2..6)) {
            let pts: Vec<(f64, f64)> = ys.iter().enumerate().map(|(i, &y)| (i as f64 * 7.0, y)).collect();
            let s = series(&pts);
            let counts: Vec<usize> = [1, 3, 5, 7]
                .iter()
                .map(|&t| render_line_mask(&s, 32, 32, t).unwrap().count())
                .collect();
            proptest::prop_assert!(counts.windows(2).all(|w| w[0] <= w[1]));
        }
    }
}
