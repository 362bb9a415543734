//! Classical color-clustering line segmenter.
//!
//! Stands in for a learned mask predictor: every non-background color
//! cluster inside the plot area becomes one instance mask. Lines drawn in
//! the same color fall into one cluster, which is the expected failure mode.

use std::collections::BTreeMap;

use crate::chart::{PlotArea, RasterImage, Rgb};
use crate::error::{Error, Result};
use crate::mask::LineMask;

pub const DEFAULT_COLOR_TOLERANCE: u8 = 12;

/// Fraction of a cluster's pixels that must lie on grid rows or columns
/// for it to be treated as grid.
const GRID_FRACTION: f64 = 0.9;
/// A grid row (column) covers at least this much of the plot width (height);
/// strokes drawn over a grid line hide part of it.
const GRID_SPAN: f64 = 0.5;

pub fn chebyshev(a: Rgb, b: Rgb) -> u8 {
    (0..3).map(|i| a[i].abs_diff(b[i])).max().unwrap()
}

fn check_area(img: &RasterImage, area: &PlotArea) -> Result<()> {
    if !area.fits(img.width(), img.height()) || area.width() == 0 || area.height() == 0 {
        return Err(Error::contract(format!(
            "plot area {area:?} does not fit a {}x{} image",
            img.width(),
            img.height()
        )));
    }
    Ok(())
}

fn color_histogram(img: &RasterImage, area: &PlotArea) -> BTreeMap<Rgb, usize> {
    let mut hist = BTreeMap::new();
    for (x, y) in area.pixels() {
        *hist.entry(img.get(x, y)).or_insert(0) += 1;
    }
    hist
}

/// Modal color of the plot area; ties go to the lower RGB tuple.
pub fn estimate_background(img: &RasterImage, area: &PlotArea) -> Result<Rgb> {
    check_area(img, area)?;
    let hist = color_histogram(img, area);
    // BTreeMap iterates in ascending color order, so the first maximum wins ties.
    let mut best = ([0u8; 3], 0usize);
    for (&color, &count) in &hist {
        if count > best.1 {
            best = (color, count);
        }
    }
    Ok(best.0)
}

/// Splits the plot-area foreground into one mask per color cluster.
///
/// Colors are clustered greedily, most frequent first, each joining the first
/// cluster whose seed color is within Chebyshev distance `tol`. Grid-like
/// clusters are dropped, and masks come back sorted by descending pixel count.
pub fn segment_by_color(img: &RasterImage, area: &PlotArea, tol: u8) -> Result<Vec<LineMask>> {
    let background = estimate_background(img, area)?;
    let mut colors: Vec<(Rgb, usize)> = color_histogram(img, area)
        .into_iter()
        .filter(|&(c, _)| chebyshev(c, background) > tol)
        .collect();
    colors.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));

    let mut seeds: Vec<Rgb> = Vec::new();
    let mut cluster_of: BTreeMap<Rgb, usize> = BTreeMap::new();
    for &(c, _) in &colors {
        let idx = match seeds.iter().position(|&s| chebyshev(s, c) <= tol) {
            Some(i) => i,
            None => {
                seeds.push(c);
                seeds.len() - 1
            }
        };
        cluster_of.insert(c, idx);
    }

    let mut masks: Vec<LineMask> = vec![LineMask::new(img.width(), img.height()); seeds.len()];
    for (x, y) in area.pixels() {
        if let Some(&i) = cluster_of.get(&img.get(x, y)) {
            masks[i].set(x, y, true);
        }
    }

    let mut masks: Vec<LineMask> = masks.into_iter().filter(|m| !is_grid_like(m, area)).collect();
    masks.sort_by_key(|m| std::cmp::Reverse(m.count()));
    Ok(masks)
}

/// Grid lines are one pixel thin, so a qualifying row (column) must not have
/// a qualifying neighbor; this keeps thick horizontal strokes out.
fn thin_runs(coverage: &[usize], need: usize) -> Vec<bool> {
    let full: Vec<bool> = coverage.iter().map(|&c| c >= need).collect();
    (0..full.len())
        .map(|i| full[i] && !(i > 0 && full[i - 1]) && !full.get(i + 1).copied().unwrap_or(false))
        .collect()
}

fn is_grid_like(m: &LineMask, area: &PlotArea) -> bool {
    let total = m.count();
    if total == 0 {
        return true;
    }
    let row_need = (GRID_SPAN * area.width() as f64).ceil() as usize;
    let col_need = (GRID_SPAN * area.height() as f64).ceil() as usize;
    let rows: Vec<usize> = (0..m.height())
        .map(|y| (area.x0..area.x1).filter(|&x| m.get(x, y)).count())
        .collect();
    let cols: Vec<usize> = (0..m.width())
        .map(|x| (area.y0..area.y1).filter(|&y| m.get(x, y)).count())
        .collect();
    let grid_rows = thin_runs(&rows, row_need);
    let grid_cols = thin_runs(&cols, col_need);
    let on_grid = m
        .foreground()
        .filter(|&(x, y)| grid_rows[y as usize] || grid_cols[x as usize])
        .count();
    on_grid as f64 > GRID_FRACTION * total as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::WHITE;

    const RED: Rgb = [200, 30, 30];
    const BLUE: Rgb = [30, 30, 200];

    #[test]
    fn background_of_blank_area() {
        let img = RasterImage::filled(10, 10, WHITE).unwrap();
        assert_eq!(estimate_background(&img, &PlotArea::full(10, 10)).unwrap(), WHITE);
    }

    #[test]
    fn background_tie_prefers_lower_tuple() {
        let mut img = RasterImage::filled(4, 2, RED).unwrap();
        for x in 0..4 {
            img.put(x, 1, BLUE);
        }
        assert_eq!(estimate_background(&img, &PlotArea::full(4, 2)).unwrap(), BLUE);
    }

    #[test]
    fn blank_area_yields_no_masks() {
        let img = RasterImage::filled(16, 16, WHITE).unwrap();
        assert!(segment_by_color(&img, &PlotArea::full(16, 16), 12).unwrap().is_empty());
    }

    #[test]
    fn near_colors_share_a_cluster() {
        let mut img = RasterImage::filled(20, 20, WHITE).unwrap();
        for x in 2..8 {
            img.put(x, 3, RED);
            img.put(x, 10, [205, 36, 25]);
            img.put(x, 15, BLUE);
        }
        let masks = segment_by_color(&img, &PlotArea::full(20, 20), 12).unwrap();
        assert_eq!(masks.len(), 2);
        assert_eq!(masks[0].count(), 12);
        assert_eq!(masks[1].count(), 6);
    }

    #[test]
    fn full_width_grid_is_dropped() {
        let mut img = RasterImage::filled(20, 20, WHITE).unwrap();
        for x in 0..20 {
            img.put(x, 5, [225, 225, 225]);
            img.put(x, 12, [225, 225, 225]);
        }
        for x in 3..9 {
            img.put(x, 8 + (x % 2), RED);
        }
        let masks = segment_by_color(&img, &PlotArea::full(20, 20), 12).unwrap();
        assert_eq!(masks.len(), 1);
        assert!(masks[0].get(3, 9));
    }

    #[test]
    fn partly_hidden_grid_is_dropped() {
        let mut img = RasterImage::filled(20, 20, WHITE).unwrap();
        for x in 0..20 {
            img.put(x, 5, [225, 225, 225]);
        }
        for y in 0..20 {
            img.put(12, y, [225, 225, 225]);
        }
        // a stroke hiding 40% of the grid row
        for x in 2..10 {
            for y in 4..7 {
                img.put(x, y, RED);
            }
        }
        let masks = segment_by_color(&img, &PlotArea::full(20, 20), 12).unwrap();
        assert_eq!(masks.len(), 1);
        assert!(masks[0].get(2, 5));
    }

    #[test]
    fn thick_horizontal_stroke_is_kept() {
        let mut img = RasterImage::filled(20, 20, WHITE).unwrap();
        for x in 0..20 {
            for y in 8..11 {
                img.put(x, y, [225, 225, 225]);
            }
        }
        assert_eq!(segment_by_color(&img, &PlotArea::full(20, 20), 12).unwrap().len(), 1);
    }

    #[test]
    fn outside_plot_area_is_ignored() {
        let mut img = RasterImage::filled(20, 20, WHITE).unwrap();
        img.put(0, 0, RED);
        img.put(10, 10, BLUE);
        let area = PlotArea::new(5, 5, 15, 15).unwrap();
        let masks = segment_by_color(&img, &area, 12).unwrap();
        assert_eq!(masks.len(), 1);
        assert!(masks[0].get(10, 10));
    }
}
