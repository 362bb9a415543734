//! Mask-to-series extraction, duplicate suppression and axis scaling.

use crate::chart::AxisCalibration;
use crate::error::{Error, Result};
use crate::mask::{mask_iou, LineMask};
use crate::series::{Point, PointSeries};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtractionConfig {
    /// Column sampling interval in pixels, at least 1.
    pub delta_x: u32,
    /// Masks with fewer foreground pixels are rejected as speckle.
    pub min_mask_pixels: usize,
    /// A mask overlapping a kept mask at least this much is a duplicate.
    pub iou_suppression_threshold: f64,
    /// Expected stroke thickness; column runs further apart than twice this
    /// are treated as separate branches.
    pub thickness: u32,
}

impl Default for ExtractionConfig {
    fn default() -> Self {
        Self {
            delta_x: 1,
            min_mask_pixels: 10,
            iou_suppression_threshold: 0.75,
            thickness: 3,
        }
    }
}

impl ExtractionConfig {
    pub fn validate(&self) -> Result<()> {
        if self.delta_x < 1 {
            return Err(Error::contract("delta_x must be at least 1"));
        }
        if !(self.iou_suppression_threshold > 0.0 && self.iou_suppression_threshold <= 1.0) {
            return Err(Error::contract(format!(
                "iou_suppression_threshold must be in (0, 1], got {}",
                self.iou_suppression_threshold
            )));
        }
        Ok(())
    }
}

/// First and last columns holding any foreground.
pub fn x_range(m: &LineMask) -> Option<(u32, u32)> {
    let has_fg = |x: u32| (0..m.height()).any(|y| m.get(x, y));
    let start = (0..m.width()).find(|&x| has_fg(x))?;
    let end = (0..m.width()).rev().find(|&x| has_fg(x))?;
    Some((start, end))
}

/// Contiguous foreground runs of a column, as inclusive `(top, bottom)` rows.
fn column_runs(m: &LineMask, x: u32) -> Vec<(u32, u32)> {
    let mut runs: Vec<(u32, u32)> = Vec::new();
    for y in m.column_rows(x) {
        match runs.last_mut() {
            Some(last) if last.1 + 1 == y => last.1 = y,
            _ => runs.push((y, y)),
        }
    }
    runs
}

/// Mean row of one column. Runs separated by more than `2 * thickness` rows
/// form distinct branches; the branch nearest `previous` wins, or the largest
/// one when there is no previous sample.
fn column_y(m: &LineMask, x: u32, thickness: u32, previous: Option<f64>) -> Option<f64> {
    let runs = column_runs(m, x);
    if runs.is_empty() {
        return None;
    }
    let max_gap = 2 * thickness;
    let mut branches: Vec<Vec<(u32, u32)>> = Vec::new();
    for run in runs {
        match branches.last_mut() {
            Some(b) if run.0 - b.last().unwrap().1 - 1 <= max_gap => b.push(run),
            _ => branches.push(vec![run]),
        }
    }
    let stats: Vec<(f64, u64)> = branches
        .iter()
        .map(|b| {
            let (sum, n) = b.iter().fold((0u64, 0u64), |(s, n), &(lo, hi)| {
                let len = (hi - lo + 1) as u64;
                // sum of rows lo..=hi
                (s + (lo as u64 + hi as u64) * len / 2, n + len)
            });
            (sum as f64 / n as f64, n)
        })
        .collect();
    let pick = match previous {
        Some(prev) => stats
            .iter()
            .min_by(|a, b| (a.0 - prev).abs().total_cmp(&(b.0 - prev).abs()))
            .unwrap(),
        None => stats.iter().max_by_key(|s| s.1).unwrap(),
    };
    Some(pick.0)
}

/// Samples the mask column-wise into a series.
///
/// Columns `x_start, x_start + delta_x, ...` plus `x_end` are sampled; each
/// sample is the mean foreground row of its column. Sampled columns without
/// foreground are filled by linear interpolation between the nearest sampled
/// columns that have it.
pub fn extract_series(m: &LineMask, cfg: &ExtractionConfig) -> Result<PointSeries> {
    cfg.validate()?;
    let pixels = m.count();
    if pixels < cfg.min_mask_pixels || pixels == 0 {
        return Err(Error::RejectedMask {
            pixels,
            min: cfg.min_mask_pixels.max(1),
        });
    }
    let (start, end) = x_range(m).expect("mask has foreground");
    let mut columns: Vec<u32> = (start..=end).step_by(cfg.delta_x as usize).collect();
    if *columns.last().unwrap() != end {
        columns.push(end);
    }

    let mut samples: Vec<Option<f64>> = Vec::with_capacity(columns.len());
    let mut previous = None;
    for &x in &columns {
        let y = column_y(m, x, cfg.thickness, previous);
        if y.is_some() {
            previous = y;
        }
        samples.push(y);
    }

    // x_start and x_end always carry foreground, so every gap is bracketed.
    let mut points = Vec::with_capacity(columns.len());
    let mut last_known = 0usize;
    for i in 0..columns.len() {
        let y = match samples[i] {
            Some(y) => {
                last_known = i;
                y
            }
            None => {
                let next = (i + 1..columns.len()).find(|&j| samples[j].is_some()).unwrap();
                let (x0, y0) = (columns[last_known] as f64, samples[last_known].unwrap());
                let (x1, y1) = (columns[next] as f64, samples[next].unwrap());
                y0 + (columns[i] as f64 - x0) * (y1 - y0) / (x1 - x0)
            }
        };
        points.push(Point::new(columns[i] as f64, y));
    }
    PointSeries::new(points)
}

/// Greedy IoU suppression of duplicate masks.
///
/// Masks are visited by descending confidence, then descending pixel count,
/// then input order; a mask is dropped when its IoU with any kept mask reaches
/// the threshold. Kept masks are returned in visiting order.
pub fn suppress_duplicates(masks: &[LineMask], cfg: &ExtractionConfig) -> Result<Vec<LineMask>> {
    cfg.validate()?;
    if let Some(first) = masks.first() {
        for m in &masks[1..] {
            first.same_dims(m)?;
        }
    }
    let counts: Vec<usize> = masks.iter().map(LineMask::count).collect();
    let mut order: Vec<usize> = (0..masks.len()).collect();
    order.sort_by(|&a, &b| {
        masks[b]
            .confidence()
            .total_cmp(&masks[a].confidence())
            .then(counts[b].cmp(&counts[a]))
            .then(a.cmp(&b))
    });
    let mut kept: Vec<usize> = Vec::new();
    for i in order {
        let mut duplicate = false;
        for &k in &kept {
            if mask_iou(&masks[i], &masks[k])? >= cfg.iou_suppression_threshold {
                duplicate = true;
                break;
            }
        }
        if !duplicate {
            kept.push(i);
        }
    }
    Ok(kept.into_iter().map(|i| masks[i].clone()).collect())
}

/// Suppresses duplicates, then extracts every surviving mask. Masks rejected
/// as too small are skipped.
pub fn extract_all(masks: &[LineMask], cfg: &ExtractionConfig) -> Result<Vec<PointSeries>> {
    let kept = suppress_duplicates(masks, cfg)?;
    let mut out = Vec::with_capacity(kept.len());
    for m in &kept {
        match extract_series(m, cfg) {
            Ok(s) => out.push(s),
            Err(Error::RejectedMask { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

fn affine(p: f64, refs: &[crate::chart::AxisRef; 2]) -> f64 {
    let [a, b] = refs;
    a.value + (p - a.pixel) * (b.value - a.value) / (b.pixel - a.pixel)
}

/// Maps pixel coordinates to data values through the two reference pairs of
/// each axis. Downward pixel y is handled by the y references themselves.
pub fn scale_to_data(s: &PointSeries, cal: &AxisCalibration) -> Result<Vec<(f64, f64)>> {
    cal.validate()?;
    Ok(s.iter().map(|p| (affine(p.x, &cal.x), affine(p.y, &cal.y))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rasterize::{bresenham_trace, render_line_mask};

    fn series(pts: &[(f64, f64)]) -> PointSeries {
        PointSeries::new(pts.iter().copied()).unwrap()
    }

    fn ys(s: &PointSeries) -> Vec<f64> {
        s.iter().map(|p| p.y).collect()
    }

    #[test]
    fn x_range_cases() {
        let m = LineMask::from_pixels(20, 5, (3..=17).map(|x| (x, 2)));
        assert_eq!(x_range(&m), Some((3, 17)));
        assert_eq!(x_range(&LineMask::new(5, 5)), None);
        let full = LineMask::from_pixels(100, 3, (0..100).map(|x| (x, 1)));
        assert_eq!(x_range(&full), Some((0, 99)));
    }

    #[test]
    fn thick_horizontal_line() {
        let m = render_line_mask(&series(&[(0.0, 5.0), (9.0, 5.0)]), 10, 10, 3).unwrap();
        let s = extract_series(&m, &ExtractionConfig::default()).unwrap();
        let expected: Vec<Point> = (0..10).map(|x| Point::new(x as f64, 5.0)).collect();
        assert_eq!(s.points(), expected.as_slice());
    }

    #[test]
    fn thin_diagonal() {
        let m = LineMask::from_pixels(4, 4, bresenham_trace((0, 0), (3, 3)));
        let cfg = ExtractionConfig {
            min_mask_pixels: 1,
            ..Default::default()
        };
        let s = extract_series(&m, &cfg).unwrap();
        assert_eq!(s, series(&[(0.0, 0.0), (1.0, 1.0), (2.0, 2.0), (3.0, 3.0)]));
    }

    #[test]
    fn gaps_are_interpolated() {
        let mut m = render_line_mask(&series(&[(0.0, 5.0), (9.0, 5.0)]), 10, 10, 3).unwrap();
        for x in 4..=6 {
            for y in 0..10 {
                m.set(x, y, false);
            }
        }
        let s = extract_series(&m, &ExtractionConfig::default()).unwrap();
        assert_eq!(s.len(), 10);
        assert!(ys(&s).iter().all(|&y| y == 5.0));
    }

    #[test]
    fn sloped_gap_interpolates_linearly() {
        // thin line y = x with columns 4..=6 erased: samples at 3 and 7 bracket the gap
        let mut m = LineMask::from_pixels(16, 16, bresenham_trace((0, 0), (15, 15)));
        for x in 4..=6 {
            m.set(x, x, false);
        }
        let s = extract_series(&m, &ExtractionConfig::default()).unwrap();
        assert_eq!(ys(&s), (0..16).map(f64::from).collect::<Vec<_>>());
    }

    #[test]
    fn delta_x_always_includes_end() {
        let m = render_line_mask(&series(&[(0.0, 5.0), (9.0, 5.0)]), 10, 10, 3).unwrap();
        let cfg = ExtractionConfig {
            delta_x: 4,
            ..Default::default()
        };
        let xs: Vec<f64> = extract_series(&m, &cfg).unwrap().iter().map(|p| p.x).collect();
        assert_eq!(xs, vec![0.0, 4.0, 8.0, 9.0]);
    }

    #[test]
    fn small_masks_are_rejected() {
        let m = LineMask::from_pixels(10, 10, [(1, 1), (2, 2)]);
        assert!(matches!(
            extract_series(&m, &ExtractionConfig::default()),
            Err(Error::RejectedMask { pixels: 2, min: 10 })
        ));
        assert!(extract_series(&LineMask::new(4, 4), &ExtractionConfig { min_mask_pixels: 0, ..Default::default() }).is_err());
    }

    #[test]
    fn distant_branch_follows_previous_sample() {
        // a line at row 3, plus a far stroke at rows 15..=17 in columns 5..=7
        let mut m = LineMask::from_pixels(10, 20, (0..10).map(|x| (x, 3)));
        for x in 5..=7 {
            for y in 15..=17 {
                m.set(x, y, true);
            }
        }
        let s = extract_series(&m, &ExtractionConfig::default()).unwrap();
        assert!(ys(&s).iter().all(|&y| y == 3.0), "{:?}", ys(&s));
    }

    #[test]
    fn close_runs_are_averaged() {
        let mut m = LineMask::from_pixels(4, 20, (0..4).map(|x| (x, 4)));
        for x in 0..4 {
            m.set(x, 8, true);
        }
        let s = extract_series(&m, &ExtractionConfig { min_mask_pixels: 1, ..Default::default() }).unwrap();
        assert!(ys(&s).iter().all(|&y| y == 6.0));
    }

    fn bar(w: u32, x0: i64, x1: i64, y: i64) -> LineMask {
        LineMask::from_pixels(w, 10, (x0..x1).map(|x| (x, y)))
    }

    #[test]
    fn exact_copy_is_suppressed() {
        let a = bar(20, 0, 15, 2);
        let kept = suppress_duplicates(&[a.clone(), a.clone().with_confidence(0.9)], &ExtractionConfig::default()).unwrap();
        assert_eq!(kept, vec![a]);
    }

    #[test]
    fn disjoint_masks_survive() {
        let kept = suppress_duplicates(&[bar(20, 0, 15, 2), bar(20, 0, 15, 6)], &ExtractionConfig::default()).unwrap();
        assert_eq!(kept.len(), 2);
    }

    #[test]
    fn five_predictions_with_two_near_duplicates() {
        // four lines, with line 1 predicted twice at IoU 0.9
        let line1 = bar(40, 0, 20, 1).with_confidence(0.95);
        let mut dup = line1.clone().with_confidence(0.8);
        for x in 18..20 {
            dup.set(x, 1, false);
        }
        assert!((mask_iou(&line1, &dup).unwrap() - 0.9).abs() < 1e-12);
        let preds = vec![
            line1.clone(),
            bar(40, 0, 20, 4).with_confidence(0.9),
            dup,
            bar(40, 0, 20, 7).with_confidence(0.85),
            bar(40, 5, 30, 9).with_confidence(0.6),
        ];
        let kept = suppress_duplicates(&preds, &ExtractionConfig::default()).unwrap();
        assert_eq!(kept.len(), 4);
        assert_eq!(kept[0], line1);
        let confs: Vec<f64> = kept.iter().map(LineMask::confidence).collect();
        assert_eq!(confs, vec![0.95, 0.9, 0.85, 0.6]);
    }

    #[test]
    fn tie_breaks_by_size_then_input_order() {
        let small = bar(20, 0, 10, 2);
        let large = bar(20, 0, 12, 2);
        let kept = suppress_duplicates(&[small.clone(), large.clone()], &ExtractionConfig::default()).unwrap();
        assert_eq!(kept, vec![large]);
    }

    #[test]
    fn suppression_dimension_mismatch() {
        let err = suppress_duplicates(&[LineMask::new(3, 3), LineMask::new(3, 4)], &ExtractionConfig::default());
        assert!(matches!(err, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn scale_examples() {
        let s = series(&[(50.0, 150.0), (100.0, 100.0)]);
        let cal = AxisCalibration::new([(0.0, 0.0), (100.0, 10.0)], [(200.0, 0.0), (100.0, 1.0)]).unwrap();
        assert_eq!(scale_to_data(&s, &cal).unwrap(), vec![(5.0, 0.5), (10.0, 1.0)]);
        let id = scale_to_data(&s, &AxisCalibration::identity()).unwrap();
        assert_eq!(id, vec![(50.0, -150.0), (100.0, -100.0)]);
    }

    #[test]
    fn degenerate_calibration_is_rejected() {
        let mut cal = AxisCalibration::identity();
        cal.y[1].pixel = cal.y[0].pixel;
        let s = series(&[(0.0, 0.0), (1.0, 1.0)]);
        assert!(matches!(scale_to_data(&s, &cal), Err(Error::Calibration(_))));
    }

    proptest::proptest! {
        #[test]
        fn suppression_is_idempotent(rows in proptest::collection::vec((0i64..8, 0i64..12, 1i64..12, 0.0f64..1.0), 0..8)) {
            let masks: Vec<LineMask> = rows
                .iter()
                .map(|&(y, x0, len, c)| bar(24, x0, x0 + len, y).with_confidence(c))
                .collect();
            let cfg = ExtractionConfig { iou_suppression_threshold: 0.5, ..Default::default() };
            let once = suppress_duplicates(&masks, &cfg).unwrap();
            let twice = suppress_duplicates(&once, &cfg).unwrap();
            proptest::prop_assert_eq!(once, twice);
        }

        #[test]
        fn extracted_x_strictly_increasing(ys in proptest::collection::vec(2.0f64..28.0, 2..6), dx in 1u32..6) {
            let pts: Vec<(f64, f64)> = ys.iter().enumerate().map(|(i, &y)| (i as f64 * 9.0 + 1.0, y)).collect();
            let m = render_line_mask(&series(&pts), 48, 32, 3).unwrap();
            let (x0, x1) = x_range(&m).unwrap();
            let s = extract_series(&m, &ExtractionConfig { delta_x: dx, ..Default::default() }).unwrap();
            proptest::prop_assert!(s.points().windows(2).all(|w| w[1].x > w[0].x));
            proptest::prop_assert!(s.iter().all(|p| p.x >= x0 as f64 && p.x <= x1 as f64));
        }
    }
}
