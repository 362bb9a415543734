//! Piecewise-linear data series in image-pixel coordinates.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }
}

impl From<(f64, f64)> for Point {
    fn from((x, y): (f64, f64)) -> Self {
        Self { x, y }
    }
}

/// An ordered, non-empty list of points with strictly increasing x.
///
/// Lines are treated as functions of x. Rendering and interpolation need at
/// least two points; a single-point series is still representable because
/// extraction of a one-column mask produces one.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSeries {
    points: Vec<Point>,
}

impl PointSeries {
    /// Validates strictly increasing, finite x and finite y. Ties in x are rejected.
    pub fn new(points: impl IntoIterator<Item = impl Into<Point>>) -> Result<Self> {
        let points: Vec<Point> = points.into_iter().map(Into::into).collect();
        if points.is_empty() {
            return Err(Error::InvalidSeries("series has no points".into()));
        }
        for (i, p) in points.iter().enumerate() {
            if !p.x.is_finite() || !p.y.is_finite() {
                return Err(Error::InvalidSeries(format!("point {i} is not finite")));
            }
        }
        if let Some(i) = points.windows(2).position(|w| w[1].x <= w[0].x) {
            return Err(Error::InvalidSeries(format!(
                "x must be strictly increasing (point {} x={} follows x={})",
                i + 1,
                points[i + 1].x,
                points[i].x
            )));
        }
        Ok(Self { points })
    }

    /// Sorts by x and merges points sharing an x value by averaging their y.
    pub fn canonicalize(points: impl IntoIterator<Item = impl Into<Point>>) -> Result<Self> {
        let mut points: Vec<Point> = points.into_iter().map(Into::into).collect();
        if points.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
            return Err(Error::InvalidSeries("series contains a non-finite point".into()));
        }
        points.sort_by(|a, b| a.x.total_cmp(&b.x));
        let mut merged: Vec<Point> = Vec::with_capacity(points.len());
        let mut i = 0;
        while i < points.len() {
            let x = points[i].x;
            let mut j = i;
            let mut sum = 0.0;
            while j < points.len() && points[j].x == x {
                sum += points[j].y;
                j += 1;
            }
            merged.push(Point::new(x, sum / (j - i) as f64));
            i = j;
        }
        Self::new(merged)
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn min_x(&self) -> f64 {
        self.points[0].x
    }

    pub fn max_x(&self) -> f64 {
        self.points[self.points.len() - 1].x
    }

    pub fn iter(&self) -> impl Iterator<Item = &Point> {
        self.points.iter()
    }

    pub fn into_points(self) -> Vec<Point> {
        self.points
    }

    /// Piecewise-linear y at `x`; `None` outside `[min_x, max_x]`.
    pub fn interpolate_at(&self, x: f64) -> Option<f64> {
        interpolate_at(self, x)
    }
}

/// Piecewise-linear y of `s` at `x`, with no extrapolation.
///
/// Knots are returned exactly.
pub fn interpolate_at(s: &PointSeries, x: f64) -> Option<f64> {
    let pts = s.points();
    if !(x >= s.min_x() && x <= s.max_x()) {
        return None;
    }
    match pts.binary_search_by(|p| p.x.total_cmp(&x)) {
        Ok(i) => Some(pts[i].y),
        Err(i) => {
            // 0 < i < len because x lies strictly inside the range
            let (a, b) = (pts[i - 1], pts[i]);
            let t = (x - a.x) / (b.x - a.x);
            Some(a.y + t * (b.y - a.y))
        }
    }
}

/// Like [`interpolate_at`], but extends the end segments linearly beyond the
/// x-range. A single-point series extrapolates as a constant.
pub fn extrapolate_at(s: &PointSeries, x: f64) -> f64 {
    if let Some(y) = interpolate_at(s, x) {
        return y;
    }
    let pts = s.points();
    if pts.len() == 1 {
        return pts[0].y;
    }
    let (a, b) = if x < s.min_x() {
        (pts[0], pts[1])
    } else {
        (pts[pts.len() - 2], pts[pts.len() - 1])
    };
    a.y + (x - a.x) * (b.y - a.y) / (b.x - a.x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(pts: &[(f64, f64)]) -> PointSeries {
        PointSeries::new(pts.iter().copied()).unwrap()
    }

    #[test]
    fn interpolates_midpoint() {
        assert_eq!(interpolate_at(&series(&[(0.0, 0.0), (2.0, 2.0)]), 1.0), Some(1.0));
    }

    #[test]
    fn constant_series() {
        assert_eq!(interpolate_at(&series(&[(0.0, 5.0), (4.0, 5.0)]), 3.0), Some(5.0));
    }

    #[test]
    fn no_extrapolation() {
        let s = series(&[(0.0, 0.0), (2.0, 2.0)]);
        assert_eq!(interpolate_at(&s, 3.0), None);
        assert_eq!(interpolate_at(&s, -0.1), None);
        assert_eq!(interpolate_at(&s, f64::NAN), None);
    }

    #[test]
    fn extrapolates_end_segments() {
        let s = series(&[(0.0, 0.0), (2.0, 2.0), (4.0, 0.0)]);
        assert_eq!(extrapolate_at(&s, -1.0), -1.0);
        assert_eq!(extrapolate_at(&s, 5.0), -1.0);
        assert_eq!(extrapolate_at(&series(&[(1.0, 3.0)]), 9.0), 3.0);
    }

    #[test]
    fn rejects_ties_and_empty() {
        assert!(PointSeries::new([(0.0, 0.0), (0.0, 1.0)]).is_err());
        assert!(PointSeries::new([(1.0, 0.0), (0.0, 1.0)]).is_err());
        assert!(PointSeries::new(Vec::<Point>::new()).is_err());
        assert!(PointSeries::new([(0.0, f64::INFINITY)]).is_err());
    }

    #[test]
    fn canonicalize_averages_duplicate_x() {
        let s = PointSeries::canonicalize([(2.0, 4.0), (0.0, 1.0), (2.0, 6.0)]).unwrap();
        assert_eq!(s.points(), &[Point::new(0.0, 1.0), Point::new(2.0, 5.0)]);
    }

    proptest::proptest! {
        #[test]
        fn knots_are_exact(ys in proptest::collection::vec(-1e4f64..1e4, 2..40),
                           steps in proptest::collection::vec(0.01f64..50.0, 40)) {
            let mut x = -3.7;
            let pts: Vec<(f64, f64)> = ys.iter().zip(&steps).map(|(&y, &dx)| { x += dx; (x, y) }).collect();
            let s = series(&pts);
            for &(x, y) in &pts {
                proptest::prop_assert_eq!(interpolate_at(&s, x), Some(y));
            }
        }
    }
}
