//! Line chart data extraction from per-line instance masks.
//!
//! The pipeline: a mask predictor produces one boolean mask per plotted line
//! ([`segment`] ships a color-clustering baseline; external predictors hand
//! over [`exchange::MaskBundle`] files), [`extract`] samples each mask into
//! a [`series::PointSeries`], and [`eval`] scores the series against ground
//! truth with the task 6a/6b assignment metric.
//!
//! Ground truth comes from [`synth`], which generates reproducible charts
//! with crossing, occluding and crowded lines, and [`rasterize`], which draws
//! them and renders their masks with Bresenham strokes.
//!
//! Pixel coordinates throughout: x grows right, y grows down, pixel centers
//! sit on integers.

pub mod chart;
pub mod cli;
pub mod error;
pub mod eval;
pub mod exchange;
pub mod extract;
pub mod mask;
pub mod rasterize;
pub mod rle;
pub mod segment;
pub mod series;
pub mod synth;
