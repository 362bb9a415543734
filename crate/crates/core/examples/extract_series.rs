//! Mask-to-series extraction at several sampling intervals.

use chartline::eval::pairwise_similarity;
use chartline::extract::{extract_series, x_range, ExtractionConfig};
use chartline::rasterize::{render_chart, render_gt_masks};
use chartline::synth::{generate_spec, DifficultyProfile};

fn main() -> chartline::error::Result<()> {
    let sample = render_chart(&generate_spec(8, DifficultyProfile::Medium))?;
    let masks = render_gt_masks(&sample, 3)?;
    let span = sample.plot_area.height() as f64;
    for (mask, gt) in masks.iter().zip(&sample.gt_series) {
        println!("mask x-range {:?}", x_range(mask));
        for delta_x in [1, 4, 16, 64] {
            let cfg = ExtractionConfig {
                delta_x,
                ..ExtractionConfig::default()
            };
            let s = extract_series(mask, &cfg)?;
            let sim = pairwise_similarity(&s, gt, span)?;
            println!("  delta_x {delta_x:>2}: {:>3} points, similarity {sim:.4}", s.len());
        }
    }
    Ok(())
}
