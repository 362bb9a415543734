//! A predictor that emits the same line twice: suppression drops the weaker
//! copy, which restores the data-extraction score.

use chartline::eval::{evaluate_chart, Mode};
use chartline::extract::{extract_series, suppress_duplicates, ExtractionConfig};
use chartline::rasterize::{render_chart, render_gt_masks};
use chartline::series::PointSeries;
use chartline::synth::{generate_spec, DifficultyProfile};

fn main() -> chartline::error::Result<()> {
    let sample = render_chart(&generate_spec(5, DifficultyProfile::Medium))?;
    let mut masks = render_gt_masks(&sample, 3)?;
    masks.push(masks[0].clone().with_confidence(0.9));
    let cfg = ExtractionConfig::default();

    let score = |masks: &[chartline::mask::LineMask]| -> chartline::error::Result<f64> {
        let preds = masks
            .iter()
            .map(|m| extract_series(m, &cfg))
            .collect::<chartline::error::Result<Vec<PointSeries>>>()?;
        Ok(evaluate_chart(&preds, &sample.gt_series, &sample.plot_area, Mode::Task6b)?.score * 100.0)
    };
    let kept = suppress_duplicates(&masks, &cfg)?;
    println!("{} lines, {} predicted masks", sample.gt_series.len(), masks.len());
    println!("6b without suppression: {:.2}", score(&masks)?);
    println!("6b with suppression:    {:.2} ({} masks kept)", score(&kept)?, kept.len());
    Ok(())
}
