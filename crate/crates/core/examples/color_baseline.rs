//! The color-clustering segmenter on a distinct-color chart and on a
//! shared-color chart, where it cannot tell the lines apart.

use chartline::eval::{evaluate_chart, Mode};
use chartline::extract::{extract_all, ExtractionConfig};
use chartline::rasterize::render_chart;
use chartline::segment::{segment_by_color, DEFAULT_COLOR_TOLERANCE};
use chartline::synth::{generate_spec, DifficultyProfile};

fn main() -> chartline::error::Result<()> {
    for profile in [DifficultyProfile::Easy, DifficultyProfile::Shared] {
        let sample = render_chart(&generate_spec(3, profile))?;
        let masks = segment_by_color(&sample.image, &sample.plot_area, DEFAULT_COLOR_TOLERANCE)?;
        let preds = extract_all(&masks, &ExtractionConfig::default())?;
        let score = evaluate_chart(&preds, &sample.gt_series, &sample.plot_area, Mode::Task6a)?;
        println!(
            "{profile:>6}: {} lines, {} masks, 6a {:.2}",
            sample.gt_series.len(),
            masks.len(),
            score.score * 100.0
        );
    }
    Ok(())
}
