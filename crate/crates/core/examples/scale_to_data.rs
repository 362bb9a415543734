//! Converts an extracted pixel series to data units via the axis calibration.

use chartline::extract::{extract_series, scale_to_data, ExtractionConfig};
use chartline::rasterize::{render_chart, render_gt_masks};
use chartline::synth::{generate_spec, DifficultyProfile};

fn main() -> chartline::error::Result<()> {
    let sample = render_chart(&generate_spec(12, DifficultyProfile::Easy))?;
    let cal = sample.axis_calibration.expect("synthetic charts are calibrated");
    let mask = &render_gt_masks(&sample, 3)?[0];
    let cfg = ExtractionConfig {
        delta_x: 40,
        ..ExtractionConfig::default()
    };
    let pixels = extract_series(mask, &cfg)?;
    let data = scale_to_data(&pixels, &cal)?;
    for (p, (x, y)) in pixels.iter().zip(data) {
        println!("pixel ({:6.1}, {:6.1}) -> data ({x:9.3}, {y:9.3})", p.x, p.y);
    }
    Ok(())
}
