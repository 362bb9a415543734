//! Ground-truth masks for one chart, with their run-length encodings.

use chartline::rasterize::{render_chart, render_gt_masks};
use chartline::rle::rle_encode;
use chartline::synth::{generate_spec, DifficultyProfile};

fn main() -> chartline::error::Result<()> {
    let sample = render_chart(&generate_spec(17, DifficultyProfile::Hard))?;
    println!("pattern: {}", sample.metadata["pattern"]);
    for thickness in [1, 3, 5] {
        let masks = render_gt_masks(&sample, thickness)?;
        let counts: Vec<usize> = masks.iter().map(|m| m.count()).collect();
        let runs: Vec<usize> = masks.iter().map(|m| rle_encode(m).runs.len()).collect();
        println!("thickness {thickness}: pixels {counts:?}, rle runs {runs:?}");
    }
    Ok(())
}
