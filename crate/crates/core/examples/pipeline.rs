//! End to end over a small corpus: ground-truth masks and the color baseline,
//! both scored under task 6a and 6b with per-pattern means.

use chartline::eval::{evaluate_chart, AggregateReport, ChartScore, Mode};
use chartline::extract::{extract_all, ExtractionConfig};
use chartline::mask::LineMask;
use chartline::rasterize::{render_chart, render_gt_masks};
use chartline::segment::{segment_by_color, DEFAULT_COLOR_TOLERANCE};
use chartline::synth::{corpus_seed, generate_spec, DifficultyProfile};

fn main() -> chartline::error::Result<()> {
    let charts = (0..60)
        .map(|i| render_chart(&generate_spec(corpus_seed(99, i), DifficultyProfile::Mixed)))
        .collect::<chartline::error::Result<Vec<_>>>()?;
    let cfg = ExtractionConfig::default();

    type Predictor = fn(&chartline::chart::ChartSample) -> chartline::error::Result<Vec<LineMask>>;
    let predictors: [(&str, Predictor); 2] = [
        ("ground truth", |s| render_gt_masks(s, 3)),
        ("color baseline", |s| segment_by_color(&s.image, &s.plot_area, DEFAULT_COLOR_TOLERANCE)),
    ];
    for (name, predict) in predictors {
        for mode in [Mode::Task6a, Mode::Task6b] {
            let scores = charts
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    let result = predict(s)
                        .and_then(|m| extract_all(&m, &cfg))
                        .and_then(|p| evaluate_chart(&p, &s.gt_series, &s.plot_area, mode))
                        .map_err(|e| e.to_string());
                    ChartScore {
                        id: format!("chart_{i:05}"),
                        pattern: s.metadata.get("pattern").cloned(),
                        result,
                    }
                })
                .collect();
            let agg = AggregateReport::from_charts(mode, scores);
            let per: Vec<String> = agg.per_pattern.iter().map(|(k, v)| format!("{k} {:.1}", v.mean)).collect();
            println!("{name:>14} {}: mean {:.2} | {}", mode.as_str(), agg.mean, per.join(", "));
        }
    }
    Ok(())
}
