//! Task 6a versus 6b on a hand-made chart with one missed and one extra line.

use chartline::chart::PlotArea;
use chartline::eval::{evaluate_chart, Mode};
use chartline::series::PointSeries;

fn main() -> chartline::error::Result<()> {
    let area = PlotArea::new(0, 0, 100, 100)?;
    let gts = vec![
        PointSeries::new([(0.0, 10.0), (50.0, 30.0), (99.0, 20.0)])?,
        PointSeries::new([(0.0, 60.0), (99.0, 90.0)])?,
        PointSeries::new([(10.0, 45.0), (90.0, 45.0)])?,
    ];
    let preds = vec![
        PointSeries::new([(0.0, 62.0), (99.0, 88.0)])?,
        PointSeries::new([(0.0, 11.0), (50.0, 29.0), (99.0, 22.0)])?,
        PointSeries::new([(0.0, 99.0), (99.0, 99.0)])?,
        PointSeries::new([(0.0, 0.0), (30.0, 5.0)])?,
    ];
    for mode in [Mode::Task6a, Mode::Task6b] {
        let r = evaluate_chart(&preds, &gts, &area, mode)?;
        println!("{}: score {:.2} with K = {}", mode.as_str(), r.score * 100.0, r.k);
        for ((p, g), s) in r.assignment.iter().zip(&r.per_pair_similarity) {
            println!("  pred {p} -> {g:?} ({s:.4})");
        }
    }
    Ok(())
}
