//! Line data extraction scoring (task 6a / task 6b).
//!
//! Each predicted series is compared with each ground-truth series by the mean
//! normalized y error over the ground-truth points. The similarity matrix is
//! padded to `K` columns, an optimal one-to-one assignment is found, and the
//! matched similarities are averaged over `K`:
//!
//! * task 6a: `K = N_g`, so extraneous predictions cost nothing;
//! * task 6b: `K = max(N_g, N_p)`, so each unmatched prediction scores 0.

pub mod assignment;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::chart::PlotArea;
use crate::error::{Error, Result};
use crate::series::{extrapolate_at, interpolate_at, PointSeries};

use assignment::lexicographic_max_matching;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    /// Visual element detection: normalized by the ground-truth count.
    Task6a,
    /// Data extraction: normalized by the larger of both counts.
    Task6b,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Task6a => "task6a",
            Mode::Task6b => "task6b",
        }
    }

    /// Number of similarity-matrix columns for `n_pred` predictions and `n_gt` ground truths.
    pub fn k(self, n_pred: usize, n_gt: usize) -> usize {
        match self {
            Mode::Task6a => n_gt,
            Mode::Task6b => n_gt.max(n_pred),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "6a" | "task6a" => Ok(Mode::Task6a),
            "6b" | "task6b" => Ok(Mode::Task6b),
            other => Err(Error::contract(format!("unknown mode `{other}` (expected 6a or 6b)"))),
        }
    }
}

/// What a ground-truth point beyond the prediction's x-extent contributes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum OutOfRange {
    /// Maximal error 1.
    #[default]
    Penalize,
    /// Left out of the mean. A prediction covering no ground-truth point scores 0.
    Skip,
    /// The prediction's end segments are extended linearly.
    Extrapolate,
}

impl FromStr for OutOfRange {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "penalize" => Ok(OutOfRange::Penalize),
            "skip" => Ok(OutOfRange::Skip),
            "extrapolate" => Ok(OutOfRange::Extrapolate),
            other => Err(Error::contract(format!("unknown out-of-range policy `{other}`"))),
        }
    }
}

fn check_span(norm_span: f64) -> Result<()> {
    if !(norm_span > 0.0 && norm_span.is_finite()) {
        return Err(Error::contract(format!("norm_span must be positive, got {norm_span}")));
    }
    Ok(())
}

/// Similarity in `[0, 1]` of a predicted series to a ground-truth series,
/// penalizing ground-truth points outside the prediction's x-range.
pub fn pairwise_similarity(pred: &PointSeries, gt: &PointSeries, norm_span: f64) -> Result<f64> {
    pairwise_similarity_with(pred, gt, norm_span, OutOfRange::Penalize)
}

pub fn pairwise_similarity_with(
    pred: &PointSeries,
    gt: &PointSeries,
    norm_span: f64,
    policy: OutOfRange,
) -> Result<f64> {
    check_span(norm_span)?;
    let error = |y_hat: f64, y: f64| ((y_hat - y).abs() / norm_span).min(1.0);
    let mut total = 0.0;
    let mut n = 0usize;
    for p in gt.iter() {
        let e = match (interpolate_at(pred, p.x), policy) {
            (Some(y_hat), _) => error(y_hat, p.y),
            (None, OutOfRange::Penalize) => 1.0,
            (None, OutOfRange::Skip) => continue,
            (None, OutOfRange::Extrapolate) => error(extrapolate_at(pred, p.x), p.y),
        };
        total += e;
        n += 1;
    }
    if n == 0 {
        return Ok(0.0);
    }
    Ok(1.0 - total / n as f64)
}

/// `N_p x K` similarity matrix; columns past `N_g` are zero padding.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    pub values: Vec<Vec<f64>>,
    pub n_pred: usize,
    pub n_gt: usize,
    pub k: usize,
    pub mode: Mode,
}

impl SimilarityMatrix {
    /// Wraps raw `N_p x N_g` similarities, adding the padding columns for `mode`.
    pub fn from_similarities(sims: Vec<Vec<f64>>, n_gt: usize, mode: Mode) -> Result<Self> {
        let n_pred = sims.len();
        let k = mode.k(n_pred, n_gt);
        let mut values = sims;
        for (i, row) in values.iter_mut().enumerate() {
            if row.len() != n_gt {
                return Err(Error::contract(format!(
                    "row {i} has {} entries, expected {n_gt}",
                    row.len()
                )));
            }
            if let Some(v) = row.iter().find(|v| !(0.0..=1.0).contains(*v)) {
                return Err(Error::contract(format!("similarity {v} outside [0, 1]")));
            }
            row.resize(k, 0.0);
        }
        Ok(Self {
            values,
            n_pred,
            n_gt,
            k,
            mode,
        })
    }
}

pub fn build_matrix(
    preds: &[PointSeries],
    gts: &[PointSeries],
    mode: Mode,
    norm_span: f64,
) -> Result<SimilarityMatrix> {
    build_matrix_with(preds, gts, mode, norm_span, OutOfRange::Penalize)
}

pub fn build_matrix_with(
    preds: &[PointSeries],
    gts: &[PointSeries],
    mode: Mode,
    norm_span: f64,
    policy: OutOfRange,
) -> Result<SimilarityMatrix> {
    check_span(norm_span)?;
    let sims = preds
        .iter()
        .map(|p| {
            gts.iter()
                .map(|g| pairwise_similarity_with(p, g, norm_span, policy))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    SimilarityMatrix::from_similarities(sims, gts.len(), mode)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreReport {
    pub mode: Mode,
    /// In `[0, 1]`; multiply by 100 for the customary 0-100 scale.
    pub score: f64,
    pub k: usize,
    /// Ground-truth index matched to each prediction, in prediction order.
    pub assignment: Vec<(usize, Option<usize>)>,
    /// Similarity of each assignment entry; 0 when unmatched.
    pub per_pair_similarity: Vec<f64>,
}

/// Solves the assignment for `matrix` and normalizes by `K`.
///
/// Conventions for empty inputs: no predictions and no ground truth scores 1
/// in both modes; predictions without ground truth score 1 under 6a and 0
/// under 6b; ground truth without predictions scores 0.
pub fn optimal_assignment(matrix: &SimilarityMatrix) -> ScoreReport {
    let real: Vec<Vec<f64>> = matrix
        .values
        .iter()
        .map(|row| row[..matrix.n_gt].to_vec())
        .collect();
    let (total, map) = lexicographic_max_matching(&real, matrix.n_gt);
    let score = if matrix.k == 0 {
        1.0
    } else {
        (total / matrix.k as f64).clamp(0.0, 1.0)
    };
    let per_pair_similarity = map
        .iter()
        .enumerate()
        .map(|(i, j)| j.map_or(0.0, |j| real[i][j]))
        .collect();
    ScoreReport {
        mode: matrix.mode,
        score,
        k: matrix.k,
        assignment: map.into_iter().enumerate().collect(),
        per_pair_similarity,
    }
}

/// Options for chart-level scoring.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EvalOptions {
    /// Overrides the plot-area height as normalization span.
    pub norm_span: Option<f64>,
    pub out_of_range: OutOfRange,
}

/// Scores one chart with the plot-area height as normalization span.
pub fn evaluate_chart(
    preds: &[PointSeries],
    gts: &[PointSeries],
    plot_area: &PlotArea,
    mode: Mode,
) -> Result<ScoreReport> {
    evaluate_chart_with(preds, gts, plot_area, mode, &EvalOptions::default())
}

pub fn evaluate_chart_with(
    preds: &[PointSeries],
    gts: &[PointSeries],
    plot_area: &PlotArea,
    mode: Mode,
    opts: &EvalOptions,
) -> Result<ScoreReport> {
    let span = match opts.norm_span {
        Some(s) => s,
        None => {
            if plot_area.y1 <= plot_area.y0 {
                return Err(Error::contract("plot area has zero height"));
            }
            plot_area.height() as f64
        }
    };
    let m = build_matrix_with(preds, gts, mode, span, opts.out_of_range)?;
    Ok(optimal_assignment(&m))
}

/// Outcome of scoring one chart in a batch.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartScore {
    pub id: String,
    pub pattern: Option<String>,
    pub result: std::result::Result<ScoreReport, String>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatternStats {
    pub count: usize,
    pub mean: f64,
}

/// Batch summary; `mean`, `median` and per-pattern means use the 0-100 scale.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateReport {
    pub mode: Mode,
    pub count: usize,
    pub failures: usize,
    pub mean: f64,
    pub median: f64,
    pub per_pattern: BTreeMap<String, PatternStats>,
    pub charts: Vec<ChartScore>,
}

impl AggregateReport {
    /// Summarizes successfully scored charts; failures are counted but not averaged.
    pub fn from_charts(mode: Mode, charts: Vec<ChartScore>) -> Self {
        let mut scores: Vec<f64> = Vec::new();
        let mut groups: BTreeMap<String, Vec<f64>> = BTreeMap::new();
        for c in &charts {
            if let Ok(r) = &c.result {
                let s = r.score * 100.0;
                scores.push(s);
                let key = c.pattern.clone().unwrap_or_else(|| "unknown".into());
                groups.entry(key).or_default().push(s);
            }
        }
        let mean_of = |v: &[f64]| {
            if v.is_empty() {
                0.0
            } else {
                v.iter().sum::<f64>() / v.len() as f64
            }
        };
        scores.sort_by(f64::total_cmp);
        let median = match scores.len() {
            0 => 0.0,
            n if n % 2 == 1 => scores[n / 2],
            n => (scores[n / 2 - 1] + scores[n / 2]) / 2.0,
        };
        AggregateReport {
            mode,
            count: scores.len(),
            failures: charts.len() - scores.len(),
            mean: mean_of(&scores),
            median,
            per_pattern: groups
                .into_iter()
                .map(|(k, v)| {
                    (
                        k,
                        PatternStats {
                            count: v.len(),
                            mean: mean_of(&v),
                        },
                    )
                })
                .collect(),
            charts,
        }
    }
}
