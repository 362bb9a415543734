//! Deterministic synthetic multi-line chart corpus.
//!
//! Every chart is a pure function of its [`ChartSpec`]. Series are random
//! piecewise-linear knots smoothed by two rounds of midpoint subdivision, and
//! each structural pattern has a contract that is checked after drawing.
//! A failed check redraws from a derived sub-seed, at most
//! [`MAX_RETRIES`] times.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chart::{AxisCalibration, PlotArea, Rgb};
use crate::error::{Error, Result};
use crate::rasterize::StrokeStyle;
use crate::series::{interpolate_at, Point, PointSeries};

pub const MAX_RETRIES: u32 = 20;

/// Distance kept between strokes and the plot-area border.
const Y_PAD: f64 = 3.0;

/// Crowded lines share a band this fraction of the plot height tall.
const CROWD_BAND: f64 = 0.04;
/// Contract: all pairwise mean gaps stay below this fraction of the plot height.
pub const CROWD_LIMIT: f64 = 0.05;
/// Contract: an occlusion run covers at least this fraction of the image width.
pub const OCCLUSION_RUN: f64 = 0.10;

pub const PALETTE: [Rgb; 10] = [
    [31, 119, 180],
    [255, 127, 14],
    [44, 160, 44],
    [214, 39, 40],
    [148, 103, 189],
    [140, 86, 75],
    [227, 119, 194],
    [127, 127, 127],
    [188, 189, 34],
    [23, 190, 207],
];

macro_rules! string_enum {
    ($(#[$m:meta])* $name:ident { $($variant:ident => $s:literal),+ $(,)? }) => {
        $(#[$m])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum $name { $($variant),+ }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self { $($name::$variant => $s),+ }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($s => Ok($name::$variant),)+
                    other => Err(Error::contract(format!(
                        concat!("unknown ", stringify!($name), " `{}`"), other
                    ))),
                }
            }
        }
    };
}

string_enum!(
    /// Structural complexity pattern a chart is drawn to exhibit.
    Pattern {
        Random => "random",
        Crossing => "crossing",
        Occlusion => "occlusion",
        Crowding => "crowding",
        Easy => "easy",
    }
);

string_enum!(
    ColorPolicy {
        Distinct => "distinct",
        Shared => "shared",
        Grayscale => "grayscale",
    }
);

string_enum!(
    /// Selects the pattern mix, color policy and styling of generated specs.
    DifficultyProfile {
        Easy => "easy",
        Medium => "medium",
        Hard => "hard",
        Shared => "shared",
        Mixed => "mixed",
    }
);

#[derive(Debug, Clone, PartialEq)]
pub struct ChartSpec {
    pub seed: u64,
    pub width: u32,
    pub height: u32,
    pub n_lines: usize,
    pub pattern: Pattern,
    pub styles: Vec<StrokeStyle>,
    pub grid: bool,
    pub color_policy: ColorPolicy,
    /// Random knots per line before smoothing.
    pub n_points: usize,
    pub profile: Option<DifficultyProfile>,
}

impl ChartSpec {
    pub fn validate(&self) -> Result<()> {
        if !(1..=10).contains(&self.n_lines) {
            return Err(Error::contract(format!("n_lines must be 1..=10, got {}", self.n_lines)));
        }
        if !(4..=50).contains(&self.n_points) {
            return Err(Error::contract(format!("n_points must be 4..=50, got {}", self.n_points)));
        }
        if self.width < 64 || self.height < 64 {
            return Err(Error::contract("charts must be at least 64x64"));
        }
        if self.styles.len() != self.n_lines {
            return Err(Error::contract(format!(
                "{} styles for {} lines",
                self.styles.len(),
                self.n_lines
            )));
        }
        self.styles.iter().try_for_each(StrokeStyle::validate)
    }

    /// Plot box inside fixed margins; the left and bottom margins leave room for axes.
    pub fn plot_area(&self) -> PlotArea {
        let left = (self.width / 10).max(6);
        let right = (self.width / 20).max(4);
        let top = (self.height / 20).max(4);
        let bottom = (self.height / 10).max(6);
        PlotArea {
            x0: left,
            y0: top,
            x1: self.width - right,
            y1: self.height - bottom,
        }
    }

    /// Maps the plot-area edges onto round data ranges chosen by the seed.
    pub fn axis_calibration(&self) -> AxisCalibration {
        const SCALES: [f64; 5] = [1.0, 10.0, 50.0, 100.0, 1000.0];
        let pa = self.plot_area();
        let mix = splitmix64(self.seed ^ 0xA5A5_A5A5);
        let x_max = SCALES[(mix % 5) as usize];
        let y_max = SCALES[((mix >> 8) % 5) as usize];
        AxisCalibration::new(
            [(pa.x0 as f64, 0.0), ((pa.x1 - 1) as f64, x_max)],
            [((pa.y1 - 1) as f64, 0.0), (pa.y0 as f64, y_max)],
        )
        .expect("plot area is at least two pixels wide and tall")
    }

    pub fn max_thickness(&self) -> u32 {
        self.styles.iter().map(|s| s.thickness).max().unwrap_or(1)
    }

    pub fn metadata(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        m.insert("pattern".into(), self.pattern.to_string());
        m.insert("color_policy".into(), self.color_policy.to_string());
        m.insert("seed".into(), self.seed.to_string());
        m.insert("n_lines".into(), self.n_lines.to_string());
        m.insert("grid".into(), self.grid.to_string());
        if let Some(p) = self.profile {
            m.insert("profile".into(), p.to_string());
        }
        m
    }
}

pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the `index`-th chart in a corpus rooted at `seed`.
pub fn corpus_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ splitmix64(index))
}

fn profile_rng(seed: u64, profile: DifficultyProfile) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(seed) ^ (profile as u64 + 1).wrapping_mul(0x2545_F491_4F6C_DD1D))
}

/// Draws a spec from `profile`; equal inputs give equal specs.
pub fn generate_spec(seed: u64, profile: DifficultyProfile) -> ChartSpec {
    let mut rng = profile_rng(seed, profile);
    let concrete = match profile {
        DifficultyProfile::Mixed => *[
            DifficultyProfile::Easy,
            DifficultyProfile::Medium,
            DifficultyProfile::Hard,
        ]
        .choose(&mut rng)
        .unwrap(),
        p => p,
    };
    let mut spec = match concrete {
        DifficultyProfile::Easy | DifficultyProfile::Shared => {
            let n_lines = if concrete == DifficultyProfile::Easy {
                rng.gen_range(1..=3)
            } else {
                rng.gen_range(2..=3)
            };
            ChartSpec {
                seed,
                width: 400,
                height: 300,
                n_lines,
                pattern: Pattern::Easy,
                styles: vec![StrokeStyle::default(); n_lines],
                grid: rng.gen_bool(0.3),
                color_policy: if concrete == DifficultyProfile::Easy {
                    ColorPolicy::Distinct
                } else {
                    ColorPolicy::Shared
                },
                n_points: rng.gen_range(4..=8),
                profile: Some(profile),
            }
        }
        DifficultyProfile::Medium => {
            let n_lines = rng.gen_range(2..=5);
            let (width, height) = *[(400, 300), (480, 320)].choose(&mut rng).unwrap();
            let styles = (0..n_lines)
                .map(|_| StrokeStyle {
                    thickness: *[1, 3].choose(&mut rng).unwrap(),
                    ..StrokeStyle::default()
                })
                .collect();
            ChartSpec {
                seed,
                width,
                height,
                n_lines,
                pattern: *[Pattern::Random, Pattern::Crossing].choose(&mut rng).unwrap(),
                styles,
                grid: rng.gen_bool(0.5),
                color_policy: ColorPolicy::Distinct,
                n_points: rng.gen_range(5..=12),
                profile: Some(profile),
            }
        }
        DifficultyProfile::Hard | DifficultyProfile::Mixed => {
            let n_lines = rng.gen_range(2..=6);
            let (width, height) = *[(400, 300), (480, 320), (360, 360)].choose(&mut rng).unwrap();
            let styles = (0..n_lines)
                .map(|_| StrokeStyle {
                    thickness: *[1, 3, 5].choose(&mut rng).unwrap(),
                    dash_pattern: rng
                        .gen_bool(0.25)
                        .then(|| (rng.gen_range(6..=10), rng.gen_range(3..=5))),
                    ..StrokeStyle::default()
                })
                .collect();
            ChartSpec {
                seed,
                width,
                height,
                n_lines,
                pattern: *[Pattern::Crossing, Pattern::Occlusion, Pattern::Crowding]
                    .choose(&mut rng)
                    .unwrap(),
                styles,
                grid: rng.gen_bool(0.5),
                color_policy: *ColorPolicy::ALL.choose(&mut rng).unwrap(),
                n_points: rng.gen_range(8..=20),
                profile: Some(profile),
            }
        }
    };
    assign_colors(&mut spec, &mut rng);
    spec
}

fn assign_colors(spec: &mut ChartSpec, rng: &mut ChaCha8Rng) {
    let colors: Vec<Rgb> = match spec.color_policy {
        ColorPolicy::Distinct => {
            let mut p = PALETTE.to_vec();
            p.shuffle(rng);
            p
        }
        ColorPolicy::Shared => vec![*PALETTE.choose(rng).unwrap(); spec.n_lines],
        ColorPolicy::Grayscale => {
            // evenly spaced levels in 30..=190 keep lines apart from the grid and from each other
            let n = spec.n_lines.max(2);
            let mut levels: Vec<Rgb> = (0..spec.n_lines)
                .map(|i| {
                    let v = 30 + (160 * i / (n - 1)) as u8;
                    [v, v, v]
                })
                .collect();
            levels.shuffle(rng);
            levels
        }
    };
    for (style, color) in spec.styles.iter_mut().zip(colors) {
        style.color = color;
    }
}

/// Draws the series for `spec`, regenerating until the pattern contract holds.
pub fn generate_series(spec: &ChartSpec) -> Result<Vec<PointSeries>> {
    spec.validate()?;
    let mut last_failure = String::new();
    for attempt in 0..=MAX_RETRIES {
        let sub_seed = splitmix64(spec.seed ^ (attempt as u64).wrapping_mul(0xD1B5_4A32_D192_ED03));
        let mut rng = ChaCha8Rng::seed_from_u64(sub_seed);
        let series = draw_series(spec, &mut rng)?;
        match check_contract(spec, &series) {
            Ok(()) => return Ok(series),
            Err(why) => last_failure = why,
        }
    }
    Err(Error::Generation(format!(
        "{} contract unmet after {MAX_RETRIES} retries: {last_failure}",
        spec.pattern
    )))
}

struct Frame {
    knots_x: Vec<f64>,
    top: f64,
    bottom: f64,
}

fn draw_series(spec: &ChartSpec, rng: &mut ChaCha8Rng) -> Result<Vec<PointSeries>> {
    let pa = spec.plot_area();
    let n = spec.n_points;
    let (x_lo, x_hi) = (pa.x0 as f64, (pa.x1 - 1) as f64);
    let spacing = (x_hi - x_lo) / (n - 1) as f64;
    let knots_x: Vec<f64> = (0..n)
        .map(|k| match k {
            0 => x_lo,
            k if k == n - 1 => x_hi,
            k => x_lo + k as f64 * spacing + rng.gen_range(-0.3..0.3) * spacing,
        })
        .collect();
    let frame = Frame {
        knots_x,
        top: pa.y0 as f64 + Y_PAD,
        bottom: (pa.y1 - 1) as f64 - Y_PAD,
    };
    let random_line = |rng: &mut ChaCha8Rng, lo: f64, hi: f64| -> Vec<f64> {
        (0..n).map(|_| rng.gen_range(lo..=hi)).collect()
    };
    let (top, bottom) = (frame.top, frame.bottom);
    let range = bottom - top;
    let lines = spec.n_lines;

    let ys: Vec<Vec<f64>> = match spec.pattern {
        Pattern::Random => (0..lines).map(|_| random_line(rng, top, bottom)).collect(),
        Pattern::Easy => {
            let gap = 3.0 * spec.max_thickness() as f64 + 2.0;
            let band = range / lines as f64;
            if band <= gap + 1.0 {
                return Err(Error::Generation(format!(
                    "{lines} well-separated lines do not fit in {range:.0} px"
                )));
            }
            let mut bands: Vec<usize> = (0..lines).collect();
            bands.shuffle(rng);
            bands
                .into_iter()
                .map(|b| {
                    let lo = top + b as f64 * band + gap / 2.0;
                    random_line(rng, lo, lo + band - gap)
                })
                .collect()
        }
        Pattern::Crossing => {
            if lines < 2 {
                return Err(Error::Generation("crossing needs at least two lines".into()));
            }
            let mut ys: Vec<Vec<f64>> = (0..lines).map(|_| random_line(rng, top, bottom)).collect();
            let q = 0.25 * range;
            ys[0][0] = rng.gen_range(top..=top + q);
            ys[0][n - 1] = rng.gen_range(bottom - q..=bottom);
            ys[1][0] = rng.gen_range(bottom - q..=bottom);
            ys[1][n - 1] = rng.gen_range(top..=top + q);
            ys
        }
        Pattern::Occlusion => {
            if lines < 2 || n < 6 {
                return Err(Error::Generation(
                    "occlusion needs at least two lines of at least six knots".into(),
                ));
            }
            let mut ys: Vec<Vec<f64>> = (0..lines).map(|_| random_line(rng, top, bottom)).collect();
            let run = (n * 9).div_ceil(20).max(3);
            let start = rng.gen_range(0..=n - run);
            let offset = rng.gen_range(-0.4..0.4);
            let (first, rest) = ys.split_at_mut(1);
            for (b, a) in rest[0][start..start + run].iter_mut().zip(&first[0][start..start + run]) {
                *b = (a + offset).clamp(top, bottom);
            }
            ys
        }
        Pattern::Crowding => {
            let band = CROWD_BAND * pa.height() as f64;
            let capacity = band.floor() as usize + 1;
            if lines > capacity {
                return Err(Error::Generation(format!(
                    "{lines} crowded lines exceed the capacity of {capacity} for a {} px plot",
                    pa.height()
                )));
            }
            let wiggle = 0.004 * pa.height() as f64;
            let base = random_line(rng, top + wiggle, bottom - band - wiggle);
            let step = if lines > 1 { band / (lines - 1) as f64 } else { 0.0 };
            let mut offsets: Vec<f64> = (0..lines).map(|i| i as f64 * step).collect();
            offsets.shuffle(rng);
            offsets
                .into_iter()
                .map(|o| {
                    base.iter()
                        .map(|&b| b + o + rng.gen_range(-wiggle..=wiggle))
                        .collect()
                })
                .collect()
        }
    };

    ys.into_iter()
        .map(|line| {
            let knots: Vec<Point> = frame
                .knots_x
                .iter()
                .zip(line)
                .map(|(&x, y)| Point::new(x, y))
                .collect();
            PointSeries::new(smooth(knots, 2))
        })
        .collect()
}

/// Midpoint subdivision: each round inserts segment midpoints and replaces every
/// interior knot by `(m_left + 2 p + m_right) / 4`. Endpoints stay fixed and x
/// stays strictly increasing.
pub fn smooth(mut pts: Vec<Point>, rounds: usize) -> Vec<Point> {
    for _ in 0..rounds {
        if pts.len() < 3 {
            break;
        }
        let mids: Vec<Point> = pts
            .windows(2)
            .map(|w| Point::new((w[0].x + w[1].x) / 2.0, (w[0].y + w[1].y) / 2.0))
            .collect();
        let mut out = Vec::with_capacity(pts.len() + mids.len());
        out.push(pts[0]);
        for i in 0..mids.len() {
            if i > 0 {
                let p = pts[i];
                let (l, r) = (mids[i - 1], mids[i]);
                out.push(Point::new(
                    (l.x + 2.0 * p.x + r.x) / 4.0,
                    (l.y + 2.0 * p.y + r.y) / 4.0,
                ));
            }
            out.push(mids[i]);
        }
        out.push(pts[pts.len() - 1]);
        pts = out;
    }
    pts
}

/// `y` of every series at each integer x of the shared range.
fn sample_columns(series: &[PointSeries]) -> Vec<Vec<f64>> {
    let lo = series.iter().map(|s| s.min_x()).fold(f64::MIN, f64::max).ceil() as i64;
    let hi = series.iter().map(|s| s.max_x()).fold(f64::MAX, f64::min).floor() as i64;
    series
        .iter()
        .map(|s| {
            (lo..=hi)
                .filter_map(|x| interpolate_at(s, x as f64))
                .collect()
        })
        .collect()
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |a| (a + 1..n).map(move |b| (a, b)))
}

/// Whether `(y_a - y_b)` changes sign somewhere along the samples.
pub fn has_crossing(a: &[f64], b: &[f64]) -> bool {
    let mut sign = 0.0f64;
    for (ya, yb) in a.iter().zip(b) {
        let d = ya - yb;
        if d == 0.0 {
            continue;
        }
        if sign != 0.0 && d.signum() != sign {
            return true;
        }
        sign = d.signum();
    }
    false
}

/// Longest run of consecutive samples where `|y_a - y_b| < limit`.
pub fn longest_close_run(a: &[f64], b: &[f64], limit: f64) -> usize {
    let (mut best, mut cur) = (0, 0);
    for (ya, yb) in a.iter().zip(b) {
        if (ya - yb).abs() < limit {
            cur += 1;
            best = best.max(cur);
        } else {
            cur = 0;
        }
    }
    best
}

fn mean_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>() / a.len().max(1) as f64
}

fn min_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(f64::INFINITY, f64::min)
}

/// Verifies the pattern contract and plot-area containment of drawn series.
pub fn check_contract(spec: &ChartSpec, series: &[PointSeries]) -> std::result::Result<(), String> {
    let pa = spec.plot_area();
    for (i, s) in series.iter().enumerate() {
        if s.iter().any(|p| !pa.contains_point(p.x, p.y, 0.5)) {
            return Err(format!("series {i} leaves the plot area"));
        }
    }
    let cols = sample_columns(series);
    let n = series.len();
    match spec.pattern {
        Pattern::Random => Ok(()),
        Pattern::Crossing => pairs(n)
            .any(|(a, b)| has_crossing(&cols[a], &cols[b]))
            .then_some(())
            .ok_or_else(|| "no pair of lines crosses".into()),
        Pattern::Occlusion => {
            let need = (OCCLUSION_RUN * spec.width as f64).ceil() as usize;
            pairs(n)
                .any(|(a, b)| {
                    let limit = spec.styles[a].thickness.min(spec.styles[b].thickness) as f64;
                    longest_close_run(&cols[a], &cols[b], limit) >= need
                })
                .then_some(())
                .ok_or_else(|| format!("no overlap run of {need} px"))
        }
        Pattern::Crowding => {
            let limit = CROWD_LIMIT * pa.height() as f64;
            match pairs(n).find(|&(a, b)| mean_gap(&cols[a], &cols[b]) >= limit) {
                None => Ok(()),
                Some((a, b)) => Err(format!("lines {a} and {b} are not crowded")),
            }
        }
        Pattern::Easy => {
            let limit = 3.0 * spec.max_thickness() as f64;
            match pairs(n).find(|&(a, b)| min_gap(&cols[a], &cols[b]) <= limit) {
                None => Ok(()),
                Some((a, b)) => Err(format!("lines {a} and {b} come within {limit} px")),
            }
        }
    }
}
