//! Command-line driver behind the `chartline` binary.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 usage error (bad flags,
//! missing inputs, unreadable config).
//!
//! A JSON config file, named by `--config` or `CHARTLINE_CONFIG`, can set any
//! flag. Top-level keys are global flags; an object under a subcommand name
//! holds that subcommand's flags. Flags given on the command line win.
//!
//! ```json
//! { "jobs": 4, "score": { "mode": "6b", "keep_going": true } }
//! ```

use std::ffi::OsString;
use std::fs;
use std::path::{Component, Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::Value;

use crate::chart::{PlotArea, RasterImage, Rgb};
use crate::error::{Error, Result};
use crate::eval::{AggregateReport, ChartScore, EvalOptions, Mode, OutOfRange};
use crate::exchange::{self, Annotation, MaskBundle, ReadOptions};
use crate::extract::{extract_all, ExtractionConfig};
use crate::rasterize::{render_chart, render_line_mask};
use crate::segment::segment_by_color;
use crate::series::PointSeries;
use crate::synth::{corpus_seed, generate_spec, DifficultyProfile};

pub const CONFIG_ENV: &str = "CHARTLINE_CONFIG";

#[derive(Debug, Parser)]
#[command(name = "chartline", version, about = "Line chart data extraction toolkit")]
#[command(args_override_self = true)]
pub struct Cli {
    /// JSON file supplying default flag values
    #[arg(long, global = true, env = CONFIG_ENV, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Worker threads for per-chart parallelism
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub jobs: u32,

    /// Ignore unknown top-level fields when reading JSON inputs
    #[arg(long, global = true)]
    pub lenient: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Color clustering
    Baseline,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a synthetic corpus of chart images and annotations
    Generate {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of charts, at least 1
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        count: u64,
        /// easy, medium, hard, shared or mixed
        #[arg(long, default_value = "mixed")]
        profile: DifficultyProfile,
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
    },
    /// Render a ground-truth mask bundle for every annotation
    RenderMasks {
        #[arg(long, value_name = "DIR")]
        annotations: PathBuf,
        /// Odd stroke thickness in pixels
        #[arg(long, default_value_t = 3)]
        thickness: u32,
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
    },
    /// Predict instance masks for every PNG in a directory
    Segment {
        #[arg(long, value_name = "DIR")]
        images: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Baseline)]
        method: Method,
        /// Chebyshev RGB distance for merging colors
        #[arg(long, default_value_t = 12)]
        tol: u8,
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
    },
    /// Turn mask bundles into series files
    Extract {
        #[arg(long, value_name = "DIR")]
        masks: PathBuf,
        /// Column sampling interval in pixels
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        delta_x: u32,
        /// Masks with fewer pixels are dropped
        #[arg(long, default_value_t = 10)]
        min_mask_pixels: usize,
        /// IoU at which a lower-confidence mask counts as a duplicate
        #[arg(long, default_value_t = 0.75)]
        iou_threshold: f64,
        /// Expected stroke thickness, used to split branches within a column
        #[arg(long, default_value_t = 3)]
        thickness: u32,
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
    },
    /// Score predicted series files against annotations
    Score {
        #[arg(long, value_name = "DIR")]
        pred: PathBuf,
        #[arg(long, value_name = "DIR")]
        gt: PathBuf,
        /// 6a (recall, K = ground-truth count) or 6b (K = max of both counts)
        #[arg(long, default_value = "6a")]
        mode: Mode,
        /// Where to write the JSON report
        #[arg(long, value_name = "FILE")]
        report: Option<PathBuf>,
        /// Exit 0 even when some charts fail to score
        #[arg(long)]
        keep_going: bool,
        /// penalize, skip or extrapolate ground-truth points outside a prediction's x-extent
        #[arg(long, default_value = "penalize")]
        out_of_range: OutOfRange,
    },
    /// Tint each mask of a bundle over its chart image
    Overlay {
        #[arg(long, value_name = "PNG")]
        image: PathBuf,
        #[arg(long, value_name = "FILE")]
        masks: PathBuf,
        #[arg(long, value_name = "PNG")]
        out: PathBuf,
    },
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .try_init();
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let args = match apply_config(args) {
        Ok(a) => a,
        Err(msg) => {
            eprintln!("error: {msg}");
            return 2;
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            1
        }
    }
}

const SUBCOMMANDS: &[&str] = &["generate", "render-masks", "segment", "extract", "score", "overlay"];

/// Splices flags from the config file in front of the user's own, so the
/// user's later occurrences override them.
fn apply_config(args: Vec<OsString>) -> std::result::Result<Vec<OsString>, String> {
    let mut config: Option<PathBuf> = None;
    let mut sub_at: Option<usize> = None;
    let mut i = 1;
    while i < args.len() {
        let a = args[i].to_string_lossy();
        if a == "--" {
            break;
        }
        if a == "--config" {
            config = args.get(i + 1).map(PathBuf::from);
            i += 2;
            continue;
        }
        if let Some(p) = a.strip_prefix("--config=") {
            config = Some(PathBuf::from(p));
        } else if sub_at.is_none() && SUBCOMMANDS.contains(&a.as_ref()) {
            sub_at = Some(i);
        } else if sub_at.is_none() && a == "--jobs" {
            i += 1;
        }
        i += 1;
    }
    let config = config.or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from));
    let (Some(path), Some(sub_at)) = (config, sub_at) else {
        return Ok(args);
    };
    let text = fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    let doc: Value = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let Value::Object(top) = doc else {
        return Err(format!("{}: expected a JSON object", path.display()));
    };
    let sub = args[sub_at].to_string_lossy().into_owned();
    let mut global = Vec::new();
    let mut local = Vec::new();
    for (key, value) in &top {
        if SUBCOMMANDS.contains(&key.as_str()) {
            if *key == sub {
                let Value::Object(flags) = value else {
                    return Err(format!("{}: \"{key}\" must be an object", path.display()));
                };
                for (k, v) in flags {
                    push_flag(&mut local, k, v).map_err(|m| format!("{}: {m}", path.display()))?;
                }
            }
        } else if key != "config" {
            push_flag(&mut global, key, value).map_err(|m| format!("{}: {m}", path.display()))?;
        }
    }
    let mut out = Vec::with_capacity(args.len() + global.len() + local.len());
    out.push(args[0].clone());
    out.extend(global);
    out.extend(args[1..=sub_at].iter().cloned());
    out.extend(local);
    out.extend(args[sub_at + 1..].iter().cloned());
    Ok(out)
}

fn push_flag(out: &mut Vec<OsString>, key: &str, value: &Value) -> std::result::Result<(), String> {
    let flag = format!("--{}", key.replace('_', "-"));
    match value {
        Value::Bool(true) => out.push(flag.into()),
        Value::Bool(false) | Value::Null => {}
        Value::String(s) => out.extend([flag.into(), s.into()]),
        Value::Number(n) => out.extend([flag.into(), n.to_string().into()]),
        _ => return Err(format!("value for \"{key}\" must be a string, number or boolean")),
    }
    Ok(())
}

fn execute(cli: &Cli) -> std::result::Result<(), Failure> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs as usize)
        .build()
        .map_err(|e| Failure::Runtime(e.to_string()))?;
    let opts = ReadOptions { strict: !cli.lenient };
    pool.install(|| match &cli.command {
        Command::Generate {
            seed,
            count,
            profile,
            out,
        } => generate(*seed, *count, *profile, out),
        Command::RenderMasks {
            annotations,
            thickness,
            out,
        } => render_masks(annotations, *thickness, out, opts),
        Command::Segment { images, tol, out, .. } => segment(images, *tol, out, opts),
        Command::Extract {
            masks,
            delta_x,
            min_mask_pixels,
            iou_threshold,
            thickness,
            out,
        } => {
            let cfg = ExtractionConfig {
                delta_x: *delta_x,
                min_mask_pixels: *min_mask_pixels,
                iou_suppression_threshold: *iou_threshold,
                thickness: *thickness,
            };
            cfg.validate().map_err(|e| Failure::Usage(e.to_string()))?;
            extract(masks, &cfg, out, opts)
        }
        Command::Score {
            pred,
            gt,
            mode,
            report,
            keep_going,
            out_of_range,
        } => {
            let eval = EvalOptions {
                norm_span: None,
                out_of_range: *out_of_range,
            };
            score(pred, gt, *mode, report.as_deref(), *keep_going, &eval, opts)
        }
        Command::Overlay { image, masks, out } => overlay(image, masks, out, opts),
    })
}

fn input_dir(dir: &Path) -> std::result::Result<(), Failure> {
    if dir.is_dir() {
        Ok(())
    } else {
        Err(Failure::Usage(format!("{}: no such directory", dir.display())))
    }
}

fn input_file(file: &Path) -> std::result::Result<(), Failure> {
    if file.is_file() {
        Ok(())
    } else {
        Err(Failure::Usage(format!("{}: no such file", file.display())))
    }
}

fn output_dir(dir: &Path) -> std::result::Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure::Runtime(format!("{}: {e}", dir.display())))
}

/// Annotation and series files in `dir`, leaving out mask bundles.
fn series_files(dir: &Path) -> Result<Vec<PathBuf>> {
    Ok(exchange::list_files(dir, ".json")?
        .into_iter()
        .filter(|p| !p.to_string_lossy().ends_with(".masks.json"))
        .collect())
}

/// Runs `job` over `items` on the current pool, reports every failure and
/// fails if any item did.
fn for_each_chart<T: Sync>(
    items: &[T],
    name: impl Fn(&T) -> String + Sync,
    job: impl Fn(&T) -> Result<()> + Sync,
) -> std::result::Result<(), Failure> {
    let errors: Vec<String> = items
        .par_iter()
        .map(|item| job(item).err().map(|e| format!("{}: {e}", name(item))))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    for e in &errors {
        eprintln!("error: {e}");
    }
    match errors.len() {
        0 => Ok(()),
        n => Err(Failure::Runtime(format!("{n} of {} charts failed", items.len()))),
    }
}

/// `target` expressed relative to directory `base`, falling back to the absolute path.
fn relative_path(target: &Path, base: &Path) -> String {
    let (Ok(target), Ok(base)) = (target.canonicalize(), base.canonicalize()) else {
        return target.to_string_lossy().into_owned();
    };
    let t: Vec<Component> = target.components().collect();
    let b: Vec<Component> = base.components().collect();
    let common = t.iter().zip(&b).take_while(|(x, y)| x == y).count();
    let mut rel = PathBuf::new();
    for _ in common..b.len() {
        rel.push("..");
    }
    for c in &t[common..] {
        rel.push(c);
    }
    rel.to_string_lossy().replace('\\', "/")
}

fn generate(seed: u64, count: u64, profile: DifficultyProfile, out: &Path) -> std::result::Result<(), Failure> {
    output_dir(out)?;
    let indices: Vec<u64> = (0..count).collect();
    for_each_chart(
        &indices,
        |i| format!("chart {i}"),
        |&i| {
            let sample = render_chart(&generate_spec(corpus_seed(seed, i), profile))?;
            exchange::write_chart_sample(out, &format!("chart_{i:05}"), &sample)?;
            Ok(())
        },
    )
}

fn render_masks(dir: &Path, thickness: u32, out: &Path, opts: ReadOptions) -> std::result::Result<(), Failure> {
    input_dir(dir)?;
    if thickness == 0 || thickness.is_multiple_of(2) {
        return Err(Failure::Usage(format!("thickness must be odd and positive, got {thickness}")));
    }
    output_dir(out)?;
    let files = series_files(dir)?;
    for_each_chart(
        &files,
        |p| p.display().to_string(),
        |path| {
            let ann = Annotation::read(path, opts)?;
            let masks = ann
                .series
                .iter()
                .map(|s| render_line_mask(s, ann.width, ann.height, thickness))
                .collect::<Result<Vec<_>>>()?;
            let image = relative_path(&path.with_file_name(&ann.image), out);
            let bundle = MaskBundle::new(image, ann.width, ann.height, masks)?;
            bundle.write(&out.join(format!("{}.masks.json", exchange::chart_id(path))))
        },
    )
}

fn segment(dir: &Path, tol: u8, out: &Path, opts: ReadOptions) -> std::result::Result<(), Failure> {
    input_dir(dir)?;
    output_dir(out)?;
    let files = exchange::list_files(dir, ".png")?;
    for_each_chart(
        &files,
        |p| p.display().to_string(),
        |path| {
            let img = exchange::read_png(path)?;
            let id = exchange::chart_id(path);
            let sibling = path.with_file_name(format!("{id}.json"));
            let area = if sibling.is_file() {
                Annotation::read(&sibling, opts)?.plot_area
            } else {
                None
            }
            .unwrap_or(PlotArea::full(img.width(), img.height()));
            let masks = segment_by_color(&img, &area, tol)?;
            let bundle = MaskBundle::new(relative_path(path, out), img.width(), img.height(), masks)?;
            bundle.write(&out.join(format!("{id}.masks.json")))
        },
    )
}

fn extract(dir: &Path, cfg: &ExtractionConfig, out: &Path, opts: ReadOptions) -> std::result::Result<(), Failure> {
    input_dir(dir)?;
    output_dir(out)?;
    let files = exchange::list_files(dir, ".masks.json")?;
    for_each_chart(
        &files,
        |p| p.display().to_string(),
        |path| {
            let bundle = MaskBundle::read(path, opts)?;
            let id = exchange::chart_id(path);
            if bundle.masks.is_empty() {
                log::warn!("{}: empty mask bundle, writing an empty series file", path.display());
            }
            let series = extract_all(&bundle.masks, cfg)?;
            let ann = Annotation {
                image: relative_path(&path.with_file_name(&bundle.image), out),
                width: bundle.width,
                height: bundle.height,
                plot_area: None,
                series,
                axis_calibration: None,
                metadata: Default::default(),
            };
            ann.write(&out.join(format!("{id}.json")))
        },
    )
}

fn score_one(
    gt_path: &Path,
    pred_path: Option<&Path>,
    mode: Mode,
    eval: &EvalOptions,
    opts: ReadOptions,
) -> Result<crate::eval::ScoreReport> {
    let gt = Annotation::read(gt_path, opts)?;
    let preds: Vec<PointSeries> = match pred_path {
        Some(p) => Annotation::read(p, opts)?.series,
        None => {
            log::warn!("{}: no prediction, scoring as empty", gt_path.display());
            Vec::new()
        }
    };
    let area = gt.plot_area.unwrap_or(PlotArea::full(gt.width, gt.height));
    crate::eval::evaluate_chart_with(&preds, &gt.series, &area, mode, eval)
}

fn score(
    pred: &Path,
    gt: &Path,
    mode: Mode,
    report: Option<&Path>,
    keep_going: bool,
    eval: &EvalOptions,
    opts: ReadOptions,
) -> std::result::Result<(), Failure> {
    input_dir(pred)?;
    input_dir(gt)?;
    let gts = series_files(gt)?;
    let preds: std::collections::BTreeMap<String, PathBuf> = series_files(pred)?
        .into_iter()
        .map(|p| (exchange::chart_id(&p), p))
        .collect();
    let charts: Vec<ChartScore> = gts
        .par_iter()
        .map(|g| {
            let id = exchange::chart_id(g);
            let pattern = Annotation::read(g, ReadOptions::lenient())
                .ok()
                .and_then(|a| a.metadata.get("pattern").cloned());
            let result = score_one(g, preds.get(&id).map(PathBuf::as_path), mode, eval, opts)
                .map_err(|e| e.to_string());
            ChartScore { id, pattern, result }
        })
        .collect();
    let agg = AggregateReport::from_charts(mode, charts);
    println!(
        "{}: mean {:.2}, median {:.2} over {} charts ({} failed)",
        mode.as_str(),
        agg.mean,
        agg.median,
        agg.count,
        agg.failures
    );
    for (pattern, s) in &agg.per_pattern {
        println!("  {pattern}: {:.2} (n={})", s.mean, s.count);
    }
    for c in &agg.charts {
        if let Err(e) = &c.result {
            eprintln!("error: {}: {e}", c.id);
        }
    }
    if let Some(path) = report {
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            output_dir(parent)?;
        }
        agg.write(path)?;
    }
    if agg.failures > 0 && !keep_going {
        return Err(Failure::Runtime(format!("{} charts failed to score", agg.failures)));
    }
    Ok(())
}

/// Distinct, well-spread hue for the `i`-th mask.
fn tint(i: usize) -> Rgb {
    let h = (i as f64 * 0.618_033_988_75).fract() * 6.0;
    let (s, v) = (0.85, 0.95);
    let c = v * s;
    let x = c * (1.0 - ((h % 2.0) - 1.0).abs());
    let (r, g, b) = match h as u32 {
        0 => (c, x, 0.0),
        1 => (x, c, 0.0),
        2 => (0.0, c, x),
        3 => (0.0, x, c),
        4 => (x, 0.0, c),
        _ => (c, 0.0, x),
    };
    let m = v - c;
    [r, g, b].map(|u| ((u + m) * 255.0).round() as u8)
}

/// Tints every mask pixel with the mask's hue at 50% opacity, highest confidence on top.
pub fn render_overlay(img: &RasterImage, bundle: &MaskBundle) -> Result<RasterImage> {
    if (img.width(), img.height()) != (bundle.width, bundle.height) {
        return Err(Error::DimensionMismatch {
            left_w: img.width(),
            left_h: img.height(),
            right_w: bundle.width,
            right_h: bundle.height,
        });
    }
    let mut out = img.clone();
    let masks = bundle.sorted_masks();
    for (i, m) in masks.iter().enumerate().rev() {
        let hue = tint(i);
        for (x, y) in m.foreground() {
            let p = out.get(x, y);
            out.put(x, y, [0, 1, 2].map(|k| (p[k] as u16 + hue[k] as u16).div_ceil(2) as u8));
        }
    }
    Ok(out)
}

fn overlay(image: &Path, masks: &Path, out: &Path, opts: ReadOptions) -> std::result::Result<(), Failure> {
    input_file(image)?;
    input_file(masks)?;
    let img = exchange::read_png(image)?;
    let bundle = MaskBundle::read(masks, opts)?;
    let tinted = render_overlay(&img, &bundle)?;
    if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
        output_dir(parent)?;
    }
    exchange::write_png(out, &tinted)?;
    Ok(())
}
