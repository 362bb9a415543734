//! File formats: chart annotations, series files, mask bundles and score reports.
//!
//! All documents are UTF-8 JSON written deterministically: object keys are
//! sorted, output is compact, and every real number is printed with exactly
//! four decimals. Image references are paths relative to the directory that
//! holds the document. Images are 8-bit RGB PNGs.
//!
//! Readers report schema problems as [`Error::Format`] carrying a JSON
//! pointer. In strict mode unknown top-level fields are rejected; lenient
//! mode ignores them. Trailing content after the document is always an error.

use std::collections::BTreeMap;
use std::fs;
use std::io::{Cursor, Write};
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use crate::chart::{AxisCalibration, ChartSample, PlotArea, RasterImage, Rgb};
use crate::error::{Error, Result};
use crate::eval::{AggregateReport, ChartScore, Mode, PatternStats, ScoreReport};
use crate::mask::LineMask;
use crate::rle::{rle_decode, rle_encode, RleMask};
use crate::series::{Point, PointSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReadOptions {
    pub strict: bool,
}

impl Default for ReadOptions {
    fn default() -> Self {
        Self { strict: true }
    }
}

impl ReadOptions {
    pub fn lenient() -> Self {
        Self { strict: false }
    }
}

// ---------------------------------------------------------------------------
// canonical JSON output

struct FixedFloats;

impl serde_json::ser::Formatter for FixedFloats {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()> {
        writer.write_all(format_float(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> std::io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// Four-decimal rendering used for every real number; `-0.0000` becomes `0.0000`.
pub fn format_float(value: f64) -> String {
    let s = format!("{value:.4}");
    if s == "-0.0000" {
        "0.0000".into()
    } else {
        s
    }
}

/// Serializes a value with sorted keys and fixed float formatting, plus a trailing newline.
pub fn to_canonical_json(value: &Value) -> Vec<u8> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FixedFloats);
    serde::Serialize::serialize(value, &mut ser).expect("in-memory JSON serialization");
    out.push(b'\n');
    out
}

fn float(v: f64) -> Value {
    // non-finite values are rejected by the domain types before they get here
    Value::from(v)
}

/// Writes `bytes` through a temporary file in the same directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

// ---------------------------------------------------------------------------
// schema-checked JSON input

fn parse_document(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::format("", e.to_string()))
}

fn escape_token(key: &str) -> String {
    key.replace('~', "~0").replace('/', "~1")
}

struct Obj<'a> {
    map: &'a Map<String, Value>,
    path: String,
}

impl<'a> Obj<'a> {
    fn new(v: &'a Value, path: &str) -> Result<Self> {
        match v {
            Value::Object(map) => Ok(Self {
                map,
                path: path.to_string(),
            }),
            _ => Err(Error::format(path_or_root(path), "expected an object")),
        }
    }

    fn child(&self, key: &str) -> String {
        format!("{}/{}", self.path, escape_token(key))
    }

    fn req(&self, key: &str) -> Result<&'a Value> {
        self.map
            .get(key)
            .ok_or_else(|| Error::format(self.child(key), "missing required field"))
    }

    fn opt(&self, key: &str) -> Option<&'a Value> {
        self.map.get(key).filter(|v| !v.is_null())
    }

    fn only(&self, allowed: &[&str], opts: ReadOptions) -> Result<()> {
        if opts.strict {
            if let Some(k) = self.map.keys().find(|k| !allowed.contains(&k.as_str())) {
                return Err(Error::format(self.child(k), "unknown field"));
            }
        }
        Ok(())
    }
}

fn path_or_root(path: &str) -> String {
    if path.is_empty() {
        "/".into()
    } else {
        path.into()
    }
}

fn as_u64(v: &Value, path: &str) -> Result<u64> {
    v.as_u64()
        .ok_or_else(|| Error::format(path_or_root(path), "expected a non-negative integer"))
}

fn as_u32(v: &Value, path: &str) -> Result<u32> {
    u32::try_from(as_u64(v, path)?).map_err(|_| Error::format(path_or_root(path), "integer out of range"))
}

fn as_dim(v: &Value, path: &str) -> Result<u32> {
    match as_u32(v, path)? {
        0 => Err(Error::format(path, "dimension must be at least 1")),
        d => Ok(d),
    }
}

fn as_f64(v: &Value, path: &str) -> Result<f64> {
    v.as_f64()
        .filter(|f| f.is_finite())
        .ok_or_else(|| Error::format(path_or_root(path), "expected a finite number"))
}

fn as_str<'a>(v: &'a Value, path: &str) -> Result<&'a str> {
    v.as_str()
        .ok_or_else(|| Error::format(path_or_root(path), "expected a string"))
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| Error::format(path_or_root(path), "expected an array"))
}

fn as_pair(v: &Value, path: &str) -> Result<(f64, f64)> {
    let a = as_array(v, path)?;
    if a.len() != 2 {
        return Err(Error::format(path, "expected a [x, y] pair"));
    }
    Ok((as_f64(&a[0], &format!("{path}/0"))?, as_f64(&a[1], &format!("{path}/1"))?))
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::from(e).in_file(path))
}

// ---------------------------------------------------------------------------
// series, plot area, calibration

fn series_to_json(series: &[PointSeries]) -> Value {
    Value::Array(
        series
            .iter()
            .map(|s| {
                Value::Array(
                    s.iter()
                        .map(|p| Value::Array(vec![float(p.x), float(p.y)]))
                        .collect(),
                )
            })
            .collect(),
    )
}

fn series_from_json(v: &Value, path: &str) -> Result<Vec<PointSeries>> {
    as_array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let sp = format!("{path}/{i}");
            let pts = as_array(s, &sp)?
                .iter()
                .enumerate()
                .map(|(j, p)| as_pair(p, &format!("{sp}/{j}")).map(Point::from))
                .collect::<Result<Vec<_>>>()?;
            PointSeries::canonicalize(pts).map_err(|e| Error::format(sp, e.to_string()))
        })
        .collect()
}

fn plot_area_to_json(pa: &PlotArea) -> Value {
    json!({ "x0": pa.x0, "y0": pa.y0, "x1": pa.x1, "y1": pa.y1 })
}

fn plot_area_from_json(v: &Value, path: &str) -> Result<PlotArea> {
    let o = Obj::new(v, path)?;
    let get = |k: &str| as_u32(o.req(k)?, &o.child(k));
    PlotArea::new(get("x0")?, get("y0")?, get("x1")?, get("y1")?)
        .map_err(|e| Error::format(path, e.to_string()))
}

fn calibration_to_json(c: &AxisCalibration) -> Value {
    let refs = |r: &[crate::chart::AxisRef; 2]| {
        Value::Array(
            r.iter()
                .map(|a| Value::Array(vec![float(a.pixel), float(a.value)]))
                .collect(),
        )
    };
    json!({ "x": refs(&c.x), "y": refs(&c.y) })
}

fn calibration_from_json(v: &Value, path: &str) -> Result<AxisCalibration> {
    let o = Obj::new(v, path)?;
    let axis = |k: &str| -> Result<[(f64, f64); 2]> {
        let p = o.child(k);
        let a = as_array(o.req(k)?, &p)?;
        if a.len() != 2 {
            return Err(Error::format(p, "expected two reference pairs"));
        }
        Ok([as_pair(&a[0], &format!("{p}/0"))?, as_pair(&a[1], &format!("{p}/1"))?])
    };
    AxisCalibration::new(axis("x")?, axis("y")?).map_err(|e| Error::format(path, e.to_string()))
}

// ---------------------------------------------------------------------------
// annotations and series files

/// The JSON side of a chart sample. Extracted series files use the same
/// schema with `plot_area` omitted.
#[derive(Debug, Clone, PartialEq)]
pub struct Annotation {
    /// Image path relative to the annotation's directory.
    pub image: String,
    pub width: u32,
    pub height: u32,
    pub plot_area: Option<PlotArea>,
    pub series: Vec<PointSeries>,
    pub axis_calibration: Option<AxisCalibration>,
    pub metadata: BTreeMap<String, String>,
}

const ANNOTATION_FIELDS: &[&str] = &[
    "image",
    "width",
    "height",
    "plot_area",
    "series",
    "axis_calibration",
    "metadata",
];

impl Annotation {
    pub fn from_sample(sample: &ChartSample, image: impl Into<String>) -> Self {
        Self {
            image: image.into(),
            width: sample.image.width(),
            height: sample.image.height(),
            plot_area: Some(sample.plot_area),
            series: sample.gt_series.clone(),
            axis_calibration: sample.axis_calibration,
            metadata: sample.metadata.clone(),
        }
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("image".into(), Value::from(self.image.clone()));
        m.insert("width".into(), Value::from(self.width));
        m.insert("height".into(), Value::from(self.height));
        if let Some(pa) = &self.plot_area {
            m.insert("plot_area".into(), plot_area_to_json(pa));
        }
        m.insert("series".into(), series_to_json(&self.series));
        if let Some(c) = &self.axis_calibration {
            m.insert("axis_calibration".into(), calibration_to_json(c));
        }
        m.insert(
            "metadata".into(),
            Value::Object(
                self.metadata
                    .iter()
                    .map(|(k, v)| (k.clone(), Value::from(v.clone())))
                    .collect(),
            ),
        );
        Value::Object(m)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        to_canonical_json(&self.to_json())
    }

    pub fn from_json(v: &Value, opts: ReadOptions) -> Result<Self> {
        let o = Obj::new(v, "")?;
        o.only(ANNOTATION_FIELDS, opts)?;
        let width = as_dim(o.req("width")?, "/width")?;
        let height = as_dim(o.req("height")?, "/height")?;
        let plot_area = o
            .opt("plot_area")
            .map(|v| plot_area_from_json(v, "/plot_area"))
            .transpose()?;
        if let Some(pa) = &plot_area {
            if !pa.fits(width, height) {
                return Err(Error::format("/plot_area", "plot area exceeds the image"));
            }
        }
        let metadata = match o.opt("metadata") {
            None => BTreeMap::new(),
            Some(v) => {
                let m = Obj::new(v, "/metadata")?;
                m.map
                    .iter()
                    .map(|(k, v)| Ok((k.clone(), as_str(v, &m.child(k))?.to_string())))
                    .collect::<Result<_>>()?
            }
        };
        Ok(Self {
            image: as_str(o.req("image")?, "/image")?.to_string(),
            width,
            height,
            plot_area,
            series: series_from_json(o.req("series")?, "/series")?,
            axis_calibration: o
                .opt("axis_calibration")
                .map(|v| calibration_from_json(v, "/axis_calibration"))
                .transpose()?,
            metadata,
        })
    }

    pub fn parse(text: &str, opts: ReadOptions) -> Result<Self> {
        Self::from_json(&parse_document(text)?, opts)
    }

    pub fn read(path: &Path, opts: ReadOptions) -> Result<Self> {
        Self::parse(&read_text(path)?, opts).map_err(|e| e.in_file(path))
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_atomic(path, &self.to_bytes())
    }
}

// ---------------------------------------------------------------------------
// PNG images

pub fn encode_png(img: &RasterImage) -> Result<Vec<u8>> {
    let raw: Vec<u8> = img.pixels().iter().flat_map(|p| p.iter().copied()).collect();
    let buf = image::RgbImage::from_raw(img.width(), img.height(), raw)
        .expect("raster length matches its dimensions");
    let mut out = Cursor::new(Vec::new());
    buf.write_to(&mut out, image::ImageFormat::Png)?;
    Ok(out.into_inner())
}

pub fn decode_png(bytes: &[u8]) -> Result<RasterImage> {
    let img = image::load_from_memory_with_format(bytes, image::ImageFormat::Png)?.to_rgb8();
    let (w, h) = img.dimensions();
    let pixels: Vec<Rgb> = img.pixels().map(|p| p.0).collect();
    RasterImage::from_pixels(w, h, pixels)
}

pub fn write_png(path: &Path, img: &RasterImage) -> Result<()> {
    write_atomic(path, &encode_png(img)?)
}

pub fn read_png(path: &Path) -> Result<RasterImage> {
    let bytes = fs::read(path).map_err(|e| Error::from(e).in_file(path))?;
    decode_png(&bytes).map_err(|e| e.in_file(path))
}

fn resolve(doc: &Path, relative: &str) -> PathBuf {
    doc.parent().unwrap_or(Path::new(".")).join(relative)
}

// ---------------------------------------------------------------------------
// chart samples

/// Writes `<dir>/<id>.png` and `<dir>/<id>.json`.
pub fn write_chart_sample(dir: &Path, id: &str, sample: &ChartSample) -> Result<PathBuf> {
    let png = format!("{id}.png");
    write_png(&dir.join(&png), &sample.image)?;
    let json_path = dir.join(format!("{id}.json"));
    Annotation::from_sample(sample, png).write(&json_path)?;
    Ok(json_path)
}

/// Reads an annotation and the image it references.
pub fn read_chart_sample(json_path: &Path, opts: ReadOptions) -> Result<ChartSample> {
    let ann = Annotation::read(json_path, opts)?;
    let plot_area = ann
        .plot_area
        .ok_or_else(|| Error::format("/plot_area", "missing required field").in_file(json_path))?;
    let image = read_png(&resolve(json_path, &ann.image))?;
    if (image.width(), image.height()) != (ann.width, ann.height) {
        return Err(Error::format(
            "/width",
            format!(
                "annotation says {}x{}, image is {}x{}",
                ann.width,
                ann.height,
                image.width(),
                image.height()
            ),
        )
        .in_file(json_path));
    }
    let sample = ChartSample {
        image,
        gt_series: ann.series,
        plot_area,
        axis_calibration: ann.axis_calibration,
        metadata: ann.metadata,
    };
    sample
        .validate()
        .map_err(|e| Error::format("/series", e.to_string()).in_file(json_path))?;
    Ok(sample)
}

// ---------------------------------------------------------------------------
// mask bundles

/// Instance masks predicted for (or rendered from) one image.
#[derive(Debug, Clone, PartialEq)]
pub struct MaskBundle {
    pub image: String,
    pub width: u32,
    pub height: u32,
    pub masks: Vec<LineMask>,
}

impl MaskBundle {
    pub fn new(image: impl Into<String>, width: u32, height: u32, masks: Vec<LineMask>) -> Result<Self> {
        let bundle = Self {
            image: image.into(),
            width,
            height,
            masks,
        };
        for m in &bundle.masks {
            if (m.width(), m.height()) != (width, height) {
                return Err(Error::DimensionMismatch {
                    left_w: width,
                    left_h: height,
                    right_w: m.width(),
                    right_h: m.height(),
                });
            }
        }
        Ok(bundle)
    }

    /// Masks in descending confidence order, ties kept in input order.
    pub fn sorted_masks(&self) -> Vec<&LineMask> {
        let mut v: Vec<&LineMask> = self.masks.iter().collect();
        v.sort_by(|a, b| b.confidence().total_cmp(&a.confidence()));
        v
    }

    pub fn to_json(&self) -> Value {
        let masks = self
            .sorted_masks()
            .into_iter()
            .map(|m| {
                json!({
                    "confidence": float(m.confidence()),
                    "rle": rle_encode(m).runs,
                })
            })
            .collect::<Vec<_>>();
        json!({
            "image": self.image,
            "width": self.width,
            "height": self.height,
            "masks": masks,
        })
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        to_canonical_json(&self.to_json())
    }

    pub fn from_json(v: &Value, opts: ReadOptions) -> Result<Self> {
        let o = Obj::new(v, "")?;
        o.only(&["image", "width", "height", "masks"], opts)?;
        let width = as_dim(o.req("width")?, "/width")?;
        let height = as_dim(o.req("height")?, "/height")?;
        let masks = as_array(o.req("masks")?, "/masks")?
            .iter()
            .enumerate()
            .map(|(i, m)| {
                let mp = format!("/masks/{i}");
                let mo = Obj::new(m, &mp)?;
                if opts.strict {
                    mo.only(&["confidence", "rle"], opts)?;
                }
                let confidence = as_f64(mo.req("confidence")?, &mo.child("confidence"))?;
                if !(0.0..=1.0).contains(&confidence) {
                    return Err(Error::format(mo.child("confidence"), "confidence outside [0, 1]"));
                }
                let rp = mo.child("rle");
                let runs = as_array(mo.req("rle")?, &rp)?
                    .iter()
                    .enumerate()
                    .map(|(j, r)| as_u64(r, &format!("{rp}/{j}")))
                    .collect::<Result<Vec<_>>>()?;
                let rle = RleMask { width, height, runs };
                let mask = rle_decode(&rle).map_err(|e| match e {
                    Error::Format { message, .. } => Error::format(rp.clone(), message),
                    other => other,
                })?;
                Ok(mask.with_confidence(confidence))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            image: as_str(o.req("image")?, "/image")?.to_string(),
            width,
            height,
            masks,
        })
    }

    pub fn parse(text: &str, opts: ReadOptions) -> Result<Self> {
        Self::from_json(&parse_document(text)?, opts)
    }

    /// Reads a bundle and, when the referenced image exists, checks its dimensions.
    pub fn read(path: &Path, opts: ReadOptions) -> Result<Self> {
        let bundle = Self::parse(&read_text(path)?, opts).map_err(|e| e.in_file(path))?;
        let image = resolve(path, &bundle.image);
        if image.is_file() {
            let (w, h) = image::image_dimensions(&image).map_err(|e| Error::from(e).in_file(&image))?;
            if (w, h) != (bundle.width, bundle.height) {
                return Err(Error::format(
                    "/width",
                    format!(
                        "bundle is {}x{} but {} is {w}x{h}",
                        bundle.width,
                        bundle.height,
                        image.display()
                    ),
                )
                .in_file(path));
            }
        }
        Ok(bundle)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_atomic(path, &self.to_bytes())
    }
}

// ---------------------------------------------------------------------------
// score reports

fn mode_from_json(v: &Value, path: &str) -> Result<Mode> {
    as_str(v, path)?
        .parse()
        .map_err(|_| Error::format(path, "expected \"task6a\" or \"task6b\""))
}

impl ScoreReport {
    pub fn to_json(&self) -> Value {
        json!({
            "mode": self.mode.as_str(),
            "score": float(self.score),
            "k": self.k,
            "assignment": self.assignment.iter().map(|&(p, g)| json!([p, g])).collect::<Vec<_>>(),
            "per_pair_similarity": self.per_pair_similarity.iter().map(|&s| float(s)).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value, path: &str, opts: ReadOptions) -> Result<Self> {
        let o = Obj::new(v, path)?;
        o.only(&["mode", "score", "k", "assignment", "per_pair_similarity"], opts)?;
        let ap = o.child("assignment");
        let assignment = as_array(o.req("assignment")?, &ap)?
            .iter()
            .enumerate()
            .map(|(i, pair)| {
                let pp = format!("{ap}/{i}");
                let a = as_array(pair, &pp)?;
                if a.len() != 2 {
                    return Err(Error::format(pp, "expected [pred, gt]"));
                }
                let gt = match &a[1] {
                    Value::Null => None,
                    g => Some(as_u64(g, &format!("{pp}/1"))? as usize),
                };
                Ok((as_u64(&a[0], &format!("{pp}/0"))? as usize, gt))
            })
            .collect::<Result<Vec<_>>>()?;
        let sp = o.child("per_pair_similarity");
        let per_pair_similarity = as_array(o.req("per_pair_similarity")?, &sp)?
            .iter()
            .enumerate()
            .map(|(i, s)| as_f64(s, &format!("{sp}/{i}")))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            mode: mode_from_json(o.req("mode")?, &o.child("mode"))?,
            score: as_f64(o.req("score")?, &o.child("score"))?,
            k: as_u64(o.req("k")?, &o.child("k"))? as usize,
            assignment,
            per_pair_similarity,
        })
    }
}

impl AggregateReport {
    pub fn to_json(&self) -> Value {
        let charts: Vec<Value> = self
            .charts
            .iter()
            .map(|c| {
                let mut m = Map::new();
                m.insert("id".into(), Value::from(c.id.clone()));
                if let Some(p) = &c.pattern {
                    m.insert("pattern".into(), Value::from(p.clone()));
                }
                match &c.result {
                    Ok(r) => m.insert("report".into(), r.to_json()),
                    Err(e) => m.insert("error".into(), Value::from(e.clone())),
                };
                Value::Object(m)
            })
            .collect();
        let per_pattern: Map<String, Value> = self
            .per_pattern
            .iter()
            .map(|(k, s)| (k.clone(), json!({ "count": s.count, "mean": float(s.mean) })))
            .collect();
        json!({
            "mode": self.mode.as_str(),
            "count": self.count,
            "failures": self.failures,
            "mean": float(self.mean),
            "median": float(self.median),
            "per_pattern": per_pattern,
            "charts": charts,
        })
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        to_canonical_json(&self.to_json())
    }

    pub fn from_json(v: &Value, opts: ReadOptions) -> Result<Self> {
        let o = Obj::new(v, "")?;
        o.only(
            &["mode", "count", "failures", "mean", "median", "per_pattern", "charts"],
            opts,
        )?;
        let pp = Obj::new(o.req("per_pattern")?, "/per_pattern")?;
        let per_pattern = pp
            .map
            .iter()
            .map(|(k, v)| {
                let so = Obj::new(v, &pp.child(k))?;
                Ok((
                    k.clone(),
                    PatternStats {
                        count: as_u64(so.req("count")?, &so.child("count"))? as usize,
                        mean: as_f64(so.req("mean")?, &so.child("mean"))?,
                    },
                ))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        let charts = as_array(o.req("charts")?, "/charts")?
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let cp = format!("/charts/{i}");
                let co = Obj::new(c, &cp)?;
                let result = match (co.opt("report"), co.opt("error")) {
                    (Some(r), None) => Ok(ScoreReport::from_json(r, &co.child("report"), opts)?),
                    (None, Some(e)) => Err(as_str(e, &co.child("error"))?.to_string()),
                    _ => return Err(Error::format(cp, "expected exactly one of report or error")),
                };
                Ok(ChartScore {
                    id: as_str(co.req("id")?, &co.child("id"))?.to_string(),
                    pattern: co
                        .opt("pattern")
                        .map(|p| as_str(p, &co.child("pattern")).map(str::to_string))
                        .transpose()?,
                    result,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            mode: mode_from_json(o.req("mode")?, "/mode")?,
            count: as_u64(o.req("count")?, "/count")? as usize,
            failures: as_u64(o.req("failures")?, "/failures")? as usize,
            mean: as_f64(o.req("mean")?, "/mean")?,
            median: as_f64(o.req("median")?, "/median")?,
            per_pattern,
            charts,
        })
    }

    pub fn parse(text: &str, opts: ReadOptions) -> Result<Self> {
        Self::from_json(&parse_document(text)?, opts)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_atomic(path, &self.to_bytes())
    }
}

// ---------------------------------------------------------------------------
// corpus directories

/// Files in `dir` whose names end with `suffix`, sorted by name.
pub fn list_files(dir: &Path, suffix: &str) -> Result<Vec<PathBuf>> {
    let mut out: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Error::from(e).in_file(dir))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.is_file()
                && p.file_name()
                    .and_then(|n| n.to_str())
                    .is_some_and(|n| n.ends_with(suffix))
        })
        .collect();
    out.sort();
    Ok(out)
}

/// Chart id of a corpus file: its file name up to the first dot.
pub fn chart_id(path: &Path) -> String {
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or_default();
    name.split('.').next().unwrap_or(name).to_string()
}
