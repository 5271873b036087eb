//! CSV and JSON files exchanged between the batch commands.
//!
//! | file | columns / shape |
//! |------|-----------------|
//! | attributions | `scan_id,predicted_class,true_class,r_ILM,r_NFLIPL,r_INL,r_OPL,r_ONLISM,r_ISE,r_OSRPE` |
//! | profiles | `{"CLASS": {"mean": [7], "std": [7], "n": N}}` |
//! | deviation scores | `scan_id,layer,observed,difference,z,flagged` |
//! | histogram | `bin_left,bin_right,count` |
//! | label pairs | `truth,predicted` |
//!
//! Percentages are written with 4 decimals, profile statistics with 6. The
//! writers are pure functions of their input, so reruns are byte-identical.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::attribution::LayerAttribution;
use crate::class::Class;
use crate::error::{Error, Result};
use crate::histogram::Histogram;
use crate::labelmap::Layer;
use crate::metrics::{ConfusionMatrix, MetricsSummary};
use crate::profile::{AttributionRecord, ClassProfile, DeviationReport, ProfileSet};

pub const ATTRIBUTION_HEADER: [&str; 10] = [
    "scan_id",
    "predicted_class",
    "true_class",
    "r_ILM",
    "r_NFLIPL",
    "r_INL",
    "r_OPL",
    "r_ONLISM",
    "r_ISE",
    "r_OSRPE",
];

pub const SCORE_HEADER: [&str; 6] = ["scan_id", "layer", "observed", "difference", "z", "flagged"];

/// Written in the `z` column when the profile has zero spread on a layer.
pub const UNDEFINED_Z: &str = "undefined";

/// One line of an attribution file. Class columns may be blank.
#[derive(Debug, Clone, PartialEq)]
pub struct AttributionRow {
    pub scan_id: String,
    pub predicted: Option<Class>,
    pub truth: Option<Class>,
    pub attribution: LayerAttribution,
}

impl AttributionRow {
    pub fn into_record(self) -> Result<AttributionRecord> {
        let predicted = self.predicted.ok_or_else(|| {
            Error::Validation(format!("scan {:?} has no predicted class", self.scan_id))
        })?;
        Ok(AttributionRecord {
            scan_id: self.scan_id,
            predicted,
            truth: self.truth,
            attribution: self.attribution,
        })
    }
}

impl From<AttributionRecord> for AttributionRow {
    fn from(r: AttributionRecord) -> Self {
        AttributionRow {
            scan_id: r.scan_id,
            predicted: Some(r.predicted),
            truth: r.truth,
            attribution: r.attribution,
        }
    }
}

fn csv_err(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(source) => Error::io(path, source),
        other => Error::Validation(format!("{}: {other:?}", path.display())),
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn opt_class(s: &str) -> Result<Option<Class>> {
    if s.trim().is_empty() {
        Ok(None)
    } else {
        s.parse().map(Some)
    }
}

fn parse_f64(s: &str, what: &str, line: usize) -> Result<f64> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| Error::Validation(format!("line {line}: bad {what} {s:?}")))?;
    if !v.is_finite() {
        return Err(Error::Validation(format!("line {line}: non-finite {what}")));
    }
    Ok(v)
}

fn csv_reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes())
}

fn check_header(path: &Path, rdr: &mut csv::Reader<&[u8]>, expected: &[&str]) -> Result<()> {
    let headers = rdr.headers().map_err(|e| csv_err(path, e))?;
    let got: Vec<&str> = headers.iter().collect();
    if got != expected {
        return Err(Error::Validation(format!(
            "{}: expected header {:?}, found {:?}",
            path.display(),
            expected,
            got
        )));
    }
    Ok(())
}

fn render_csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let as_validation = |e: csv::Error| Error::Validation(e.to_string());
    w.write_record(header).map_err(as_validation)?;
    for row in rows {
        w.write_record(&row).map_err(as_validation)?;
    }
    w.into_inner().map_err(|e| Error::Validation(e.to_string()))
}

pub fn encode_attributions(rows: &[AttributionRow]) -> Result<Vec<u8>> {
    render_csv(
        &ATTRIBUTION_HEADER,
        rows.iter().map(|r| {
            let mut fields = vec![
                r.scan_id.clone(),
                r.predicted.map(|c| c.to_string()).unwrap_or_default(),
                r.truth.map(|c| c.to_string()).unwrap_or_default(),
            ];
            fields.extend(r.attribution.values().iter().map(|v| format!("{v:.4}")));
            fields
        }),
    )
}

pub fn write_attributions(path: impl AsRef<Path>, rows: &[AttributionRow]) -> Result<()> {
    write_file(path.as_ref(), &encode_attributions(rows)?)
}

pub fn read_attributions(path: impl AsRef<Path>) -> Result<Vec<AttributionRow>> {
    let path = path.as_ref();
    let text = read_file(path)?;
    let mut rdr = csv_reader(&text);
    check_header(path, &mut rdr, &ATTRIBUTION_HEADER)?;
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| csv_err(path, e))?;
        let line = i + 2;
        let mut r = [0.0; 7];
        for (j, slot) in r.iter_mut().enumerate() {
            *slot = parse_f64(&rec[3 + j], ATTRIBUTION_HEADER[3 + j], line)?;
            if *slot < 0.0 {
                return Err(Error::Validation(format!(
                    "{}: line {line}: negative attribution",
                    path.display()
                )));
            }
        }
        rows.push(AttributionRow {
            scan_id: rec[0].to_string(),
            predicted: opt_class(&rec[1])?,
            truth: opt_class(&rec[2])?,
            attribution: LayerAttribution::from_raw(r),
        });
    }
    Ok(rows)
}

/// Reads an attribution file where every row must name its predicted class.
pub fn read_records(path: impl AsRef<Path>) -> Result<Vec<AttributionRecord>> {
    read_attributions(path)?
        .into_iter()
        .map(AttributionRow::into_record)
        .collect()
}

fn json_array(values: &[f64; 7]) -> String {
    let items: Vec<String> = values.iter().map(|v| format!("{v:.6}")).collect();
    format!("[{}]", items.join(", "))
}

pub fn encode_profiles(set: &ProfileSet) -> Vec<u8> {
    let mut out = String::from("{");
    for (i, (class, p)) in set.profiles.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(
            out,
            "\n  \"{class}\": {{\n    \"mean\": {},\n    \"std\": {},\n    \"n\": {}\n  }}",
            json_array(&p.mean),
            json_array(&p.std),
            p.n
        );
    }
    out.push_str(if set.profiles.is_empty() {
        "}\n"
    } else {
        "\n}\n"
    });
    out.into_bytes()
}

pub fn write_profiles(path: impl AsRef<Path>, set: &ProfileSet) -> Result<()> {
    write_file(path.as_ref(), &encode_profiles(set))
}

#[derive(Deserialize)]
struct ProfileJson {
    mean: [f64; 7],
    std: [f64; 7],
    n: usize,
}

pub fn decode_profiles(text: &str) -> Result<ProfileSet> {
    let raw: BTreeMap<String, ProfileJson> =
        serde_json::from_str(text).map_err(|e| Error::Validation(format!("profiles: {e}")))?;
    let mut set = ProfileSet::default();
    for (name, p) in raw {
        let class: Class = name.parse()?;
        set.profiles
            .insert(class, ClassProfile::new(class, p.mean, p.std, p.n)?);
    }
    Ok(set)
}

pub fn read_profiles(path: impl AsRef<Path>) -> Result<ProfileSet> {
    let path = path.as_ref();
    decode_profiles(&read_file(path)?)
        .map_err(|e| Error::Validation(format!("{}: {e}", path.display())))
}

/// One scored scan: its deviation report plus the threshold it was flagged at.
#[derive(Debug, Clone)]
pub struct ScoredScan {
    pub scan_id: String,
    pub report: DeviationReport,
    pub threshold: f64,
}

pub fn encode_scores(scans: &[ScoredScan]) -> Result<Vec<u8>> {
    render_csv(
        &SCORE_HEADER,
        scans.iter().flat_map(|s| {
            s.report.layers.iter().map(move |d| {
                vec![
                    s.scan_id.clone(),
                    d.layer.to_string(),
                    format!("{:.4}", d.observed),
                    format!("{:.4}", d.difference),
                    d.z.map_or_else(|| UNDEFINED_Z.to_string(), |z| format!("{z:.4}")),
                    d.exceeds(s.threshold).to_string(),
                ]
            })
        }),
    )
}

pub fn write_scores(path: impl AsRef<Path>, scans: &[ScoredScan]) -> Result<()> {
    write_file(path.as_ref(), &encode_scores(scans)?)
}

/// A parsed line of a deviation score file.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreRow {
    pub scan_id: String,
    pub layer: Layer,
    pub observed: f64,
    pub difference: f64,
    pub z: Option<f64>,
    pub flagged: bool,
}

pub fn read_scores(path: impl AsRef<Path>) -> Result<Vec<ScoreRow>> {
    let path = path.as_ref();
    let text = read_file(path)?;
    let mut rdr = csv_reader(&text);
    check_header(path, &mut rdr, &SCORE_HEADER)?;
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| csv_err(path, e))?;
        let line = i + 2;
        let z = match &rec[4] {
            UNDEFINED_Z => None,
            s => Some(parse_f64(s, "z", line)?),
        };
        let flagged = match &rec[5] {
            "true" => true,
            "false" => false,
            s => {
                return Err(Error::Validation(format!(
                    "line {line}: bad flagged value {s:?}"
                )))
            }
        };
        rows.push(ScoreRow {
            scan_id: rec[0].to_string(),
            layer: rec[1].parse()?,
            observed: parse_f64(&rec[2], "observed", line)?,
            difference: parse_f64(&rec[3], "difference", line)?,
            z,
            flagged,
        });
    }
    Ok(rows)
}

pub fn encode_histogram(h: &Histogram) -> Result<Vec<u8>> {
    render_csv(
        &["bin_left", "bin_right", "count"],
        h.bins().map(|b| {
            vec![
                format!("{:.6}", b.left),
                format!("{:.6}", b.right),
                b.count.to_string(),
            ]
        }),
    )
}

pub fn write_histogram(path: impl AsRef<Path>, h: &Histogram) -> Result<()> {
    write_file(path.as_ref(), &encode_histogram(h)?)
}

pub fn read_pairs(path: impl AsRef<Path>) -> Result<Vec<(Class, Class)>> {
    let path = path.as_ref();
    let text = read_file(path)?;
    let mut rdr = csv_reader(&text);
    check_header(path, &mut rdr, &["truth", "predicted"])?;
    let mut pairs = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_err(path, e))?;
        pairs.push((rec[0].parse()?, rec[1].parse()?));
    }
    Ok(pairs)
}

#[derive(Serialize)]
struct MetricsJson<'a> {
    accuracy: f64,
    #[serde(rename = "macro")]
    macro_avg: &'a crate::metrics::Averaged,
    per_class: &'a BTreeMap<Class, crate::metrics::ClassMetrics>,
    confusion: ConfusionJson<'a>,
}

#[derive(Serialize)]
struct ConfusionJson<'a> {
    classes: [Class; 4],
    /// rows are truth, columns are predictions
    counts: &'a [[u64; 4]; 4],
}

pub fn encode_metrics(m: &ConfusionMatrix, s: &MetricsSummary) -> Result<Vec<u8>> {
    let json = MetricsJson {
        accuracy: s.accuracy,
        macro_avg: &s.macro_avg,
        per_class: &s.per_class,
        confusion: ConfusionJson {
            classes: Class::ALL,
            counts: &m.counts,
        },
    };
    let mut bytes =
        serde_json::to_vec_pretty(&json).map_err(|e| Error::Validation(e.to_string()))?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// Class given either by name or by logit index.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum ClassRef {
    Index(usize),
    Name(String),
}

impl ClassRef {
    fn resolve(&self) -> Result<Class> {
        match self {
            ClassRef::Index(i) => {
                Class::from_index(*i).ok_or_else(|| Error::UnknownClass(i.to_string()))
            }
            ClassRef::Name(s) => s.parse(),
        }
    }
}

#[derive(Debug, Deserialize)]
struct ManifestJson {
    scans: Vec<ManifestScanJson>,
}

#[derive(Debug, Deserialize)]
struct ManifestScanJson {
    #[serde(alias = "scan_id")]
    id: String,
    acts: PathBuf,
    grads: PathBuf,
    labels: PathBuf,
    predicted: ClassRef,
    #[serde(default)]
    truth: Option<ClassRef>,
    #[serde(default)]
    target: Option<usize>,
}

/// One exported scan. Paths are resolved against the manifest's directory.
#[derive(Debug, Clone, PartialEq)]
pub struct ManifestEntry {
    pub id: String,
    pub acts: PathBuf,
    pub grads: PathBuf,
    pub labels: PathBuf,
    pub predicted: Class,
    pub truth: Option<Class>,
    /// Logit index the gradients were taken against.
    pub target: Option<usize>,
}

pub fn decode_manifest(text: &str, base_dir: &Path) -> Result<Vec<ManifestEntry>> {
    let raw: ManifestJson =
        serde_json::from_str(text).map_err(|e| Error::Validation(format!("manifest: {e}")))?;
    raw.scans
        .into_iter()
        .map(|s| {
            Ok(ManifestEntry {
                predicted: s.predicted.resolve()?,
                truth: s.truth.as_ref().map(ClassRef::resolve).transpose()?,
                acts: base_dir.join(s.acts),
                grads: base_dir.join(s.grads),
                labels: base_dir.join(s.labels),
                target: s.target,
                id: s.id,
            })
        })
        .collect()
}

pub fn read_manifest(path: impl AsRef<Path>) -> Result<Vec<ManifestEntry>> {
    let path = path.as_ref();
    let text = read_file(path)?;
    decode_manifest(&text, path.parent().unwrap_or(Path::new(".")))
}
