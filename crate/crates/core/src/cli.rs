//! The `relax` command line. Every subcommand reads files, calls into the
//! library, and writes one output file.
//!
//! Exit codes: 0 on success, 1 on validation errors (including bad arguments),
//! 2 on I/O errors.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{info, warn};
use rayon::prelude::*;

use crate::attribution::layer_attribution_at_label_resolution;
use crate::class::Class;
use crate::error::{Error, Result};
use crate::formats::{self, AttributionRow, ScoredScan};
use crate::gradcam::compute_saliency;
use crate::heatmap::Saliency;
use crate::histogram::deviation_histogram;
use crate::labelmap::{read_labelmap, write_labelmap, Layer};
use crate::metrics::{confusion, metrics};
use crate::overlay::{render_overlay, Base};
use crate::profile::{build_profiles, deviation_report, flag, StdKind};
use crate::synth::{generate, SynthSpec};
use crate::tensor::{read_tensor, write_tensor};

#[derive(Debug, Parser)]
#[command(name = "relax", version, about = "Retinal layer attribution toolkit")]
pub struct Cli {
    /// Worker threads for batch commands (default: one per core).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-layer attribution for every `<id>.rlt` saliency with a matching `<id>.pgm` label map.
    Attribute(AttributeArgs),
    /// Build per-class mean/std profiles from correctly classified records.
    Profile(ProfileArgs),
    /// Score records against class profiles and flag suspicious explanations.
    Score(ScoreArgs),
    /// Histogram of deviation values from a score file.
    Histogram(HistogramArgs),
    /// Render a saliency heatmap over a label map or grayscale scan.
    Overlay(OverlayArgs),
    /// Confusion matrix, accuracy, precision, recall and F1 from label pairs.
    Metrics(MetricsArgs),
    /// Saliency map from exported activations and gradients.
    Gradcam(GradcamArgs),
    /// Write seeded synthetic saliency/label-map pairs.
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
pub struct AttributeArgs {
    #[arg(long)]
    pub saliency_dir: PathBuf,
    #[arg(long)]
    pub labels_dir: PathBuf,
    /// Export manifest supplying predicted and true classes per scan id.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum StdArg {
    Sample,
    Population,
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    #[arg(long)]
    pub records: PathBuf,
    #[arg(long, value_enum, default_value = "sample")]
    pub std: StdArg,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    #[arg(long)]
    pub records: PathBuf,
    #[arg(long)]
    pub profiles: PathBuf,
    #[arg(long, default_value_t = crate::profile::DEFAULT_FLAG_THRESHOLD)]
    pub threshold: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct HistogramArgs {
    #[arg(long)]
    pub scores: PathBuf,
    #[arg(long, default_value_t = crate::histogram::DEFAULT_BIN_WIDTH)]
    pub bin_width: f64,
    /// Only count rows for this layer (e.g. ILM, ONL-ISM).
    #[arg(long)]
    pub layer: Option<String>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct OverlayArgs {
    #[arg(long)]
    pub saliency: PathBuf,
    /// Label map to draw under the heatmap.
    #[arg(long, conflicts_with = "scan", required_unless_present = "scan")]
    pub labels: Option<PathBuf>,
    /// Rank-2 grayscale scan (values in [0, 1]) to draw under the heatmap.
    #[arg(long)]
    pub scan: Option<PathBuf>,
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct MetricsArgs {
    #[arg(long)]
    pub pairs: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct GradcamArgs {
    #[arg(long)]
    pub acts: PathBuf,
    #[arg(long)]
    pub grads: PathBuf,
    #[arg(long)]
    pub height: usize,
    #[arg(long)]
    pub width: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 36)]
    pub height: usize,
    #[arg(long, default_value_t = 36)]
    pub width: usize,
    /// Nine comma-separated band heights, top to bottom (default: equal bands).
    #[arg(long, value_delimiter = ',', num_args = 9)]
    pub bands: Option<Vec<usize>>,
    /// Gaussian blobs per scan.
    #[arg(long, default_value_t = 2)]
    pub blobs: usize,
    /// Number of scans; scan `i` uses seed `seed + i`.
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    /// Receives `saliency/<id>.rlt` and `labels/<id>.pgm`.
    #[arg(long)]
    pub out_dir: PathBuf,
}

/// Parses `args` (including the program name) and runs the command, returning
/// the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cli: &Cli) -> Result<()> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.jobs {
        if n == 0 {
            return Err(Error::InvalidArgument("--jobs must be at least 1".into()));
        }
        pool = pool.num_threads(n);
    }
    let pool = pool
        .build()
        .map_err(|e| Error::Validation(format!("thread pool: {e}")))?;
    pool.install(|| match &cli.command {
        Command::Attribute(a) => attribute(a),
        Command::Profile(a) => profile(a),
        Command::Score(a) => score(a),
        Command::Histogram(a) => histogram(a),
        Command::Overlay(a) => overlay(a),
        Command::Metrics(a) => metrics_cmd(a),
        Command::Gradcam(a) => gradcam(a),
        Command::Synth(a) => synth(a),
    })
}

fn scan_ids(dir: &Path, extension: &str) -> Result<Vec<String>> {
    let mut ids = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        if path.extension().is_some_and(|e| e == extension) {
            if let Some(stem) = path.file_stem().and_then(|s| s.to_str()) {
                ids.push(stem.to_string());
            }
        }
    }
    ids.sort();
    Ok(ids)
}

fn attribute(a: &AttributeArgs) -> Result<()> {
    let ids = scan_ids(&a.saliency_dir, "rlt")?;
    let classes: std::collections::HashMap<String, (Class, Option<Class>)> = match &a.manifest {
        Some(path) => formats::read_manifest(path)?
            .into_iter()
            .map(|e| (e.id, (e.predicted, e.truth)))
            .collect(),
        None => Default::default(),
    };
    let rows: Vec<AttributionRow> = ids
        .par_iter()
        .map(|id| {
            let one = || -> Result<AttributionRow> {
                let s =
                    Saliency::from_tensor(&read_tensor(a.saliency_dir.join(format!("{id}.rlt")))?)?;
                let l = read_labelmap(a.labels_dir.join(format!("{id}.pgm")))?;
                let (predicted, truth) = match classes.get(id) {
                    Some(&(p, t)) => (Some(p), t),
                    None => (None, None),
                };
                Ok(AttributionRow {
                    scan_id: id.clone(),
                    predicted,
                    truth,
                    attribution: layer_attribution_at_label_resolution(&s, &l)?,
                })
            };
            one().map_err(|e| e.in_scan(id.as_str()))
        })
        .collect::<Result<_>>()?;
    if a.manifest.is_some() {
        let missing = rows.iter().filter(|r| r.predicted.is_none()).count();
        if missing > 0 {
            warn!("{missing} scans not listed in the manifest; class columns left blank");
        }
    }
    info!("attributed {} scans", rows.len());
    formats::write_attributions(&a.out, &rows)
}

fn profile(a: &ProfileArgs) -> Result<()> {
    let records = formats::read_records(&a.records)?;
    let kind = match a.std {
        StdArg::Sample => StdKind::Sample,
        StdArg::Population => StdKind::Population,
    };
    let set = build_profiles(&records, kind)?;
    for (class, p) in &set.profiles {
        info!("{class}: {} correct records", p.n);
    }
    formats::write_profiles(&a.out, &set)
}

fn score(a: &ScoreArgs) -> Result<()> {
    let records = formats::read_records(&a.records)?;
    let profiles = formats::read_profiles(&a.profiles)?;
    let scored: Vec<(ScoredScan, bool)> = records
        .par_iter()
        .map(|rec| {
            let p = profiles.get(rec.predicted).ok_or_else(|| {
                Error::Validation(format!("no profile for predicted class {}", rec.predicted))
                    .in_scan(rec.scan_id.as_str())
            })?;
            let report = deviation_report(&rec.attribution, p);
            let decision = flag(&report, a.threshold)?;
            Ok((
                ScoredScan {
                    scan_id: rec.scan_id.clone(),
                    report,
                    threshold: a.threshold,
                },
                decision.suspicious,
            ))
        })
        .collect::<Result<_>>()?;
    let suspicious = scored.iter().filter(|(_, s)| *s).count();
    info!(
        "{suspicious} of {} scans flagged at |z| >= {}",
        scored.len(),
        a.threshold
    );
    let scans: Vec<ScoredScan> = scored.into_iter().map(|(s, _)| s).collect();
    formats::write_scores(&a.out, &scans)
}

fn histogram(a: &HistogramArgs) -> Result<()> {
    let layer: Option<Layer> = a.layer.as_deref().map(str::parse).transpose()?;
    let diffs: Vec<f64> = formats::read_scores(&a.scores)?
        .into_iter()
        .filter(|r| layer.is_none_or(|l| r.layer == l))
        .map(|r| r.difference)
        .collect();
    let h = deviation_histogram(&diffs, a.bin_width)?;
    formats::write_histogram(&a.out, &h)
}

fn overlay(a: &OverlayArgs) -> Result<()> {
    let s = Saliency::from_tensor(&read_tensor(&a.saliency)?)?;
    let image = match (&a.labels, &a.scan) {
        (Some(path), _) => render_overlay(&s, Base::Labels(&read_labelmap(path)?), a.alpha)?,
        (None, Some(path)) => render_overlay(&s, Base::Scan(&read_tensor(path)?), a.alpha)?,
        (None, None) => {
            return Err(Error::InvalidArgument("need --labels or --scan".into()));
        }
    };
    image.write_ppm(&a.out)
}

fn metrics_cmd(a: &MetricsArgs) -> Result<()> {
    let m = confusion(formats::read_pairs(&a.pairs)?)?;
    let s = metrics(&m)?;
    info!("accuracy {:.4} over {} pairs", s.accuracy, m.total());
    let bytes = formats::encode_metrics(&m, &s)?;
    fs::write(&a.out, bytes).map_err(|e| Error::io(&a.out, e))
}

fn gradcam(a: &GradcamArgs) -> Result<()> {
    let acts = read_tensor(&a.acts)?;
    let grads = read_tensor(&a.grads)?;
    let s = compute_saliency(&acts, &grads, a.height, a.width)?;
    write_tensor(&s.to_tensor()?, &a.out)
}

fn synth(a: &SynthArgs) -> Result<()> {
    let bands: [usize; 9] = match &a.bands {
        Some(v) => v.as_slice().try_into().map_err(|_| {
            Error::InvalidArgument(format!("--bands needs 9 values, got {}", v.len()))
        })?,
        None => SynthSpec::equal_bands(a.height),
    };
    let sal_dir = a.out_dir.join("saliency");
    let lab_dir = a.out_dir.join("labels");
    for dir in [&sal_dir, &lab_dir] {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    for i in 0..a.count {
        let id = format!("synth_{i:04}");
        let spec = SynthSpec::random(
            a.height,
            a.width,
            bands,
            a.blobs,
            a.seed.wrapping_add(i as u64),
        );
        let (s, l) = generate(&spec)?;
        write_tensor(&s.to_tensor()?, sal_dir.join(format!("{id}.rlt")))?;
        write_labelmap(&l, lab_dir.join(format!("{id}.pgm")))?;
    }
    Ok(())
}
