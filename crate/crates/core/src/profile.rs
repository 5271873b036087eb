//! Per-class attribution profiles and deviation scoring.
//!
//! A profile holds, for one predicted class, the mean and spread of each
//! retinal layer's attribution over correctly classified scans. A new
//! explanation is scored against the profile of its *predicted* class; layers
//! that sit too many standard deviations from the profile mean mark the
//! prediction as suspicious.

use std::collections::BTreeMap;

use log::warn;

use crate::attribution::LayerAttribution;
use crate::class::Class;
use crate::error::{Error, Result};
use crate::labelmap::Layer;

pub const DEFAULT_FLAG_THRESHOLD: f64 = 3.0;

#[derive(Debug, Clone, PartialEq)]
pub struct AttributionRecord {
    pub scan_id: String,
    pub predicted: Class,
    pub truth: Option<Class>,
    pub attribution: LayerAttribution,
}

impl AttributionRecord {
    pub fn is_correct(&self) -> bool {
        self.truth == Some(self.predicted)
    }
}

/// Denominator used for the standard deviation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum StdKind {
    /// `n - 1`
    #[default]
    Sample,
    /// `n`
    Population,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassProfile {
    pub class: Class,
    pub mean: [f64; 7],
    pub std: [f64; 7],
    pub n: usize,
}

impl ClassProfile {
    pub fn new(class: Class, mean: [f64; 7], std: [f64; 7], n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Validation(format!(
                "profile for {class} needs at least 2 samples, got {n}"
            )));
        }
        if mean.iter().chain(&std).any(|v| !v.is_finite()) {
            return Err(Error::Validation(format!(
                "profile for {class} is not finite"
            )));
        }
        if std.iter().any(|&s| s < 0.0) {
            return Err(Error::Validation(format!(
                "profile for {class} has a negative standard deviation"
            )));
        }
        Ok(ClassProfile {
            class,
            mean,
            std,
            n,
        })
    }

    /// Mean and standard deviation of each layer over `samples`.
    pub fn from_samples(class: Class, samples: &[[f64; 7]], kind: StdKind) -> Result<Self> {
        let n = samples.len();
        if n < 2 {
            return Err(Error::Validation(format!(
                "profile for {class} needs at least 2 samples, got {n}"
            )));
        }
        let mut mean = [0.0; 7];
        let mut std = [0.0; 7];
        for layer in 0..7 {
            // shifted by the first sample so identical inputs give an exact mean
            let pivot = samples[0][layer];
            let offset: f64 = samples.iter().map(|s| s[layer] - pivot).sum::<f64>() / n as f64;
            let m = pivot + offset;
            let ss: f64 = samples.iter().map(|s| (s[layer] - m).powi(2)).sum();
            let dof = match kind {
                StdKind::Sample => n - 1,
                StdKind::Population => n,
            };
            mean[layer] = m;
            std[layer] = (ss / dof as f64).sqrt();
        }
        ClassProfile::new(class, mean, std, n)
    }
}

/// Profiles keyed by class, plus classes that had too few correct records.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ProfileSet {
    pub profiles: BTreeMap<Class, ClassProfile>,
    /// `(class, correct record count)` for every class left out.
    pub skipped: Vec<(Class, usize)>,
}

impl ProfileSet {
    pub fn get(&self, class: Class) -> Option<&ClassProfile> {
        self.profiles.get(&class)
    }
}

/// Builds a profile per class from the records whose prediction matches their
/// ground truth. Every record must carry a truth label.
pub fn build_profiles(records: &[AttributionRecord], kind: StdKind) -> Result<ProfileSet> {
    let mut by_class: BTreeMap<Class, Vec<[f64; 7]>> = BTreeMap::new();
    let mut seen: Vec<Class> = Vec::new();
    for rec in records {
        let truth = rec.truth.ok_or_else(|| {
            Error::Validation(format!("record {:?} has no truth label", rec.scan_id))
        })?;
        seen.extend([truth, rec.predicted]);
        if rec.is_correct() {
            by_class
                .entry(truth)
                .or_default()
                .push(*rec.attribution.values());
        }
    }
    seen.sort();
    seen.dedup();

    let mut set = ProfileSet::default();
    for class in seen {
        let samples = by_class.get(&class).map_or(&[][..], Vec::as_slice);
        if samples.len() < 2 {
            set.skipped.push((class, samples.len()));
            continue;
        }
        set.profiles
            .insert(class, ClassProfile::from_samples(class, samples, kind)?);
    }
    if !set.skipped.is_empty() {
        let listed: Vec<String> = set
            .skipped
            .iter()
            .map(|(c, n)| format!("{c} ({n} correct)"))
            .collect();
        warn!(
            "omitting classes with fewer than 2 correct records: {}",
            listed.join(", ")
        );
    }
    Ok(set)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayerDeviation {
    pub layer: Layer,
    pub observed: f64,
    pub mean: f64,
    pub std: f64,
    pub difference: f64,
    /// `None` when the profile has zero spread on this layer.
    pub z: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeviationReport {
    pub class: Class,
    pub layers: [LayerDeviation; 7],
}

pub fn deviation_report(observed: &LayerAttribution, profile: &ClassProfile) -> DeviationReport {
    let layers = std::array::from_fn(|i| {
        let obs = observed.values()[i];
        let difference = obs - profile.mean[i];
        let std = profile.std[i];
        LayerDeviation {
            layer: Layer::RETINAL[i],
            observed: obs,
            mean: profile.mean[i],
            std,
            difference,
            z: (std > 0.0).then(|| difference / std),
        }
    });
    DeviationReport {
        class: profile.class,
        layers,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlagDecision {
    pub suspicious: bool,
    /// Largest defined `|z|`; infinite when a zero-spread layer deviates.
    pub max_abs_z: f64,
    pub offending_layers: Vec<Layer>,
}

impl LayerDeviation {
    /// Whether this layer alone trips the given threshold.
    pub fn exceeds(&self, threshold: f64) -> bool {
        match self.z {
            Some(z) => z.abs() >= threshold,
            None => self.difference != 0.0,
        }
    }
}

pub fn flag(report: &DeviationReport, threshold: f64) -> Result<FlagDecision> {
    if threshold.is_nan() || threshold <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "flag threshold must be positive, got {threshold}"
        )));
    }
    let offending_layers: Vec<Layer> = report
        .layers
        .iter()
        .filter(|d| d.exceeds(threshold))
        .map(|d| d.layer)
        .collect();
    let max_abs_z = report.layers.iter().fold(0.0f64, |acc, d| match d.z {
        Some(z) => acc.max(z.abs()),
        None if d.difference != 0.0 => f64::INFINITY,
        None => acc,
    });
    Ok(FlagDecision {
        suspicious: !offending_layers.is_empty(),
        max_abs_z,
        offending_layers,
    })
}
