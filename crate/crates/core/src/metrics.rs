//! Four-class confusion matrix and the usual summary metrics.

use std::collections::BTreeMap;

use log::warn;
use serde::Serialize;

use crate::class::Class;
use crate::error::{Error, Result};

/// `counts[truth][predicted]`, classes in [`Class::ALL`] order.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ConfusionMatrix {
    pub counts: [[u64; 4]; 4],
}

impl ConfusionMatrix {
    pub fn get(&self, truth: Class, predicted: Class) -> u64 {
        self.counts[truth.index()][predicted.index()]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..4).map(|i| self.counts[i][i]).sum()
    }

    pub fn row_sum(&self, truth: Class) -> u64 {
        self.counts[truth.index()].iter().sum()
    }

    pub fn col_sum(&self, predicted: Class) -> u64 {
        self.counts.iter().map(|row| row[predicted.index()]).sum()
    }
}

pub fn confusion<I>(pairs: I) -> Result<ConfusionMatrix>
where
    I: IntoIterator<Item = (Class, Class)>,
{
    let mut m = ConfusionMatrix::default();
    for (truth, predicted) in pairs {
        m.counts[truth.index()][predicted.index()] += 1;
    }
    if m.total() == 0 {
        return Err(Error::InvalidArgument(
            "confusion matrix needs at least one pair".into(),
        ));
    }
    Ok(m)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Averaged {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsSummary {
    pub accuracy: f64,
    pub per_class: BTreeMap<Class, ClassMetrics>,
    pub macro_avg: Averaged,
}

fn ratio(num: u64, den: u64, what: &str, class: Class) -> f64 {
    if den == 0 {
        warn!("{what} undefined for {class} (no samples); counted as 0");
        0.0
    } else {
        num as f64 / den as f64
    }
}

pub fn metrics(m: &ConfusionMatrix) -> Result<MetricsSummary> {
    let total = m.total();
    if total == 0 {
        return Err(Error::InvalidArgument("empty confusion matrix".into()));
    }
    let per_class: BTreeMap<Class, ClassMetrics> = Class::ALL
        .into_iter()
        .map(|c| {
            let tp = m.get(c, c);
            let precision = ratio(tp, m.col_sum(c), "precision", c);
            let recall = ratio(tp, m.row_sum(c), "recall", c);
            let f1 = if precision + recall > 0.0 {
                2.0 * precision * recall / (precision + recall)
            } else {
                0.0
            };
            (
                c,
                ClassMetrics {
                    precision,
                    recall,
                    f1,
                    support: m.row_sum(c),
                },
            )
        })
        .collect();
    let n = per_class.len() as f64;
    let macro_avg = Averaged {
        precision: per_class.values().map(|c| c.precision).sum::<f64>() / n,
        recall: per_class.values().map(|c| c.recall).sum::<f64>() / n,
        f1: per_class.values().map(|c| c.f1).sum::<f64>() / n,
    };
    Ok(MetricsSummary {
        accuracy: m.trace() as f64 / total as f64,
        per_class,
        macro_avg,
    })
}
