//! Retinal layer attribution.
//!
//! For each retinal layer `i` in ILM..OS-RPE the attribution is
//!
//! ```text
//! R_i = 100 * sum_{r,c} S[i,r,c] * H[r,c] / sum_{l=1..7} sum_{r,c} S[l,r,c] * H[r,c]
//! ```
//!
//! where `S` is the one-hot label map and `H` the saliency. Saliency falling on
//! the regions above (label 0) and below (label 8) the retina enters neither
//! the numerator nor the denominator.

use std::fmt;

use crate::error::{Error, Result};
use crate::heatmap::Saliency;
use crate::labelmap::{LabelMap, Layer};

/// Saliency mass per label, `0..=8`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayerMasses(pub [f64; 9]);

impl LayerMasses {
    pub fn get(&self, layer: Layer) -> f64 {
        self.0[layer as usize]
    }

    /// Denominator of the attribution formula: mass on labels 1..=7.
    pub fn retinal_total(&self) -> f64 {
        self.0[1..8].iter().sum()
    }
}

/// Percent focus on each of the seven retinal layers, ILM..OS-RPE.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayerAttribution(pub [f64; 7]);

impl LayerAttribution {
    /// Accepts any nonnegative 7-vector summing to 100 within `1e-6`.
    pub fn new(percent: [f64; 7]) -> Result<Self> {
        if let Some(i) = percent.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index: i });
        }
        if percent.iter().any(|&v| v < 0.0) {
            return Err(Error::Validation(format!(
                "attribution has a negative entry: {percent:?}"
            )));
        }
        let total: f64 = percent.iter().sum();
        if (total - 100.0).abs() > 1e-6 {
            return Err(Error::Validation(format!(
                "attribution sums to {total}, expected 100"
            )));
        }
        Ok(LayerAttribution(percent))
    }

    /// Wraps a 7-vector without the sum-to-100 check. Used for profile means
    /// and for values read back from rounded CSV files.
    pub fn from_raw(percent: [f64; 7]) -> Self {
        LayerAttribution(percent)
    }

    pub fn get(&self, layer: Layer) -> Option<f64> {
        layer.retinal_index().map(|i| self.0[i])
    }

    pub fn values(&self) -> &[f64; 7] {
        &self.0
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }

    /// Layer with the largest share; ties go to the upper layer.
    pub fn dominant(&self) -> Layer {
        let (i, _) = self
            .0
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, &v)| {
                if v > best.1 {
                    (i, v)
                } else {
                    best
                }
            });
        Layer::RETINAL[i]
    }
}

impl fmt::Display for LayerAttribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (layer, v)) in Layer::RETINAL.iter().zip(&self.0).enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{layer} {v:.2}%")?;
        }
        Ok(())
    }
}

fn check_dims(s: &Saliency, l: &LabelMap) -> Result<()> {
    if s.dims() != l.dims() {
        return Err(Error::DimensionMismatch(format!(
            "saliency is {}x{} but label map is {}x{}",
            s.height(),
            s.width(),
            l.height(),
            l.width()
        )));
    }
    Ok(())
}

pub fn layer_masses(s: &Saliency, l: &LabelMap) -> Result<LayerMasses> {
    check_dims(s, l)?;
    let mut m = [0.0f64; 9];
    for (&label, &h) in l.labels().iter().zip(s.values()) {
        m[label as usize] += h;
    }
    Ok(LayerMasses(m))
}

/// Converts per-label masses to retinal layer percentages.
pub fn attribution_from_masses(masses: &LayerMasses) -> Result<LayerAttribution> {
    let denom = masses.retinal_total();
    if denom <= 0.0 {
        return Err(Error::DegenerateExplanation);
    }
    let mut r = [0.0; 7];
    for (out, &m) in r.iter_mut().zip(&masses.0[1..8]) {
        *out = 100.0 * m / denom;
    }
    Ok(LayerAttribution(r))
}

/// Percent of retinal saliency mass on each layer. Dimensions must match.
pub fn layer_attribution(s: &Saliency, l: &LabelMap) -> Result<LayerAttribution> {
    attribution_from_masses(&layer_masses(s, l)?)
}

/// Like [`layer_attribution`], but first resamples the saliency to the label
/// map's grid when the two differ in size.
pub fn layer_attribution_at_label_resolution(
    s: &Saliency,
    l: &LabelMap,
) -> Result<LayerAttribution> {
    let aligned = s.resized(l.height(), l.width())?;
    layer_attribution(&aligned, l)
}
