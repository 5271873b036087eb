//! Literal loop transcriptions of the attribution and GradCAM formulas.
//!
//! These share no accumulation code with the fast paths in
//! [`crate::attribution`] and [`crate::gradcam`] and exist to check them.

use crate::attribution::LayerAttribution;
use crate::error::{Error, Result};
use crate::heatmap::{Heatmap, Saliency};
use crate::labelmap::{LabelMap, Layer};
use crate::tensor::Tensor;

/// `sum_{r,c} S[layer,r,c] * H[r,c]` by explicit row/column loops.
pub fn brute_force_mass(s: &Saliency, l: &LabelMap, layer: Layer) -> f64 {
    let mut total = 0.0;
    for r in 0..l.height() {
        for c in 0..l.width() {
            total += f64::from(l.indicator(layer, r, c)) * s.get(r, c);
        }
    }
    total
}

pub fn brute_force_attribution(s: &Saliency, l: &LabelMap) -> Result<LayerAttribution> {
    if s.height() != l.height() || s.width() != l.width() {
        return Err(Error::DimensionMismatch(format!(
            "saliency is {}x{} but label map is {}x{}",
            s.height(),
            s.width(),
            l.height(),
            l.width()
        )));
    }
    let mut denominator = 0.0;
    for label in 1..=7u8 {
        denominator += brute_force_mass(s, l, Layer::from_label(label).unwrap());
    }
    if denominator == 0.0 {
        return Err(Error::DegenerateExplanation);
    }
    let mut r = [0.0; 7];
    for i in 1..=7u8 {
        let numerator = brute_force_mass(s, l, Layer::from_label(i).unwrap());
        r[i as usize - 1] = 100.0 * numerator / denominator;
    }
    Ok(LayerAttribution::from_raw(r))
}

/// `max(0, sum_k alpha_k * A[r,c,k])` with `alpha_k` the spatial mean of
/// gradient channel `k`, by explicit index arithmetic.
pub fn brute_force_gradcam(acts: &Tensor, grads: &Tensor) -> Result<Heatmap> {
    let (&[ah, aw, ak], &[gh, gw, gk]) = (acts.shape(), grads.shape()) else {
        return Err(Error::InvalidShape(format!(
            "expected rank-3 activations and gradients, got {:?} and {:?}",
            acts.shape(),
            grads.shape()
        )));
    };
    if ak != gk {
        return Err(Error::DimensionMismatch(format!(
            "activations have {ak} channels, gradients {gk}"
        )));
    }
    let a = acts.data();
    let g = grads.data();
    let mut alpha = vec![0.0f64; gk];
    for (k, alpha_k) in alpha.iter_mut().enumerate() {
        let mut sum = 0.0f64;
        for r in 0..gh {
            for c in 0..gw {
                sum += f64::from(g[(r * gw + c) * gk + k]);
            }
        }
        *alpha_k = sum / (gh * gw) as f64;
    }
    let mut out = vec![0.0f64; ah * aw];
    for r in 0..ah {
        for c in 0..aw {
            let mut z = 0.0f64;
            for (k, alpha_k) in alpha.iter().enumerate() {
                z += alpha_k * f64::from(a[(r * aw + c) * ak + k]);
            }
            out[r * aw + c] = if z > 0.0 { z } else { 0.0 };
        }
    }
    Heatmap::new(ah, aw, out)
}
