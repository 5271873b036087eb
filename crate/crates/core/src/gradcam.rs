//! Gradient-weighted class activation maps from exported activations and
//! target-logit gradients.
//!
//! Both inputs are channel-last `Hc x Wc x K` tensors taken at the final
//! convolutional layer. The gradients are expected to be of the pre-softmax
//! logit for the target class; that provenance is the exporter's contract.

use crate::error::{Error, Result};
use crate::heatmap::{Heatmap, Saliency};
use crate::tensor::Tensor;

/// Per-channel importance, the spatial mean of each gradient channel.
#[derive(Debug, Clone, PartialEq)]
pub struct NeuronWeights {
    alpha: Vec<f64>,
}

impl NeuronWeights {
    pub fn new(alpha: Vec<f64>) -> Result<Self> {
        if alpha.is_empty() {
            return Err(Error::InvalidShape(
                "need at least one channel weight".into(),
            ));
        }
        if let Some(index) = alpha.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(NeuronWeights { alpha })
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn channels(&self) -> usize {
        self.alpha.len()
    }
}

pub fn neuron_weights(grads: &Tensor) -> Result<NeuronWeights> {
    let (h, w, k) = grads.dims3()?;
    let mut sums = vec![0.0f64; k];
    for pixel in grads.data().chunks_exact(k) {
        for (acc, &g) in sums.iter_mut().zip(pixel) {
            *acc += f64::from(g);
        }
    }
    let n = (h * w) as f64;
    NeuronWeights::new(sums.into_iter().map(|s| s / n).collect())
}

/// ReLU of the channel-weighted sum of activation maps, at feature-map resolution.
pub fn gradcam_coarse(acts: &Tensor, weights: &NeuronWeights) -> Result<Heatmap> {
    let (h, w, k) = acts.dims3()?;
    if k != weights.channels() {
        return Err(Error::DimensionMismatch(format!(
            "activations have {k} channels but {} weights were given",
            weights.channels()
        )));
    }
    let values = acts
        .data()
        .chunks_exact(k)
        .map(|pixel| {
            let z = pixel
                .iter()
                .zip(weights.alpha())
                .fold(0.0f64, |acc, (&a, &alpha)| acc + alpha * f64::from(a));
            z.max(0.0)
        })
        .collect();
    Heatmap::new(h, w, values)
}

/// Affine map of `m` onto `[0, 1]`. A constant map carries no localized
/// evidence and becomes all zeros.
pub fn normalize_minmax(m: &Heatmap) -> Result<Saliency> {
    let (h, w) = m.dims();
    let (lo, hi) = m.min_max();
    let span = hi - lo;
    let values = if span > 0.0 {
        m.values().iter().map(|&v| (v - lo) / span).collect()
    } else {
        vec![0.0; h * w]
    };
    Saliency::new(h, w, values)
}

/// Full pipeline: pooled weights, weighted ReLU combination, bilinear upsampling
/// to `out_h x out_w`, then min-max normalization.
pub fn compute_saliency(
    acts: &Tensor,
    grads: &Tensor,
    out_h: usize,
    out_w: usize,
) -> Result<Saliency> {
    if acts.shape() != grads.shape() {
        return Err(Error::DimensionMismatch(format!(
            "activations {:?} and gradients {:?} differ in shape",
            acts.shape(),
            grads.shape()
        )));
    }
    let weights = neuron_weights(grads)?;
    let coarse = gradcam_coarse(acts, &weights)?;
    normalize_minmax(&coarse.resized(out_h, out_w)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t3(h: usize, w: usize, k: usize, data: Vec<f32>) -> Tensor {
        Tensor::new(vec![h, w, k], data).unwrap()
    }

    #[test]
    fn weights_of_ones_are_ones() {
        let g = Tensor::filled(vec![3, 5, 4], 1.0).unwrap();
        assert_eq!(neuron_weights(&g).unwrap().alpha(), &[1.0; 4]);
    }

    #[test]
    fn weights_are_spatial_means() {
        let g = t3(2, 2, 1, vec![1.0, 2.0, 3.0, 4.0]);
        assert_eq!(neuron_weights(&g).unwrap().alpha(), &[2.5]);
    }

    #[test]
    fn weights_match_per_channel_loop() {
        // 3x3x4, values i*0.25 - 4 in channel-last order
        let data: Vec<f32> = (0..36).map(|i| i as f32 * 0.25 - 4.0).collect();
        let g = t3(3, 3, 4, data.clone());
        let mut expected = [0.0f64; 4];
        for k in 0..4 {
            for p in 0..9 {
                expected[k] += f64::from(data[p * 4 + k]);
            }
            expected[k] /= 9.0;
        }
        // channel k averages (4p + k) * 0.25 - 4 over p = 0..8, i.e. k / 4
        assert_eq!(expected, [0.0, 0.25, 0.5, 0.75]);
        assert_eq!(neuron_weights(&g).unwrap().alpha(), &expected);
    }

    #[test]
    fn wrong_rank_is_rejected() {
        let g = Tensor::filled(vec![4, 4], 1.0).unwrap();
        assert!(matches!(neuron_weights(&g), Err(Error::InvalidShape(_))));
    }

    #[test]
    fn coarse_identity_and_relu() {
        let a = Tensor::filled(vec![2, 3, 1], 1.0).unwrap();
        let one = NeuronWeights::new(vec![1.0]).unwrap();
        assert!(gradcam_coarse(&a, &one)
            .unwrap()
            .values()
            .iter()
            .all(|&v| v == 1.0));
        let neg = NeuronWeights::new(vec![-1.0]).unwrap();
        assert!(gradcam_coarse(&a, &neg)
            .unwrap()
            .values()
            .iter()
            .all(|&v| v == 0.0));
    }

    #[test]
    fn coarse_two_channel_by_hand() {
        // pixel (r,c) holds [a0, a1]; out = max(0, 0.5*a0 + 2*a1)
        let a = t3(2, 2, 2, vec![1.0, 0.5, -4.0, 1.0, 2.0, -2.0, 0.0, 0.25]);
        let w = NeuronWeights::new(vec![0.5, 2.0]).unwrap();
        let out = gradcam_coarse(&a, &w).unwrap();
        assert_eq!(out.values(), &[1.5, 0.0, 0.0, 0.5]);
    }

    #[test]
    fn coarse_channel_mismatch() {
        let a = Tensor::filled(vec![2, 2, 3], 1.0).unwrap();
        let w = NeuronWeights::new(vec![1.0, 1.0]).unwrap();
        assert!(matches!(
            gradcam_coarse(&a, &w),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn normalize_affine_and_constant() {
        let m = Heatmap::new(2, 2, vec![0.0, 2.0, 4.0, 8.0]).unwrap();
        assert_eq!(
            normalize_minmax(&m).unwrap().values(),
            &[0.0, 0.25, 0.5, 1.0]
        );
        let c = Heatmap::new(2, 2, vec![3.0; 4]).unwrap();
        assert_eq!(normalize_minmax(&c).unwrap().values(), &[0.0; 4]);
    }

    #[test]
    fn normalize_ignores_positive_scale() {
        let m = Heatmap::new(1, 4, vec![0.0, 2.0, 4.0, 8.0]).unwrap();
        let scaled = Heatmap::new(1, 4, m.values().iter().map(|v| v * 3.5).collect()).unwrap();
        assert_eq!(
            normalize_minmax(&m).unwrap(),
            normalize_minmax(&scaled).unwrap()
        );
    }

    #[test]
    fn all_ones_collapse_to_zero_saliency() {
        let a = Tensor::filled(vec![4, 4, 3], 1.0).unwrap();
        let s = compute_saliency(&a, &a, 16, 16).unwrap();
        assert_eq!(s.dims(), (16, 16));
        assert!(s.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn single_hot_cell_localizes() {
        // 4x4 coarse grid, one channel, hot cell at (1, 2); upsampled x8
        let mut data = vec![0.0f32; 16];
        data[4 + 2] = 1.0;
        let acts = t3(4, 4, 1, data);
        let grads = Tensor::filled(vec![4, 4, 1], 0.5).unwrap();
        let s = compute_saliency(&acts, &grads, 32, 32).unwrap();
        let (argmax, _) = s
            .values()
            .iter()
            .enumerate()
            .fold(
                (0, f64::MIN),
                |best, (i, &v)| if v > best.1 { (i, v) } else { best },
            );
        let (r, c) = (argmax / 32, argmax % 32);
        assert!(
            (8..16).contains(&r) && (16..24).contains(&c),
            "argmax at ({r}, {c})"
        );
        assert_eq!(s.get(r, c), 1.0);
    }

    #[test]
    fn mismatched_acts_and_grads() {
        let a = Tensor::filled(vec![2, 2, 3], 1.0).unwrap();
        let g = Tensor::filled(vec![2, 2, 2], 1.0).unwrap();
        assert!(matches!(
            compute_saliency(&a, &g, 4, 4),
            Err(Error::DimensionMismatch(_))
        ));
    }
}
