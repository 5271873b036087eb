//! Two-dimensional `f64` maps: unnormalized heatmaps and saliency maps.

use crate::error::{Error, Result};
use crate::resize::resample;
use crate::tensor::Tensor;

fn check_grid(height: usize, width: usize, values: &[f64]) -> Result<()> {
    if height == 0 || width == 0 {
        return Err(Error::InvalidShape(format!(
            "map must be non-empty, got {height}x{width}"
        )));
    }
    if values.len() != height * width {
        return Err(Error::InvalidShape(format!(
            "{height}x{width} map needs {} values, got {}",
            height * width,
            values.len()
        )));
    }
    if let Some(index) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { index });
    }
    Ok(())
}

/// Row-major grid of finite values, any sign.
#[derive(Debug, Clone, PartialEq)]
pub struct Heatmap {
    height: usize,
    width: usize,
    values: Vec<f64>,
}

impl Heatmap {
    pub fn new(height: usize, width: usize, values: Vec<f64>) -> Result<Self> {
        check_grid(height, width, &values)?;
        Ok(Heatmap {
            height,
            width,
            values,
        })
    }

    pub fn from_tensor(t: &Tensor) -> Result<Self> {
        let (h, w) = t.dims2()?;
        Heatmap::new(h, w, t.data().iter().map(|&v| f64::from(v)).collect())
    }

    pub fn to_tensor(&self) -> Result<Tensor> {
        Tensor::from_f64_grid(self.height, self.width, &self.values)
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.height, self.width)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.width + col]
    }

    pub fn resized(&self, out_h: usize, out_w: usize) -> Result<Heatmap> {
        let values = resample(&self.values, self.height, self.width, out_h, out_w)?;
        Heatmap::new(out_h, out_w, values)
    }

    pub fn min_max(&self) -> (f64, f64) {
        self.values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            })
    }
}

/// Nonnegative saliency over an image grid, the `H` term of the layer
/// attribution formula.
///
/// Maps produced by [`crate::gradcam::normalize_minmax`] additionally lie in
/// `[0, 1]`; externally produced maps (attention rollouts, rescaled copies)
/// only need to be finite and nonnegative.
#[derive(Debug, Clone, PartialEq)]
pub struct Saliency {
    height: usize,
    width: usize,
    values: Vec<f64>,
}

impl Saliency {
    pub fn new(height: usize, width: usize, values: Vec<f64>) -> Result<Self> {
        check_grid(height, width, &values)?;
        if let Some(index) = values.iter().position(|&v| v < 0.0) {
            return Err(Error::Validation(format!(
                "saliency must be nonnegative, found {} at element {index}",
                values[index]
            )));
        }
        Ok(Saliency {
            height,
            width,
            values,
        })
    }

    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        let width = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != width) {
            return Err(Error::InvalidShape("ragged saliency rows".into()));
        }
        Saliency::new(rows.len(), width, rows.concat())
    }

    pub fn zeros(height: usize, width: usize) -> Result<Self> {
        Saliency::new(height, width, vec![0.0; height * width])
    }

    pub fn from_tensor(t: &Tensor) -> Result<Self> {
        let (h, w) = t.dims2()?;
        Saliency::new(h, w, t.data().iter().map(|&v| f64::from(v)).collect())
    }

    pub fn to_tensor(&self) -> Result<Tensor> {
        Tensor::from_f64_grid(self.height, self.width, &self.values)
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.height, self.width)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.width + col]
    }

    pub fn is_unit_range(&self) -> bool {
        self.values.iter().all(|&v| v <= 1.0)
    }

    /// Multiplies every value by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Result<Saliency> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "scale factor must be positive and finite, got {factor}"
            )));
        }
        Saliency::new(
            self.height,
            self.width,
            self.values.iter().map(|v| v * factor).collect(),
        )
    }

    /// Returns a copy with `f(index, value)` applied to every element.
    pub fn map_indexed(&self, mut f: impl FnMut(usize, f64) -> f64) -> Result<Saliency> {
        Saliency::new(
            self.height,
            self.width,
            self.values
                .iter()
                .enumerate()
                .map(|(i, &v)| f(i, v))
                .collect(),
        )
    }

    /// Bilinear resample; returns `self` unchanged when the size already matches.
    pub fn resized(&self, out_h: usize, out_w: usize) -> Result<Saliency> {
        if (out_h, out_w) == self.dims() {
            return Ok(self.clone());
        }
        let values = resample(&self.values, self.height, self.width, out_h, out_w)?;
        Saliency::new(out_h, out_w, values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_negative_and_non_finite() {
        assert!(Saliency::new(1, 2, vec![0.5, -0.1]).is_err());
        assert!(matches!(
            Saliency::new(1, 2, vec![0.5, f64::NAN]),
            Err(Error::NonFinite { index: 1 })
        ));
        assert!(Heatmap::new(1, 2, vec![-3.0, 2.0]).is_ok());
    }

    #[test]
    fn scaling_requires_positive_factor() {
        let s = Saliency::zeros(2, 2).unwrap();
        assert!(s.scaled(0.0).is_err());
        assert!(s.scaled(-1.0).is_err());
        assert!(s.scaled(2.0).is_ok());
    }

    #[test]
    fn tensor_conversion_round_trips_f32_values() {
        let t = Tensor::new(vec![2, 2], vec![0.0, 0.125, 0.5, 1.0]).unwrap();
        let s = Saliency::from_tensor(&t).unwrap();
        assert_eq!(s.to_tensor().unwrap(), t);
    }
}
