//! Heatmap overlays on label maps or grayscale scans, written as binary PPM.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::heatmap::Saliency;
use crate::labelmap::LabelMap;
use crate::tensor::Tensor;

/// Display colors for labels 0..=8.
pub const LAYER_PALETTE: [[u8; 3]; 9] = [
    [0x1f, 0x1f, 0x1f], // RaR
    [0xe6, 0x19, 0x4b], // ILM
    [0xf5, 0x82, 0x31], // NFL-IPL
    [0xff, 0xe1, 0x19], // INL
    [0x3c, 0xb4, 0x4b], // OPL
    [0x42, 0xd4, 0xf4], // ONL-ISM
    [0x43, 0x63, 0xd8], // ISE
    [0x91, 0x1e, 0xb4], // OS-RPE
    [0x80, 0x80, 0x80], // RbR
];

/// Jet colormap on `[0, 1]`, channels in `[0, 255]` before rounding.
pub fn jet(v: f64) -> [f64; 3] {
    let x = v.clamp(0.0, 1.0);
    let ch = |center: f64| (1.5 - (4.0 * x - center).abs()).clamp(0.0, 1.0) * 255.0;
    [ch(3.0), ch(2.0), ch(1.0)]
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgbImage {
    pub width: usize,
    pub height: usize,
    /// Interleaved RGB, row-major.
    pub pixels: Vec<u8>,
}

impl RgbImage {
    pub fn pixel(&self, row: usize, col: usize) -> [u8; 3] {
        let i = 3 * (row * self.width + col);
        [self.pixels[i], self.pixels[i + 1], self.pixels[i + 2]]
    }

    pub fn encode_ppm(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.pixels);
        out
    }

    pub fn write_ppm(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.encode_ppm()).map_err(|e| Error::io(path, e))
    }
}

/// What the heatmap is drawn on top of.
#[derive(Debug, Clone, Copy)]
pub enum Base<'a> {
    Labels(&'a LabelMap),
    /// Rank-2 grayscale scan with intensities in `[0, 1]` (clamped).
    Scan(&'a Tensor),
}

impl Base<'_> {
    fn dims(&self) -> Result<(usize, usize)> {
        match self {
            Base::Labels(l) => Ok(l.dims()),
            Base::Scan(t) => t.dims2(),
        }
    }

    fn color(&self, index: usize) -> [u8; 3] {
        match self {
            Base::Labels(l) => LAYER_PALETTE[l.labels()[index] as usize],
            Base::Scan(t) => {
                let g = (f64::from(t.data()[index]).clamp(0.0, 1.0) * 255.0).round() as u8;
                [g, g, g]
            }
        }
    }
}

/// Renders the base alone, without any heatmap.
pub fn render_base(base: Base<'_>) -> Result<RgbImage> {
    let (height, width) = base.dims()?;
    let pixels = (0..height * width).flat_map(|i| base.color(i)).collect();
    Ok(RgbImage {
        width,
        height,
        pixels,
    })
}

/// Per pixel and channel: `(1 - alpha) * base + alpha * jet(saliency)`, rounded.
pub fn render_overlay(s: &Saliency, base: Base<'_>, alpha: f64) -> Result<RgbImage> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidArgument(format!(
            "alpha must lie in [0, 1], got {alpha}"
        )));
    }
    let (height, width) = base.dims()?;
    if s.dims() != (height, width) {
        return Err(Error::DimensionMismatch(format!(
            "saliency is {}x{} but base is {height}x{width}",
            s.height(),
            s.width()
        )));
    }
    let mut pixels = Vec::with_capacity(3 * height * width);
    for (i, &v) in s.values().iter().enumerate() {
        let under = base.color(i);
        let over = jet(v);
        for ch in 0..3 {
            let mixed = (1.0 - alpha) * f64::from(under[ch]) + alpha * over[ch];
            pixels.push(mixed.round().clamp(0.0, 255.0) as u8);
        }
    }
    Ok(RgbImage {
        width,
        height,
        pixels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inputs() -> (Saliency, LabelMap) {
        let l = LabelMap::new(3, 3, (0..9).collect()).unwrap();
        let s = Saliency::new(3, 3, (0..9).map(|i| i as f64 / 8.0).collect()).unwrap();
        (s, l)
    }

    #[test]
    fn alpha_zero_is_the_base() {
        let (s, l) = inputs();
        let img = render_overlay(&s, Base::Labels(&l), 0.0).unwrap();
        assert_eq!(img, render_base(Base::Labels(&l)).unwrap());
        assert_eq!(img.pixel(0, 1), LAYER_PALETTE[1]);
    }

    #[test]
    fn alpha_one_is_the_colormap() {
        let (s, l) = inputs();
        let img = render_overlay(&s, Base::Labels(&l), 1.0).unwrap();
        for (i, &v) in s.values().iter().enumerate() {
            let want = jet(v).map(|c| c.round() as u8);
            assert_eq!(img.pixel(i / 3, i % 3), want);
        }
        assert_eq!(img.pixel(0, 0), [0, 0, 128]);
        assert_eq!(img.pixel(2, 2), [128, 0, 0]);
    }

    #[test]
    fn zero_saliency_blends_uniformly() {
        let scan = Tensor::filled(vec![2, 2], 0.5).unwrap();
        let s = Saliency::zeros(2, 2).unwrap();
        let img = render_overlay(&s, Base::Scan(&scan), 0.5).unwrap();
        // gray 128 with jet(0) = (0, 0, 127.5)
        assert!(img.pixels.chunks(3).all(|p| p == [64, 64, 128]));
    }

    #[test]
    fn dimension_and_alpha_checks() {
        let (s, _) = inputs();
        let l = LabelMap::new(2, 2, vec![1; 4]).unwrap();
        assert!(matches!(
            render_overlay(&s, Base::Labels(&l), 0.5),
            Err(Error::DimensionMismatch(_))
        ));
        let (s, l) = inputs();
        assert!(render_overlay(&s, Base::Labels(&l), 1.5).is_err());
    }

    #[test]
    fn ppm_header() {
        let (s, l) = inputs();
        let bytes = render_overlay(&s, Base::Labels(&l), 0.5)
            .unwrap()
            .encode_ppm();
        assert!(bytes.starts_with(b"P6\n3 3\n255\n"));
        assert_eq!(bytes.len(), 11 + 27);
    }
}
