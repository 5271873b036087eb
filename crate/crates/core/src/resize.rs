//! Bilinear resampling with half-pixel centers.
//!
//! Output pixel `d` samples source coordinate `(d + 0.5) * (in / out) - 0.5`,
//! clamped to `[0, in - 1]`. The result at each pixel is a convex combination
//! of its four neighbours, so the output range never exceeds the input range.

use crate::error::{Error, Result};
use crate::tensor::Tensor;

#[derive(Debug, Clone, Copy)]
struct Tap {
    lo: usize,
    hi: usize,
    frac: f64,
}

fn taps(src_len: usize, dst_len: usize) -> Vec<Tap> {
    let scale = src_len as f64 / dst_len as f64;
    let max = (src_len - 1) as f64;
    (0..dst_len)
        .map(|d| {
            let x = ((d as f64 + 0.5) * scale - 0.5).clamp(0.0, max);
            let lo = x.floor() as usize;
            Tap {
                lo,
                hi: (lo + 1).min(src_len - 1),
                frac: x - lo as f64,
            }
        })
        .collect()
}

fn lerp(a: f64, b: f64, t: f64) -> f64 {
    (a + (b - a) * t).clamp(a.min(b), a.max(b))
}

/// Resamples a row-major `height x width` grid to `out_h x out_w`.
pub fn resample(
    src: &[f64],
    height: usize,
    width: usize,
    out_h: usize,
    out_w: usize,
) -> Result<Vec<f64>> {
    if height == 0 || width == 0 || out_h == 0 || out_w == 0 {
        return Err(Error::InvalidShape(format!(
            "cannot resize {height}x{width} to {out_h}x{out_w}"
        )));
    }
    if src.len() != height * width {
        return Err(Error::InvalidShape(format!(
            "grid of {} values is not {height}x{width}",
            src.len()
        )));
    }
    let rows = taps(height, out_h);
    let cols = taps(width, out_w);
    let mut out = Vec::with_capacity(out_h * out_w);
    for ry in &rows {
        let top = &src[ry.lo * width..(ry.lo + 1) * width];
        let bottom = &src[ry.hi * width..(ry.hi + 1) * width];
        for cx in &cols {
            let upper = lerp(top[cx.lo], top[cx.hi], cx.frac);
            let lower = lerp(bottom[cx.lo], bottom[cx.hi], cx.frac);
            out.push(lerp(upper, lower, ry.frac));
        }
    }
    Ok(out)
}

/// Bilinear resize of a rank-2 tensor.
pub fn resize_bilinear(t: &Tensor, out_h: usize, out_w: usize) -> Result<Tensor> {
    let (h, w) = t.dims2()?;
    let src: Vec<f64> = t.data().iter().map(|&v| f64::from(v)).collect();
    let out = resample(&src, h, w, out_h, out_w)?;
    Tensor::from_f64_grid(out_h, out_w, &out)
}
