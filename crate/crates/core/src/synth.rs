//! Seeded synthetic scans: horizontal layer bands with Gaussian saliency blobs.
//!
//! All randomness comes from [`XorShift64Star`], a fully specified generator,
//! so a `(spec, seed)` pair reproduces the same maps on every platform.

use crate::error::{Error, Result};
use crate::heatmap::Saliency;
use crate::labelmap::LabelMap;
use crate::tensor::Tensor;

/// Marsaglia xorshift with Vigna's `*` output scrambler.
///
/// State update `x ^= x >> 12; x ^= x << 25; x ^= x >> 27`, output
/// `x * 0x2545F4914F6CDD1D`. A zero seed is replaced by `0x9E3779B97F4A7C15`
/// since the all-zero state is a fixed point.
#[derive(Debug, Clone)]
pub struct XorShift64Star {
    state: u64,
}

impl XorShift64Star {
    pub const ZERO_SEED_REPLACEMENT: u64 = 0x9E37_79B9_7F4A_7C15;

    pub fn new(seed: u64) -> Self {
        XorShift64Star {
            state: if seed == 0 {
                Self::ZERO_SEED_REPLACEMENT
            } else {
                seed
            },
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    /// Uniform in `[0, 1)` from the top 53 bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Uniform integer in `[0, n)`; `n` must be positive.
    pub fn below(&mut self, n: u64) -> u64 {
        ((u128::from(self.next_u64()) * u128::from(n)) >> 64) as u64
    }

    /// Standard normal draw (Box-Muller, one value per call).
    pub fn normal(&mut self) -> f64 {
        let u1 = 1.0 - self.next_f64();
        let u2 = self.next_f64();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Blob {
    /// Center in pixel coordinates; pixel `(r, c)` sits at `(r, c)`.
    pub row: f64,
    pub col: f64,
    pub sigma: f64,
    pub amplitude: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthSpec {
    pub height: usize,
    pub width: usize,
    /// Heights of the nine label bands, top to bottom; must sum to `height`.
    pub bands: [usize; 9],
    pub blobs: Vec<Blob>,
    /// Each blob center is shifted by a seeded offset in `[-jitter, jitter]` per axis.
    pub jitter: f64,
    pub seed: u64,
}

impl SynthSpec {
    /// Bands of equal height (the remainder goes to the region below the retina).
    pub fn equal_bands(height: usize) -> [usize; 9] {
        let mut bands = [height / 9; 9];
        bands[8] += height % 9;
        bands
    }

    /// A spec whose blobs are drawn from `seed`.
    pub fn random(
        height: usize,
        width: usize,
        bands: [usize; 9],
        blob_count: usize,
        seed: u64,
    ) -> SynthSpec {
        let mut rng = XorShift64Star::new(seed);
        let scale = height.min(width) as f64;
        let blobs = (0..blob_count)
            .map(|_| Blob {
                row: rng.uniform(0.0, height as f64),
                col: rng.uniform(0.0, width as f64),
                sigma: rng.uniform(scale / 12.0, scale / 4.0).max(0.5),
                amplitude: rng.uniform(0.5, 1.0),
            })
            .collect();
        SynthSpec {
            height,
            width,
            bands,
            blobs,
            jitter: 1.0,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.height == 0 || self.width == 0 {
            return Err(Error::InvalidShape(format!(
                "synthetic scan must be non-empty, got {}x{}",
                self.height, self.width
            )));
        }
        let total: usize = self.bands.iter().sum();
        if total != self.height || self.bands.contains(&0) {
            return Err(Error::Validation(format!(
                "band heights {:?} must be positive and sum to height {}",
                self.bands, self.height
            )));
        }
        if !(self.jitter >= 0.0 && self.jitter.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "bad jitter {}",
                self.jitter
            )));
        }
        for b in &self.blobs {
            let finite = [b.row, b.col, b.sigma, b.amplitude]
                .iter()
                .all(|v| v.is_finite());
            if !finite || b.sigma <= 0.0 || b.amplitude < 0.0 {
                return Err(Error::InvalidArgument(format!("bad blob {b:?}")));
            }
        }
        Ok(())
    }
}

/// Label map of horizontal bands in label order 0..=8.
pub fn banded_labels(height: usize, width: usize, bands: &[usize; 9]) -> Result<LabelMap> {
    let mut labels = Vec::with_capacity(height * width);
    for (label, &rows) in bands.iter().enumerate() {
        labels.extend(std::iter::repeat_n(label as u8, rows * width));
    }
    LabelMap::new(height, width, labels)
}

/// Produces the saliency and label map described by `spec`. The saliency is the
/// blob sum divided by its maximum, so it lies in `[0, 1]`.
pub fn generate(spec: &SynthSpec) -> Result<(Saliency, LabelMap)> {
    spec.validate()?;
    let labels = banded_labels(spec.height, spec.width, &spec.bands)?;
    let mut rng = XorShift64Star::new(spec.seed ^ 0xA5A5_A5A5_A5A5_A5A5);
    let blobs: Vec<Blob> = spec
        .blobs
        .iter()
        .map(|b| Blob {
            row: b.row + rng.uniform(-spec.jitter, spec.jitter),
            col: b.col + rng.uniform(-spec.jitter, spec.jitter),
            ..*b
        })
        .collect();
    let mut values = Vec::with_capacity(spec.height * spec.width);
    for r in 0..spec.height {
        for c in 0..spec.width {
            let v: f64 = blobs
                .iter()
                .map(|b| {
                    let d2 = (r as f64 - b.row).powi(2) + (c as f64 - b.col).powi(2);
                    b.amplitude * (-d2 / (2.0 * b.sigma * b.sigma)).exp()
                })
                .sum();
            values.push(v);
        }
    }
    let peak = values.iter().fold(0.0f64, |m, &v| m.max(v));
    if peak > 0.0 {
        values.iter_mut().for_each(|v| *v /= peak);
    }
    Ok((Saliency::new(spec.height, spec.width, values)?, labels))
}

/// Random label map and saliency of random size up to `max_h x max_w`, for
/// fuzzing. Roughly one pixel in eight gets zero saliency.
pub fn fuzz_pair(
    rng: &mut XorShift64Star,
    max_h: usize,
    max_w: usize,
) -> Result<(Saliency, LabelMap)> {
    let h = 1 + rng.below(max_h as u64) as usize;
    let w = 1 + rng.below(max_w as u64) as usize;
    let labels = (0..h * w).map(|_| rng.below(9) as u8).collect();
    let values = (0..h * w)
        .map(|_| {
            if rng.below(8) == 0 {
                0.0
            } else {
                rng.next_f64()
            }
        })
        .collect();
    Ok((Saliency::new(h, w, values)?, LabelMap::new(h, w, labels)?))
}

/// Random channel-last tensor of the given shape, values uniform in `[lo, hi)`.
pub fn fuzz_tensor(
    rng: &mut XorShift64Star,
    shape: Vec<usize>,
    lo: f64,
    hi: f64,
) -> Result<Tensor> {
    let n = shape.iter().product();
    Tensor::new(shape, (0..n).map(|_| rng.uniform(lo, hi) as f32).collect())
}
