//! Fixed-width histograms of deviation values.
//!
//! Bins are half-open `[k * width, (k + 1) * width)` for integer `k`, so zero
//! is always a bin edge and the grid is the same for every input.

use crate::error::{Error, Result};

pub const DEFAULT_BIN_WIDTH: f64 = 1.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub bin_width: f64,
    /// Index `k` of the first bin. Meaningless when `counts` is empty.
    pub first_bin: i64,
    /// Contiguous counts from `first_bin` upward, including empty interior bins.
    pub counts: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bin {
    pub left: f64,
    pub right: f64,
    pub count: usize,
}

impl Histogram {
    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn bins(&self) -> impl Iterator<Item = Bin> + '_ {
        self.counts.iter().enumerate().map(move |(i, &count)| {
            let k = self.first_bin + i as i64;
            Bin {
                left: k as f64 * self.bin_width,
                right: (k + 1) as f64 * self.bin_width,
                count,
            }
        })
    }

    /// Bin with the highest count; the lowest such bin on ties.
    pub fn mode(&self) -> Option<Bin> {
        self.bins().fold(None, |best: Option<Bin>, b| match best {
            Some(m) if m.count >= b.count => Some(m),
            _ => Some(b),
        })
    }
}

pub fn bin_index(value: f64, bin_width: f64) -> i64 {
    (value / bin_width).floor() as i64
}

pub fn deviation_histogram(differences: &[f64], bin_width: f64) -> Result<Histogram> {
    if !(bin_width > 0.0 && bin_width.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "bin width must be positive, got {bin_width}"
        )));
    }
    if let Some(index) = differences.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { index });
    }
    let indices: Vec<i64> = differences
        .iter()
        .map(|&d| bin_index(d, bin_width))
        .collect();
    let (Some(&lo), Some(&hi)) = (indices.iter().min(), indices.iter().max()) else {
        return Ok(Histogram {
            bin_width,
            first_bin: 0,
            counts: Vec::new(),
        });
    };
    let mut counts = vec![0usize; (hi - lo + 1) as usize];
    for k in indices {
        counts[(k - lo) as usize] += 1;
    }
    Ok(Histogram {
        bin_width,
        first_bin: lo,
        counts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeros_land_in_one_bin() {
        let h = deviation_histogram(&[0.0; 17], 1.0).unwrap();
        assert_eq!(h.counts, vec![17]);
        let b = h.bins().next().unwrap();
        assert_eq!((b.left, b.right), (0.0, 1.0));
    }

    #[test]
    fn half_open_unit_bins() {
        let h = deviation_histogram(&[-1.5, -0.5, 0.5, 1.5], 1.0).unwrap();
        let bins: Vec<_> = h.bins().map(|b| (b.left, b.right, b.count)).collect();
        assert_eq!(
            bins,
            vec![
                (-2.0, -1.0, 1),
                (-1.0, 0.0, 1),
                (0.0, 1.0, 1),
                (1.0, 2.0, 1)
            ]
        );
    }

    #[test]
    fn edges_belong_to_the_right_bin() {
        let h = deviation_histogram(&[-1.0, 0.0, 2.0], 1.0).unwrap();
        assert_eq!(h.first_bin, -1);
        assert_eq!(h.counts, vec![1, 1, 0, 1]);
    }

    #[test]
    fn empty_input_and_bad_width() {
        let h = deviation_histogram(&[], 1.0).unwrap();
        assert!(h.is_empty());
        assert_eq!(h.bins().count(), 0);
        assert!(h.mode().is_none());
        assert!(deviation_histogram(&[1.0], 0.0).is_err());
        assert!(deviation_histogram(&[f64::NAN], 1.0).is_err());
    }
}
