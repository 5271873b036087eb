//! Dense `f32` tensors and the RLT container.
//!
//! RLT layout, all integers little-endian:
//!
//! ```text
//! offset 0          "RLT1"                       4 bytes
//! offset 4          rank                         u8
//! offset 5          dims                         rank x u32
//! offset 5+4*rank   payload                      product(dims) x f32, row-major
//! ```
//!
//! Encoding is a pure function of shape and data, so identical tensors always
//! produce identical files.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

pub const RLT_MAGIC: &[u8; 4] = b"RLT1";

/// Size of the RLT header for a tensor of the given rank.
pub const fn rlt_header_len(rank: usize) -> usize {
    4 + 1 + 4 * rank
}

/// Row-major n-dimensional array of finite 32-bit floats.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    shape: Vec<usize>,
    data: Vec<f32>,
}

impl Tensor {
    pub fn new(shape: Vec<usize>, data: Vec<f32>) -> Result<Self> {
        validate_shape(&shape)?;
        let expected = element_count(&shape)?;
        if data.len() != expected {
            return Err(Error::InvalidShape(format!(
                "shape {:?} needs {} elements, got {}",
                shape,
                expected,
                data.len()
            )));
        }
        if let Some(index) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Tensor { shape, data })
    }

    pub fn filled(shape: Vec<usize>, value: f32) -> Result<Self> {
        validate_shape(&shape)?;
        let n = element_count(&shape)?;
        Tensor::new(shape, vec![value; n])
    }

    /// Builds a rank-2 tensor from `f64` values, rounding each to `f32`.
    pub fn from_f64_grid(height: usize, width: usize, values: &[f64]) -> Result<Self> {
        Tensor::new(
            vec![height, width],
            values.iter().map(|&v| v as f32).collect(),
        )
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn rank(&self) -> usize {
        self.shape.len()
    }

    pub fn data(&self) -> &[f32] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f32> {
        self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// `(height, width)` of a rank-2 tensor.
    pub fn dims2(&self) -> Result<(usize, usize)> {
        match self.shape[..] {
            [h, w] => Ok((h, w)),
            _ => Err(Error::InvalidShape(format!(
                "expected a rank-2 tensor, got shape {:?}",
                self.shape
            ))),
        }
    }

    /// `(height, width, channels)` of a rank-3 tensor.
    pub fn dims3(&self) -> Result<(usize, usize, usize)> {
        match self.shape[..] {
            [h, w, k] => Ok((h, w, k)),
            _ => Err(Error::InvalidShape(format!(
                "expected a rank-3 tensor, got shape {:?}",
                self.shape
            ))),
        }
    }

    /// Elementwise multiplication by `factor`. Fails if the result overflows to infinity.
    pub fn scaled(&self, factor: f32) -> Result<Self> {
        Tensor::new(
            self.shape.clone(),
            self.data.iter().map(|v| v * factor).collect(),
        )
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(rlt_header_len(self.rank()) + 4 * self.data.len());
        out.extend_from_slice(RLT_MAGIC);
        out.push(self.rank() as u8);
        for &d in &self.shape {
            out.extend_from_slice(&(d as u32).to_le_bytes());
        }
        for v in &self.data {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out
    }

    pub fn decode(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < 4 {
            return Err(Error::format(0, "truncated magic"));
        }
        if &bytes[..4] != RLT_MAGIC {
            return Err(Error::format(0, format!("bad magic {:?}", &bytes[..4])));
        }
        let rank = *bytes
            .get(4)
            .ok_or_else(|| Error::format(4, "missing rank byte"))? as usize;
        if rank == 0 {
            return Err(Error::format(4, "rank must be at least 1"));
        }
        let header_len = rlt_header_len(rank);
        if bytes.len() < header_len {
            return Err(Error::format(
                bytes.len() as u64,
                format!("truncated shape: rank {rank} needs {header_len} header bytes"),
            ));
        }
        let mut shape = Vec::with_capacity(rank);
        for i in 0..rank {
            let at = 5 + 4 * i;
            let dim = u32::from_le_bytes(bytes[at..at + 4].try_into().unwrap()) as usize;
            if dim == 0 {
                return Err(Error::format(at as u64, format!("dimension {i} is zero")));
            }
            shape.push(dim);
        }
        let count = shape
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .filter(|n| n.checked_mul(4).is_some())
            .ok_or_else(|| Error::format(5, "shape product overflows"))?;
        let payload = &bytes[header_len..];
        if payload.len() != count * 4 {
            return Err(Error::format(
                header_len as u64,
                format!(
                    "payload length {} does not match shape {:?} ({} bytes expected)",
                    payload.len(),
                    shape,
                    count * 4
                ),
            ));
        }
        let data: Vec<f32> = payload
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]))
            .collect();
        Tensor::new(shape, data)
    }
}

fn validate_shape(shape: &[usize]) -> Result<()> {
    if shape.is_empty() {
        return Err(Error::InvalidShape("tensor must have rank >= 1".into()));
    }
    if shape.len() > u8::MAX as usize {
        return Err(Error::InvalidShape(format!(
            "rank {} exceeds 255",
            shape.len()
        )));
    }
    if let Some(i) = shape.iter().position(|&d| d == 0) {
        return Err(Error::InvalidShape(format!("dimension {i} is zero")));
    }
    if shape.iter().any(|&d| d > u32::MAX as usize) {
        return Err(Error::InvalidShape("dimension exceeds u32 range".into()));
    }
    Ok(())
}

fn element_count(shape: &[usize]) -> Result<usize> {
    shape
        .iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d))
        .ok_or_else(|| Error::InvalidShape(format!("shape {shape:?} overflows")))
}

pub fn read_tensor(path: impl AsRef<Path>) -> Result<Tensor> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    Tensor::decode(&bytes)
}

pub fn write_tensor(tensor: &Tensor, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, tensor.encode()).map_err(|e| Error::io(path, e))
}
