//! Retinal layer label maps, stored as binary PGM (P5, maxval 255) with the
//! gray value equal to the label ID.

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

/// The nine segmentation classes, top of the scan to bottom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(u8)]
pub enum Layer {
    /// Region above the retina.
    RaR = 0,
    Ilm = 1,
    NflIpl = 2,
    Inl = 3,
    Opl = 4,
    OnlIsm = 5,
    Ise = 6,
    OsRpe = 7,
    /// Region below the retina.
    RbR = 8,
}

impl Layer {
    pub const ALL: [Layer; 9] = [
        Layer::RaR,
        Layer::Ilm,
        Layer::NflIpl,
        Layer::Inl,
        Layer::Opl,
        Layer::OnlIsm,
        Layer::Ise,
        Layer::OsRpe,
        Layer::RbR,
    ];

    /// The seven layers inside the retina, labels 1..=7.
    pub const RETINAL: [Layer; 7] = [
        Layer::Ilm,
        Layer::NflIpl,
        Layer::Inl,
        Layer::Opl,
        Layer::OnlIsm,
        Layer::Ise,
        Layer::OsRpe,
    ];

    pub fn from_label(label: u8) -> Option<Layer> {
        Layer::ALL.get(label as usize).copied()
    }

    pub fn label(self) -> u8 {
        self as u8
    }

    pub fn is_retinal(self) -> bool {
        !matches!(self, Layer::RaR | Layer::RbR)
    }

    /// Position within [`Layer::RETINAL`], `None` for RaR and RbR.
    pub fn retinal_index(self) -> Option<usize> {
        self.is_retinal().then(|| self as usize - 1)
    }

    pub fn name(self) -> &'static str {
        match self {
            Layer::RaR => "RaR",
            Layer::Ilm => "ILM",
            Layer::NflIpl => "NFL-IPL",
            Layer::Inl => "INL",
            Layer::Opl => "OPL",
            Layer::OnlIsm => "ONL-ISM",
            Layer::Ise => "ISE",
            Layer::OsRpe => "OS-RPE",
            Layer::RbR => "RbR",
        }
    }
}

impl fmt::Display for Layer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Layer {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .map(|c| c.to_ascii_uppercase())
            .collect();
        Layer::ALL
            .into_iter()
            .find(|l| l.name().replace('-', "").to_ascii_uppercase() == key)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown layer {s:?}")))
    }
}

/// H x W grid of labels in `0..=8`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelMap {
    height: usize,
    width: usize,
    labels: Vec<u8>,
}

impl LabelMap {
    pub fn new(height: usize, width: usize, labels: Vec<u8>) -> Result<Self> {
        if height == 0 || width == 0 {
            return Err(Error::InvalidShape(format!(
                "label map must be non-empty, got {height}x{width}"
            )));
        }
        if labels.len() != height * width {
            return Err(Error::InvalidShape(format!(
                "{height}x{width} label map needs {} labels, got {}",
                height * width,
                labels.len()
            )));
        }
        if let Some(index) = labels.iter().position(|&v| v > 8) {
            return Err(Error::LabelOutOfRange {
                value: labels[index],
                index,
            });
        }
        Ok(LabelMap {
            height,
            width,
            labels,
        })
    }

    pub fn from_rows(rows: &[&[u8]]) -> Result<Self> {
        let width = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != width) {
            return Err(Error::InvalidShape("ragged label rows".into()));
        }
        LabelMap::new(rows.len(), width, rows.concat())
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

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn get(&self, row: usize, col: usize) -> Layer {
        Layer::ALL[self.labels[row * self.width + col] as usize]
    }

    /// One-hot indicator: 1 when the pixel at `(row, col)` carries `layer`.
    pub fn indicator(&self, layer: Layer, row: usize, col: usize) -> u8 {
        u8::from(self.labels[row * self.width + col] == layer.label())
    }

    pub fn encode_pgm(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.labels);
        out
    }

    pub fn decode_pgm(bytes: &[u8]) -> Result<Self> {
        let mut cur = PgmCursor { bytes, pos: 0 };
        if bytes.len() < 2 || &bytes[..2] != b"P5" {
            return Err(Error::format(0, "not a binary PGM (expected P5 magic)"));
        }
        cur.pos = 2;
        let width = cur.header_int("width")?;
        let height = cur.header_int("height")?;
        let maxval_at = cur.pos;
        let maxval = cur.header_int("maxval")?;
        if maxval != 255 {
            return Err(Error::format(
                maxval_at as u64,
                format!("maxval must be 255, got {maxval}"),
            ));
        }
        // exactly one whitespace byte separates the header from the raster
        match bytes.get(cur.pos) {
            Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
            _ => {
                return Err(Error::format(
                    cur.pos as u64,
                    "expected whitespace after maxval",
                ))
            }
        }
        if width == 0 || height == 0 {
            return Err(Error::format(2, "zero image dimension"));
        }
        let need = width
            .checked_mul(height)
            .ok_or_else(|| Error::format(2, "image dimensions overflow"))?;
        let raster = &bytes[cur.pos..];
        if raster.len() < need {
            return Err(Error::format(
                bytes.len() as u64,
                format!(
                    "truncated raster: need {need} bytes, found {}",
                    raster.len()
                ),
            ));
        }
        LabelMap::new(height, width, raster[..need].to_vec())
    }
}

struct PgmCursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl PgmCursor<'_> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn header_int(&mut self, what: &str) -> Result<usize> {
        let before = self.pos;
        self.skip_space_and_comments();
        if self.pos == before {
            return Err(Error::format(
                self.pos as u64,
                format!("expected whitespace before {what}"),
            ));
        }
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::format(start as u64, format!("expected {what}")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::format(start as u64, format!("{what} out of range")))
    }
}

pub fn read_labelmap(path: impl AsRef<Path>) -> Result<LabelMap> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    LabelMap::decode_pgm(&bytes)
}

pub fn write_labelmap(map: &LabelMap, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, map.encode_pgm()).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pgm(header: &str, raster: &[u8]) -> Vec<u8> {
        let mut v = header.as_bytes().to_vec();
        v.extend_from_slice(raster);
        v
    }

    #[test]
    fn gray_values_map_to_labels_row_major() {
        let m = LabelMap::decode_pgm(&pgm("P5\n2 2\n255\n", &[0, 5, 8, 3])).unwrap();
        assert_eq!(m.dims(), (2, 2));
        assert_eq!(m.get(0, 0), Layer::RaR);
        assert_eq!(m.get(0, 1), Layer::OnlIsm);
        assert_eq!(m.get(1, 0), Layer::RbR);
        assert_eq!(m.get(1, 1), Layer::Inl);
    }

    #[test]
    fn label_nine_is_out_of_range() {
        let err = LabelMap::decode_pgm(&pgm("P5\n2 1\n255\n", &[1, 9])).unwrap_err();
        assert!(matches!(err, Error::LabelOutOfRange { value: 9, index: 1 }));
    }

    #[test]
    fn maxval_other_than_255_is_rejected() {
        let err = LabelMap::decode_pgm(&pgm("P5\n1 1\n15\n", &[1])).unwrap_err();
        assert!(matches!(err, Error::Format { .. }));
    }

    #[test]
    fn rejects_ascii_pgm_and_truncation() {
        assert!(LabelMap::decode_pgm(b"P2\n1 1\n255\n1").is_err());
        assert!(matches!(
            LabelMap::decode_pgm(&pgm("P5\n3 3\n255\n", &[0; 8])),
            Err(Error::Format { .. })
        ));
    }

    #[test]
    fn comments_in_header_are_skipped() {
        let m =
            LabelMap::decode_pgm(&pgm("P5 # made by hand\n3 # w\n1\n255 ", &[1, 2, 3])).unwrap();
        assert_eq!(m.labels(), &[1, 2, 3]);
    }

    #[test]
    fn pgm_round_trip() {
        let m = LabelMap::from_rows(&[&[0, 1, 2], &[6, 7, 8]]).unwrap();
        assert_eq!(LabelMap::decode_pgm(&m.encode_pgm()).unwrap(), m);
    }

    #[test]
    fn layer_names_parse_loosely() {
        assert_eq!("ONL-ISM".parse::<Layer>().unwrap(), Layer::OnlIsm);
        assert_eq!("os_rpe".parse::<Layer>().unwrap(), Layer::OsRpe);
        assert_eq!("ILM".parse::<Layer>().unwrap(), Layer::Ilm);
        assert!("retina".parse::<Layer>().is_err());
        assert_eq!(Layer::Ise.retinal_index(), Some(5));
        assert_eq!(Layer::RbR.retinal_index(), None);
    }
}
