//! Binary weights container: magic, format version, vocab tables, then
//! named tensors of little-endian f64.

use std::io::{Read, Write};
use std::path::Path;

use thiserror::Error;

use super::params::ParamStore;
use super::tensor::Tensor;

pub const MAGIC: &[u8; 4] = b"TSCT";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum WeightsError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("not a weights file (bad magic)")]
    BadMagic,
    #[error("weights format version {found}, expected {expected}")]
    Version { found: u32, expected: u32 },
    #[error("weights file is truncated")]
    Truncated,
    #[error("malformed weights file: {0}")]
    Malformed(String),
}

/// Everything a weights file holds.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct WeightsFile {
    pub vocabs: Vec<(String, Vec<String>)>,
    pub params: ParamStore,
}

impl WeightsFile {
    pub fn vocab(&self, name: &str) -> Option<&[String]> {
        self.vocabs.iter().find(|(n, _)| n == name).map(|(_, v)| v.as_slice())
    }
}

fn put_u32(out: &mut Vec<u8>, x: u32) {
    out.extend_from_slice(&x.to_le_bytes());
}

fn put_str(out: &mut Vec<u8>, s: &str) {
    put_u32(out, s.len() as u32);
    out.extend_from_slice(s.as_bytes());
}

pub fn encode(w: &WeightsFile) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    put_u32(&mut out, FORMAT_VERSION);
    put_u32(&mut out, w.vocabs.len() as u32);
    for (name, items) in &w.vocabs {
        put_str(&mut out, name);
        put_u32(&mut out, items.len() as u32);
        for it in items {
            put_str(&mut out, it);
        }
    }
    put_u32(&mut out, w.params.len() as u32);
    for (name, t) in w.params.names().iter().zip(w.params.tensors()) {
        put_str(&mut out, name);
        put_u32(&mut out, 2);
        put_u32(&mut out, t.rows as u32);
        put_u32(&mut out, t.cols as u32);
        for x in &t.data {
            out.extend_from_slice(&x.to_le_bytes());
        }
    }
    out
}

struct Reader<'a> {
    buf: &'a [u8],
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], WeightsError> {
        if self.buf.len() < n {
            return Err(WeightsError::Truncated);
        }
        let (head, rest) = self.buf.split_at(n);
        self.buf = rest;
        Ok(head)
    }

    fn u32(&mut self) -> Result<u32, WeightsError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    /// A length field, sanity-checked against the bytes that remain.
    fn len(&mut self, elem: usize) -> Result<usize, WeightsError> {
        let n = self.u32()? as usize;
        if n.saturating_mul(elem) > self.buf.len() {
            return Err(WeightsError::Truncated);
        }
        Ok(n)
    }

    fn string(&mut self) -> Result<String, WeightsError> {
        let n = self.len(1)?;
        String::from_utf8(self.take(n)?.to_vec()).map_err(|e| WeightsError::Malformed(e.to_string()))
    }
}

pub fn decode(bytes: &[u8]) -> Result<WeightsFile, WeightsError> {
    let mut r = Reader { buf: bytes };
    if r.take(4).map_err(|_| WeightsError::BadMagic)? != MAGIC {
        return Err(WeightsError::BadMagic);
    }
    let version = r.u32()?;
    if version != FORMAT_VERSION {
        return Err(WeightsError::Version {
            found: version,
            expected: FORMAT_VERSION,
        });
    }
    let mut w = WeightsFile::default();
    for _ in 0..r.len(8)? {
        let name = r.string()?;
        let items = (0..r.len(4)?).map(|_| r.string()).collect::<Result<_, _>>()?;
        w.vocabs.push((name, items));
    }
    for _ in 0..r.len(12)? {
        let name = r.string()?;
        if r.u32()? != 2 {
            return Err(WeightsError::Malformed(format!("tensor {name} is not 2-D")));
        }
        let rows = r.u32()? as usize;
        let cols = r.u32()? as usize;
        let n = rows.checked_mul(cols).ok_or(WeightsError::Truncated)?;
        let raw = r.take(n.checked_mul(8).ok_or(WeightsError::Truncated)?)?;
        let data = raw
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        if w.params.id(&name).is_some() {
            return Err(WeightsError::Malformed(format!("duplicate tensor {name}")));
        }
        w.params.add(&name, Tensor::from_vec(rows, cols, data));
    }
    if !r.buf.is_empty() {
        return Err(WeightsError::Malformed("trailing bytes".into()));
    }
    Ok(w)
}

pub fn save_weights(w: &WeightsFile, path: &Path) -> Result<(), WeightsError> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(&encode(w))?;
    Ok(())
}

pub fn load_weights(path: &Path) -> Result<WeightsFile, WeightsError> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)?.read_to_end(&mut bytes)?;
    decode(&bytes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> WeightsFile {
        let mut params = ParamStore::new();
        params.add("a", Tensor::from_vec(2, 2, vec![1.5, -0.0, f64::MIN_POSITIVE, 1e300]));
        params.add("b", Tensor::row(vec![std::f64::consts::PI]));
        WeightsFile {
            vocabs: vec![("tokens".into(), vec!["<unk>".into(), "not".into()])],
            params,
        }
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let w = sample();
        let back = decode(&encode(&w)).unwrap();
        assert_eq!(back, w);
        let bits = |w: &WeightsFile| -> Vec<u64> {
            w.params
                .tensors()
                .iter()
                .flat_map(|t| t.data.iter().map(|x| x.to_bits()))
                .collect()
        };
        assert_eq!(bits(&back), bits(&w));
    }

    #[test]
    fn truncation_and_version_are_errors() {
        let bytes = encode(&sample());
        for cut in [0, 3, 6, 10, bytes.len() / 2, bytes.len() - 1] {
            assert!(decode(&bytes[..cut]).is_err(), "cut at {cut}");
        }
        let mut old = bytes.clone();
        old[4..8].copy_from_slice(&0u32.to_le_bytes());
        assert!(matches!(decode(&old), Err(WeightsError::Version { found: 0, .. })));
        assert!(matches!(decode(b"NOPE\x01\0\0\0"), Err(WeightsError::BadMagic)));
    }
}
