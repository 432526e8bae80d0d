//! `JCOV` coefficient container.
//!
//! Big-endian layout: magic `JCOV`, version `u8 = 1`, width `u16`, height
//! `u16`, quality factor `u8`, 64 `u16` quantization steps row-major, then
//! 64 `i16` coefficients per block in raster block order, row-major within
//! each block.

use std::fs;
use std::path::Path;

use super::image::{CoeffBlock, CoeffImage};
use super::quant::QuantTable;
use crate::error::{Result, StegoError};
use crate::BLOCK_LEN;

pub const MAGIC: &[u8; 4] = b"JCOV";
pub const VERSION: u8 = 1;
const HEADER_LEN: usize = 4 + 1 + 2 + 2 + 1 + 2 * BLOCK_LEN;

pub fn encode(img: &CoeffImage) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + img.blocks().len() * 2 * BLOCK_LEN);
    out.extend_from_slice(MAGIC);
    out.push(VERSION);
    out.extend_from_slice(&(img.width() as u16).to_be_bytes());
    out.extend_from_slice(&(img.height() as u16).to_be_bytes());
    out.push(img.qtable().qf());
    for e in img.qtable().entries() {
        out.extend_from_slice(&e.to_be_bytes());
    }
    for b in img.blocks() {
        for c in b {
            out.extend_from_slice(&c.to_be_bytes());
        }
    }
    out
}

pub fn decode(bytes: &[u8]) -> Result<CoeffImage> {
    let fmt = |m: &str| StegoError::Format(format!("JCOV: {m}"));
    if bytes.len() < HEADER_LEN {
        return Err(fmt("truncated header"));
    }
    if &bytes[..4] != MAGIC {
        return Err(fmt("bad magic"));
    }
    if bytes[4] != VERSION {
        return Err(fmt(&format!("unsupported version {}", bytes[4])));
    }
    let be16 = |at: usize| u16::from_be_bytes([bytes[at], bytes[at + 1]]);
    let width = usize::from(be16(5));
    let height = usize::from(be16(7));
    let qf = bytes[9];
    let mut entries = [0u16; BLOCK_LEN];
    for (k, e) in entries.iter_mut().enumerate() {
        *e = be16(10 + 2 * k);
    }
    let qtable = QuantTable::from_entries(entries, qf)?;
    if width % 8 != 0 || height % 8 != 0 || width == 0 || height == 0 {
        return Err(fmt(&format!("dimensions {width}x{height} not multiples of 8")));
    }
    let n_blocks = (width / 8) * (height / 8);
    let body = &bytes[HEADER_LEN..];
    if body.len() != n_blocks * 2 * BLOCK_LEN {
        return Err(fmt(&format!(
            "expected {} coefficient bytes, found {}",
            n_blocks * 2 * BLOCK_LEN,
            body.len()
        )));
    }
    let blocks = body
        .chunks_exact(2 * BLOCK_LEN)
        .map(|chunk| {
            let mut b: CoeffBlock = [0; BLOCK_LEN];
            for (k, v) in b.iter_mut().enumerate() {
                *v = i16::from_be_bytes([chunk[2 * k], chunk[2 * k + 1]]);
            }
            b
        })
        .collect();
    CoeffImage::new(width, height, blocks, qtable)
}

pub fn write(path: impl AsRef<Path>, img: &CoeffImage) -> Result<()> {
    fs::write(path, encode(img))?;
    Ok(())
}

pub fn read(path: impl AsRef<Path>) -> Result<CoeffImage> {
    decode(&fs::read(path)?)
}

/// Whether `bytes` start with the container magic.
pub fn is_jcov(bytes: &[u8]) -> bool {
    bytes.len() >= 4 && &bytes[..4] == MAGIC
}
