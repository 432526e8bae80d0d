//! Binary PGM (P5, maxval 255) I/O for 8-bit grayscale pixels.

use std::path::Path;

use image::ImageFormat;

use crate::error::{Result, StegoError};

/// 8-bit grayscale raster in the unshifted `[0, 255]` domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayPixels {
    pub width: usize,
    pub height: usize,
    pub data: Vec<u8>,
}

pub fn read(path: impl AsRef<Path>) -> Result<GrayPixels> {
    let path = path.as_ref();
    let img = image::open(path)
        .map_err(|e| StegoError::Format(format!("{}: {e}", path.display())))?
        .into_luma8();
    let (w, h) = img.dimensions();
    Ok(GrayPixels { width: w as usize, height: h as usize, data: img.into_raw() })
}

pub fn decode(bytes: &[u8]) -> Result<GrayPixels> {
    let img = image::load_from_memory_with_format(bytes, ImageFormat::Pnm)
        .map_err(|e| StegoError::Format(format!("PGM: {e}")))?
        .into_luma8();
    let (w, h) = img.dimensions();
    Ok(GrayPixels { width: w as usize, height: h as usize, data: img.into_raw() })
}

/// Writes a P5 file. The header is emitted by hand so the byte stream is
/// exactly `P5\n<w> <h>\n255\n` followed by the raster.
pub fn encode(px: &GrayPixels) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", px.width, px.height).into_bytes();
    out.extend_from_slice(&px.data);
    out
}

pub fn write(path: impl AsRef<Path>, px: &GrayPixels) -> Result<()> {
    std::fs::write(path, encode(px))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encode_decode_round_trip() {
        let px = GrayPixels { width: 3, height: 2, data: vec![0, 10, 255, 7, 128, 64] };
        let bytes = encode(&px);
        assert!(bytes.starts_with(b"P5\n3 2\n255\n"));
        assert_eq!(decode(&bytes).unwrap(), px);
    }

    #[test]
    fn garbage_is_rejected() {
        assert!(decode(b"not an image").is_err());
    }
}
