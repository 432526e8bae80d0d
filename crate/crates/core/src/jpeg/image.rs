use rayon::prelude::*;

use super::dct::{forward_dct, inverse_dct, Block};
use super::quant::QuantTable;
use crate::error::{invalid, Result};
use crate::BLOCK_LEN;

/// Upper bound of the level-shifted pixel range.
pub const PIXEL_MAX: f64 = 127.0;
/// Lower bound of the level-shifted pixel range.
pub const PIXEL_MIN: f64 = -128.0;

/// Quantized coefficients of one 8x8 block, row-major (index `8 * v + u`).
pub type CoeffBlock = [i16; BLOCK_LEN];

fn check_dims(width: usize, height: usize) -> Result<()> {
    if width == 0 || height == 0 || !width.is_multiple_of(8) || !height.is_multiple_of(8) {
        return Err(invalid(format!(
            "image dimensions {width}x{height} must be non-zero multiples of 8"
        )));
    }
    if width > usize::from(u16::MAX) || height > usize::from(u16::MAX) {
        return Err(invalid(format!("image dimensions {width}x{height} exceed 65535")));
    }
    Ok(())
}

/// Grid of quantized DCT blocks plus the table that quantized them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffImage {
    width: usize,
    height: usize,
    blocks: Vec<CoeffBlock>,
    qtable: QuantTable,
}

impl CoeffImage {
    pub fn new(
        width: usize,
        height: usize,
        blocks: Vec<CoeffBlock>,
        qtable: QuantTable,
    ) -> Result<Self> {
        check_dims(width, height)?;
        let expected = (width / 8) * (height / 8);
        if blocks.len() != expected {
            return Err(invalid(format!(
                "expected {expected} blocks for {width}x{height}, got {}",
                blocks.len()
            )));
        }
        Ok(Self { width, height, blocks, qtable })
    }

    pub fn zeros(width: usize, height: usize, qtable: QuantTable) -> Result<Self> {
        check_dims(width, height)?;
        let n = (width / 8) * (height / 8);
        Ok(Self { width, height, blocks: vec![[0; BLOCK_LEN]; n], qtable })
    }

    /// JPEG-compresses 8-bit pixels: level shift, DCT, quantize.
    pub fn from_pixels(pixels: &[u8], width: usize, height: usize, qtable: QuantTable) -> Result<Self> {
        if pixels.len() != width * height {
            return Err(invalid("pixel buffer does not match dimensions"));
        }
        let values = pixels.iter().map(|&p| f64::from(p) - 128.0).collect();
        let spatial = SpatialImage::new(width, height, values)?;
        Ok(quantize(&spatial.to_dct(), &qtable))
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn blocks_wide(&self) -> usize {
        self.width / 8
    }

    pub fn blocks_high(&self) -> usize {
        self.height / 8
    }

    pub fn blocks(&self) -> &[CoeffBlock] {
        &self.blocks
    }

    pub fn blocks_mut(&mut self) -> &mut [CoeffBlock] {
        &mut self.blocks
    }

    pub fn qtable(&self) -> &QuantTable {
        &self.qtable
    }

    /// Same shape and block count.
    pub fn congruent(&self, other: &CoeffImage) -> bool {
        self.width == other.width && self.height == other.height
    }

    /// Number of non-zero AC coefficients.
    pub fn nonzero_ac(&self) -> usize {
        self.blocks.iter().map(|b| b[1..].iter().filter(|&&c| c != 0).count()).sum()
    }
}

/// Dequantized (real-valued) DCT coefficients, one `[f64; 64]` per block.
#[derive(Debug, Clone, PartialEq)]
pub struct DequantImage {
    pub width: usize,
    pub height: usize,
    pub blocks: Vec<Block>,
}

/// Level-shifted real pixel grid, nominal range `[-128, 127]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialImage {
    width: usize,
    height: usize,
    pixels: Vec<f64>,
}

impl SpatialImage {
    pub fn new(width: usize, height: usize, pixels: Vec<f64>) -> Result<Self> {
        check_dims(width, height)?;
        if pixels.len() != width * height {
            return Err(invalid("pixel buffer does not match dimensions"));
        }
        Ok(Self { width, height, pixels })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    pub fn pixels_mut(&mut self) -> &mut [f64] {
        &mut self.pixels
    }

    pub fn block_count(&self) -> usize {
        (self.width / 8) * (self.height / 8)
    }

    /// Copies out block `index` (raster order).
    pub fn block(&self, index: usize) -> Block {
        let bw = self.width / 8;
        let (by, bx) = (index / bw, index % bw);
        let mut out = [0.0; BLOCK_LEN];
        for r in 0..8 {
            let start = (by * 8 + r) * self.width + bx * 8;
            out[r * 8..r * 8 + 8].copy_from_slice(&self.pixels[start..start + 8]);
        }
        out
    }

    pub fn set_block(&mut self, index: usize, block: &Block) {
        let bw = self.width / 8;
        let (by, bx) = (index / bw, index % bw);
        for r in 0..8 {
            let start = (by * 8 + r) * self.width + bx * 8;
            self.pixels[start..start + 8].copy_from_slice(&block[r * 8..r * 8 + 8]);
        }
    }

    fn from_blocks(width: usize, height: usize, blocks: &[Block]) -> Self {
        let mut img = Self { width, height, pixels: vec![0.0; width * height] };
        for (i, b) in blocks.iter().enumerate() {
            img.set_block(i, b);
        }
        img
    }

    /// Per-block forward DCT, no quantization.
    pub fn to_dct(&self) -> DequantImage {
        let blocks = (0..self.block_count())
            .into_par_iter()
            .map(|i| forward_dct(&self.block(i)))
            .collect();
        DequantImage { width: self.width, height: self.height, blocks }
    }

    /// Decoder output as 8-bit pixels: truncate, round, undo the level shift.
    pub fn to_pixels_u8(&self) -> Vec<u8> {
        self.pixels
            .iter()
            .map(|&s| (truncate_value(s).round() + 128.0) as u8)
            .collect()
    }
}

/// Clamps one level-shifted pixel into `[-128, 127]`.
#[inline]
pub fn truncate_value(s: f64) -> f64 {
    s.clamp(PIXEL_MIN, PIXEL_MAX)
}

/// Whether a reconstructed pixel lies outside the representable range.
#[inline]
pub fn overflows(s: f64) -> bool {
    !(PIXEL_MIN..=PIXEL_MAX).contains(&s)
}

pub fn truncate_spatial(img: &SpatialImage) -> SpatialImage {
    let pixels = img.pixels.iter().map(|&s| truncate_value(s)).collect();
    SpatialImage { pixels, ..*img }
}

/// Rounds in the unshifted `[0, 255]` domain, half away from zero.
pub fn round_spatial(img: &SpatialImage) -> SpatialImage {
    let pixels = img.pixels.iter().map(|&s| (s + 128.0).round() - 128.0).collect();
    SpatialImage { pixels, ..*img }
}

/// `round(d / q)` per coefficient, half away from zero, saturating at the
/// `i16` range.
pub fn quantize(deq: &DequantImage, qt: &QuantTable) -> CoeffImage {
    let blocks = deq
        .blocks
        .iter()
        .map(|b| {
            let mut out = [0i16; BLOCK_LEN];
            for k in 0..BLOCK_LEN {
                out[k] = (b[k] / qt.step(k)).round() as i16;
            }
            out
        })
        .collect();
    CoeffImage { width: deq.width, height: deq.height, blocks, qtable: *qt }
}

pub fn dequantize(c: &CoeffImage) -> DequantImage {
    let blocks = c
        .blocks
        .iter()
        .map(|b| {
            let mut out = [0.0; BLOCK_LEN];
            for k in 0..BLOCK_LEN {
                out[k] = f64::from(b[k]) * c.qtable.step(k);
            }
            out
        })
        .collect();
    DequantImage { width: c.width, height: c.height, blocks }
}

/// Real-valued decoder reconstruction: dequantize and IDCT, with no
/// truncation or rounding.
pub fn to_spatial(c: &CoeffImage) -> SpatialImage {
    let deq = dequantize(c);
    let blocks: Vec<Block> = deq.blocks.par_iter().map(inverse_dct).collect();
    SpatialImage::from_blocks(c.width, c.height, &blocks)
}

/// Spatial reconstruction of a single block.
pub fn block_to_spatial(block: &CoeffBlock, qt: &QuantTable) -> Block {
    let mut deq = [0.0; BLOCK_LEN];
    for k in 0..BLOCK_LEN {
        deq[k] = f64::from(block[k]) * qt.step(k);
    }
    inverse_dct(&deq)
}

/// DCT and quantize a single spatial block.
pub fn block_from_spatial(block: &Block, qt: &QuantTable) -> CoeffBlock {
    let d = forward_dct(block);
    let mut out = [0i16; BLOCK_LEN];
    for k in 0..BLOCK_LEN {
        out[k] = (d[k] / qt.step(k)).round() as i16;
    }
    out
}
