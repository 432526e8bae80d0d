//! Coefficient-level JPEG model: quantization tables, the 8x8 DCT, the
//! recompression channel, and file I/O.

pub mod channel;
pub mod container;
pub mod dct;
pub mod image;
pub mod pgm;
pub mod quant;

pub use channel::{recompress, Channel, ChannelModel};
pub use dct::{dct_basis, forward_dct, inverse_dct, Block};
pub use image::{
    block_from_spatial, block_to_spatial, dequantize, overflows, quantize, round_spatial,
    to_spatial, truncate_spatial, truncate_value, CoeffBlock, CoeffImage, DequantImage,
    SpatialImage, PIXEL_MAX, PIXEL_MIN,
};
pub use quant::{quant_table_for_qf, QuantTable};
