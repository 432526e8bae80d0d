use super::image::{quantize, round_spatial, to_spatial, truncate_spatial, CoeffImage};
use super::quant::QuantTable;
use crate::error::Result;

/// Simulated recompression performed by the transmission channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChannelModel {
    pub q_channel: u8,
    pub enable_truncation: bool,
    pub enable_rounding: bool,
}

impl ChannelModel {
    /// Full lossy channel at quality `q_channel`.
    pub fn new(q_channel: u8) -> Result<Self> {
        QuantTable::for_quality(q_channel)?;
        Ok(Self { q_channel, enable_truncation: true, enable_rounding: true })
    }

    /// Channel that only requantizes (no truncation, no rounding).
    pub fn quantization_only(q_channel: u8) -> Result<Self> {
        Ok(Self { enable_truncation: false, enable_rounding: false, ..Self::new(q_channel)? })
    }

    pub fn table(&self) -> QuantTable {
        QuantTable::for_quality(self.q_channel).expect("validated at construction")
    }
}

/// Anything that maps a transmitted coefficient image to the received one.
pub trait Channel {
    fn transmit(&self, image: &CoeffImage) -> CoeffImage;
}

impl Channel for ChannelModel {
    fn transmit(&self, image: &CoeffImage) -> CoeffImage {
        recompress(image, self)
    }
}

/// Decode to pixels and re-encode at the channel quality.
pub fn recompress(c: &CoeffImage, ch: &ChannelModel) -> CoeffImage {
    let mut spatial = to_spatial(c);
    if ch.enable_truncation {
        spatial = truncate_spatial(&spatial);
    }
    if ch.enable_rounding {
        spatial = round_spatial(&spatial);
    }
    quantize(&spatial.to_dct(), &ch.table())
}
