use crate::error::{invalid, Result};
use crate::BLOCK_LEN;

/// Standard JPEG luminance quantization table (quality 50), row-major.
pub const BASE_LUMINANCE: [u16; BLOCK_LEN] = [
    16, 11, 10, 16, 24, 40, 51, 61, //
    12, 12, 14, 19, 26, 58, 60, 55, //
    14, 13, 16, 24, 40, 57, 69, 56, //
    14, 17, 22, 29, 51, 87, 80, 62, //
    18, 22, 37, 56, 68, 109, 103, 77, //
    24, 35, 55, 64, 81, 104, 113, 92, //
    49, 64, 78, 87, 103, 121, 120, 101, //
    72, 92, 95, 98, 112, 100, 103, 99,
];

/// An 8x8 quantization table tagged with the quality factor it came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuantTable {
    entries: [u16; BLOCK_LEN],
    qf: u8,
}

impl QuantTable {
    /// IJG-scaled luminance table for quality factor `qf` in `1..=100`.
    pub fn for_quality(qf: u8) -> Result<Self> {
        if !(1..=100).contains(&qf) {
            return Err(invalid(format!("quality factor {qf} outside 1..=100")));
        }
        let q = u32::from(qf);
        let scale = if q < 50 { 5000 / q } else { 200 - 2 * q };
        let mut entries = [0u16; BLOCK_LEN];
        for (e, &b) in entries.iter_mut().zip(BASE_LUMINANCE.iter()) {
            *e = ((u32::from(b) * scale + 50) / 100).clamp(1, 255) as u16;
        }
        Ok(Self { entries, qf })
    }

    /// Builds a table from explicit entries, e.g. when reading a container.
    pub fn from_entries(entries: [u16; BLOCK_LEN], qf: u8) -> Result<Self> {
        if let Some(bad) = entries.iter().find(|&&e| !(1..=255).contains(&e)) {
            return Err(invalid(format!("quantization step {bad} outside 1..=255")));
        }
        if !(1..=100).contains(&qf) {
            return Err(invalid(format!("quality factor {qf} outside 1..=100")));
        }
        Ok(Self { entries, qf })
    }

    pub fn entries(&self) -> &[u16; BLOCK_LEN] {
        &self.entries
    }

    /// Step for mode `k` (row-major index within the block).
    #[inline]
    pub fn step(&self, k: usize) -> f64 {
        f64::from(self.entries[k])
    }

    pub fn qf(&self) -> u8 {
        self.qf
    }
}

/// Convenience wrapper matching the usual free-function spelling.
pub fn quant_table_for_qf(qf: u8) -> Result<QuantTable> {
    QuantTable::for_quality(qf)
}
