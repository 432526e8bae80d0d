//! Image quality and payload metrics.

use serde::{Serialize, Serializer};

use crate::error::{invalid, Result};
use crate::jpeg::{round_spatial, to_spatial, truncate_spatial, CoeffImage, SpatialImage};
use crate::preprocess::{region_of, Region};

/// Side of the uniform SSIM window.
pub const SSIM_WINDOW: usize = 8;
const C1: f64 = (0.01 * 255.0) * (0.01 * 255.0);
const C2: f64 = (0.03 * 255.0) * (0.03 * 255.0);

/// Serializes infinite PSNR as the string `"inf"`.
pub fn serialize_psnr<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_infinite() {
        s.serialize_str("inf")
    } else {
        s.serialize_f64(*v)
    }
}

pub fn format_psnr(v: f64) -> String {
    if v.is_infinite() {
        "inf".to_string()
    } else {
        format!("{v:.4}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QualityReport {
    #[serde(serialize_with = "serialize_psnr")]
    pub psnr: f64,
    pub ssim: f64,
    pub boundary_pixels_modified: usize,
    pub interior_pixels_modified: usize,
}

/// Decoder output: reconstruction, truncation and rounding.
pub fn decode(c: &CoeffImage) -> SpatialImage {
    round_spatial(&truncate_spatial(&to_spatial(c)))
}

pub fn psnr(a: &SpatialImage, b: &SpatialImage) -> Result<f64> {
    same_dims(a, b)?;
    let mse = a.pixels().iter().zip(b.pixels()).map(|(x, y)| (x - y) * (x - y)).sum::<f64>()
        / a.pixels().len() as f64;
    Ok(if mse == 0.0 { f64::INFINITY } else { 10.0 * (255.0 * 255.0 / mse).log10() })
}

/// Mean SSIM over all `8x8` windows (stride 1), computed in the `[0, 255]`
/// domain.
pub fn ssim(a: &SpatialImage, b: &SpatialImage) -> Result<f64> {
    same_dims(a, b)?;
    let (w, h) = (a.width(), a.height());
    let n = (SSIM_WINDOW * SSIM_WINDOW) as f64;
    let (pa, pb) = (a.pixels(), b.pixels());
    let mut total = 0.0;
    let mut windows = 0usize;
    for y in 0..=h - SSIM_WINDOW {
        for x in 0..=w - SSIM_WINDOW {
            let (mut sa, mut sb, mut saa, mut sbb, mut sab) = (0.0, 0.0, 0.0, 0.0, 0.0);
            for r in y..y + SSIM_WINDOW {
                for c in x..x + SSIM_WINDOW {
                    let va = pa[r * w + c] + 128.0;
                    let vb = pb[r * w + c] + 128.0;
                    sa += va;
                    sb += vb;
                    saa += va * va;
                    sbb += vb * vb;
                    sab += va * vb;
                }
            }
            let (ma, mb) = (sa / n, sb / n);
            let va = saa / n - ma * ma;
            let vb = sbb / n - mb * mb;
            let cov = sab / n - ma * mb;
            total += ((2.0 * ma * mb + C1) * (2.0 * cov + C2))
                / ((ma * ma + mb * mb + C1) * (va + vb + C2));
            windows += 1;
        }
    }
    Ok(total / windows as f64)
}

pub fn image_quality(a: &SpatialImage, b: &SpatialImage) -> Result<QualityReport> {
    let psnr = psnr(a, b)?;
    let ssim = if psnr.is_infinite() { 1.0 } else { ssim(a, b)? };
    let w = a.width();
    let (mut boundary, mut interior) = (0, 0);
    for (i, (x, y)) in a.pixels().iter().zip(b.pixels()).enumerate() {
        if x != y {
            let in_block = (i / w % 8) * 8 + (i % w) % 8;
            match region_of(in_block) {
                Region::Boundary => boundary += 1,
                Region::Interior => interior += 1,
            }
        }
    }
    Ok(QualityReport {
        psnr,
        ssim,
        boundary_pixels_modified: boundary,
        interior_pixels_modified: interior,
    })
}

/// Bits per non-zero AC coefficient of the original cover.
pub fn relative_payload(message_bits: usize, original: &CoeffImage) -> Result<f64> {
    let nzac = original.nonzero_ac();
    if nzac == 0 {
        return Err(crate::StegoError::DegenerateInput(
            "cover has no non-zero AC coefficients".into(),
        ));
    }
    Ok(message_bits as f64 / nzac as f64)
}

fn same_dims(a: &SpatialImage, b: &SpatialImage) -> Result<()> {
    if a.width() != b.width() || a.height() != b.height() {
        return Err(invalid(format!(
            "image sizes differ: {}x{} vs {}x{}",
            a.width(),
            a.height(),
            b.width(),
            b.height()
        )));
    }
    Ok(())
}
