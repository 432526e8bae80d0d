//! Deterministic synthetic grayscale corpus.
//!
//! Each image mixes a slow gradient, low-frequency undulation, a spatially
//! varying texture field and, as `saturation` grows, stretched contrast and
//! hard-clipped bright and dark patches. Clipped plateaus next to texture are
//! what make the decoder's reconstruction overflow.

use std::f64::consts::TAU;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::jpeg::pgm::{self, GrayPixels};

pub const DEFAULT_IMAGE_SIZE: usize = 128;
pub const MANIFEST_NAME: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub id: String,
    pub file: String,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub seed: u64,
    pub saturation: f64,
    pub size: usize,
    pub images: Vec<ManifestEntry>,
}

impl Manifest {
    pub fn read(dir: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(dir.as_ref().join(MANIFEST_NAME))?;
        serde_json::from_str(&text).map_err(|e| crate::StegoError::Format(format!("manifest: {e}")))
    }

    pub fn paths(&self, dir: &Path) -> Vec<PathBuf> {
        self.images.iter().map(|e| dir.join(&e.file)).collect()
    }
}

fn image_seed(seed: u64, index: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (index as u64).wrapping_add(1).wrapping_mul(0xD1B5_4A32_D192_ED03)
}

/// Sum of random sinusoids with frequencies in `[f_lo, f_hi]` cycles per pixel.
struct Waves(Vec<(f64, f64, f64, f64)>);

impl Waves {
    fn new(rng: &mut ChaCha20Rng, count: usize, f_lo: f64, f_hi: f64, amp: f64) -> Self {
        Self(
            (0..count)
                .map(|_| {
                    let f = rng.gen_range(f_lo..f_hi);
                    let theta = rng.gen_range(0.0..TAU);
                    (f * theta.cos(), f * theta.sin(), rng.gen_range(0.0..TAU), amp * rng.gen_range(0.3..1.0))
                })
                .collect(),
        )
    }

    fn at(&self, x: f64, y: f64) -> f64 {
        self.0.iter().map(|&(fx, fy, ph, a)| a * (TAU * (fx * x + fy * y) + ph).sin()).sum()
    }
}

/// One synthetic image. `saturation` in `[0, 1]`.
pub fn synth_image(size: usize, saturation: f64, seed: u64) -> Result<GrayPixels> {
    if size == 0 || !size.is_multiple_of(8) {
        return Err(invalid(format!("image size must be a positive multiple of 8, got {size}")));
    }
    if !(0.0..=1.0).contains(&saturation) {
        return Err(invalid(format!("saturation must lie in [0, 1], got {saturation}")));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let s = size as f64;
    let (gx, gy) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    let swell = Waves::new(&mut rng, 4, 0.5 / s, 4.0 / s, 25.0);
    let mask = Waves::new(&mut rng, 3, 0.5 / s, 3.0 / s, 1.0);
    let texture = Waves::new(&mut rng, 8, 0.04, 0.35, 6.0);

    let mut raw = Vec::with_capacity(size * size);
    for yi in 0..size {
        for xi in 0..size {
            let (x, y) = (xi as f64, yi as f64);
            let grad = 40.0 * (gx * x + gy * y) / s;
            let m = (0.5 + 0.5 * mask.at(x, y)).clamp(0.0, 1.0);
            let noise = rng.gen_range(-1.0..1.0) * 6.0;
            raw.push(grad + swell.at(x, y) + m * (texture.at(x, y) + noise));
        }
    }

    // Map to a safe range and stretch it past [0, 255] as saturation grows.
    let (lo, hi) = raw.iter().fold((f64::MAX, f64::MIN), |(a, b), &v| (a.min(v), b.max(v)));
    let span = (hi - lo).max(1e-9);
    let (dst_lo, dst_hi) = (40.0 - 140.0 * saturation, 215.0 + 140.0 * saturation);
    let mut px: Vec<f64> = raw.iter().map(|&v| dst_lo + (v - lo) / span * (dst_hi - dst_lo)).collect();

    let patches = (saturation * 10.0).round() as usize;
    for _ in 0..patches {
        let level = if rng.gen_bool(0.5) { 300.0 } else { -45.0 };
        let (cx, cy) = (rng.gen_range(0.0..s), rng.gen_range(0.0..s));
        let r = rng.gen_range(0.05 * s..0.18 * s);
        for yi in 0..size {
            for xi in 0..size {
                let d = ((xi as f64 - cx).powi(2) + (yi as f64 - cy).powi(2)).sqrt();
                if d < r {
                    let i = yi * size + xi;
                    px[i] = 0.5 * px[i] + 0.5 * level;
                    if level > 0.0 {
                        px[i] += 60.0;
                    }
                }
            }
        }
    }

    Ok(GrayPixels {
        width: size,
        height: size,
        data: px.iter().map(|v| v.round().clamp(0.0, 255.0) as u8).collect(),
    })
}

/// Writes `count` images of side `size` and a manifest into `out`.
pub fn make_test_corpus(out: impl AsRef<Path>, count: usize, saturation: f64, seed: u64, size: usize) -> Result<Manifest> {
    let out = out.as_ref();
    std::fs::create_dir_all(out)?;
    let mut images = Vec::with_capacity(count);
    for i in 0..count {
        let img_seed = image_seed(seed, i);
        let px = synth_image(size, saturation, img_seed)?;
        let id = format!("img{i:04}");
        let file = format!("{id}.pgm");
        pgm::write(out.join(&file), &px)?;
        images.push(ManifestEntry { id, file, seed: img_seed });
    }
    let manifest = Manifest { seed, saturation, size, images };
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    std::fs::write(out.join(MANIFEST_NAME), json + "\n")?;
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_pixels() {
        assert_eq!(synth_image(32, 0.4, 9).unwrap(), synth_image(32, 0.4, 9).unwrap());
        assert_ne!(synth_image(32, 0.4, 9).unwrap(), synth_image(32, 0.4, 10).unwrap());
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(synth_image(30, 0.0, 0).is_err());
        assert!(synth_image(32, 1.5, 0).is_err());
    }

    #[test]
    fn unsaturated_images_keep_a_margin() {
        let px = synth_image(64, 0.0, 3).unwrap();
        assert!(px.data.iter().all(|&v| (40..=215).contains(&v)));
    }

    #[test]
    fn corpus_is_reproducible() {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        let ma = make_test_corpus(a.path(), 2, 0.5, 7, 32).unwrap();
        let mb = make_test_corpus(b.path(), 2, 0.5, 7, 32).unwrap();
        assert_eq!(ma, mb);
        for e in &ma.images {
            assert_eq!(std::fs::read(a.path().join(&e.file)).unwrap(), std::fs::read(b.path().join(&e.file)).unwrap());
        }
        assert_eq!(Manifest::read(a.path()).unwrap(), ma);
    }
}
