//! Embedding costs: J-UNIWARD base distortion, direction bias toward the
//! reference cover, and conversion to per-direction modification costs.
//!
//! All per-coefficient maps use the block layout `block * 64 + mode`.

pub mod juniward;

use std::io::Write;
use std::path::Path;

pub use juniward::{juniward_costs, SIGMA};

use crate::error::{invalid, Result};
use crate::jpeg::{CoeffImage, QuantTable};
use crate::BLOCK_LEN;

/// Cost assigned to coefficients the embedder must never change.
pub const WET_COST: f64 = 1e13;

/// Directional costs for one cover.
#[derive(Debug, Clone, PartialEq)]
pub struct CostMaps {
    pub rho_plus: Vec<f64>,
    pub rho_minus: Vec<f64>,
    pub zeta_plus: Vec<f64>,
    pub zeta_minus: Vec<f64>,
    pub xi_plus: Vec<f64>,
    pub xi_minus: Vec<f64>,
    pub wet_threshold: f64,
}

impl CostMaps {
    pub fn len(&self) -> usize {
        self.xi_plus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xi_plus.is_empty()
    }

    /// Cost of changing the parity at `index` in the cheaper direction, and
    /// whether that direction is upward.
    #[inline]
    pub fn cheapest(&self, index: usize) -> (f64, bool) {
        let (p, m) = (self.xi_plus[index], self.xi_minus[index]);
        if p <= m {
            (p, true)
        } else {
            (m, false)
        }
    }

    pub fn is_wet(&self, index: usize) -> bool {
        self.cheapest(index).0 >= self.wet_threshold
    }

    /// Marks the DC term of every block and any change that would leave the
    /// `i16` range as wet.
    pub fn mark_wet(&mut self, c: &CoeffImage) {
        for (bi, block) in c.blocks().iter().enumerate() {
            for (k, &v) in block.iter().enumerate() {
                let i = bi * BLOCK_LEN + k;
                if k == 0 {
                    self.xi_plus[i] = self.wet_threshold;
                    self.xi_minus[i] = self.wet_threshold;
                    continue;
                }
                if v == i16::MAX {
                    self.xi_plus[i] = self.wet_threshold;
                }
                if v == i16::MIN {
                    self.xi_minus[i] = self.wet_threshold;
                }
            }
        }
        for x in self.xi_plus.iter_mut().chain(self.xi_minus.iter_mut()) {
            if !x.is_finite() || *x > self.wet_threshold {
                *x = self.wet_threshold;
            }
        }
    }
}

/// Splits base costs into `(rho_plus, rho_minus)`: the direction that moves
/// the robust cover toward the reference cover is scaled by `mu`.
pub fn asymmetric_costs(
    rho: &[f64],
    robust: &CoeffImage,
    reference: &CoeffImage,
    mu: f64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if !robust.congruent(reference) {
        return Err(invalid("robust and reference covers differ in shape"));
    }
    if rho.len() != robust.blocks().len() * BLOCK_LEN {
        return Err(invalid("cost map does not match the cover"));
    }
    if !(mu > 0.0 && mu <= 1.0) {
        return Err(invalid(format!("mu must lie in (0, 1], got {mu}")));
    }
    let mut plus = rho.to_vec();
    let mut minus = rho.to_vec();
    let pairs = robust.blocks().iter().zip(reference.blocks()).flat_map(|(a, b)| a.iter().zip(b.iter()));
    for (i, (rob, refc)) in pairs.enumerate() {
        if refc > rob {
            plus[i] *= mu;
        } else if refc < rob {
            minus[i] *= mu;
        }
    }
    Ok((plus, minus))
}

/// `zeta = rho / q`, `xi = zeta * d` for both directions.
pub fn modification_costs(
    rho_plus: &[f64],
    rho_minus: &[f64],
    qt: &QuantTable,
    d_plus: &[f64],
    d_minus: &[f64],
) -> Result<CostMaps> {
    let n = rho_plus.len();
    if [rho_minus.len(), d_plus.len(), d_minus.len()].iter().any(|&l| l != n) || !n.is_multiple_of(BLOCK_LEN) {
        return Err(invalid("cost and distance maps differ in length"));
    }
    let zeta = |rho: &[f64]| -> Vec<f64> {
        rho.iter().enumerate().map(|(i, r)| r / qt.step(i % BLOCK_LEN)).collect()
    };
    let zeta_plus = zeta(rho_plus);
    let zeta_minus = zeta(rho_minus);
    let xi_plus = zeta_plus.iter().zip(d_plus).map(|(z, d)| z * d).collect();
    let xi_minus = zeta_minus.iter().zip(d_minus).map(|(z, d)| z * d).collect();
    Ok(CostMaps {
        rho_plus: rho_plus.to_vec(),
        rho_minus: rho_minus.to_vec(),
        zeta_plus,
        zeta_minus,
        xi_plus,
        xi_minus,
        wet_threshold: WET_COST,
    })
}

/// Reorders a block-layout map into the coefficient plane
/// (`row = 8 * block_row + v`, `col = 8 * block_col + u`), row-major.
pub fn to_plane(values: &[f64], width: usize, height: usize) -> Vec<f64> {
    let bw = width / 8;
    let mut out = vec![0.0; width * height];
    for (i, &v) in values.iter().enumerate().take(width * height) {
        let (bi, k) = (i / BLOCK_LEN, i % BLOCK_LEN);
        let row = (bi / bw) * 8 + k / 8;
        let col = (bi % bw) * 8 + k % 8;
        out[row * width + col] = v;
    }
    out
}

/// Dumps a plane as little-endian `f64`, row-major, no header.
pub fn write_plane(path: impl AsRef<Path>, values: &[f64], width: usize, height: usize) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    for v in to_plane(values, width, height) {
        f.write_all(&v.to_le_bytes())?;
    }
    f.flush()?;
    Ok(())
}
