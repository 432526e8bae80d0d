//! J-UNIWARD additive distortion for JPEG coefficients.
//!
//! Costs are the sum, over the LH/HL/HH planes of an undecimated Daubechies-8
//! filter bank, of the magnitude of the residual change caused by a unit
//! coefficient change, weighted by `1 / (sigma + |cover residual|)`.
//! The image is extended symmetrically before filtering, and near the border
//! a change is counted together with its mirrored copies, so the costs equal
//! a literal change-and-refilter computation everywhere.

use rayon::prelude::*;

use crate::jpeg::{dct_basis, to_spatial, CoeffImage, SpatialImage};
use crate::BLOCK_LEN;

/// Stabilizing constant in the residual weights.
pub const SIGMA: f64 = 1.0 / 64.0;

/// Daubechies-8 decomposition high-pass filter.
pub const DB8_HIGH: [f64; 16] = [
    -0.054_415_842_243_104_01,
    0.312_871_590_914_299_95,
    -0.675_630_736_297_289_8,
    0.585_354_683_654_206_7,
    0.015_829_105_256_349_306,
    -0.284_015_542_961_546_9,
    -0.000_472_484_573_913_282_8,
    0.128_747_426_620_478_47,
    0.017_369_301_001_807_547,
    -0.044_088_253_930_794_755,
    -0.013_981_027_917_398_282,
    0.008_746_094_047_405_777,
    0.004_870_352_993_451_574,
    -0.000_391_740_373_376_947_05,
    -0.000_675_449_406_450_569_3,
    -0.000_117_476_784_124_769_53,
];

pub const TAPS: usize = 16;

/// Low-pass partner: alternating signs over the reversed high-pass.
pub fn db8_low() -> [f64; TAPS] {
    let mut lo = [0.0; TAPS];
    for (i, v) in lo.iter_mut().enumerate() {
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        *v = sign * DB8_HIGH[TAPS - 1 - i];
    }
    lo
}

/// The three directional kernels as (vertical, horizontal) factor pairs:
/// `kernel[i][j] = vertical[i] * horizontal[j]`.
pub fn filter_bank() -> [([f64; TAPS], [f64; TAPS]); 3] {
    let lo = db8_low();
    let hi = DB8_HIGH;
    [(lo, hi), (hi, lo), (hi, hi)]
}

/// Mirror index into `[0, n)`, repeating the edge sample (`x[-1] = x[0]`).
pub fn reflect(mut i: isize, n: usize) -> usize {
    let n = n as isize;
    loop {
        if i < 0 {
            i = -i - 1;
        } else if i >= n {
            i = 2 * n - i - 1;
        } else {
            return i as usize;
        }
    }
}

/// Full-extent residual `R[n] = sum_m F[m] X[n - m]` over
/// `(height + 15) x (width + 15)`, with the image symmetrically extended.
pub fn residual(img: &SpatialImage, vertical: &[f64; TAPS], horizontal: &[f64; TAPS]) -> Vec<f64> {
    let (h, w) = (img.height(), img.width());
    let (eh, ew) = (h + TAPS - 1, w + TAPS - 1);
    let px = img.pixels();
    let at = |r: isize, c: isize| px[reflect(r, h) * w + reflect(c, w)];

    // Horizontal pass over the vertically extended rows [-15, h + 15).
    let rows = h + 2 * (TAPS - 1);
    let mut tmp = vec![0.0; rows * ew];
    tmp.par_chunks_mut(ew).enumerate().for_each(|(ri, out)| {
        let r = ri as isize - (TAPS as isize - 1);
        for (n2, o) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (m2, f) in horizontal.iter().enumerate() {
                acc += f * at(r, n2 as isize - m2 as isize);
            }
            *o = acc;
        }
    });
    // Vertical pass: tmp row index ri holds image row ri - 15.
    let mut out = vec![0.0; eh * ew];
    out.par_chunks_mut(ew).enumerate().for_each(|(n1, row)| {
        for (m1, f) in vertical.iter().enumerate() {
            // image row n1 - m1  ->  tmp row n1 - m1 + 15
            let src = &tmp[(n1 + TAPS - 1 - m1) * ew..(n1 + TAPS - m1) * ew];
            for (o, s) in row.iter_mut().zip(src) {
                *o += f * s;
            }
        }
    });
    out
}

/// Residual change along one axis caused by a unit basis function.
///
/// The spatial change of mode `(v, u)` in a block is `a_v(y) a_u(x)` and each
/// kernel is `vertical (x) horizontal`, so the residual change is the outer
/// product of two 1-D convolutions. Working on the symmetrically extended
/// axis folds in the mirrored copies a change gets near the image border.
struct Profile {
    start: usize,
    /// `[filter kind][frequency]`, each covering `start .. start + len`.
    values: [[Vec<f64>; 8]; 2],
}

fn axis_profile(origin: usize, n: usize, filters: &[[f64; TAPS]; 2]) -> Profile {
    let basis = dct_basis();
    // Extended-axis positions whose mirrored source lies in this block.
    let support: Vec<(isize, usize)> = (-(TAPS as isize - 1)..(n + TAPS - 1) as isize)
        .filter_map(|i| {
            let r = reflect(i, n);
            (origin..origin + 8).contains(&r).then(|| (i, r - origin))
        })
        .collect();
    let lo = support.first().map_or(0, |s| s.0).max(0) as usize;
    let hi = (support.last().map_or(0, |s| s.0) + TAPS as isize).min((n + TAPS - 1) as isize) as usize;
    let values = filters.map(|f| {
        std::array::from_fn(|freq| {
            (lo..hi)
                .map(|out| {
                    let mut acc = 0.0;
                    for &(i, y) in &support {
                        let m = out as isize - i;
                        if (0..TAPS as isize).contains(&m) {
                            acc += f[m as usize] * basis[freq][y];
                        }
                    }
                    acc.abs()
                })
                .collect()
        })
    });
    Profile { start: lo, values }
}

/// Base J-UNIWARD cost of a unit change for every coefficient, laid out as
/// `block * 64 + mode`.
pub fn juniward_costs(c: &CoeffImage) -> Vec<f64> {
    let spatial = to_spatial(c);
    let (h, w) = (spatial.height(), spatial.width());
    let ew = w + TAPS - 1;
    let weights: Vec<Vec<f64>> = filter_bank()
        .iter()
        .map(|(v, h)| residual(&spatial, v, h).into_iter().map(|r| 1.0 / (SIGMA + r.abs())).collect())
        .collect();
    let lo = db8_low();
    let kinds = [lo, DB8_HIGH];
    // (vertical kind, horizontal kind) per filter of the bank
    const KINDS: [(usize, usize); 3] = [(0, 1), (1, 0), (1, 1)];
    let rows: Vec<Profile> = (0..c.blocks_high()).map(|br| axis_profile(br * 8, h, &kinds)).collect();
    let cols: Vec<Profile> = (0..c.blocks_wide()).map(|bc| axis_profile(bc * 8, w, &kinds)).collect();
    let qt = *c.qtable();
    let bw = c.blocks_wide();

    let mut rho = vec![0.0; c.blocks().len() * BLOCK_LEN];
    rho.par_chunks_mut(BLOCK_LEN).enumerate().for_each(|(bi, out)| {
        let (rp, cp) = (&rows[bi / bw], &cols[bi % bw]);
        out.fill(0.0);
        for (f, wmap) in weights.iter().enumerate() {
            let (vk, hk) = KINDS[f];
            for v in 0..8 {
                // t[n2] = sum_n1 |P_v[n1]| W[n1][n2] over the column window
                let pv = &rp.values[vk][v];
                let width = cp.values[hk][0].len();
                let mut t = vec![0.0; width];
                for (a, p) in pv.iter().enumerate() {
                    let row = &wmap[(rp.start + a) * ew + cp.start..(rp.start + a) * ew + cp.start + width];
                    for (ti, wv) in t.iter_mut().zip(row) {
                        *ti += p * wv;
                    }
                }
                for u in 0..8 {
                    let qu = &cp.values[hk][u];
                    out[v * 8 + u] += t.iter().zip(qu).map(|(a, b)| a * b).sum::<f64>();
                }
            }
        }
        for (k, o) in out.iter_mut().enumerate() {
            *o *= qt.step(k);
        }
    });
    rho
}
