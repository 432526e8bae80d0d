//! J-UNIWARD costs against a brute-force oracle that literally changes one
//! coefficient, decompresses, refilters the symmetrically padded image and
//! sums the weighted residual differences.

use jstego::cost::juniward::{db8_low, juniward_costs, reflect, DB8_HIGH, SIGMA};
use jstego::harness::synth_image;
use jstego::jpeg::{to_spatial, CoeffImage, QuantTable, SpatialImage};

const PAD: usize = 15;

fn kernels() -> Vec<[[f64; 16]; 16]> {
    let lo = db8_low();
    let hi = DB8_HIGH;
    [(lo, hi), (hi, lo), (hi, hi)]
        .iter()
        .map(|(v, h)| {
            let mut k = [[0.0; 16]; 16];
            for (i, row) in k.iter_mut().enumerate() {
                for (j, x) in row.iter_mut().enumerate() {
                    *x = v[i] * h[j];
                }
            }
            k
        })
        .collect()
}

/// Full 2-D convolution of the padded image, output `(h + 15) x (w + 15)`.
fn naive_residual(img: &SpatialImage, k: &[[f64; 16]; 16]) -> Vec<f64> {
    let (h, w) = (img.height(), img.width());
    let px = img.pixels();
    let (eh, ew) = (h + PAD, w + PAD);
    let mut out = vec![0.0; eh * ew];
    for n1 in 0..eh {
        for n2 in 0..ew {
            let mut acc = 0.0;
            for (m1, row) in k.iter().enumerate() {
                let r = reflect(n1 as isize - m1 as isize, h);
                for (m2, f) in row.iter().enumerate() {
                    acc += f * px[r * w + reflect(n2 as isize - m2 as isize, w)];
                }
            }
            out[n1 * ew + n2] = acc;
        }
    }
    out
}

fn oracle_cost(c: &CoeffImage, block: usize, mode: usize, delta: i16, base: &[Vec<f64>]) -> f64 {
    let mut changed = c.clone();
    changed.blocks_mut()[block][mode] += delta;
    let spatial = to_spatial(&changed);
    kernels()
        .iter()
        .zip(base)
        .map(|(k, r0)| {
            naive_residual(&spatial, k)
                .iter()
                .zip(r0)
                .map(|(r1, r0)| (r1 - r0).abs() / (SIGMA + r0.abs()))
                .sum::<f64>()
        })
        .sum()
}

fn cover(size: usize, seed: u64) -> CoeffImage {
    let px = synth_image(size, 0.2, seed).unwrap();
    CoeffImage::from_pixels(&px.data, size, size, QuantTable::for_quality(75).unwrap()).unwrap()
}

fn base_residuals(c: &CoeffImage) -> Vec<Vec<f64>> {
    let s = to_spatial(c);
    kernels().iter().map(|k| naive_residual(&s, k)).collect()
}

#[test]
fn interior_and_edge_blocks_match_brute_force() {
    let c = cover(48, 11);
    let rho = juniward_costs(&c);
    let base = base_residuals(&c);
    for by in [0, 2, 3, 5] {
        for bx in [0, 2, 3] {
            let b = by * 6 + bx;
            for mode in (0..64).step_by(5) {
                let want = oracle_cost(&c, b, mode, 1, &base);
                let got = rho[b * 64 + mode];
                assert!((got - want).abs() <= 1e-9 * want, "block {b} mode {mode}: {got} vs {want}");
            }
        }
    }
}

#[test]
fn plus_and_minus_changes_cost_the_same() {
    let c = cover(48, 12);
    let base = base_residuals(&c);
    for mode in [1, 9, 35, 63] {
        let up = oracle_cost(&c, 14, mode, 1, &base);
        let down = oracle_cost(&c, 14, mode, -1, &base);
        assert!((up - down).abs() <= 1e-9 * up);
    }
}

#[test]
fn border_blocks_match_brute_force_with_mirroring() {
    // Every block of a 16x16 image touches the border, so the padded
    // change includes mirrored copies; the axis profiles account for them.
    let c = cover(16, 13);
    let rho = juniward_costs(&c);
    let base = base_residuals(&c);
    for b in 0..4 {
        for mode in 0..64 {
            let want = oracle_cost(&c, b, mode, 1, &base);
            let got = rho[b * 64 + mode];
            assert!((got - want).abs() <= 1e-9 * want, "block {b} mode {mode}: {got} vs {want}");
        }
    }
}

#[test]
fn uniform_image_costs_are_translation_invariant() {
    let qt = QuantTable::for_quality(65).unwrap();
    let c = CoeffImage::from_pixels(&vec![90u8; 64 * 64], 64, 64, qt).unwrap();
    let rho = juniward_costs(&c);
    for mode in 1..64 {
        let r0 = rho[(2 * 8 + 2) * 64 + mode];
        for b in (2..6).flat_map(|by| (2..6).map(move |bx| by * 8 + bx)) {
            let r = rho[b * 64 + mode];
            assert!((r - r0).abs() <= 1e-9 * r0, "mode {mode} block {b}");
        }
    }
}

#[test]
fn block_periodic_texture_costs_repeat_away_from_borders() {
    // An 8-periodic image gives identical blocks; blocks two or more away
    // from the border see identical residual windows.
    let qt = QuantTable::for_quality(65).unwrap();
    let px: Vec<u8> = (0..64 * 64).map(|i| ((i % 8) * 13 + (i / 64 % 8) * 7 + 40) as u8).collect();
    let c = CoeffImage::from_pixels(&px, 64, 64, qt).unwrap();
    let rho = juniward_costs(&c);
    let reference = 2 * 8 + 2;
    for by in 2..6 {
        for bx in 2..6 {
            let b = by * 8 + bx;
            for mode in 0..64 {
                let (r, r0) = (rho[b * 64 + mode], rho[reference * 64 + mode]);
                assert!((r - r0).abs() <= 1e-9 * r0, "block {b} mode {mode}");
            }
        }
    }
}
