//! Orthonormal 8x8 type-II DCT and its inverse, in double precision.

use std::sync::OnceLock;

use crate::BLOCK_LEN;

/// An 8x8 block of reals, row-major.
pub type Block = [f64; BLOCK_LEN];

/// One-dimensional basis, `basis[u][x] = c(u) cos((2x + 1) u pi / 16)`.
/// Mode `v * 8 + u` of the 2-D transform is `basis[v][y] * basis[u][x]`.
pub fn dct_basis() -> &'static [[f64; 8]; 8] {
    basis()
}

fn basis() -> &'static [[f64; 8]; 8] {
    static BASIS: OnceLock<[[f64; 8]; 8]> = OnceLock::new();
    BASIS.get_or_init(|| {
        let mut b = [[0.0; 8]; 8];
        for (u, row) in b.iter_mut().enumerate() {
            let c = if u == 0 { (1.0f64 / 8.0).sqrt() } else { (2.0f64 / 8.0).sqrt() };
            for (x, v) in row.iter_mut().enumerate() {
                *v = c * (((2 * x + 1) as f64) * (u as f64) * std::f64::consts::PI / 16.0).cos();
            }
        }
        b
    })
}

/// Orthonormal 2-D DCT-II of a spatial block.
pub fn forward_dct(block: &Block) -> Block {
    let b = basis();
    // rows first: tmp[y][u] = sum_x block[y][x] b[u][x]
    let mut tmp = [0.0; BLOCK_LEN];
    for y in 0..8 {
        for u in 0..8 {
            let mut acc = 0.0;
            for x in 0..8 {
                acc += block[y * 8 + x] * b[u][x];
            }
            tmp[y * 8 + u] = acc;
        }
    }
    let mut out = [0.0; BLOCK_LEN];
    for v in 0..8 {
        for u in 0..8 {
            let mut acc = 0.0;
            for y in 0..8 {
                acc += tmp[y * 8 + u] * b[v][y];
            }
            out[v * 8 + u] = acc;
        }
    }
    out
}

/// Inverse of [`forward_dct`].
pub fn inverse_dct(coeffs: &Block) -> Block {
    let b = basis();
    let mut tmp = [0.0; BLOCK_LEN];
    for y in 0..8 {
        for u in 0..8 {
            let mut acc = 0.0;
            for v in 0..8 {
                acc += coeffs[v * 8 + u] * b[v][y];
            }
            tmp[y * 8 + u] = acc;
        }
    }
    let mut out = [0.0; BLOCK_LEN];
    for y in 0..8 {
        for x in 0..8 {
            let mut acc = 0.0;
            for u in 0..8 {
                acc += tmp[y * 8 + u] * b[u][x];
            }
            out[y * 8 + x] = acc;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn max_abs_diff(a: &Block, b: &Block) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    }

    #[test]
    fn constant_block_has_only_dc() {
        let c = forward_dct(&[3.0; 64]);
        assert!((c[0] - 24.0).abs() < 1e-12);
        assert!(c[1..].iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn zero_maps_to_zero() {
        assert_eq!(forward_dct(&[0.0; 64]), [0.0; 64]);
        assert_eq!(inverse_dct(&[0.0; 64]), [0.0; 64]);
    }

    #[test]
    fn dc_eight_inverts_to_ones() {
        let mut c = [0.0; 64];
        c[0] = 8.0;
        let s = inverse_dct(&c);
        assert!(s.iter().all(|v| (v - 1.0).abs() < 1e-12));
    }

    #[test]
    fn round_trip_random_blocks() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let mut x = [0.0; 64];
            x.iter_mut().for_each(|v| *v = rng.gen_range(-300.0..300.0));
            assert!(max_abs_diff(&inverse_dct(&forward_dct(&x)), &x) < 1e-9);
            assert!(max_abs_diff(&forward_dct(&inverse_dct(&x)), &x) < 1e-9);
        }
    }

    // Parseval: an orthonormal transform preserves energy.
    #[test]
    fn energy_preserved() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut x = [0.0; 64];
        x.iter_mut().for_each(|v| *v = rng.gen_range(-1.0..1.0));
        let e0: f64 = x.iter().map(|v| v * v).sum();
        let e1: f64 = forward_dct(&x).iter().map(|v| v * v).sum();
        assert!((e0 - e1).abs() < 1e-12);
    }
}
