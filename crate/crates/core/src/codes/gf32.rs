//! Arithmetic in GF(2^5) with primitive polynomial `x^5 + x^2 + 1`.

use std::sync::OnceLock;

pub const PRIMITIVE_POLY: u8 = 0b10_0101;
/// Multiplicative group order.
pub const ORDER: usize = 31;

struct Tables {
    exp: [u8; 2 * ORDER],
    log: [u8; 32],
}

fn tables() -> &'static Tables {
    static T: OnceLock<Tables> = OnceLock::new();
    T.get_or_init(|| {
        let mut exp = [0u8; 2 * ORDER];
        let mut log = [0u8; 32];
        let mut x = 1u8;
        for i in 0..ORDER {
            exp[i] = x;
            exp[i + ORDER] = x;
            log[x as usize] = i as u8;
            x <<= 1;
            if x & 0b10_0000 != 0 {
                x ^= PRIMITIVE_POLY;
            }
        }
        Tables { exp, log }
    })
}

#[inline]
pub fn add(a: u8, b: u8) -> u8 {
    a ^ b
}

#[inline]
pub fn mul(a: u8, b: u8) -> u8 {
    if a == 0 || b == 0 {
        return 0;
    }
    let t = tables();
    t.exp[t.log[a as usize] as usize + t.log[b as usize] as usize]
}

/// Multiplicative inverse; panics on zero.
#[inline]
pub fn inv(a: u8) -> u8 {
    assert!(a != 0, "zero has no inverse in GF(32)");
    let t = tables();
    t.exp[(ORDER - t.log[a as usize] as usize) % ORDER]
}

#[inline]
pub fn div(a: u8, b: u8) -> u8 {
    mul(a, inv(b))
}

/// `alpha^e` for any integer exponent.
#[inline]
pub fn alpha_pow(e: i64) -> u8 {
    tables().exp[e.rem_euclid(ORDER as i64) as usize]
}

/// Evaluates `p(x)` with `p[i]` the coefficient of `x^i`.
pub fn poly_eval_low(p: &[u8], x: u8) -> u8 {
    p.iter().rev().fold(0, |acc, &c| add(mul(acc, x), c))
}
