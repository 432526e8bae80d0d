//! Reed-Solomon RS(31, k) over GF(32), systematic, with bounded-distance
//! decoding (syndromes, Berlekamp-Massey, Chien search, Forney).
//!
//! A codeword is stored highest degree first: `c[i]` is the coefficient of
//! `x^(30 - i)`, message symbols occupy `c[0..k]`, parity `c[k..31]`.
//! The generator has roots `alpha^1 ..= alpha^(31 - k)`.

use super::gf32::{add, alpha_pow, div, mul, poly_eval_low};
use crate::error::{invalid, Result};

pub const N: usize = 31;
pub const SYMBOL_BITS: usize = 5;
pub const CODEWORD_BITS: usize = N * SYMBOL_BITS;
/// `k` values tried by the adaptive controller, strongest rate first.
pub const K_SCHEDULE: [usize; 12] = [29, 27, 25, 23, 21, 19, 17, 15, 13, 11, 9, 7];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RsConfig {
    k: usize,
    /// Generator, lowest degree first, monic, degree `31 - k`.
    generator: Vec<u8>,
}

impl RsConfig {
    pub fn new(k: usize) -> Result<Self> {
        if k == 0 || k >= N || !(N - k).is_multiple_of(2) {
            return Err(invalid(format!("RS(31, {k}) needs odd k in 1..31")));
        }
        let mut g = vec![1u8];
        for j in 1..=(N - k) {
            // g(x) *= (x + alpha^j)
            let root = alpha_pow(j as i64);
            let mut next = vec![0u8; g.len() + 1];
            for (i, &c) in g.iter().enumerate() {
                next[i + 1] = add(next[i + 1], c);
                next[i] = add(next[i], mul(c, root));
            }
            g = next;
        }
        Ok(Self { k, generator: g })
    }

    pub fn n(&self) -> usize {
        N
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Correctable symbol errors per codeword.
    pub fn t(&self) -> usize {
        (N - self.k) / 2
    }

    fn parity_len(&self) -> usize {
        N - self.k
    }

    /// Systematic encoding of `k` symbols into 31.
    pub fn encode_symbols(&self, msg: &[u8]) -> Vec<u8> {
        assert_eq!(msg.len(), self.k);
        let p = self.parity_len();
        // Long division of msg(x) * x^p by g(x), highest degree first.
        let mut rem = vec![0u8; p];
        for &m in msg {
            let factor = add(m, rem[0]);
            rem.rotate_left(1);
            rem[p - 1] = 0;
            if factor != 0 {
                for (i, r) in rem.iter_mut().enumerate() {
                    // generator coefficient of x^(p - 1 - i)
                    *r = add(*r, mul(factor, self.generator[p - 1 - i]));
                }
            }
        }
        let mut cw = msg.to_vec();
        cw.extend_from_slice(&rem);
        cw
    }

    /// `r(alpha^j)` for `j = 1 ..= 31 - k`.
    pub fn syndromes(&self, received: &[u8]) -> Vec<u8> {
        (1..=self.parity_len())
            .map(|j| {
                let x = alpha_pow(j as i64);
                received.iter().fold(0, |acc, &c| add(mul(acc, x), c))
            })
            .collect()
    }

    /// Corrects up to `t` symbol errors in place. Returns the number of
    /// corrected symbols, or `None` when the word is not decodable.
    pub fn correct_symbols(&self, word: &mut [u8]) -> Option<usize> {
        assert_eq!(word.len(), N);
        let syn = self.syndromes(word);
        if syn.iter().all(|&s| s == 0) {
            return Some(0);
        }
        let lambda = berlekamp_massey(&syn);
        let errors = lambda.len() - 1;
        if errors == 0 || errors > self.t() {
            return None;
        }
        // Chien search: position i has locator X = alpha^(30 - i).
        let positions: Vec<usize> = (0..N)
            .filter(|&i| poly_eval_low(&lambda, alpha_pow(-((N - 1 - i) as i64))) == 0)
            .collect();
        if positions.len() != errors {
            return None;
        }
        // Omega = S(x) Lambda(x) mod x^(2t)
        let two_t = syn.len();
        let mut omega = vec![0u8; two_t];
        for (i, &l) in lambda.iter().enumerate() {
            for (j, &s) in syn.iter().enumerate() {
                if i + j < two_t {
                    omega[i + j] = add(omega[i + j], mul(l, s));
                }
            }
        }
        // Formal derivative: odd-degree terms shifted down.
        let deriv: Vec<u8> =
            lambda.iter().enumerate().skip(1).map(|(i, &c)| if i % 2 == 1 { c } else { 0 }).collect();
        for &i in &positions {
            let x_inv = alpha_pow(-((N - 1 - i) as i64));
            let denom = poly_eval_low(&deriv, x_inv);
            if denom == 0 {
                return None;
            }
            word[i] = add(word[i], div(poly_eval_low(&omega, x_inv), denom));
        }
        if self.syndromes(word).iter().any(|&s| s != 0) {
            return None;
        }
        Some(errors)
    }
}

/// Error-locator polynomial (lowest degree first, trailing zeros trimmed).
fn berlekamp_massey(syn: &[u8]) -> Vec<u8> {
    let mut c = vec![0u8; syn.len() + 1];
    let mut b = vec![0u8; syn.len() + 1];
    c[0] = 1;
    b[0] = 1;
    let mut l = 0usize;
    let mut shift = 1usize;
    let mut last_d = 1u8;
    for n in 0..syn.len() {
        let mut d = syn[n];
        for i in 1..=l {
            d = add(d, mul(c[i], syn[n - i]));
        }
        if d == 0 {
            shift += 1;
            continue;
        }
        let coef = div(d, last_d);
        let prev = c.clone();
        for i in 0..c.len() - shift {
            c[i + shift] = add(c[i + shift], mul(coef, b[i]));
        }
        if 2 * l <= n {
            l = n + 1 - l;
            b = prev;
            last_d = d;
            shift = 1;
        } else {
            shift += 1;
        }
    }
    c.truncate(l + 1);
    // If the true degree is lower than l the word is beyond capability;
    // the Chien root count check catches that.
    c
}

/// Coded length for `message_bits` bits at RS(31, k).
pub fn coded_bit_len(message_bits: usize, k: usize) -> usize {
    message_bits.div_ceil(k * SYMBOL_BITS) * CODEWORD_BITS
}

fn bits_to_symbols(bits: &[u8]) -> Vec<u8> {
    bits.chunks(SYMBOL_BITS)
        .map(|c| c.iter().fold(0u8, |acc, &b| (acc << 1) | (b & 1)))
        .collect()
}

fn symbols_to_bits(symbols: &[u8], out: &mut Vec<u8>) {
    for &s in symbols {
        for shift in (0..SYMBOL_BITS).rev() {
            out.push((s >> shift) & 1);
        }
    }
}

/// Encodes message bits, zero-padding to whole codewords.
pub fn rs_encode(msg: &[u8], cfg: &RsConfig) -> Vec<u8> {
    let group = cfg.k() * SYMBOL_BITS;
    let codewords = msg.len().div_ceil(group);
    let mut out = Vec::with_capacity(codewords * CODEWORD_BITS);
    for cw in 0..codewords {
        let mut chunk = msg[cw * group..msg.len().min((cw + 1) * group)].to_vec();
        chunk.resize(group, 0);
        symbols_to_bits(&cfg.encode_symbols(&bits_to_symbols(&chunk)), &mut out);
    }
    out
}

/// Decodes whole codewords. Uncorrectable words contribute their received
/// message part unchanged and are counted.
pub fn rs_decode(coded: &[u8], cfg: &RsConfig) -> Result<(Vec<u8>, usize)> {
    if !coded.len().is_multiple_of(CODEWORD_BITS) {
        return Err(invalid(format!(
            "coded length {} is not a multiple of {CODEWORD_BITS}",
            coded.len()
        )));
    }
    let mut out = Vec::with_capacity(coded.len() / CODEWORD_BITS * cfg.k() * SYMBOL_BITS);
    let mut failures = 0;
    for chunk in coded.chunks_exact(CODEWORD_BITS) {
        let mut word = bits_to_symbols(chunk);
        if cfg.correct_symbols(&mut word).is_none() {
            failures += 1;
            word = bits_to_symbols(chunk);
        }
        symbols_to_bits(&word[..cfg.k()], &mut out);
    }
    Ok((out, failures))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn capability_per_k() {
        assert_eq!(RsConfig::new(29).unwrap().t(), 1);
        assert_eq!(RsConfig::new(7).unwrap().t(), 12);
        assert!(RsConfig::new(30).is_err());
        assert!(RsConfig::new(31).is_err());
    }

    #[test]
    fn generator_has_its_roots() {
        let cfg = RsConfig::new(21).unwrap();
        for j in 1..=10 {
            assert_eq!(poly_eval_low(&cfg.generator, alpha_pow(j)), 0);
        }
        assert_ne!(poly_eval_low(&cfg.generator, alpha_pow(11)), 0);
    }

    #[test]
    fn zero_message_encodes_to_zero() {
        let cfg = RsConfig::new(15).unwrap();
        assert!(rs_encode(&[0; 75], &cfg).iter().all(|&b| b == 0));
    }

    #[test]
    fn codewords_have_zero_syndrome() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for k in K_SCHEDULE {
            let cfg = RsConfig::new(k).unwrap();
            let msg: Vec<u8> = (0..k).map(|_| rng.gen_range(0..32)).collect();
            let cw = cfg.encode_symbols(&msg);
            assert_eq!(&cw[..k], &msg[..]);
            assert!(cfg.syndromes(&cw).iter().all(|&s| s == 0));
        }
    }

    #[test]
    fn bit_level_round_trip_with_padding() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for k in K_SCHEDULE {
            let cfg = RsConfig::new(k).unwrap();
            let msg: Vec<u8> = (0..333).map(|_| rng.gen_range(0..2)).collect();
            let coded = rs_encode(&msg, &cfg);
            assert_eq!(coded.len(), coded_bit_len(333, k));
            let (dec, fails) = rs_decode(&coded, &cfg).unwrap();
            assert_eq!(fails, 0);
            assert_eq!(&dec[..333], &msg[..]);
            assert!(dec[333..].iter().all(|&b| b == 0));
        }
    }

    #[test]
    fn corrects_t_errors() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for k in [29, 21, 7] {
            let cfg = RsConfig::new(k).unwrap();
            for _ in 0..200 {
                let msg: Vec<u8> = (0..k).map(|_| rng.gen_range(0..32)).collect();
                let cw = cfg.encode_symbols(&msg);
                let mut word = cw.clone();
                let mut idx: Vec<usize> = (0..N).collect();
                for i in 0..cfg.t() {
                    let j = rng.gen_range(i..N);
                    idx.swap(i, j);
                    word[idx[i]] ^= rng.gen_range(1..32);
                }
                assert_eq!(cfg.correct_symbols(&mut word), Some(cfg.t()));
                assert_eq!(word, cw);
            }
        }
    }

    #[test]
    fn malformed_length_rejected() {
        assert!(rs_decode(&[0; 154], &RsConfig::new(29).unwrap()).is_err());
    }
}
