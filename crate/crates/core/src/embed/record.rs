//! The shared-key sidecar a receiver needs to extract a message.

use std::fmt::Write as _;
use std::path::Path;

use crate::codes::rs::coded_bit_len;
use crate::error::{Result, StegoError};

#[derive(Debug, Clone, PartialEq)]
pub struct StegoRecord {
    pub perm_seed: u64,
    /// Message length in bits before RS coding.
    pub message_bits: usize,
    pub rs_k: usize,
    /// Coded bits per cover symbol used by the trellis.
    pub payload_alpha: f64,
    pub qf_cover: u8,
    pub t1: f64,
    pub mu: f64,
    pub o1: usize,
    pub o2: usize,
    pub h: usize,
}

impl StegoRecord {
    /// Length of the RS-coded bit string carried by the trellis.
    pub fn coded_len(&self) -> usize {
        coded_bit_len(self.message_bits, self.rs_k)
    }

    pub fn to_key_file(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "seed={}", self.perm_seed);
        let _ = writeln!(s, "n_m={}", self.message_bits);
        let _ = writeln!(s, "rs_k={}", self.rs_k);
        let _ = writeln!(s, "alpha={}", self.payload_alpha);
        let _ = writeln!(s, "qf_cover={}", self.qf_cover);
        let _ = writeln!(s, "t1={}", self.t1);
        let _ = writeln!(s, "mu={}", self.mu);
        let _ = writeln!(s, "o1={}", self.o1);
        let _ = writeln!(s, "o2={}", self.o2);
        let _ = writeln!(s, "h={}", self.h);
        s
    }

    pub fn parse_key_file(text: &str) -> Result<Self> {
        let mut fields = std::collections::HashMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                StegoError::Format(format!("key file line {}: expected name=value", lineno + 1))
            })?;
            fields.insert(k.trim().to_string(), v.trim().to_string());
        }
        fn get<T: std::str::FromStr>(
            fields: &std::collections::HashMap<String, String>,
            name: &str,
        ) -> Result<T> {
            let raw = fields
                .get(name)
                .ok_or_else(|| StegoError::Format(format!("key file missing `{name}`")))?;
            raw.parse()
                .map_err(|_| StegoError::Format(format!("key file: bad value for `{name}`: {raw}")))
        }
        Ok(Self {
            perm_seed: get(&fields, "seed")?,
            message_bits: get(&fields, "n_m")?,
            rs_k: get(&fields, "rs_k")?,
            payload_alpha: get(&fields, "alpha")?,
            qf_cover: get(&fields, "qf_cover")?,
            t1: get(&fields, "t1")?,
            mu: get(&fields, "mu")?,
            o1: get(&fields, "o1")?,
            o2: get(&fields, "o2")?,
            h: get(&fields, "h")?,
        })
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_key_file())?;
        Ok(())
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse_key_file(&std::fs::read_to_string(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> StegoRecord {
        StegoRecord {
            perm_seed: 12345,
            message_bits: 1000,
            rs_k: 23,
            payload_alpha: 0.123_456_789,
            qf_cover: 65,
            t1: 8.0,
            mu: 0.5,
            o1: 0,
            o2: 18,
            h: 10,
        }
    }

    #[test]
    fn key_file_format() {
        let text = sample().to_key_file();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "seed=12345");
        assert_eq!(lines[1], "n_m=1000");
        assert_eq!(lines[3], "alpha=0.123456789");
        assert_eq!(lines.len(), 10);
        assert!(text.is_ascii());
    }

    #[test]
    fn key_file_round_trip() {
        let r = sample();
        assert_eq!(StegoRecord::parse_key_file(&r.to_key_file()).unwrap(), r);
    }

    #[test]
    fn missing_or_bad_fields_rejected() {
        assert!(StegoRecord::parse_key_file("seed=1\n").is_err());
        let bad = sample().to_key_file().replace("rs_k=23", "rs_k=abc");
        assert!(StegoRecord::parse_key_file(&bad).is_err());
        assert!(StegoRecord::parse_key_file("garbage").is_err());
    }
}
