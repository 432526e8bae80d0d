//! Adaptive choice of the RS message length `k`.
//!
//! Starting from RS(31, 29), each candidate is embedded, pushed through the
//! simulated channel, extracted and scored. The best-scoring stego seen so
//! far is kept. The sweep stops as soon as a candidate reaches the error
//! threshold or after RS(31, 7).

use serde::Serialize;

use super::rs::{RsConfig, K_SCHEDULE};
use crate::error::{invalid, Result, StegoError};

/// One evaluated (or skipped) candidate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceEntry {
    pub k: usize,
    /// `None` when the candidate was skipped.
    pub r_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdaptiveResult {
    pub best_k: usize,
    pub best_error: f64,
    pub iterations: usize,
    pub trace: Vec<TraceEntry>,
}

/// Fraction of differing bits.
pub fn error_rate(sent: &[u8], received: &[u8]) -> Result<f64> {
    if sent.len() != received.len() {
        return Err(invalid(format!(
            "bit vectors differ in length ({} vs {})",
            sent.len(),
            received.len()
        )));
    }
    if sent.is_empty() {
        return Ok(0.0);
    }
    let wrong = sent.iter().zip(received).filter(|(a, b)| (*a & 1) != (*b & 1)).count();
    Ok(wrong as f64 / sent.len() as f64)
}

/// Outcome of trying one `k`.
pub enum Trial<T> {
    Evaluated { value: T, r_error: f64 },
    /// The coded message does not fit the cover.
    Skipped { needed: usize, available: usize },
}

/// Runs the sweep over `schedule`, calling `trial` per candidate.
///
/// Returns the value of the best candidate (lowest error, earliest on
/// ties). All candidates skipped is a capacity error.
pub fn select_k<T>(
    schedule: &[usize],
    threshold: f64,
    mut trial: impl FnMut(&RsConfig) -> Result<Trial<T>>,
) -> Result<(T, AdaptiveResult)> {
    let mut best: Option<(T, usize, f64)> = None;
    let mut trace = Vec::with_capacity(schedule.len());
    let mut first_skip = None;
    for &k in schedule {
        let cfg = RsConfig::new(k)?;
        match trial(&cfg)? {
            Trial::Skipped { needed, available } => {
                let note = format!("skipped: needs {needed} cover symbols, {available} available");
                trace.push(TraceEntry { k, r_error: None, note: Some(note) });
                first_skip.get_or_insert((needed, available));
            }
            Trial::Evaluated { value, r_error } => {
                trace.push(TraceEntry { k, r_error: Some(r_error), note: None });
                if best.as_ref().is_none_or(|(_, _, e)| r_error < *e) {
                    best = Some((value, k, r_error));
                }
                if r_error <= threshold {
                    break;
                }
            }
        }
    }
    let iterations = trace.len();
    match best {
        Some((value, best_k, best_error)) => {
            Ok((value, AdaptiveResult { best_k, best_error, iterations, trace }))
        }
        None => Err(match first_skip {
            Some((needed, available)) => StegoError::Capacity { needed, available },
            None => invalid("empty RS schedule"),
        }),
    }
}

/// The default schedule `29, 27, ..., 7`.
pub fn default_schedule() -> &'static [usize] {
    &K_SCHEDULE
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(errors: &[(usize, Option<f64>)], threshold: f64) -> Result<(usize, AdaptiveResult)> {
        select_k(&K_SCHEDULE, threshold, |cfg| {
            let e = errors.iter().find(|(k, _)| *k == cfg.k()).and_then(|(_, e)| *e);
            Ok(match e {
                Some(r_error) => Trial::Evaluated { value: cfg.k(), r_error },
                None => Trial::Skipped { needed: 10, available: 5 },
            })
        })
    }

    #[test]
    fn error_rate_examples() {
        let a = vec![0u8; 100];
        let mut b = a.clone();
        b[3] = 1;
        b[50] = 1;
        b[99] = 1;
        assert_eq!(error_rate(&a, &b).unwrap(), 0.03);
        assert_eq!(error_rate(&a, &a).unwrap(), 0.0);
        let c: Vec<u8> = a.iter().map(|x| 1 - x).collect();
        assert_eq!(error_rate(&a, &c).unwrap(), 1.0);
        assert!(error_rate(&a, &c[..99]).is_err());
    }

    #[test]
    fn benign_channel_stops_at_first_k() {
        let errs: Vec<_> = K_SCHEDULE.iter().map(|&k| (k, Some(0.0))).collect();
        let (v, r) = run(&errs, 1e-4).unwrap();
        assert_eq!((v, r.best_k, r.iterations), (29, 29, 1));
    }

    #[test]
    fn hostile_channel_visits_all_and_returns_argmin() {
        let errs: Vec<_> = K_SCHEDULE
            .iter()
            .map(|&k| (k, Some(0.2 + ((k * 7) % 5) as f64 * 0.01)))
            .collect();
        let (v, r) = run(&errs, 1e-4).unwrap();
        assert_eq!(r.iterations, 12);
        let min = errs.iter().map(|(_, e)| e.unwrap()).fold(f64::INFINITY, f64::min);
        let first_min = errs.iter().find(|(_, e)| e.unwrap() == min).unwrap().0;
        assert_eq!((v, r.best_k, r.best_error), (first_min, first_min, min));
    }

    #[test]
    fn non_monotone_keeps_earlier_best() {
        let mut errs: Vec<_> = K_SCHEDULE.iter().map(|&k| (k, Some(0.5))).collect();
        errs[0].1 = Some(0.01);
        errs[1].1 = Some(0.05);
        let (v, r) = run(&errs, 1e-4).unwrap();
        assert_eq!(v, 29);
        assert_eq!(r.best_k, 29);
        assert_eq!(r.trace.last().unwrap().k, 7);
    }

    #[test]
    fn skips_are_traced_and_all_skipped_is_an_error() {
        let errs = [(7, Some(0.0))];
        let (v, r) = run(&errs, 1e-4).unwrap();
        assert_eq!(v, 7);
        assert_eq!(r.iterations, 12);
        assert!(r.trace[0].r_error.is_none());
        assert!(matches!(run(&[], 1e-4), Err(StegoError::Capacity { needed: 10, available: 5 })));
    }

    #[test]
    fn trace_json_shape() {
        let errs = [(29, Some(0.5)), (27, Some(0.0))];
        let (_, r) = run(&errs, 1e-4).unwrap();
        let json = serde_json::to_string(&r.trace).unwrap();
        assert_eq!(json, r#"[{"k":29,"r_error":0.5},{"k":27,"r_error":0.0}]"#);
    }
}
