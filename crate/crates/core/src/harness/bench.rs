//! Corpus benchmark: embed, attack and extract every image at every payload.

use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::corpus::Manifest;
use super::metrics::{decode, format_psnr, image_quality, serialize_psnr};
use crate::codes::{adaptive_embed_prepared, error_rate};
use crate::cost::write_plane;
use crate::error::{invalid, Result, StegoError};
use crate::jpeg::{container, pgm, recompress, ChannelModel, CoeffImage, QuantTable};
use crate::pipeline::{extract, message_budget, EmbedParams, PreparedCover};
use crate::preprocess::preprocess_cover;

#[derive(Debug, Clone, Default)]
pub struct BenchOptions {
    /// Record wall-clock time per row. Off by default so reports are
    /// byte-reproducible.
    pub timing: bool,
    /// Write `min(xi+, xi-)` planes here, one file per image.
    pub dump_costs: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub image: String,
    pub payload: f64,
    pub n_nzac: usize,
    pub n_m: usize,
    pub k: Option<usize>,
    pub r_error: Option<f64>,
    #[serde(serialize_with = "opt_psnr")]
    pub psnr: Option<f64>,
    pub ssim: Option<f64>,
    pub iterations: Option<usize>,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<f64>,
}

fn opt_psnr<S: serde::Serializer>(v: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(p) => serialize_psnr(p, s),
        None => s.serialize_none(),
    }
}

/// Means over the successful rows of one payload.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PayloadAggregate {
    pub payload: f64,
    pub images: usize,
    pub failures: usize,
    pub mean_r_error: Option<f64>,
    #[serde(serialize_with = "opt_psnr")]
    pub mean_psnr: Option<f64>,
    pub mean_ssim: Option<f64>,
    pub mean_k: Option<f64>,
    /// Fraction of successful rows at or below the error threshold.
    pub within_threshold: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub threshold: f64,
    pub rows: Vec<BenchRow>,
    pub aggregates: Vec<PayloadAggregate>,
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}

/// Per-payload summary; the single code path used for reports.
pub fn aggregate(rows: &[BenchRow], payloads: &[f64], threshold: f64) -> Vec<PayloadAggregate> {
    payloads
        .iter()
        .map(|&payload| {
            let all: Vec<&BenchRow> = rows.iter().filter(|r| r.payload == payload).collect();
            let ok: Vec<&BenchRow> = all.iter().copied().filter(|r| r.r_error.is_some()).collect();
            PayloadAggregate {
                payload,
                images: all.len(),
                failures: all.len() - ok.len(),
                mean_r_error: mean(ok.iter().filter_map(|r| r.r_error)),
                mean_psnr: mean(ok.iter().filter_map(|r| r.psnr)),
                mean_ssim: mean(ok.iter().filter_map(|r| r.ssim)),
                mean_k: mean(ok.iter().filter_map(|r| r.k.map(|k| k as f64))),
                within_threshold: mean(
                    ok.iter().filter_map(|r| r.r_error).map(|e| if e <= threshold { 1.0 } else { 0.0 }),
                ),
            }
        })
        .collect()
}

/// Reproducible message bits for one (image, payload) cell.
pub fn bench_message(seed: u64, image_index: usize, payload_index: usize, bits: usize) -> Vec<u8> {
    let mut rng = ChaCha20Rng::seed_from_u64(
        seed ^ ((image_index as u64) << 20) ^ ((payload_index as u64) << 52) ^ 0x6D73_6721,
    );
    (0..bits).map(|_| rng.gen_range(0..2u8)).collect()
}

/// Corpus files in manifest order, or sorted `.pgm`/`.jcov` names without one.
pub fn corpus_files(dir: &Path) -> Result<Vec<(String, PathBuf)>> {
    if dir.join(super::corpus::MANIFEST_NAME).exists() {
        let m = Manifest::read(dir)?;
        return Ok(m.images.iter().map(|e| (e.id.clone(), dir.join(&e.file))).collect());
    }
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| matches!(p.extension().and_then(|s| s.to_str()), Some("pgm" | "jcov")))
        .collect();
    files.sort();
    Ok(files
        .into_iter()
        .map(|p| (p.file_stem().unwrap_or_default().to_string_lossy().into_owned(), p))
        .collect())
}

/// Loads a cover: JCOV as stored, PGM compressed at `q_cover`.
pub fn load_cover(path: &Path, q_cover: u8) -> Result<CoeffImage> {
    let bytes = std::fs::read(path)?;
    if container::is_jcov(&bytes) {
        let img = container::decode(&bytes)?;
        if img.qtable().qf() != q_cover {
            log::info!("{}: stored at QF {}, used as is", path.display(), img.qtable().qf());
        }
        return Ok(img);
    }
    let px = pgm::decode(&bytes)?;
    CoeffImage::from_pixels(&px.data, px.width, px.height, QuantTable::for_quality(q_cover)?)
}

fn failed_row(image: &str, payload: f64, n_nzac: usize, n_m: usize, err: &StegoError) -> BenchRow {
    BenchRow {
        image: image.to_string(),
        payload,
        n_nzac,
        n_m,
        k: None,
        r_error: None,
        psnr: None,
        ssim: None,
        iterations: None,
        status: format!("error: {err}"),
        runtime_ms: None,
    }
}

fn bench_image(
    index: usize,
    id: &str,
    cover: &CoeffImage,
    payloads: &[f64],
    channel: &ChannelModel,
    params: &EmbedParams,
    opts: &BenchOptions,
) -> Result<Vec<BenchRow>> {
    let n_nzac = cover.nonzero_ac();
    let robust = preprocess_cover(cover, &params.preprocess).image;
    let prepared = PreparedCover::new(&robust, params)?;
    if let Some(dir) = &opts.dump_costs {
        let xi: Vec<f64> = (0..prepared.costs.len()).map(|i| prepared.costs.cheapest(i).0).collect();
        write_plane(dir.join(format!("{id}.xi")), &xi, cover.width(), cover.height())?;
    }
    let original = decode(cover);
    let mut rows = Vec::with_capacity(payloads.len());
    for (pi, &payload) in payloads.iter().enumerate() {
        let start = Instant::now();
        let n_m = message_budget(cover, payload)?;
        let msg = bench_message(params.seed, index, pi, n_m);
        let cell = (|| -> Result<BenchRow> {
            let p = EmbedParams { payload, ..params.clone() };
            let (stego, adaptive, record) =
                adaptive_embed_prepared(&prepared, &msg, p.threshold, channel, &p)?;
            let received = recompress(&stego, channel);
            let r_error = error_rate(&msg, &extract(&received, &record)?)?;
            let q = image_quality(&original, &decode(&stego))?;
            Ok(BenchRow {
                image: id.to_string(),
                payload,
                n_nzac,
                n_m,
                k: Some(record.rs_k),
                r_error: Some(r_error),
                psnr: Some(q.psnr),
                ssim: Some(q.ssim),
                iterations: Some(adaptive.iterations),
                status: "ok".into(),
                runtime_ms: None,
            })
        })();
        let mut row = cell.unwrap_or_else(|e| {
            log::warn!("{id} at payload {payload}: {e}");
            failed_row(id, payload, n_nzac, n_m, &e)
        });
        if opts.timing {
            row.runtime_ms = Some(start.elapsed().as_secs_f64() * 1e3);
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Runs every corpus image at every payload. Rows are ordered by corpus
/// order, then payload order, regardless of worker scheduling.
pub fn run_corpus(
    dir: impl AsRef<Path>,
    payloads: &[f64],
    q_cover: u8,
    q_channel: u8,
    params: &EmbedParams,
    opts: &BenchOptions,
) -> Result<BenchReport> {
    let params = EmbedParams { q_channel, ..params.clone() };
    params.validate()?;
    if payloads.is_empty() {
        return Err(invalid("at least one payload is required"));
    }
    if let Some(&p) = payloads.iter().find(|p| !(**p > 0.0 && p.is_finite())) {
        return Err(invalid(format!("payloads must be positive, got {p}")));
    }
    QuantTable::for_quality(q_cover)?;
    let channel = ChannelModel::new(q_channel)?;
    let files = corpus_files(dir.as_ref())?;
    if files.is_empty() {
        return Err(StegoError::DegenerateInput(format!("no images in {}", dir.as_ref().display())));
    }
    if let Some(d) = &opts.dump_costs {
        std::fs::create_dir_all(d)?;
    }
    let per_image: Vec<Vec<BenchRow>> = files
        .par_iter()
        .enumerate()
        .map(|(i, (id, path))| {
            let run = load_cover(path, q_cover)
                .and_then(|cover| bench_image(i, id, &cover, payloads, &channel, &params, opts));
            run.unwrap_or_else(|e| {
                log::warn!("skipping {}: {e}", path.display());
                Vec::new()
            })
        })
        .collect();
    let rows: Vec<BenchRow> = per_image.into_iter().flatten().collect();
    if rows.is_empty() {
        return Err(StegoError::DegenerateInput("no corpus image could be processed".into()));
    }
    let aggregates = aggregate(&rows, payloads, params.threshold);
    Ok(BenchReport { threshold: params.threshold, rows, aggregates })
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

impl BenchReport {
    pub fn to_csv(&self) -> Result<String> {
        let timing = self.rows.iter().any(|r| r.runtime_ms.is_some());
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header =
            vec!["image", "payload", "n_nzac", "n_m", "k", "r_error", "psnr", "ssim", "iterations", "status"];
        if timing {
            header.push("runtime_ms");
        }
        w.write_record(&header).map_err(csv_err)?;
        for r in &self.rows {
            let mut rec = vec![
                r.image.clone(),
                r.payload.to_string(),
                r.n_nzac.to_string(),
                r.n_m.to_string(),
                opt(r.k),
                opt(r.r_error),
                r.psnr.map(format_psnr).unwrap_or_default(),
                opt(r.ssim),
                opt(r.iterations),
                r.status.clone(),
            ];
            if timing {
                rec.push(opt(r.runtime_ms));
            }
            w.write_record(&rec).map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| StegoError::Format(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

fn csv_err(e: csv::Error) -> StegoError {
    StegoError::Format(format!("csv: {e}"))
}
