//! Metrics, overflow statistics, synthetic corpora and the bench runner.

pub mod bench;
pub mod corpus;
pub mod metrics;

pub use bench::{aggregate, run_corpus, BenchOptions, BenchReport, BenchRow, PayloadAggregate};
pub use corpus::{make_test_corpus, synth_image, Manifest, ManifestEntry, DEFAULT_IMAGE_SIZE};
pub use metrics::{decode, image_quality, psnr, relative_payload, ssim, QualityReport};

use std::path::Path;

use crate::error::Result;
use crate::jpeg::to_spatial;
use crate::preprocess::{overflow_census, OverflowCensus};

/// Census of the pre-truncation reconstruction of every cover under `path`
/// (a single file or a corpus directory), merged.
pub fn overflow_stats(path: &Path, qf: u8) -> Result<OverflowCensus> {
    let files = if path.is_dir() {
        bench::corpus_files(path)?.into_iter().map(|(_, p)| p).collect()
    } else {
        vec![path.to_path_buf()]
    };
    let mut total = OverflowCensus::empty();
    for f in files {
        let cover = bench::load_cover(&f, qf)?;
        total.merge(&overflow_census(&to_spatial(&cover)));
    }
    Ok(total)
}
