//! `jstego`: embed, extract, attack, overflow statistics, corpus generation
//! and benchmarking from the command line.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use jstego::embed::StegoRecord;
use jstego::harness::bench::load_cover;
use jstego::harness::{make_test_corpus, overflow_stats, relative_payload, run_corpus, BenchOptions};
use jstego::jpeg::{container, recompress, ChannelModel};
use jstego::pipeline::{bits_to_bytes, bytes_to_bits, embed, extract, message_budget};
use jstego::preprocess::PreprocessParams;
use jstego::EmbedParams;

#[derive(Parser)]
#[command(name = "jstego", version, about = "Recompression-robust JPEG-domain steganography")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Hide a message file in a cover (PGM or JCOV) and write the stego JCOV and key.
    Embed(EmbedArgs),
    /// Recover the message from a (possibly recompressed) stego JCOV.
    Extract {
        #[arg(long)]
        stego: PathBuf,
        #[arg(long)]
        key: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Simulate the recompression channel on a JCOV file.
    Attack {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        qf: u8,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        no_truncate: bool,
        #[arg(long)]
        no_round: bool,
    },
    /// Reports.
    Stats {
        #[command(subcommand)]
        what: StatsCommand,
    },
    /// Write a synthetic PGM corpus with a manifest.
    GenCorpus {
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        count: usize,
        #[arg(long)]
        saturation: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Image side in pixels (multiple of 8).
        #[arg(long, default_value_t = jstego::harness::DEFAULT_IMAGE_SIZE)]
        size: usize,
    },
    /// Embed, attack and extract every corpus image at every payload.
    Bench(BenchArgs),
}

#[derive(Subcommand)]
enum StatsCommand {
    /// Overflow census of the pre-truncation reconstruction.
    Overflow {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        qf: u8,
        #[arg(long)]
        json: PathBuf,
    },
}

#[derive(Args)]
struct Tunables {
    #[arg(long, default_value_t = 8.0)]
    t1: f64,
    #[arg(long, default_value_t = 0.5)]
    mu: f64,
    #[arg(long, default_value_t = 0)]
    o1: usize,
    #[arg(long, default_value_t = 18)]
    o2: usize,
    #[arg(long, default_value_t = 10)]
    h: usize,
    #[arg(long, default_value_t = 0.0001)]
    threshold: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl Tunables {
    fn params(&self, payload: f64, q_channel: u8) -> EmbedParams {
        EmbedParams {
            preprocess: PreprocessParams { t1: self.t1, o1: self.o1, o2: self.o2 },
            mu: self.mu,
            h: self.h,
            payload,
            threshold: self.threshold,
            seed: self.seed,
            q_channel,
            ..EmbedParams::default()
        }
    }
}

#[derive(Args)]
struct EmbedArgs {
    #[arg(long)]
    cover: PathBuf,
    /// Message file; every byte is embedded, most significant bit first.
    #[arg(long)]
    msg: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    key_out: PathBuf,
    /// Upper bound on the message, in bits per non-zero AC coefficient.
    #[arg(long)]
    payload: f64,
    #[arg(long)]
    qcover: u8,
    #[arg(long)]
    qchannel: u8,
    #[command(flatten)]
    tunables: Tunables,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.2,0.3,0.4,0.5")]
    payloads: Vec<f64>,
    #[arg(long, default_value_t = 65)]
    qcover: u8,
    #[arg(long, default_value_t = 85)]
    qchannel: u8,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    json: Option<PathBuf>,
    /// Add a per-row wall-clock column (makes output non-reproducible).
    #[arg(long)]
    timing: bool,
    /// Dump min(xi+, xi-) cost planes (little-endian f64) into this directory.
    #[arg(long)]
    dump_costs: Option<PathBuf>,
    #[command(flatten)]
    tunables: Tunables,
}

fn run_embed(a: &EmbedArgs) -> Result<()> {
    let cover = load_cover(&a.cover, a.qcover).with_context(|| format!("reading {}", a.cover.display()))?;
    let msg_bytes = std::fs::read(&a.msg).with_context(|| format!("reading {}", a.msg.display()))?;
    let msg = bytes_to_bits(&msg_bytes);
    if msg.is_empty() {
        bail!("message file {} is empty", a.msg.display());
    }
    let budget = message_budget(&cover, a.payload)?;
    if msg.len() > budget {
        bail!(
            "message has {} bits but payload {} allows {budget} on this cover",
            msg.len(),
            a.payload
        );
    }
    let params = a.tunables.params(a.payload, a.qchannel);
    let out = embed(&cover, &msg, &params)?;
    container::write(&a.out, &out.stego)?;
    out.record.write(&a.key_out)?;
    let summary = serde_json::json!({
        "message_bits": msg.len(),
        "relative_payload": relative_payload(msg.len(), &cover)?,
        "rs_k": out.record.rs_k,
        "best_error": out.adaptive.best_error,
        "iterations": out.adaptive.iterations,
        "trace": out.adaptive.trace,
        "reference_converged": out.reference_converged,
    });
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(())
}

fn run_extract(stego: &Path, key: &Path, out: &Path) -> Result<()> {
    let img = container::read(stego).with_context(|| format!("reading {}", stego.display()))?;
    let rec = StegoRecord::read(key).with_context(|| format!("reading {}", key.display()))?;
    let bits = extract(&img, &rec)?;
    std::fs::write(out, bits_to_bytes(&bits))?;
    Ok(())
}

fn run_attack(input: &Path, qf: u8, out: &Path, no_truncate: bool, no_round: bool) -> Result<()> {
    let img = container::read(input).with_context(|| format!("reading {}", input.display()))?;
    let mut ch = ChannelModel::new(qf)?;
    ch.enable_truncation = !no_truncate;
    ch.enable_rounding = !no_round;
    container::write(out, &recompress(&img, &ch))?;
    Ok(())
}

fn run_bench(a: &BenchArgs) -> Result<()> {
    let params = a.tunables.params(a.payloads.first().copied().unwrap_or(0.1), a.qchannel);
    let opts = BenchOptions { timing: a.timing, dump_costs: a.dump_costs.clone() };
    let report = run_corpus(&a.corpus, &a.payloads, a.qcover, a.qchannel, &params, &opts)?;
    let csv = report.to_csv()?;
    match &a.csv {
        Some(p) => std::fs::write(p, &csv)?,
        None if a.json.is_none() => print!("{csv}"),
        None => {}
    }
    if let Some(p) = &a.json {
        std::fs::write(p, report.to_json())?;
    }
    for agg in &report.aggregates {
        log::info!(
            "payload {}: {} images, mean R_error {:?}, within threshold {:?}",
            agg.payload,
            agg.images,
            agg.mean_r_error,
            agg.within_threshold
        );
    }
    Ok(())
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match Cli::parse().command {
        Command::Embed(a) => run_embed(&a),
        Command::Extract { stego, key, out } => run_extract(&stego, &key, &out),
        Command::Attack { input, qf, out, no_truncate, no_round } => {
            run_attack(&input, qf, &out, no_truncate, no_round)
        }
        Command::Stats { what: StatsCommand::Overflow { input, qf, json } } => {
            let census = overflow_stats(&input, qf)?;
            std::fs::write(&json, serde_json::to_string_pretty(&census)? + "\n")?;
            Ok(())
        }
        Command::GenCorpus { out, count, saturation, seed, size } => {
            let m = make_test_corpus(&out, count, saturation, seed, size)?;
            println!("wrote {} images to {}", m.images.len(), out.display());
            Ok(())
        }
        Command::Bench(a) => run_bench(&a),
    }
}
