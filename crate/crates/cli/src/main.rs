use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rmpolar::sim::write_csv;
use rmpolar::{
    complexity_probe, encode, freeze_bec, freeze_montecarlo, freeze_rm, posteriors, read_frozen_set, rm_dimension,
    run_simulation, write_frozen_set, ChannelParam, CodeSpec, FrozenMetric, InfoWord, ListConfig, ListDecoder,
    ProbeCode, SoftVector, TrialConfig,
};

#[derive(Parser)]
#[command(name = "rmpolar", version, about = "Reed-Muller and polar codes: construction, coding and simulation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Construction {
    /// Reed-Muller code; k must equal the dimension of some RM(r, m).
    Rm,
    /// Most reliable paths on an erasure channel with erasure probability
    /// `--design-param` (default 0.5).
    Bec,
    /// Monte-Carlo genie-aided estimate on the channel `--design-param`
    /// (e.g. `bsc:0.05`, `awgn:2dB`).
    Mc,
}

#[derive(Subcommand)]
enum Command {
    /// Build an information set and write it as a frozen-set file.
    Construct {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value = "bec")]
        construction: Construction,
        #[arg(long)]
        design_param: Option<String>,
        /// Monte-Carlo trials (mc only).
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; standard output if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Encode information words, one `0`/`1` string per line.
    Encode {
        #[arg(long)]
        frozen_set: PathBuf,
        /// Input file; standard input if omitted or `-`.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Output file; standard output if omitted or `-`.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Decode one received word per line (whitespace-separated numbers).
    ///
    /// Without `--channel` every number is a log-likelihood ratio
    /// ln(Pr{0}/Pr{1}); with it, numbers are channel outputs (BEC erasures
    /// written as 0).
    Decode {
        #[arg(long)]
        frozen_set: PathBuf,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        channel: Option<ChannelParam>,
        #[arg(long, default_value_t = 1)]
        list_size: usize,
        #[arg(long, default_value = "include")]
        frozen_metric: FrozenMetric,
        /// Write decoded codewords instead of information words.
        #[arg(long)]
        codewords: bool,
    },
    /// Monte-Carlo frame and bit error rates; writes CSV.
    Simulate {
        #[arg(long)]
        frozen_set: PathBuf,
        /// Channel points, comma-separated or repeated.
        #[arg(long, value_delimiter = ',', required = true)]
        channel: Vec<ChannelParam>,
        #[arg(long, default_value_t = 1)]
        list_size: usize,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "include")]
        frozen_metric: FrozenMetric,
        /// CSV output file; standard output if omitted.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Count decoder and encoder operations and fit them to L n log2 n.
    Complexity {
        /// Levels: `lo:hi` (inclusive) or a comma-separated list.
        #[arg(long, default_value = "6:10")]
        m_range: String,
        /// List sizes: `lo:hi` (powers of two from lo to hi) or a
        /// comma-separated list.
        #[arg(long, default_value = "1:16")]
        l_range: String,
        #[arg(long, default_value_t = 10)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Code to measure: `full` or `half-rate`.
        #[arg(long, default_value = "full")]
        code: ProbeCode,
        /// JSON report file; standard output if omitted.
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Construct { m, k, construction, design_param, trials, seed, out } => {
            let spec = construct(m, k, construction, design_param.as_deref(), trials, seed)?;
            let mut writer = output(out.as_deref())?;
            write_frozen_set(&spec, &mut writer)?;
            writer.flush()?;
        }
        Command::Encode { frozen_set, input: inp, output: out } => {
            let spec = load_spec(&frozen_set)?;
            let mut writer = output(out.as_deref())?;
            for (number, line) in numbered_lines(input(inp.as_deref())?) {
                let line = line?;
                let word: InfoWord = line.parse().with_context(|| format!("line {number}"))?;
                let codeword = encode(&spec, &word).with_context(|| format!("line {number}"))?;
                writeln!(writer, "{codeword}")?;
            }
            writer.flush()?;
        }
        Command::Decode { frozen_set, input: inp, output: out, channel, list_size, frozen_metric, codewords } => {
            let spec = load_spec(&frozen_set)?;
            let channel = channel.map(|c| c.resolve(spec.rate())).transpose()?;
            let decoder = ListDecoder::new(ListConfig { frozen_metric, ..ListConfig::new(list_size) })?;
            let mut writer = output(out.as_deref())?;
            for (number, line) in numbered_lines(input(inp.as_deref())?) {
                let values = parse_numbers(&line?).with_context(|| format!("line {number}"))?;
                let beliefs = match &channel {
                    Some(c) => posteriors(c, &values),
                    None => SoftVector::from_llr(values),
                };
                let result = decoder.decode(&spec, &beliefs).with_context(|| format!("line {number}"))?;
                let best = result.best();
                if codewords {
                    writeln!(writer, "{}", best.codeword)?;
                } else {
                    writeln!(writer, "{}", best.info)?;
                }
            }
            writer.flush()?;
        }
        Command::Simulate { frozen_set, channel, list_size, trials, seed, frozen_metric, csv } => {
            let spec = load_spec(&frozen_set)?;
            let cfg = TrialConfig { list_size, trials, seed, frozen_metric, ..TrialConfig::new(spec, channel) };
            let rows = run_simulation(&cfg)?;
            let mut writer = output(csv.as_deref())?;
            write_csv(&rows, &mut writer)?;
            writer.flush()?;
        }
        Command::Complexity { m_range, l_range, trials, seed, code, report } => {
            let levels: Vec<u32> = parse_range(&m_range, false).context("--m-range")?;
            let list_sizes: Vec<usize> = parse_range(&l_range, true).context("--l-range")?;
            let result = complexity_probe(code, &levels, &list_sizes, trials, seed)?;
            eprintln!(
                "decoder: kernel ops = {:.3} L n log2 n (max residual {:.3}); encoder: ops = {:.3} n log2 n (max residual {:.3})",
                result.decoder_coefficient,
                result.max_decoder_residual(),
                result.encoder_coefficient,
                result.max_encoder_residual()
            );
            let mut writer = output(report.as_deref())?;
            serde_json::to_writer_pretty(&mut writer, &result)?;
            writeln!(writer)?;
            writer.flush()?;
        }
    }
    Ok(())
}

fn construct(
    m: u32,
    k: usize,
    construction: Construction,
    design_param: Option<&str>,
    trials: usize,
    seed: u64,
) -> Result<CodeSpec> {
    Ok(match construction {
        Construction::Rm => {
            if design_param.is_some() {
                bail!("--design-param is not used by the rm construction");
            }
            let r = (0..=m)
                .find(|&r| rm_dimension(r, m).is_ok_and(|d| d == k))
                .with_context(|| format!("no RM(r, {m}) code has dimension {k}"))?;
            freeze_rm(r, m)?
        }
        Construction::Bec => {
            let z = match design_param {
                Some(s) => s.parse::<f64>().with_context(|| format!("erasure probability {s:?}"))?,
                None => 0.5,
            };
            freeze_bec(m, k, z)?
        }
        Construction::Mc => {
            let param: ChannelParam =
                design_param.context("the mc construction needs --design-param <channel>")?.parse()?;
            let rate = k as f64 / (1u64 << m) as f64;
            freeze_montecarlo(m, k, &param.resolve(rate)?, trials, seed)?
        }
    })
}

fn load_spec(path: &Path) -> Result<CodeSpec> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    read_frozen_set(BufReader::new(file)).with_context(|| format!("reading {}", path.display()))
}

fn input(path: Option<&Path>) -> Result<Box<dyn BufRead>> {
    Ok(match path {
        Some(p) if p != Path::new("-") => {
            Box::new(BufReader::new(File::open(p).with_context(|| format!("opening {}", p.display()))?))
        }
        _ => Box::new(io::stdin().lock()),
    })
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) if p != Path::new("-") => {
            Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?))
        }
        _ => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Non-blank lines with their 1-based line numbers.
fn numbered_lines(reader: Box<dyn BufRead>) -> impl Iterator<Item = (usize, io::Result<String>)> {
    reader
        .lines()
        .enumerate()
        .map(|(i, line)| (i + 1, line))
        .filter(|(_, line)| line.as_ref().map_or(true, |l| !l.trim().is_empty()))
}

fn parse_numbers(line: &str) -> Result<Vec<f64>> {
    line.split_whitespace()
        .map(|tok| tok.parse::<f64>().ok().filter(|x| x.is_finite()).with_context(|| format!("invalid number {tok:?}")))
        .collect()
}

/// `lo:hi` (inclusive; doubling steps when `doubling`) or `a,b,c`.
fn parse_range<T>(text: &str, doubling: bool) -> Result<Vec<T>>
where
    T: TryFrom<u64>,
{
    let number = |s: &str| s.trim().parse::<u64>().with_context(|| format!("invalid number {s:?} in {text:?}"));
    let values: Vec<u64> = match text.split_once(':') {
        Some((lo, hi)) => {
            let (lo, hi) = (number(lo)?, number(hi)?);
            if lo > hi || (doubling && lo == 0) {
                bail!("invalid range {text:?}");
            }
            if doubling {
                std::iter::successors(Some(lo), |&v| v.checked_mul(2)).take_while(|&v| v <= hi).collect()
            } else {
                (lo..=hi).collect()
            }
        }
        None => text.split(',').map(number).collect::<Result<_>>()?,
    };
    values.into_iter().map(|v| T::try_from(v).map_err(|_| anyhow::anyhow!("{v} is out of range in {text:?}"))).collect()
}
