//! Monte-Carlo FER/BER simulation and operation-count probes.
//!
//! Trial `t` of every channel point draws its information word and noise
//! from a generator seeded with `seed + t`, so results are independent of
//! thread scheduling and every channel point sees the same words.

use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::channel::{modulate, posteriors, transmit, ChannelModel, ChannelParam};
use crate::code_model::{freeze_bec, CodeSpec};
use crate::decoder::list::{ListConfig, ListDecoder};
use crate::decoder::FrozenMetric;
use crate::encoder::{encode, encode_counted, InfoWord};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct TrialConfig {
    pub spec: CodeSpec,
    pub channels: Vec<ChannelParam>,
    pub list_size: usize,
    pub trials: u64,
    pub seed: u64,
    pub frozen_metric: FrozenMetric,
}

impl TrialConfig {
    pub fn new(spec: CodeSpec, channels: Vec<ChannelParam>) -> Self {
        Self { spec, channels, list_size: 1, trials: 1000, seed: 0, frozen_metric: FrozenMetric::Include }
    }

    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be at least 1".into()));
        }
        if self.channels.is_empty() {
            return Err(Error::InvalidParameter("at least one channel point is required".into()));
        }
        if self.list_size == 0 {
            return Err(Error::InvalidParameter("list size must be at least 1".into()));
        }
        Ok(())
    }
}

/// One CSV row. Field order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialResult {
    pub channel: String,
    pub param: f64,
    pub trials: u64,
    pub frame_errors: u64,
    pub bit_errors: u64,
    pub fer: f64,
    pub ber: f64,
    pub fer_ci95: f64,
    pub avg_kernel_ops: f64,
    pub avg_select_ops: f64,
    pub seed: u64,
}

#[derive(Debug, Default, Clone, Copy)]
struct Tally {
    frame_errors: u64,
    bit_errors: u64,
    kernel_ops: u64,
    select_ops: u64,
}

impl Tally {
    fn merge(self, o: Tally) -> Tally {
        Tally {
            frame_errors: self.frame_errors + o.frame_errors,
            bit_errors: self.bit_errors + o.bit_errors,
            kernel_ops: self.kernel_ops + o.kernel_ops,
            select_ops: self.select_ops + o.select_ops,
        }
    }
}

fn run_trial(spec: &CodeSpec, channel: &ChannelModel, decoder: &ListDecoder, seed: u64) -> Result<Tally> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let truth = InfoWord::random(spec.dimension(), &mut rng);
    let codeword = encode(spec, &truth)?;
    let observed = transmit(channel, &modulate(&codeword), &mut rng);
    let out = decoder.decode(spec, &posteriors(channel, &observed))?;
    let bit_errors = out.best().info.distance(&truth) as u64;
    Ok(Tally {
        frame_errors: (bit_errors > 0) as u64,
        bit_errors,
        kernel_ops: out.ops.kernel,
        select_ops: out.ops.select,
    })
}

/// Runs every channel point of `cfg`; rows are sorted by channel kind and
/// then by parameter value.
pub fn run_simulation(cfg: &TrialConfig) -> Result<Vec<TrialResult>> {
    cfg.validate()?;
    let decoder = ListDecoder::new(ListConfig {
        list_size: cfg.list_size,
        frozen_metric: cfg.frozen_metric,
        ..ListConfig::new(cfg.list_size)
    })?;
    let spec = &cfg.spec;
    let info_bits = spec.dimension() as u64;

    let mut points = cfg.channels.clone();
    points.sort_by(|a, b| a.kind().cmp(b.kind()).then(a.value().total_cmp(&b.value())));
    points.dedup();

    points
        .iter()
        .map(|param| {
            let channel = param.resolve(spec.rate())?;
            let tally = (0..cfg.trials)
                .into_par_iter()
                .map(|t| run_trial(spec, &channel, &decoder, cfg.seed.wrapping_add(t)))
                .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))?;
            let trials = cfg.trials;
            let fer = tally.frame_errors as f64 / trials as f64;
            let ber = if info_bits == 0 { 0.0 } else { tally.bit_errors as f64 / (trials * info_bits) as f64 };
            Ok(TrialResult {
                channel: param.kind().to_string(),
                param: param.value(),
                trials,
                frame_errors: tally.frame_errors,
                bit_errors: tally.bit_errors,
                fer,
                ber,
                fer_ci95: 1.96 * (fer * (1.0 - fer) / trials as f64).sqrt(),
                avg_kernel_ops: tally.kernel_ops as f64 / trials as f64,
                avg_select_ops: tally.select_ops as f64 / trials as f64,
                seed: cfg.seed,
            })
        })
        .collect()
}

/// Writes results as CSV with header
/// `channel,param,trials,frame_errors,bit_errors,fer,ber,fer_ci95,avg_kernel_ops,avg_select_ops,seed`.
pub fn write_csv<W: Write>(results: &[TrialResult], out: W) -> Result<()> {
    let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    for row in results {
        writer.serialize(row)?;
    }
    if results.is_empty() {
        writer.write_record([
            "channel",
            "param",
            "trials",
            "frame_errors",
            "bit_errors",
            "fer",
            "ber",
            "fer_ci95",
            "avg_kernel_ops",
            "avg_select_ops",
            "seed",
        ])?;
    }
    writer.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecoderPoint {
    pub m: u32,
    pub n: usize,
    pub list_size: usize,
    pub mean_kernel_ops: f64,
    pub mean_select_ops: f64,
    pub mean_copied: f64,
    pub model: f64,
    pub relative_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EncoderPoint {
    pub m: u32,
    pub n: usize,
    pub ops: u64,
    pub model: f64,
    pub relative_residual: f64,
}

/// Least-squares fits `kernel_ops = a * L * n * log2(n)` and
/// `encoder_ops = a' * n * log2(n)`, with per-point relative residuals.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComplexityReport {
    pub code: ProbeCode,
    pub decoder_coefficient: f64,
    pub decoder: Vec<DecoderPoint>,
    pub encoder_coefficient: f64,
    pub encoder: Vec<EncoderPoint>,
}

impl ComplexityReport {
    pub fn max_decoder_residual(&self) -> f64 {
        self.decoder.iter().map(|p| p.relative_residual.abs()).fold(0.0, f64::max)
    }

    pub fn max_encoder_residual(&self) -> f64 {
        self.encoder.iter().map(|p| p.relative_residual.abs()).fold(0.0, f64::max)
    }
}

fn fit_through_origin(xs: &[f64], ys: &[f64]) -> f64 {
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    sxy / sxx
}

/// Code measured by [`complexity_probe`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProbeCode {
    /// `RM(m, m)`: every leaf is an information leaf, so the list is full
    /// after `log2 L` leaves. This is the worst case for the list decoder.
    #[default]
    Full,
    /// Half-rate code designed for `BEC(1/2)`. Its leading leaves are mostly
    /// frozen, so large lists fill late and small codes stay well under
    /// `L n log2 n`.
    HalfRate,
}

impl ProbeCode {
    fn build(self, m: u32) -> Result<CodeSpec> {
        match self {
            Self::Full => CodeSpec::full(m),
            Self::HalfRate => freeze_bec(m, (1usize << m) / 2, 0.5),
        }
    }
}

impl std::str::FromStr for ProbeCode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Self::Full),
            "half-rate" => Ok(Self::HalfRate),
            other => Err(Error::InvalidParameter(format!("probe code {other:?}; expected full or half-rate"))),
        }
    }
}

/// Measures decoder and encoder operation counts, decoding `trials` noisy
/// words of `BSC(0.05)` per point.
pub fn complexity_probe(
    code: ProbeCode,
    levels: &[u32],
    list_sizes: &[usize],
    trials: u64,
    seed: u64,
) -> Result<ComplexityReport> {
    if levels.is_empty() || list_sizes.is_empty() || trials == 0 {
        return Err(Error::InvalidParameter(
            "complexity probe needs non-empty level and list-size ranges and at least one trial".into(),
        ));
    }
    if levels.contains(&0) {
        return Err(Error::InvalidParameter("complexity probe needs m >= 1".into()));
    }
    let channel = ChannelModel::bsc(0.05)?;

    let mut decoder = Vec::new();
    let mut encoder = Vec::new();
    for &m in levels {
        let n = 1usize << m;
        let spec = code.build(m)?;
        let (_, enc_ops) = encode_counted(&spec, &InfoWord::zeros(spec.dimension()))?;
        encoder.push(EncoderPoint { m, n, ops: enc_ops, model: 0.0, relative_residual: 0.0 });
        for &list_size in list_sizes {
            let list = ListDecoder::new(ListConfig::new(list_size))?;
            let (kernel, select, copied) = (0..trials)
                .into_par_iter()
                .map(|t| -> Result<(u64, u64, u64)> {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(t));
                    let truth = InfoWord::random(spec.dimension(), &mut rng);
                    let observed = transmit(&channel, &modulate(&encode(&spec, &truth)?), &mut rng);
                    let out = list.decode(&spec, &posteriors(&channel, &observed))?;
                    Ok((out.ops.kernel, out.ops.select, out.ops.copied))
                })
                .try_reduce(|| (0, 0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1, a.2 + b.2)))?;
            decoder.push(DecoderPoint {
                m,
                n,
                list_size,
                mean_kernel_ops: kernel as f64 / trials as f64,
                mean_select_ops: select as f64 / trials as f64,
                mean_copied: copied as f64 / trials as f64,
                model: 0.0,
                relative_residual: 0.0,
            });
        }
    }

    let x = |l: usize, n: usize, m: u32| (l * n) as f64 * m as f64;
    let xs: Vec<f64> = decoder.iter().map(|p| x(p.list_size, p.n, p.m)).collect();
    let ys: Vec<f64> = decoder.iter().map(|p| p.mean_kernel_ops).collect();
    let a = fit_through_origin(&xs, &ys);
    for (p, x) in decoder.iter_mut().zip(&xs) {
        p.model = a * x;
        p.relative_residual = (p.mean_kernel_ops - p.model) / p.model;
    }

    let xs: Vec<f64> = encoder.iter().map(|p| x(1, p.n, p.m)).collect();
    let ys: Vec<f64> = encoder.iter().map(|p| p.ops as f64).collect();
    let a_enc = fit_through_origin(&xs, &ys);
    for (p, x) in encoder.iter_mut().zip(&xs) {
        p.model = a_enc * x;
        p.relative_residual = (p.ops as f64 - p.model) / p.model;
    }

    Ok(ComplexityReport { code, decoder_coefficient: a, decoder, encoder_coefficient: a_enc, encoder })
}
