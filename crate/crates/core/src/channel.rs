//! Memoryless channels with `+1/-1` inputs and the soft beliefs fed to the
//! decoders.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::code_model::Codeword;
use crate::error::{Error, Result};

/// Bound on stored log-likelihood ratios.
pub const LLR_CLAMP: f64 = 40.0;

#[inline]
pub(crate) fn clamp_llr(llr: f64) -> f64 {
    if llr.is_nan() {
        0.0
    } else {
        llr.clamp(-LLR_CLAMP, LLR_CLAMP)
    }
}

/// A binary-input memoryless channel. Input symbol `+1` carries bit 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ChannelModel {
    /// Binary symmetric channel with crossover probability `p`.
    Bsc { p: f64 },
    /// Binary erasure channel with erasure probability `epsilon`.
    Bec { epsilon: f64 },
    /// Antipodal signalling in Gaussian noise of standard deviation `sigma`.
    Awgn { sigma: f64 },
}

impl ChannelModel {
    pub fn bsc(p: f64) -> Result<Self> {
        if !(0.0..0.5).contains(&p) {
            return Err(Error::InvalidParameter(format!("BSC crossover {p} not in [0, 1/2)")));
        }
        Ok(Self::Bsc { p })
    }

    pub fn bec(epsilon: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(Error::InvalidParameter(format!("BEC erasure probability {epsilon} not in [0, 1]")));
        }
        Ok(Self::Bec { epsilon })
    }

    pub fn awgn(sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidParameter(format!("AWGN sigma {sigma} must be positive")));
        }
        Ok(Self::Awgn { sigma })
    }

    /// AWGN at `Eb/N0` (dB) for a code of rate `rate`.
    pub fn awgn_ebn0_db(ebn0_db: f64, rate: f64) -> Result<Self> {
        if !(rate > 0.0 && rate <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "code rate {rate} must lie in (0, 1] to derive the noise level"
            )));
        }
        Self::awgn((2.0 * rate * 10f64.powf(ebn0_db / 10.0)).powf(-0.5))
    }
}

/// Channel as written on the command line: `bsc:0.1`, `bec:0.3`, `awgn:2.0dB`.
///
/// The AWGN form is an `Eb/N0` in dB and only becomes a [`ChannelModel`]
/// once the code rate is known.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChannelParam {
    Bsc(f64),
    Bec(f64),
    AwgnEbN0Db(f64),
}

impl ChannelParam {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Bsc(_) => "bsc",
            Self::Bec(_) => "bec",
            Self::AwgnEbN0Db(_) => "awgn",
        }
    }

    pub fn value(&self) -> f64 {
        match *self {
            Self::Bsc(v) | Self::Bec(v) | Self::AwgnEbN0Db(v) => v,
        }
    }

    pub fn resolve(&self, rate: f64) -> Result<ChannelModel> {
        match *self {
            Self::Bsc(p) => ChannelModel::bsc(p),
            Self::Bec(e) => ChannelModel::bec(e),
            Self::AwgnEbN0Db(db) => ChannelModel::awgn_ebn0_db(db, rate),
        }
    }
}

impl FromStr for ChannelParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("invalid channel {s:?}; expected bsc:<p>, bec:<e> or awgn:<x>dB"));
        let (kind, value) = s.trim().split_once(':').ok_or_else(bad)?;
        let number = |v: &str| v.parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(bad);
        let param = match kind.to_ascii_lowercase().as_str() {
            "bsc" => Self::Bsc(number(value)?),
            "bec" => Self::Bec(number(value)?),
            "awgn" => {
                let v = value.strip_suffix("dB").or_else(|| value.strip_suffix("db")).unwrap_or(value);
                Self::AwgnEbN0Db(number(v)?)
            }
            _ => return Err(bad()),
        };
        match param {
            Self::Bsc(p) => ChannelModel::bsc(p).map(|_| param),
            Self::Bec(e) => ChannelModel::bec(e).map(|_| param),
            Self::AwgnEbN0Db(_) => Ok(param),
        }
    }
}

impl fmt::Display for ChannelParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Bsc(p) => write!(f, "bsc:{p}"),
            Self::Bec(e) => write!(f, "bec:{e}"),
            Self::AwgnEbN0Db(db) => write!(f, "awgn:{db}dB"),
        }
    }
}

/// Per-position beliefs, stored as clamped log-likelihood ratios
/// `lambda = ln(q / (1 - q))` where `q` is the posterior of symbol `+1`.
///
/// Position `(i, j)` (half `i`, offset `j`) is flat index `i * len/2 + j`.
#[derive(Debug, Clone, PartialEq)]
pub struct SoftVector {
    llr: Vec<f64>,
}

impl SoftVector {
    pub fn from_llr(llr: Vec<f64>) -> Self {
        Self { llr: llr.into_iter().map(clamp_llr).collect() }
    }

    /// From posteriors `q = Pr{symbol = +1}`.
    pub fn from_posteriors(q: &[f64]) -> Result<Self> {
        q.iter()
            .map(|&q| {
                if !(0.0..=1.0).contains(&q) {
                    return Err(Error::InvalidInput(format!("posterior {q} not in [0, 1]")));
                }
                Ok(clamp_llr((q / (1.0 - q)).ln()))
            })
            .collect::<Result<Vec<_>>>()
            .map(|llr| Self { llr })
    }

    /// From offsets `g = 2q - 1`.
    pub fn from_offsets(g: &[f64]) -> Result<Self> {
        g.iter()
            .map(|&g| {
                if !(-1.0..=1.0).contains(&g) {
                    return Err(Error::InvalidInput(format!("offset {g} not in [-1, 1]")));
                }
                Ok(clamp_llr(2.0 * g.atanh()))
            })
            .collect::<Result<Vec<_>>>()
            .map(|llr| Self { llr })
    }

    /// From likelihood ratios `h = q / (1 - q)`.
    pub fn from_likelihoods(h: &[f64]) -> Result<Self> {
        h.iter()
            .map(|&h| {
                if h.is_nan() || h < 0.0 {
                    return Err(Error::InvalidInput(format!("likelihood {h} is negative")));
                }
                Ok(clamp_llr(h.ln()))
            })
            .collect::<Result<Vec<_>>>()
            .map(|llr| Self { llr })
    }

    pub fn len(&self) -> usize {
        self.llr.len()
    }

    pub fn is_empty(&self) -> bool {
        self.llr.is_empty()
    }

    pub fn llr(&self) -> &[f64] {
        &self.llr
    }

    pub fn posterior(&self, index: usize) -> f64 {
        sigmoid(self.llr[index])
    }

    pub fn offset(&self, index: usize) -> f64 {
        (self.llr[index] / 2.0).tanh()
    }

    pub fn likelihood(&self, index: usize) -> f64 {
        self.llr[index].exp()
    }

    pub fn posteriors(&self) -> Vec<f64> {
        self.llr.iter().map(|&l| sigmoid(l)).collect()
    }

    pub fn offsets(&self) -> Vec<f64> {
        self.llr.iter().map(|&l| (l / 2.0).tanh()).collect()
    }

    pub fn likelihoods(&self) -> Vec<f64> {
        self.llr.iter().map(|&l| l.exp()).collect()
    }

    /// LLR at `(half, offset)`.
    pub fn at(&self, half: usize, offset: usize) -> f64 {
        debug_assert!(half < 2 && offset < self.len() / 2);
        self.llr[half * (self.len() / 2) + offset]
    }
}

#[inline]
pub(crate) fn sigmoid(llr: f64) -> f64 {
    1.0 / (1.0 + (-llr).exp())
}

/// `x -> (-1)^x`.
pub fn modulate(codeword: &Codeword) -> Vec<f64> {
    codeword.bits().iter().map(|&b| if b == 0 { 1.0 } else { -1.0 }).collect()
}

/// Passes symbols through the channel. BEC erasures are reported as `0.0`.
pub fn transmit<R: Rng + ?Sized>(channel: &ChannelModel, symbols: &[f64], rng: &mut R) -> Vec<f64> {
    match *channel {
        ChannelModel::Bsc { p } => symbols.iter().map(|&s| if rng.random_bool(p) { -s } else { s }).collect(),
        ChannelModel::Bec { epsilon } => {
            symbols.iter().map(|&s| if rng.random_bool(epsilon) { 0.0 } else { s }).collect()
        }
        ChannelModel::Awgn { sigma } => {
            symbols.iter().map(|&s| s + sigma * rng.sample::<f64, _>(StandardNormal)).collect()
        }
    }
}

/// Posterior beliefs of the transmitted symbols under a uniform input prior.
pub fn posteriors(channel: &ChannelModel, observations: &[f64]) -> SoftVector {
    let llr = match *channel {
        ChannelModel::Bsc { p } => {
            let magnitude = clamp_llr(((1.0 - p) / p).ln());
            observations.iter().map(|&y| if y >= 0.0 { magnitude } else { -magnitude }).collect()
        }
        ChannelModel::Bec { .. } => {
            observations.iter().map(|&y| if y == 0.0 { 0.0 } else { LLR_CLAMP.copysign(y) }).collect()
        }
        ChannelModel::Awgn { sigma } => {
            let scale = 2.0 / (sigma * sigma);
            observations.iter().map(|&y| clamp_llr(scale * y)).collect()
        }
    };
    SoftVector { llr }
}
