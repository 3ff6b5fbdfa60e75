//! Recalculation kernels shared by the SC and list decoders.
//!
//! A block of beliefs splits into halves `(y0, y1)` carrying `(u, uv)`.
//! The `v` half is estimated first through the product of offsets, then the
//! `u` half through the product of likelihoods once `v` is decided. Both
//! kernels work on clamped log-likelihood ratios.

pub mod list;
pub mod sc;

use std::fmt;
use std::ops::AddAssign;
use std::str::FromStr;

use serde::Serialize;

use crate::channel::{clamp_llr, LLR_CLAMP};
use crate::error::{Error, Result};

/// Log-likelihoods closer than this are treated as equal when picking a
/// single most likely codeword.
pub const METRIC_TIE_TOLERANCE: f64 = 1e-9;

/// `v`-extension kernel: offsets multiply, `g = g0 * g1`.
///
/// Evaluated as `2 atanh(tanh(a/2) tanh(b/2))` in a form that stays finite
/// for saturated inputs.
#[inline]
pub fn combine_v(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    let (x, y) = (a.abs(), b.abs());
    let magnitude = x.min(y) + (-(x + y)).exp().ln_1p() - (-(x - y).abs()).exp().ln_1p();
    let magnitude = magnitude.max(0.0);
    if (a < 0.0) != (b < 0.0) {
        -magnitude
    } else {
        magnitude
    }
}

/// `u`-extension kernel: likelihoods multiply, `h = h0 * h1^v` where `v` is
/// the decided `+1/-1` symbol of the `v` half.
#[inline]
pub fn combine_u(a: f64, b: f64, v: i8) -> f64 {
    clamp_llr(a + v as f64 * b)
}

/// [`combine_v`] on offsets `g = 2q - 1`.
pub fn combine_v_offsets(g0: f64, g1: f64) -> f64 {
    g0 * g1
}

/// [`combine_u`] on likelihood ratios `h = q / (1 - q)`, saturating at the
/// clamp instead of dividing by zero.
pub fn combine_u_likelihoods(h0: f64, h1: f64, v: i8) -> f64 {
    let (lo, hi) = ((-LLR_CLAMP).exp(), LLR_CLAMP.exp());
    let h = match v {
        1 => h0 * h1,
        _ if h1 == 0.0 => {
            if h0 == 0.0 {
                1.0
            } else {
                hi
            }
        }
        _ => h0 / h1,
    };
    h.clamp(lo, hi)
}

#[inline]
fn softplus(x: f64) -> f64 {
    x.max(0.0) + (-x.abs()).exp().ln_1p()
}

/// `(ln Pr{bit 0}, ln Pr{bit 1})` for a leaf belief.
#[inline]
pub(crate) fn leaf_log_probs(llr: f64) -> (f64, f64) {
    (-softplus(-llr), -softplus(llr))
}

/// Hard decision at an information leaf: bit 0 iff `q >= 1/2`.
#[inline]
pub(crate) fn decide(llr: f64) -> u8 {
    let (p0, p1) = leaf_log_probs(llr);
    (p0 < p1) as u8
}

pub(crate) fn v_layer(parent: &[f64], child: &mut [f64]) {
    let (y0, y1) = parent.split_at(child.len());
    for ((c, &a), &b) in child.iter_mut().zip(y0).zip(y1) {
        *c = combine_v(a, b);
    }
}

pub(crate) fn u_layer(parent: &[f64], v: &[i8], child: &mut [f64]) {
    let (y0, y1) = parent.split_at(child.len());
    for (((c, &a), &b), &s) in child.iter_mut().zip(y0).zip(y1).zip(v) {
        *c = combine_u(a, b, s);
    }
}

/// Node output `(u, u * v)` in the symbol view.
pub(crate) fn merge_symbols(u: &[i8], v: &[i8], out: &mut [i8]) {
    let (first, second) = out.split_at_mut(u.len());
    first.copy_from_slice(u);
    for ((o, &a), &b) in second.iter_mut().zip(u).zip(v) {
        *o = a * b;
    }
}

/// Bit `i_level` of path `index` in an `m`-level tree.
#[inline]
pub(crate) fn path_bit(index: usize, m: u32, level: u32) -> usize {
    (index >> (m - level)) & 1
}

/// First level whose beliefs change when moving from leaf `index + 1` to
/// leaf `index` in decreasing-index order.
#[inline]
pub(crate) fn first_dirty_level(index: usize, m: u32) -> u32 {
    m.saturating_sub(index.trailing_ones()).max(1)
}

/// Whether frozen leaves contribute their likelihood to a candidate metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FrozenMetric {
    #[default]
    Include,
    Ignore,
}

impl FromStr for FrozenMetric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "include" => Ok(Self::Include),
            "ignore" => Ok(Self::Ignore),
            other => Err(Error::InvalidParameter(format!("frozen metric mode {other:?}; expected include or ignore"))),
        }
    }
}

impl fmt::Display for FrozenMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Include => "include",
            Self::Ignore => "ignore",
        })
    }
}

/// Operation counters. One kernel evaluation is one `kernel` operation;
/// leaf evaluations, selection work and belief-state copies are kept apart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct OpCounts {
    pub kernel: u64,
    pub leaf: u64,
    pub select: u64,
    /// Belief elements written to private copies of shared state.
    pub copied: u64,
}

impl AddAssign for OpCounts {
    fn add_assign(&mut self, rhs: Self) {
        self.kernel += rhs.kernel;
        self.leaf += rhs.leaf;
        self.select += rhs.select;
        self.copied += rhs.copied;
    }
}
