//! Successive cancellation over the path tree.
//!
//! Leaves are visited by decreasing path index: at every node the
//! `v`-extension (`i = 1`) is decoded before the `u`-extension (`i = 0`).
//! Beliefs of level `l` occupy `2^(m - l)` slots of a workspace that is
//! reused across calls, so a decode allocates nothing beyond its result.

use super::{
    decide, first_dirty_level, leaf_log_probs, merge_symbols, path_bit, u_layer, v_layer, FrozenMetric, OpCounts,
};
use crate::channel::{sigmoid, SoftVector};
use crate::code_model::{CodeSpec, Codeword};
use crate::encoder::InfoWord;
use crate::error::{Error, Result};

/// Output of [`sc_decode`].
#[derive(Debug, Clone, PartialEq)]
pub struct DecodeResult {
    pub info: InfoWord,
    pub codeword: Codeword,
    /// `Pr{f(S) = 0}` at each information leaf, in processing order.
    pub leaf_posteriors: Vec<f64>,
    /// `sum ln Pr{decided value}` over every leaf.
    pub metric_all_leaves: f64,
    /// The same sum restricted to information leaves.
    pub metric_info_leaves: f64,
    pub ops: OpCounts,
}

impl DecodeResult {
    pub fn metric(&self, mode: FrozenMetric) -> f64 {
        match mode {
            FrozenMetric::Include => self.metric_all_leaves,
            FrozenMetric::Ignore => self.metric_info_leaves,
        }
    }
}

/// Output of [`sc_decode_genie`], indexed by path index.
#[derive(Debug, Clone, PartialEq)]
pub struct GenieResult {
    /// Whether the raw decision at each leaf disagreed with the truth.
    pub errors: Vec<bool>,
    /// Leaf belief seen by each leaf given correct earlier decisions.
    pub leaf_llr: Vec<f64>,
    pub ops: OpCounts,
}

/// SC decoder with a reusable workspace for codes of `m` levels.
#[derive(Debug, Clone)]
pub struct ScDecoder {
    m: u32,
    /// `llr[l]` for `l` in `1..=m`; level 0 is the caller's beliefs.
    llr: Vec<Vec<f64>>,
    /// `dec[l][b]`: output of the last completed level-`l` node whose final
    /// path bit is `b`. `dec[0][0]` is the codeword.
    dec: Vec<[Vec<i8>; 2]>,
}

impl ScDecoder {
    pub fn new(m: u32) -> Self {
        let len = |l: u32| 1usize << (m - l);
        let llr = (0..=m).map(|l| if l == 0 { Vec::new() } else { vec![0.0; len(l)] }).collect();
        let dec = (0..=m)
            .map(|l| {
                let second = if l == 0 { Vec::new() } else { vec![1; len(l)] };
                [vec![1; len(l)], second]
            })
            .collect();
        Self { m, llr, dec }
    }

    /// Runs the recursion, asking `choose(path_index, leaf_llr)` for the bit
    /// of every leaf. Returns the resulting codeword symbols' bits.
    fn walk<F>(&mut self, spec: &CodeSpec, beliefs: &SoftVector, mut choose: F) -> Result<(Codeword, OpCounts)>
    where
        F: FnMut(usize, f64) -> u8,
    {
        if spec.levels() != self.m {
            *self = ScDecoder::new(spec.levels());
        }
        let m = self.m;
        let n = spec.length();
        if beliefs.len() != n {
            return Err(Error::InvalidInput(format!(
                "beliefs have length {} but the code has length {n}",
                beliefs.len()
            )));
        }
        let channel = beliefs.llr();
        let mut ops = OpCounts::default();

        for index in (0..n).rev() {
            for level in first_dirty_level(index, m)..=m {
                let (lo, hi) = self.llr.split_at_mut(level as usize);
                let parent: &[f64] = if level == 1 { channel } else { &lo[level as usize - 1] };
                let child = &mut hi[0];
                if path_bit(index, m, level) == 1 {
                    v_layer(parent, child);
                } else {
                    u_layer(parent, &self.dec[level as usize][1], child);
                }
                ops.kernel += child.len() as u64;
            }
            let leaf = if m == 0 { channel[0] } else { self.llr[m as usize][0] };
            ops.leaf += 1;
            let symbol = 1 - 2 * choose(index, leaf) as i8;

            if m == 0 {
                self.dec[0][0][0] = symbol;
                continue;
            }
            self.dec[m as usize][index & 1][0] = symbol;
            let mut level = m;
            while level >= 1 && path_bit(index, m, level) == 0 {
                let (lo, hi) = self.dec.split_at_mut(level as usize);
                let slot = if level == 1 { 0 } else { path_bit(index, m, level - 1) };
                merge_symbols(&hi[0][0], &hi[0][1], &mut lo[level as usize - 1][slot]);
                level -= 1;
            }
        }
        let codeword = Codeword::from_bits_unchecked(self.dec[0][0].iter().map(|&s| ((1 - s) / 2) as u8).collect());
        Ok((codeword, ops))
    }

    pub fn decode(&mut self, spec: &CodeSpec, beliefs: &SoftVector) -> Result<DecodeResult> {
        let mut info = Vec::with_capacity(spec.dimension());
        let mut leaf_posteriors = Vec::with_capacity(spec.dimension());
        let mut metric_all_leaves = 0.0;
        let mut metric_info_leaves = 0.0;
        let (codeword, ops) = self.walk(spec, beliefs, |index, llr| {
            let (p0, p1) = leaf_log_probs(llr);
            if spec.is_info(index) {
                let bit = decide(llr);
                let delta = if bit == 0 { p0 } else { p1 };
                metric_all_leaves += delta;
                metric_info_leaves += delta;
                info.push(bit);
                leaf_posteriors.push(sigmoid(llr));
                bit
            } else {
                metric_all_leaves += p0;
                0
            }
        })?;
        Ok(DecodeResult {
            info: InfoWord::from_bits_unchecked(info),
            codeword,
            leaf_posteriors,
            metric_all_leaves,
            metric_info_leaves,
            ops,
        })
    }

    pub fn decode_genie(&mut self, spec: &CodeSpec, beliefs: &SoftVector, truth: &InfoWord) -> Result<GenieResult> {
        let coeffs = truth.scatter(spec)?;
        let n = spec.length();
        let mut errors = vec![false; n];
        let mut leaf_llr = vec![0.0; n];
        let (_, ops) = self.walk(spec, beliefs, |index, llr| {
            let raw = if spec.is_info(index) { decide(llr) } else { 0 };
            errors[index] = raw != coeffs[index];
            leaf_llr[index] = llr;
            coeffs[index]
        })?;
        Ok(GenieResult { errors, leaf_llr, ops })
    }
}

/// Decodes `beliefs` with successive cancellation.
pub fn sc_decode(spec: &CodeSpec, beliefs: &SoftVector) -> Result<DecodeResult> {
    ScDecoder::new(spec.levels()).decode(spec, beliefs)
}

/// SC decoding where each leaf is corrected to `truth` after its raw
/// decision is recorded.
pub fn sc_decode_genie(spec: &CodeSpec, beliefs: &SoftVector, truth: &InfoWord) -> Result<GenieResult> {
    ScDecoder::new(spec.levels()).decode_genie(spec, beliefs, truth)
}
