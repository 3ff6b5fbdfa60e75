//! Successive cancellation list decoding.
//!
//! Up to `L` candidates walk the path tree in lockstep. At every leaf each
//! candidate is extended (twice on information leaves, once on frozen ones)
//! and the `L` most probable extensions survive. Candidates created by a
//! fork share their per-level belief arrays; a shared array is replaced by
//! a private one before it is written, so a fork costs `O(m)` and the total
//! copy volume stays within `O(L n log n)`.

use std::cmp::Ordering;
use std::rc::Rc;

use serde::Serialize;

use super::{
    first_dirty_level, leaf_log_probs, merge_symbols, path_bit, u_layer, v_layer, FrozenMetric, OpCounts,
    METRIC_TIE_TOLERANCE,
};
use crate::channel::SoftVector;
use crate::code_model::{CodeSpec, Codeword};
use crate::encoder::InfoWord;
use crate::error::{Error, Result};

/// How forked candidates hold their belief state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StateSharing {
    /// Share arrays between forks and copy before mutation.
    #[default]
    CopyOnWrite,
    /// Copy every array at each fork.
    DeepCopy,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ListConfig {
    pub list_size: usize,
    pub frozen_metric: FrozenMetric,
    pub sharing: StateSharing,
}

impl ListConfig {
    pub fn new(list_size: usize) -> Self {
        Self { list_size, frozen_metric: FrozenMetric::Include, sharing: StateSharing::CopyOnWrite }
    }
}

/// One extension of a parent candidate at a leaf.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extension {
    /// Rank of the parent among the current candidates.
    pub parent: usize,
    pub bit: u8,
    pub metric: f64,
}

/// Extends every candidate at a leaf. Information leaves fork each candidate
/// into bit 0 and bit 1; frozen leaves extend with bit 0 only, adding
/// `ln Pr{bit 0}` when `mode` is [`FrozenMetric::Include`].
pub fn extend_leaf(
    parent_metrics: &[f64],
    leaf_llrs: &[f64],
    frozen: bool,
    mode: FrozenMetric,
) -> Result<Vec<Extension>> {
    if parent_metrics.is_empty() {
        return Err(Error::InternalState("no live candidates at a leaf".into()));
    }
    if parent_metrics.len() != leaf_llrs.len() {
        return Err(Error::InternalState(format!(
            "{} candidates but {} leaf beliefs",
            parent_metrics.len(),
            leaf_llrs.len()
        )));
    }
    let mut pool = Vec::with_capacity(2 * parent_metrics.len());
    for (parent, (&metric, &llr)) in parent_metrics.iter().zip(leaf_llrs).enumerate() {
        let (p0, p1) = leaf_log_probs(llr);
        if frozen {
            let delta = match mode {
                FrozenMetric::Include => p0,
                FrozenMetric::Ignore => 0.0,
            };
            pool.push(Extension { parent, bit: 0, metric: metric + delta });
        } else {
            pool.push(Extension { parent, bit: 0, metric: metric + p0 });
            pool.push(Extension { parent, bit: 1, metric: metric + p1 });
        }
    }
    Ok(pool)
}

fn rank_order(a: &Extension, b: &Extension) -> Ordering {
    b.metric.total_cmp(&a.metric).then(a.parent.cmp(&b.parent)).then(a.bit.cmp(&b.bit))
}

/// Keeps the `list_size` largest metrics, ranked descending. Ties go to the
/// earlier parent, then to bit 0.
pub fn select_top(mut pool: Vec<Extension>, list_size: usize) -> Vec<Extension> {
    if pool.len() > list_size && list_size > 0 {
        pool.select_nth_unstable_by(list_size - 1, rank_order);
    }
    pool.truncate(list_size);
    pool.sort_unstable_by(rank_order);
    pool
}

/// Persistent list of decided information bits, newest first.
#[derive(Debug, Clone, Default)]
struct BitList(Option<Rc<BitNode>>);

#[derive(Debug)]
struct BitNode {
    bit: u8,
    prev: Option<Rc<BitNode>>,
}

impl Drop for BitNode {
    fn drop(&mut self) {
        let mut next = self.prev.take();
        while let Some(node) = next {
            match Rc::try_unwrap(node) {
                Ok(mut node) => next = node.prev.take(),
                Err(_) => break,
            }
        }
    }
}

impl BitList {
    fn push(&self, bit: u8) -> BitList {
        BitList(Some(Rc::new(BitNode { bit, prev: self.0.clone() })))
    }

    fn to_vec(&self) -> Vec<u8> {
        let mut bits = Vec::new();
        let mut cur = self.0.as_deref();
        while let Some(node) = cur {
            bits.push(node.bit);
            cur = node.prev.as_deref();
        }
        bits.reverse();
        bits
    }
}

/// Belief state of one candidate, laid out like the SC workspace.
#[derive(Debug, Clone)]
struct State {
    /// `llr[0]` is the channel; `llr[l]` has `2^(m - l)` entries.
    llr: Vec<Rc<Vec<f64>>>,
    dec: Vec<[Rc<Vec<i8>>; 2]>,
}

/// Returns `slot` for writing, first replacing it by a private array if it
/// is shared. Every write overwrites the whole array, so nothing is copied
/// over from the shared one.
fn writable<'a, T: Copy + Default>(slot: &'a mut Rc<Vec<T>>, counts: &mut OpCounts) -> &'a mut Vec<T> {
    if Rc::get_mut(slot).is_none() {
        let len = slot.len();
        *slot = Rc::new(vec![T::default(); len]);
        counts.copied += len as u64;
    }
    Rc::get_mut(slot).expect("array is private after replacement")
}

impl State {
    fn new(m: u32, channel: &[f64]) -> Self {
        let len = |l: u32| 1usize << (m - l);
        let llr = (0..=m).map(|l| Rc::new(if l == 0 { channel.to_vec() } else { vec![0.0; len(l)] })).collect();
        let dec = (0..=m)
            .map(|l| {
                let second = if l == 0 { Vec::new() } else { vec![1; len(l)] };
                [Rc::new(vec![1; len(l)]), Rc::new(second)]
            })
            .collect();
        Self { llr, dec }
    }

    fn deep_copy(&self, counts: &mut OpCounts) -> Self {
        let llr = self
            .llr
            .iter()
            .map(|a| {
                counts.copied += a.len() as u64;
                Rc::new(a.to_vec())
            })
            .collect();
        let dec = self
            .dec
            .iter()
            .map(|[a, b]| {
                counts.copied += (a.len() + b.len()) as u64;
                [Rc::new(a.to_vec()), Rc::new(b.to_vec())]
            })
            .collect();
        Self { llr, dec }
    }

    /// Recomputes the beliefs on the way to leaf `index`; returns its belief.
    fn descend(&mut self, index: usize, m: u32, counts: &mut OpCounts) -> f64 {
        for level in first_dirty_level(index, m)..=m {
            let l = level as usize;
            let (lo, hi) = self.llr.split_at_mut(l);
            let parent: &[f64] = &lo[l - 1];
            let child = writable(&mut hi[0], counts);
            if path_bit(index, m, level) == 1 {
                v_layer(parent, child);
            } else {
                u_layer(parent, &self.dec[l][1], child);
            }
            counts.kernel += child.len() as u64;
        }
        self.llr[m as usize][0]
    }

    /// Stores the decided leaf symbol and completes every finished node.
    fn ascend(&mut self, index: usize, m: u32, symbol: i8, counts: &mut OpCounts) {
        if m == 0 {
            writable(&mut self.dec[0][0], counts)[0] = symbol;
            return;
        }
        writable(&mut self.dec[m as usize][index & 1], counts)[0] = symbol;
        let mut level = m;
        while level >= 1 && path_bit(index, m, level) == 0 {
            let l = level as usize;
            let (lo, hi) = self.dec.split_at_mut(l);
            let slot = if level == 1 { 0 } else { path_bit(index, m, level - 1) };
            let target = writable(&mut lo[l - 1][slot], counts);
            merge_symbols(&hi[0][0], &hi[0][1], target);
            level -= 1;
        }
    }

    fn codeword(&self) -> Codeword {
        Codeword::from_bits_unchecked(self.dec[0][0].iter().map(|&s| ((1 - s) / 2) as u8).collect())
    }
}

#[derive(Debug, Clone)]
struct Candidate {
    metric: f64,
    bits: BitList,
    state: State,
}

/// A decoded candidate with its log-metric `sum ln Pr{decided leaf value}`.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedCandidate {
    pub info: InfoWord,
    pub codeword: Codeword,
    pub metric: f64,
}

/// Candidates ranked by metric, most probable first.
#[derive(Debug, Clone, PartialEq)]
pub struct ListResult {
    pub candidates: Vec<RankedCandidate>,
    pub ops: OpCounts,
}

impl ListResult {
    /// The decoder's decision.
    pub fn best(&self) -> &RankedCandidate {
        &self.candidates[0]
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ListDecoder {
    config: ListConfig,
}

impl ListDecoder {
    pub fn new(config: ListConfig) -> Result<Self> {
        if config.list_size == 0 {
            return Err(Error::InvalidParameter("list size must be at least 1".into()));
        }
        Ok(Self { config })
    }

    pub fn config(&self) -> &ListConfig {
        &self.config
    }

    pub fn decode(&self, spec: &CodeSpec, beliefs: &SoftVector) -> Result<ListResult> {
        let m = spec.levels();
        let n = spec.length();
        if beliefs.len() != n {
            return Err(Error::InvalidInput(format!(
                "beliefs have length {} but the code has length {n}",
                beliefs.len()
            )));
        }
        let mut counts = OpCounts::default();
        let mut candidates =
            vec![Candidate { metric: 0.0, bits: BitList::default(), state: State::new(m, beliefs.llr()) }];

        for index in (0..n).rev() {
            let leaf_llrs: Vec<f64> = candidates.iter_mut().map(|c| c.state.descend(index, m, &mut counts)).collect();
            counts.leaf += candidates.len() as u64;
            let metrics: Vec<f64> = candidates.iter().map(|c| c.metric).collect();
            let frozen = !spec.is_info(index);
            let pool = extend_leaf(&metrics, &leaf_llrs, frozen, self.config.frozen_metric)?;
            counts.select += pool.len() as u64;
            let survivors = select_top(pool, self.config.list_size);

            let mut uses = vec![0usize; candidates.len()];
            for s in &survivors {
                uses[s.parent] += 1;
            }
            let mut parents: Vec<Option<Candidate>> = candidates.into_iter().map(Some).collect();
            candidates = Vec::with_capacity(survivors.len());
            for s in survivors {
                uses[s.parent] -= 1;
                let mut child = if uses[s.parent] == 0 {
                    parents[s.parent].take().ok_or_else(|| Error::InternalState("parent consumed twice".into()))?
                } else {
                    let parent = parents[s.parent]
                        .as_ref()
                        .ok_or_else(|| Error::InternalState("parent consumed twice".into()))?;
                    self.fork(parent, &mut counts)
                };
                child.metric = s.metric;
                if !frozen {
                    child.bits = child.bits.push(s.bit);
                }
                child.state.ascend(index, m, 1 - 2 * s.bit as i8, &mut counts);
                candidates.push(child);
            }
        }

        let mut ranked: Vec<RankedCandidate> = candidates
            .iter()
            .map(|c| RankedCandidate {
                info: InfoWord::from_bits_unchecked(c.bits.to_vec()),
                codeword: c.state.codeword(),
                metric: c.metric,
            })
            .collect();
        settle_near_ties(&mut ranked);
        Ok(ListResult { candidates: ranked, ops: counts })
    }

    fn fork(&self, parent: &Candidate, counts: &mut OpCounts) -> Candidate {
        let state = match self.config.sharing {
            StateSharing::CopyOnWrite => parent.state.clone(),
            StateSharing::DeepCopy => parent.state.deep_copy(counts),
        };
        Candidate { metric: parent.metric, bits: parent.bits.clone(), state }
    }
}

/// Orders the candidates within [`METRIC_TIE_TOLERANCE`] of the best metric
/// by information word, so the final decision among equally likely
/// codewords is the smallest information word.
fn settle_near_ties(ranked: &mut [RankedCandidate]) {
    let Some(best) = ranked.first().map(|c| c.metric) else {
        return;
    };
    let tied = ranked.iter().take_while(|c| c.metric >= best - METRIC_TIE_TOLERANCE).count();
    ranked[..tied].sort_by(|a, b| a.info.cmp(&b.info));
}

/// List decoding with list size `list_size`, frozen leaves included in the
/// metric and copy-on-write state sharing.
pub fn list_decode(spec: &CodeSpec, beliefs: &SoftVector, list_size: usize) -> Result<ListResult> {
    ListDecoder::new(ListConfig::new(list_size))?.decode(spec, beliefs)
}
