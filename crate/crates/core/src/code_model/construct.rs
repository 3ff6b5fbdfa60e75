use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{check_levels, rm_dimension, CodeSpec};
use crate::channel::{modulate, posteriors, transmit, ChannelModel};
use crate::decoder::sc::ScDecoder;
use crate::encoder::{encode, InfoWord};
use crate::error::{Error, Result};

/// `RM(r, m)`: keeps every path of weight at most `r`.
pub fn freeze_rm(r: u32, m: u32) -> Result<CodeSpec> {
    let k = rm_dimension(r, m)?;
    let spec = CodeSpec::new(m, (0..1usize << m).filter(|i| i.count_ones() <= r))?;
    debug_assert_eq!(spec.dimension(), k);
    Ok(spec.with_rm_order(r))
}

/// Erasure probability of every bit channel of `BEC(z)`, indexed by path.
///
/// A parent parameter `z` yields `2z - z^2` on the `i = 1` branch and `z^2`
/// on the `i = 0` branch.
pub fn bec_parameters(m: u32, z: f64) -> Result<Vec<f64>> {
    check_levels(m)?;
    if !(z > 0.0 && z < 1.0) {
        return Err(Error::InvalidParameter(format!("design erasure probability {z} must lie in (0, 1)")));
    }
    let mut params = vec![z];
    for _ in 0..m {
        params = params.iter().flat_map(|&z| [z * z, 2.0 * z - z * z]).collect();
    }
    Ok(params)
}

fn check_dimension(m: u32, k: usize) -> Result<()> {
    check_levels(m)?;
    if k > 1usize << m {
        return Err(Error::InvalidParameter(format!("dimension k = {k} exceeds n = {}", 1usize << m)));
    }
    Ok(())
}

/// Keeps the `k` paths with the smallest score; ties go to the smaller index.
fn most_reliable<T: PartialOrd + Copy>(m: u32, k: usize, scores: &[T]) -> Result<CodeSpec> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].partial_cmp(&scores[b]).unwrap_or(std::cmp::Ordering::Equal).then(a.cmp(&b)));
    CodeSpec::new(m, order.into_iter().take(k))
}

/// Keeps the `k` most reliable paths under the Bhattacharyya recursion for
/// an erasure channel with design parameter `z`.
pub fn freeze_bec(m: u32, k: usize, z: f64) -> Result<CodeSpec> {
    check_dimension(m, k)?;
    let params = bec_parameters(m, z)?;
    most_reliable(m, k, &params)
}

/// Estimates the first-error probability of every path with genie-aided SC
/// decoding of random codewords and keeps the `k` most reliable paths.
///
/// Trial `t` draws its randomness from a generator seeded with `seed + t`,
/// so the result does not depend on how trials are scheduled.
pub fn freeze_montecarlo(m: u32, k: usize, channel: &ChannelModel, trials: usize, seed: u64) -> Result<CodeSpec> {
    check_dimension(m, k)?;
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let errors = path_error_counts(m, channel, trials, seed)?;
    most_reliable(m, k, &errors)
}

/// Per-path genie-aided error counts over `trials` random codewords of the
/// full code.
pub fn path_error_counts(m: u32, channel: &ChannelModel, trials: usize, seed: u64) -> Result<Vec<u64>> {
    let full = CodeSpec::full(m)?;
    let n = full.length();
    (0..trials as u64)
        .into_par_iter()
        .map_init(
            || ScDecoder::new(m),
            |decoder, t| -> Result<Vec<u64>> {
                let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(t));
                let truth = InfoWord::random(n, &mut rng);
                let codeword = encode(&full, &truth)?;
                let observed = transmit(channel, &modulate(&codeword), &mut rng);
                let beliefs = posteriors(channel, &observed);
                let genie = decoder.decode_genie(&full, &beliefs, &truth)?;
                Ok(genie.errors.iter().map(|&e| e as u64).collect())
            },
        )
        .try_reduce(
            || vec![0u64; n],
            |mut acc, counts| {
                acc.iter_mut().zip(counts).for_each(|(a, c)| *a += c);
                Ok(acc)
            },
        )
}
