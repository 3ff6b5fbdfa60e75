//! Brute-force maximum-likelihood decoding for small codes.

use crate::channel::SoftVector;
use crate::code_model::{CodeSpec, Codeword};
use crate::decoder::{leaf_log_probs, METRIC_TIE_TOLERANCE};
use crate::encoder::{encode, InfoWord};
use crate::error::{Error, Result};

/// Largest dimension [`ml_decode`] will enumerate.
pub const ML_MAX_DIMENSION: usize = 20;

/// `sum_p ln Pr{c_p | y_p}` under the (clamped) beliefs.
pub fn codeword_loglik(codeword: &Codeword, beliefs: &SoftVector) -> Result<f64> {
    if codeword.len() != beliefs.len() {
        return Err(Error::InvalidInput(format!(
            "codeword length {} differs from belief length {}",
            codeword.len(),
            beliefs.len()
        )));
    }
    Ok(codeword
        .bits()
        .iter()
        .zip(beliefs.llr())
        .map(|(&bit, &llr)| {
            let (p0, p1) = leaf_log_probs(llr);
            if bit == 0 {
                p0
            } else {
                p1
            }
        })
        .sum())
}

/// Log-likelihood of every codeword, indexed by information-word integer
/// value (first processed bit most significant).
#[derive(Debug, Clone, PartialEq)]
pub struct LikelihoodTable {
    pub loglik: Vec<f64>,
}

impl LikelihoodTable {
    pub fn build(spec: &CodeSpec, beliefs: &SoftVector) -> Result<Self> {
        let k = spec.dimension();
        if k > ML_MAX_DIMENSION {
            return Err(Error::Capacity { dimension: k, limit: ML_MAX_DIMENSION });
        }
        if beliefs.len() != spec.length() {
            return Err(Error::InvalidInput(format!(
                "beliefs have length {} but the code has length {}",
                beliefs.len(),
                spec.length()
            )));
        }
        let loglik = (0..1u64 << k)
            .map(|v| codeword_loglik(&encode(spec, &InfoWord::from_integer(v, k))?, beliefs))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { loglik })
    }

    /// Index of the most likely codeword; among codewords within
    /// [`METRIC_TIE_TOLERANCE`] of the maximum the smallest index wins.
    pub fn argmax(&self) -> usize {
        let best = self.loglik.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        self.loglik.iter().position(|&l| l >= best - METRIC_TIE_TOLERANCE).unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MlDecision {
    pub info: InfoWord,
    pub codeword: Codeword,
    pub loglik: f64,
}

/// Exhaustive maximum-likelihood decoding.
pub fn ml_decode(spec: &CodeSpec, beliefs: &SoftVector) -> Result<MlDecision> {
    let table = LikelihoodTable::build(spec, beliefs)?;
    let best = table.argmax();
    let info = InfoWord::from_integer(best as u64, spec.dimension());
    Ok(MlDecision { codeword: encode(spec, &info)?, loglik: table.loglik[best], info })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{modulate, posteriors, ChannelModel, LLR_CLAMP};
    use crate::code_model::freeze_rm;

    #[test]
    fn loglik_examples() {
        let c: Codeword = "0110".parse().unwrap();
        let clean = posteriors(&ChannelModel::bsc(0.0).unwrap(), &modulate(&c));
        assert!(codeword_loglik(&c, &clean).unwrap().abs() < 1e-15);

        let erased = SoftVector::from_llr(vec![0.0; 4]);
        let ll = codeword_loglik(&c, &erased).unwrap();
        assert!((ll - 4.0 * 0.5f64.ln()).abs() < 1e-12);

        let flipped: Codeword = "0111".parse().unwrap();
        let penalty = codeword_loglik(&flipped, &clean).unwrap();
        assert!(penalty < -LLR_CLAMP + 1.0);
        assert!(codeword_loglik(&"01".parse().unwrap(), &clean).is_err());
    }

    #[test]
    fn two_codeword_example() {
        let spec = CodeSpec::new(2, [3]).unwrap();
        let beliefs = SoftVector::from_posteriors(&[0.8, 0.7, 0.9, 0.3]).unwrap();
        let out = ml_decode(&spec, &beliefs).unwrap();
        // 0001 scores 0.8*0.7*0.9*0.7 against 0.8*0.7*0.9*0.3 for 0000
        assert_eq!(out.codeword.to_string(), "0001");
        assert_eq!(out.info.to_string(), "1");
    }

    #[test]
    fn noiseless_returns_transmitted() {
        let spec = freeze_rm(2, 4).unwrap();
        let w = InfoWord::from_integer(0b10110011101, spec.dimension());
        let c = encode(&spec, &w).unwrap();
        let out = ml_decode(&spec, &posteriors(&ChannelModel::bsc(0.0).unwrap(), &modulate(&c))).unwrap();
        assert_eq!(out.info, w);
        assert_eq!(out.codeword, c);
    }

    #[test]
    fn ties_go_to_smallest_word() {
        let spec = freeze_rm(0, 2).unwrap();
        // two +1 and two -1 observations: both codewords equally likely
        let beliefs = posteriors(&ChannelModel::bsc(0.1).unwrap(), &[1.0, -1.0, 1.0, -1.0]);
        assert_eq!(ml_decode(&spec, &beliefs).unwrap().info.to_string(), "0");
    }

    #[test]
    fn dimension_guard() {
        let spec = CodeSpec::full(5).unwrap();
        let beliefs = SoftVector::from_llr(vec![0.0; 32]);
        assert!(matches!(ml_decode(&spec, &beliefs), Err(Error::Capacity { .. })));
    }
}
