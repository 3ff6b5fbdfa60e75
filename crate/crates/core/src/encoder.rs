//! Recursive Plotkin encoder and the direct polynomial-evaluation oracle.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::code_model::{CodeSpec, Codeword};
use crate::error::{Error, Result};

/// Information bits `f(xi)` for the paths of a [`CodeSpec`], in processing
/// order. Frozen paths implicitly carry zero.
///
/// Words compare lexicographically, which is the integer order with the
/// first processed bit as the most significant one.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InfoWord {
    bits: Vec<u8>,
}

impl InfoWord {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if let Some(b) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::InvalidInput(format!("information bit {b} is not binary")));
        }
        Ok(Self { bits })
    }

    pub(crate) fn from_bits_unchecked(bits: Vec<u8>) -> Self {
        Self { bits }
    }

    pub fn zeros(dimension: usize) -> Self {
        Self { bits: vec![0; dimension] }
    }

    /// The word whose integer value is `value`, first bit most significant.
    pub fn from_integer(value: u64, dimension: usize) -> Self {
        assert!(dimension <= 64);
        Self { bits: (0..dimension).map(|s| ((value >> (dimension - 1 - s)) & 1) as u8).collect() }
    }

    pub fn random<R: Rng + ?Sized>(dimension: usize, rng: &mut R) -> Self {
        Self { bits: (0..dimension).map(|_| rng.random::<bool>() as u8).collect() }
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn xor(&self, other: &InfoWord) -> InfoWord {
        assert_eq!(self.len(), other.len());
        InfoWord { bits: self.bits.iter().zip(&other.bits).map(|(a, b)| a ^ b).collect() }
    }

    /// Number of positions where the two words differ.
    pub fn distance(&self, other: &InfoWord) -> usize {
        self.bits.iter().zip(&other.bits).filter(|(a, b)| a != b).count()
    }

    /// Coefficient vector indexed by path index, zero on frozen paths.
    pub fn scatter(&self, spec: &CodeSpec) -> Result<Vec<u8>> {
        check_matches(spec, self)?;
        let mut coeffs = vec![0u8; spec.length()];
        for (path, &bit) in spec.info_paths().iter().zip(&self.bits) {
            coeffs[path.index()] = bit;
        }
        Ok(coeffs)
    }
}

impl fmt::Display for InfoWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bits {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl FromStr for InfoWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::InvalidInput(format!("invalid information bit {other:?}"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Ok(InfoWord { bits })
    }
}

fn check_matches(spec: &CodeSpec, word: &InfoWord) -> Result<()> {
    if word.len() != spec.dimension() {
        return Err(Error::InvalidInput(format!(
            "information word has {} bits but the code has dimension {}",
            word.len(),
            spec.dimension()
        )));
    }
    Ok(())
}

/// In-place Plotkin recursion: a block holding the coefficients of `f_0` in
/// its first half and `f_1` in its second half becomes `(c0, c0 + c1)`.
/// Returns the number of XOR operations.
fn plotkin(block: &mut [u8]) -> u64 {
    if block.len() < 2 {
        return 0;
    }
    let half = block.len() / 2;
    let (c0, c1) = block.split_at_mut(half);
    let mut ops = plotkin(c0) + plotkin(c1);
    for (b, a) in c1.iter_mut().zip(c0.iter()) {
        *b ^= a;
    }
    ops += half as u64;
    ops
}

/// Encodes `word` into a codeword of `spec`.
pub fn encode(spec: &CodeSpec, word: &InfoWord) -> Result<Codeword> {
    encode_counted(spec, word).map(|(c, _)| c)
}

/// As [`encode`], also returning the XOR count (`(n/2) log2 n`).
pub fn encode_counted(spec: &CodeSpec, word: &InfoWord) -> Result<(Codeword, u64)> {
    let mut block = word.scatter(spec)?;
    let ops = plotkin(&mut block);
    Ok((Codeword::from_bits_unchecked(block), ops))
}

/// Evaluates `sum_xi f(xi) x^xi` directly at every position. `O(n^2)`;
/// only meant as a test oracle.
pub fn encode_reference(spec: &CodeSpec, word: &InfoWord) -> Result<Codeword> {
    let coeffs = word.scatter(spec)?;
    let n = spec.length();
    let bits = (0..n)
        .map(|p| {
            coeffs.iter().enumerate().filter(|&(index, &f)| f == 1 && p & index == index).fold(0u8, |acc, _| acc ^ 1)
        })
        .collect();
    Ok(Codeword::from_bits_unchecked(bits))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code_model::{freeze_rm, index_path, monomial_codeword};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_word_encodes_to_zero() {
        let spec = freeze_rm(2, 4).unwrap();
        let c = encode(&spec, &InfoWord::zeros(spec.dimension())).unwrap();
        assert_eq!(c, Codeword::zeros(16));
    }

    #[test]
    fn small_examples() {
        let spec = CodeSpec::new(1, [1]).unwrap();
        assert_eq!(encode(&spec, &"1".parse().unwrap()).unwrap().to_string(), "01");
        let spec = CodeSpec::new(2, [3]).unwrap();
        assert_eq!(encode(&spec, &"1".parse().unwrap()).unwrap().to_string(), "0001");
        // processing order is [11, 00]
        let spec = CodeSpec::new(2, [0, 3]).unwrap();
        let w: InfoWord = "11".parse().unwrap();
        assert_eq!(encode_reference(&spec, &w).unwrap().to_string(), "1110");
        assert_eq!(encode(&spec, &w).unwrap().to_string(), "1110");
    }

    #[test]
    fn single_path_gives_monomial() {
        for m in 0..=5 {
            for i in 0..1usize << m {
                let spec = CodeSpec::new(m, [i]).unwrap();
                let w = InfoWord::new(vec![1]).unwrap();
                let expected = monomial_codeword(&index_path(i, m).unwrap());
                assert_eq!(encode_reference(&spec, &w).unwrap(), expected);
                assert_eq!(encode(&spec, &w).unwrap(), expected);
            }
        }
    }

    #[test]
    fn mismatched_word_is_rejected() {
        let spec = freeze_rm(1, 3).unwrap();
        assert!(matches!(encode(&spec, &InfoWord::zeros(3)), Err(Error::InvalidInput(_))));
        assert!(InfoWord::new(vec![0, 2]).is_err());
    }

    #[test]
    fn matches_reference_exhaustively_for_small_codes() {
        for m in 0..=4u32 {
            for r in 0..=m {
                let spec = freeze_rm(r, m).unwrap();
                let k = spec.dimension();
                for v in 0..1u64 << k {
                    let w = InfoWord::from_integer(v, k);
                    assert_eq!(encode(&spec, &w).unwrap(), encode_reference(&spec, &w).unwrap());
                }
            }
        }
    }

    #[test]
    fn matches_reference_on_random_words() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for m in 5..=8u32 {
            let spec = CodeSpec::full(m).unwrap();
            for _ in 0..1000 / 4 {
                let w = InfoWord::random(spec.dimension(), &mut rng);
                assert_eq!(encode(&spec, &w).unwrap(), encode_reference(&spec, &w).unwrap());
            }
        }
    }

    #[test]
    fn rm_minimum_distance() {
        for m in 1..=4u32 {
            for r in 0..=m {
                let spec = freeze_rm(r, m).unwrap();
                let k = spec.dimension();
                let min = (1..1u64 << k)
                    .map(|v| encode(&spec, &InfoWord::from_integer(v, k)).unwrap().weight())
                    .min()
                    .unwrap();
                assert_eq!(min, 1 << (m - r), "RM({r},{m})");
            }
        }
    }

    #[test]
    fn operation_count_grows_like_n_log_n() {
        let count = |m: u32| {
            let spec = CodeSpec::full(m).unwrap();
            encode_counted(&spec, &InfoWord::zeros(spec.dimension())).unwrap().1
        };
        assert_eq!(count(3), 12);
        for m in 1..=12u32 {
            let ratio = count(m + 1) as f64 / count(m) as f64;
            let expected = 2.0 * (m + 1) as f64 / m as f64;
            assert!(ratio >= 0.8 * expected && ratio <= 1.2 * expected);
        }
    }

    proptest! {
        #[test]
        fn encoder_is_linear(m in 1u32..=8, seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let spec = CodeSpec::full(m).unwrap();
            let a = InfoWord::random(spec.dimension(), &mut rng);
            let b = InfoWord::random(spec.dimension(), &mut rng);
            let sum = encode(&spec, &a.xor(&b)).unwrap();
            prop_assert_eq!(sum, encode(&spec, &a).unwrap().xor(&encode(&spec, &b).unwrap()));
        }
    }
}
