//! Path/monomial algebra, code descriptions and frozen-set constructions.
//!
//! Index conventions shared by the whole crate:
//!
//! * a path `(i_1, ..., i_m)` has integer index `I = sum i_l * 2^(m - l)`,
//!   so `i_1` is the most significant bit;
//! * a codeword position `x = (x_1, ..., x_m)` has index
//!   `p = sum x_l * 2^(m - l)`; the first half of a block is the `x_1 = 0`
//!   half;
//! * information paths are processed with the `i = 1` branch before the
//!   `i = 0` branch at every level, i.e. by decreasing `I`.

mod construct;
mod frozen_file;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub use construct::{bec_parameters, freeze_bec, freeze_montecarlo, freeze_rm, path_error_counts};
pub use frozen_file::{read_frozen_set, write_frozen_set};

/// Largest supported number of recursion levels.
pub const MAX_LEVELS: u32 = 24;

fn check_levels(m: u32) -> Result<()> {
    if m > MAX_LEVELS {
        return Err(Error::InvalidParameter(format!("m = {m} exceeds the supported maximum {MAX_LEVELS}")));
    }
    Ok(())
}

/// A full binary path `(i_1, ..., i_m)` naming the monomial `x^xi` and one
/// leaf of the decoding tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    index: usize,
    m: u32,
}

impl Path {
    pub fn new(index: usize, m: u32) -> Result<Self> {
        check_levels(m)?;
        if index >> m != 0 {
            return Err(Error::InvalidParameter(format!("path index {index} out of range for m = {m}")));
        }
        Ok(Self { index, m })
    }

    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        let m = bits.len() as u32;
        check_levels(m)?;
        let mut index = 0usize;
        for &b in bits {
            if b > 1 {
                return Err(Error::InvalidParameter(format!("path bit {b} is not binary")));
            }
            index = (index << 1) | b as usize;
        }
        Ok(Self { index, m })
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn levels(&self) -> u32 {
        self.m
    }

    /// Bit `i_level` for `level` in `1..=m`.
    pub fn bit(&self, level: u32) -> u8 {
        debug_assert!((1..=self.m).contains(&level));
        ((self.index >> (self.m - level)) & 1) as u8
    }

    pub fn bits(&self) -> Vec<u8> {
        (1..=self.m).map(|l| self.bit(l)).collect()
    }

    pub fn weight(&self) -> u32 {
        self.index.count_ones()
    }

    /// The prefix `(i_1, ..., i_level)` as a path of length `level`.
    pub fn prefix(&self, level: u32) -> Path {
        Path { index: self.index >> (self.m - level), m: level }
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in 1..=self.m {
            write!(f, "{}", self.bit(l))?;
        }
        Ok(())
    }
}

impl FromStr for Path {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::InvalidParameter(format!("invalid path character {other:?}"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Path::from_bits(&bits)
    }
}

/// Hamming weight `w(xi)` of a path.
pub fn path_weight(path: &Path) -> u32 {
    path.weight()
}

/// Integer index `I(xi)` with `i_1` as the most significant bit.
pub fn path_index(path: &Path) -> usize {
    path.index
}

/// Inverse of [`path_index`].
pub fn index_path(index: usize, m: u32) -> Result<Path> {
    Path::new(index, m)
}

/// Dimension `k(r, m) = sum_{i <= r} C(m, i)` of the Reed-Muller code `RM(r, m)`.
pub fn rm_dimension(r: u32, m: u32) -> Result<usize> {
    if r > m {
        return Err(Error::InvalidParameter(format!("order r = {r} exceeds m = {m}")));
    }
    check_levels(m)?;
    let mut binom = 1usize;
    let mut total = 1usize;
    for i in 1..=r as usize {
        binom = binom * (m as usize + 1 - i) / i;
        total += binom;
    }
    Ok(total)
}

/// Binary codeword of length `n = 2^m` in position order `p(x)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Codeword {
    bits: Vec<u8>,
}

impl Codeword {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if !bits.len().is_power_of_two() {
            return Err(Error::InvalidInput(format!("codeword length {} is not a power of two", bits.len())));
        }
        if let Some(b) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::InvalidInput(format!("codeword bit {b} is not binary")));
        }
        Ok(Self { bits })
    }

    pub(crate) fn from_bits_unchecked(bits: Vec<u8>) -> Self {
        Self { bits }
    }

    pub fn zeros(n: usize) -> Self {
        Self { bits: vec![0; n] }
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn into_bits(self) -> Vec<u8> {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|&&b| b == 1).count()
    }

    /// The `+1/-1` view under `x -> (-1)^x`.
    pub fn symbols(&self) -> Vec<i8> {
        self.bits.iter().map(|&b| 1 - 2 * b as i8).collect()
    }

    pub fn from_symbols(symbols: &[i8]) -> Result<Self> {
        let bits = symbols
            .iter()
            .map(|&s| match s {
                1 => Ok(0),
                -1 => Ok(1),
                other => Err(Error::InvalidInput(format!("symbol {other} is not +1/-1"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Codeword::new(bits)
    }

    pub fn xor(&self, other: &Codeword) -> Codeword {
        assert_eq!(self.len(), other.len());
        Codeword { bits: self.bits.iter().zip(&other.bits).map(|(a, b)| a ^ b).collect() }
    }
}

impl fmt::Display for Codeword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bits {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl FromStr for Codeword {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::InvalidInput(format!("invalid codeword character {other:?}"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Codeword::new(bits)
    }
}

/// Evaluates `x^xi` at all `2^m` points; position `p` is one iff every
/// variable selected by `xi` is one at `p`.
pub fn monomial_codeword(path: &Path) -> Codeword {
    let n = 1usize << path.m;
    let mask = path.index;
    Codeword { bits: (0..n).map(|p| (p & mask == mask) as u8).collect() }
}

/// The code `C(m, T)`: length `2^m` with information paths `T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeSpec {
    m: u32,
    /// Processing order: decreasing path index.
    info: Vec<Path>,
    is_info: Vec<bool>,
    rm_order: Option<u32>,
}

impl CodeSpec {
    /// Builds a code from information path indices in any order.
    pub fn new(m: u32, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        check_levels(m)?;
        let n = 1usize << m;
        let mut is_info = vec![false; n];
        for i in indices {
            if i >= n {
                return Err(Error::InvalidParameter(format!("information path index {i} out of range for n = {n}")));
            }
            if is_info[i] {
                return Err(Error::InvalidParameter(format!("duplicate information path index {i}")));
            }
            is_info[i] = true;
        }
        let info = (0..n).rev().filter(|&i| is_info[i]).map(|i| Path { index: i, m }).collect();
        Ok(Self { m, info, is_info, rm_order: None })
    }

    pub(crate) fn with_rm_order(mut self, r: u32) -> Self {
        self.rm_order = Some(r);
        self
    }

    pub fn levels(&self) -> u32 {
        self.m
    }

    pub fn length(&self) -> usize {
        1 << self.m
    }

    pub fn dimension(&self) -> usize {
        self.info.len()
    }

    pub fn rate(&self) -> f64 {
        self.dimension() as f64 / self.length() as f64
    }

    pub fn rm_order(&self) -> Option<u32> {
        self.rm_order
    }

    /// Information paths in processing order (decreasing index).
    pub fn info_paths(&self) -> &[Path] {
        &self.info
    }

    pub fn is_info(&self, index: usize) -> bool {
        self.is_info[index]
    }

    /// Information path indices sorted ascending.
    pub fn info_indices_ascending(&self) -> Vec<usize> {
        self.info.iter().rev().map(|p| p.index).collect()
    }

    /// The full code `RM(m, m)` of the same length.
    pub fn full(m: u32) -> Result<Self> {
        Ok(Self::new(m, 0..1usize << m)?.with_rm_order(m))
    }
}
