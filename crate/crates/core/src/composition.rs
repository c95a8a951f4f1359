//! Integer compositions: ordered sequences of positive block sizes.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A finite sequence of positive block sizes with cached prefix sums.
///
/// `prefix[i]` is the sum of the first `i` blocks, so `prefix[0] == 0` and
/// `prefix[len] == total`. The empty composition is written `-`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Composition {
    blocks: Vec<BigUint>,
    prefix: Vec<BigUint>,
}

impl Composition {
    pub fn empty() -> Self {
        Self {
            blocks: Vec::new(),
            prefix: vec![BigUint::zero()],
        }
    }

    /// Builds a composition, dropping zero blocks.
    pub fn new(blocks: impl IntoIterator<Item = BigUint>) -> Self {
        let blocks: Vec<BigUint> = blocks.into_iter().filter(|b| !b.is_zero()).collect();
        let mut prefix = Vec::with_capacity(blocks.len() + 1);
        let mut acc = BigUint::zero();
        prefix.push(acc.clone());
        for b in &blocks {
            acc += b;
            prefix.push(acc.clone());
        }
        Self { blocks, prefix }
    }

    pub fn from_u64s(blocks: &[u64]) -> Self {
        Self::new(blocks.iter().map(|&b| BigUint::from(b)))
    }

    pub fn blocks(&self) -> &[BigUint] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn total(&self) -> &BigUint {
        &self.prefix[self.blocks.len()]
    }

    /// Sum of the first `i` blocks.
    pub fn prefix(&self, i: usize) -> &BigUint {
        &self.prefix[i]
    }

    pub fn prefix_sums(&self) -> &[BigUint] {
        &self.prefix
    }

    pub fn last(&self) -> Option<&BigUint> {
        self.blocks.last()
    }

    pub fn reversed(&self) -> Self {
        Self::new(self.blocks.iter().rev().cloned())
    }

    pub fn concat(&self, other: &Composition) -> Self {
        Self::new(self.blocks.iter().chain(other.blocks.iter()).cloned())
    }

    /// Drops the final block.
    pub fn without_last(&self) -> Self {
        let k = self.blocks.len().saturating_sub(1);
        Self::new(self.blocks[..k].iter().cloned())
    }

    /// Adds `delta` to the last block. Panics on the empty composition.
    pub fn with_last_incremented(&self, delta: u32) -> Self {
        let mut blocks = self.blocks.clone();
        *blocks.last_mut().expect("non-empty composition") += delta;
        Self::new(blocks)
    }

    /// Block sizes as machine integers, if they all fit.
    pub fn to_usizes(&self) -> Option<Vec<usize>> {
        self.blocks.iter().map(|b| b.to_usize()).collect()
    }

    pub fn to_u64s(&self) -> Option<Vec<u64>> {
        self.blocks.iter().map(|b| b.to_u64()).collect()
    }
}

/// Removes zero entries, preserving order. Negative entries are rejected.
pub fn normalize(blocks: &[BigInt]) -> Result<Composition> {
    if let Some(neg) = blocks.iter().find(|b| b.is_negative()) {
        return Err(Error::InvalidComposition(format!("negative block {neg}")));
    }
    Ok(Composition::new(
        blocks.iter().map(|b| b.magnitude().clone()),
    ))
}

pub fn normalize_i64(blocks: &[i64]) -> Result<Composition> {
    let big: Vec<BigInt> = blocks.iter().map(|&b| BigInt::from(b)).collect();
    normalize(&big)
}

impl fmt::Debug for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.blocks.is_empty() {
            return f.write_str("-");
        }
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl Default for Composition {
    fn default() -> Self {
        Self::empty()
    }
}

impl FromStr for Composition {
    type Err = Error;

    /// Parses `2,0,3` (zeros are dropped) or `-` for the empty composition.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "-" || s.is_empty() {
            return Ok(Self::empty());
        }
        let blocks = s
            .split(',')
            .map(|part| {
                part.trim()
                    .parse::<BigInt>()
                    .map_err(|_| Error::InvalidComposition(format!("bad block {part:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        normalize(&blocks)
    }
}

impl From<&[u64]> for Composition {
    fn from(blocks: &[u64]) -> Self {
        Self::from_u64s(blocks)
    }
}

impl<const N: usize> From<[u64; N]> for Composition {
    fn from(blocks: [u64; N]) -> Self {
        Self::from_u64s(&blocks)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_drops_zeros() {
        let c = normalize_i64(&[2, 0, 3]).unwrap();
        assert_eq!(c.to_u64s().unwrap(), vec![2, 3]);
        assert_eq!(c.total(), &BigUint::from(5u32));
    }

    #[test]
    fn normalize_empty_inputs() {
        assert!(normalize_i64(&[]).unwrap().is_empty());
        let zeros = normalize_i64(&[0, 0]).unwrap();
        assert!(zeros.is_empty());
        assert!(zeros.total().is_zero());
    }

    #[test]
    fn normalize_rejects_negative() {
        assert!(matches!(
            normalize_i64(&[1, -2]),
            Err(Error::InvalidComposition(_))
        ));
    }

    #[test]
    fn prefix_sums_are_cached() {
        let c = Composition::from([2, 4, 3]);
        let p: Vec<u64> = c
            .prefix_sums()
            .iter()
            .map(|x| x.to_u64().unwrap())
            .collect();
        assert_eq!(p, vec![0, 2, 6, 9]);
    }

    #[test]
    fn parse_and_display() {
        let c: Composition = "15,185".parse().unwrap();
        assert_eq!(c.to_string(), "15,185");
        assert_eq!("-".parse::<Composition>().unwrap(), Composition::empty());
        assert_eq!(Composition::empty().to_string(), "-");
        assert!("1,x".parse::<Composition>().is_err());
    }

    #[test]
    fn reversed_and_concat() {
        let a = Composition::from([1, 2, 3]);
        assert_eq!(a.reversed(), Composition::from([3, 2, 1]));
        assert_eq!(
            a.reversed().concat(&Composition::from([4])),
            Composition::from([3, 2, 1, 4])
        );
    }
}
