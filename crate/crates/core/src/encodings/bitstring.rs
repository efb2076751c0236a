use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::EncodingError;

/// A measurement outcome over `len` qubits.
///
/// Qubit 0 is the least-significant bit of `index`. The textual form prints
/// qubit `len - 1` first, so the string reads as `index` in binary and
/// lexicographic order on strings of equal length equals numeric order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bitstring {
    len: usize,
    index: usize,
}

impl Bitstring {
    pub fn new(index: usize, len: usize) -> Self {
        debug_assert!(len >= usize::BITS as usize || index < (1usize << len));
        Self { len, index }
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Value of the measured bit on `qubit`.
    pub fn bit(&self, qubit: usize) -> bool {
        (self.index >> qubit) & 1 == 1
    }

    /// Spin of each qubit: bit 0 is `+1`, bit 1 is `-1`.
    pub fn spins(&self) -> Vec<i8> {
        (0..self.len).map(|q| if self.bit(q) { -1 } else { 1 }).collect()
    }

    /// Binary assignment `x_j = (ω_j + 1) / 2`.
    pub fn assignment(&self) -> Vec<bool> {
        (0..self.len).map(|q| !self.bit(q)).collect()
    }

    pub fn from_spins(spins: &[i8]) -> Self {
        let index = spins
            .iter()
            .enumerate()
            .filter(|(_, &s)| s < 0)
            .fold(0usize, |acc, (q, _)| acc | (1 << q));
        Self::new(index, spins.len())
    }

    pub fn from_assignment(x: &[bool]) -> Self {
        let index = x
            .iter()
            .enumerate()
            .filter(|(_, &b)| !b)
            .fold(0usize, |acc, (q, _)| acc | (1 << q));
        Self::new(index, x.len())
    }
}

impl fmt::Display for Bitstring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in (0..self.len).rev() {
            f.write_str(if self.bit(q) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Bitstring {
    type Err = EncodingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let len = s.len();
        let mut index = 0usize;
        for (pos, ch) in s.chars().enumerate() {
            let qubit = len - 1 - pos;
            match ch {
                '0' => {}
                '1' => index |= 1 << qubit,
                other => {
                    return Err(EncodingError::Invalid(format!(
                        "bitstring contains {other:?}"
                    )))
                }
            }
        }
        Ok(Self { len, index })
    }
}

impl Serialize for Bitstring {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Bitstring {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qubit_zero_is_rightmost() {
        let b = Bitstring::new(0b01, 2);
        assert_eq!(b.to_string(), "01");
        assert!(b.bit(0));
        assert_eq!(b.spins(), vec![-1, 1]);
        assert_eq!(b.assignment(), vec![false, true]);
    }

    #[test]
    fn parse_round_trip() {
        let b: Bitstring = "100".parse().unwrap();
        assert_eq!(b.index(), 4);
        assert_eq!(b.to_string(), "100");
        assert!("10x".parse::<Bitstring>().is_err());
    }

    #[test]
    fn spins_and_assignment_agree() {
        let b = Bitstring::from_assignment(&[true, true, false]);
        assert_eq!(b.spins(), vec![1, 1, -1]);
        assert_eq!(Bitstring::from_spins(&[1, 1, -1]), b);
        assert_eq!(b.to_string(), "100");
    }
}
