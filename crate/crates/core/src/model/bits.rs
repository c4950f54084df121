use std::fmt;
use std::str::FromStr;

use super::ModelError;

/// Largest code resolution the model will materialize. Every ground point is
/// enumerated, so the point set has at least `2^resolution` elements.
pub const MAX_RESOLUTION: usize = 20;

/// A finite binary string, stored most-significant-bit first.
///
/// `value` holds the bits as an integer whose binary expansion (padded to
/// `len` digits) is the string, so the prefix of length `k` of a string of
/// length `len` is `value >> (len - k)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    len: u8,
    value: u64,
}

impl BitString {
    pub const EMPTY: BitString = BitString { len: 0, value: 0 };

    /// Builds a string of `len` bits from the low `len` bits of `value`.
    pub fn new(value: u64, len: usize) -> Result<Self, ModelError> {
        if len > 63 {
            return Err(ModelError::StringTooLong {
                len,
                resolution: 63,
            });
        }
        if len < 64 && value >> len != 0 {
            return Err(ModelError::ValueOverflow { value, len });
        }
        Ok(BitString {
            len: len as u8,
            value,
        })
    }

    pub(crate) fn raw(value: u64, len: usize) -> Self {
        debug_assert!(len < 64 && value >> len == 0);
        BitString {
            len: len as u8,
            value,
        }
    }

    pub fn from_bits(bits: &[bool]) -> Result<Self, ModelError> {
        let mut value = 0u64;
        for &b in bits {
            value = (value << 1) | u64::from(b);
        }
        BitString::new(value, bits.len())
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    /// Bit at position `i`, counting from the start of the string.
    pub fn bit(&self, i: usize) -> bool {
        assert!(i < self.len(), "bit index {i} out of range for {self}");
        (self.value >> (self.len() - 1 - i)) & 1 == 1
    }

    pub fn push(&self, bit: bool) -> Self {
        BitString::raw((self.value << 1) | u64::from(bit), self.len() + 1)
    }

    /// The restriction `self|k`. Panics if `k` exceeds the length.
    pub fn prefix(&self, k: usize) -> Self {
        assert!(k <= self.len(), "prefix {k} longer than {self}");
        BitString::raw(self.value >> (self.len() - k), k)
    }

    /// `self ⊆ other` in the extension order.
    pub fn is_prefix_of(&self, other: &BitString) -> bool {
        self.len <= other.len && other.value >> (other.len - self.len) == self.value
    }

    pub fn is_comparable(&self, other: &BitString) -> bool {
        self.is_prefix_of(other) || other.is_prefix_of(self)
    }

    /// All extensions of `self` of length exactly `len`, in increasing order.
    pub fn extensions(&self, len: usize) -> impl Iterator<Item = BitString> {
        assert!(len >= self.len() && len < 64);
        let shift = len - self.len();
        let lo = self.value << shift;
        let hi = (self.value + 1) << shift;
        (lo..hi).map(move |v| BitString::raw(v, len))
    }

    /// All strings of length `len`, in increasing order.
    pub fn all_of_len(len: usize) -> impl Iterator<Item = BitString> {
        BitString::EMPTY.extensions(len)
    }

    /// Length of the longest common prefix.
    pub fn common_prefix_len(&self, other: &BitString) -> usize {
        let k = self.len().min(other.len());
        let a = self.prefix(k).value;
        let b = other.prefix(k).value;
        let diff = a ^ b;
        if diff == 0 {
            k
        } else {
            k - (64 - diff.leading_zeros() as usize)
        }
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            f.write_str(if self.bit(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨{self}⟩")
    }
}

impl FromStr for BitString {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(ModelError::BadBit(other)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        BitString::from_bits(&bits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(bs("0101").to_string(), "0101");
        assert_eq!(bs("").to_string(), "");
        assert_eq!(bs("0011").value(), 3);
        assert!("01a".parse::<BitString>().is_err());
    }

    #[test]
    fn prefix_relation() {
        assert!(bs("01").is_prefix_of(&bs("0110")));
        assert!(bs("").is_prefix_of(&bs("1")));
        assert!(!bs("00").is_prefix_of(&bs("0110")));
        assert!(!bs("0110").is_prefix_of(&bs("01")));
        assert_eq!(bs("0110").prefix(2), bs("01"));
        assert_eq!(bs("0110").prefix(0), BitString::EMPTY);
    }

    #[test]
    fn extensions_enumerate_in_order() {
        let ext: Vec<String> = bs("1").extensions(3).map(|s| s.to_string()).collect();
        assert_eq!(ext, ["100", "101", "110", "111"]);
        assert_eq!(BitString::all_of_len(0).count(), 1);
    }

    #[test]
    fn common_prefix() {
        assert_eq!(bs("0101").common_prefix_len(&bs("0110")), 2);
        assert_eq!(bs("0101").common_prefix_len(&bs("0101")), 4);
        assert_eq!(bs("1").common_prefix_len(&bs("0")), 0);
        assert_eq!(bs("01").common_prefix_len(&bs("0111")), 2);
    }

    #[test]
    fn value_overflow_rejected() {
        assert!(BitString::new(4, 2).is_err());
        assert!(BitString::new(3, 2).is_ok());
    }
}
