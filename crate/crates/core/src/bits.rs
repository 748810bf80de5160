//! Bit-packed configurations: edge subsets, vertex subsets and spin signs.

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

macro_rules! bitset_newtype_common {
    ($name:ident) => {
        impl $name {
            pub fn empty(len: usize) -> Self {
                Self {
                    bits: FixedBitSet::with_capacity(len),
                }
            }

            pub fn full(len: usize) -> Self {
                let mut bits = FixedBitSet::with_capacity(len);
                bits.insert_range(..);
                Self { bits }
            }

            pub fn from_indices<I: IntoIterator<Item = usize>>(len: usize, indices: I) -> Self {
                let mut c = Self::empty(len);
                for i in indices {
                    c.bits.insert(i);
                }
                c
            }

            /// Builds from the low `len` bits of `mask` (bit `i` = index `i`).
            pub fn from_mask(len: usize, mask: u64) -> Self {
                assert!(len <= 64, "mask form only covers up to 64 indices");
                let mut c = Self::empty(len);
                let mut m = mask;
                while m != 0 {
                    let i = m.trailing_zeros() as usize;
                    assert!(i < len, "mask has bits beyond length {len}");
                    c.bits.insert(i);
                    m &= m - 1;
                }
                c
            }

            pub fn to_mask(&self) -> u64 {
                assert!(self.len() <= 64, "mask form only covers up to 64 indices");
                self.bits.ones().fold(0u64, |m, i| m | (1u64 << i))
            }

            pub fn len(&self) -> usize {
                self.bits.len()
            }

            pub fn is_empty(&self) -> bool {
                self.bits.is_clear()
            }

            pub fn contains(&self, i: usize) -> bool {
                self.bits.contains(i)
            }

            pub fn set(&mut self, i: usize, on: bool) {
                self.bits.set(i, on);
            }

            pub fn toggle(&mut self, i: usize) {
                self.bits.toggle(i);
            }

            pub fn count(&self) -> usize {
                self.bits.count_ones(..)
            }

            pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
                self.bits.ones()
            }

            pub fn xor(&self, other: &Self) -> Self {
                assert_eq!(self.len(), other.len(), "length mismatch");
                let mut bits = self.bits.clone();
                bits.symmetric_difference_with(&other.bits);
                Self { bits }
            }

            pub fn xor_assign(&mut self, other: &Self) {
                assert_eq!(self.len(), other.len(), "length mismatch");
                self.bits.symmetric_difference_with(&other.bits);
            }

            pub fn union(&self, other: &Self) -> Self {
                assert_eq!(self.len(), other.len(), "length mismatch");
                let mut bits = self.bits.clone();
                bits.union_with(&other.bits);
                Self { bits }
            }

            pub fn intersection(&self, other: &Self) -> Self {
                assert_eq!(self.len(), other.len(), "length mismatch");
                let mut bits = self.bits.clone();
                bits.intersect_with(&other.bits);
                Self { bits }
            }

            pub fn difference(&self, other: &Self) -> Self {
                assert_eq!(self.len(), other.len(), "length mismatch");
                let mut bits = self.bits.clone();
                bits.difference_with(&other.bits);
                Self { bits }
            }

            pub fn is_subset(&self, other: &Self) -> bool {
                self.bits.is_subset(&other.bits)
            }

            pub fn is_disjoint(&self, other: &Self) -> bool {
                self.bits.is_disjoint(&other.bits)
            }

            /// Lower-case hex of the bit vector: byte `k` holds indices
            /// `8k..8k+8`, least significant bit first.
            pub fn to_hex(&self) -> String {
                let mut bytes = vec![0u8; self.len().div_ceil(8)];
                for i in self.bits.ones() {
                    bytes[i / 8] |= 1 << (i % 8);
                }
                bytes.iter().map(|b| format!("{b:02x}")).collect()
            }

            pub fn from_hex(len: usize, hex: &str) -> Result<Self> {
                let nbytes = len.div_ceil(8);
                if hex.len() != 2 * nbytes {
                    return Err(Error::InvalidArgument(format!(
                        "hex string of length {} cannot encode {len} bits",
                        hex.len()
                    )));
                }
                let mut c = Self::empty(len);
                for k in 0..nbytes {
                    let byte = u8::from_str_radix(&hex[2 * k..2 * k + 2], 16)
                        .map_err(|e| Error::InvalidArgument(format!("bad hex: {e}")))?;
                    for j in 0..8 {
                        if byte & (1 << j) != 0 {
                            let i = 8 * k + j;
                            if i >= len {
                                return Err(Error::InvalidArgument(format!(
                                    "hex sets bit {i} beyond length {len}"
                                )));
                            }
                            c.bits.insert(i);
                        }
                    }
                }
                Ok(c)
            }
        }
    };
}

/// A subset of edges (1 = open): a percolation configuration or an even subgraph.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct EdgeConfig {
    bits: FixedBitSet,
}
bitset_newtype_common!(EdgeConfig);

impl EdgeConfig {
    /// Number of open edges.
    pub fn open_count(&self) -> usize {
        self.count()
    }

    pub fn is_open(&self, e: usize) -> bool {
        self.contains(e)
    }
}

/// A set of vertices, typically the odd-degree vertices (sources) of a configuration.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct SourceSet {
    bits: FixedBitSet,
}
bitset_newtype_common!(SourceSet);

/// Ising spins, one bit per vertex: set bit = spin −1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct SpinConfig {
    bits: FixedBitSet,
}
bitset_newtype_common!(SpinConfig);

impl SpinConfig {
    pub fn all_plus(len: usize) -> Self {
        Self::empty(len)
    }

    /// +1 or −1.
    pub fn spin(&self, v: usize) -> i8 {
        if self.contains(v) {
            -1
        } else {
            1
        }
    }

    pub fn set_spin(&mut self, v: usize, spin: i8) {
        self.set(v, spin < 0);
    }
}
