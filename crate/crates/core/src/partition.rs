//! Integer partitions and the classical majorization (dominance) order.
//!
//! A partition is a non-increasing sequence of nonnegative integers. Two
//! sequences that differ only by trailing zeros denote the same partition, so
//! [`GenericPartition`] always stores the canonical form without trailing
//! zeros and reads every index past its stored length as `0`.

use std::fmt;
use std::iter::Sum;
use std::marker::PhantomData;

use num_traits::{NumCast, PrimInt, Unsigned};
use serde::de::{self, SeqAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Unsigned integer type usable as a partition part.
pub trait Part:
    PrimInt + Unsigned + Sum + fmt::Debug + fmt::Display + std::hash::Hash + Send + Sync + 'static
{
    /// Largest value accepted from external input. Any sum of at most
    /// `parse_limit()` such parts fits in the type.
    fn parse_limit() -> Self;
}

macro_rules! impl_part {
    ($($t:ty),*) => {
        $(impl Part for $t {
            fn parse_limit() -> Self {
                <$t>::MAX >> (<$t>::BITS / 2)
            }
        })*
    };
}

impl_part!(u8, u16, u32, u64, u128, usize);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("part {index} ({value}) is larger than the preceding part ({previous})")]
    Increasing {
        index: usize,
        previous: String,
        value: String,
    },
    #[error("difference is not componentwise nonnegative at index {index}: {left} < {right}")]
    DominanceViolation {
        index: usize,
        left: String,
        right: String,
    },
}

/// A partition in canonical form (non-increasing, no trailing zeros).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GenericPartition<T: Part> {
    parts: Vec<T>,
}

impl<T: Part> GenericPartition<T> {
    pub fn empty() -> Self {
        Self { parts: Vec::new() }
    }

    /// Builds a partition from a non-increasing sequence; trailing zeros are dropped.
    pub fn new(parts: Vec<T>) -> Result<Self, PartitionError> {
        if let Some(index) = first_increase(&parts) {
            return Err(PartitionError::Increasing {
                index,
                previous: parts[index - 1].to_string(),
                value: parts[index].to_string(),
            });
        }
        Ok(Self::from_sorted_unchecked(parts))
    }

    /// Sorts arbitrary nonnegative values into a partition.
    pub fn from_unsorted<I: IntoIterator<Item = T>>(values: I) -> Self {
        let mut parts: Vec<T> = values.into_iter().filter(|v| !v.is_zero()).collect();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self { parts }
    }

    fn from_sorted_unchecked(mut parts: Vec<T>) -> Self {
        while parts.last().is_some_and(|p| p.is_zero()) {
            parts.pop();
        }
        Self { parts }
    }

    /// The nonzero parts, largest first.
    pub fn parts(&self) -> &[T] {
        &self.parts
    }

    pub fn into_parts(self) -> Vec<T> {
        self.parts
    }

    /// Part at zero-based `index`; zero past the end.
    pub fn get(&self, index: usize) -> T {
        self.parts.get(index).copied().unwrap_or_else(T::zero)
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Largest part, zero for the empty partition.
    pub fn largest(&self) -> T {
        self.get(0)
    }

    /// Parts zero-padded (or truncated) to exactly `len` entries.
    pub fn padded(&self, len: usize) -> Vec<T> {
        (0..len).map(|i| self.get(i)).collect()
    }

    /// Sum of all parts.
    pub fn weight(&self) -> T {
        self.parts.iter().copied().sum()
    }

    /// Conjugate partition: part `i` counts the parts of `self` that are `>= i`.
    pub fn dual(&self) -> Self {
        let Some(&largest) = self.parts.first() else {
            return Self::empty();
        };
        let columns = largest
            .to_usize()
            .expect("largest part does not fit in usize");
        let mut out = Vec::with_capacity(columns);
        // Walk the rows from the bottom: column c has as many cells as there
        // are rows of length > c.
        let mut rows = self.parts.len();
        for c in 0..columns {
            while rows > 0 && self.parts[rows - 1].to_usize().unwrap_or(usize::MAX) <= c {
                rows -= 1;
            }
            out.push(count_to_part(rows));
        }
        Self { parts: out }
    }

    /// Multiset union of the nonzero parts.
    pub fn union(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.len() && j < other.len() {
            if self.parts[i] >= other.parts[j] {
                out.push(self.parts[i]);
                i += 1;
            } else {
                out.push(other.parts[j]);
                j += 1;
            }
        }
        out.extend_from_slice(&self.parts[i..]);
        out.extend_from_slice(&other.parts[j..]);
        Self { parts: out }
    }

    /// Componentwise sum.
    pub fn plus(&self, other: &Self) -> Self {
        let len = self.len().max(other.len());
        Self {
            parts: (0..len).map(|i| self.get(i) + other.get(i)).collect(),
        }
    }

    /// Componentwise difference sorted into a partition. Requires
    /// `self_i >= other_i` at every index.
    pub fn diff_sorted(&self, other: &Self) -> Result<Self, PartitionError> {
        let len = self.len().max(other.len());
        let mut out = Vec::with_capacity(len);
        for i in 0..len {
            let (left, right) = (self.get(i), other.get(i));
            if left < right {
                return Err(PartitionError::DominanceViolation {
                    index: i,
                    left: left.to_string(),
                    right: right.to_string(),
                });
            }
            out.push(left - right);
        }
        Ok(Self::from_unsorted(out))
    }

    /// Every part multiplied by `factor`.
    pub fn scaled(&self, factor: T) -> Self {
        Self::from_sorted_unchecked(self.parts.iter().map(|&p| p * factor).collect())
    }

    /// `true` iff `self_i >= other_i` for every index.
    pub fn contains(&self, other: &Self) -> bool {
        other.len() <= self.len() && other.parts.iter().zip(&self.parts).all(|(o, s)| s >= o)
    }

    /// `self ≺ other`: equal weights and every prefix sum of `self` bounded by
    /// the corresponding prefix sum of `other`.
    pub fn is_majorized_by(&self, other: &Self) -> bool {
        dominated_sorted(&self.parts, &other.parts)
    }

    /// Union of a family of partitions.
    pub fn union_all<'a, I>(items: I) -> Self
    where
        I: IntoIterator<Item = &'a Self>,
    {
        Self::from_unsorted(items.into_iter().flat_map(|p| p.parts.iter().copied()))
    }

    /// Componentwise sum of a family of partitions.
    pub fn sum_all<'a, I>(items: I) -> Self
    where
        I: IntoIterator<Item = &'a Self>,
    {
        items.into_iter().fold(Self::empty(), |acc, p| acc.plus(p))
    }
}

fn count_to_part<T: Part>(count: usize) -> T {
    <T as NumCast>::from(count).expect("part count does not fit in the part type")
}

fn first_increase<T: PartialOrd>(parts: &[T]) -> Option<usize> {
    (1..parts.len()).find(|&i| parts[i] > parts[i - 1])
}

fn dominated_sorted<T: Part>(a: &[T], b: &[T]) -> bool {
    let len = a.len().max(b.len());
    let (mut sa, mut sb) = (T::zero(), T::zero());
    for i in 0..len {
        sa = sa + a.get(i).copied().unwrap_or_else(T::zero);
        sb = sb + b.get(i).copied().unwrap_or_else(T::zero);
        if sa > sb {
            return false;
        }
    }
    sa == sb
}

/// Majorization of two arbitrary (not necessarily sorted) sequences of equal
/// role: both are sorted non-increasingly and zero-padded before comparing.
pub fn majorized<T: Part>(a: &[T], b: &[T]) -> bool {
    let a = GenericPartition::from_unsorted(a.iter().copied());
    let b = GenericPartition::from_unsorted(b.iter().copied());
    a.is_majorized_by(&b)
}

impl<T: Part> fmt::Debug for GenericPartition<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<T: Part> fmt::Display for GenericPartition<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str(")")
    }
}

impl<T: Part> TryFrom<Vec<T>> for GenericPartition<T> {
    type Error = PartitionError;

    fn try_from(parts: Vec<T>) -> Result<Self, Self::Error> {
        Self::new(parts)
    }
}

impl<T: Part> Serialize for GenericPartition<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = serializer.serialize_seq(Some(self.parts.len()))?;
        for p in &self.parts {
            let wide = p.to_u128().expect("part does not fit in u128");
            seq.serialize_element(&wide)?;
        }
        seq.end()
    }
}

impl<'de, T: Part> Deserialize<'de> for GenericPartition<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let parts = deserializer.deserialize_seq(PartsVisitor(PhantomData))?;
        Ok(GenericPartition::from_sorted_unchecked(parts))
    }
}

/// Reads a JSON array of parts, rejecting negatives, oversize values and
/// increasing neighbours with the offending index.
pub(crate) struct PartsVisitor<T>(pub(crate) PhantomData<T>);

impl<'de, T: Part> Visitor<'de> for PartsVisitor<T> {
    type Value = Vec<T>;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("a non-increasing array of nonnegative integers")
    }

    fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Self::Value, A::Error> {
        let limit = T::parse_limit().to_i128().unwrap_or(i128::MAX);
        let mut out: Vec<T> = Vec::with_capacity(seq.size_hint().unwrap_or(0));
        while let Some(raw) = seq.next_element::<i128>()? {
            let index = out.len();
            if raw < 0 {
                return Err(de::Error::custom(format!(
                    "part {index} is negative ({raw})"
                )));
            }
            if raw > limit {
                return Err(de::Error::custom(format!(
                    "part {index} ({raw}) exceeds the supported maximum {limit}"
                )));
            }
            let value = <T as NumCast>::from(raw).expect("bounded by parse limit");
            if let Some(&previous) = out.last() {
                if value > previous {
                    return Err(de::Error::custom(format!(
                        "part {index} ({value}) is larger than the preceding part ({previous})"
                    )));
                }
            }
            out.push(value);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type P = GenericPartition<u64>;

    fn p(parts: &[u64]) -> P {
        P::new(parts.to_vec()).unwrap()
    }

    // Definition-level oracle: count parts >= i.
    fn dual_by_counting(a: &P) -> P {
        let parts = (1..=a.largest())
            .map(|i| a.parts().iter().filter(|&&x| x >= i).count() as u64)
            .collect();
        P::new(parts).unwrap()
    }

    #[test]
    fn canonical_form_drops_trailing_zeros() {
        assert_eq!(p(&[3, 1, 0, 0]), p(&[3, 1]));
        assert_eq!(p(&[0, 0]), P::empty());
        assert_eq!(p(&[2, 1]).get(7), 0);
    }

    #[test]
    fn rejects_increasing() {
        let err = P::new(vec![2, 3]).unwrap_err();
        assert!(matches!(err, PartitionError::Increasing { index: 1, .. }));
    }

    #[test]
    fn dual_examples() {
        assert_eq!(P::empty().dual(), P::empty());
        assert_eq!(p(&[2, 2]).dual(), p(&[2, 2]));
        assert_eq!(p(&[3, 1]).dual(), dual_by_counting(&p(&[3, 1])));
        assert_eq!(p(&[3, 1]).dual(), p(&[2, 1, 1]));
        for a in [p(&[5, 3, 3, 1]), p(&[1, 1, 1, 1]), p(&[7])] {
            assert_eq!(a.dual(), dual_by_counting(&a));
        }
    }

    #[test]
    fn weight_examples() {
        assert_eq!(P::empty().weight(), 0);
        assert_eq!(p(&[3, 1]).weight(), 4);
        assert_eq!(p(&[5, 5, 5]).weight(), 15);
    }

    #[test]
    fn union_examples() {
        assert_eq!(p(&[2, 1]).union(&P::empty()), p(&[2, 1]));
        assert_eq!(p(&[3, 1]).union(&p(&[2, 2])), p(&[3, 2, 2, 1]));
        assert_eq!(p(&[1]).union(&p(&[1])), p(&[1, 1]));
    }

    #[test]
    fn plus_examples() {
        assert_eq!(p(&[2, 1]).plus(&P::empty()), p(&[2, 1]));
        assert_eq!(p(&[2, 1]).plus(&p(&[1, 1])), p(&[3, 2]));
        let (a, b) = (p(&[3, 1]), p(&[2, 2]));
        assert_eq!(a.union(&b).dual(), p(&[4, 3, 1]));
        assert_eq!(a.dual().plus(&b.dual()), p(&[4, 3, 1]));
    }

    #[test]
    fn diff_sorted_examples() {
        assert_eq!(p(&[2, 1]).diff_sorted(&p(&[2, 1])).unwrap(), P::empty());
        assert_eq!(p(&[3, 2]).diff_sorted(&p(&[1, 1])).unwrap(), p(&[2, 1]));
        assert_eq!(p(&[3, 2]).diff_sorted(&p(&[2, 2])).unwrap(), p(&[1]));
        assert_eq!(p(&[2, 2]).diff_sorted(&p(&[1])).unwrap(), p(&[2, 1]));
        let err = p(&[2]).diff_sorted(&p(&[1, 1])).unwrap_err();
        assert!(matches!(
            err,
            PartitionError::DominanceViolation { index: 1, .. }
        ));
    }

    #[test]
    fn majorization_examples() {
        assert!(p(&[1, 1]).is_majorized_by(&p(&[2, 0])));
        assert!(!p(&[2, 0]).is_majorized_by(&p(&[1, 1])));
        assert!(p(&[1, 1, 1]).is_majorized_by(&p(&[1, 1, 1])));
        // unequal totals are simply false
        assert!(!p(&[1]).is_majorized_by(&p(&[2])));
        assert!(majorized(&[0u64, 1, 1], &[2, 0, 0]));
    }

    #[test]
    fn scaled_and_contains() {
        assert_eq!(p(&[1, 1]).scaled(2), p(&[2, 2]));
        assert_eq!(p(&[3]).scaled(0), P::empty());
        assert!(p(&[3, 2]).contains(&p(&[3, 1])));
        assert!(!p(&[3]).contains(&p(&[1, 1])));
    }

    #[test]
    fn generic_over_part_width() {
        let a = GenericPartition::<u8>::new(vec![4, 2, 1]).unwrap();
        assert_eq!(a.dual().parts(), &[3, 2, 1, 1]);
        let b = GenericPartition::<u128>::new(vec![2, 2]).unwrap();
        assert!(b.is_majorized_by(&GenericPartition::new(vec![4]).unwrap()));
    }

    #[test]
    fn json_parse_diagnostics() {
        let ok: P = serde_json::from_str("[3, 1, 0]").unwrap();
        assert_eq!(ok, p(&[3, 1]));
        let err = serde_json::from_str::<P>("[3, -1]")
            .unwrap_err()
            .to_string();
        assert!(err.contains("part 1 is negative"), "{err}");
        let err = serde_json::from_str::<P>("[1, 2]").unwrap_err().to_string();
        assert!(err.contains("part 1 (2) is larger"), "{err}");
        assert!(err.contains("column"), "{err}");
        let err = serde_json::from_str::<P>("[99999999999]")
            .unwrap_err()
            .to_string();
        assert!(err.contains("exceeds"), "{err}");
        let err = serde_json::from_str::<GenericPartition<u8>>("[16]")
            .unwrap_err()
            .to_string();
        assert!(err.contains("exceeds"), "{err}");
    }
}
