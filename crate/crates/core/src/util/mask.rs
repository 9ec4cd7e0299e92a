//! Bit sets over the index range of an ordered finite carrier.

use std::cmp::Ordering;
use std::fmt;

/// A subset of `0..len`, packed into 64-bit words.
///
/// All binary operations require both operands to have the same `len`;
/// this is an internal invariant of every caller in the crate.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mask {
    len: usize,
    words: Vec<u64>,
}

fn word_count(len: usize) -> usize {
    len.div_ceil(64)
}

impl Mask {
    pub fn empty(len: usize) -> Mask {
        Mask {
            len,
            words: vec![0; word_count(len)],
        }
    }

    pub fn full(len: usize) -> Mask {
        let mut m = Mask::empty(len);
        for i in 0..len {
            m.insert(i);
        }
        m
    }

    pub fn singleton(len: usize, i: usize) -> Mask {
        let mut m = Mask::empty(len);
        m.insert(i);
        m
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(len: usize, indices: I) -> Mask {
        let mut m = Mask::empty(len);
        for i in indices {
            m.insert(i);
        }
        m
    }

    /// Interprets the low `len` bits of `bits` as a mask. Only valid for `len <= 64`.
    pub fn from_bits(len: usize, bits: u64) -> Mask {
        assert!(len <= 64, "from_bits only supports carriers up to 64");
        let mut m = Mask::empty(len);
        if len > 0 {
            m.words[0] = if len == 64 { bits } else { bits & ((1u64 << len) - 1) };
        }
        m
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < self.len, "mask index out of range");
        self.words[i / 64] |= 1u64 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        assert!(i < self.len, "mask index out of range");
        self.words[i / 64] &= !(1u64 << (i % 64));
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.len && self.words[i / 64] & (1u64 << (i % 64)) != 0
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn union(&self, other: &Mask) -> Mask {
        self.zip(other, |a, b| a | b)
    }

    pub fn intersect(&self, other: &Mask) -> Mask {
        self.zip(other, |a, b| a & b)
    }

    pub fn minus(&self, other: &Mask) -> Mask {
        self.zip(other, |a, b| a & !b)
    }

    pub fn complement(&self) -> Mask {
        let mut out = self.clone();
        for w in out.words.iter_mut() {
            *w = !*w;
        }
        out.trim();
        out
    }

    pub fn is_subset(&self, other: &Mask) -> bool {
        assert_eq!(self.len, other.len, "mask length mismatch");
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &Mask) -> bool {
        assert_eq!(self.len, other.len, "mask length mismatch");
        self.words
            .iter()
            .zip(other.words.iter())
            .any(|(a, b)| a & b != 0)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.contains(i))
    }

    fn zip(&self, other: &Mask, f: impl Fn(u64, u64) -> u64) -> Mask {
        assert_eq!(self.len, other.len, "mask length mismatch");
        Mask {
            len: self.len,
            words: self
                .words
                .iter()
                .zip(other.words.iter())
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    fn trim(&mut self) {
        let spare = self.words.len() * 64 - self.len;
        if spare > 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= u64::MAX >> spare;
            }
        }
    }
}

// Numeric order (highest word first) so sorted families of subsets
// come out in a stable, small-sets-first order.
impl Ord for Mask {
    fn cmp(&self, other: &Self) -> Ordering {
        assert_eq!(self.len, other.len, "mask length mismatch");
        for (a, b) in self.words.iter().rev().zip(other.words.iter().rev()) {
            match a.cmp(b) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Mask {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Mask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mask{{")?;
        let mut first = true;
        for i in self.ones() {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
            first = false;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basics() {
        let mut m = Mask::empty(70);
        assert!(m.is_empty());
        m.insert(0);
        m.insert(65);
        assert!(m.contains(65));
        assert!(!m.contains(64));
        assert_eq!(m.count(), 2);
        assert_eq!(m.ones().collect::<Vec<_>>(), vec![0, 65]);
    }

    #[test]
    fn complement_respects_length() {
        let m = Mask::from_indices(3, [1]);
        let c = m.complement();
        assert_eq!(c.ones().collect::<Vec<_>>(), vec![0, 2]);
        assert_eq!(c.union(&m), Mask::full(3));
    }

    #[test]
    fn subset_and_order() {
        let a = Mask::from_indices(5, [0, 2]);
        let b = Mask::from_indices(5, [0, 2, 4]);
        assert!(a.is_subset(&b));
        assert!(!b.is_subset(&a));
        assert!(a < b);
    }
}
