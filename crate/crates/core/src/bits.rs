use std::cmp::Ordering;
use std::fmt;

/// Fixed-length bit vector used for subgroup membership.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Bits {
    len: usize,
    words: Vec<u64>,
}

impl Bits {
    pub fn new(len: usize) -> Bits {
        Bits {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_ids<I: IntoIterator<Item = u32>>(len: usize, ids: I) -> Bits {
        let mut bits = Bits::new(len);
        for id in ids {
            bits.insert(id);
        }
        bits
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn contains(&self, id: u32) -> bool {
        let i = id as usize;
        i < self.len && self.words[i >> 6] & (1u64 << (i & 63)) != 0
    }

    /// Sets the bit and reports whether it was previously clear.
    #[inline]
    pub fn insert(&mut self, id: u32) -> bool {
        let i = id as usize;
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        let mask = 1u64 << (i & 63);
        let word = &mut self.words[i >> 6];
        let fresh = *word & mask == 0;
        *word |= mask;
        fresh
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn and(&self, other: &Bits) -> Bits {
        debug_assert_eq!(self.len, other.len);
        Bits {
            len: self.len,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    /// Popcount of `self & other` without allocating.
    pub fn and_count(&self, other: &Bits) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn is_subset(&self, other: &Bits) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn ones(&self) -> impl Iterator<Item = u32> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let tz = w.trailing_zeros();
                w &= w - 1;
                Some((wi as u32) * 64 + tz)
            })
        })
    }
}

/// Lexicographic order on the bit-string `b0 b1 b2 ...` (with '0' < '1').
impl Ord for Bits {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.words.iter().zip(&other.words) {
            let diff = a ^ b;
            if diff != 0 {
                let lowest = diff & diff.wrapping_neg();
                return if a & lowest != 0 {
                    Ordering::Greater
                } else {
                    Ordering::Less
                };
            }
        }
        self.len.cmp(&other.len)
    }
}

impl PartialOrd for Bits {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.ones()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bit_string(b: &Bits) -> String {
        (0..b.len() as u32)
            .map(|i| if b.contains(i) { '1' } else { '0' })
            .collect()
    }

    #[test]
    fn insert_and_iterate() {
        let b = Bits::from_ids(130, [0, 5, 64, 129]);
        assert_eq!(b.ones().collect::<Vec<_>>(), vec![0, 5, 64, 129]);
        assert_eq!(b.count(), 4);
        assert!(b.contains(64));
        assert!(!b.contains(63));
    }

    proptest! {
        #[test]
        fn order_matches_string_order(
            xs in proptest::collection::btree_set(0u32..150, 0..40),
            ys in proptest::collection::btree_set(0u32..150, 0..40),
        ) {
            let a = Bits::from_ids(150, xs.iter().copied());
            let b = Bits::from_ids(150, ys.iter().copied());
            prop_assert_eq!(a.cmp(&b), bit_string(&a).cmp(&bit_string(&b)));
            prop_assert_eq!(a.and(&b).count(), a.and_count(&b));
            prop_assert_eq!(a.and(&b).is_subset(&a), true);
        }
    }
}
