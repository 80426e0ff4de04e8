use std::fmt;

const WORD_BITS: usize = u64::BITS as usize;

/// Fixed-length bit array; bit `j` stands for the sequence with sid `j + 1`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector {
            len,
            words: vec![0; len.div_ceil(WORD_BITS)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut bv = BitVector::zeros(len);
        for j in 0..len {
            bv.set(j);
        }
        bv
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn set(&mut self, j: usize) {
        assert!(j < self.len, "bit {j} out of range for length {}", self.len);
        self.words[j / WORD_BITS] |= 1 << (j % WORD_BITS);
    }

    #[inline]
    pub fn get(&self, j: usize) -> bool {
        j < self.len && self.words[j / WORD_BITS] & (1 << (j % WORD_BITS)) != 0
    }

    /// Number of set bits.
    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn none(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn and(&self, other: &BitVector) -> BitVector {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn or(&self, other: &BitVector) -> BitVector {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn and_count(&self, other: &BitVector) -> usize {
        self.check_len(other);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn or_count(&self, other: &BitVector) -> usize {
        self.check_len(other);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum()
    }

    pub fn intersect_with(&mut self, other: &BitVector) {
        self.check_len(other);
        self.words.iter_mut().zip(&other.words).for_each(|(a, b)| *a &= b);
    }

    pub fn union_with(&mut self, other: &BitVector) {
        self.check_len(other);
        self.words.iter_mut().zip(&other.words).for_each(|(a, b)| *a |= b);
    }

    /// Indices of set bits, ascending.
    pub fn ones_iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                (w != 0).then(|| {
                    let bit = w.trailing_zeros() as usize;
                    w &= w - 1;
                    k * WORD_BITS + bit
                })
            })
        })
    }

    fn zip_with(&self, other: &BitVector, f: impl Fn(u64, u64) -> u64) -> BitVector {
        self.check_len(other);
        BitVector {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    fn check_len(&self, other: &BitVector) {
        assert_eq!(self.len, other.len, "bit vectors of different databases");
    }
}

impl fmt::Display for BitVector {
    /// Bit 0 first, e.g. `01001`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in 0..self.len {
            f.write_str(if self.get(j) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn basic_ops() {
        let mut a = BitVector::zeros(70);
        a.set(0);
        a.set(65);
        let mut b = BitVector::zeros(70);
        b.set(65);
        b.set(3);
        assert_eq!(a.count(), 2);
        assert_eq!(a.and(&b).ones_iter().collect::<Vec<_>>(), vec![65]);
        assert_eq!(a.or(&b).ones_iter().collect::<Vec<_>>(), vec![0, 3, 65]);
        assert_eq!(a.and_count(&b), 1);
        assert_eq!(a.or_count(&b), 3);
        assert!(!a.get(69));
        assert!(!a.get(1000));
        assert!(BitVector::zeros(5).none());
        assert_eq!(BitVector::ones(5).to_string(), "11111");
    }

    proptest! {
        #[test]
        fn counts_match_sets(xs in proptest::collection::btree_set(0usize..150, 0..60),
                             ys in proptest::collection::btree_set(0usize..150, 0..60)) {
            let mut a = BitVector::zeros(150);
            let mut b = BitVector::zeros(150);
            xs.iter().for_each(|&j| a.set(j));
            ys.iter().for_each(|&j| b.set(j));
            prop_assert_eq!(a.and_count(&b), xs.intersection(&ys).count());
            prop_assert_eq!(a.or_count(&b), xs.union(&ys).count());
            let mut c = a.clone();
            c.union_with(&b);
            prop_assert_eq!(c.ones_iter().collect::<Vec<_>>(), xs.union(&ys).copied().collect::<Vec<_>>());
        }
    }
}
