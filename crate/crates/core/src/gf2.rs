//! Bit-packed GF(2) vectors and an incremental elimination basis.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec { len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    /// Lowercase hex, most significant nibble first, bit 0 in the last nibble.
    pub fn to_hex(&self) -> String {
        if self.len == 0 {
            return "0".to_string();
        }
        let nibbles = self.len.div_ceil(4);
        (0..nibbles)
            .rev()
            .map(|k| {
                let mut v = 0u32;
                for b in 0..4 {
                    let i = 4 * k + b;
                    if i < self.len && self.get(i) {
                        v |= 1 << b;
                    }
                }
                std::char::from_digit(v, 16).unwrap()
            })
            .collect()
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len).map(|i| if self.get(i) { '1' } else { '0' }).collect();
        write!(f, "BitVec({s})")
    }
}

impl FromIterator<bool> for BitVec {
    fn from_iter<T: IntoIterator<Item = bool>>(iter: T) -> Self {
        let bits: Vec<bool> = iter.into_iter().collect();
        let mut v = BitVec::zeros(bits.len());
        for (i, b) in bits.into_iter().enumerate() {
            v.set(i, b);
        }
        v
    }
}

#[derive(Clone, Debug)]
struct Row {
    pivot: usize,
    value: BitVec,
    // which inserted vectors (by insertion slot) sum to `value`
    combo: BitVec,
}

/// Outcome of inserting into a [`Gf2Basis`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Insert {
    /// Independent; stored under this slot.
    Added(usize),
    /// Dependent: the vector equals the sum of these slots.
    Dependent(Vec<usize>),
}

/// Row-echelon basis built one vector at a time, remembering how each
/// reduced row decomposes into the originally inserted vectors.
#[derive(Clone, Debug)]
pub struct Gf2Basis {
    dim: usize,
    capacity: usize,
    rows: Vec<Row>,
    slots: usize,
}

impl Gf2Basis {
    /// `capacity` bounds the number of vectors that may be added.
    pub fn new(dim: usize, capacity: usize) -> Self {
        Gf2Basis { dim, capacity, rows: Vec::new(), slots: 0 }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &BitVec) -> (BitVec, BitVec) {
        let mut value = v.clone();
        let mut combo = BitVec::zeros(self.capacity);
        for row in &self.rows {
            if value.get(row.pivot) {
                value.xor_assign(&row.value);
                combo.xor_assign(&row.combo);
            }
        }
        (value, combo)
    }

    pub fn insert(&mut self, v: &BitVec) -> Insert {
        assert_eq!(v.len(), self.dim);
        let (value, mut combo) = self.reduce(v);
        match value.first_one() {
            None => Insert::Dependent(combo.ones().collect()),
            Some(pivot) => {
                assert!(self.slots < self.capacity, "Gf2Basis capacity exceeded");
                let slot = self.slots;
                self.slots += 1;
                combo.flip(slot);
                // keep rows fully reduced on earlier pivots
                for row in &mut self.rows {
                    if row.value.get(pivot) {
                        row.value.xor_assign(&value);
                        row.combo.xor_assign(&combo);
                    }
                }
                self.rows.push(Row { pivot, value, combo });
                Insert::Added(slot)
            }
        }
    }

    /// Slots whose sum equals `v`, or `None` if `v` is outside the span.
    pub fn solve(&self, v: &BitVec) -> Option<Vec<usize>> {
        let (value, combo) = self.reduce(v);
        value.is_zero().then(|| combo.ones().collect())
    }
}

pub fn rank(vectors: &[BitVec]) -> usize {
    let Some(first) = vectors.first() else { return 0 };
    let mut basis = Gf2Basis::new(first.len(), vectors.len());
    for v in vectors {
        basis.insert(v);
    }
    basis.rank()
}
