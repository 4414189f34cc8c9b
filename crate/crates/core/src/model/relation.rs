use std::fmt;

/// Largest supported base; rows are single machine words.
pub const MAX_BASE: usize = 64;

/// A binary relation on `{0..n-1}` stored as `n` row bitmasks.
///
/// Bit `v` of row `u` is set iff `(u, v)` is in the relation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Relation {
    n: u8,
    rows: Vec<u64>,
}

impl Relation {
    pub fn empty(n: usize) -> Self {
        assert!((1..=MAX_BASE).contains(&n), "base size {n} out of range");
        Relation { n: n as u8, rows: vec![0; n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut r = Self::empty(n);
        for (i, row) in r.rows.iter_mut().enumerate() {
            *row = 1 << i;
        }
        r
    }

    pub fn full(n: usize) -> Self {
        let mut r = Self::empty(n);
        let mask = row_mask(n);
        r.rows.iter_mut().for_each(|row| *row = mask);
        r
    }

    pub fn from_pairs<I: IntoIterator<Item = (usize, usize)>>(n: usize, pairs: I) -> Self {
        let mut r = Self::empty(n);
        for (u, v) in pairs {
            r.insert(u, v);
        }
        r
    }

    /// Relation whose `n*n` membership bits are the low bits of `code`,
    /// row-major. Used to enumerate all relations on a small base.
    pub fn from_code(n: usize, code: u64) -> Self {
        let mut r = Self::empty(n);
        let mask = row_mask(n);
        for (u, row) in r.rows.iter_mut().enumerate() {
            *row = (code >> (u * n)) & mask;
        }
        r
    }

    pub fn base(&self) -> usize {
        self.n as usize
    }

    pub fn insert(&mut self, u: usize, v: usize) {
        assert!(u < self.base() && v < self.base(), "pair ({u},{v}) outside base");
        self.rows[u] |= 1 << v;
    }

    pub fn contains(&self, u: usize, v: usize) -> bool {
        u < self.base() && v < self.base() && self.rows[u] >> v & 1 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|&r| r == 0)
    }

    pub fn len(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum()
    }

    pub fn union(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a & b)
    }

    fn zip(&self, other: &Self, f: impl Fn(u64, u64) -> u64) -> Self {
        assert_eq!(self.n, other.n, "relations on different bases");
        Relation {
            n: self.n,
            rows: self.rows.iter().zip(&other.rows).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    /// Relational composition: row `u` of the result is the OR of the rows
    /// of `other` indexed by the bits of row `u` of `self`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "relations on different bases");
        let rows = self
            .rows
            .iter()
            .map(|&row| {
                let mut acc = 0u64;
                let mut bits = row;
                while bits != 0 {
                    let w = bits.trailing_zeros() as usize;
                    acc |= other.rows[w];
                    bits &= bits - 1;
                }
                acc
            })
            .collect();
        Relation { n: self.n, rows }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.rows.iter().zip(&other.rows).all(|(&a, &b)| a & !b == 0)
    }

    /// Every pair, in row-major order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows.iter().enumerate().flat_map(|(u, &row)| {
            (0..self.base()).filter(move |v| row >> v & 1 == 1).map(move |v| (u, v))
        })
    }

    /// First pair in row-major order that is in exactly one of the two.
    pub fn first_difference(&self, other: &Self) -> Option<(usize, usize)> {
        for (u, (&a, &b)) in self.rows.iter().zip(&other.rows).enumerate() {
            let d = a ^ b;
            if d != 0 {
                return Some((u, d.trailing_zeros() as usize));
            }
        }
        None
    }
}

fn row_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.pairs()).finish()
    }
}
