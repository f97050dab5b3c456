use std::cmp::Ordering;

const BITS: usize = 64;

/// A subset of a ground set, stored as a fixed-width bit vector.
///
/// Every set knows the width of its universe; binary operations require both
/// operands to come from the same universe.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ElementSet {
    nbits: usize,
    blocks: Vec<u64>,
}

fn block_count(nbits: usize) -> usize {
    nbits.div_ceil(BITS)
}

impl ElementSet {
    pub fn empty(nbits: usize) -> Self {
        ElementSet {
            nbits,
            blocks: vec![0; block_count(nbits)],
        }
    }

    pub fn full(nbits: usize) -> Self {
        let mut s = ElementSet {
            nbits,
            blocks: vec![!0u64; block_count(nbits)],
        };
        s.trim();
        s
    }

    pub fn singleton(nbits: usize, index: usize) -> Self {
        let mut s = Self::empty(nbits);
        s.insert(index);
        s
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(nbits: usize, indices: I) -> Self {
        let mut s = Self::empty(nbits);
        for i in indices {
            s.insert(i);
        }
        s
    }

    /// Clears any bits beyond `nbits` in the last block.
    fn trim(&mut self) {
        let rem = self.nbits % BITS;
        if rem != 0 {
            if let Some(last) = self.blocks.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn nbits(&self) -> usize {
        self.nbits
    }

    pub fn len(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    pub fn contains(&self, index: usize) -> bool {
        debug_assert!(index < self.nbits);
        self.blocks[index / BITS] & (1u64 << (index % BITS)) != 0
    }

    pub fn insert(&mut self, index: usize) {
        debug_assert!(index < self.nbits);
        self.blocks[index / BITS] |= 1u64 << (index % BITS);
    }

    pub fn remove(&mut self, index: usize) {
        debug_assert!(index < self.nbits);
        self.blocks[index / BITS] &= !(1u64 << (index % BITS));
    }

    pub fn with(&self, index: usize) -> Self {
        let mut s = self.clone();
        s.insert(index);
        s
    }

    pub fn without(&self, index: usize) -> Self {
        let mut s = self.clone();
        s.remove(index);
        s
    }

    pub fn union(&self, other: &Self) -> Self {
        debug_assert_eq!(self.nbits, other.nbits);
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn union_with(&mut self, other: &Self) {
        debug_assert_eq!(self.nbits, other.nbits);
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a |= b;
        }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        debug_assert_eq!(self.nbits, other.nbits);
        let mut s = self.clone();
        for (a, b) in s.blocks.iter_mut().zip(&other.blocks) {
            *a &= b;
        }
        s
    }

    pub fn difference(&self, other: &Self) -> Self {
        debug_assert_eq!(self.nbits, other.nbits);
        let mut s = self.clone();
        for (a, b) in s.blocks.iter_mut().zip(&other.blocks) {
            *a &= !b;
        }
        s
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.blocks.iter().zip(&other.blocks).all(|(a, b)| a & b == 0)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        debug_assert_eq!(self.nbits, other.nbits);
        self.blocks.iter().zip(&other.blocks).all(|(a, b)| a & !b == 0)
    }

    pub fn is_proper_subset(&self, other: &Self) -> bool {
        self.is_subset(other) && self != other
    }

    /// Indices of the members, ascending.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().enumerate().flat_map(|(bi, &block)| {
            let mut b = block;
            std::iter::from_fn(move || {
                if b == 0 {
                    None
                } else {
                    let tz = b.trailing_zeros() as usize;
                    b &= b - 1;
                    Some(bi * BITS + tz)
                }
            })
        })
    }

    pub fn members(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Lexicographic order on the ascending member sequences, so `{a}` sorts
    /// before `{a,b}` and `{a,z}` before `{b}`.
    pub fn cmp_lex(&self, other: &Self) -> Ordering {
        let mut it_a = self.iter();
        let mut it_b = other.iter();
        loop {
            match (it_a.next(), it_b.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some(a), Some(b)) => match a.cmp(&b) {
                    Ordering::Equal => continue,
                    ord => return ord,
                },
            }
        }
    }

    /// Cardinality first, then lexicographic.
    pub fn cmp_size_lex(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.cmp_lex(other))
    }
}

impl std::fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// Lazy k-combinations of `items`, in lexicographic order of the chosen
/// index sequences.
pub struct Combinations<'a> {
    items: &'a [usize],
    idx: Vec<usize>,
    done: bool,
}

pub fn combinations(items: &[usize], k: usize) -> Combinations<'_> {
    Combinations {
        items,
        idx: (0..k).collect(),
        done: k > items.len(),
    }
}

impl Iterator for Combinations<'_> {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let current = self.idx.iter().map(|&i| self.items[i]).collect();
        let k = self.idx.len();
        let n = self.items.len();
        // advance: find the rightmost index that can still move
        let mut pos = k;
        loop {
            if pos == 0 {
                self.done = true;
                return Some(current);
            }
            pos -= 1;
            if self.idx[pos] != pos + n - k {
                break;
            }
        }
        self.idx[pos] += 1;
        for j in pos + 1..k {
            self.idx[j] = self.idx[j - 1] + 1;
        }
        Some(current)
    }
}

/// All subsets of `items` in (size, lex) order, as sets over `nbits`.
pub fn subsets_size_lex(items: &[usize], nbits: usize) -> impl Iterator<Item = ElementSet> + '_ {
    (0..=items.len()).flat_map(move |k| {
        combinations(items, k).map(move |c| ElementSet::from_indices(nbits, c))
    })
}
