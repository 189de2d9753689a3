use crate::diagram::StrandId;

/// A fixed-capacity bit set of strand ids.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StrandSet {
    words: Vec<u64>,
    capacity: usize,
}

impl StrandSet {
    pub fn new(capacity: usize) -> Self {
        StrandSet {
            words: vec![0; capacity.div_ceil(64)],
            capacity,
        }
    }

    pub fn full(capacity: usize) -> Self {
        let mut s = StrandSet::new(capacity);
        for i in 0..capacity {
            s.insert(i);
        }
        s
    }

    pub fn from_ids(capacity: usize, ids: impl IntoIterator<Item = StrandId>) -> Self {
        let mut s = StrandSet::new(capacity);
        for i in ids {
            s.insert(i);
        }
        s
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    /// Returns true if the id was newly inserted.
    pub fn insert(&mut self, id: StrandId) -> bool {
        assert!(id < self.capacity, "strand {id} out of range");
        let (w, b) = (id / 64, id % 64);
        let fresh = self.words[w] & (1 << b) == 0;
        self.words[w] |= 1 << b;
        fresh
    }

    pub fn contains(&self, id: StrandId) -> bool {
        id < self.capacity && self.words[id / 64] & (1 << (id % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.capacity
    }

    pub fn is_superset(&self, other: &StrandSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & b == *b)
    }

    pub fn iter(&self) -> impl Iterator<Item = StrandId> + '_ {
        (0..self.capacity).filter(move |&i| self.contains(i))
    }

    pub fn to_vec(&self) -> Vec<StrandId> {
        self.iter().collect()
    }
}
