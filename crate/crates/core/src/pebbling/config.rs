use std::fmt;

use crate::graph::VertexId;

/// A set of pebbled vertices, stored as a bitset over topological indices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PebbleConfig {
    words: Vec<u64>,
}

impl PebbleConfig {
    pub fn empty(vertex_count: usize) -> Self {
        PebbleConfig {
            words: vec![0; vertex_count.div_ceil(64)],
        }
    }

    pub fn from_vertices(vertex_count: usize, vertices: impl IntoIterator<Item = VertexId>) -> Self {
        let mut c = Self::empty(vertex_count);
        for v in vertices {
            c.insert(v);
        }
        c
    }

    pub fn contains(&self, v: VertexId) -> bool {
        let i = v.index();
        self.words
            .get(i / 64)
            .is_some_and(|w| w & (1 << (i % 64)) != 0)
    }

    pub fn insert(&mut self, v: VertexId) -> bool {
        let i = v.index();
        let bit = 1 << (i % 64);
        let word = &mut self.words[i / 64];
        let fresh = *word & bit == 0;
        *word |= bit;
        fresh
    }

    pub fn remove(&mut self, v: VertexId) -> bool {
        let i = v.index();
        let bit = 1 << (i % 64);
        let word = &mut self.words[i / 64];
        let present = *word & bit != 0;
        *word &= !bit;
        present
    }

    pub fn toggle(&mut self, v: VertexId) {
        let i = v.index();
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(VertexId::new(wi * 64 + bit))
            })
        })
    }

    pub fn is_subset(&self, other: &PebbleConfig) -> bool {
        self.words
            .iter()
            .zip(other.words.iter().chain(std::iter::repeat(&0)))
            .all(|(a, b)| a & !b == 0)
    }

    pub fn union_with(&mut self, other: &PebbleConfig) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }
}

impl fmt::Debug for PebbleConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(VertexId::index)).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_operations() {
        let mut c = PebbleConfig::empty(130);
        assert!(c.is_empty());
        assert!(c.insert(VertexId::new(3)));
        assert!(!c.insert(VertexId::new(3)));
        c.insert(VertexId::new(129));
        c.toggle(VertexId::new(64));
        assert_eq!(c.len(), 3);
        assert_eq!(
            c.iter().map(VertexId::index).collect::<Vec<_>>(),
            [3, 64, 129]
        );
        assert!(c.remove(VertexId::new(64)));
        assert!(!c.contains(VertexId::new(64)));
        let small = PebbleConfig::from_vertices(130, [VertexId::new(3)]);
        assert!(small.is_subset(&c));
        assert!(!c.is_subset(&small));
    }
}
