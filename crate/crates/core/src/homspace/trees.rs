use std::sync::Arc;

use crate::category::CategoryData;

/// Left-associated splitting tree: `path[k]` is the channel after fusing the
/// first `k + 1` letters, `mult[k]` the vertex index for
/// `path[k] → path[k-1] ⊗ x_k` (with `path[-1]` the unit).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tree {
    pub path: Vec<usize>,
    pub mult: Vec<usize>,
}

impl Tree {
    pub fn channel(&self, unit: usize) -> usize {
        self.path.last().copied().unwrap_or(unit)
    }

    pub fn prefix(&self, k: usize) -> Tree {
        Tree { path: self.path[..k].to_vec(), mult: self.mult[..k].to_vec() }
    }
}

/// The trees of a word, grouped by channel and sorted.
#[derive(Debug)]
pub struct WordSpace {
    word: Vec<usize>,
    unit: usize,
    trees: Vec<Vec<Tree>>,
}

impl WordSpace {
    pub fn new(cat: &CategoryData, word: &[usize]) -> Arc<WordSpace> {
        let rank = cat.rank();
        let unit = cat.unit().0;
        let mut layer = vec![Tree { path: vec![], mult: vec![] }];
        for &x in word {
            let mut next = Vec::new();
            for t in &layer {
                let y = t.channel(unit);
                for c in 0..rank {
                    for m in 0..cat.nu(y, x, c) {
                        let mut nt = t.clone();
                        nt.path.push(c);
                        nt.mult.push(m);
                        next.push(nt);
                    }
                }
            }
            layer = next;
        }
        let mut trees = vec![Vec::new(); rank];
        for t in layer {
            trees[t.channel(unit)].push(t);
        }
        for v in &mut trees {
            v.sort();
        }
        Arc::new(WordSpace { word: word.to_vec(), unit, trees })
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn rank(&self) -> usize {
        self.trees.len()
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn count(&self, c: usize) -> usize {
        self.trees[c].len()
    }

    pub fn trees(&self, c: usize) -> &[Tree] {
        &self.trees[c]
    }

    pub fn index_of(&self, t: &Tree) -> Option<usize> {
        let c = t.channel(self.unit);
        self.trees.get(c)?.binary_search(t).ok()
    }

    pub fn total(&self) -> usize {
        self.trees.iter().map(Vec::len).sum()
    }

    pub fn same_word(&self, other: &WordSpace) -> bool {
        std::ptr::eq(self, other) || self.word == other.word
    }
}
