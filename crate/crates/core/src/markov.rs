//! Markov triples `α² + β² + γ² = 3αβγ` and their mutation tree.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MarkovError {
    #[error("entries must be positive, got {0:?}")]
    NonPositiveEntry([u64; 3]),
    #[error("{0:?} does not satisfy the Markov equation")]
    NotMarkov([u64; 3]),
    #[error("slot must be 1, 2 or 3, got {0}")]
    BadSlot(usize),
    #[error("mutation overflows 64-bit entries")]
    Overflow,
}

pub fn is_markov(t: [u64; 3]) -> Result<bool, MarkovError> {
    if t.contains(&0) {
        return Err(MarkovError::NonPositiveEntry(t));
    }
    let [a, b, c] = t.map(u128::from);
    // 3abc can exceed u128 only for entries far beyond the enumerated range
    let lhs = a.checked_mul(a).zip(b.checked_mul(b)).zip(c.checked_mul(c));
    let rhs = a.checked_mul(b).and_then(|ab| ab.checked_mul(c)).and_then(|abc| abc.checked_mul(3));
    match (lhs, rhs) {
        (Some(((a2, b2), c2)), Some(r)) => Ok(a2.checked_add(b2).and_then(|s| s.checked_add(c2)) == Some(r)),
        _ => Err(MarkovError::Overflow),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MarkovTriple([u64; 3]);

impl MarkovTriple {
    pub fn new(t: [u64; 3]) -> Result<Self, MarkovError> {
        if is_markov(t)? {
            Ok(MarkovTriple(t))
        } else {
            Err(MarkovError::NotMarkov(t))
        }
    }

    pub fn root() -> Self {
        MarkovTriple([1, 1, 1])
    }

    pub fn entries(&self) -> [u64; 3] {
        self.0
    }

    pub fn max_entry(&self) -> u64 {
        *self.0.iter().max().unwrap()
    }

    /// Ascending order; triples are identified up to permutation.
    pub fn sorted(&self) -> Self {
        let mut t = self.0;
        t.sort_unstable();
        MarkovTriple(t)
    }

    /// Replaces the entry `x` in `slot` (1-based) by `3·y·z − x`, the other
    /// root of the quadratic obtained by fixing `y` and `z`.
    pub fn mutate(&self, slot: usize) -> Result<Self, MarkovError> {
        if !(1..=3).contains(&slot) {
            return Err(MarkovError::BadSlot(slot));
        }
        let i = slot - 1;
        let [y, z] = [self.0[(i + 1) % 3], self.0[(i + 2) % 3]];
        let product = 3u128 * u128::from(y) * u128::from(z);
        let new = product - u128::from(self.0[i]);
        let mut t = self.0;
        t[i] = u64::try_from(new).map_err(|_| MarkovError::Overflow)?;
        Ok(MarkovTriple(t))
    }
}

impl fmt::Display for MarkovTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.0;
        write!(f, "({a},{b},{c})")
    }
}

pub fn mutate_triple(t: MarkovTriple, slot: usize) -> Result<MarkovTriple, MarkovError> {
    t.mutate(slot)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeNode {
    pub triple: MarkovTriple,
    pub parent: Option<usize>,
    /// 1-based slot of the parent's sorted triple that was mutated.
    pub slot: Option<usize>,
    pub depth: usize,
}

/// Markov tree from `(1,1,1)` over sorted triples, ordered by largest entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkovTree {
    pub nodes: Vec<TreeNode>,
}

#[derive(Clone, Copy, Debug)]
pub enum TreeLimit {
    MaxEntry(u64),
    MaxDepth(usize),
}

impl MarkovTree {
    pub fn build(limit: TreeLimit) -> Result<Self, MarkovError> {
        let root = MarkovTriple::root();
        let mut nodes = vec![TreeNode { triple: root, parent: None, slot: None, depth: 0 }];
        let mut seen = HashSet::from([root]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(idx) = queue.pop_front() {
            let TreeNode { triple, depth, .. } = nodes[idx].clone();
            if let TreeLimit::MaxDepth(d) = limit {
                if depth >= d {
                    continue;
                }
            }
            for slot in 1..=3 {
                let child = triple.mutate(slot)?.sorted();
                if let TreeLimit::MaxEntry(m) = limit {
                    if child.max_entry() > m {
                        continue;
                    }
                }
                if !seen.insert(child) {
                    continue;
                }
                nodes.push(TreeNode { triple: child, parent: Some(idx), slot: Some(slot), depth: depth + 1 });
                queue.push_back(nodes.len() - 1);
            }
        }
        // order by largest entry; parents always precede their children
        let mut order: Vec<usize> = (0..nodes.len()).collect();
        order.sort_by_key(|&i| (nodes[i].triple.max_entry(), nodes[i].triple));
        let mut rank = vec![0; nodes.len()];
        for (r, &i) in order.iter().enumerate() {
            rank[i] = r;
        }
        let nodes = order
            .iter()
            .map(|&i| TreeNode { parent: nodes[i].parent.map(|p| rank[p]), ..nodes[i].clone() })
            .collect();
        Ok(MarkovTree { nodes })
    }

    pub fn triples(&self) -> Vec<MarkovTriple> {
        self.nodes.iter().map(|n| n.triple).collect()
    }

    /// Slots leading from the root to node `idx`.
    pub fn path_to(&self, mut idx: usize) -> Vec<usize> {
        let mut path = Vec::new();
        while let (Some(p), Some(s)) = (self.nodes[idx].parent, self.nodes[idx].slot) {
            path.push(s);
            idx = p;
        }
        path.reverse();
        path
    }

    pub fn find(&self, t: MarkovTriple) -> Option<usize> {
        let t = t.sorted();
        self.nodes.iter().position(|n| n.triple == t)
    }
}

pub fn markov_tree(max_entry: u64) -> Result<MarkovTree, MarkovError> {
    MarkovTree::build(TreeLimit::MaxEntry(max_entry))
}

/// Tree path from the root to a triple (given in any order).
pub fn path_to_triple(t: MarkovTriple) -> Result<Vec<usize>, MarkovError> {
    let tree = markov_tree(t.max_entry())?;
    let idx = tree.find(t).expect("every Markov triple lies in the tree");
    Ok(tree.path_to(idx))
}
