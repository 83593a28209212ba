//! Enumeration of `T^(m)(n)`.
//!
//! Unlabeled shapes are preorder words over {leaf, node}; a node is followed by
//! the words of its `m + 1` subtrees. Shapes are produced in lexicographic order
//! with leaf before node. Each shape is then labeled by every permutation of
//! `1..=n` in lexicographic order, the `p`-th node in preorder receiving the
//! `p`-th entry of the permutation.

use itertools::Itertools;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::tree::{Arity, PlaneTree};

/// Default ceiling on the number of trees an exhaustive sum will visit.
pub const DEFAULT_GUARD: u64 = 100_000_000;

/// An unlabeled shape: slot lists indexed by preorder position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shape {
    m: usize,
    word: Vec<bool>,
    slots: Vec<Vec<Option<usize>>>,
}

impl Shape {
    fn from_word(m: usize, word: Vec<bool>) -> Self {
        let n = word.iter().filter(|&&b| b).count();
        let mut slots: Vec<Vec<Option<usize>>> = vec![Vec::with_capacity(m + 1); n];
        // Stack of preorder indices whose slot lists are still open.
        let mut open: Vec<usize> = Vec::with_capacity(n);
        let mut next = 0;
        for &is_node in &word {
            let entry = is_node.then_some(next);
            if let Some(&top) = open.last() {
                slots[top].push(entry);
                if slots[top].len() == m + 1 {
                    open.pop();
                }
            }
            if is_node {
                open.push(next);
                next += 1;
            }
        }
        Self { m, word, slots }
    }

    pub fn n(&self) -> usize {
        self.slots.len()
    }

    /// The preorder word, `true` for a node.
    pub fn word(&self) -> &[bool] {
        &self.word
    }

    /// Applies a labeling: `labels[p]` is the label of the node at preorder position `p`.
    pub fn label(&self, labels: &[usize]) -> PlaneTree {
        let n = self.n();
        let mut children = vec![Vec::new(); n];
        for (p, slots) in self.slots.iter().enumerate() {
            children[labels[p] - 1] = slots.iter().map(|c| c.map(|q| labels[q])).collect();
        }
        PlaneTree::new(Arity::Uniform(self.m), labels[0], children)
            .expect("labeling a valid shape yields a valid tree")
    }
}

/// Lexicographic stream of shapes with `n` nodes of arity `m + 1`.
pub struct ShapeIter {
    n: usize,
    m: usize,
    current: Option<Vec<bool>>,
}

impl ShapeIter {
    pub fn new(n: usize, m: usize) -> Self {
        let current = (n > 0).then(|| {
            let mut word = Vec::with_capacity((m + 1) * n + 1);
            fill_greedy(&mut word, n, m);
            word
        });
        Self { n, m, current }
    }
}

/// Completes a prefix to the smallest valid word: place a leaf whenever that
/// keeps the word completable.
fn fill_greedy(word: &mut Vec<bool>, n: usize, m: usize) {
    let (mut open, mut used) = prefix_state(word, m);
    let len = (m + 1) * n + 1;
    while word.len() < len {
        if used == n || open > 1 {
            word.push(false);
            open -= 1;
        } else {
            word.push(true);
            open += m;
            used += 1;
        }
    }
}

/// Pending slot count and node count after a prefix.
fn prefix_state(word: &[bool], m: usize) -> (usize, usize) {
    let mut open = 1;
    let mut used = 0;
    for &b in word {
        if b {
            open += m;
            used += 1;
        } else {
            open -= 1;
        }
    }
    (open, used)
}

impl Iterator for ShapeIter {
    type Item = Shape;

    fn next(&mut self) -> Option<Shape> {
        let word = self.current.take()?;
        // Successor: the rightmost leaf that could become a node, then greedy fill.
        let mut used_before = word.iter().filter(|&&b| b).count();
        let mut succ = None;
        for p in (0..word.len()).rev() {
            if word[p] {
                used_before -= 1;
            } else if used_before < self.n {
                let mut next = word[..p].to_vec();
                next.push(true);
                fill_greedy(&mut next, self.n, self.m);
                succ = Some(next);
                break;
            }
        }
        self.current = succ;
        Some(Shape::from_word(self.m, word))
    }
}

/// All labelings of one shape, permutations in lexicographic order.
pub fn trees_of_shape(shape: &Shape) -> impl Iterator<Item = PlaneTree> + '_ {
    (1..=shape.n())
        .permutations(shape.n())
        .map(move |labels| shape.label(&labels))
}

/// Every tree of `T^(m)(n)` exactly once: shapes in order, then labelings.
pub fn enumerate_trees(n: usize, m: usize) -> impl Iterator<Item = PlaneTree> {
    ShapeIter::new(n, m).flat_map(|shape| {
        let n = shape.n();
        (1..=n)
            .permutations(n)
            .map(move |labels| shape.label(&labels))
    })
}

/// `|T^(m)(n)| = n! * C((m+1)n, n) / (mn + 1)`.
pub fn tree_count(n: usize, m: usize) -> BigUint {
    if n == 0 {
        return BigUint::from(0u8);
    }
    let mut fact = BigUint::one();
    for k in 1..=n {
        fact *= k;
    }
    fact * fuss_catalan(n, m)
}

/// Refuses when `|T^(m)(n)|` exceeds `limit`.
pub fn check_guard(n: usize, m: usize, limit: u64) -> Result<()> {
    let count = tree_count(n, m);
    if count.to_u64().is_none_or(|c| c > limit) {
        return Err(Error::GuardRefused {
            trees: count.to_string(),
            limit,
        });
    }
    Ok(())
}

/// Sums `eval` over all of `T^(m)(n)`, shapes spread across worker threads.
/// `init` builds one scratch state per worker.
pub fn par_tree_sum<S, I, F>(n: usize, m: usize, init: I, eval: F) -> BigInt
where
    I: Fn() -> S + Sync + Send,
    F: Fn(&mut S, &PlaneTree) -> i64 + Sync + Send,
{
    ShapeIter::new(n, m)
        .par_bridge()
        .map_init(&init, |state, shape| {
            let mut acc = BigInt::zero();
            let mut part: i64 = 0;
            for labels in (1..=shape.n()).permutations(shape.n()) {
                part += eval(state, &shape.label(&labels));
                if part.unsigned_abs() > 1 << 60 {
                    acc += part;
                    part = 0;
                }
            }
            acc + part
        })
        .reduce(BigInt::zero, |a, b| a + b)
}

/// Number of shapes: `C((m+1)n, n) / (mn + 1)`.
pub fn fuss_catalan(n: usize, m: usize) -> BigUint {
    let mut binom = BigUint::one();
    let top = (m + 1) * n;
    for k in 0..n {
        binom = binom * (top - k) / (k + 1);
    }
    binom / (m * n + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    /// Independent generator: choose a root and a (parent, slot) for every other
    /// label, keep the assignments that form a tree.
    fn naive_trees(n: usize, m: usize) -> HashSet<String> {
        let a = m + 1;
        let mut out = HashSet::new();
        for root in 1..=n {
            let others: Vec<usize> = (1..=n).filter(|&v| v != root).collect();
            let choices = n * a;
            let total = choices.pow(others.len() as u32);
            'assign: for code in 0..total {
                let mut children = vec![vec![None; a]; n];
                let mut c = code;
                for &v in &others {
                    let pick = c % choices;
                    c /= choices;
                    let (p, s) = (pick / a + 1, pick % a);
                    if p == v || children[p - 1][s].is_some() {
                        continue 'assign;
                    }
                    children[p - 1][s] = Some(v);
                }
                if let Ok(t) = PlaneTree::new(Arity::Uniform(m), root, children) {
                    out.insert(t.encode());
                }
            }
        }
        out
    }

    #[test]
    fn small_counts() {
        assert_eq!(enumerate_trees(2, 0).count(), 2);
        assert_eq!(enumerate_trees(2, 1).count(), 4);
        assert_eq!(enumerate_trees(0, 3).count(), 0);
        assert_eq!(tree_count(2, 1), BigUint::from(4u8));
    }

    #[test]
    fn regression_five_four() {
        assert_eq!(fuss_catalan(5, 4), BigUint::from(2530u32));
        assert_eq!(tree_count(5, 4), BigUint::from(303_600u32));
        assert_eq!(ShapeIter::new(5, 4).count(), 2530);
    }

    #[test]
    fn matches_naive_generator() {
        for n in 1..=4 {
            for m in 0..=2 {
                let fast: Vec<String> = enumerate_trees(n, m).map(|t| t.encode()).collect();
                let unique: HashSet<String> = fast.iter().cloned().collect();
                assert_eq!(unique.len(), fast.len(), "duplicates at n={n} m={m}");
                assert_eq!(unique, naive_trees(n, m), "n={n} m={m}");
                assert_eq!(BigUint::from(fast.len()), tree_count(n, m));
            }
        }
    }

    #[test]
    fn shapes_are_sorted_and_deterministic() {
        let a: Vec<Vec<bool>> = ShapeIter::new(4, 2).map(|s| s.word().to_vec()).collect();
        let b: Vec<Vec<bool>> = ShapeIter::new(4, 2).map(|s| s.word().to_vec()).collect();
        assert_eq!(a, b);
        assert!(a.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn round_trip_text_exhaustive() {
        for t in enumerate_trees(3, 1) {
            assert_eq!(PlaneTree::decode(&t.encode()).unwrap(), t);
        }
    }
}
