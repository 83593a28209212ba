//! Exhaustive boxed-tree sums.
//!
//! A boxing partitions the nodes of a tree into cadet sequences; it is an
//! S-boxing when every block is an S-cadet sequence. The signed sum of
//! `(-1)^(n - |B|)` over the S-boxings of a tree is its contribution, and the
//! sum over all trees of `T^(m)(n)` is the region count.

use num_bigint::BigInt;

use crate::arrangement::ArrangementSpec;
use crate::enumerate::{check_guard, par_tree_sum};
use crate::error::{Error, Result};
use crate::tree::{Arity, PlaneTree};

/// A partition of the nodes into cadet sequences.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Boxing {
    pub boxes: Vec<Vec<usize>>,
}

impl Boxing {
    pub fn len(&self) -> usize {
        self.boxes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    /// `(-1)^(n - |B|)`.
    pub fn sign(&self, n: usize) -> i64 {
        if (n - self.len()).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

/// Checks that `tree` lives in `T^(m)(n)` with `n` and `m` compatible with `spec`.
pub fn check_tree(spec: &ArrangementSpec, tree: &PlaneTree) -> Result<()> {
    if tree.n() != spec.n() {
        return Err(Error::DimensionMismatch {
            tree_n: tree.n(),
            spec_n: spec.n(),
        });
    }
    match tree.arity() {
        Arity::Uniform(m) if m >= spec.max_offset() => Ok(()),
        Arity::Uniform(m) => Err(Error::ArityMismatch {
            tree_m: m,
            spec_m: spec.max_offset(),
        }),
        Arity::Broom(_) => Err(Error::WrongTreeFamily {
            expected: "uniform",
        }),
    }
}

/// Whether every partial lsib sum of `seq` avoids the matching S-minus set.
pub fn is_s_cadet_sequence(
    spec: &ArrangementSpec,
    tree: &PlaneTree,
    seq: &[usize],
) -> Result<bool> {
    if tree.n() != spec.n() {
        return Err(Error::DimensionMismatch {
            tree_n: tree.n(),
            spec_n: spec.n(),
        });
    }
    if !tree.is_cadet_sequence(seq) {
        return Err(Error::NotCadetSequence(seq.to_vec()));
    }
    Ok(block_is_s_cadet(spec, tree, seq))
}

pub(crate) fn block_is_s_cadet(spec: &ArrangementSpec, tree: &PlaneTree, seq: &[usize]) -> bool {
    for i in 0..seq.len() {
        let mut sum = 0;
        for j in (i + 1)..seq.len() {
            sum += tree.lsib_unchecked(seq[j]);
            if spec.in_minus(seq[i], seq[j], sum) {
                return false;
            }
        }
    }
    true
}

/// Compositions of one maximal cadet sequence into S-cadet blocks, as split masks:
/// bit `p` set means a cut between positions `p` and `p + 1`.
fn valid_splits(spec: &ArrangementSpec, tree: &PlaneTree, seq: &[usize]) -> Vec<u64> {
    let cuts = seq.len() - 1;
    (0..1u64 << cuts)
        .filter(|&mask| blocks(seq, mask).all(|b| block_is_s_cadet(spec, tree, b)))
        .collect()
}

fn blocks(seq: &[usize], mask: u64) -> impl Iterator<Item = &[usize]> {
    let mut start = 0;
    (0..seq.len()).filter_map(move |p| {
        if p + 1 == seq.len() || mask >> p & 1 == 1 {
            let block = &seq[start..=p];
            start = p + 1;
            Some(block)
        } else {
            None
        }
    })
}

/// Streams every S-boxing of the tree. The product over maximal cadet sequences
/// is walked with an odometer.
pub struct BoxingIter {
    sequences: Vec<Vec<usize>>,
    splits: Vec<Vec<u64>>,
    odometer: Vec<usize>,
    done: bool,
}

impl Iterator for BoxingIter {
    type Item = Boxing;

    fn next(&mut self) -> Option<Boxing> {
        if self.done {
            return None;
        }
        let mut boxes = Vec::new();
        for (idx, seq) in self.sequences.iter().enumerate() {
            let mask = self.splits[idx][self.odometer[idx]];
            boxes.extend(blocks(seq, mask).map(<[usize]>::to_vec));
        }
        self.done = true;
        for idx in (0..self.odometer.len()).rev() {
            self.odometer[idx] += 1;
            if self.odometer[idx] < self.splits[idx].len() {
                self.done = false;
                break;
            }
            self.odometer[idx] = 0;
        }
        Some(Boxing { boxes })
    }
}

pub fn enumerate_s_boxings(spec: &ArrangementSpec, tree: &PlaneTree) -> Result<BoxingIter> {
    check_tree(spec, tree)?;
    let sequences = tree.maximal_cadet_sequences();
    if sequences.iter().any(|s| s.len() > 63) {
        return Err(Error::Precondition(
            "cadet sequence longer than 63 nodes".into(),
        ));
    }
    let splits: Vec<Vec<u64>> = sequences
        .iter()
        .map(|s| valid_splits(spec, tree, s))
        .collect();
    Ok(BoxingIter {
        odometer: vec![0; sequences.len()],
        sequences,
        splits,
        done: false,
    })
}

/// Signed count of the S-boxings of one tree.
pub fn contribution_brute(spec: &ArrangementSpec, tree: &PlaneTree) -> Result<i64> {
    Ok(enumerate_s_boxings(spec, tree)?
        .map(|b| b.sign(tree.n()))
        .sum())
}

/// Sum of brute contributions over `T^(m)(n)`, `m` taken from the spec.
pub fn bernardi_sum_brute(spec: &ArrangementSpec, guard: u64) -> Result<BigInt> {
    let (n, m) = (spec.n(), spec.max_offset());
    check_guard(n, m, guard)?;
    Ok(par_tree_sum(
        n,
        m,
        || (),
        |_, t| contribution_brute(spec, t).expect("enumerated trees match the spec"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::{enumerate_trees, DEFAULT_GUARD};
    use std::collections::HashSet;

    fn example() -> (ArrangementSpec, PlaneTree) {
        let spec = ArrangementSpec::new(
            6,
            [
                (1, 4, vec![1, 2, 3, 4, 5]),
                (4, 5, vec![0]),
                (2, 3, vec![0]),
            ],
        )
        .unwrap();
        let tree = PlaneTree::from_slots(
            Arity::Uniform(5),
            6,
            &[(4, &[0, 5]), (5, &[6, 2, 0, 1]), (2, &[3])],
        )
        .unwrap();
        (spec, tree)
    }

    #[test]
    fn worked_example_boxings() {
        let (spec, tree) = example();
        let got: HashSet<Vec<Vec<usize>>> = enumerate_s_boxings(&spec, &tree)
            .unwrap()
            .map(|b| {
                let mut boxes = b.boxes;
                boxes.sort();
                boxes
            })
            .collect();
        let want: HashSet<Vec<Vec<usize>>> = [
            vec![vec![1], vec![2], vec![3], vec![4], vec![5], vec![6]],
            vec![vec![1], vec![2], vec![3], vec![4, 5], vec![6]],
            vec![vec![2], vec![3], vec![4], vec![5, 1], vec![6]],
        ]
        .into_iter()
        .collect();
        assert_eq!(got, want);
        assert_eq!(contribution_brute(&spec, &tree).unwrap(), -1);
    }

    #[test]
    fn s_cadet_example() {
        // S⁻_{4,5} = {0}, S⁻_{5,1} = {0,2}, S⁻_{4,1} = {0,2,4}.
        let spec = ArrangementSpec::new(6, [(4, 5, vec![0]), (1, 5, vec![2]), (1, 4, vec![2, 4])])
            .unwrap();
        assert_eq!(spec.s_minus(5, 1).unwrap(), &[0, 2]);
        assert_eq!(spec.s_minus(4, 1).unwrap(), &[0, 2, 4]);
        let (_, tree) = example();
        assert!(is_s_cadet_sequence(&spec, &tree, &[4, 5]).unwrap());
        assert!(is_s_cadet_sequence(&spec, &tree, &[5, 1]).unwrap());
        assert!(!is_s_cadet_sequence(&spec, &tree, &[4, 5, 1]).unwrap());
        assert!(is_s_cadet_sequence(&spec, &tree, &[6]).unwrap());
        assert!(matches!(
            is_s_cadet_sequence(&spec, &tree, &[4, 1]),
            Err(Error::NotCadetSequence(_))
        ));
    }

    #[test]
    fn braid_trees_have_one_boxing() {
        let spec = ArrangementSpec::braid(3).unwrap();
        for t in enumerate_trees(3, 0) {
            let all: Vec<Boxing> = enumerate_s_boxings(&spec, &t).unwrap().collect();
            assert_eq!(all.len(), 1);
            assert!(all[0].boxes.iter().all(|b| b.len() == 1));
            for seq in t.maximal_cadet_sequences().iter().filter(|s| s.len() > 1) {
                assert!(!is_s_cadet_sequence(&spec, &t, &seq[..2]).unwrap());
            }
        }
    }

    #[test]
    fn chain_with_four_maximal_boxes() {
        // Chain 1 -> .. -> 6, every node in slot 1 of its parent.
        let spec = ArrangementSpec::new(6, [(1, 3, vec![-2]), (3, 4, vec![-1]), (4, 5, vec![-1])])
            .unwrap();
        let tree = PlaneTree::from_slots(
            Arity::Uniform(2),
            6,
            &[
                (1, &[0, 2]),
                (2, &[0, 3]),
                (3, &[0, 4]),
                (4, &[0, 5]),
                (5, &[0, 6]),
            ],
        )
        .unwrap();
        assert_eq!(contribution_brute(&spec, &tree).unwrap(), 0);
        assert_eq!(enumerate_s_boxings(&spec, &tree).unwrap().count(), 6);
    }

    #[test]
    fn region_counts() {
        let ish3 = ArrangementSpec::ish(3).unwrap();
        assert_eq!(bernardi_sum_brute(&ish3, DEFAULT_GUARD).unwrap(), 16.into());
        let braid3 = ArrangementSpec::braid(3).unwrap();
        assert_eq!(
            bernardi_sum_brute(&braid3, DEFAULT_GUARD).unwrap(),
            6.into()
        );
        let ish2 = ArrangementSpec::ish(2).unwrap();
        assert_eq!(bernardi_sum_brute(&ish2, DEFAULT_GUARD).unwrap(), 3.into());
    }

    #[test]
    fn guard_and_family_errors() {
        let spec = ArrangementSpec::ish(5).unwrap();
        assert!(matches!(
            bernardi_sum_brute(&spec, 1000),
            Err(Error::GuardRefused { .. })
        ));
        let (spec, _) = example();
        let small = PlaneTree::from_slots(
            Arity::Uniform(1),
            6,
            &[(1, &[2]), (2, &[3]), (3, &[4]), (4, &[5]), (5, &[6])],
        )
        .unwrap();
        assert!(matches!(
            contribution_brute(&spec, &small),
            Err(Error::ArityMismatch { .. })
        ));
    }
}
