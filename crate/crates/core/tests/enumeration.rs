use std::collections::HashSet;

use braid_regions::{enumerate_trees, tree_count, PlaneTree};
use num_bigint::BigUint;

#[test]
fn streams_are_deterministic() {
    for (n, m) in [(3, 2), (4, 1), (5, 0)] {
        let a: Vec<PlaneTree> = enumerate_trees(n, m).collect();
        let b: Vec<PlaneTree> = enumerate_trees(n, m).collect();
        assert_eq!(a, b);
    }
}

#[test]
fn totals_and_no_duplicates() {
    for n in 1..=5 {
        for m in 0..=2 {
            let seen: HashSet<PlaneTree> = enumerate_trees(n, m).collect();
            assert_eq!(
                BigUint::from(seen.len()),
                tree_count(n, m),
                "n = {n}, m = {m}"
            );
        }
    }
}

#[test]
fn cadet_sequences_partition_nodes() {
    for n in 1..=4 {
        for m in 0..=2 {
            for t in enumerate_trees(n, m) {
                let seqs = t.maximal_cadet_sequences();
                let mut all: Vec<usize> = seqs.iter().flatten().copied().collect();
                all.sort_unstable();
                assert_eq!(all, (1..=n).collect::<Vec<_>>(), "{t}");
                let firsts: HashSet<usize> = seqs.iter().map(|s| s[0]).collect();
                assert_eq!(firsts.len(), seqs.len());
                for s in &seqs {
                    assert!(t.is_cadet_sequence(s));
                    assert!(t.parent(s[0]).and_then(|p| t.cadet(p)) != Some(s[0]));
                    assert_eq!(t.cadet(*s.last().unwrap()), None);
                }
            }
        }
    }
}

#[test]
fn no_node_is_cadet_twice() {
    for t in enumerate_trees(5, 1) {
        let cadets: Vec<usize> = (1..=5).filter_map(|v| t.cadet(v)).collect();
        let distinct: HashSet<usize> = cadets.iter().copied().collect();
        assert_eq!(cadets.len(), distinct.len());
    }
}

#[test]
fn text_round_trip() {
    for t in enumerate_trees(4, 2) {
        assert_eq!(PlaneTree::decode(&t.encode()).unwrap(), t);
    }
}
