//! Broom trees, their encoding sequences, and the maps to and from `S(0,0,0,0)`.
//!
//! A broom tree has root 1 with `2m + 2` slots; every other node has one slot.
//! A child `k` of the root must satisfy `lsib(k) ∈ S⁻_{1,k}` or `rsib(k) ∈ S⁻_{k,1}`.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive};

use crate::arrangement::ArrangementSpec;
use crate::error::{Error, Result};
use crate::tree::{Arity, PlaneTree};

use super::classify::{classify_tree, IshClassification};

type Table = Vec<Vec<Option<usize>>>;

/// One entry `a_k`: `(0, i)` hangs `k` under `i`, `(1, s)` puts it `s` slots from
/// the left of the root, `(-1, t)` puts it `t` slots from the right.
pub type SequenceEntry = (i8, usize);

/// Entries `a_2, .., a_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IshSequence(pub Vec<SequenceEntry>);

fn require_nested(spec: &ArrangementSpec) -> Result<()> {
    if spec.is_nested_ish() {
        Ok(())
    } else {
        Err(Error::NotNestedIsh)
    }
}

/// `∏_{k=2}^{n} (n + 1 + |S_{1,k}| - k)`.
pub fn closed_formula(spec: &ArrangementSpec) -> Result<BigInt> {
    require_nested(spec)?;
    let n = spec.n();
    Ok((2..=n)
        .map(|k| BigInt::from(n + 1 + spec.offsets(1, k).len() - k))
        .product())
}

/// The allowed values of `a_k`.
pub fn alphabet(spec: &ArrangementSpec, k: usize) -> Vec<SequenceEntry> {
    let mut out: Vec<SequenceEntry> = ((k + 1)..=spec.n()).map(|i| (0, i)).collect();
    out.extend(spec.minus_unchecked(1, k).iter().map(|&s| (1, s)));
    out.extend(spec.minus_unchecked(k, 1).iter().map(|&t| (-1, t)));
    out
}

/// `∏ |alphabet(k)|`.
pub fn count_sequences(spec: &ArrangementSpec) -> Result<BigInt> {
    require_nested(spec)?;
    Ok((2..=spec.n())
        .map(|k| BigInt::from(alphabet(spec, k).len()))
        .fold(BigInt::one(), |a, b| a * b))
}

/// Checks membership in the broom family for this spec.
pub fn check_frak_t(spec: &ArrangementSpec, tree: &PlaneTree) -> Result<()> {
    require_nested(spec)?;
    let m = spec.max_offset();
    if tree.n() != spec.n() {
        return Err(Error::DimensionMismatch {
            tree_n: tree.n(),
            spec_n: spec.n(),
        });
    }
    if tree.arity() != Arity::Broom(m) {
        return Err(Error::NotInFrakT(format!(
            "layout {:?}, expected Broom({m})",
            tree.arity()
        )));
    }
    if tree.root() != 1 {
        return Err(Error::NotInFrakT(format!("root is {}, not 1", tree.root())));
    }
    for k in 2..=tree.n() {
        let (l, r) = (tree.lsib(k)?, tree.rsib(k)?);
        if !spec.in_minus(1, k, l) && !spec.in_minus(k, 1, r) {
            return Err(Error::NotInFrakT(format!(
                "node {k} has lsib {l} and rsib {r}, neither allowed"
            )));
        }
    }
    Ok(())
}

/// Every broom tree of the spec. Labels `2..=n` are inserted one at a time into
/// `2m + 2` hanging chains, then the condition on the root's children is filtered.
pub fn enumerate_frak_t(spec: &ArrangementSpec) -> Result<Vec<PlaneTree>> {
    let mut out = Vec::new();
    visit_frak_t(spec, |t| out.push(t.clone()))?;
    Ok(out)
}

pub fn count_frak_t(spec: &ArrangementSpec) -> Result<BigInt> {
    let mut count = 0u64;
    visit_frak_t(spec, |_| count += 1)?;
    Ok(BigInt::from(count))
}

/// Chain placements scanned by [`enumerate_frak_t`]: `(2m + 2)(2m + 3)..(2m + n)`.
pub fn frak_t_placements(n: usize, m: usize) -> BigUint {
    (2..=n).map(|k| BigUint::from(2 * m + k)).product()
}

/// Refuses when the placement count exceeds `limit`.
pub fn check_frak_t_guard(spec: &ArrangementSpec, limit: u64) -> Result<()> {
    let count = frak_t_placements(spec.n(), spec.max_offset());
    if count.to_u64().is_none_or(|c| c > limit) {
        return Err(Error::GuardRefused {
            trees: count.to_string(),
            limit,
        });
    }
    Ok(())
}

fn visit_frak_t(spec: &ArrangementSpec, mut visit: impl FnMut(&PlaneTree)) -> Result<()> {
    require_nested(spec)?;
    let mut chains: Vec<Vec<usize>> = vec![Vec::new(); 2 * spec.max_offset() + 2];
    place(spec, 2, &mut chains, &mut visit);
    Ok(())
}

fn place(
    spec: &ArrangementSpec,
    k: usize,
    chains: &mut Vec<Vec<usize>>,
    visit: &mut impl FnMut(&PlaneTree),
) {
    if k > spec.n() {
        let tree = tree_from_chains(spec.n(), spec.max_offset(), chains);
        if check_frak_t(spec, &tree).is_ok() {
            visit(&tree);
        }
        return;
    }
    for c in 0..chains.len() {
        for at in 0..=chains[c].len() {
            chains[c].insert(at, k);
            place(spec, k + 1, chains, visit);
            chains[c].remove(at);
        }
    }
}

fn tree_from_chains(n: usize, m: usize, chains: &[Vec<usize>]) -> PlaneTree {
    let mut table: Table = vec![vec![None]; n];
    table[0] = chains.iter().map(|c| c.first().copied()).collect();
    for chain in chains {
        for w in chain.windows(2) {
            table[w[0] - 1][0] = Some(w[1]);
        }
    }
    PlaneTree::new(Arity::Broom(m), 1, table).expect("chains form a broom tree")
}

/// Reads off `a_2, .., a_n` by extracting `2, 3, ..` in turn; an extracted node's
/// child takes its slot.
pub fn encode_sequence(spec: &ArrangementSpec, tree: &PlaneTree) -> Result<IshSequence> {
    check_frak_t(spec, tree)?;
    let (n, m) = (spec.n(), spec.max_offset());
    let mut table: Table = tree.child_table().to_vec();
    // parent[v] for v >= 2; entries 0 and 1 are unused.
    let mut parent: Vec<(usize, usize)> = std::iter::repeat_n((0, 0), 2)
        .chain((2..=n).map(|v| tree.position(v).unwrap()))
        .collect();
    let mut entries = Vec::with_capacity(n.saturating_sub(1));
    for k in 2..=n {
        let (p, slot) = parent[k];
        let entry = if p != 1 {
            (0, p)
        } else if 2 * m + 1 - slot > m {
            (1, slot)
        } else {
            (-1, 2 * m + 1 - slot)
        };
        if !alphabet(spec, k).contains(&entry) {
            return Err(Error::BadSequenceEntry {
                k,
                entry: (entry.0, entry.1 as i64),
            });
        }
        entries.push(entry);
        let child = table[k - 1][0];
        table[p - 1][slot] = child;
        if let Some(c) = child {
            parent[c] = (p, slot);
        }
    }
    Ok(IshSequence(entries))
}

/// Inverse of [`encode_sequence`]: inserts `n, n - 1, .., 2` into the bare root.
pub fn decode_sequence(spec: &ArrangementSpec, seq: &IshSequence) -> Result<PlaneTree> {
    require_nested(spec)?;
    let (n, m) = (spec.n(), spec.max_offset());
    if seq.0.len() != n.saturating_sub(1) {
        return Err(Error::Precondition(format!(
            "sequence has {} entries, expected {}",
            seq.0.len(),
            n.saturating_sub(1)
        )));
    }
    let mut table: Table = vec![vec![None]; n];
    table[0] = vec![None; 2 * m + 2];
    for k in (2..=n).rev() {
        let entry = seq.0[k - 2];
        if !alphabet(spec, k).contains(&entry) {
            return Err(Error::BadSequenceEntry {
                k,
                entry: (entry.0, entry.1 as i64),
            });
        }
        let (p, slot) = match entry {
            (0, i) => (i, 0),
            (1, s) => (1, s),
            (_, t) => (1, 2 * m + 1 - t),
        };
        table[k - 1][0] = table[p - 1][slot];
        table[p - 1][slot] = Some(k);
    }
    PlaneTree::new(Arity::Broom(m), 1, table)
        .map_err(|e| Error::Inconsistent(format!("decoded table is not a tree: {e}")))
}

/// Every sequence in the product of alphabets, first entry varying slowest.
pub fn enumerate_sequences(spec: &ArrangementSpec) -> Result<Vec<IshSequence>> {
    require_nested(spec)?;
    let alphabets: Vec<Vec<SequenceEntry>> = (2..=spec.n()).map(|k| alphabet(spec, k)).collect();
    let mut out = vec![Vec::new()];
    for letters in &alphabets {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<SequenceEntry>| {
                letters.iter().map(move |&e| {
                    let mut next = prefix.clone();
                    next.push(e);
                    next
                })
            })
            .collect();
    }
    Ok(out.into_iter().map(IshSequence).collect())
}

fn keep_first(tree: &PlaneTree, v: usize) -> Result<Option<usize>> {
    let slots = tree.children(v);
    if slots[1..].iter().any(Option::is_some) {
        return Err(Error::Inconsistent(format!(
            "node {v} of {tree} has node children past slot 0"
        )));
    }
    Ok(slots[0])
}

/// From `S(0,0,0,0)` to the broom family: 1 becomes the root and the path above
/// it folds into the right half of its slots.
pub fn bijection_f(spec: &ArrangementSpec, tree: &PlaneTree) -> Result<PlaneTree> {
    require_nested(spec)?;
    if classify_tree(spec, tree)? != Some(IshClassification::ZERO) {
        return Err(Error::Precondition(format!("{tree} is not in S(0,0,0,0)")));
    }
    let (n, m) = (spec.n(), tree.m());
    if m != spec.max_offset() {
        return Err(Error::ArityMismatch {
            tree_m: m,
            spec_m: spec.max_offset(),
        });
    }
    let mut path = Vec::new();
    let mut cur = tree.parent(1);
    while let Some(v) = cur {
        path.push(v);
        cur = tree.parent(v);
    }
    path.reverse();

    let mut table: Table = vec![vec![None]; n];
    let mut root_slots = tree.children(1).to_vec();
    match path.last() {
        Some(&top) => root_slots.extend(tree.children(top).iter().rev().map(|&c| {
            if c == Some(1) {
                Some(top)
            } else {
                c
            }
        })),
        None => root_slots.extend(std::iter::repeat_n(None, m + 1)),
    }
    table[0] = root_slots;
    for w in path.windows(2) {
        if keep_first(tree, w[0])? != Some(w[1]) {
            return Err(Error::Inconsistent(format!(
                "path node {} of {tree} is not in slot 0",
                w[1]
            )));
        }
        table[w[1] - 1] = vec![Some(w[0])];
    }
    for v in 2..=n {
        if !path.contains(&v) {
            table[v - 1] = vec![keep_first(tree, v)?];
        }
    }
    PlaneTree::new(Arity::Broom(m), 1, table)
        .map_err(|e| Error::Inconsistent(format!("f produced an invalid tree: {e}")))
}

/// From the broom family back to `S(0,0,0,0)`.
pub fn bijection_g(spec: &ArrangementSpec, tree: &PlaneTree) -> Result<PlaneTree> {
    check_frak_t(spec, tree)?;
    let (n, m) = (spec.n(), spec.max_offset());
    let root_slots = tree.children(1);
    // s[i - 1] is the i-th slot counted from the right.
    let s: Vec<Option<usize>> = root_slots[m + 1..].iter().rev().copied().collect();
    let mut table: Table = vec![Vec::new(); n];
    for v in 2..=n {
        table[v - 1] = vec![tree.children(v)[0]];
    }
    table[0] = root_slots[..=m].to_vec();

    let Some(k) = (0..=m).rev().find(|&i| s[i].is_some()) else {
        return PlaneTree::padded(Arity::Uniform(m), 1, table);
    };
    let sk = s[k].unwrap();
    let mut below = vec![sk];
    while let Some(c) = tree.children(*below.last().unwrap())[0] {
        below.push(c);
    }
    let new_root = *below.last().unwrap();
    for w in below.windows(2) {
        table[w[1] - 1] = vec![Some(w[0])];
    }
    let mut sk_slots = s.clone();
    sk_slots[k] = Some(1);
    table[sk - 1] = sk_slots;
    PlaneTree::padded(Arity::Uniform(m), new_root, table)
        .map_err(|e| Error::Inconsistent(format!("g produced an invalid tree: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ish::classify::enumerate_class;
    use std::collections::HashSet;

    /// Nested Ish, n = 6, with the symmetric first row `{-(j-2), .., j-2}`.
    fn symmetric_six() -> ArrangementSpec {
        let cols = (2..=6i64).map(|j| (-(j - 2)..=j - 2).collect()).collect();
        ArrangementSpec::nested_ish(6, cols).unwrap()
    }

    fn broom_six() -> PlaneTree {
        PlaneTree::from_slots(
            Arity::Broom(4),
            6,
            &[(1, &[0, 3, 5, 0, 0, 0, 0, 6, 0, 2]), (6, &[4])],
        )
        .unwrap()
    }

    fn plain_six() -> PlaneTree {
        PlaneTree::from_slots(
            Arity::Uniform(4),
            6,
            &[(4, &[6]), (6, &[2, 0, 1]), (1, &[0, 3, 5])],
        )
        .unwrap()
    }

    #[test]
    fn six_node_sequence() {
        let spec = symmetric_six();
        let seq = encode_sequence(&spec, &broom_six()).unwrap();
        assert_eq!(seq.0, vec![(-1, 0), (1, 1), (0, 6), (1, 2), (-1, 2)]);
        assert_eq!(decode_sequence(&spec, &seq).unwrap(), broom_six());
    }

    #[test]
    fn six_node_bijection() {
        let spec = symmetric_six();
        assert_eq!(
            classify_tree(&spec, &plain_six()).unwrap(),
            Some(IshClassification::ZERO)
        );
        assert_eq!(bijection_f(&spec, &plain_six()).unwrap(), broom_six());
        assert_eq!(bijection_g(&spec, &broom_six()).unwrap(), plain_six());
    }

    #[test]
    fn closed_formula_values() {
        assert_eq!(
            closed_formula(&ArrangementSpec::ish(3).unwrap()).unwrap(),
            16.into()
        );
        assert_eq!(
            closed_formula(&ArrangementSpec::braid(4).unwrap()).unwrap(),
            24.into()
        );
        assert_eq!(
            closed_formula(&ArrangementSpec::ish(5).unwrap()).unwrap(),
            1296.into()
        );
        assert!(matches!(
            closed_formula(&ArrangementSpec::shi(3).unwrap()),
            Err(Error::NotNestedIsh)
        ));
    }

    #[test]
    fn two_node_family() {
        let spec = ArrangementSpec::braid(2).unwrap();
        let all = enumerate_frak_t(&spec).unwrap();
        assert_eq!(all.len(), 2);
        let seqs = enumerate_sequences(&spec).unwrap();
        assert_eq!(seqs.len(), 2);
        let decoded: HashSet<PlaneTree> = seqs
            .iter()
            .map(|s| decode_sequence(&spec, s).unwrap())
            .collect();
        assert_eq!(decoded.len(), 2);
    }

    #[test]
    fn exhaustive_small_ish() {
        for n in 2..=4 {
            let spec = ArrangementSpec::ish(n).unwrap();
            let family = enumerate_frak_t(&spec).unwrap();
            assert_eq!(BigInt::from(family.len()), closed_formula(&spec).unwrap());
            assert_eq!(
                count_sequences(&spec).unwrap(),
                closed_formula(&spec).unwrap()
            );
            let mut images = HashSet::new();
            for t in &family {
                let seq = encode_sequence(&spec, t).unwrap();
                assert_eq!(&decode_sequence(&spec, &seq).unwrap(), t);
                let back = bijection_g(&spec, t).unwrap();
                assert_eq!(&bijection_f(&spec, &back).unwrap(), t);
                images.insert(back);
            }
            let zero: Vec<PlaneTree> = enumerate_class(&spec, IshClassification::ZERO)
                .unwrap()
                .collect();
            assert_eq!(images.len(), zero.len());
            for t in &zero {
                assert!(images.contains(t));
                assert_eq!(
                    &bijection_g(&spec, &bijection_f(&spec, t).unwrap()).unwrap(),
                    t
                );
            }
        }
    }

    #[test]
    fn rejects_outsiders() {
        let spec = symmetric_six();
        assert!(check_frak_t(&spec, &plain_six()).is_err());
        let bad = IshSequence(vec![(0, 1), (1, 1), (0, 6), (1, 2), (-1, 2)]);
        assert!(matches!(
            decode_sequence(&spec, &bad),
            Err(Error::BadSequenceEntry { k: 2, .. })
        ));
    }
}
