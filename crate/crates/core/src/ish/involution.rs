//! Tree surgeries that trade 1-length for inefficiency.
//!
//! All maps rebuild a fresh child table and pad every node back to `m + 1`
//! slots. Notation: `(v_1, .., v_t)` is the maximal cadet sequence through
//! `1 = v_j`.

use crate::arrangement::ArrangementSpec;
use crate::error::{Error, Result};
use crate::tree::{Arity, PlaneTree};

use super::classify::{
    classify_tree, lower_inefficient, sequence_through_one, upper_inefficient, IshClassification,
};

type Table = Vec<Vec<Option<usize>>>;

fn classified(spec: &ArrangementSpec, tree: &PlaneTree) -> Result<IshClassification> {
    if !spec.is_ish_type() {
        return Err(Error::NotIshType);
    }
    classify_tree(spec, tree)?
        .ok_or_else(|| Error::Precondition(format!("{tree} has zero contribution")))
}

fn rebuild(tree: &PlaneTree, root: usize, table: Table) -> Result<PlaneTree> {
    PlaneTree::padded(Arity::Uniform(tree.m()), root, table)
        .map_err(|e| Error::Inconsistent(format!("surgery on {tree} failed: {e}")))
}

fn only_first_child(tree: &PlaneTree, v: usize) -> Result<Option<usize>> {
    let slots = tree.children(v);
    if slots[1..].iter().any(Option::is_some) {
        return Err(Error::Inconsistent(format!(
            "node {v} of {tree} has node children past slot 0"
        )));
    }
    Ok(slots[0])
}

/// Moves `v_{j-1}` out of the box holding 1 and makes it a lower inefficient node.
pub fn phi_l(spec: &ArrangementSpec, tree: &PlaneTree) -> Result<PlaneTree> {
    let class = classified(spec, tree)?;
    if class.l_l == 0 {
        return Err(Error::Precondition(
            "phi_l needs a nonzero lower 1-length".into(),
        ));
    }
    let (seq, j) = sequence_through_one(tree);
    let (p, q) = (seq[j - 2], seq[j - 1]);
    let q_slot = tree.lsib_unchecked(q);
    let one_slot = tree.lsib_unchecked(1);
    if q_slot == 0 {
        return Err(Error::Inconsistent(format!(
            "v_(j-1) = {q} sits in slot 0 of {tree}"
        )));
    }
    let p_old = tree.children(p);
    let q_old = tree.children(q);

    let mut table: Table = tree.child_table().to_vec();
    let mut new_p: Vec<Option<usize>> = q_old[..one_slot].to_vec();
    new_p.push(Some(q));
    new_p.extend_from_slice(&p_old[1..q_slot]);
    new_p.push(Some(1));
    table[p - 1] = new_p;
    table[q - 1] = vec![p_old[0]];
    rebuild(tree, tree.root(), table)
}

/// Inverse of [`phi_l`] that picks the `(e + 1)`-th lower inefficient node from the left.
pub fn psi_l(spec: &ArrangementSpec, tree: &PlaneTree, e: usize) -> Result<PlaneTree> {
    classified(spec, tree)?;
    let inefficient = lower_inefficient(spec, tree);
    let Some(&w) = inefficient.get(e) else {
        return Err(Error::Precondition(format!(
            "psi_l^{e} needs more than {e} lower inefficient nodes, found {}",
            inefficient.len()
        )));
    };
    let (r, one_slot) = tree.position(1).expect("1 has left siblings");
    let a = tree.lsib_unchecked(w);
    let c = only_first_child(tree, w)?;
    let r_old = tree.children(r);

    let mut table: Table = tree.child_table().to_vec();
    let mut new_r = vec![c];
    new_r.extend_from_slice(&r_old[a + 1..one_slot]);
    new_r.push(Some(w));
    let mut new_w = r_old[..a].to_vec();
    new_w.push(Some(1));
    table[r - 1] = new_r;
    table[w - 1] = new_w;
    rebuild(tree, tree.root(), table)
}

/// Moves `v_{j+1}` out of the box holding 1 and makes it an upper inefficient node.
pub fn phi_u(spec: &ArrangementSpec, tree: &PlaneTree) -> Result<PlaneTree> {
    let class = classified(spec, tree)?;
    if class.l_u == 0 {
        return Err(Error::Precondition(
            "phi_u needs a nonzero upper 1-length".into(),
        ));
    }
    let (seq, j) = sequence_through_one(tree);
    let (a_node, b_node) = (seq[j + 1], seq[j + 2]);
    let a = tree.lsib_unchecked(a_node);
    let b = tree.lsib_unchecked(b_node);
    if b == 0 {
        return Err(Error::Inconsistent(format!(
            "v_(j+2) = {b_node} sits in slot 0 of {tree}"
        )));
    }
    let s = &tree.children(a_node)[..b];

    let mut table: Table = tree.child_table().to_vec();
    let mut new_one = tree.children(1)[..=a].to_vec();
    new_one.extend_from_slice(&s[1..]);
    new_one.push(Some(b_node));
    table[0] = new_one;
    table[a_node - 1] = vec![s[0]];
    rebuild(tree, tree.root(), table)
}

/// Inverse of [`phi_u`] that picks the `(e + 1)`-th upper inefficient node from the left.
pub fn psi_u(spec: &ArrangementSpec, tree: &PlaneTree, e: usize) -> Result<PlaneTree> {
    classified(spec, tree)?;
    let inefficient = upper_inefficient(spec, tree);
    let Some(&w) = inefficient.get(e) else {
        return Err(Error::Precondition(format!(
            "psi_u^{e} needs more than {e} upper inefficient nodes, found {}",
            inefficient.len()
        )));
    };
    let v = tree
        .cadet(1)
        .expect("1 has an inefficient child, hence a cadet");
    let (lw, lv) = (tree.lsib_unchecked(w), tree.lsib_unchecked(v));
    let c = only_first_child(tree, w)?;
    let one_old = tree.children(1);

    let mut table: Table = tree.child_table().to_vec();
    let mut new_w = vec![c];
    new_w.extend_from_slice(&one_old[lw + 1..lv]);
    new_w.push(Some(v));
    table[w - 1] = new_w;
    table[0] = one_old[..=lw].to_vec();
    rebuild(tree, tree.root(), table)
}

/// `phi_l` when there is no lower inefficiency, `psi_l^0` otherwise.
pub fn omega_l(spec: &ArrangementSpec, tree: &PlaneTree) -> Result<PlaneTree> {
    let class = classified(spec, tree)?;
    match class {
        IshClassification { e_l: 0, l_l: 0, .. } => Err(Error::Precondition(
            "omega_l needs e_l + l_l to be nonzero".into(),
        )),
        IshClassification { e_l: 0, .. } => phi_l(spec, tree),
        _ => psi_l(spec, tree, 0),
    }
}

/// `phi_u` when there is no upper inefficiency, `psi_u^0` otherwise, on trees with `e_l = l_l = 0`.
pub fn omega_u(spec: &ArrangementSpec, tree: &PlaneTree) -> Result<PlaneTree> {
    let class = classified(spec, tree)?;
    match class {
        IshClassification { e_l, l_l, .. } if e_l + l_l != 0 => {
            Err(Error::Precondition("omega_u needs e_l = l_l = 0".into()))
        }
        IshClassification { e_u: 0, l_u: 0, .. } => Err(Error::Precondition(
            "omega_u needs e_u + l_u to be nonzero".into(),
        )),
        IshClassification { e_u: 0, .. } => phi_u(spec, tree),
        _ => psi_u(spec, tree, 0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::enumerate_trees;

    fn ish6_pair() -> (PlaneTree, PlaneTree) {
        let left = PlaneTree::from_slots(
            Arity::Uniform(5),
            6,
            &[(6, &[0, 4]), (4, &[5, 3]), (3, &[0, 0, 2, 1])],
        )
        .unwrap();
        let right = PlaneTree::from_slots(
            Arity::Uniform(5),
            6,
            &[(6, &[0, 4]), (4, &[0, 0, 2, 3, 1]), (3, &[5])],
        )
        .unwrap();
        (left, right)
    }

    #[test]
    fn lower_pair_round_trip() {
        let spec = ArrangementSpec::ish(6).unwrap();
        let (left, right) = ish6_pair();
        assert_eq!(
            classify_tree(&spec, &left).unwrap(),
            Some(IshClassification::new(1, 2, 0, 0))
        );
        assert_eq!(
            classify_tree(&spec, &right).unwrap(),
            Some(IshClassification::new(2, 1, 0, 0))
        );
        assert_eq!(phi_l(&spec, &left).unwrap(), right);
        assert_eq!(psi_l(&spec, &right, 1).unwrap(), left);
    }

    /// Nested Ish with S_{1,j} = {0} for j < 5 and {-5, 0} for j = 5, 6.
    fn upper_spec() -> ArrangementSpec {
        let cols = vec![vec![0], vec![0], vec![0], vec![-5, 0], vec![-5, 0]];
        ArrangementSpec::nested_ish(6, cols).unwrap()
    }

    #[test]
    fn upper_pair() {
        let spec = upper_spec();
        let left =
            PlaneTree::from_slots(Arity::Uniform(5), 6, &[(1, &[3, 2, 0, 6]), (6, &[4, 0, 5])])
                .unwrap();
        let right =
            PlaneTree::from_slots(Arity::Uniform(5), 6, &[(1, &[3, 2, 0, 6, 0, 5]), (6, &[4])])
                .unwrap();
        assert_eq!(
            classify_tree(&spec, &left).unwrap(),
            Some(IshClassification::new(0, 0, 1, 1))
        );
        assert_eq!(
            classify_tree(&spec, &right).unwrap(),
            Some(IshClassification::new(0, 0, 2, 0))
        );
        assert_eq!(phi_u(&spec, &left).unwrap(), right);
        assert_eq!(psi_u(&spec, &right, 1).unwrap(), left);
    }

    #[test]
    fn preconditions() {
        let spec = ArrangementSpec::ish(6).unwrap();
        let (left, right) = ish6_pair();
        assert!(matches!(phi_u(&spec, &left), Err(Error::Precondition(_))));
        assert!(matches!(
            psi_l(&spec, &right, 2),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(omega_u(&spec, &left), Err(Error::Precondition(_))));
        let shi = ArrangementSpec::shi(6).unwrap();
        assert!(matches!(phi_l(&shi, &left), Err(Error::NotIshType)));
    }

    #[test]
    fn round_trips_ish_three_and_four() {
        for n in 2..=4 {
            let spec = ArrangementSpec::ish(n).unwrap();
            for t in enumerate_trees(n, spec.max_offset()) {
                let Some(class) = classify_tree(&spec, &t).unwrap() else {
                    continue;
                };
                if class.l_l > 0 {
                    let out = phi_l(&spec, &t).unwrap();
                    let c = classify_tree(&spec, &out).unwrap().unwrap();
                    assert_eq!((c.l_l, c.e_u, c.l_u), (class.l_l - 1, class.e_u, class.l_u));
                    assert!(c.e_l > class.e_l);
                    assert_eq!(psi_l(&spec, &out, class.e_l).unwrap(), t);
                }
                for i in 0..class.e_l {
                    let out = psi_l(&spec, &t, i).unwrap();
                    assert_eq!(phi_l(&spec, &out).unwrap(), t);
                }
                if class.e_l + class.l_l > 0 {
                    assert_eq!(omega_l(&spec, &omega_l(&spec, &t).unwrap()).unwrap(), t);
                }
            }
        }
    }
}
