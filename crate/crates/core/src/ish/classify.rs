//! The quadruple `(e_l, l_l, e_u, l_u)` of a tree with nonzero contribution.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::arrangement::ArrangementSpec;
use crate::boxing::check_tree;
use crate::enumerate::{check_guard, enumerate_trees, par_tree_sum, ShapeIter};
use crate::error::{Error, Result};
use crate::fast::{maximal_s_cadet_sequences, FastEvaluator};
use crate::tree::PlaneTree;

/// Lower inefficiency, lower 1-length, upper inefficiency, upper 1-length.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IshClassification {
    pub e_l: usize,
    pub l_l: usize,
    pub e_u: usize,
    pub l_u: usize,
}

impl IshClassification {
    pub const ZERO: Self = Self::new(0, 0, 0, 0);

    pub const fn new(e_l: usize, l_l: usize, e_u: usize, l_u: usize) -> Self {
        Self { e_l, l_l, e_u, l_u }
    }

    /// `(-1)^(l_l + l_u)`.
    pub fn sign(&self) -> i64 {
        if (self.l_l + self.l_u).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

impl fmt::Display for IshClassification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.e_l, self.l_l, self.e_u, self.l_u)
    }
}

/// The maximal cadet sequence through node 1 and the position of 1 in it.
pub fn sequence_through_one(tree: &PlaneTree) -> (Vec<usize>, usize) {
    let mut top = 1;
    while let Some(p) = tree.parent(top).filter(|&p| tree.cadet(p) == Some(top)) {
        top = p;
    }
    let mut seq = vec![top];
    while let Some(c) = tree.cadet(*seq.last().unwrap()) {
        seq.push(c);
    }
    let j = seq.iter().position(|&v| v == 1).unwrap();
    (seq, j)
}

/// Node left siblings `w` of 1 with `lsib(w) ∉ S⁻_{w,1}`, left to right.
pub fn lower_inefficient(spec: &ArrangementSpec, tree: &PlaneTree) -> Vec<usize> {
    let Some((p, slot)) = tree.position(1) else {
        return Vec::new();
    };
    tree.children(p)[..slot]
        .iter()
        .flatten()
        .copied()
        .filter(|&w| !spec.in_minus(w, 1, tree.lsib_unchecked(w)))
        .collect()
}

/// Node children `w` of 1 other than its cadet with `lsib(w) ∉ S⁻_{1,w}`, left to right.
pub fn upper_inefficient(spec: &ArrangementSpec, tree: &PlaneTree) -> Vec<usize> {
    let cadet = tree.cadet(1);
    tree.node_children(1)
        .filter(|&w| Some(w) != cadet && !spec.in_minus(1, w, tree.lsib_unchecked(w)))
        .collect()
}

fn require_almost_transitive(spec: &ArrangementSpec) -> Result<()> {
    if spec.is_almost_transitive() {
        Ok(())
    } else {
        Err(Error::NotAlmostTransitive)
    }
}

fn require_ish_type(spec: &ArrangementSpec) -> Result<()> {
    if spec.is_ish_type() {
        Ok(())
    } else {
        Err(Error::NotIshType)
    }
}

/// `None` when the contribution is zero.
pub fn classify_tree(
    spec: &ArrangementSpec,
    tree: &PlaneTree,
) -> Result<Option<IshClassification>> {
    require_almost_transitive(spec)?;
    check_tree(spec, tree)?;
    let contribution = FastEvaluator::new().contribution(spec, tree);
    classify_known(spec, tree, contribution)
}

fn classify_known(
    spec: &ArrangementSpec,
    tree: &PlaneTree,
    contribution: i8,
) -> Result<Option<IshClassification>> {
    if contribution == 0 {
        return Ok(None);
    }
    let (seq, j) = sequence_through_one(tree);
    let runs = maximal_s_cadet_sequences(spec, tree, &seq)?;
    let mut holding = runs.iter().filter(|r| r.contains(j));
    let (Some(run), None) = (holding.next(), holding.next()) else {
        return Err(Error::Inconsistent(format!(
            "node 1 lies in more than one maximal S-cadet sequence of {tree}"
        )));
    };
    let class = IshClassification {
        e_l: lower_inefficient(spec, tree).len(),
        l_l: j - run.start,
        e_u: upper_inefficient(spec, tree).len(),
        l_u: run.end - j,
    };
    if class.sign() != i64::from(contribution) {
        return Err(Error::Inconsistent(format!(
            "class {class} disagrees with contribution {contribution} of {tree}"
        )));
    }
    Ok(Some(class))
}

/// Trees of `T^(m)(n)` in one class, in enumeration order.
pub fn enumerate_class(
    spec: &ArrangementSpec,
    class: IshClassification,
) -> Result<impl Iterator<Item = PlaneTree> + '_> {
    require_ish_type(spec)?;
    Ok(
        enumerate_trees(spec.n(), spec.max_offset()).filter(move |t| {
            classify_tree(spec, t).expect("Ish-type specs are almost transitive") == Some(class)
        }),
    )
}

/// `|S(0,0,0,0)|`.
pub fn count_s0000(spec: &ArrangementSpec, guard: u64) -> Result<BigInt> {
    require_ish_type(spec)?;
    let (n, m) = (spec.n(), spec.max_offset());
    check_guard(n, m, guard)?;
    Ok(par_tree_sum(n, m, FastEvaluator::new, |ev, t| {
        let c = ev.contribution(spec, t);
        let class = classify_known(spec, t, c).expect("consistent classification");
        i64::from(class == Some(IshClassification::ZERO))
    }))
}

/// Sizes of every inhabited class.
pub fn class_histogram(
    spec: &ArrangementSpec,
    guard: u64,
) -> Result<BTreeMap<IshClassification, u64>> {
    require_ish_type(spec)?;
    let (n, m) = (spec.n(), spec.max_offset());
    check_guard(n, m, guard)?;
    let merge = |mut a: BTreeMap<IshClassification, u64>, b: BTreeMap<IshClassification, u64>| {
        for (k, v) in b {
            *a.entry(k).or_default() += v;
        }
        a
    };
    let hist = ShapeIter::new(n, m)
        .par_bridge()
        .map_init(FastEvaluator::new, |ev, shape| {
            let mut local = BTreeMap::new();
            for t in crate::enumerate::trees_of_shape(&shape) {
                let c = ev.contribution(spec, &t);
                if let Some(class) = classify_known(spec, &t, c).expect("consistent classification")
                {
                    *local.entry(class).or_default() += 1;
                }
            }
            local
        })
        .reduce(BTreeMap::new, merge);
    Ok(hist)
}
