//! Per-tree contributions without enumerating boxings.
//!
//! Along each maximal cadet sequence `(v_0, .., v_{k-1})` (0-based positions):
//!
//! * `f(i)` is the first `j > i` whose partial lsib sum from `i` lands in
//!   `S⁻_{v_i, v_j}`, or `k` when there is none;
//! * `g(i) = min_{i <= l < f(i)} (f(l) - 1)` is the last position of the longest
//!   S-cadet sequence starting at `i`.
//!
//! The runs `[i, g(i)]` with `g(i) > g(i - 1)` are the maximal S-cadet sequences.
//! Overlapping runs chain into S-connected components, and each component's
//! contribution comes from the greedy walk over the *reaches* relation.

use num_bigint::BigInt;

use crate::arrangement::ArrangementSpec;
use crate::boxing::check_tree;
use crate::enumerate::{check_guard, par_tree_sum};
use crate::error::{Error, Result};
use crate::tree::PlaneTree;

/// Inclusive range of positions along a cadet sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Run {
    pub start: usize,
    pub end: usize,
}

impl Run {
    pub fn new(start: usize, end: usize) -> Self {
        Self { start, end }
    }

    pub fn len(&self) -> usize {
        self.end + 1 - self.start
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, p: usize) -> bool {
        self.start <= p && p <= self.end
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionTable {
    pub f: Vec<usize>,
    pub g: Vec<usize>,
}

fn fill_f(spec: &ArrangementSpec, chain: &[usize], lsib: &[usize], f: &mut Vec<usize>) {
    let k = chain.len();
    let m = spec.max_offset();
    f.clear();
    for i in 0..k {
        let mut sum = 0;
        let mut hit = k;
        for j in (i + 1)..k {
            sum += lsib[j];
            if sum > m {
                break;
            }
            if spec.in_minus(chain[i], chain[j], sum) {
                hit = j;
                break;
            }
        }
        f.push(hit);
    }
}

fn fill_g(f: &[usize], g: &mut Vec<usize>) {
    g.clear();
    for i in 0..f.len() {
        g.push((i..f[i]).map(|l| f[l] - 1).min().expect("f(i) > i"));
    }
}

fn fill_runs(g: &[usize], runs: &mut Vec<Run>) {
    runs.clear();
    for (i, &end) in g.iter().enumerate() {
        if i == 0 || end > g[i - 1] {
            runs.push(Run::new(i, end));
        }
    }
}

fn checked_chain(spec: &ArrangementSpec, tree: &PlaneTree, chain: &[usize]) -> Result<Vec<usize>> {
    check_tree(spec, tree)?;
    if !tree.is_cadet_sequence(chain) {
        return Err(Error::NotCadetSequence(chain.to_vec()));
    }
    Ok(chain.iter().map(|&v| tree.lsib_unchecked(v)).collect())
}

pub fn longest_extension_table(
    spec: &ArrangementSpec,
    tree: &PlaneTree,
    chain: &[usize],
) -> Result<ExtensionTable> {
    let lsib = checked_chain(spec, tree, chain)?;
    let (mut f, mut g) = (Vec::new(), Vec::new());
    fill_f(spec, chain, &lsib, &mut f);
    fill_g(&f, &mut g);
    Ok(ExtensionTable { f, g })
}

/// Maximal S-cadet sequences of a cadet sequence, ordered by last position.
pub fn maximal_s_cadet_sequences(
    spec: &ArrangementSpec,
    tree: &PlaneTree,
    chain: &[usize],
) -> Result<Vec<Run>> {
    let table = longest_extension_table(spec, tree, chain)?;
    let mut runs = Vec::new();
    fill_runs(&table.g, &mut runs);
    Ok(runs)
}

/// Splits ordered runs into maximal overlapping groups, as index ranges into `runs`.
fn component_bounds(runs: &[Run]) -> impl Iterator<Item = (usize, usize)> + '_ {
    let mut first = 0;
    (0..runs.len()).filter_map(move |r| {
        if r + 1 == runs.len() || runs[r + 1].start > runs[r].end {
            let out = (first, r + 1);
            first = r + 1;
            Some(out)
        } else {
            None
        }
    })
}

pub fn s_connected_components(
    spec: &ArrangementSpec,
    tree: &PlaneTree,
    chain: &[usize],
) -> Result<Vec<ConnectedContext>> {
    let runs = maximal_s_cadet_sequences(spec, tree, chain)?;
    Ok(contexts_of(chain, &runs))
}

fn contexts_of(chain: &[usize], runs: &[Run]) -> Vec<ConnectedContext> {
    component_bounds(runs)
        .map(|(a, b)| {
            let base = runs[a].start;
            ConnectedContext {
                nodes: chain[base..=runs[b - 1].end].to_vec(),
                boxes: runs[a..b]
                    .iter()
                    .map(|r| Run::new(r.start - base, r.end - base))
                    .collect(),
            }
        })
        .collect()
}

// ---- the chain walk over one component ------------------------------------
//
// `runs` holds X_1..X_{k'} for one component. Box index 0 is the sentinel X_0.
// A target's parent is `None` when it is the sentinel.

/// Parent of the last node of `X_j \ X_{j+1}`.
fn target_parent(runs: &[Run], j: usize) -> Option<usize> {
    let here = runs[j - 1];
    let p = if j == runs.len() {
        here.end
    } else {
        here.end.min(runs[j].start - 1)
    };
    (p > runs[0].start).then(|| p - 1)
}

fn box_holds(runs: &[Run], i: usize, parent: Option<usize>) -> bool {
    match (i, parent) {
        (0, parent) => parent.is_none(),
        (_, None) => false,
        (i, Some(q)) => runs[i - 1].contains(q),
    }
}

/// Runs the greedy walk; `walk` ends up holding `i_0 = 0, i_1, ..`.
fn walk_chain(runs: &[Run], walk: &mut Vec<usize>) -> bool {
    let last = runs.len();
    walk.clear();
    walk.push(0);
    loop {
        let cur = *walk.last().unwrap();
        if cur == last {
            return true;
        }
        let earlier = &walk[..walk.len() - 1];
        let next = ((cur + 1)..=last).find(|&r| {
            let parent = target_parent(runs, r);
            box_holds(runs, cur, parent) && !earlier.iter().any(|&e| box_holds(runs, e, parent))
        });
        match next {
            Some(r) => walk.push(r),
            None => return false,
        }
    }
}

fn component_contribution(runs: &[Run], walk: &mut Vec<usize>) -> i8 {
    if !walk_chain(runs, walk) {
        return 0;
    }
    let k = runs[runs.len() - 1].end + 1 - runs[0].start;
    let t = walk.len() - 1;
    if (k - t).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// An S-connected cadet sequence with its maximal S-cadet sequences.
/// Box positions are relative to `nodes`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectedContext {
    nodes: Vec<usize>,
    boxes: Vec<Run>,
}

impl ConnectedContext {
    /// Validates: boxes cover `nodes`, starts and ends strictly increase, and
    /// consecutive boxes overlap.
    pub fn new(nodes: Vec<usize>, boxes: Vec<Run>) -> Result<Self> {
        let bad = |msg: &str| Err(Error::Precondition(format!("connected context: {msg}")));
        if nodes.is_empty() || boxes.is_empty() {
            return bad("needs at least one node and one box");
        }
        if boxes.iter().any(|b| b.start > b.end) {
            return bad("box with start after end");
        }
        if boxes[0].start != 0 || boxes[boxes.len() - 1].end + 1 != nodes.len() {
            return bad("boxes must cover the node sequence");
        }
        for w in boxes.windows(2) {
            if w[1].start <= w[0].start || w[1].end <= w[0].end {
                return bad("box starts and ends must strictly increase");
            }
            if w[1].start > w[0].end {
                return bad("consecutive boxes must overlap");
            }
        }
        Ok(Self { nodes, boxes })
    }

    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn boxes(&self) -> &[Run] {
        &self.boxes
    }

    /// Number of maximal S-cadet sequences `k'`.
    pub fn box_count(&self) -> usize {
        self.boxes.len()
    }

    /// Labels of box `r` (1-based).
    pub fn box_nodes(&self, r: usize) -> &[usize] {
        let b = self.boxes[r - 1];
        &self.nodes[b.start..=b.end]
    }

    /// Whether `X_i` reaches `X_j`, for `0 <= i < j <= k'`.
    pub fn reaches(&self, i: usize, j: usize) -> Result<bool> {
        if i >= j || j > self.boxes.len() {
            return Err(Error::Precondition(format!(
                "reaches needs 0 <= i < j <= {}, got ({i}, {j})",
                self.boxes.len()
            )));
        }
        Ok(box_holds(&self.boxes, i, target_parent(&self.boxes, j)))
    }

    /// The walk so far and whether it reached the last box. On failure the walk
    /// ends at the `i_j` that has no successor.
    pub fn walk(&self) -> (Vec<usize>, bool) {
        let mut walk = Vec::new();
        let done = walk_chain(&self.boxes, &mut walk);
        (walk, done)
    }

    /// The walk `i_0, .., i_t`, or `None` when it fails.
    pub fn chain(&self) -> Option<Vec<usize>> {
        let mut walk = Vec::new();
        walk_chain(&self.boxes, &mut walk).then_some(walk)
    }

    pub fn contribution(&self) -> i8 {
        component_contribution(&self.boxes, &mut Vec::new())
    }
}

/// Reusable buffers for [`FastEvaluator::contribution`].
#[derive(Default, Debug)]
pub struct FastEvaluator {
    chain: Vec<usize>,
    lsib: Vec<usize>,
    f: Vec<usize>,
    g: Vec<usize>,
    runs: Vec<Run>,
    walk: Vec<usize>,
}

impl FastEvaluator {
    pub fn new() -> Self {
        Self::default()
    }

    /// Contribution of a tree already known to match the spec.
    pub fn contribution(&mut self, spec: &ArrangementSpec, tree: &PlaneTree) -> i8 {
        let mut total = 1;
        for v in 1..=tree.n() {
            if tree.parent(v).and_then(|p| tree.cadet(p)) == Some(v) {
                continue;
            }
            self.chain.clear();
            self.lsib.clear();
            let mut cur = Some(v);
            while let Some(c) = cur {
                self.chain.push(c);
                self.lsib.push(tree.lsib_unchecked(c));
                cur = tree.cadet(c);
            }
            if self.chain.len() == 1 {
                continue;
            }
            fill_f(spec, &self.chain, &self.lsib, &mut self.f);
            fill_g(&self.f, &mut self.g);
            fill_runs(&self.g, &mut self.runs);
            let mut first = 0;
            for r in 0..self.runs.len() {
                if r + 1 == self.runs.len() || self.runs[r + 1].start > self.runs[r].end {
                    total *= component_contribution(&self.runs[first..=r], &mut self.walk);
                    if total == 0 {
                        return 0;
                    }
                    first = r + 1;
                }
            }
        }
        total
    }
}

pub fn contribution_fast(spec: &ArrangementSpec, tree: &PlaneTree) -> Result<i8> {
    check_tree(spec, tree)?;
    Ok(FastEvaluator::new().contribution(spec, tree))
}

/// Sum of fast contributions over `T^(m)(n)`.
pub fn bernardi_sum_fast(spec: &ArrangementSpec, guard: u64) -> Result<BigInt> {
    let (n, m) = (spec.n(), spec.max_offset());
    check_guard(n, m, guard)?;
    Ok(par_tree_sum(n, m, FastEvaluator::new, |ev, t| {
        i64::from(ev.contribution(spec, t))
    }))
}

/// Everything the algorithm computes for one maximal cadet sequence.
#[derive(Clone, Debug)]
pub struct SequenceAnalysis {
    pub nodes: Vec<usize>,
    pub table: ExtensionTable,
    pub runs: Vec<Run>,
    pub components: Vec<ComponentAnalysis>,
}

#[derive(Clone, Debug)]
pub struct ComponentAnalysis {
    pub context: ConnectedContext,
    /// Pairs `(i, j)` with `X_i` reaching `X_j`, sentinel included.
    pub reaches: Vec<(usize, usize)>,
    pub chain: Option<Vec<usize>>,
    pub contribution: i8,
}

#[derive(Clone, Debug)]
pub struct TreeAnalysis {
    pub sequences: Vec<SequenceAnalysis>,
    pub contribution: i8,
}

pub fn analyze(spec: &ArrangementSpec, tree: &PlaneTree) -> Result<TreeAnalysis> {
    check_tree(spec, tree)?;
    let mut sequences = Vec::new();
    let mut contribution = 1;
    for nodes in tree.maximal_cadet_sequences() {
        let table = longest_extension_table(spec, tree, &nodes)?;
        let mut runs = Vec::new();
        fill_runs(&table.g, &mut runs);
        let components: Vec<ComponentAnalysis> = contexts_of(&nodes, &runs)
            .into_iter()
            .map(|context| {
                let k = context.box_count();
                let reaches = (0..k)
                    .flat_map(|i| ((i + 1)..=k).map(move |j| (i, j)))
                    .filter(|&(i, j)| context.reaches(i, j).unwrap())
                    .collect();
                ComponentAnalysis {
                    chain: context.chain(),
                    contribution: context.contribution(),
                    reaches,
                    context,
                }
            })
            .collect();
        contribution *= components.iter().map(|c| c.contribution).product::<i8>();
        sequences.push(SequenceAnalysis {
            nodes,
            table,
            runs,
            components,
        });
    }
    Ok(TreeAnalysis {
        sequences,
        contribution,
    })
}
