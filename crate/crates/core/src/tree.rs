//! Rooted labeled plane trees.
//!
//! Nodes carry labels `1..=n`. Every node owns a fixed number of ordered child
//! slots, each holding either a node label or a leaf. Two slot layouts exist:
//!
//! * [`Arity::Uniform`]: every node has `m + 1` slots (the family `T^(m)(n)`);
//! * [`Arity::Broom`]: the root has `2m + 2` slots and every other node has one.
//!
//! Text form is a preorder listing, `label(child,child,..)` with `*` for a leaf,
//! e.g. `1(2(*),*)`.

use std::fmt;

use crate::error::{Error, Result};

/// Child-slot layout of a tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Arity {
    Uniform(usize),
    Broom(usize),
}

impl Arity {
    /// The parameter `m` of the layout.
    pub fn m(self) -> usize {
        match self {
            Arity::Uniform(m) | Arity::Broom(m) => m,
        }
    }

    fn slots(self, is_root: bool) -> usize {
        match self {
            Arity::Uniform(m) => m + 1,
            Arity::Broom(m) if is_root => 2 * m + 2,
            Arity::Broom(_) => 1,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PlaneTree {
    arity: Arity,
    root: usize,
    /// `children[v - 1]` is the slot list of node `v`.
    children: Vec<Vec<Option<usize>>>,
    /// `parent[v - 1] = Some((parent, slot))`, `None` for the root.
    parent: Vec<Option<(usize, usize)>>,
}

impl PlaneTree {
    /// Validating constructor. `children[v - 1]` lists the slots of node `v`.
    pub fn new(arity: Arity, root: usize, children: Vec<Vec<Option<usize>>>) -> Result<Self> {
        let n = children.len();
        let bad = |msg: String| Err(Error::MalformedTree(msg));
        if n == 0 {
            return bad("a tree needs at least one node".into());
        }
        if root == 0 || root > n {
            return bad(format!("root {root} is not a label in 1..={n}"));
        }
        let mut parent = vec![None; n];
        for (idx, slots) in children.iter().enumerate() {
            let v = idx + 1;
            let want = arity.slots(v == root);
            if slots.len() != want {
                return bad(format!(
                    "node {v} has {} child slots, expected {want}",
                    slots.len()
                ));
            }
            for (slot, &c) in slots.iter().enumerate() {
                let Some(c) = c else { continue };
                if c == 0 || c > n {
                    return bad(format!("child label {c} of node {v} is out of range"));
                }
                if c == root {
                    return bad(format!("root {root} appears as a child of {v}"));
                }
                if parent[c - 1].is_some() {
                    return bad(format!("label {c} appears twice"));
                }
                parent[c - 1] = Some((v, slot));
            }
        }
        if let Some(orphan) = (1..=n).find(|&v| v != root && parent[v - 1].is_none()) {
            return bad(format!("node {orphan} is unreachable"));
        }
        // With n - 1 parent edges, reaching every node from the root rules out cycles.
        let mut seen = 1;
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            for c in children[v - 1].iter().flatten() {
                seen += 1;
                stack.push(*c);
            }
        }
        if seen != n {
            return bad("child relation contains a cycle".into());
        }
        Ok(Self {
            arity,
            root,
            children,
            parent,
        })
    }

    /// Builds a tree from partial slot lists. Each listed node gets its slots with
    /// `0` meaning a leaf; trailing leaves are added up to the layout's width and
    /// unlisted nodes get all-leaf slots. The root is the only label never listed
    /// as a child.
    pub fn from_slots(arity: Arity, n: usize, lists: &[(usize, &[usize])]) -> Result<Self> {
        let mut is_child = vec![false; n + 1];
        let mut raw: Vec<Vec<Option<usize>>> = vec![Vec::new(); n];
        for &(v, slots) in lists {
            if v == 0 || v > n {
                return Err(Error::MalformedTree(format!("label {v} out of range")));
            }
            raw[v - 1] = slots.iter().map(|&c| (c != 0).then_some(c)).collect();
            for &c in slots.iter().filter(|&&c| c != 0 && c <= n) {
                is_child[c] = true;
            }
        }
        let roots: Vec<usize> = (1..=n).filter(|&v| !is_child[v]).collect();
        let [root] = roots[..] else {
            return Err(Error::MalformedTree(format!(
                "expected one root, found {roots:?}"
            )));
        };
        Self::padded(arity, root, raw)
    }

    /// Like [`PlaneTree::new`] but first pads (or trims trailing leaves of) every
    /// slot list to the layout's width.
    pub fn padded(
        arity: Arity,
        root: usize,
        mut children: Vec<Vec<Option<usize>>>,
    ) -> Result<Self> {
        for (idx, slots) in children.iter_mut().enumerate() {
            let want = arity.slots(idx + 1 == root);
            while slots.len() > want && slots.last() == Some(&None) {
                slots.pop();
            }
            if slots.len() > want {
                return Err(Error::MalformedTree(format!(
                    "node {} has a node child beyond slot {want}",
                    idx + 1
                )));
            }
            slots.resize(want, None);
        }
        Self::new(arity, root, children)
    }

    pub fn n(&self) -> usize {
        self.children.len()
    }

    pub fn arity(&self) -> Arity {
        self.arity
    }

    /// The layout parameter `m`.
    pub fn m(&self) -> usize {
        self.arity.m()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    fn check(&self, v: usize) -> Result<()> {
        if v == 0 || v > self.n() {
            Err(Error::UnknownNode(v))
        } else {
            Ok(())
        }
    }

    /// Slot list of `v`. Panics on an unknown label.
    #[inline]
    pub fn children(&self, v: usize) -> &[Option<usize>] {
        &self.children[v - 1]
    }

    /// All slot lists, indexed by `label - 1`.
    pub fn child_table(&self) -> &[Vec<Option<usize>>] {
        &self.children
    }

    /// Node children of `v`, left to right.
    pub fn node_children(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.children[v - 1].iter().flatten().copied()
    }

    #[inline]
    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v - 1].map(|(p, _)| p)
    }

    /// `(parent, slot)` of a non-root node.
    #[inline]
    pub fn position(&self, v: usize) -> Option<(usize, usize)> {
        self.parent[v - 1]
    }

    /// Number of siblings (nodes and leaves) left of `v`.
    pub fn lsib(&self, v: usize) -> Result<usize> {
        self.check(v)?;
        self.position(v)
            .map(|(_, s)| s)
            .ok_or(Error::RootHasNoParent(v))
    }

    /// Number of siblings (nodes and leaves) right of `v`.
    pub fn rsib(&self, v: usize) -> Result<usize> {
        self.check(v)?;
        let (p, s) = self.position(v).ok_or(Error::RootHasNoParent(v))?;
        Ok(self.children[p - 1].len() - 1 - s)
    }

    /// Slot index of a non-root node, without label checks.
    #[inline]
    pub fn lsib_unchecked(&self, v: usize) -> usize {
        self.parent[v - 1].map_or(0, |(_, s)| s)
    }

    /// Rightmost node child of `v`.
    #[inline]
    pub fn cadet(&self, v: usize) -> Option<usize> {
        self.children[v - 1].iter().rev().find_map(|c| *c)
    }

    /// True when `seq` is nonempty and each entry is the cadet of the previous one.
    pub fn is_cadet_sequence(&self, seq: &[usize]) -> bool {
        !seq.is_empty()
            && seq.iter().all(|&v| v >= 1 && v <= self.n())
            && seq.windows(2).all(|w| self.cadet(w[0]) == Some(w[1]))
    }

    /// Labels in preorder.
    pub fn preorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.n());
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            out.push(v);
            stack.extend(self.children[v - 1].iter().rev().flatten());
        }
        out
    }

    /// The partition of the nodes into maximal cadet sequences, ordered by the
    /// preorder position of their first nodes.
    pub fn maximal_cadet_sequences(&self) -> Vec<Vec<usize>> {
        self.preorder()
            .into_iter()
            .filter(|&v| self.parent(v).and_then(|p| self.cadet(p)) != Some(v))
            .map(|start| {
                let mut seq = vec![start];
                let mut cur = start;
                while let Some(c) = self.cadet(cur) {
                    seq.push(c);
                    cur = c;
                }
                seq
            })
            .collect()
    }

    /// Canonical text form.
    pub fn encode(&self) -> String {
        let mut out = String::new();
        self.write_node(self.root, &mut out);
        out
    }

    fn write_node(&self, v: usize, out: &mut String) {
        use fmt::Write;
        write!(out, "{v}(").unwrap();
        for (idx, c) in self.children[v - 1].iter().enumerate() {
            if idx > 0 {
                out.push(',');
            }
            match c {
                Some(c) => self.write_node(*c, out),
                None => out.push('*'),
            }
        }
        out.push(')');
    }

    /// Parses the canonical text form and infers the layout: uniform when all
    /// nodes have equally many slots, broom when the root has `2m + 2` and every
    /// other node one.
    pub fn decode(text: &str) -> Result<Self> {
        let (root, children) = parse_text(text)?;
        let width = |v: usize| children.get(v - 1).map_or(0, Vec::len);
        let root_w = width(root);
        let others: Vec<usize> = (1..=children.len())
            .filter(|&v| v != root)
            .map(width)
            .collect();
        let arity = if root_w >= 1 && others.iter().all(|&w| w == root_w) {
            Arity::Uniform(root_w - 1)
        } else if root_w >= 2 && root_w % 2 == 0 && others.iter().all(|&w| w == 1) {
            Arity::Broom(root_w / 2 - 1)
        } else {
            return Err(Error::MalformedTree(
                "child slot counts match neither a uniform nor a broom layout".into(),
            ));
        };
        Self::new(arity, root, children)
    }

    /// Parses the canonical text form against a known layout.
    pub fn decode_with_arity(text: &str, arity: Arity) -> Result<Self> {
        let (root, children) = parse_text(text)?;
        Self::new(arity, root, children)
    }
}

type ParsedTree = (usize, Vec<Vec<Option<usize>>>);

fn parse_text(text: &str) -> Result<ParsedTree> {
    let bytes: Vec<u8> = text.bytes().filter(|b| !b.is_ascii_whitespace()).collect();
    let mut pos = 0;
    let mut lists: Vec<(usize, Vec<Option<usize>>)> = Vec::new();
    let root = parse_node(&bytes, &mut pos, &mut lists)?;
    if pos != bytes.len() {
        return Err(Error::MalformedTree(format!(
            "trailing input at byte {pos}"
        )));
    }
    let n = lists.len();
    let mut children = vec![None; n];
    for (v, slots) in lists {
        if v == 0 || v > n {
            return Err(Error::MalformedTree(format!(
                "label {v} out of range 1..={n}"
            )));
        }
        if children[v - 1].replace(slots).is_some() {
            return Err(Error::MalformedTree(format!("label {v} repeated")));
        }
    }
    Ok((root, children.into_iter().map(Option::unwrap).collect()))
}

fn parse_node(
    b: &[u8],
    pos: &mut usize,
    lists: &mut Vec<(usize, Vec<Option<usize>>)>,
) -> Result<usize> {
    let err = |msg: &str, at: usize| Error::MalformedTree(format!("{msg} at byte {at}"));
    let start = *pos;
    while *pos < b.len() && b[*pos].is_ascii_digit() {
        *pos += 1;
    }
    if start == *pos {
        return Err(err("expected a label", start));
    }
    let label: usize = std::str::from_utf8(&b[start..*pos])
        .unwrap()
        .parse()
        .map_err(|_| err("label too large", start))?;
    if b.get(*pos) != Some(&b'(') {
        return Err(err("expected '('", *pos));
    }
    *pos += 1;
    let mut slots = Vec::new();
    loop {
        if b.get(*pos) == Some(&b'*') {
            *pos += 1;
            slots.push(None);
        } else {
            slots.push(Some(parse_node(b, pos, lists)?));
        }
        match b.get(*pos) {
            Some(b',') => *pos += 1,
            Some(b')') => {
                *pos += 1;
                break;
            }
            _ => return Err(err("expected ',' or ')'", *pos)),
        }
    }
    lists.push((label, slots));
    Ok(label)
}

impl fmt::Display for PlaneTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encode())
    }
}

impl fmt::Debug for PlaneTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PlaneTree({:?}, {})", self.arity, self.encode())
    }
}
