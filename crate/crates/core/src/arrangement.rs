//! Deformations of the braid arrangement.
//!
//! An arrangement in dimension `n` is the collection of hyperplanes
//! `x_i - x_j = s` for `1 <= i < j <= n` and `s` ranging over a finite set of
//! integers `S_{i,j}`. All labels are 1-based.
//!
//! For every ordered pair of distinct labels the derived *S-minus* set is
//!
//! * `S⁻_{i,j} = { s >= 0 : -s ∈ S_{i,j} }` when `i < j`,
//! * `S⁻_{j,i} = {0} ∪ { s > 0 : s ∈ S_{i,j} }` when `i < j`.
//!
//! These sets decide which cadet sequences are admissible boxes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The offset sets of one arrangement, plus the derived S-minus table and `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrangementSpec {
    n: usize,
    /// Nonempty offset sets keyed by `(i, j)` with `i < j`; values sorted and deduplicated.
    offsets: BTreeMap<(usize, usize), Vec<i64>>,
    m: usize,
    /// Row-major `n x n` table of S-minus sets (diagonal unused).
    minus: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecDocument {
    n: usize,
    #[serde(default)]
    hyperplanes: Vec<HyperplaneEntry>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HyperplaneEntry {
    i: i64,
    j: i64,
    s: Vec<i64>,
}

impl ArrangementSpec {
    /// Builds a spec from `(i, j, offsets)` triples. Missing pairs carry no hyperplanes.
    pub fn new<I, S>(n: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, i64, S)>,
        S: IntoIterator<Item = i64>,
    {
        if n == 0 {
            return Err(Error::MalformedSpec(
                "dimension n must be at least 1".into(),
            ));
        }
        let mut offsets = BTreeMap::new();
        for (i, j, s) in entries {
            if i < 1 || j > n as i64 || i >= j {
                return Err(Error::PairOutOfRange { i, j, n });
            }
            let key = (i as usize, j as usize);
            if offsets.contains_key(&key) {
                return Err(Error::DuplicatePair { i: key.0, j: key.1 });
            }
            let mut set: Vec<i64> = s.into_iter().collect();
            set.sort_unstable();
            set.dedup();
            offsets.insert(key, set);
        }
        Ok(Self::from_offsets(n, offsets))
    }

    fn from_offsets(n: usize, mut offsets: BTreeMap<(usize, usize), Vec<i64>>) -> Self {
        offsets.retain(|_, set| !set.is_empty());
        let m = offsets
            .values()
            .flatten()
            .map(|s| s.unsigned_abs() as usize)
            .max()
            .unwrap_or(0);

        let mut minus = vec![Vec::new(); n * n];
        for i in 1..=n {
            for j in (i + 1)..=n {
                let set = offsets.get(&(i, j)).map(Vec::as_slice).unwrap_or(&[]);
                let lower: Vec<usize> = set
                    .iter()
                    .rev()
                    .filter(|&&s| s <= 0)
                    .map(|&s| (-s) as usize)
                    .collect();
                let mut upper = vec![0usize];
                upper.extend(set.iter().filter(|&&s| s > 0).map(|&s| s as usize));
                minus[(i - 1) * n + (j - 1)] = lower;
                minus[(j - 1) * n + (i - 1)] = upper;
            }
        }
        Self {
            n,
            offsets,
            m,
            minus,
        }
    }

    /// Parses the JSON spec document `{"n": .., "hyperplanes": [{"i","j","s"}, ..]}`.
    pub fn parse(text: &str) -> Result<Self> {
        let doc: SpecDocument =
            serde_json::from_str(text).map_err(|e| Error::MalformedSpec(e.to_string()))?;
        Self::new(doc.n, doc.hyperplanes.into_iter().map(|h| (h.i, h.j, h.s)))
    }

    /// Serializes back into the JSON spec document format (nonempty pairs only).
    pub fn to_json(&self) -> String {
        let doc = SpecDocument {
            n: self.n,
            hyperplanes: self
                .offsets
                .iter()
                .map(|(&(i, j), s)| HyperplaneEntry {
                    i: i as i64,
                    j: j as i64,
                    s: s.clone(),
                })
                .collect(),
        };
        serde_json::to_string(&doc).expect("spec document always serializes")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `m = max |s|` over all offsets, 0 for the empty arrangement.
    pub fn max_offset(&self) -> usize {
        self.m
    }

    /// The offset set `S_{i,j}` for `i < j` (empty when the pair carries no hyperplane).
    pub fn offsets(&self, i: usize, j: usize) -> &[i64] {
        self.offsets.get(&(i, j)).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Iterates the nonempty pairs with their offsets.
    pub fn hyperplanes(&self) -> impl Iterator<Item = ((usize, usize), &[i64])> {
        self.offsets.iter().map(|(&k, v)| (k, v.as_slice()))
    }

    pub fn hyperplane_count(&self) -> usize {
        self.offsets.values().map(Vec::len).sum()
    }

    /// `S⁻_{a,b}` as a sorted slice, with label validation.
    pub fn s_minus(&self, a: usize, b: usize) -> Result<&[usize]> {
        for label in [a, b] {
            if label == 0 || label > self.n {
                return Err(Error::LabelOutOfRange { label, n: self.n });
            }
        }
        if a == b {
            return Err(Error::SameLabel(a));
        }
        Ok(self.minus_unchecked(a, b))
    }

    #[inline]
    pub(crate) fn minus_unchecked(&self, a: usize, b: usize) -> &[usize] {
        &self.minus[(a - 1) * self.n + (b - 1)]
    }

    /// Membership test `value ∈ S⁻_{a,b}` by binary search. Labels must be valid and distinct.
    #[inline]
    pub fn in_minus(&self, a: usize, b: usize, value: usize) -> bool {
        value <= self.m && self.minus_unchecked(a, b).binary_search(&value).is_ok()
    }

    /// Transitivity: for distinct `i, j, k`, `s ∉ S⁻_{i,j}` and `t ∉ S⁻_{j,k}` force
    /// `s + t ∉ S⁻_{i,k}`.
    ///
    /// Only `s, t ∈ [0, m]` are scanned. Every S-minus element is at most `m`, so a
    /// violating pair needs `s + t <= m`, which already confines both to `[0, m]`.
    pub fn is_transitive(&self) -> bool {
        self.transitivity_holds(false)
    }

    /// Transitivity restricted to triples with `1 ∉ {i, k}`.
    pub fn is_almost_transitive(&self) -> bool {
        self.transitivity_holds(true)
    }

    fn transitivity_holds(&self, exempt_first: bool) -> bool {
        let n = self.n;
        for i in 1..=n {
            for k in 1..=n {
                if i == k || (exempt_first && (i == 1 || k == 1)) {
                    continue;
                }
                for j in 1..=n {
                    if j == i || j == k {
                        continue;
                    }
                    for s in 0..=self.m {
                        if self.in_minus(i, j, s) {
                            continue;
                        }
                        for t in 0..=(self.m - s) {
                            if !self.in_minus(j, k, t) && self.in_minus(i, k, s + t) {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        true
    }

    /// `0 ∈ S_{i,j}` for every pair and `S_{i,j} = {0}` off the first row.
    pub fn is_ish_type(&self) -> bool {
        (2..=self.n).all(|j| self.offsets(1, j).binary_search(&0).is_ok())
            && (2..=self.n).all(|i| ((i + 1)..=self.n).all(|j| self.offsets(i, j) == [0]))
    }

    /// Ish-type with `S_{1,j} ⊆ S_{1,k}` whenever `j < k`.
    pub fn is_nested_ish(&self) -> bool {
        self.is_ish_type()
            && (2..self.n).all(|j| {
                let next = self.offsets(1, j + 1);
                self.offsets(1, j)
                    .iter()
                    .all(|s| next.binary_search(s).is_ok())
            })
    }

    /// The Ish arrangement proper: `S_{1,j} = {0, .., j-1}`.
    pub fn is_ish(&self) -> bool {
        self.is_ish_type()
            && (2..=self.n).all(|j| {
                let set = self.offsets(1, j);
                set.len() == j && set.iter().zip(0..).all(|(&s, e)| s == e)
            })
    }

    pub fn classify_family(&self) -> BTreeSet<FamilyTag> {
        let mut tags = BTreeSet::new();
        if self.is_ish_type() {
            tags.insert(FamilyTag::IshType);
        }
        if self.is_nested_ish() {
            tags.insert(FamilyTag::NestedIsh);
        }
        if self.is_ish() {
            tags.insert(FamilyTag::Ish);
        }
        if self.is_transitive() {
            tags.insert(FamilyTag::Transitive);
        }
        if self.is_almost_transitive() {
            tags.insert(FamilyTag::AlmostTransitive);
        }
        tags
    }

    // ---- presets -------------------------------------------------------

    pub fn empty(n: usize) -> Result<Self> {
        Self::new(n, std::iter::empty::<(i64, i64, Vec<i64>)>())
    }

    /// Every pair carries the offsets in `set`.
    pub fn uniform(n: usize, set: &[i64]) -> Result<Self> {
        let mut entries = Vec::new();
        for i in 1..=n as i64 {
            for j in (i + 1)..=n as i64 {
                entries.push((i, j, set.to_vec()));
            }
        }
        Self::new(n, entries)
    }

    pub fn braid(n: usize) -> Result<Self> {
        Self::uniform(n, &[0])
    }

    pub fn shi(n: usize) -> Result<Self> {
        Self::uniform(n, &[0, 1])
    }

    pub fn ish(n: usize) -> Result<Self> {
        let columns = (2..=n as i64).map(|j| (0..j).collect()).collect();
        Self::ish_type(n, columns)
    }

    /// Ish-type arrangement from the first-row sets `S_{1,2}, .., S_{1,n}`.
    pub fn ish_type(n: usize, columns: Vec<Vec<i64>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidPreset(
                "dimension n must be at least 1".into(),
            ));
        }
        if columns.len() != n - 1 {
            return Err(Error::InvalidPreset(format!(
                "expected {} first-row sets for n = {n}, got {}",
                n - 1,
                columns.len()
            )));
        }
        let mut entries = Vec::new();
        for (idx, col) in columns.into_iter().enumerate() {
            let j = idx as i64 + 2;
            if !col.contains(&0) {
                return Err(Error::InvalidPreset(format!("S_(1,{j}) must contain 0")));
            }
            entries.push((1, j, col));
        }
        for i in 2..=n as i64 {
            for j in (i + 1)..=n as i64 {
                entries.push((i, j, vec![0]));
            }
        }
        Self::new(n, entries)
    }

    /// Nested Ish arrangement: like [`ArrangementSpec::ish_type`], and the columns must increase.
    pub fn nested_ish(n: usize, columns: Vec<Vec<i64>>) -> Result<Self> {
        for (idx, pair) in columns.windows(2).enumerate() {
            if !pair[0].iter().all(|s| pair[1].contains(s)) {
                return Err(Error::InvalidPreset(format!(
                    "nest condition fails: S_(1,{}) is not contained in S_(1,{})",
                    idx + 2,
                    idx + 3
                )));
            }
        }
        Self::ish_type(n, columns)
    }

    pub fn preset(family: Family, n: usize, columns: Option<Vec<Vec<i64>>>) -> Result<Self> {
        match family {
            Family::Braid => Self::braid(n),
            Family::Shi => Self::shi(n),
            Family::Ish => Self::ish(n),
            Family::NestedIsh | Family::IshType => {
                let columns = columns.ok_or_else(|| {
                    Error::InvalidPreset(format!("{family} needs first-row sets"))
                })?;
                if family == Family::NestedIsh {
                    Self::nested_ish(n, columns)
                } else {
                    Self::ish_type(n, columns)
                }
            }
        }
    }
}

/// Named arrangement families that [`ArrangementSpec::preset`] can build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Braid,
    Shi,
    Ish,
    NestedIsh,
    IshType,
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "braid" => Family::Braid,
            "shi" => Family::Shi,
            "ish" => Family::Ish,
            "nested-ish" => Family::NestedIsh,
            "ish-type" => Family::IshType,
            other => return Err(Error::InvalidPreset(format!("unknown family '{other}'"))),
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Braid => "braid",
            Family::Shi => "shi",
            Family::Ish => "ish",
            Family::NestedIsh => "nested-ish",
            Family::IshType => "ish-type",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FamilyTag {
    IshType,
    NestedIsh,
    Ish,
    Transitive,
    AlmostTransitive,
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyTag::IshType => "ish-type",
            FamilyTag::NestedIsh => "nested-ish",
            FamilyTag::Ish => "ish",
            FamilyTag::Transitive => "transitive",
            FamilyTag::AlmostTransitive => "almost-transitive",
        })
    }
}

/// Parses first-row sets written as comma-separated columns of inclusive ranges,
/// e.g. `"0..0,0..1,-2..2"`. A column may join pieces with `|` (`"0..1|3"`) and a
/// piece may be a single integer.
pub fn parse_nest(text: &str) -> Result<Vec<Vec<i64>>> {
    let bad = |what: &str| Error::InvalidPreset(format!("bad nest syntax '{what}'"));
    text.split(',')
        .map(|column| {
            let mut set = BTreeSet::new();
            for piece in column.trim().split('|') {
                let piece = piece.trim();
                if let Some((a, b)) = piece.split_once("..") {
                    let a: i64 = a.trim().parse().map_err(|_| bad(piece))?;
                    let b: i64 = b.trim().parse().map_err(|_| bad(piece))?;
                    if a > b {
                        return Err(bad(piece));
                    }
                    set.extend(a..=b);
                } else {
                    set.insert(piece.parse::<i64>().map_err(|_| bad(piece))?);
                }
            }
            Ok(set.into_iter().collect())
        })
        .collect()
}
