use thiserror::Error;

/// Everything that can go wrong inside the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed spec document: {0}")]
    MalformedSpec(String),
    #[error("hyperplane pair ({i},{j}) is out of range for n = {n} (need 1 <= i < j <= n)")]
    PairOutOfRange { i: i64, j: i64, n: usize },
    #[error("duplicate hyperplane entry for pair ({i},{j})")]
    DuplicatePair { i: usize, j: usize },
    #[error("label {label} is not a coordinate of an arrangement in dimension {n}")]
    LabelOutOfRange { label: usize, n: usize },
    #[error("S-minus sets are only defined for distinct labels (got {0} twice)")]
    SameLabel(usize),
    #[error("invalid preset parameters: {0}")]
    InvalidPreset(String),

    #[error("malformed tree: {0}")]
    MalformedTree(String),
    #[error("node {0} is the root and has no parent")]
    RootHasNoParent(usize),
    #[error("node {0} is not in the tree")]
    UnknownNode(usize),
    #[error("sequence {0:?} is not a cadet sequence of the tree")]
    NotCadetSequence(Vec<usize>),
    #[error("tree arity m = {tree_m} is below the arrangement's m = {spec_m}")]
    ArityMismatch { tree_m: usize, spec_m: usize },
    #[error("tree has {tree_n} nodes but the arrangement has dimension {spec_n}")]
    DimensionMismatch { tree_n: usize, spec_n: usize },
    #[error("operation expects a tree with {expected} arity")]
    WrongTreeFamily { expected: &'static str },

    #[error("size guard: {trees} trees exceed the limit of {limit}")]
    GuardRefused { trees: String, limit: u64 },

    #[error("arrangement is not almost transitive")]
    NotAlmostTransitive,
    #[error("method requires Ish-type")]
    NotIshType,
    #[error("method requires nested Ish")]
    NotNestedIsh,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("tree is not in the broom family T(S): {0}")]
    NotInFrakT(String),
    #[error("sequence entry a_{k} = {entry:?} is not an allowed value")]
    BadSequenceEntry { k: usize, entry: (i8, i64) },
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error("{0} is not an odd prime above the required bound {1}")]
    BadPrime(u64, u64),
    #[error("interpolated polynomial is not integral")]
    NonIntegralPolynomial,
    #[error("characteristic polynomial unstable across prime sets (bound {0})")]
    UnstablePolynomial(u64),
}

pub type Result<T> = std::result::Result<T, Error>;
