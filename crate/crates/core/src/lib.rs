//! Region counting for integer deformations of the braid arrangement.
//!
//! Regions are counted as a signed sum over labeled plane trees, either by listing
//! boxings ([`boxing`]) or by the polynomial-time chain test ([`fast`]). Ish-type
//! arrangements get their own toolkit in [`ish`], and [`oracle`] counts regions
//! independently by point counting over prime fields.

pub mod arrangement;
pub mod boxing;
pub mod enumerate;
pub mod error;
pub mod fast;
pub mod ish;
pub mod oracle;
pub mod sampler;
pub mod tree;

pub use arrangement::{ArrangementSpec, Family, FamilyTag};
pub use boxing::{bernardi_sum_brute, contribution_brute};
pub use enumerate::{enumerate_trees, tree_count, DEFAULT_GUARD};
pub use error::{Error, Result};
pub use fast::{bernardi_sum_fast, contribution_fast, FastEvaluator};
pub use oracle::{characteristic_polynomial, region_count_zaslavsky, IntPolynomial};
pub use sampler::SpecSampler;
pub use tree::{Arity, PlaneTree};
