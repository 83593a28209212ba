//! Tools for Ish-type arrangements.

pub mod bijection;
pub mod classify;
pub mod involution;

pub use bijection::{
    alphabet, bijection_f, bijection_g, check_frak_t, check_frak_t_guard, closed_formula,
    count_frak_t, count_sequences, decode_sequence, encode_sequence, enumerate_frak_t,
    enumerate_sequences, frak_t_placements, IshSequence, SequenceEntry,
};
pub use classify::{
    class_histogram, classify_tree, count_s0000, enumerate_class, lower_inefficient,
    sequence_through_one, upper_inefficient, IshClassification,
};
pub use involution::{omega_l, omega_u, phi_l, phi_u, psi_l, psi_u};
