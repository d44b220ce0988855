//! Exact information theory on finite distributions: entropy, mutual
//! information, divergences, and information quantities of protocol trees.
//!
//! Quantities are in bits. Rational inputs give values of the form
//! `r + Σ c √d + Σ e log2 p` held exactly by [`ExactReal`].

pub mod dist;
pub mod exact;
pub mod facts;
pub mod float;
pub mod joint;
pub mod protocol_info;

pub use dist::{
    entropy, hellinger, hellinger_squared, kl, tvd, tvd_max_events, tvd_slices, DiscreteDistribution, Divergence,
};
pub use exact::ExactReal;
pub use facts::{verify_facts, FactsConfig, NumericMode};
pub use joint::JointTable;
pub use protocol_info::{
    communication_cost, cut_and_paste_check, internal_info_cost, random_tree, CutAndPaste, PublicCoinProtocol,
};
