//! Four-party phase protocols for HPC and two-party Set-Int protocol trees.

pub mod hpc_si;
pub mod pair_int;
pub mod transcript;
pub mod tree;
pub mod upper_bound;

pub use hpc_si::{run_hpc_si_reduction, HpcProtocol, HpcSiOutcome, HpcSiPartition, UpperBoundProtocol};
pub use pair_int::{
    check_ordering_bound, measure_eps_solve, pair_int_success_probability, run_pair_int_reduction,
    EnumerationBudget, OrderingBound, PairIntMode, PairIntOutcome, PosteriorReport,
};
pub use transcript::{Message, Pair, Phase, PhaseTranscript, Player, Recipient};
pub use tree::{Node, Owner, ProtocolTree};
pub use upper_bound::{run_upper_bound, UpperBoundRun};
