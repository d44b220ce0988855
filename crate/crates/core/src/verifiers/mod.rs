//! Exact ground truth for the reductions: max flow, cut decoding, the flow
//! certificate, greedy MIS, exhaustive SFM and stream replay.

pub mod certificate;
pub mod flow;
pub mod greedy;
pub mod replay;
pub mod report;

pub use certificate::{
    build_flow_certificate, check_certificate, decode_cut, CertificateCheck, DecodedPointer, FlowCertificate,
    FlowPath, PathFamily,
};
pub use flow::{max_flow, max_flow_between, MaxFlow};
pub use greedy::{brute_force_sfm, lfmis, lfmis_with_order, SFM_BRUTE_FORCE_LIMIT};
pub use replay::{replay_stream, StoreEverything, StreamConsumer, StreamConsumerReport};
pub use report::{verify_suite, Check, VerificationReport};
