//! Property tests for the reduction and information-theory invariants.

use hpc_lab::info_theory::JointTable;
use hpc_lab::instances::{chase, sample_hpc, HpcInstance};
use hpc_lab::reductions::{build_cut_graph, emit_stream, EdgeStream};
use hpc_lab::verifiers::{decode_cut, max_flow};
use num_traits::Signed;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cut_reduction_decodes_and_round_trips(n in 1usize..=6, k in 1usize..=4, seed in any::<u64>()) {
        let inst = sample_hpc(n, seed).unwrap();
        prop_assert_eq!(HpcInstance::parse(&inst.to_text()).unwrap(), inst.clone());
        let trace = chase(&inst, k);
        for j in 0..k {
            prop_assert_eq!(trace.z()[j + 1], inst.step_instance(j, trace.z()[j]).target());
        }
        let g = build_cut_graph(&inst, k).unwrap();
        let flow = max_flow(&g).unwrap().value;
        prop_assert_eq!(decode_cut(&flow, n, k).unwrap().index, trace.answer());
        let stream = emit_stream(&g).unwrap();
        prop_assert_eq!(EdgeStream::parse(&stream.to_text()).unwrap().to_graph().unwrap(), g);
    }

    #[test]
    fn mutual_information_identities(weights in prop::collection::vec(1u64..=9, 8)) {
        let t = JointTable::from_weights(&[2, 2, 2], &weights).unwrap();
        let i = t.mutual_information(&[0], &[1], &[2]).unwrap();
        prop_assert!(i.signum() != Some(std::cmp::Ordering::Less));
        prop_assert_eq!(&i, &t.mutual_information_kl(&[0], &[1], &[2]).unwrap());
        prop_assert_eq!(&i, &t.mutual_information(&[1], &[0], &[2]).unwrap());
        let chain = t.mutual_information(&[0], &[2], &[]).unwrap() + i;
        prop_assert_eq!(chain, t.mutual_information(&[0], &[1, 2], &[]).unwrap());
        prop_assert!(t.probs().iter().all(|p| !p.is_negative()));
    }
}
