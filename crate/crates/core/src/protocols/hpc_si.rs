//! π_SI: embedding one Set-Int instance into an HPC instance and running an
//! HPC protocol up to a given phase.
//!
//! Alice and Bob pick `i` uniformly and place `(A, B)` at `(A_{x_i}, B_{x_i})`.
//! For `x < i` the set `A_x` is public and Bob completes `B_x` privately; for
//! `x > i` the set `B_x` is public and Alice completes `A_x` privately. All of
//! `(C, D)` is public. The run stops with `Θ = 1` as soon as `x_i` shows up
//! among `z_0, …, z_{j-1}`; otherwise it simulates the attached protocol's
//! first `j` phases.

use crate::error::{Error, Result};
use crate::instances::{
    sample_a_given_b, sample_b_given_a, sample_set_int_with, HpcInstance, SetIntInstance, Universe,
};
use crate::protocols::transcript::PhaseTranscript;
use crate::protocols::upper_bound::run_upper_bound;
use crate::rng::{Randomness, SeededCoins, Stream};

/// An HPC protocol that π_SI can simulate.
pub trait HpcProtocol {
    fn execute(&self, inst: &HpcInstance, k: usize) -> PhaseTranscript;
}

/// The (k+1)-phase protocol of [`run_upper_bound`].
#[derive(Clone, Copy, Debug, Default)]
pub struct UpperBoundProtocol;

impl HpcProtocol for UpperBoundProtocol {
    fn execute(&self, inst: &HpcInstance, k: usize) -> PhaseTranscript {
        run_upper_bound(inst, k).transcript
    }
}

/// Which parts of the AB side were sampled publicly and which privately.
/// Entries are x-indices; the CD side is always entirely public.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HpcSiPartition {
    pub embedded: usize,
    pub public_a: Vec<usize>,
    pub public_b: Vec<usize>,
    pub private_alice: Vec<usize>,
    pub private_bob: Vec<usize>,
}

impl HpcSiPartition {
    pub fn for_index(n: usize, i: usize) -> Self {
        HpcSiPartition {
            embedded: i,
            public_a: (0..i).collect(),
            public_b: (i + 1..n).collect(),
            private_alice: (i + 1..n).collect(),
            private_bob: (0..i).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HpcSiOutcome {
    pub instance: HpcInstance,
    pub partition: HpcSiPartition,
    pub theta: bool,
    /// The pointers the players computed before stopping.
    pub pointers: Vec<usize>,
    /// First `j` phases of the attached protocol; `None` when `Θ = 1`.
    pub transcript: Option<PhaseTranscript>,
}

/// Builds the embedded instance with `(A, B)` at a given index `i`.
pub fn embed_set_int_in_hpc(
    si: &SetIntInstance,
    i: usize,
    rng: &mut dyn Randomness,
) -> Result<(HpcInstance, HpcSiPartition)> {
    let n = si.n();
    if i >= n {
        return Err(Error::Validation(format!("embedding index {i} outside [{n}]")));
    }
    let mut public_sides: Vec<Option<Vec<bool>>> = vec![None; n];
    for (x, side) in public_sides.iter_mut().enumerate() {
        if x == i {
            continue;
        }
        let full = sample_set_int_with(n, rng, Stream::Public)?;
        *side = Some(if x < i { full.a().to_vec() } else { full.b().to_vec() });
    }
    let cd = (0..n)
        .map(|_| sample_set_int_with(n, rng, Stream::Public))
        .collect::<Result<Vec<_>>>()?;
    let mut ab: Vec<Option<SetIntInstance>> = vec![None; n];
    ab[i] = Some(si.clone());
    for x in i + 1..n {
        let b = public_sides[x].take().expect("sampled above");
        let a = sample_a_given_b(&b, rng, Stream::Alice)?;
        ab[x] = Some(SetIntInstance::new(a, b)?);
    }
    for x in 0..i {
        let a = public_sides[x].take().expect("sampled above");
        let b = sample_b_given_a(&a, rng, Stream::Bob)?;
        ab[x] = Some(SetIntInstance::new(a, b)?);
    }
    let ab = ab.into_iter().map(|s| s.expect("filled")).collect();
    Ok((HpcInstance::new(ab, cd)?, HpcSiPartition::for_index(n, i)))
}

/// One seeded run of π_SI with the upper-bound protocol attached.
pub fn run_hpc_si_reduction(si: &SetIntInstance, k: usize, j: usize, seed: u64) -> Result<HpcSiOutcome> {
    run_hpc_si_reduction_with(si, k, j, &mut SeededCoins::new(seed), &UpperBoundProtocol)
}

pub fn run_hpc_si_reduction_with(
    si: &SetIntInstance,
    k: usize,
    j: usize,
    rng: &mut dyn Randomness,
    protocol: &dyn HpcProtocol,
) -> Result<HpcSiOutcome> {
    if j == 0 || j > k {
        return Err(Error::Validation(format!("phase index j = {j} must satisfy 1 <= j <= k = {k}")));
    }
    let n = si.n();
    let i = rng.uniform(Stream::Public, n);
    let (instance, partition) = embed_set_int_in_hpc(si, i, rng)?;

    // Every instance other than (A_{x_i}, B_{x_i}) is known in full to one of
    // the players, so the pointers can be followed until x_i turns up.
    let mut pointers = vec![0];
    let mut theta = false;
    for m in 0..j {
        let z = pointers[m];
        if Universe::of_step(m) == Universe::X && z == i {
            theta = true;
            break;
        }
        if m + 1 < j {
            pointers.push(instance.step_instance(m, z).target());
        }
    }
    let transcript = (!theta).then(|| protocol.execute(&instance, k).truncated(j));
    Ok(HpcSiOutcome {
        instance,
        partition,
        theta,
        pointers,
        transcript,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::sample_set_int;

    #[test]
    fn n1_always_stops() {
        let si = sample_set_int(1, 0).unwrap();
        for seed in 0..20 {
            let out = run_hpc_si_reduction(&si, 3, 2, seed).unwrap();
            assert!(out.theta && out.transcript.is_none());
        }
    }

    #[test]
    fn phase_index_is_validated() {
        let si = sample_set_int(3, 0).unwrap();
        assert!(run_hpc_si_reduction(&si, 2, 0, 1).is_err());
        assert!(run_hpc_si_reduction(&si, 2, 3, 1).is_err());
    }

    #[test]
    fn embedded_pair_sits_at_index() {
        let si = sample_set_int(5, 3).unwrap();
        for seed in 0..20 {
            let out = run_hpc_si_reduction(&si, 4, 4, seed).unwrap();
            let i = out.partition.embedded;
            assert_eq!(out.instance.ab()[i], si);
            if let Some(t) = &out.transcript {
                assert!(t.phase_count() <= 4);
                t.validate().unwrap();
            }
        }
    }
}
