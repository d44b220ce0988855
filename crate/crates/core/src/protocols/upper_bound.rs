//! The (k+1)-phase protocol computing `z_k` with `O(k n)` communication.
//!
//! Phase 1 is skipped since `z_0 = x_1` is known to everyone. In phase
//! `p = j + 1` the pair owning the instance of `z_{j-1}` runs Set-Int
//! directly: the first player (P_A or P_C) sends its n-bit characteristic
//! vector to its partner, who intersects it with its own set and replies with
//! the `ceil(log2 n)`-bit binary index of `z_j`. That reply is addressed to the
//! other pair, so it is also the phase's boundary message.

use crate::instances::{chase, HpcInstance};
use crate::protocols::transcript::{Pair, PhaseTranscript, Player, Recipient};

/// Number of bits needed to write an index in `0..n` (0 when n = 1).
pub fn index_bits(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

pub fn encode_index(i: usize, width: usize) -> Vec<bool> {
    (0..width).rev().map(|b| i >> b & 1 == 1).collect()
}

pub fn decode_index(bits: &[bool]) -> usize {
    bits.iter().fold(0, |acc, &b| acc << 1 | b as usize)
}

/// Exact communication of [`run_upper_bound`]: `k (n + ceil(log2 n))`.
pub fn upper_bound_bits(n: usize, k: usize) -> usize {
    k * (n + index_bits(n))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpperBoundRun {
    pub answer: usize,
    pub transcript: PhaseTranscript,
}

pub fn run_upper_bound(inst: &HpcInstance, k: usize) -> UpperBoundRun {
    let n = inst.n();
    let width = index_bits(n);
    let mut transcript = PhaseTranscript::new();
    let mut z = 0;
    if k > 0 {
        transcript.open_phase();
    }
    for j in 1..=k {
        let phase = transcript.open_phase();
        let pair = Pair::of_phase(phase);
        let (first, second) = match pair {
            Pair::AB => (Player::A, Player::B),
            Pair::CD => (Player::C, Player::D),
        };
        let instance = inst.step_instance(j - 1, z);
        let vector = instance.a().to_vec();
        transcript.send(first, Recipient::Player(second), vector.clone());

        // The partner intersects the received vector with its own set.
        let hit = (0..n)
            .find(|&i| vector[i] && instance.b()[i])
            .expect("promise instance has a target");
        let reply = encode_index(hit, width);
        z = decode_index(&reply);
        transcript.send(second, Recipient::Pair(pair.other()), reply);
    }
    debug_assert_eq!(z, chase(inst, k).answer());
    UpperBoundRun { answer: z, transcript }
}
