//! Randomness sources shared by the seeded samplers and the exact enumerator.
//!
//! Every sampler in the crate draws through [`Randomness`], tagging each draw
//! with the [`Stream`] it belongs to. [`SeededCoins`] keeps one ChaCha stream
//! per tag, all derived from a single seed. [`enumerate`] instead walks every
//! branch of the sampler's decision tree and returns each outcome with its
//! exact rational weight.
//!
//! Enumeration order is canonical: branches are visited depth-first, and at
//! every draw the choices are tried in increasing index order (for a
//! Bernoulli draw, `false` before `true`). Zero-weight branches are skipped.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Logical randomness stream a draw belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Stream {
    Public,
    Alice,
    Bob,
    Protocol,
}

impl Stream {
    fn slot(self) -> usize {
        match self {
            Stream::Public => 0,
            Stream::Alice => 1,
            Stream::Bob => 2,
            Stream::Protocol => 3,
        }
    }
}

pub trait Randomness {
    /// Returns index `i` with probability `weights[i] / sum(weights)`.
    fn pick(&mut self, stream: Stream, weights: &[u64]) -> usize;

    /// Returns `true` with probability `p`, where `0 <= p <= 1`.
    fn bernoulli(&mut self, stream: Stream, p: &BigRational) -> bool;

    /// Uniform index in `0..n`.
    fn uniform(&mut self, stream: Stream, n: usize) -> usize {
        self.pick(stream, &vec![1; n])
    }
}

/// Seeded fast path: one ChaCha8 stream per [`Stream`] tag.
#[derive(Clone, Debug)]
pub struct SeededCoins {
    streams: [ChaCha8Rng; 4],
}

impl SeededCoins {
    pub fn new(seed: u64) -> Self {
        let make = |id: u64| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(id);
            rng
        };
        SeededCoins {
            streams: [make(0), make(1), make(2), make(3)],
        }
    }
}

impl Randomness for SeededCoins {
    fn pick(&mut self, stream: Stream, weights: &[u64]) -> usize {
        let total: u64 = weights.iter().sum();
        assert!(total > 0, "pick needs a positive total weight");
        let mut r = self.streams[stream.slot()].random_range(0..total);
        for (i, &w) in weights.iter().enumerate() {
            if r < w {
                return i;
            }
            r -= w;
        }
        unreachable!()
    }

    fn uniform(&mut self, stream: Stream, n: usize) -> usize {
        assert!(n > 0, "uniform over an empty range");
        self.streams[stream.slot()].random_range(0..n)
    }

    fn bernoulli(&mut self, stream: Stream, p: &BigRational) -> bool {
        let rng = &mut self.streams[stream.slot()];
        match (p.numer().to_u128(), p.denom().to_u128()) {
            (Some(num), Some(den)) => rng.random_range(0..den) < num,
            _ => rng.random::<f64>() < p.to_f64().unwrap_or(0.0),
        }
    }
}

/// One enumerated outcome: exact probability and the sampler's result.
#[derive(Clone, Debug)]
pub struct Weighted<T> {
    pub weight: BigRational,
    pub value: T,
}

struct Replay<'a> {
    path: &'a mut Vec<Branch>,
    pos: usize,
    weight: BigRational,
}

#[derive(Clone, Debug)]
struct Branch {
    choice: usize,
    probs: Vec<BigRational>,
}

impl Branch {
    fn first_live(probs: &[BigRational], from: usize) -> Option<usize> {
        (from..probs.len()).find(|&i| !probs[i].is_zero())
    }
}

impl Replay<'_> {
    fn draw(&mut self, probs: Vec<BigRational>) -> usize {
        let choice = if self.pos < self.path.len() {
            debug_assert_eq!(self.path[self.pos].probs, probs, "sampler is not replayable");
            self.path[self.pos].choice
        } else {
            let choice = Branch::first_live(&probs, 0).expect("draw with no live branch");
            self.path.push(Branch { choice, probs });
            choice
        };
        self.weight *= &self.path[self.pos].probs[choice];
        self.pos += 1;
        choice
    }
}

impl Randomness for Replay<'_> {
    fn pick(&mut self, _stream: Stream, weights: &[u64]) -> usize {
        let total: u64 = weights.iter().sum();
        let probs = weights
            .iter()
            .map(|&w| BigRational::new(BigInt::from(w), BigInt::from(total)))
            .collect();
        self.draw(probs)
    }

    fn bernoulli(&mut self, _stream: Stream, p: &BigRational) -> bool {
        self.draw(vec![BigRational::one() - p, p.clone()]) == 1
    }
}

/// Runs `sampler` once per branch of its decision tree.
///
/// The sampler must be a deterministic function of the draws it makes. The
/// returned weights sum to one.
pub fn enumerate<T>(mut sampler: impl FnMut(&mut dyn Randomness) -> T) -> Vec<Weighted<T>> {
    let mut path: Vec<Branch> = Vec::new();
    let mut out = Vec::new();
    loop {
        let mut replay = Replay {
            path: &mut path,
            pos: 0,
            weight: BigRational::one(),
        };
        let value = sampler(&mut replay);
        let (pos, weight) = (replay.pos, replay.weight);
        path.truncate(pos);
        out.push(Weighted { weight, value });

        loop {
            let Some(last) = path.last_mut() else {
                return out;
            };
            match Branch::first_live(&last.probs, last.choice + 1) {
                Some(next) => {
                    last.choice = next;
                    break;
                }
                None => {
                    path.pop();
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerate_weights_sum_to_one() {
        let leaves = enumerate(|r| {
            let a = r.uniform(Stream::Public, 3);
            let b = r.bernoulli(Stream::Alice, &BigRational::new(1.into(), 4.into()));
            (a, b)
        });
        assert_eq!(leaves.len(), 6);
        let total: BigRational = leaves.iter().map(|w| w.weight.clone()).sum();
        assert!(total.is_one());
        assert_eq!(leaves[0].value, (0, false));
        assert_eq!(leaves[1].value, (0, true));
    }

    #[test]
    fn enumerate_skips_zero_weight_and_handles_variable_depth() {
        let leaves = enumerate(|r| {
            let a = r.pick(Stream::Public, &[1, 0, 1]);
            if a == 0 {
                vec![a]
            } else {
                vec![a, r.uniform(Stream::Bob, 2)]
            }
        });
        let values: Vec<_> = leaves.iter().map(|w| w.value.clone()).collect();
        assert_eq!(values, vec![vec![0], vec![2, 0], vec![2, 1]]);
    }

    #[test]
    fn seeded_streams_are_reproducible_and_distinct() {
        let mut a = SeededCoins::new(7);
        let mut b = SeededCoins::new(7);
        let xs: Vec<_> = (0..20).map(|_| a.uniform(Stream::Public, 1000)).collect();
        let ys: Vec<_> = (0..20).map(|_| b.uniform(Stream::Public, 1000)).collect();
        assert_eq!(xs, ys);
        let zs: Vec<_> = (0..20).map(|_| b.uniform(Stream::Alice, 1000)).collect();
        assert_ne!(xs, zs);
    }
}
