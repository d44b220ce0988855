//! Finite distributions with rational probabilities and distances between them.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::info_theory::exact::ExactReal;

/// Probabilities over the support `0..len`, summing to exactly 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiscreteDistribution {
    probs: Vec<BigRational>,
}

impl DiscreteDistribution {
    pub fn new(probs: Vec<BigRational>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::Validation("distribution with empty support".into()));
        }
        if probs.iter().any(Signed::is_negative) {
            return Err(Error::Validation("negative probability".into()));
        }
        let total: BigRational = probs.iter().sum();
        if !total.is_one() {
            return Err(Error::Validation(format!("probabilities sum to {total}, not 1")));
        }
        Ok(DiscreteDistribution { probs })
    }

    /// Normalizes non-negative integer weights.
    pub fn from_weights(weights: &[u64]) -> Result<Self> {
        let total: u128 = weights.iter().map(|&w| u128::from(w)).sum();
        if total == 0 {
            return Err(Error::Validation("weights sum to zero".into()));
        }
        let den = BigInt::from(total);
        DiscreteDistribution::new(
            weights
                .iter()
                .map(|&w| BigRational::new(BigInt::from(w), den.clone()))
                .collect(),
        )
    }

    pub fn uniform(n: usize) -> Result<Self> {
        DiscreteDistribution::from_weights(&vec![1; n])
    }

    pub fn point(n: usize, at: usize) -> Result<Self> {
        if at >= n {
            return Err(Error::Domain(format!("point mass at {at} outside support of size {n}")));
        }
        let mut w = vec![0; n];
        w[at] = 1;
        DiscreteDistribution::from_weights(&w)
    }

    pub fn probs(&self) -> &[BigRational] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Number of outcomes with positive probability.
    pub fn support_size(&self) -> usize {
        self.probs.iter().filter(|p| p.is_positive()).count()
    }

    /// `Pr(event)` for an event given as a membership mask.
    pub fn prob_of(&self, event: &[bool]) -> BigRational {
        self.probs.iter().zip(event).filter(|(_, &e)| e).map(|(p, _)| p).sum()
    }

    /// `(μ + ν) / 2`.
    pub fn midpoint(&self, other: &Self) -> Result<Self> {
        same_support(self, other)?;
        let half = BigRational::new(1.into(), 2.into());
        DiscreteDistribution::new(self.probs.iter().zip(&other.probs).map(|(a, b)| (a + b) * &half).collect())
    }

    pub fn to_f64(&self) -> Vec<f64> {
        use num_traits::ToPrimitive;
        self.probs.iter().map(|p| p.to_f64().unwrap_or(f64::NAN)).collect()
    }
}

fn same_support(mu: &DiscreteDistribution, nu: &DiscreteDistribution) -> Result<()> {
    if mu.len() != nu.len() {
        return Err(Error::Dimension(format!("supports of size {} and {}", mu.len(), nu.len())));
    }
    Ok(())
}

/// `Σ p log2(1/p)`, with `0 log(1/0) = 0`.
pub fn entropy(d: &DiscreteDistribution) -> Result<ExactReal> {
    entropy_of(d.probs())
}

/// Entropy of a probability vector that may not be normalized yet; entries are
/// used as given.
pub(crate) fn entropy_of(probs: &[BigRational]) -> Result<ExactReal> {
    let mut h = ExactReal::zero();
    for p in probs.iter().filter(|p| p.is_positive()) {
        h -= &ExactReal::log2(p)?.scale(p);
    }
    Ok(h)
}

/// KL divergence in bits, or `Infinite` when `μ` puts mass where `ν` has none.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Divergence {
    Finite(ExactReal),
    Infinite,
}

impl Divergence {
    pub fn finite(&self) -> Option<&ExactReal> {
        match self {
            Divergence::Finite(x) => Some(x),
            Divergence::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Divergence::Infinite)
    }
}

/// `Σ μ(x) log2(μ(x)/ν(x))`.
pub fn kl(mu: &DiscreteDistribution, nu: &DiscreteDistribution) -> Result<Divergence> {
    same_support(mu, nu)?;
    let mut out = ExactReal::zero();
    for (m, n) in mu.probs.iter().zip(&nu.probs) {
        if m.is_zero() {
            continue;
        }
        if n.is_zero() {
            return Ok(Divergence::Infinite);
        }
        out += &ExactReal::log2(&(m / n))?.scale(m);
    }
    Ok(Divergence::Finite(out))
}

/// `½ Σ |μ(x) − ν(x)|`.
pub fn tvd(mu: &DiscreteDistribution, nu: &DiscreteDistribution) -> Result<BigRational> {
    same_support(mu, nu)?;
    Ok(tvd_slices(&mu.probs, &nu.probs))
}

/// Half-L1 distance of two aligned probability vectors.
pub fn tvd_slices(p: &[BigRational], q: &[BigRational]) -> BigRational {
    assert_eq!(p.len(), q.len(), "tvd of vectors with different supports");
    let sum = p.iter().zip(q).fold(BigRational::zero(), |acc, (x, y)| acc + (x - y).abs());
    sum / BigRational::from_integer(2.into())
}

pub const EVENT_FORM_LIMIT: usize = 20;

/// `max_{E} μ(E) − ν(E)` over all events `E`, by enumeration.
pub fn tvd_max_events(mu: &DiscreteDistribution, nu: &DiscreteDistribution) -> Result<BigRational> {
    same_support(mu, nu)?;
    if mu.len() > EVENT_FORM_LIMIT {
        return Err(Error::Resource(format!(
            "{} outcomes exceed the event enumeration limit {EVENT_FORM_LIMIT}",
            mu.len()
        )));
    }
    let diffs: Vec<BigRational> = mu.probs.iter().zip(&nu.probs).map(|(a, b)| a - b).collect();
    let mut best = BigRational::zero();
    for mask in 0u32..(1 << diffs.len()) {
        let v: BigRational = diffs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, d)| d)
            .sum();
        if v > best {
            best = v;
        }
    }
    Ok(best)
}

/// `h² = 1 − Σ √(μ(x) ν(x))`.
pub fn hellinger_squared(mu: &DiscreteDistribution, nu: &DiscreteDistribution) -> Result<ExactReal> {
    same_support(mu, nu)?;
    hellinger_squared_slices(&mu.probs, &nu.probs)
}

pub(crate) fn hellinger_squared_slices(p: &[BigRational], q: &[BigRational]) -> Result<ExactReal> {
    let mut h = ExactReal::from_rational(BigRational::one());
    for (a, b) in p.iter().zip(q) {
        h -= &ExactReal::sqrt(&(a * b))?;
    }
    Ok(h)
}

pub fn hellinger(mu: &DiscreteDistribution, nu: &DiscreteDistribution) -> Result<f64> {
    Ok(hellinger_squared(mu, nu)?.to_f64().max(0.0).sqrt())
}
