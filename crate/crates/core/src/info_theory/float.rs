//! `f64` versions of the distribution measures, for fast approximate checks.

use crate::error::{Error, Result};

pub const FLOAT_MASS_TOLERANCE: f64 = 1e-12;

pub fn check_distribution(p: &[f64]) -> Result<()> {
    if p.is_empty() {
        return Err(Error::Validation("distribution with empty support".into()));
    }
    if p.iter().any(|&x| !x.is_finite() || x < 0.0) {
        return Err(Error::Validation("probabilities must be finite and non-negative".into()));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > FLOAT_MASS_TOLERANCE {
        return Err(Error::Validation(format!("probabilities sum to {total}")));
    }
    Ok(())
}

pub fn entropy(p: &[f64]) -> f64 {
    p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.log2()).sum()
}

/// KL divergence in bits; `f64::INFINITY` when `μ` is not dominated by `ν`.
pub fn kl(mu: &[f64], nu: &[f64]) -> f64 {
    mu.iter()
        .zip(nu)
        .filter(|(&m, _)| m > 0.0)
        .map(|(&m, &n)| if n > 0.0 { m * (m / n).log2() } else { f64::INFINITY })
        .sum()
}

pub fn tvd(mu: &[f64], nu: &[f64]) -> f64 {
    mu.iter().zip(nu).map(|(a, b)| (a - b).abs()).sum::<f64>() / 2.0
}

pub fn hellinger_squared(mu: &[f64], nu: &[f64]) -> f64 {
    1.0 - mu.iter().zip(nu).map(|(a, b)| (a * b).sqrt()).sum::<f64>()
}

/// Dense `f64` joint table, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatTable {
    dims: Vec<usize>,
    probs: Vec<f64>,
}

impl FloatTable {
    pub fn new(dims: Vec<usize>, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != dims.iter().product::<usize>() {
            return Err(Error::Dimension(format!("{} cells for shape {dims:?}", probs.len())));
        }
        check_distribution(&probs)?;
        Ok(FloatTable { dims, probs })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn marginal(&self, vars: &[usize]) -> Vec<f64> {
        let size: usize = vars.iter().map(|&v| self.dims[v]).product();
        let mut out = vec![0.0; size];
        let mut idx = vec![0; self.dims.len()];
        for p in &self.probs {
            let pos = vars.iter().fold(0, |acc, &v| acc * self.dims[v] + idx[v]);
            out[pos] += p;
            for v in (0..idx.len()).rev() {
                idx[v] += 1;
                if idx[v] < self.dims[v] {
                    break;
                }
                idx[v] = 0;
            }
        }
        out
    }

    pub fn entropy(&self, vars: &[usize]) -> f64 {
        entropy(&self.marginal(vars))
    }

    pub fn conditional_entropy(&self, target: &[usize], given: &[usize]) -> f64 {
        let all: Vec<usize> = given.iter().chain(target).copied().collect();
        self.entropy(&all) - self.entropy(given)
    }

    pub fn mutual_information(&self, a: &[usize], b: &[usize], given: &[usize]) -> f64 {
        let bg: Vec<usize> = b.iter().chain(given).copied().collect();
        self.conditional_entropy(a, given) - self.conditional_entropy(a, &bg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        assert!((entropy(&[0.5, 0.5]) - 1.0).abs() < 1e-15);
        assert_eq!(tvd(&[1.0, 0.0], &[0.5, 0.5]), 0.5);
        assert!(kl(&[0.5, 0.5], &[1.0, 0.0]).is_infinite());
        assert!((hellinger_squared(&[1.0, 0.0], &[0.5, 0.5]) - (1.0 - 0.5f64.sqrt())).abs() < 1e-15);
        assert!(check_distribution(&[0.5, 0.4]).is_err());
        let t = FloatTable::new(vec![2, 2], vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        assert!((t.mutual_information(&[0], &[1], &[]) - 1.0).abs() < 1e-15);
    }
}
