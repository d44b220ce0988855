//! Joint distributions over two to four variables.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::info_theory::dist::{entropy_of, kl, DiscreteDistribution, Divergence};
use crate::info_theory::exact::ExactReal;

pub const DEFAULT_NAMES: [&str; 4] = ["A", "B", "C", "D"];

/// Dense table of rationals, row-major in variable order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JointTable {
    names: Vec<String>,
    dims: Vec<usize>,
    probs: Vec<BigRational>,
}

impl JointTable {
    pub fn new(names: Vec<String>, dims: Vec<usize>, probs: Vec<BigRational>) -> Result<Self> {
        if !(2..=4).contains(&dims.len()) || names.len() != dims.len() {
            return Err(Error::Dimension(format!(
                "{} names for {} variables; tables have 2 to 4 variables",
                names.len(),
                dims.len()
            )));
        }
        if dims.contains(&0) {
            return Err(Error::Dimension("variable with empty range".into()));
        }
        let cells: usize = dims.iter().product();
        if probs.len() != cells {
            return Err(Error::Dimension(format!("{} cells for shape {dims:?}", probs.len())));
        }
        if probs.iter().any(Signed::is_negative) {
            return Err(Error::Validation("negative probability".into()));
        }
        let total: BigRational = probs.iter().sum();
        if !total.is_one() {
            return Err(Error::Validation(format!("table mass is {total}, not 1")));
        }
        Ok(JointTable { names, dims, probs })
    }

    fn default_names(count: usize) -> Vec<String> {
        DEFAULT_NAMES.iter().take(count).map(|s| s.to_string()).collect()
    }

    /// Normalizes non-negative integer weights; variables are named A, B, C, D.
    pub fn from_weights(dims: &[usize], weights: &[u64]) -> Result<Self> {
        let total: u128 = weights.iter().map(|&w| u128::from(w)).sum();
        if total == 0 {
            return Err(Error::Validation("weights sum to zero".into()));
        }
        let den = BigInt::from(total);
        let names = if dims.len() <= 4 { Self::default_names(dims.len()) } else { vec![] };
        JointTable::new(
            names,
            dims.to_vec(),
            weights.iter().map(|&w| BigRational::new(w.into(), den.clone())).collect(),
        )
    }

    pub fn from_rationals(dims: &[usize], probs: Vec<BigRational>) -> Result<Self> {
        let names = if dims.len() <= 4 { Self::default_names(dims.len()) } else { vec![] };
        JointTable::new(names, dims.to_vec(), probs)
    }

    /// Positive integer weights in `1..=max_weight`, normalized.
    pub fn random(dims: &[usize], max_weight: u64, rng: &mut impl Rng) -> Result<Self> {
        let cells: usize = dims.iter().product();
        let w: Vec<u64> = (0..cells).map(|_| rng.random_range(1..=max_weight)).collect();
        JointTable::from_weights(dims, &w)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn probs(&self) -> &[BigRational] {
        &self.probs
    }

    pub fn var(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    fn decode(&self, mut cell: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dims.len()];
        for v in (0..self.dims.len()).rev() {
            idx[v] = cell % self.dims[v];
            cell /= self.dims[v];
        }
        idx
    }

    fn check_vars(&self, groups: &[&[usize]]) -> Result<()> {
        let mut seen = vec![false; self.dims.len()];
        for &v in groups.iter().flat_map(|g| g.iter()) {
            if v >= self.dims.len() {
                return Err(Error::Dimension(format!("variable {v} outside the table")));
            }
            if seen[v] {
                return Err(Error::Validation(format!("variable {v} listed twice")));
            }
            seen[v] = true;
        }
        Ok(())
    }

    /// Marginal over `vars`, row-major in the listed order.
    pub fn marginal(&self, vars: &[usize]) -> Result<Vec<BigRational>> {
        self.check_vars(&[vars])?;
        let size: usize = vars.iter().map(|&v| self.dims[v]).product();
        let mut out = vec![BigRational::zero(); size];
        for (cell, p) in self.probs.iter().enumerate() {
            let idx = self.decode(cell);
            let pos = vars.iter().fold(0, |acc, &v| acc * self.dims[v] + idx[v]);
            out[pos] += p;
        }
        Ok(out)
    }

    pub fn entropy(&self, vars: &[usize]) -> Result<ExactReal> {
        entropy_of(&self.marginal(vars)?)
    }

    /// `H(T | G) = E_g H(T | G = g)`.
    pub fn conditional_entropy(&self, target: &[usize], given: &[usize]) -> Result<ExactReal> {
        self.check_vars(&[target, given])?;
        let mut h = ExactReal::zero();
        for (pg, slice) in self.slices(target, given)? {
            h += &entropy_of(&slice)?.scale(&pg);
        }
        Ok(h)
    }

    /// `I(A; B | G) = H(A | G) − H(A | B, G)`.
    pub fn mutual_information(&self, a: &[usize], b: &[usize], given: &[usize]) -> Result<ExactReal> {
        self.check_vars(&[a, b, given])?;
        let bg: Vec<usize> = b.iter().chain(given).copied().collect();
        Ok(self.conditional_entropy(a, given)? - self.conditional_entropy(a, &bg)?)
    }

    /// `E_{(b,g)} KL(A | b, g ‖ A | g)`, which equals `I(A; B | G)`.
    pub fn mutual_information_kl(&self, a: &[usize], b: &[usize], given: &[usize]) -> Result<ExactReal> {
        self.check_vars(&[a, b, given])?;
        let a_size: usize = a.iter().map(|&v| self.dims[v]).product();
        let b_size: usize = b.iter().map(|&v| self.dims[v]).product();
        let g_size: usize = given.iter().map(|&v| self.dims[v]).product();
        let order: Vec<usize> = given.iter().chain(b).chain(a).copied().collect();
        let joint = self.marginal(&order)?;
        let mut out = ExactReal::zero();
        for g in 0..g_size {
            let block = &joint[g * b_size * a_size..(g + 1) * b_size * a_size];
            let pg: BigRational = block.iter().sum();
            if pg.is_zero() {
                continue;
            }
            let a_given_g: Vec<BigRational> =
                (0..a_size).map(|x| (0..b_size).map(|y| &block[y * a_size + x]).sum::<BigRational>() / &pg).collect();
            let a_given_g = DiscreteDistribution::new(a_given_g)?;
            for y in 0..b_size {
                let row = &block[y * a_size..(y + 1) * a_size];
                let pbg: BigRational = row.iter().sum();
                if pbg.is_zero() {
                    continue;
                }
                let cond = DiscreteDistribution::new(row.iter().map(|p| p / &pbg).collect())?;
                match kl(&cond, &a_given_g)? {
                    Divergence::Finite(d) => out += &d.scale(&pbg),
                    Divergence::Infinite => unreachable!("a conditional is dominated by its mixture"),
                }
            }
        }
        Ok(out)
    }

    /// `(Pr(G = g), Pr(T | G = g))` for every `g` of positive mass.
    fn slices(&self, target: &[usize], given: &[usize]) -> Result<Vec<(BigRational, Vec<BigRational>)>> {
        let t_size: usize = target.iter().map(|&v| self.dims[v]).product();
        let order: Vec<usize> = given.iter().chain(target).copied().collect();
        let joint = self.marginal(&order)?;
        Ok(joint
            .chunks(t_size)
            .filter_map(|block| {
                let pg: BigRational = block.iter().sum();
                (!pg.is_zero()).then(|| {
                    let slice = block.iter().map(|p| p / &pg).collect();
                    (pg, slice)
                })
            })
            .collect())
    }

    /// `Pr(T | G = g)` where `g` lists one value per variable in `given`.
    pub fn conditional(&self, target: &[usize], given: &[usize], g: &[usize]) -> Result<DiscreteDistribution> {
        self.check_vars(&[target, given])?;
        if g.len() != given.len() || g.iter().zip(given).any(|(&x, &v)| x >= self.dims[v]) {
            return Err(Error::Domain("conditioning values do not match the variables".into()));
        }
        let t_size: usize = target.iter().map(|&v| self.dims[v]).product();
        let order: Vec<usize> = given.iter().chain(target).copied().collect();
        let joint = self.marginal(&order)?;
        let pos = g.iter().zip(given).fold(0, |acc, (&x, &v)| acc * self.dims[v] + x);
        let block = &joint[pos * t_size..(pos + 1) * t_size];
        let pg: BigRational = block.iter().sum();
        if pg.is_zero() {
            return Err(Error::Domain("conditioning on a zero-probability event".into()));
        }
        DiscreteDistribution::new(block.iter().map(|p| p / &pg).collect())
    }

    /// Product of independent marginals.
    pub fn product(parts: &[DiscreteDistribution]) -> Result<Self> {
        let dims: Vec<usize> = parts.iter().map(DiscreteDistribution::len).collect();
        let cells: usize = dims.iter().product();
        let mut probs = Vec::with_capacity(cells);
        for cell in 0..cells {
            let mut rest = cell;
            let mut idx = vec![0; parts.len()];
            for v in (0..parts.len()).rev() {
                idx[v] = rest % dims[v];
                rest /= dims[v];
            }
            probs.push(
                idx.iter()
                    .zip(parts)
                    .fold(BigRational::one(), |acc, (&i, d)| acc * &d.probs()[i]),
            );
        }
        JointTable::from_rationals(&dims, probs)
    }
}
