//! Exact posteriors of Set-Int protocols under D_SI, the ε-solve measure, the
//! posterior ordering and the π_PI reduction from Pair-Int to Set-Int.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::info_theory::tvd_slices;
use crate::instances::{embed_pair_int, sample_pair_int_with, sample_set_int_with, PairIntInstance, Placement, SetIntInstance};
use crate::protocols::tree::{set_int_domain, set_int_input, ProtocolTree};
use crate::rng::{enumerate, SeededCoins, Stream};

/// Hard limits for exact enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationBudget {
    pub max_n: usize,
    pub max_tree_nodes: usize,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget {
            max_n: 4,
            max_tree_nodes: 12,
        }
    }
}

impl EnumerationBudget {
    pub fn check(&self, n: usize, tree: &ProtocolTree) -> Result<()> {
        if n > self.max_n {
            return Err(Error::Resource(format!(
                "exact enumeration needs n <= {}, got n = {n}",
                self.max_n
            )));
        }
        if tree.node_count() > self.max_tree_nodes {
            return Err(Error::Resource(format!(
                "exact enumeration needs a tree with at most {} nodes, got {}",
                self.max_tree_nodes,
                tree.node_count()
            )));
        }
        Ok(())
    }
}

fn check_domain(tree: &ProtocolTree, n: usize) -> Result<()> {
    let domain = set_int_domain(n)?;
    if tree.alice_inputs() != domain || tree.bob_inputs() != domain {
        return Err(Error::Dimension(format!(
            "tree has domains {}x{}, Set-Int on [{n}] needs {domain}x{domain}",
            tree.alice_inputs(),
            tree.bob_inputs()
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranscriptPosterior {
    /// Index into [`ProtocolTree::leaves`].
    pub leaf: usize,
    pub path: Vec<bool>,
    pub probability: BigRational,
    /// `dist(T | Π = path)`.
    pub posterior: Vec<BigRational>,
    /// `‖posterior − uniform‖_tvd`.
    pub tvd: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PosteriorReport {
    pub n: usize,
    /// Transcripts of positive probability, in leaf order.
    pub transcripts: Vec<TranscriptPosterior>,
    /// `E_Π ‖dist(T | Π) − U_[n]‖_tvd`.
    pub epsilon: BigRational,
}

impl PosteriorReport {
    pub fn posterior_of_leaf(&self, leaf: usize) -> Option<&TranscriptPosterior> {
        self.transcripts.iter().find(|t| t.leaf == leaf)
    }

    /// `E_Π Pr(I ≺ J)` with `I ~ dist(T | Π)` and `J` uniform on the rest.
    pub fn expected_misorder(&self) -> Result<BigRational> {
        let mut total = BigRational::zero();
        for t in &self.transcripts {
            total += &t.probability * check_ordering_bound(&t.posterior)?.pr_before;
        }
        Ok(total)
    }
}

/// Exact posteriors of `T` given each transcript, under the prior D_SI. The
/// prior is obtained by enumerating the D_SI sampler itself.
pub fn measure_eps_solve(tree: &ProtocolTree, n: usize, budget: &EnumerationBudget) -> Result<PosteriorReport> {
    check_domain(tree, n)?;
    budget.check(n, tree)?;
    let leaves = tree.leaves();
    let mut joint = vec![vec![BigRational::zero(); n]; leaves.len()];
    let mut cache: HashMap<(usize, usize), Vec<BigRational>> = HashMap::new();
    for w in enumerate(|r| sample_set_int_with(n, r, Stream::Public).expect("n >= 1")) {
        let inst = w.value;
        let key = (set_int_input(inst.a()), set_int_input(inst.b()));
        let dist = match cache.entry(key) {
            std::collections::hash_map::Entry::Occupied(e) => e.into_mut(),
            std::collections::hash_map::Entry::Vacant(e) => e.insert(tree.leaf_distribution(key.0, key.1)?),
        };
        for (l, pl) in dist.iter().enumerate() {
            if !pl.is_zero() {
                joint[l][inst.target()] += &w.weight * pl;
            }
        }
    }
    let uniform = vec![BigRational::new(BigInt::one(), BigInt::from(n)); n];
    let mut transcripts = Vec::new();
    let mut epsilon = BigRational::zero();
    for (l, row) in joint.into_iter().enumerate() {
        let probability: BigRational = row.iter().sum();
        if probability.is_zero() {
            continue;
        }
        let posterior: Vec<BigRational> = row.into_iter().map(|v| v / &probability).collect();
        let tvd = tvd_slices(&posterior, &uniform);
        epsilon += &probability * &tvd;
        transcripts.push(TranscriptPosterior {
            leaf: l,
            path: leaves[l].path.clone(),
            probability,
            posterior,
            tvd,
        });
    }
    Ok(PosteriorReport { n, transcripts, epsilon })
}

/// `x ≻ y` under a posterior: larger mass wins, ties go to the larger index.
pub fn ranks_above(posterior: &[BigRational], x: usize, y: usize) -> bool {
    match posterior[x].cmp(&posterior[y]) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => x > y,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderingBound {
    /// `TVD(posterior, uniform)`.
    pub delta: BigRational,
    /// `Pr(I ≺ J)` with `I ~ posterior` and `J` uniform on `[n] ∖ {I}`.
    pub pr_before: BigRational,
    /// `1/2 − nδ/(2n − 2)`.
    pub bound: BigRational,
    pub holds: bool,
    pub tight: bool,
}

pub fn check_ordering_bound(posterior: &[BigRational]) -> Result<OrderingBound> {
    let n = posterior.len();
    if n < 2 {
        return Err(Error::Validation("ordering needs at least two indices".into()));
    }
    if posterior.iter().any(Signed::is_negative) {
        return Err(Error::Validation("posterior has a negative entry".into()));
    }
    if !posterior.iter().sum::<BigRational>().is_one() {
        return Err(Error::Validation("posterior does not sum to 1".into()));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| match (x == y, ranks_above(posterior, x, y)) {
        (true, _) => Ordering::Equal,
        (false, true) => Ordering::Greater,
        (false, false) => Ordering::Less,
    });
    let nm1 = BigInt::from(n - 1);
    let mut pr_before = BigRational::zero();
    for (rank, &idx) in order.iter().enumerate() {
        let above = BigInt::from(n - 1 - rank);
        pr_before += &posterior[idx] * BigRational::new(above, nm1.clone());
    }
    let uniform = vec![BigRational::new(BigInt::one(), BigInt::from(n)); n];
    let delta = tvd_slices(posterior, &uniform);
    let bound = BigRational::new(BigInt::one(), BigInt::from(2))
        - &delta * BigRational::new(BigInt::from(n), BigInt::from(2 * n - 2));
    Ok(OrderingBound {
        holds: pr_before <= bound,
        tight: pr_before == bound,
        delta,
        pr_before,
        bound,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairIntRun {
    /// 1 if `i ≻ j`, else 2.
    pub answer: u8,
    pub instance: SetIntInstance,
    pub placement: Placement,
    pub leaf: usize,
}

/// One seeded execution of π_PI on `p`.
pub fn run_pair_int_seeded(
    p: &PairIntInstance,
    n: usize,
    tree: &ProtocolTree,
    seed: u64,
    budget: &EnumerationBudget,
) -> Result<PairIntRun> {
    let report = measure_eps_solve(tree, n, budget)?;
    let mut rng = SeededCoins::new(seed);
    let (instance, placement) = embed_pair_int(p, n, &mut rng)?;
    let leaf = tree.run(set_int_input(instance.a()), set_int_input(instance.b()), &mut rng)?;
    let post = &report
        .posterior_of_leaf(leaf)
        .expect("a reachable transcript has positive probability")
        .posterior;
    let answer = if ranks_above(post, placement.i, placement.j) { 1 } else { 2 };
    Ok(PairIntRun {
        answer,
        instance,
        placement,
        leaf,
    })
}

/// Exact `Pr(π_PI answers correctly)` over D_PI, the embedding randomness and
/// the protocol's coins.
pub fn pair_int_success_probability(n: usize, tree: &ProtocolTree, budget: &EnumerationBudget) -> Result<BigRational> {
    let report = measure_eps_solve(tree, n, budget)?;
    let answer_of_leaf: HashMap<usize, &Vec<BigRational>> =
        report.transcripts.iter().map(|t| (t.leaf, &t.posterior)).collect();
    let outcomes = enumerate(|r| -> Result<bool> {
        let p = sample_pair_int_with(r, Stream::Public);
        let (inst, place) = embed_pair_int(&p, n, r)?;
        let leaf = tree.run(set_int_input(inst.a()), set_int_input(inst.b()), r)?;
        let answer = if ranks_above(answer_of_leaf[&leaf], place.i, place.j) { 1 } else { 2 };
        Ok(answer == p.k())
    });
    let mut success = BigRational::zero();
    for w in outcomes {
        if w.value? {
            success += w.weight;
        }
    }
    Ok(success)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairIntMode {
    Seeded(u64),
    Enumerate,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PairIntOutcome {
    Answer(u8),
    SuccessProbability(BigRational),
}

/// π_PI in either mode. Enumerate mode averages over D_PI and ignores `p`.
pub fn run_pair_int_reduction(
    p: &PairIntInstance,
    n: usize,
    tree: &ProtocolTree,
    mode: PairIntMode,
    budget: &EnumerationBudget,
) -> Result<PairIntOutcome> {
    match mode {
        PairIntMode::Seeded(seed) => Ok(PairIntOutcome::Answer(run_pair_int_seeded(p, n, tree, seed, budget)?.answer)),
        PairIntMode::Enumerate => Ok(PairIntOutcome::SuccessProbability(pair_int_success_probability(n, tree, budget)?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn silent_protocol() {
        let silent = ProtocolTree::silent(4, 4);
        let budget = EnumerationBudget::default();
        let report = measure_eps_solve(&silent, 2, &budget).unwrap();
        assert!(report.epsilon.is_zero());
        assert_eq!(report.transcripts[0].posterior, vec![q(1, 2), q(1, 2)]);
        assert_eq!(pair_int_success_probability(2, &silent, &budget).unwrap(), q(1, 2));
    }

    #[test]
    fn ordering_examples() {
        let uniform = check_ordering_bound(&vec![q(1, 4); 4]).unwrap();
        assert_eq!((uniform.delta.clone(), uniform.pr_before.clone()), (q(0, 1), q(1, 2)));
        assert!(uniform.tight);
        let point = check_ordering_bound(&[q(1, 1), q(0, 1), q(0, 1)]).unwrap();
        assert_eq!((point.delta, point.pr_before), (q(2, 3), q(0, 1)));
        assert!(check_ordering_bound(&[q(1, 2), q(1, 3)]).is_err());
        assert!(check_ordering_bound(&[q(1, 1)]).is_err());
    }

    #[test]
    fn budget_and_domain_errors() {
        let budget = EnumerationBudget::default();
        let tree = ProtocolTree::silent(32, 32);
        assert!(matches!(measure_eps_solve(&tree, 5, &budget), Err(Error::Resource(_))));
        assert!(matches!(measure_eps_solve(&ProtocolTree::silent(4, 4), 3, &budget), Err(Error::Dimension(_))));
    }
}
