//! Information quantities of private-coin protocol trees.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::info_theory::dist::hellinger_squared_slices;
use crate::info_theory::exact::ExactReal;
use crate::info_theory::joint::JointTable;
use crate::protocols::{Node, Owner, ProtocolTree};

/// Squared Hellinger distances `h²(Π_{x,y}, Π_{x',y'})` and `h²(Π_{x,y'}, Π_{x',y})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutAndPaste {
    pub straight: ExactReal,
    pub crossed: ExactReal,
}

impl CutAndPaste {
    pub fn equal(&self) -> bool {
        self.straight == self.crossed
    }
}

pub fn cut_and_paste_check(tree: &ProtocolTree, x: usize, x2: usize, y: usize, y2: usize) -> Result<CutAndPaste> {
    let d = |a, b| tree.leaf_distribution(a, b);
    Ok(CutAndPaste {
        straight: hellinger_squared_slices(&d(x, y)?, &d(x2, y2)?)?,
        crossed: hellinger_squared_slices(&d(x, y2)?, &d(x2, y)?)?,
    })
}

/// Table over `(X, Y, Π)` with `Π` the reached leaf.
pub fn transcript_table(tree: &ProtocolTree, prior: &JointTable) -> Result<JointTable> {
    check_prior(tree, prior)?;
    let leaves = tree.leaves().len();
    let mut probs = Vec::with_capacity(prior.probs().len() * leaves);
    for x in 0..tree.alice_inputs() {
        for y in 0..tree.bob_inputs() {
            let pxy = &prior.probs()[x * tree.bob_inputs() + y];
            for p in tree.leaf_distribution(x, y)? {
                probs.push(pxy * p);
            }
        }
    }
    JointTable::new(
        vec!["X".into(), "Y".into(), "T".into()],
        vec![tree.alice_inputs(), tree.bob_inputs(), leaves],
        probs,
    )
}

fn check_prior(tree: &ProtocolTree, prior: &JointTable) -> Result<()> {
    if prior.dims() != [tree.alice_inputs(), tree.bob_inputs()] {
        return Err(Error::Dimension(format!(
            "prior of shape {:?} for a protocol on {} x {} inputs",
            prior.dims(),
            tree.alice_inputs(),
            tree.bob_inputs()
        )));
    }
    Ok(())
}

/// `I(Π; X | Y) + I(Π; Y | X)` in bits.
pub fn internal_info_cost(tree: &ProtocolTree, prior: &JointTable) -> Result<ExactReal> {
    let t = transcript_table(tree, prior)?;
    Ok(t.mutual_information(&[2], &[0], &[1])? + t.mutual_information(&[2], &[1], &[0])?)
}

/// Worst-case transcript length in bits.
pub fn communication_cost(tree: &ProtocolTree) -> usize {
    tree.depth()
}

/// A public-coin protocol: draw branch `r` with probability `ρ_r`, then run
/// the private-coin tree `π^r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PublicCoinProtocol {
    pub branches: Vec<(BigRational, ProtocolTree)>,
}

impl PublicCoinProtocol {
    pub fn new(branches: Vec<(BigRational, ProtocolTree)>) -> Result<Self> {
        let total: BigRational = branches.iter().map(|(p, _)| p).sum();
        if branches.is_empty() || !total.is_one() {
            return Err(Error::Validation("public coin weights must sum to 1".into()));
        }
        let (a, b) = (branches[0].1.alice_inputs(), branches[0].1.bob_inputs());
        if branches.iter().any(|(_, t)| t.alice_inputs() != a || t.bob_inputs() != b) {
            return Err(Error::Dimension("branches disagree on input domains".into()));
        }
        Ok(PublicCoinProtocol { branches })
    }

    /// `I(Π R; X | Y) + I(Π R; Y | X)` where the transcript includes `R`.
    pub fn info_cost(&self, prior: &JointTable) -> Result<ExactReal> {
        let first = &self.branches[0].1;
        check_prior(first, prior)?;
        let (ax, by) = (first.alice_inputs(), first.bob_inputs());
        let width = self.branches.iter().map(|(_, t)| t.leaves().len()).max().unwrap_or(1);
        let r_count = self.branches.len();
        let mut probs = vec![BigRational::zero(); ax * by * r_count * width];
        for x in 0..ax {
            for y in 0..by {
                let pxy = &prior.probs()[x * by + y];
                for (r, (rho, tree)) in self.branches.iter().enumerate() {
                    for (leaf, p) in tree.leaf_distribution(x, y)?.into_iter().enumerate() {
                        probs[((x * by + y) * r_count + r) * width + leaf] = pxy * rho * p;
                    }
                }
            }
        }
        let t = JointTable::new(
            vec!["X".into(), "Y".into(), "R".into(), "T".into()],
            vec![ax, by, r_count, width],
            probs,
        )?;
        Ok(t.mutual_information(&[2, 3], &[0], &[1])? + t.mutual_information(&[2, 3], &[1], &[0])?)
    }

    /// `E_r IC(π^r)`.
    pub fn averaged_info_cost(&self, prior: &JointTable) -> Result<ExactReal> {
        let mut out = ExactReal::zero();
        for (rho, tree) in &self.branches {
            out += &internal_info_cost(tree, prior)?.scale(rho);
        }
        Ok(out)
    }
}

/// Random private-coin tree of depth at most `max_depth`. Coin biases are
/// `k/d` with `d <= 4`, so some nodes are deterministic.
pub fn random_tree(alice_inputs: usize, bob_inputs: usize, max_depth: usize, rng: &mut impl Rng) -> Result<ProtocolTree> {
    fn grow(depth: usize, ax: usize, by: usize, rng: &mut impl Rng) -> Node {
        if depth == 0 || rng.random_range(0..4) == 0 {
            return Node::leaf();
        }
        let (owner, m) = if rng.random_bool(0.5) { (Owner::Alice, ax) } else { (Owner::Bob, by) };
        let probs = (0..m)
            .map(|_| {
                let d: i64 = rng.random_range(1..=4);
                BigRational::new(BigInt::from(rng.random_range(0..=d)), BigInt::from(d))
            })
            .collect();
        let zero = grow(depth - 1, ax, by, rng);
        let one = grow(depth - 1, ax, by, rng);
        Node::internal(owner, probs, zero, one)
    }
    ProtocolTree::new(alice_inputs, bob_inputs, grow(max_depth, alice_inputs, bob_inputs, rng))
}
