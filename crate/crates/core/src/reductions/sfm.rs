//! Cut-function oracle for the submodular minimization reduction.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::instances::HpcInstance;
use crate::reductions::cut::build_cut_graph;
use crate::reductions::graph::LayeredGraph;

/// Query accounting: total calls and calls per round.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OracleStats {
    pub query_count: u64,
    pub rounds: Vec<u64>,
}

/// `f(S)` = weight of the cut `({s} ∪ S, {t} ∪ (U \ S))` on the min-cut graph
/// of `HPC_{3k}`, where `U` is every vertex other than `s` and `t`.
///
/// Elements of `S` are positions in [`SubmodularOracle::ground_set`].
#[derive(Clone, Debug)]
pub struct SubmodularOracle {
    base: LayeredGraph,
    ground: Vec<usize>,
    stats: OracleStats,
}

pub fn build_sfm_oracle(inst: &HpcInstance, k: usize) -> Result<SubmodularOracle> {
    if k == 0 {
        return Err(Error::Validation("the SFM reduction needs k >= 1".into()));
    }
    Ok(SubmodularOracle::new(build_cut_graph(inst, 3 * k)?))
}

impl SubmodularOracle {
    pub fn new(base: LayeredGraph) -> Self {
        let ground = base.ground_set();
        SubmodularOracle {
            base,
            ground,
            stats: OracleStats {
                query_count: 0,
                rounds: vec![0],
            },
        }
    }

    pub fn base(&self) -> &LayeredGraph {
        &self.base
    }

    /// Vertex ids of `U`, in position order.
    pub fn ground_set(&self) -> &[usize] {
        &self.ground
    }

    pub fn ground_size(&self) -> usize {
        self.ground.len()
    }

    /// `M = Σ_e w_e`, an upper bound on every value.
    pub fn max_value(&self) -> BigUint {
        self.base.total_weight()
    }

    /// Evaluates `f` on a list of positions; duplicates are harmless.
    /// Every call counts as one query, including rejected ones.
    pub fn evaluate(&mut self, set: &[usize]) -> Result<BigUint> {
        self.count();
        let mut mask = vec![false; self.ground.len()];
        for &x in set {
            *mask
                .get_mut(x)
                .ok_or_else(|| Error::Domain(format!("element {x} outside U of size {}", self.ground.len())))? = true;
        }
        Ok(self.value(&mask))
    }

    /// Evaluates `f` on an indicator vector over `U`.
    pub fn evaluate_bits(&mut self, mask: &[bool]) -> Result<BigUint> {
        self.count();
        if mask.len() != self.ground.len() {
            return Err(Error::Domain(format!(
                "mask of length {} for U of size {}",
                mask.len(),
                self.ground.len()
            )));
        }
        Ok(self.value(mask))
    }

    /// Closes the current batch of queries.
    pub fn new_round(&mut self) {
        self.stats.rounds.push(0);
    }

    pub fn stats(&self) -> &OracleStats {
        &self.stats
    }

    fn count(&mut self) {
        self.stats.query_count += 1;
        *self.stats.rounds.last_mut().expect("rounds start non-empty") += 1;
    }

    fn value(&self, mask: &[bool]) -> BigUint {
        let mut side = vec![false; self.base.vertex_count()];
        side[self.base.source()] = true;
        for (&v, &inside) in self.ground.iter().zip(mask) {
            side[v] = inside;
        }
        self.base.cut_weight(&side)
    }
}
