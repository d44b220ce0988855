//! Lexicographically-first MIS and exhaustive submodular minimization.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::reductions::{LayeredGraph, SubmodularOracle};

/// Greedy MIS in the graph's lexicographic order (`V_0` first, by index
/// within a layer). The padding vertex `s` of the MIS layout is not visited.
pub fn lfmis(g: &LayeredGraph) -> Result<Vec<usize>> {
    lfmis_with_order(g, &g.lex_order())
}

pub fn lfmis_with_order(g: &LayeredGraph, order: &[usize]) -> Result<Vec<usize>> {
    if g.is_directed() {
        return Err(Error::Validation("lfmis expects an undirected graph".into()));
    }
    let mut adj = vec![Vec::new(); g.vertex_count()];
    for e in g.edges() {
        adj[e.tail].push(e.head);
        adj[e.head].push(e.tail);
    }
    let mut blocked = vec![false; g.vertex_count()];
    let mut chosen = Vec::new();
    for &v in order {
        if v >= g.vertex_count() {
            return Err(Error::Validation(format!("order names vertex {v} outside the graph")));
        }
        if blocked[v] {
            continue;
        }
        chosen.push(v);
        blocked[v] = true;
        for &u in &adj[v] {
            blocked[u] = true;
        }
    }
    Ok(chosen)
}

pub const SFM_BRUTE_FORCE_LIMIT: usize = 24;

/// Minimum of `f` over all subsets of `U`, by enumeration of bitmasks in
/// increasing order; the first minimizer wins. Queries run in one round.
pub fn brute_force_sfm(oracle: &mut SubmodularOracle) -> Result<(BigUint, Vec<usize>)> {
    let size = oracle.ground_size();
    if size > SFM_BRUTE_FORCE_LIMIT {
        return Err(Error::Resource(format!(
            "|U| = {size} exceeds the brute-force limit {SFM_BRUTE_FORCE_LIMIT}"
        )));
    }
    let mut best: Option<(BigUint, u32)> = None;
    let mut mask = vec![false; size];
    for bits in 0u32..(1u32 << size) {
        for (i, m) in mask.iter_mut().enumerate() {
            *m = bits >> i & 1 == 1;
        }
        let v = oracle.evaluate_bits(&mask)?;
        if best.as_ref().is_none_or(|(b, _)| &v < b) {
            best = Some((v, bits));
        }
    }
    let (value, bits) = best.expect("at least the empty set");
    Ok((value, (0..size).filter(|i| bits >> i & 1 == 1).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::sample_hpc;
    use crate::reductions::{build_mis_graph, build_sfm_oracle};

    #[test]
    fn edgeless_graph_takes_everything() {
        let g = LayeredGraph::plain(5, false, vec![]).unwrap();
        assert_eq!(lfmis(&g).unwrap(), vec![0, 1, 2, 3, 4]);
        let m = build_mis_graph(&sample_hpc(1, 0).unwrap(), 1).unwrap();
        assert_eq!(lfmis(&m).unwrap(), vec![1, 2]);
    }

    #[test]
    fn sfm_counts_every_subset() {
        let mut f = build_sfm_oracle(&sample_hpc(1, 0).unwrap(), 1).unwrap();
        let (_, _) = brute_force_sfm(&mut f).unwrap();
        assert_eq!(f.stats().query_count, 1 << f.ground_size());
    }
}
