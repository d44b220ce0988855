//! Lexicographically-first MIS reduction.
//!
//! `v(0,0)` is joined to every other vertex of `V_0`. Between layers `j` and
//! `j + 1`, `v(j,i)` is joined to `v(j+1,i')` once for each of the two sets of
//! its step instance that misses `i'`, so its only non-neighbor in `V_{j+1}` is
//! the target of that instance. The isolated vertex `s = 0` only pads the
//! vertex count.

use crate::error::{Error, Result};
use crate::instances::HpcInstance;
use crate::reductions::cut::layer_provenance;
use crate::reductions::graph::{Edge, Layout, LayeredGraph, Provenance};

pub fn build_mis_graph(inst: &HpcInstance, k: usize) -> Result<LayeredGraph> {
    if k == 0 {
        return Err(Error::Validation("the MIS reduction needs k >= 1".into()));
    }
    let n = inst.n();
    let mut g = LayeredGraph::with_layout(Layout::Mis, n, k, false, false);
    let one = || num_bigint::BigUint::from(1u8);
    for i in 1..n {
        g.push(Edge::new(g.vertex(0, 0), g.vertex(0, i), one(), Provenance::Indep))?;
    }
    for j in 0..k {
        let (first, second) = layer_provenance(j);
        for i in 0..n {
            let set = inst.step_instance(j, i);
            for (bits, prov) in [(set.a(), first), (set.b(), second)] {
                for (other, _) in bits.iter().enumerate().filter(|(_, &b)| !b) {
                    g.push(Edge::new(g.vertex(j, i), g.vertex(j + 1, other), one(), prov))?;
                }
            }
        }
    }
    g.simple = !g.has_parallel_edges();
    g.canonicalize();
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::sample_hpc;

    #[test]
    fn n1_has_no_cross_edges() {
        let g = build_mis_graph(&sample_hpc(1, 0).unwrap(), 1).unwrap();
        assert!(g.edges().is_empty());
        assert_eq!(g.vertex_count(), 3);
    }

    #[test]
    fn each_vertex_misses_only_its_target() {
        let inst = sample_hpc(4, 11).unwrap();
        let g = build_mis_graph(&inst, 2).unwrap();
        for j in 0..2 {
            for i in 0..4 {
                let heads: Vec<usize> = (0..4)
                    .filter(|&h| !g.edges().iter().any(|e| e.tail == g.vertex(j, i) && e.head == g.vertex(j + 1, h)))
                    .collect();
                assert_eq!(heads, vec![inst.step_instance(j, i).target()]);
            }
        }
    }
}
