//! Cut-value decoding and the explicit optimal flow of the cut reduction.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::instances::{chase, HpcInstance, Universe};
use crate::reductions::{Layout, LayeredGraph};

/// `z_k` read off a min-cut value: the index and which universe it lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DecodedPointer {
    pub index: usize,
    pub universe: Universe,
}

/// `w* mod (n+1)` is the 0-based index of `z_k`; a residue of `n` cannot come
/// from a valid reduction.
pub fn decode_cut(w_star: &BigUint, n: usize, k: usize) -> Result<DecodedPointer> {
    if n == 0 {
        return Err(Error::InvalidSize("n must be positive".into()));
    }
    let r = (w_star % BigUint::from(n + 1)).to_usize().expect("residue below n + 1");
    if r == n {
        return Err(Error::ReductionViolation(format!(
            "cut value {w_star} leaves residue {n} modulo {}",
            n + 1
        )));
    }
    Ok(DecodedPointer {
        index: r,
        universe: Universe::of_step(k),
    })
}

/// Which family a certificate path belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum PathFamily {
    /// `P_j`, `1 <= j <= k`: leaves the pointer chain after `u_{j-1}`.
    Layer(usize),
    /// `P*`: the whole chain `u_0..u_k`.
    Star,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowPath {
    pub family: PathFamily,
    pub vertices: Vec<usize>,
    pub flow: BigUint,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FlowCertificate {
    pub paths: Vec<FlowPath>,
}

impl FlowCertificate {
    pub fn total_value(&self) -> BigUint {
        self.paths.iter().map(|p| &p.flow).sum()
    }

    pub fn family(&self, family: PathFamily) -> impl Iterator<Item = &FlowPath> {
        self.paths.iter().filter(move |p| p.family == family)
    }
}

/// With `u_j = v(j, z_j)`: for each `j` and each distinct out-neighbor
/// `v(j,i)` of `u_{j-1}`, the path `s, u_0..u_{j-1}, v(j,i), t` carries `w_j`;
/// the path `s, u_0..u_k, t` carries `z_k`.
pub fn build_flow_certificate(inst: &HpcInstance, k: usize, g: &LayeredGraph) -> Result<FlowCertificate> {
    if g.layout() != Layout::Cut || g.n() != inst.n() || g.k() != k || !g.is_directed() {
        return Err(Error::Validation("certificate needs the cut graph of this instance".into()));
    }
    let (s, t) = (g.source(), g.sink().expect("cut layout has a sink"));
    let z = chase(inst, k);
    let chain: Vec<usize> = (0..=k).map(|j| g.vertex(j, z.z()[j])).collect();
    let mut paths = Vec::new();
    for j in 1..=k {
        let heads: BTreeSet<usize> = g
            .edges()
            .iter()
            .filter(|e| e.tail == chain[j - 1] && e.head != t)
            .map(|e| e.head)
            .collect();
        for head in heads {
            let mut vertices = vec![s];
            vertices.extend_from_slice(&chain[..j]);
            vertices.extend([head, t]);
            paths.push(FlowPath {
                family: PathFamily::Layer(j),
                vertices,
                flow: g.ladder(j),
            });
        }
    }
    let mut vertices = vec![s];
    vertices.extend_from_slice(&chain);
    vertices.push(t);
    paths.push(FlowPath {
        family: PathFamily::Star,
        vertices,
        flow: BigUint::from(z.answer()),
    });
    Ok(FlowCertificate { paths })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CertificateCheck {
    pub feasible: bool,
    pub optimal: bool,
}

/// Feasible: every path runs from `s` to `t` and the summed flow on each
/// merged edge stays within its capacity. Optimal: the residual graph has no
/// `s`-`t` path. A path step along a missing edge is an error.
pub fn check_certificate(g: &LayeredGraph, cert: &FlowCertificate) -> Result<CertificateCheck> {
    let t = g.sink().ok_or_else(|| Error::Validation("graph has no sink".into()))?;
    let s = g.source();
    let caps = g.merged_capacities();
    let key = |u: usize, v: usize| if g.is_directed() { (u, v) } else { (u.min(v), u.max(v)) };
    let mut flow: BTreeMap<(usize, usize), BigUint> = BTreeMap::new();
    let mut endpoints_ok = true;
    for p in &cert.paths {
        endpoints_ok &= p.vertices.first() == Some(&s) && p.vertices.last() == Some(&t);
        for w in p.vertices.windows(2) {
            if !caps.contains_key(&key(w[0], w[1])) {
                return Err(Error::Validation(format!("path uses missing edge ({}, {})", w[0], w[1])));
            }
            *flow.entry((w[0], w[1])).or_insert_with(BigUint::zero) += &p.flow;
        }
    }
    let get = |m: &BTreeMap<(usize, usize), BigUint>, u: usize, v: usize| m.get(&(u, v)).cloned().unwrap_or_default();
    let cap = |u: usize, v: usize| -> BigUint {
        if g.is_directed() {
            caps.get(&(u, v)).cloned().unwrap_or_default()
        } else {
            caps.get(&key(u, v)).cloned().unwrap_or_default()
        }
    };
    // Net flow per merged edge; for undirected edges flow in both directions cancels.
    let within = caps.keys().all(|&(u, v)| {
        let (fwd, back) = (get(&flow, u, v), get(&flow, v, u));
        if g.is_directed() {
            fwd <= caps[&(u, v)]
        } else {
            let net = if fwd >= back { fwd - back } else { back - fwd };
            net <= caps[&(u, v)]
        }
    });
    let feasible = endpoints_ok && within;

    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); g.vertex_count()];
    for &(u, v) in caps.keys() {
        adj[u].insert(v);
        adj[v].insert(u);
    }
    let residual = |u: usize, v: usize| -> bool { cap(u, v) + get(&flow, v, u) > get(&flow, u, v) };
    let mut seen = vec![false; g.vertex_count()];
    seen[s] = true;
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if !seen[v] && residual(u, v) {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    Ok(CertificateCheck {
        feasible,
        optimal: !seen[t],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::sample_hpc;
    use crate::reductions::build_cut_graph;

    #[test]
    fn decode_examples() {
        let d = decode_cut(&BigUint::from(776u32), 5, 3).unwrap();
        assert_eq!((d.index, d.universe), (2, Universe::Y));
        assert_eq!(decode_cut(&BigUint::from(12u32), 5, 2).unwrap().index, 0);
        assert!(matches!(decode_cut(&BigUint::from(11u32), 5, 2), Err(Error::ReductionViolation(_))));
    }

    #[test]
    fn n1_k1_certificate() {
        let inst = sample_hpc(1, 0).unwrap();
        let g = build_cut_graph(&inst, 1).unwrap();
        let cert = build_flow_certificate(&inst, 1, &g).unwrap();
        let p1: Vec<_> = cert.family(PathFamily::Layer(1)).collect();
        assert_eq!(p1.len(), 1);
        assert_eq!(p1[0].flow, BigUint::from(2u8));
        assert!(cert.family(PathFamily::Star).all(|p| p.flow.is_zero()));
        assert_eq!(check_certificate(&g, &cert).unwrap(), CertificateCheck { feasible: true, optimal: true });
    }

    #[test]
    fn empty_and_perturbed() {
        let inst = sample_hpc(3, 2).unwrap();
        let g = build_cut_graph(&inst, 2).unwrap();
        let empty = check_certificate(&g, &FlowCertificate::default()).unwrap();
        assert!(empty.feasible && !empty.optimal);
        let mut cert = build_flow_certificate(&inst, 2, &g).unwrap();
        cert.paths[0].flow += 1u8;
        let c = check_certificate(&g, &cert).unwrap();
        assert!(!(c.feasible && c.optimal));
        cert.paths[0].vertices = vec![0, 1];
        assert!(check_certificate(&g, &cert).is_err());
    }
}
