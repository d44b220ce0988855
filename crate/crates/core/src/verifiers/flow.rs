//! Exact max flow with arbitrary-precision capacities (Dinic).

use std::collections::VecDeque;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::reductions::LayeredGraph;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxFlow {
    pub value: BigUint,
    /// Vertices reachable from `s` in the final residual graph.
    pub source_side: Vec<bool>,
    /// Merged edges `(tail, head)` crossing the cut; undirected edges are
    /// reported with the smaller endpoint first.
    pub cut_edges: Vec<(usize, usize)>,
}

struct Arc {
    to: usize,
    rev: usize,
    cap: BigUint,
}

struct Network {
    adj: Vec<Vec<Arc>>,
    level: Vec<usize>,
    next: Vec<usize>,
}

impl Network {
    fn add(&mut self, u: usize, v: usize, forward: BigUint, backward: BigUint) {
        let (ru, rv) = (self.adj[v].len(), self.adj[u].len());
        self.adj[u].push(Arc { to: v, rev: ru, cap: forward });
        self.adj[v].push(Arc { to: u, rev: rv, cap: backward });
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = usize::MAX);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for a in &self.adj[u] {
                if !a.cap.is_zero() && self.level[a.to] == usize::MAX {
                    self.level[a.to] = self.level[u] + 1;
                    queue.push_back(a.to);
                }
            }
        }
        self.level[t] != usize::MAX
    }

    fn dfs(&mut self, u: usize, t: usize, limit: &BigUint) -> BigUint {
        if u == t {
            return limit.clone();
        }
        while self.next[u] < self.adj[u].len() {
            let idx = self.next[u];
            let (to, rev) = (self.adj[u][idx].to, self.adj[u][idx].rev);
            if !self.adj[u][idx].cap.is_zero() && self.level[to] == self.level[u] + 1 {
                let bound = limit.min(&self.adj[u][idx].cap).clone();
                let pushed = self.dfs(to, t, &bound);
                if !pushed.is_zero() {
                    self.adj[u][idx].cap -= &pushed;
                    self.adj[to][rev].cap += &pushed;
                    return pushed;
                }
            }
            self.next[u] += 1;
        }
        BigUint::zero()
    }
}

/// Max `s`-`t` flow of `g`. Parallel edges act as one edge of summed
/// capacity; an undirected edge has its capacity in both directions.
pub fn max_flow(g: &LayeredGraph) -> Result<MaxFlow> {
    let t = g
        .sink()
        .ok_or_else(|| Error::Validation("max_flow needs a graph with a sink".into()))?;
    max_flow_between(g, g.source(), t)
}

pub fn max_flow_between(g: &LayeredGraph, s: usize, t: usize) -> Result<MaxFlow> {
    let nv = g.vertex_count();
    if s >= nv || t >= nv || s == t {
        return Err(Error::Validation(format!("bad terminals s={s} t={t}")));
    }
    let caps = g.merged_capacities();
    let mut net = Network {
        adj: (0..nv).map(|_| Vec::new()).collect(),
        level: vec![0; nv],
        next: vec![0; nv],
    };
    for (&(u, v), c) in &caps {
        if u == v {
            continue;
        }
        let back = if g.is_directed() { BigUint::zero() } else { c.clone() };
        net.add(u, v, c.clone(), back);
    }
    let mut value = BigUint::zero();
    let unbounded: BigUint = caps.values().sum::<BigUint>() + 1u8;
    while net.bfs(s, t) {
        net.next.iter_mut().for_each(|x| *x = 0);
        loop {
            let pushed = net.dfs(s, t, &unbounded);
            if pushed.is_zero() {
                break;
            }
            value += pushed;
        }
    }
    net.bfs(s, t);
    let source_side: Vec<bool> = net.level.iter().map(|&l| l != usize::MAX).collect();
    let cut_edges = caps
        .keys()
        .copied()
        .filter(|&(u, v)| {
            if g.is_directed() {
                source_side[u] && !source_side[v]
            } else {
                source_side[u] != source_side[v]
            }
        })
        .collect();
    Ok(MaxFlow {
        value,
        source_side,
        cut_edges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reductions::{Edge, Provenance};

    fn edge(u: usize, v: usize, w: u32) -> Edge {
        Edge::new(u, v, BigUint::from(w), Provenance::Indep)
    }

    #[test]
    fn single_edge() {
        let g = LayeredGraph::plain(2, true, vec![edge(0, 1, 7)]).unwrap();
        let f = max_flow(&g).unwrap();
        assert_eq!(f.value, BigUint::from(7u8));
        assert_eq!(f.cut_edges, vec![(0, 1)]);
    }

    #[test]
    fn disconnected_is_zero() {
        let g = LayeredGraph::plain(3, true, vec![edge(0, 2, 4), edge(1, 2, 4)]).unwrap();
        assert!(max_flow(&g).unwrap().value.is_zero());
    }

    #[test]
    fn cut_weight_matches_value() {
        let g = LayeredGraph::plain(
            4,
            false,
            vec![edge(0, 2, 3), edge(0, 3, 2), edge(2, 3, 1), edge(2, 1, 2), edge(3, 1, 3), edge(2, 1, 1)],
        )
        .unwrap();
        let f = max_flow(&g).unwrap();
        assert_eq!(f.value, BigUint::from(5u8));
        assert_eq!(g.cut_weight(&f.source_side), f.value);
    }
}
