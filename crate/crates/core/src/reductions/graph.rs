//! Layered graphs produced by the reductions.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};

/// Which player's input an edge depends on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Provenance {
    D,
    C,
    B,
    A,
    Indep,
}

impl Provenance {
    /// Stream block order: D, C, B, A, then input-independent edges.
    pub const STREAM_ORDER: [Provenance; 5] = [Provenance::D, Provenance::C, Provenance::B, Provenance::A, Provenance::Indep];

    pub fn block(self) -> usize {
        self as usize
    }

    pub fn tag(self) -> &'static str {
        match self {
            Provenance::A => "A",
            Provenance::B => "B",
            Provenance::C => "C",
            Provenance::D => "D",
            Provenance::Indep => "indep",
        }
    }

    pub fn parse(s: &str) -> Option<Provenance> {
        Some(match s {
            "A" => Provenance::A,
            "B" => Provenance::B,
            "C" => Provenance::C,
            "D" => Provenance::D,
            "indep" => Provenance::Indep,
            _ => return None,
        })
    }
}

/// Vertex numbering scheme of a graph.
///
/// * `Cut`: `s = 0`, `t = 1`, `v(j,i) = 2 + j n + i`.
/// * `Mis`: `s = 0` (isolated), `v(j,i) = 1 + j n + i`, no sink.
/// * `Split`: `s = 0`, `t = 1`, and `v(j,i)` becomes the hub `2 + 3(j n + i)`
///   followed by its two out-ports.
/// * `Plain`: `s = 0`, `t = 1`, other vertices unlabeled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Layout {
    Cut,
    Mis,
    Split,
    Plain,
}

impl Layout {
    pub fn tag(self) -> &'static str {
        match self {
            Layout::Cut => "cut",
            Layout::Mis => "mis",
            Layout::Split => "split",
            Layout::Plain => "plain",
        }
    }

    pub fn parse(s: &str) -> Option<Layout> {
        Some(match s {
            "cut" => Layout::Cut,
            "mis" => Layout::Mis,
            "split" => Layout::Split,
            "plain" => Layout::Plain,
            _ => return None,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Port {
    Hub,
    First,
    Second,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VertexLabel {
    Source,
    Sink,
    Layer { layer: usize, index: usize },
    Split { layer: usize, index: usize, port: Port },
    Plain(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
    pub weight: BigUint,
    pub provenance: Option<Provenance>,
}

impl Edge {
    pub fn new(tail: usize, head: usize, weight: BigUint, provenance: Provenance) -> Self {
        Edge {
            tail,
            head,
            weight,
            provenance: Some(provenance),
        }
    }
}

/// Reduction target: vertices `s`, `t` and layers `V_0..V_k` of `n` vertices,
/// with weighted multigraph edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LayeredGraph {
    pub(crate) layout: Layout,
    pub(crate) n: usize,
    pub(crate) k: usize,
    pub(crate) vertex_count: usize,
    pub(crate) directed: bool,
    pub(crate) simple: bool,
    pub(crate) edges: Vec<Edge>,
}

/// `w_j = (n+1)^(k+1-j)`.
pub fn ladder_weight(n: usize, k: usize, j: usize) -> BigUint {
    assert!(j <= k + 1, "layer {j} beyond k + 1 = {}", k + 1);
    num_traits::pow(BigUint::from(n + 1), k + 1 - j)
}

impl LayeredGraph {
    pub(crate) fn with_layout(layout: Layout, n: usize, k: usize, directed: bool, simple: bool) -> Self {
        let vertex_count = match layout {
            Layout::Cut => (k + 1) * n + 2,
            Layout::Mis => (k + 1) * n + 1,
            Layout::Split => 3 * (k + 1) * n + 2,
            Layout::Plain => 2,
        };
        LayeredGraph {
            layout,
            n,
            k,
            vertex_count,
            directed,
            simple,
            edges: Vec::new(),
        }
    }

    /// A graph with no layer structure: `s = 0`, `t = 1`.
    pub fn plain(vertex_count: usize, directed: bool, edges: Vec<Edge>) -> Result<Self> {
        if vertex_count < 2 {
            return Err(Error::InvalidSize("a plain graph needs s and t".into()));
        }
        let mut g = LayeredGraph::with_layout(Layout::Plain, 0, 0, directed, false);
        g.vertex_count = vertex_count;
        for e in edges {
            g.push(e)?;
        }
        g.simple = !g.has_parallel_edges();
        Ok(g)
    }

    pub(crate) fn push(&mut self, e: Edge) -> Result<()> {
        if e.tail >= self.vertex_count || e.head >= self.vertex_count {
            return Err(Error::Validation(format!(
                "edge ({}, {}) outside {} vertices",
                e.tail, e.head, self.vertex_count
            )));
        }
        self.edges.push(e);
        Ok(())
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn is_simple(&self) -> bool {
        self.simple
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn source(&self) -> usize {
        0
    }

    pub fn sink(&self) -> Option<usize> {
        match self.layout {
            Layout::Mis => None,
            _ => Some(1),
        }
    }

    /// Vertex id of `v(j,i)` (its hub in the split layout).
    pub fn vertex(&self, j: usize, i: usize) -> usize {
        assert!(j <= self.k && i < self.n, "v({j},{i}) outside the layers");
        match self.layout {
            Layout::Cut => 2 + j * self.n + i,
            Layout::Mis => 1 + j * self.n + i,
            Layout::Split => 2 + 3 * (j * self.n + i),
            Layout::Plain => panic!("plain graphs have no layers"),
        }
    }

    /// Out-ports of `v(j,i)` in the split layout.
    pub fn split_ports(&self, j: usize, i: usize) -> (usize, usize) {
        assert_eq!(self.layout, Layout::Split);
        let hub = self.vertex(j, i);
        (hub + 1, hub + 2)
    }

    pub fn label(&self, v: usize) -> VertexLabel {
        assert!(v < self.vertex_count, "vertex {v} out of range");
        let layer_of = |r: usize| (r / self.n, r % self.n);
        match (self.layout, v) {
            (_, 0) => VertexLabel::Source,
            (Layout::Mis, _) => {
                let (layer, index) = layer_of(v - 1);
                VertexLabel::Layer { layer, index }
            }
            (_, 1) => VertexLabel::Sink,
            (Layout::Cut, _) => {
                let (layer, index) = layer_of(v - 2);
                VertexLabel::Layer { layer, index }
            }
            (Layout::Split, _) => {
                let (layer, index) = layer_of((v - 2) / 3);
                let port = [Port::Hub, Port::First, Port::Second][(v - 2) % 3];
                VertexLabel::Split { layer, index, port }
            }
            (Layout::Plain, _) => VertexLabel::Plain(v),
        }
    }

    pub fn ladder(&self, j: usize) -> BigUint {
        ladder_weight(self.n, self.k, j)
    }

    /// `M = Σ_e w_e`.
    pub fn total_weight(&self) -> BigUint {
        self.edges.iter().map(|e| &e.weight).sum()
    }

    /// All vertices other than `s` and `t`.
    pub fn ground_set(&self) -> Vec<usize> {
        (0..self.vertex_count)
            .filter(|&v| v != self.source() && Some(v) != self.sink())
            .collect()
    }

    /// Greedy order for the MIS reduction: `V_0` first, by index within layer.
    pub fn lex_order(&self) -> Vec<usize> {
        match self.layout {
            Layout::Mis | Layout::Cut => (0..=self.k)
                .flat_map(|j| (0..self.n).map(move |i| (j, i)))
                .map(|(j, i)| self.vertex(j, i))
                .collect(),
            _ => (0..self.vertex_count).collect(),
        }
    }

    pub fn has_parallel_edges(&self) -> bool {
        let mut keys: Vec<(usize, usize)> = self
            .edges
            .iter()
            .map(|e| {
                if self.directed {
                    (e.tail, e.head)
                } else {
                    (e.tail.min(e.head), e.tail.max(e.head))
                }
            })
            .collect();
        keys.sort_unstable();
        keys.windows(2).any(|w| w[0] == w[1])
    }

    fn layer_key(&self, v: usize) -> usize {
        match self.label(v) {
            VertexLabel::Source => 0,
            VertexLabel::Layer { layer, .. } | VertexLabel::Split { layer, .. } => layer + 1,
            VertexLabel::Sink => self.k + 2,
            VertexLabel::Plain(_) => 1,
        }
    }

    /// Stream order: provenance block (D, C, B, A, indep), then the tail's
    /// layer, tail id, head id and weight.
    pub(crate) fn stream_cmp(&self, x: &Edge, y: &Edge) -> Ordering {
        let block = |e: &Edge| e.provenance.map_or(usize::MAX, Provenance::block);
        (block(x), self.layer_key(x.tail), x.tail, x.head, &x.weight).cmp(&(
            block(y),
            self.layer_key(y.tail),
            y.tail,
            y.head,
            &y.weight,
        ))
    }

    pub(crate) fn canonicalize(&mut self) {
        let mut edges = std::mem::take(&mut self.edges);
        edges.sort_by(|x, y| self.stream_cmp(x, y));
        self.edges = edges;
    }

    /// Sums of parallel edges: `(tail, head) -> capacity`. Undirected edges are
    /// keyed with the smaller endpoint first.
    pub fn merged_capacities(&self) -> std::collections::BTreeMap<(usize, usize), BigUint> {
        let mut caps = std::collections::BTreeMap::new();
        for e in &self.edges {
            let key = if self.directed {
                (e.tail, e.head)
            } else {
                (e.tail.min(e.head), e.tail.max(e.head))
            };
            *caps.entry(key).or_insert_with(BigUint::zero) += &e.weight;
        }
        caps
    }

    /// Weight of the cut `(side, complement)`: edges leaving `side`, or for
    /// undirected graphs edges with exactly one endpoint in `side`.
    pub fn cut_weight(&self, side: &[bool]) -> BigUint {
        self.edges
            .iter()
            .filter(|e| {
                if self.directed {
                    side[e.tail] && !side[e.head]
                } else {
                    side[e.tail] != side[e.head]
                }
            })
            .map(|e| &e.weight)
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladder_steps_by_n_plus_one() {
        for n in 1..6 {
            for k in 1..5 {
                for j in 0..k {
                    assert_eq!(ladder_weight(n, k, j), ladder_weight(n, k, j + 1) * BigUint::from(n + 1));
                }
                assert_eq!(ladder_weight(n, k, k), BigUint::from(n + 1));
            }
        }
        assert_eq!(ladder_weight(9, 30, 0).bits(), 103, "w_0 outgrows 64 bits");
    }

    #[test]
    fn labels_invert_vertex_ids() {
        for layout in [Layout::Cut, Layout::Mis, Layout::Split] {
            let g = LayeredGraph::with_layout(layout, 3, 2, true, false);
            for j in 0..=2 {
                for i in 0..3 {
                    match g.label(g.vertex(j, i)) {
                        VertexLabel::Layer { layer, index } | VertexLabel::Split { layer, index, port: Port::Hub } => {
                            assert_eq!((layer, index), (j, i))
                        }
                        other => panic!("unexpected label {other:?}"),
                    }
                }
            }
        }
    }
}
