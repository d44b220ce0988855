//! Min s-t cut reduction, its simple-graph variant and the undirected gadget.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::instances::{HpcInstance, Universe};
use crate::reductions::graph::{Edge, Layout, LayeredGraph, Provenance, VertexLabel};

/// Provenance tags of the two sets consulted between layers `j` and `j + 1`.
pub(crate) fn layer_provenance(j: usize) -> (Provenance, Provenance) {
    match Universe::of_step(j) {
        Universe::X => (Provenance::A, Provenance::B),
        Universe::Y => (Provenance::C, Provenance::D),
    }
}

/// Weighted multigraph whose max flow is `K (n+1) + z_k` for some `K >= 1`.
///
/// * `s -> v(0,0)` with weight `w_0`;
/// * `v(j,i) -> t` with weight `w_j` for `1 <= j <= k`;
/// * `v(k,i) -> t` with weight `i` (the 0-based index);
/// * for `j < k`, `v(j,i) -> v(j+1,i')` with weight `w_{j+1}` once for each of
///   the two sets of the step-`j` instance of `i` that contains `i'`.
pub fn build_cut_graph(inst: &HpcInstance, k: usize) -> Result<LayeredGraph> {
    if k == 0 {
        return Err(Error::Validation("the cut reduction needs k >= 1".into()));
    }
    let n = inst.n();
    let mut g = LayeredGraph::with_layout(Layout::Cut, n, k, true, false);
    let (s, t) = (g.source(), g.sink().expect("cut layout has a sink"));
    g.push(Edge::new(s, g.vertex(0, 0), g.ladder(0), Provenance::Indep))?;
    for j in 0..k {
        let w_next = g.ladder(j + 1);
        let (first, second) = layer_provenance(j);
        for i in 0..n {
            let set = inst.step_instance(j, i);
            for (bits, prov) in [(set.a(), first), (set.b(), second)] {
                for (target, _) in bits.iter().enumerate().filter(|(_, &b)| b) {
                    g.push(Edge::new(g.vertex(j, i), g.vertex(j + 1, target), w_next.clone(), prov))?;
                }
            }
        }
    }
    for j in 1..=k {
        for i in 0..n {
            g.push(Edge::new(g.vertex(j, i), t, g.ladder(j), Provenance::Indep))?;
        }
    }
    for i in 0..n {
        g.push(Edge::new(g.vertex(k, i), t, BigUint::from(i), Provenance::Indep))?;
    }
    g.canonicalize();
    Ok(g)
}

/// Splits every layer vertex into a hub and two out-ports so that no parallel
/// edges remain. Edges enter the hub; an edge added for the first set (A or C)
/// leaves from the first port and one added for the second set (B or D) from
/// the second port. Hub-to-port edges carry `w_0`, which no cut below the
/// trivial one can afford. The two parallel `v(k,i) -> t` edges merge into one.
///
/// A graph that is already split is returned unchanged.
pub fn simplify_graph(g: &LayeredGraph) -> Result<LayeredGraph> {
    match g.layout() {
        Layout::Split => return Ok(g.clone()),
        Layout::Cut if g.is_directed() => {}
        _ => return Err(Error::Validation("simplify_graph expects a directed cut graph".into())),
    }
    let (n, k) = (g.n(), g.k());
    let mut out = LayeredGraph::with_layout(Layout::Split, n, k, true, true);
    let w0 = g.ladder(0);
    for j in 0..=k {
        for i in 0..n {
            let hub = out.vertex(j, i);
            let (p1, p2) = out.split_ports(j, i);
            out.push(Edge::new(hub, p1, w0.clone(), Provenance::Indep))?;
            out.push(Edge::new(hub, p2, w0.clone(), Provenance::Indep))?;
        }
    }
    let layer = |v: usize| match g.label(v) {
        VertexLabel::Layer { layer, index } => Some((layer, index)),
        _ => None,
    };
    let mut to_sink: BTreeMap<usize, BigUint> = BTreeMap::new();
    for e in g.edges() {
        let prov = e.provenance.ok_or_else(|| Error::Validation("edge without provenance".into()))?;
        match (layer(e.tail), layer(e.head)) {
            (None, Some((j, i))) if e.tail == g.source() => {
                out.push(Edge::new(out.source(), out.vertex(j, i), e.weight.clone(), prov))?;
            }
            (Some((j, i)), None) if Some(e.head) == g.sink() => {
                *to_sink.entry(out.vertex(j, i)).or_insert_with(BigUint::zero) += &e.weight;
            }
            (Some((j, i)), Some((j2, i2))) => {
                let (p1, p2) = out.split_ports(j, i);
                let port = match prov {
                    Provenance::A | Provenance::C => p1,
                    Provenance::B | Provenance::D => p2,
                    Provenance::Indep => return Err(Error::Validation("layer edge tagged indep".into())),
                };
                out.push(Edge::new(port, out.vertex(j2, i2), e.weight.clone(), prov))?;
            }
            _ => return Err(Error::Validation(format!("unexpected edge ({}, {})", e.tail, e.head))),
        }
    }
    let sink = out.sink().expect("split layout has a sink");
    for (hub, w) in to_sink {
        out.push(Edge::new(hub, sink, w, Provenance::Indep))?;
    }
    out.canonicalize();
    debug_assert!(!out.has_parallel_edges());
    Ok(out)
}

/// Undirected gadget plus the total directed weight `Σ_e c_e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UndirectedReduction {
    pub graph: LayeredGraph,
    pub weight_sum: BigUint,
}

impl UndirectedReduction {
    /// Recovers the directed max flow `F` from the undirected one.
    ///
    /// Routing `c_e` along `s – v – u – t` for every directed `(u, v)` pushes
    /// `Σ c_e` and leaves a residual graph that is the directed graph with
    /// every capacity doubled, so the undirected value is `Σ c_e + 2F`.
    pub fn directed_flow(&self, undirected_flow: &BigUint) -> Result<BigUint> {
        if undirected_flow < &self.weight_sum {
            return Err(Error::ReductionViolation(
                "undirected flow is below the pushed initial flow".into(),
            ));
        }
        let rest = undirected_flow - &self.weight_sum;
        if rest.bit(0) {
            return Err(Error::ReductionViolation("undirected flow minus Σc is odd".into()));
        }
        Ok(rest >> 1)
    }
}

/// Replaces each directed edge `(u, v)` of weight `c` by the undirected edges
/// `{s, v}`, `{u, v}` and `{t, u}`, each of weight `c`.
pub fn to_undirected(g: &LayeredGraph) -> Result<UndirectedReduction> {
    if !g.is_directed() {
        return Err(Error::Validation("to_undirected expects a directed graph".into()));
    }
    let (s, t) = (g.source(), g.sink().ok_or_else(|| Error::Validation("graph has no sink".into()))?);
    let mut out = g.clone();
    out.directed = false;
    out.simple = false;
    out.edges.clear();
    for e in g.edges() {
        let prov = e.provenance.ok_or_else(|| Error::Validation("edge without provenance".into()))?;
        out.push(Edge::new(s, e.head, e.weight.clone(), prov))?;
        out.push(Edge::new(e.tail, e.head, e.weight.clone(), prov))?;
        out.push(Edge::new(t, e.tail, e.weight.clone(), prov))?;
    }
    out.canonicalize();
    Ok(UndirectedReduction {
        weight_sum: g.total_weight(),
        graph: out,
    })
}
