//! Edge streams in player order and their text form.
//!
//! ```text
//! G layout=cut n=2 k=1 directed=1 simple=0
//! V 8
//! E 2 4 3 A
//! ...
//! ```
//!
//! Directed edges are `E` lines, undirected ones `U` lines.

use std::cmp::Ordering;
use std::fmt::Write as _;

use num_bigint::BigUint;

use crate::error::{parse_err, Error, Result};
use crate::instances::field;
use crate::reductions::graph::{Edge, Layout, LayeredGraph, Provenance};

/// Graph attributes that travel with the stream.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StreamHeader {
    pub layout: Layout,
    pub n: usize,
    pub k: usize,
    pub vertex_count: usize,
    pub directed: bool,
    pub simple: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeStream {
    pub header: StreamHeader,
    pub edges: Vec<Edge>,
}

/// Orders the edges of `g` into blocks D, C, B, A, indep.
pub fn emit_stream(g: &LayeredGraph) -> Result<EdgeStream> {
    if let Some(pos) = g.edges().iter().position(|e| e.provenance.is_none()) {
        return Err(Error::Validation(format!("edge #{pos} has no provenance tag")));
    }
    let mut edges = g.edges().to_vec();
    edges.sort_by(|x, y| g.stream_cmp(x, y));
    Ok(EdgeStream {
        header: StreamHeader {
            layout: g.layout(),
            n: g.n(),
            k: g.k(),
            vertex_count: g.vertex_count(),
            directed: g.is_directed(),
            simple: g.is_simple(),
        },
        edges,
    })
}

impl EdgeStream {
    /// Number of edges in each block, in stream order D, C, B, A, indep.
    pub fn block_sizes(&self) -> [usize; 5] {
        let mut sizes = [0; 5];
        for e in &self.edges {
            if let Some(p) = e.provenance {
                sizes[p.block()] += 1;
            }
        }
        sizes
    }

    /// True when the blocks appear in stream order.
    pub fn blocks_in_order(&self) -> bool {
        self.edges
            .windows(2)
            .all(|w| w[0].provenance.cmp(&w[1].provenance) != Ordering::Greater)
    }

    pub fn edge_line(&self, e: &Edge) -> String {
        let tag = if self.header.directed { 'E' } else { 'U' };
        let prov = e.provenance.map_or("?", Provenance::tag);
        format!("{tag} {} {} {} {prov}", e.tail, e.head, e.weight)
    }

    /// Bits of the serialized edge lines, newline included.
    pub fn serialized_bits(&self) -> u64 {
        self.edges.iter().map(|e| 8 * (self.edge_line(e).len() as u64 + 1)).sum()
    }

    pub fn to_text(&self) -> String {
        let h = &self.header;
        let mut out = format!(
            "G layout={} n={} k={} directed={} simple={}\nV {}\n",
            h.layout.tag(),
            h.n,
            h.k,
            u8::from(h.directed),
            u8::from(h.simple),
            h.vertex_count
        );
        for e in &self.edges {
            let _ = writeln!(out, "{}", self.edge_line(e));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (no, head) = lines.next().ok_or_else(|| parse_err(1, "empty stream"))?;
        let toks: Vec<&str> = head.split_whitespace().collect();
        if toks.len() != 6 || toks[0] != "G" {
            return Err(parse_err(no, "expected `G layout=.. n=.. k=.. directed=.. simple=..`"));
        }
        let layout = Layout::parse(field(Some(toks[1]), "layout", no)?)
            .ok_or_else(|| parse_err(no, "unknown layout"))?;
        let num = |tok: &str, key: &str| -> Result<usize> {
            field(Some(tok), key, no)?
                .parse()
                .map_err(|_| parse_err(no, format!("bad value for {key}")))
        };
        let flag = |tok: &str, key: &str| -> Result<bool> {
            match field(Some(tok), key, no)? {
                "0" => Ok(false),
                "1" => Ok(true),
                _ => Err(parse_err(no, format!("{key} must be 0 or 1"))),
            }
        };
        let (n, k) = (num(toks[2], "n")?, num(toks[3], "k")?);
        let (directed, simple) = (flag(toks[4], "directed")?, flag(toks[5], "simple")?);
        let (no, vline) = lines.next().ok_or_else(|| parse_err(no + 1, "missing V line"))?;
        let vertex_count = match vline.split_whitespace().collect::<Vec<_>>()[..] {
            ["V", c] => c.parse().map_err(|_| parse_err(no, "bad vertex count"))?,
            _ => return Err(parse_err(no, "expected `V <count>`")),
        };
        let tag = if directed { "E" } else { "U" };
        let mut edges = Vec::new();
        for (no, line) in lines {
            let t: Vec<&str> = line.split_whitespace().collect();
            if t.len() != 5 || t[0] != tag {
                return Err(parse_err(no, format!("expected `{tag} <tail> <head> <weight> <provenance>`")));
            }
            let vid = |s: &str| -> Result<usize> {
                let v: usize = s.parse().map_err(|_| parse_err(no, "bad vertex id"))?;
                if v >= vertex_count {
                    return Err(parse_err(no, "vertex id out of range"));
                }
                Ok(v)
            };
            let weight: BigUint = t[3].parse().map_err(|_| parse_err(no, "bad weight"))?;
            let prov = Provenance::parse(t[4]).ok_or_else(|| parse_err(no, "unknown provenance"))?;
            edges.push(Edge::new(vid(t[1])?, vid(t[2])?, weight, prov));
        }
        Ok(EdgeStream {
            header: StreamHeader {
                layout,
                n,
                k,
                vertex_count,
                directed,
                simple,
            },
            edges,
        })
    }

    /// Rebuilds the graph; edges keep their stream order.
    pub fn to_graph(&self) -> Result<LayeredGraph> {
        let h = &self.header;
        let mut g = LayeredGraph::with_layout(h.layout, h.n, h.k, h.directed, h.simple);
        if g.vertex_count != h.vertex_count {
            if h.layout != Layout::Plain {
                return Err(Error::Validation(format!(
                    "{} layout with n={} k={} has {} vertices, not {}",
                    h.layout.tag(),
                    h.n,
                    h.k,
                    g.vertex_count,
                    h.vertex_count
                )));
            }
            g.vertex_count = h.vertex_count;
        }
        for e in &self.edges {
            g.push(e.clone())?;
        }
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::sample_hpc;
    use crate::reductions::cut::{build_cut_graph, to_undirected};

    #[test]
    fn indep_edges_come_last() {
        let g = build_cut_graph(&sample_hpc(1, 0).unwrap(), 1).unwrap();
        let s = emit_stream(&g).unwrap();
        assert!(s.blocks_in_order());
        assert_eq!(s.block_sizes(), [0, 0, 1, 1, 3]);
        assert_eq!(s.edges.last().unwrap().provenance, Some(Provenance::Indep));
    }

    #[test]
    fn text_round_trip() {
        let g = build_cut_graph(&sample_hpc(3, 9).unwrap(), 2).unwrap();
        let s = emit_stream(&g).unwrap();
        let back = EdgeStream::parse(&s.to_text()).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.to_graph().unwrap(), g);
        let u = to_undirected(&g).unwrap().graph;
        let su = emit_stream(&u).unwrap();
        assert!(su.to_text().lines().nth(2).unwrap().starts_with("U "));
        assert_eq!(EdgeStream::parse(&su.to_text()).unwrap().to_graph().unwrap(), u);
    }

    #[test]
    fn missing_provenance_is_rejected() {
        let mut e = Edge::new(0, 1, BigUint::from(1u8), Provenance::Indep);
        e.provenance = None;
        let g = LayeredGraph::plain(2, true, vec![e]).unwrap();
        assert!(matches!(emit_stream(&g), Err(Error::Validation(_))));
    }

    #[test]
    fn malformed_lines_report_line_numbers() {
        let text = "G layout=plain n=0 k=0 directed=1 simple=1\nV 2\nE 0 5 1 A\n";
        assert!(matches!(EdgeStream::parse(text), Err(Error::Parse { line: 3, .. })));
    }
}
