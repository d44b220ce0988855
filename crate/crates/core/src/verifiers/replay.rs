//! Multi-pass replay of an edge stream with per-pass state accounting.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::reductions::{Edge, EdgeStream, StreamHeader};
use crate::verifiers::flow::max_flow;

/// A streaming algorithm under test.
pub trait StreamConsumer {
    type Output;

    /// Whether another pass over the stream is required.
    fn needs_pass(&self) -> bool;
    fn begin_pass(&mut self, header: &StreamHeader, pass: usize);
    fn consume_edge(&mut self, stream: &EdgeStream, edge: &Edge);
    /// Size of the state kept at the end of the pass, in bits.
    fn end_pass(&mut self) -> u64;
    fn finish(self, header: &StreamHeader) -> Result<Self::Output>;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StreamConsumerReport<O> {
    pub passes: usize,
    pub pass_bits: Vec<u64>,
    pub max_bits: u64,
    pub output: O,
}

pub fn replay_stream<C: StreamConsumer>(
    stream: &EdgeStream,
    mut consumer: C,
    pass_limit: usize,
) -> Result<StreamConsumerReport<C::Output>> {
    let mut pass_bits = Vec::new();
    while consumer.needs_pass() {
        if pass_bits.len() == pass_limit {
            return Err(Error::StreamViolation(format!(
                "consumer wants pass {} but the limit is {pass_limit}",
                pass_limit + 1
            )));
        }
        consumer.begin_pass(&stream.header, pass_bits.len());
        for e in &stream.edges {
            consumer.consume_edge(stream, e);
        }
        pass_bits.push(consumer.end_pass());
    }
    Ok(StreamConsumerReport {
        passes: pass_bits.len(),
        max_bits: pass_bits.iter().copied().max().unwrap_or(0),
        pass_bits,
        output: consumer.finish(&stream.header)?,
    })
}

/// Keeps every edge line and solves min cut exactly after one pass.
#[derive(Clone, Debug, Default)]
pub struct StoreEverything {
    edges: Vec<Edge>,
    bits: u64,
    done: bool,
}

impl StreamConsumer for StoreEverything {
    type Output = BigUint;

    fn needs_pass(&self) -> bool {
        !self.done
    }

    fn begin_pass(&mut self, _header: &StreamHeader, _pass: usize) {
        self.edges.clear();
        self.bits = 0;
    }

    fn consume_edge(&mut self, stream: &EdgeStream, edge: &Edge) {
        self.bits += 8 * (stream.edge_line(edge).len() as u64 + 1);
        self.edges.push(edge.clone());
    }

    fn end_pass(&mut self) -> u64 {
        self.done = true;
        self.bits
    }

    fn finish(self, header: &StreamHeader) -> Result<BigUint> {
        let stream = EdgeStream {
            header: *header,
            edges: self.edges,
        };
        Ok(max_flow(&stream.to_graph()?)?.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::sample_hpc;
    use crate::reductions::{build_cut_graph, emit_stream};

    #[test]
    fn store_everything_solves_in_one_pass() {
        let g = build_cut_graph(&sample_hpc(3, 1).unwrap(), 2).unwrap();
        let s = emit_stream(&g).unwrap();
        let r = replay_stream(&s, StoreEverything::default(), 1).unwrap();
        assert_eq!(r.passes, 1);
        assert!(r.max_bits >= s.serialized_bits());
        assert_eq!(r.output, max_flow(&g).unwrap().value);
    }

    #[test]
    fn zero_pass_limit_is_a_violation() {
        let g = build_cut_graph(&sample_hpc(2, 1).unwrap(), 1).unwrap();
        let s = emit_stream(&g).unwrap();
        assert!(matches!(
            replay_stream(&s, StoreEverything::default(), 0),
            Err(Error::StreamViolation(_))
        ));
    }
}
