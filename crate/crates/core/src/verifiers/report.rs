//! `CHECK <name> PASS|FAIL <details>` reports and the end-to-end suite.

use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::Result;
use crate::instances::{chase, HpcInstance};
use crate::reductions::{
    build_cut_graph, build_mis_graph, build_sfm_oracle, emit_stream, simplify_graph, to_undirected, EdgeStream,
    LayeredGraph, Layout,
};
use crate::verifiers::certificate::{build_flow_certificate, check_certificate, decode_cut};
use crate::verifiers::flow::max_flow;
use crate::verifiers::greedy::{brute_force_sfm, lfmis, SFM_BRUTE_FORCE_LIMIT};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub details: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "CHECK {} {verdict} {}", self.name, self.details)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn push(&mut self, name: &str, pass: bool, details: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            pass,
            details: details.into(),
        });
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_text(&self) -> String {
        self.checks.iter().map(|c| format!("{c}\n")).collect()
    }
}

/// Runs every reduction on `(inst, k)` and checks it against the pointer
/// chain. A supplied graph is also compared with the rebuilt one of its layout.
pub fn verify_suite(inst: &HpcInstance, k: usize, supplied: Option<&LayeredGraph>) -> Result<VerificationReport> {
    let mut r = VerificationReport::default();
    let n = inst.n();
    let trace = chase(inst, k);
    let want = trace.answer();

    let g = build_cut_graph(inst, k)?;
    let flow = max_flow(&g)?.value;
    match decode_cut(&flow, n, k) {
        Ok(d) => r.push(
            "cut-decode",
            d.index == want,
            format!("flow={flow} decoded={} chase={}", d.index + 1, want + 1),
        ),
        Err(e) => r.push("cut-decode", false, e.to_string()),
    }

    let simple = simplify_graph(&g)?;
    let simple_flow = max_flow(&simple)?.value;
    r.push(
        "cut-simplify",
        simple_flow == flow && !simple.has_parallel_edges(),
        format!("flow={simple_flow} vertices={}", simple.vertex_count()),
    );

    let und = to_undirected(&g)?;
    let und_flow = max_flow(&und.graph)?.value;
    match und.directed_flow(&und_flow) {
        Ok(d) => r.push(
            "cut-undirected",
            d == flow,
            format!("undirected={und_flow} offset={} recovered={d}", und.weight_sum),
        ),
        Err(e) => r.push("cut-undirected", false, e.to_string()),
    }

    let cert = build_flow_certificate(inst, k, &g)?;
    let total = cert.total_value();
    let status = check_certificate(&g, &cert)?;
    let modulus = BigUint::from(n + 1);
    let quotient = &total / &modulus;
    r.push(
        "cut-certificate",
        status.feasible
            && status.optimal
            && total == flow
            && &total % &modulus == BigUint::from(want)
            && !quotient.is_zero(),
        format!(
            "total={total} feasible={} optimal={} K={quotient}",
            status.feasible, status.optimal
        ),
    );

    let stream = emit_stream(&g)?;
    let round_trip = EdgeStream::parse(&stream.to_text())?.to_graph()? == g;
    r.push(
        "cut-stream",
        stream.blocks_in_order() && round_trip,
        format!("blocks(D,C,B,A,indep)={:?} round_trip={round_trip}", stream.block_sizes()),
    );

    let mis = build_mis_graph(inst, k)?;
    let chosen = lfmis(&mis)?;
    let per_layer_ok = (0..=k).all(|j| {
        let in_layer: Vec<usize> = (0..n).filter(|&i| chosen.contains(&mis.vertex(j, i))).collect();
        in_layer == [trace.z()[j]]
    });
    r.push(
        "mis-lfmis",
        per_layer_ok,
        format!("selected={} layers={}", chosen.len(), k + 1),
    );

    if (3 * k + 1) * n <= SFM_BRUTE_FORCE_LIMIT {
        let mut oracle = build_sfm_oracle(inst, k)?;
        let (min, _) = brute_force_sfm(&mut oracle)?;
        let base_flow = max_flow(oracle.base())?.value;
        let want3 = chase(inst, 3 * k).answer();
        let decoded = decode_cut(&min, n, 3 * k).map(|d| d.index);
        r.push(
            "sfm-brute-force",
            min == base_flow && decoded.as_ref().ok() == Some(&want3),
            format!("min={min} queries={} decoded_ok={}", oracle.stats().query_count, decoded.is_ok()),
        );
    }

    if let Some(h) = supplied {
        let rebuilt = match h.layout() {
            Layout::Cut if h.is_directed() => Some(g.clone()),
            Layout::Cut => Some(und.graph.clone()),
            Layout::Split if h.is_directed() => Some(simple.clone()),
            Layout::Split => Some(to_undirected(&simple)?.graph),
            Layout::Mis => Some(mis.clone()),
            Layout::Plain => None,
        };
        let same = rebuilt.as_ref() == Some(h);
        r.push(
            "graph-matches-instance",
            same,
            format!("layout={} edges={}", h.layout().tag(), h.edges().len()),
        );
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::sample_hpc;

    #[test]
    fn suite_passes_on_samples() {
        for seed in 0..5 {
            let inst = sample_hpc(2, seed).unwrap();
            let r = verify_suite(&inst, 1, None).unwrap();
            assert!(r.all_pass(), "{}", r.to_text());
            assert!(r.to_text().lines().all(|l| l.starts_with("CHECK ")));
        }
    }
}
