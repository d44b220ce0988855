//! Library results against independent brute-force oracles.

use std::collections::BTreeMap;

use hpc_lab::info_theory::random_tree;
use hpc_lab::instances::{chase, sample_hpc, sample_set_int_with, HpcInstance};
use hpc_lab::protocols::{measure_eps_solve, EnumerationBudget, ProtocolTree};
use hpc_lab::reductions::{
    build_cut_graph, build_mis_graph, emit_stream, simplify_graph, to_undirected, Edge, LayeredGraph, Provenance,
};
use hpc_lab::rng::{enumerate, Stream};
use hpc_lab::verifiers::max_flow;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn q(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

/// Minimum over every `s`-`t` cut, by exhaustion.
fn brute_min_cut(g: &LayeredGraph) -> BigUint {
    let (s, t) = (g.source(), g.sink().unwrap());
    let free: Vec<usize> = (0..g.vertex_count()).filter(|&v| v != s && v != t).collect();
    assert!(free.len() <= 20);
    let mut best: Option<BigUint> = None;
    for mask in 0u32..1 << free.len() {
        let mut side = vec![false; g.vertex_count()];
        side[s] = true;
        for (b, &v) in free.iter().enumerate() {
            side[v] = mask >> b & 1 == 1;
        }
        let w: BigUint = g
            .edges()
            .iter()
            .filter(|e| {
                if g.is_directed() {
                    side[e.tail] && !side[e.head]
                } else {
                    side[e.tail] != side[e.head]
                }
            })
            .map(|e| e.weight.clone())
            .sum();
        if best.as_ref().is_none_or(|b| w < *b) {
            best = Some(w);
        }
    }
    best.unwrap()
}

#[test]
fn max_flow_equals_exhaustive_min_cut() {
    for seed in 0..40u64 {
        let n = 1 + (seed % 3) as usize;
        let k = 1 + ((seed / 3) % 2) as usize;
        let inst = sample_hpc(n, seed).unwrap();
        let g = build_cut_graph(&inst, k).unwrap();
        assert_eq!(max_flow(&g).unwrap().value, brute_min_cut(&g), "seed {seed}");
    }
}

#[test]
fn undirected_single_edge() {
    let g = LayeredGraph::plain(2, true, vec![Edge::new(0, 1, BigUint::from(5u8), Provenance::Indep)]).unwrap();
    let und = to_undirected(&g).unwrap();
    assert_eq!(und.graph.edges().len(), 3);
    // {s,t} three times with weight 5: 5 + 2 * 5.
    let flow = max_flow(&und.graph).unwrap().value;
    assert_eq!(flow, BigUint::from(15u8));
    assert_eq!(brute_min_cut(&und.graph), flow);
    assert_eq!(und.directed_flow(&flow).unwrap(), BigUint::from(5u8));
}

#[test]
fn undirected_flow_matches_exhaustive_cut() {
    for seed in 0..12u64 {
        let n = 1 + (seed % 2) as usize;
        let inst = sample_hpc(n, seed).unwrap();
        let g = build_cut_graph(&inst, 1).unwrap();
        let und = to_undirected(&g).unwrap();
        let cut = brute_min_cut(&und.graph);
        assert_eq!(max_flow(&und.graph).unwrap().value, cut);
        assert_eq!(cut, &und.weight_sum + BigUint::from(2u8) * brute_min_cut(&g));
    }
}

fn d_si(a: &[bool], b: &[bool]) -> BigRational {
    let n = a.len();
    if (0..n).filter(|&i| a[i] && b[i]).count() != 1 {
        return BigRational::zero();
    }
    q(1, n as i64) * num_traits::pow(q(1, 3), n - 1)
}

#[test]
fn d_si_sampler_law() {
    for n in 1..=4 {
        let mut law: BTreeMap<(Vec<bool>, Vec<bool>), BigRational> = BTreeMap::new();
        for w in enumerate(|r| sample_set_int_with(n, r, Stream::Public).unwrap()) {
            *law.entry((w.value.a().to_vec(), w.value.b().to_vec())).or_insert_with(BigRational::zero) += w.weight;
        }
        for bits in 0u32..1 << (2 * n) {
            let a: Vec<bool> = (0..n).map(|i| bits >> i & 1 == 1).collect();
            let b: Vec<bool> = (0..n).map(|i| bits >> (n + i) & 1 == 1).collect();
            let got = law.get(&(a.clone(), b.clone())).cloned().unwrap_or_default();
            assert_eq!(got, d_si(&a, &b));
        }
    }
}

fn input_of(bits: &[bool]) -> usize {
    bits.iter().enumerate().map(|(i, &b)| usize::from(b) << i).sum()
}

/// Bayes' rule over every `(A, B)` in the support of D_SI.
fn bayes_posteriors(tree: &ProtocolTree, n: usize) -> (Vec<BigRational>, Vec<Vec<BigRational>>) {
    let leaves = tree.leaves().len();
    let mut joint = vec![vec![BigRational::zero(); n]; leaves];
    for bits in 0u32..1 << (2 * n) {
        let a: Vec<bool> = (0..n).map(|i| bits >> i & 1 == 1).collect();
        let b: Vec<bool> = (0..n).map(|i| bits >> (n + i) & 1 == 1).collect();
        let prior = d_si(&a, &b);
        if prior.is_zero() {
            continue;
        }
        let t = (0..n).find(|&i| a[i] && b[i]).unwrap();
        for (l, p) in tree.leaf_distribution(input_of(&a), input_of(&b)).unwrap().iter().enumerate() {
            joint[l][t] += &prior * p;
        }
    }
    let probs = joint.iter().map(|row| row.iter().sum()).collect();
    (probs, joint)
}

#[test]
fn posteriors_match_bayes_oracle() {
    let budget = EnumerationBudget {
        max_n: 3,
        max_tree_nodes: 64,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in 2..=3 {
        for _ in 0..15 {
            let tree = random_tree(1 << n, 1 << n, 3, &mut rng).unwrap();
            let report = measure_eps_solve(&tree, n, &budget).unwrap();
            let (probs, joint) = bayes_posteriors(&tree, n);
            let uniform = q(1, n as i64);
            let mut eps = BigRational::zero();
            let mut seen = 0;
            for (l, p) in probs.iter().enumerate() {
                if p.is_zero() {
                    assert!(report.posterior_of_leaf(l).is_none());
                    continue;
                }
                let post: Vec<BigRational> = joint[l].iter().map(|x| x / p).collect();
                let tvd: BigRational =
                    post.iter().map(|x| x - &uniform).filter(|d| *d > BigRational::zero()).sum();
                eps += p * &tvd;
                let got = report.posterior_of_leaf(l).unwrap();
                assert_eq!((&got.probability, &got.posterior, &got.tvd), (p, &post, &tvd));
                seen += 1;
            }
            assert_eq!(report.transcripts.len(), seen);
            assert_eq!(report.epsilon, eps);
            assert!(report.transcripts.iter().all(|t| t.posterior.iter().sum::<BigRational>().is_one()));
        }
    }
}

#[test]
fn mis_edges_follow_complements() {
    for seed in 0..20u64 {
        let (n, k) = (4, 2);
        let inst = sample_hpc(n, seed).unwrap();
        let g = build_mis_graph(&inst, k).unwrap();
        let adjacent = |u: usize, v: usize| g.edges().iter().any(|e| (e.tail, e.head) == (u, v) || (e.tail, e.head) == (v, u));
        let multiplicity =
            |u: usize, v: usize| g.edges().iter().filter(|e| (e.tail, e.head) == (u, v) || (e.tail, e.head) == (v, u)).count();
        for j in 0..k {
            for i in 0..n {
                let (first, second) = if j % 2 == 0 {
                    (inst.ab()[i].a(), inst.ab()[i].b())
                } else {
                    (inst.cd()[i].a(), inst.cd()[i].b())
                };
                for h in 0..n {
                    let misses = usize::from(!first[h]) + usize::from(!second[h]);
                    assert_eq!(multiplicity(g.vertex(j, i), g.vertex(j + 1, h)), misses, "seed {seed}");
                }
            }
        }
        for i in 1..n {
            assert!(adjacent(g.vertex(0, 0), g.vertex(0, i)));
        }
        for j in 1..=k {
            for i in 0..n {
                for h in i + 1..n {
                    assert!(!adjacent(g.vertex(j, i), g.vertex(j, h)));
                }
            }
        }
        assert_eq!(g.vertex_count(), (k + 1) * n + 1);
    }
}

fn ones(bits: &[bool]) -> usize {
    bits.iter().filter(|&&b| b).count()
}

#[test]
fn stream_block_counts() {
    for seed in 0..30u64 {
        let n = 1 + (seed % 6) as usize;
        let k = 1 + (seed % 4) as usize;
        let inst: HpcInstance = sample_hpc(n, seed).unwrap();
        let stream = emit_stream(&build_cut_graph(&inst, k).unwrap()).unwrap();
        let (mut a, mut b, mut c, mut d) = (0, 0, 0, 0);
        for j in 0..k {
            for i in 0..n {
                if j % 2 == 0 {
                    a += ones(inst.ab()[i].a());
                    b += ones(inst.ab()[i].b());
                } else {
                    c += ones(inst.cd()[i].a());
                    d += ones(inst.cd()[i].b());
                }
            }
        }
        assert_eq!(stream.block_sizes(), [d, c, b, a, 1 + k * n + n], "seed {seed}");
        assert!(stream.blocks_in_order());
    }
}

#[test]
fn simplify_preserves_cut_values() {
    for seed in 0..50u64 {
        let inst = sample_hpc(2, seed).unwrap();
        let g = build_cut_graph(&inst, 2).unwrap();
        let s = simplify_graph(&g).unwrap();
        assert!(!s.has_parallel_edges());
        assert_eq!(s.vertex_count(), 2 + 3 * 3 * 2);
        let f = max_flow(&s).unwrap().value;
        assert_eq!(f, max_flow(&g).unwrap().value, "seed {seed}");
        assert_eq!(f, brute_min_cut(&g));
        assert_eq!(&f % BigUint::from(3u8), BigUint::from(chase(&inst, 2).answer()));
    }
}
