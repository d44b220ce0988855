//! Acceptance harness: one PASS/FAIL line per criterion. Exits non-zero when
//! any criterion fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use hpc_lab::info_theory::{verify_facts, FactsConfig, NumericMode};
use hpc_lab::instances::{chase, embed_pair_int, sample_hpc, sample_pair_int_with, HpcInstance, SetIntInstance};
use hpc_lab::protocols::{check_ordering_bound, run_upper_bound};
use hpc_lab::reductions::{build_cut_graph, build_mis_graph, build_sfm_oracle, simplify_graph, to_undirected};
use hpc_lab::rng::{enumerate, Stream};
use hpc_lab::verifiers::{
    brute_force_sfm, build_flow_certificate, check_certificate, decode_cut, lfmis, max_flow, PathFamily,
};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, Duration, fn() -> Outcome);

fn q(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

fn pow(base: usize, e: usize) -> BigUint {
    num_traits::pow(BigUint::from(base), e)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// The 200 instances shared by criteria 1 and 2: `n = 2 + seed % 7`, `k = 1 + (seed / 7) % 4`.
fn cut_instances() -> impl Iterator<Item = (u64, HpcInstance, usize)> {
    (0..200u64).map(|seed| {
        let n = 2 + (seed % 7) as usize;
        let k = 1 + ((seed / 7) % 4) as usize;
        (seed, sample_hpc(n, seed).expect("n >= 1"), k)
    })
}

fn criterion_1() -> Outcome {
    for (seed, inst, k) in cut_instances() {
        let g = build_cut_graph(&inst, k).map_err(err)?;
        let flow = max_flow(&g).map_err(err)?.value;
        let decoded = decode_cut(&flow, inst.n(), k).map_err(err)?.index;
        let want = chase(&inst, k).z()[k];
        ensure(decoded == want, || format!("seed {seed}: decoded {decoded}, chase {want}"))?;
    }
    Ok("200 instances, n in 2..=8, k in 1..=4".into())
}

fn criterion_2() -> Outcome {
    for (seed, inst, k) in cut_instances() {
        let g = build_cut_graph(&inst, k).map_err(err)?;
        let flow = max_flow(&g).map_err(err)?.value;
        let cert = build_flow_certificate(&inst, k, &g).map_err(err)?;
        let status = check_certificate(&g, &cert).map_err(err)?;
        ensure(status.feasible && status.optimal, || format!("seed {seed}: {status:?}"))?;
        ensure(cert.total_value() == flow, || {
            format!("seed {seed}: certificate {} vs flow {flow}", cert.total_value())
        })?;
        let caps = g.merged_capacities();
        let z = chase(&inst, k);
        for j in 1..=k {
            let e = (g.vertex(j - 1, z.z()[j - 1]), g.vertex(j, z.z()[j]));
            let want = BigUint::from(2u8) * pow(inst.n() + 1, k + 1 - j);
            ensure(caps.get(&e) == Some(&want), || {
                format!("seed {seed}: pointer edge {j} has {:?}, want {want}", caps.get(&e))
            })?;
        }
    }
    Ok("feasible, optimal, total = max flow, pointer edges carry 2 w_j".into())
}

fn set(n: usize, one_based: &[usize]) -> Vec<bool> {
    (1..=n).map(|i| one_based.contains(&i)).collect()
}

/// The n = 5, k = 3 worked instance with pointers x1, y2, x4, y3.
/// Instances off the pointer chain are `{1} ∩ {1}`.
fn worked_instance() -> HpcInstance {
    let n = 5;
    let filler = || SetIntInstance::new(set(n, &[1]), set(n, &[1])).expect("valid");
    let mut ab: Vec<SetIntInstance> = (0..n).map(|_| filler()).collect();
    let mut cd: Vec<SetIntInstance> = (0..n).map(|_| filler()).collect();
    ab[0] = SetIntInstance::new(set(n, &[2, 4]), set(n, &[2, 3])).expect("valid");
    cd[1] = SetIntInstance::new(set(n, &[3, 4]), set(n, &[1, 4])).expect("valid");
    ab[3] = SetIntInstance::new(set(n, &[2, 3]), set(n, &[3, 4])).expect("valid");
    HpcInstance::new(ab, cd).expect("valid")
}

fn criterion_3() -> Outcome {
    let (n, k) = (5, 3);
    let inst = worked_instance();
    let z = chase(&inst, k);
    ensure(z.z() == [0, 1, 3, 2], || format!("pointers {:?}", z.z()))?;
    let g = build_cut_graph(&inst, k).map_err(err)?;
    let caps = g.merged_capacities();
    let s_edge = caps.get(&(g.source(), g.vertex(0, 0))).cloned().unwrap_or_default();
    ensure(s_edge == pow(n + 1, 4), || format!("s -> u_0 carries {s_edge}"))?;
    let cert = build_flow_certificate(&inst, k, &g).map_err(err)?;
    for j in 1..=k {
        let want = pow(n + 1, k + 1 - j);
        let paths: Vec<_> = cert.family(PathFamily::Layer(j)).collect();
        ensure(paths.len() == 3 && paths.iter().all(|p| p.flow == want), || {
            format!("layer {j}: {:?}", paths.iter().map(|p| p.flow.to_string()).collect::<Vec<_>>())
        })?;
    }
    let star: BigUint = cert.family(PathFamily::Star).map(|p| p.flow.clone()).sum();
    ensure(star == BigUint::from(2u8), || format!("P* carries {star}"))?;
    let total = cert.total_value();
    let flow = max_flow(&g).map_err(err)?.value;
    ensure(total == flow && total == BigUint::from(776u32), || format!("total {total}, flow {flow}"))?;
    ensure(&total % BigUint::from(6u8) == BigUint::from(2u8), || format!("{total} mod 6"))?;
    let i_star = decode_cut(&flow, n, k).map_err(err)?.index + 1;
    ensure(i_star == 3, || format!("i* = {i_star}"))?;
    let status = check_certificate(&g, &cert).map_err(err)?;
    ensure(status.feasible && status.optimal, || format!("{status:?}"))?;
    Ok("s-edge 6^4, paths 6^3 6^2 6^1, P* 2, total 776, 776 mod 6 = 2, i* = 3".into())
}

fn criterion_4() -> Outcome {
    for seed in 0..200u64 {
        let n = 1 + (seed % 8) as usize;
        let k = 1 + ((seed / 8) % 4) as usize;
        let inst = sample_hpc(n, seed).map_err(err)?;
        let g = build_mis_graph(&inst, k).map_err(err)?;
        let chosen = lfmis(&g).map_err(err)?;
        let z = chase(&inst, k);
        for j in 0..=k {
            let layer: Vec<usize> = (0..n).filter(|&i| chosen.contains(&g.vertex(j, i))).collect();
            ensure(layer == [z.z()[j]], || format!("seed {seed}: layer {j} holds {layer:?}, pointer {}", z.z()[j]))?;
        }
    }
    Ok("200 instances, n in 1..=8, k in 1..=4, one vertex per layer at the pointer".into())
}

fn criterion_5() -> Outcome {
    let mut runs = 0;
    for n in 1..=2 {
        for seed in 0..8u64 {
            let inst = sample_hpc(n, seed).map_err(err)?;
            let mut oracle = build_sfm_oracle(&inst, 1).map_err(err)?;
            let size = oracle.ground_size();
            ensure(size == 4 * n, || format!("|U| = {size}"))?;
            let (min, _) = brute_force_sfm(&mut oracle).map_err(err)?;
            let flow = max_flow(oracle.base()).map_err(err)?.value;
            ensure(min == flow, || format!("n={n} seed {seed}: min {min}, flow {flow}"))?;
            let decoded = decode_cut(&min, n, 3).map_err(err)?.index;
            ensure(decoded == chase(&inst, 3).z()[3], || format!("n={n} seed {seed}: decoded {decoded}"))?;
            let queries = oracle.stats().query_count;
            ensure(queries == 1u64 << size, || format!("n={n} seed {seed}: {queries} queries"))?;
            runs += 1;
        }
    }
    Ok(format!("{runs} oracles, min = max flow, decodes z_3, 2^|U| queries"))
}

fn ceil_log2(n: usize) -> usize {
    let mut b = 0;
    while (1usize << b) < n {
        b += 1;
    }
    b
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for run in 0..1000 {
        let n = rng.random_range(1..=16);
        let k = rng.random_range(1..=6);
        let inst = sample_hpc(n, rng.random()).map_err(err)?;
        let out = run_upper_bound(&inst, k);
        let t = &out.transcript;
        ensure(out.answer == chase(&inst, k).answer(), || format!("run {run}: wrong answer"))?;
        ensure(t.phase_count() == k + 1, || format!("run {run}: {} phases", t.phase_count()))?;
        ensure(t.phases()[0].messages.is_empty(), || format!("run {run}: phase 1 not skipped"))?;
        let limit = k * (n + ceil_log2(n)) + ceil_log2(n);
        ensure(t.total_bits() <= limit, || format!("run {run}: {} bits > {limit}", t.total_bits()))?;
    }
    Ok("1000 runs, n <= 16, k <= 6".into())
}

/// D_SI probability of `(a, b)`: uniform target, other coordinates uniform on
/// `{(0,0), (0,1), (1,0)}`.
fn d_si(a: &[bool], b: &[bool]) -> BigRational {
    let n = a.len();
    let both: Vec<usize> = (0..n).filter(|&i| a[i] && b[i]).collect();
    if both.len() != 1 {
        return BigRational::zero();
    }
    q(1, n as i64) * num_traits::pow(q(1, 3), n - 1)
}

fn criterion_7() -> Outcome {
    for n in [3, 4] {
        let outcomes = enumerate(|r| {
            let p = sample_pair_int_with(r, Stream::Public);
            let (inst, place) = embed_pair_int(&p, n, r).expect("n >= 2");
            let (target, other) = if p.k() == 1 { (place.i, place.j) } else { (place.j, place.i) };
            (p.k(), inst.a().to_vec(), inst.b().to_vec(), target, other)
        });
        let mut law: BTreeMap<(Vec<bool>, Vec<bool>), BigRational> = BTreeMap::new();
        let mut hidden: BTreeMap<(u8, Vec<bool>, Vec<bool>), Vec<BigRational>> = BTreeMap::new();
        for w in &outcomes {
            let (k, a, b, target, other) = &w.value;
            let t = (0..n).find(|&i| a[i] && b[i]);
            ensure(t == Some(*target), || format!("n={n}: target not at the embedded index"))?;
            *law.entry((a.clone(), b.clone())).or_insert_with(BigRational::zero) += &w.weight;
            hidden.entry((*k, a.clone(), b.clone())).or_insert_with(|| vec![BigRational::zero(); n])[*other] +=
                &w.weight;
        }
        let mut support = 0;
        for bits in 0u32..1 << (2 * n) {
            let a: Vec<bool> = (0..n).map(|i| bits >> i & 1 == 1).collect();
            let b: Vec<bool> = (0..n).map(|i| bits >> (n + i) & 1 == 1).collect();
            let want = d_si(&a, &b);
            let got = law.get(&(a.clone(), b.clone())).cloned().unwrap_or_default();
            ensure(got == want, || format!("n={n}: Pr({a:?}, {b:?}) = {got}, D_SI gives {want}"))?;
            support += usize::from(!want.is_zero());
        }
        for ((k, a, b), row) in &hidden {
            let t = (0..n).find(|&i| a[i] && b[i]).expect("promise");
            let mass: BigRational = row.iter().sum();
            for (c, p) in row.iter().enumerate() {
                let want = if c == t { BigRational::zero() } else { &mass / BigRational::from_integer((n - 1).into()) };
                ensure(*p == want, || format!("n={n} k={k}: non-target index not uniform"))?;
            }
        }
        let total: BigRational = law.values().sum();
        ensure(total.is_one() && support == n * num_traits::pow(3usize, n - 1), || {
            format!("n={n}: mass {total}, support {support}")
        })?;
    }
    Ok("n = 3 and n = 4: law equals D_SI, non-target index uniform, zero error".into())
}

/// `Pr(I ≺ J)` by direct double sum, with ties broken toward the larger index.
fn misorder_oracle(p: &[BigRational]) -> BigRational {
    let n = p.len();
    let above = |j: usize, i: usize| (&p[j], j) > (&p[i], i);
    let mut total = BigRational::zero();
    for (i, pi) in p.iter().enumerate() {
        let count = (0..n).filter(|&j| j != i && above(j, i)).count();
        total += pi * q(count as i64, (n - 1) as i64);
    }
    total
}

fn closed_form(p: &[BigRational]) -> BigRational {
    let n = p.len() as i64;
    let delta: BigRational = p
        .iter()
        .map(|x| x - q(1, n))
        .filter(|d| *d > BigRational::zero())
        .sum();
    q(1, 2) - delta * q(n, 2 * n - 2)
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for trial in 0..10_000 {
        let n = rng.random_range(2..=8usize);
        let mut w: Vec<i64> = (0..n).map(|_| rng.random_range(0..=20)).collect();
        if w.iter().all(|&x| x == 0) {
            w[0] = 1;
        }
        let total: i64 = w.iter().sum();
        let p: Vec<BigRational> = w.iter().map(|&x| q(x, total)).collect();
        let r = check_ordering_bound(&p).map_err(err)?;
        let oracle = misorder_oracle(&p);
        let bound = closed_form(&p);
        ensure(r.pr_before == oracle && r.bound == bound, || format!("trial {trial}: library disagrees with oracle"))?;
        ensure(oracle <= bound && r.holds, || format!("trial {trial}: {oracle} > {bound}"))?;
    }
    let mut tight = 0;
    for trial in 0..1000 {
        let n = rng.random_range(2..=8usize);
        let m = rng.random_range(1..n);
        // Low level l < 1/n, high level h = (1 - (n - m) l) / m.
        let den = rng.random_range(n as i64 + 1..=60);
        let l = q(rng.random_range(0..den / n as i64), den);
        let h = (BigRational::one() - &l * q((n - m) as i64, 1)) / q(m as i64, 1);
        let mut p = vec![l.clone(); n];
        let mut idx: Vec<usize> = (0..n).collect();
        for c in 0..m {
            let pick = rng.random_range(c..n);
            idx.swap(c, pick);
            p[idx[c]] = h.clone();
        }
        let oracle = misorder_oracle(&p);
        ensure(oracle == closed_form(&p), || format!("two-level trial {trial}: {oracle} vs {}", closed_form(&p)))?;
        let r = check_ordering_bound(&p).map_err(err)?;
        ensure(r.tight, || format!("two-level trial {trial}: library reports not tight"))?;
        tight += 1;
    }
    Ok(format!("10000 posteriors within the bound, {tight} two-level posteriors on it"))
}

fn criterion_9() -> Outcome {
    let cfg = FactsConfig {
        trials: 1000,
        mode: NumericMode::Rational,
        ..FactsConfig::default()
    };
    let report = verify_facts(&cfg).map_err(err)?;
    let failed: Vec<String> = report.checks.iter().filter(|c| !c.pass).map(|c| c.to_string()).collect();
    ensure(failed.is_empty(), || failed.join("; "))?;
    Ok(format!("{} facts x 1000 trials, rational", report.checks.len()))
}

fn criterion_10() -> Outcome {
    for seed in 0..100u64 {
        let n = 1 + (seed % 5) as usize;
        let k = 1 + ((seed / 5) % 3) as usize;
        let inst = sample_hpc(n, 10_000 + seed).map_err(err)?;
        let want = chase(&inst, k).answer();
        let g = build_cut_graph(&inst, k).map_err(err)?;
        let simple = simplify_graph(&g).map_err(err)?;
        ensure(!simple.has_parallel_edges(), || format!("seed {seed}: parallel edges remain"))?;
        let f = max_flow(&simple).map_err(err)?.value;
        let d = decode_cut(&f, n, k).map_err(err)?.index;
        ensure(d == want, || format!("seed {seed}: simplified decodes {d}, want {want}"))?;
        let und = to_undirected(&g).map_err(err)?;
        let uf = max_flow(&und.graph).map_err(err)?.value;
        let back = und.directed_flow(&uf).map_err(err)?;
        let d = decode_cut(&back, n, k).map_err(err)?.index;
        ensure(d == want, || format!("seed {seed}: undirected decodes {d}, want {want}"))?;
    }
    Ok("100 instances, simplified and undirected graphs decode the pointer".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (1, "cut-decode", Duration::from_secs(60), criterion_1),
        (2, "flow-certificate", Duration::from_secs(60), criterion_2),
        (3, "worked-example", Duration::from_secs(60), criterion_3),
        (4, "lfmis-decode", Duration::from_secs(30), criterion_4),
        (5, "sfm-agreement", Duration::from_secs(120), criterion_5),
        (6, "upper-bound-protocol", Duration::from_secs(60), criterion_6),
        (7, "pi-pi-marginal", Duration::from_secs(600), criterion_7),
        (8, "ordering-bound", Duration::from_secs(60), criterion_8),
        (9, "information-facts", Duration::from_secs(300), criterion_9),
        (10, "transform-preservation", Duration::from_secs(60), criterion_10),
    ];
    let mut all = true;
    for (id, name, budget, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let (pass, detail) = match outcome {
            Ok(d) if took <= budget => (true, d),
            Ok(d) => (false, format!("{d}; over the {}s budget", budget.as_secs())),
            Err(e) => (false, e),
        };
        all &= pass;
        println!(
            "criterion {id:>2} {name:<24} {} tolerance=exact time={:.2}s {detail}",
            if pass { "PASS" } else { "FAIL" },
            took.as_secs_f64()
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
