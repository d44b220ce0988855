//! Randomized checks of the standard entropy, divergence and protocol facts.
//!
//! Rational mode compares exact values; float mode uses a tolerance of 1e-9.
//! Facts with an independence hypothesis are checked on tables built to
//! satisfy it, and the hypothesis itself is checked too.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::info_theory::dist::{hellinger_squared, kl, tvd, tvd_max_events, DiscreteDistribution, Divergence};
use crate::info_theory::exact::ExactReal;
use crate::info_theory::float::{self, FloatTable};
use crate::info_theory::joint::JointTable;
use crate::info_theory::protocol_info::{
    communication_cost, cut_and_paste_check, internal_info_cost, random_tree, PublicCoinProtocol,
};
use crate::verifiers::VerificationReport;

pub const FLOAT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NumericMode {
    Rational,
    Float,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactsConfig {
    pub trials: usize,
    /// Ranges of the four table variables `A, B, C, D`.
    pub dims: [usize; 4],
    pub seed: u64,
    pub mode: NumericMode,
    /// Random weights are drawn from `1..=max_weight`.
    pub max_weight: u64,
    /// Input domain sizes of random protocol trees.
    pub tree_inputs: (usize, usize),
    pub tree_depth: usize,
}

impl Default for FactsConfig {
    fn default() -> Self {
        FactsConfig {
            trials: 1000,
            dims: [2, 2, 2, 2],
            seed: 0,
            mode: NumericMode::Rational,
            max_weight: 16,
            tree_inputs: (2, 2),
            tree_depth: 4,
        }
    }
}

struct Tally {
    name: &'static str,
    trials: usize,
    failures: usize,
    first: Option<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            name,
            trials: 0,
            failures: 0,
            first: None,
        }
    }

    fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.trials += 1;
        if !ok {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(format!("trial={} {}", self.trials, detail()));
            }
        }
    }

    fn finish(self, report: &mut VerificationReport) {
        let mut details = format!("trials={} failures={}", self.trials, self.failures);
        if let Some(f) = self.first {
            details += &format!(" first: {f}");
        }
        report.push(self.name, self.failures == 0 && self.trials > 0, details);
    }
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn show(a: &ExactReal, b: &ExactReal) -> String {
    format!("lhs~{:.12} rhs~{:.12}", a.to_f64(), b.to_f64())
}

/// Runs every fact on `trials` random instances and reports one line per fact.
pub fn verify_facts(cfg: &FactsConfig) -> Result<VerificationReport> {
    if cfg.trials == 0 {
        return Err(Error::Validation("trials must be at least 1".into()));
    }
    if cfg.dims.contains(&0) || cfg.max_weight == 0 {
        return Err(Error::Validation("table ranges and weights must be positive".into()));
    }
    match cfg.mode {
        NumericMode::Rational => verify_rational(cfg),
        NumericMode::Float => verify_float(cfg),
    }
}

fn random_weights(len: usize, lo: u64, max: u64, rng: &mut impl Rng) -> Vec<u64> {
    loop {
        let w: Vec<u64> = (0..len).map(|_| rng.random_range(lo..=max)).collect();
        if w.iter().any(|&x| x > 0) {
            return w;
        }
    }
}

/// Joint table of `(A, B, C, D)` built from conditional factors.
/// `a_indep_d_given_c`: `p(c) p(a|c) p(d|c) p(b|a,c,d)`, so `A ⊥ D | C`.
/// Otherwise `p(b,c) p(a|b,c) p(d|b,c)`, so `A ⊥ D | B, C`.
fn hypothesis_table(dims: [usize; 4], max: u64, a_indep_d_given_c: bool, rng: &mut impl Rng) -> Result<JointTable> {
    let [na, nb, nc, nd] = dims;
    let mut draw = |len: usize| -> Vec<BigRational> {
        let w = random_weights(len, 1, max, rng);
        let total: u64 = w.iter().sum();
        w.iter().map(|&x| ratio(x as i64, total as i64)).collect()
    };
    let mut probs = vec![BigRational::zero(); na * nb * nc * nd];
    let cell = |a: usize, b: usize, c: usize, d: usize| ((a * nb + b) * nc + c) * nd + d;
    if a_indep_d_given_c {
        let pc = draw(nc);
        let pa: Vec<Vec<BigRational>> = (0..nc).map(|_| draw(na)).collect();
        let pd: Vec<Vec<BigRational>> = (0..nc).map(|_| draw(nd)).collect();
        for c in 0..nc {
            for a in 0..na {
                for d in 0..nd {
                    let pb = draw(nb);
                    for (b, pbv) in pb.iter().enumerate() {
                        probs[cell(a, b, c, d)] = &pc[c] * &pa[c][a] * &pd[c][d] * pbv;
                    }
                }
            }
        }
    } else {
        let pbc = draw(nb * nc);
        for b in 0..nb {
            for c in 0..nc {
                let pa = draw(na);
                let pd = draw(nd);
                for a in 0..na {
                    for d in 0..nd {
                        probs[cell(a, b, c, d)] = &pbc[b * nc + c] * &pa[a] * &pd[d];
                    }
                }
            }
        }
    }
    JointTable::from_rationals(&dims, probs)
}

fn verify_rational(cfg: &FactsConfig) -> Result<VerificationReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (a, b, c, d) = (0usize, 1usize, 2usize, 3usize);
    let mut bounds = Tally::new("entropy-bounds");
    let mut nonneg = Tally::new("mi-nonnegative");
    let mut reduce = Tally::new("conditioning-reduces-entropy");
    let mut subadd = Tally::new("subadditivity");
    let mut echain = Tally::new("entropy-chain-rule");
    let mut mchain = Tally::new("mi-chain-rule");
    let mut klinfo = Tally::new("kl-info");
    let mut hop = Tally::new("bar-hopping");
    let mut incr = Tally::new("info-increase");
    let mut decr = Tally::new("info-decrease");
    let mut tforms = Tally::new("tvd-forms");
    let mut tevent = Tally::new("tvd-event-bound");
    let mut pinsker = Tally::new("pinsker");
    let mut htvd = Tally::new("hellinger-tvd");
    let mut hkl = Tally::new("hellinger-kl");
    let mut rearr = Tally::new("rearrangement");
    let mut cap = Tally::new("cut-and-paste");
    let mut iccc = Tally::new("ic-le-cc");
    let mut public = Tally::new("public-randomness");

    // Boundary cases: uniform marginals meet the upper bound, products have
    // zero information.
    let uniform = JointTable::product(
        &cfg.dims
            .iter()
            .map(|&m| DiscreteDistribution::uniform(m))
            .collect::<Result<Vec<_>>>()?,
    )?;
    let want = ExactReal::log2(&BigRational::from_integer(BigInt::from(cfg.dims[0])))?;
    let got = uniform.entropy(&[a])?;
    bounds.record(got == want, || show(&got, &want));
    let zero = uniform.mutual_information(&[a], &[b], &[])?;
    nonneg.record(zero.is_zero(), || format!("product table I={zero}"));

    let cells: usize = cfg.dims.iter().product();
    let pair_len = (cfg.dims[0] * cfg.dims[1]).min(crate::info_theory::dist::EVENT_FORM_LIMIT);
    let half = ratio(1, 2);

    for _ in 0..cfg.trials {
        let t = JointTable::from_weights(&cfg.dims, &random_weights(cells, 1, cfg.max_weight, &mut rng))?;

        let ha = t.entropy(&[a])?;
        let support = t.marginal(&[a])?.iter().filter(|p| !p.is_zero()).count();
        let cap_a = ExactReal::log2(&BigRational::from_integer(BigInt::from(support)))?;
        bounds.record(ExactReal::zero().le(&ha) && ha.le(&cap_a), || show(&ha, &cap_a));

        let iab = t.mutual_information(&[a], &[b], &[])?;
        nonneg.record(ExactReal::zero().le(&iab), || format!("I(A;B)~{}", iab.to_f64()));

        let lhs = t.conditional_entropy(&[a], &[b, c])?;
        let rhs = t.conditional_entropy(&[a], &[b])?;
        reduce.record(lhs.le(&rhs), || show(&lhs, &rhs));

        let lhs = t.conditional_entropy(&[a, b], &[c])?;
        let rhs = t.conditional_entropy(&[a], &[c])? + t.conditional_entropy(&[b], &[c])?;
        subadd.record(lhs.le(&rhs), || show(&lhs, &rhs));

        let rhs = t.conditional_entropy(&[a], &[c])? + t.conditional_entropy(&[b], &[c, a])?;
        echain.record(lhs == rhs, || show(&lhs, &rhs));

        let lhs = t.mutual_information(&[a, b], &[c], &[d])?;
        let rhs = t.mutual_information(&[a], &[c], &[d])? + t.mutual_information(&[b], &[c], &[a, d])?;
        mchain.record(lhs == rhs, || show(&lhs, &rhs));

        let lhs = t.mutual_information(&[a], &[b], &[c])?;
        let rhs = t.mutual_information_kl(&[a], &[b], &[c])?;
        klinfo.record(lhs == rhs, || show(&lhs, &rhs));

        let rhs = t.mutual_information(&[a], &[b], &[])? + t.entropy(&[c])?;
        hop.record(lhs.le(&rhs), || show(&lhs, &rhs));

        let h = hypothesis_table(cfg.dims, cfg.max_weight, true, &mut rng)?;
        let hyp = h.mutual_information(&[a], &[d], &[c])?;
        let lhs = h.mutual_information(&[a], &[b], &[c])?;
        let rhs = h.mutual_information(&[a], &[b], &[c, d])?;
        incr.record(hyp.is_zero() && lhs.le(&rhs), || format!("I(A;D|C)={hyp} {}", show(&lhs, &rhs)));

        let h = hypothesis_table(cfg.dims, cfg.max_weight, false, &mut rng)?;
        let hyp = h.mutual_information(&[a], &[d], &[b, c])?;
        let lhs = h.mutual_information(&[a], &[b], &[c, d])?;
        let rhs = h.mutual_information(&[a], &[b], &[c])?;
        decr.record(hyp.is_zero() && lhs.le(&rhs), || format!("I(A;D|B,C)={hyp} {}", show(&lhs, &rhs)));

        // Pairs may contain zeros so that support mismatches are exercised.
        let mu = DiscreteDistribution::from_weights(&random_weights(pair_len, 0, cfg.max_weight, &mut rng))?;
        let nu = DiscreteDistribution::from_weights(&random_weights(pair_len, 0, cfg.max_weight, &mut rng))?;
        let dist = tvd(&mu, &nu)?;
        let by_events = tvd_max_events(&mu, &nu)?;
        tforms.record(dist == by_events, || format!("half-L1={dist} events={by_events}"));

        let event: Vec<bool> = (0..pair_len).map(|_| rng.random_bool(0.5)).collect();
        let (pm, pn) = (mu.prob_of(&event), nu.prob_of(&event));
        tevent.record(pm <= &pn + &dist, || format!("mu(E)={pm} nu(E)={pn} tvd={dist}"));

        let two_tvd_sq = ExactReal::from_rational(&dist * &dist * BigRational::from_integer(2.into()));
        match kl(&mu, &nu)? {
            Divergence::Finite(k) => pinsker.record(two_tvd_sq.le(&k), || show(&two_tvd_sq, &k)),
            Divergence::Infinite => pinsker.record(true, String::new),
        }

        let h2 = hellinger_squared(&mu, &nu)?;
        let tv = ExactReal::from_rational(dist.clone());
        let tv_sq = ExactReal::from_rational(&dist * &dist);
        let two_h2 = h2.scale(&BigRational::from_integer(2.into()));
        htvd.record(h2.le(&tv) && tv_sq.le(&two_h2), || {
            format!("h2~{} tvd={dist}", h2.to_f64())
        });

        let m = mu.midpoint(&nu)?;
        let js = match (kl(&mu, &m)?, kl(&nu, &m)?) {
            (Divergence::Finite(x), Divergence::Finite(y)) => (x + y).scale(&half),
            _ => unreachable!("both are dominated by their midpoint"),
        };
        hkl.record(h2.le(&js), || show(&h2, &js));

        let n = rng.random_range(2..=8);
        let mut xs: Vec<BigRational> = (0..n).map(|_| ratio(rng.random_range(-20..=20), rng.random_range(1..=6))).collect();
        let mut ys: Vec<BigRational> = (0..n).map(|_| ratio(rng.random_range(-20..=20), rng.random_range(1..=6))).collect();
        xs.sort();
        ys.sort_by(|p, q| q.cmp(p));
        let lhs: BigRational = xs.iter().zip(&ys).map(|(x, y)| x * y).sum();
        let rhs = xs.iter().sum::<BigRational>() * ys.iter().sum::<BigRational>() / BigRational::from_integer(n.into());
        rearr.record(lhs <= rhs, || format!("lhs={lhs} rhs={rhs}"));

        let (ax, by) = cfg.tree_inputs;
        let tree = random_tree(ax, by, cfg.tree_depth, &mut rng)?;
        let pick = |rng: &mut ChaCha8Rng, m: usize| rng.random_range(0..m);
        let (x1, x2, y1, y2) = (pick(&mut rng, ax), pick(&mut rng, ax), pick(&mut rng, by), pick(&mut rng, by));
        let c2 = cut_and_paste_check(&tree, x1, x2, y1, y2)?;
        cap.record(c2.equal(), || format!("{} vs {}", c2.straight, c2.crossed));

        let prior = JointTable::from_weights(&[ax, by], &random_weights(ax * by, 0, cfg.max_weight, &mut rng))?;
        let ic = internal_info_cost(&tree, &prior)?;
        let cc = ExactReal::from_integer(communication_cost(&tree) as i64);
        iccc.record(ic.le(&cc), || show(&ic, &cc));

        let branches = rng.random_range(1..=3);
        let rho = random_weights(branches, 1, cfg.max_weight, &mut rng);
        let total: u64 = rho.iter().sum();
        let protocol = PublicCoinProtocol::new(
            rho.iter()
                .map(|&w| Ok((ratio(w as i64, total as i64), random_tree(ax, by, cfg.tree_depth.min(3), &mut rng)?)))
                .collect::<Result<Vec<_>>>()?,
        )?;
        let lhs = protocol.info_cost(&prior)?;
        let rhs = protocol.averaged_info_cost(&prior)?;
        public.record(lhs == rhs, || show(&lhs, &rhs));
    }

    let mut report = VerificationReport::default();
    for t in [
        bounds, nonneg, reduce, subadd, echain, mchain, klinfo, hop, incr, decr, tforms, tevent, pinsker, htvd, hkl,
        rearr, cap, iccc, public,
    ] {
        t.finish(&mut report);
    }
    Ok(report)
}

fn random_float_table(dims: &[usize], rng: &mut impl Rng) -> Result<FloatTable> {
    let cells: usize = dims.iter().product();
    let w: Vec<f64> = (0..cells).map(|_| rng.random_range(0.01..1.0)).collect();
    let total: f64 = w.iter().sum();
    FloatTable::new(dims.to_vec(), w.iter().map(|x| x / total).collect())
}

fn random_float_dist(len: usize, rng: &mut impl Rng) -> Vec<f64> {
    let w: Vec<f64> = (0..len).map(|_| rng.random_range(0.01..1.0)).collect();
    let total: f64 = w.iter().sum();
    w.iter().map(|x| x / total).collect()
}

fn verify_float(cfg: &FactsConfig) -> Result<VerificationReport> {
    let tol = FLOAT_TOLERANCE;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (a, b, c, d) = (0usize, 1usize, 2usize, 3usize);
    let mut bounds = Tally::new("entropy-bounds");
    let mut nonneg = Tally::new("mi-nonnegative");
    let mut reduce = Tally::new("conditioning-reduces-entropy");
    let mut subadd = Tally::new("subadditivity");
    let mut echain = Tally::new("entropy-chain-rule");
    let mut mchain = Tally::new("mi-chain-rule");
    let mut hop = Tally::new("bar-hopping");
    let mut tevent = Tally::new("tvd-event-bound");
    let mut pinsker = Tally::new("pinsker");
    let mut htvd = Tally::new("hellinger-tvd");
    let mut hkl = Tally::new("hellinger-kl");
    let mut rearr = Tally::new("rearrangement");
    let fmt2 = |x: f64, y: f64| format!("lhs={x:.15} rhs={y:.15}");
    let pair_len = cfg.dims[0] * cfg.dims[1];
    for _ in 0..cfg.trials {
        let t = random_float_table(&cfg.dims, &mut rng)?;
        let ha = t.entropy(&[a]);
        let cap = (cfg.dims[0] as f64).log2();
        bounds.record(ha >= -tol && ha <= cap + tol, || fmt2(ha, cap));
        let iab = t.mutual_information(&[a], &[b], &[]);
        nonneg.record(iab >= -tol, || format!("I={iab}"));
        let (l, r) = (t.conditional_entropy(&[a], &[b, c]), t.conditional_entropy(&[a], &[b]));
        reduce.record(l <= r + tol, || fmt2(l, r));
        let l = t.conditional_entropy(&[a, b], &[c]);
        let r = t.conditional_entropy(&[a], &[c]) + t.conditional_entropy(&[b], &[c]);
        subadd.record(l <= r + tol, || fmt2(l, r));
        let r = t.conditional_entropy(&[a], &[c]) + t.conditional_entropy(&[b], &[c, a]);
        echain.record((l - r).abs() <= tol, || fmt2(l, r));
        let l = t.mutual_information(&[a, b], &[c], &[d]);
        let r = t.mutual_information(&[a], &[c], &[d]) + t.mutual_information(&[b], &[c], &[a, d]);
        mchain.record((l - r).abs() <= tol, || fmt2(l, r));
        let l = t.mutual_information(&[a], &[b], &[c]);
        let r = t.mutual_information(&[a], &[b], &[]) + t.entropy(&[c]);
        hop.record(l <= r + tol, || fmt2(l, r));

        let mu = random_float_dist(pair_len, &mut rng);
        let nu = random_float_dist(pair_len, &mut rng);
        let dist = float::tvd(&mu, &nu);
        let event: Vec<bool> = (0..pair_len).map(|_| rng.random_bool(0.5)).collect();
        let pe = |p: &[f64]| p.iter().zip(&event).filter(|(_, &e)| e).map(|(x, _)| x).sum::<f64>();
        tevent.record(pe(&mu) <= pe(&nu) + dist + tol, || fmt2(pe(&mu), pe(&nu) + dist));
        let k = float::kl(&mu, &nu);
        pinsker.record(2.0 * dist * dist <= k + tol, || fmt2(2.0 * dist * dist, k));
        let h2 = float::hellinger_squared(&mu, &nu);
        htvd.record(h2 <= dist + tol && dist * dist <= 2.0 * h2 + tol, || fmt2(h2, dist));
        let m: Vec<f64> = mu.iter().zip(&nu).map(|(x, y)| (x + y) / 2.0).collect();
        let js = (float::kl(&mu, &m) + float::kl(&nu, &m)) / 2.0;
        hkl.record(h2 <= js + tol, || fmt2(h2, js));

        let n = rng.random_range(2..=8);
        let mut xs: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
        let mut ys: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
        xs.sort_by(f64::total_cmp);
        ys.sort_by(|p, q| q.total_cmp(p));
        let l: f64 = xs.iter().zip(&ys).map(|(x, y)| x * y).sum();
        let r = xs.iter().sum::<f64>() * ys.iter().sum::<f64>() / n as f64;
        rearr.record(l <= r + tol, || fmt2(l, r));
    }
    let mut report = VerificationReport::default();
    for t in [
        bounds, nonneg, reduce, subadd, echain, mchain, hop, tevent, pinsker, htvd, hkl, rearr,
    ] {
        t.finish(&mut report);
    }
    Ok(report)
}
