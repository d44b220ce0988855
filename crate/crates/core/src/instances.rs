//! Set-Int, Pair-Int and hidden-pointer-chasing instances and their hard
//! distributions.
//!
//! Indices are 0-based in every in-memory type. The text formats are 1-based
//! (`AB 1 …` is the instance of `x_1`), and the conversion happens only in
//! [`HpcInstance::to_text`] / [`HpcInstance::parse`] and their Set-Int
//! counterparts.

use std::fmt;

use crate::error::{parse_err, Error, Result};
use crate::rng::{Randomness, SeededCoins, Stream};

/// Coordinate law μ: uniform over `(0,0)`, `(0,1)`, `(1,0)`.
const MU: [(bool, bool); 3] = [(false, false), (false, true), (true, false)];

/// Set-Int instance over `[n]` with a unique intersecting coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SetIntInstance {
    a: Vec<bool>,
    b: Vec<bool>,
    t: usize,
}

impl SetIntInstance {
    pub fn new(a: Vec<bool>, b: Vec<bool>) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::InvalidSize("Set-Int universe must be non-empty".into()));
        }
        if a.len() != b.len() {
            return Err(Error::Dimension(format!(
                "a has length {}, b has length {}",
                a.len(),
                b.len()
            )));
        }
        let common: Vec<usize> = (0..a.len()).filter(|&i| a[i] && b[i]).collect();
        match common.as_slice() {
            [t] => Ok(SetIntInstance { t: *t, a, b }),
            _ => Err(Error::Validation(format!(
                "expected exactly one intersecting coordinate, found {}",
                common.len()
            ))),
        }
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[bool] {
        &self.a
    }

    pub fn b(&self) -> &[bool] {
        &self.b
    }

    /// The unique coordinate with `a_t = b_t = 1`.
    pub fn target(&self) -> usize {
        self.t
    }

    pub fn to_text(&self) -> String {
        format!("SI n={} a={} b={}", self.n(), bits_to_string(&self.a), bits_to_string(&self.b))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let line = text.trim();
        let mut tok = line.split_whitespace();
        if tok.next() != Some("SI") {
            return Err(parse_err(1, "expected `SI` header"));
        }
        let n: usize = field(tok.next(), "n", 1)?
            .parse()
            .map_err(|_| parse_err(1, "bad n"))?;
        let a = parse_bits(field(tok.next(), "a", 1)?, 1)?;
        let b = parse_bits(field(tok.next(), "b", 1)?, 1)?;
        if tok.next().is_some() {
            return Err(parse_err(1, "trailing tokens"));
        }
        if a.len() != n || b.len() != n {
            return Err(parse_err(1, "bit-string length differs from n"));
        }
        SetIntInstance::new(a, b)
    }
}

impl fmt::Display for SetIntInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Pair-Int instance: Set-Int over a universe of size two.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PairIntInstance {
    pub x1: bool,
    pub x2: bool,
    pub y1: bool,
    pub y2: bool,
}

impl PairIntInstance {
    pub fn new(x1: bool, x2: bool, y1: bool, y2: bool) -> Result<Self> {
        if (x1 && y1) == (x2 && y2) {
            return Err(Error::Validation(
                "Pair-Int needs exactly one index with (x, y) = (1, 1)".into(),
            ));
        }
        Ok(PairIntInstance { x1, x2, y1, y2 })
    }

    /// Intersecting index in `{1, 2}`.
    pub fn k(&self) -> u8 {
        if self.x1 && self.y1 {
            1
        } else {
            2
        }
    }

    pub fn as_set_int(&self) -> SetIntInstance {
        SetIntInstance::new(vec![self.x1, self.x2], vec![self.y1, self.y2])
            .expect("validated at construction")
    }

    /// All six Pair-Int instances.
    pub fn all() -> Vec<PairIntInstance> {
        let mut out = Vec::new();
        for bits in 0u8..16 {
            let bit = |i: u8| bits >> i & 1 == 1;
            if let Ok(p) = PairIntInstance::new(bit(0), bit(1), bit(2), bit(3)) {
                out.push(p);
            }
        }
        out
    }
}

/// Which universe a pointer lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Universe {
    X,
    Y,
}

impl Universe {
    /// Universe of `z_j`: X for even `j`, Y for odd `j`.
    pub fn of_step(j: usize) -> Self {
        if j % 2 == 0 {
            Universe::X
        } else {
            Universe::Y
        }
    }

    pub fn letter(self) -> char {
        match self {
            Universe::X => 'x',
            Universe::Y => 'y',
        }
    }
}

/// HPC instance: `ab[x]` is `(A_x, B_x)` over Y, `cd[y]` is `(C_y, D_y)` over X.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HpcInstance {
    n: usize,
    ab: Vec<SetIntInstance>,
    cd: Vec<SetIntInstance>,
}

impl HpcInstance {
    pub fn new(ab: Vec<SetIntInstance>, cd: Vec<SetIntInstance>) -> Result<Self> {
        let n = ab.len();
        if n == 0 {
            return Err(Error::InvalidSize("HPC needs n >= 1".into()));
        }
        if cd.len() != n {
            return Err(Error::Dimension(format!("{} AB instances but {} CD instances", n, cd.len())));
        }
        if let Some(bad) = ab.iter().chain(&cd).find(|s| s.n() != n) {
            return Err(Error::Dimension(format!(
                "inner instance has universe {} but n = {}",
                bad.n(),
                n
            )));
        }
        Ok(HpcInstance { n, ab, cd })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ab(&self) -> &[SetIntInstance] {
        &self.ab
    }

    pub fn cd(&self) -> &[SetIntInstance] {
        &self.cd
    }

    pub fn f_ab(&self, x: usize) -> usize {
        self.ab[x].target()
    }

    pub fn f_cd(&self, y: usize) -> usize {
        self.cd[y].target()
    }

    /// The instance consulted to move from `z_j` to `z_{j+1}`.
    pub fn step_instance(&self, j: usize, z: usize) -> &SetIntInstance {
        match Universe::of_step(j) {
            Universe::X => &self.ab[z],
            Universe::Y => &self.cd[z],
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("HPC n={}\n", self.n);
        for (i, s) in self.ab.iter().enumerate() {
            out += &format!("AB {} a={} b={}\n", i + 1, bits_to_string(s.a()), bits_to_string(s.b()));
        }
        for (i, s) in self.cd.iter().enumerate() {
            out += &format!("CD {} c={} d={}\n", i + 1, bits_to_string(s.a()), bits_to_string(s.b()));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
        let mut tok = header.split_whitespace();
        if tok.next() != Some("HPC") {
            return Err(parse_err(1, "expected `HPC n=<n>` header"));
        }
        let n: usize = field(tok.next(), "n", 1)?
            .parse()
            .map_err(|_| parse_err(1, "bad n"))?;
        let mut ab = Vec::with_capacity(n);
        let mut cd = Vec::with_capacity(n);
        for (idx, line) in lines {
            let lno = idx + 1;
            let tok: Vec<&str> = line.split_whitespace().collect();
            let (tag, first, second, dest) = match tok.first() {
                Some(&"AB") => ("AB", "a", "b", &mut ab),
                Some(&"CD") => ("CD", "c", "d", &mut cd),
                _ => return Err(parse_err(lno, "expected an AB or CD line")),
            };
            if tok.len() != 4 {
                return Err(parse_err(lno, format!("{tag} line needs 4 fields")));
            }
            let i: usize = tok[1].parse().map_err(|_| parse_err(lno, "bad index"))?;
            if i != dest.len() + 1 {
                return Err(parse_err(lno, format!("{tag} lines must be numbered 1..n in order")));
            }
            let a = parse_bits(field(Some(tok[2]), first, lno)?, lno)?;
            let b = parse_bits(field(Some(tok[3]), second, lno)?, lno)?;
            if a.len() != n || b.len() != n {
                return Err(parse_err(lno, "bit-string length differs from n"));
            }
            let s = SetIntInstance::new(a, b).map_err(|e| parse_err(lno, e.to_string()))?;
            dest.push(s);
        }
        if ab.len() != n || cd.len() != n {
            return Err(parse_err(0, format!("expected {n} AB and {n} CD lines")));
        }
        HpcInstance::new(ab, cd)
    }
}

/// Pointer chain `z_0, …, z_k` with `z_0 = x_1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PointerTrace {
    z: Vec<usize>,
}

impl PointerTrace {
    pub fn k(&self) -> usize {
        self.z.len() - 1
    }

    pub fn z(&self) -> &[usize] {
        &self.z
    }

    pub fn answer(&self) -> usize {
        *self.z.last().expect("trace is never empty")
    }

    pub fn universe(&self, j: usize) -> Universe {
        Universe::of_step(j)
    }

    /// `z_0=x1 z_1=y1 …`, 1-based.
    pub fn to_text(&self) -> String {
        self.z
            .iter()
            .enumerate()
            .map(|(j, z)| format!("z_{}={}{}", j, Universe::of_step(j).letter(), z + 1))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Draws `(a, b)` from D_SI on `[n]`: every coordinate from μ, then a uniform
/// target is overwritten with `(1, 1)`.
pub fn sample_set_int_with(n: usize, rng: &mut dyn Randomness, stream: Stream) -> Result<SetIntInstance> {
    if n == 0 {
        return Err(Error::InvalidSize("Set-Int needs n >= 1".into()));
    }
    let mut a = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    for _ in 0..n {
        let (x, y) = MU[rng.uniform(stream, 3)];
        a.push(x);
        b.push(y);
    }
    let t = rng.uniform(stream, n);
    a[t] = true;
    b[t] = true;
    Ok(SetIntInstance { a, b, t })
}

pub fn sample_set_int(n: usize, seed: u64) -> Result<SetIntInstance> {
    sample_set_int_with(n, &mut SeededCoins::new(seed), Stream::Public)
}

/// Draws from D_PI, i.e. D_SI on a universe of two.
pub fn sample_pair_int_with(rng: &mut dyn Randomness, stream: Stream) -> PairIntInstance {
    let s = sample_set_int_with(2, rng, stream).expect("n = 2 is valid");
    PairIntInstance {
        x1: s.a[0],
        x2: s.a[1],
        y1: s.b[0],
        y2: s.b[1],
    }
}

/// 2n independent D_SI draws: the n AB instances, then the n CD instances.
pub fn sample_hpc_with(n: usize, rng: &mut dyn Randomness, stream: Stream) -> Result<HpcInstance> {
    if n == 0 {
        return Err(Error::InvalidSize("HPC needs n >= 1".into()));
    }
    let ab = (0..n)
        .map(|_| sample_set_int_with(n, rng, stream))
        .collect::<Result<Vec<_>>>()?;
    let cd = (0..n)
        .map(|_| sample_set_int_with(n, rng, stream))
        .collect::<Result<Vec<_>>>()?;
    Ok(HpcInstance { n, ab, cd })
}

pub fn sample_hpc(n: usize, seed: u64) -> Result<HpcInstance> {
    sample_hpc_with(n, &mut SeededCoins::new(seed), Stream::Public)
}

/// Samples `a` from D_SI conditioned on `b`.
///
/// Under D_SI every promise pair is equally likely, so given `b` the target is
/// uniform over the ones of `b`, the other ones of `b` force `a = 0`, and the
/// zeros of `b` leave `a` uniform.
pub fn sample_a_given_b(b: &[bool], rng: &mut dyn Randomness, stream: Stream) -> Result<Vec<bool>> {
    complete_side(b, rng, stream)
}

/// Samples `b` from D_SI conditioned on `a`; mirror of [`sample_a_given_b`].
pub fn sample_b_given_a(a: &[bool], rng: &mut dyn Randomness, stream: Stream) -> Result<Vec<bool>> {
    complete_side(a, rng, stream)
}

fn complete_side(known: &[bool], rng: &mut dyn Randomness, stream: Stream) -> Result<Vec<bool>> {
    let ones: Vec<usize> = (0..known.len()).filter(|&i| known[i]).collect();
    if ones.is_empty() {
        return Err(Error::Validation("a D_SI side always contains the target".into()));
    }
    let t = ones[rng.uniform(stream, ones.len())];
    Ok((0..known.len())
        .map(|i| if i == t { true } else if known[i] { false } else { rng.uniform(stream, 2) == 1 })
        .collect())
}

/// Computes `z_0..z_k`.
pub fn chase(inst: &HpcInstance, k: usize) -> PointerTrace {
    let mut z = Vec::with_capacity(k + 1);
    z.push(0);
    for j in 0..k {
        let next = inst.step_instance(j, z[j]).target();
        z.push(next);
    }
    PointerTrace { z }
}

/// Where π_PI put the Pair-Int coordinates and which coordinates it sampled
/// publicly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Placement {
    pub i: usize,
    pub j: usize,
    /// `ℓ = |S|`.
    pub ell: usize,
    /// Sorted `S ⊆ [n] ∖ {i, j}`; its a-bits are public.
    pub s: Vec<usize>,
    /// Sorted `[n] ∖ ({i, j} ∪ S)`; its b-bits are public.
    pub s_bar: Vec<usize>,
}

impl Placement {
    /// Coordinates whose a-bit is public (`S`).
    pub fn public_a(&self) -> &[usize] {
        &self.s
    }

    /// Coordinates whose b-bit is public (`S̄`).
    pub fn public_b(&self) -> &[usize] {
        &self.s_bar
    }

    /// Coordinates whose a-bit Alice samples privately (`S̄`).
    pub fn private_a(&self) -> &[usize] {
        &self.s_bar
    }

    /// Coordinates whose b-bit Bob samples privately (`S`).
    pub fn private_b(&self) -> &[usize] {
        &self.s
    }
}

/// Public part of π_PI's placement: `i`, `j`, `ℓ` and `S`.
pub fn sample_placement(n: usize, rng: &mut dyn Randomness) -> Result<(usize, usize, Vec<usize>)> {
    if n < 2 {
        return Err(Error::InvalidSize("Pair-Int embedding needs n >= 2".into()));
    }
    let i = rng.uniform(Stream::Public, n);
    let mut j = rng.uniform(Stream::Public, n - 1);
    if j >= i {
        j += 1;
    }
    let ell = rng.uniform(Stream::Public, n - 1);
    let mut rest: Vec<usize> = (0..n).filter(|&c| c != i && c != j).collect();
    let mut s = Vec::with_capacity(ell);
    for _ in 0..ell {
        s.push(rest.remove(rng.uniform(Stream::Public, rest.len())));
    }
    s.sort_unstable();
    Ok((i, j, s))
}

/// Embeds `p` into an `n`-coordinate Set-Int instance at a fixed placement,
/// sampling the remaining coordinates with public and private coins.
pub fn embed_pair_int_at(
    p: &PairIntInstance,
    n: usize,
    i: usize,
    j: usize,
    s: &[usize],
    rng: &mut dyn Randomness,
) -> Result<(SetIntInstance, Placement)> {
    if n < 2 {
        return Err(Error::InvalidSize("Pair-Int embedding needs n >= 2".into()));
    }
    if i >= n || j >= n || i == j {
        return Err(Error::Validation("i and j must be distinct indices in [n]".into()));
    }
    let mut s: Vec<usize> = s.to_vec();
    s.sort_unstable();
    s.dedup();
    if s.iter().any(|&c| c >= n || c == i || c == j) {
        return Err(Error::Validation("S must be a subset of [n] minus {i, j}".into()));
    }
    let s_bar: Vec<usize> = (0..n).filter(|&c| c != i && c != j && s.binary_search(&c).is_err()).collect();

    let mut a = vec![false; n];
    let mut b = vec![false; n];
    (a[i], b[i], a[j], b[j]) = (p.x1, p.y1, p.x2, p.y2);
    // Public marginals of μ: Pr(a = 1) = Pr(b = 1) = 1/3.
    for &c in &s {
        a[c] = rng.pick(Stream::Public, &[2, 1]) == 1;
    }
    for &c in &s_bar {
        b[c] = rng.pick(Stream::Public, &[2, 1]) == 1;
    }
    // Private completions so that each pair is jointly μ.
    for &c in &s_bar {
        a[c] = !b[c] && rng.uniform(Stream::Alice, 2) == 1;
    }
    for &c in &s {
        b[c] = !a[c] && rng.uniform(Stream::Bob, 2) == 1;
    }
    let inst = SetIntInstance::new(a, b)?;
    let placement = Placement {
        i,
        j,
        ell: s.len(),
        s,
        s_bar,
    };
    Ok((inst, placement))
}

/// π_PI's sampling step: random placement plus [`embed_pair_int_at`].
pub fn embed_pair_int(
    p: &PairIntInstance,
    n: usize,
    rng: &mut dyn Randomness,
) -> Result<(SetIntInstance, Placement)> {
    let (i, j, s) = sample_placement(n, rng)?;
    embed_pair_int_at(p, n, i, j, &s, rng)
}

pub fn bits_to_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

pub(crate) fn parse_bits(s: &str, line: usize) -> Result<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(parse_err(line, format!("bad bit `{c}`"))),
        })
        .collect()
}

pub(crate) fn field<'a>(tok: Option<&'a str>, key: &str, line: usize) -> Result<&'a str> {
    tok.and_then(|t| t.strip_prefix(key)?.strip_prefix('='))
        .ok_or_else(|| parse_err(line, format!("expected `{key}=`")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n1_set_int_is_forced() {
        for seed in 0..10 {
            let s = sample_set_int(1, seed).unwrap();
            assert_eq!((s.a(), s.b(), s.target()), (&[true][..], &[true][..], 0));
        }
        assert!(matches!(sample_set_int(0, 1), Err(Error::InvalidSize(_))));
        assert!(matches!(sample_hpc(0, 1), Err(Error::InvalidSize(_))));
    }

    #[test]
    fn rejects_non_promise_pairs() {
        assert!(SetIntInstance::new(vec![true, true], vec![true, true]).is_err());
        assert!(SetIntInstance::new(vec![true, false], vec![false, true]).is_err());
        assert!(PairIntInstance::new(true, true, true, true).is_err());
        assert_eq!(PairIntInstance::all().len(), 6);
    }

    #[test]
    fn chase_k0_and_n1() {
        let inst = sample_hpc(4, 3).unwrap();
        assert_eq!(chase(&inst, 0).z(), &[0]);
        let one = sample_hpc(1, 3).unwrap();
        assert_eq!(chase(&one, 5).z(), &[0; 6]);
        assert_eq!((one.f_ab(0), one.f_cd(0)), (0, 0));
    }

    #[test]
    fn text_round_trip() {
        let inst = sample_hpc(5, 11).unwrap();
        let text = inst.to_text();
        assert_eq!(HpcInstance::parse(&text).unwrap(), inst);
        assert_eq!(HpcInstance::parse(&text).unwrap().to_text(), text);
        let s = sample_set_int(6, 2).unwrap();
        assert_eq!(SetIntInstance::parse(&s.to_text()).unwrap(), s);
    }

    #[test]
    fn parse_rejects_malformed_input() {
        assert!(HpcInstance::parse("HPC n=1\nAB 1 a=1 b=1\n").is_err());
        assert!(HpcInstance::parse("HPC n=1\nAB 1 a=1 b=1\nCD 1 c=1 d=0\n").is_err());
        assert!(HpcInstance::parse("HPC n=1\nAB 2 a=1 b=1\nCD 1 c=1 d=1\n").is_err());
        assert!(SetIntInstance::parse("SI n=2 a=10 b=1x").is_err());
    }

    #[test]
    fn forced_pair_int_embedding() {
        let p = PairIntInstance::new(true, false, true, false).unwrap();
        for seed in 0..50 {
            let (inst, place) = embed_pair_int(&p, 2, &mut SeededCoins::new(seed)).unwrap();
            assert_eq!(inst.target(), place.i);
        }
        assert!(embed_pair_int(&p, 1, &mut SeededCoins::new(0)).is_err());
    }
}
