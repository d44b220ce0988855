//! Exact reals of the form `r + Σ c_d √d + Σ e_p log2 p`.
//!
//! `r`, `c_d` and `e_p` are rationals, `d > 1` runs over squarefree integers and
//! `p` over odd primes (`log2 2 = 1` is folded into `r`). The numbers `1`,
//! `√d` and `log2 p` are linearly independent over the rationals, so the
//! canonical form is unique and equality is structural. Signs of non-zero
//! values are settled by interval bounds of increasing precision.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Trial division handles cofactors below this squared.
const TRIAL_LIMIT: u128 = 1 << 24;
/// Precision schedule for sign decisions, in bits.
const PRECISIONS: [u32; 7] = [64, 128, 256, 512, 1024, 2048, 4096];

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ExactReal {
    rational: BigRational,
    roots: BTreeMap<BigUint, BigRational>,
    logs: BTreeMap<BigUint, BigRational>,
}

fn insert(map: &mut BTreeMap<BigUint, BigRational>, key: BigUint, coef: BigRational) {
    let entry = map.entry(key.clone()).or_insert_with(BigRational::zero);
    *entry += coef;
    if entry.is_zero() {
        map.remove(&key);
    }
}

fn ratio_of(n: BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

thread_local! {
    static FACTOR_CACHE: RefCell<HashMap<u128, Vec<(u128, u32)>>> = RefCell::new(HashMap::new());
    static LOG_CACHE: RefCell<HashMap<(BigUint, u32), (BigRational, BigRational)>> = RefCell::new(HashMap::new());
}

/// Prime factorization by trial division.
pub fn factorize(n: &BigUint) -> Result<Vec<(BigUint, u32)>> {
    let small = n
        .to_u128()
        .ok_or_else(|| Error::Resource(format!("cannot factor {n}: more than 128 bits")))?;
    if small == 0 {
        return Err(Error::Domain("cannot factor 0".into()));
    }
    if let Some(hit) = FACTOR_CACHE.with(|c| c.borrow().get(&small).cloned()) {
        return Ok(hit.into_iter().map(|(p, e)| (BigUint::from(p), e)).collect());
    }
    let mut rest = small;
    let mut out = Vec::new();
    let mut d: u128 = 2;
    while d * d <= rest && d < TRIAL_LIMIT {
        let mut e = 0;
        while rest % d == 0 {
            rest /= d;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        if d * d <= rest {
            return Err(Error::Resource(format!("cannot factor {n}: large cofactor {rest}")));
        }
        out.push((rest, 1));
    }
    FACTOR_CACHE.with(|c| c.borrow_mut().insert(small, out.clone()));
    Ok(out.into_iter().map(|(p, e)| (BigUint::from(p), e)).collect())
}

/// `2^p · atanh(num/den)` bracketed, for `0 <= num/den <= 1/3`.
fn atanh_bounds(num: &BigUint, den: &BigUint, p: u32) -> (BigUint, BigUint) {
    let (y2n, y2d) = (num * num, den * den);
    let mut pow = (BigUint::one() << p) * num / den;
    let mut sum = BigUint::zero();
    let mut terms = 0u64;
    let mut odd = 1u64;
    while !pow.is_zero() {
        sum += &pow / odd;
        terms += 1;
        odd += 2;
        pow = pow * &y2n / &y2d;
    }
    // Each truncated term is low by under 3 units and the tail is under 3.
    let hi = &sum + BigUint::from(3 * terms + 3);
    (sum, hi)
}

/// Bounds on `log2 p` for an odd prime `p`, at precision about `2^-q`.
fn log2_bounds(p: &BigUint, q: u32) -> (BigRational, BigRational) {
    let key = (p.clone(), q);
    if let Some(hit) = LOG_CACHE.with(|c| c.borrow().get(&key).cloned()) {
        return hit;
    }
    let bits = q + 24;
    let m = p.bits() - 1;
    let pw = BigUint::one() << m;
    // ln p = m ln 2 + 2 atanh((p - 2^m)/(p + 2^m)), ln 2 = 2 atanh(1/3).
    let (ly, uy) = atanh_bounds(&(p - &pw), &(p + &pw), bits);
    let (l3, u3) = atanh_bounds(&BigUint::one(), &BigUint::from(3u8), bits);
    let mr = ratio_of(BigUint::from(m));
    let lo = &mr + BigRational::new(BigInt::from(ly), BigInt::from(u3));
    let hi = &mr + BigRational::new(BigInt::from(uy), BigInt::from(l3));
    LOG_CACHE.with(|c| c.borrow_mut().insert(key, (lo.clone(), hi.clone())));
    (lo, hi)
}

/// Bounds on `√d` at precision `2^-q`.
fn sqrt_bounds(d: &BigUint, q: u32) -> (BigRational, BigRational) {
    let s = (d << (2 * q)).sqrt();
    let den = BigInt::one() << q;
    (
        BigRational::new(BigInt::from(s.clone()), den.clone()),
        BigRational::new(BigInt::from(s + 1u8), den),
    )
}

fn scaled(c: &BigRational, (lo, hi): (BigRational, BigRational)) -> (BigRational, BigRational) {
    if c.is_negative() {
        (c * hi, c * lo)
    } else {
        (c * lo, c * hi)
    }
}

impl ExactReal {
    pub fn zero() -> Self {
        ExactReal::default()
    }

    pub fn from_rational(r: BigRational) -> Self {
        ExactReal {
            rational: r,
            ..ExactReal::default()
        }
    }

    pub fn from_integer(n: i64) -> Self {
        ExactReal::from_rational(BigRational::from_integer(n.into()))
    }

    /// `√r` for `r >= 0`.
    pub fn sqrt(r: &BigRational) -> Result<Self> {
        if r.is_negative() {
            return Err(Error::Domain(format!("square root of negative {r}")));
        }
        if r.is_zero() {
            return Ok(ExactReal::zero());
        }
        // √(a/b) = √(a b) / b = (s / b) √d with a b = s² d.
        let num = r.numer().magnitude().clone();
        let den = r.denom().magnitude().clone();
        let mut exps: BTreeMap<BigUint, u32> = BTreeMap::new();
        for n in [&num, &den] {
            for (p, e) in factorize(n)? {
                *exps.entry(p).or_insert(0) += e;
            }
        }
        let (mut s, mut d) = (BigUint::one(), BigUint::one());
        for (p, e) in exps {
            s *= num_traits::pow(p.clone(), (e / 2) as usize);
            if e % 2 == 1 {
                d *= p;
            }
        }
        let coef = BigRational::new(BigInt::from(s), BigInt::from(den));
        let mut out = ExactReal::zero();
        if d.is_one() {
            out.rational = coef;
        } else {
            out.roots.insert(d, coef);
        }
        Ok(out)
    }

    /// `log2 r` for `r > 0`.
    pub fn log2(r: &BigRational) -> Result<Self> {
        if !r.is_positive() {
            return Err(Error::Domain(format!("log of non-positive {r}")));
        }
        let mut out = ExactReal::zero();
        for (n, sign) in [(r.numer().magnitude(), 1i64), (r.denom().magnitude(), -1)] {
            for (p, e) in factorize(n)? {
                let c = BigRational::from_integer(BigInt::from(sign * i64::from(e)));
                if p == BigUint::from(2u8) {
                    out.rational += c;
                } else {
                    insert(&mut out.logs, p, c);
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return ExactReal::zero();
        }
        ExactReal {
            rational: &self.rational * c,
            roots: self.roots.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
            logs: self.logs.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.roots.is_empty() && self.logs.is_empty()
    }

    /// The value when it is rational.
    pub fn as_rational(&self) -> Option<&BigRational> {
        (self.roots.is_empty() && self.logs.is_empty()).then_some(&self.rational)
    }

    /// Rigorous enclosure `[lo, hi]` of the value.
    pub fn bounds(&self, q: u32) -> (BigRational, BigRational) {
        let mut lo = self.rational.clone();
        let mut hi = self.rational.clone();
        for (d, c) in &self.roots {
            let (l, h) = scaled(c, sqrt_bounds(d, q));
            lo += l;
            hi += h;
        }
        for (p, c) in &self.logs {
            let (l, h) = scaled(c, log2_bounds(p, q));
            lo += l;
            hi += h;
        }
        (lo, hi)
    }

    /// Sign of the value; `None` only if 4096-bit bounds cannot separate it
    /// from zero.
    pub fn signum(&self) -> Option<Ordering> {
        if self.is_zero() {
            return Some(Ordering::Equal);
        }
        if let Some(r) = self.as_rational() {
            return Some(r.cmp(&BigRational::zero()));
        }
        for q in PRECISIONS {
            let (lo, hi) = self.bounds(q);
            if lo.is_positive() {
                return Some(Ordering::Greater);
            }
            if hi.is_negative() {
                return Some(Ordering::Less);
            }
        }
        None
    }

    pub fn cmp_exact(&self, other: &ExactReal) -> Option<Ordering> {
        (self - other).signum()
    }

    /// `self <= other`, with an unresolved comparison counted as false.
    pub fn le(&self, other: &ExactReal) -> bool {
        matches!(self.cmp_exact(other), Some(Ordering::Less | Ordering::Equal))
    }

    pub fn to_f64(&self) -> f64 {
        let f = |r: &BigRational| r.to_f64().unwrap_or(f64::NAN);
        let roots: f64 = self
            .roots
            .iter()
            .map(|(d, c)| f(c) * d.to_f64().unwrap_or(f64::NAN).sqrt())
            .sum();
        let logs: f64 = self
            .logs
            .iter()
            .map(|(p, c)| f(c) * p.to_f64().unwrap_or(f64::NAN).log2())
            .sum();
        f(&self.rational) + roots + logs
    }
}

impl From<BigRational> for ExactReal {
    fn from(r: BigRational) -> Self {
        ExactReal::from_rational(r)
    }
}

impl AddAssign<&ExactReal> for ExactReal {
    fn add_assign(&mut self, rhs: &ExactReal) {
        self.rational += &rhs.rational;
        for (k, v) in &rhs.roots {
            insert(&mut self.roots, k.clone(), v.clone());
        }
        for (k, v) in &rhs.logs {
            insert(&mut self.logs, k.clone(), v.clone());
        }
    }
}

impl SubAssign<&ExactReal> for ExactReal {
    fn sub_assign(&mut self, rhs: &ExactReal) {
        *self += &-rhs;
    }
}

impl Neg for &ExactReal {
    type Output = ExactReal;
    fn neg(self) -> ExactReal {
        self.scale(&-BigRational::one())
    }
}

impl Neg for ExactReal {
    type Output = ExactReal;
    fn neg(self) -> ExactReal {
        -&self
    }
}

impl Add<&ExactReal> for &ExactReal {
    type Output = ExactReal;
    fn add(self, rhs: &ExactReal) -> ExactReal {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&ExactReal> for &ExactReal {
    type Output = ExactReal;
    fn sub(self, rhs: &ExactReal) -> ExactReal {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Add for ExactReal {
    type Output = ExactReal;
    fn add(mut self, rhs: ExactReal) -> ExactReal {
        self += &rhs;
        self
    }
}

impl Sub for ExactReal {
    type Output = ExactReal;
    fn sub(mut self, rhs: ExactReal) -> ExactReal {
        self -= &rhs;
        self
    }
}

impl std::iter::Sum for ExactReal {
    fn sum<I: Iterator<Item = ExactReal>>(iter: I) -> ExactReal {
        iter.fold(ExactReal::zero(), |acc, x| acc + x)
    }
}

impl fmt::Display for ExactReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.rational.is_zero() || (self.roots.is_empty() && self.logs.is_empty()) {
            parts.push(self.rational.to_string());
        }
        parts.extend(self.roots.iter().map(|(d, c)| format!("{c}*sqrt({d})")));
        parts.extend(self.logs.iter().map(|(p, c)| format!("{c}*log2({p})")));
        write!(f, "{}", parts.join(" + "))
    }
}
