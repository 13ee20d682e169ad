//! Exact scalars: finite rational combinations of square roots of integers.
//!
//! A scalar is stored as a map from squarefree radicand `m` to a nonzero
//! rational coefficient. `rt(m)` is the positive root for `m > 0` and
//! `i * sqrt(|m|)` for `m < 0`, so every value lives in a fixed complex
//! embedding.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Rational linear combination of `rt(m)` for squarefree nonzero `m`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ExactScalar {
    terms: BTreeMap<i64, BigRational>,
}

/// Write `n = k^2 * d` with `d` squarefree and carrying the sign of `n`.
pub fn reduce_root(n: i64) -> Result<(u64, i64)> {
    if n == 0 {
        return Err(Error::ZeroRadicand);
    }
    let sign = n.signum();
    let mut rest = n.unsigned_abs();
    let mut k: u64 = 1;
    let mut d: u64 = 1;
    let mut f: u64 = 2;
    while f * f <= rest {
        let mut e = 0;
        while rest.is_multiple_of(f) {
            rest /= f;
            e += 1;
        }
        k *= f.pow(e / 2);
        if e % 2 == 1 {
            d *= f;
        }
        f += 1;
    }
    d *= rest;
    Ok((k, sign * d as i64))
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2;
    while f * f <= n {
        if n.is_multiple_of(f) {
            out.push(f);
            while n.is_multiple_of(f) {
                n /= f;
            }
        }
        f += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// p-adic valuation of a nonzero big integer.
pub fn int_valuation(n: &BigInt, p: u64) -> i64 {
    let pb = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    while !n.is_zero() && (&n % &pb).is_zero() {
        n /= &pb;
        v += 1;
    }
    v
}

/// p-adic valuation of a nonzero rational.
pub fn rat_valuation(q: &BigRational, p: u64) -> i64 {
    int_valuation(q.numer(), p) - int_valuation(q.denom(), p)
}

impl ExactScalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(rat(n))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::from_rational(BigRational::from_integer(n))
    }

    pub fn from_rational(q: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(1, q);
        }
        Self { terms }
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    /// `rt(m)` for any nonzero integer `m`, reduced to `k * rt(d)`.
    pub fn rt(m: i64) -> Self {
        let (k, d) = reduce_root(m).expect("rt of zero");
        Self::term(d, rat(k as i64))
    }

    /// The imaginary unit `rt(-1)`.
    pub fn i() -> Self {
        Self::rt(-1)
    }

    /// `i^k` for any integer `k`.
    pub fn i_pow(k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => Self::one(),
            1 => Self::i(),
            2 => Self::from_int(-1),
            _ => -Self::i(),
        }
    }

    fn term(m: i64, q: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(m, q);
        }
        Self { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms as (radicand, coefficient) pairs in ascending radicand order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigRational)> {
        self.terms.iter().map(|(m, q)| (*m, q))
    }

    /// The value as a rational, if it has no irrational part.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&1).cloned(),
            _ => None,
        }
    }

    pub fn is_rational(&self) -> bool {
        self.as_rational().is_some()
    }

    fn add_term(&mut self, m: i64, q: BigRational) {
        if q.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(BigRational::zero);
        *entry += q;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(m, c)| (*m, c * q)).collect(),
        }
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.scale(&rat(n))
    }

    /// Complex conjugate under the fixed embedding.
    pub fn conj(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(m, q)| (*m, if *m < 0 { -q.clone() } else { q.clone() }))
                .collect(),
        }
    }

    /// Apply the field automorphism fixing each `rt(l)` up to the sign `sign(l)`.
    fn galois(&self, sign: impl Fn(i64) -> i64) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(m, q)| {
                    let s = sign(*m);
                    (*m, if s < 0 { -q.clone() } else { q.clone() })
                })
                .collect(),
        }
    }

    /// All Galois conjugates over the field generated by `rt(-1)` and `rt(l)`
    /// for each prime `l` dividing a radicand (with repetition).
    pub fn conjugates(&self) -> Vec<ExactScalar> {
        let mut gens: Vec<i64> = Vec::new();
        for m in self.terms.keys() {
            if *m < 0 && !gens.contains(&-1) {
                gens.push(-1);
            }
            for l in prime_factors(m.unsigned_abs()) {
                if !gens.contains(&(l as i64)) {
                    gens.push(l as i64);
                }
            }
        }
        gens.sort_unstable();
        let mut out = Vec::with_capacity(1 << gens.len());
        for mask in 0u32..(1u32 << gens.len()) {
            let flips: Vec<i64> = gens
                .iter()
                .enumerate()
                .filter(|(j, _)| mask & (1 << j) != 0)
                .map(|(_, g)| *g)
                .collect();
            out.push(self.galois(|m| {
                let mut s = 1;
                for g in &flips {
                    let hit = if *g == -1 {
                        m < 0
                    } else {
                        m.unsigned_abs() % (*g as u64) == 0
                    };
                    if hit {
                        s = -s;
                    }
                }
                s
            }));
        }
        out
    }

    /// Coefficients (constant term first) of the monic polynomial whose roots
    /// are the conjugates of `self`.
    pub fn char_poly(&self) -> Vec<BigRational> {
        let mut poly: Vec<ExactScalar> = vec![ExactScalar::one()];
        for c in self.conjugates() {
            let mut next = vec![ExactScalar::zero(); poly.len() + 1];
            for (k, a) in poly.iter().enumerate() {
                next[k + 1] += a.clone();
                next[k] -= a * &c;
            }
            poly = next;
        }
        poly.into_iter()
            .map(|c| {
                c.as_rational()
                    .expect("characteristic polynomial is rational")
            })
            .collect()
    }

    /// True iff every conjugate has nonnegative p-adic valuation.
    pub fn is_p_integral(&self, p: u64) -> bool {
        let pb = BigInt::from(p);
        if self.terms.values().all(|q| !(q.denom() % &pb).is_zero()) {
            return true;
        }
        self.char_poly()
            .iter()
            .all(|c| c.is_zero() || rat_valuation(c, p) >= 0)
    }

    /// p-adic valuations of the conjugates, read off the Newton polygon of the
    /// characteristic polynomial. Zero conjugates are omitted.
    pub fn root_valuations(&self, p: u64) -> Vec<BigRational> {
        let poly = self.char_poly();
        let pts: Vec<(i64, i64)> = poly
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k as i64, rat_valuation(c, p)))
            .collect();
        let mut out = Vec::new();
        let mut cur = 0usize;
        while cur + 1 < pts.len() {
            let (x0, y0) = pts[cur];
            let mut best = cur + 1;
            for j in cur + 1..pts.len() {
                let (xb, yb) = pts[best];
                let (xj, yj) = pts[j];
                // slope comparison (yj-y0)/(xj-x0) < (yb-y0)/(xb-x0), ties take the farthest
                let lhs = (yj - y0) * (xb - x0);
                let rhs = (yb - y0) * (xj - x0);
                if lhs < rhs || (lhs == rhs && xj > xb) {
                    best = j;
                }
            }
            let (x1, y1) = pts[best];
            let slope = BigRational::new(BigInt::from(y1 - y0), BigInt::from(x1 - x0));
            for _ in 0..(x1 - x0) {
                out.push(-slope.clone());
            }
            cur = best;
        }
        out
    }

    /// Approximate complex value, for display and sanity checks only.
    pub fn to_f64_pair(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (m, q) in &self.terms {
            let c = q.to_f64().unwrap_or(f64::NAN);
            let r = (m.unsigned_abs() as f64).sqrt();
            if *m > 0 {
                re += c * r;
            } else {
                im += c * r;
            }
        }
        (re, im)
    }

    fn mul_ref(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, qa) in &self.terms {
            for (b, qb) in &other.terms {
                let prod = (*a as i128).abs() * (*b as i128).abs();
                let (k, e) = reduce_root(i64::try_from(prod).expect("radicand overflow"))
                    .expect("nonzero radicands");
                let negs = (*a < 0) as u8 + (*b < 0) as u8;
                let mut q = qa * qb * rat(k as i64);
                let m = match negs {
                    0 => e,
                    1 => -e,
                    _ => {
                        q = -q;
                        e
                    }
                };
                out.add_term(m, q);
            }
        }
        out
    }
}

impl From<i64> for ExactScalar {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<BigRational> for ExactScalar {
    fn from(q: BigRational) -> Self {
        Self::from_rational(q)
    }
}

impl Add<&ExactScalar> for &ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: &ExactScalar) -> ExactScalar {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for ExactScalar {
    type Output = ExactScalar;
    fn add(mut self, rhs: ExactScalar) -> ExactScalar {
        self += &rhs;
        self
    }
}

impl AddAssign<&ExactScalar> for ExactScalar {
    fn add_assign(&mut self, rhs: &ExactScalar) {
        for (m, q) in &rhs.terms {
            self.add_term(*m, q.clone());
        }
    }
}

impl AddAssign for ExactScalar {
    fn add_assign(&mut self, rhs: ExactScalar) {
        *self += &rhs;
    }
}

impl SubAssign<&ExactScalar> for ExactScalar {
    fn sub_assign(&mut self, rhs: &ExactScalar) {
        for (m, q) in &rhs.terms {
            self.add_term(*m, -q.clone());
        }
    }
}

impl SubAssign for ExactScalar {
    fn sub_assign(&mut self, rhs: ExactScalar) {
        *self -= &rhs;
    }
}

impl Sub<&ExactScalar> for &ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: &ExactScalar) -> ExactScalar {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for ExactScalar {
    type Output = ExactScalar;
    fn sub(mut self, rhs: ExactScalar) -> ExactScalar {
        self -= &rhs;
        self
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar {
            terms: self.terms.iter().map(|(m, q)| (*m, -q.clone())).collect(),
        }
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        -&self
    }
}

impl Mul<&ExactScalar> for &ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: &ExactScalar) -> ExactScalar {
        self.mul_ref(rhs)
    }
}

impl Mul for ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: ExactScalar) -> ExactScalar {
        self.mul_ref(&rhs)
    }
}

fn fmt_rat(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        if let Some(q) = self.terms.get(&1) {
            parts.push(fmt_rat(q));
        }
        for (m, q) in &self.terms {
            if *m != 1 {
                parts.push(format!("{}*rt({})", fmt_rat(q), m));
            }
        }
        write!(f, "{}", parts.join(" + "))
    }
}

fn parse_rat(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("bad rational '{s}'"));
    match s.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().map_err(|_| bad())?;
            let b: BigInt = b.trim().parse().map_err(|_| bad())?;
            if b.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(a, b))
        }
        None => Ok(BigRational::from_integer(
            s.trim().parse().map_err(|_| bad())?,
        )),
    }
}

impl FromStr for ExactScalar {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let mut out = ExactScalar::zero();
        if s.trim() == "0" {
            return Ok(out);
        }
        for piece in s.split(" + ") {
            match piece.split_once("*rt(") {
                Some((q, rest)) => {
                    let m: i64 = rest
                        .trim_end_matches(')')
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad radicand in '{piece}'")))?;
                    out += ExactScalar::rt(m).scale(&parse_rat(q)?);
                }
                None => out += ExactScalar::from_rational(parse_rat(piece)?),
            }
        }
        Ok(out)
    }
}

impl serde::Serialize for ExactScalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
