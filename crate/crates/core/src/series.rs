//! Truncated Laurent series in `q`.
//!
//! A [`LaurentSeries`] holds the coefficients of `q^offset ..= q^(trunc - 1)`.
//! Every coefficient at or above `trunc` is unknown, and every operation
//! reports the tightest truncation it can justify. The offset is only a
//! storage origin: the leading stored coefficient may be zero, and
//! [`LaurentSeries::valuation`] is the way to ask for the first nonzero term.
//!
//! Coefficients live in one of two rings. [`Ring::EXACT`] uses arbitrary
//! precision integers; [`Ring::mod2k`] keeps residues mod `2^k` in native
//! words, computes with wrapping arithmetic (exact mod `2^64`) and masks the
//! result down to `k` bits.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Coefficient ring: the integers, or `Z/2^kZ` with `1 <= k <= 64`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ring {
    bits: Option<u32>,
}

impl Ring {
    pub const EXACT: Ring = Ring { bits: None };
    pub const MAX_BITS: u32 = 64;

    pub fn mod2k(k: u32) -> Result<Ring> {
        if k == 0 || k > Self::MAX_BITS {
            return Err(Error::InvalidRing(k));
        }
        Ok(Ring { bits: Some(k) })
    }

    /// `Some(k)` for `Z/2^kZ`, `None` for the integers.
    pub fn bits(self) -> Option<u32> {
        self.bits
    }

    pub fn is_exact(self) -> bool {
        self.bits.is_none()
    }

    pub(crate) fn mask(self) -> u64 {
        match self.bits {
            Some(64) | None => u64::MAX,
            Some(k) => (1u64 << k) - 1,
        }
    }

    /// Whether values in `self` determine values in `target`.
    pub fn refines(self, target: Ring) -> bool {
        match (self.bits, target.bits) {
            (None, _) => true,
            (Some(a), Some(b)) => b <= a,
            (Some(_), None) => false,
        }
    }

    /// Canonical representative of `v` in this ring.
    pub fn reduce(self, v: &BigInt) -> BigInt {
        match self.bits {
            None => v.clone(),
            Some(_) => BigInt::from(word_of(v) & self.mask()),
        }
    }

    fn word(self, v: i64) -> u64 {
        (v as u64) & self.mask()
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.bits {
            None => f.write_str("exact"),
            Some(k) => write!(f, "mod2k:{k}"),
        }
    }
}

impl FromStr for Ring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Ring> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("exact") {
            return Ok(Ring::EXACT);
        }
        let k = s
            .strip_prefix("mod2k:")
            .ok_or_else(|| Error::parse(0, format!("expected `exact` or `mod2k:K`, got `{s}`")))?;
        let k: u32 = k
            .parse()
            .map_err(|_| Error::parse(6, format!("bad modulus exponent `{k}`")))?;
        Ring::mod2k(k)
    }
}

/// Low 64 bits of `v` in two's complement, i.e. `v mod 2^64`.
fn word_of(v: &BigInt) -> u64 {
    let (_, digits) = v.to_u64_digits();
    let low = digits.first().copied().unwrap_or(0);
    if v.is_negative() {
        low.wrapping_neg()
    } else {
        low
    }
}

/// First nonzero exponent, or the marker for a series that vanishes through
/// its truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Valuation {
    Finite(i64),
    ZeroThroughTruncation,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::ZeroThroughTruncation => None,
        }
    }
}

pub(crate) trait Scalar: Clone + PartialEq + fmt::Debug {
    fn nil() -> Self;
    fn is_nil(&self) -> bool;
    fn acc(&mut self, o: &Self);
    fn acc_prod(&mut self, a: &Self, b: &Self);
    /// `self += c * x` for a small integer `c`.
    fn acc_small(&mut self, c: i64, x: &Self);
    fn times(&self, o: &Self) -> Self;
    fn negated(&self) -> Self;
}

impl Scalar for u64 {
    fn nil() -> Self {
        0
    }
    fn is_nil(&self) -> bool {
        *self == 0
    }
    #[inline]
    fn acc(&mut self, o: &Self) {
        *self = self.wrapping_add(*o);
    }
    #[inline]
    fn acc_prod(&mut self, a: &Self, b: &Self) {
        *self = self.wrapping_add(a.wrapping_mul(*b));
    }
    #[inline]
    fn acc_small(&mut self, c: i64, x: &Self) {
        *self = self.wrapping_add((c as u64).wrapping_mul(*x));
    }
    fn times(&self, o: &Self) -> Self {
        self.wrapping_mul(*o)
    }
    fn negated(&self) -> Self {
        self.wrapping_neg()
    }
}

impl Scalar for BigInt {
    fn nil() -> Self {
        <BigInt as Zero>::zero()
    }
    fn is_nil(&self) -> bool {
        <BigInt as Zero>::is_zero(self)
    }
    fn acc(&mut self, o: &Self) {
        *self += o;
    }
    fn acc_prod(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }
    fn acc_small(&mut self, c: i64, x: &Self) {
        match c {
            0 => {}
            1 => *self += x,
            -1 => *self -= x,
            _ => *self += x * c,
        }
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negated(&self) -> Self {
        -self
    }
}

/// Truncated product of two coefficient vectors.
fn convolve<C: Scalar>(a: &[C], b: &[C], len: usize) -> Vec<C> {
    let mut out = vec![C::nil(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_nil() {
            continue;
        }
        for (o, y) in out[i..].iter_mut().zip(b) {
            o.acc_prod(x, y);
        }
    }
    out
}

/// Reciprocal of a series with unit constant term `1/inv0`.
fn reciprocal<C: Scalar>(a: &[C], len: usize, inv0: &C) -> Vec<C> {
    let support: Vec<usize> = (1..a.len().min(len)).filter(|&k| !a[k].is_nil()).collect();
    let neg_inv0 = inv0.negated();
    let mut c: Vec<C> = Vec::with_capacity(len);
    c.push(inv0.clone());
    for n in 1..len {
        let mut s = C::nil();
        for &k in &support {
            if k > n {
                break;
            }
            s.acc_prod(&a[k], &c[n - k]);
        }
        c.push(neg_inv0.times(&s));
    }
    c
}

fn mul_sparse_in_place<C: Scalar>(c: &mut [C], f: &SparseFactor) {
    for n in (0..c.len()).rev() {
        let mut acc = if f.lead == 1 { c[n].clone() } else { c[n].negated() };
        for &(k, t) in &f.terms {
            if k > n {
                break;
            }
            acc.acc_small(t, &c[n - k]);
        }
        c[n] = acc;
    }
}

fn div_sparse_in_place<C: Scalar>(c: &mut [C], f: &SparseFactor) {
    for n in 0..c.len() {
        let mut acc = c[n].clone();
        for &(k, t) in &f.terms {
            if k > n {
                break;
            }
            acc.acc_small(-t, &c[n - k]);
        }
        c[n] = if f.lead == 1 { acc } else { acc.negated() };
    }
}

/// A power series with constant term `±1` and few nonzero small integer
/// coefficients, known exactly. Multiplying or dividing by one costs
/// `O(len * terms)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct SparseFactor {
    lead: i64,
    /// `(exponent, coefficient)` for exponents >= 1, ascending.
    terms: Vec<(usize, i64)>,
}

impl SparseFactor {
    /// `1 - q^d`.
    pub(crate) fn binomial(d: usize) -> Self {
        SparseFactor {
            lead: 1,
            terms: vec![(d, -1)],
        }
    }

    /// `f_m = (q^m; q^m)_inf` through `q^(len-1)` by Euler's pentagonal
    /// number theorem: `sum_k (-1)^k q^(m k (3k-1)/2)` over all integers k.
    pub(crate) fn pentagonal(m: usize, len: usize) -> Self {
        let mut terms = Vec::new();
        for k in 1usize.. {
            let sign = if k % 2 == 1 { -1 } else { 1 };
            let lo = m * k * (3 * k - 1) / 2;
            if lo >= len {
                break;
            }
            terms.push((lo, sign));
            let hi = m * k * (3 * k + 1) / 2;
            if hi < len {
                terms.push((hi, sign));
            }
        }
        SparseFactor { lead: 1, terms }
    }

    pub(crate) fn len(&self) -> usize {
        self.terms.len() + 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Coeffs {
    Exact(Vec<BigInt>),
    Word(Vec<u64>),
}

impl Coeffs {
    fn len(&self) -> usize {
        match self {
            Coeffs::Exact(v) => v.len(),
            Coeffs::Word(v) => v.len(),
        }
    }

    fn zeros(ring: Ring, len: usize) -> Coeffs {
        if ring.is_exact() {
            Coeffs::Exact(vec![BigInt::zero(); len])
        } else {
            Coeffs::Word(vec![0; len])
        }
    }
}

/// Truncated Laurent series over a [`Ring`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentSeries {
    ring: Ring,
    offset: i64,
    coeffs: Coeffs,
}

macro_rules! zip_coeffs {
    ($a:expr, $b:expr, |$x:ident, $y:ident| $body:expr) => {
        match (&$a.coeffs, &$b.coeffs) {
            (Coeffs::Exact($x), Coeffs::Exact($y)) => Coeffs::Exact($body),
            (Coeffs::Word($x), Coeffs::Word($y)) => Coeffs::Word($body),
            _ => unreachable!("rings checked by caller"),
        }
    };
}

impl LaurentSeries {
    fn build(ring: Ring, offset: i64, mut coeffs: Coeffs) -> Self {
        assert!(coeffs.len() > 0, "a series needs at least one known coefficient");
        if let Coeffs::Word(w) = &mut coeffs {
            let mask = ring.mask();
            if mask != u64::MAX {
                w.iter_mut().for_each(|c| *c &= mask);
            }
        }
        LaurentSeries {
            ring,
            offset,
            coeffs,
        }
    }

    /// Series with the given coefficients starting at `q^offset`; the
    /// truncation is `offset + coeffs.len()`.
    ///
    /// # Panics
    /// If `coeffs` is empty.
    pub fn from_i64s(ring: Ring, offset: i64, coeffs: &[i64]) -> Self {
        let c = if ring.is_exact() {
            Coeffs::Exact(coeffs.iter().map(|&v| BigInt::from(v)).collect())
        } else {
            Coeffs::Word(coeffs.iter().map(|&v| ring.word(v)).collect())
        };
        Self::build(ring, offset, c)
    }

    /// # Panics
    /// If `coeffs` is empty.
    pub fn from_bigints(ring: Ring, offset: i64, coeffs: Vec<BigInt>) -> Self {
        let c = if ring.is_exact() {
            Coeffs::Exact(coeffs)
        } else {
            Coeffs::Word(coeffs.iter().map(word_of).collect())
        };
        Self::build(ring, offset, c)
    }

    /// # Panics
    /// If `trunc <= offset`.
    pub fn zero(ring: Ring, offset: i64, trunc: i64) -> Self {
        assert!(trunc > offset, "truncation must exceed offset");
        Self::build(ring, offset, Coeffs::zeros(ring, (trunc - offset) as usize))
    }

    /// `1 + O(q^trunc)`.
    ///
    /// # Panics
    /// If `trunc < 1`.
    pub fn one(ring: Ring, trunc: i64) -> Self {
        Self::monomial(ring, 1, 0, trunc)
    }

    /// `c q^e + O(q^trunc)`.
    ///
    /// # Panics
    /// If `trunc <= e`.
    pub fn monomial(ring: Ring, c: i64, e: i64, trunc: i64) -> Self {
        let mut s = Self::zero(ring, e, trunc);
        match &mut s.coeffs {
            Coeffs::Exact(v) => v[0] = BigInt::from(c),
            Coeffs::Word(v) => v[0] = ring.word(c),
        }
        s
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    /// First unknown exponent.
    pub fn trunc(&self) -> i64 {
        self.offset + self.coeffs.len() as i64
    }

    /// Number of stored coefficients, `trunc - offset`.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Coefficient of `q^e`: zero below the offset, `None` at or above the
    /// truncation.
    pub fn coeff(&self, e: i64) -> Option<BigInt> {
        if e >= self.trunc() {
            return None;
        }
        if e < self.offset {
            return Some(BigInt::zero());
        }
        let i = (e - self.offset) as usize;
        Some(match &self.coeffs {
            Coeffs::Exact(v) => v[i].clone(),
            Coeffs::Word(v) => BigInt::from(v[i]),
        })
    }

    /// Coefficient words, for a `mod 2^k` series.
    pub fn words(&self) -> Option<&[u64]> {
        match &self.coeffs {
            Coeffs::Word(v) => Some(v),
            Coeffs::Exact(_) => None,
        }
    }

    /// Coefficients from `q^offset` upwards as integers (residues in
    /// `[0, 2^k)` for a `mod 2^k` series).
    pub fn to_bigints(&self) -> Vec<BigInt> {
        match &self.coeffs {
            Coeffs::Exact(v) => v.clone(),
            Coeffs::Word(v) => v.iter().map(|&w| BigInt::from(w)).collect(),
        }
    }

    /// `(exponent, coefficient)` pairs over the known range.
    pub fn terms(&self) -> impl Iterator<Item = (i64, BigInt)> + '_ {
        let off = self.offset;
        self.to_bigints()
            .into_iter()
            .enumerate()
            .map(move |(i, c)| (off + i as i64, c))
    }

    fn is_zero_at(&self, i: usize) -> bool {
        match &self.coeffs {
            Coeffs::Exact(v) => v[i].is_zero(),
            Coeffs::Word(v) => v[i] == 0,
        }
    }

    pub fn valuation(&self) -> Valuation {
        (0..self.len())
            .find(|&i| !self.is_zero_at(i))
            .map_or(Valuation::ZeroThroughTruncation, |i| {
                Valuation::Finite(self.offset + i as i64)
            })
    }

    /// Same series stored from its valuation onwards.
    pub fn normalized(&self) -> Self {
        match self.valuation() {
            Valuation::Finite(v) if v > self.offset => self.window(v, self.trunc()),
            _ => self.clone(),
        }
    }

    /// Coefficients of exponents in `[lo, hi)`, which must lie inside the
    /// known range (or below the offset, where they are zero).
    fn window(&self, lo: i64, hi: i64) -> Self {
        debug_assert!(lo < hi && hi <= self.trunc());
        let pad = (self.offset.min(hi) - lo).max(0) as usize;
        let start = (lo - self.offset).max(0) as usize;
        let end = (hi - self.offset).max(0) as usize;
        let coeffs = match &self.coeffs {
            Coeffs::Exact(v) => {
                let mut out = vec![BigInt::zero(); pad];
                out.extend_from_slice(&v[start.min(end)..end]);
                Coeffs::Exact(out)
            }
            Coeffs::Word(v) => {
                let mut out = vec![0; pad];
                out.extend_from_slice(&v[start.min(end)..end]);
                Coeffs::Word(out)
            }
        };
        Self::build(self.ring, lo, coeffs)
    }

    /// Lower the truncation to `min(self.trunc(), trunc)`.
    pub fn truncate(&self, trunc: i64) -> Result<Self> {
        if trunc <= self.offset {
            return Err(Error::Truncation(format!(
                "cannot truncate a series starting at q^{} to q^{trunc}",
                self.offset
            )));
        }
        Ok(self.window(self.offset, trunc.min(self.trunc())))
    }

    /// Same coefficients, reduced into the coarser ring `target`.
    pub fn reduce(&self, target: Ring) -> Result<Self> {
        if !self.ring.refines(target) {
            return Err(Error::RingMismatch {
                left: self.ring,
                right: target,
            });
        }
        let coeffs = match (&self.coeffs, target.is_exact()) {
            (Coeffs::Exact(v), true) => Coeffs::Exact(v.clone()),
            (Coeffs::Exact(v), false) => Coeffs::Word(v.iter().map(word_of).collect()),
            (Coeffs::Word(v), _) => Coeffs::Word(v.clone()),
        };
        Ok(Self::build(target, self.offset, coeffs))
    }

    fn same_ring(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch {
                left: self.ring,
                right: other.ring,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let lo = self.offset.min(other.offset);
        let hi = self.trunc().min(other.trunc());
        let a = self.window(lo, hi);
        let b = other.window(lo, hi);
        let coeffs = zip_coeffs!(a, b, |x, y| {
            let mut out = x.clone();
            out.iter_mut().zip(y).for_each(|(o, v)| o.acc(v));
            out
        });
        Ok(Self::build(self.ring, lo, coeffs))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let coeffs = match &self.coeffs {
            Coeffs::Exact(v) => Coeffs::Exact(v.iter().map(|c| -c).collect()),
            Coeffs::Word(v) => Coeffs::Word(v.iter().map(|c| c.wrapping_neg()).collect()),
        };
        Self::build(self.ring, self.offset, coeffs)
    }

    pub fn scale(&self, c: i64) -> Self {
        let coeffs = match &self.coeffs {
            Coeffs::Exact(v) => Coeffs::Exact(v.iter().map(|x| x * c).collect()),
            Coeffs::Word(v) => Coeffs::Word(v.iter().map(|x| x.wrapping_mul(c as u64)).collect()),
        };
        Self::build(self.ring, self.offset, coeffs)
    }

    pub fn scale_big(&self, c: &BigInt) -> Self {
        let coeffs = match &self.coeffs {
            Coeffs::Exact(v) => Coeffs::Exact(v.iter().map(|x| x * c).collect()),
            Coeffs::Word(v) => {
                let w = word_of(c);
                Coeffs::Word(v.iter().map(|x| x.wrapping_mul(w)).collect())
            }
        };
        Self::build(self.ring, self.offset, coeffs)
    }

    /// Multiply by `q^s`.
    pub fn shift(&self, s: i64) -> Self {
        LaurentSeries {
            offset: self.offset + s,
            ..self.clone()
        }
    }

    /// Product. The offset is the sum of offsets and the truncation is
    /// `min(a.trunc + b.offset, b.trunc + a.offset)`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let len = self.len().min(other.len());
        let coeffs = zip_coeffs!(self, other, |x, y| convolve(x, y, len));
        Ok(Self::build(self.ring, self.offset + other.offset, coeffs))
    }

    /// Multiplicative inverse. The coefficient at the valuation must be a
    /// unit: `±1` over the integers, odd mod `2^k`.
    pub fn inverse(&self) -> Result<Self> {
        let v = self.valuation().finite().ok_or(Error::ZeroSeries)?;
        let start = (v - self.offset) as usize;
        let len = self.len() - start;
        let coeffs = match &self.coeffs {
            Coeffs::Exact(c) => {
                let lead = &c[start];
                if !lead.abs().is_one() {
                    return Err(Error::NotUnit {
                        exponent: v,
                        ring: self.ring,
                    });
                }
                Coeffs::Exact(reciprocal(&c[start..], len, lead))
            }
            Coeffs::Word(c) => {
                let lead = c[start];
                if lead & 1 == 0 {
                    return Err(Error::NotUnit {
                        exponent: v,
                        ring: self.ring,
                    });
                }
                Coeffs::Word(reciprocal(&c[start..], len, &inverse_word(lead)))
            }
        };
        Ok(Self::build(self.ring, -v, coeffs))
    }

    /// Integer power by binary powering; negative exponents go through
    /// [`LaurentSeries::inverse`]. `a^0` is `1` to the relative precision
    /// of `a`.
    pub fn pow(&self, e: i64) -> Result<Self> {
        if e == 0 {
            return Ok(Self::one(self.ring, self.len() as i64));
        }
        let mut base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut n = e.unsigned_abs();
        let mut acc: Option<Self> = None;
        loop {
            if n & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base)?,
                });
            }
            n >>= 1;
            if n == 0 {
                break;
            }
            base = base.mul(&base)?;
        }
        Ok(acc.expect("nonzero exponent"))
    }

    /// `a(q) -> a(q^d)`.
    ///
    /// # Panics
    /// If `d == 0`.
    pub fn substitute_qpow(&self, d: usize) -> Self {
        assert!(d > 0, "substitution q -> q^d needs d >= 1");
        let len = self.len() * d;
        let coeffs = match &self.coeffs {
            Coeffs::Exact(v) => {
                let mut out = vec![BigInt::zero(); len];
                for (i, c) in v.iter().enumerate() {
                    out[i * d] = c.clone();
                }
                Coeffs::Exact(out)
            }
            Coeffs::Word(v) => {
                let mut out = vec![0; len];
                for (i, c) in v.iter().enumerate() {
                    out[i * d] = *c;
                }
                Coeffs::Word(out)
            }
        };
        Self::build(self.ring, self.offset * d as i64, coeffs)
    }

    /// Multiply (`times > 0`) or divide (`times < 0`) by a sparse unit factor
    /// `|times|` times, in place. Offset and truncation are unchanged.
    pub(crate) fn apply_sparse(&mut self, f: &SparseFactor, times: i64) {
        for _ in 0..times.unsigned_abs() {
            match (&mut self.coeffs, times > 0) {
                (Coeffs::Exact(c), true) => mul_sparse_in_place(c, f),
                (Coeffs::Exact(c), false) => div_sparse_in_place(c, f),
                (Coeffs::Word(c), true) => mul_sparse_in_place(c, f),
                (Coeffs::Word(c), false) => div_sparse_in_place(c, f),
            }
        }
        if let Coeffs::Word(w) = &mut self.coeffs {
            let mask = self.ring.mask();
            w.iter_mut().for_each(|c| *c &= mask);
        }
    }

    /// The power series `sum_{n < count} a(start + step n) q^n`.
    pub(crate) fn stride(&self, start: i64, step: usize, count: usize) -> Self {
        assert!(count > 0 && start + ((step * (count - 1)) as i64) < self.trunc());
        let index = |n: usize| {
            let e = start + (step * n) as i64;
            (e >= self.offset).then(|| (e - self.offset) as usize)
        };
        let coeffs = match &self.coeffs {
            Coeffs::Exact(v) => Coeffs::Exact(
                (0..count)
                    .map(|n| index(n).map_or_else(BigInt::zero, |i| v[i].clone()))
                    .collect(),
            ),
            Coeffs::Word(v) => {
                Coeffs::Word((0..count).map(|n| index(n).map_or(0, |i| v[i])).collect())
            }
        };
        Self::build(self.ring, 0, coeffs)
    }

    /// True when `self` and `other` agree on every exponent below `through`.
    pub fn agrees_through(&self, other: &Self, through: i64) -> bool {
        first_difference(self, other, through).is_none()
    }
}

/// Inverse of an odd word mod `2^64` by Newton iteration.
fn inverse_word(a: u64) -> u64 {
    let mut x = a;
    for _ in 0..5 {
        x = x.wrapping_mul(2u64.wrapping_sub(a.wrapping_mul(x)));
    }
    x
}

/// Lowest exponent `e < through` at which the series differ, with both
/// coefficients. Exponents below both offsets are zero on both sides.
///
/// # Panics
/// If either series is not known through `through`.
pub fn first_difference(
    a: &LaurentSeries,
    b: &LaurentSeries,
    through: i64,
) -> Option<(i64, BigInt, BigInt)> {
    assert!(
        a.trunc() >= through && b.trunc() >= through,
        "comparison through q^{through} needs both series known that far"
    );
    let lo = a.offset().min(b.offset());
    (lo..through).find_map(|e| {
        let x = a.coeff(e).expect("in range");
        let y = b.coeff(e).expect("in range");
        (x != y).then_some((e, x, y))
    })
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            match (first, neg) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            let unit = mag.is_one();
            match e {
                0 => write!(f, "{mag}")?,
                1 if unit => f.write_str("q")?,
                1 => write!(f, "{mag}q")?,
                _ if unit => write!(f, "q^{e}")?,
                _ => write!(f, "{mag}q^{e}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(q^{})", self.trunc())?;
        if let Some(k) = self.ring.bits() {
            write!(f, " (mod 2^{k})")?;
        }
        Ok(())
    }
}

/// `prod_{i >= 0} (1 - q^(a + m i))^e` through `q^(trunc - 1)`.
///
/// The case `a == m` is `f_m^e` and goes through the pentagonal expansion.
pub fn euler_factor(a: u64, m: u64, e: i64, ring: Ring, trunc: i64) -> Result<LaurentSeries> {
    if a == 0 || m == 0 {
        return Err(Error::InvalidArgument(format!(
            "euler_factor needs a, m >= 1 (got a={a}, m={m})"
        )));
    }
    if trunc <= 0 {
        return Err(Error::Truncation(format!("euler_factor needs trunc > 0, got {trunc}")));
    }
    let len = trunc as usize;
    let mut out = LaurentSeries::one(ring, trunc);
    if a == m {
        out.apply_sparse(&SparseFactor::pentagonal(m as usize, len), e);
    } else {
        for d in (a as usize..len).step_by(m as usize) {
            out.apply_sparse(&SparseFactor::binomial(d), e);
        }
    }
    Ok(out)
}

/// `f_m = (q^m; q^m)_inf` through `q^(trunc - 1)`.
pub fn f_series(m: u64, ring: Ring, trunc: i64) -> Result<LaurentSeries> {
    euler_factor(m, m, 1, ring, trunc)
}

/// Ramanujan's theta function `f(-q^x, -q^y)`, that is
/// `sum_{n in Z} (-1)^n q^(x n(n+1)/2 + y n(n-1)/2)`, through `q^(trunc - 1)`.
pub fn theta_f(x: u64, y: u64, ring: Ring, trunc: i64) -> Result<LaurentSeries> {
    if x == 0 || y == 0 {
        return Err(Error::InvalidArgument(format!(
            "theta_f needs x, y >= 1 (got x={x}, y={y})"
        )));
    }
    if trunc <= 0 {
        return Err(Error::Truncation(format!("theta_f needs trunc > 0, got {trunc}")));
    }
    let len = trunc as u64;
    let mut c = vec![0i64; len as usize];
    // n >= 0 and n = -m (m >= 1) separately; both exponent sequences increase.
    for n in 0u64.. {
        let e = x * n * (n + 1) / 2 + y * n * n.saturating_sub(1) / 2;
        if e >= len {
            break;
        }
        c[e as usize] += if n % 2 == 0 { 1 } else { -1 };
    }
    for m in 1u64.. {
        let e = x * m * (m - 1) / 2 + y * m * (m + 1) / 2;
        if e >= len {
            break;
        }
        c[e as usize] += if m % 2 == 0 { 1 } else { -1 };
    }
    Ok(LaurentSeries::from_i64s(ring, 0, &c))
}

impl LaurentSeries {
    /// Convenience: the coefficient at `q^e` as `i64`, if known and small.
    pub fn coeff_i64(&self, e: i64) -> Option<i64> {
        self.coeff(e).and_then(|c| c.to_i64())
    }
}
