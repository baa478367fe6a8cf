//! Eta quotients `q^s * prod_{d | M} f_d^{r_d}` with `f_d = (q^d; q^d)_inf`.
//!
//! No `q^(d/24)` eta prefactor is implied: the explicit power of `q` is
//! carried in [`EtaQuotient::qshift`], so every exponent is an integer.
//!
//! The textual form is a `*`-separated product of factors, each `q^e`,
//! `fd^e`, or the empty product `1`:
//!
//! ```text
//! q^-17 * f1^79 * f2^-38 * f4^36 * f8^-72
//! ```
//!
//! Whitespace is ignored everywhere. `^e` may be omitted for exponent 1.
//! Repeated factors combine. The canonical rendering lists the `q` power
//! first, then the `f` factors by increasing divisor, skipping zero
//! exponents.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::series::{LaurentSeries, Ring, SparseFactor};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EtaQuotient {
    level: u64,
    exponents: BTreeMap<u64, i64>,
    qshift: i64,
}

impl EtaQuotient {
    /// Every key of `exponents` must divide `level`. Zero exponents are
    /// dropped.
    pub fn new(
        level: u64,
        exponents: impl IntoIterator<Item = (u64, i64)>,
        qshift: i64,
    ) -> Result<Self> {
        if level == 0 {
            return Err(Error::InvalidArgument("eta quotient level must be >= 1".into()));
        }
        let mut map = BTreeMap::new();
        for (d, r) in exponents {
            if d == 0 || !level.is_multiple_of(d) {
                return Err(Error::InvalidArgument(format!(
                    "f{d} does not divide level {level}"
                )));
            }
            *map.entry(d).or_insert(0) += r;
        }
        map.retain(|_, r| *r != 0);
        Ok(EtaQuotient {
            level,
            exponents: map,
            qshift,
        })
    }

    /// Smallest level containing every divisor in `exponents`.
    pub fn from_exponents(exponents: impl IntoIterator<Item = (u64, i64)>, qshift: i64) -> Result<Self> {
        let pairs: Vec<(u64, i64)> = exponents.into_iter().collect();
        if pairs.iter().any(|&(d, _)| d == 0) {
            return Err(Error::InvalidArgument("f0 is not a valid factor".into()));
        }
        let level = pairs.iter().fold(1u64, |acc, &(d, _)| acc.lcm(&d));
        Self::new(level, pairs, qshift)
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn qshift(&self) -> i64 {
        self.qshift
    }

    /// `r_d`, zero for absent divisors.
    pub fn exponent(&self, d: u64) -> i64 {
        self.exponents.get(&d).copied().unwrap_or(0)
    }

    /// Nonzero `(d, r_d)` pairs by increasing `d`.
    pub fn exponents(&self) -> impl Iterator<Item = (u64, i64)> + '_ {
        self.exponents.iter().map(|(&d, &r)| (d, r))
    }

    pub fn with_qshift(&self, qshift: i64) -> Self {
        EtaQuotient {
            qshift,
            ..self.clone()
        }
    }

    /// Product of two eta quotients.
    pub fn times(&self, other: &EtaQuotient) -> Self {
        let level = self.level.lcm(&other.level);
        Self::new(
            level,
            self.exponents().chain(other.exponents()),
            self.qshift + other.qshift,
        )
        .expect("divisors of either level divide the lcm")
    }

    /// `q^qshift * prod f_d^{r_d}` through `q^(trunc - 1)`. The offset of the
    /// result is `qshift` and its leading coefficient is 1.
    pub fn expand(&self, ring: Ring, trunc: i64) -> Result<LaurentSeries> {
        if trunc <= self.qshift {
            return Err(Error::Truncation(format!(
                "expansion of {self} needs trunc > {}, got {trunc}",
                self.qshift
            )));
        }
        let len = (trunc - self.qshift) as usize;
        let mut acc = LaurentSeries::one(ring, len as i64);
        for (d, r) in self.exponents() {
            let f = SparseFactor::pentagonal(d as usize, len);
            if prefer_binary_powering(f.len(), r, len) {
                let fd = LaurentSeries::one(ring, len as i64);
                let mut fd = fd;
                fd.apply_sparse(&f, 1);
                acc = acc.mul(&fd.pow(r)?)?;
            } else {
                acc.apply_sparse(&f, r);
            }
        }
        Ok(acc.shift(self.qshift))
    }
}

/// Repeated sparse passes cost `|r| * terms * len`; binary powering costs
/// about `(2 log2 |r| + 1) * len^2 / 2` dense work.
fn prefer_binary_powering(terms: usize, r: i64, len: usize) -> bool {
    let r = r.unsigned_abs() as f64;
    let len = len as f64;
    let sparse = r * terms as f64 * len;
    let dense = (2.0 * r.log2() + 2.0) * len * len / 2.0;
    dense < sparse
}

impl fmt::Display for EtaQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.qshift != 0 {
            parts.push(format!("q^{}", self.qshift));
        }
        for (d, r) in self.exponents() {
            parts.push(format!("f{d}^{r}"));
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join(" * "))
        }
    }
}

impl FromStr for EtaQuotient {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Parser::new(s).parse()
    }
}

struct Parser {
    chars: Vec<(usize, char)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn new(s: &str) -> Self {
        Parser {
            chars: s.char_indices().filter(|(_, c)| !c.is_whitespace()).collect(),
            at: 0,
            end: s.len(),
        }
    }

    fn pos(&self) -> usize {
        self.chars.get(self.at).map_or(self.end, |&(p, _)| p)
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.at).map(|&(_, c)| c)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        self.at += 1;
        c
    }

    fn digits(&mut self) -> Result<u64> {
        let start = self.pos();
        let mut v: u64 = 0;
        let mut any = false;
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            v = v
                .checked_mul(10)
                .and_then(|v| v.checked_add(c as u64 - '0' as u64))
                .ok_or_else(|| Error::parse(start, "integer too large"))?;
            self.bump();
            any = true;
        }
        if !any {
            return Err(Error::parse(self.pos(), "expected digits"));
        }
        Ok(v)
    }

    fn exponent(&mut self) -> Result<i64> {
        if self.peek() != Some('^') {
            return Ok(1);
        }
        self.bump();
        let start = self.pos();
        let neg = match self.peek() {
            Some('-') => {
                self.bump();
                true
            }
            Some('+') => {
                self.bump();
                false
            }
            _ => false,
        };
        let v = i64::try_from(self.digits()?).map_err(|_| Error::parse(start, "exponent too large"))?;
        Ok(if neg { -v } else { v })
    }

    fn parse(mut self) -> Result<EtaQuotient> {
        let mut pairs = Vec::new();
        let mut qshift = 0i64;
        loop {
            let pos = self.pos();
            match self.bump() {
                Some('q') => qshift += self.exponent()?,
                Some('f') => {
                    let d = self.digits()?;
                    if d == 0 {
                        return Err(Error::parse(pos, "f0 is not a valid factor"));
                    }
                    pairs.push((d, self.exponent()?));
                }
                Some('1') => {}
                Some(c) => return Err(Error::parse(pos, format!("unexpected `{c}`"))),
                None => return Err(Error::parse(pos, "expected a factor")),
            }
            match self.bump() {
                None => break,
                Some('*') => continue,
                Some(c) => {
                    let p = self.chars[self.at - 1].0;
                    return Err(Error::parse(p, format!("expected `*`, found `{c}`")));
                }
            }
        }
        EtaQuotient::from_exponents(pairs, qshift)
    }
}

/// `sum p̄_{-t}(n) q^n = f_2^t / f_1^(2t)`, the t-colored overpartitions.
pub fn overpartition_gf(t: u32, ring: Ring, trunc: i64) -> Result<LaurentSeries> {
    if t == 0 {
        return Err(Error::InvalidArgument("color count t must be >= 1".into()));
    }
    let t = i64::from(t);
    EtaQuotient::new(2, [(1, -2 * t), (2, t)], 0)?.expand(ring, trunc)
}

/// `sum p_{-t}(n) q^n = 1 / f_1^t`, the t-colored partitions.
pub fn colored_partition_gf(t: u32, ring: Ring, trunc: i64) -> Result<LaurentSeries> {
    if t == 0 {
        return Err(Error::InvalidArgument("color count t must be >= 1".into()));
    }
    EtaQuotient::new(1, [(1, -i64::from(t))], 0)?.expand(ring, trunc)
}
