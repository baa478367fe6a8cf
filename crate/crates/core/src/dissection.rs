//! Arithmetic-progression extraction and the dissection identities of `f_1`.
//!
//! All identity checks are truncation-bounded: a matched report means the two
//! sides agree coefficient by coefficient below `q^T`, nothing more.
//!
//! The mod-2 three-dissection `f_1^3 = f_3 + q f_9^3` is the only form of that
//! identity checked here; the exact version carries an extra term whose
//! published rendering is not recoverable.
//!
//! The Ramanathan–Evans dissection is stated for `n = 1 (mod 6)` but its body
//! also covers `n = 6g - 1`; [`ramanathan`] accepts both residues and is
//! cross-checked against the independent five- and seven-dissections.

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::series::{euler_factor, f_series, first_difference, theta_f, LaurentSeries, Ring};

/// The progression `m n + j`, `0 <= j < m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Progression {
    m: u64,
    j: u64,
}

impl Progression {
    pub fn new(m: u64, j: u64) -> Result<Self> {
        if m == 0 || j >= m {
            return Err(Error::InvalidArgument(format!(
                "progression needs 0 <= j < m (got m={m}, j={j})"
            )));
        }
        Ok(Progression { m, j })
    }

    pub fn m(self) -> u64 {
        self.m
    }

    pub fn j(self) -> u64 {
        self.j
    }

    /// Extracting `self` and then `inner` is extracting the returned
    /// progression: `m1 (m2 n + j2) + j1`.
    pub fn then(self, inner: Progression) -> Progression {
        Progression {
            m: self.m * inner.m,
            j: self.j + self.m * inner.j,
        }
    }
}

pub(crate) fn decimal<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub exponent: i64,
    #[serde(serialize_with = "decimal")]
    pub lhs: BigInt,
    #[serde(serialize_with = "decimal")]
    pub rhs: BigInt,
}

/// Outcome of comparing two sides of an identity below `q^truncation`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub name: String,
    pub truncation: i64,
    pub matched: bool,
    pub first_mismatch: Option<Mismatch>,
    /// Free-form findings recorded alongside the verdict.
    pub notes: Vec<String>,
}

impl IdentityReport {
    /// Compare `lhs` and `rhs` on every exponent below `through`.
    pub fn compare(
        name: impl Into<String>,
        lhs: &LaurentSeries,
        rhs: &LaurentSeries,
        through: i64,
    ) -> Result<Self> {
        let name = name.into();
        if lhs.ring() != rhs.ring() {
            return Err(Error::RingMismatch {
                left: lhs.ring(),
                right: rhs.ring(),
            });
        }
        if lhs.trunc() < through || rhs.trunc() < through {
            return Err(Error::Truncation(format!(
                "{name}: sides known through q^{} and q^{}, asked for q^{through}",
                lhs.trunc(),
                rhs.trunc()
            )));
        }
        let first_mismatch =
            first_difference(lhs, rhs, through).map(|(exponent, lhs, rhs)| Mismatch { exponent, lhs, rhs });
        Ok(IdentityReport {
            name,
            truncation: through,
            matched: first_mismatch.is_none(),
            first_mismatch,
            notes: Vec::new(),
        })
    }

    /// Conjunction of several checks. The first failing part supplies the
    /// mismatch; every part's verdict is listed in the notes.
    pub fn all(name: impl Into<String>, truncation: i64, parts: Vec<IdentityReport>) -> Self {
        let first_mismatch = parts.iter().find_map(|p| p.first_mismatch.clone());
        let mut notes = Vec::new();
        for p in &parts {
            notes.push(format!(
                "{}: {}",
                p.name,
                if p.matched { "matched" } else { "MISMATCH" }
            ));
            notes.extend(p.notes.iter().map(|n| format!("{}: {n}", p.name)));
        }
        IdentityReport {
            name: name.into(),
            truncation,
            matched: parts.iter().all(|p| p.matched),
            first_mismatch,
            notes,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }
}

/// `sum_{n >= 0} a(m n + j) q^n`, known while `m n + j < a.trunc()`.
///
/// Only the `n >= 0` stream is read. A series with a nonzero coefficient at
/// a negative exponent is rejected rather than silently cut.
pub fn extract(a: &LaurentSeries, p: Progression) -> Result<LaurentSeries> {
    if let Some(v) = a.valuation().finite().filter(|&v| v < 0) {
        return Err(Error::NegativeExponents { exponent: v });
    }
    let (m, j) = (p.m as i64, p.j as i64);
    let known = a.trunc() - j;
    if known <= 0 {
        return Err(Error::Truncation(format!(
            "series known below q^{} has no coefficient at q^{j}",
            a.trunc()
        )));
    }
    let count = (known + m - 1) / m;
    Ok(a.stride(j, p.m as usize, count as usize))
}

/// Rogers–Ramanujan quotient
/// `R(q) = (q; q^5)(q^4; q^5) / ((q^2; q^5)(q^3; q^5))` through `q^(trunc-1)`.
pub fn rogers_ramanujan(ring: Ring, trunc: i64) -> Result<LaurentSeries> {
    let num = euler_factor(1, 5, 1, ring, trunc)?.mul(&euler_factor(4, 5, 1, ring, trunc)?)?;
    let den = euler_factor(2, 5, -1, ring, trunc)?.mul(&euler_factor(3, 5, -1, ring, trunc)?)?;
    num.mul(&den)
}

fn positive(trunc: i64) -> Result<()> {
    if trunc <= 0 {
        return Err(Error::Truncation(format!("need T > 0, got {trunc}")));
    }
    Ok(())
}

fn f1_cubed_mod2_check(trunc: i64, f9_power: i64) -> Result<IdentityReport> {
    positive(trunc)?;
    let ring = Ring::mod2k(1)?;
    let lhs = euler_factor(1, 1, 3, ring, trunc)?;
    let rhs = f_series(3, ring, trunc)?.add(&euler_factor(9, 9, f9_power, ring, trunc)?.shift(1))?;
    let name = if f9_power == 3 {
        "f1^3 = f3 + q f9^3 (mod 2)".to_string()
    } else {
        format!("f1^3 = f3 + q f9^{f9_power} (mod 2)")
    };
    IdentityReport::compare(name, &lhs, &rhs, trunc)
}

/// `f_1^3 = f_3 + q f_9^3 (mod 2)` through `q^(trunc-1)`.
pub fn dissection3_f1cubed(trunc: i64) -> Result<IdentityReport> {
    f1_cubed_mod2_check(trunc, 3)
}

/// `f_25 (1/R(q^5) - q - q^2 R(q^5))` through `q^(trunc-1)`.
pub fn dissection5_rhs(ring: Ring, trunc: i64) -> Result<LaurentSeries> {
    positive(trunc)?;
    let short = trunc / 5 + 1;
    let r = rogers_ramanujan(ring, short)?;
    let r5 = r.substitute_qpow(5);
    let inv_r5 = r.inverse()?.substitute_qpow(5);
    let bracket = inv_r5
        .sub(&LaurentSeries::monomial(ring, 1, 1, trunc))?
        .sub(&r5.shift(2))?;
    f_series(25, ring, trunc)?.mul(&bracket)?.truncate(trunc)
}

/// `f_1 = f_25 (1/R(q^5) - q - q^2 R(q^5))` exactly through `q^(trunc-1)`.
pub fn dissection5(trunc: i64) -> Result<IdentityReport> {
    let lhs = f_series(1, Ring::EXACT, trunc)?;
    let rhs = dissection5_rhs(Ring::EXACT, trunc)?;
    IdentityReport::compare("f1 = f25 (1/R(q^5) - q - q^2 R(q^5))", &lhs, &rhs, trunc)
}

/// The theta quotients `(A'(q^7), B'(q^7), C'(q^7))`.
pub fn seven_quotients(ring: Ring, trunc: i64) -> Result<[LaurentSeries; 3]> {
    positive(trunc)?;
    let th = |x, y| theta_f(x, y, ring, trunc);
    let (t7, t14, t21) = (th(7, 42)?, th(14, 35)?, th(21, 28)?);
    Ok([
        t14.mul(&t7.inverse()?)?,
        t21.mul(&t14.inverse()?)?,
        t7.mul(&t21.inverse()?)?,
    ])
}

/// `A'(q^7) - q B'(q^7) - q^2 + q^5 C'(q^7)`.
pub fn dissection7_bracket(ring: Ring, trunc: i64) -> Result<LaurentSeries> {
    let [a, b, c] = seven_quotients(ring, trunc)?;
    a.sub(&b.shift(1))?
        .sub(&LaurentSeries::monomial(ring, 1, 2, trunc))?
        .add(&c.shift(5))?
        .truncate(trunc)
}

/// `f_1 = f_49 (A'(q^7) - q B'(q^7) - q^2 + q^5 C'(q^7))` exactly through
/// `q^(trunc-1)`.
pub fn dissection7(trunc: i64) -> Result<IdentityReport> {
    let lhs = f_series(1, Ring::EXACT, trunc)?;
    let rhs = f_series(49, Ring::EXACT, trunc)?.mul(&dissection7_bracket(Ring::EXACT, trunc)?)?;
    IdentityReport::compare("f1 = f49 (A' - q B' - q^2 + q^5 C')", &lhs, &rhs, trunc)
}

/// `g` and the sign in `(k - g)(3k - 3g -/+ 1)/2` for `n = 6g +/- 1`.
fn ramanathan_case(n: u64) -> Result<(i64, i64)> {
    match n % 6 {
        1 if n >= 7 => Ok((((n - 1) / 6) as i64, -1)),
        5 if n >= 5 => Ok((((n + 1) / 6) as i64, 1)),
        _ => Err(Error::InvalidArgument(format!(
            "Ramanathan dissection needs n = ±1 (mod 6) and n >= 5, got {n}"
        ))),
    }
}

/// The bracket of the `n`-dissection of `f_1`:
/// `(-1)^g q^((n^2-1)/24) + sum_{k=1}^{(n-1)/2} (-1)^(k+g) q^(e(k,g))
///  f(-q^(2nk), -q^(n^2-2nk)) / f(-q^(nk), -q^(n^2-nk))`.
pub fn ramanathan_bracket(n: u64, ring: Ring, trunc: i64) -> Result<LaurentSeries> {
    positive(trunc)?;
    let (g, pm) = ramanathan_case(n)?;
    let sign = |p: i64| if p.rem_euclid(2) == 0 { 1 } else { -1 };
    let nn = n * n;
    let lead = ((nn - 1) / 24) as i64;
    let mut acc = LaurentSeries::monomial(ring, sign(g), lead, trunc + lead);
    for k in 1..=(n - 1) / 2 {
        let d = k as i64 - g;
        let e = d * (3 * d + pm) / 2;
        let num = theta_f(2 * n * k, nn - 2 * n * k, ring, trunc)?;
        let den = theta_f(n * k, nn - n * k, ring, trunc)?;
        let term = num.mul(&den.inverse()?)?.scale(sign(k as i64 + g)).shift(e);
        acc = acc.add(&term)?;
    }
    acc.truncate(trunc)
}

/// `f_1 = f_{n^2} * ramanathan_bracket(n)` exactly through `q^(trunc-1)`.
pub fn ramanathan(n: u64, trunc: i64) -> Result<IdentityReport> {
    let bracket = ramanathan_bracket(n, Ring::EXACT, trunc)?;
    let lhs = f_series(1, Ring::EXACT, trunc)?;
    let rhs = f_series(n * n, Ring::EXACT, trunc)?.mul(&bracket)?;
    let (g, pm) = ramanathan_case(n)?;
    let case = if pm < 0 { "6g+1" } else { "6g-1" };
    Ok(IdentityReport::compare(format!("Ramanathan n={n}"), &lhs, &rhs, trunc)?
        .with_note(format!("case n={case}, g={g}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex(c: &[i64]) -> LaurentSeries {
        LaurentSeries::from_i64s(Ring::EXACT, 0, c)
    }

    #[test]
    fn progression_bounds_and_composition() {
        assert!(Progression::new(0, 0).is_err());
        assert!(Progression::new(3, 3).is_err());
        let p = Progression::new(3, 2).unwrap().then(Progression::new(5, 1).unwrap());
        assert_eq!((p.m(), p.j()), (15, 5));
    }

    #[test]
    fn extract_geometric() {
        let g = ex(&[1; 11]);
        let e = extract(&g, Progression::new(2, 1).unwrap()).unwrap();
        // exponents 1,3,5,7,9 are known: ceil((11 - 1)/2) = 5
        assert_eq!(e, ex(&[1; 5]));
    }

    #[test]
    fn extract_truncation_rounds_up() {
        let s = ex(&[0, 1, 2, 3, 4, 5, 6, 7]);
        let e = extract(&s, Progression::new(3, 1).unwrap()).unwrap();
        assert_eq!(e, ex(&[1, 4, 7]));
        let e = extract(&s, Progression::new(3, 2).unwrap()).unwrap();
        assert_eq!(e, ex(&[2, 5]));
    }

    #[test]
    fn extract_rejects_negative_exponents_and_empty_streams() {
        let s = LaurentSeries::from_i64s(Ring::EXACT, -1, &[1, 1, 1]);
        assert!(matches!(
            extract(&s, Progression::new(2, 0).unwrap()),
            Err(Error::NegativeExponents { exponent: -1 })
        ));
        let padded = LaurentSeries::from_i64s(Ring::EXACT, -1, &[0, 1, 1]);
        assert_eq!(extract(&padded, Progression::new(1, 0).unwrap()).unwrap(), ex(&[1, 1]));
        let short = ex(&[1, 2]);
        assert!(extract(&short, Progression::new(5, 3).unwrap()).is_err());
    }

    #[test]
    fn extract_undoes_substitution() {
        let a = ex(&[3, 1, 4, 1, 5, 9, 2, 6]);
        for m in [2usize, 3, 7] {
            let back = extract(&a.substitute_qpow(m), Progression::new(m as u64, 0).unwrap()).unwrap();
            assert_eq!(back, a);
        }
    }

    #[test]
    fn rogers_ramanujan_first_terms() {
        // Independent route: the four finite products through q^10 by
        // naive polynomial multiplication and power-series division.
        let t = 11usize;
        let mut num = vec![0i64; t];
        num[0] = 1;
        let mut den = num.clone();
        for d in [1usize, 4, 6, 9] {
            for n in (d..t).rev() {
                num[n] -= num[n - d];
            }
        }
        for d in [2usize, 3, 7, 8] {
            for n in (d..t).rev() {
                den[n] -= den[n - d];
            }
        }
        let mut quo = vec![0i64; t];
        for n in 0..t {
            let s: i64 = (1..=n).map(|k| den[k] * quo[n - k]).sum();
            quo[n] = num[n] - s;
        }
        let r = rogers_ramanujan(Ring::EXACT, t as i64).unwrap();
        assert_eq!(r, ex(&quo));
        assert_eq!(r.coeff_i64(0), Some(1));
        assert_eq!(&quo[..6], &[1, -1, 1, 0, -1, 1]);
    }

    #[test]
    fn dissection3_small_and_mutated() {
        assert!(dissection3_f1cubed(1).unwrap().matched);
        assert!(dissection3_f1cubed(500).unwrap().matched);
        let bad = f1_cubed_mod2_check(500, 2).unwrap();
        assert!(!bad.matched);
        assert!(bad.first_mismatch.unwrap().exponent < 50);
    }

    #[test]
    fn dissection5_holds_and_extracts() {
        let t = 400;
        assert!(dissection5(t).unwrap().matched);
        // The 5n+2 stream of f1 is -R(q) f5.
        let f1 = f_series(1, Ring::EXACT, t).unwrap();
        let p = Progression::new(5, 2).unwrap();
        let lhs = extract(&f1, p).unwrap();
        let rhs = extract(&dissection5_rhs(Ring::EXACT, t).unwrap(), p).unwrap();
        assert_eq!(lhs, rhs);
        let k = lhs.trunc();
        let expect = rogers_ramanujan(Ring::EXACT, k)
            .unwrap()
            .mul(&f_series(5, Ring::EXACT, k).unwrap())
            .unwrap()
            .neg();
        assert!(lhs.agrees_through(&expect, k));
    }

    #[test]
    fn seven_quotients_telescope() {
        let t = 300;
        let [a, b, c] = seven_quotients(Ring::EXACT, t).unwrap();
        let abc = a.mul(&b).unwrap().mul(&c).unwrap();
        assert!(abc.agrees_through(&LaurentSeries::one(Ring::EXACT, t), t));
        assert!(dissection7(t).unwrap().matched);
    }

    #[test]
    fn ramanathan_seven_reproduces_seven_dissection() {
        let t = 300;
        let general = ramanathan_bracket(7, Ring::EXACT, t).unwrap();
        let special = dissection7_bracket(Ring::EXACT, t).unwrap();
        assert!(general.agrees_through(&special, t));
    }

    #[test]
    fn ramanathan_five_reproduces_five_dissection() {
        let t = 300;
        let rhs = f_series(25, Ring::EXACT, t)
            .unwrap()
            .mul(&ramanathan_bracket(5, Ring::EXACT, t).unwrap())
            .unwrap();
        assert!(rhs.agrees_through(&dissection5_rhs(Ring::EXACT, t).unwrap(), t));
    }

    #[test]
    fn ramanathan_cases() {
        for n in [5, 7, 11, 13] {
            let r = ramanathan(n, 400).unwrap();
            assert!(r.matched, "{r:?}");
        }
        assert!(ramanathan(9, 100).is_err());
        assert!(ramanathan(1, 100).is_err());
    }

    #[test]
    fn report_composition() {
        let a = ex(&[1, 2]);
        let b = ex(&[1, 3]);
        let ok = IdentityReport::compare("ok", &a, &a, 2).unwrap();
        let bad = IdentityReport::compare("bad", &a, &b, 2).unwrap();
        assert_eq!(bad.first_mismatch.as_ref().unwrap().exponent, 1);
        let both = IdentityReport::all("both", 2, vec![ok, bad]);
        assert!(!both.matched);
        assert_eq!(both.first_mismatch.unwrap().exponent, 1);
        assert!(IdentityReport::compare("short", &a, &b, 3).is_err());
    }
}
