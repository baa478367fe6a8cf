//! Witness certificates for Ramanujan-type congruences.
//!
//! A certificate asserts the identity
//!
//! ```text
//! prefactor(q) * prod_{j' in P} sum_n a(m n + j') q^n  =  sum_i p_i t^i
//! ```
//!
//! where `sum a(n) q^n` is the eta quotient `{M, r}` and `t` is the
//! hauptmodul. When every `p_i` is divisible by `c`, so is every `a(m n + j)`
//! (the prefactor and `t` have integral expansions with unit leading
//! coefficient). [`verify_witness`] checks the identity coefficient by
//! coefficient through `q^T`; the modular-function argument that promotes
//! this to an identity of functions is not reproduced here.
//!
//! # File format
//!
//! UTF-8 text, one `key: value` per line. Blank lines and lines starting with
//! `#` are ignored. Every key appears exactly once, in any order; the writer
//! emits them in the order below.
//!
//! ```text
//! certificate: 1
//! id: <free text>
//! N: <positive integer>
//! M: <positive integer>
//! r: <d>:<r_d>, <d>:<r_d>, ...
//! m: <positive integer>
//! j: <integer in [0, m)>
//! P: <comma-separated residues, containing j>
//! prefactor: <eta quotient>
//! hauptmodul: <eta quotient>
//! AB: 1
//! poly_start: <degree of the first coefficient>
//! poly[1]: <comma-separated decimal integers, lowest degree first>
//! common_factor: <positive integer>
//! ```
//!
//! Eta quotients use the grammar of [`crate::eta`]. `AB` is the index set of
//! the polynomial family; only the single-polynomial case `AB: 1` is
//! supported, and its polynomial is `poly[1]`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::dissection::{extract, IdentityReport, Progression};
use crate::error::{Error, Result};
use crate::eta::EtaQuotient;
use crate::series::{LaurentSeries, Ring};

pub const FORMAT_VERSION: u32 = 1;

/// The builtin certificate as shipped on disk.
pub const BUILTIN_FILE: &str = include_str!("../data/overpartition5_8n7.cert");

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessCertificate {
    pub id: String,
    /// Level of the modular curve `X_0(N)`, carried as data.
    pub level_n: u64,
    /// The input generating function `prod_{d | M} f_d^{r_d}`.
    pub input: EtaQuotient,
    pub m: u64,
    pub j: u64,
    pub pset: Vec<u64>,
    pub prefactor: EtaQuotient,
    pub hauptmodul: EtaQuotient,
    /// Degree of `poly[0]`.
    pub poly_start: u32,
    pub poly: Vec<BigInt>,
    pub common_factor: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CommonFactor {
    #[serde(serialize_with = "crate::dissection::decimal")]
    pub gcd: BigInt,
    /// 2-adic valuation of the gcd; `None` when the gcd is 0.
    pub two_adic_valuation: Option<u64>,
}

impl CommonFactor {
    /// `2^v` for the 2-adic valuation `v`; undefined for a zero gcd.
    pub fn implied_modulus(&self) -> Option<BigInt> {
        self.two_adic_valuation.map(|v| BigInt::one() << v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    pub id: String,
    pub truncation: i64,
    pub identity: IdentityReport,
    pub common_factor: CommonFactor,
    /// Whether the claimed common factor divides every coefficient.
    pub claimed_factor_divides: bool,
    pub lhs_valuation: Option<i64>,
    pub rhs_valuation: Option<i64>,
}

impl WitnessReport {
    pub fn identity_matched(&self) -> bool {
        self.identity.matched
    }
}

impl WitnessCertificate {
    /// Structural invariants that do not involve the polynomial's values.
    fn check_shape(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Certificate(msg));
        if self.level_n == 0 || self.m == 0 {
            return bad("N and m must be positive".into());
        }
        if self.j >= self.m {
            return bad(format!("j={} not in [0, m={})", self.j, self.m));
        }
        if !self.pset.contains(&self.j) {
            return bad(format!("P does not contain j={}", self.j));
        }
        if let Some(p) = self.pset.iter().find(|&&p| p >= self.m) {
            return bad(format!("P member {p} not in [0, {})", self.m));
        }
        if self.input.qshift() != 0 {
            return bad("input eta quotient carries no q-power".into());
        }
        if self.poly.is_empty() {
            return bad("polynomial has no coefficients".into());
        }
        Ok(())
    }

    /// Every invariant, including that the claimed common factor divides
    /// each polynomial coefficient.
    pub fn validate(&self) -> Result<()> {
        self.check_shape()?;
        if !self.common_factor.is_positive() {
            return Err(Error::Certificate("common factor must be positive".into()));
        }
        if !self.claimed_factor_divides() {
            return Err(Error::Certificate(format!(
                "common factor {} does not divide every coefficient",
                self.common_factor
            )));
        }
        Ok(())
    }

    fn claimed_factor_divides(&self) -> bool {
        !self.common_factor.is_zero() && self.poly.iter().all(|c| c.is_multiple_of(&self.common_factor))
    }

    pub fn degree(&self) -> u32 {
        self.poly_start + self.poly.len() as u32 - 1
    }

    /// Coefficient of `t^i`.
    pub fn poly_coeff(&self, i: u32) -> BigInt {
        i.checked_sub(self.poly_start)
            .and_then(|k| self.poly.get(k as usize))
            .cloned()
            .unwrap_or_default()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let join = |v: &mut dyn Iterator<Item = String>| v.collect::<Vec<_>>().join(", ");
        let _ = writeln!(s, "certificate: {FORMAT_VERSION}");
        let _ = writeln!(s, "id: {}", self.id);
        let _ = writeln!(s, "N: {}", self.level_n);
        let _ = writeln!(s, "M: {}", self.input.level());
        let _ = writeln!(
            s,
            "r: {}",
            join(&mut self.input.exponents().map(|(d, r)| format!("{d}:{r}")))
        );
        let _ = writeln!(s, "m: {}", self.m);
        let _ = writeln!(s, "j: {}", self.j);
        let _ = writeln!(s, "P: {}", join(&mut self.pset.iter().map(u64::to_string)));
        let _ = writeln!(s, "prefactor: {}", self.prefactor);
        let _ = writeln!(s, "hauptmodul: {}", self.hauptmodul);
        let _ = writeln!(s, "AB: 1");
        let _ = writeln!(s, "poly_start: {}", self.poly_start);
        let _ = writeln!(s, "poly[1]: {}", join(&mut self.poly.iter().map(BigInt::to_string)));
        let _ = writeln!(s, "common_factor: {}", self.common_factor);
        s
    }

    /// Parse and [`validate`](Self::validate) a certificate file.
    pub fn parse(text: &str) -> Result<Self> {
        let mut fields: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once(':').ok_or_else(|| {
                Error::Certificate(format!("line {}: expected `key: value`", lineno + 1))
            })?;
            let key = key.trim();
            if !KEYS.contains(&key) {
                return Err(Error::Certificate(format!("line {}: unknown key `{key}`", lineno + 1)));
            }
            if fields.insert(key, (lineno + 1, value.trim())).is_some() {
                return Err(Error::Certificate(format!("line {}: duplicate key `{key}`", lineno + 1)));
            }
        }
        let get = |key: &str| -> Result<(usize, &str)> {
            fields
                .get(key)
                .copied()
                .ok_or_else(|| Error::Certificate(format!("missing key `{key}`")))
        };
        let num = |key: &str| -> Result<u64> {
            let (line, v) = get(key)?;
            v.parse()
                .map_err(|_| Error::Certificate(format!("line {line}: `{key}` is not an unsigned integer")))
        };

        let version = num("certificate")?;
        if version != u64::from(FORMAT_VERSION) {
            return Err(Error::Certificate(format!("unsupported format version {version}")));
        }
        let (ab_line, ab) = get("AB")?;
        if ab != "1" {
            return Err(Error::Certificate(format!(
                "line {ab_line}: only AB = 1 is supported, got `{ab}`"
            )));
        }
        let (r_line, r_text) = get("r")?;
        let mut r = Vec::new();
        for item in r_text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (d, e) = item
                .split_once(':')
                .ok_or_else(|| Error::Certificate(format!("line {r_line}: expected d:r_d, got `{item}`")))?;
            let d: u64 = d.trim().parse().map_err(|_| Error::Certificate(format!("line {r_line}: bad divisor `{d}`")))?;
            let e: i64 = e.trim().parse().map_err(|_| Error::Certificate(format!("line {r_line}: bad exponent `{e}`")))?;
            r.push((d, e));
        }
        let eta = |key: &str| -> Result<EtaQuotient> {
            let (line, v) = get(key)?;
            v.parse()
                .map_err(|e| Error::Certificate(format!("line {line}: `{key}`: {e}")))
        };
        let (p_line, p_text) = get("P")?;
        let mut pset = p_text
            .split(',')
            .map(|s| s.trim().parse::<u64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::Certificate(format!("line {p_line}: bad residue list")))?;
        pset.sort_unstable();
        pset.dedup();
        let (poly_line, poly_text) = get("poly[1]")?;
        let poly = poly_text
            .split(',')
            .map(|s| s.trim().parse::<BigInt>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::Certificate(format!("line {poly_line}: bad polynomial coefficient")))?;
        let (cf_line, cf) = get("common_factor")?;
        let common_factor: BigInt = cf
            .parse()
            .map_err(|_| Error::Certificate(format!("line {cf_line}: bad common factor")))?;

        let cert = WitnessCertificate {
            id: get("id")?.1.to_string(),
            level_n: num("N")?,
            input: EtaQuotient::new(num("M")?, r, 0)
                .map_err(|e| Error::Certificate(format!("line {r_line}: {e}")))?,
            m: num("m")?,
            j: num("j")?,
            pset,
            prefactor: eta("prefactor")?,
            hauptmodul: eta("hauptmodul")?,
            poly_start: u32::try_from(num("poly_start")?)
                .map_err(|_| Error::Certificate("poly_start too large".into()))?,
            poly,
            common_factor,
        };
        cert.validate()?;
        Ok(cert)
    }
}

const KEYS: [&str; 14] = [
    "certificate",
    "id",
    "N",
    "M",
    "r",
    "m",
    "j",
    "P",
    "prefactor",
    "hauptmodul",
    "AB",
    "poly_start",
    "poly[1]",
    "common_factor",
];

/// gcd of the polynomial coefficients and its 2-adic valuation.
pub fn certificate_common_factor(c: &WitnessCertificate) -> Result<CommonFactor> {
    if c.poly.is_empty() {
        return Err(Error::Certificate("polynomial has no coefficients".into()));
    }
    let gcd = c.poly.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    Ok(CommonFactor {
        two_adic_valuation: gcd.trailing_zeros(),
        gcd,
    })
}

/// Left side of the witness identity through `q^(trunc-1)`.
pub fn witness_lhs(c: &WitnessCertificate, trunc: i64) -> Result<LaurentSeries> {
    let shift = c.prefactor.qshift();
    let stream_len = (trunc - shift).max(1);
    let gf = c.input.expand(Ring::EXACT, c.m as i64 * (stream_len + 1))?;
    let mut product: Option<LaurentSeries> = None;
    for &jp in &c.pset {
        let s = extract(&gf, Progression::new(c.m, jp)?)?;
        product = Some(match product {
            None => s,
            Some(p) => p.mul(&s)?,
        });
    }
    let product = product.ok_or_else(|| Error::Certificate("empty P".into()))?;
    c.prefactor.expand(Ring::EXACT, trunc)?.mul(&product)
}

/// Lowest exponent any `t^i` in the polynomial can reach.
fn rhs_lowest(c: &WitnessCertificate) -> i64 {
    let vt = c.hauptmodul.qshift();
    let i = if vt < 0 { c.degree() } else { c.poly_start };
    i64::from(i) * vt
}

/// Right side `sum_i p_i t^i` through `q^(trunc-1)`.
pub fn witness_rhs(c: &WitnessCertificate, trunc: i64) -> Result<LaurentSeries> {
    let vt = c.hauptmodul.qshift();
    let d = i64::from(c.degree());
    let t_trunc = (trunc - (d - 1).max(0) * vt.min(0)).max(vt + 1);
    let t = c.hauptmodul.expand(Ring::EXACT, t_trunc)?;
    let lowest = rhs_lowest(c).min(0);
    let mut sum = LaurentSeries::zero(Ring::EXACT, lowest, trunc.max(lowest + 1));
    let mut power = LaurentSeries::one(Ring::EXACT, t_trunc - vt.min(0));
    for i in 0..=c.degree() {
        if i > 0 {
            power = power.mul(&t)?;
        }
        let coeff = c.poly_coeff(i);
        if !coeff.is_zero() {
            sum = sum.add(&power.scale_big(&coeff))?;
        }
    }
    Ok(sum)
}

/// Check the certificate's identity through `q^(trunc-1)`, Laurent part
/// included, and compute the common factor of its polynomial.
pub fn verify_witness(c: &WitnessCertificate, trunc: i64) -> Result<WitnessReport> {
    c.check_shape()?;
    let lowest = c.prefactor.qshift().min(rhs_lowest(c));
    if trunc <= lowest {
        return Err(Error::Truncation(format!(
            "witness identity starts at q^{lowest}; T={trunc} compares nothing"
        )));
    }
    let lhs = witness_lhs(c, trunc)?;
    let rhs = witness_rhs(c, trunc)?;
    let identity = IdentityReport::compare(format!("witness {}", c.id), &lhs, &rhs, trunc)?;
    Ok(WitnessReport {
        id: c.id.clone(),
        truncation: trunc,
        identity,
        common_factor: certificate_common_factor(c)?,
        claimed_factor_divides: c.claimed_factor_divides(),
        lhs_valuation: lhs.valuation().finite(),
        rhs_valuation: rhs.valuation().finite(),
    })
}

/// Coefficients of `t^1 .. t^17` for `p̄_{-5}(8n+7)`.
const BUILTIN_POLY: [&str; 17] = [
    "162177965096960",
    "12820855335682048",
    "181969724152741888",
    "911076328575336448",
    "2131168862538825728",
    "2711338639077408768",
    "2054802074125729792",
    "979900817664376832",
    "302871878945472512",
    "61243801104023552",
    "8026570602053632",
    "661947909931008",
    "32519056130048",
    "868870094848",
    "10846240768",
    "47761408",
    "37760",
];

/// Certificate for `p̄_{-5}(8n + 7) = 0 (mod 128)` on `X_0(8)`.
pub fn builtin_certificate() -> WitnessCertificate {
    let eta = |s: &str| s.parse::<EtaQuotient>().expect("valid builtin eta quotient");
    WitnessCertificate {
        id: "overpartition5-8n+7".into(),
        level_n: 8,
        input: EtaQuotient::new(2, [(1, -10), (2, 5)], 0).expect("valid input"),
        m: 8,
        j: 7,
        pset: vec![7],
        prefactor: eta("q^-17 * f1^79 * f2^-38 * f4^36 * f8^-72"),
        hauptmodul: eta("q^-1 * f2^-4 * f4^12 * f8^-8"),
        poly_start: 1,
        poly: BUILTIN_POLY.iter().map(|s| s.parse().expect("decimal")).collect(),
        common_factor: BigInt::from(128),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_fields() {
        let c = builtin_certificate();
        c.validate().unwrap();
        assert_eq!(c.level_n, 8);
        assert_eq!(c.degree(), 17);
        assert_eq!(c.poly_coeff(1), BigInt::from(162177965096960u64));
        assert_eq!(c.poly_coeff(17), BigInt::from(37760));
        assert_eq!(c.poly_coeff(0), BigInt::zero());
    }

    #[test]
    fn builtin_file_is_the_serialized_certificate() {
        let c = builtin_certificate();
        assert_eq!(c.to_text(), BUILTIN_FILE);
        assert_eq!(WitnessCertificate::parse(BUILTIN_FILE).unwrap(), c);
    }

    #[test]
    fn common_factor_of_builtin() {
        let cf = certificate_common_factor(&builtin_certificate()).unwrap();
        assert_eq!(cf.two_adic_valuation, Some(7));
        assert_eq!(cf.implied_modulus(), Some(BigInt::from(128)));
        assert!((&cf.gcd / BigInt::from(128)).is_odd());
        assert_eq!(BigInt::from(37760) / 128, BigInt::from(295));
    }

    #[test]
    fn common_factor_degenerate_cases() {
        let mut c = builtin_certificate();
        c.poly = [2, 4, 6].map(BigInt::from).to_vec();
        assert_eq!(certificate_common_factor(&c).unwrap().gcd, BigInt::from(2));
        c.poly = vec![BigInt::zero()];
        let cf = certificate_common_factor(&c).unwrap();
        assert_eq!(cf.gcd, BigInt::zero());
        assert_eq!(cf.implied_modulus(), None);
        c.poly.clear();
        assert!(certificate_common_factor(&c).is_err());
    }

    #[test]
    fn builtin_identity_holds_at_small_truncation() {
        let r = verify_witness(&builtin_certificate(), 40).unwrap();
        assert!(r.identity_matched(), "{:?}", r.identity.first_mismatch);
        assert_eq!(r.lhs_valuation, Some(-17));
        assert_eq!(r.rhs_valuation, Some(-17));
        assert!(r.claimed_factor_divides);
    }

    #[test]
    fn mutated_leading_coefficient_is_caught() {
        let mut c = builtin_certificate();
        c.poly[16] = BigInt::from(37761);
        assert!(c.validate().is_err());
        let r = verify_witness(&c, 40).unwrap();
        assert!(!r.identity_matched());
        // t^17 is the only term reaching q^-17
        assert_eq!(r.identity.first_mismatch.unwrap().exponent, -17);
        assert!(!r.claimed_factor_divides);
    }

    #[test]
    fn truncation_too_low_is_an_error() {
        assert!(verify_witness(&builtin_certificate(), -17).is_err());
    }

    #[test]
    fn parse_rejects_malformed_files() {
        let good = BUILTIN_FILE;
        let cases = [
            good.replace("AB: 1", "AB: 1, g2"),
            good.replace("P: 7", "P: 6"),
            good.replace("j: 7", "j: 8"),
            good.replace("common_factor: 128", "common_factor: 256"),
            good.replace("certificate: 1", "certificate: 2"),
            good.replace("N: 8\n", ""),
            format!("{good}N: 8\n"),
            format!("{good}bogus: 1\n"),
            good.replace("prefactor: q^-17", "prefactor: g^-17"),
            good.replace("r: 1:-10, 2:5", "r: 3:-10"),
        ];
        for (i, text) in cases.iter().enumerate() {
            assert!(WitnessCertificate::parse(text).is_err(), "case {i} parsed");
        }
    }

    #[test]
    fn parse_tolerates_comments_and_order() {
        let mut lines: Vec<&str> = BUILTIN_FILE.lines().collect();
        lines.reverse();
        let text = format!("# reversed\n\n{}\n", lines.join("\n"));
        assert_eq!(WitnessCertificate::parse(&text).unwrap(), builtin_certificate());
    }
}
