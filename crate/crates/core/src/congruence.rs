//! Congruence claims `p̄_{-t}(m n + j) = 0 (mod 2^k)` and their checker.
//!
//! Claims are checked in `Z/2^kZ`, where divisibility by `2^k` is decidable
//! coefficient by coefficient. Batch runs expand each generating function
//! once in `Z/2^64Z` and reduce, which gives identical verdicts and also
//! exposes the smallest 2-adic valuation seen on the progression.

use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::dissection::IdentityReport;
use crate::error::{Error, Result};
use crate::eta::overpartition_gf;
use crate::series::{euler_factor, LaurentSeries, Ring};

/// Default number of progression terms checked per claim.
pub const DEFAULT_N_MAX: u64 = 2000;

/// Precision of the shared expansion used by batch runs.
const BATCH_BITS: u32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ClaimSource {
    Theorem5col,
    Theorem7col,
    Theorem11col,
    Theorem13col,
    Conjecture,
    UserSupplied,
}

/// `p̄_{-t}(m n + j) = 0 (mod 2^k)` for all `n >= 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CongruenceClaim {
    pub t: u32,
    pub m: u64,
    pub j: u64,
    pub k: u32,
    pub source: ClaimSource,
}

impl CongruenceClaim {
    pub fn new(t: u32, m: u64, j: u64, k: u32, source: ClaimSource) -> Result<Self> {
        if t == 0 || m == 0 || j >= m || k == 0 || k > Ring::MAX_BITS {
            return Err(Error::InvalidArgument(format!(
                "claim needs t >= 1, 0 <= j < m, 1 <= k <= 64 (got t={t}, m={m}, j={j}, k={k})"
            )));
        }
        Ok(CongruenceClaim { t, m, j, k, source })
    }

    /// The same claim one power of 2 stronger.
    pub fn strengthened(self) -> Result<Self> {
        Self::new(self.t, self.m, self.j, self.k + 1, self.source)
    }

    /// Coefficients needed to check `n = 0..=n_max`.
    pub fn trunc_for(self, n_max: u64) -> i64 {
        (self.m * n_max + self.j + 1) as i64
    }
}

impl fmt::Display for CongruenceClaim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "p̄_-{}({}n+{}) ≡ 0 (mod 2^{})",
            self.t, self.m, self.j, self.k
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
}

/// First `n` whose coefficient is not divisible by `2^k`, with that
/// coefficient reduced mod `2^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub n: u64,
    pub value: u64,
}

/// Smallest 2-adic valuation among the checked coefficients, as far as the
/// working ring can see.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ObservedValuation {
    Exactly(u32),
    /// Every coefficient vanished in the working ring `Z/2^vZ`.
    AtLeast(u32),
}

impl fmt::Display for ObservedValuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObservedValuation::Exactly(v) => write!(f, "{v}"),
            ObservedValuation::AtLeast(v) => write!(f, ">={v}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClaimReport {
    pub claim: CongruenceClaim,
    pub n_max: u64,
    pub verdict: Verdict,
    pub counterexample: Option<Counterexample>,
    pub min_valuation: ObservedValuation,
    /// Wall time for this claim, including its share of the expansion.
    pub elapsed: Duration,
}

impl ClaimReport {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }
}

/// Check `claim` for `n = 0..=n_max` by expanding in `Z/2^kZ`.
pub fn check_claim(claim: &CongruenceClaim, n_max: u64) -> Result<ClaimReport> {
    let start = Instant::now();
    let gf = overpartition_gf(claim.t, Ring::mod2k(claim.k)?, claim.trunc_for(n_max))?;
    let mut report = check_claim_against(claim, n_max, &gf)?;
    report.elapsed = start.elapsed();
    Ok(report)
}

/// Check `claim` against an already expanded generating function, which must
/// be known through the progression and live in a ring refining `Z/2^kZ`.
pub fn check_claim_against(
    claim: &CongruenceClaim,
    n_max: u64,
    gf: &LaurentSeries,
) -> Result<ClaimReport> {
    let start = Instant::now();
    let target = Ring::mod2k(claim.k)?;
    if !gf.ring().refines(target) {
        return Err(Error::RingMismatch {
            left: gf.ring(),
            right: target,
        });
    }
    if gf.trunc() < claim.trunc_for(n_max) || gf.offset() > 0 {
        return Err(Error::Truncation(format!(
            "{claim} through n={n_max} needs the series on [0, q^{})",
            claim.trunc_for(n_max)
        )));
    }
    let mask = target.mask();
    let exps = (0..=n_max).map(|n| (n, (claim.m * n + claim.j) as i64));
    let mut counterexample = None;
    let mut min_v = u32::MAX;
    let cap;
    match gf.words() {
        Some(words) => {
            cap = gf.ring().bits().expect("word ring");
            let off = gf.offset();
            for (n, e) in exps {
                let w = words[(e - off) as usize];
                if w != 0 {
                    min_v = min_v.min(w.trailing_zeros());
                }
                if counterexample.is_none() && w & mask != 0 {
                    counterexample = Some(Counterexample { n, value: w & mask });
                }
            }
        }
        None => {
            cap = u32::MAX;
            for (n, e) in exps {
                let c = gf.coeff(e).expect("range checked");
                if c.is_zero() {
                    continue;
                }
                let v = c.trailing_zeros().unwrap_or(0) as u32;
                min_v = min_v.min(v);
                if counterexample.is_none() && v < claim.k {
                    let value = target.reduce(&c);
                    counterexample = Some(Counterexample {
                        n,
                        value: u64::try_from(value).expect("reduced below 2^64"),
                    });
                }
            }
        }
    }
    let min_valuation = if min_v >= cap {
        ObservedValuation::AtLeast(cap)
    } else {
        ObservedValuation::Exactly(min_v)
    };
    Ok(ClaimReport {
        claim: *claim,
        n_max,
        verdict: if counterexample.is_some() {
            Verdict::Fails
        } else {
            Verdict::Holds
        },
        counterexample,
        min_valuation,
        elapsed: start.elapsed(),
    })
}

/// Check many claims, expanding each distinct `t` once. Reports come back in
/// the order of `claims` whatever the worker count.
pub fn check_claims(claims: &[CongruenceClaim], n_max: u64, workers: usize) -> Result<Vec<ClaimReport>> {
    let mut ts: Vec<u32> = claims.iter().map(|c| c.t).collect();
    ts.sort_unstable();
    ts.dedup();
    let ring = Ring::mod2k(BATCH_BITS)?;
    let run = || -> Result<Vec<Vec<(usize, ClaimReport)>>> {
        ts.par_iter()
            .map(|&t| {
                let start = Instant::now();
                let group: Vec<(usize, &CongruenceClaim)> =
                    claims.iter().enumerate().filter(|(_, c)| c.t == t).collect();
                let trunc = group.iter().map(|(_, c)| c.trunc_for(n_max)).max().expect("nonempty");
                let gf = overpartition_gf(t, ring, trunc)?;
                let shared = start.elapsed() / group.len() as u32;
                group
                    .into_iter()
                    .map(|(i, c)| {
                        let mut r = check_claim_against(c, n_max, &gf)?;
                        r.elapsed += shared;
                        Ok((i, r))
                    })
                    .collect()
            })
            .collect()
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(format!("worker pool: {e}")))?;
    let mut indexed: Vec<(usize, ClaimReport)> = pool.install(run)?.into_iter().flatten().collect();
    indexed.sort_by_key(|(i, _)| *i);
    Ok(indexed.into_iter().map(|(_, r)| r).collect())
}

/// The 24 congruences for `t = 5, 7, 11, 13`, as `(t, j, k)` on `8n + j`.
const THEOREM_TABLE: [(u32, u64, u32); 24] = [
    (5, 1, 1),
    (5, 2, 2),
    (5, 3, 3),
    (5, 4, 1),
    (5, 5, 3),
    (5, 6, 3),
    (5, 7, 7),
    (7, 1, 1),
    (7, 2, 4),
    (7, 3, 5),
    (7, 4, 1),
    (7, 7, 7),
    (11, 1, 1),
    (11, 2, 3),
    (11, 3, 4),
    (11, 4, 1),
    (11, 7, 6),
    (13, 1, 1),
    (13, 2, 2),
    (13, 3, 3),
    (13, 4, 1),
    (13, 5, 3),
    (13, 6, 3),
    (13, 7, 8),
];

/// The seven conjectured congruences on `8n + j`, as `(j, k)`.
const CONJECTURE_TABLE: [(u64, u32); 7] = [(1, 1), (2, 2), (3, 3), (4, 1), (5, 3), (6, 3), (7, 5)];

pub fn theorem_claims() -> Vec<CongruenceClaim> {
    THEOREM_TABLE
        .iter()
        .map(|&(t, j, k)| {
            let source = match t {
                5 => ClaimSource::Theorem5col,
                7 => ClaimSource::Theorem7col,
                11 => ClaimSource::Theorem11col,
                _ => ClaimSource::Theorem13col,
            };
            CongruenceClaim { t, m: 8, j, k, source }
        })
        .collect()
}

pub fn conjecture_claims(q: u32) -> Vec<CongruenceClaim> {
    CONJECTURE_TABLE
        .iter()
        .map(|&(j, k)| CongruenceClaim {
            t: q,
            m: 8,
            j,
            k,
            source: ClaimSource::Conjecture,
        })
        .collect()
}

pub fn run_theorems(n_max: u64, workers: usize) -> Result<Vec<ClaimReport>> {
    check_claims(&theorem_claims(), n_max, workers)
}

/// Largest prime accepted by [`scan_conjecture`].
pub const MAX_CONJECTURE_PRIME: u32 = 10_000;

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// The seven conjectured congruences at `t = q`. A failing claim is a
/// finding, reported in the verdict, never an error.
pub fn scan_conjecture(q: u32, n_max: u64, workers: usize) -> Result<Vec<ClaimReport>> {
    if !is_prime(u64::from(q)) {
        return Err(Error::NotPrime(u64::from(q)));
    }
    if q > MAX_CONJECTURE_PRIME {
        return Err(Error::InvalidArgument(format!(
            "conjecture scan limited to primes <= {MAX_CONJECTURE_PRIME}"
        )));
    }
    check_claims(&conjecture_claims(q), n_max, workers)
}

/// Bounds for [`enumerate_colored_overpartitions`].
pub const ENUMERATION_MAX_N: u32 = 14;
pub const ENUMERATION_MAX_T: u32 = 5;

/// Count t-colored overpartitions of `n` one by one.
///
/// Parts are grouped into classes `(value, color)`. In each class any number
/// of plain copies may appear and at most one overlined copy. Every choice of
/// multiplicities summing to `n` is one overpartition.
pub fn enumerate_colored_overpartitions(t: u32, n: u32) -> Result<u64> {
    if n > ENUMERATION_MAX_N || t > ENUMERATION_MAX_T || t == 0 {
        return Err(Error::InvalidArgument(format!(
            "enumeration limited to 1 <= t <= {ENUMERATION_MAX_T}, n <= {ENUMERATION_MAX_N} (got t={t}, n={n})"
        )));
    }
    // classes by decreasing part value
    let classes: Vec<u32> = (1..=n).rev().flat_map(|v| (0..t).map(move |_| v)).collect();

    fn walk(classes: &[u32], rem: u32) -> u64 {
        if rem == 0 {
            return 1;
        }
        let Some(first) = classes.iter().position(|&v| v <= rem) else {
            return 0;
        };
        let v = classes[first];
        let rest = &classes[first + 1..];
        let mut count = 0;
        for overlined in 0..=1u32 {
            let mut plain = 0u32;
            while v * (plain + overlined) <= rem {
                count += walk(rest, rem - v * (plain + overlined));
                plain += 1;
            }
        }
        count
    }
    Ok(walk(&classes, n))
}

/// `f_m^(2^k) = f_{2m}^(2^(k-1)) (mod 2^k)` through `q^(trunc-1)`.
pub fn check_lift_congruence(m: u64, k: u32, trunc: i64) -> Result<IdentityReport> {
    if m == 0 || k == 0 || k > 32 {
        return Err(Error::InvalidArgument(format!(
            "lifting congruence needs m >= 1 and 1 <= k <= 32 (got m={m}, k={k})"
        )));
    }
    let ring = Ring::mod2k(k)?;
    let lhs = euler_factor(m, m, 1i64 << k, ring, trunc)?;
    let rhs = euler_factor(2 * m, 2 * m, 1i64 << (k - 1), ring, trunc)?;
    IdentityReport::compare(
        format!("f{m}^{} = f{}^{} (mod 2^{k})", 1u64 << k, 2 * m, 1u64 << (k - 1)),
        &lhs,
        &rhs,
        trunc,
    )
}

/// Exact coefficient of `q^n` in `f_2^t / f_1^(2t)`.
pub fn overpartition_count(t: u32, n: u32) -> Result<BigInt> {
    let s = overpartition_gf(t, Ring::EXACT, i64::from(n) + 1)?;
    Ok(s.coeff(i64::from(n)).expect("in range"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn claim_validation() {
        assert!(CongruenceClaim::new(5, 8, 8, 1, ClaimSource::UserSupplied).is_err());
        assert!(CongruenceClaim::new(5, 8, 7, 0, ClaimSource::UserSupplied).is_err());
        assert!(CongruenceClaim::new(0, 8, 7, 1, ClaimSource::UserSupplied).is_err());
        let c = CongruenceClaim::new(5, 8, 7, 7, ClaimSource::Theorem5col).unwrap();
        assert_eq!(c.trunc_for(2000), 16008);
        assert_eq!(c.to_string(), "p̄_-5(8n+7) ≡ 0 (mod 2^7)");
    }

    #[test]
    fn theorem_table_shape() {
        let claims = theorem_claims();
        assert_eq!(claims.len(), 24);
        for (t, count) in [(5, 7), (7, 5), (11, 5), (13, 7)] {
            assert_eq!(claims.iter().filter(|c| c.t == t).count(), count);
        }
        assert_eq!(conjecture_claims(3).len(), 7);
    }

    #[test]
    fn primes() {
        let ps: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(ps, [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(matches!(scan_conjecture(4, 10, 1), Err(Error::NotPrime(4))));
        assert!(scan_conjecture(10_007, 10, 1).is_err());
    }

    #[test]
    fn enumeration_hand_values() {
        let t1: Vec<u64> = (0..4).map(|n| enumerate_colored_overpartitions(1, n).unwrap()).collect();
        assert_eq!(t1, [1, 2, 4, 8]);
        assert_eq!(enumerate_colored_overpartitions(2, 1).unwrap(), 4);
        assert!(enumerate_colored_overpartitions(6, 3).is_err());
        assert!(enumerate_colored_overpartitions(2, 15).is_err());
    }

    #[test]
    fn enumeration_matches_generating_function_small() {
        for t in 1..=3 {
            for n in 0..=7 {
                assert_eq!(
                    BigInt::from(enumerate_colored_overpartitions(t, n).unwrap()),
                    overpartition_count(t, n).unwrap(),
                    "t={t} n={n}"
                );
            }
        }
    }

    #[test]
    fn sharp_claim_fails_one_power_up() {
        let c = CongruenceClaim::new(5, 8, 7, 7, ClaimSource::Theorem5col).unwrap();
        assert!(check_claim(&c, 200).unwrap().holds());
        let up = check_claim(&c.strengthened().unwrap(), 200).unwrap();
        assert_eq!(up.verdict, Verdict::Fails);
        // p̄_-5(7) = 37760 = 2^7 * 295
        let cex = up.counterexample.unwrap();
        assert_eq!(cex.n, 0);
        assert_eq!(cex.value, 37760 % 256);
    }

    #[test]
    fn n_max_zero_checks_single_coefficient() {
        let reports = run_theorems(0, 2).unwrap();
        assert!(reports.iter().all(ClaimReport::holds));
    }

    #[test]
    fn exact_and_modular_paths_agree() {
        let claims = theorem_claims();
        let n_max = 30;
        for t in [5u32, 7, 11, 13] {
            let exact = overpartition_gf(t, Ring::EXACT, 8 * n_max as i64 + 8).unwrap();
            for c in claims.iter().filter(|c| c.t == t) {
                let a = check_claim(c, n_max).unwrap();
                let b = check_claim_against(c, n_max, &exact).unwrap();
                assert_eq!(a.verdict, b.verdict);
                assert_eq!(a.counterexample, b.counterexample);
            }
        }
    }

    #[test]
    fn batch_order_independent_of_workers() {
        let claims = theorem_claims();
        let strip = |v: Vec<ClaimReport>| -> Vec<_> {
            v.into_iter().map(|r| (r.claim, r.verdict, r.counterexample, r.min_valuation)).collect()
        };
        let one = strip(check_claims(&claims, 40, 1).unwrap());
        let four = strip(check_claims(&claims, 40, 4).unwrap());
        assert_eq!(one, four);
        assert_eq!(one.iter().map(|r| r.0).collect::<Vec<_>>(), claims);
    }

    #[test]
    fn guarded_inputs() {
        let c = CongruenceClaim::new(5, 8, 7, 7, ClaimSource::UserSupplied).unwrap();
        let short = overpartition_gf(5, Ring::mod2k(7).unwrap(), 20).unwrap();
        assert!(check_claim_against(&c, 10, &short).is_err());
        let coarse = overpartition_gf(5, Ring::mod2k(3).unwrap(), 100).unwrap();
        assert!(check_claim_against(&c, 10, &coarse).is_err());
    }

    #[test]
    fn lifting_congruence_cases() {
        for (m, k) in [(1, 1), (1, 3), (2, 2)] {
            assert!(check_lift_congruence(m, k, 500).unwrap().matched);
        }
        assert!(check_lift_congruence(0, 1, 10).is_err());
    }
}
