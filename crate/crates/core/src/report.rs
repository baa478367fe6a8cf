//! Run reports as aligned text or JSON lines.
//!
//! Every report opens with a header naming the command, the truncation and
//! `n_max` in effect, and the defaults. Wall-clock timings appear only in
//! a field named `ms` (records) or after `time=` (table), and only when
//! rendering with timings enabled; the stable rendering used for fixtures
//! leaves them out, so equal inputs give byte-identical output.

use std::fmt::Write as _;

use serde::Serialize;

use crate::congruence::{ClaimReport, ObservedValuation, DEFAULT_N_MAX};
use crate::dissection::IdentityReport;
use crate::witness::WitnessReport;

pub const DEFAULT_TRUNCATION: i64 = 500;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Table,
    Records,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleCheck {
    pub t: u32,
    pub n: u32,
    pub enumerated: u64,
    pub generating_function: String,
}

impl OracleCheck {
    pub fn matched(&self) -> bool {
        self.enumerated.to_string() == self.generating_function
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Item {
    Claim(ClaimReport),
    Identity(IdentityReport),
    Witness(WitnessReport),
    Oracle(OracleCheck),
}

impl Item {
    pub fn passed(&self) -> bool {
        match self {
            Item::Claim(c) => c.holds(),
            Item::Identity(r) => r.matched,
            Item::Witness(w) => w.identity.matched && w.claimed_factor_divides,
            Item::Oracle(o) => o.matched(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub command: String,
    pub truncation: i64,
    pub n_max: u64,
    pub items: Vec<Item>,
}

#[derive(Serialize)]
struct Defaults {
    #[serde(rename = "T")]
    truncation: i64,
    n_max: u64,
}

#[derive(Serialize)]
struct HeaderRecord<'a> {
    kind: &'static str,
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    #[serde(rename = "T")]
    truncation: i64,
    n_max: u64,
    defaults: Defaults,
}

#[derive(Serialize)]
struct ClaimRecord<'a> {
    kind: &'static str,
    source: &'a crate::congruence::ClaimSource,
    t: u32,
    m: u64,
    j: u64,
    k: u32,
    n_max: u64,
    verdict: &'a crate::congruence::Verdict,
    counterexample_n: Option<u64>,
    counterexample_value: Option<u64>,
    v2: u32,
    v2_exact: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    ms: Option<u128>,
}

#[derive(Serialize)]
struct WitnessRecord<'a> {
    kind: &'static str,
    id: &'a str,
    #[serde(rename = "T")]
    truncation: i64,
    identity_matched: bool,
    first_mismatch: &'a Option<crate::dissection::Mismatch>,
    gcd: String,
    v2: Option<u64>,
    implied_modulus: Option<String>,
    claimed_factor_divides: bool,
}

#[derive(Serialize)]
struct IdentityRecord<'a> {
    kind: &'static str,
    #[serde(flatten)]
    report: &'a IdentityReport,
}

#[derive(Serialize)]
struct OracleRecord<'a> {
    kind: &'static str,
    #[serde(flatten)]
    check: &'a OracleCheck,
    matched: bool,
}

#[derive(Serialize)]
struct SummaryRecord {
    kind: &'static str,
    checked: usize,
    passed: usize,
    failed: usize,
}

fn valuation_parts(v: ObservedValuation) -> (u32, bool) {
    match v {
        ObservedValuation::Exactly(v) => (v, true),
        ObservedValuation::AtLeast(v) => (v, false),
    }
}

impl Report {
    pub fn new(command: impl Into<String>, truncation: i64, n_max: u64) -> Self {
        Report {
            command: command.into(),
            truncation,
            n_max,
            items: Vec::new(),
        }
    }

    pub fn push(&mut self, item: Item) {
        self.items.push(item);
    }

    pub fn extend(&mut self, items: impl IntoIterator<Item = Item>) {
        self.items.extend(items);
    }

    pub fn passed(&self) -> bool {
        self.items.iter().all(Item::passed)
    }

    pub fn failures(&self) -> usize {
        self.items.iter().filter(|i| !i.passed()).count()
    }

    pub fn render(&self, format: Format, timings: bool) -> String {
        match format {
            Format::Table => self.table(timings),
            Format::Records => self.records(timings),
        }
    }

    fn records(&self, timings: bool) -> String {
        let mut out = String::new();
        let mut line = |v: String| {
            out.push_str(&v);
            out.push('\n');
        };
        line(json(&HeaderRecord {
            kind: "header",
            tool: "opcong",
            version: env!("CARGO_PKG_VERSION"),
            command: &self.command,
            truncation: self.truncation,
            n_max: self.n_max,
            defaults: Defaults {
                truncation: DEFAULT_TRUNCATION,
                n_max: DEFAULT_N_MAX,
            },
        }));
        for item in &self.items {
            match item {
                Item::Claim(c) => {
                    let (v2, v2_exact) = valuation_parts(c.min_valuation);
                    line(json(&ClaimRecord {
                        kind: "claim",
                        source: &c.claim.source,
                        t: c.claim.t,
                        m: c.claim.m,
                        j: c.claim.j,
                        k: c.claim.k,
                        n_max: c.n_max,
                        verdict: &c.verdict,
                        counterexample_n: c.counterexample.map(|x| x.n),
                        counterexample_value: c.counterexample.map(|x| x.value),
                        v2,
                        v2_exact,
                        ms: timings.then_some(c.elapsed.as_millis()),
                    }))
                }
                Item::Identity(r) => line(json(&IdentityRecord {
                    kind: "identity",
                    report: r,
                })),
                Item::Witness(w) => line(json(&WitnessRecord {
                    kind: "witness",
                    id: &w.id,
                    truncation: w.truncation,
                    identity_matched: w.identity.matched,
                    first_mismatch: &w.identity.first_mismatch,
                    gcd: w.common_factor.gcd.to_string(),
                    v2: w.common_factor.two_adic_valuation,
                    implied_modulus: w.common_factor.implied_modulus().map(|m| m.to_string()),
                    claimed_factor_divides: w.claimed_factor_divides,
                })),
                Item::Oracle(o) => line(json(&OracleRecord {
                    kind: "oracle",
                    check: o,
                    matched: o.matched(),
                })),
            }
        }
        let failed = self.failures();
        line(json(&SummaryRecord {
            kind: "summary",
            checked: self.items.len(),
            passed: self.items.len() - failed,
            failed,
        }));
        out
    }

    fn table(&self, timings: bool) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# opcong {}  command: {}  T={}  n_max={}  (defaults T={}, n_max={})",
            env!("CARGO_PKG_VERSION"),
            self.command,
            self.truncation,
            self.n_max,
            DEFAULT_TRUNCATION,
            DEFAULT_N_MAX
        );
        let mark = |ok: bool| if ok { "ok  " } else { "FAIL" };
        for item in &self.items {
            match item {
                Item::Claim(c) => {
                    let _ = write!(
                        out,
                        "{} claim    {:<34} n<={:<5} {:<5} v2={:<4}",
                        mark(c.holds()),
                        c.claim.to_string(),
                        c.n_max,
                        if c.holds() { "holds" } else { "fails" },
                        c.min_valuation.to_string(),
                    );
                    if let Some(x) = c.counterexample {
                        let _ = write!(out, " counterexample n={} value={}", x.n, x.value);
                    }
                    if timings {
                        let _ = write!(out, " time={}ms", c.elapsed.as_millis());
                    }
                    out.push('\n');
                }
                Item::Identity(r) => {
                    let _ = write!(out, "{} identity {}  T={}", mark(r.matched), r.name, r.truncation);
                    if let Some(m) = &r.first_mismatch {
                        let _ = write!(out, "  first mismatch at q^{}: {} vs {}", m.exponent, m.lhs, m.rhs);
                    }
                    out.push('\n');
                    for note in &r.notes {
                        let _ = writeln!(out, "       - {note}");
                    }
                }
                Item::Witness(w) => {
                    let v2 = w
                        .common_factor
                        .two_adic_valuation
                        .map_or("undefined".to_string(), |v| v.to_string());
                    let _ = write!(
                        out,
                        "{} witness  {}  T={}  identity {}  gcd={} v2={}",
                        mark(item.passed()),
                        w.id,
                        w.truncation,
                        if w.identity.matched { "matched" } else { "MISMATCH" },
                        w.common_factor.gcd,
                        v2
                    );
                    if let Some(m) = &w.identity.first_mismatch {
                        let _ = write!(out, "  first mismatch at q^{}: {} vs {}", m.exponent, m.lhs, m.rhs);
                    }
                    if !w.claimed_factor_divides {
                        out.push_str("  claimed common factor does not divide");
                    }
                    out.push('\n');
                }
                Item::Oracle(o) => {
                    let _ = writeln!(
                        out,
                        "{} oracle   t={} n={}  enumerated={} gf={}",
                        mark(o.matched()),
                        o.t,
                        o.n,
                        o.enumerated,
                        o.generating_function
                    );
                }
            }
        }
        let failed = self.failures();
        let _ = writeln!(
            out,
            "# {} checked, {} passed, {} failed",
            self.items.len(),
            self.items.len() - failed,
            failed
        );
        out
    }
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("report records serialize")
}
