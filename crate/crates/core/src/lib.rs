//! Truncated q-series arithmetic and a verifier for the 2-adic congruences
//! of t-colored overpartitions `p̄_{-t}(n)`, whose generating function is
//! `f_2^t / f_1^(2t)` with `f_k = (q^k; q^k)_inf`.
//!
//! Everything here is checked to a finite truncation. A congruence that
//! "holds" has been verified for the coefficients examined; the only
//! statement valid for all `n` is the one a witness certificate carries, and
//! even there this crate checks the identity coefficient-wise, not the
//! modularity argument behind it.

pub mod cli;
pub mod congruence;
pub mod dissection;
pub mod error;
pub mod eta;
pub mod family;
pub mod report;
pub mod series;
pub mod witness;

pub use dissection::{extract, IdentityReport, Mismatch, Progression};
pub use error::{Error, Result};
pub use eta::{colored_partition_gf, overpartition_gf, EtaQuotient};
pub use series::{euler_factor, f_series, theta_f, LaurentSeries, Ring, Valuation};
pub use congruence::{check_claim, check_claims, ClaimReport, CongruenceClaim, Verdict};
pub use witness::{builtin_certificate, verify_witness, WitnessCertificate, WitnessReport};
pub use family::{verify_eq1, verify_family_instance, verify_induction_step, FamilyInstance, Variant};
