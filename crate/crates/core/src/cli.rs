//! Command-line front end.
//!
//! Exit status: 0 when every checked item holds or matches, 1 when any
//! verification fails (including a `--check` fixture difference), 2 for
//! usage, parse and I/O errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::congruence::{
    enumerate_colored_overpartitions, overpartition_count, run_theorems, scan_conjecture, DEFAULT_N_MAX,
};
use crate::dissection::{dissection3_f1cubed, dissection5, dissection7, extract, ramanathan, Progression};
use crate::error::{Error, Result};
use crate::eta::EtaQuotient;
use crate::family::{
    family_gf, induction_closure, verify_eq1, verify_family_instance_in, verify_induction_step, FamilyInstance,
    Variant, DEFAULT_BUDGET,
};
use crate::report::{Format, Item, OracleCheck, Report, DEFAULT_TRUNCATION};
use crate::series::{LaurentSeries, Ring};
use crate::witness::{builtin_certificate, verify_witness, WitnessCertificate};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Ramanathan dissections run by `verify dissections`.
pub const RAMANATHAN_ORDERS: [u64; 4] = [5, 7, 11, 13];

/// Family instances run by `verify families`.
pub const FAMILY_INSTANCES: [(u32, u32, u32, Variant); 7] = [
    (0, 0, 0, Variant::Inf),
    (1, 0, 0, Variant::Inf),
    (0, 1, 0, Variant::Inf),
    (0, 0, 1, Variant::Inf),
    (0, 0, 0, Variant::Inf2),
    (0, 0, 0, Variant::Inf3),
    (0, 0, 0, Variant::Inf4),
];

/// Terms compared when checking that an induction step closes.
const CLOSURE_N_MAX: u64 = 20;

#[derive(Parser, Debug)]
#[command(name = "opcong", version, about = "q-series engine and congruence verifier for colored overpartitions")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Truncation: series are known below q^T.
    #[arg(long = "T", global = true, default_value_t = DEFAULT_TRUNCATION)]
    truncation: i64,

    /// Largest progression index n checked.
    #[arg(long = "n-max", global = true, default_value_t = DEFAULT_N_MAX)]
    n_max: u64,

    /// Coefficient ring for expand and extract: exact or mod2k:K.
    #[arg(long, global = true, default_value = "exact")]
    ring: Ring,

    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Table)]
    format: FormatArg,

    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Include wall-clock timings in the output.
    #[arg(long, global = true)]
    timings: bool,

    /// Write the stable report to FILE as a fixture.
    #[arg(long, global = true, value_name = "FILE", conflicts_with = "check")]
    bless: Option<PathBuf>,

    /// Compare the stable report with the fixture FILE.
    #[arg(long, global = true, value_name = "FILE")]
    check: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Table,
    Records,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Table => Format::Table,
            FormatArg::Records => Format::Records,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Expand an eta quotient such as "q^-1 * f2^1 * f1^-2".
    Expand { quotient: String },
    /// Coefficients a(m n + j), n = 0..T-1, of an eta quotient.
    Extract {
        quotient: String,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        j: u64,
    },
    /// Run a verification suite.
    Verify {
        #[command(subcommand)]
        target: Target,
    },
    /// Cross-check generating-function coefficients against enumeration.
    Oracle {
        /// Numbers of colors.
        #[arg(long = "t", num_args = 1.., default_values_t = [1u32, 2, 3, 5])]
        t: Vec<u32>,
        /// Check n = 0..=N.
        #[arg(long = "up-to", value_name = "N", default_value_t = 10)]
        up_to: u32,
    },
}

#[derive(Subcommand, Debug)]
enum Target {
    /// The 24 congruences for t = 5, 7, 11, 13.
    Theorems,
    /// The conjectured congruences for each prime q given.
    Conjecture {
        #[arg(required = true)]
        primes: Vec<u32>,
    },
    /// 3-, 5- and 7-dissections of f1 and the Ramanathan family.
    Dissections,
    /// A witness certificate file, or `builtin`.
    Witness { file: String },
    /// Family instances, induction steps and their closure.
    Families,
    /// The 8n+2 identity mod 8 and its reduction to 4 f1^6.
    Eq1,
    /// theorems, dissections, witness builtin, eq1 and families.
    All,
}

struct Ctx {
    truncation: i64,
    n_max: u64,
    workers: usize,
}

/// Parse `args` (program name first), run, and return the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    match execute(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    if cli.truncation < 1 {
        return Err(Error::InvalidArgument(format!("--T must be at least 1, got {}", cli.truncation)));
    }
    let workers = match cli.workers {
        Some(0) => return Err(Error::InvalidArgument("--workers must be at least 1".into())),
        Some(w) => w,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let ctx = Ctx {
        truncation: cli.truncation,
        n_max: cli.n_max,
        workers,
    };
    let format = Format::from(cli.format);
    let (stable, shown, passed) = match &cli.command {
        Command::Expand { quotient } => {
            let q: EtaQuotient = quotient.parse()?;
            let s = q.expand(cli.ring, cli.truncation)?;
            let text = listing(&format!("expand {q}"), &s, cli.ring, format);
            (text.clone(), text, true)
        }
        Command::Extract { quotient, m, j } => {
            let q: EtaQuotient = quotient.parse()?;
            let p = Progression::new(*m, *j)?;
            let need = (*m as i64)
                .checked_mul(cli.truncation)
                .and_then(|x| x.checked_add(*j as i64))
                .ok_or_else(|| Error::InvalidArgument("m T + j overflows".into()))?;
            let s = extract(&q.expand(cli.ring, need)?, p)?.truncate(cli.truncation)?;
            let text = listing(&format!("extract {q} at {m}n+{j}"), &s, cli.ring, format);
            (text.clone(), text, true)
        }
        Command::Verify { target } => {
            let report = verify(target, &ctx)?;
            (
                report.render(format, false),
                report.render(format, cli.timings),
                report.passed(),
            )
        }
        Command::Oracle { t, up_to } => {
            let report = oracle(t, *up_to, &ctx)?;
            (
                report.render(format, false),
                report.render(format, cli.timings),
                report.passed(),
            )
        }
    };
    out.write_all(shown.as_bytes())?;
    let mut code = if passed { EXIT_OK } else { EXIT_VERIFICATION_FAILED };
    if let Some(path) = &cli.bless {
        std::fs::write(path, &stable)?;
    }
    if let Some(path) = &cli.check {
        if let Some(msg) = fixture_difference(path, &stable)? {
            let _ = writeln!(err, "fixture {} differs: {msg}", path.display());
            code = EXIT_VERIFICATION_FAILED;
        }
    }
    Ok(code)
}

fn fixture_difference(path: &Path, actual: &str) -> Result<Option<String>> {
    let expected = std::fs::read_to_string(path)?;
    if expected == actual {
        return Ok(None);
    }
    let mut a = actual.lines();
    let mut e = expected.lines();
    for line in 1.. {
        match (e.next(), a.next()) {
            (Some(x), Some(y)) if x == y => continue,
            (x, y) => {
                return Ok(Some(format!(
                    "line {line}: expected {:?}, got {:?}",
                    x.unwrap_or("<end>"),
                    y.unwrap_or("<end>")
                )))
            }
        }
    }
    unreachable!()
}

fn listing(title: &str, s: &LaurentSeries, ring: Ring, format: Format) -> String {
    let mut text = String::new();
    match format {
        Format::Table => {
            text.push_str(&format!("# {title}  ring={ring}  exponents {}..{}\n", s.offset(), s.trunc() - 1));
            for (e, c) in s.terms() {
                text.push_str(&format!("{e}\t{c}\n"));
            }
        }
        Format::Records => {
            let header = serde_json::json!({
                "kind": "header",
                "command": title,
                "ring": ring.to_string(),
                "offset": s.offset(),
                "T": s.trunc(),
            });
            text.push_str(&format!("{header}\n"));
            for (e, c) in s.terms() {
                let rec = serde_json::json!({ "exponent": e, "kind": "coefficient", "value": c.to_string() });
                text.push_str(&format!("{rec}\n"));
            }
        }
    }
    text
}

fn verify(target: &Target, ctx: &Ctx) -> Result<Report> {
    let (name, trunc, n_max) = (target_name(target), ctx.truncation, ctx.n_max);
    let mut report = Report::new(format!("verify {name}"), trunc, n_max);
    match target {
        Target::Theorems => report.extend(run_theorems(n_max, ctx.workers)?.into_iter().map(Item::Claim)),
        Target::Conjecture { primes } => {
            for &q in primes {
                report.extend(scan_conjecture(q, n_max, ctx.workers)?.into_iter().map(Item::Claim));
            }
        }
        Target::Dissections => report.extend(dissections(trunc)?),
        Target::Witness { file } => {
            let cert = if file == "builtin" {
                builtin_certificate()
            } else {
                WitnessCertificate::parse(&std::fs::read_to_string(file)?)?
            };
            report.push(Item::Witness(verify_witness(&cert, trunc)?));
        }
        Target::Families => report.extend(families(trunc, n_max)?),
        Target::Eq1 => report.push(Item::Identity(verify_eq1(trunc)?)),
        Target::All => {
            report.extend(run_theorems(n_max, ctx.workers)?.into_iter().map(Item::Claim));
            report.extend(dissections(trunc)?);
            report.push(Item::Witness(verify_witness(&builtin_certificate(), trunc)?));
            report.push(Item::Identity(verify_eq1(trunc)?));
            report.extend(families(trunc, n_max)?);
        }
    }
    Ok(report)
}

fn target_name(target: &Target) -> String {
    match target {
        Target::Theorems => "theorems".into(),
        Target::Conjecture { primes } => format!(
            "conjecture {}",
            primes.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
        ),
        Target::Dissections => "dissections".into(),
        Target::Witness { file } => format!("witness {file}"),
        Target::Families => "families".into(),
        Target::Eq1 => "eq1".into(),
        Target::All => "all".into(),
    }
}

fn dissections(trunc: i64) -> Result<Vec<Item>> {
    let mut items = vec![dissection3_f1cubed(trunc)?, dissection5(trunc)?, dissection7(trunc)?];
    for n in RAMANATHAN_ORDERS {
        items.push(ramanathan(n, trunc)?);
    }
    Ok(items.into_iter().map(Item::Identity).collect())
}

fn families(trunc: i64, n_max: u64) -> Result<Vec<Item>> {
    let instances: Vec<FamilyInstance> = FAMILY_INSTANCES
        .iter()
        .map(|&(a, b, c, v)| FamilyInstance::new(a, b, c, v))
        .collect();
    let mut widest = 0;
    for fi in &instances {
        widest = widest.max(fi.step_offset()?.0);
    }
    let gf = family_gf(DEFAULT_BUDGET + widest)?;
    let mut items = Vec::new();
    for fi in instances {
        let n = n_max.min(fi.n_max_within(DEFAULT_BUDGET)?);
        items.push(verify_family_instance_in(&gf, fi, n)?);
    }
    for base in [3, 5, 7] {
        items.push(verify_induction_step(base, trunc)?);
    }
    let origin = FamilyInstance::new(0, 0, 0, Variant::Inf);
    for base in [3, 5, 7] {
        items.push(induction_closure(&gf, origin, base, n_max.min(CLOSURE_N_MAX))?);
    }
    Ok(items.into_iter().map(Item::Identity).collect())
}

fn oracle(ts: &[u32], up_to: u32, ctx: &Ctx) -> Result<Report> {
    let mut report = Report::new(format!("oracle up to n={up_to}"), ctx.truncation, ctx.n_max);
    for &t in ts {
        for n in 0..=up_to {
            report.push(Item::Oracle(OracleCheck {
                t,
                n,
                enumerated: enumerate_colored_overpartitions(t, n)?,
                generating_function: overpartition_count(t, n)?.to_string(),
            }));
        }
    }
    Ok(report)
}
