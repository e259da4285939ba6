//! The `regulus` command line.
//!
//! Exit codes: `0` everything gating passed, `1` a gating check failed,
//! `2` usage or parse error, `3` the truncation budget was exceeded.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::congruence::{
    all_claims,
    claims_from_json, density_scan, discover, find_claim, generate_family, Claim, Engine, FamilyParams, Progression,
    DEFAULT_BUDGET, THEOREMS,
};
use crate::error::{Error, Result};
use crate::etaq::{catalog, expand_fquotient, find_identity, verify_dissection, verify_identity, FQuotient};
use crate::modform::{b_series_check, cusp_table, BSeriesParams, EtaQuotientSpec};
use crate::numtheory::{newman_verify, omega, NewmanParams};
use crate::oracles::table_by_name;
use crate::report::VerificationReport;
use crate::series::Ring;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "regulus", version, about = "Series arithmetic and congruence checks for k-tuple ℓ-regular partitions")]
pub struct Cli {
    /// Largest coefficient index any expansion may reach.
    #[arg(long, global = true, env = "REGULUS_BUDGET", default_value_t = DEFAULT_BUDGET)]
    pub budget: usize,
    /// Worker threads for parallel verification (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Expand an f-quotient such as `f2^3/f1^3`.
    Expand {
        quotient: String,
        #[arg(long, default_value_t = 50)]
        trunc: usize,
        /// Reduce modulo M (exact integers when omitted).
        #[arg(long = "mod")]
        modulus: Option<u64>,
    },
    /// Verify catalog identities.
    Identities {
        /// A single identity id; all of them when omitted.
        #[arg(long)]
        identity: Option<String>,
        #[arg(long, default_value_t = 1000)]
        trunc: usize,
        /// Also check the m-dissection class by class.
        #[arg(long)]
        dissection: Option<usize>,
    },
    /// Verify congruence families or single claims.
    Verify(VerifyArgs),
    /// Proportion of progression terms in a residue class.
    Density {
        #[arg(long, default_value = "f2^3/f1^3")]
        series: String,
        #[arg(long, default_value_t = 1)]
        a: u64,
        #[arg(long, default_value_t = 0)]
        b: u64,
        #[arg(long = "mod", default_value_t = 6)]
        modulus: u64,
        #[arg(long, default_value_t = 0)]
        residue: u64,
        /// Checkpoints X; each reports the first X terms.
        #[arg(long, value_delimiter = ',', default_value = "1000,10000,100000")]
        checkpoints: Vec<u64>,
    },
    /// Scan progressions for vanishing coefficients.
    Discover {
        #[arg(long, default_value = "f2^3/f1^3")]
        series: String,
        #[arg(long = "mod")]
        modulus: u64,
        #[arg(long, default_value_t = 27)]
        a_max: u64,
        #[arg(long, default_value_t = 200)]
        n_max: u64,
        #[arg(long, default_value_t = 50)]
        min_support: u64,
    },
    /// Modularity checks for an eta-quotient literal or a B-series.
    Modcheck {
        /// Literal such as `N=16; eta(4)^6`.
        spec: Option<String>,
        /// B-series parameters such as `l=2 p=2 a=1 m=2 k=3`.
        #[arg(long, conflicts_with = "spec")]
        bseries: Option<String>,
        #[arg(long, default_value_t = 2000)]
        trunc: usize,
    },
    /// Newman recurrence for `f_3^6 / f_1`.
    Newman {
        #[arg(long, default_value_t = 5)]
        p: u64,
        #[arg(long, default_value_t = 300)]
        n_max: u64,
    },
    /// Brute-force counting tables.
    Oracle {
        /// partition, ped, distinct, lregular or tuple.
        name: String,
        #[arg(long, default_value_t = 100)]
        nmax: usize,
        #[arg(long, default_value_t = 2)]
        ell: u64,
        #[arg(long, default_value_t = 1)]
        k: u32,
    },
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Theorem family id (repeatable); `all` selects every family.
    #[arg(long)]
    pub theorem: Vec<String>,
    /// A single generated claim id.
    #[arg(long)]
    pub claim: Vec<String>,
    /// JSON file with an array of claims.
    #[arg(long)]
    pub claims_file: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    pub alpha: Option<Vec<u32>>,
    #[arg(long, value_delimiter = ',')]
    pub k: Option<Vec<u32>>,
    #[arg(long, value_delimiter = ',')]
    pub primes: Option<Vec<u64>>,
    #[arg(long, value_delimiter = ',')]
    pub j: Option<Vec<u64>>,
    /// Check `0 <= n <= n_max`; as far as the budget allows when omitted.
    #[arg(long)]
    pub n_max: Option<u64>,
    /// List the generated claims without verifying them (every claim when nothing is selected).
    #[arg(long)]
    pub list: bool,
}

/// Exit code for an error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        Error::Parse { .. }
        | Error::UnknownSelection(_)
        | Error::UnknownIdentity(_)
        | Error::InvalidModulus(_)
        | Error::SideConditionViolated(_)
        | Error::HypothesisViolated(_)
        | Error::NotADivisor { .. }
        | Error::Domain(_) => EXIT_USAGE,
        _ => EXIT_FAIL,
    }
}

/// Parse `args` (including the program name), run, and write to `stdout` unless `--out` is given.
pub fn run<I, T>(args: I, stdout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    let mut file;
    let out: &mut dyn Write = match &cli.out {
        Some(path) => match File::create(path) {
            Ok(f) => {
                file = io::BufWriter::new(f);
                &mut file
            }
            Err(e) => {
                eprintln!("error: cannot create {}: {e}", path.display());
                return EXIT_USAGE;
            }
        },
        None => stdout,
    };
    let result = match cli.jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            Ok(pool) => {
                let mut buf = Vec::new();
                let r = pool.install(|| execute(&cli, &mut buf));
                out.write_all(&buf).map_err(io_err).and(r)
            }
            Err(e) => Err(Error::Domain(e.to_string())),
        },
        None => execute(&cli, out),
    };
    let code = match result {
        Ok(passed) => {
            if passed {
                EXIT_PASS
            } else {
                EXIT_FAIL
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    };
    let _ = out.flush();
    code
}

fn io_err(e: impl std::fmt::Display) -> Error {
    Error::Domain(format!("output failed: {e}"))
}

fn emit_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(io_err)?;
    writeln!(out).map_err(io_err)
}

fn emit_reports(cli: &Cli, out: &mut dyn Write, reports: &[VerificationReport]) -> Result<bool> {
    match cli.format {
        Format::Json => emit_json(out, &reports)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["claim_id", "status", "tag", "n_max", "checked", "trunc", "first_counterexample"])
                .map_err(io_err)?;
            for r in reports {
                let ce = r.first_counterexample.as_ref().map(|c| c.n.to_string()).unwrap_or_default();
                w.write_record([
                    r.claim_id.clone(),
                    format!("{:?}", r.status).to_lowercase(),
                    format!("{:?}", r.tag).to_lowercase(),
                    r.n_max.to_string(),
                    r.checked.to_string(),
                    r.trunc.to_string(),
                    ce,
                ])
                .map_err(io_err)?;
            }
            w.flush().map_err(io_err)?;
        }
        Format::Text => {
            for r in reports {
                writeln!(out, "{}", r.summary()).map_err(io_err)?;
                for n in &r.notes {
                    writeln!(out, "    note: {n}").map_err(io_err)?;
                }
            }
        }
    }
    Ok(reports.iter().all(|r| r.passed() || !r.tag.is_gating()))
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<bool> {
    match &cli.command {
        Command::Expand { quotient, trunc, modulus } => {
            if *trunc > cli.budget {
                return Err(Error::BudgetExceeded {
                    needed: *trunc,
                    budget: cli.budget,
                });
            }
            let q: FQuotient = quotient.parse()?;
            let ring = match modulus {
                Some(m) => Ring::modulo(*m)?,
                None => Ring::Integer,
            };
            let s = expand_fquotient(&q, *trunc, ring)?;
            let coeffs: Vec<String> = s.to_bigints().iter().map(|c| c.to_string()).collect();
            match cli.format {
                Format::Json => emit_json(
                    out,
                    &json!({"quotient": q.to_string(), "ring": ring.to_string(), "trunc": trunc, "coefficients": coeffs}),
                )?,
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(&mut *out);
                    w.write_record(["n", "coefficient"]).map_err(io_err)?;
                    for (n, c) in coeffs.iter().enumerate() {
                        w.write_record([n.to_string(), c.clone()]).map_err(io_err)?;
                    }
                    w.flush().map_err(io_err)?;
                }
                Format::Text => writeln!(out, "{q} = {s}").map_err(io_err)?,
            }
            Ok(true)
        }
        Command::Identities {
            identity,
            trunc,
            dissection,
        } => {
            let entries = match identity {
                Some(id) => vec![find_identity(id)?],
                None => catalog(),
            };
            let mut reports = Vec::new();
            for e in &entries {
                reports.push(verify_identity(e, *trunc)?);
                if let Some(m) = dissection {
                    reports.extend(verify_dissection(e, *m, *trunc)?);
                }
            }
            emit_reports(cli, out, &reports)
        }
        Command::Verify(args) => verify(cli, args, out),
        Command::Density {
            series,
            a,
            b,
            modulus,
            residue,
            checkpoints,
        } => {
            let engine = Engine::new(cli.budget);
            let prog = Progression::new(series.parse()?, *a, *b);
            let report = density_scan(&engine, &prog, *modulus, *residue, checkpoints)?;
            match cli.format {
                Format::Json => emit_json(out, &report)?,
                Format::Csv => report.write_csv(&mut *out).map_err(io_err)?,
                Format::Text => {
                    writeln!(
                        out,
                        "[{}]({}n+{}) ≡ {} mod {}",
                        report.series, report.a, report.b, report.residue, report.modulus
                    )
                    .map_err(io_err)?;
                    for c in &report.checkpoints {
                        writeln!(out, "X={:<10} count={:<10} proportion={:.6}", c.x, c.count, c.proportion)
                            .map_err(io_err)?;
                    }
                }
            }
            Ok(true)
        }
        Command::Discover {
            series,
            modulus,
            a_max,
            n_max,
            min_support,
        } => {
            if *modulus < 2 {
                return Err(Error::InvalidModulus(*modulus));
            }
            let engine = Engine::new(cli.budget);
            let q: FQuotient = series.parse()?;
            let found = discover(&engine, &q, *modulus, *a_max, *n_max, *min_support)?;
            match cli.format {
                Format::Json => emit_json(out, &found)?,
                _ => {
                    for c in &found {
                        let implied = c.implied_by.map(|(a, b)| format!(" (implied by {a}n+{b})")).unwrap_or_default();
                        writeln!(
                            out,
                            "EMPIRICAL [{q}]({}n+{}) ≡ 0 mod {modulus}, {} checked{implied}",
                            c.a, c.b, c.checked
                        )
                        .map_err(io_err)?;
                    }
                }
            }
            Ok(true)
        }
        Command::Modcheck { spec, bseries, trunc } => modcheck(cli, spec.as_deref(), bseries.as_deref(), *trunc, out),
        Command::Newman { p, n_max } => {
            let params = NewmanParams::f3_6_over_f1(*p);
            params.validate()?;
            let needed = (p * p * n_max) as usize + params.delta()? as usize;
            if needed > cli.budget {
                return Err(Error::BudgetExceeded {
                    needed,
                    budget: cli.budget,
                });
            }
            let phi = params.phi_series(needed)?;
            let report = newman_verify(&params, &phi, *n_max)?;
            let w = omega(*p, &phi)?;
            let report = report.with_note(format!("ω({p}) = {w}"));
            emit_reports(cli, out, &[report])
        }
        Command::Oracle { name, nmax, ell, k } => {
            let table = table_by_name(name, *ell, *k, *nmax)?;
            match cli.format {
                Format::Json => emit_json(
                    out,
                    &json!({"kind": table.kind, "values": table.values.iter().map(|v| v.to_string()).collect::<Vec<_>>()}),
                )?,
                _ => table.write_csv(&mut *out).map_err(io_err)?,
            }
            Ok(true)
        }
    }
}

fn verify(cli: &Cli, args: &VerifyArgs, out: &mut dyn Write) -> Result<bool> {
    let params = FamilyParams {
        alpha: args.alpha.clone(),
        k: args.k.clone(),
        primes: args.primes.clone(),
        j: args.j.clone(),
    };
    let mut claims: Vec<Claim> = Vec::new();
    let mut notes = Vec::new();
    let theorems: Vec<String> = if args.theorem.iter().any(|t| t == "all") {
        THEOREMS.iter().map(|s| s.to_string()).collect()
    } else {
        args.theorem.clone()
    };
    for t in &theorems {
        let fam = generate_family(t, &params)?;
        notes.extend(fam.notes.into_iter().map(|n| format!("{t}: {n}")));
        claims.extend(fam.claims);
    }
    for id in &args.claim {
        claims.push(find_claim(id)?);
    }
    if let Some(path) = &args.claims_file {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::UnknownSelection(format!("{}: {e}", path.display())))?;
        claims.extend(claims_from_json(&text)?);
    }
    if claims.is_empty() && args.list {
        claims = all_claims()?;
    }
    if claims.is_empty() {
        return Err(Error::UnknownSelection(
            "nothing selected; pass --theorem, --claim or --claims-file".into(),
        ));
    }
    if args.list {
        match cli.format {
            Format::Json => emit_json(out, &claims)?,
            _ => {
                for c in &claims {
                    match c {
                        Claim::Congruence(c) => writeln!(out, "{}: {c}", c.claim_id),
                        Claim::Relation(r) => writeln!(
                            out,
                            "{}: {}·({}n+{}) ≡ {}·({}n+{}) mod {}",
                            r.claim_id, r.lhs_scale, r.lhs.a, r.lhs.b, r.rhs_scale, r.rhs.a, r.rhs.b, r.modulus
                        ),
                    }
                    .map_err(io_err)?;
                }
            }
        }
        return Ok(true);
    }
    let engine = Engine::new(cli.budget);
    let reports = engine.verify_all(&claims, args.n_max)?;
    if cli.format == Format::Text {
        for n in &notes {
            writeln!(out, "note: {n}").map_err(io_err)?;
        }
    }
    emit_reports(cli, out, &reports)
}

fn modcheck(cli: &Cli, spec: Option<&str>, bseries: Option<&str>, trunc: usize, out: &mut dyn Write) -> Result<bool> {
    if let Some(b) = bseries {
        let params: BSeriesParams = b.parse()?;
        let report = b_series_check(params, trunc)?;
        let passed = report.passed();
        match cli.format {
            Format::Json => emit_json(out, &report)?,
            Format::Csv => write_cusps(out, &report.cusp_table())?,
            Format::Text => {
                let status = if passed { "PASS" } else { "FAIL" };
                writeln!(out, "{status} B-series {params}").map_err(io_err)?;
                writeln!(out, "  congruence: {}", report.congruence.summary()).map_err(io_err)?;
                writeln!(out, "  weight {} (matches: {})", report.weight, report.weight_matches).map_err(io_err)?;
                writeln!(
                    out,
                    "  level 576ℓ = {} (conditions hold: {}), minimal level {}",
                    report.stated_level, report.stated_level_valid, report.minimal_level
                )
                .map_err(io_err)?;
                writeln!(out, "  character: {:?}", report.character).map_err(io_err)?;
                writeln!(out, "  minimum cusp order {}", report.min_cusp_order).map_err(io_err)?;
                for n in &report.notes {
                    writeln!(out, "  note: {n}").map_err(io_err)?;
                }
            }
        }
        return Ok(passed);
    }
    let literal = spec.ok_or_else(|| Error::UnknownSelection("pass an eta-quotient literal or --bseries".into()))?;
    let spec: EtaQuotientSpec = literal.parse()?;
    let check = spec.check_ono_conditions();
    let orders = spec.cusp_orders();
    let holo = spec.is_holomorphic()?;
    let character = if check.passed() { Some(spec.character_of()?) } else { None };
    match cli.format {
        Format::Json => emit_json(
            out,
            &json!({
                "spec": spec.to_string(),
                "weight": spec.weight().to_string(),
                "conditions_hold": check.passed(),
                "reason": check.reason(),
                "character": character,
                "holomorphy": format!("{holo:?}"),
                "cusp_orders": orders.iter().map(|(d, o)| json!({"d": d, "order": o.to_string()})).collect::<Vec<_>>(),
            }),
        )?,
        Format::Csv => write_cusps(out, &cusp_table(&orders))?,
        Format::Text => {
            writeln!(out, "{spec}: weight {}", spec.weight()).map_err(io_err)?;
            writeln!(out, "  conditions: {}", check.reason()).map_err(io_err)?;
            if let Some(c) = &character {
                writeln!(out, "  character: {c:?}").map_err(io_err)?;
            }
            writeln!(out, "  {holo:?}").map_err(io_err)?;
            for [d, o, s] in cusp_table(&orders) {
                writeln!(out, "  d={d:<6} order={o:<10} {s}").map_err(io_err)?;
            }
        }
    }
    Ok(check.passed())
}

fn write_cusps(out: &mut dyn Write, rows: &[[String; 3]]) -> Result<()> {
    let mut w = csv::Writer::from_writer(&mut *out);
    w.write_record(["d", "order", "sign"]).map_err(io_err)?;
    for r in rows {
        w.write_record(r).map_err(io_err)?;
    }
    w.flush().map_err(io_err)
}
