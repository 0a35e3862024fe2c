use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

use k3ulrich::certificate::to_sorted_json;
use k3ulrich::k3::ulrich_lines_certificate;
use k3ulrich::{
    certify_very_ample, chern_bounds, discriminant_certificate, scan_rank2, Certificate, Error,
    GramLattice, Verdict,
};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(name = "k3ulrich", version, about = "Lattice certificates for Ulrich bundles on K3 surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the lattice M(a, u) with its evenness and signature.
    Lattice {
        #[arg(long, allow_hyphen_values = true)]
        a: BigInt,
        #[arg(long, allow_hyphen_values = true)]
        u: BigInt,
        /// Emit {"a", "u", "gram"} as JSON instead of a table.
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one named check and print its certificate as JSON.
    Check {
        #[arg(long, allow_hyphen_values = true)]
        a: BigInt,
        #[arg(long, allow_hyphen_values = true)]
        u: BigInt,
        check: CheckName,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate the rank-2 classification for a range of a.
    Scan {
        #[arg(long, num_args = 2, value_names = ["A_MIN", "A_MAX"], allow_hyphen_values = true)]
        a: Vec<BigInt>,
        /// Attach lattice certificates to every constructive row.
        #[arg(long)]
        verify: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Worker threads (0 = one per core).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the c1^2 bounds for rank-r Ulrich bundles on a degree-2a K3.
    Bounds {
        #[arg(long, allow_hyphen_values = true)]
        a: BigInt,
        #[arg(long, allow_hyphen_values = true)]
        r: BigInt,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckName {
    VeryAmple,
    UlrichLines,
    Discriminants,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

enum Failure {
    Usage(String),
    Io(anyhow::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)
            .with_context(|| format!("writing {}", path.display()))
            .map_err(Failure::Io),
        None => io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .context("writing to stdout")
            .map_err(Failure::Io),
    }
}

fn verdict_code(pass: bool) -> u8 {
    if pass {
        0
    } else {
        EXIT_FAIL
    }
}

fn lattice_table(lattice: &GramLattice) -> String {
    let gram = lattice.gram();
    let width = gram.iter().flatten().map(|v| v.to_string().len()).max().unwrap_or(1);
    let mut text = String::new();
    if let Some(p) = lattice.params() {
        text.push_str(&format!("lattice M(a={}, u={})\n", p.a, p.u));
    }
    text.push_str("gram (basis h, A, B):\n");
    for row in gram {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:>width$}")).collect();
        text.push_str(&format!("  [ {} ]\n", cells.join("  ")));
    }
    let sig = lattice.inertia();
    text.push_str(&format!("even: {}\n", lattice.is_even()));
    text.push_str(&format!("determinant: {}\n", lattice.determinant()));
    text.push_str(&format!(
        "signature: {sig} (positive, negative, zero){}\n",
        if sig.is_hyperbolic() { "" } else { "  not (1, 2, 0)" }
    ));
    text
}

fn run_check(a: &BigInt, u: &BigInt, check: CheckName) -> Result<Certificate, Failure> {
    let lattice = GramLattice::k3(a.clone(), u.clone())?;
    let ill_posed = |name: &str, e: Error| -> Result<Certificate, Failure> {
        match e {
            Error::IllPosedQuery(msg) => Ok(Certificate::new(name, Verdict::Fail)
                .int_param("a", a)
                .int_param("u", u)
                .param("error", msg)
                .param("signature", lattice.inertia())),
            other => Err(other.into()),
        }
    };
    match check {
        CheckName::VeryAmple => match certify_very_ample(&lattice) {
            Ok(cert) => Ok(cert.to_certificate()),
            Err(e) => ill_posed("very-ample", e),
        },
        CheckName::UlrichLines => match ulrich_lines_certificate(&lattice) {
            Ok(cert) => Ok(cert),
            Err(e) => ill_posed("ulrich-lines", e),
        },
        CheckName::Discriminants => {
            let cert = discriminant_certificate(a, &(a * 4u32 - 2u32), &(a * 5u32 + 2u32))?;
            Ok(cert.int_param("u", u))
        }
    }
}

fn bounds_table(a: &BigInt, r: &BigInt) -> Result<String, Failure> {
    let b = chern_bounds(a, r)?;
    let excluded = if b.excluded.is_empty() {
        "none".to_owned()
    } else {
        b.excluded.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
    };
    let rows = [
        ("a", b.a.to_string()),
        ("r", b.r.to_string()),
        ("lower  4(a-1)r^2", b.lower.to_string()),
        ("upper  (9/2)ar^2", b.upper.to_string()),
        ("simple lower  (4a-2)r^2-2", b.simple_lower.to_string()),
        ("excluded", excluded),
        ("even only", b.even_only.to_string()),
        ("equality", b.equality_condition.clone()),
    ];
    let mut text = format!("{} <= c1^2 <= {}\n", b.lower, b.upper);
    for (k, v) in rows {
        text.push_str(&format!("{k:<28}{v}\n"));
    }
    Ok(text)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Lattice { a, u, json, out } => {
            let lattice = GramLattice::k3(a, u)?;
            let text = if json {
                to_sorted_json(&lattice)
            } else {
                lattice_table(&lattice)
            };
            emit(out.as_ref(), &text)?;
            Ok(verdict_code(lattice.inertia().is_hyperbolic()))
        }
        Command::Check { a, u, check, out } => {
            let cert = run_check(&a, &u, check)?;
            emit(out.as_ref(), &cert.to_json())?;
            Ok(verdict_code(cert.passed()))
        }
        Command::Scan {
            a,
            verify,
            format,
            jobs,
            out,
        } => {
            let [a_min, a_max] = <[BigInt; 2]>::try_from(a)
                .map_err(|_| Failure::Usage("--a takes A_MIN A_MAX".into()))?;
            let report = scan_rank2(&a_min, &a_max, verify, jobs)?;
            let text = match format {
                Format::Json => report.to_json(),
                Format::Csv => report.to_csv(),
            };
            emit(out.as_ref(), &text)?;
            Ok(verdict_code(report.failures.is_empty()))
        }
        Command::Bounds { a, r, json, out } => {
            let text = if json {
                to_sorted_json(&chern_bounds(&a, &r)?)
            } else {
                bounds_table(&a, &r)?
            };
            emit(out.as_ref(), &text)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_IO)
        }
    }
}
