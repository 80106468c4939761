use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use rees_core::diff_ops::diff_saturate;
use rees_core::equivalence_lab::{weak_equiv_fuzz, DEFAULT_BUDGET, DEFAULT_DEPTH};
use rees_core::exact_poly::parse_point;
use rees_core::resolution_driver::{resolve_scenario, ProviderFile, Scenario};
use rees_core::rees_core::Payload;
use rees_core::tau_ridge::ridge_and_tau;
use rees_core::{Field, FieldSpec, PrimeField, Rationals};

#[derive(Parser)]
#[command(name = "rees", version, about = "Exact resolution invariants for couples and Rees algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the γ loop and print the trace as JSON.
    Resolve {
        scenario: PathBuf,
        /// Elimination table; overrides the one named in the scenario.
        #[arg(long)]
        provider: Option<PathBuf>,
        #[arg(long, default_value_t = 50)]
        max_steps: usize,
        /// Work over F_p instead of the scenario's field (0 for Q).
        #[arg(long = "char")]
        characteristic: Option<u64>,
    },
    /// Print the Diff-saturation of the scenario payload.
    Diffsat {
        scenario: PathBuf,
        #[arg(long = "char")]
        characteristic: Option<u64>,
    },
    /// Print the per-step satellite records of the resolution as JSON.
    Trace {
        scenario: PathBuf,
        #[arg(long)]
        provider: Option<PathBuf>,
        #[arg(long, default_value_t = 50)]
        max_steps: usize,
        #[arg(long = "char")]
        characteristic: Option<u64>,
    },
    /// Print τ, the linear forms of L_C and flagged generators at a point.
    Tau {
        scenario: PathBuf,
        /// Comma-separated coordinates; defaults to the scenario's point or the origin.
        #[arg(long)]
        point: Option<String>,
        #[arg(long = "char")]
        characteristic: Option<u64>,
    },
    /// Search for a local sequence separating the payload from `compare`
    /// (or from its Diff-saturation when `compare` is absent).
    EquivFuzz {
        scenario: PathBuf,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        #[arg(long = "char")]
        characteristic: Option<u64>,
    },
}

/// Runs `$body` with `$field` bound to the concrete field of `$spec`.
macro_rules! with_field {
    ($spec:expr, |$field:ident| $body:expr) => {
        match $spec {
            FieldSpec::Rationals => {
                let $field = &Rationals;
                $body
            }
            FieldSpec::Prime(p) => {
                let $field = &PrimeField::new(p)?;
                $body
            }
        }
    };
}

fn load_scenario(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(Scenario::from_json(&text)?)
}

fn field_of(scenario: &Scenario, characteristic: Option<u64>) -> Result<FieldSpec> {
    Ok(match characteristic {
        None => scenario.field_spec()?,
        Some(0) => FieldSpec::Rationals,
        Some(p) => FieldSpec::Prime(p),
    })
}

fn load_provider(scenario: &Scenario, path: &Path, explicit: Option<&Path>) -> Result<Option<ProviderFile>> {
    if let Some(p) = explicit {
        let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
        return Ok(Some(ProviderFile::from_json(&text)?));
    }
    let base = path.parent().unwrap_or(Path::new("."));
    Ok(scenario.provider_file(base)?)
}

fn print_line(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{text}").and_then(|_| out.flush()) {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        other => Ok(other?),
    }
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<()> {
    print_line(&serde_json::to_string_pretty(value)?)
}

fn diffsat<K: Field>(field: &K, scenario: &Scenario) -> Result<()> {
    let obj = scenario.object(field)?;
    let sat = diff_saturate(&obj.payload.to_rees());
    print_line(&Payload::Rees(sat).render(obj.names()))
}

fn tau<K: Field>(field: &K, scenario: &Scenario, point: Option<&str>) -> Result<()> {
    let obj = scenario.object(field)?;
    let x = match point.or(scenario.point.as_deref()) {
        Some(text) => parse_point(field, text)?,
        None => vec![field.zero(); obj.nvars()],
    };
    if x.len() != obj.nvars() {
        bail!("point has {} coordinates, the chart has {}", x.len(), obj.nvars());
    }
    let ridge = ridge_and_tau(&obj.payload.to_rees(), &x)?;
    print_json(&ridge.report(obj.names()))
}

fn equiv_fuzz<K: Field>(field: &K, scenario: &Scenario, depth: usize, budget: usize) -> Result<()> {
    let a = scenario.object(field)?;
    let b = match scenario.compare_object(field)? {
        Some(b) => b,
        None => {
            let mut b = a.clone();
            b.payload = Payload::Rees(diff_saturate(&a.payload.to_rees()));
            b
        }
    };
    print_json(&weak_equiv_fuzz(&a, &b, depth, budget)?.report())
}

fn run() -> Result<ExitCode> {
    let cli = Cli::parse();
    match cli.command {
        Command::Resolve { scenario, provider, max_steps, characteristic } => {
            let s = load_scenario(&scenario)?;
            let table = load_provider(&s, &scenario, provider.as_deref())?;
            let code = with_field!(field_of(&s, characteristic)?, |field| {
                let res = resolve_scenario(field, &s, table.as_ref(), max_steps)?;
                print_json(&res.trace)?;
                res.trace.exit_code()
            });
            Ok(ExitCode::from(code as u8))
        }
        Command::Trace { scenario, provider, max_steps, characteristic } => {
            let s = load_scenario(&scenario)?;
            let table = load_provider(&s, &scenario, provider.as_deref())?;
            let code = with_field!(field_of(&s, characteristic)?, |field| {
                let res = resolve_scenario(field, &s, table.as_ref(), max_steps)?;
                let records = res.trace.satellite_records();
                print_json(&records)?;
                res.trace.exit_code()
            });
            Ok(ExitCode::from(code as u8))
        }
        Command::Diffsat { scenario, characteristic } => {
            let s = load_scenario(&scenario)?;
            with_field!(field_of(&s, characteristic)?, |field| diffsat(field, &s))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Tau { scenario, point, characteristic } => {
            let s = load_scenario(&scenario)?;
            with_field!(field_of(&s, characteristic)?, |field| tau(field, &s, point.as_deref()))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::EquivFuzz { scenario, depth, budget, characteristic } => {
            let s = load_scenario(&scenario)?;
            with_field!(field_of(&s, characteristic)?, |field| equiv_fuzz(field, &s, depth, budget))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
