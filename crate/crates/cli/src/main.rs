mod error;

use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use hfd_core::arith::{omega_check, Rational, DEFAULT_ENTRY_BOUND, DEFAULT_MAX_LEN};
use hfd_core::cfk::{self, CFKComplex};
use hfd_core::knots::{
    surgery_d_table_lspace, torsion_coeffs, validate_lspace_alexander, AlexanderPoly,
};
use hfd_core::lens::{lens_d_table_with, LensSpace};
use hfd_core::obstruct::{lspace_u_plus_obstruction, whitehead_cable_obstruction, Verdict};
use hfd_core::plumbing::{d_table_plumbing_with, MaximizeOptions, PlumbedTree, TreeJson};
use hfd_core::DTable;

use error::CliError;

#[derive(Parser)]
#[command(
    name = "hfd",
    version,
    about = "Correction terms and signed unknotting obstructions"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    /// Extra width of the lattice search box.
    #[arg(long, global = true, default_value_t = 1)]
    slack: u32,
    /// Worker threads for lattice maximization.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Continued fraction witness for a slope.
    Omega {
        #[arg(allow_hyphen_values = true)]
        slope: String,
    },
    /// d-invariants of L(p,q), the result of p/q surgery on the unknot.
    Lens {
        #[arg(allow_hyphen_values = true)]
        p: i64,
        q: i64,
    },
    /// d-invariants of the boundary of a plumbing tree (JSON file, or - for stdin).
    Plumb { tree: String },
    /// Torsion coefficients of an Alexander polynomial (- reads stdin).
    Torsion {
        #[arg(allow_hyphen_values = true)]
        delta: String,
    },
    /// d-invariants of p-surgery on an L-space knot.
    Surgery {
        #[arg(allow_hyphen_values = true)]
        delta: String,
        p: i64,
    },
    /// Inspect a CFK complex (JSON file, or - for stdin).
    Cfk {
        complex: String,
        #[arg(long, conflicts_with_all = ["tau", "reduce"])]
        d1: bool,
        #[arg(long, conflicts_with = "reduce")]
        tau: bool,
        #[arg(long)]
        reduce: bool,
    },
    /// Signed unknotting obstructions.
    #[command(subcommand)]
    Obstruct(Obstruct),
    /// Check a proposition on a complex.
    #[command(subcommand)]
    Verify(Verify),
}

#[derive(Subcommand)]
enum Obstruct {
    /// u_+ of a knot with a positive L-space surgery.
    Lspace {
        #[arg(allow_hyphen_values = true)]
        delta: String,
        /// Surgery coefficient; defaults to max(2g-1, 1).
        #[arg(long)]
        h: Option<i64>,
    },
    /// u_+ of the (p,1)-cable of a Whitehead double.
    Cable { p: i64 },
}

#[derive(Subcommand)]
enum Verify {
    /// d(S^3_1, s_0) = -2 for complexes with the Lan properties and tau = 1.
    #[command(name = "prop-a1")]
    PropA1 { complex: String },
}

fn read_input(arg: &str) -> Result<String, CliError> {
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(arg).map_err(|e| CliError::Invalid(format!("{arg}: {e}")))
    }
}

fn read_poly(arg: &str) -> Result<AlexanderPoly, CliError> {
    let text = if arg == "-" {
        read_input(arg)?
    } else {
        arg.to_string()
    };
    Ok(AlexanderPoly::parse(&text)?)
}

fn read_complex(arg: &str) -> Result<CFKComplex, CliError> {
    Ok(CFKComplex::parse_json(&read_input(arg)?)?)
}

fn emit<T: Serialize>(
    json: bool,
    value: &T,
    human: impl FnOnce() -> String,
) -> Result<(), CliError> {
    if json {
        println!("{}", serde_json::to_string(value)?);
    } else {
        print!("{}", human());
    }
    Ok(())
}

fn emit_table(json: bool, table: &DTable) -> Result<(), CliError> {
    emit(json, &table.to_json(), || table.to_string())
}

fn verdict_text(v: &Verdict) -> String {
    let c = &v.certificate;
    let mut out = format!("{}\nslope {} via {}\n", v.status, v.slope, c.lens);
    let witness: Vec<String> = c.witness.iter().map(|a| a.to_string()).collect();
    out += &format!("witness [{}]\n", witness.join(","));
    match &c.map {
        Some(m) => out += &format!("affine map {m}\n"),
        None => out += &format!("no affine map among {} candidates\n", c.maps_checked),
    }
    out += &format!("unit-one search: {}\n", c.unit_one_status);
    out
}

fn run(cli: Cli) -> Result<(), CliError> {
    let Global { json, slack, jobs } = cli.global;
    let opts = MaximizeOptions {
        slack,
        jobs: jobs.max(1),
        ..MaximizeOptions::default()
    };
    match cli.command {
        Command::Omega { slope } => {
            let r: Rational = slope.parse()?;
            let w = omega_check(r, DEFAULT_MAX_LEN, DEFAULT_ENTRY_BOUND).ok_or_else(|| {
                CliError::Precondition(format!("no admissible continued fraction found for {r}"))
            })?;
            emit(json, &w, || {
                format!(
                    "{} = {}\nexceptions {:?}\n",
                    w.slope, w.cf, w.exception_indices
                )
            })
        }
        Command::Lens { p, q } => {
            let table = lens_d_table_with(&LensSpace::new(p, q)?, &opts)?;
            emit_table(json, &table)
        }
        Command::Plumb { tree } => {
            let parsed: TreeJson = serde_json::from_str(&read_input(&tree)?)?;
            let table = d_table_plumbing_with(&PlumbedTree::from_json(&parsed)?, &opts)?;
            emit_table(json, &table)
        }
        Command::Torsion { delta } => {
            let delta = read_poly(&delta)?;
            let t = torsion_coeffs(&delta)?;
            let report = validate_lspace_alexander(&delta);
            #[derive(Serialize)]
            struct Out<'a> {
                polynomial: String,
                torsion: &'a [i64],
                lspace: &'a hfd_core::knots::LSpaceReport,
            }
            let out = Out {
                polynomial: delta.to_string(),
                torsion: &t.values,
                lspace: &report,
            };
            emit(json, &out, || {
                let mut s = String::new();
                for (i, v) in t.values.iter().enumerate() {
                    s += &format!("t_{i} = {v}\n");
                }
                s += match report.message.as_deref() {
                    None => "L-space form: yes\n".to_string(),
                    Some(m) => format!("L-space form: no ({m})\n"),
                }
                .as_str();
                s
            })
        }
        Command::Surgery { delta, p } => {
            let table = surgery_d_table_lspace(&read_poly(&delta)?, p)?;
            emit_table(json, &table)
        }
        Command::Cfk {
            complex,
            d1,
            tau,
            reduce,
        } => {
            let c = read_complex(&complex)?;
            if reduce {
                let r = cfk::reduce(&c)?;
                println!("{}", serde_json::to_string(&r.to_json())?);
                return Ok(());
            }
            if d1 {
                let d = cfk::d_one(&c)?;
                return emit(json, &serde_json::json!({ "d_one": d }), || {
                    format!("{d}\n")
                });
            }
            if tau {
                let t = cfk::tau(&c)?;
                return emit(json, &serde_json::json!({ "tau": t }), || format!("{t}\n"));
            }
            let report = c.validate();
            if !report.passed {
                emit(json, &report, || format!("invalid: {}\n", report.summary()))?;
                return Err(CliError::Invalid(report.summary()));
            }
            let hat = cfk::homology_total(&c, cfk::Region::Column(0), None)?;
            let out = serde_json::json!({
                "validation": report,
                "generators": c.len(),
                "arrows": c.arrow_count(),
                "genus_bound": c.genus_bound(),
                "hf_hat": hat,
                "tau": cfk::tau(&c).ok(),
                "d_one": cfk::d_one(&c).ok(),
            });
            emit(json, &out, || {
                let mut s = format!(
                    "valid complex: {} generators, {} arrows, |A| <= {}\n",
                    c.len(),
                    c.arrow_count(),
                    c.genus_bound()
                );
                s += &format!("H(C{{i=0}}): {:?}\n", hat.0);
                if let Ok(t) = cfk::tau(&c) {
                    s += &format!("tau = {t}\n");
                }
                if let Ok(d) = cfk::d_one(&c) {
                    s += &format!("d(S^3_1, s_0) = {d}\n");
                }
                s
            })
        }
        Command::Obstruct(Obstruct::Lspace { delta, h }) => {
            let v = lspace_u_plus_obstruction(&read_poly(&delta)?, h)?;
            emit(json, &v, || verdict_text(&v))
        }
        Command::Obstruct(Obstruct::Cable { p }) => {
            let v = whitehead_cable_obstruction(p)?;
            emit(json, &v, || verdict_text(&v))
        }
        Command::Verify(Verify::PropA1 { complex }) => {
            let c = read_complex(&complex)?;
            let r = cfk::verify_prop_c(&c)?;
            emit(json, &r, || {
                format!(
                    "{}\nd(S^3_1, s_0) = {}\ntau = {}\nrho = {}\nwitness [{}, {}, {}] in grading {}, nonzero in H(C{{max(i,j)>=0}}): {}\n",
                    if r.passed { "PASS" } else { "FAIL" },
                    r.d_one,
                    r.tau,
                    r.lan.rho.as_deref().unwrap_or("-"),
                    r.witness.name,
                    r.witness.i,
                    r.witness.j,
                    r.witness.gr,
                    r.witness_nonzero
                )
            })?;
            if r.passed {
                Ok(())
            } else {
                Err(CliError::Failed("witness is zero in the quotient".into()))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
