use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use sympmaj::gen::{self, GeneratorConfig, SpectrumMode};
use sympmaj::io::{matrix_to_json, matrix_to_text, parse_matrix, parse_vector};
use sympmaj::majorization::{default_tolerance, doubly_stochastic_witness};
use sympmaj::schur_horn::DEFAULT_TOL;
use sympmaj::{
    check_majorization, check_theorem_1, check_theorem_2, check_theorem_3, diagnostic_vectors,
    is_orthosymplectically_diagonalizable, symplectic_eigenvalues, williamson_decompose,
    BlockPartition, RealMatrix, SaturationVerdict, SpdMatrix,
};
use sympmaj_cli::report::analyze;
use sympmaj_cli::suites::{self, EnsembleSizes, SuiteConfig, DEFAULT_SEED};
use sympmaj_cli::CliError;

#[derive(Parser)]
#[command(
    name = "sympmaj",
    version,
    about = "Symplectic spectra, Williamson forms and majorization checks"
)]
struct Cli {
    /// Decision tolerance (relative)
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum RelationArg {
    C,
    S,
    W,
    H,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Spd,
    Symplectic,
    Orthosymplectic,
    Prescribed,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Generic,
    Orthosymplectic,
}

#[derive(Subcommand)]
enum Command {
    /// Symplectic eigenvalues, ascending
    Spectrum { file: PathBuf },
    /// Williamson decomposition MᵀAM = D ⊕ D
    Williamson { file: PathBuf },
    /// Diagonal-versus-spectrum relations and their saturation criteria
    SchurHorn {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = RelationArg::All)]
        relation: RelationArg,
    },
    /// Majorization report of x against y, optionally with a witness
    Majorize {
        /// File path or inline list
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        witness: bool,
    },
    /// s-pinching relation for a block partition
    Pinch {
        file: PathBuf,
        #[arg(long)]
        partition: String,
    },
    /// Write a seeded random matrix
    Gen {
        #[arg(long, value_enum)]
        kind: Kind,
        /// Half dimension; inferred from --spectrum for prescribed matrices
        #[arg(long)]
        n: Option<usize>,
        /// Symplectic spectrum for --kind prescribed
        #[arg(long)]
        spectrum: Option<String>,
        #[arg(long, value_enum, default_value_t = Mode::Generic)]
        mode: Mode,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Full analysis bundle
    Report {
        file: PathBuf,
        /// Block sizes m1,m2,...; defaults to all ones
        #[arg(long)]
        partition: Option<String>,
    },
    /// Run every property suite on seeded ensembles
    Verify {
        /// Override every ensemble size
        #[arg(long)]
        ensemble: Option<usize>,
    },
}

type CliResult<T> = Result<T, CliError>;

fn read_input(path: &Path) -> CliResult<Vec<u8>> {
    if path == Path::new("-") {
        let mut buf = Vec::new();
        std::io::stdin()
            .read_to_end(&mut buf)
            .map_err(|e| CliError::Input(format!("stdin: {e}")))?;
        return Ok(buf);
    }
    std::fs::read(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load_spd(path: &Path) -> CliResult<(Vec<u8>, SpdMatrix)> {
    let bytes = read_input(path)?;
    let text = std::str::from_utf8(&bytes)
        .map_err(|e| CliError::Input(format!("input is not UTF-8: {e}")))?;
    let m = parse_matrix(text)?;
    Ok((bytes, SpdMatrix::new(m)?))
}

/// A vector argument: a readable file, else an inline list.
fn load_vector(arg: &str) -> CliResult<Vec<f64>> {
    let path = Path::new(arg);
    if path.is_file() {
        let text =
            std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{arg}: {e}")))?;
        Ok(parse_vector(&text)?)
    } else {
        Ok(parse_vector(arg)?)
    }
}

fn parse_partition(arg: &str, n: usize) -> CliResult<BlockPartition> {
    let parts = arg
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|e| CliError::Input(format!("partition entry {t:?}: {e}")))
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(BlockPartition::new(parts, n)?)
}

fn rows(m: &RealMatrix) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| m.row(i).iter().copied().collect())
        .collect()
}

fn print_json<T: Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("reports hold finite numbers")
    );
}

fn fmt_vec(v: &[f64]) -> String {
    v.iter()
        .map(|x| format!("{x}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn verdict_line(v: &SaturationVerdict) -> String {
    format!(
        "{:<9} weak={} majorized={} criterion={} consistent={}{}",
        v.relation_id.as_str(),
        v.weak_holds,
        v.majorization_holds,
        v.criterion,
        v.consistent,
        if v.borderline { " (borderline)" } else { "" }
    )
}

fn run(cli: Cli) -> CliResult<()> {
    let tol = cli.tol.unwrap_or(DEFAULT_TOL);
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(CliError::Input(format!(
            "--tol must be positive, got {tol}"
        )));
    }
    let text = cli.format == Format::Text;
    match cli.command {
        Command::Spectrum { file } => {
            let (_, a) = load_spd(&file)?;
            let d = symplectic_eigenvalues(&a)?;
            if text {
                println!("{}", fmt_vec(d.values()));
            } else {
                print_json(&json!({ "d_s": d.values() }));
            }
        }
        Command::Williamson { file } => {
            let (_, a) = load_spd(&file)?;
            let w = williamson_decompose(&a)?;
            if text {
                println!("d: {}", fmt_vec(w.d.values()));
                print!("M:\n{}", matrix_to_text(w.m.as_matrix()));
                println!("diagonalization residual: {:e}", w.diag_residual);
                println!("symplectic residual: {:e}", w.m.residual());
            } else {
                print_json(&json!({
                    "d": w.d.values(),
                    "M": rows(w.m.as_matrix()),
                    "residuals": {
                        "diagonalization": w.diag_residual,
                        "symplectic": w.m.residual(),
                    },
                }));
            }
        }
        Command::SchurHorn { file, relation } => {
            let (_, a) = load_spd(&file)?;
            let d = symplectic_eigenvalues(&a)?;
            let t1 = check_theorem_1(&a, tol)?;
            let t2 = check_theorem_2(&a, tol)?;
            let cert = is_orthosymplectically_diagonalizable(&a, tol)?;
            let selected: Vec<SaturationVerdict> = match relation {
                RelationArg::S => vec![t1.verdict.clone()],
                RelationArg::C => vec![t2.c.clone()],
                RelationArg::W => vec![t2.w.clone()],
                RelationArg::H => vec![t2.h.clone()],
                RelationArg::All => {
                    vec![t1.verdict.clone(), t2.c.clone(), t2.w.clone(), t2.h.clone()]
                }
            };
            if text {
                println!("d_s: {}", fmt_vec(d.values()));
                for v in &selected {
                    println!("{}", verdict_line(v));
                }
                println!("trace gap: {:e}", cert.trace_gap);
                println!("commutator norm: {:e}", cert.commutator_norm);
            } else {
                print_json(&json!({
                    "d_s": d.values(),
                    "deltas": diagnostic_vectors(&a),
                    "verdicts": selected,
                    "trace_gap": cert.trace_gap,
                    "commutator_norm": cert.commutator_norm,
                    "certificate": cert,
                    "scaling_identities": t1.identities,
                }));
            }
        }
        Command::Majorize { x, y, witness } => {
            let x = load_vector(&x)?;
            let y = load_vector(&y)?;
            let mtol = cli.tol.unwrap_or_else(|| default_tolerance(&y));
            let report = check_majorization(&x, &y, mtol)?;
            let (w, w_err) = if witness {
                match doubly_stochastic_witness(&x, &y) {
                    Ok(w) => (Some(w), None),
                    Err(e) => (None, Some(e.to_string())),
                }
            } else {
                (None, None)
            };
            if text {
                println!("weakly supermajorized: {}", report.weakly_supermajorized);
                println!("majorized: {}", report.majorized);
                println!("min slack: {:e}", report.min_slack());
                if let Some(w) = &w {
                    print!("E:\n{}", matrix_to_text(&w.e));
                }
                if let Some(e) = &w_err {
                    println!("no witness: {e}");
                }
            } else {
                let witness_json = w.map(|w| {
                    json!({
                        "E": rows(&w.e),
                        "row_residual": w.row_residual,
                        "col_residual": w.col_residual,
                        "map_residual": w.map_residual,
                        "transforms": w.transforms,
                    })
                });
                let mut out = json!({ "report": report });
                if witness {
                    out["witness"] = witness_json.unwrap_or(Value::Null);
                    if let Some(e) = w_err {
                        out["witness_error"] = Value::String(e);
                    }
                }
                print_json(&out);
            }
        }
        Command::Pinch { file, partition } => {
            let (_, a) = load_spd(&file)?;
            let partition = parse_partition(&partition, a.n())?;
            let check = check_theorem_3(&a, &partition, tol)?;
            let mut ds_pinched = check.ds_pinched.clone();
            ds_pinched.sort_by(f64::total_cmp);
            let v = &check.verdict;
            if text {
                println!("partition: {:?}", check.partition);
                println!("d_s(pinched): {}", fmt_vec(&ds_pinched));
                println!("d_s: {}", fmt_vec(&check.ds));
                println!("{}", verdict_line(v));
                println!("trace ledger residual: {:e}", check.trace_ledger.residual);
            } else {
                print_json(&json!({
                    "partition": check.partition,
                    "ds_pinched": ds_pinched,
                    "ds": check.ds,
                    "weak": v.weak_holds,
                    "majorized": v.majorization_holds,
                    "criterion": v.criterion,
                    "consistent": v.consistent,
                    "borderline": v.borderline,
                    "trace_ledger": check.trace_ledger,
                    "residuals": {
                        "pinched_diagonalization": check.pinched_diag_residual,
                        "symplectic": check.symplectic_residual,
                    },
                }));
            }
        }
        Command::Gen {
            kind,
            n,
            spectrum,
            mode,
            out,
        } => {
            let spectrum = spectrum.as_deref().map(parse_vector).transpose()?;
            let n = match (n, &spectrum) {
                (Some(n), _) => n,
                (None, Some(d)) => d.len(),
                (None, None) => return Err(CliError::Input("--n is required".into())),
            };
            let cfg = GeneratorConfig::new(n, cli.seed);
            let m = match kind {
                Kind::Spd => gen::random_spd(&cfg)?.into_matrix(),
                Kind::Symplectic => gen::random_symplectic(&cfg)?.into_matrix(),
                Kind::Orthosymplectic => gen::random_orthosymplectic(&cfg)?.into_matrix(),
                Kind::Prescribed => {
                    let d = spectrum.ok_or_else(|| {
                        CliError::Input("--kind prescribed needs --spectrum".into())
                    })?;
                    let mode = match mode {
                        Mode::Generic => SpectrumMode::Generic,
                        Mode::Orthosymplectic => SpectrumMode::Orthosymplectic,
                    };
                    gen::spd_with_spectrum(&d, mode, &cfg)?.into_matrix()
                }
            };
            let body = if text {
                matrix_to_text(&m)
            } else {
                matrix_to_json(&m) + "\n"
            };
            match out {
                Some(path) => std::fs::write(&path, body)
                    .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?,
                None => print!("{body}"),
            }
        }
        Command::Report { file, partition } => {
            let (bytes, a) = load_spd(&file)?;
            let partition = match partition {
                Some(p) => parse_partition(&p, a.n())?,
                None => BlockPartition::unit(a.n()),
            };
            let report = analyze(&bytes, &a, &partition, tol)?;
            if text {
                println!("input: sha256 {}", report.input_digest);
                println!("n: {}", report.n);
                println!("d_s: {}", fmt_vec(&report.d_s));
                println!("partition: {:?}", report.partition);
                for v in &report.verdicts {
                    println!("{}", verdict_line(v));
                }
                for (k, v) in &report.residuals {
                    println!("residual {k}: {v:e}");
                }
            } else {
                print_json(&report);
            }
        }
        Command::Verify { ensemble } => {
            let sizes = ensemble.map(EnsembleSizes::uniform).unwrap_or_default();
            if sizes.total() == 0 {
                eprintln!("warning: empty ensembles, every suite passes vacuously");
            }
            let cfg = SuiteConfig {
                seed: cli.seed,
                tol,
                sizes,
            };
            let outcomes = suites::run_all(&cfg);
            let passed = outcomes.iter().all(|o| o.passed);
            if text {
                for o in &outcomes {
                    println!("{}", o.summary_line());
                }
                println!(
                    "{}",
                    if passed {
                        "all suites passed"
                    } else {
                        "verification FAILED"
                    }
                );
            } else {
                print_json(&json!({
                    "seed": cfg.seed,
                    "tol": cfg.tol,
                    "sizes": cfg.sizes,
                    "passed": passed,
                    "suites": outcomes,
                }));
            }
            if !passed {
                for o in outcomes.iter().filter(|o| !o.passed) {
                    eprintln!("{} failed; replay instance:", o.name);
                    eprintln!(
                        "{}",
                        serde_json::to_string(&o.failure).expect("finite instance")
                    );
                }
                return Err(CliError::VerifyFailed);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !matches!(e, CliError::VerifyFailed) {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
