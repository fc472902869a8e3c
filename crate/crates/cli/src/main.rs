//! `hyperc`: simulate, compile and verify real, complex and quaternionic circuits.
//!
//! JSON goes to stdout (or `--out`), everything else to stderr.
//!
//! Exit codes: 0 ok, 1 verification failed, 2 parse error, 3 invalid
//! evaluation order, 4 non-unitary gate, 5 incompatible embedding,
//! 6 unknown demo.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hypercircuit::demos::{
    commitment_report, order_witness, ordering_spread, CommitmentGates, WITNESS_FIXTURES,
};
use hypercircuit::embed::{compiled_statistics, Embedding};
use hypercircuit::io::{
    circuit_to_json, compiled_to_json, parse_circuit_default, AnyCircuit, CircuitFile,
};
use hypercircuit::verify::{run_suite, SuiteConfig};
use hypercircuit::{
    compile, measure_all, run, Circuit, CompileOptions, Domain, EmbeddingKind, Error, GateId,
    OrderedCircuit, Quaternion, Scalar, SortMode, StateVector, TopInit,
};
use serde_json::{json, Value};

const DEFAULT_CAP: usize = 1000;

#[derive(Parser)]
#[command(
    name = "hyperc",
    version,
    about = "Real, complex and quaternionic circuit toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a circuit on |0…0⟩ and print the output distribution.
    Simulate(SimulateArgs),
    /// Compile a circuit through an embedding.
    Compile(CompileArgs),
    /// Run the verification suite.
    Verify(VerifyArgs),
    /// Run a named demo: ordering or commitment.
    Demo(DemoArgs),
    /// List topological sorts of a circuit.
    Sorts(SortsArgs),
}

#[derive(Args)]
struct Output {
    /// Write JSON here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    input: PathBuf,
    /// `default`, `all`, or comma-separated gate ids.
    #[arg(long)]
    sigma: Option<String>,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: usize,
    /// Compile first and report the bottom-wire marginal.
    #[arg(long)]
    embedding: Option<String>,
    /// Top-wire initialization for `--embedding`: zero, one or mixed.
    #[arg(long, default_value = "zero")]
    top_init: String,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct CompileArgs {
    #[arg(long)]
    input: PathBuf,
    /// h, hhat or shat.
    #[arg(long)]
    embedding: String,
    /// `default` or comma-separated gate ids.
    #[arg(long)]
    sigma: Option<String>,
    /// Embed real gates under h like any other gate.
    #[arg(long)]
    no_real_shortcut: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = SuiteConfig::default().seed)]
    seed: u64,
    #[arg(long, default_value_t = SuiteConfig::default().trials)]
    trials: usize,
    /// Threshold for compiled end-to-end checks.
    #[arg(long, default_value_t = SuiteConfig::default().tol)]
    tol: f64,
    #[arg(long, hide = true)]
    corrupt: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct DemoArgs {
    name: String,
    /// Circuit for the ordering demo instead of the built-in witness.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct SortsArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: usize,
    #[command(flatten)]
    output: Output,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidOrder(_) | Error::Cyclic | Error::CapExceeded(_) => 3,
            Error::NotUnitary { .. } => 4,
            Error::DomainMismatch { .. } => 5,
            Error::Parse(_)
            | Error::Dimension(_)
            | Error::NotSquare { .. }
            | Error::InvalidGate { .. }
            | Error::WireOutOfRange { .. } => 2,
            _ => 1,
        };
        Failure::new(code, e.to_string())
    }
}

type CliResult<T> = Result<T, Failure>;

fn read_circuit(path: &Path) -> CliResult<AnyCircuit> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::new(2, format!("{}: {e}", path.display())))?;
    Ok(parse_circuit_default(&text)?)
}

fn emit(output: &Output, value: &Value) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).expect("json");
    text.push('\n');
    match &output.out {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::new(1, format!("{}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_sigma(arg: Option<&str>, cap: usize) -> CliResult<Option<SortMode>> {
    Ok(match arg {
        None => None,
        Some("default") => Some(SortMode::Default),
        Some("all") => Some(SortMode::All { cap }),
        Some(list) => {
            let ids = list
                .split(',')
                .map(|s| s.trim().parse::<GateId>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| Failure::new(3, format!("invalid --sigma {list:?}")))?;
            Some(SortMode::Explicit(ids))
        }
    })
}

/// The `--sigma` choice, falling back to the file's σ, then the default order.
fn orders<D: Scalar>(file: &CircuitFile<D>, mode: Option<SortMode>) -> CliResult<Vec<Vec<GateId>>> {
    let mode = mode.unwrap_or_else(|| match &file.sigma {
        Some(s) => SortMode::Explicit(s.clone()),
        None => SortMode::Default,
    });
    Ok(file.circuit.topological_sorts(&mode)?)
}

fn single_order<D: Scalar>(
    file: &CircuitFile<D>,
    mode: Option<SortMode>,
) -> CliResult<OrderedCircuit<D>> {
    if matches!(mode, Some(SortMode::All { .. })) {
        return Err(Failure::new(
            3,
            "this command needs a single evaluation order",
        ));
    }
    let sigma = orders(file, mode)?.remove(0);
    Ok(OrderedCircuit::new(file.circuit.clone(), sigma)?)
}

fn lift_file<D: Scalar, E: Scalar>(file: &CircuitFile<D>) -> CliResult<CircuitFile<E>> {
    Ok(CircuitFile {
        circuit: file.circuit.lift()?,
        sigma: file.sigma.clone(),
    })
}

fn parse_embedding(name: &str) -> CliResult<EmbeddingKind> {
    EmbeddingKind::from_name(name).ok_or_else(|| {
        Failure::new(
            5,
            format!("unknown embedding {name:?}; use h, hhat or shat"),
        )
    })
}

fn mismatch(kind: EmbeddingKind, found: Domain) -> Failure {
    Error::DomainMismatch {
        embedding: kind.name(),
        expected: kind.source(),
        found,
    }
    .into()
}

fn simulate_file<D: Scalar>(file: &CircuitFile<D>, mode: Option<SortMode>) -> CliResult<Value> {
    let input = StateVector::basis(file.circuit.width(), 0);
    let results = orders(file, mode)?
        .into_iter()
        .map(|sigma| {
            let oc = OrderedCircuit::new(file.circuit.clone(), sigma)?;
            let dist = measure_all(&run(&oc, &input)?)?.to_json();
            Ok(json!({"sigma": oc.sigma(), "n": dist.n, "probs": dist.probs}))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(json!({"domain": D::DOMAIN.name(), "results": results}))
}

fn simulate_compiled<E: Embedding>(
    file: &CircuitFile<E::Upper>,
    mode: Option<SortMode>,
    top_init: TopInit,
) -> CliResult<Value> {
    let input = StateVector::basis(file.circuit.width(), 0);
    let results = orders(file, mode)?
        .into_iter()
        .map(|sigma| {
            let oc = OrderedCircuit::new(file.circuit.clone(), sigma)?;
            let cc = compile::<E>(&oc, CompileOptions::default())?;
            let dist = compiled_statistics::<E>(&cc, &input, top_init)?.to_json();
            Ok(json!({"sigma": oc.sigma(), "n": dist.n, "probs": dist.probs}))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(json!({
        "domain": E::Lower::DOMAIN.name(),
        "embedding": E::KIND.name(),
        "top_init": top_init.name(),
        "results": results,
    }))
}

fn cmd_simulate(args: &SimulateArgs) -> CliResult<()> {
    let circuit = read_circuit(&args.input)?;
    let mode = parse_sigma(args.sigma.as_deref(), args.cap)?;
    let value = match args.embedding.as_deref() {
        None => match &circuit {
            AnyCircuit::Real(f) => simulate_file(f, mode)?,
            AnyCircuit::Complex(f) => simulate_file(f, mode)?,
            AnyCircuit::Quaternion(f) => simulate_file(f, mode)?,
        },
        Some(name) => {
            let kind = parse_embedding(name)?;
            let top_init = TopInit::from_name(&args.top_init).ok_or_else(|| {
                Failure::new(2, format!("unknown --top-init {:?}", args.top_init))
            })?;
            use hypercircuit::{
                ComplexToReal as H, QuaternionToComplex as HHat, QuaternionToReal as SHat,
            };
            match (kind, &circuit) {
                (EmbeddingKind::H, AnyCircuit::Real(f)) => {
                    simulate_compiled::<H>(&lift_file(f)?, mode, top_init)?
                }
                (EmbeddingKind::H, AnyCircuit::Complex(f)) => {
                    simulate_compiled::<H>(f, mode, top_init)?
                }
                (EmbeddingKind::H, c) => return Err(mismatch(kind, c.domain())),
                (EmbeddingKind::HHat, c) => {
                    simulate_compiled::<HHat>(&quaternion_file(c)?, mode, top_init)?
                }
                (EmbeddingKind::SHat, c) => {
                    simulate_compiled::<SHat>(&quaternion_file(c)?, mode, top_init)?
                }
            }
        }
    };
    let count = value["results"].as_array().map_or(0, Vec::len);
    eprintln!("simulated {} order(s) of {}", count, args.input.display());
    emit(&args.output, &value)
}

fn quaternion_file(c: &AnyCircuit) -> CliResult<CircuitFile<Quaternion>> {
    match c {
        AnyCircuit::Real(f) => lift_file(f),
        AnyCircuit::Complex(f) => lift_file(f),
        AnyCircuit::Quaternion(f) => Ok(f.clone()),
    }
}

fn compile_file<E: Embedding>(
    file: &CircuitFile<E::Upper>,
    mode: Option<SortMode>,
    options: CompileOptions,
) -> CliResult<Value> {
    let oc = single_order(file, mode)?;
    let cc = compile::<E>(&oc, options)?;
    let touched = cc.provenance.iter().filter(|p| p.top_wire_used).count();
    eprintln!(
        "compiled {} gates on {} wires into {} wires with {}; {} gate(s) use the top wire",
        oc.circuit().len(),
        oc.width(),
        cc.circuit.width(),
        E::KIND.name(),
        touched
    );
    Ok(compiled_to_json(&cc))
}

fn cmd_compile(args: &CompileArgs) -> CliResult<()> {
    let circuit = read_circuit(&args.input)?;
    let kind = parse_embedding(&args.embedding)?;
    let mode = parse_sigma(args.sigma.as_deref(), DEFAULT_CAP)?;
    let options = CompileOptions {
        real_gate_shortcut: !args.no_real_shortcut,
    };
    use hypercircuit::{ComplexToReal as H, QuaternionToComplex as HHat, QuaternionToReal as SHat};
    let value = match (kind, &circuit) {
        (EmbeddingKind::H, AnyCircuit::Real(f)) => {
            compile_file::<H>(&lift_file(f)?, mode, options)?
        }
        (EmbeddingKind::H, AnyCircuit::Complex(f)) => compile_file::<H>(f, mode, options)?,
        (EmbeddingKind::H, c) => return Err(mismatch(kind, c.domain())),
        (EmbeddingKind::HHat, c) => compile_file::<HHat>(&quaternion_file(c)?, mode, options)?,
        (EmbeddingKind::SHat, c) => compile_file::<SHat>(&quaternion_file(c)?, mode, options)?,
    };
    emit(&args.output, &value)
}

fn cmd_verify(args: &VerifyArgs) -> CliResult<()> {
    if args.tol.is_nan() || args.tol <= 0.0 {
        return Err(Failure::new(2, "--tol must be positive"));
    }
    let config = SuiteConfig {
        seed: args.seed,
        trials: args.trials.max(1),
        tol: args.tol,
        corrupt: args.corrupt,
    };
    let report = run_suite(&config)?;
    for c in &report.checks {
        let op = if c.lower_bound { ">=" } else { "<=" };
        eprintln!(
            "{} {:<12} {:<40} {:.3e} {op} {:.0e}  {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.suite,
            c.name,
            c.value,
            c.threshold,
            c.property
        );
    }
    emit(&args.output, &serde_json::to_value(&report).expect("json"))?;
    if report.passed {
        eprintln!("all {} checks passed", report.checks.len());
        Ok(())
    } else {
        let failed: Vec<String> = report
            .failures()
            .map(|c| format!("{}: {}", c.suite, c.name))
            .collect();
        Err(Failure::new(
            1,
            format!("{} check(s) failed: {}", failed.len(), failed.join(", ")),
        ))
    }
}

fn ordering_value<D: Scalar>(circuit: &Circuit<D>, cap: usize) -> CliResult<Value> {
    let report = ordering_spread(circuit, &StateVector::basis(circuit.width(), 0), cap)?;
    eprintln!(
        "{} order(s), max distance {:.6}",
        report.sorts.len(),
        report.max_distance
    );
    Ok(report.to_json())
}

fn cmd_demo(args: &DemoArgs) -> CliResult<()> {
    let value = match args.name.as_str() {
        "ordering" => match &args.input {
            None => {
                let mut v = ordering_value(&order_witness(), args.cap)?;
                let fixtures: Vec<Value> = WITNESS_FIXTURES
                    .iter()
                    .map(|(sigma, probs)| json!({"sigma": sigma, "probs": probs}))
                    .collect();
                v["fixtures"] = json!(fixtures);
                v
            }
            Some(path) => match read_circuit(path)? {
                AnyCircuit::Real(f) => ordering_value(&f.circuit, args.cap)?,
                AnyCircuit::Complex(f) => ordering_value(&f.circuit, args.cap)?,
                AnyCircuit::Quaternion(f) => ordering_value(&f.circuit, args.cap)?,
            },
        },
        "commitment" => {
            let report = commitment_report(&CommitmentGates::quaternionic())?;
            eprintln!(
                "opening gap {:.6}, concealment gap {:.3e}",
                report.gap, report.concealment_gap
            );
            let mut v = report.to_json();
            v["thresholds"] = json!({"gap_min": 0.05, "concealment_max": 1e-10});
            v
        }
        other => {
            return Err(Failure::new(
                6,
                format!("unknown demo {other:?}; use ordering or commitment"),
            ))
        }
    };
    emit(&args.output, &value)
}

fn sorts_value<D: Scalar>(circuit: &Circuit<D>, cap: usize) -> CliResult<Value> {
    let sorts = circuit.all_orders(cap)?;
    eprintln!("{} topological sort(s)", sorts.len());
    Ok(json!({"count": sorts.len(), "sorts": sorts, "circuit": circuit_to_json(circuit, None)}))
}

fn cmd_sorts(args: &SortsArgs) -> CliResult<()> {
    let value = match read_circuit(&args.input)? {
        AnyCircuit::Real(f) => sorts_value(&f.circuit, args.cap)?,
        AnyCircuit::Complex(f) => sorts_value(&f.circuit, args.cap)?,
        AnyCircuit::Quaternion(f) => sorts_value(&f.circuit, args.cap)?,
    };
    emit(&args.output, &value)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Simulate(a) => cmd_simulate(a),
        Command::Compile(a) => cmd_compile(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Demo(a) => cmd_demo(a),
        Command::Sorts(a) => cmd_sorts(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_flag_forms() {
        assert_eq!(
            parse_sigma(Some("default"), 5).ok().flatten(),
            Some(SortMode::Default)
        );
        assert_eq!(
            parse_sigma(Some("all"), 5).ok().flatten(),
            Some(SortMode::All { cap: 5 })
        );
        assert_eq!(
            parse_sigma(Some("2, 0,1"), 5).ok().flatten(),
            Some(SortMode::Explicit(vec![2, 0, 1]))
        );
        assert_eq!(parse_sigma(Some("1,x"), 5).err().map(|f| f.code), Some(3));
    }

    #[test]
    fn error_codes() {
        assert_eq!(Failure::from(Error::Parse("x".into())).code, 2);
        assert_eq!(Failure::from(Error::InvalidOrder("x".into())).code, 3);
        assert_eq!(
            Failure::from(Error::NotUnitary {
                id: 0,
                deviation: 1.0
            })
            .code,
            4
        );
        assert_eq!(mismatch(EmbeddingKind::H, Domain::Quaternion).code, 5);
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
