use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use wigstab::bench::{run_bench, BenchConfig, BenchEngine, BenchRow};
use wigstab::circuit::{parse, random_circuit, Circuit};
use wigstab::frame::StabilizerFrame;
use wigstab::rng::MeasurementRng;
use wigstab::run::{execute, EngineKind, RunOptions, Simulator};
use wigstab::verify::{verify, VerifyConfig};
use wigstab::Error;

#[derive(Parser)]
#[command(name = "wigstab", version, about = "Qudit stabilizer circuits on discrete Wigner frames")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a circuit and print its measurement transcript.
    Run(RunArgs),
    /// Check the engines against the dense oracle on random circuits.
    Verify(VerifyArgs),
    /// Time gates and measurements across register sizes.
    Bench(BenchArgs),
    /// Run a circuit and print the supports of both halves of the final frame.
    Wigner(WignerArgs),
    /// Print a random circuit.
    Generate(GenerateArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Circuit file, or `-` for standard input.
    circuit: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    shots: u64,
    #[arg(long, default_value = "auto")]
    engine: EngineKind,
    /// Print the final frame (or tableau, or amplitudes) after each shot.
    #[arg(long)]
    dump_frame: bool,
    /// Compare with the dense oracle after every instruction.
    #[arg(long)]
    oracle_check: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 3)]
    n_max: usize,
    /// Comma-separated dimensions.
    #[arg(long, value_delimiter = ',', default_value = "3")]
    dims: Vec<u32>,
    #[arg(long, default_value_t = 20)]
    depth: usize,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum BenchEngineArg {
    Wigner,
    Tableau,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "256,512,1024")]
    sizes: Vec<usize>,
    #[arg(long, short = 'd', default_value_t = 3)]
    dim: u32,
    #[arg(long, default_value_t = 31)]
    reps: usize,
    #[arg(long, default_value_t = 2000)]
    batch: usize,
    #[arg(long, value_enum, default_value = "wigner")]
    engine: BenchEngineArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct WignerArgs {
    circuit: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    qudits: usize,
    #[arg(long)]
    dim: u32,
    #[arg(long)]
    depth: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

enum Failure {
    Mismatch(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::OracleMismatch(_) => Failure::Mismatch(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CliResult = std::result::Result<(), Failure>;

fn read_circuit(path: &PathBuf) -> std::result::Result<Circuit, Failure> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        s
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?
    };
    Ok(parse(&text)?)
}

fn cmd_run(args: RunArgs, out: &mut impl Write) -> CliResult {
    let circuit = read_circuit(&args.circuit)?;
    let opts = RunOptions {
        engine: args.engine,
        seed: args.seed,
        shots: args.shots,
        dump: args.dump_frame,
        oracle_check: args.oracle_check,
    };
    let transcripts = execute(&circuit, &opts)?;
    let multi = transcripts.len() > 1;
    for t in &transcripts {
        if args.json {
            for e in &t.events {
                writeln!(out, "{}", serde_json::to_string(e).expect("serializable"))?;
            }
            if let Some(dump) = &t.dump {
                writeln!(out, "{}", json!({ "shot": t.shot, "engine": t.engine, "dump": dump }))?;
            }
        } else {
            if multi {
                writeln!(out, "# shot {}", t.shot)?;
            }
            write!(out, "{}", t.lines())?;
            if let Some(dump) = &t.dump {
                write!(out, "{dump}")?;
            }
        }
    }
    Ok(())
}

fn cmd_verify(args: VerifyArgs, out: &mut impl Write) -> CliResult {
    let cfg = VerifyConfig {
        n_max: args.n_max,
        dims: args.dims,
        depth: args.depth,
        trials: args.trials,
        seed: args.seed,
    };
    let report = verify(&cfg)?;
    if args.json {
        writeln!(
            out,
            "{}",
            json!({ "passed": report.passed(), "report": report })
        )?;
    } else {
        write!(out, "{report}")?;
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Mismatch(format!(
            "{} failing circuit(s)",
            report.failures.len()
        )))
    }
}

fn cmd_bench(args: BenchArgs, out: &mut impl Write) -> CliResult {
    let cfg = BenchConfig {
        engine: match args.engine {
            BenchEngineArg::Wigner => BenchEngine::Wigner,
            BenchEngineArg::Tableau => BenchEngine::Tableau,
        },
        sizes: args.sizes,
        d: args.dim,
        reps: args.reps,
        batch: args.batch,
        seed: args.seed,
    };
    let rows = run_bench(&cfg)?;
    if args.json {
        for r in &rows {
            writeln!(out, "{}", serde_json::to_string(r).expect("serializable"))?;
        }
    } else {
        writeln!(out, "{}", BenchRow::HEADER)?;
        for r in &rows {
            writeln!(out, "{r}")?;
        }
    }
    Ok(())
}

fn final_frame(circuit: &Circuit, seed: u64) -> std::result::Result<StabilizerFrame, Failure> {
    let mut sim = Simulator::new(EngineKind::Wigner, circuit.n(), circuit.d())?;
    let mut rng = MeasurementRng::for_shot(seed, 0);
    for ins in circuit.instructions() {
        sim.step(ins, &mut rng)?;
    }
    match sim {
        Simulator::Wigner(f) => Ok(f),
        _ => unreachable!("wigner engine requested"),
    }
}

fn cmd_wigner(args: WignerArgs, out: &mut impl Write) -> CliResult {
    let circuit = read_circuit(&args.circuit)?;
    let frame = final_frame(&circuit, args.seed)?;
    let n = frame.n();
    let halves = [
        ("bottom", frame.wigner_support()?),
        ("top", frame.destabilizer_support()?),
    ];
    for (name, points) in &halves {
        let points: Vec<&[u32]> = points.iter().map(|p| p.as_slice()).collect();
        if args.json {
            writeln!(out, "{}", json!({ "half": name, "points": points }))?;
            continue;
        }
        writeln!(out, "{name} {}", points.len())?;
        for p in points {
            let fmt = |xs: &[u32]| xs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ");
            writeln!(out, "{} | {}", fmt(&p[..n]), fmt(&p[n..]))?;
        }
    }
    Ok(())
}

fn cmd_generate(args: GenerateArgs, out: &mut impl Write) -> CliResult {
    let c = random_circuit(args.qudits, args.dim, args.depth, args.seed)?;
    write!(out, "{c}")?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let result = match cli.command {
        Command::Run(a) => cmd_run(a, &mut out),
        Command::Verify(a) => cmd_verify(a, &mut out),
        Command::Bench(a) => cmd_bench(a, &mut out),
        Command::Wigner(a) => cmd_wigner(a, &mut out),
        Command::Generate(a) => cmd_generate(a, &mut out),
    };
    let flushed = out.flush();
    match (result, flushed) {
        (Ok(()), Ok(())) => ExitCode::SUCCESS,
        (Err(Failure::Mismatch(msg)), _) => {
            eprintln!("wigstab: {msg}");
            ExitCode::from(1)
        }
        (Err(Failure::Usage(msg)), _) => {
            eprintln!("wigstab: {msg}");
            ExitCode::from(2)
        }
        (Ok(()), Err(e)) => {
            eprintln!("wigstab: {e}");
            ExitCode::from(2)
        }
    }
}
