use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use sublinext::engine::ProbeConfig;
use sublinext::{rational, Vector};
use sublinext_cli::report::vector_json;
use sublinext_cli::{lpfile, problem, suites};

#[derive(Parser)]
#[command(name = "sublinext", version, about = "Exact extension and verification of sublinear operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone, Copy)]
struct Sampling {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 200)]
    samples: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a problem file and report hypothesis checks on its declarations.
    Check { file: PathBuf },
    /// Run every task in a problem file.
    Run {
        file: PathBuf,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Run one task and optionally write its artifacts as JSON.
    Extend {
        file: PathBuf,
        #[arg(long)]
        task: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Evaluate a declared operator at a vector, given as JSON or comma separated.
    Eval {
        file: PathBuf,
        #[arg(long)]
        operator: String,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Run a builtin property suite.
    Verify {
        #[arg(long)]
        suite: String,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Linear programs.
    Lp {
        #[command(subcommand)]
        command: LpCommand,
    },
}

#[derive(Subcommand)]
enum LpCommand {
    /// Solve a JSON LP and verify its certificate.
    Solve { file: PathBuf },
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn load(path: &Path) -> Result<problem::ProblemFile, String> {
    problem::parse(&read(path)?)
}

fn parse_vector(text: &str) -> Result<Vector, String> {
    let text = text.trim();
    if text.starts_with('[') {
        return serde_json::from_str(text).map_err(|e| format!("invalid vector: {e}"));
    }
    text.split(',')
        .map(|s| rational::parse(s.trim()).map_err(|e| e.to_string()))
        .collect()
}

fn run(cli: Cli) -> Result<i32, String> {
    match cli.command {
        Command::Check { file } => {
            let f = load(&file)?;
            println!("sublinext check dim={} codim={}", f.space.dim, f.space.codim);
            for line in f.hypothesis_lines() {
                println!("{line}");
            }
            let mut code = 0;
            for t in &f.tasks {
                match f.resolve(t) {
                    Ok(()) => println!("task {} op={} resolves", t.id, t.op),
                    Err(e) => {
                        println!("task {} op={} ERROR {e}", t.id, t.op);
                        code = 2;
                    }
                }
            }
            Ok(code)
        }
        Command::Run { file, sampling } => {
            let f = load(&file)?;
            let tasks: Vec<_> = f.tasks.iter().collect();
            let report = problem::run_tasks(&f, &tasks, &ProbeConfig::new(sampling.seed, sampling.samples));
            print!("{}", report.render());
            Ok(report.exit_code())
        }
        Command::Extend {
            file,
            task,
            out,
            sampling,
        } => {
            let f = load(&file)?;
            let t = f.task(&task).ok_or_else(|| format!("no task with id {task:?}"))?;
            let report = problem::run_tasks(&f, &[t], &ProbeConfig::new(sampling.seed, sampling.samples));
            print!("{}", report.render());
            if let Some(path) = out {
                // Artifacts are already serialized; keep them verbatim.
                let entries: Vec<String> = report.tasks[0]
                    .artifacts
                    .iter()
                    .map(|(name, json)| format!("  {}: {json}", serde_json::Value::from(name.as_str())))
                    .collect();
                let text = format!("{{\n{}\n}}", entries.join(",\n"));
                fs::write(&path, text + "\n").map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            }
            Ok(report.exit_code())
        }
        Command::Eval { file, operator, at } => {
            let f = load(&file)?;
            let op = f
                .operators
                .get(&operator)
                .ok_or_else(|| format!("unresolved name {operator:?}"))?;
            let x = parse_vector(&at)?;
            let value = op.evaluate(&x).map_err(|e| e.to_string())?;
            println!("value {}", vector_json(&value));
            Ok(0)
        }
        Command::Verify { suite, sampling } => {
            let report = suites::verify_suite(&suite, sampling.seed, sampling.samples)?;
            print!("{}", report.render());
            Ok(report.exit_code())
        }
        Command::Lp {
            command: LpCommand::Solve { file },
        } => {
            let lp = lpfile::parse_lp(&read(&file)?)?;
            let (text, ok) = lpfile::solve_and_render(&lp)?;
            print!("{text}");
            Ok(if ok { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("ERROR {e}");
            ExitCode::from(2)
        }
    }
}
