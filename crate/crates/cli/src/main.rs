use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use gammalab_cli::resolve::{resolve, DIRECTIVES};
use gammalab_cli::run::{exit_code, run_all, Report};
use gammalab_cli::syntax::parse_structure;
use gammalab_core::Limits;

const FORMAT_DOC: &str = include_str!("../../../docs/format.md");

#[derive(Parser)]
#[command(
    name = "gammalab",
    version,
    about = "Checks finite n-ary Γ-semirings, their modules and exact structures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Resolve a structure file and run its check directives.
    Check(CheckArgs),
    /// Describe one directive, or list them all.
    Explain { directive: Option<String> },
    /// Print the structure file reference.
    Formats,
}

#[derive(clap::Args)]
struct CheckArgs {
    file: PathBuf,
    /// Write a machine-readable report to this path.
    #[arg(long)]
    emit_report: Option<PathBuf>,
    /// Write the file in canonical JSON form to this path.
    #[arg(long)]
    emit_canonical: Option<PathBuf>,
    /// Run directives in order and stop at the first failure.
    #[arg(long)]
    fail_fast: bool,
    /// Include wall-clock times in the report.
    #[arg(long)]
    timings: bool,
    #[arg(long, env = "GAMMALAB_MAX_THREADS")]
    threads: Option<usize>,
    #[arg(long)]
    max_carrier: Option<usize>,
    #[arg(long)]
    max_tensor_classes: Option<usize>,
    #[arg(long)]
    max_hom_enumeration: Option<u128>,
}

fn write_or_print(path: &PathBuf, text: &str) -> Result<(), String> {
    if path.as_os_str() == "-" {
        print!("{}", text);
        Ok(())
    } else {
        fs::write(path, text).map_err(|e| format!("cannot write {}: {}", path.display(), e))
    }
}

fn check(args: CheckArgs) -> Result<i32, String> {
    let mut limits = Limits::default();
    if let Some(v) = args.max_carrier {
        limits.max_carrier = v;
    }
    if let Some(v) = args.max_tensor_classes {
        limits.max_tensor_classes = v;
    }
    if let Some(v) = args.max_hom_enumeration {
        limits.max_hom_enumeration = v;
    }
    if let Some(n) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| e.to_string())?;
    }
    let src = fs::read_to_string(&args.file).map_err(|e| format!("cannot read {}: {}", args.file.display(), e))?;
    let name = args.file.display();
    let rejected = |msg: String| -> Result<i32, String> {
        eprintln!("{}: {}", name, msg);
        if let Some(p) = &args.emit_report {
            write_or_print(p, &Report::rejected(&limits, msg).to_json())?;
        }
        Ok(3)
    };
    let file = match parse_structure(&src) {
        Ok(f) => f,
        Err(d) => return rejected(d.to_string()),
    };
    if let Some(p) = &args.emit_canonical {
        write_or_print(p, &file.document.to_canonical())?;
    }
    let env = match resolve(&file, &limits) {
        Ok(e) => e,
        Err(d) => return rejected(d.to_string()),
    };
    let mut outcomes = run_all(&env.plan, &limits, args.fail_fast);
    for o in &outcomes {
        let time = if args.timings {
            format!(" ({} ms)", o.elapsed.as_millis())
        } else {
            String::new()
        };
        println!("[{}] {}: {}{}", o.index + 1, o.directive, o.status.word(), time);
        for l in &o.lines {
            println!("    {}", l);
        }
        if let Some(r) = o.replay_confirmed {
            println!("    witness replay: {}", if r { "confirmed" } else { "NOT confirmed" });
        }
    }
    if args.timings {
        for o in &mut outcomes {
            o.elapsed_ms = Some(o.elapsed.as_millis() as u64);
        }
    }
    if outcomes.len() < env.plan.len() {
        println!("stopped after {} of {} directives", outcomes.len(), env.plan.len());
    }
    if let Some(p) = &args.emit_report {
        write_or_print(p, &Report::new(&limits, &outcomes).to_json())?;
    }
    Ok(exit_code(&outcomes))
}

fn explain(directive: Option<String>) -> Result<i32, String> {
    match directive {
        None => {
            for (name, usage, _) in DIRECTIVES {
                println!("check {} {}", name, usage);
            }
            Ok(0)
        }
        Some(d) => {
            let (name, usage, what) = DIRECTIVES
                .iter()
                .find(|x| x.0 == d)
                .ok_or_else(|| format!("unknown directive {:?}; run `gammalab explain` for the list", d))?;
            println!("check {} {}\n  {}", name, usage, what);
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check(args) => check(args),
        Command::Explain { directive } => explain(directive),
        Command::Formats => {
            print!("{}", FORMAT_DOC);
            Ok(0)
        }
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(msg) => {
            eprintln!("gammalab: {}", msg);
            ExitCode::from(3)
        }
    }
}
