use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use morley_ns::cli::{level_mesh, parse_config, run, BenchmarkConfig, Domain, MeshFamily, TestCase};
use morley_ns::mesh::save_mesh;
use morley_ns::Result;

#[derive(Parser)]
#[command(name = "morley-ns", version, about = "Morley-type VEM solver for stream-function Navier–Stokes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a benchmark study and write CSV reports.
    Run(RunArgs),
    /// Mesh utilities.
    Mesh {
        #[command(subcommand)]
        command: MeshCommand,
    },
}

#[derive(Args)]
struct RunArgs {
    /// `key = value` configuration file; flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// kovasznay | lshaped | cavity | robustness
    #[arg(long)]
    test: Option<String>,
    /// square | tri | trap | cvt
    #[arg(long)]
    family: Option<String>,
    /// Comma-separated divisions per unit length, e.g. 4,8,16
    #[arg(long)]
    levels: Option<String>,
    /// Comma-separated viscosities.
    #[arg(long)]
    nu: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Extra `key=value` overrides (repeatable).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Subcommand)]
enum MeshCommand {
    /// Generate a mesh file.
    Gen {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "unit")]
        domain: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short = 'o', long)]
        output: PathBuf,
    },
}

fn run_command(args: RunArgs) -> Result<()> {
    let mut cfg = match (&args.config, &args.test) {
        (Some(path), _) => parse_config(&std::fs::read_to_string(path)?)?,
        (None, Some(t)) => BenchmarkConfig::for_test(t.parse()?),
        (None, None) => {
            return Err(morley_ns::Error::Config("either --config or --test is required".into()))
        }
    };
    if let (Some(_), Some(t)) = (&args.config, &args.test) {
        if t.parse::<TestCase>()? != cfg.test {
            return Err(morley_ns::Error::Config("--test contradicts the configuration file".into()));
        }
    }
    let mut overrides: Vec<(String, String)> = Vec::new();
    for (k, v) in [("family", &args.family), ("levels", &args.levels), ("nu", &args.nu)] {
        if let Some(v) = v {
            overrides.push((k.into(), v.clone()));
        }
    }
    if let Some(o) = &args.out {
        overrides.push(("out".into(), o.display().to_string()));
    }
    for kv in &args.set {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| morley_ns::Error::Config(format!("--set expects KEY=VALUE, got {kv:?}")))?;
        overrides.push((k.trim().into(), v.trim().into()));
    }
    for (k, v) in overrides {
        cfg.set(&k, &v)?;
    }
    for path in run(&cfg)? {
        println!("{}", path.display());
    }
    Ok(())
}

fn mesh_gen(family: &str, n: usize, domain: &str, seed: u64, output: &PathBuf) -> Result<()> {
    let domain: Domain = domain.parse()?;
    let family: MeshFamily = family.parse()?;
    let test = if domain == Domain::LShape { TestCase::LShaped } else { TestCase::Kovasznay };
    let mut cfg = BenchmarkConfig::for_test(test);
    cfg.family = family;
    cfg.seed = seed;
    cfg.validate()?;
    let mesh = level_mesh(&cfg, n)?;
    save_mesh(&mesh, output)?;
    println!(
        "{}: {} vertices, {} edges, {} cells",
        output.display(),
        mesh.num_vertices(),
        mesh.num_edges(),
        mesh.num_cells()
    );
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    let res = match cli.command {
        Command::Run(args) => run_command(args),
        Command::Mesh {
            command: MeshCommand::Gen { family, n, domain, seed, output },
        } => mesh_gen(&family, n, &domain, seed, &output),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
