//! Thin command-line front end: argument parsing only, all work happens in
//! `dgmod::cli`.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use dgmod::cli::{run, Job, JobOptions, Verb};
use dgmod::scalar::FieldSpec;

#[derive(Parser)]
#[command(
    name = "dgmod",
    about = "Exact computations with finite-dimensional DG algebras and DG modules",
    version
)]
struct Args {
    #[command(subcommand)]
    command: Command,

    /// Expected coefficient field (`q` or `p:<prime>`); inputs over a
    /// different field are rejected
    #[arg(long, global = true)]
    field: Option<String>,

    /// Degree bound for resolutions and windows
    #[arg(long, global = true)]
    bound: Option<i64>,

    /// Cap on enumerated points
    #[arg(long, global = true)]
    max_points: Option<usize>,

    /// Reject searches larger than 2^<n> assignments
    #[arg(long, global = true)]
    max_q_power: Option<u32>,

    /// Emit the report as JSON
    #[arg(long, global = true)]
    json: bool,

    /// Echo canonicalized inputs inside the report
    #[arg(long, global = true)]
    echo: bool,

    /// Write the report to a file instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a complex, algebra, or module file
    Validate { input: PathBuf },
    /// Per-degree homology of a complex (or of a module's underlying complex)
    Homology { input: PathBuf },
    /// dim Ext^i(M, N) on a window (flags: --lo --hi --bound)
    Ext {
        source: PathBuf,
        target: PathBuf,
        #[arg(long)]
        lo: Option<i64>,
        #[arg(long)]
        hi: Option<i64>,
    },
    /// dim Tor_i(M, N) on a window (flags: --lo --hi --bound)
    Tor {
        source: PathBuf,
        target: PathBuf,
        #[arg(long)]
        lo: Option<i64>,
        #[arg(long)]
        hi: Option<i64>,
    },
    /// Betti and Bass numbers over a local algebra
    Betti { module: PathBuf },
    /// dim YExt^1(M, N)
    Yext1 { source: PathBuf, target: PathBuf },
    /// Baer sum of two extension files with matching endpoints
    BaerSum { first: PathBuf, second: PathBuf },
    /// Splitting test for an extension file
    IsSplit { extension: PathBuf },
    /// Tangent and orbit-tangent dimensions at a module point
    Tangent { module: PathBuf },
    /// Full orbit census of Mod^U(W) over a finite field
    Orbits { algebra: PathBuf, space: PathBuf },
    /// Tangent/orbit/YExt comparison at a point
    Voigt { module: PathBuf },
    /// Semidualizing-object scan over a degree-0 local algebra
    ScanSdm { algebra: PathBuf },
    /// Koszul complex on a sequence of degree-0 algebra elements
    Koszul { algebra: PathBuf, sequence: PathBuf },
}

fn main() -> ExitCode {
    let args = Args::parse();
    let field = match args.field.as_deref().map(str::parse::<FieldSpec>) {
        None => None,
        Some(Ok(f)) => Some(f),
        Some(Err(e)) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let mut options = JobOptions {
        field,
        bound: args.bound,
        max_points: args.max_points,
        max_q_power: args.max_q_power,
        json: args.json,
        echo: args.echo,
        output: args.output,
        ..Default::default()
    };
    let (verb, inputs) = match args.command {
        Command::Validate { input } => (Verb::Validate, vec![input]),
        Command::Homology { input } => (Verb::Homology, vec![input]),
        Command::Ext {
            source,
            target,
            lo,
            hi,
        } => {
            options.lo = lo;
            options.hi = hi;
            (Verb::Ext, vec![source, target])
        }
        Command::Tor {
            source,
            target,
            lo,
            hi,
        } => {
            options.lo = lo;
            options.hi = hi;
            (Verb::Tor, vec![source, target])
        }
        Command::Betti { module } => (Verb::Betti, vec![module]),
        Command::Yext1 { source, target } => (Verb::Yext1, vec![source, target]),
        Command::BaerSum { first, second } => (Verb::BaerSum, vec![first, second]),
        Command::IsSplit { extension } => (Verb::IsSplit, vec![extension]),
        Command::Tangent { module } => (Verb::Tangent, vec![module]),
        Command::Orbits { algebra, space } => (Verb::Orbits, vec![algebra, space]),
        Command::Voigt { module } => (Verb::Voigt, vec![module]),
        Command::ScanSdm { algebra } => (Verb::ScanSdm, vec![algebra]),
        Command::Koszul { algebra, sequence } => (Verb::Koszul, vec![algebra, sequence]),
    };
    let job = Job {
        verb,
        inputs,
        options,
    };
    let code = run(&job, &mut std::io::stdout());
    ExitCode::from(code as u8)
}
