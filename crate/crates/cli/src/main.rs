use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use prorigid::methods::MethodParams;
use prorigid::Fault;

mod commands;
mod output;
mod selftest;

#[derive(Parser)]
#[command(name = "prorigid", version, about = "Witness bundles for profinitely isomorphic arithmetic group pairs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a preset pair, verify its twist and recompute its certificate.
    Witness {
        #[command(subcommand)]
        method: MethodCmd,
    },
    /// List primes split in Q(sqrt d), optionally in a residue class.
    SearchPrimes(SearchArgs),
    /// Re-verify the twist of a saved bundle.
    VerifyIso(BundleArgs),
    /// Recompute the obstruction certificate of a saved bundle.
    Obstruct(BundleArgs),
    /// Run the brute-force oracles and every preset.
    Selftest(SelftestArgs),
}

#[derive(Subcommand)]
enum MethodCmd {
    /// Central element at p versus at q.
    MethodA {
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 5)]
        p: u64,
        #[arg(long, default_value_t = 7)]
        q: u64,
        #[arg(long, default_value_t = 2)]
        order: u64,
        #[arg(long, default_value_t = 2)]
        level: u32,
        #[command(flatten)]
        run: RunOpts,
    },
    /// Parabolic of type (1,3) versus (3,1) at q.
    MethodB {
        #[arg(long, default_value_t = 5)]
        p: u64,
        #[arg(long, default_value_t = 7)]
        q: u64,
        #[command(flatten)]
        run: RunOpts,
    },
    /// Principal conditions on conjugate places over Q(sqrt d).
    MethodC {
        #[arg(long, default_value_t = 2)]
        d: i64,
        #[arg(long, default_value_t = 7)]
        p: u64,
        #[arg(long, default_value_t = 17)]
        q: u64,
        #[command(flatten)]
        run: RunOpts,
    },
    /// SL_2 over Z[1/p] with the sign moved from 3 to 5.
    S16 {
        #[arg(long, default_value_t = 7)]
        p: u64,
        #[command(flatten)]
        run: RunOpts,
    },
}

#[derive(Args, Clone)]
pub struct RunOpts {
    /// Random sample pairs checked by the verifier.
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    /// Master seed for sampling.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write JSON here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Replace the twist by a deliberately broken one.
    #[arg(long, value_enum)]
    pub inject_fault: Option<FaultArg>,
}

#[derive(Args)]
pub struct SearchArgs {
    /// Field parameter; 1 means the rationals.
    #[arg(long, default_value_t = 1)]
    pub d: i64,
    #[arg(long)]
    pub count: usize,
    /// Comma-separated primes to skip.
    #[arg(long, value_delimiter = ',')]
    pub exclude: Vec<u64>,
    /// Residue class `m:a`.
    #[arg(long, conflicts_with = "full_center")]
    pub congruence: Option<String>,
    /// Require p = 1 (mod n), so all n-th roots of unity exist mod p.
    #[arg(long)]
    pub full_center: Option<u64>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args)]
pub struct BundleArgs {
    /// Witness document or bare bundle.
    #[arg(long)]
    pub bundle: PathBuf,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args)]
pub struct SelftestArgs {
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum)]
    pub inject_fault: Option<FaultArg>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum FaultArg {
    W0Sign,
    PlaceSwap,
}

impl From<FaultArg> for Fault {
    fn from(f: FaultArg) -> Fault {
        match f {
            FaultArg::W0Sign => Fault::W0Sign,
            FaultArg::PlaceSwap => Fault::PlaceSwap,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Witness { method } => {
            let (params, run) = match method {
                MethodCmd::MethodA { n, p, q, order, level, run } => {
                    (MethodParams::MethodA { n, p, q, order, level }, run)
                }
                MethodCmd::MethodB { p, q, run } => (MethodParams::MethodB { p, q }, run),
                MethodCmd::MethodC { d, p, q, run } => (MethodParams::MethodC { d, p, q }, run),
                MethodCmd::S16 { p, run } => (MethodParams::S16 { p }, run),
            };
            commands::witness(params, &run)
        }
        Command::SearchPrimes(args) => commands::search_primes(&args),
        Command::VerifyIso(args) => commands::verify_bundle(&args),
        Command::Obstruct(args) => commands::obstruct(&args),
        Command::Selftest(args) => selftest::run(&args),
    };
    output::exit_code(result)
}
