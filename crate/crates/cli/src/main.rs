use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rankmetric_cli::{run, Command, Mode, ParamOverrides, RunConfig, Target};

#[derive(Parser)]
#[command(name = "rankmetric", version, about = "Rank-metric codes, GPT encryption and attacks")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand, Clone, Copy)]
enum Cmd {
    /// Write a parameter file
    Params,
    /// Generate a key pair (secret file at --out, public file at --pub)
    Keygen,
    /// Encrypt a message file with a public key
    Encrypt,
    /// Decrypt a ciphertext file with a secret key
    Decrypt,
    /// Recover the plaintext from a public key and a ciphertext
    Attack,
    /// Write dim Λ_i of a key's code as CSV
    Distinguish,
    /// Run the built-in end-to-end checks
    Selftest,
}

#[derive(ValueEnum, Clone, Copy)]
enum ModeArg {
    Overbeck,
    Extension,
}

#[derive(ValueEnum, Clone, Copy)]
enum TargetArg {
    Public,
    Secret,
}

#[derive(clap::Args)]
struct Opts {
    #[arg(long, global = true)]
    q: Option<u32>,
    #[arg(long, global = true)]
    m: Option<usize>,
    #[arg(long, global = true)]
    n: Option<usize>,
    #[arg(long, global = true)]
    k: Option<usize>,
    #[arg(long, global = true)]
    lambda: Option<usize>,
    #[arg(long, global = true)]
    s: Option<usize>,
    #[arg(long, global = true)]
    ell: Option<usize>,
    /// Use a twisted Gabidulin secret code
    #[arg(long, global = true)]
    twisted: bool,
    /// Error rank (defaults to the decoding radius)
    #[arg(long, global = true)]
    t: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long = "in", global = true)]
    input: Option<PathBuf>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long = "pub", global = true)]
    public_out: Option<PathBuf>,
    #[arg(long, global = true)]
    key: Option<PathBuf>,
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Extension)]
    mode: ModeArg,
    #[arg(long, global = true)]
    i_max: Option<usize>,
    /// Which code `distinguish` profiles
    #[arg(long, global = true, value_enum, default_value_t = TargetArg::Public)]
    target: TargetArg,
    /// Smaller self-test batches
    #[arg(long, global = true)]
    quick: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let o = cli.opts;
    let mut cfg = RunConfig::new(match cli.command {
        Cmd::Params => Command::Params,
        Cmd::Keygen => Command::Keygen,
        Cmd::Encrypt => Command::Encrypt,
        Cmd::Decrypt => Command::Decrypt,
        Cmd::Attack => Command::Attack,
        Cmd::Distinguish => Command::Distinguish,
        Cmd::Selftest => Command::Selftest,
    });
    cfg.seed = o.seed;
    cfg.input = o.input;
    cfg.output = o.out;
    cfg.public_out = o.public_out;
    cfg.key = o.key;
    cfg.report = o.report;
    cfg.mode = match o.mode {
        ModeArg::Overbeck => Mode::Overbeck,
        ModeArg::Extension => Mode::Extension,
    };
    cfg.i_max = o.i_max;
    cfg.target = match o.target {
        TargetArg::Public => Target::Public,
        TargetArg::Secret => Target::Secret,
    };
    cfg.quick = o.quick;
    cfg.params = ParamOverrides {
        q: o.q,
        m: o.m,
        n: o.n,
        k: o.k,
        lambda: o.lambda,
        s: o.s,
        ell: o.ell,
        twisted: o.twisted,
        t: o.t,
    };
    match run(&cfg) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
