//! Command implementations behind the `rankmetric` binary.
//!
//! Every random choice of a run is drawn from one ChaCha20 stream seeded with
//! `RunConfig::seed`, so identical configurations produce identical files.
//! Attack reports are the exception: their timing fields vary.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use rankmetric::attack::{attack_extension, attack_overbeck, default_i_max, AttackReport};
use rankmetric::gpt::{keygen, random_message};
use rankmetric::rng::seeded;
use rankmetric::selftest::{self, SuiteConfig};
use rankmetric::serial::{
    vec_from_hex, vec_to_hex, CiphertextJson, KeyFile, MessageJson, ParamsJson, ReportJson,
};
use rankmetric::{FieldCtx, GptParams};
use serde::Serialize;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Params,
    Keygen,
    Encrypt,
    Decrypt,
    Attack,
    Distinguish,
    Selftest,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Mode {
    Overbeck,
    #[default]
    Extension,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Target {
    #[default]
    Public,
    Secret,
}

/// Scheme parameters given on the command line. Unset values fall back to
/// `q = 2, m = 104, n = 26, k = 18, λ = 6, s = 1`, and `ℓ = 2` when twisted.
#[derive(Clone, Debug, Default)]
pub struct ParamOverrides {
    pub q: Option<u32>,
    pub m: Option<usize>,
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub lambda: Option<usize>,
    pub s: Option<usize>,
    pub ell: Option<usize>,
    pub twisted: bool,
    pub t: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub seed: u64,
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub key: Option<PathBuf>,
    /// Public key destination for `keygen`; defaults to `<out>.pub.json`.
    pub public_out: Option<PathBuf>,
    pub report: Option<PathBuf>,
    pub mode: Mode,
    pub i_max: Option<usize>,
    pub target: Target,
    pub quick: bool,
    pub params: ParamOverrides,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            seed: 0,
            input: None,
            output: None,
            key: None,
            public_out: None,
            report: None,
            mode: Mode::default(),
            i_max: None,
            target: Target::default(),
            quick: false,
            params: ParamOverrides::default(),
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    /// The requested operation ran but did not succeed.
    #[error("{0}")]
    Method(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Method(_) => 1,
            CliError::Usage(_) | CliError::Io(_) => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Io(_) => "io",
            CliError::Method(_) => "method_failure",
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::json!({ "error": self.kind(), "message": self.to_string() }).to_string()
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write_text(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(e.to_string())),
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn require<'a>(p: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path, CliError> {
    p.as_deref().ok_or_else(|| usage(format!("{flag} is required for this command")))
}

fn bad<E: std::fmt::Display>(e: E) -> CliError {
    usage(e.to_string())
}

pub fn params_from_overrides(o: &ParamOverrides) -> Result<GptParams, CliError> {
    let field = FieldCtx::new(o.q.unwrap_or(2), o.m.unwrap_or(104)).map_err(bad)?;
    let mut p = GptParams::new(
        field,
        o.n.unwrap_or(26),
        o.k.unwrap_or(18),
        o.lambda.unwrap_or(6),
        o.s.unwrap_or(1),
    );
    if o.twisted || o.ell.is_some_and(|l| l > 0) {
        p = p.twisted(o.ell.unwrap_or(2));
    }
    if let Some(t) = o.t {
        p = p.with_t(t);
    }
    p.validate().map_err(bad)?;
    Ok(p)
}

/// Runs one command, writing its files.
pub fn run(cfg: &RunConfig) -> Result<(), CliError> {
    match cfg.command {
        Command::Params => {
            let p = params_from_overrides(&cfg.params)?;
            write_text(cfg.output.as_deref(), &to_json(&ParamsJson::from_params(&p)))
        }
        Command::Keygen => cmd_keygen(cfg),
        Command::Encrypt => cmd_encrypt(cfg),
        Command::Decrypt => cmd_decrypt(cfg),
        Command::Attack => cmd_attack(cfg),
        Command::Distinguish => cmd_distinguish(cfg),
        Command::Selftest => cmd_selftest(cfg),
    }
}

fn default_public_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    out.with_file_name(format!("{stem}.pub.json"))
}

fn cmd_keygen(cfg: &RunConfig) -> Result<(), CliError> {
    let params = match &cfg.input {
        Some(p) => read_json::<ParamsJson>(p)?.to_params().map_err(bad)?,
        None => params_from_overrides(&cfg.params)?,
    };
    let out = require(&cfg.output, "--out")?;
    let mut rng = seeded(cfg.seed);
    let (sk, pk) = keygen(&params, &mut rng).map_err(bad)?;
    write_text(Some(out), &to_json(&KeyFile::from_secret(&sk)))?;
    let public = cfg.public_out.clone().unwrap_or_else(|| default_public_path(out));
    write_text(Some(&public), &to_json(&KeyFile::from_public(&pk)))
}

fn cmd_encrypt(cfg: &RunConfig) -> Result<(), CliError> {
    let key: KeyFile = read_json(require(&cfg.key, "--key")?)?;
    let pk = key.public_key().map_err(bad)?;
    let ctx = pk.params.field.clone();
    let mut rng = seeded(cfg.seed);
    let msg = match &cfg.input {
        Some(p) => vec_from_hex(&ctx, &read_json::<MessageJson>(p)?.m).map_err(bad)?,
        // a sampled message goes to stdout, so the ciphertext needs a file
        None => {
            require(&cfg.output, "--out (or --in)")?;
            let m = random_message(&ctx, pk.params.k, &mut rng);
            write_text(None, &to_json(&MessageJson { m: vec_to_hex(&ctx, &m) }))?;
            m
        }
    };
    let ct = pk.encrypt(&msg, &mut rng).map_err(bad)?;
    write_text(cfg.output.as_deref(), &to_json(&CiphertextJson::from_ct(&ctx, &ct)))
}

fn cmd_decrypt(cfg: &RunConfig) -> Result<(), CliError> {
    let key: KeyFile = read_json(require(&cfg.key, "--key")?)?;
    let sk = key.secret_key().map_err(bad)?;
    let ctx = sk.params.field.clone();
    let ct = read_json::<CiphertextJson>(require(&cfg.input, "--in")?)?
        .to_ct(&ctx)
        .map_err(bad)?;
    let m = sk.decrypt(&ct).map_err(|e| CliError::Method(e.to_string()))?;
    write_text(cfg.output.as_deref(), &to_json(&MessageJson { m: vec_to_hex(&ctx, &m) }))
}

/// Reads a key file that must not contain secret material.
fn read_public_key(path: &Path) -> Result<rankmetric::GptPublicKey, CliError> {
    let key: KeyFile = read_json(path)?;
    if key.secret.is_some() {
        return Err(usage(format!(
            "{} contains a secret key; attacks take the public key only",
            path.display()
        )));
    }
    key.public_key().map_err(bad)
}

pub fn attack_report(cfg: &RunConfig) -> Result<(rankmetric::GptPublicKey, AttackReport), CliError> {
    let pk = read_public_key(require(&cfg.key, "--key")?)?;
    let ct = read_json::<CiphertextJson>(require(&cfg.input, "--in")?)?
        .to_ct(&pk.params.field)
        .map_err(bad)?;
    let i_max = cfg.i_max.unwrap_or_else(|| default_i_max(&pk));
    let report = match cfg.mode {
        Mode::Extension => attack_extension(&pk, &ct, i_max),
        Mode::Overbeck => {
            let mut rng = seeded(cfg.seed);
            let mut last = None;
            for i in 1..=i_max.max(1) {
                let rep = attack_overbeck(&pk, &ct, i, &mut rng);
                let done = rep.recovered().is_some();
                last = Some(rep);
                if done {
                    break;
                }
            }
            last.expect("at least one attempt")
        }
    };
    Ok((pk, report))
}

fn cmd_attack(cfg: &RunConfig) -> Result<(), CliError> {
    let (pk, report) = attack_report(cfg)?;
    let json = ReportJson::from_report(&pk.params.field, &report);
    let dest = cfg.report.as_deref().or(cfg.output.as_deref());
    write_text(dest, &to_json(&json))?;
    match report.failure() {
        None => Ok(()),
        Some(f) => Err(CliError::Method(format!("attack failed: {f}"))),
    }
}

fn cmd_distinguish(cfg: &RunConfig) -> Result<(), CliError> {
    let key: KeyFile = read_json(require(&cfg.key, "--key")?)?;
    let code = match cfg.target {
        Target::Public => key.public_key().map_err(bad)?.code(),
        Target::Secret => key.secret_key().map_err(bad)?.secret_code(),
    };
    let i_max = cfg.i_max.unwrap_or(code.n() - code.k().min(code.n()));
    let mut csv = String::from("i,dim\n");
    for (i, d) in code.dim_profile(i_max).iter().enumerate() {
        writeln!(csv, "{i},{d}").expect("string write");
    }
    write_text(cfg.output.as_deref(), &csv)
}

fn cmd_selftest(cfg: &RunConfig) -> Result<(), CliError> {
    let suite = SuiteConfig {
        seed: cfg.seed,
        quick: cfg.quick,
    };
    let mut failed = 0;
    let mut text = String::new();
    for id in selftest::CRITERIA {
        let r = &selftest::run(&[id], &suite)[0];
        let line = format!("{r}\n");
        print!("{line}");
        text.push_str(&line);
        failed += usize::from(!r.passed);
    }
    if let Some(out) = &cfg.output {
        write_text(Some(out), &text)?;
    }
    if failed > 0 {
        return Err(CliError::Method(format!("{failed} self-test criteria failed")));
    }
    Ok(())
}
