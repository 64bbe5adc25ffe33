//! Command-line parsing into a [`CliConfig`].

use std::path::PathBuf;

use egk_core::sampling::{Seed, SEED_LEN};

use crate::{hex_decode, CliError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Keygen,
    Encrypt,
    Decrypt,
    Encaps,
    Decaps,
    Estimate,
    Sizes,
    MrdExperiment,
}

impl Command {
    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "keygen" => Self::Keygen,
            "encrypt" => Self::Encrypt,
            "decrypt" => Self::Decrypt,
            "encaps" => Self::Encaps,
            "decaps" => Self::Decaps,
            "estimate" => Self::Estimate,
            "sizes" => Self::Sizes,
            "mrd-experiment" => Self::MrdExperiment,
            _ => return None,
        })
    }
}

/// Encoding of artifact files written by the CLI.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Bin,
    Hex,
}

/// Shape of the distance experiment.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MrdArgs {
    pub m: Option<usize>,
    pub n1: Option<usize>,
    pub k1: Option<usize>,
    pub t1: Option<usize>,
    pub n2: Option<usize>,
    pub k2: Option<usize>,
    pub t2: Option<usize>,
    pub structured: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliConfig {
    pub command: Command,
    /// Registry id or path of a key=value parameter file.
    pub params: Option<String>,
    pub seed: Option<Seed>,
    pub deterministic: bool,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub input: Option<PathBuf>,
    pub pk: Option<PathBuf>,
    pub sk: Option<PathBuf>,
    pub trials: Option<usize>,
    pub mrd: MrdArgs,
    pub verbose: bool,
}

pub const USAGE: &str = "\
usage: egk <command> [flags]

commands:
  keygen          --params ID|FILE [--out PREFIX]          writes PREFIX.pk and PREFIX.sk
  encrypt         --pk FILE --in MSG --out CT
  decrypt         --pk FILE --sk FILE --in CT [--out MSG]
  encaps          --pk FILE --out FILE                     prints the shared key
  decaps          --pk FILE --sk FILE --in FILE            prints the shared key, exit 3 on reject
  estimate        [--params ID|FILE]                       all registry rows when omitted
  sizes                                                    pk/ct sizes of every registry row
  mrd-experiment  --m M --n1 N --k1 K [--t1 T] --n2 N --k2 K [--t2 T] [--trials N] [--structured]

flags:
  --params ID|FILE     registry row 1..9 or a key=value parameter file
  --deterministic      take all randomness from --seed
  --seed HEX           40-byte seed as 80 hex digits (needs --deterministic)
  --format hex|bin     encoding of written artifacts (default bin; reading accepts both)
  --out PATH  --in PATH  --pk PATH  --sk PATH  --trials N  --verbose

exit codes: 0 ok, 1 i/o error, 2 usage or format error, 3 reject, 4 invariant breach";

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn number(flag: &str, v: &str) -> Result<usize> {
    v.parse().map_err(|_| usage(format!("{flag} expects a non-negative integer, got {v:?}")))
}

/// Parses the arguments after the program name.
pub fn parse_args<I: IntoIterator<Item = String>>(args: I) -> Result<CliConfig> {
    let mut it = args.into_iter();
    let cmd = it.next().ok_or_else(|| usage("missing command"))?;
    let command = Command::parse(&cmd).ok_or_else(|| usage(format!("unknown command {cmd:?}")))?;
    let mut cfg = CliConfig {
        command,
        params: None,
        seed: None,
        deterministic: false,
        format: Format::Bin,
        out: None,
        input: None,
        pk: None,
        sk: None,
        trials: None,
        mrd: MrdArgs::default(),
        verbose: false,
    };
    let rest: Vec<String> = it.collect();
    let mut i = 0;
    while i < rest.len() {
        let arg = &rest[i];
        let (flag, inline) = match arg.split_once('=') {
            Some((f, v)) if f.starts_with("--") => (f.to_string(), Some(v.to_string())),
            _ => (arg.clone(), None),
        };
        match flag.as_str() {
            "--deterministic" | "--structured" | "--verbose" => {
                if inline.is_some() {
                    return Err(usage(format!("{flag} takes no value")));
                }
                match flag.as_str() {
                    "--deterministic" => cfg.deterministic = true,
                    "--structured" => cfg.mrd.structured = true,
                    _ => cfg.verbose = true,
                }
                i += 1;
                continue;
            }
            _ => {}
        }
        if !flag.starts_with("--") {
            return Err(usage(format!("unexpected argument {arg:?}")));
        }
        let value = match inline {
            Some(v) => v,
            None => {
                i += 1;
                rest.get(i).cloned().ok_or_else(|| usage(format!("{flag} needs a value")))?
            }
        };
        match flag.as_str() {
            "--params" => cfg.params = Some(value),
            "--seed" => cfg.seed = Some(parse_seed(&value)?),
            "--format" => {
                cfg.format = match value.as_str() {
                    "hex" => Format::Hex,
                    "bin" => Format::Bin,
                    _ => return Err(usage(format!("--format expects hex or bin, got {value:?}"))),
                }
            }
            "--out" => cfg.out = Some(value.into()),
            "--in" => cfg.input = Some(value.into()),
            "--pk" => cfg.pk = Some(value.into()),
            "--sk" => cfg.sk = Some(value.into()),
            "--trials" => cfg.trials = Some(number(&flag, &value)?),
            "--m" => cfg.mrd.m = Some(number(&flag, &value)?),
            "--n1" => cfg.mrd.n1 = Some(number(&flag, &value)?),
            "--k1" => cfg.mrd.k1 = Some(number(&flag, &value)?),
            "--t1" => cfg.mrd.t1 = Some(number(&flag, &value)?),
            "--n2" => cfg.mrd.n2 = Some(number(&flag, &value)?),
            "--k2" => cfg.mrd.k2 = Some(number(&flag, &value)?),
            "--t2" => cfg.mrd.t2 = Some(number(&flag, &value)?),
            _ => return Err(usage(format!("unknown flag {flag}"))),
        }
        i += 1;
    }
    if cfg.seed.is_some() && !cfg.deterministic {
        return Err(usage("--seed is only accepted together with --deterministic"));
    }
    if cfg.deterministic && cfg.seed.is_none() {
        return Err(usage("--deterministic needs --seed"));
    }
    Ok(cfg)
}

fn parse_seed(s: &str) -> Result<Seed> {
    if s.len() != 2 * SEED_LEN {
        return Err(usage(format!("--seed expects {} hex digits, got {}", 2 * SEED_LEN, s.len())));
    }
    let bytes = hex_decode(s).ok_or_else(|| usage("--seed is not valid hex"))?;
    let mut seed = [0u8; SEED_LEN];
    seed.copy_from_slice(&bytes);
    Ok(seed)
}
