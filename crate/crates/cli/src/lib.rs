//! The `egk` command-line tool: key generation, encryption, the KEM, the
//! size audit, security estimates and the brute-force distance experiment.
//!
//! Fresh randomness is read from the operating system and expanded through
//! the seed expander, so every command is reproducible under
//! `--deterministic --seed`.

pub mod args;
pub mod estimate_out;
pub mod params_file;

use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use egk_core::mrd::{run_experiment, MrdConfig};
use egk_core::sampling::{Expander, Seed, SEED_LEN};
use egk_core::schemes::kem::KEY_LEN;
use egk_core::schemes::wire::{parse_header, HEADER_LEN, MAGIC};
use egk_core::schemes::{by_id, registry, Scheme, SchemeParams};
use egk_core::FieldElement;
use thiserror::Error;

pub use args::{parse_args, CliConfig, Command, Format, USAGE};
pub use estimate_out::{EstimateOutput, SchemeEstimate};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("format error: {0}")]
    Format(String),
    #[error("rejected: {0}")]
    Reject(String),
    #[error("invariant breach: {0}")]
    Invariant(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Io(_) => 1,
            Self::Usage(_) | Self::Format(_) => 2,
            Self::Reject(_) => 3,
            Self::Invariant(_) => 4,
        }
    }
}

impl From<egk_core::Error> for CliError {
    fn from(e: egk_core::Error) -> Self {
        use egk_core::Error as E;
        match e {
            E::Format { .. } => Self::Format(e.to_string()),
            E::Reject | E::Decode(_) => Self::Reject(e.to_string()),
            E::Param(_) | E::TooLarge(_) => Self::Usage(e.to_string()),
            _ => Self::Invariant(e.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

pub fn hex_encode(bytes: &[u8]) -> String {
    bytes.iter().fold(String::with_capacity(2 * bytes.len()), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

pub fn hex_decode(s: &str) -> Option<Vec<u8>> {
    let s = s.trim();
    if s.len() % 2 != 0 || !s.bytes().all(|b| b.is_ascii_hexdigit()) {
        return None;
    }
    (0..s.len()).step_by(2).map(|i| u8::from_str_radix(&s[i..i + 2], 16).ok()).collect()
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

fn read_raw(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| io_err(path, e))
}

/// Reads an artifact in either encoding: binary files start with the magic,
/// anything else must be hex.
pub fn read_artifact(path: &Path) -> Result<Vec<u8>> {
    let raw = read_raw(path)?;
    if raw.starts_with(MAGIC) {
        return Ok(raw);
    }
    let text = std::str::from_utf8(&raw).map_err(|_| CliError::Format(format!("{}: neither binary nor hex", path.display())))?;
    hex_decode(text).ok_or_else(|| CliError::Format(format!("{}: neither binary nor hex", path.display())))
}

pub fn write_artifact(path: &Path, bytes: &[u8], format: Format) -> Result<()> {
    let data = match format {
        Format::Bin => bytes.to_vec(),
        Format::Hex => (hex_encode(bytes) + "\n").into_bytes(),
    };
    std::fs::write(path, data).map_err(|e| io_err(path, e))
}

fn required<'a>(p: &'a Option<PathBuf>, flag: &str) -> Result<&'a PathBuf> {
    p.as_ref().ok_or_else(|| CliError::Usage(format!("missing {flag}")))
}

/// Resolves `--params` as a registry id or a parameter file.
pub fn resolve_params(spec: &str) -> Result<SchemeParams> {
    if let Ok(id) = spec.parse::<u8>() {
        return by_id(id).map_err(|e| CliError::Usage(e.to_string()));
    }
    let path = Path::new(spec);
    if !path.exists() {
        return Err(CliError::Usage(format!("--params {spec:?} is neither a row id 1..9 nor a file")));
    }
    let text = String::from_utf8(read_raw(path)?).map_err(|_| CliError::Format("parameter file is not UTF-8".into()))?;
    params_file::parse_params(&text)
}

/// Parameters from `--params`, or from the header of `artifact` when the
/// flag is absent and the artifact names a registry row.
fn scheme_for(cfg: &CliConfig, artifact: Option<&[u8]>) -> Result<Scheme> {
    let params = match (&cfg.params, artifact) {
        (Some(spec), _) => resolve_params(spec)?,
        (None, Some(bytes)) => {
            let (_, row) = parse_header(bytes)?;
            if row == 0 {
                return Err(CliError::Usage("artifact uses custom parameters; pass --params FILE".into()));
            }
            by_id(row).map_err(|e| CliError::Format(e.to_string()))?
        }
        (None, None) => return Err(CliError::Usage("missing --params".into())),
    };
    Ok(Scheme::new(params).map_err(|e| CliError::Usage(e.to_string()))?)
}

/// 40 bytes from the operating system's random source.
fn os_seed() -> Result<Seed> {
    let path = Path::new("/dev/urandom");
    let mut f = std::fs::File::open(path).map_err(|e| io_err(path, e))?;
    let mut seed = [0u8; SEED_LEN];
    f.read_exact(&mut seed).map_err(|e| io_err(path, e))?;
    Ok(seed)
}

/// Per-purpose seeds expanded from one master seed.
struct Seeds {
    master: Seed,
}

impl Seeds {
    fn new(cfg: &CliConfig) -> Result<Self> {
        let master = match cfg.seed {
            Some(s) if cfg.deterministic => s,
            _ => os_seed()?,
        };
        Ok(Self { master })
    }

    fn derive(&self, purpose: u8) -> Seed {
        let mut out = [0u8; SEED_LEN];
        Expander::with_tag(&self.master, 0xC0 | purpose).fill(&mut out);
        out
    }
}

/// Encodes a message file as k field elements of ⌈m/8⌉ little-endian bytes
/// each; a short file is zero-padded.
pub fn message_from_bytes(scheme: &Scheme, bytes: &[u8]) -> Result<Vec<FieldElement>> {
    let field = scheme.field();
    let width = field.byte_len();
    let k = scheme.params().k();
    if bytes.len() > k * width {
        return Err(CliError::Usage(format!("message is {} bytes, at most k·⌈m/8⌉ = {} allowed", bytes.len(), k * width)));
    }
    let mut padded = bytes.to_vec();
    padded.resize(k * width, 0);
    padded
        .chunks(width)
        .enumerate()
        .map(|(i, c)| field.from_bytes(c).map_err(|_| CliError::Format(format!("message element {i} has nonzero pad bits"))))
        .collect()
}

pub fn message_to_bytes(scheme: &Scheme, msg: &[FieldElement]) -> Vec<u8> {
    msg.iter().flat_map(|&a| scheme.field().to_bytes(a)).collect()
}

/// Runs one command, writing its report to `out`.
pub fn run(cfg: &CliConfig, out: &mut dyn Write) -> Result<()> {
    match cfg.command {
        Command::Keygen => keygen(cfg, out),
        Command::Encrypt => encrypt(cfg, out),
        Command::Decrypt => decrypt(cfg, out),
        Command::Encaps => encaps(cfg, out),
        Command::Decaps => decaps(cfg, out),
        Command::Estimate => estimate(cfg, out),
        Command::Sizes => sizes(out),
        Command::MrdExperiment => mrd_experiment(cfg, out),
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string()))
}

fn keygen(cfg: &CliConfig, out: &mut dyn Write) -> Result<()> {
    let scheme = scheme_for(cfg, None)?;
    let seeds = Seeds::new(cfg)?;
    let (pk, sk) = scheme.keygen(&seeds.derive(1), &seeds.derive(2))?;
    let pk_bytes = scheme.serialize_pk(&pk)?;
    let sk_bytes = scheme.serialize_sk(&sk);
    let prefix = cfg.out.clone().unwrap_or_else(|| PathBuf::from("egk"));
    let pk_path = PathBuf::from(format!("{}.pk", prefix.display()));
    let sk_path = PathBuf::from(format!("{}.sk", prefix.display()));
    write_artifact(&pk_path, &pk_bytes, cfg.format)?;
    write_artifact(&sk_path, &sk_bytes, cfg.format)?;
    emit(
        out,
        &format!(
            "scheme={}\npk={};bytes={}\nsk={};bytes={}\n",
            scheme.params().label(),
            pk_path.display(),
            pk_bytes.len(),
            sk_path.display(),
            sk_bytes.len()
        ),
    )
}

fn load_pk(cfg: &CliConfig) -> Result<(Scheme, egk_core::schemes::PublicKey)> {
    let bytes = read_artifact(required(&cfg.pk, "--pk")?)?;
    let scheme = scheme_for(cfg, Some(&bytes))?;
    let pk = scheme.deserialize_pk(&bytes)?;
    Ok((scheme, pk))
}

fn load_sk(cfg: &CliConfig, scheme: &Scheme) -> Result<egk_core::schemes::SecretKey> {
    Ok(scheme.deserialize_sk(&read_artifact(required(&cfg.sk, "--sk")?)?)?)
}

fn encrypt(cfg: &CliConfig, out: &mut dyn Write) -> Result<()> {
    let (scheme, pk) = load_pk(cfg)?;
    let msg = message_from_bytes(&scheme, &read_raw(required(&cfg.input, "--in")?)?)?;
    let seeds = Seeds::new(cfg)?;
    let ct = scheme.encrypt(&pk, &msg, &seeds.derive(3))?;
    let bytes = scheme.serialize_ct(&ct)?;
    let path = required(&cfg.out, "--out")?;
    write_artifact(path, &bytes, cfg.format)?;
    emit(out, &format!("ct={};bytes={}\n", path.display(), bytes.len()))
}

fn decrypt(cfg: &CliConfig, out: &mut dyn Write) -> Result<()> {
    let (scheme, pk) = load_pk(cfg)?;
    let sk = load_sk(cfg, &scheme)?;
    let ct = scheme.deserialize_ct(&read_artifact(required(&cfg.input, "--in")?)?)?;
    let msg = message_to_bytes(&scheme, &scheme.decrypt(&sk, &pk, &ct)?);
    match &cfg.out {
        Some(path) => {
            std::fs::write(path, &msg).map_err(|e| io_err(path, e))?;
            emit(out, &format!("msg={};bytes={}\n", path.display(), msg.len()))
        }
        None => emit(out, &format!("msg={}\n", hex_encode(&msg))),
    }
}

fn encaps(cfg: &CliConfig, out: &mut dyn Write) -> Result<()> {
    let (scheme, pk) = load_pk(cfg)?;
    let seeds = Seeds::new(cfg)?;
    let kem = scheme.encapsulate(&pk, &seeds.derive(4))?;
    let bytes = scheme.serialize_kem(&kem)?;
    let path = required(&cfg.out, "--out")?;
    write_artifact(path, &bytes, cfg.format)?;
    emit(out, &format!("key={}\nct={};bytes={}\n", hex_encode(&kem.key), path.display(), bytes.len()))
}

fn decaps(cfg: &CliConfig, out: &mut dyn Write) -> Result<()> {
    let (scheme, pk) = load_pk(cfg)?;
    let sk = load_sk(cfg, &scheme)?;
    let bytes = read_artifact(required(&cfg.input, "--in")?)?;
    let key: [u8; KEY_LEN] = scheme.decapsulate_bytes(&sk, &pk, &bytes)?;
    emit(out, &format!("key={}\n", hex_encode(&key)))
}

/// Estimates for `--params`, or for every registry row.
pub fn estimate_output(cfg: &CliConfig) -> Result<EstimateOutput> {
    let rows = match &cfg.params {
        Some(spec) => vec![resolve_params(spec)?],
        None => registry(),
    };
    Ok(EstimateOutput { schemes: rows.iter().map(|p| SchemeEstimate::compute(p, egk_estimator::DEFAULT_OMEGA)).collect() })
}

fn estimate(cfg: &CliConfig, out: &mut dyn Write) -> Result<()> {
    emit(out, &estimate_output(cfg)?.to_string())
}

/// One line per registry row: computed sizes, the published pair and
/// whether they agree.
pub fn sizes_table() -> (String, bool) {
    let mut text = String::new();
    let mut all = true;
    for p in registry() {
        let (pk, ct) = (p.pk_bytes(), p.ct_bytes());
        let ok = p.published_sizes == Some((pk, ct));
        all &= ok;
        let published = p.published_sizes.map_or("none".to_string(), |(a, b)| format!("{a}/{b}"));
        let _ = writeln!(
            text,
            "row={};scheme={};pk={pk};ct={ct};total={};published={published};match={};header={HEADER_LEN}",
            p.row,
            p.label(),
            pk + ct,
            u8::from(ok)
        );
    }
    (text, all)
}

fn sizes(out: &mut dyn Write) -> Result<()> {
    let (text, ok) = sizes_table();
    emit(out, &text)?;
    if ok {
        Ok(())
    } else {
        Err(CliError::Invariant("computed sizes differ from the published values".into()))
    }
}

fn mrd_experiment(cfg: &CliConfig, out: &mut dyn Write) -> Result<()> {
    let a = &cfg.mrd;
    let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| CliError::Usage(format!("mrd-experiment needs {flag}")));
    let m = need(a.m, "--m")?;
    let k1 = need(a.k1, "--k1")?;
    let seeds = Seeds::new(cfg)?;
    let mc = MrdConfig {
        m,
        n1: need(a.n1, "--n1")?,
        k1,
        t1: a.t1.unwrap_or(k1),
        n2: need(a.n2, "--n2")?,
        k2: need(a.k2, "--k2")?,
        t2: a.t2.unwrap_or(m),
        trials: cfg.trials.unwrap_or(50),
        seed: seeds.derive(5),
        structured: a.structured,
    };
    let s = run_experiment(&mc)?;
    let opt = |v: Option<usize>| v.map_or("none".to_string(), |x| x.to_string());
    let (lo, hi) = s.bounds.map_or((None, None), |(l, h)| (Some(l), Some(h)));
    emit(
        out,
        &format!(
            "regime={:?};trials={};min_d={};max_d={};lower={};upper={};violations={};attains_lower={};attains_upper={}\n",
            s.regime,
            s.instances.len(),
            opt(s.min_d()),
            opt(s.max_d()),
            opt(lo),
            opt(hi),
            s.violations(),
            u8::from(s.attains_lower()),
            u8::from(s.attains_upper())
        ),
    )?;
    if cfg.verbose {
        for (i, inst) in s.instances.iter().enumerate() {
            emit(out, &format!("trial={i};d={};structured={}\n", inst.d, u8::from(inst.structured)))?;
        }
    }
    if s.violations() > 0 {
        return Err(CliError::Invariant(format!("{} instances violate the proven bounds", s.violations())));
    }
    Ok(())
}
