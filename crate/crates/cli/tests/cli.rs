//! End-to-end runs of the `egk` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use egk_cli::{EstimateOutput, SchemeEstimate};
use egk_core::schemes::wire::HEADER_LEN;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

const SEED: &str = "000102030405060708090a0b0c0d0e0f101112131415161718191a1b1c1d1e1f2021222324252627";

fn egk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_egk")).args(args).output().expect("run egk")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn workdir(name: &str) -> PathBuf {
    let d = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    let _ = std::fs::remove_dir_all(&d);
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn keygen(dir: &Path, row: &str, name: &str, extra: &[&str]) -> PathBuf {
    let prefix = dir.join(name);
    let mut args = vec!["keygen", "--params", row, "--out", s(&prefix)];
    args.extend_from_slice(extra);
    let o = egk(&args);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    prefix
}

fn with_ext(p: &Path, ext: &str) -> PathBuf {
    PathBuf::from(format!("{}.{ext}", p.display()))
}

#[test]
fn keygen_sizes_and_determinism() {
    let dir = workdir("keygen");
    let a = keygen(&dir, "1", "a", &["--deterministic", "--seed", SEED]);
    let b = keygen(&dir, "1", "b", &["--deterministic", "--seed", SEED]);
    let pk = std::fs::read(with_ext(&a, "pk")).unwrap();
    assert_eq!(pk.len(), 3949 + HEADER_LEN);
    assert_eq!(pk, std::fs::read(with_ext(&b, "pk")).unwrap());
    assert_eq!(std::fs::read(with_ext(&a, "sk")).unwrap(), std::fs::read(with_ext(&b, "sk")).unwrap());
    let c = keygen(&dir, "1", "c", &[]);
    assert_ne!(pk, std::fs::read(with_ext(&c, "pk")).unwrap());
}

#[test]
fn unknown_row_and_bad_flags() {
    assert_eq!(code(&egk(&["keygen", "--params", "12"])), 2);
    assert_eq!(code(&egk(&["keygen", "--params", "1", "--seed", SEED])), 2);
    assert_eq!(code(&egk(&["bogus"])), 2);
    assert_eq!(code(&egk(&["sizes", "--format", "pem"])), 2);
}

#[test]
fn encrypt_decrypt_round_trip() {
    let dir = workdir("pke");
    let mut rng = ChaCha20Rng::seed_from_u64(5);
    for (row, m) in [("1", 53usize), ("4", 85), ("7", 85)] {
        let prefix = keygen(&dir, row, &format!("k{row}"), &["--format", "hex"]);
        let width = m.div_ceil(8);
        // Random elements with the pad bits of each chunk cleared.
        let k = egk_core::schemes::by_id(row.parse().unwrap()).unwrap().k();
        let mut msg = vec![0u8; k * width];
        rng.fill(&mut msg[..]);
        for chunk in msg.chunks_mut(width) {
            chunk[width - 1] &= (1u8 << (m - 8 * (width - 1))) - 1;
        }
        let (mfile, ct, back) = (dir.join(format!("m{row}")), dir.join(format!("c{row}")), dir.join(format!("b{row}")));
        std::fs::write(&mfile, &msg).unwrap();
        let pk = with_ext(&prefix, "pk");
        let sk = with_ext(&prefix, "sk");
        assert_eq!(code(&egk(&["encrypt", "--pk", s(&pk), "--in", s(&mfile), "--out", s(&ct)])), 0);
        let o = egk(&["decrypt", "--pk", s(&pk), "--sk", s(&sk), "--in", s(&ct), "--out", s(&back)]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(std::fs::read(&back).unwrap(), msg, "row {row}");
        // A short message is zero-padded.
        std::fs::write(&mfile, b"hi").unwrap();
        assert_eq!(code(&egk(&["encrypt", "--pk", s(&pk), "--in", s(&mfile), "--out", s(&ct)])), 0);
        let out = stdout(&egk(&["decrypt", "--pk", s(&pk), "--sk", s(&sk), "--in", s(&ct)]));
        assert!(out.starts_with("msg=6869000000"), "{out}");
        // One byte too many is a usage error.
        std::fs::write(&mfile, vec![0u8; k * width + 1]).unwrap();
        assert_eq!(code(&egk(&["encrypt", "--pk", s(&pk), "--in", s(&mfile), "--out", s(&ct)])), 2);
    }
}

#[test]
fn kem_agreement_and_tampering() {
    let dir = workdir("kem");
    let prefix = keygen(&dir, "7", "k", &[]);
    let (pk, sk, ct) = (with_ext(&prefix, "pk"), with_ext(&prefix, "sk"), dir.join("ct"));
    let enc = egk(&["encaps", "--pk", s(&pk), "--out", s(&ct)]);
    assert_eq!(code(&enc), 0);
    let key = stdout(&enc).lines().next().unwrap().to_string();
    let dec = egk(&["decaps", "--pk", s(&pk), "--sk", s(&sk), "--in", s(&ct)]);
    assert_eq!(code(&dec), 0);
    assert_eq!(stdout(&dec).trim(), key);
    let bytes = std::fs::read(&ct).unwrap();
    for pos in [HEADER_LEN, bytes.len() / 2, bytes.len() - 1] {
        let mut t = bytes.clone();
        t[pos] ^= 0x80;
        let bad = dir.join("bad");
        std::fs::write(&bad, &t).unwrap();
        assert_eq!(code(&egk(&["decaps", "--pk", s(&pk), "--sk", s(&sk), "--in", s(&bad)])), 3, "flip at {pos}");
    }
    // A ciphertext for another row is refused as a format error.
    let other = keygen(&dir, "8", "o", &[]);
    let oct = dir.join("oct");
    assert_eq!(code(&egk(&["encaps", "--pk", s(&with_ext(&other, "pk")), "--out", s(&oct)])), 0);
    assert_eq!(code(&egk(&["decaps", "--pk", s(&pk), "--sk", s(&sk), "--in", s(&oct)])), 2);
}

#[test]
fn parameter_files() {
    let dir = workdir("params");
    let mut p = egk_core::schemes::by_id(4).unwrap();
    p.row = 0;
    p.published_sizes = None;
    let file = dir.join("nh.params");
    std::fs::write(&file, egk_cli::params_file::format_params(&p)).unwrap();
    let prefix = keygen(&dir, s(&file), "k", &[]);
    let (pk, ct, mfile) = (with_ext(&prefix, "pk"), dir.join("ct"), dir.join("m"));
    std::fs::write(&mfile, b"abc").unwrap();
    assert_eq!(code(&egk(&["encrypt", "--pk", s(&pk), "--in", s(&mfile), "--out", s(&ct)])), 2);
    assert_eq!(code(&egk(&["encrypt", "--params", s(&file), "--pk", s(&pk), "--in", s(&mfile), "--out", s(&ct)])), 0);
    let est = egk(&["estimate", "--params", s(&file)]);
    assert_eq!(code(&est), 0);
    assert!(stdout(&est).starts_with("scheme=Multi-NH-custom;claimed=128"));
}

#[test]
fn estimate_output_parses_back_and_is_deterministic() {
    let a = egk(&["estimate", "--params", "1"]);
    assert_eq!(code(&a), 0);
    let text = stdout(&a);
    assert_eq!(text, stdout(&egk(&["estimate", "--params", "1"])));
    let parsed = EstimateOutput::parse(&text).expect("parse");
    assert_eq!(parsed.to_string(), text);
    let s: &SchemeEstimate = &parsed.schemes[0];
    assert!(s.min_bits.is_finite() && s.weakest.is_some());
    assert!(s.families() >= 2);
}

#[test]
fn sizes_table() {
    let o = egk(&["sizes"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 9);
    for line in text.lines() {
        let get = |k: &str| -> usize {
            line.split(';').find_map(|f| f.strip_prefix(&format!("{k}="))).unwrap().parse().unwrap()
        };
        assert_eq!(get("total"), get("pk") + get("ct"));
    }
    assert!(text.lines().nth(6).unwrap().contains("pk=2138;ct=8224"));
}

#[test]
fn mrd_experiment_command() {
    let o = egk(&["mrd-experiment", "--m", "3", "--n1", "2", "--k1", "2", "--n2", "3", "--k2", "1", "--trials", "0"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("trials=0;min_d=none"));
    let o = egk(&["mrd-experiment", "--m", "3", "--n1", "2", "--k1", "2", "--n2", "3", "--k2", "1", "--trials", "8"]);
    assert!(stdout(&o).contains("min_d=3;max_d=3;lower=3;upper=3;violations=0"));
    let big = egk(&["mrd-experiment", "--m", "13", "--n1", "2", "--k1", "2", "--n2", "13", "--k2", "1"]);
    assert_eq!(code(&big), 2);
}
