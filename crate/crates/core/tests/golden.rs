//! Byte-for-byte golden fixtures for keys and ciphertexts under fixed seeds.
//! Set `EGK_REGEN_FIXTURES=1` to rewrite them after an intended format change.

use std::fmt::Write as _;
use std::path::PathBuf;

use egk_core::sampling::{Expander, Seed, SEED_LEN};
use egk_core::schemes::Scheme;
use sha2::{Digest, Sha256};

const FULL_ROWS: [u8; 3] = [1, 4, 7];

fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn fixed_seed(tag: u8, row: u8) -> Seed {
    let mut s = [0u8; SEED_LEN];
    for (i, b) in s.iter_mut().enumerate() {
        *b = tag.wrapping_mul(31).wrapping_add(row).wrapping_add(i as u8);
    }
    s
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().fold(String::with_capacity(2 * bytes.len()), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

/// (pk, sk, ct) for a registry row under the fixed seeds.
fn artifacts(row: u8) -> [(String, Vec<u8>); 3] {
    let s = Scheme::from_row(row).unwrap();
    let (pk, sk) = s.keygen(&fixed_seed(1, row), &fixed_seed(2, row)).unwrap();
    let msg = Expander::new(&fixed_seed(4, row), egk_core::sampling::Domain::Kem).vector(s.field(), s.params().k());
    let ct = s.encrypt(&pk, &msg, &fixed_seed(3, row)).unwrap();
    [
        (format!("row{row}_pk"), s.serialize_pk(&pk).unwrap()),
        (format!("row{row}_sk"), s.serialize_sk(&sk)),
        (format!("row{row}_ct"), s.serialize_ct(&ct).unwrap()),
    ]
}

fn digest_table() -> String {
    let mut out = String::new();
    for row in 1..=9u8 {
        for (name, bytes) in artifacts(row) {
            let _ = writeln!(out, "{name} {}", hex(&Sha256::digest(&bytes)));
        }
    }
    out
}

#[test]
fn golden_fixtures_are_stable() {
    let dir = fixture_dir();
    let regen = std::env::var_os("EGK_REGEN_FIXTURES").is_some_and(|v| v == "1");
    if regen {
        std::fs::create_dir_all(&dir).unwrap();
    }
    for row in FULL_ROWS {
        for (name, bytes) in artifacts(row) {
            let path = dir.join(format!("{name}.hex"));
            if regen {
                std::fs::write(&path, hex(&bytes) + "\n").unwrap();
            }
            let want = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            assert!(want.trim() == hex(&bytes), "{name} differs from its golden fixture");
        }
    }
    let path = dir.join("digests.txt");
    let table = digest_table();
    if regen {
        std::fs::write(&path, &table).unwrap();
    }
    let want = std::fs::read_to_string(&path).unwrap();
    for (w, g) in want.lines().zip(table.lines()) {
        assert_eq!(w, g);
    }
    assert_eq!(want.lines().count(), table.lines().count());
}

#[test]
fn golden_fixtures_deserialize() {
    for row in FULL_ROWS {
        let s = Scheme::from_row(row).unwrap();
        let read = |kind: &str| {
            let text = std::fs::read_to_string(fixture_dir().join(format!("row{row}_{kind}.hex"))).unwrap();
            let t = text.trim();
            (0..t.len()).step_by(2).map(|i| u8::from_str_radix(&t[i..i + 2], 16).unwrap()).collect::<Vec<u8>>()
        };
        let pk = s.deserialize_pk(&read("pk")).unwrap();
        let sk = s.deserialize_sk(&read("sk")).unwrap();
        let ct = s.deserialize_ct(&read("ct")).unwrap();
        let msg = Expander::new(&fixed_seed(4, row), egk_core::sampling::Domain::Kem).vector(s.field(), s.params().k());
        assert_eq!(s.decrypt(&sk, &pk, &ct).unwrap(), msg);
    }
}
