//! Hash-then-re-encrypt KEM with explicit rejection over any of the schemes.

use sha2::{Digest, Sha512};

use crate::error::{Error, Result};
use crate::galois::FieldElement;
use crate::sampling::{Domain, Expander, Seed, SEED_LEN};

use super::wire::HEADER_LEN;
use super::{Ciphertext, PublicKey, Scheme, SecretKey};

pub const KEY_LEN: usize = 64;
pub const COMMIT_LEN: usize = 64;

const PREFIX_THETA: u8 = 0x47;
const PREFIX_COMMIT: u8 = 0x48;
const PREFIX_KEY: u8 = 0x4B;

/// Output of encapsulation: ciphertext, commitment d = ℋ(m) and key K.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KemOutput {
    pub ct: Ciphertext,
    pub d: [u8; COMMIT_LEN],
    pub key: [u8; KEY_LEN],
}

fn sha512(parts: &[&[u8]]) -> [u8; 64] {
    let mut h = Sha512::new();
    for p in parts {
        h.update(p);
    }
    h.finalize().into()
}

impl Scheme {
    /// Concatenated ⌈m/8⌉-byte encodings of the message elements.
    fn message_bytes(&self, msg: &[FieldElement]) -> Vec<u8> {
        msg.iter().flat_map(|&a| self.field.to_bytes(a)).collect()
    }

    /// θ = 𝒢(m), the first 40 bytes of SHA-512(0x47 ‖ m).
    pub fn kem_theta(&self, msg: &[FieldElement]) -> Seed {
        let digest = sha512(&[&[PREFIX_THETA], &self.message_bytes(msg)]);
        let mut theta = [0u8; SEED_LEN];
        theta.copy_from_slice(&digest[..SEED_LEN]);
        theta
    }

    /// d = ℋ(m) = SHA-512(0x48 ‖ m).
    pub fn kem_commit(&self, msg: &[FieldElement]) -> [u8; COMMIT_LEN] {
        sha512(&[&[PREFIX_COMMIT], &self.message_bytes(msg)])
    }

    /// K = 𝒦(m, c) = SHA-512(0x4B ‖ m ‖ c), c the ciphertext payload.
    pub fn kem_key(&self, msg: &[FieldElement], ct: &Ciphertext) -> Result<[u8; KEY_LEN]> {
        Ok(sha512(&[&[PREFIX_KEY], &self.message_bytes(msg), &self.ct_payload(ct)?]))
    }

    /// Encapsulates to `pk` with m drawn from `seed` (domain 0x04).
    pub fn encapsulate(&self, pk: &PublicKey, seed: &Seed) -> Result<KemOutput> {
        let msg = Expander::new(seed, Domain::Kem).vector(&self.field, self.params.k());
        self.encapsulate_message(pk, &msg)
    }

    /// Encapsulation of a chosen message.
    pub fn encapsulate_message(&self, pk: &PublicKey, msg: &[FieldElement]) -> Result<KemOutput> {
        let ct = self.encrypt(pk, msg, &self.kem_theta(msg))?;
        let d = self.kem_commit(msg);
        let key = self.kem_key(msg, &ct)?;
        Ok(KemOutput { ct, d, key })
    }

    /// Decapsulation; any decoding failure, re-encryption mismatch or
    /// commitment mismatch is reported as [`Error::Reject`].
    pub fn decapsulate(&self, sk: &SecretKey, pk: &PublicKey, ct: &Ciphertext, d: &[u8; COMMIT_LEN]) -> Result<[u8; KEY_LEN]> {
        let msg = match self.decrypt(sk, pk, ct) {
            Ok(m) => m,
            Err(Error::Decode(_)) => return Err(Error::Reject),
            Err(e) => return Err(e),
        };
        let again = self.encrypt(pk, &msg, &self.kem_theta(&msg))?;
        let commit = self.kem_commit(&msg);
        let same_commit = commit.iter().zip(d).fold(0u8, |acc, (a, b)| acc | (a ^ b)) == 0;
        if again != *ct || !same_commit {
            return Err(Error::Reject);
        }
        self.kem_key(&msg, ct)
    }

    /// KEM ciphertext file: serialized ciphertext followed by d.
    pub fn serialize_kem(&self, out: &KemOutput) -> Result<Vec<u8>> {
        let mut bytes = self.serialize_ct(&out.ct)?;
        bytes.extend_from_slice(&out.d);
        Ok(bytes)
    }

    /// Decapsulates a serialized KEM ciphertext; malformed input after a
    /// valid header is rejected.
    pub fn decapsulate_bytes(&self, sk: &SecretKey, pk: &PublicKey, bytes: &[u8]) -> Result<[u8; KEY_LEN]> {
        super::wire::strip_header(&self.params, bytes)?;
        let expected = HEADER_LEN + self.params.ct_bytes() + COMMIT_LEN;
        if bytes.len() != expected {
            return Err(Error::Reject);
        }
        let (ct_bytes, d) = bytes.split_at(expected - COMMIT_LEN);
        let ct = self.deserialize_ct(ct_bytes).map_err(|_| Error::Reject)?;
        let d: [u8; COMMIT_LEN] = d.try_into().expect("split at the commitment length");
        self.decapsulate(sk, pk, &ct, &d)
    }
}
