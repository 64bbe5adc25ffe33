//! The BWE, Multi-NH and Multi-UR public-key encryption schemes over EGK
//! codes, their KEM and the wire format.

pub mod kem;
pub mod params;
pub mod wire;

use std::sync::Arc;

use crate::codes::{EgCode, EgkCode};
use crate::error::{dim, param, Result};
use crate::galois::{Field, FieldElement};
use crate::linalg::Matrix;
use crate::ring::{fold, unfold, Ring};
use crate::sampling::{
    sample_blockwise, sample_generator, sample_nh, Domain, Expander, Seed, SupportMode, SEED_LEN,
};

pub use params::{by_id, registry, SchemeKind, SchemeParams};
use wire::{expect_len, header, strip_header, BitReader, BitWriter, HEADER_LEN};

/// Public key. BWE keeps `seed2`, from which g₁, g₂ and h are re-derived.
/// `h` and `s` are 1×n (BWE), 1×n₂ (Multi-NH) or z×z and z×n₁ (Multi-UR).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PublicKey {
    pub seed2: Option<Seed>,
    pub g1: Vec<FieldElement>,
    pub g2: Vec<FieldElement>,
    pub h: Matrix,
    pub s: Matrix,
}

/// Secret key: the seed from which the secret pair is re-derived.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SecretKey {
    pub seed1: Seed,
}

/// Ciphertext; 1×n rows for BWE, n₂×n₁ matrices for Multi-NH, and n₂×z,
/// n₂×n₁ matrices for Multi-UR.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ciphertext {
    pub u: Matrix,
    pub v: Matrix,
}

/// The secret pair (x, y), shaped like `s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SecretPair {
    pub x: Matrix,
    pub y: Matrix,
}

/// Encryption randomness; `r1`, `r2` and `e` are shaped for the scheme.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncryptionNoise {
    pub r1: Matrix,
    pub e: Matrix,
    pub r2: Matrix,
}

/// A parameter set bound to its field and, for the ring schemes, its ring.
#[derive(Clone, Debug)]
pub struct Scheme {
    params: SchemeParams,
    field: Arc<Field>,
    ring: Option<Ring>,
}

impl Scheme {
    pub fn new(params: SchemeParams) -> Result<Self> {
        params.validate()?;
        let field = Arc::new(Field::new(params.m)?);
        let ring = match params.kind {
            SchemeKind::Bwe => Some(Ring::new(field.clone(), params.n())?),
            SchemeKind::MultiNh => Some(Ring::new(field.clone(), params.n2)?),
            SchemeKind::MultiUr => None,
        };
        Ok(Self { params, field, ring })
    }

    /// Scheme for registry row `id`.
    pub fn from_row(id: u8) -> Result<Self> {
        Self::new(by_id(id)?)
    }

    pub fn params(&self) -> &SchemeParams {
        &self.params
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn ring(&self) -> Option<&Ring> {
        self.ring.as_ref()
    }

    fn ring_ref(&self) -> &Ring {
        self.ring.as_ref().expect("ring schemes construct their ring")
    }

    /// Shape (rows, cols) of s, x and y.
    fn secret_shape(&self) -> (usize, usize) {
        let p = &self.params;
        match p.kind {
            SchemeKind::Bwe => (1, p.n()),
            SchemeKind::MultiNh => (1, p.n2),
            SchemeKind::MultiUr => (p.z, p.n1),
        }
    }

    /// Shape of h.
    fn h_shape(&self) -> (usize, usize) {
        let p = &self.params;
        match p.kind {
            SchemeKind::Bwe => (1, p.n()),
            SchemeKind::MultiNh => (1, p.n2),
            SchemeKind::MultiUr => (p.z, p.z),
        }
    }

    /// Shapes of u and v.
    fn ct_shapes(&self) -> ((usize, usize), (usize, usize)) {
        let p = &self.params;
        match p.kind {
            SchemeKind::Bwe => ((1, p.n()), (1, p.n())),
            SchemeKind::MultiNh => ((p.n2, p.n1), (p.n2, p.n1)),
            SchemeKind::MultiUr => ((p.n2, p.z), (p.n2, p.n1)),
        }
    }

    /// Shape-checked column-major fill.
    fn col_major(rows: usize, cols: usize, v: &[FieldElement]) -> Matrix {
        debug_assert_eq!(v.len(), rows * cols);
        Matrix::from_fn(rows, cols, |i, j| v[j * rows + i])
    }

    /// (x, y) re-derived from seed1.
    pub fn secret_pair(&self, sk: &SecretKey) -> Result<SecretPair> {
        let p = &self.params;
        let (rows, cols) = self.secret_shape();
        let len = rows * cols;
        let mut e = Expander::new(&sk.seed1, Domain::KeygenSecret);
        let xy = sample_blockwise(&mut e, &self.field, &[len, len], &[p.wx, p.wy], SupportMode::Blockwise)?;
        Ok(SecretPair { x: Self::col_major(rows, cols, &xy[..len]), y: Self::col_major(rows, cols, &xy[len..]) })
    }

    /// (g₁, g₂, h) from seed2, in that order.
    pub fn public_randomness(&self, seed2: &Seed) -> Result<(Vec<FieldElement>, Vec<FieldElement>, Matrix)> {
        let p = &self.params;
        let mut e = Expander::new(seed2, Domain::KeygenPublic);
        let g1 = sample_generator(&mut e, &self.field, p.n1, p.t1)?;
        let g2 = sample_generator(&mut e, &self.field, p.n2, p.t2)?;
        let (rows, cols) = self.h_shape();
        let h = Self::col_major(rows, cols, &e.vector(&self.field, rows * cols));
        Ok((g1, g2, h))
    }

    /// s = x + h·y for the ring schemes, S = X + H·Y for Multi-UR.
    fn combine_s(&self, h: &Matrix, pair: &SecretPair) -> Result<Matrix> {
        let hy = match self.params.kind {
            SchemeKind::Bwe | SchemeKind::MultiNh => Matrix::row_vector(&self.ring_ref().mul(h.row(0), pair.y.row(0))?),
            SchemeKind::MultiUr => h.mul(&self.field, &pair.y)?,
        };
        pair.x.add(&hy)
    }

    pub fn keygen(&self, seed1: &Seed, seed2: &Seed) -> Result<(PublicKey, SecretKey)> {
        let sk = SecretKey { seed1: *seed1 };
        let pair = self.secret_pair(&sk)?;
        let (g1, g2, h) = self.public_randomness(seed2)?;
        let s = self.combine_s(&h, &pair)?;
        let seed2 = (self.params.kind == SchemeKind::Bwe).then_some(*seed2);
        Ok((PublicKey { seed2, g1, g2, h, s }, sk))
    }

    /// The EGK code generated by g₁ ⊗ g₂.
    pub fn code(&self, pk: &PublicKey) -> Result<EgkCode> {
        let p = &self.params;
        let c1 = EgCode::with_rank(self.field.clone(), pk.g1.clone(), p.k1, p.t1)?;
        let c2 = EgCode::with_rank(self.field.clone(), pk.g2.clone(), p.k2, p.t2)?;
        EgkCode::new(c1, c2)
    }

    /// (r₁, e, r₂) drawn from θ.
    pub fn noise(&self, theta: &Seed) -> Result<EncryptionNoise> {
        let p = &self.params;
        let mut ex = Expander::new(theta, Domain::Encryption);
        match p.kind {
            SchemeKind::Bwe => {
                let n = p.n();
                let w = [p.w1, p.we, p.w2];
                let v = sample_blockwise(&mut ex, &self.field, &[n, n, n], &w, SupportMode::Blockwise)?;
                Ok(EncryptionNoise {
                    r1: Matrix::row_vector(&v[..n]),
                    e: Matrix::row_vector(&v[n..2 * n]),
                    r2: Matrix::row_vector(&v[2 * n..]),
                })
            }
            SchemeKind::MultiNh => {
                let (r1, e, r2) = sample_nh(&mut ex, &self.field, p.n2, (p.n1, p.n1, p.n1), p.w1, p.w2)?;
                Ok(EncryptionNoise { r1, e, r2 })
            }
            SchemeKind::MultiUr => {
                let (r1, e, r2) = sample_nh(&mut ex, &self.field, p.n2, (p.z, p.n1, p.z), p.w1, p.w2)?;
                Ok(EncryptionNoise { r1, e, r2 })
            }
        }
    }

    /// a·B: ring product for BWE, column-wise ring product for Multi-NH
    /// (with `a` a 1×n₂ row), plain product B·a for Multi-UR.
    fn apply(&self, a: &Matrix, b: &Matrix) -> Result<Matrix> {
        match self.params.kind {
            SchemeKind::Bwe => Ok(Matrix::row_vector(&self.ring_ref().mul(a.row(0), b.row(0))?)),
            SchemeKind::MultiNh => self.ring_ref().vec_mat_mul(a.row(0), b),
            SchemeKind::MultiUr => b.mul(&self.field, a),
        }
    }

    /// mG laid out in the shape of v.
    fn encoded_message(&self, code: &EgkCode, msg: &[FieldElement]) -> Result<Matrix> {
        if let Some(bad) = msg.iter().find(|&&a| !self.field.contains(a)) {
            return param(format!("message element {bad} outside GF(2^{})", self.params.m));
        }
        let c = code.encode(msg)?;
        match self.params.kind {
            SchemeKind::Bwe => Ok(Matrix::row_vector(&c)),
            SchemeKind::MultiNh | SchemeKind::MultiUr => fold(&c, self.params.n2),
        }
    }

    /// Encryption with explicit noise; `encrypt` draws the noise from θ.
    pub fn encrypt_with_noise(&self, pk: &PublicKey, msg: &[FieldElement], noise: &EncryptionNoise) -> Result<Ciphertext> {
        let code = self.code(pk)?;
        let mg = self.encoded_message(&code, msg)?;
        let u = noise.r1.add(&self.apply(&pk.h, &noise.r2)?)?;
        let v = mg.add(&self.apply(&pk.s, &noise.r2)?)?.add(&noise.e)?;
        Ok(Ciphertext { u, v })
    }

    pub fn encrypt(&self, pk: &PublicKey, msg: &[FieldElement], theta: &Seed) -> Result<Ciphertext> {
        self.encrypt_with_noise(pk, msg, &self.noise(theta)?)
    }

    /// The decoder input v − y·u (resp. Unfold(V − y·U), Unfold(V − U·Y)).
    pub fn decoder_input(&self, pair: &SecretPair, ct: &Ciphertext) -> Result<Vec<FieldElement>> {
        self.check_ct(ct)?;
        let w = ct.v.add(&self.apply(&pair.y, &ct.u)?)?;
        Ok(match self.params.kind {
            SchemeKind::Bwe => w.row(0).to_vec(),
            SchemeKind::MultiNh | SchemeKind::MultiUr => unfold(&w),
        })
    }

    pub fn decrypt(&self, sk: &SecretKey, pk: &PublicKey, ct: &Ciphertext) -> Result<Vec<FieldElement>> {
        let pair = self.secret_pair(sk)?;
        self.code(pk)?.decode(&self.decoder_input(&pair, ct)?)
    }

    /// The error term of the decoder input: x·r₂ − y·r₁ + e (resp. its
    /// matrix analogue), unfolded.
    pub fn error_term(&self, pair: &SecretPair, noise: &EncryptionNoise) -> Result<Vec<FieldElement>> {
        let t = self.apply(&pair.x, &noise.r2)?.add(&self.apply(&pair.y, &noise.r1)?)?.add(&noise.e)?;
        Ok(match self.params.kind {
            SchemeKind::Bwe => t.row(0).to_vec(),
            SchemeKind::MultiNh | SchemeKind::MultiUr => unfold(&t),
        })
    }

    fn check_ct(&self, ct: &Ciphertext) -> Result<()> {
        let (us, vs) = self.ct_shapes();
        if (ct.u.rows(), ct.u.cols()) != us || (ct.v.rows(), ct.v.cols()) != vs {
            return dim("ciphertext shape does not match the parameter set");
        }
        Ok(())
    }

    // Serialization.

    pub fn serialize_pk(&self, pk: &PublicKey) -> Result<Vec<u8>> {
        let mut out = header(&self.params).to_vec();
        out.extend(self.pk_payload(pk)?);
        Ok(out)
    }

    fn pk_payload(&self, pk: &PublicKey) -> Result<Vec<u8>> {
        let p = &self.params;
        let f = &*self.field;
        let mut w = BitWriter::new();
        match p.kind {
            SchemeKind::Bwe => {
                let Some(seed2) = pk.seed2 else {
                    return param("BWE public key without seed2");
                };
                w.write_bytes(&seed2);
                w.elements(f, pk.s.row(0));
            }
            SchemeKind::MultiNh | SchemeKind::MultiUr => {
                w.weight_vector(f, &pk.g1, p.t1)?;
                w.weight_vector(f, &pk.g2, p.t2)?;
                w.elements(f, &unfold(&pk.h));
                w.elements(f, &unfold(&pk.s));
            }
        }
        Ok(w.finish())
    }

    pub fn deserialize_pk(&self, bytes: &[u8]) -> Result<PublicKey> {
        let p = &self.params;
        let f = &*self.field;
        let payload = strip_header(p, bytes)?;
        expect_len(payload, p.pk_bytes())?;
        let mut r = BitReader::new(payload, HEADER_LEN);
        let (sr, sc) = self.secret_shape();
        let pk = match p.kind {
            SchemeKind::Bwe => {
                let mut seed2 = [0u8; SEED_LEN];
                seed2.copy_from_slice(&payload[..SEED_LEN]);
                r.skip_bytes(SEED_LEN);
                let s = Matrix::row_vector(&r.elements(f, p.n())?);
                let (g1, g2, h) = self.public_randomness(&seed2)?;
                PublicKey { seed2: Some(seed2), g1, g2, h, s }
            }
            SchemeKind::MultiNh | SchemeKind::MultiUr => {
                let g1 = r.weight_vector(f, p.t1, p.n1)?;
                let g2 = r.weight_vector(f, p.t2, p.n2)?;
                let (hr, hc) = self.h_shape();
                let h = Self::col_major(hr, hc, &r.elements(f, hr * hc)?);
                let s = Self::col_major(sr, sc, &r.elements(f, sr * sc)?);
                PublicKey { seed2: None, g1, g2, h, s }
            }
        };
        r.finish()?;
        Ok(pk)
    }

    /// Ciphertext payload without header; also the input to the KEM key hash.
    pub fn ct_payload(&self, ct: &Ciphertext) -> Result<Vec<u8>> {
        self.check_ct(ct)?;
        let f = &*self.field;
        Ok(match self.params.kind {
            SchemeKind::Bwe | SchemeKind::MultiNh => {
                // u and v are each padded to a byte boundary.
                let mut out = Vec::with_capacity(self.params.ct_bytes());
                for m in [&ct.u, &ct.v] {
                    let mut w = BitWriter::new();
                    w.elements(f, &unfold(m));
                    out.extend(w.finish());
                }
                out
            }
            SchemeKind::MultiUr => {
                let mut w = BitWriter::new();
                w.elements(f, &unfold(&ct.u));
                w.elements(f, &unfold(&ct.v));
                w.finish()
            }
        })
    }

    pub fn serialize_ct(&self, ct: &Ciphertext) -> Result<Vec<u8>> {
        let mut out = header(&self.params).to_vec();
        out.extend(self.ct_payload(ct)?);
        Ok(out)
    }

    pub fn deserialize_ct(&self, bytes: &[u8]) -> Result<Ciphertext> {
        let payload = strip_header(&self.params, bytes)?;
        self.ct_from_payload(payload)
    }

    fn ct_from_payload(&self, payload: &[u8]) -> Result<Ciphertext> {
        let p = &self.params;
        let f = &*self.field;
        expect_len(payload, p.ct_bytes())?;
        let ((ur, uc), (vr, vc)) = self.ct_shapes();
        match p.kind {
            SchemeKind::Bwe | SchemeKind::MultiNh => {
                let half = p.ct_bytes() / 2;
                let mut parts = Vec::with_capacity(2);
                for (i, (rows, cols)) in [(ur, uc), (vr, vc)].into_iter().enumerate() {
                    let mut r = BitReader::new(&payload[i * half..(i + 1) * half], HEADER_LEN + i * half);
                    let m = Self::col_major(rows, cols, &r.elements(f, rows * cols)?);
                    r.finish()?;
                    parts.push(m);
                }
                let v = parts.pop().expect("two parts");
                let u = parts.pop().expect("two parts");
                Ok(Ciphertext { u, v })
            }
            SchemeKind::MultiUr => {
                let mut r = BitReader::new(payload, HEADER_LEN);
                let u = Self::col_major(ur, uc, &r.elements(f, ur * uc)?);
                let v = Self::col_major(vr, vc, &r.elements(f, vr * vc)?);
                r.finish()?;
                Ok(Ciphertext { u, v })
            }
        }
    }

    pub fn serialize_sk(&self, sk: &SecretKey) -> Vec<u8> {
        let mut out = header(&self.params).to_vec();
        out.extend_from_slice(&sk.seed1);
        out
    }

    pub fn deserialize_sk(&self, bytes: &[u8]) -> Result<SecretKey> {
        let payload = strip_header(&self.params, bytes)?;
        expect_len(payload, SEED_LEN)?;
        let mut seed1 = [0u8; SEED_LEN];
        seed1.copy_from_slice(payload);
        Ok(SecretKey { seed1 })
    }
}
