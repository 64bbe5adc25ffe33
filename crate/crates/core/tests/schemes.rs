//! Keygen, encryption, decryption, KEM and wire-format checks on the
//! registry parameter sets.

use egk_core::linalg::rank_weight;
use egk_core::sampling::{Expander, Seed, SEED_LEN};
use egk_core::schemes::wire::HEADER_LEN;
use egk_core::schemes::{registry, Scheme, SchemeKind};
use egk_core::{Error, FieldElement};

fn seed(tag: u8, i: u64) -> Seed {
    let mut s = [tag; SEED_LEN];
    s[..8].copy_from_slice(&i.to_le_bytes());
    s
}

fn message(scheme: &Scheme, i: u64) -> Vec<FieldElement> {
    Expander::with_tag(&seed(9, i), 0x7f).vector(scheme.field(), scheme.params().k())
}

#[test]
fn published_sizes_match_formulas_and_serialization() {
    for p in registry() {
        let (pk, ct) = p.published_sizes.unwrap();
        assert_eq!((p.pk_bytes(), p.ct_bytes()), (pk, ct), "{}", p.label());
        let s = Scheme::new(p.clone()).unwrap();
        let (pkey, _) = s.keygen(&seed(1, 0), &seed(2, 0)).unwrap();
        let c = s.encrypt(&pkey, &message(&s, 0), &seed(3, 0)).unwrap();
        assert_eq!(s.serialize_pk(&pkey).unwrap().len(), HEADER_LEN + pk, "{}", p.label());
        assert_eq!(s.serialize_ct(&c).unwrap().len(), HEADER_LEN + ct, "{}", p.label());
    }
}

#[test]
fn round_trips_and_error_budget_every_row() {
    for p in registry() {
        let s = Scheme::new(p.clone()).unwrap();
        for i in 0..3 {
            let (pk, sk) = s.keygen(&seed(1, i), &seed(2, i)).unwrap();
            let pair = s.secret_pair(&sk).unwrap();
            let msg = message(&s, i);
            let noise = s.noise(&seed(3, i)).unwrap();
            let ct = s.encrypt_with_noise(&pk, &msg, &noise).unwrap();
            let err = s.error_term(&pair, &noise).unwrap();
            assert!(rank_weight(&err) <= p.r, "{}: error weight {}", p.label(), rank_weight(&err));
            assert_eq!(s.decrypt(&sk, &pk, &ct).unwrap(), msg, "{}", p.label());
        }
    }
}

#[test]
fn decoder_input_is_codeword_plus_error_term() {
    for id in [1, 4, 7] {
        let s = Scheme::from_row(id).unwrap();
        let (pk, sk) = s.keygen(&seed(1, 5), &seed(2, 5)).unwrap();
        let pair = s.secret_pair(&sk).unwrap();
        let msg = message(&s, 5);
        let noise = s.noise(&seed(3, 5)).unwrap();
        let ct = s.encrypt_with_noise(&pk, &msg, &noise).unwrap();
        let code = s.code(&pk).unwrap();
        let want: Vec<FieldElement> =
            code.encode(&msg).unwrap().iter().zip(s.error_term(&pair, &noise).unwrap()).map(|(&a, b)| a + b).collect();
        assert_eq!(s.decoder_input(&pair, &ct).unwrap(), want);
    }
}

#[test]
fn zero_message_round_trip() {
    let s = Scheme::from_row(1).unwrap();
    let (pk, sk) = s.keygen(&seed(1, 1), &seed(2, 1)).unwrap();
    let zero = vec![FieldElement::ZERO; s.params().k()];
    let ct = s.encrypt(&pk, &zero, &seed(3, 1)).unwrap();
    assert_eq!(s.decrypt(&sk, &pk, &ct).unwrap(), zero);
}

#[test]
fn keygen_is_deterministic_and_s_minus_hy_is_x() {
    let s = Scheme::from_row(1).unwrap();
    let (pk1, sk1) = s.keygen(&seed(1, 2), &seed(2, 2)).unwrap();
    let (pk2, _) = s.keygen(&seed(1, 2), &seed(2, 2)).unwrap();
    assert_eq!(s.serialize_pk(&pk1).unwrap(), s.serialize_pk(&pk2).unwrap());
    let pair = s.secret_pair(&sk1).unwrap();
    let hy = s.ring().unwrap().mul(pk1.h.row(0), pair.y.row(0)).unwrap();
    let x: Vec<FieldElement> = pk1.s.row(0).iter().zip(&hy).map(|(&a, &b)| a - b).collect();
    assert_eq!(x, pair.x.row(0));
    assert_eq!(rank_weight(pair.x.row(0)), 3);
}

#[test]
fn bwe_noise_term_e_has_exact_weight() {
    let s = Scheme::from_row(1).unwrap();
    let (pk, _) = s.keygen(&seed(1, 3), &seed(2, 3)).unwrap();
    let msg = message(&s, 3);
    let noise = s.noise(&seed(3, 3)).unwrap();
    let ct = s.encrypt_with_noise(&pk, &msg, &noise).unwrap();
    let mg = s.code(&pk).unwrap().encode(&msg).unwrap();
    let sr2 = s.ring().unwrap().mul(pk.s.row(0), noise.r2.row(0)).unwrap();
    let e: Vec<FieldElement> = (0..mg.len()).map(|i| ct.v.row(0)[i] - mg[i] - sr2[i]).collect();
    assert_eq!(rank_weight(&e), s.params().we);
}

#[test]
fn serialization_round_trips() {
    for id in 1..=9u8 {
        let s = Scheme::from_row(id).unwrap();
        let (pk, sk) = s.keygen(&seed(1, 7), &seed(2, 7)).unwrap();
        let ct = s.encrypt(&pk, &message(&s, 7), &seed(3, 7)).unwrap();
        assert_eq!(s.deserialize_pk(&s.serialize_pk(&pk).unwrap()).unwrap(), pk);
        assert_eq!(s.deserialize_ct(&s.serialize_ct(&ct).unwrap()).unwrap(), ct);
        assert_eq!(s.deserialize_sk(&s.serialize_sk(&sk)).unwrap(), sk);
    }
}

#[test]
fn mismatched_headers_are_refused() {
    let bwe = Scheme::from_row(1).unwrap();
    let nh = Scheme::from_row(4).unwrap();
    let (pk, sk) = bwe.keygen(&seed(1, 8), &seed(2, 8)).unwrap();
    let bytes = bwe.serialize_pk(&pk).unwrap();
    assert!(matches!(nh.deserialize_pk(&bytes), Err(Error::Format { offset: 6, .. })));
    let other_row = Scheme::from_row(2).unwrap();
    assert!(matches!(other_row.deserialize_sk(&bwe.serialize_sk(&sk)), Err(Error::Format { offset: 7, .. })));
    let mut bad = bytes.clone();
    bad[0] ^= 1;
    assert!(matches!(bwe.deserialize_pk(&bad), Err(Error::Format { offset: 0, .. })));
    assert!(matches!(bwe.deserialize_pk(&bytes[..bytes.len() - 1]), Err(Error::Format { .. })));
}

#[test]
fn kem_round_trip_and_rejection() {
    for id in [1u8, 4, 7] {
        let s = Scheme::from_row(id).unwrap();
        let (pk, sk) = s.keygen(&seed(1, 9), &seed(2, 9)).unwrap();
        let out = s.encapsulate(&pk, &seed(4, 9)).unwrap();
        assert_eq!(s.decapsulate(&sk, &pk, &out.ct, &out.d).unwrap(), out.key);
        let bytes = s.serialize_kem(&out).unwrap();
        assert_eq!(s.decapsulate_bytes(&sk, &pk, &bytes).unwrap(), out.key);
        for pos in [HEADER_LEN, HEADER_LEN + 17, bytes.len() - 65, bytes.len() - 1] {
            let mut t = bytes.clone();
            t[pos] ^= 0x01;
            assert_eq!(s.decapsulate_bytes(&sk, &pk, &t), Err(Error::Reject), "{:?} pos {pos}", s.params().kind);
        }
    }
}

#[test]
fn multi_ur_uses_plain_products() {
    let s = Scheme::from_row(7).unwrap();
    assert_eq!(s.params().kind, SchemeKind::MultiUr);
    assert!(s.ring().is_none());
    let (pk, _) = s.keygen(&seed(1, 10), &seed(2, 10)).unwrap();
    assert_eq!((pk.h.rows(), pk.h.cols(), pk.s.rows(), pk.s.cols()), (3, 3, 3, 6));
}
