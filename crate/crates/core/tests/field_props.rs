//! Field axioms and Frobenius identities, with multiplication checked against
//! a bit-serial shift-and-reduce oracle.

use egk_core::{Field, FieldElement};
use proptest::prelude::*;

const DEGREES: [usize; 6] = [1, 5, 53, 64, 113, 128];

fn mask(m: usize) -> u128 {
    if m == 128 {
        u128::MAX
    } else {
        (1u128 << m) - 1
    }
}

fn field_and_elems(n: usize) -> impl Strategy<Value = (usize, Vec<FieldElement>)> {
    prop::sample::select(DEGREES.to_vec()).prop_flat_map(move |m| {
        (Just(m), prop::collection::vec(any::<u128>().prop_map(move |v| FieldElement::from_bits(v & mask(m))), n))
    })
}

/// Shift-and-add multiplication, reducing after every shift.
fn peasant_mul(f: &Field, a: FieldElement, b: FieldElement) -> FieldElement {
    let m = f.degree();
    let low: u128 = f.modulus().exponents().into_iter().filter(|&e| e < m).fold(0, |acc, e| acc | (1u128 << e));
    let (mut x, mut y, mut acc) = (a.bits(), b.bits(), 0u128);
    while y != 0 {
        if y & 1 == 1 {
            acc ^= x;
        }
        y >>= 1;
        let carry = (x >> (m - 1)) & 1 == 1;
        x = if m == 128 { x << 1 } else { (x << 1) & mask(m) };
        if carry {
            x ^= low;
        }
    }
    FieldElement::from_bits(acc)
}

fn fields() -> Vec<Field> {
    DEGREES.iter().map(|&m| Field::new(m).unwrap()).collect()
}

fn field_for(fs: &[Field], m: usize) -> &Field {
    fs.iter().find(|f| f.degree() == m).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn mul_matches_oracle((m, v) in field_and_elems(2)) {
        let fs = fields();
        let f = field_for(&fs, m);
        prop_assert_eq!(f.mul(v[0], v[1]), peasant_mul(f, v[0], v[1]));
    }

    #[test]
    fn ring_axioms((m, v) in field_and_elems(3)) {
        let fs = fields();
        let f = field_for(&fs, m);
        let (a, b, c) = (v[0], v[1], v[2]);
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, b + c), f.mul(a, b) + f.mul(a, c));
        prop_assert_eq!(f.mul(a, FieldElement::ONE), a);
        prop_assert_eq!(a + a, FieldElement::ZERO);
        prop_assert_eq!(f.square(a), f.mul(a, a));
    }

    #[test]
    fn inverse_and_division((m, v) in field_and_elems(2)) {
        let fs = fields();
        let f = field_for(&fs, m);
        let (a, b) = (v[0], v[1]);
        if a.is_zero() {
            prop_assert!(f.inv(a).is_err());
        } else {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElement::ONE);
            prop_assert_eq!(f.mul(f.div(b, a).unwrap(), a), b);
        }
    }

    #[test]
    fn frobenius_is_repeated_squaring((m, v) in field_and_elems(2), i in 0usize..200) {
        let fs = fields();
        let f = field_for(&fs, m);
        let (a, b) = (v[0], v[1]);
        let mut want = a;
        for _ in 0..i % m {
            want = f.square(want);
        }
        prop_assert_eq!(f.frobenius(a, i), want);
        prop_assert_eq!(f.frobenius(a + b, i), f.frobenius(a, i) + f.frobenius(b, i));
        prop_assert_eq!(f.frobenius(a, m), a);
    }

    #[test]
    fn trace_is_sum_of_conjugates((m, v) in field_and_elems(2)) {
        let fs = fields();
        let f = field_for(&fs, m);
        let a = v[0];
        let sum = (0..m).fold(FieldElement::ZERO, |acc, i| acc + f.frobenius(a, i));
        prop_assert_eq!(sum, if f.trace(a) { FieldElement::ONE } else { FieldElement::ZERO });
        prop_assert_eq!(f.trace(a + v[1]), f.trace(a) ^ f.trace(v[1]));
    }

    #[test]
    fn byte_encoding_round_trips((m, v) in field_and_elems(1)) {
        let fs = fields();
        let f = field_for(&fs, m);
        let bytes = f.to_bytes(v[0]);
        prop_assert_eq!(bytes.len(), m.div_ceil(8));
        prop_assert_eq!(f.from_bytes(&bytes).unwrap(), v[0]);
    }
}

#[test]
fn every_degree_has_a_normal_basis() {
    for m in 1..=128 {
        let f = Field::new(m).unwrap();
        let nb = f.normal_basis();
        assert_eq!(nb.conjugates.len(), m);
        for (j, &c) in nb.conjugates.iter().enumerate() {
            assert_eq!(c, f.frobenius(nb.alpha, j));
        }
        assert!(f.trace(nb.alpha), "m = {m}: a normal element has trace 1");
    }
}
