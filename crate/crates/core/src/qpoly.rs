//! Linearized (q-)polynomials over GF(2^m): evaluation, symbolic product,
//! left and right symbolic division, the extended Euclidean algorithm with an
//! early stopping degree, and the normal-basis transform machinery.

use crate::error::{param, Error, Result};
use crate::galois::{Basis, Field, FieldElement, NormalBasis};

/// Σ f_i · x^[i], with trailing zero coefficients trimmed.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct QPoly {
    coeffs: Vec<FieldElement>,
}

impl std::fmt::Debug for QPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("{c}·x^[{i}]"))
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl QPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The identity map x^[0].
    pub fn one() -> Self {
        Self { coeffs: vec![FieldElement::ONE] }
    }

    /// c · x^[i].
    pub fn monomial(c: FieldElement, i: usize) -> Self {
        let mut coeffs = vec![FieldElement::ZERO; i + 1];
        coeffs[i] = c;
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(coeffs: Vec<FieldElement>) -> Self {
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    /// Coefficient of x^[i] (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).copied().unwrap_or(FieldElement::ZERO)
    }

    /// q-degree; `None` stands for −∞ (the zero polynomial).
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn lead(&self) -> FieldElement {
        *self.coeffs.last().expect("nonzero polynomial")
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::from_coeffs((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    /// Subtraction; identical to addition in characteristic 2.
    pub fn sub(&self, other: &Self) -> Self {
        self.add(other)
    }

    pub fn scale(&self, field: &Field, c: FieldElement) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|&a| field.mul(c, a)).collect())
    }

    /// Folds x^[i] onto x^[i mod m]; the same map on GF(2^m).
    pub fn reduce(&self, field: &Field) -> Self {
        let m = field.degree();
        if self.coeffs.len() <= m {
            return self.clone();
        }
        let mut out = vec![FieldElement::ZERO; m];
        for (i, &c) in self.coeffs.iter().enumerate() {
            out[i % m] += c;
        }
        Self::from_coeffs(out)
    }

    /// `c · x^[s] ⊗ self`, accumulated into `acc`.
    fn add_shifted_into(&self, field: &Field, c: FieldElement, s: usize, acc: &mut Vec<FieldElement>) {
        if acc.len() < self.coeffs.len() + s {
            acc.resize(self.coeffs.len() + s, FieldElement::ZERO);
        }
        for (j, &b) in self.coeffs.iter().enumerate() {
            acc[s + j] += field.mul(c, field.frobenius(b, s));
        }
    }
}

/// f(a) = Σ f_i · a^[i].
pub fn qp_eval(field: &Field, f: &QPoly, a: FieldElement) -> FieldElement {
    let mut acc = FieldElement::ZERO;
    let mut p = a;
    for &c in &f.coeffs {
        acc += field.mul(c, p);
        p = field.square(p);
    }
    acc
}

/// Exact composition f ⊗ g = f(g(x)) without reduction.
pub fn sym_mul(field: &Field, f: &QPoly, g: &QPoly) -> QPoly {
    if f.is_zero() || g.is_zero() {
        return QPoly::zero();
    }
    let mut acc = vec![FieldElement::ZERO; f.coeffs.len() + g.coeffs.len() - 1];
    for (i, &c) in f.coeffs.iter().enumerate() {
        if !c.is_zero() {
            g.add_shifted_into(field, c, i, &mut acc);
        }
    }
    QPoly::from_coeffs(acc)
}

/// f ⊗ g reduced mod x^[m] − x.
pub fn sym_mul_mod(field: &Field, f: &QPoly, g: &QPoly) -> QPoly {
    sym_mul(field, f, g).reduce(field)
}

/// Right division: a = q ⊗ b + r with deg r < deg b.
pub fn rdiv(field: &Field, a: &QPoly, b: &QPoly) -> Result<(QPoly, QPoly)> {
    let db = b.degree().ok_or(Error::DivisionByZero)?;
    let mut r = a.coeffs.clone();
    let mut q = vec![FieldElement::ZERO; r.len().saturating_sub(db)];
    let lb = b.lead();
    while r.len() > db {
        let top = r.len() - 1;
        let lr = r[top];
        if !lr.is_zero() {
            let s = top - db;
            let c = field.mul(lr, field.inv_nonzero(field.frobenius(lb, s)));
            q[s] = c;
            b.add_shifted_into(field, c, s, &mut r);
            debug_assert!(r[top].is_zero());
        }
        r.pop();
    }
    Ok((QPoly::from_coeffs(q), QPoly::from_coeffs(r)))
}

/// Left division: a = b ⊗ q + r with deg r < deg b.
///
/// b ⊗ q is block triangular in the coefficients of q: the top coefficient of
/// the running remainder is removed by solving the GF(2)-linear equation
/// b_lead · z^[deg b] = r_top, whose matrix is built once per call.
pub fn ldiv(field: &Field, a: &QPoly, b: &QPoly) -> Result<(QPoly, QPoly)> {
    let db = b.degree().ok_or(Error::DivisionByZero)?;
    let mut r = a.coeffs.clone();
    if r.len() <= db {
        return Ok((QPoly::zero(), a.clone()));
    }
    let m = field.degree();
    let lb = b.lead();
    // Images of the polynomial basis under z ↦ b_lead · z^[db].
    let images = (0..m).map(|j| field.mul(lb, field.frobenius(FieldElement::from_bits(1u128 << j), db))).collect();
    let solver = Basis::new(field, images).expect("z ↦ b·z^[d] is bijective for b ≠ 0");
    let mut q = vec![FieldElement::ZERO; r.len() - db];
    while r.len() > db {
        let top = r.len() - 1;
        let lr = r[top];
        if !lr.is_zero() {
            let s = top - db;
            let z = FieldElement::from_bits(solver.coords(lr));
            q[s] = z;
            // r -= b ⊗ (z · x^[s])
            for (i, &bi) in b.coeffs.iter().enumerate() {
                r[i + s] += field.mul(bi, field.frobenius(z, i));
            }
            debug_assert!(r[top].is_zero());
        }
        r.pop();
    }
    Ok((QPoly::from_coeffs(q), QPoly::from_coeffs(r)))
}

/// Extended Euclidean algorithm with early stop.
///
/// Runs r_i = r_{i−2} − q_i ⊗ r_{i−1} from r_{−1} = a, r_0 = b, with cofactors
/// u_i = u_{i−2} − q_i ⊗ u_{i−1} and v_i likewise, and returns the first
/// triple (r, u, v) with deg r < `d_stop`. Throughout, r = u ⊗ b + v ⊗ a.
pub fn leea(field: &Field, a: &QPoly, b: &QPoly, d_stop: usize) -> Result<(QPoly, QPoly, QPoly)> {
    if d_stop == 0 {
        return param("stopping degree must be positive");
    }
    match (a.degree(), b.degree()) {
        (Some(da), Some(db)) if da >= db => {}
        _ => return param("leea requires deg a ≥ deg b ≥ 0"),
    }
    let mut prev = (a.clone(), QPoly::zero(), QPoly::one());
    let mut cur = (b.clone(), QPoly::one(), QPoly::zero());
    if prev.0.degree().map_or(true, |d| d < d_stop) {
        return Ok(prev);
    }
    loop {
        debug_assert_eq!(cur.0, sym_mul(field, &cur.1, b).add(&sym_mul(field, &cur.2, a)));
        if cur.0.degree().map_or(true, |d| d < d_stop) {
            return Ok(cur);
        }
        let (q, r) = rdiv(field, &prev.0, &cur.0)?;
        let u = prev.1.sub(&sym_mul(field, &q, &cur.1));
        let v = prev.2.sub(&sym_mul(field, &q, &cur.2));
        prev = std::mem::replace(&mut cur, (r, u, v));
    }
}

/// F_j = f(α^[j]) for j < m, returned as coefficients.
pub fn q_transform(field: &Field, f: &QPoly, nb: &NormalBasis) -> QPoly {
    rotate_eval(field, &f.reduce(field), &nb.conjugates)
}

/// f_i = F(ᾱ^[i]) with ᾱ the dual basis; inverse of [`q_transform`].
pub fn inverse_q_transform(field: &Field, big_f: &QPoly, nb: &NormalBasis) -> QPoly {
    rotate_eval(field, &big_f.reduce(field), &nb.dual)
}

/// out_j = Σ_i f_i · conj[(i + j) mod m].
fn rotate_eval(field: &Field, f: &QPoly, conj: &[FieldElement]) -> QPoly {
    let m = conj.len();
    let out = (0..m)
        .map(|j| {
            let mut acc = crate::clmul::Wide::default();
            for (i, &c) in f.coeffs.iter().enumerate() {
                acc ^= field.mul_wide(c, conj[(i + j) % m]);
            }
            field.reduce(acc)
        })
        .collect();
    QPoly::from_coeffs(out)
}

/// f evaluated at every point through its transform: writing p = Σ c_j α^[j],
/// f(p) = Σ c_j F_j.
pub fn multipoint_eval(field: &Field, f: &QPoly, points: &[FieldElement], nb: &NormalBasis) -> Vec<FieldElement> {
    let big_f = q_transform(field, f, nb);
    points
        .iter()
        .map(|&p| {
            let mut c = nb.coords(p);
            let mut acc = FieldElement::ZERO;
            while c != 0 {
                acc += big_f.coeff(c.trailing_zeros() as usize);
                c &= c - 1;
            }
            acc
        })
        .collect()
}

/// f ⊗ g mod x^[m] − x via transform, pointwise evaluation and inverse transform.
pub fn fast_sym_mul(field: &Field, f: &QPoly, g: &QPoly, nb: &NormalBasis) -> QPoly {
    let g_hat = q_transform(field, g, nb);
    let m = field.degree();
    let pts: Vec<FieldElement> = (0..m).map(|j| g_hat.coeff(j)).collect();
    let h = multipoint_eval(field, f, &pts, nb);
    inverse_q_transform(field, &QPoly::from_coeffs(h), nb)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fe(v: u128) -> FieldElement {
        FieldElement::from_bits(v)
    }

    fn poly(v: &[u128]) -> QPoly {
        QPoly::from_coeffs(v.iter().map(|&x| fe(x)).collect())
    }

    #[test]
    fn basic_identities() {
        let f = Field::new(5).unwrap();
        let p = poly(&[3, 0, 7]);
        assert_eq!(qp_eval(&f, &QPoly::one(), fe(9)), fe(9));
        assert_eq!(qp_eval(&f, &p, FieldElement::ZERO), FieldElement::ZERO);
        assert_eq!(sym_mul(&f, &p, &QPoly::one()), p);
        let x1 = QPoly::monomial(FieldElement::ONE, 1);
        assert_eq!(sym_mul(&f, &x1, &x1), QPoly::monomial(FieldElement::ONE, 2));
        assert_eq!(poly(&[1, 0, 0]).degree(), Some(0));
        assert_eq!(QPoly::zero().degree(), None);
    }

    #[test]
    fn reduce_folds_indices() {
        let f = Field::new(3).unwrap();
        let p = QPoly::monomial(fe(5), 4);
        assert_eq!(p.reduce(&f), QPoly::monomial(fe(5), 1));
        for a in 0..8 {
            assert_eq!(qp_eval(&f, &p, fe(a)), qp_eval(&f, &p.reduce(&f), fe(a)));
        }
    }

    #[test]
    fn division_trivial_cases() {
        let f = Field::new(5).unwrap();
        let b = poly(&[4, 9, 1]);
        assert_eq!(rdiv(&f, &b, &b).unwrap(), (QPoly::one(), QPoly::zero()));
        assert_eq!(ldiv(&f, &b, &b).unwrap(), (QPoly::one(), QPoly::zero()));
        let small = poly(&[6]);
        assert_eq!(rdiv(&f, &small, &b).unwrap(), (QPoly::zero(), small.clone()));
        assert_eq!(rdiv(&f, &b, &QPoly::zero()), Err(Error::DivisionByZero));
        assert_eq!(ldiv(&f, &b, &QPoly::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn leea_degenerate_inputs() {
        let f = Field::new(5).unwrap();
        let a = poly(&[1, 2, 3]);
        let b = poly(&[5, 1]);
        assert_eq!(leea(&f, &a, &b, 3).unwrap(), (a.clone(), QPoly::zero(), QPoly::one()));
        assert!(leea(&f, &a, &b, 0).is_err());
        assert!(leea(&f, &b, &a, 1).is_err());
    }

    #[test]
    fn transform_of_identity_is_conjugates() {
        let f = Field::new(7).unwrap();
        let nb = f.normal_basis();
        let t = q_transform(&f, &QPoly::one(), nb);
        assert_eq!(t.coeffs(), nb.conjugates.as_slice());
        assert!(q_transform(&f, &QPoly::zero(), nb).is_zero());
        let pts = multipoint_eval(&f, &poly(&[3, 1, 4]), &nb.conjugates, nb);
        assert_eq!(pts, q_transform(&f, &poly(&[3, 1, 4]), nb).coeffs());
    }
}
