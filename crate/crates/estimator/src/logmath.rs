//! Log₂-domain combinatorics: log-gamma binomials, log-sum-exp and signed
//! sums for the alternating series in the cost formulas.

use std::cmp::Ordering;
use std::f64::consts::{LN_2, PI};

/// ln(n!) through a Stirling series, exact products below 20.
pub fn ln_factorial(n: u64) -> f64 {
    if n < 20 {
        return (2..=n).fold(1.0f64, |acc, i| acc * i as f64).ln();
    }
    let x = n as f64;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
    x * x.ln() - x + 0.5 * (2.0 * PI * x).ln() + series
}

/// log₂(n!).
pub fn log2_factorial(n: u64) -> f64 {
    ln_factorial(n) / LN_2
}

/// log₂ C(a, b), with −∞ for an empty binomial (b < 0, b > a or a < 0).
pub fn log2_binomial(a: i64, b: i64) -> f64 {
    if a < 0 || b < 0 || b > a {
        return f64::NEG_INFINITY;
    }
    let (a, b) = (a as u64, b.min(a - b) as u64);
    if b == 0 {
        return 0.0;
    }
    if let Some(c) = small_binomial(a, b) {
        return (c as f64).log2();
    }
    (ln_factorial(a) - ln_factorial(b) - ln_factorial(a - b)) / LN_2
}

/// C(a, b) by the multiplicative recurrence while it fits in 128 bits.
fn small_binomial(a: u64, b: u64) -> Option<u128> {
    let mut acc: u128 = 1;
    for i in 1..=b {
        acc = acc.checked_mul(u128::from(a - b + i))? / u128::from(i);
    }
    Some(acc)
}

/// Below this many bits, integer quantities held as logarithms are rounded
/// back to integers before comparing, so that ties are decided exactly.
pub const EXACT_BITS: f64 = 40.0;

/// X ≤ Y for non-negative integers given as log₂X and log₂Y.
pub fn int_le(x: f64, y: f64) -> bool {
    if x.max(y) < EXACT_BITS {
        x.exp2().round() <= y.exp2().round()
    } else {
        x <= y
    }
}

/// log₂ of a non-negative integer quantity, −∞ at zero.
pub fn log2_int(x: i64) -> f64 {
    if x <= 0 {
        f64::NEG_INFINITY
    } else {
        (x as f64).log2()
    }
}

/// log₂ Σ 2^tᵢ.
pub fn log2_sum<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    let mut acc = SignedSum::default();
    for t in terms {
        acc.add(t);
    }
    acc.log2().unwrap_or(f64::NEG_INFINITY)
}

/// A sum of signed terms ±2^tᵢ, evaluated relative to its largest term.
#[derive(Clone, Debug, Default)]
pub struct SignedSum {
    terms: Vec<(bool, f64)>,
}

impl SignedSum {
    pub fn add(&mut self, log2: f64) {
        self.push(false, log2);
    }

    pub fn sub(&mut self, log2: f64) {
        self.push(true, log2);
    }

    pub fn push(&mut self, negative: bool, log2: f64) {
        if log2 > f64::NEG_INFINITY {
            self.terms.push((negative, log2));
        }
    }

    /// (sign, log₂|Σ|); `None` when the sum is zero.
    pub fn eval(&self) -> Option<(bool, f64)> {
        let top = self.terms.iter().map(|&(_, l)| l).fold(f64::NEG_INFINITY, f64::max);
        if top == f64::NEG_INFINITY {
            return None;
        }
        let (mut pos, mut neg) = (0.0f64, 0.0f64);
        for &(negative, l) in &self.terms {
            let v = (l - top).exp2();
            if negative {
                neg += v;
            } else {
                pos += v;
            }
        }
        let diff = pos - neg;
        if diff == 0.0 {
            None
        } else {
            Some((diff < 0.0, diff.abs().log2() + top))
        }
    }

    /// log₂ of the sum when it is strictly positive.
    pub fn log2(&self) -> Option<f64> {
        match self.eval() {
            Some((false, l)) => Some(l),
            _ => None,
        }
    }

    /// Sign of a sum of integer terms, exact when every term is below
    /// 2^EXACT_BITS.
    pub fn sign(&self) -> Ordering {
        let top = self.terms.iter().map(|&(_, l)| l).fold(f64::NEG_INFINITY, f64::max);
        if top == f64::NEG_INFINITY {
            return Ordering::Equal;
        }
        if top < EXACT_BITS {
            let v: f64 = self.terms.iter().map(|&(neg, l)| if neg { -l.exp2().round() } else { l.exp2().round() }).sum();
            return v.total_cmp(&0.0);
        }
        match self.eval() {
            None => Ordering::Equal,
            Some((true, _)) => Ordering::Less,
            Some((false, _)) => Ordering::Greater,
        }
    }

    /// Whether a sum of integer terms is ≥ 0.
    pub fn non_negative(&self) -> bool {
        self.sign() != Ordering::Less
    }
}

/// log₂(2^a − 2^b) when positive.
pub fn log2_diff(a: f64, b: f64) -> Option<f64> {
    let mut s = SignedSum::default();
    s.add(a);
    s.sub(b);
    s.log2()
}

/// Floor division for signed integers.
pub fn floor_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b) - if b < 0 && a.rem_euclid(b) != 0 { 1 } else { 0 }
}

/// Ceiling division for signed integers.
pub fn ceil_div(a: i64, b: i64) -> i64 {
    -floor_div(-a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_examples() {
        assert!((log2_binomial(4, 2) - 6f64.log2()).abs() < 1e-12);
        assert_eq!(log2_binomial(9, 0), 0.0);
        assert_eq!(log2_binomial(9, 9), 0.0);
        assert_eq!(log2_binomial(3, 4), f64::NEG_INFINITY);
        assert_eq!(log2_binomial(-1, 0), f64::NEG_INFINITY);
        // C(60, 30) = 118264581564861424.
        assert!((log2_binomial(60, 30) - 118264581564861424f64.log2()).abs() < 1e-10);
    }

    #[test]
    fn signed_sums() {
        let mut s = SignedSum::default();
        s.add(3.0);
        s.sub(1.0);
        assert!((s.log2().unwrap() - 6f64.log2()).abs() < 1e-12);
        s.sub(log2_int(6));
        assert_eq!(s.eval(), None);
        assert!(s.non_negative());
        assert_eq!(log2_diff(1.0, 2.0), None);
        assert_eq!(log2_sum([]), f64::NEG_INFINITY);
    }

    #[test]
    fn integer_division() {
        assert_eq!((floor_div(-7, 2), ceil_div(-7, 2), floor_div(7, 2), ceil_div(7, 2)), (-4, -3, 3, 4));
        assert_eq!((floor_div(6, 3), ceil_div(6, 3), ceil_div(-6, 3)), (2, 2, -2));
    }
}
