//! Attacks on non-homogeneous errors: NHRSD (combinatorial and algebraic)
//! and the BP method on NHRD with the three-branch U count.

use std::cmp::Ordering;

use crate::logmath::{int_le, log2_binomial as lc, log2_int as l, log2_sum, SignedSum};
use crate::{invalid, AttackReport, Problem, ProblemInstance, Result};

/// NHRSD reports: combinatorial and algebraic.
pub fn estimate_nhrsd(inst: &ProblemInstance, omega: f64) -> Result<Vec<AttackReport>> {
    let Problem::Nhrsd { m, n, n1, w1, w2 } = inst.problem else {
        return invalid("estimate_nhrsd needs an NHRSD instance");
    };
    inst.validate()?;
    let (m, n, n1, w1, w2) = (m as i64, n as i64, n1 as i64, w1 as i64, w2 as i64);
    let lq = inst.log2_q();
    Ok(vec![nhrsd_combinatorial(m, w1, w2, lq), nhrsd_algebraic(m, n, n1, w1, w2, lq, omega)])
}

/// Minimizes (ω₁+ω₂)(m−r) − ω₂ρ − m over ω₁ ≤ r, ω₂ ≤ ρ, r+ρ ≤ m−1.
/// The table prints no polynomial prefactor; it is taken as 1.
fn nhrsd_combinatorial(m: i64, w1: i64, w2: i64, lq: f64) -> AttackReport {
    const NAME: &str = "nhrsd-comb";
    let mut best: Option<(i64, i64, i64)> = None;
    for r in w1..m {
        for rho in w2..m - r {
            let e = (w1 + w2) * (m - r) - w2 * rho - m;
            if best.map_or(true, |(x, _, _)| e < x) {
                best = Some((e, r, rho));
            }
        }
    }
    match best {
        Some((e, r, rho)) => AttackReport::new(NAME, lq * e as f64, vec![("r", r), ("rho", rho)]),
        None => AttackReport::inapplicable(NAME, "ω₁ + ω₂ > m − 1 leaves no (r, ρ)"),
    }
}

/// N_Fq = m·Σ_{i=ω₂}^{ω₁+ω₂} C(n₁−1, i)·C(n, ω₁+ω₂−i).
pub fn nhrsd_equations(m: i64, n: i64, n1: i64, w1: i64, w2: i64) -> f64 {
    let w = w1 + w2;
    l(m) + log2_sum((w2..=w).map(|i| lc(n1 - 1, i) + lc(n, w - i)))
}

/// v_Fq = m·C(n₁−1, ω₂−1)·C(n−1, ω₁).
pub fn nhrsd_redundant(m: i64, n: i64, n1: i64, w1: i64, w2: i64) -> f64 {
    l(m) + lc(n1 - 1, w2 - 1) + lc(n - 1, w1)
}

/// C(2n+n₁−a, ω₁+ω₂) − M_a − v_Fq, with the first two terms merged by
/// Vandermonde into Σ_{i≥ω₂} C(n₁, i)·C(2n−a, ω₁+ω₂−i).
pub fn nhrsd_unknowns(m: i64, n: i64, n1: i64, w1: i64, w2: i64, a: i64) -> SignedSum {
    let w = w1 + w2;
    let mut s = SignedSum::default();
    for i in w2..=w {
        s.add(lc(n1, i) + lc(2 * n - a, w - i));
    }
    s.sub(nhrsd_redundant(m, n, n1, w1, w2));
    s
}

fn nhrsd_algebraic(m: i64, n: i64, n1: i64, w1: i64, w2: i64, lq: f64, omega: f64) -> AttackReport {
    const NAME: &str = "nhrsd-alg";
    let eqs = nhrsd_equations(m, n, n1, w1, w2);
    // Smallest a ≥ 0 with N_Fq ≥ (unknowns) − 1.
    let found = (0..=2 * n).find(|&a| {
        let mut s = nhrsd_unknowns(m, n, n1, w1, w2, a);
        s.sub(eqs);
        s.sub(0.0);
        s.sign() != Ordering::Greater
    });
    let Some(a) = found else {
        return AttackReport::inapplicable(NAME, "no a ≤ 2n satisfies the condition");
    };
    match nhrsd_unknowns(m, n, n1, w1, w2, a).log2() {
        Some(u) if eqs > f64::NEG_INFINITY => {
            AttackReport::new(NAME, lq * (a * w1) as f64 + eqs + (omega - 1.0) * u, vec![("a", a)])
        }
        _ => AttackReport::inapplicable(NAME, "the number of unknowns is not positive"),
    }
}

/// log₂U for blocks (n₁, n₂, n₃) and weights (r₁, r₂); `None` outside the
/// three printed branches or when the count is not positive.
pub fn log2_u(blocks: [i64; 3], r1: i64, r2: i64) -> Option<f64> {
    let [n1, n2, n3] = blocks;
    let (outer, r) = (n1 + n3, r1 + r2);
    if n2 > r2 && outer >= r1 {
        // C(n, r) − Σ_{i<r₂} C(n₂, i)·C(n₁+n₃, r−i) = Σ_{i≥r₂} C(n₂, i)·C(n₁+n₃, r−i).
        let v = log2_sum((r2..=r).map(|i| lc(n2, i) + lc(outer, r - i)));
        (v > f64::NEG_INFINITY).then_some(v)
    } else if n2 == r2 && outer >= r1 {
        Some(lc(n2, r2) + lc(outer, r1))
    } else if n2 > r2 && outer <= r1 {
        let v = log2_sum((0..=outer).map(|i| lc(n2, r - i) + lc(outer, i)));
        (v > f64::NEG_INFINITY).then_some(v)
    } else {
        None
    }
}

/// BP on NHRD: minimizes q^{a·r₁}·m·C(n−p−k−1, r)·U(n−p−a)^{ω−1} subject to
/// m·C(n−p−k−1, r) ≥ U, with a guessing positions of the third block. U
/// depends on p₁ and p₃ only through p₁+p₃, so the search runs over
/// (a, p₂, p₁+p₃) with p₁ filled first; a ∈ [0, n₃] is pruned once a·r₁·log q
/// exceeds the best cost found.
pub fn estimate_nhrd_bp(inst: &ProblemInstance, omega: f64) -> Result<Vec<AttackReport>> {
    const NAME: &str = "nhrd-bp";
    let Problem::NhrdBp { m, k, blocks, r1, r2 } = inst.problem else {
        return invalid("estimate_nhrd_bp needs an NHRD instance");
    };
    inst.validate()?;
    let lq = inst.log2_q();
    let (m, k, r1, r2) = (m as i64, k as i64, r1 as i64, r2 as i64);
    let [n1, n2, n3] = blocks.map(|x| x as i64);
    let (n, r) = (n1 + n2 + n3, r1 + r2);
    let lm = l(m);
    let mut best: Option<(f64, [i64; 4])> = None;
    for a in 0..=n3 {
        if best.is_some_and(|(b, _)| lq * (a * r1) as f64 + lm >= b) {
            break;
        }
        for p2 in 0..=n2 - r2 {
            for p13 in 0..=n1 + n3 - a {
                let p = p2 + p13;
                let y = n - p - k - 1;
                if y < r {
                    break;
                }
                let p1 = p13.min(n1);
                let p3 = p13 - p1;
                let Some(u) = log2_u([n1 - p1, n2 - p2, n3 - p3 - a], r1, r2) else { continue };
                let lhs = lm + lc(y, r);
                if !int_le(u, lhs) {
                    continue;
                }
                let obj = lq * (a * r1) as f64 + lhs + (omega - 1.0) * u;
                if best.map_or(true, |(b, _)| obj < b) {
                    best = Some((obj, [a, p1, p2, p3]));
                }
            }
        }
    }
    Ok(vec![match best {
        Some((obj, [a, p1, p2, p3])) => AttackReport::new(NAME, obj, vec![("a", a), ("p1", p1), ("p2", p2), ("p3", p3)]),
        None => AttackReport::inapplicable(NAME, "no (a, p) satisfies m·C(n−p−k−1, r) ≥ U"),
    }])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn u_branches() {
        // n₂ = r₂: product form C(2, 2)·C(7, 2).
        assert!((log2_u([3, 2, 4], 2, 2).unwrap() - 21f64.log2()).abs() < 1e-9);
        // n₂ > r₂, n₁+n₃ ≥ r₁: C(10, 4) − C(3, 0)·C(7, 4) − C(3, 1)·C(7, 3).
        assert!((log2_u([3, 3, 4], 2, 2).unwrap() - (210.0f64 - 35.0 - 3.0 * 35.0).log2()).abs() < 1e-9);
        // n₁+n₃ ≤ r₁: Σ_{i=0}^{2} C(5, 4−i)·C(2, i) = 5 + 20 + 10.
        assert!((log2_u([1, 5, 1], 3, 1).unwrap() - 35f64.log2()).abs() < 1e-9);
        assert_eq!(log2_u([3, 1, 3], 2, 2), None);
    }

    #[test]
    fn zero_outer_weight_is_well_defined() {
        let inst = ProblemInstance::binary(Problem::Nhrsd { m: 31, n: 20, n1: 20, w1: 0, w2: 4 });
        let r = estimate_nhrsd(&inst, crate::DEFAULT_OMEGA).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r.iter().all(|x| !x.raw.is_nan()));
    }

    #[test]
    fn bp_report_is_feasible() {
        let inst = ProblemInstance::binary(Problem::NhrdBp { m: 23, k: 10, blocks: [8, 10, 8], r1: 2, r2: 4 });
        let r = estimate_nhrd_bp(&inst, crate::DEFAULT_OMEGA).unwrap();
        assert!(r[0].applicable, "{:?}", r[0]);
    }
}
