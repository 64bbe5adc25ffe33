//! Combinatorial and algebraic attacks on RSD(q, m, n, k, t).

use crate::logmath::{ceil_div, log2_binomial as lc, log2_factorial, log2_int as l, SignedSum};
use crate::{invalid, AttackReport, Problem, ProblemInstance, Result};

/// Whether m·C(n−k−1, t) ≥ C(n, t) − 1 (the overdetermined case).
pub fn overdetermined(m: i64, n: i64, k: i64, t: i64) -> bool {
    let mut s = SignedSum::default();
    s.add(l(m) + lc(n - k - 1, t));
    s.sub(lc(n, t));
    s.add(0.0);
    s.non_negative()
}

/// min{1 ≤ i ≤ n : m·C(n−k−1, t) ≥ C(n−i, t) − 1}.
pub fn first_shortening(m: i64, n: i64, k: i64, t: i64) -> Option<i64> {
    let lhs = l(m) + lc(n - k - 1, t);
    (1..=n).find(|&i| {
        let mut s = SignedSum::default();
        s.add(lhs);
        s.sub(lc(n - i, t));
        s.add(0.0);
        s.non_negative()
    })
}

/// (A_a, B_a, C_a) of the Fqm-linear variant, as signed sums.
pub fn abc_sums(m: i64, n: i64, k: i64, t: i64, a: i64) -> (SignedSum, SignedSum, SignedSum) {
    let (mut sa, mut sb, mut sc) = (SignedSum::default(), SignedSum::default(), SignedSum::default());
    let mk1 = m * k + 1;
    for j in 1..=a {
        sa.add(lc(n, t) + lc(mk1, j));
        sb.add(l(m) + lc(n - k - 1, t) + lc(mk1, j));
        for i in 1..=j {
            sc.push(i % 2 == 0, lc(n, t + i) + lc(m + i - 1, i) + lc(mk1, j - i));
        }
    }
    (sa, sb, sc)
}

/// b = min{0 < a < t+2 : A_a − 1 ≤ B_a + C_a}.
pub fn plus_degree(m: i64, n: i64, k: i64, t: i64) -> Option<i64> {
    (1..t + 2).find(|&a| {
        let (sa, sb, sc) = abc_sums(m, n, k, t, a);
        let mut d = SignedSum::default();
        for s in [&sb, &sc] {
            if let Some((neg, v)) = s.eval() {
                d.push(neg, v);
            }
        }
        if let Some((neg, v)) = sa.eval() {
            d.push(!neg, v);
        }
        d.add(0.0);
        d.non_negative()
    })
}

/// One report per row of the combinatorial and algebraic RSD tables.
pub fn estimate_rsd(inst: &ProblemInstance, omega: f64) -> Result<Vec<AttackReport>> {
    let Problem::Rsd { m, n, k, t } = inst.problem else {
        return invalid("estimate_rsd needs an RSD instance");
    };
    inst.validate()?;
    let lq = inst.log2_q();
    let (m, n, k, t) = (m as i64, n as i64, k as i64, t as i64);
    let mut out = Vec::with_capacity(8);

    // Basis enumeration: the cheaper of the two enumeration orders.
    let first = 3.0 * l(m) + 3.0 * l(t) + lq * ((t - 1) * (k + 1)) as f64;
    let second = 3.0 * l(k + t) + 3.0 * l(t) + lq * ((t - 1) * (m - t)) as f64;
    let branch = i64::from(second < first);
    out.push(AttackReport::new("rsd-comb-basis", first.min(second), vec![("branch", branch)]));

    let poly = 3.0 * l(n - k) + 3.0 * l(m);
    let e = (t * ceil_div(m * k, n)).min((t - 1) * ceil_div(m * (k + 1), n));
    out.push(AttackReport::new("rsd-comb-grs", poly + lq * e as f64, vec![]));
    let e = t * ceil_div(m * (k + 1), n) - m;
    out.push(AttackReport::new("rsd-comb-aght", poly + lq * e as f64, vec![]));

    let over = overdetermined(m, n, k, t);
    let tag = vec![("over", i64::from(over))];
    let lmn = l((m + n) * t);
    if over {
        // ((m+n)t)^t is 1 at t = 0.
        let power = if t == 0 { 0.0 } else { t as f64 * lmn };
        let mm = omega * (power - log2_factorial(t as u64));
        out.push(AttackReport::new("rsd-alg-mm-over", mm, tag.clone()));
        match first_shortening(m, n, k, t) {
            Some(p) => {
                let c = l(m) + lc(n - p - k - 1, t) + (omega - 1.0) * lc(n - p, t);
                out.push(AttackReport::new("rsd-alg-sm-over", c, vec![("over", 1), ("p", p)]));
            }
            None => out.push(AttackReport::inapplicable("rsd-alg-sm-over", "no shortening p satisfies the condition")),
        }
        for name in ["rsd-alg-mm-under", "rsd-alg-sm-hybrid", "rsd-alg-sm-plus"] {
            out.push(AttackReport::inapplicable(name, "system is overdetermined"));
        }
    } else {
        for name in ["rsd-alg-mm-over", "rsd-alg-sm-over"] {
            out.push(AttackReport::inapplicable(name, "system is underdetermined"));
        }
        let mm = omega * ((t + 1) as f64 * lmn - log2_factorial(t as u64 + 1));
        out.push(AttackReport::new("rsd-alg-mm-under", mm, tag));
        match first_shortening(m, n, k, t) {
            Some(a) => {
                let c = lq * (a * t) as f64 + l(m) + lc(n - k - 1, t) + (omega - 1.0) * lc(n - a, t);
                out.push(AttackReport::new("rsd-alg-sm-hybrid", c, vec![("over", 0), ("a", a)]));
            }
            None => out.push(AttackReport::inapplicable("rsd-alg-sm-hybrid", "no guess count a satisfies the condition")),
        }
        out.push(sm_plus(m, n, k, t));
    }
    Ok(out)
}

fn sm_plus(m: i64, n: i64, k: i64, t: i64) -> AttackReport {
    const NAME: &str = "rsd-alg-sm-plus";
    let Some(b) = plus_degree(m, n, k, t) else {
        return AttackReport::inapplicable(NAME, "no degree b < t+2 satisfies A_b − 1 ≤ B_b + C_b");
    };
    let (sa, sb, sc) = abc_sums(m, n, k, t, b);
    let mut num = SignedSum::default();
    let mut den = SignedSum::default();
    if let Some((neg, v)) = sb.eval() {
        num.push(neg, v + lc(k + t + 1, t));
        den.push(neg, v);
    }
    if let Some((neg, v)) = sc.eval() {
        num.push(neg, v + l(m * k + 1) + l(t + 1));
        den.push(neg, v);
    }
    match (num.eval(), den.eval(), sa.log2()) {
        (Some((ns, nv)), Some((ds, dv)), Some(av)) if ns == ds => {
            AttackReport::new(NAME, nv - dv + 2.0 * av, vec![("over", 0), ("b", b)])
        }
        _ => AttackReport::inapplicable(NAME, "weighted degree is not positive"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(m: usize, n: usize, k: usize, t: usize) -> Vec<AttackReport> {
        estimate_rsd(&ProblemInstance::binary(Problem::Rsd { m, n, k, t }), crate::DEFAULT_OMEGA).unwrap()
    }

    #[test]
    fn overdetermined_toy() {
        // 20·C(14,3) = 7280 ≥ C(20,3) − 1 = 1139.
        assert!(overdetermined(20, 20, 5, 3));
        let r = run(20, 20, 5, 3);
        assert_eq!(r.len(), 8);
        assert!(r.iter().find(|x| x.attack == "rsd-alg-mm-over").unwrap().applicable);
        assert!(!r.iter().find(|x| x.attack == "rsd-alg-mm-under").unwrap().applicable);
    }

    #[test]
    fn zero_weight_is_polynomial() {
        for rep in run(30, 40, 20, 0).iter().filter(|x| x.attack.starts_with("rsd-comb")) {
            assert!(rep.raw < 40.0, "{rep:?}");
        }
    }

    #[test]
    fn underdetermined_branch_reports_all_rows() {
        let r = run(53, 120, 60, 6);
        assert!(!overdetermined(53, 120, 60, 6));
        for name in ["rsd-alg-mm-under", "rsd-alg-sm-hybrid"] {
            let x = r.iter().find(|x| x.attack == name).unwrap();
            assert!(x.applicable && x.bits > 0.0, "{x:?}");
        }
    }
}
