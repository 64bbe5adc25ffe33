//! Attacks on rank support learning: RSL (combinatorial, and algebraic for
//! δ = 0 and δ > 0) and the combinatorial attack on NHRSL.

use crate::logmath::{floor_div, int_le, log2_binomial as lc, log2_int as l, log2_sum};
use crate::{invalid, AttackReport, Problem, ProblemInstance, Result};

/// RSL reports: combinatorial, algebraic with δ = 0 and the best δ > 0.
pub fn estimate_rsl(inst: &ProblemInstance, omega: f64) -> Result<Vec<AttackReport>> {
    let Problem::Rsl { m, n, k, r, samples } = inst.problem else {
        return invalid("estimate_rsl needs an RSL instance");
    };
    inst.validate()?;
    let (m, n, k, r, big_n) = (m as i64, n as i64, k as i64, r as i64, samples as i64);
    let lq = inst.log2_q();
    let mut out = vec![rsl_combinatorial(m, n, k, r, big_n, lq)];

    // δ = 0: a r < N ≤ (a+1) r and N′ = a r + 1.
    let a = (big_n + r - 1) / r - 1;
    out.push(match algebraic_search(m, n, k, r, 0, a, a * r + 1, omega) {
        Some(s) => s.report("rsl-alg-d0"),
        None => AttackReport::inapplicable("rsl-alg-d0", "no (b, α_R, α_λ) satisfies m·N ≥ M − 1"),
    });

    // δ > 0: N ≥ δ(n−r+δ); a is the largest with N ≥ δ(n−r+δ) + a(r−δ).
    let mut best: Option<AlgebraicChoice> = None;
    for delta in 1..r {
        let base = delta * (n - r + delta);
        if big_n < base {
            continue;
        }
        let a = (big_n - base) / (r - delta);
        if let Some(s) = algebraic_search(m, n, k, r, delta, a, base + a * (r - delta), omega) {
            if best.as_ref().map_or(true, |b| s.cost < b.cost) {
                best = Some(s);
            }
        }
    }
    out.push(match best {
        Some(s) => s.report("rsl-alg-dpos"),
        None => AttackReport::inapplicable("rsl-alg-dpos", "no δ > 0 with N ≥ δ(n−r+δ) admits a feasible choice"),
    });
    Ok(out)
}

fn rsl_combinatorial(m: i64, n: i64, k: i64, r: i64, big_n: i64, lq: f64) -> AttackReport {
    const NAME: &str = "rsl-comb";
    if big_n >= k * r {
        return AttackReport::inapplicable(NAME, "needs N < k·r");
    }
    let a = big_n / r;
    let x = floor_div(m * (n - k) - big_n, n - a);
    AttackReport::new(NAME, lq * (r * (m - x)) as f64, vec![("a", a)])
}

/// Parameters and cost of the cheapest algebraic choice.
#[derive(Clone, Debug)]
struct AlgebraicChoice {
    cost: f64,
    delta: i64,
    a: i64,
    b: i64,
    alpha_r: i64,
    alpha_l: i64,
    branch: i64,
}

impl AlgebraicChoice {
    fn report(&self, name: &'static str) -> AttackReport {
        AttackReport::new(
            name,
            self.cost,
            vec![
                ("delta", self.delta),
                ("a", self.a),
                ("b", self.b),
                ("alpha_r", self.alpha_r),
                ("alpha_l", self.alpha_l),
                ("branch", self.branch),
            ],
        )
    }
}

/// log₂𝓝_{≤i} for i = 1..=b_max at one α_λ, as prefix sums over i of
/// Σ_{d=1}^{i} Σ_{j=1}^{n−k} C(j−1, d−1)·C(n−k−j, w−d+1)·C(N″−j, i−d),
/// where w is the effective weight and N″ = N′ − α_λ.
pub fn rsl_equation_counts(n: i64, k: i64, w: i64, rows: i64, b_max: i64) -> Vec<f64> {
    let mut out = Vec::with_capacity(b_max as usize);
    let mut terms = Vec::new();
    for i in 1..=b_max {
        for d in 1..=i {
            for j in 1..=n - k {
                terms.push(lc(j - 1, d - 1) + lc(n - k - j, w - d + 1) + lc(rows - j, i - d));
            }
        }
        out.push(log2_sum(terms.iter().copied()));
    }
    out
}

/// Bounded search over b ∈ [1, w+1], α_R ∈ [0, n−a−r) and α_λ ∈ [0, N′−b),
/// with w = r − δ the weight in 𝓜 and 𝓝.
#[allow(clippy::too_many_arguments)]
fn algebraic_search(m: i64, n: i64, k: i64, r: i64, delta: i64, a: i64, n_prime: i64, omega: f64) -> Option<AlgebraicChoice> {
    let w = r - delta;
    let lm = l(m);
    let tail = lc(k - a + 1 + r, r);
    let mut best: Option<AlgebraicChoice> = None;
    for alpha_l in 0..n_prime.max(0) {
        let rows = n_prime - alpha_l;
        let counts = rsl_equation_counts(n, k, w, rows, w + 1);
        let mut monomials = Vec::new();
        for b in 1..=w + 1 {
            monomials.push(lc(rows, b));
            if alpha_l >= n_prime - b {
                break;
            }
            let col_sum = log2_sum(monomials.iter().copied());
            let eqs = counts[b as usize - 1];
            let bound = log2_sum([lm + eqs, 0.0]);
            for alpha_r in 0..(n - a - r).max(0) {
                let big_m = lc(n - a - alpha_r, w) + col_sum;
                if !int_le(big_m, bound) || big_m == f64::NEG_INFINITY {
                    continue;
                }
                let first = lm + eqs + (omega - 1.0) * big_m;
                let second = l(rows) + tail + 2.0 * big_m;
                let branch = i64::from(second < first);
                let cost = (r * alpha_r + alpha_l) as f64 + first.min(second);
                if best.as_ref().map_or(true, |x| cost < x.cost) {
                    best = Some(AlgebraicChoice { cost, delta, a, b, alpha_r, alpha_l, branch });
                }
            }
        }
    }
    best
}

/// NHRSL combinatorial attack: maximizes ω₂r + (ω₂−ω₁)ρ over N₁ ∈ [0, N],
/// r ∈ [ω₁, m−1], ρ ∈ [ω₂−ω₁, m−1−r] under the printed constraints. The
/// printed N₁+N₂ = n₂ is read with n₂ the sample count N. A zero weight
/// leaves ⌊Nᵢ/ωᵢ⌋ undefined, so the matching Nᵢ is then restricted to 0.
pub fn estimate_nhrsl(inst: &ProblemInstance) -> Result<Vec<AttackReport>> {
    const NAME: &str = "nhrsl-comb";
    let Problem::Nhrsl { m, n, z, samples, w1, w2 } = inst.problem else {
        return invalid("estimate_nhrsl needs an NHRSL instance");
    };
    inst.validate()?;
    let lq = inst.log2_q();
    let (m, n, z, big_n, w1, w2) = (m as i64, n as i64, z as i64, samples as i64, w1 as i64, w2 as i64);
    let mut best: Option<(i64, [i64; 3])> = None;
    for n1 in 0..=big_n {
        let n2 = big_n - n1;
        let Some(a) = quotient(n1, w1) else { continue };
        let Some(b) = quotient(n2, w2) else { continue };
        if a > n - 2 * z || b > 2 * z {
            continue;
        }
        for r in w1..m {
            for rho in (w2 - w1)..m - r {
                if m * (n - z) < (n - 2 * z - b) * (r + rho) + (2 * z - a) * r + big_n {
                    continue;
                }
                let score = w2 * r + (w2 - w1) * rho;
                if best.map_or(true, |(s, _)| score > s) {
                    best = Some((score, [n1, r, rho]));
                }
            }
        }
    }
    let report = match best {
        Some((_, [n1, r, rho])) => {
            let e = w2 * (m - r) - (w2 - w1) * rho;
            AttackReport::new(NAME, lq * e as f64, vec![("n1", n1), ("r", r), ("rho", rho)])
        }
        None => AttackReport::inapplicable(NAME, "no (N₁, r, ρ) satisfies the constraints"),
    };
    let report = if n < 3 * z { report } else { report.flag("printed condition n < 3z does not hold") };
    Ok(vec![report])
}

fn quotient(x: i64, w: i64) -> Option<i64> {
    match (x, w) {
        (0, 0) => Some(0),
        (_, 0) => None,
        _ => Some(x / w),
    }
}
