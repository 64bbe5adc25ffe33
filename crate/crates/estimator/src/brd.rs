//! Combinatorial and algebraic attacks on the blockwise problem
//! BRD(q, m, n, k, r, η, ρ), including the BP variant of MaxMinors.

use crate::logmath::{ceil_div, int_le, log2_binomial as lc, log2_int as l, log2_sum};
use crate::{invalid, rsd, AttackReport, Problem, ProblemInstance, Result};

/// Largest supported number of blocks.
pub const MAX_BLOCKS: usize = 8;

pub const T_NAMES: [&str; MAX_BLOCKS] = ["t1", "t2", "t3", "t4", "t5", "t6", "t7", "t8"];
pub const TP_NAMES: [&str; MAX_BLOCKS] = ["tp1", "tp2", "tp3", "tp4", "tp5", "tp6", "tp7", "tp8"];
pub const P_NAMES: [&str; MAX_BLOCKS] = ["p1", "p2", "p3", "p4", "p5", "p6", "p7", "p8"];
pub const A_NAMES: [&str; MAX_BLOCKS] = ["a1", "a2", "a3", "a4", "a5", "a6", "a7", "a8"];

fn named(names: &[&'static str], v: &[i64]) -> Vec<(&'static str, i64)> {
    names.iter().copied().zip(v.iter().copied()).collect()
}

/// Unpacked BRD instance.
struct Brd {
    m: i64,
    n: i64,
    k: i64,
    r: i64,
    eta: Vec<i64>,
    rho: Vec<i64>,
    lq: f64,
    omega: f64,
}

/// All reports for a BRD instance. With a single block the problem is RSD
/// and the RSD reports are returned.
pub fn estimate_brd(inst: &ProblemInstance, omega: f64) -> Result<Vec<AttackReport>> {
    let Problem::Brd { m, k, eta, rho } = &inst.problem else {
        return invalid("estimate_brd needs a BRD instance");
    };
    inst.validate()?;
    if eta.len() > MAX_BLOCKS {
        return invalid(format!("at most {MAX_BLOCKS} blocks are supported"));
    }
    if eta.len() == 1 {
        let rsd = ProblemInstance { q: inst.q, problem: Problem::Rsd { m: *m, n: eta[0], k: *k, t: rho[0] } };
        return rsd::estimate_rsd(&rsd, omega);
    }
    let b = Brd {
        m: *m as i64,
        n: eta.iter().sum::<usize>() as i64,
        k: *k as i64,
        r: rho.iter().sum::<usize>() as i64,
        eta: eta.iter().map(|&x| x as i64).collect(),
        rho: rho.iter().map(|&x| x as i64).collect(),
        lq: inst.log2_q(),
        omega,
    };
    let mut out = aght(&b);
    out.push(prr_first(&b));
    out.push(prr_second(&b));
    out.extend(oj(&b));
    out.push(ap_linearization(&b));
    out.push(AttackReport::inapplicable("brd-ap-grobner", "degree of regularity is not specified"));
    out.extend(max_minors(&b));
    out.push(bp_max_minors(&b));
    Ok(out)
}

fn aght(b: &Brd) -> Vec<AttackReport> {
    let Brd { m, n, k, r, lq, omega, .. } = *b;
    let small = AttackReport::new(
        "brd-aght-m-le-n",
        omega * (l(n - k - 1) + l(m)) + lq * (r * ceil_div((k + 1) * m, n) - m) as f64,
        vec![],
    );
    let large = AttackReport::new("brd-aght-m-gt-n", omega * l(n - k - 1) + 2.0 * l(m) + lq * (r * (k + 1)) as f64, vec![]);
    if m <= n {
        vec![small, AttackReport::inapplicable("brd-aght-m-gt-n", "m ≤ n")]
    } else {
        vec![AttackReport::inapplicable("brd-aght-m-le-n", "m > n"), large]
    }
}

/// tᵢ ∈ [rᵢ, m], Σtᵢ ≤ m, Σnᵢtᵢ ≤ m(n−k−1); maximizes Σrᵢtᵢ.
fn prr_first(b: &Brd) -> AttackReport {
    const NAME: &str = "brd-prr-first";
    let cap = b.m * (b.n - b.k - 1);
    let mut best: Option<(i64, Vec<i64>)> = None;
    let mut t = vec![0i64; b.eta.len()];
    fn go(b: &Brd, i: usize, t: &mut Vec<i64>, sum: i64, weighted: i64, cap: i64, best: &mut Option<(i64, Vec<i64>)>) {
        if i == t.len() {
            let score: i64 = t.iter().zip(&b.rho).map(|(x, r)| x * r).sum();
            if best.as_ref().map_or(true, |(s, _)| score > *s) {
                *best = Some((score, t.clone()));
            }
            return;
        }
        for x in b.rho[i]..=b.m {
            if sum + x > b.m || weighted + b.eta[i] * x > cap {
                break;
            }
            t[i] = x;
            go(b, i + 1, t, sum + x, weighted + b.eta[i] * x, cap, best);
        }
    }
    go(b, 0, &mut t, 0, 0, cap, &mut best);
    let Some((score, t)) = best else {
        return AttackReport::inapplicable(NAME, "no tᵢ satisfies the constraints");
    };
    let e = b.r * b.m - score - b.m;
    AttackReport::new(NAME, b.omega * l(cap) + b.lq * e as f64, named(&T_NAMES, &t))
}

/// t′ᵢ ∈ [rᵢ, nᵢ], Σt′ᵢ ≤ n−k−1; maximizes Σrᵢt′ᵢ.
fn prr_second(b: &Brd) -> AttackReport {
    const NAME: &str = "brd-prr-second";
    let cap = b.n - b.k - 1;
    let last = b.eta.len() - 1;
    let mut best: Option<(i64, Vec<i64>)> = None;
    let mut t = vec![0i64; b.eta.len()];
    fn go(b: &Brd, i: usize, last: usize, t: &mut Vec<i64>, sum: i64, cap: i64, best: &mut Option<(i64, Vec<i64>)>) {
        if i == last {
            let room = cap - sum;
            if room < b.rho[i] {
                return;
            }
            t[i] = if b.rho[i] > 0 { room.min(b.eta[i]) } else { 0 };
            let score: i64 = t.iter().zip(&b.rho).map(|(x, r)| x * r).sum();
            if best.as_ref().map_or(true, |(s, _)| score > *s) {
                *best = Some((score, t.clone()));
            }
            return;
        }
        for x in b.rho[i]..=b.eta[i] {
            if sum + x > cap {
                break;
            }
            t[i] = x;
            go(b, i + 1, last, t, sum + x, cap, best);
        }
    }
    go(b, 0, last, &mut t, 0, cap, &mut best);
    let Some((score, t)) = best else {
        return AttackReport::inapplicable(NAME, "no t′ᵢ satisfies the constraints");
    };
    let e: i64 = b.rho.iter().zip(&b.eta).map(|(r, n)| r * n).sum::<i64>() - score;
    AttackReport::new(NAME, b.omega * l(cap) + 2.0 * l(b.m) + b.lq * e as f64, named(&TP_NAMES, &t))
}

fn oj(b: &Brd) -> Vec<AttackReport> {
    let Brd { m, k, r, lq, omega, .. } = *b;
    let (n1, r1) = (b.eta[0], b.rho[0]);
    let r2 = b.rho[1];
    let gamma = b.rho[1..].iter().copied().max().unwrap_or(0);
    let mut out = vec![AttackReport::new("brd-oj-basis", omega * l(k * r + r) + lq * ((m - r) * (r - 1)) as f64, vec![])];
    let high = n1 - 1 <= k && k < n1 + r2 - 1;
    let mid = r1 - 1 <= k && k <= n1 - 1;
    let low = 1 <= k && k <= r1 - 1;
    let overlap = [high, mid, low].iter().filter(|&&x| x).count() > 1;
    let mark = |rep: AttackReport| if overlap { rep.flag("k-range branches overlap") } else { rep };
    let g = vec![("gamma", gamma)];
    out.push(if high {
        mark(AttackReport::new(
            "brd-oj-k-high",
            omega * l(m * (r - 1) + (n1 - r1)) + lq * ((r1 - 1) * (n1 - r1) + gamma) as f64,
            g.clone(),
        ))
    } else {
        AttackReport::inapplicable("brd-oj-k-high", "k outside [n₁−1, n₁+r₂−1)")
    });
    out.push(if mid {
        mark(AttackReport::new(
            "brd-oj-k-mid",
            omega * l(m * (r - 1) + (k + 1 - r1)) + lq * ((r1 - 1) * (k + 1 - r1) + gamma) as f64,
            g.clone(),
        ))
    } else {
        AttackReport::inapplicable("brd-oj-k-mid", "k outside [r₁−1, n₁−1]")
    });
    out.push(if low {
        mark(AttackReport::new("brd-oj-k-low", omega * l(m * (r - 1)) + lq * gamma as f64, g))
    } else {
        AttackReport::inapplicable("brd-oj-k-low", "k outside [1, r₁−1]")
    });
    out
}

fn ap_linearization(b: &Brd) -> AttackReport {
    const NAME: &str = "brd-ap-lin";
    let mut best: Option<(f64, i64)> = None;
    for (v, (&nv, &rv)) in b.eta.iter().zip(&b.rho).enumerate() {
        if rv == 0 {
            continue;
        }
        let e = rv * ceil_div((b.k + 1) * (rv + 1) - (nv + 1), rv);
        let c = b.omega * l(rv * b.k) + b.lq * e as f64;
        if best.map_or(true, |(x, _)| c < x) {
            best = Some((c, v as i64 + 1));
        }
    }
    match best {
        Some((c, v)) => AttackReport::new(NAME, c, vec![("v", v)]),
        None => AttackReport::inapplicable(NAME, "every block has weight 0"),
    }
}

/// log₂(2^x + 1): the bound X ≥ Y − 1 is log₂Y ≤ log₂(2^x + 1).
fn plus_one(x: f64) -> f64 {
    log2_sum([x, 0.0])
}

/// MaxMinors in both regimes: shortening the last block when
/// m·C(n−k−1, r) ≥ ΠC(nᵢ, rᵢ) − 1, guessing an a-vector otherwise.
fn max_minors(b: &Brd) -> Vec<AttackReport> {
    let Brd { m, n, k, r, omega, .. } = *b;
    let blocks = b.eta.len();
    let full: f64 = b.eta.iter().zip(&b.rho).map(|(&n, &r)| lc(n, r)).sum();
    let lhs = l(m) + lc(n - k - 1, r);
    let over = int_le(full, plus_one(lhs));
    if over {
        let rest: f64 = b.eta[..blocks - 1].iter().zip(&b.rho).map(|(&n, &r)| lc(n, r)).sum();
        let (nl, rl) = (b.eta[blocks - 1], b.rho[blocks - 1]);
        let top = (n - k - 1 - r).min(nl - rl);
        let p = (0..=top)
            .rev()
            .find(|&i| int_le(lc(nl - i, rl) + rest, plus_one(l(m) + lc(n - i - k - 1, r))))
            .unwrap_or(0);
        let c = l(m) + lc(n - p - k - 1, r) + (omega - 1.0) * (lc(nl - p, rl) + rest);
        vec![
            AttackReport::new("brd-mm-over", c, vec![("over", 1), ("p", p)]),
            AttackReport::inapplicable("brd-mm-under", "first-regime condition holds"),
        ]
    } else {
        let tables = Tables::new(b);
        let under = match min_guess(b, &tables, plus_one(lhs)) {
            Some((obj, a)) => {
                let mut params = vec![("over", 0)];
                params.extend(named(&A_NAMES, &a));
                AttackReport::new("brd-mm-under", obj + lhs, params)
            }
            None => AttackReport::inapplicable("brd-mm-under", "no a-vector satisfies the condition"),
        };
        vec![AttackReport::inapplicable("brd-mm-over", "first-regime condition fails"), under]
    }
}

/// log₂C(x, rᵢ) per block and log₂C(y, r), indexed by x and y.
struct Tables {
    block: Vec<Vec<f64>>,
    total: Vec<f64>,
}

impl Tables {
    fn new(b: &Brd) -> Self {
        let block = b.eta.iter().zip(&b.rho).map(|(&n, &r)| (0..=n).map(|x| lc(x, r)).collect()).collect();
        let total = (0..=b.n).map(|y| lc(y, b.r)).collect();
        Self { block, total }
    }
}

/// Minimizes log q·Σaᵢrᵢ + (ω−1)·Σlog₂C(nᵢ−aᵢ, rᵢ) subject to
/// Σlog₂C(nᵢ−aᵢ, rᵢ) ≤ bound, over aᵢ ∈ [0, nᵢ−rᵢ], by branch and bound.
fn min_guess(b: &Brd, t: &Tables, bound: f64) -> Option<(f64, Vec<i64>)> {
    struct Search<'a> {
        b: &'a Brd,
        t: &'a Tables,
        bound: f64,
        best: Option<(f64, Vec<i64>)>,
    }
    impl Search<'_> {
        fn go(&mut self, i: usize, a: &mut Vec<i64>, weight: f64, prod: f64, smooth: f64) {
            let b = self.b;
            if i == a.len() {
                if int_le(prod, self.bound) {
                    let obj = weight + (b.omega - 1.0) * smooth;
                    if self.best.as_ref().map_or(true, |(x, _)| obj < *x) {
                        self.best = Some((obj, a.clone()));
                    }
                }
                return;
            }
            let top = if b.rho[i] == 0 { 0 } else { b.eta[i] - b.rho[i] };
            for x in 0..=top {
                let w = weight + b.lq * (x * b.rho[i]) as f64;
                if self.best.as_ref().is_some_and(|(best, _)| w >= *best) {
                    break;
                }
                let c = self.t.block[i][(b.eta[i] - x) as usize];
                a[i] = x;
                self.go(i + 1, a, w, prod + c, smooth + c);
            }
        }
    }
    let mut s = Search { b, t, bound, best: None };
    s.go(0, &mut vec![0; b.eta.len()], 0.0, 0.0, 0.0);
    s.best
}

/// Extreme points of {x : Σxᵢ = total, 0 ≤ xᵢ ≤ capᵢ}: every coordinate but
/// one sits at a bound.
fn vertices(cap: &[i64], total: i64) -> Vec<Vec<i64>> {
    let l = cap.len();
    let mut out = Vec::new();
    for free in 0..l {
        for mask in 0u32..1 << l {
            if mask & (1 << free) != 0 {
                continue;
            }
            let fixed: i64 = (0..l).filter(|&i| mask & (1 << i) != 0).map(|i| cap[i]).sum();
            let rest = total - fixed;
            if (0..=cap[free]).contains(&rest) {
                let v: Vec<i64> = (0..l).map(|i| if i == free { rest } else if mask & (1 << i) != 0 { cap[i] } else { 0 }).collect();
                if !out.contains(&v) {
                    out.push(v);
                }
            }
        }
    }
    out
}

/// Guesses a: A positions placed on the cheapest blocks first, aᵢ ≤ sᵢ.
fn cheapest_guess(rho: &[i64], s: &[i64], total: i64) -> Option<Vec<i64>> {
    let mut order: Vec<usize> = (0..rho.len()).collect();
    order.sort_by_key(|&i| (rho[i], i));
    let mut a = vec![0; rho.len()];
    let mut left = total;
    for i in order {
        let x = left.min(s[i]);
        a[i] = x;
        left -= x;
    }
    (left == 0).then_some(a)
}

/// BP-MaxMinors: minimizes q^{Σaᵢrᵢ}·m·C(n−p−k−1, r)·(ΠC(nᵢ−pᵢ−aᵢ, rᵢ))^{ω−1}
/// subject to m·C(n−p−k−1, r) ≥ ΠC(nᵢ−pᵢ−aᵢ, rᵢ). The search runs over the
/// per-block shortening sᵢ = pᵢ + aᵢ with total S ∈ [0, Σ(nᵢ−rᵢ)] at the
/// extreme points of each total, and over A = Σaᵢ ∈ [0, S] placed on the
/// lowest-weight blocks.
fn bp_max_minors(b: &Brd) -> AttackReport {
    const NAME: &str = "brd-bp-mm";
    let t = Tables::new(b);
    let cap: Vec<i64> = b.eta.iter().zip(&b.rho).map(|(n, r)| n - r).collect();
    let rmin = b.rho.iter().copied().min().unwrap_or(0);
    let lm = l(b.m);
    let mut best: Option<(f64, Vec<i64>, Vec<i64>)> = None;
    for total in 0..=cap.iter().sum::<i64>() {
        for s in vertices(&cap, total) {
            let prod: f64 = s.iter().enumerate().map(|(i, &x)| t.block[i][(b.eta[i] - x) as usize]).sum();
            for guessed in 0..=total {
                let p_total = total - guessed;
                let y = b.n - p_total - b.k - 1;
                if y < b.r {
                    continue;
                }
                if let Some((bst, _, _)) = &best {
                    if b.lq * (guessed * rmin) as f64 + lm >= *bst {
                        break;
                    }
                }
                let lhs = lm + t.total[y as usize];
                if !int_le(prod, lhs) {
                    continue;
                }
                let Some(a) = cheapest_guess(&b.rho, &s, guessed) else { continue };
                let w: i64 = a.iter().zip(&b.rho).map(|(x, r)| x * r).sum();
                let obj = b.lq * w as f64 + lhs + (b.omega - 1.0) * prod;
                if best.as_ref().map_or(true, |(x, _, _)| obj < *x) {
                    let p: Vec<i64> = s.iter().zip(&a).map(|(s, a)| s - a).collect();
                    best = Some((obj, p, a));
                }
            }
        }
    }
    match best {
        Some((obj, p, a)) => {
            let mut params = named(&P_NAMES, &p);
            params.extend(named(&A_NAMES, &a));
            AttackReport::new(NAME, obj, params)
        }
        None => AttackReport::inapplicable(NAME, "no (a, p) satisfies the condition"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brd(m: usize, k: usize, eta: &[usize], rho: &[usize]) -> Vec<AttackReport> {
        let inst = ProblemInstance::binary(Problem::Brd { m, k, eta: eta.to_vec(), rho: rho.to_vec() });
        estimate_brd(&inst, crate::DEFAULT_OMEGA).unwrap()
    }

    #[test]
    fn single_block_is_rsd() {
        let a = brd(31, 20, &[40], &[5]);
        let inst = ProblemInstance::binary(Problem::Rsd { m: 31, n: 40, k: 20, t: 5 });
        assert_eq!(a, rsd::estimate_rsd(&inst, crate::DEFAULT_OMEGA).unwrap());
    }

    #[test]
    fn vertices_cover_extremes() {
        let v = vertices(&[2, 3], 3);
        assert!(v.contains(&vec![0, 3]) && v.contains(&vec![2, 1]));
        assert!(v.iter().all(|x| x.iter().sum::<i64>() == 3));
        assert!(vertices(&[1, 1], 3).is_empty());
    }

    #[test]
    fn cheapest_guess_prefers_low_weight() {
        assert_eq!(cheapest_guess(&[3, 1, 2], &[5, 2, 5], 4), Some(vec![0, 2, 2]));
        assert_eq!(cheapest_guess(&[1, 1], &[1, 1], 3), None);
    }

    #[test]
    fn every_family_reports() {
        let r = brd(53, 59, &[59, 59], &[3, 3]);
        for name in ["brd-aght-m-le-n", "brd-prr-first", "brd-prr-second", "brd-oj-basis", "brd-ap-lin", "brd-bp-mm"] {
            let x = r.iter().find(|x| x.attack == name).unwrap();
            assert!(x.applicable, "{x:?}");
        }
        assert!(r.iter().any(|x| x.attack.starts_with("brd-mm-") && x.applicable));
    }
}
