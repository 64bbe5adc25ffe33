//! Exact re-evaluation of every cost formula as printed, with big-integer
//! binomials, products and signed sums; logarithms are taken only once per
//! factor. Shares no code with the log-domain evaluators and serves as their
//! test oracle, together with an integer replay of every chosen parameter.

use std::cmp::Ordering;

use crate::{brd, AttackReport, Problem, ProblemInstance};

/// Arbitrary-precision natural number, little-endian base-2³² limbs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nat(Vec<u32>);

impl Nat {
    pub fn zero() -> Self {
        Nat(Vec::new())
    }

    pub fn from_u64(x: u64) -> Self {
        Nat(vec![x as u32, (x >> 32) as u32]).trim()
    }

    /// Converts a non-negative integer; negative values map to zero.
    pub fn from_i64(x: i64) -> Self {
        Self::from_u64(x.max(0) as u64)
    }

    fn trim(mut self) -> Self {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, o: &Nat) -> Nat {
        let mut out = Vec::with_capacity(self.0.len().max(o.0.len()) + 1);
        let mut carry = 0u64;
        for i in 0..self.0.len().max(o.0.len()) {
            let s = u64::from(*self.0.get(i).unwrap_or(&0)) + u64::from(*o.0.get(i).unwrap_or(&0)) + carry;
            out.push(s as u32);
            carry = s >> 32;
        }
        out.push(carry as u32);
        Nat(out).trim()
    }

    pub fn checked_sub(&self, o: &Nat) -> Option<Nat> {
        if *self < *o {
            return None;
        }
        let mut out = Vec::with_capacity(self.0.len());
        let mut borrow = 0i64;
        for i in 0..self.0.len() {
            let mut d = i64::from(self.0[i]) - i64::from(*o.0.get(i).unwrap_or(&0)) - borrow;
            borrow = i64::from(d < 0);
            if d < 0 {
                d += 1 << 32;
            }
            out.push(d as u32);
        }
        Some(Nat(out).trim())
    }

    pub fn mul(&self, o: &Nat) -> Nat {
        if self.is_zero() || o.is_zero() {
            return Nat::zero();
        }
        let mut out = vec![0u64; self.0.len() + o.0.len() + 1];
        for (i, &a) in self.0.iter().enumerate() {
            let mut carry = 0u64;
            for (j, &b) in o.0.iter().enumerate() {
                let cur = out[i + j] + u64::from(a) * u64::from(b) + carry;
                out[i + j] = cur & 0xffff_ffff;
                carry = cur >> 32;
            }
            let mut k = i + o.0.len();
            while carry != 0 {
                let cur = out[k] + carry;
                out[k] = cur & 0xffff_ffff;
                carry = cur >> 32;
                k += 1;
            }
        }
        Nat(out.into_iter().map(|x| x as u32).collect()).trim()
    }

    pub fn mul_u64(&self, x: u64) -> Nat {
        self.mul(&Nat::from_u64(x))
    }

    /// (quotient, remainder) by a small divisor.
    pub fn div_u32(&self, d: u32) -> (Nat, u32) {
        let mut out = vec![0u32; self.0.len()];
        let mut rem = 0u64;
        for i in (0..self.0.len()).rev() {
            let cur = (rem << 32) | u64::from(self.0[i]);
            out[i] = (cur / u64::from(d)) as u32;
            rem = cur % u64::from(d);
        }
        (Nat(out).trim(), rem as u32)
    }

    pub fn pow(base: u64, e: u64) -> Nat {
        (0..e).fold(Nat::from_u64(1), |acc, _| acc.mul_u64(base))
    }

    /// log₂ from the leading 96 bits; −∞ at zero.
    pub fn log2(&self) -> f64 {
        let len = self.0.len();
        if len == 0 {
            return f64::NEG_INFINITY;
        }
        let take = len.min(3);
        let top = self.0[len - take..].iter().rev().fold(0u128, |acc, &x| (acc << 32) | u128::from(x));
        (top as f64).log2() + 32.0 * (len - take) as f64
    }
}

impl PartialOrd for Nat {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Nat {
    fn cmp(&self, o: &Self) -> Ordering {
        self.0.len().cmp(&o.0.len()).then_with(|| self.0.iter().rev().cmp(o.0.iter().rev()))
    }
}

/// Signed big integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Int {
    pub neg: bool,
    pub mag: Nat,
}

impl Int {
    pub fn from_nat(mag: Nat) -> Self {
        Int { neg: false, mag }
    }

    pub fn negate(&self) -> Self {
        Int { neg: !self.neg && !self.mag.is_zero(), mag: self.mag.clone() }
    }

    pub fn add(&self, o: &Int) -> Int {
        if self.neg == o.neg {
            return Int { neg: self.neg, mag: self.mag.add(&o.mag) };
        }
        match self.mag.cmp(&o.mag) {
            Ordering::Equal => Int::from_nat(Nat::zero()),
            Ordering::Greater => Int { neg: self.neg, mag: self.mag.checked_sub(&o.mag).expect("larger") },
            Ordering::Less => Int { neg: o.neg, mag: o.mag.checked_sub(&self.mag).expect("larger") },
        }
    }

    pub fn sub(&self, o: &Int) -> Int {
        self.add(&o.negate())
    }

    pub fn mul(&self, o: &Int) -> Int {
        let mag = self.mag.mul(&o.mag);
        Int { neg: self.neg != o.neg && !mag.is_zero(), mag }
    }

    pub fn is_positive(&self) -> bool {
        !self.neg && !self.mag.is_zero()
    }

    pub fn is_non_negative(&self) -> bool {
        !self.neg
    }
}

/// C(a, b) by the multiplicative formula; zero outside 0 ≤ b ≤ a.
pub fn binom(a: i64, b: i64) -> Nat {
    if a < 0 || b < 0 || b > a {
        return Nat::zero();
    }
    let b = b.min(a - b);
    let mut acc = Nat::from_u64(1);
    for i in 1..=b {
        acc = acc.mul_u64((a - b + i) as u64);
        let (q, r) = acc.div_u32(i as u32);
        debug_assert_eq!(r, 0);
        acc = q;
    }
    acc
}

fn factorial(n: i64) -> Nat {
    (2..=n.max(1)).fold(Nat::from_u64(1), |acc, i| acc.mul_u64(i as u64))
}

fn nat(x: i64) -> Nat {
    Nat::from_i64(x)
}

fn int(x: Nat) -> Int {
    Int::from_nat(x)
}

fn product<I: IntoIterator<Item = Nat>>(it: I) -> Nat {
    it.into_iter().fold(Nat::from_u64(1), |acc, x| acc.mul(&x))
}

fn ceil_of(x: i64, d: i64) -> i64 {
    if x >= 0 {
        (x + d - 1) / d
    } else {
        -((-x) / d)
    }
}

fn floor_of(x: i64, d: i64) -> i64 {
    if x >= 0 {
        x / d
    } else {
        -((-x + d - 1) / d)
    }
}

/// Verdict of the oracle on one report.
#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    /// log₂ of the formula at the report's parameters.
    Value(f64),
    /// The formula's applicability condition fails.
    Inapplicable,
    /// An optimizer found no feasible point; the oracle does not search.
    Unchecked,
}

struct Ctx<'a> {
    rep: &'a AttackReport,
    q: u64,
    omega: f64,
}

impl Ctx<'_> {
    fn p(&self, name: &str) -> Result<i64, String> {
        self.rep.param(name).ok_or_else(|| format!("{}: missing parameter {name}", self.rep.attack))
    }

    /// log₂(x·q^e) for any integer e.
    fn lg_q(&self, x: &Nat, e: i64) -> f64 {
        if e >= 0 {
            x.mul(&Nat::pow(self.q, e as u64)).log2()
        } else {
            x.log2() - Nat::pow(self.q, (-e) as u64).log2()
        }
    }

    fn check(&self, ok: bool, what: &str) -> Result<(), String> {
        if ok {
            Ok(())
        } else {
            Err(format!("{}: {what}", self.rep.attack))
        }
    }
}

/// Re-evaluates the report's formula at its parameters and replays every
/// constraint and every parameter defined by a printed minimality rule.
pub fn reevaluate(inst: &ProblemInstance, rep: &AttackReport, omega: f64) -> Result<Verdict, String> {
    let c = Ctx { rep, q: inst.q, omega };
    let v = match &inst.problem {
        Problem::Rsd { m, n, k, t } => rsd(&c, *m as i64, *n as i64, *k as i64, *t as i64)?,
        Problem::Brd { m, k, eta, rho } if eta.len() == 1 => rsd(&c, *m as i64, eta[0] as i64, *k as i64, rho[0] as i64)?,
        Problem::Brd { m, k, eta, rho } => {
            let eta: Vec<i64> = eta.iter().map(|&x| x as i64).collect();
            let rho: Vec<i64> = rho.iter().map(|&x| x as i64).collect();
            brd_exact(&c, *m as i64, *k as i64, &eta, &rho)?
        }
        Problem::Nhrsd { m, n, n1, w1, w2 } => nhrsd(&c, *m as i64, *n as i64, *n1 as i64, *w1 as i64, *w2 as i64)?,
        Problem::NhrdBp { m, k, blocks, r1, r2 } => {
            nhrd_bp(&c, *m as i64, *k as i64, blocks.map(|x| x as i64), *r1 as i64, *r2 as i64)?
        }
        Problem::Rsl { m, n, k, r, samples } => rsl(&c, *m as i64, *n as i64, *k as i64, *r as i64, *samples as i64)?,
        Problem::Nhrsl { m, n, z, samples, w1, w2 } => {
            nhrsl(&c, *m as i64, *n as i64, *z as i64, *samples as i64, *w1 as i64, *w2 as i64)?
        }
    };
    match (&v, rep.applicable) {
        (Verdict::Value(_), false) => Err(format!("{}: oracle finds the formula applicable", rep.attack)),
        (Verdict::Inapplicable, true) => Err(format!("{}: oracle finds the formula inapplicable", rep.attack)),
        (Verdict::Unchecked, true) => Err(format!("{}: unknown attack", rep.attack)),
        _ => Ok(v),
    }
}

fn value_if(ok: bool, f: impl FnOnce() -> Result<f64, String>) -> Result<Verdict, String> {
    if ok {
        f().map(Verdict::Value)
    } else {
        Ok(Verdict::Inapplicable)
    }
}

/// min{1 ≤ i ≤ n : m·C(n−k−1, t) ≥ C(n−i, t) − 1}.
fn rsd_shortening(m: i64, n: i64, k: i64, t: i64) -> Option<i64> {
    let lhs = nat(m).mul(&binom(n - k - 1, t)).add(&Nat::from_u64(1));
    (1..=n).find(|&i| lhs >= binom(n - i, t))
}

fn rsd(c: &Ctx, m: i64, n: i64, k: i64, t: i64) -> Result<Verdict, String> {
    let omega = c.omega;
    let over = nat(m).mul(&binom(n - k - 1, t)).add(&Nat::from_u64(1)) >= binom(n, t);
    let tag_over = || -> Result<(), String> { c.check(c.p("over")? == i64::from(over), "regime flag differs") };
    match c.rep.attack {
        "rsd-comb-basis" => {
            let t3 = nat(t).mul(&nat(t)).mul(&nat(t));
            let v1 = c.lg_q(&nat(m).mul(&nat(m)).mul(&nat(m)).mul(&t3), (t - 1) * (k + 1));
            let v2 = c.lg_q(&nat(k + t).mul(&nat(k + t)).mul(&nat(k + t)).mul(&t3), (t - 1) * (m - t));
            c.check(c.p("branch")? == i64::from(v2 < v1), "enumeration order is not the cheaper one")?;
            Ok(Verdict::Value(v1.min(v2)))
        }
        "rsd-comb-grs" => {
            let e = (t * ceil_of(m * k, n)).min((t - 1) * ceil_of(m * (k + 1), n));
            let x = nat(n - k).mul(&nat(n - k)).mul(&nat(n - k)).mul(&nat(m)).mul(&nat(m)).mul(&nat(m));
            Ok(Verdict::Value(c.lg_q(&x, e)))
        }
        "rsd-comb-aght" => {
            let e = t * ceil_of(m * (k + 1), n) - m;
            let x = nat(n - k).mul(&nat(n - k)).mul(&nat(n - k)).mul(&nat(m)).mul(&nat(m)).mul(&nat(m));
            Ok(Verdict::Value(c.lg_q(&x, e)))
        }
        "rsd-alg-mm-over" => value_if(over, || {
            tag_over()?;
            Ok(omega * (Nat::pow(((m + n) * t) as u64, t as u64).log2() - factorial(t).log2()))
        }),
        "rsd-alg-sm-over" => value_if(over, || {
            let p = rsd_shortening(m, n, k, t).ok_or("no p")?;
            c.check(c.p("p")? == p, "p is not the smallest admissible value")?;
            Ok(nat(m).mul(&binom(n - p - k - 1, t)).log2() + (omega - 1.0) * binom(n - p, t).log2())
        }),
        "rsd-alg-mm-under" => value_if(!over, || {
            tag_over()?;
            Ok(omega * (Nat::pow(((m + n) * t) as u64, (t + 1) as u64).log2() - factorial(t + 1).log2()))
        }),
        "rsd-alg-sm-hybrid" => value_if(!over, || {
            let a = rsd_shortening(m, n, k, t).ok_or("no a")?;
            c.check(c.p("a")? == a, "a is not the smallest admissible value")?;
            Ok(c.lg_q(&nat(m).mul(&binom(n - k - 1, t)), a * t) + (omega - 1.0) * binom(n - a, t).log2())
        }),
        "rsd-alg-sm-plus" => {
            if over {
                return Ok(Verdict::Inapplicable);
            }
            let sums = |b: i64| {
                let (mut sa, mut sb, mut sc) = (Int::from_nat(Nat::zero()), Int::from_nat(Nat::zero()), Int::from_nat(Nat::zero()));
                for j in 1..=b {
                    sa = sa.add(&int(binom(n, t).mul(&binom(m * k + 1, j))));
                    sb = sb.add(&int(nat(m).mul(&binom(n - k - 1, t)).mul(&binom(m * k + 1, j))));
                    for i in 1..=j {
                        let term = int(binom(n, t + i).mul(&binom(m + i - 1, i)).mul(&binom(m * k + 1, j - i)));
                        sc = if i % 2 == 1 { sc.add(&term) } else { sc.sub(&term) };
                    }
                }
                (sa, sb, sc)
            };
            let one = int(Nat::from_u64(1));
            let found = (1..t + 2).find(|&b| {
                let (sa, sb, sc) = sums(b);
                sb.add(&sc).sub(&sa.sub(&one)).is_non_negative()
            });
            let Some(b) = found else { return Ok(Verdict::Inapplicable) };
            let (sa, sb, sc) = sums(b);
            let num = sb.mul(&int(binom(k + t + 1, t))).add(&sc.mul(&int(nat(m * k + 1).mul(&nat(t + 1)))));
            let den = sb.add(&sc);
            if num.mag.is_zero() || den.mag.is_zero() || num.neg != den.neg {
                return Ok(Verdict::Inapplicable);
            }
            if c.rep.applicable {
                c.check(c.p("b")? == b, "b is not the smallest admissible degree")?;
            }
            Ok(Verdict::Value(num.mag.log2() - den.mag.log2() + 2.0 * sa.mag.log2()))
        }
        other => Err(format!("unknown RSD attack {other}")),
    }
}

fn block_params(c: &Ctx, names: &[&str], l: usize) -> Result<Vec<i64>, String> {
    names[..l].iter().map(|n| c.p(n)).collect()
}

fn brd_exact(c: &Ctx, m: i64, k: i64, eta: &[i64], rho: &[i64]) -> Result<Verdict, String> {
    let omega = c.omega;
    let l = eta.len();
    let n: i64 = eta.iter().sum();
    let r: i64 = rho.iter().sum();
    let one = Nat::from_u64(1);
    match c.rep.attack {
        "brd-aght-m-le-n" => value_if(m <= n, || {
            let e = r * ceil_of((k + 1) * m, n) - m;
            Ok(omega * nat((n - k - 1) * m).log2() + c.lg_q(&one, e))
        }),
        "brd-aght-m-gt-n" => value_if(m > n, || {
            Ok(omega * nat(n - k - 1).log2() + nat(m * m).log2() + c.lg_q(&one, r * (k + 1)))
        }),
        "brd-prr-first" => {
            if !c.rep.applicable {
                return Ok(Verdict::Unchecked);
            }
            let t = block_params(c, &brd::T_NAMES, l)?;
            c.check(t.iter().zip(rho).all(|(&t, &r)| r <= t && t <= m), "tᵢ outside [rᵢ, m]")?;
            c.check(t.iter().sum::<i64>() <= m, "Σtᵢ > m")?;
            c.check(t.iter().zip(eta).map(|(t, n)| t * n).sum::<i64>() <= m * (n - k - 1), "Σnᵢtᵢ > m(n−k−1)")?;
            let e: i64 = rho.iter().zip(&t).map(|(r, t)| r * (m - t)).sum::<i64>() - m;
            Ok(Verdict::Value(omega * nat(m * (n - k - 1)).log2() + c.lg_q(&one, e)))
        }
        "brd-prr-second" => {
            if !c.rep.applicable {
                return Ok(Verdict::Unchecked);
            }
            let t = block_params(c, &brd::TP_NAMES, l)?;
            c.check(t.iter().zip(rho).zip(eta).all(|((&t, &r), &n)| r <= t && t <= n), "t′ᵢ outside [rᵢ, nᵢ]")?;
            c.check(t.iter().sum::<i64>() <= n - k - 1, "Σt′ᵢ > n−k−1")?;
            let e: i64 = rho.iter().zip(&t).zip(eta).map(|((r, t), n)| r * (n - t)).sum();
            Ok(Verdict::Value(omega * nat(n - k - 1).log2() + nat(m * m).log2() + c.lg_q(&one, e)))
        }
        "brd-oj-basis" => Ok(Verdict::Value(omega * nat(k * r + r).log2() + c.lg_q(&one, (m - r) * (r - 1)))),
        "brd-oj-k-high" | "brd-oj-k-mid" | "brd-oj-k-low" => {
            let (n1, r1, r2) = (eta[0], rho[0], rho[1]);
            let gamma = *rho[1..].iter().max().expect("l ≥ 2");
            match c.rep.attack {
                "brd-oj-k-high" => value_if(n1 - 1 <= k && k < n1 + r2 - 1, || {
                    Ok(omega * nat(m * (r - 1) + n1 - r1).log2() + c.lg_q(&one, (r1 - 1) * (n1 - r1) + gamma))
                }),
                "brd-oj-k-mid" => value_if(r1 - 1 <= k && k <= n1 - 1, || {
                    Ok(omega * nat(m * (r - 1) + k + 1 - r1).log2() + c.lg_q(&one, (r1 - 1) * (k + 1 - r1) + gamma))
                }),
                _ => value_if(1 <= k && k <= r1 - 1, || Ok(omega * nat(m * (r - 1)).log2() + c.lg_q(&one, gamma))),
            }
        }
        "brd-ap-lin" => {
            let cost = |v: usize| {
                let (nv, rv) = (eta[v], rho[v]);
                omega * nat(rv * k).log2() + c.lg_q(&one, rv * ceil_of((k + 1) * (rv + 1) - (nv + 1), rv))
            };
            let vals: Vec<(usize, f64)> = (0..l).filter(|&v| rho[v] > 0).map(|v| (v, cost(v))).collect();
            let best = vals.iter().map(|x| x.1).fold(f64::INFINITY, f64::min);
            value_if(!vals.is_empty(), || {
                let v = c.p("v")? as usize;
                c.check(v >= 1 && v <= l && rho[v - 1] > 0 && cost(v - 1) == best, "block v does not attain the minimum")?;
                Ok(best)
            })
        }
        "brd-ap-grobner" => Ok(Verdict::Inapplicable),
        "brd-mm-over" | "brd-mm-under" => {
            let lhs = nat(m).mul(&binom(n - k - 1, r)).add(&one);
            let full = product(eta.iter().zip(rho).map(|(&n, &r)| binom(n, r)));
            let over = lhs >= full;
            if c.rep.attack == "brd-mm-over" {
                value_if(over, || {
                    c.check(c.p("over")? == 1, "regime flag differs")?;
                    let rest = product(eta[..l - 1].iter().zip(rho).map(|(&n, &r)| binom(n, r)));
                    let (nl, rl) = (eta[l - 1], rho[l - 1]);
                    let top = (n - k - 1 - r).min(nl - rl);
                    let ok = |i: i64| nat(m).mul(&binom(n - i - k - 1, r)).add(&one) >= binom(nl - i, rl).mul(&rest);
                    let p = (0..=top).filter(|&i| ok(i)).max().unwrap_or(0);
                    c.check(c.p("p")? == p, "p is not the largest admissible value")?;
                    Ok(nat(m).mul(&binom(n - p - k - 1, r)).log2() + (omega - 1.0) * binom(nl - p, rl).mul(&rest).log2())
                })
            } else if over {
                Ok(Verdict::Inapplicable)
            } else if !c.rep.applicable {
                Ok(Verdict::Unchecked)
            } else {
                c.check(c.p("over")? == 0, "regime flag differs")?;
                let a = block_params(c, &brd::A_NAMES, l)?;
                c.check(a.iter().zip(eta).zip(rho).all(|((&a, &n), &r)| 0 <= a && a <= n - r), "aᵢ outside [0, nᵢ−rᵢ]")?;
                let prod = product(eta.iter().zip(rho).zip(&a).map(|((&n, &r), &a)| binom(n - a, r)));
                c.check(lhs >= prod, "m·C(n−k−1, r) < ΠC(nᵢ−aᵢ, rᵢ) − 1")?;
                let w: i64 = a.iter().zip(rho).map(|(a, r)| a * r).sum();
                Ok(Verdict::Value(c.lg_q(&nat(m).mul(&binom(n - k - 1, r)), w) + (omega - 1.0) * prod.log2()))
            }
        }
        "brd-bp-mm" => {
            if !c.rep.applicable {
                return Ok(Verdict::Unchecked);
            }
            let p = block_params(c, &brd::P_NAMES, l)?;
            let a = block_params(c, &brd::A_NAMES, l)?;
            c.check(p.iter().chain(&a).all(|&x| x >= 0), "negative pᵢ or aᵢ")?;
            c.check((0..l).all(|i| p[i] + a[i] <= eta[i]), "pᵢ + aᵢ > nᵢ")?;
            let pt: i64 = p.iter().sum();
            let lhs = nat(m).mul(&binom(n - pt - k - 1, r));
            let prod = product((0..l).map(|i| binom(eta[i] - p[i] - a[i], rho[i])));
            c.check(lhs >= prod, "m·C(n−p−k−1, r) < ΠC(nᵢ−pᵢ−aᵢ, rᵢ)")?;
            let w: i64 = a.iter().zip(rho).map(|(a, r)| a * r).sum();
            Ok(Verdict::Value(c.lg_q(&lhs, w) + (omega - 1.0) * prod.log2()))
        }
        other => Err(format!("unknown BRD attack {other}")),
    }
}

fn nhrsd(c: &Ctx, m: i64, n: i64, n1: i64, w1: i64, w2: i64) -> Result<Verdict, String> {
    let omega = c.omega;
    let w = w1 + w2;
    match c.rep.attack {
        "nhrsd-comb" => {
            if !c.rep.applicable {
                return Ok(Verdict::Unchecked);
            }
            let (r, rho) = (c.p("r")?, c.p("rho")?);
            c.check(w1 <= r && w2 <= rho && r + rho <= m - 1, "(r, ρ) violates ω₁ ≤ r, ω₂ ≤ ρ, r+ρ ≤ m−1")?;
            Ok(Verdict::Value(c.lg_q(&Nat::from_u64(1), (w1 + w2) * (m - r) - w2 * rho - m)))
        }
        "nhrsd-alg" => {
            let eqs = nat(m).mul(&(w2..=w).fold(Nat::zero(), |acc, i| acc.add(&binom(n1 - 1, i).mul(&binom(n, w - i)))));
            let v = int(nat(m).mul(&binom(n1 - 1, w2 - 1)).mul(&binom(n - 1, w1)));
            let unknowns = |a: i64| {
                let ma = (0..w2).fold(Nat::zero(), |acc, i| acc.add(&binom(n1, i).mul(&binom(2 * n - a, w - i))));
                int(binom(2 * n + n1 - a, w)).sub(&int(ma)).sub(&v)
            };
            let bound = int(eqs.add(&Nat::from_u64(1)));
            let Some(a) = (0..=2 * n).find(|&a| bound.sub(&unknowns(a)).is_non_negative()) else {
                return Ok(Verdict::Inapplicable);
            };
            let u = unknowns(a);
            value_if(u.is_positive() && !eqs.is_zero(), || {
                c.check(c.p("a")? == a, "a is not the smallest admissible value")?;
                Ok(c.lg_q(&eqs, a * w1) + (omega - 1.0) * u.mag.log2())
            })
        }
        other => Err(format!("unknown NHRSD attack {other}")),
    }
}

/// The printed three-branch U; `None` outside the branches.
fn u_count(n1: i64, n2: i64, n3: i64, r1: i64, r2: i64) -> Option<Int> {
    let (outer, r, n) = (n1 + n3, r1 + r2, n1 + n2 + n3);
    if n2 > r2 && outer >= r1 {
        let sub = (0..r2).fold(Nat::zero(), |acc, i| acc.add(&binom(n2, i).mul(&binom(outer, r - i))));
        Some(int(binom(n, r)).sub(&int(sub)))
    } else if n2 == r2 && outer >= r1 {
        Some(int(binom(n2, r2).mul(&binom(outer, r1))))
    } else if n2 > r2 && outer <= r1 {
        Some(int((0..=outer).fold(Nat::zero(), |acc, i| acc.add(&binom(n2, r - i).mul(&binom(outer, i))))))
    } else {
        None
    }
}

fn nhrd_bp(c: &Ctx, m: i64, k: i64, blocks: [i64; 3], r1: i64, r2: i64) -> Result<Verdict, String> {
    if c.rep.attack != "nhrd-bp" {
        return Err(format!("unknown NHRD attack {}", c.rep.attack));
    }
    if !c.rep.applicable {
        return Ok(Verdict::Unchecked);
    }
    let [n1, n2, n3] = blocks;
    let (a, p1, p2, p3) = (c.p("a")?, c.p("p1")?, c.p("p2")?, c.p("p3")?);
    c.check([a, p1, p2, p3].iter().all(|&x| x >= 0), "negative a or pᵢ")?;
    c.check(p1 <= n1 && p2 <= n2 && p3 + a <= n3, "shortening exceeds a block")?;
    let u = u_count(n1 - p1, n2 - p2, n3 - p3 - a, r1, r2).ok_or("U is undefined at the chosen point")?;
    let lhs = nat(m).mul(&binom(n1 + n2 + n3 - p1 - p2 - p3 - k - 1, r1 + r2));
    c.check(u.is_positive() && int(lhs.clone()).sub(&u).is_non_negative(), "m·C(n−p−k−1, r) < U")?;
    Ok(Verdict::Value(c.lg_q(&lhs, a * r1) + (c.omega - 1.0) * u.mag.log2()))
}

fn rsl(c: &Ctx, m: i64, n: i64, k: i64, r: i64, big_n: i64) -> Result<Verdict, String> {
    let omega = c.omega;
    match c.rep.attack {
        "rsl-comb" => value_if(big_n < k * r, || {
            let a = big_n / r;
            c.check(c.p("a")? == a, "a ≠ ⌊N/r⌋")?;
            let x = floor_of(m * (n - k) - big_n, n - a);
            Ok(c.lg_q(&Nat::from_u64(1), r * (m - x)))
        }),
        "rsl-alg-d0" | "rsl-alg-dpos" => {
            if !c.rep.applicable {
                return Ok(Verdict::Unchecked);
            }
            let (delta, a, b) = (c.p("delta")?, c.p("a")?, c.p("b")?);
            let (alpha_r, alpha_l, branch) = (c.p("alpha_r")?, c.p("alpha_l")?, c.p("branch")?);
            let n_prime = if c.rep.attack == "rsl-alg-d0" {
                c.check(delta == 0, "δ ≠ 0")?;
                c.check(a * r < big_n && big_n <= (a + 1) * r, "a r < N ≤ (a+1) r fails")?;
                a * r + 1
            } else {
                let base = delta * (n - r + delta);
                c.check(1 <= delta && delta < r && big_n >= base, "δ outside its range")?;
                c.check(a >= 0 && big_n >= base + a * (r - delta) && big_n < base + (a + 1) * (r - delta), "a is not the largest")?;
                base + a * (r - delta)
            };
            let w = r - delta;
            c.check(1 <= b && b <= w + 1, "b outside [1, r+1]")?;
            c.check(0 <= alpha_r && alpha_r < n - a - r, "α_R outside [0, n−a−r)")?;
            c.check(0 <= alpha_l && alpha_l < n_prime - b, "α_λ outside [0, N′−b)")?;
            let rows = n_prime - alpha_l;
            let big_m = (1..=b).fold(Nat::zero(), |acc, i| acc.add(&binom(n - a - alpha_r, w).mul(&binom(rows, i))));
            let mut eqs = Nat::zero();
            for i in 1..=b {
                for d in 1..=i {
                    for j in 1..=n - k {
                        eqs = eqs.add(&binom(j - 1, d - 1).mul(&binom(n - k - j, w - d + 1)).mul(&binom(rows - j, i - d)));
                    }
                }
            }
            c.check(nat(m).mul(&eqs).add(&Nat::from_u64(1)) >= big_m, "m·𝓝 < 𝓜 − 1")?;
            let first = nat(m).mul(&eqs).log2() + (omega - 1.0) * big_m.log2();
            let second = nat(rows).log2() + binom(k - a + 1 + r, r).log2() + 2.0 * big_m.log2();
            c.check(branch == i64::from(second < first), "branch is not the cheaper one")?;
            Ok(Verdict::Value((r * alpha_r + alpha_l) as f64 + first.min(second)))
        }
        other => Err(format!("unknown RSL attack {other}")),
    }
}

fn nhrsl(c: &Ctx, m: i64, n: i64, z: i64, big_n: i64, w1: i64, w2: i64) -> Result<Verdict, String> {
    if c.rep.attack != "nhrsl-comb" {
        return Err(format!("unknown NHRSL attack {}", c.rep.attack));
    }
    if !c.rep.applicable {
        return Ok(Verdict::Unchecked);
    }
    let (n1, r, rho) = (c.p("n1")?, c.p("r")?, c.p("rho")?);
    let n2 = big_n - n1;
    c.check(0 <= n1 && n1 <= big_n, "N₁ outside [0, N]")?;
    let div = |x: i64, w: i64| if w == 0 { (x == 0).then_some(0) } else { Some(x / w) };
    let a = div(n1, w1).ok_or("N₁ > 0 with ω₁ = 0")?;
    let b = div(n2, w2).ok_or("N₂ > 0 with ω₂ = 0")?;
    c.check(a <= n - 2 * z && b <= 2 * z, "a ≤ n−2z or b ≤ 2z fails")?;
    c.check(w1 <= r && w2 - w1 <= rho && r + rho <= m - 1, "ω₁ ≤ r, ω₂−ω₁ ≤ ρ, r+ρ ≤ m−1 fails")?;
    c.check(m * (n - z) >= (n - 2 * z - b) * (r + rho) + (2 * z - a) * r + big_n, "equation count constraint fails")?;
    Ok(Verdict::Value(c.lg_q(&Nat::from_u64(1), w2 * (m - r) - (w2 - w1) * rho)))
}

/// Largest accepted gap between a log-domain value and its exact re-evaluation.
pub const TOLERANCE_BITS: f64 = 1e-6;

/// Runs every estimator on the instance and checks each report against the
/// oracle. Returns the number of reports compared numerically.
pub fn check_instance(inst: &ProblemInstance, omega: f64) -> Result<usize, String> {
    let reports = crate::estimate(inst, omega).map_err(|e| e.to_string())?;
    let mut compared = 0;
    for rep in &reports {
        let verdict = reevaluate(inst, rep, omega).map_err(|e| format!("{}: {e}", inst.label()))?;
        if let Verdict::Value(v) = verdict {
            let same = (v == rep.raw) || (v - rep.raw).abs() <= TOLERANCE_BITS;
            if !same {
                return Err(format!("{} {}: log-domain {} vs exact {}", inst.label(), rep.attack, rep.raw, v));
            }
            compared += 1;
        }
    }
    Ok(compared)
}

/// Fifty instances across all six families, from toy sizes to published
/// parameter sizes, covering both regimes of every applicability condition.
pub fn grid() -> Vec<ProblemInstance> {
    let mut out = Vec::new();
    let rsd = [
        (31, 33, 15, 3),
        (31, 33, 15, 6),
        (37, 24, 12, 4),
        (53, 86, 43, 6),
        (43, 60, 30, 5),
        (61, 40, 20, 8),
        (85, 172, 86, 7),
        (29, 30, 10, 0),
        (17, 20, 5, 2),
        (101, 220, 110, 9),
    ];
    out.extend(rsd.map(|(m, n, k, t)| Problem::Rsd { m, n, k, t }));
    let brd: [(usize, usize, &[usize], &[usize]); 10] = [
        (53, 590, &[590, 590], &[3, 3]),
        (53, 590, &[590, 590, 590], &[3, 3, 3]),
        (79, 830, &[830, 830, 830], &[4, 4, 4]),
        (113, 1130, &[1130, 1130], &[5, 5]),
        (31, 20, &[20, 20], &[3, 2]),
        (41, 15, &[10, 10, 10], &[2, 3, 2]),
        (23, 12, &[30], &[4]),
        (67, 40, &[30, 20, 10], &[4, 2, 1]),
        (19, 6, &[8, 8], &[2, 2]),
        (37, 50, &[25, 25, 25, 25], &[2, 2, 1, 1]),
    ];
    out.extend(brd.map(|(m, k, eta, rho)| Problem::Brd { m, k, eta: eta.to_vec(), rho: rho.to_vec() }));
    let nhrsd = [(31, 10, 5, 2, 3), (53, 20, 8, 3, 4), (85, 86, 6, 3, 4), (41, 15, 15, 2, 2), (29, 8, 12, 1, 3), (67, 30, 4, 4, 5)];
    out.extend(nhrsd.map(|(m, n, n1, w1, w2)| Problem::Nhrsd { m, n, n1, w1, w2 }));
    let nhrd = [
        (53, 30, [20, 20, 20], 3, 2),
        (31, 10, [10, 8, 10], 2, 2),
        (67, 40, [30, 30, 30], 4, 3),
        (41, 20, [15, 10, 15], 2, 3),
        (97, 60, [50, 40, 50], 4, 4),
        (29, 12, [8, 6, 8], 1, 2),
    ];
    out.extend(nhrd.map(|(m, k, blocks, r1, r2)| Problem::NhrdBp { m, k, blocks, r1, r2 }));
    let rsl = [
        (85, 6, 3, 6, 6),
        (91, 6, 3, 8, 6),
        (31, 20, 10, 3, 8),
        (31, 12, 6, 4, 23),
        (31, 12, 6, 4, 24),
        (41, 16, 8, 3, 30),
        (37, 14, 7, 2, 5),
        (53, 24, 12, 4, 40),
        (29, 10, 5, 3, 10),
        (47, 18, 9, 5, 12),
    ];
    out.extend(rsl.map(|(m, n, k, r, samples)| Problem::Rsl { m, n, k, r, samples }));
    let nhrsl = [
        (85, 258, 86, 6, 3, 4),
        (97, 297, 99, 6, 4, 5),
        (85, 18, 6, 86, 3, 4),
        (31, 8, 3, 4, 0, 2),
        (41, 20, 7, 10, 2, 3),
        (53, 30, 12, 15, 3, 5),
        (29, 9, 4, 6, 1, 2),
        (61, 25, 10, 20, 2, 4),
    ];
    out.extend(nhrsl.map(|(m, n, z, samples, w1, w2)| Problem::Nhrsl { m, n, z, samples, w1, w2 }));
    out.into_iter().map(ProblemInstance::binary).collect()
}
