//! Prime splitting, ideal factorization and enumeration by norm.

use std::borrow::Cow;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::ideal::{norm_poly, QuadIdeal};
use super::QuadField;
use crate::arith::prime::{is_prime, mulmod_u64, powmod_u64};
use crate::arith::{self, sieve};
use crate::bounds::LogPowerThreshold;
use crate::error::{Error, Result};

/// Largest norm bound accepted by the enumerators.
pub const MAX_ENUM_NORM: u64 = 50_000_000;

/// Decomposition of a rational prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Splitting {
    Split(QuadIdeal, QuadIdeal),
    Inert(QuadIdeal),
    Ramified(QuadIdeal),
}

impl Splitting {
    pub fn primes(&self) -> Vec<QuadIdeal> {
        match *self {
            Splitting::Split(p, q) => vec![p, q],
            Splitting::Inert(p) | Splitting::Ramified(p) => vec![p],
        }
    }
}

fn sqrt_mod(n: u64, p: u64) -> u64 {
    // Tonelli-Shanks; n must be a nonzero square mod odd p
    let n = n % p;
    if p % 4 == 3 {
        return powmod_u64(n, (p + 1) / 4, p);
    }
    let mut q = p - 1;
    let mut s = 0;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let z = (2..p)
        .find(|&z| powmod_u64(z, (p - 1) / 2, p) == p - 1)
        .expect("p odd prime");
    let mut m = s;
    let mut c = powmod_u64(z, q, p);
    let mut t = powmod_u64(n, q, p);
    let mut r = powmod_u64(n, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mulmod_u64(tt, tt, p);
            i += 1;
        }
        let b = powmod_u64(c, 1 << (m - i - 1), p);
        m = i;
        c = mulmod_u64(b, b, p);
        t = mulmod_u64(t, c, p);
        r = mulmod_u64(r, b, p);
    }
    r
}

fn split_prime(field: &QuadField, p: u64) -> Splitting {
    let (tr, _) = field.tr_nm();
    let prime = |b: u64| QuadIdeal::from_parts_unchecked(p, b, 1);
    let roots: Vec<u64> = if p == 2 {
        (0..2)
            .filter(|&b| norm_poly(field, b as i128).rem_euclid(2) == 0)
            .collect()
    } else {
        // roots of B^2 + tr B - nm: B = (-tr ± √disc) / 2
        let disc = field.disc() % p;
        let inv2 = p.div_ceil(2);
        let neg_tr = (p - tr as u64 % p) % p;
        if disc == 0 {
            vec![mulmod_u64(neg_tr, inv2, p)]
        } else if powmod_u64(disc, (p - 1) / 2, p) == 1 {
            let s = sqrt_mod(disc, p);
            let mut r = vec![
                mulmod_u64((neg_tr + s) % p, inv2, p),
                mulmod_u64((neg_tr + p - s) % p, inv2, p),
            ];
            r.sort_unstable();
            r
        } else {
            vec![]
        }
    };
    debug_assert!(roots
        .iter()
        .all(|&b| norm_poly(field, b as i128).rem_euclid(p as i128) == 0));
    match roots.as_slice() {
        [] => Splitting::Inert(QuadIdeal::from_parts_unchecked(p, 0, p)),
        [b] => Splitting::Ramified(prime(*b)),
        [b1, b2] if b1 == b2 => Splitting::Ramified(prime(*b1)),
        [b1, b2] => Splitting::Split(prime(*b1), prime(*b2)),
        _ => unreachable!("a quadratic has at most two roots"),
    }
}

/// How the rational prime `p` decomposes in the field.
pub fn splitting_type(field: &QuadField, p: u64) -> Result<Splitting> {
    if !is_prime(p as u128)? {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    Ok(split_prime(field, p))
}

/// Prime ideals above `p`, in canonical order.
pub fn prime_ideals_above(field: &QuadField, p: u64) -> Result<Vec<QuadIdeal>> {
    Ok(splitting_type(field, p)?.primes())
}

/// Prime-ideal factorization, primes ordered by `(p, b)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct IdealFactorization {
    factors: Vec<(QuadIdeal, u32)>,
}

impl IdealFactorization {
    /// Factors must already be in canonical `(p, b)` order.
    pub(crate) fn from_factors(factors: Vec<(QuadIdeal, u32)>) -> Self {
        IdealFactorization { factors }
    }

    pub fn factors(&self) -> &[(QuadIdeal, u32)] {
        &self.factors
    }

    pub fn product(&self, field: &QuadField) -> QuadIdeal {
        self.factors
            .iter()
            .fold(QuadIdeal::ONE, |acc, (p, e)| acc.mul(field, &p.pow(field, *e)))
    }

    pub fn norm(&self) -> u64 {
        self.factors.iter().map(|(p, e)| p.norm().pow(*e)).product()
    }

    pub fn stats(&self) -> IdealStats {
        stats_of(&self.factors)
    }
}

/// `φ(I)`, `ω(I)`, `τ(I)` and `μ(I)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealStats {
    pub phi: u64,
    pub omega: u32,
    pub tau: u64,
    pub mu: i8,
}

pub(crate) fn stats_of(factors: &[(QuadIdeal, u32)]) -> IdealStats {
    let mut phi = 1u64;
    let mut tau = 1u64;
    let mut squarefree = true;
    for (p, e) in factors {
        let np = p.norm();
        phi *= np.pow(e - 1) * (np - 1);
        tau *= *e as u64 + 1;
        squarefree &= *e == 1;
    }
    let omega = factors.len() as u32;
    let mu = if !squarefree {
        0
    } else if omega % 2 == 0 {
        1
    } else {
        -1
    };
    IdealStats { phi, omega, tau, mu }
}

/// Factorization of `I` from the factorization of its norm: inert and
/// ramified primes are forced, and a split pair is resolved by containment.
pub fn ideal_factorization(field: &QuadField, ideal: &QuadIdeal) -> Result<IdealFactorization> {
    let nf = arith::factor(ideal.norm() as u128)?;
    let mut factors = Vec::new();
    for &(p, e) in nf.factors() {
        match split_prime(field, p as u64) {
            Splitting::Inert(q) => {
                debug_assert!(e % 2 == 0);
                factors.push((q, e / 2));
            }
            Splitting::Ramified(q) => factors.push((q, e)),
            Splitting::Split(q1, q2) => {
                let mut k = 0;
                let mut power = QuadIdeal::ONE;
                while k < e {
                    let next = power.mul(field, &q1);
                    if !ideal.is_contained_in(&next) {
                        break;
                    }
                    power = next;
                    k += 1;
                }
                if k > 0 {
                    factors.push((q1, k));
                }
                if e > k {
                    factors.push((q2, e - k));
                }
            }
        }
    }
    let f = IdealFactorization { factors };
    debug_assert_eq!(f.product(field), *ideal);
    Ok(f)
}

pub fn ideal_stats(field: &QuadField, ideal: &QuadIdeal) -> Result<IdealStats> {
    Ok(ideal_factorization(field, ideal)?.stats())
}

/// All divisors of `I`, sorted by norm then HNF coordinates.
pub fn ideal_divisors(field: &QuadField, ideal: &QuadIdeal) -> Result<Vec<QuadIdeal>> {
    let f = ideal_factorization(field, ideal)?;
    let mut out = vec![QuadIdeal::ONE];
    for &(p, e) in f.factors() {
        let powers: Vec<QuadIdeal> = (1..=e).map(|k| p.pow(field, k)).collect();
        let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
        for q in &out {
            next.push(*q);
            for pk in &powers {
                next.push(q.mul(field, pk));
            }
        }
        out = next;
    }
    out.sort_by_key(|i| (i.norm(), *i));
    Ok(out)
}

fn primes_up_to(x: u64) -> Result<Cow<'static, [u32]>> {
    if x > MAX_ENUM_NORM {
        return Err(Error::Range(format!("norm bound must be <= {MAX_ENUM_NORM}, got {x}")));
    }
    if x <= sieve::SIEVE_LIMIT as u64 {
        let all = sieve::global().primes();
        let end = all.partition_point(|&p| p as u64 <= x);
        Ok(Cow::Borrowed(&all[..end]))
    } else {
        Ok(Cow::Owned(sieve::Sieve::new(x as u32).primes().to_vec()))
    }
}

/// Prime ideals of norm `<= x`, sorted by norm.
fn prime_ideals_by_norm(field: &QuadField, x: u64) -> Result<Vec<QuadIdeal>> {
    let mut out = Vec::new();
    for &p in primes_up_to(x)?.iter() {
        for q in split_prime(field, p as u64).primes() {
            if q.norm() <= x {
                out.push(q);
            }
        }
    }
    out.sort_by_key(|q| (q.norm(), *q));
    Ok(out)
}

/// Calls `f(factors, norm)` once for every ideal of norm `<= x`; `factors`
/// lists `(prime, exponent)` with primes in increasing norm order.
pub fn for_each_ideal<F>(field: &QuadField, x: u64, mut f: F) -> Result<()>
where
    F: FnMut(&[(QuadIdeal, u32)], u64),
{
    let primes = prime_ideals_by_norm(field, x)?;
    let mut stack = Vec::new();
    fn dfs<F: FnMut(&[(QuadIdeal, u32)], u64)>(
        primes: &[QuadIdeal],
        start: usize,
        norm: u64,
        x: u64,
        stack: &mut Vec<(QuadIdeal, u32)>,
        f: &mut F,
    ) {
        f(stack, norm);
        for (i, p) in primes.iter().enumerate().skip(start) {
            let np = p.norm();
            if norm * np > x {
                break;
            }
            let mut m = norm * np;
            let mut e = 1;
            loop {
                stack.push((*p, e));
                dfs(primes, i + 1, m, x, stack, f);
                stack.pop();
                if m > x / np {
                    break;
                }
                m *= np;
                e += 1;
            }
        }
    }
    if x >= 1 {
        dfs(&primes, 0, 1, x, &mut stack, &mut f);
    }
    Ok(())
}

/// Every ideal of norm `<= x` with its factorization, sorted by norm then
/// HNF coordinates.
pub fn ideals_with_factorization(field: &QuadField, x: u64) -> Result<Vec<(QuadIdeal, IdealFactorization)>> {
    let mut out = Vec::new();
    for_each_ideal(field, x, |factors, _| {
        let mut sorted = factors.to_vec();
        sorted.sort_by_key(|(p, _)| (p.a(), p.b()));
        let f = IdealFactorization { factors: sorted };
        out.push((f.product(field), f));
    })?;
    out.sort_by_key(|(i, _)| (i.norm(), *i));
    Ok(out)
}

/// Every ideal of norm `<= x`, sorted by norm then HNF coordinates.
pub fn ideals_up_to(field: &QuadField, x: u64) -> Result<Vec<QuadIdeal>> {
    Ok(ideals_with_factorization(field, x)?
        .into_iter()
        .map(|(i, _)| i)
        .collect())
}

/// `j_K(x) = Σ_{N I <= x} ω(I)^2`.
pub fn jk_sum(field: &QuadField, x: u64) -> Result<u64> {
    let mut total = 0u64;
    for_each_ideal(field, x, |factors, _| total += (factors.len() * factors.len()) as u64)?;
    Ok(total)
}

/// Number of ideals of norm `<= x` with `ω(I) >= (ln x)^beta`.
pub fn count_high_omega_ideals(field: &QuadField, x: u64, beta: &BigRational) -> Result<u64> {
    let k = LogPowerThreshold::new(x, beta.clone())?.ceil()?;
    let mut count = 0u64;
    for_each_ideal(field, x, |factors, _| {
        if factors.len() as u64 >= k {
            count += 1;
        }
    })?;
    Ok(count)
}
