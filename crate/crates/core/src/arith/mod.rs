//! Exact integer arithmetic: factorization, multiplicative functions, the
//! Carmichael function and multiplicative order.

pub mod prime;
pub mod sieve;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use prime::{is_prime, pollard_brent, powmod_u64};

/// Default cap on Pollard-Brent iterations per composite cofactor.
pub const DEFAULT_FACTOR_BUDGET: u64 = 1 << 26;

/// Prime factorization of a positive integer, primes strictly ascending.
///
/// The empty list represents 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Factorization {
    factors: Vec<(u128, u32)>,
}

impl Factorization {
    pub fn one() -> Self {
        Self::default()
    }

    /// Builds a factorization from pairs already known to be prime.
    /// Pairs are sorted and merged; zero exponents are dropped.
    pub fn from_prime_powers(mut pairs: Vec<(u128, u32)>) -> Self {
        pairs.retain(|&(_, e)| e > 0);
        pairs.sort_unstable();
        let mut factors: Vec<(u128, u32)> = Vec::with_capacity(pairs.len());
        for (p, e) in pairs {
            match factors.last_mut() {
                Some((q, f)) if *q == p => *f += e,
                _ => factors.push((p, e)),
            }
        }
        Factorization { factors }
    }

    pub fn factors(&self) -> &[(u128, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u128> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// The factored integer. `None` on u128 overflow.
    pub fn value(&self) -> Option<u128> {
        self.factors
            .iter()
            .try_fold(1u128, |acc, &(p, e)| acc.checked_mul(p.checked_pow(e)?))
    }

    pub fn euler_phi(&self) -> u128 {
        self.factors.iter().map(|&(p, e)| (p - 1) * p.pow(e - 1)).product()
    }

    /// Exponent of the unit group (Z/n)^×.
    pub fn carmichael_lambda(&self) -> u128 {
        self.factors
            .iter()
            .map(|&(p, e)| {
                if p == 2 && e >= 3 {
                    1u128 << (e - 2)
                } else {
                    (p - 1) * p.pow(e - 1)
                }
            })
            .fold(1u128, |acc, l| acc.lcm(&l))
    }

    pub fn mu(&self) -> i8 {
        if self.factors.iter().any(|&(_, e)| e > 1) {
            0
        } else if self.factors.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn omega(&self) -> u32 {
        self.factors.len() as u32
    }

    pub fn tau(&self) -> u128 {
        self.factors.iter().map(|&(_, e)| e as u128 + 1).product()
    }

    /// Divisors `d <= x` of the factored integer, ascending, each once.
    pub fn divisors_up_to(&self, x: u128) -> Vec<u128> {
        let mut divs = vec![1u128];
        if x == 0 {
            return Vec::new();
        }
        for &(p, e) in &self.factors {
            let len = divs.len();
            for i in 0..len {
                let mut d = divs[i];
                for _ in 0..e {
                    match d.checked_mul(p) {
                        Some(nd) if nd <= x => {
                            d = nd;
                            divs.push(d);
                        }
                        _ => break,
                    }
                }
            }
        }
        divs.sort_unstable();
        divs
    }
}

/// Factors `n >= 1` with the default work budget.
pub fn factor(n: u128) -> Result<Factorization> {
    factor_with_budget(n, DEFAULT_FACTOR_BUDGET)
}

/// Factors `n >= 1`: sieve lookup for small inputs, trial division by the
/// sieve primes, then Pollard-Brent on the remaining cofactor.
pub fn factor_with_budget(n: u128, budget: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::Domain("cannot factor 0".into()));
    }
    let sieve = sieve::global();
    let limit = sieve.limit() as u128;
    if n <= limit {
        return Ok(Factorization {
            factors: sieve
                .factor_small(n as u32)
                .into_iter()
                .map(|(p, e)| (p as u128, e))
                .collect(),
        });
    }
    let mut pairs = Vec::new();
    let mut rest = n;
    for &p in sieve.primes() {
        let p = p as u128;
        if p * p > rest {
            break;
        }
        if rest % p == 0 {
            let mut e = 0;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            pairs.push((p, e));
        }
    }
    if rest > 1 {
        if rest <= limit * limit {
            // no factor up to the sieve limit, so prime
            pairs.push((rest, 1));
        } else {
            split_large(rest, budget, &mut pairs)?;
        }
    }
    Ok(Factorization::from_prime_powers(pairs))
}

fn split_large(n: u128, budget: u64, out: &mut Vec<(u128, u32)>) -> Result<()> {
    if n == 1 {
        return Ok(());
    }
    if is_prime(n)? {
        out.push((n, 1));
        return Ok(());
    }
    if let Some(r) = perfect_square_root(n) {
        split_large(r, budget, out)?;
        split_large(r, budget, out)?;
        return Ok(());
    }
    let d = pollard_brent(n, budget)?;
    split_large(d, budget, out)?;
    split_large(n / d, budget, out)
}

fn perfect_square_root(n: u128) -> Option<u128> {
    let r = n.isqrt();
    (r * r == n).then_some(r)
}

pub fn euler_phi(n: u64) -> u64 {
    factor(n as u128).map(|f| f.euler_phi() as u64).unwrap_or(0)
}

pub fn carmichael_lambda(n: u64) -> u64 {
    factor(n as u128).map(|f| f.carmichael_lambda() as u64).unwrap_or(0)
}

/// (μ(n), ω(n), τ(n)) from a single factorization.
pub fn mu_omega_tau(n: u64) -> (i8, u32, u64) {
    let f = factor(n as u128).expect("u64 inputs factor within budget");
    (f.mu(), f.omega(), f.tau() as u64)
}

/// Base and modulus of a multiplicative-order computation, `gcd(a, n) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrderQuery {
    base: u64,
    modulus: u64,
}

impl OrderQuery {
    pub fn new(base: u64, modulus: u64) -> Result<Self> {
        if base < 2 {
            return Err(Error::Domain(format!("order base must be >= 2, got {base}")));
        }
        if modulus == 0 {
            return Err(Error::Domain("modulus must be positive".into()));
        }
        if base.gcd(&modulus) != 1 {
            return Err(Error::Domain(format!("gcd({base}, {modulus}) != 1, order undefined")));
        }
        Ok(OrderQuery { base, modulus })
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }
}

/// Smallest r >= 1 with a^r ≡ 1 (mod n).
///
/// Starts from λ(n) and strips prime factors while the congruence persists.
pub fn mult_order(q: &OrderQuery) -> u64 {
    let n = q.modulus;
    if n == 1 {
        return 1;
    }
    let fac = factor(n as u128).expect("u64 inputs factor within budget");
    order_given_factorization(q.base, n, &fac)
}

pub(crate) fn order_given_factorization(a: u64, n: u64, fac: &Factorization) -> u64 {
    if n == 1 {
        return 1;
    }
    let lambda = fac.carmichael_lambda() as u64;
    let lf = factor(lambda as u128).expect("lambda < 2^64 factors within budget");
    order_descent(lambda, &lf, |e| powmod_u64(a, e, n) == 1)
}

/// Strips prime factors from `exponent` while `is_identity` keeps holding.
/// `exponent` must satisfy `is_identity(exponent)` and `fac` must be its
/// factorization.
pub(crate) fn order_descent(exponent: u64, fac: &Factorization, is_identity: impl Fn(u64) -> bool) -> u64 {
    let mut o = exponent;
    for p in fac.primes() {
        let p = p as u64;
        while o % p == 0 && is_identity(o / p) {
            o /= p;
        }
    }
    o
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_order(a: u64, n: u64) -> u64 {
        if n == 1 {
            return 1;
        }
        let mut x = a % n;
        let mut r = 1;
        while x != 1 {
            x = x * a % n;
            r += 1;
        }
        r
    }

    #[test]
    fn factor_examples() {
        assert!(factor(1).unwrap().is_one());
        assert_eq!(factor(12).unwrap().factors(), &[(2, 2), (3, 1)]);
        assert_eq!(factor(2147483647).unwrap().factors(), &[(2147483647, 1)]);
        assert!(factor(0).is_err());
    }

    #[test]
    fn factor_large_composites() {
        let n = (1u128 << 80) - 1;
        let f = factor(n).unwrap();
        assert_eq!(f.value(), Some(n));
        for p in f.primes() {
            assert!(is_prime(p).unwrap());
        }
        let sq = 1_000_003u128 * 1_000_003 * 999_983;
        assert_eq!(factor(sq).unwrap().factors(), &[(999_983, 1), (1_000_003, 2)]);
    }

    #[test]
    fn phi_lambda_examples() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(euler_phi(97), 96);
        assert_eq!(carmichael_lambda(1), 1);
        assert_eq!(carmichael_lambda(8), 2);
        assert_eq!(carmichael_lambda(15), 4);
    }

    #[test]
    fn lambda_is_brute_force_exponent() {
        for n in 1u64..=300 {
            let units: Vec<u64> = (1..=n).filter(|u| u.gcd(&n) == 1).collect();
            let exponent = units
                .iter()
                .map(|&u| naive_order(u.max(1), n))
                .fold(1u64, |acc, o| acc.lcm(&o));
            assert_eq!(carmichael_lambda(n), exponent, "n = {n}");
        }
    }

    #[test]
    fn order_examples() {
        assert_eq!(mult_order(&OrderQuery::new(2, 7).unwrap()), 3);
        assert_eq!(mult_order(&OrderQuery::new(12345, 1).unwrap()), 1);
        assert_eq!(mult_order(&OrderQuery::new(10, 11).unwrap()), 2);
        assert!(OrderQuery::new(2, 6).is_err());
        assert!(OrderQuery::new(1, 5).is_err());
    }

    #[test]
    fn order_is_minimal_exponent() {
        for a in [2u64, 3, 5, 7, 10] {
            for n in 1u64..=10_000 {
                let Ok(q) = OrderQuery::new(a, n) else { continue };
                let o = mult_order(&q);
                assert_eq!(powmod_u64(a, o, n), 1 % n);
                assert_eq!(carmichael_lambda(n) % o, 0);
                for p in factor(o as u128).unwrap().primes() {
                    if n > 1 {
                        assert_ne!(powmod_u64(a, o / p as u64, n), 1, "a={a} n={n}");
                    }
                }
            }
        }
    }

    #[test]
    fn units_killed_by_lambda() {
        for n in 1u64..=2000 {
            let l = carmichael_lambda(n);
            for u in 1..n {
                if u.gcd(&n) == 1 {
                    assert_eq!(powmod_u64(u, l, n), 1);
                }
            }
        }
    }

    #[test]
    fn mu_omega_tau_examples() {
        assert_eq!(mu_omega_tau(1), (1, 0, 1));
        assert_eq!(mu_omega_tau(30), (-1, 3, 8));
        assert_eq!(mu_omega_tau(12), (0, 2, 6));
    }

    #[test]
    fn divisor_sums() {
        for n in 1u64..=10_000 {
            let f = factor(n as u128).unwrap();
            let divs = f.divisors_up_to(u128::MAX);
            assert_eq!(divs.len() as u128, f.tau());
            let phi_sum: u64 = divs.iter().map(|&d| euler_phi(d as u64)).sum();
            assert_eq!(phi_sum, n);
            let mu_sum: i64 = divs.iter().map(|&d| mu_omega_tau(d as u64).0 as i64).sum();
            assert_eq!(mu_sum, (n == 1) as i64);
        }
    }

    #[test]
    fn divisors_up_to_examples() {
        assert_eq!(factor(12).unwrap().divisors_up_to(6), vec![1, 2, 3, 4, 6]);
        assert_eq!(factor(1).unwrap().divisors_up_to(100), vec![1]);
        assert_eq!(factor(63).unwrap().divisors_up_to(63), vec![1, 3, 7, 9, 21, 63]);
    }
}
