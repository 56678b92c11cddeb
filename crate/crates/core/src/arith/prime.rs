//! Modular arithmetic on machine words, deterministic Miller-Rabin and
//! Pollard-Brent splitting.

use crate::error::{Error, Result};

/// Miller-Rabin with the first 13 prime bases is deterministic below this bound.
pub const MR_CERTIFIED_LIMIT: u128 = 3_317_044_064_679_887_385_961_981;

const MR_BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

#[inline]
pub fn mulmod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn powmod_u64(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut result = 1u64;
    let mut b = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mulmod_u64(result, b, m);
        }
        b = mulmod_u64(b, b, m);
        exp >>= 1;
    }
    result
}

#[inline]
fn addmod_u128(a: u128, b: u128, m: u128) -> u128 {
    // a, b < m
    if a >= m - b {
        a - (m - b)
    } else {
        a + b
    }
}

/// `a * b mod m` for moduli that do not fit a 64-bit word.
pub fn mulmod_u128(a: u128, b: u128, m: u128) -> u128 {
    if m <= u64::MAX as u128 {
        return mulmod_u64(a as u64 % m as u64, b as u64 % m as u64, m as u64) as u128;
    }
    let (mut a, mut b) = (a % m, b % m);
    if a < b {
        std::mem::swap(&mut a, &mut b);
    }
    let mut r = 0u128;
    while b > 0 {
        if b & 1 == 1 {
            r = addmod_u128(r, a, m);
        }
        a = addmod_u128(a, a, m);
        b >>= 1;
    }
    r
}

pub fn powmod_u128(base: u128, mut exp: u128, m: u128) -> u128 {
    if m == 1 {
        return 0;
    }
    let mut result = 1u128;
    let mut b = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mulmod_u128(result, b, m);
        }
        b = mulmod_u128(b, b, m);
        exp >>= 1;
    }
    result
}

fn strong_probable_prime(n: u128, base: u128) -> bool {
    let a = base % n;
    if a == 0 {
        return true;
    }
    let mut d = n - 1;
    let s = d.trailing_zeros();
    d >>= s;
    let mut x = powmod_u128(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mulmod_u128(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

/// Deterministic primality test.
///
/// Returns [`Error::Uncertified`] above [`MR_CERTIFIED_LIMIT`], where no
/// fixed base set is known to be conclusive.
pub fn is_prime(n: u128) -> Result<bool> {
    if n < 2 {
        return Ok(false);
    }
    for &p in &MR_BASES {
        if n == p as u128 {
            return Ok(true);
        }
        if n % p as u128 == 0 {
            return Ok(false);
        }
    }
    if n < 41 * 41 {
        return Ok(true);
    }
    if n >= MR_CERTIFIED_LIMIT {
        return Err(Error::Uncertified(n.to_string()));
    }
    // 12 bases suffice below 2^64
    let bases: &[u64] = if n <= u64::MAX as u128 {
        &MR_BASES[..12]
    } else {
        &MR_BASES
    };
    Ok(bases.iter().all(|&b| strong_probable_prime(n, b as u128)))
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Finds a nontrivial factor of the odd composite `n` with Brent's variant of
/// Pollard rho. Polynomial constants are tried in a fixed order, so the result
/// is deterministic. `budget` caps the total number of iterations.
pub fn pollard_brent(n: u128, budget: u64) -> Result<u128> {
    if n % 2 == 0 {
        return Ok(2);
    }
    let mut spent = 0u64;
    for c in 1u128.. {
        let f = |x: u128| addmod_u128(mulmod_u128(x, x, n), c % n, n);
        let mut y = 2u128;
        let mut r = 1u64;
        let mut q = 1u128;
        let mut g = 1u128;
        let mut x = y;
        let mut ys = y;
        const BLOCK: u64 = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0u64;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BLOCK.min(r - k) {
                    y = f(y);
                    q = mulmod_u128(q, x.abs_diff(y), n);
                }
                g = gcd_u128(q, n);
                k += BLOCK;
            }
            spent += r;
            if spent > budget {
                return Err(Error::WorkBudget {
                    n: n.to_string(),
                    budget,
                });
            }
            r *= 2;
        }
        if g == n {
            // backtrack one step at a time
            loop {
                ys = f(ys);
                g = gcd_u128(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return Ok(g);
        }
    }
    unreachable!()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primes_match_trial_division() {
        for n in 0u128..5000 {
            let trial = n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
            assert_eq!(is_prime(n).unwrap(), trial, "n = {n}");
        }
    }

    #[test]
    fn strong_pseudoprimes_rejected() {
        // strong pseudoprimes to several small bases
        for n in [2047u128, 1373653, 25326001, 3215031751, 3825123056546413051] {
            assert!(!is_prime(n).unwrap(), "{n}");
        }
        assert!(is_prime(2147483647).unwrap());
        assert!(is_prime((1u128 << 61) - 1).unwrap());
        assert!(is_prime((1u128 << 89) - 1).is_err());
    }

    #[test]
    fn mulmod_wide_agrees_with_small() {
        let m = (1u128 << 80) + 13;
        let a = (1u128 << 79) + 12345;
        let b = (1u128 << 78) + 999;
        // (a*b) mod m via splitting b into halves
        let lo = b & 0xffff_ffff;
        let hi = b >> 32;
        let expect = (mulmod_u128(mulmod_u128(a, hi, m), 1u128 << 32, m) + mulmod_u128(a, lo, m)) % m;
        assert_eq!(mulmod_u128(a, b, m), expect);
    }

    #[test]
    fn brent_splits_semiprime() {
        let n = 1_000_003u128 * 1_000_033;
        let f = pollard_brent(n, 1 << 20).unwrap();
        assert!(f == 1_000_003 || f == 1_000_033);
    }
}
