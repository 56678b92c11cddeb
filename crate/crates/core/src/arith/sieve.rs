use std::sync::OnceLock;

/// Upper bound of the process-wide smallest-prime-factor table.
pub const SIEVE_LIMIT: u32 = 1_000_000;

/// Smallest-prime-factor table, built once and read-only afterwards.
pub struct Sieve {
    spf: Vec<u32>,
    primes: Vec<u32>,
}

impl Sieve {
    pub fn new(limit: u32) -> Self {
        let n = limit as usize;
        let mut spf = vec![0u32; n + 1];
        let mut primes = Vec::new();
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            let si = spf[i];
            for &p in &primes {
                let m = i * p as usize;
                if p > si || m > n {
                    break;
                }
                spf[m] = p;
            }
        }
        Sieve { spf, primes }
    }

    pub fn limit(&self) -> u32 {
        (self.spf.len() - 1) as u32
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    /// Smallest prime factor of `n`, for `2 <= n <= limit`.
    #[inline]
    pub fn spf(&self, n: u32) -> u32 {
        self.spf[n as usize]
    }

    pub fn is_prime(&self, n: u32) -> bool {
        n >= 2 && self.spf[n as usize] == n
    }

    /// Prime-exponent pairs of `n <= limit`, ascending.
    pub fn factor_small(&self, mut n: u32) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        while n > 1 {
            let p = self.spf(n);
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        out
    }
}

static GLOBAL: OnceLock<Sieve> = OnceLock::new();

pub fn global() -> &'static Sieve {
    GLOBAL.get_or_init(|| Sieve::new(SIEVE_LIMIT))
}

/// ω(n) for every n in `0..=limit` (entries 0 and 1 are 0).
pub fn omega_table(limit: usize) -> Vec<u8> {
    let mut omega = vec![0u8; limit + 1];
    for p in 2..=limit {
        if omega[p] == 0 {
            let mut m = p;
            while m <= limit {
                omega[m] += 1;
                m += p;
            }
        }
    }
    omega
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spf_small() {
        let s = Sieve::new(100);
        assert_eq!(s.spf(91), 7);
        assert_eq!(s.factor_small(90), vec![(2, 1), (3, 2), (5, 1)]);
        assert_eq!(s.primes().len(), 25);
    }

    #[test]
    fn omega_table_matches_factorization() {
        let s = Sieve::new(5000);
        let om = omega_table(5000);
        for n in 2..=5000u32 {
            assert_eq!(om[n as usize] as usize, s.factor_small(n).len());
        }
    }
}
