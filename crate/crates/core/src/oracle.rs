//! Slow, independent reference implementations used for differential testing.
//!
//! Nothing here shares code with the fast paths: orders come from successive
//! multiplication, φ from a separate sieve, fundamental units from a direct
//! Pell search, ideals from their norm forms, and Dirichlet characters from
//! explicit generators of `(Z/n)^×`.

use std::collections::{BTreeMap, HashSet};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};

/// Largest `x` accepted by [`g_oracle`].
pub const G_ORACLE_CAP: u64 = 100_000;
/// Largest norm accepted by the ideal oracles.
pub const IDEAL_ORACLE_CAP: u64 = 5_000;

fn phi_sieve(x: usize) -> Vec<u64> {
    let mut phi: Vec<u64> = (0..=x as u64).collect();
    for p in 2..=x {
        if phi[p] == p as u64 {
            for m in (p..=x).step_by(p) {
                phi[m] -= phi[m] / p as u64;
            }
        }
    }
    phi
}

/// Smallest `r >= 1` with `a^r = 1 (mod m)`, by walking powers.
fn walk_order(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 1;
    }
    let a = a % m;
    let mut y = a;
    let mut r = 1;
    while y != 1 {
        y = y * a % m;
        r += 1;
    }
    r
}

/// Orders of `a` modulo every `n <= x` coprime to `a`, assembled as the lcm
/// of orders modulo prime powers. Modulo `p` the order is found by walking;
/// modulo `p^k` by walking the powers `b, b^p, b^{p^2}, ...` of
/// `b = a^{ord_p}`.
fn orders_upto(a: u64, x: u64) -> Vec<u64> {
    let n = x as usize;
    let mut spf = vec![0u32; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            for m in (i..=n).step_by(i) {
                if spf[m] == 0 {
                    spf[m] = i as u32;
                }
            }
        }
    }
    let mut pp_order = vec![0u64; n + 1];
    for p in 2..=n {
        if spf[p] as usize != p || a % p as u64 == 0 {
            continue;
        }
        let p = p as u64;
        let o = walk_order(a, p);
        pp_order[p as usize] = o;
        let mut q = p * p;
        while q <= x {
            let mut b = 1u64;
            for _ in 0..o {
                b = b * (a % q) % q;
            }
            let mut extra = 1;
            while b != 1 {
                let mut c = 1u64;
                for _ in 0..p {
                    c = c * b % q;
                }
                b = c;
                extra *= p;
            }
            pp_order[q as usize] = o * extra;
            q *= p;
        }
    }
    let mut ord = vec![0u64; n + 1];
    if n >= 1 {
        ord[1] = 1;
    }
    for m in 2..=n {
        if (m as u64).gcd(&a) != 1 {
            continue;
        }
        let p = spf[m] as usize;
        let mut pk = 1;
        let mut rest = m;
        while rest % p == 0 {
            rest /= p;
            pk *= p;
        }
        ord[m] = ord[rest].lcm(&pp_order[pk]);
    }
    ord
}

/// Exact sum of `num / den` by a balanced tree of unreduced additions,
/// reduced once at the end.
fn tree_sum(mut terms: Vec<(BigUint, BigUint)>) -> BigRational {
    if terms.is_empty() {
        return BigRational::zero();
    }
    while terms.len() > 1 {
        let mut next = Vec::with_capacity(terms.len().div_ceil(2));
        let mut it = terms.into_iter();
        while let Some((n1, d1)) = it.next() {
            match it.next() {
                Some((n2, d2)) => next.push((n1 * &d2 + n2 * &d1, d1 * d2)),
                None => next.push((n1, d1)),
            }
        }
        terms = next;
    }
    let (n, d) = terms.pop().unwrap();
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `G(x)` for every prefix `1..=x`, returned as `out[x]` (with `out[0] = 0`).
/// Uses plain rational additions, so it is meant for small `x`.
pub fn g_oracle_prefix(a: u64, x: u64) -> Result<Vec<BigRational>> {
    if a < 2 {
        return Err(Error::Domain(format!("base a must be >= 2, got {a}")));
    }
    if x > 5_000 {
        return Err(Error::Range(format!("prefix oracle capped at 5000, got {x}")));
    }
    let phi = phi_sieve(x as usize);
    let ord = orders_upto(a, x);
    let mut out = Vec::with_capacity(x as usize + 1);
    let mut acc = BigRational::zero();
    out.push(acc.clone());
    for n in 1..=x as usize {
        if ord[n] != 0 {
            acc += BigRational::new(phi[n].into(), ord[n].into());
        }
        out.push(acc.clone());
    }
    Ok(out)
}

/// `G(x)` by naive orders, for `x <= 10^5`.
pub fn g_oracle(a: u64, x: u64) -> Result<BigRational> {
    if a < 2 {
        return Err(Error::Domain(format!("base a must be >= 2, got {a}")));
    }
    if x > G_ORACLE_CAP {
        return Err(Error::Range(format!("oracle capped at {G_ORACLE_CAP}, got {x}")));
    }
    let phi = phi_sieve(x as usize);
    let ord = orders_upto(a, x);
    let mut by_den: BTreeMap<u64, BigUint> = BTreeMap::new();
    for n in 1..=x as usize {
        if ord[n] != 0 {
            *by_den.entry(ord[n]).or_default() += phi[n];
        }
    }
    Ok(tree_sum(
        by_den.into_iter().map(|(d, n)| (n, BigUint::from(d))).collect(),
    ))
}

// ---------------------------------------------------------------------------
// Real quadratic fields, by brute force.

/// Minimal field data found by direct search.
#[derive(Debug, Clone, Copy)]
struct Field {
    /// `ω^2 = tr ω + nm`
    tr: i128,
    nm: i128,
    /// fundamental unit in the basis `{1, ω}`
    eps: (i128, i128),
    eps_norm: i128,
}

impl Field {
    fn new(d: u64) -> Result<Field> {
        if d < 2 || (2..=d).any(|k| k * k <= d && d % (k * k) == 0) {
            return Err(Error::Domain(format!("d must be squarefree and >= 2, got {d}")));
        }
        let d = d as i128;
        let one_mod_four = d % 4 == 1;
        // smallest v >= 1 with u^2 - d v^2 = ±k, k = 4 or 1
        let k = if one_mod_four { 4 } else { 1 };
        let mut v = 1i128;
        let (u, v, s) = loop {
            let t = d * v * v;
            let mut found = None;
            for s in [-k, k] {
                let u2 = t + s;
                if u2 > 0 {
                    let u = (u2 as f64).sqrt().round() as i128;
                    for c in [u - 1, u, u + 1] {
                        if c > 0 && c * c == u2 {
                            found = Some((c, s));
                        }
                    }
                }
                if found.is_some() {
                    break;
                }
            }
            if let Some((u, s)) = found {
                break (u, v, s);
            }
            v += 1;
            if v > 1_000_000 {
                return Err(Error::Range("Pell search exhausted".into()));
            }
        };
        let (eps, tr, nm) = if one_mod_four {
            // (u + v√d)/2 = (u - v)/2 + v ω with ω = (1 + √d)/2
            (((u - v) / 2, v), 1, (d - 1) / 4)
        } else {
            ((u, v), 0, d)
        };
        Ok(Field {
            tr,
            nm,
            eps,
            eps_norm: s.signum(),
        })
    }

    fn mul(&self, (u1, v1): (i128, i128), (u2, v2): (i128, i128)) -> (i128, i128) {
        let vv = v1 * v2;
        (u1 * u2 + self.nm * vv, u1 * v2 + u2 * v1 + self.tr * vv)
    }
}

/// An ideal `aZ + (b + cω)Z` with its reduction map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct Hnf {
    a: i128,
    b: i128,
    c: i128,
}

impl Hnf {
    fn reduce(&self, (u, v): (i128, i128)) -> (i128, i128) {
        let k = v.div_euclid(self.c);
        let (u, v) = (u - k * self.b, v - k * self.c);
        (u.rem_euclid(self.a), v)
    }

    fn norm(&self) -> i128 {
        self.a * self.c
    }
}

/// All ideals of norm `<= x`, straight from the HNF conditions.
fn hnf_ideals(f: &Field, x: u64) -> Vec<Hnf> {
    let x = x as i128;
    let mut out = Vec::new();
    for c in 1..=x {
        if c * c > x {
            break;
        }
        for big_a in 1..=x / (c * c) {
            for big_b in 0..big_a {
                // closure under ω: ω(B + ω) = nm + (B + tr) ω must lie in the
                // lattice A Z + (B + ω) Z, i.e. A | N(B + ω)... checked directly
                let (u, v) = f.mul((0, 1), (big_b, 1));
                let rem = u - v * big_b;
                if rem.rem_euclid(big_a) == 0 {
                    out.push(Hnf {
                        a: c * big_a,
                        b: c * big_b,
                        c,
                    });
                }
            }
        }
    }
    out
}

/// Units of `O/I` counted one residue at a time: `r` is a unit iff the
/// lattice spanned by `I` and `rO` is all of `O`, i.e. the 2x2 minors of
/// its generators are coprime.
fn phi_ideal(f: &Field, i: &Hnf) -> u64 {
    let mut count = 0;
    for v in 0..i.c {
        for u in 0..i.a {
            let r = (u, v);
            let rw = f.mul(r, (0, 1));
            let gens = [(i.a, 0), (i.b, i.c), r, rw];
            let mut g = 0i128;
            for s in 0..4 {
                for t in s + 1..4 {
                    let m = gens[s].0 * gens[t].1 - gens[s].1 * gens[t].0;
                    g = g.gcd(&m);
                }
            }
            if g == 1 {
                count += 1;
            }
        }
    }
    count
}

/// `[U : U(I)]` as the size of the image of `±eps^Z` in `O/I`.
fn unit_index_naive(f: &Field, i: &Hnf) -> u64 {
    let one = i.reduce((1, 0));
    let mut seen = HashSet::new();
    let mut y = one;
    loop {
        seen.insert(y);
        seen.insert(i.reduce((-y.0, -y.1)));
        y = i.reduce(f.mul(y, f.eps));
        if y == one {
            break;
        }
    }
    seen.len() as u64
}

/// `[U : U^+(I)]`: twice the least `b >= 1` with `eps^b = 1 (mod I)` and
/// `eps^b` totally positive (`-1` is never totally positive).
fn narrow_index_naive(f: &Field, i: &Hnf) -> u64 {
    let one = i.reduce((1, 0));
    let mut y = one;
    let mut b = 0u64;
    loop {
        y = i.reduce(f.mul(y, f.eps));
        b += 1;
        if y == one && (f.eps_norm == 1 || b % 2 == 0) {
            return 2 * b;
        }
    }
}

/// Per-ideal data from the oracle: `(norm, φ(I), [U:U(I)], [U:U^+(I)])`,
/// sorted by norm then HNF coordinates.
pub fn ideal_table_oracle(d: u64, x: u64) -> Result<Vec<(u64, u64, u64, u64)>> {
    if x > IDEAL_ORACLE_CAP {
        return Err(Error::Range(format!(
            "ideal oracle capped at {IDEAL_ORACLE_CAP}, got {x}"
        )));
    }
    let f = Field::new(d)?;
    let mut ideals = hnf_ideals(&f, x);
    ideals.sort_by_key(|i| (i.norm(), i.a, i.b, i.c));
    Ok(ideals
        .iter()
        .map(|i| {
            (
                i.norm() as u64,
                phi_ideal(&f, i),
                unit_index_naive(&f, i),
                narrow_index_naive(&f, i),
            )
        })
        .collect())
}

/// Number of ideals of norm `<= x`.
pub fn ideal_count_oracle(d: u64, x: u64) -> Result<usize> {
    let f = Field::new(d)?;
    Ok(hnf_ideals(&f, x).len())
}

/// `P_K(x) = Σ φ(I) / [U : U(I)]` by brute force.
pub fn pk_oracle(d: u64, x: u64) -> Result<BigRational> {
    let mut acc = BigRational::zero();
    for (_, phi, idx, _) in ideal_table_oracle(d, x)? {
        acc += BigRational::new(phi.into(), idx.into());
    }
    Ok(acc)
}

/// Fundamental unit `(u, v)` in the basis `{1, ω}` and its norm.
pub fn unit_oracle(d: u64) -> Result<((i128, i128), i128)> {
    let f = Field::new(d)?;
    Ok((f.eps, f.eps_norm))
}

/// `N(eps^k - 1)` for `k = 1..=kmax` by repeated multiplication.
pub fn norm_eps_power_minus_one(d: u64, kmax: u32) -> Result<Vec<BigInt>> {
    let f = Field::new(d)?;
    let (tr, nm) = (BigInt::from(f.tr), BigInt::from(f.nm));
    let (eu, ev) = (BigInt::from(f.eps.0), BigInt::from(f.eps.1));
    let (mut u, mut v) = (BigInt::from(1), BigInt::zero());
    let mut out = Vec::new();
    for _ in 0..kmax {
        let vv = &v * &ev;
        let nu = &u * &eu + &nm * &vv;
        let nv = &u * &ev + &eu * &v + &tr * &vv;
        u = nu;
        v = nv;
        let w = &u - 1;
        out.push(&w * &w + &tr * &w * &v - &nm * &v * &v);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Dirichlet characters, by explicit generators.

/// Generators of `(Z/n)^×` with their orders, built by CRT from primitive
/// roots of odd prime powers and `{-1, 5}` for powers of two.
fn unit_group_generators(n: u64) -> Vec<(u64, u64)> {
    let mut gens = Vec::new();
    let mut m = n;
    let mut p = 2;
    let mut parts = Vec::new();
    while m > 1 {
        if m % p == 0 {
            let mut q = 1;
            while m % p == 0 {
                m /= p;
                q *= p;
            }
            parts.push((p, q));
        }
        p += 1;
    }
    // lift g mod q to the residue that is g mod q and 1 mod n/q
    let lift = |g: u64, q: u64| -> u64 {
        let r = n / q;
        (0..n).find(|&t| t % q == g % q && t % r == 1 % r).unwrap()
    };
    for &(p, q) in &parts {
        if p == 2 {
            if q >= 4 {
                gens.push((lift(q - 1, q), 2));
            }
            if q >= 8 {
                gens.push((lift(5, q), q / 4));
            }
        } else {
            let phi = q / p * (p - 1);
            let g = (2..q)
                .find(|&g| g % p != 0 && walk_order(g, q) == phi)
                .expect("odd prime powers are cyclic");
            gens.push((lift(g, q), phi));
        }
    }
    gens
}

/// For each modulus `n <= x`, the number of characters mod `n` with each
/// conductor: `out[n][f]`. Conductors are found by restriction: the least
/// `f | n` such that the character is trivial on units `= 1 (mod f)`.
pub fn characters_by_conductor(x: u64) -> Vec<BTreeMap<u64, u64>> {
    let mut out = vec![BTreeMap::new(); x as usize + 1];
    for n in 1..=x {
        let gens = unit_group_generators(n);
        // discrete logs of every unit
        let mut dlog: Vec<Option<Vec<u64>>> = vec![None; n as usize];
        let mut exps = vec![0u64; gens.len()];
        loop {
            let mut val = 1 % n;
            for (&(g, _), &e) in gens.iter().zip(&exps) {
                for _ in 0..e {
                    val = val * g % n;
                }
            }
            dlog[val as usize] = Some(exps.clone());
            let mut i = 0;
            while i < gens.len() {
                exps[i] += 1;
                if exps[i] < gens[i].1 {
                    break;
                }
                exps[i] = 0;
                i += 1;
            }
            if i == gens.len() {
                break;
            }
        }
        let divisors: Vec<u64> = (1..=n).filter(|f| n % f == 0).collect();
        let kernels: Vec<Vec<&Vec<u64>>> = divisors
            .iter()
            .map(|&f| {
                (1..n.max(2))
                    .filter(|&u| u % f == 1 % f)
                    .filter_map(|u| dlog[(u % n) as usize].as_ref())
                    .collect()
            })
            .collect();
        // character: exponent vector chi, value on dlog e is Σ chi_i e_i / ord_i mod 1
        let mut chi = vec![0u64; gens.len()];
        loop {
            let trivial_on = |ker: &Vec<&Vec<u64>>| {
                ker.iter().all(|e| {
                    let mut v = BigRational::zero();
                    for ((c, x), &(_, o)) in chi.iter().zip(e.iter()).zip(&gens) {
                        v += BigRational::new(BigInt::from(c * x), BigInt::from(o));
                    }
                    v.is_integer()
                })
            };
            let f = divisors
                .iter()
                .zip(&kernels)
                .find(|(_, k)| trivial_on(k))
                .map(|(&f, _)| f)
                .expect("trivial on the full kernel at f = n");
            *out[n as usize].entry(f).or_insert(0) += 1;
            let mut i = 0;
            while i < gens.len() {
                chi[i] += 1;
                if chi[i] < gens[i].1 {
                    break;
                }
                chi[i] = 0;
                i += 1;
            }
            if i == gens.len() {
                break;
            }
        }
    }
    out
}

/// Number of primitive Dirichlet characters of conductor `<= x`, by explicit
/// enumeration.
pub fn delta_rationals_oracle(x: u64) -> u64 {
    characters_by_conductor(x)
        .iter()
        .enumerate()
        .map(|(n, m)| m.get(&(n as u64)).copied().unwrap_or(0))
        .sum()
}

/// Class numbers `h(Q(√d))` from standard tables, for squarefree `d < 83`.
pub const KNOWN_CLASS_NUMBERS: [(u64, u64); 50] = [
    (2, 1),
    (3, 1),
    (5, 1),
    (6, 1),
    (7, 1),
    (10, 2),
    (11, 1),
    (13, 1),
    (14, 1),
    (15, 2),
    (17, 1),
    (19, 1),
    (21, 1),
    (22, 1),
    (23, 1),
    (26, 2),
    (29, 1),
    (30, 2),
    (31, 1),
    (33, 1),
    (34, 2),
    (35, 2),
    (37, 1),
    (38, 1),
    (39, 2),
    (41, 1),
    (42, 2),
    (43, 1),
    (46, 1),
    (47, 1),
    (51, 2),
    (53, 1),
    (55, 2),
    (57, 1),
    (58, 2),
    (59, 1),
    (61, 1),
    (62, 1),
    (65, 2),
    (66, 2),
    (67, 1),
    (69, 1),
    (70, 2),
    (71, 1),
    (73, 1),
    (74, 2),
    (77, 1),
    (78, 2),
    (79, 3),
    (82, 4),
];

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn g_small() {
        assert_eq!(g_oracle(2, 1).unwrap(), rat(1, 1));
        assert_eq!(g_oracle(2, 3).unwrap(), rat(2, 1));
        assert_eq!(g_oracle(3, 10).unwrap(), rat(8, 1));
        let pre = g_oracle_prefix(3, 10).unwrap();
        assert_eq!(pre[10], rat(8, 1));
        assert_eq!(pre[1], rat(1, 1));
        assert!(g_oracle(2, G_ORACLE_CAP + 1).is_err());
    }

    #[test]
    fn orders_agree_with_walking() {
        let ord = orders_upto(10, 3000);
        for n in 1..=3000u64 {
            if n.gcd(&10) == 1 {
                assert_eq!(ord[n as usize], walk_order(10, n), "n={n}");
            }
        }
    }

    #[test]
    fn units_by_search() {
        assert_eq!(unit_oracle(2).unwrap(), ((1, 1), -1));
        assert_eq!(unit_oracle(5).unwrap(), ((0, 1), -1));
        assert_eq!(unit_oracle(3).unwrap(), ((2, 1), 1));
        assert!(unit_oracle(4).is_err());
    }

    #[test]
    fn ideal_table_small() {
        let t = ideal_table_oracle(2, 10).unwrap();
        assert_eq!(t.len(), 7);
        assert!(t.iter().all(|&(_, phi, idx, _)| phi == idx));
        assert_eq!(pk_oracle(2, 10).unwrap(), rat(7, 1));
        // (3): φ = 8, index 8, narrow 16
        let three = t.iter().find(|r| r.0 == 9).unwrap();
        assert_eq!(*three, (9, 8, 8, 16));
        assert_eq!(t[0], (1, 1, 1, 4));
    }

    #[test]
    fn characters_small() {
        assert_eq!(delta_rationals_oracle(1), 1);
        assert_eq!(delta_rationals_oracle(2), 1);
        assert_eq!(delta_rationals_oracle(10), 17);
        let by = characters_by_conductor(12);
        for (n, m) in by.iter().enumerate().skip(1) {
            let total: u64 = m.values().sum();
            assert_eq!(total, crate::arith::euler_phi(n as u64));
        }
    }
}
