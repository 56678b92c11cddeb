//! The order-index sum over the rational integers,
//! `G(x) = sum_{n <= x, gcd(n, a) = 1} φ(n) / ord_n(a)`,
//! and its three-range decomposition by the size of `ord_n(a)`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{self, Factorization};
use crate::bounds::{self, interval, CertifiedVerdict, LogPowerThreshold, RationalInterval};
use crate::error::{Error, Result};
use crate::exact::{self, Exact, RationalSum};

const CHUNK: u64 = 2048;

fn check_base(a: u64) -> Result<()> {
    if a < 2 {
        return Err(Error::Domain(format!("base a must be >= 2, got {a}")));
    }
    Ok(())
}

/// φ(n) and ord_n(a) for `gcd(n, a) = 1`.
fn phi_and_order(a: u64, n: u64) -> (Factorization, u64, u64) {
    let fac = arith::factor(n as u128).expect("u64 inputs factor within budget");
    let phi = fac.euler_phi() as u64;
    let ord = arith::order_given_factorization(a % n.max(1), n, &fac);
    (fac, phi, ord)
}

/// Exact `G(x)`.
pub fn g_direct(a: u64, x: u64) -> Result<BigRational> {
    check_base(a)?;
    let chunks: Vec<(u64, u64)> = (0..x.div_ceil(CHUNK))
        .map(|i| (i * CHUNK + 1, ((i + 1) * CHUNK).min(x)))
        .collect();
    let sum = chunks
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut s = RationalSum::new();
            for n in lo..=hi {
                if n.gcd(&a) != 1 {
                    continue;
                }
                let (_, phi, ord) = phi_and_order(a, n);
                s.add(phi as u128, ord);
            }
            s
        })
        .reduce(RationalSum::new, RationalSum::merge);
    Ok(sum.total())
}

/// Largest `r` with `base^r <= x^3`, i.e. `floor(3 log_base x)`.
pub(crate) fn floor_three_log(base: &BigUint, x: u64) -> u64 {
    let cube = BigUint::from(x).pow(3);
    let mut r = 0u64;
    let mut acc = BigUint::one();
    loop {
        acc *= base;
        if acc > cube {
            return r;
        }
        r += 1;
    }
}

/// Parameters of the three-range decomposition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionConfig {
    pub a: u64,
    pub x: u64,
    #[serde(with = "exact::serde_rational")]
    pub alpha: BigRational,
    #[serde(with = "exact::serde_rational")]
    pub beta: BigRational,
}

impl DecompositionConfig {
    /// `beta` defaults to `(alpha - 1) / 2`.
    pub fn new(a: u64, x: u64, alpha: BigRational) -> Result<Self> {
        let beta = (&alpha - BigRational::one()) / BigRational::from_integer(2.into());
        Self::with_beta(a, x, alpha, beta)
    }

    pub fn with_beta(a: u64, x: u64, alpha: BigRational, beta: BigRational) -> Result<Self> {
        check_base(a)?;
        validate_alpha_beta(&alpha, &beta)?;
        Ok(DecompositionConfig { a, x, alpha, beta })
    }
}

pub(crate) fn validate_alpha_beta(alpha: &BigRational, beta: &BigRational) -> Result<()> {
    let one = BigRational::one();
    let three = BigRational::from_integer(3.into());
    if alpha <= &one || alpha >= &three {
        return Err(Error::Domain(format!("alpha must lie in (1, 3), got {alpha}")));
    }
    if beta < &BigRational::zero() {
        return Err(Error::Domain(format!("beta must be nonnegative, got {beta}")));
    }
    Ok(())
}

/// Exact values of the decomposition `G(x) <= I(x) + II(x) + III(x)`.
///
/// The order ranges are half-open: I takes `ord <= ℓ(x)`, II takes
/// `ℓ(x) < ord <= t`, III takes everything else, so the three classes
/// partition `S(x)`. Within II, H holds `ω(n) <= (ln x)^β` and J the rest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub a: u64,
    pub x: u64,
    #[serde(with = "exact::serde_rational")]
    pub alpha: BigRational,
    #[serde(with = "exact::serde_rational")]
    pub beta: BigRational,
    pub g_exact: Exact,
    pub term_i: Exact,
    pub term_ii: Exact,
    pub term_ii1: Exact,
    pub term_ii2: Exact,
    pub term_iii: Exact,
    /// Enclosure of `ℓ(x) = 3 log_a x`.
    pub ell: RationalInterval,
    /// Enclosure of `t = (ln x)^α`.
    pub t: RationalInterval,
    /// `floor(ℓ(x))`, `floor(t)` and `floor((ln x)^β)` as used for membership.
    pub ell_floor: u64,
    pub t_floor: u64,
    pub omega_floor: u64,
    pub card_s: u64,
    pub card_i: u64,
    pub card_ii: u64,
    pub card_iii: u64,
    pub card_h: u64,
    pub card_j: u64,
}

impl DecompositionReport {
    /// `term_III <= x^2 / t`, certified against the enclosure of `t`.
    pub fn iii_bound(&self, precision_bits: u32) -> CertifiedVerdict {
        let x2 = BigRational::from_integer(BigInt::from(self.x).pow(2));
        bounds::check_le_quotient(&self.term_iii.0, &x2, &self.t, precision_bits)
    }

    /// Checks the exact invariants; returns a description of the first
    /// violation.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        check_partition(
            &self.g_exact.0,
            [
                &self.term_i.0,
                &self.term_ii.0,
                &self.term_ii1.0,
                &self.term_ii2.0,
                &self.term_iii.0,
            ],
            [
                self.card_s,
                self.card_i,
                self.card_ii,
                self.card_iii,
                self.card_h,
                self.card_j,
            ],
        )
    }
}

pub(crate) fn check_partition(
    total: &BigRational,
    [t1, t2, t21, t22, t3]: [&BigRational; 5],
    [s, c1, c2, c3, h, j]: [u64; 6],
) -> std::result::Result<(), String> {
    if c1 + c2 + c3 != s {
        return Err(format!(
            "card_I + card_II + card_III = {} != card_S = {s}",
            c1 + c2 + c3
        ));
    }
    if h + j != c2 {
        return Err(format!("card_H + card_J = {} != card_II = {c2}", h + j));
    }
    if &(t21 + t22) != t2 {
        return Err("term_II != term_II1 + term_II2".into());
    }
    if total > &(t1 + t2 + t3) {
        return Err("sum exceeds term_I + term_II + term_III".into());
    }
    Ok(())
}

/// Range of an order value relative to the decomposition thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum OrderClass {
    I,
    IIH,
    IIJ,
    III,
}

/// Integer cut points equivalent to the real thresholds.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Cuts {
    pub ell_floor: u64,
    pub t_floor: u64,
    pub omega_floor: u64,
}

impl Cuts {
    pub fn classify(&self, ord: u64, omega: u64) -> OrderClass {
        if ord <= self.ell_floor {
            OrderClass::I
        } else if ord <= self.t_floor {
            if omega <= self.omega_floor {
                OrderClass::IIH
            } else {
                OrderClass::IIJ
            }
        } else {
            OrderClass::III
        }
    }
}

/// Partial sums for one contiguous block of the range.
#[derive(Debug, Clone, Default)]
pub(crate) struct Partial {
    pub total: RationalSum,
    pub terms: [RationalSum; 4],
    pub counts: [u64; 4],
    pub card_s: u64,
}

impl Partial {
    /// Adds `total_num / total_den` to the sum and `term_num / ord` to the
    /// term of `class`.
    pub fn add(&mut self, class: OrderClass, (total_num, total_den): (u128, u64), term_num: u128, ord: u64) {
        self.card_s += 1;
        self.total.add(total_num, total_den);
        let idx = class as usize;
        self.terms[idx].add(term_num, ord);
        self.counts[idx] += 1;
    }

    pub fn merge(self, o: Partial) -> Partial {
        let [a0, a1, a2, a3] = self.terms;
        let [b0, b1, b2, b3] = o.terms;
        Partial {
            total: self.total.merge(o.total),
            terms: [a0.merge(b0), a1.merge(b1), a2.merge(b2), a3.merge(b3)],
            counts: [
                self.counts[0] + o.counts[0],
                self.counts[1] + o.counts[1],
                self.counts[2] + o.counts[2],
                self.counts[3] + o.counts[3],
            ],
            card_s: self.card_s + o.card_s,
        }
    }
}

pub(crate) fn t_enclosure(x: u64, alpha: &BigRational, prec: u32) -> Result<RationalInterval> {
    Ok(LogPowerThreshold::new(x, alpha.clone())?.enclosure(prec))
}

/// Enclosure of `3 ln x / ln c`.
pub(crate) fn ell_enclosure(x: u64, c: &BigUint, prec: u32) -> RationalInterval {
    let x3 = BigUint::from(x).pow(3);
    bounds::log_ratio(&x3, c, prec)
}

/// Three-range decomposition of `G(x)` for `x >= 3`.
pub fn decompose(cfg: &DecompositionConfig) -> Result<DecompositionReport> {
    let DecompositionConfig { a, x, .. } = *cfg;
    if x < 3 {
        return Err(Error::Domain(format!("decomposition needs x >= 3, got {x}")));
    }
    let base = BigUint::from(a);
    let cuts = Cuts {
        ell_floor: floor_three_log(&base, x),
        t_floor: LogPowerThreshold::new(x, cfg.alpha.clone())?.floor()?,
        omega_floor: LogPowerThreshold::new(x, cfg.beta.clone())?.floor()?,
    };
    let chunks: Vec<(u64, u64)> = (0..x.div_ceil(CHUNK))
        .map(|i| (i * CHUNK + 1, ((i + 1) * CHUNK).min(x)))
        .collect();
    let p = chunks
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut part = Partial::default();
            for n in lo..=hi {
                if n.gcd(&a) != 1 {
                    continue;
                }
                let (fac, phi, ord) = phi_and_order(a, n);
                let class = cuts.classify(ord, fac.omega() as u64);
                part.add(class, (phi as u128, ord), n as u128, ord);
            }
            part
        })
        .reduce(Partial::default, Partial::merge);
    Ok(build_report(cfg, cuts, p, x))
}

fn build_report(cfg: &DecompositionConfig, cuts: Cuts, p: Partial, x: u64) -> DecompositionReport {
    let prec = bounds::DEFAULT_PRECISION;
    let [ti, tiih, tiij, tiii] = p.terms.map(|s| s.total());
    DecompositionReport {
        a: cfg.a,
        x,
        alpha: cfg.alpha.clone(),
        beta: cfg.beta.clone(),
        g_exact: Exact(p.total.total()),
        term_ii: Exact(&tiih + &tiij),
        term_i: Exact(ti),
        term_ii1: Exact(tiih),
        term_ii2: Exact(tiij),
        term_iii: Exact(tiii),
        ell: ell_enclosure(x, &BigUint::from(cfg.a), prec),
        t: t_enclosure(x, &cfg.alpha, prec).expect("x >= 3 checked"),
        ell_floor: cuts.ell_floor,
        t_floor: cuts.t_floor,
        omega_floor: cuts.omega_floor,
        card_s: p.card_s,
        card_i: p.counts[0],
        card_ii: p.counts[1] + p.counts[2],
        card_iii: p.counts[3],
        card_h: p.counts[1],
        card_j: p.counts[2],
    }
}

/// `sum_{1 <= r <= floor(3 log_a x)} τ(a^r - 1)`, the bound on the number of
/// terms in the first range.
pub fn term_count_i(a: u64, x: u64) -> Result<u128> {
    check_base(a)?;
    if x < a {
        return Err(Error::Domain(format!("term count needs x >= a, got a = {a}, x = {x}")));
    }
    let cut = floor_three_log(&BigUint::from(a), x);
    let mut total = 0u128;
    for r in 1..=cut {
        let v = (a as u128)
            .checked_pow(r as u32)
            .ok_or_else(|| Error::Range(format!("{a}^{r} exceeds 128 bits")))?
            - 1;
        total += arith::factor(v)?.tau();
    }
    Ok(total)
}

/// One row of a growth table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthRow {
    pub x: u64,
    pub g_exact: Exact,
    /// `G(x) (ln x)^α / x^2` to 12 significant digits.
    pub ratio: String,
    /// Present for `x >= 3`.
    pub report: Option<DecompositionReport>,
}

/// `G(x)` and its decomposition over ascending `xs`.
pub fn growth_table(a: u64, alpha: &BigRational, xs: &[u64]) -> Result<Vec<GrowthRow>> {
    check_base(a)?;
    if xs.is_empty() {
        return Err(Error::Domain("growth table needs at least one x".into()));
    }
    if xs.windows(2).any(|w| w[0] >= w[1]) || xs[0] == 0 {
        return Err(Error::Domain("x values must be positive and strictly ascending".into()));
    }
    validate_alpha_beta(alpha, &BigRational::zero())?;
    xs.iter()
        .map(|&x| {
            let (g, report) = if x >= 3 {
                let r = decompose(&DecompositionConfig::new(a, x, alpha.clone())?)?;
                (r.g_exact.0.clone(), Some(r))
            } else {
                (g_direct(a, x)?, None)
            };
            let ratio = growth_ratio(&g, x, alpha)?;
            Ok(GrowthRow {
                x,
                g_exact: Exact(g),
                ratio,
                report,
            })
        })
        .collect()
}

/// `value (ln x)^α / x^2` rendered to 12 significant digits.
pub(crate) fn growth_ratio(value: &BigRational, x: u64, alpha: &BigRational) -> Result<String> {
    if x == 1 || value.is_zero() {
        return Ok("0".into());
    }
    let x2 = BigRational::from_integer(BigInt::from(x).pow(2));
    let scaled = value / x2;
    bounds::certified_decimal(|prec| {
        let l = interval::ln_rational(&BigRational::from_integer(x.into()), prec + 16);
        let p = alpha.numer().try_into().expect("alpha numerator fits u32");
        let q = alpha.denom().try_into().expect("alpha denominator fits u32");
        let t = l.powi(p, prec + 16).nth_root(q, prec + 8);
        t.scale(&scaled).rounded(prec)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn g_examples() {
        assert_eq!(g_direct(2, 1).unwrap(), rat(1, 1));
        assert_eq!(g_direct(2, 3).unwrap(), rat(2, 1));
        assert_eq!(g_direct(3, 10).unwrap(), rat(8, 1));
        assert!(g_direct(1, 10).is_err());
    }

    #[test]
    fn degenerate_thresholds_empty_middle_range() {
        let r = decompose(&DecompositionConfig::new(2, 8, rat(2, 1)).unwrap()).unwrap();
        assert_eq!(r.card_ii, 0);
        assert_eq!(r.ell_floor, 9);
        assert_eq!(r.t_floor, 4);
        r.check_invariants().unwrap();
    }

    #[test]
    fn card_s_counts_coprime() {
        let r = decompose(&DecompositionConfig::new(3, 10, rat(2, 1)).unwrap()).unwrap();
        assert_eq!(r.card_s, 7);
        assert_eq!(r.g_exact.0, rat(8, 1));
    }

    #[test]
    fn decomposition_invariants_small_grid() {
        for a in [2u64, 3, 10] {
            for x in [3u64, 50, 1000, 5000] {
                for alpha in [rat(3, 2), rat(2, 1), rat(5, 2)] {
                    let r = decompose(&DecompositionConfig::new(a, x, alpha).unwrap()).unwrap();
                    r.check_invariants().unwrap();
                    assert_eq!(r.g_exact.0, g_direct(a, x).unwrap());
                    assert!(r.iii_bound(128).holds());
                    assert!(r.ell.contains(&rat(r.ell_floor as i64, 1)) || r.ell.lo() > &rat(r.ell_floor as i64, 1));
                }
            }
        }
    }

    #[test]
    fn term_count_examples() {
        assert_eq!(term_count_i(2, 2).unwrap(), 5);
        assert_eq!(term_count_i(10, 10).unwrap(), 17);
        assert!(term_count_i(10, 9).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(DecompositionConfig::new(2, 10, rat(1, 1)).is_err());
        assert!(DecompositionConfig::new(2, 10, rat(3, 1)).is_err());
        assert!(DecompositionConfig::new(1, 10, rat(2, 1)).is_err());
        let c = DecompositionConfig::new(2, 10, rat(2, 1)).unwrap();
        assert_eq!(c.beta, rat(1, 2));
        assert!(decompose(&DecompositionConfig::new(2, 2, rat(2, 1)).unwrap()).is_err());
    }

    #[test]
    fn growth_rows() {
        let rows = growth_table(2, &rat(2, 1), &[1]).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].g_exact.0, rat(1, 1));
        assert_eq!(rows[0].ratio, "0");
        assert!(growth_table(2, &rat(2, 1), &[10, 5]).is_err());
        let rows = growth_table(5, &rat(5, 2), &[10, 100]).unwrap();
        for r in &rows {
            r.report.as_ref().unwrap().check_invariants().unwrap();
        }
    }
}
