//! Ideal-indexed order sums `P_K(x)`, narrow ray class numbers and counts of
//! primitive characters, for `K = Q` and real quadratic `K`.

mod forms;

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use forms::{narrow_class_number_of_disc, MAX_FORM_DISC};

use crate::arith;
use crate::bounds::{self, CertifiedVerdict, LogPowerThreshold, RationalInterval};
use crate::error::{Error, Result};
use crate::exact::{self, Exact, RationalSum};
use crate::gsum::{self, Cuts, Partial};
use crate::quadfield::unit::{unit_data, UnitData};
use crate::quadfield::{ideals_with_factorization, IdealFactorization, QuadField, QuadIdeal};

/// Class numbers entering the narrow ray class number formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassData {
    pub h: u64,
    pub h_plus: u64,
    /// Number of real places.
    pub r1: u32,
}

impl ClassData {
    /// Data for `K = Q`.
    pub const RATIONALS: ClassData = ClassData { h: 1, h_plus: 1, r1: 1 };

    /// Class data of a real quadratic field from a supplied `h`.
    pub fn supplied(field: &QuadField, h: u64) -> Result<Self> {
        if h == 0 {
            return Err(Error::Domain("class number must be positive".into()));
        }
        let h_plus = if field.eps_norm() == -1 { h } else { 2 * h };
        Ok(ClassData { h, h_plus, r1: 2 })
    }
}

/// `h^+` by counting cycles of reduced forms; `h = h^+` when `N(eps) = -1`,
/// else `h = h^+ / 2`.
pub fn narrow_class_number(field: &QuadField) -> Result<ClassData> {
    let h_plus = narrow_class_number_of_disc(field.disc())?;
    let h = if field.eps_norm() == -1 { h_plus } else { h_plus / 2 };
    Ok(ClassData { h, h_plus, r1: 2 })
}

/// Per-ideal data behind every ideal sum: factorization and unit data.
#[derive(Debug, Clone)]
pub struct IdealRow {
    pub ideal: QuadIdeal,
    pub factorization: IdealFactorization,
    pub phi: u64,
    pub units: UnitData,
}

/// Every ideal of norm `<= x` with φ and unit data, sorted by norm.
pub fn ideal_table(field: &QuadField, x: u64) -> Result<Vec<IdealRow>> {
    ideals_with_factorization(field, x)?
        .into_par_iter()
        .map(|(ideal, factorization)| {
            let phi = factorization.stats().phi;
            let units = unit_data(field, &ideal, phi)?;
            Ok(IdealRow {
                ideal,
                factorization,
                phi,
                units,
            })
        })
        .collect()
}

fn pk_of_rows(rows: &[IdealRow]) -> BigRational {
    rows.par_iter()
        .fold(RationalSum::new, |mut s, r| {
            s.add(r.phi as u128, r.units.index);
            s
        })
        .reduce(RationalSum::new, RationalSum::merge)
        .total()
}

/// `P_K(x) = Σ_{N I <= x} φ(I) / [U : U(I)]`.
pub fn pk_direct(field: &QuadField, x: u64) -> Result<BigRational> {
    Ok(pk_of_rows(&ideal_table(field, x)?))
}

/// `P_K` at every norm value: `(n, P_K(n))` for each `n <= x` that is the
/// norm of some ideal, ascending.
pub fn pk_prefix(field: &QuadField, x: u64) -> Result<Vec<(u64, BigRational)>> {
    let rows = ideal_table(field, x)?;
    let mut out: Vec<(u64, BigRational)> = Vec::new();
    let mut acc = BigRational::from_integer(0.into());
    for r in rows {
        acc += BigRational::new(r.phi.into(), r.units.index.into());
        let n = r.ideal.norm();
        match out.last_mut() {
            Some(last) if last.0 == n => last.1 = acc.clone(),
            _ => out.push((n, acc.clone())),
        }
    }
    Ok(out)
}

/// The decomposition of `P_K(x)` by `o(I)`, the order of `eps` modulo `I`.
///
/// Same half-open ranges as the rational case with `ℓ(x) = 3 log_C x`;
/// terms use `N(I) / o(I)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PkReport {
    pub d: u64,
    pub x: u64,
    #[serde(with = "exact::serde_rational")]
    pub alpha: BigRational,
    #[serde(with = "exact::serde_rational")]
    pub beta: BigRational,
    pub pk_exact: Exact,
    pub term_i: Exact,
    pub term_ii: Exact,
    pub term_ii1: Exact,
    pub term_ii2: Exact,
    pub term_iii: Exact,
    /// Enclosure of `3 log_C x`.
    pub ell: RationalInterval,
    /// Enclosure of `(ln x)^α`.
    pub t: RationalInterval,
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

impl PkReport {
    pub fn iii_bound(&self, precision_bits: u32) -> CertifiedVerdict {
        let x2 = BigRational::from_integer(BigInt::from(self.x).pow(2));
        bounds::check_le_quotient(&self.term_iii.0, &x2, &self.t, precision_bits)
    }

    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        gsum::check_partition(
            &self.pk_exact.0,
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

/// [`pk_decompose_with_beta`] with `beta = (alpha - 1) / 2`.
pub fn pk_decompose(field: &QuadField, x: u64, alpha: &BigRational) -> Result<PkReport> {
    let beta = (alpha - BigRational::one()) / BigRational::from_integer(2.into());
    pk_decompose_with_beta(field, x, alpha, &beta)
}

pub fn pk_decompose_with_beta(field: &QuadField, x: u64, alpha: &BigRational, beta: &BigRational) -> Result<PkReport> {
    gsum::validate_alpha_beta(alpha, beta)?;
    if x < 3 {
        return Err(Error::Domain(format!("decomposition needs x >= 3, got {x}")));
    }
    let rows = ideal_table(field, x)?;
    pk_decompose_rows(field, x, alpha, beta, &rows)
}

/// Decomposition from a precomputed [`ideal_table`] (which may extend past
/// `x`; rows above `x` are ignored).
pub fn pk_decompose_rows(
    field: &QuadField,
    x: u64,
    alpha: &BigRational,
    beta: &BigRational,
    rows: &[IdealRow],
) -> Result<PkReport> {
    gsum::validate_alpha_beta(alpha, beta)?;
    if x < 3 {
        return Err(Error::Domain(format!("decomposition needs x >= 3, got {x}")));
    }
    let c = field.growth_c();
    let cuts = Cuts {
        ell_floor: gsum::floor_three_log(c, x),
        t_floor: LogPowerThreshold::new(x, alpha.clone())?.floor()?,
        omega_floor: LogPowerThreshold::new(x, beta.clone())?.floor()?,
    };
    let end = rows.partition_point(|r| r.ideal.norm() <= x);
    let p = rows[..end]
        .par_iter()
        .fold(Partial::default, |mut part, r| {
            let class = cuts.classify(r.units.order, r.factorization.factors().len() as u64);
            part.add(
                class,
                (r.phi as u128, r.units.index),
                r.ideal.norm() as u128,
                r.units.order,
            );
            part
        })
        .reduce(Partial::default, Partial::merge);
    let prec = bounds::DEFAULT_PRECISION;
    let [ti, tiih, tiij, tiii] = p.terms.map(|s| s.total());
    Ok(PkReport {
        d: field.d(),
        x,
        alpha: alpha.clone(),
        beta: beta.clone(),
        pk_exact: Exact(p.total.total()),
        term_ii: Exact(&tiih + &tiij),
        term_i: Exact(ti),
        term_ii1: Exact(tiih),
        term_ii2: Exact(tiij),
        term_iii: Exact(tiii),
        ell: gsum::ell_enclosure(x, c, prec),
        t: gsum::t_enclosure(x, alpha, prec)?,
        ell_floor: cuts.ell_floor,
        t_floor: cuts.t_floor,
        omega_floor: cuts.omega_floor,
        card_s: p.card_s,
        card_i: p.counts[0],
        card_ii: p.counts[1] + p.counts[2],
        card_iii: p.counts[3],
        card_h: p.counts[1],
        card_j: p.counts[2],
    })
}

fn hnar_value(cd: &ClassData, phi: u64, narrow_index: u64) -> Result<u64> {
    let num = (1u128 << cd.r1) * cd.h as u128 * phi as u128;
    if num % narrow_index as u128 != 0 {
        return Err(Error::Integrality(format!(
            "2^{} * {} * {phi} is not divisible by the narrow unit index {narrow_index}",
            cd.r1, cd.h
        )));
    }
    u64::try_from(num / narrow_index as u128)
        .map_err(|_| Error::Range("narrow ray class number exceeds 64 bits".into()))
}

/// `h^nar(I) = 2^{r1} h φ(I) / [U : U^+(I)]`.
pub fn hnar(field: &QuadField, ideal: &QuadIdeal, cd: &ClassData) -> Result<u64> {
    let phi = crate::quadfield::ideal_stats(field, ideal)?.phi;
    hnar_value(cd, phi, unit_data(field, ideal, phi)?.narrow_index)
}

/// `h^nar(n)` over `Q`: `U = {±1}` and `-1` is never positive, so the
/// narrow unit index is 2 for every `n`.
pub fn hnar_rational(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::Domain("modulus must be positive".into()));
    }
    hnar_value(&ClassData::RATIONALS, arith::euler_phi(n), 2)
}

/// `Σ_{N I <= x} h^nar(I)`.
pub fn hnar_sum(field: &QuadField, x: u64, cd: &ClassData) -> Result<u64> {
    let rows = ideal_table(field, x)?;
    hnar_sum_rows(&rows, cd)
}

pub fn hnar_sum_rows(rows: &[IdealRow], cd: &ClassData) -> Result<u64> {
    rows.iter().map(|r| hnar_value(cd, r.phi, r.units.narrow_index)).sum()
}

/// Number of primitive Dirichlet characters of conductor `<= x`:
/// `Σ_{n <= x} (μ * φ)(n)`.
pub fn delta_rationals(x: u64) -> Result<u64> {
    if x == 0 {
        return Err(Error::Domain("x must be >= 1".into()));
    }
    let n = usize::try_from(x).map_err(|_| Error::Range(format!("x = {x} too large")))?;
    if n > 50_000_000 {
        return Err(Error::Range(format!("x must be <= 5e7, got {x}")));
    }
    // Dirichlet convolution μ * φ by sieving
    let mut phi: Vec<i64> = (0..=n as i64).collect();
    let mut mu = vec![1i64; n + 1];
    let mut composite = vec![false; n + 1];
    for p in 2..=n {
        if !composite[p] {
            for m in (p..=n).step_by(p) {
                if m > p {
                    composite[m] = true;
                }
                phi[m] -= phi[m] / p as i64;
                mu[m] = -mu[m];
            }
            if let Some(p2) = p.checked_mul(p).filter(|&q| q <= n) {
                for m in (p2..=n).step_by(p2) {
                    mu[m] = 0;
                }
            }
        }
    }
    let mut conv = vec![0i64; n + 1];
    for d in 1..=n {
        if mu[d] == 0 {
            continue;
        }
        for m in (d..=n).step_by(d) {
            conv[m] += mu[d] * phi[m / d];
        }
    }
    let total: i64 = conv[1..].iter().sum();
    Ok(total as u64)
}

/// `δ_{K,1}(x) = Σ_{N I <= x} Σ_{Q | I} μ(I/Q) h^nar(Q)`, evaluated through
/// the squarefree part of `I/Q`.
pub fn delta_quadratic(field: &QuadField, x: u64, cd: &ClassData) -> Result<u64> {
    let rows = ideal_table(field, x)?;
    let by_fac: HashMap<&IdealFactorization, u64> = rows
        .iter()
        .map(|r| Ok((&r.factorization, hnar_value(cd, r.phi, r.units.narrow_index)?)))
        .collect::<Result<_>>()?;
    let mut total: i128 = 0;
    for r in &rows {
        let f = r.factorization.factors();
        for mask in 0u32..(1 << f.len()) {
            let sub: Vec<(QuadIdeal, u32)> = f
                .iter()
                .enumerate()
                .map(|(i, &(p, e))| (p, if mask >> i & 1 == 1 { e - 1 } else { e }))
                .filter(|&(_, e)| e > 0)
                .collect();
            let key = IdealFactorization::from_factors(sub);
            let h = by_fac[&key] as i128;
            total += if mask.count_ones() % 2 == 0 { h } else { -h };
        }
    }
    let upper = hnar_sum_rows(&rows, cd)? as i128;
    if total < 0 || total > upper {
        return Err(Error::Invariant(format!("δ = {total} outside [0, Σ h^nar = {upper}]")));
    }
    Ok(total as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use crate::quadfield::make_field;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn class_numbers() {
        for (d, h, hp) in [
            (2, 1, 1),
            (3, 1, 2),
            (5, 1, 1),
            (6, 1, 2),
            (7, 1, 2),
            (10, 2, 2),
            (15, 2, 4),
        ] {
            let k = make_field(d).unwrap();
            let cd = narrow_class_number(&k).unwrap();
            assert_eq!((cd.h, cd.h_plus), (h, hp), "d={d}");
            assert_eq!(ClassData::supplied(&k, h).unwrap(), cd);
        }
    }

    #[test]
    fn pk_examples() {
        let k = make_field(2).unwrap();
        assert_eq!(pk_direct(&k, 1).unwrap(), rat(1, 1));
        assert_eq!(pk_direct(&k, 10).unwrap(), rat(7, 1));
        let k5 = make_field(5).unwrap();
        assert_eq!(pk_direct(&k5, 100).unwrap(), oracle::pk_oracle(5, 100).unwrap());
        let pre = pk_prefix(&k, 10).unwrap();
        assert_eq!(pre.last().unwrap(), &(9, rat(7, 1)));
    }

    #[test]
    fn pk_decomposition() {
        let k = make_field(2).unwrap();
        let r = pk_decompose(&k, 10, &rat(2, 1)).unwrap();
        assert_eq!(r.card_s, 7);
        r.check_invariants().unwrap();
        assert_eq!(r.card_i + r.card_ii + r.card_iii, 7);
        let r = pk_decompose(&k, 1000, &rat(2, 1)).unwrap();
        r.check_invariants().unwrap();
        assert!(r.iii_bound(128).holds());
        assert!(pk_decompose(&k, 2, &rat(2, 1)).is_err());
    }

    #[test]
    fn hnar_examples() {
        let k = make_field(2).unwrap();
        let cd = narrow_class_number(&k).unwrap();
        assert_eq!(hnar(&k, &QuadIdeal::ONE, &cd).unwrap(), 1);
        assert_eq!(hnar(&k, &QuadIdeal::new(&k, 3, 0, 3).unwrap(), &cd).unwrap(), 2);
        assert_eq!(hnar_rational(5).unwrap(), 4);
        for n in 3..=100 {
            assert_eq!(hnar_rational(n).unwrap(), arith::euler_phi(n));
        }
        assert_eq!(hnar_sum(&k, 1, &cd).unwrap(), 1);
        assert_eq!(hnar_sum(&k, 2, &cd).unwrap(), 2);
    }

    #[test]
    fn delta_examples() {
        assert_eq!(delta_rationals(1).unwrap(), 1);
        assert_eq!(delta_rationals(2).unwrap(), 1);
        assert_eq!(delta_rationals(10).unwrap(), 17);
        assert_eq!(delta_rationals(60).unwrap(), oracle::delta_rationals_oracle(60));
        let k = make_field(2).unwrap();
        let cd = narrow_class_number(&k).unwrap();
        assert_eq!(delta_quadratic(&k, 1, &cd).unwrap(), 1);
        assert_eq!(delta_quadratic(&k, 2, &cd).unwrap(), 1);
        let d10 = delta_quadratic(&k, 10, &cd).unwrap();
        assert!(d10 <= hnar_sum(&k, 10, &cd).unwrap());
    }
}
