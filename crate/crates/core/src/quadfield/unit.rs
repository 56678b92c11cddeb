//! Unit orders modulo ideals and the indices `[U : U(I)]`, `[U : U^+(I)]`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::ideal::{mul_elem, Elem, QuadIdeal};
use super::{ideal_stats, ideals_with_factorization, QuadField, QuadInt};
use crate::arith;
use crate::bounds::{self, CertifiedVerdict, RationalInterval, Relation};
use crate::error::{Error, Result};

fn reduce_big(ideal: &QuadIdeal, x: &QuadInt) -> Elem {
    // fold the coordinates into machine range first: (a, 0) and (b, c) generate I
    let a = BigInt::from(ideal.a());
    let c = BigInt::from(ideal.c());
    let k = x.v.div_floor(&c);
    let v = &x.v - &k * &c;
    let u = (&x.u - &k * BigInt::from(ideal.b())).mod_floor(&a);
    (u.to_i128().expect("< a"), v.to_i128().expect("< c"))
}

fn pow_mod(field: &QuadField, ideal: &QuadIdeal, x: Elem, mut e: u64) -> Elem {
    let mut base = ideal.reduce(x);
    let mut acc = ideal.reduce((1, 0));
    while e > 0 {
        if e & 1 == 1 {
            acc = ideal.reduce(mul_elem(field, acc, base));
        }
        e >>= 1;
        if e > 0 {
            base = ideal.reduce(mul_elem(field, base, base));
        }
    }
    acc
}

/// Order of `x` in `(O/I)^×`, by descent from the group order `φ(I)`.
pub(crate) fn order_mod(field: &QuadField, ideal: &QuadIdeal, x: Elem, phi: u64) -> Result<u64> {
    let one = ideal.reduce((1, 0));
    if pow_mod(field, ideal, x, phi) != one {
        return Err(Error::Domain(format!("element is not a unit modulo {ideal}")));
    }
    let f = arith::factor(phi as u128)?;
    Ok(arith::order_descent(phi, &f, |e| pow_mod(field, ideal, x, e) == one))
}

/// Smallest `o >= 1` with `u^o ≡ 1 (mod I)`.
pub fn unit_order_mod(field: &QuadField, ideal: &QuadIdeal, u: &QuadInt) -> Result<u64> {
    if field.norm(u).abs() != BigInt::from(1) {
        return Err(Error::Domain(format!("{u} is not a unit")));
    }
    if ideal.is_one() {
        return Ok(1);
    }
    let phi = ideal_stats(field, ideal)?.phi;
    order_mod(field, ideal, reduce_big(ideal, u), phi)
}

/// Order of `eps`, `[U : U(I)]` and `[U : U^+(I)]` for one ideal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitData {
    pub order: u64,
    pub index: u64,
    pub narrow_index: u64,
}

/// Computes [`UnitData`] given `φ(I)`.
///
/// `U(I)` is the kernel of `(s, b) ↦ (-1)^s eps^b mod I` on `Z/2 × Z`; with
/// `m` the order of `eps`, it is generated by `(0, m)` and, when `-1` lies
/// in `<eps mod I>`, by one element `(1, b0)`. The narrow index multiplies
/// `[U : U(I)]` by the size of the sign image of the kernel.
pub(crate) fn unit_data(field: &QuadField, ideal: &QuadIdeal, phi: u64) -> Result<UnitData> {
    let eps = reduce_big(ideal, field.eps());
    let m = if ideal.is_one() {
        1
    } else {
        order_mod(field, ideal, eps, phi)?
    };
    let one = ideal.reduce((1, 0));
    let minus_one = ideal.reduce((-1, 0));
    let mut gens: Vec<(u8, u64)> = vec![(0, m)];
    let index = if minus_one == one {
        gens.push((1, 0));
        m
    } else if m % 2 == 0 && pow_mod(field, ideal, eps, m / 2) == minus_one {
        gens.push((1, m / 2));
        m
    } else {
        2 * m
    };
    let sign = |(s, b): (u8, u64)| -> (i8, i8) {
        let neg = if s == 1 { -1 } else { 1 };
        let conj = if field.eps_norm() == -1 && b % 2 == 1 {
            -neg
        } else {
            neg
        };
        (neg, conj)
    };
    let mut image = vec![(1i8, 1i8)];
    for g in gens {
        let sg = sign(g);
        let extra: Vec<(i8, i8)> = image.iter().map(|&(x, y)| (x * sg.0, y * sg.1)).collect();
        for e in extra {
            if !image.contains(&e) {
                image.push(e);
            }
        }
    }
    Ok(UnitData {
        order: m,
        index,
        narrow_index: index * image.len() as u64,
    })
}

/// `[U : U(I)]`.
pub fn unit_index(field: &QuadField, ideal: &QuadIdeal) -> Result<u64> {
    let phi = ideal_stats(field, ideal)?.phi;
    Ok(unit_data(field, ideal, phi)?.index)
}

/// `[U : U^+(I)]`, with `U^+(I)` the totally positive units `≡ 1 (mod I)`.
pub fn narrow_unit_index(field: &QuadField, ideal: &QuadIdeal) -> Result<u64> {
    let phi = ideal_stats(field, ideal)?.phi;
    Ok(unit_data(field, ideal, phi)?.narrow_index)
}

/// Certified `o_eps(I) >= log_C N(I)` and `[U : U(I)] >= log_C N(I)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderBoundCheck {
    pub ideal: QuadIdeal,
    pub order: u64,
    pub index: u64,
    pub order_ok: CertifiedVerdict,
    pub index_ok: CertifiedVerdict,
}

pub(crate) fn log_bound_verdict(norm: u64, c: &BigUint, value: u64) -> Result<CertifiedVerdict> {
    let n = BigUint::from(norm);
    bounds::refine(bounds::DEFAULT_PRECISION, |prec| {
        Ok(CertifiedVerdict::decide(
            bounds::log_ratio(&n, c, prec),
            RationalInterval::from_int(value),
            Relation::Le,
            prec,
        ))
    })
}

/// Runs the order and index lower bounds over every ideal of norm `<= x`.
pub fn order_lower_bound_check(field: &QuadField, x: u64) -> Result<Vec<OrderBoundCheck>> {
    if x < 2 {
        return Err(Error::Domain(format!("x must be >= 2, got {x}")));
    }
    use rayon::prelude::*;
    ideals_with_factorization(field, x)?
        .into_par_iter()
        .map(|(ideal, f)| {
            let data = unit_data(field, &ideal, f.stats().phi)?;
            Ok(OrderBoundCheck {
                ideal,
                order: data.order,
                index: data.index,
                order_ok: log_bound_verdict(ideal.norm(), field.growth_c(), data.order)?,
                index_ok: log_bound_verdict(ideal.norm(), field.growth_c(), data.index)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::Status;
    use crate::oracle;
    use crate::quadfield::make_field;

    #[test]
    fn order_examples() {
        let k = make_field(2).unwrap();
        let three = QuadIdeal::new(&k, 3, 0, 3).unwrap();
        let p2 = QuadIdeal::new(&k, 2, 0, 1).unwrap();
        assert_eq!(unit_order_mod(&k, &QuadIdeal::ONE, k.eps()).unwrap(), 1);
        assert_eq!(unit_order_mod(&k, &three, k.eps()).unwrap(), 8);
        assert_eq!(unit_order_mod(&k, &p2, k.eps()).unwrap(), 1);
        assert!(unit_order_mod(&k, &three, &QuadInt::new(3, 0)).is_err());
    }

    #[test]
    fn index_examples() {
        let k = make_field(2).unwrap();
        let three = QuadIdeal::new(&k, 3, 0, 3).unwrap();
        let p2 = QuadIdeal::new(&k, 2, 0, 1).unwrap();
        assert_eq!(unit_index(&k, &QuadIdeal::ONE).unwrap(), 1);
        assert_eq!(unit_index(&k, &three).unwrap(), 8);
        assert_eq!(unit_index(&k, &p2).unwrap(), 1);
        assert_eq!(narrow_unit_index(&k, &QuadIdeal::ONE).unwrap(), 4);
        assert_eq!(narrow_unit_index(&k, &three).unwrap(), 16);
        assert_eq!(narrow_unit_index(&k, &p2).unwrap(), 4);
    }

    #[test]
    fn indices_match_naive_powering() {
        for d in [2u64, 3, 5, 6, 7, 10, 13] {
            let k = make_field(d).unwrap();
            let fast = ideals_with_factorization(&k, 300).unwrap();
            let slow = oracle::ideal_table_oracle(d, 300).unwrap();
            assert_eq!(fast.len(), slow.len());
            for ((i, f), (n, phi, idx, nidx)) in fast.iter().zip(slow) {
                let u = unit_data(&k, i, f.stats().phi).unwrap();
                assert_eq!(
                    (i.norm(), f.stats().phi, u.index, u.narrow_index),
                    (n, phi, idx, nidx),
                    "d={d}, I={i}"
                );
                assert!(u.index == u.order || u.index == 2 * u.order);
                assert!([1, 2, 4].contains(&(u.narrow_index / u.index)));
            }
        }
    }

    #[test]
    fn lower_bound_examples() {
        let k = make_field(2).unwrap();
        let checks = order_lower_bound_check(&k, 200).unwrap();
        assert!(checks
            .iter()
            .all(|c| c.order_ok.status == Status::Holds && c.index_ok.holds()));
        let three = checks.iter().find(|c| c.ideal.norm() == 9).unwrap();
        assert_eq!(three.order, 8);
        assert!(order_lower_bound_check(&k, 1).is_err());
    }
}
