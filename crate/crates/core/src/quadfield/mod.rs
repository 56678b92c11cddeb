//! Exact arithmetic in real quadratic fields `Q(√d)`: elements, the
//! fundamental unit, integral ideals in Hermite normal form, prime splitting,
//! residue rings and unit indices.

mod enumerate;
mod ideal;
pub(crate) mod unit;

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::bounds::{CertifiedVerdict, IntMatrix, Relation};
use crate::error::{Error, Result};

pub use enumerate::{
    count_high_omega_ideals, for_each_ideal, ideal_divisors, ideal_factorization, ideal_stats, ideals_up_to,
    ideals_with_factorization, jk_sum, prime_ideals_above, splitting_type, IdealFactorization, IdealStats, Splitting,
};
pub use ideal::QuadIdeal;
pub use unit::{narrow_unit_index, order_lower_bound_check, unit_index, unit_order_mod, OrderBoundCheck};

/// Integral basis generator `ω`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OmegaKind {
    /// `ω = √d`, for `d ≡ 2, 3 (mod 4)`
    Sqrt,
    /// `ω = (1 + √d) / 2`, for `d ≡ 1 (mod 4)`
    HalfOnePlusSqrt,
}

/// The element `u + v ω`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadInt {
    pub u: BigInt,
    pub v: BigInt,
}

impl QuadInt {
    pub fn new(u: impl Into<BigInt>, v: impl Into<BigInt>) -> Self {
        QuadInt {
            u: u.into(),
            v: v.into(),
        }
    }

    pub fn one() -> Self {
        QuadInt::new(1, 0)
    }

    pub fn to_i128(&self) -> Option<(i128, i128)> {
        Some((self.u.to_i128()?, self.v.to_i128()?))
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}ω", self.u, self.v)
    }
}

/// A real quadratic field with its fundamental unit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadField {
    d: u64,
    disc: u64,
    omega_kind: OmegaKind,
    eps: QuadInt,
    eps_norm: i8,
    growth_c: BigUint,
}

/// Largest `d` accepted by [`make_field`].
pub const MAX_D: u64 = 1 << 40;

impl QuadField {
    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn disc(&self) -> u64 {
        self.disc
    }

    pub fn omega_kind(&self) -> OmegaKind {
        self.omega_kind
    }

    /// Fundamental unit, `> 1` under `√d ↦ +√d`.
    pub fn eps(&self) -> &QuadInt {
        &self.eps
    }

    pub fn eps_norm(&self) -> i8 {
        self.eps_norm
    }

    /// `C = (2 (1 + 2 M(A)))^2`, with `A` the matrix of multiplication by
    /// `eps` on `{1, ω}`.
    pub fn growth_c(&self) -> &BigUint {
        &self.growth_c
    }

    /// `(tr ω, N ω)`-style constants: `ω^2 = tr·ω + nm`.
    pub(crate) fn tr_nm(&self) -> (i64, i64) {
        match self.omega_kind {
            OmegaKind::Sqrt => (0, self.d as i64),
            OmegaKind::HalfOnePlusSqrt => (1, (self.d as i64 - 1) / 4),
        }
    }

    pub fn mul(&self, x: &QuadInt, y: &QuadInt) -> QuadInt {
        let (tr, nm) = self.tr_nm();
        let vv = &x.v * &y.v;
        QuadInt {
            u: &x.u * &y.u + &vv * nm,
            v: &x.u * &y.v + &y.u * &x.v + &vv * tr,
        }
    }

    pub fn pow(&self, x: &QuadInt, mut e: u64) -> QuadInt {
        let mut base = x.clone();
        let mut acc = QuadInt::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// `N(u + vω) = u^2 + tr·uv - nm·v^2`.
    pub fn norm(&self, x: &QuadInt) -> BigInt {
        let (tr, nm) = self.tr_nm();
        &x.u * &x.u + &x.u * &x.v * tr - &x.v * &x.v * nm
    }

    pub fn trace(&self, x: &QuadInt) -> BigInt {
        let (tr, _) = self.tr_nm();
        &x.u * 2 + &x.v * tr
    }

    /// Matrix of multiplication by `x` on the basis `{1, ω}`; row `i` holds
    /// the coordinates of `x·basis_i`.
    pub fn mult_matrix(&self, x: &QuadInt) -> IntMatrix {
        let (tr, nm) = self.tr_nm();
        let entries = vec![x.u.clone(), x.v.clone(), &x.v * nm, &x.u + &x.v * tr];
        IntMatrix::new(2, entries).expect("2x2")
    }

    /// Sign of `x` under `√d ↦ +√d` and under `√d ↦ -√d`.
    pub fn signs(&self, x: &QuadInt) -> (i8, i8) {
        // 2x = r + s√d under the first embedding; the second flips the sign of √d
        let (tr, _) = self.tr_nm();
        let r = &x.u * 2 + &x.v * tr;
        let s = &x.v * (2 - tr);
        let d = BigInt::from(self.d);
        let sign = |r: &BigInt, s: &BigInt| -> i8 {
            // sign of r + s√d
            match (r.sign(), s.sign()) {
                (_, num_bigint::Sign::NoSign) => sgn(r),
                (num_bigint::Sign::NoSign, _) => sgn(s),
                (a, b) if a == b => sgn(r),
                _ => {
                    let lhs = r * r;
                    let rhs = s * s * &d;
                    if lhs > rhs {
                        sgn(r)
                    } else {
                        sgn(s)
                    }
                }
            }
        };
        (sign(&r, &s), sign(&r, &-&s))
    }
}

fn sgn(x: &BigInt) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

fn is_squarefree(d: u64) -> bool {
    let f = crate::arith::factor(d as u128).expect("d below 2^64 factors");
    f.factors().iter().all(|&(_, e)| e == 1)
}

/// Continued-fraction expansion of `(P + √D) / Q`, yielding partial quotients.
struct Pqa {
    d: BigInt,
    sqrt_floor: BigInt,
    p: BigInt,
    q: BigInt,
}

impl Iterator for Pqa {
    type Item = (BigInt, BigInt, BigInt);

    /// Yields `(a_i, P_i, Q_i)`.
    fn next(&mut self) -> Option<Self::Item> {
        // Q_i > 0 throughout for the expansions used here
        let a = (&self.p + &self.sqrt_floor).div_floor(&self.q);
        let out = (a.clone(), self.p.clone(), self.q.clone());
        let p_next = &a * &self.q - &self.p;
        let q_next = (&self.d - &p_next * &p_next) / &self.q;
        self.p = p_next;
        self.q = q_next;
        Some(out)
    }
}

/// Builds the field `Q(√d)` for squarefree `d >= 2`.
pub fn make_field(d: u64) -> Result<QuadField> {
    if d < 2 {
        return Err(Error::Domain(format!("d must be >= 2, got {d}")));
    }
    if d > MAX_D {
        return Err(Error::Range(format!("d must be <= {MAX_D}, got {d}")));
    }
    if !is_squarefree(d) {
        return Err(Error::Domain(format!("d must be squarefree, got {d}")));
    }
    let (omega_kind, disc, p0, q0) = if d % 4 == 1 {
        (OmegaKind::HalfOnePlusSqrt, d, 1, 2)
    } else {
        (OmegaKind::Sqrt, 4 * d, 0, 1)
    };
    let big_d = BigInt::from(d);
    let cf = Pqa {
        sqrt_floor: BigInt::from(d.sqrt()),
        d: big_d,
        p: BigInt::from(p0),
        q: BigInt::from(q0),
    };
    let mut field = QuadField {
        d,
        disc,
        omega_kind,
        eps: QuadInt::one(),
        eps_norm: 1,
        growth_c: BigUint::one(),
    };
    let (tr, _) = field.tr_nm();
    // convergents p/q of ω; the first with |N(p - q ω̄)| = 1 is the fundamental
    // unit, reached within one period of the expansion
    let (mut p_prev, mut p_cur) = (BigInt::zero(), BigInt::one());
    let (mut q_prev, mut q_cur) = (BigInt::one(), BigInt::zero());
    let mut found = None;
    for (i, (a, p, q)) in cf.enumerate() {
        debug_assert!(q.is_positive(), "P = {p}");
        let p_new = &a * &p_cur + &p_prev;
        let q_new = &a * &q_cur + &q_prev;
        p_prev = std::mem::replace(&mut p_cur, p_new);
        q_prev = std::mem::replace(&mut q_cur, q_new);
        // p - q ω̄ = p - q (tr - ω) = (p - q tr) + q ω
        let cand = QuadInt::new(&p_cur - &q_cur * tr, q_cur.clone());
        let n = field.norm(&cand);
        if n.abs().is_one() {
            found = Some((cand, if n.is_positive() { 1 } else { -1 }));
            break;
        }
        if i > 4 * (64 + d.ilog2() as usize) * (d.sqrt() as usize + 1) {
            return Err(Error::Uncertified(format!("continued fraction too long for d = {d}")));
        }
    }
    let (eps, eps_norm) = found.expect("loop only exits with a unit");
    let m = field.mult_matrix(&eps).max_abs();
    let inner: BigInt = (BigInt::one() + m * 2) * 2;
    field.growth_c = inner.pow(2).to_biguint().expect("positive");
    field.eps = eps;
    field.eps_norm = eps_norm;
    Ok(field)
}

/// `|N(eps^k - 1)| <= C^k` for `k = 1..=kmax`, each decided exactly.
pub fn norm_growth_check(field: &QuadField, kmax: u32) -> Result<Vec<CertifiedVerdict>> {
    if kmax == 0 {
        return Err(Error::Domain("kmax must be >= 1".into()));
    }
    let c = BigInt::from(field.growth_c.clone());
    let mut power = QuadInt::one();
    let mut c_pow = BigInt::one();
    let mut out = Vec::with_capacity(kmax as usize);
    for _ in 0..kmax {
        power = field.mul(&power, &field.eps);
        c_pow *= &c;
        let shifted = QuadInt {
            u: &power.u - 1,
            v: power.v.clone(),
        };
        let n = field.norm(&shifted).abs();
        out.push(CertifiedVerdict::exact(n.into(), c_pow.clone().into(), Relation::Le));
    }
    Ok(out)
}
