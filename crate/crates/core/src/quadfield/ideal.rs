use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::QuadField;
use crate::error::{Error, Result};

/// The integral ideal `aZ + (b + cω)Z` in Hermite normal form:
/// `c | a`, `c | b`, `0 <= b < a`, norm `a·c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuadIdeal {
    a: u64,
    b: u64,
    c: u64,
}

/// An element `u + vω` with machine-sized coordinates.
pub(crate) type Elem = (i128, i128);

impl QuadIdeal {
    /// The unit ideal `(1)`.
    pub const ONE: QuadIdeal = QuadIdeal { a: 1, b: 0, c: 1 };

    /// Validates the HNF conditions and closure under multiplication by `ω`.
    pub fn new(field: &QuadField, a: u64, b: u64, c: u64) -> Result<Self> {
        let bad = |why: &str| Err(Error::Domain(format!("({a}, {b}, {c}) is not an ideal in HNF: {why}")));
        if a == 0 || c == 0 {
            return bad("a and c must be positive");
        }
        if a % c != 0 || b % c != 0 {
            return bad("c must divide a and b");
        }
        if b >= a {
            return bad("need 0 <= b < a");
        }
        let (big_a, big_b) = ((a / c) as i128, (b / c) as i128);
        if norm_poly(field, big_b).rem_euclid(big_a) != 0 {
            return bad("lattice is not closed under multiplication by ω");
        }
        a.checked_mul(c)
            .filter(|&n| n <= i64::MAX as u64 / 4)
            .ok_or_else(|| Error::Range(format!("norm of ({a}, {b}, {c}) too large")))?;
        Ok(QuadIdeal { a, b, c })
    }

    pub(crate) fn from_parts_unchecked(a: u64, b: u64, c: u64) -> Self {
        QuadIdeal { a, b, c }
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn c(&self) -> u64 {
        self.c
    }

    pub fn norm(&self) -> u64 {
        self.a * self.c
    }

    pub fn is_one(&self) -> bool {
        self.a == 1
    }

    /// Canonical representative of `x` modulo the ideal: `0 <= v < c`,
    /// `0 <= u < a`.
    pub(crate) fn reduce(&self, (u, v): Elem) -> Elem {
        let (a, b, c) = (self.a as i128, self.b as i128, self.c as i128);
        let k = v.div_euclid(c);
        let (u, v) = (u - k * b, v - k * c);
        (u.rem_euclid(a), v)
    }

    pub(crate) fn contains(&self, x: Elem) -> bool {
        self.reduce(x) == (0, 0)
    }

    /// `self ⊆ other`.
    pub fn is_contained_in(&self, other: &QuadIdeal) -> bool {
        other.contains((self.a as i128, 0)) && other.contains((self.b as i128, self.c as i128))
    }

    /// `other | self`, i.e. `self ⊆ other`.
    pub fn is_divisible_by(&self, other: &QuadIdeal) -> bool {
        self.is_contained_in(other)
    }

    /// Product ideal, renormalized to HNF.
    pub fn mul(&self, field: &QuadField, other: &QuadIdeal) -> QuadIdeal {
        let (a1, b1, c1) = (self.a as i128, self.b as i128, self.c as i128);
        let (a2, b2, c2) = (other.a as i128, other.b as i128, other.c as i128);
        let gens = [
            (a1 * a2, 0),
            (a1 * b2, a1 * c2),
            (a2 * b1, a2 * c1),
            mul_elem(field, (b1, c1), (b2, c2)),
        ];
        hnf(&gens)
    }

    pub fn pow(&self, field: &QuadField, e: u32) -> QuadIdeal {
        (0..e).fold(QuadIdeal::ONE, |acc, _| acc.mul(field, self))
    }
}

impl fmt::Display for QuadIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {} + {}ω]", self.a, self.b, self.c)
    }
}

/// `N(B + ω) = B^2 + tr·B - nm`.
pub(crate) fn norm_poly(field: &QuadField, b: i128) -> i128 {
    let (tr, nm) = field.tr_nm();
    b * b + tr as i128 * b - nm as i128
}

pub(crate) fn mul_elem(field: &QuadField, (u1, v1): Elem, (u2, v2): Elem) -> Elem {
    let (tr, nm) = field.tr_nm();
    let vv = v1 * v2;
    (u1 * u2 + nm as i128 * vv, u1 * v2 + u2 * v1 + tr as i128 * vv)
}

/// HNF basis of the full-rank lattice spanned by `gens`.
pub(crate) fn hnf(gens: &[Elem]) -> QuadIdeal {
    let mut pivot = gens[0];
    let mut a = 0i128;
    for &g in &gens[1..] {
        let mut w = g;
        // Euclid on the ω-coordinate
        while w.1 != 0 {
            let q = pivot.1.div_euclid(w.1);
            let r = (pivot.0 - q * w.0, pivot.1 - q * w.1);
            pivot = w;
            w = r;
        }
        a = a.gcd(&w.0);
    }
    if pivot.1 < 0 {
        pivot = (-pivot.0, -pivot.1);
    }
    debug_assert!(a > 0 && pivot.1 > 0, "lattice not of full rank");
    QuadIdeal {
        a: a as u64,
        b: pivot.0.rem_euclid(a) as u64,
        c: pivot.1 as u64,
    }
}
