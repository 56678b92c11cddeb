//! Outward-rounded interval arithmetic over exact rationals.
//!
//! Transcendental constants and functions are evaluated with fixed-point
//! series whose truncation and tail errors are bounded explicitly, so every
//! returned interval contains the true real value.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exact::{self, Rounding};

/// Closed interval `[lo, hi]` with exact rational endpoints.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RationalInterval {
    #[serde(with = "exact::serde_rational")]
    lo: BigRational,
    #[serde(with = "exact::serde_rational")]
    hi: BigRational,
}

fn bit_len(n: &BigInt) -> i64 {
    n.bits() as i64
}

fn pow2(shift: i64) -> BigRational {
    if shift >= 0 {
        BigRational::from_integer(BigInt::one() << shift as usize)
    } else {
        BigRational::new(BigInt::one(), BigInt::one() << (-shift) as usize)
    }
}

/// Rounds `v` to a dyadic rational with about `prec` significant bits, in the
/// requested direction.
pub fn round_rational(v: &BigRational, prec: u32, dir: Rounding) -> BigRational {
    if v.is_zero() {
        return v.clone();
    }
    let nb = bit_len(v.numer());
    let db = bit_len(v.denom());
    if v.denom().is_one() && nb <= prec as i64 {
        return v.clone();
    }
    if nb + db <= 2 * prec as i64 + 8 {
        return v.clone();
    }
    let shift = prec as i64 - (nb - db);
    let scale = pow2(shift);
    let scaled = v * &scale;
    let int = match dir {
        Rounding::Down => scaled.floor(),
        Rounding::Up => scaled.ceil(),
        Rounding::Nearest => scaled.round(),
    };
    int / scale
}

fn from_fixed(m: BigInt, w: u32) -> BigRational {
    BigRational::new(m, BigInt::one() << w as usize)
}

/// `atanh(p/q) * 2^w` for `0 <= p/q <= 1/2`, as `(sum, err)` with the true
/// value in `[sum, sum + err]`.
fn atanh_fixed(p: &BigInt, q: &BigInt, w: u32) -> (BigInt, BigInt) {
    let mut power: BigInt = (p << w as usize) / q;
    let z2n = p * p;
    let z2d = q * q;
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    loop {
        sum += &power / BigInt::from(2 * k + 1);
        if power.is_zero() {
            break;
        }
        power = power * &z2n / &z2d;
        k += 1;
    }
    // each term is low by < 2 ulps; the tail after the last nonzero power is
    // below (k+1) * 4/3 ulps
    (sum, BigInt::from(4 * (k + 1) + 4))
}

/// `atan(1/q) * 2^w` for an integer `q >= 2`, as `(sum, err)` with the true
/// value in `[sum - err, sum + err]`.
fn atan_inv_fixed(q: u64, w: u32) -> (BigInt, BigInt) {
    let q = BigInt::from(q);
    let q2 = &q * &q;
    let mut power: BigInt = (BigInt::one() << w as usize) / &q;
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    loop {
        let term = &power / BigInt::from(2 * k + 1);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        if power.is_zero() {
            break;
        }
        power /= &q2;
        k += 1;
    }
    (sum, BigInt::from(4 * (k + 1) + 4))
}

/// `exp(p/q) * 2^w` for `|p/q| <= 1/2`, as `(sum, err)` with the true value in
/// `[sum - err, sum + err]`.
fn exp_small_fixed(p: &BigInt, q: &BigInt, w: u32) -> (BigInt, BigInt) {
    let mut term: BigInt = BigInt::one() << w as usize;
    let mut sum = term.clone();
    let mut k: u64 = 1;
    loop {
        term = (term * p).div_floor(&(q * BigInt::from(k)));
        if term.is_zero() || (term.is_negative() && term == -BigInt::one()) {
            sum += &term;
            break;
        }
        sum += &term;
        k += 1;
    }
    (sum, BigInt::from(2 * k + 8))
}

fn interval_from_fixed(sum: BigInt, err: BigInt, one_sided: bool, w: u32) -> RationalInterval {
    let lo = if one_sided { sum.clone() } else { &sum - &err };
    let hi = sum + err;
    RationalInterval::new(from_fixed(lo, w), from_fixed(hi, w))
}

impl RationalInterval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        RationalInterval { lo, hi }
    }

    pub fn point(v: BigRational) -> Self {
        RationalInterval { lo: v.clone(), hi: v }
    }

    pub fn from_int<T: Into<BigInt>>(v: T) -> Self {
        Self::point(BigRational::from_integer(v.into()))
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, v: &BigRational) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    /// Outward rounding to about `prec` significant bits.
    pub fn rounded(&self, prec: u32) -> Self {
        RationalInterval {
            lo: round_rational(&self.lo, prec, Rounding::Down),
            hi: round_rational(&self.hi, prec, Rounding::Up),
        }
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        let a = &self.lo * k;
        let b = &self.hi * k;
        if k.is_negative() {
            RationalInterval { lo: b, hi: a }
        } else {
            RationalInterval { lo: a, hi: b }
        }
    }

    pub fn add_rational(&self, k: &BigRational) -> Self {
        RationalInterval {
            lo: &self.lo + k,
            hi: &self.hi + k,
        }
    }

    /// Quotient by an interval that excludes zero.
    pub fn div(&self, other: &Self) -> Self {
        assert!(
            other.lo.is_positive() || other.hi.is_negative(),
            "division by an interval containing zero"
        );
        let inv = RationalInterval {
            lo: other.hi.recip(),
            hi: other.lo.recip(),
        };
        self * &inv
    }

    pub fn powi(&self, exp: u32, prec: u32) -> Self {
        let mut result = Self::from_int(1);
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = (&result * &base).rounded(prec);
            }
            e >>= 1;
            if e > 0 {
                base = (&base * &base).rounded(prec);
            }
        }
        if exp % 2 == 0 && self.lo.is_negative() && self.hi.is_positive() {
            // even power of an interval straddling zero
            result.lo = BigRational::zero();
        }
        result
    }

    /// Enclosure of the principal `n`-th root of a nonnegative interval.
    pub fn nth_root(&self, n: u32, prec: u32) -> Self {
        assert!(!self.lo.is_negative(), "root of a negative interval");
        RationalInterval {
            lo: root_bound(&self.lo, n, prec, Rounding::Down),
            hi: root_bound(&self.hi, n, prec, Rounding::Up),
        }
    }

    pub fn sqrt(&self, prec: u32) -> Self {
        self.nth_root(2, prec)
    }

    /// Natural logarithm of a positive interval.
    pub fn ln(&self, prec: u32) -> Self {
        assert!(self.lo.is_positive(), "logarithm of a nonpositive interval");
        if self.is_point() {
            return ln_rational(&self.lo, prec);
        }
        RationalInterval {
            lo: ln_rational(&self.lo, prec).lo,
            hi: ln_rational(&self.hi, prec).hi,
        }
    }

    pub fn exp(&self, prec: u32) -> Self {
        if self.is_point() {
            return exp_rational(&self.lo, prec);
        }
        RationalInterval {
            lo: exp_rational(&self.lo, prec).lo,
            hi: exp_rational(&self.hi, prec).hi,
        }
    }

    /// Certified comparison against an exact rational; `None` if `v` lies in
    /// the interval and the interval is not a point.
    pub fn cmp_rational(&self, v: &BigRational) -> Option<Ordering> {
        if &self.hi < v {
            Some(Ordering::Less)
        } else if &self.lo > v {
            Some(Ordering::Greater)
        } else if self.is_point() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Decimal rendering to `sig` significant digits, if both endpoints
    /// round to the same string.
    pub fn to_decimal(&self, sig: usize) -> Option<String> {
        let a = exact::decimal(&self.lo, sig, Rounding::Nearest);
        let b = exact::decimal(&self.hi, sig, Rounding::Nearest);
        (a == b).then_some(a)
    }
}

fn root_bound(v: &BigRational, n: u32, prec: u32, dir: Rounding) -> BigRational {
    if v.is_zero() {
        return v.clone();
    }
    // scale by 2^(n*w) so the integer root carries about prec bits
    let mag = (bit_len(v.numer()) - bit_len(v.denom())) / n as i64;
    let w = (prec as i64 + 2 - mag).max(0) as usize;
    let scaled = v * BigRational::from_integer(BigInt::one() << (n as usize * w));
    let (num, exact_int) = match dir {
        Rounding::Up => {
            let c = scaled.ceil().to_integer();
            (c, false)
        }
        _ => (scaled.floor().to_integer(), true),
    };
    let un: BigUint = num.to_biguint().expect("nonnegative");
    let mut r = un.nth_root(n);
    if !exact_int && r.pow(n) != un {
        r += 1u32;
    }
    BigRational::new(BigInt::from_biguint(Sign::Plus, r), BigInt::one() << w)
}

impl fmt::Display for RationalInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]",
            exact::decimal(&self.lo, 12, Rounding::Down),
            exact::decimal(&self.hi, 12, Rounding::Up)
        )
    }
}

impl Add for &RationalInterval {
    type Output = RationalInterval;
    fn add(self, o: &RationalInterval) -> RationalInterval {
        RationalInterval {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
        }
    }
}

impl Sub for &RationalInterval {
    type Output = RationalInterval;
    fn sub(self, o: &RationalInterval) -> RationalInterval {
        RationalInterval {
            lo: &self.lo - &o.hi,
            hi: &self.hi - &o.lo,
        }
    }
}

impl Neg for &RationalInterval {
    type Output = RationalInterval;
    fn neg(self) -> RationalInterval {
        RationalInterval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }
}

impl Mul for &RationalInterval {
    type Output = RationalInterval;
    fn mul(self, o: &RationalInterval) -> RationalInterval {
        if !self.lo.is_negative() && !o.lo.is_negative() {
            return RationalInterval {
                lo: &self.lo * &o.lo,
                hi: &self.hi * &o.hi,
            };
        }
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        RationalInterval { lo, hi }
    }
}

fn guard_bits(prec: u32) -> u32 {
    prec + 32
}

/// Enclosure of ln 2.
pub fn ln2(prec: u32) -> RationalInterval {
    let w = guard_bits(prec);
    let (s, e) = atanh_fixed(&BigInt::one(), &BigInt::from(3), w);
    interval_from_fixed(s, e, true, w)
        .scale(&BigRational::from_integer(2.into()))
        .rounded(prec)
}

/// Enclosure of π from Machin's formula.
pub fn pi(prec: u32) -> RationalInterval {
    let w = guard_bits(prec);
    let (a, ea) = atan_inv_fixed(5, w);
    let (b, eb) = atan_inv_fixed(239, w);
    let ia = interval_from_fixed(a, ea, false, w);
    let ib = interval_from_fixed(b, eb, false, w);
    (&ia.scale(&BigRational::from_integer(16.into())) - &ib.scale(&BigRational::from_integer(4.into()))).rounded(prec)
}

/// Enclosure of e.
pub fn e(prec: u32) -> RationalInterval {
    exp_rational(&BigRational::one(), prec)
}

/// Enclosure of ln r for a positive rational r.
pub fn ln_rational(r: &BigRational, prec: u32) -> RationalInterval {
    assert!(r.is_positive(), "logarithm of a nonpositive number");
    if r.is_one() {
        return RationalInterval::from_int(0);
    }
    // r = 2^k * m with 1 <= m < 2
    let mut k = bit_len(r.numer()) - bit_len(r.denom());
    let mut m = r / pow2(k);
    if m < BigRational::one() {
        k -= 1;
        m = r / pow2(k);
    }
    let k_bits = 64 - k.unsigned_abs().leading_zeros();
    let w = guard_bits(prec) + k_bits;
    let z = (&m - BigRational::one()) / (&m + BigRational::one());
    let mut acc = if z.is_zero() {
        RationalInterval::from_int(0)
    } else {
        let (s, e) = atanh_fixed(z.numer(), z.denom(), w);
        interval_from_fixed(s, e, true, w).scale(&BigRational::from_integer(2.into()))
    };
    if k != 0 {
        let w2 = w + 8;
        let (s, e) = atanh_fixed(&BigInt::one(), &BigInt::from(3), w2);
        let l2 = interval_from_fixed(s, e, true, w2).scale(&BigRational::from_integer((2 * k).into()));
        acc = &acc + &l2;
    }
    acc.rounded(prec)
}

/// Enclosure of exp(r) for a rational r.
pub fn exp_rational(r: &BigRational, prec: u32) -> RationalInterval {
    if r.is_zero() {
        return RationalInterval::from_int(1);
    }
    // halve until |r / 2^s| <= 1/2, then square s times
    let mag = bit_len(r.numer()) - bit_len(r.denom());
    let s = (mag + 2).max(0) as u32;
    let y = r / pow2(s as i64);
    let w = guard_bits(prec) + 2 * s;
    let (sum, err) = exp_small_fixed(y.numer(), y.denom(), w);
    let mut acc = interval_from_fixed(sum, err, false, w);
    for _ in 0..s {
        acc = (&acc * &acc).rounded(w);
    }
    acc.rounded(prec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn tiny(bits: usize) -> BigRational {
        BigRational::new(BigInt::one(), BigInt::one() << bits)
    }

    fn approx(v: &RationalInterval) -> f64 {
        use num_traits::ToPrimitive;
        v.lo().to_f64().unwrap()
    }

    #[test]
    fn constants_enclose_known_digits() {
        // 40-digit decimal truncations
        let pi_lo = "31415926535897932384626433832795028841971/10000000000000000000000000000000000000000"
            .parse::<BigRational>()
            .unwrap();
        let p = pi(128);
        assert!(p.lo() < &(&pi_lo + rat(1, 1) / BigRational::from_integer(BigInt::from(10).pow(40))));
        assert!(p.hi() > &pi_lo);
        assert!(p.width() < tiny(40));

        let e_lo = "27182818284590452353602874713526624977572/10000000000000000000000000000000000000000"
            .parse::<BigRational>()
            .unwrap();
        let ev = e(128);
        assert!(ev.hi() > &e_lo);
        assert!(ev.lo() < &(&e_lo + rat(1, 1) / BigRational::from_integer(BigInt::from(10).pow(40))));

        let ln2_lo = "6931471805599453094172321214581765680755/10000000000000000000000000000000000000000"
            .parse::<BigRational>()
            .unwrap();
        let l = ln2(128);
        assert!(l.hi() > &ln2_lo);
        assert!(l.lo() < &(&ln2_lo + rat(1, 1) / BigRational::from_integer(BigInt::from(10).pow(40))));
    }

    #[test]
    fn ln_and_exp_roundtrip() {
        for (n, d) in [(3, 1), (1, 7), (1000, 1), (12345, 67), (2, 1), (1, 2)] {
            let r = rat(n, d);
            let l = ln_rational(&r, 100);
            let back = l.exp(100);
            assert!(back.contains(&r), "{n}/{d}: {back}");
            assert!(back.width() < tiny(60) * &r);
        }
        assert!((approx(&ln_rational(&rat(10, 1), 64)) - 10f64.ln()).abs() < 1e-12);
        assert!((approx(&exp_rational(&rat(-5, 2), 64)) - (-2.5f64).exp()).abs() < 1e-12);
        assert!((approx(&exp_rational(&rat(100, 1), 64)) / 100f64.exp() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn roots() {
        let two = RationalInterval::from_int(2);
        let s = two.sqrt(80);
        let sq = &s * &s;
        assert!(sq.contains(&rat(2, 1)));
        let four = RationalInterval::from_int(27).nth_root(3, 80);
        assert!(four.contains(&rat(3, 1)));
        assert!(four.width() < tiny(70));
    }

    #[test]
    fn precision_tightens() {
        let a = ln_rational(&rat(7, 1), 64);
        let b = ln_rational(&rat(7, 1), 256);
        assert!(b.width() < a.width());
        assert!(a.lo() <= b.lo() || a.hi() >= b.hi());
        assert!(a.contains(b.lo()) || b.contains(a.lo()));
    }
}
