//! Exact rational helpers: summation, parsing and decimal rendering.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Rounding direction for dyadic and decimal conversions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rounding {
    Down,
    Up,
    Nearest,
}

/// Sum of nonnegative fractions `num / den` with word-sized denominators.
///
/// Numerators are bucketed by denominator and combined over a common
/// denominator once, in [`RationalSum::total`]. Merging is exact, so the
/// total does not depend on the order of additions.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RationalSum {
    buckets: BTreeMap<u64, BigUint>,
}

impl RationalSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, num: u128, den: u64) {
        assert!(den > 0, "zero denominator");
        if num == 0 {
            return;
        }
        *self.buckets.entry(den).or_default() += BigUint::from(num);
    }

    pub fn merge(mut self, other: RationalSum) -> RationalSum {
        for (d, n) in other.buckets {
            *self.buckets.entry(d).or_default() += n;
        }
        self
    }

    pub fn total(&self) -> BigRational {
        // reduce each bucket, then regroup by reduced denominator
        let mut reduced: BTreeMap<u64, BigUint> = BTreeMap::new();
        for (&d, n) in &self.buckets {
            let g = n.gcd(&BigUint::from(d));
            let g64 = u64::try_from(&g).expect("gcd divides a u64");
            *reduced.entry(d / g64).or_default() += n / &g;
        }
        let lcm = reduced
            .keys()
            .fold(BigUint::one(), |acc, &d| acc.lcm(&BigUint::from(d)));
        let mut num = BigUint::zero();
        for (d, n) in reduced {
            num += n * (&lcm / BigUint::from(d));
        }
        BigRational::new(BigInt::from(num), BigInt::from(lcm))
    }
}

/// Parses `p/q`, an integer, or a plain decimal such as `2.5`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Domain(format!("not a rational number: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = int.starts_with('-');
        let int_part: BigInt = match int.trim_start_matches(['-', '+']) {
            "" => BigInt::zero(),
            t => t.parse().map_err(|_| bad())?,
        };
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let frac_part: BigInt = frac.parse().map_err(|_| bad())?;
        let mag = BigRational::new(int_part * &scale + frac_part, scale);
        return Ok(if neg { -mag } else { mag });
    }
    let p: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(p))
}

/// `p/q`, or just `p` for integers.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn pow10(e: i64) -> BigRational {
    let p = BigInt::from(10u32).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

/// Exact decimal rendering of `r` to `sig` significant digits.
///
/// Plain positional notation for moderate magnitudes, `d.ddde±N` otherwise;
/// trailing fractional zeros are dropped.
pub fn decimal(r: &BigRational, sig: usize, mode: Rounding) -> String {
    assert!(sig >= 1);
    if r.is_zero() {
        return "0".to_string();
    }
    let a = r.abs();
    let bits = a.numer().bits() as i64 - a.denom().bits() as i64;
    let mut e = (bits as f64 * std::f64::consts::LOG10_2).floor() as i64;
    while pow10(e) > a {
        e -= 1;
    }
    while pow10(e + 1) <= a {
        e += 1;
    }
    let scaled = r * pow10(sig as i64 - 1 - e);
    let mut m = match mode {
        Rounding::Down => scaled.floor(),
        Rounding::Up => scaled.ceil(),
        Rounding::Nearest => scaled.round(),
    }
    .to_integer();
    let limit = BigInt::from(10u32).pow(sig as u32);
    if m.abs() >= limit {
        m /= 10;
        e += 1;
    }
    let neg = m.is_negative();
    let digits = m.abs().to_string();
    let body = if (-5..15).contains(&e) {
        if e >= 0 {
            let int_len = e as usize + 1;
            if digits.len() <= int_len {
                format!("{}{}", digits, "0".repeat(int_len - digits.len()))
            } else {
                let (i, f) = digits.split_at(int_len);
                join_fraction(i, f)
            }
        } else {
            let f = format!("{}{}", "0".repeat((-e - 1) as usize), digits);
            join_fraction("0", &f)
        }
    } else {
        let (i, f) = digits.split_at(1);
        format!("{}e{}{}", join_fraction(i, f), if e < 0 { "-" } else { "+" }, e.abs())
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

fn join_fraction(int: &str, frac: &str) -> String {
    let frac = frac.trim_end_matches('0');
    if frac.is_empty() {
        int.to_string()
    } else {
        format!("{int}.{frac}")
    }
}

/// Serde adapter writing a rational as its `p/q` string.
pub mod serde_rational {
    use super::*;

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Exact rational value that serializes with a 12-digit decimal companion.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Exact(pub BigRational);

impl Exact {
    pub fn decimal(&self) -> String {
        decimal(&self.0, 12, Rounding::Nearest)
    }
}

impl From<BigRational> for Exact {
    fn from(r: BigRational) -> Self {
        Exact(r)
    }
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.0))
    }
}

#[derive(Serialize, Deserialize)]
struct ExactRepr {
    exact: String,
    decimal: String,
}

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ExactRepr {
            exact: format_rational(&self.0),
            decimal: self.decimal(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Exact {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = ExactRepr::deserialize(d)?;
        parse_rational(&repr.exact).map(Exact).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn sum_matches_naive_rationals() {
        let mut s = RationalSum::new();
        let mut naive = BigRational::zero();
        for d in 1u64..200 {
            let n = (d * 7 + 3) as u128 % 11;
            s.add(n, d);
            naive += rat(n as i64, d as i64);
        }
        assert_eq!(s.total(), naive);
        assert_eq!(RationalSum::new().total(), BigRational::zero());
    }

    #[test]
    fn sum_merge_is_order_independent() {
        let mut a = RationalSum::new();
        let mut b = RationalSum::new();
        a.add(3, 4);
        a.add(5, 6);
        b.add(1, 4);
        b.add(7, 9);
        assert_eq!(a.clone().merge(b.clone()).total(), b.merge(a).total());
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3/2").unwrap(), rat(3, 2));
        assert_eq!(parse_rational("1.5").unwrap(), rat(3, 2));
        assert_eq!(parse_rational("-0.25").unwrap(), rat(-1, 4));
        assert_eq!(parse_rational("7").unwrap(), rat(7, 1));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(decimal(&rat(1, 3), 12, Rounding::Nearest), "0.333333333333");
        assert_eq!(decimal(&rat(2, 3), 12, Rounding::Nearest), "0.666666666667");
        assert_eq!(decimal(&rat(2, 3), 12, Rounding::Down), "0.666666666666");
        assert_eq!(decimal(&rat(-2, 3), 3, Rounding::Down), "-0.667");
        assert_eq!(decimal(&rat(100, 1), 12, Rounding::Nearest), "100");
        assert_eq!(decimal(&rat(999999, 1000), 3, Rounding::Nearest), "1000");
        assert_eq!(decimal(&rat(999999, 1000000), 3, Rounding::Nearest), "1");
        assert_eq!(decimal(&rat(1, 1_000_000), 4, Rounding::Nearest), "1e-6");
        assert_eq!(
            decimal(
                &BigRational::from_integer(BigInt::from(10).pow(20) * 3),
                5,
                Rounding::Nearest
            ),
            "3e+20"
        );
        assert_eq!(decimal(&rat(123456789, 1), 4, Rounding::Up), "123500000");
    }

    #[test]
    fn exact_json_roundtrip() {
        let x = Exact(rat(-22, 7));
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"exact":"-22/7","decimal":"-3.14285714286"}"#);
        let back: Exact = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
    }
}
