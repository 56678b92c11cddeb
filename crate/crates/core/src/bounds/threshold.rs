//! Certified comparisons of integers against `(ln x)^e` for rational `e >= 0`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::interval::{ln_rational, RationalInterval};
use super::{DEFAULT_PRECISION, MAX_PRECISION};
use crate::error::{Error, Result};

/// The real number `(ln x)^exponent`, with `x >= 3` so that `ln x > 1`.
#[derive(Debug, Clone)]
pub struct LogPowerThreshold {
    x: u64,
    exponent: BigRational,
}

impl LogPowerThreshold {
    pub fn new(x: u64, exponent: BigRational) -> Result<Self> {
        if x < 3 {
            return Err(Error::Domain(format!("threshold needs x >= 3, got {x}")));
        }
        if exponent.is_negative() {
            return Err(Error::Domain(format!(
                "threshold exponent must be nonnegative, got {exponent}"
            )));
        }
        Ok(LogPowerThreshold { x, exponent })
    }

    pub fn x(&self) -> u64 {
        self.x
    }

    pub fn exponent(&self) -> &BigRational {
        &self.exponent
    }

    fn exponent_parts(&self) -> (u32, u32) {
        let p = self.exponent.numer().to_u32().expect("exponent numerator fits u32");
        let q = self.exponent.denom().to_u32().expect("exponent denominator fits u32");
        (p, q)
    }

    /// Enclosure of `(ln x)^exponent`.
    pub fn enclosure(&self, prec: u32) -> RationalInterval {
        if self.exponent.is_zero() {
            return RationalInterval::from_int(1);
        }
        let (p, q) = self.exponent_parts();
        let l = ln_rational(&BigRational::from_integer(self.x.into()), prec + 16);
        let lp = l.powi(p, prec + 16);
        if q == 1 {
            lp.rounded(prec)
        } else {
            lp.nth_root(q, prec + 8).rounded(prec)
        }
    }

    /// Certified ordering of `k` relative to `(ln x)^exponent`.
    ///
    /// For a positive exponent the threshold is transcendental, so equality
    /// never occurs and refinement always terminates in principle.
    pub fn cmp_int(&self, k: u64) -> Result<Ordering> {
        if self.exponent.is_zero() {
            return Ok(k.cmp(&1));
        }
        if k == 0 {
            return Ok(Ordering::Less);
        }
        let (p, q) = self.exponent_parts();
        let kq = BigRational::from_integer(BigInt::from(k).pow(q));
        let x = BigRational::from_integer(self.x.into());
        let mut prec = DEFAULT_PRECISION / 2;
        while prec <= MAX_PRECISION {
            let lp = ln_rational(&x, prec + 16).powi(p, prec + 16);
            // k^q against (ln x)^p
            if let Some(ord) = lp.cmp_rational(&kq) {
                if ord != Ordering::Equal {
                    return Ok(ord.reverse());
                }
            }
            prec *= 2;
        }
        Err(Error::PrecisionExhausted {
            what: format!("{k} against (ln {})^{}", self.x, self.exponent),
            bits: MAX_PRECISION,
        })
    }

    /// Largest integer `k` with `k <= (ln x)^exponent`.
    pub fn floor(&self) -> Result<u64> {
        let mut hi = 1u64;
        while self.cmp_int(hi)? != Ordering::Greater {
            hi *= 2;
        }
        // invariant: lo <= value < hi
        let mut lo = 0u64;
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.cmp_int(mid)? == Ordering::Greater {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(lo)
    }

    /// Smallest integer `k` with `k >= (ln x)^exponent`.
    pub fn ceil(&self) -> Result<u64> {
        let f = self.floor()?;
        Ok(if self.cmp_int(f)? == Ordering::Equal { f } else { f + 1 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn floors_match_f64() {
        for x in [3u64, 10, 100, 1000, 2310, 100_000, 1_000_000] {
            for (p, q) in [(1, 1), (1, 2), (2, 1), (3, 2), (5, 2), (1, 4)] {
                let t = LogPowerThreshold::new(x, rat(p, q)).unwrap();
                let v = (x as f64).ln().powf(p as f64 / q as f64);
                assert_eq!(t.floor().unwrap(), v.floor() as u64, "x={x} e={p}/{q}");
                assert_eq!(t.ceil().unwrap(), v.ceil() as u64);
                assert!(
                    t.enclosure(64).contains(&t.enclosure(200).lo().clone())
                        || t.enclosure(200).contains(t.enclosure(64).lo())
                );
            }
        }
    }

    #[test]
    fn zero_exponent_is_exactly_one() {
        let t = LogPowerThreshold::new(30, BigRational::zero()).unwrap();
        assert_eq!(t.floor().unwrap(), 1);
        assert_eq!(t.ceil().unwrap(), 1);
        assert_eq!(t.cmp_int(1).unwrap(), Ordering::Equal);
    }

    #[test]
    fn rejects_small_x() {
        assert!(LogPowerThreshold::new(2, rat(1, 1)).is_err());
        assert!(LogPowerThreshold::new(10, rat(-1, 1)).is_err());
    }
}
