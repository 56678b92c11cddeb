//! Narrow class numbers from cycles of reduced indefinite binary quadratic
//! forms.

use std::collections::HashSet;

use num_integer::{Integer, Roots};

use crate::error::{Error, Result};

/// Largest discriminant handled by [`narrow_class_number_of_disc`].
pub const MAX_FORM_DISC: u64 = 1 << 36;

type Form = (i64, i64, i64);

/// `(a, b, c)` with `b^2 - 4ac = D` is reduced when
/// `0 < b < √D` and `√D - b < 2|a| < √D + b`.
fn is_reduced((a, b, _): Form, s: i64) -> bool {
    // s = floor(√D) and D is not a square, so `k > √D` iff `k > s`
    let two_a = 2 * a.abs();
    b > 0 && b <= s && two_a + b > s && two_a - b <= s
}

/// The right neighbour `ρ(a, b, c) = (c, b', c')` with `b' ≡ -b (mod 2|c|)`
/// and `√D - 2|c| < b' < √D`.
fn rho((_, b, c): Form, disc: i64, s: i64) -> Form {
    let m = 2 * c.abs();
    // largest b' <= s with b' ≡ -b (mod m)
    let b2 = s - (s + b).rem_euclid(m);
    let c2 = (b2 * b2 - disc) / (4 * c);
    (c, b2, c2)
}

/// Number of proper equivalence classes of primitive forms of discriminant
/// `disc`, counted as cycles of reduced forms.
pub fn narrow_class_number_of_disc(disc: u64) -> Result<u64> {
    if disc > MAX_FORM_DISC {
        return Err(Error::WorkBudget {
            n: disc.to_string(),
            budget: MAX_FORM_DISC,
        });
    }
    let d = disc as i64;
    let s = d.sqrt();
    if s * s == d || !(d % 4 == 0 || d % 4 == 1) {
        return Err(Error::Domain(format!("{disc} is not a nonsquare discriminant")));
    }
    let mut reduced = Vec::new();
    for b in (1..=s).filter(|b| (b - d).rem_euclid(2) == 0) {
        let ac = (b * b - d) / 4; // negative
        let m = -ac;
        for a in 1..=m.sqrt() {
            if m % a != 0 {
                continue;
            }
            for aa in [a, m / a] {
                for sign in [1, -1] {
                    let f = (sign * aa, b, -sign * (m / aa));
                    if f.0.gcd(&f.1).gcd(&f.2) == 1 && is_reduced(f, s) {
                        reduced.push(f);
                    }
                }
            }
        }
    }
    reduced.sort_unstable();
    reduced.dedup();
    let mut seen = HashSet::new();
    let mut cycles = 0;
    for &f in &reduced {
        if seen.contains(&f) {
            continue;
        }
        cycles += 1;
        let mut g = f;
        loop {
            debug_assert!(is_reduced(g, s));
            seen.insert(g);
            g = rho(g, d, s);
            if g == f {
                break;
            }
        }
    }
    Ok(cycles)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_discriminants() {
        // narrow class numbers of Q(√d) for d = 2, 3, 5, 6, 7, 10, 15, 34
        for (disc, h_plus) in [(8, 1), (12, 2), (5, 1), (24, 2), (28, 2), (40, 2), (60, 4), (136, 4)] {
            assert_eq!(narrow_class_number_of_disc(disc).unwrap(), h_plus, "D={disc}");
        }
        assert!(narrow_class_number_of_disc(16).is_err());
        assert!(narrow_class_number_of_disc(7).is_err());
    }
}
