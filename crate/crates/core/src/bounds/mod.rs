//! Certified checks of the explicit inequalities behind the order-sum
//! estimates: the entropy-type bound, binomial ratio and partial-sum bounds,
//! two-sided Stirling, determinant and matrix-entry bounds, and exact counts of
//! integers with many prime factors.
//!
//! Every decision compares rational interval enclosures. Nothing here trusts
//! floating point.

pub mod interval;
pub mod matrix;
pub mod threshold;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::sieve;
use crate::error::{Error, Result};
pub use interval::RationalInterval;
pub use matrix::IntMatrix;
pub use threshold::LogPowerThreshold;

pub const DEFAULT_PRECISION: u32 = 128;
pub const MAX_PRECISION: u32 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    Holds,
    Fails,
    Undecided,
}

/// The relation asserted between the two sides of a check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    /// `lhs < rhs`
    Lt,
    /// `lhs <= rhs`
    Le,
}

/// Outcome of an inequality check.
///
/// `Holds` is reported only when the enclosures prove the relation, `Fails`
/// only when they refute it; overlapping enclosures give `Undecided`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertifiedVerdict {
    pub status: Status,
    pub relation: Relation,
    pub lhs: RationalInterval,
    pub rhs: RationalInterval,
    pub precision_bits: u32,
}

impl CertifiedVerdict {
    pub fn decide(lhs: RationalInterval, rhs: RationalInterval, relation: Relation, precision_bits: u32) -> Self {
        let status = match relation {
            Relation::Lt if lhs.hi() < rhs.lo() => Status::Holds,
            Relation::Lt if lhs.lo() >= rhs.hi() => Status::Fails,
            Relation::Le if lhs.hi() <= rhs.lo() => Status::Holds,
            Relation::Le if lhs.lo() > rhs.hi() => Status::Fails,
            _ => Status::Undecided,
        };
        CertifiedVerdict {
            status,
            relation,
            lhs,
            rhs,
            precision_bits,
        }
    }

    /// Exact comparison of two rationals (point enclosures).
    pub fn exact(lhs: BigRational, rhs: BigRational, relation: Relation) -> Self {
        Self::decide(RationalInterval::point(lhs), RationalInterval::point(rhs), relation, 0)
    }

    pub fn holds(&self) -> bool {
        self.status == Status::Holds
    }
}

/// Runs `check` at `start` bits, doubling the precision while the verdict is
/// undecided, up to [`MAX_PRECISION`].
pub fn refine<F>(start: u32, mut check: F) -> Result<CertifiedVerdict>
where
    F: FnMut(u32) -> Result<CertifiedVerdict>,
{
    let mut prec = start.max(16);
    loop {
        let v = check(prec)?;
        if v.status != Status::Undecided || prec >= MAX_PRECISION {
            return Ok(v);
        }
        prec = (prec * 2).min(MAX_PRECISION);
    }
}

fn int(v: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(v.into())
}

/// Log-space sides of `x^x / (x-y)^(x-y) < e^(2y) x^y`:
/// `x ln x - (x-y) ln(x-y)` against `2y + y ln x`.
fn lemma1_sides(
    x: &BigRational,
    y: &BigRational,
    ln_x: &RationalInterval,
    ln_xmy: &RationalInterval,
) -> (RationalInterval, RationalInterval) {
    let xmy = x - y;
    let lhs = &ln_x.scale(x) - &ln_xmy.scale(&xmy);
    let rhs = ln_x.scale(y).add_rational(&(y * int(2)));
    (lhs, rhs)
}

fn lemma1_domain(x: &BigRational, y: &BigRational) -> Result<()> {
    if y < &int(2) || y * int(2) > *x {
        return Err(Error::Domain(format!(
            "entropy bound needs 2 <= y <= x/2, got x = {x}, y = {y}"
        )));
    }
    Ok(())
}

/// Certifies `x^x / (x-y)^(x-y) < e^(2y) x^y` for rationals `2 <= y <= x/2`.
pub fn check_lemma1(x: &BigRational, y: &BigRational, precision_bits: u32) -> Result<CertifiedVerdict> {
    lemma1_domain(x, y)?;
    refine(precision_bits, |prec| {
        let ln_x = interval::ln_rational(x, prec);
        let ln_xmy = interval::ln_rational(&(x - y), prec);
        let (lhs, rhs) = lemma1_sides(x, y, &ln_x, &ln_xmy);
        Ok(CertifiedVerdict::decide(lhs, rhs, Relation::Lt, prec))
    })
}

fn binomial(k: u64, j: u64) -> BigUint {
    if j > k {
        return BigUint::zero();
    }
    let j = j.min(k - j);
    (0..j).fold(BigUint::one(), |acc, i| acc * (k - i) / (i + 1))
}

fn lemma2_domain(k: u64, j: u64) -> Result<()> {
    if j < 1 || k < 2 || 3 * j > k - 2 {
        return Err(Error::Domain(format!(
            "binomial ratio bound needs 1 <= j <= (k-2)/3, got k = {k}, j = {j}"
        )));
    }
    Ok(())
}

/// Exact check of `C(k, j) <= C(k, j+1) / 2` for `1 <= j <= (k-2)/3`.
pub fn check_lemma2(k: u64, j: u64) -> Result<CertifiedVerdict> {
    lemma2_domain(k, j)?;
    let lhs = BigRational::from_integer(binomial(k, j).into());
    let rhs = BigRational::new(binomial(k, j + 1).into(), BigInt::from(2));
    Ok(CertifiedVerdict::exact(lhs, rhs, Relation::Le))
}

fn binom_sum_domain(k: u64, m: u64) -> Result<()> {
    if m < 2 || k < 2 || 3 * m > k - 2 {
        return Err(Error::Domain(format!(
            "binomial partial-sum bound needs 2 <= m <= (k-2)/3, got k = {k}, m = {m}"
        )));
    }
    Ok(())
}

fn binom_sum_rhs(e2: &RationalInterval, k: u64, m: u64, prec: u32) -> RationalInterval {
    e2.scale(&BigRational::new(k.into(), m.into()))
        .powi(m as u32, prec + 16)
        .rounded(prec)
}

/// Certifies `sum_{j=1}^{m} C(k, j) <= (e^2 k / m)^m` for `2 <= m <= (k-2)/3`.
pub fn check_binom_sum(k: u64, m: u64, precision_bits: u32) -> Result<CertifiedVerdict> {
    binom_sum_domain(k, m)?;
    let sum: BigUint = (1..=m).map(|j| binomial(k, j)).sum();
    let lhs = RationalInterval::point(BigRational::from_integer(sum.into()));
    refine(precision_bits, |prec| {
        let e2 = interval::exp_rational(&int(2), prec + 16);
        let rhs = binom_sum_rhs(&e2, k, m, prec);
        Ok(CertifiedVerdict::decide(lhs.clone(), rhs, Relation::Le, prec))
    })
}

/// Two-sided Stirling enclosure of `n!`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StirlingCheck {
    pub n: u64,
    pub factorial: BigUint,
    /// Enclosure of `sqrt(2 pi n) (n/e)^n e^(1/(12n+1))`.
    pub lower: RationalInterval,
    /// Enclosure of `sqrt(2 pi n) (n/e)^n e^(1/(12n))`.
    pub upper: RationalInterval,
    /// `Holds` iff `lower < n! < upper` is certified; `lhs`/`rhs` carry the
    /// lower and upper enclosures.
    pub verdict: CertifiedVerdict,
}

fn stirling_at(n: u64, prec: u32) -> (RationalInterval, RationalInterval) {
    let w = prec + 2 * (64 - n.leading_zeros()) + 32;
    let two_pi_n = interval::pi(w).scale(&int(2 * n));
    let root = two_pi_n.sqrt(w);
    let nn = RationalInterval::from_int(BigInt::from(n).pow(n as u32));
    let en = interval::exp_rational(&int(n), w);
    let base = (&root * &nn.div(&en)).rounded(w);
    let lo_corr = interval::exp_rational(&BigRational::new(1.into(), (12 * n + 1).into()), w);
    let hi_corr = interval::exp_rational(&BigRational::new(1.into(), (12 * n).into()), w);
    ((&base * &lo_corr).rounded(prec), (&base * &hi_corr).rounded(prec))
}

/// Certifies the two-sided Stirling bracket around `n!` for `n >= 2`.
pub fn stirling_interval(n: u64, precision_bits: u32) -> Result<StirlingCheck> {
    if n < 2 {
        return Err(Error::Domain(format!("Stirling bracket needs n >= 2, got {n}")));
    }
    let factorial: BigUint = (1..=n).map(BigUint::from).product();
    let f = BigRational::from_integer(factorial.clone().into());
    let mut prec = precision_bits.max(16);
    loop {
        let (lower, upper) = stirling_at(n, prec);
        let status = if lower.hi() < &f && &f < upper.lo() {
            Status::Holds
        } else if lower.lo() >= &f || &f >= upper.hi() {
            Status::Fails
        } else {
            Status::Undecided
        };
        if status != Status::Undecided || prec >= MAX_PRECISION {
            let verdict = CertifiedVerdict {
                status,
                relation: Relation::Lt,
                lhs: lower.clone(),
                rhs: upper.clone(),
                precision_bits: prec,
            };
            return Ok(StirlingCheck {
                n,
                factorial,
                lower,
                upper,
                verdict,
            });
        }
        prec = (prec * 2).min(MAX_PRECISION);
    }
}

/// Results of the three matrix bounds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixVerdicts {
    /// `|det A| <= n! M(A)^n`
    pub det_ok: CertifiedVerdict,
    /// `M(AB) <= n M(A) M(B)`
    pub prod_ok: CertifiedVerdict,
    /// `M(A^m) <= (n M(A))^m` for m = 2..=5: the first failing power, or the
    /// m = 5 comparison when all hold.
    pub pow_ok: CertifiedVerdict,
}

impl MatrixVerdicts {
    pub fn all_hold(&self) -> bool {
        self.det_ok.holds() && self.prod_ok.holds() && self.pow_ok.holds()
    }
}

/// Exact verification of the determinant and matrix-entry bounds.
pub fn check_matrix_bounds(a: &IntMatrix, b: &IntMatrix) -> Result<MatrixVerdicts> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let n = a.dim();
    let ma = a.max_abs();
    let mb = b.max_abs();
    let n_fact: BigInt = (1..=n as u64).map(BigInt::from).product();
    let q = |v: BigInt| BigRational::from_integer(v);

    let det_ok = CertifiedVerdict::exact(q(a.det().abs()), q(&n_fact * ma.pow(n as u32)), Relation::Le);
    let prod_ok = CertifiedVerdict::exact(q(a.mul(b)?.max_abs()), q(BigInt::from(n) * &ma * &mb), Relation::Le);
    let mut pow_ok = None;
    let mut power = a.clone();
    let n_ma = BigInt::from(n) * &ma;
    for m in 2..=5u32 {
        power = power.mul(a)?;
        let v = CertifiedVerdict::exact(q(power.max_abs()), q(n_ma.pow(m)), Relation::Le);
        let failed = !v.holds();
        pow_ok = Some(v);
        if failed {
            break;
        }
    }
    Ok(MatrixVerdicts {
        det_ok,
        prod_ok,
        pow_ok: pow_ok.expect("at least one power checked"),
    })
}

/// Number of `n <= x` with `ω(n) >= (ln x)^beta`.
pub fn count_high_omega(x: u64, beta: &BigRational) -> Result<u64> {
    let threshold = LogPowerThreshold::new(x, beta.clone())?;
    let k = threshold.ceil()?;
    let limit = usize::try_from(x).map_err(|_| Error::Range(format!("x = {x} too large")))?;
    let omega = sieve::omega_table(limit);
    Ok(omega[1..].iter().filter(|&&w| w as u64 >= k).count() as u64)
}

/// Tally of a grid sweep.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSummary {
    pub name: String,
    pub range: String,
    pub checked: u64,
    pub holds: u64,
    pub fails: u64,
    pub undecided: u64,
    /// Parameters of the first non-`Holds` case, if any.
    pub first_exception: Option<String>,
}

impl GridSummary {
    fn new(name: &str, range: String) -> Self {
        GridSummary {
            name: name.to_string(),
            range,
            ..Default::default()
        }
    }

    fn record(&mut self, status: Status, params: impl FnOnce() -> String) {
        self.checked += 1;
        match status {
            Status::Holds => self.holds += 1,
            Status::Fails => self.fails += 1,
            Status::Undecided => self.undecided += 1,
        }
        if status != Status::Holds && self.first_exception.is_none() {
            self.first_exception = Some(params());
        }
    }

    fn merge(mut self, other: GridSummary) -> GridSummary {
        self.checked += other.checked;
        self.holds += other.holds;
        self.fails += other.fails;
        self.undecided += other.undecided;
        if self.first_exception.is_none() {
            self.first_exception = other.first_exception;
        }
        self
    }

    pub fn all_hold(&self) -> bool {
        self.holds == self.checked
    }
}

fn sweep<T, F>(name: &str, range: String, items: Vec<T>, f: F) -> GridSummary
where
    T: Send,
    F: Fn(T) -> GridSummary + Sync + Send,
{
    // ordered collect keeps first_exception deterministic
    let parts: Vec<GridSummary> = items.into_par_iter().map(f).collect();
    parts
        .into_iter()
        .fold(GridSummary::new(name, range), GridSummary::merge)
}

/// Entropy bound over all integer pairs `2 <= y <= x/2`, `x <= xmax`.
pub fn lemma1_grid(xmax: u64, precision_bits: u32) -> GridSummary {
    let table: Vec<RationalInterval> = (0..=xmax)
        .into_par_iter()
        .map(|v| {
            if v == 0 {
                RationalInterval::from_int(0)
            } else {
                interval::ln_rational(&int(v), precision_bits)
            }
        })
        .collect();
    sweep("entropy", format!("2<=y<=x/2, x<={xmax}"), (4..=xmax).collect(), |x| {
        let mut s = GridSummary::default();
        let xr = int(x);
        for y in 2..=x / 2 {
            let yr = int(y);
            let (lhs, rhs) = lemma1_sides(&xr, &yr, &table[x as usize], &table[(x - y) as usize]);
            let mut status = CertifiedVerdict::decide(lhs, rhs, Relation::Lt, precision_bits).status;
            if status == Status::Undecided {
                status = check_lemma1(&xr, &yr, precision_bits * 2)
                    .map(|v| v.status)
                    .unwrap_or(Status::Undecided);
            }
            s.record(status, || format!("x={x}, y={y}"));
        }
        s
    })
}

/// Binomial ratio bound over all `1 <= j <= (k-2)/3`, `k <= kmax`.
pub fn lemma2_grid(kmax: u64) -> GridSummary {
    sweep(
        "binomial-ratio",
        format!("1<=j<=(k-2)/3, k<={kmax}"),
        (5..=kmax).collect(),
        |k| {
            let mut s = GridSummary::default();
            let mut c = BigUint::from(k); // C(k, 1)
            for j in 1..=(k - 2) / 3 {
                let next = &c * (k - j) / (j + 1);
                let status = if &c * 2u32 <= next {
                    Status::Holds
                } else {
                    Status::Fails
                };
                s.record(status, || format!("k={k}, j={j}"));
                c = next;
            }
            s
        },
    )
}

/// Binomial partial-sum bound over all `2 <= m <= (k-2)/3`, `k <= kmax`.
pub fn lemma3_grid(kmax: u64, precision_bits: u32) -> GridSummary {
    let e2 = interval::exp_rational(&int(2), precision_bits + 16);
    sweep(
        "binomial-sum",
        format!("2<=m<=(k-2)/3, k<={kmax}"),
        (8..=kmax).collect(),
        |k| {
            let mut s = GridSummary::default();
            let mut c = BigUint::from(k);
            let mut sum = c.clone();
            for m in 2..=(k - 2) / 3 {
                c = c * (k - m + 1) / m;
                sum += &c;
                let lhs = RationalInterval::point(BigRational::from_integer(sum.clone().into()));
                let rhs = binom_sum_rhs(&e2, k, m, precision_bits);
                let mut status = CertifiedVerdict::decide(lhs, rhs, Relation::Le, precision_bits).status;
                if status == Status::Undecided {
                    status = check_binom_sum(k, m, precision_bits * 2)
                        .map(|v| v.status)
                        .unwrap_or(Status::Undecided);
                }
                s.record(status, || format!("k={k}, m={m}"));
            }
            s
        },
    )
}

/// Stirling bracket for `2 <= n <= nmax`.
pub fn stirling_grid(nmax: u64, precision_bits: u32) -> GridSummary {
    sweep("stirling", format!("2<=n<={nmax}"), (2..=nmax).collect(), |n| {
        let mut s = GridSummary::default();
        let status = stirling_interval(n, precision_bits)
            .map(|c| c.verdict.status)
            .unwrap_or(Status::Undecided);
        s.record(status, || format!("n={n}"));
        s
    })
}

/// Matrix bounds on `count` seeded random pairs per dimension `1..=max_dim`,
/// entries uniform in `[-bound, bound]`.
pub fn matrix_grid(max_dim: usize, count: usize, bound: i64, seed: u64) -> GridSummary {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    sweep(
        "matrix",
        format!("{count} pairs per n<={max_dim}, entries in [-{bound},{bound}]"),
        (1..=max_dim).collect(),
        |n| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let mut s = GridSummary::default();
            for i in 0..count {
                let mut gen = || {
                    let entries = (0..n * n)
                        .map(|_| BigInt::from(rng.gen_range(-bound..=bound)))
                        .collect();
                    IntMatrix::new(n, entries).expect("square")
                };
                let a = gen();
                let b = gen();
                let status = match check_matrix_bounds(&a, &b) {
                    Ok(v) if v.all_hold() => Status::Holds,
                    Ok(_) => Status::Fails,
                    Err(_) => Status::Undecided,
                };
                s.record(status, || format!("n={n}, sample={i}"));
            }
            s
        },
    )
}

/// Compares a nonnegative exact value against `num / den` where `den` is an
/// enclosure; used for `term <= x^2 / t` style bounds.
pub fn check_le_quotient(
    value: &BigRational,
    num: &BigRational,
    den: &RationalInterval,
    precision_bits: u32,
) -> CertifiedVerdict {
    let rhs = RationalInterval::point(num.clone()).div(den).rounded(precision_bits);
    CertifiedVerdict::decide(
        RationalInterval::point(value.clone()),
        rhs,
        Relation::Le,
        precision_bits,
    )
}

/// `ln N / ln C` exactly, when `N` and `C > 1` are powers of a common integer.
pub fn exact_log_ratio(n: &BigUint, c: &BigUint) -> Option<BigRational> {
    if n.is_one() {
        return Some(BigRational::zero());
    }
    // minimal root of c
    let bits = c.bits() as u32;
    let mut base = c.clone();
    let mut j = 1u32;
    for e in (2..=bits).rev() {
        let r = c.nth_root(e);
        if r.pow(e) == *c {
            base = r;
            j = e;
            break;
        }
    }
    if base <= BigUint::one() {
        return None;
    }
    let mut i = 0u32;
    let mut acc = BigUint::one();
    while &acc < n {
        acc *= &base;
        i += 1;
    }
    (acc == *n).then(|| BigRational::new(i.into(), j.into()))
}

/// Enclosure of `ln N / ln C` for `N >= 1`, `C >= 2`, exact when rational.
pub fn log_ratio(n: &BigUint, c: &BigUint, prec: u32) -> RationalInterval {
    if let Some(r) = exact_log_ratio(n, c) {
        return RationalInterval::point(r);
    }
    let ln_n = interval::ln_rational(&BigRational::from_integer(n.clone().into()), prec + 8);
    let ln_c = interval::ln_rational(&BigRational::from_integer(c.clone().into()), prec + 8);
    ln_n.div(&ln_c).rounded(prec)
}

/// Renders an enclosure to 12 significant digits, refining the enclosure
/// through `f` until both endpoints agree.
pub fn certified_decimal<F>(mut f: F) -> Result<String>
where
    F: FnMut(u32) -> RationalInterval,
{
    let mut prec = 64;
    while prec <= MAX_PRECISION {
        let iv = f(prec);
        if let Some(s) = iv.to_decimal(12) {
            return Ok(s);
        }
        prec *= 2;
    }
    Err(Error::PrecisionExhausted {
        what: "12-digit decimal rendering".into(),
        bits: MAX_PRECISION,
    })
}

/// `value (ln x)^power / (x (ln ln x)^2)` to 12 significant digits, for
/// the growth probes of `j_K` and of the high-`ω` counts.
pub fn loglog_ratio(value: u64, x: u64, power: &BigRational) -> Result<String> {
    if x < 3 {
        return Err(Error::Domain(format!("x must be >= 3, got {x}")));
    }
    let scale = LogPowerThreshold::new(x, power.clone())?;
    if value == 0 {
        return Ok("0".into());
    }
    let v = BigRational::new(value.into(), x.into());
    certified_decimal(|prec| {
        let lnln = interval::ln_rational(&int(x), prec + 16).ln(prec + 16);
        let den = lnln.powi(2, prec + 16);
        scale.enclosure(prec + 16).div(&den).scale(&v).rounded(prec)
    })
}
