//! Reduced-scale oracle differentials behind `--selftest`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::bounds::{self, DEFAULT_PRECISION};
use crate::classcount::{self, ClassData};
use crate::gsum::{self, DecompositionConfig};
use crate::{arith, oracle, quadfield};

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e2s<T>(r: crate::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub(crate) fn run(name: &str) -> Check {
    match name {
        "gsum" => gsum_check(),
        "gsum-table" => gsum_table_check(),
        "verify-lemmas" => lemmas_check(),
        "field-info" => field_check(),
        "pksum" => pk_check(),
        "hnar" => hnar_check(),
        "delta" => delta_check(),
        "jk" => jk_check(),
        "class-number" => class_number_check(),
        other => Err(format!("no self-test for {other}")),
    }
}

fn gsum_check() -> Check {
    for a in [2u64, 3, 5, 7, 10] {
        let prefix = e2s(oracle::g_oracle_prefix(a, 300))?;
        for x in 1..=300 {
            let g = e2s(gsum::g_direct(a, x))?;
            ensure(g == prefix[x as usize], || {
                format!("G_{a}({x}) = {g}, oracle {}", prefix[x as usize])
            })?;
        }
        for x in [10u64, 100, 300] {
            let r = e2s(gsum::decompose(&e2s(DecompositionConfig::new(a, x, rat(2, 1)))?))?;
            r.check_invariants().map_err(|e| format!("a={a}, x={x}: {e}"))?;
            ensure(r.g_exact.0 == prefix[x as usize], || {
                format!("a={a}, x={x}: decomposition total")
            })?;
            ensure(r.iii_bound(DEFAULT_PRECISION).holds(), || {
                format!("a={a}, x={x}: III bound")
            })?;
        }
    }
    Ok(())
}

fn gsum_table_check() -> Check {
    let xs = [1u64, 2, 10, 100, 1000];
    let rows = e2s(gsum::growth_table(2, &rat(3, 2), &xs))?;
    let prefix = e2s(oracle::g_oracle_prefix(2, 1000))?;
    ensure(rows.len() == xs.len(), || "row count".into())?;
    for (row, &x) in rows.iter().zip(&xs) {
        ensure(row.x == x, || format!("row order at {x}"))?;
        ensure(row.g_exact.0 == prefix[x as usize], || {
            format!("G_2({x}) differs from oracle")
        })?;
        ensure(row.report.is_some() == (x >= 3), || format!("report presence at {x}"))?;
    }
    Ok(())
}

fn lemmas_check() -> Check {
    let grids = [
        bounds::lemma1_grid(60, DEFAULT_PRECISION),
        bounds::lemma2_grid(100),
        bounds::lemma3_grid(60, DEFAULT_PRECISION),
        bounds::stirling_grid(40, DEFAULT_PRECISION),
        bounds::matrix_grid(4, 20, 50, 7),
    ];
    for g in &grids {
        ensure(g.all_hold() && g.checked > 0, || format!("{} grid: {:?}", g.name, g))?;
    }
    // the exact binomial identity at its equality case
    let v = e2s(bounds::check_lemma2(8, 2))?;
    ensure(v.holds() && v.lhs == v.rhs, || "C(8,2) equality case".into())
}

fn field_check() -> Check {
    for d in 2u64..60 {
        if (2..8u64).any(|p| d % (p * p) == 0) {
            continue;
        }
        let k = e2s(quadfield::make_field(d))?;
        let ((u, v), norm) = e2s(oracle::unit_oracle(d))?;
        ensure(
            k.eps().u == BigInt::from(u) && k.eps().v == BigInt::from(v) && i128::from(k.eps_norm()) == norm,
            || format!("d={d}: eps = {}, oracle ({u}, {v})", k.eps()),
        )?;
        let verdicts = e2s(quadfield::norm_growth_check(&k, 20))?;
        ensure(verdicts.iter().all(|v| v.holds()), || format!("d={d}: norm growth"))?;
        let direct = e2s(oracle::norm_eps_power_minus_one(d, 20))?;
        for (kk, n) in direct.iter().enumerate() {
            let e = k.pow(k.eps(), kk as u64 + 1);
            let m = quadfield::QuadInt::new(e.u - 1, e.v);
            ensure(k.norm(&m).abs() == n.abs(), || format!("d={d}: N(eps^{} - 1)", kk + 1))?;
        }
    }
    Ok(())
}

fn pk_oracle_prefix(d: u64, x: u64) -> Result<Vec<(u64, BigRational)>, String> {
    let mut out: Vec<(u64, BigRational)> = Vec::new();
    let mut acc = BigRational::zero();
    for (n, phi, idx, _) in e2s(oracle::ideal_table_oracle(d, x))? {
        acc += rat(phi as i64, idx as i64);
        match out.last_mut() {
            Some(last) if last.0 == n => last.1 = acc.clone(),
            _ => out.push((n, acc.clone())),
        }
    }
    Ok(out)
}

fn pk_check() -> Check {
    for d in [2u64, 5] {
        let k = e2s(quadfield::make_field(d))?;
        let fast = e2s(classcount::pk_prefix(&k, 300))?;
        let slow = pk_oracle_prefix(d, 300)?;
        ensure(fast == slow, || format!("d={d}: P_K prefix differs from oracle"))?;
        let r = e2s(classcount::pk_decompose(&k, 300, &rat(2, 1)))?;
        r.check_invariants().map_err(|e| format!("d={d}: {e}"))?;
    }
    let k = e2s(quadfield::make_field(2))?;
    let v = e2s(classcount::pk_direct(&k, 10))?;
    ensure(v == e2s(oracle::pk_oracle(2, 10))?, || format!("P(√2, 10) = {v}"))
}

fn hnar_check() -> Check {
    for n in 1..=200u64 {
        let h = e2s(classcount::hnar_rational(n))?;
        ensure(h == arith::euler_phi(n), || format!("h^nar({n}) = {h}"))?;
    }
    for d in [2u64, 3, 5] {
        let k = e2s(quadfield::make_field(d))?;
        let cd = e2s(classcount::narrow_class_number(&k))?;
        let rows = e2s(classcount::ideal_table(&k, 300))?;
        let slow = e2s(oracle::ideal_table_oracle(d, 300))?;
        ensure(rows.len() == slow.len(), || format!("d={d}: ideal count"))?;
        for (r, &(n, phi, idx, nidx)) in rows.iter().zip(&slow) {
            ensure(
                (r.ideal.norm(), r.phi, r.units.index, r.units.narrow_index) == (n, phi, idx, nidx),
                || format!("d={d}: data of {}", r.ideal),
            )?;
        }
        e2s(classcount::hnar_sum_rows(&rows, &cd))?;
    }
    Ok(())
}

fn delta_check() -> Check {
    let counts = oracle::characters_by_conductor(100);
    let mut acc = 0u64;
    for x in 1..=100u64 {
        acc += counts[x as usize].get(&x).copied().unwrap_or(0);
        let fast = e2s(classcount::delta_rationals(x))?;
        ensure(fast == acc, || format!("delta({x}) = {fast}, oracle {acc}"))?;
    }
    for d in [2u64, 5] {
        let k = e2s(quadfield::make_field(d))?;
        let cd = e2s(classcount::narrow_class_number(&k))?;
        let delta = e2s(classcount::delta_quadratic(&k, 100, &cd))?;
        let total = e2s(classcount::hnar_sum(&k, 100, &cd))?;
        ensure(delta <= total, || format!("d={d}: delta {delta} > {total}"))?;
    }
    let rows = (1..=100)
        .map(|n| e2s(classcount::hnar_rational(n)))
        .sum::<Result<u64, _>>()?;
    ensure(rows == (1..=100).map(arith::euler_phi).sum::<u64>(), || {
        "rational h^nar sum".into()
    })
}

fn jk_check() -> Check {
    let beta = rat(1, 2);
    for d in [2u64, 5] {
        let k = e2s(quadfield::make_field(d))?;
        let ideals = e2s(quadfield::ideals_up_to(&k, 200))?;
        ensure(ideals.len() == e2s(oracle::ideal_count_oracle(d, 200))?, || {
            format!("d={d}: ideal count")
        })?;
        let threshold = e2s(bounds::LogPowerThreshold::new(200, beta.clone()))?;
        let cut = e2s(threshold.ceil())?;
        let (mut jk, mut high) = (0u64, 0u64);
        for i in &ideals {
            let w = u64::from(e2s(quadfield::ideal_stats(&k, i))?.omega);
            jk += w * w;
            high += u64::from(w >= cut);
        }
        ensure(e2s(quadfield::jk_sum(&k, 200))? == jk, || format!("d={d}: j_K"))?;
        ensure(e2s(quadfield::count_high_omega_ideals(&k, 200, &beta))? == high, || {
            format!("d={d}: high-omega count")
        })?;
    }
    let cut = e2s(e2s(bounds::LogPowerThreshold::new(1000, beta.clone()))?.ceil())?;
    let brute = (1..=1000u64)
        .filter(|&n| u64::from(arith::mu_omega_tau(n).1) >= cut)
        .count() as u64;
    ensure(e2s(bounds::count_high_omega(1000, &beta))? == brute, || {
        "integer high-omega count".into()
    })
}

fn class_number_check() -> Check {
    for &(d, h) in &oracle::KNOWN_CLASS_NUMBERS {
        let k = e2s(quadfield::make_field(d))?;
        let cd = e2s(classcount::narrow_class_number(&k))?;
        ensure(cd.h == h, || format!("h(Q(√{d})) = {}, expected {h}", cd.h))?;
        ensure(cd == e2s(ClassData::supplied(&k, h))?, || format!("d={d}: h^+"))?;
    }
    Ok(())
}
