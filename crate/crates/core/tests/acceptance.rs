//! The ten acceptance criteria, one PASS/FAIL line each. Exits nonzero if
//! any criterion fails.

use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use ordsum::bounds::{self, GridSummary, IntMatrix, DEFAULT_PRECISION};
use ordsum::classcount;
use ordsum::gsum::{self, DecompositionConfig};
use ordsum::oracle;
use ordsum::quadfield;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ok<T>(r: ordsum::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t <= limit, || {
        format!("runtime {:.1}s exceeds {}s", t.as_secs_f64(), limit.as_secs())
    })
}

fn grid_ok(g: &GridSummary) -> Result<(), String> {
    ensure(g.checked > 0 && g.fails == 0 && g.undecided == 0, || {
        format!(
            "{}: {} fails, {} undecided, first at {}",
            g.name,
            g.fails,
            g.undecided,
            g.first_exception.as_deref().unwrap_or("-")
        )
    })
}

fn c1_g_oracle() -> Outcome {
    let start = Instant::now();
    for a in [2u64, 3, 5, 7, 10] {
        let prefix = ok(oracle::g_oracle_prefix(a, 2000))?;
        for x in 1..=2000u64 {
            let g = ok(gsum::g_direct(a, x))?;
            ensure(g == prefix[x as usize], || {
                format!("a={a}, x={x}: {g} vs oracle {}", prefix[x as usize])
            })?;
        }
        for x in [10_000u64, 100_000] {
            let g = ok(gsum::g_direct(a, x))?;
            ensure(g == ok(oracle::g_oracle(a, x))?, || format!("a={a}, x={x}: mismatch"))?;
        }
    }
    within(start, Duration::from_secs(120))?;
    Ok("5 bases, every x <= 2000 plus x = 1e4, 1e5".into())
}

fn c2_lemma_grids() -> Outcome {
    let start = Instant::now();
    let grids = [
        bounds::lemma1_grid(2000, DEFAULT_PRECISION),
        bounds::lemma2_grid(2000),
        bounds::lemma3_grid(500, DEFAULT_PRECISION),
        bounds::stirling_grid(300, DEFAULT_PRECISION),
    ];
    for g in &grids {
        grid_ok(g)?;
    }
    within(start, Duration::from_secs(300))?;
    let counts: Vec<String> = grids.iter().map(|g| format!("{} {}", g.name, g.checked)).collect();
    Ok(counts.join(", "))
}

fn c3_matrices() -> Outcome {
    let g = bounds::matrix_grid(8, 200, 50, 2024);
    grid_ok(&g)?;
    ensure(g.checked == 1600, || format!("checked {} pairs", g.checked))?;
    // the zero matrix is the equality case
    let z = IntMatrix::zero(3);
    ensure(ok(bounds::check_matrix_bounds(&z, &z))?.all_hold(), || {
        "zero matrix".into()
    })?;
    Ok("1600 seeded pairs, n = 1..8".into())
}

fn c4_norm_growth() -> Outcome {
    for d in [2u64, 3, 5, 6, 7, 10] {
        let k = ok(quadfield::make_field(d))?;
        let v = ok(quadfield::norm_growth_check(&k, 60))?;
        ensure(v.len() == 60 && v.iter().all(|v| v.holds() && v.lhs.is_point()), || {
            format!("d={d}")
        })?;
    }
    Ok("d in {2,3,5,6,7,10}, k <= 60, exact".into())
}

fn c5_order_bounds() -> Outcome {
    let mut n = 0;
    for d in [2u64, 5] {
        let k = ok(quadfield::make_field(d))?;
        let checks = ok(quadfield::order_lower_bound_check(&k, 2000))?;
        ensure(checks.len() == ok(oracle::ideal_count_oracle(d, 2000))?, || {
            format!("d={d}: ideal count")
        })?;
        for c in &checks {
            ensure(c.order_ok.holds() && c.index_ok.holds(), || {
                format!("d={d}, I={}", c.ideal)
            })?;
        }
        n += checks.len();
    }
    Ok(format!("{n} ideals"))
}

fn c6_pk_oracle() -> Outcome {
    let start = Instant::now();
    for d in [2u64, 5] {
        let k = ok(quadfield::make_field(d))?;
        let fast = ok(classcount::pk_prefix(&k, 2000))?;
        let mut slow: Vec<(u64, BigRational)> = Vec::new();
        let mut acc = BigRational::zero();
        for (n, phi, idx, _) in ok(oracle::ideal_table_oracle(d, 2000))? {
            acc += rat(phi as i64, idx as i64);
            match slow.last_mut() {
                Some(last) if last.0 == n => last.1 = acc.clone(),
                _ => slow.push((n, acc.clone())),
            }
        }
        ensure(fast.len() == slow.len(), || format!("d={d}: norm sets differ"))?;
        for (f, s) in fast.iter().zip(&slow) {
            ensure(f == s, || format!("d={d}: P_K({}) = {} vs oracle {}", f.0, f.1, s.1))?;
        }
        ensure(
            fast.last().map(|p| &p.1) == Some(&ok(classcount::pk_direct(&k, 2000))?),
            || format!("d={d}: pk_direct(2000)"),
        )?;
    }
    let k = ok(quadfield::make_field(2))?;
    let v = ok(classcount::pk_direct(&k, 10))?;
    let o = ok(oracle::pk_oracle(2, 10))?;
    ensure(v == o && v == rat(7, 1), || format!("P(√2, 10) = {v}, oracle {o}"))?;
    within(start, Duration::from_secs(180))?;
    Ok("d in {2,5}, every norm <= 2000; P(Q(√2), 10) = 7".into())
}

fn c7_decomposition() -> Outcome {
    let alphas = [rat(3, 2), rat(2, 1), rat(5, 2)];
    let xs = [1_000u64, 10_000, 100_000];
    let mut n = 0;
    for a in [2u64, 3] {
        for &x in &xs {
            for alpha in &alphas {
                let r = ok(gsum::decompose(&ok(DecompositionConfig::new(a, x, alpha.clone()))?))?;
                r.check_invariants()
                    .map_err(|e| format!("a={a}, x={x}, α={alpha}: {e}"))?;
                ensure(r.iii_bound(DEFAULT_PRECISION).holds(), || {
                    format!("a={a}, x={x}, α={alpha}: III")
                })?;
                n += 1;
            }
        }
    }
    for d in [2u64, 5] {
        let k = ok(quadfield::make_field(d))?;
        let rows = ok(classcount::ideal_table(&k, 100_000))?;
        for &x in &xs {
            for alpha in &alphas {
                let beta = (alpha - rat(1, 1)) / rat(2, 1);
                let r = ok(classcount::pk_decompose_rows(&k, x, alpha, &beta, &rows))?;
                r.check_invariants()
                    .map_err(|e| format!("d={d}, x={x}, α={alpha}: {e}"))?;
                ensure(r.iii_bound(DEFAULT_PRECISION).holds(), || {
                    format!("d={d}, x={x}, α={alpha}: III")
                })?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} reports"))
}

fn c8_characters() -> Outcome {
    let counts = oracle::characters_by_conductor(500);
    let mut acc = 0u64;
    for x in 1..=500u64 {
        acc += counts[x as usize].get(&x).copied().unwrap_or(0);
        let fast = ok(classcount::delta_rationals(x))?;
        ensure(fast == acc, || format!("x={x}: {fast} vs brute force {acc}"))?;
    }
    let brute = oracle::delta_rationals_oracle(10);
    ensure(brute == 17 && ok(classcount::delta_rationals(10))? == 17, || {
        format!("delta(10): brute {brute}")
    })?;
    Ok(format!("every x <= 500; delta(500) = {acc}"))
}

fn c9_hnar() -> Outcome {
    for d in [2u64, 3, 5] {
        let k = ok(quadfield::make_field(d))?;
        let cd = ok(classcount::narrow_class_number(&k))?;
        let rows = ok(classcount::ideal_table(&k, 2000))?;
        // integrality is checked per ideal
        ok(classcount::hnar_sum_rows(&rows, &cd))?;
        for x in 1..=500u64 {
            let delta = ok(classcount::delta_quadratic(&k, x, &cd))?;
            let end = rows.partition_point(|r| r.ideal.norm() <= x);
            let total = ok(classcount::hnar_sum_rows(&rows[..end], &cd))?;
            ensure(delta <= total, || format!("d={d}, x={x}: {delta} > {total}"))?;
        }
    }
    Ok("d in {2,3,5}: integral up to norm 2000, dominance for x <= 500".into())
}

/// Maximum at the smallest x, or max <= 2 min.
fn bounded_trend(values: &[f64]) -> bool {
    let max = values.iter().cloned().fold(f64::MIN, f64::max);
    let min = values.iter().cloned().fold(f64::MAX, f64::min);
    values[0] == max || max <= 2.0 * min
}

fn c10_ratio_probes() -> Outcome {
    let k = ok(quadfield::make_field(2))?;
    let beta = rat(1, 2);
    let two_beta = &beta * BigRational::from_integer(BigInt::from(2));
    let (mut jk, mut high) = (Vec::new(), Vec::new());
    let mut shown = Vec::new();
    for x in [1_000u64, 10_000, 100_000, 1_000_000] {
        let j = ok(bounds::loglog_ratio(
            ok(quadfield::jk_sum(&k, x))?,
            x,
            &BigRational::zero(),
        ))?;
        let h = ok(bounds::loglog_ratio(
            ok(bounds::count_high_omega(x, &beta))?,
            x,
            &two_beta,
        ))?;
        shown.push(format!("x={x}: j {j}, D {h}"));
        jk.push(j.parse::<f64>().map_err(|e| e.to_string())?);
        high.push(h.parse::<f64>().map_err(|e| e.to_string())?);
    }
    let detail = shown.join("; ");
    ensure(jk.iter().chain(&high).all(|v| v.is_finite()), || detail.clone())?;
    ensure(bounded_trend(&jk) && bounded_trend(&high), || detail.clone())?;
    Ok(detail)
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("G oracle equivalence", c1_g_oracle),
        ("lemma grids", c2_lemma_grids),
        ("matrix bounds", c3_matrices),
        ("norm growth", c4_norm_growth),
        ("order lower bounds", c5_order_bounds),
        ("P_K oracle equivalence", c6_pk_oracle),
        ("decomposition invariants", c7_decomposition),
        ("character counts", c8_characters),
        ("h^nar integrality and dominance", c9_hnar),
        ("bounded-ratio probes", c10_ratio_probes),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({detail}) [{secs:.1}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} [{secs:.1}s]", i + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
