//! The `ordsum` command line.
//!
//! Exit codes: 0 on success, 1 when a checked inequality does not hold (or
//! cannot be certified) or a computation gives up, 2 on usage errors.

pub mod output;
mod selftest;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::bounds::{self, GridSummary, RationalInterval, DEFAULT_PRECISION, MAX_PRECISION};
use crate::classcount::{self, ClassData};
use crate::error::Error;
use crate::exact::{self, Exact};
use crate::gsum::{self, DecompositionConfig, DecompositionReport};
use crate::quadfield::{self, OmegaKind, QuadField};
use output::{Cell, Column, Format, Table};

/// Exact order-index sums, narrow ray class numbers and certified lemma checks.
#[derive(Debug, Parser)]
#[command(name = "ordsum", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write output to this file instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
    /// Append a 12-digit `<col>_dec` column for every exact column (CSV only).
    #[arg(long)]
    pub decimals: bool,
    /// Run the oracle-differential self-test at reduced scale instead.
    #[arg(long)]
    pub selftest: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// G(x) and its three-part decomposition.
    Gsum {
        /// Base, a >= 2.
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..), required_unless_present = "selftest")]
        a: Option<u64>,
        /// Cutoff, x >= 3.
        #[arg(long, value_parser = clap::value_parser!(u64).range(3..), required_unless_present = "selftest")]
        x: Option<u64>,
        /// Exponent of t = (ln x)^alpha, 1 < alpha < 3 (e.g. 2, 3/2, 2.5).
        #[arg(long, value_parser = parse_alpha, required_unless_present = "selftest")]
        alpha: Option<BigRational>,
        /// Exponent of the ω cut, >= 0; defaults to (alpha - 1)/2.
        #[arg(long, value_parser = parse_beta)]
        beta: Option<BigRational>,
        #[command(flatten)]
        common: Common,
    },
    /// G(x), its decomposition and G(x)(ln x)^alpha/x^2 over ascending x.
    GsumTable {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..), required_unless_present = "selftest")]
        a: Option<u64>,
        #[arg(long, value_parser = parse_alpha, required_unless_present = "selftest")]
        alpha: Option<BigRational>,
        /// Comma-separated, strictly ascending cutoffs >= 1.
        #[arg(long, value_delimiter = ',', value_parser = clap::value_parser!(u64).range(1..), required_unless_present = "selftest")]
        xs: Vec<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Exhaustive certified sweeps of the lemma inequalities.
    VerifyLemmas {
        /// Largest k for the binomial-ratio and partial-sum grids.
        #[arg(long, default_value_t = 500, value_parser = clap::value_parser!(u64).range(2..=100_000))]
        kmax: u64,
        /// Largest x for the entropy grid.
        #[arg(long, default_value_t = 2000, value_parser = clap::value_parser!(u64).range(4..=1_000_000))]
        xmax: u64,
        /// Largest n for the Stirling grid.
        #[arg(long, default_value_t = 300, value_parser = clap::value_parser!(u64).range(2..=100_000))]
        nmax: u64,
        /// Random matrices per dimension 1..=8.
        #[arg(long, default_value_t = 200)]
        matrices: usize,
        /// Seed for the random matrices.
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        /// Starting precision in bits (refined up to 4096 where needed).
        #[arg(long, default_value_t = DEFAULT_PRECISION, value_parser = clap::value_parser!(u32).range(32..=MAX_PRECISION as i64))]
        precision_bits: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Fundamental unit, growth constant, class numbers and the norm-growth check.
    FieldInfo {
        /// Squarefree d >= 2 defining Q(√d).
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..), required_unless_present = "selftest")]
        d: Option<u64>,
        /// Check |N(eps^k - 1)| <= C^k for k <= kmax.
        #[arg(long, default_value_t = 60, value_parser = clap::value_parser!(u32).range(1..=10_000))]
        kmax: u32,
        #[command(flatten)]
        common: Common,
    },
    /// P_K(x) and its decomposition by the order of eps.
    Pksum {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..), required_unless_present = "selftest")]
        d: Option<u64>,
        #[arg(long, value_parser = clap::value_parser!(u64).range(3..), required_unless_present = "selftest")]
        x: Option<u64>,
        #[arg(long, value_parser = parse_alpha, required_unless_present = "selftest")]
        alpha: Option<BigRational>,
        #[arg(long, value_parser = parse_beta)]
        beta: Option<BigRational>,
        #[command(flatten)]
        common: Common,
    },
    /// Narrow ray class numbers h^nar(I) for every ideal of norm <= x.
    Hnar {
        /// Field Q(√d); omit for the rationals.
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        d: Option<u64>,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..), required_unless_present = "selftest")]
        x: Option<u64>,
        /// Class number h(K) to use instead of computing it.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        h: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Number of primitive ray class characters of conductor norm <= x.
    Delta {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        d: Option<u64>,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..), required_unless_present = "selftest")]
        x: Option<u64>,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        h: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// j_K(x) = Σ ω(I)^2 and the count of ideals with many prime factors.
    Jk {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..), required_unless_present = "selftest")]
        d: Option<u64>,
        #[arg(long, value_parser = clap::value_parser!(u64).range(3..), required_unless_present = "selftest")]
        x: Option<u64>,
        /// Exponent of the ω threshold (ln x)^beta.
        #[arg(long, value_parser = parse_beta, default_value = "1/2")]
        beta: BigRational,
        #[command(flatten)]
        common: Common,
    },
    /// Class number h and narrow class number h^+ of Q(√d).
    ClassNumber {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..), required_unless_present = "selftest")]
        d: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Gsum { common, .. }
            | Command::GsumTable { common, .. }
            | Command::VerifyLemmas { common, .. }
            | Command::FieldInfo { common, .. }
            | Command::Pksum { common, .. }
            | Command::Hnar { common, .. }
            | Command::Delta { common, .. }
            | Command::Jk { common, .. }
            | Command::ClassNumber { common, .. } => common,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Command::Gsum { .. } => "gsum",
            Command::GsumTable { .. } => "gsum-table",
            Command::VerifyLemmas { .. } => "verify-lemmas",
            Command::FieldInfo { .. } => "field-info",
            Command::Pksum { .. } => "pksum",
            Command::Hnar { .. } => "hnar",
            Command::Delta { .. } => "delta",
            Command::Jk { .. } => "jk",
            Command::ClassNumber { .. } => "class-number",
        }
    }
}

fn parse_rational_arg(s: &str) -> Result<BigRational, String> {
    exact::parse_rational(s).map_err(|e| e.to_string())
}

fn parse_alpha(s: &str) -> Result<BigRational, String> {
    let v = parse_rational_arg(s)?;
    if v <= BigRational::one() || v >= BigRational::from_integer(3.into()) {
        return Err(format!("{s} is not in the open range (1, 3)"));
    }
    Ok(v)
}

fn parse_beta(s: &str) -> Result<BigRational, String> {
    let v = parse_rational_arg(s)?;
    if v < BigRational::zero() {
        return Err(format!("{s} is not >= 0"));
    }
    Ok(v)
}

/// What a subcommand produced.
struct Outcome {
    text: String,
    /// False when some checked inequality failed or stayed undecided.
    all_hold: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, all_hold: true }
    }
}

/// Parses `argv` (program name first), runs the subcommand and returns the
/// process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return 2;
    }
    let command = cli.command;
    let common = command.common();
    if common.selftest {
        return match selftest::run(command.name()) {
            Ok(()) => {
                println!("selftest {}: ok", command.name());
                0
            }
            Err(msg) => {
                eprintln!("selftest {}: FAILED: {msg}", command.name());
                1
            }
        };
    }
    match dispatch(&command) {
        Ok(outcome) => {
            if let Err(e) = output::emit(&outcome.text, common.output.as_deref()) {
                eprintln!("error: {e}");
                return 1;
            }
            if outcome.all_hold {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Domain(_) | Error::Range(_) => 2,
                _ => 1,
            }
        }
    }
}

fn configure_threads() -> Result<(), String> {
    let Some(raw) = std::env::var_os("ORDSUM_THREADS") else {
        return Ok(());
    };
    let n = raw
        .to_str()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("ORDSUM_THREADS must be a positive integer, got {raw:?}"))?;
    // a second call in the same process finds the pool already built
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn dispatch(command: &Command) -> crate::Result<Outcome> {
    let common = command.common();
    let fmt = common.format;
    let dec = common.decimals;
    match command {
        Command::Gsum { a, x, alpha, beta, .. } => {
            let (a, x, alpha) = (a.unwrap(), x.unwrap(), alpha.clone().unwrap());
            let cfg = match beta {
                Some(b) => DecompositionConfig::with_beta(a, x, alpha, b.clone())?,
                None => DecompositionConfig::new(a, x, alpha)?,
            };
            let r = gsum::decompose(&cfg)?;
            let holds = report_holds(r.check_invariants(), &r.iii_bound(DEFAULT_PRECISION))?;
            let text = match fmt {
                Format::Json => output::json(&r),
                Format::Csv => {
                    let mut t = Table::new(&report_columns("g_exact", false));
                    t.push(report_cells(&ReportView::from(&r), None));
                    t.to_csv(dec)
                }
            };
            Ok(Outcome { text, all_hold: holds })
        }
        Command::GsumTable { a, alpha, xs, .. } => {
            let rows = gsum::growth_table(a.unwrap(), alpha.as_ref().unwrap(), xs)?;
            let mut holds = true;
            for r in rows.iter().filter_map(|r| r.report.as_ref()) {
                holds &= report_holds(r.check_invariants(), &r.iii_bound(DEFAULT_PRECISION))?;
            }
            let text = match fmt {
                Format::Json => output::json(&rows),
                Format::Csv => {
                    let mut t = Table::new(&report_columns("g_exact", true));
                    for row in &rows {
                        let cells = match &row.report {
                            Some(r) => report_cells(&ReportView::from(r), Some(&row.ratio)),
                            None => {
                                let mut c = vec![Cell::from(row.x), Cell::Exact(row.g_exact.0.clone())];
                                c.extend((2..17).map(|_| Cell::Blank));
                                c.push(row.ratio.clone().into());
                                c
                            }
                        };
                        t.push(cells);
                    }
                    t.to_csv(dec)
                }
            };
            Ok(Outcome { text, all_hold: holds })
        }
        Command::VerifyLemmas {
            kmax,
            xmax,
            nmax,
            matrices,
            seed,
            precision_bits,
            ..
        } => {
            let grids = vec![
                bounds::lemma1_grid(*xmax, *precision_bits),
                bounds::lemma2_grid(*kmax),
                bounds::lemma3_grid(*kmax, *precision_bits),
                bounds::stirling_grid(*nmax, *precision_bits),
                bounds::matrix_grid(8, *matrices, 50, *seed),
            ];
            let all_hold = grids.iter().all(GridSummary::all_hold);
            Ok(Outcome {
                text: render_grids(&grids, fmt),
                all_hold,
            })
        }
        Command::FieldInfo { d, kmax, .. } => {
            let field = quadfield::make_field(d.unwrap())?;
            let info = FieldInfo::compute(&field, *kmax)?;
            let all_hold = info.norm_growth.all_hold();
            let text = match fmt {
                Format::Json => output::json(&info),
                Format::Csv => {
                    let mut t = Table::new(&[
                        ("d", false),
                        ("disc", false),
                        ("omega", false),
                        ("eps", false),
                        ("eps_norm", false),
                        ("growth_C", false),
                        ("h", false),
                        ("h_plus", false),
                        ("norm_growth_kmax", false),
                        ("norm_growth_holds", false),
                        ("norm_growth_fails", false),
                        ("norm_growth_undecided", false),
                    ]);
                    let opt = |v: Option<u64>| v.map_or(Cell::Blank, Cell::from);
                    t.push(vec![
                        info.d.into(),
                        info.disc.into(),
                        info.omega.clone().into(),
                        info.eps.clone().into(),
                        info.eps_norm.to_string().into(),
                        info.growth_c.clone().into(),
                        opt(info.class_data.map(|c| c.h)),
                        opt(info.class_data.map(|c| c.h_plus)),
                        u64::from(*kmax).into(),
                        info.norm_growth.holds.into(),
                        info.norm_growth.fails.into(),
                        info.norm_growth.undecided.into(),
                    ]);
                    t.to_csv(dec)
                }
            };
            Ok(Outcome { text, all_hold })
        }
        Command::Pksum { d, x, alpha, beta, .. } => {
            let field = quadfield::make_field(d.unwrap())?;
            let (x, alpha) = (x.unwrap(), alpha.as_ref().unwrap());
            let r = match beta {
                Some(b) => classcount::pk_decompose_with_beta(&field, x, alpha, b)?,
                None => classcount::pk_decompose(&field, x, alpha)?,
            };
            let holds = report_holds(r.check_invariants(), &r.iii_bound(DEFAULT_PRECISION))?;
            let text = match fmt {
                Format::Json => output::json(&r),
                Format::Csv => {
                    let mut t = Table::new(&report_columns("pk_exact", false));
                    t.push(report_cells(&ReportView::from(&r), None));
                    t.to_csv(dec)
                }
            };
            Ok(Outcome { text, all_hold: holds })
        }
        Command::Hnar { d, x, h, .. } => {
            let x = x.unwrap();
            match d {
                None => hnar_rationals(x, fmt, dec),
                Some(d) => {
                    let field = quadfield::make_field(*d)?;
                    let cd = class_data(&field, *h)?;
                    hnar_field(&field, x, &cd, fmt, dec)
                }
            }
        }
        Command::Delta { d, x, h, .. } => {
            let x = x.unwrap();
            let (name, delta, total) = match d {
                None => {
                    let total = (1..=x).map(crate::arith::euler_phi).sum::<u64>();
                    ("Q".to_string(), classcount::delta_rationals(x)?, total)
                }
                Some(d) => {
                    let field = quadfield::make_field(*d)?;
                    let cd = class_data(&field, *h)?;
                    (
                        field_name(&field),
                        classcount::delta_quadratic(&field, x, &cd)?,
                        classcount::hnar_sum(&field, x, &cd)?,
                    )
                }
            };
            let report = DeltaReport {
                field: name,
                x,
                delta,
                hnar_sum: total,
            };
            let text = match fmt {
                Format::Json => output::json(&report),
                Format::Csv => {
                    let mut t = Table::new(&[("field", false), ("x", false), ("delta", false), ("hnar_sum", false)]);
                    t.push(vec![report.field.clone().into(), x.into(), delta.into(), total.into()]);
                    t.to_csv(dec)
                }
            };
            Ok(Outcome::ok(text))
        }
        Command::Jk { d, x, beta, .. } => {
            let field = quadfield::make_field(d.unwrap())?;
            let report = JkReport::compute(&field, x.unwrap(), beta)?;
            let text = match fmt {
                Format::Json => output::json(&report),
                Format::Csv => {
                    let mut t = Table::new(&[
                        ("d", false),
                        ("x", false),
                        ("jk_sum", false),
                        ("jk_ratio", false),
                        ("beta", true),
                        ("high_omega", false),
                        ("high_omega_ratio", false),
                    ]);
                    t.push(vec![
                        report.d.into(),
                        report.x.into(),
                        report.jk_sum.into(),
                        report.jk_ratio.clone().into(),
                        Cell::Exact(beta.clone()),
                        report.high_omega.into(),
                        report.high_omega_ratio.clone().into(),
                    ]);
                    t.to_csv(dec)
                }
            };
            Ok(Outcome::ok(text))
        }
        Command::ClassNumber { d, .. } => {
            let field = quadfield::make_field(d.unwrap())?;
            let cd = classcount::narrow_class_number(&field)?;
            let report = ClassNumberReport {
                d: field.d(),
                disc: field.disc(),
                eps_norm: field.eps_norm(),
                h: cd.h,
                h_plus: cd.h_plus,
            };
            let text = match fmt {
                Format::Json => output::json(&report),
                Format::Csv => {
                    let mut t = Table::new(&[
                        ("d", false),
                        ("disc", false),
                        ("eps_norm", false),
                        ("h", false),
                        ("h_plus", false),
                    ]);
                    t.push(vec![
                        report.d.into(),
                        report.disc.into(),
                        report.eps_norm.to_string().into(),
                        report.h.into(),
                        report.h_plus.into(),
                    ]);
                    t.to_csv(dec)
                }
            };
            Ok(Outcome::ok(text))
        }
    }
}

/// Invariant violations are bugs, not verdicts; a non-holding III bound is a verdict.
fn report_holds(invariants: Result<(), String>, iii: &bounds::CertifiedVerdict) -> crate::Result<bool> {
    invariants.map_err(Error::Invariant)?;
    Ok(iii.holds())
}

/// The shared shape of the G and P_K decomposition reports.
struct ReportView<'a> {
    x: u64,
    total: &'a Exact,
    terms: [&'a Exact; 5],
    ell: &'a RationalInterval,
    t: &'a RationalInterval,
    cards: [u64; 6],
}

impl<'a> From<&'a DecompositionReport> for ReportView<'a> {
    fn from(r: &'a DecompositionReport) -> Self {
        ReportView {
            x: r.x,
            total: &r.g_exact,
            terms: [&r.term_i, &r.term_ii, &r.term_ii1, &r.term_ii2, &r.term_iii],
            ell: &r.ell,
            t: &r.t,
            cards: [r.card_s, r.card_i, r.card_ii, r.card_iii, r.card_h, r.card_j],
        }
    }
}

impl<'a> From<&'a classcount::PkReport> for ReportView<'a> {
    fn from(r: &'a classcount::PkReport) -> Self {
        ReportView {
            x: r.x,
            total: &r.pk_exact,
            terms: [&r.term_i, &r.term_ii, &r.term_ii1, &r.term_ii2, &r.term_iii],
            ell: &r.ell,
            t: &r.t,
            cards: [r.card_s, r.card_i, r.card_ii, r.card_iii, r.card_h, r.card_j],
        }
    }
}

fn report_columns(total: &'static str, ratio: bool) -> Vec<Column> {
    let mut cols = vec![
        ("x", false),
        (total, true),
        ("term_I", true),
        ("term_II", true),
        ("term_II1", true),
        ("term_II2", true),
        ("term_III", true),
        ("ell_lo", false),
        ("ell_hi", false),
        ("t_lo", false),
        ("t_hi", false),
        ("card_S", false),
        ("card_I", false),
        ("card_II", false),
        ("card_III", false),
        ("card_H", false),
        ("card_J", false),
    ];
    if ratio {
        cols.push(("ratio", false));
    }
    cols
}

fn report_cells(r: &ReportView<'_>, ratio: Option<&String>) -> Vec<Cell> {
    let mut cells = vec![Cell::from(r.x), Cell::Exact(r.total.0.clone())];
    cells.extend(r.terms.iter().map(|e| Cell::Exact(e.0.clone())));
    cells.extend(output::interval_cells(r.ell).into_iter().map(Cell::Text));
    cells.extend(output::interval_cells(r.t).into_iter().map(Cell::Text));
    cells.extend(r.cards.iter().map(|&c| Cell::from(c)));
    if let Some(s) = ratio {
        cells.push(s.clone().into());
    }
    cells
}

fn render_grids(grids: &[GridSummary], fmt: Format) -> String {
    match fmt {
        Format::Json => output::json(&grids),
        Format::Csv => {
            let mut t = Table::new(&[
                ("grid", false),
                ("range", false),
                ("checked", false),
                ("holds", false),
                ("fails", false),
                ("undecided", false),
                ("first_exception", false),
            ]);
            for g in grids {
                t.push(vec![
                    g.name.clone().into(),
                    g.range.clone().into(),
                    g.checked.into(),
                    g.holds.into(),
                    g.fails.into(),
                    g.undecided.into(),
                    g.first_exception.clone().unwrap_or_default().into(),
                ]);
            }
            t.to_csv(false)
        }
    }
}

fn field_name(field: &QuadField) -> String {
    format!("Q(sqrt({}))", field.d())
}

fn class_data(field: &QuadField, h: Option<u64>) -> crate::Result<ClassData> {
    match h {
        Some(h) => ClassData::supplied(field, h),
        None => classcount::narrow_class_number(field),
    }
}

/// Summary of the norm-growth check.
#[derive(Debug, Clone, Serialize)]
struct GrowthSummary {
    kmax: u32,
    holds: u64,
    fails: u64,
    undecided: u64,
}

impl GrowthSummary {
    fn all_hold(&self) -> bool {
        self.fails == 0 && self.undecided == 0
    }
}

#[derive(Debug, Clone, Serialize)]
struct FieldInfo {
    d: u64,
    disc: u64,
    omega: String,
    eps: String,
    eps_norm: i8,
    growth_c: String,
    class_data: Option<ClassData>,
    norm_growth: GrowthSummary,
}

impl FieldInfo {
    fn compute(field: &QuadField, kmax: u32) -> crate::Result<Self> {
        let verdicts = quadfield::norm_growth_check(field, kmax)?;
        let mut g = GrowthSummary {
            kmax,
            holds: 0,
            fails: 0,
            undecided: 0,
        };
        for v in &verdicts {
            match v.status {
                bounds::Status::Holds => g.holds += 1,
                bounds::Status::Fails => g.fails += 1,
                bounds::Status::Undecided => g.undecided += 1,
            }
        }
        // class numbers are optional here: huge discriminants exceed the form budget
        let class_data = match classcount::narrow_class_number(field) {
            Ok(cd) => Some(cd),
            Err(Error::WorkBudget { .. }) => None,
            Err(e) => return Err(e),
        };
        Ok(FieldInfo {
            d: field.d(),
            disc: field.disc(),
            omega: match field.omega_kind() {
                OmegaKind::Sqrt => format!("sqrt({})", field.d()),
                OmegaKind::HalfOnePlusSqrt => format!("(1+sqrt({}))/2", field.d()),
            },
            eps: field.eps().to_string(),
            eps_norm: field.eps_norm(),
            growth_c: field.growth_c().to_string(),
            class_data,
            norm_growth: g,
        })
    }
}

#[derive(Debug, Clone, Serialize)]
struct HnarIdealRow {
    a: u64,
    b: u64,
    c: u64,
    norm: u64,
    phi: u64,
    unit_index: u64,
    narrow_unit_index: u64,
    hnar: u64,
}

#[derive(Debug, Clone, Serialize)]
struct HnarReport<R> {
    field: String,
    x: u64,
    class_data: ClassData,
    rows: Vec<R>,
    hnar_sum: u64,
}

#[derive(Debug, Clone, Serialize)]
struct HnarIntRow {
    n: u64,
    phi: u64,
    hnar: u64,
}

fn hnar_rationals(x: u64, fmt: Format, dec: bool) -> crate::Result<Outcome> {
    let rows = (1..=x)
        .map(|n| {
            Ok(HnarIntRow {
                n,
                phi: crate::arith::euler_phi(n),
                hnar: classcount::hnar_rational(n)?,
            })
        })
        .collect::<crate::Result<Vec<_>>>()?;
    let report = HnarReport {
        field: "Q".into(),
        x,
        class_data: ClassData::RATIONALS,
        hnar_sum: rows.iter().map(|r| r.hnar).sum(),
        rows,
    };
    let text = match fmt {
        Format::Json => output::json(&report),
        Format::Csv => {
            let mut t = Table::new(&[("n", false), ("phi", false), ("hnar", false)]);
            for r in &report.rows {
                t.push(vec![r.n.into(), r.phi.into(), r.hnar.into()]);
            }
            t.to_csv(dec)
        }
    };
    Ok(Outcome::ok(text))
}

fn hnar_field(field: &QuadField, x: u64, cd: &ClassData, fmt: Format, dec: bool) -> crate::Result<Outcome> {
    let rows = classcount::ideal_table(field, x)?
        .iter()
        .map(|r| {
            Ok(HnarIdealRow {
                a: r.ideal.a(),
                b: r.ideal.b(),
                c: r.ideal.c(),
                norm: r.ideal.norm(),
                phi: r.phi,
                unit_index: r.units.index,
                narrow_unit_index: r.units.narrow_index,
                hnar: classcount::hnar(field, &r.ideal, cd)?,
            })
        })
        .collect::<crate::Result<Vec<_>>>()?;
    let report = HnarReport {
        field: field_name(field),
        x,
        class_data: *cd,
        hnar_sum: rows.iter().map(|r| r.hnar).sum(),
        rows,
    };
    let text = match fmt {
        Format::Json => output::json(&report),
        Format::Csv => {
            let mut t = Table::new(&[
                ("a", false),
                ("b", false),
                ("c", false),
                ("norm", false),
                ("phi", false),
                ("unit_index", false),
                ("narrow_unit_index", false),
                ("hnar", false),
            ]);
            for r in &report.rows {
                t.push(vec![
                    r.a.into(),
                    r.b.into(),
                    r.c.into(),
                    r.norm.into(),
                    r.phi.into(),
                    r.unit_index.into(),
                    r.narrow_unit_index.into(),
                    r.hnar.into(),
                ]);
            }
            t.to_csv(dec)
        }
    };
    Ok(Outcome::ok(text))
}

#[derive(Debug, Clone, Serialize)]
struct DeltaReport {
    field: String,
    x: u64,
    delta: u64,
    hnar_sum: u64,
}

/// `j_K(x)` and the high-`ω` ideal count, each with its growth ratio.
#[derive(Debug, Clone, Serialize)]
struct JkReport {
    d: u64,
    x: u64,
    jk_sum: u64,
    /// `j_K(x) / (x (ln ln x)^2)`.
    jk_ratio: String,
    #[serde(with = "exact::serde_rational")]
    beta: BigRational,
    high_omega: u64,
    /// `count (ln x)^{2β} / (x (ln ln x)^2)`.
    high_omega_ratio: String,
}

impl JkReport {
    fn compute(field: &QuadField, x: u64, beta: &BigRational) -> crate::Result<Self> {
        let jk = quadfield::jk_sum(field, x)?;
        let high = quadfield::count_high_omega_ideals(field, x, beta)?;
        let two_beta = beta * BigRational::from_integer(BigInt::from(2));
        Ok(JkReport {
            d: field.d(),
            x,
            jk_sum: jk,
            jk_ratio: bounds::loglog_ratio(jk, x, &BigRational::zero())?,
            beta: beta.clone(),
            high_omega: high,
            high_omega_ratio: bounds::loglog_ratio(high, x, &two_beta)?,
        })
    }
}

#[derive(Debug, Clone, Serialize)]
struct ClassNumberReport {
    d: u64,
    disc: u64,
    eps_norm: i8,
    h: u64,
    h_plus: u64,
}
