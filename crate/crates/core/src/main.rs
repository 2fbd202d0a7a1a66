//! Batch front-end: parses job configurations, runs the counting and
//! analytic jobs on a bounded worker pool, and emits CSV/JSON reports.
//!
//! Exit codes: 0 success, 1 configuration or domain error, 2 analytically
//! infeasible parameters (the zero-count report is still written), 3
//! tolerance or resource failure.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use linnikbench::arith::{PrimeTable, RationalExponent};
use linnikbench::counter::{
    binary_count, build_value_table, feasibility, gamma_of_n, pair_histogram, Feasibility,
    MuRatio, WeightMode,
};
use linnikbench::divstat;
use linnikbench::error::{Error, Result};
use linnikbench::expair::{
    check_constraints, eval_word, format_rat, parse_rat, sup_admissible_c, ConstraintTable,
    EntryStatus,
};
use linnikbench::expsum;
use linnikbench::model::{self, ParamSet};
use linnikbench::report;

#[derive(Parser)]
#[command(
    name = "linnikbench",
    version,
    about = "Counting and analytic workbench for ternary floor-power prime equations"
)]
struct Cli {
    /// Worker threads (0 = library default). Results never depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

fn parse_mu(s: &str) -> std::result::Result<MuRatio, String> {
    let (a, b) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s.trim(), "1"),
    };
    let n: u64 = a.parse().map_err(|_| format!("bad mu numerator in {s:?}"))?;
    let d: u64 = b.parse().map_err(|_| format!("bad mu denominator in {s:?}"))?;
    if d == 0 || (n >= d && n != 0) {
        return Err(format!("mu = {s} must lie in [0, 1)"));
    }
    Ok(MuRatio::new(n, d.max(1)))
}

fn ser_mu<S: serde::Serializer>(mu: &MuRatio, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&mu.to_string())
}

#[derive(Args, Clone, Serialize)]
struct CountArgs {
    /// Upper end X of the prime range (mu X, X].
    #[arg(long)]
    x: u64,
    /// Exponent c as a rational like 21/20.
    #[arg(long, default_value = "21/20")]
    c: RationalExponent,
    /// Lower range fraction mu in [0, 1).
    #[arg(long, default_value = "0", value_parser = parse_mu)]
    #[serde(serialize_with = "ser_mu")]
    mu: MuRatio,
    /// Weight mode: linnik, log or unit.
    #[arg(long, default_value = "linnik")]
    mode: WeightMode,
    /// Single target N (defaults to a small demo window below X^c).
    #[arg(long)]
    n: Option<u64>,
    /// Window start (inclusive), used with --n1.
    #[arg(long)]
    n0: Option<u64>,
    /// Window end (inclusive).
    #[arg(long)]
    n1: Option<u64>,
    /// Count the binary equation [p1^c] + [p2^c] = N0 instead.
    #[arg(long)]
    binary: bool,
    /// Histogram memory budget in bytes.
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Args, Clone, Serialize)]
struct CompareArgs {
    /// Exponent c as a rational like 21/20.
    #[arg(long, default_value = "21/20")]
    c: RationalExponent,
    /// Lower range fraction mu in [0, 1).
    #[arg(long, default_value = "0", value_parser = parse_mu)]
    #[serde(serialize_with = "ser_mu")]
    mu: MuRatio,
    /// Weight mode: linnik, log or unit.
    #[arg(long, default_value = "linnik")]
    mode: WeightMode,
    /// Window start N0.
    #[arg(long)]
    n0: u64,
    /// Window end N1; X is derived as N1^(1/c).
    #[arg(long)]
    n1: u64,
    /// Euler-product truncation for the singular series.
    #[arg(long, default_value_t = 100_000)]
    sigma_p: u64,
    /// Histogram memory budget in bytes.
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Sieve summary: prime count, largest prime, Chebyshev mass.
    SieveInfo {
        #[arg(long)]
        limit: u64,
        /// Also build the smallest-prime-factor array.
        #[arg(long)]
        spf: bool,
    },
    /// Exact ternary (or binary) counts over an N-window.
    Count {
        #[command(flatten)]
        args: CountArgs,
        /// Output CSV path (stdout when absent).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Counted-versus-predicted comparison over an N-window.
    Compare {
        #[command(flatten)]
        args: CompareArgs,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the report as JSON next to the CSV.
        #[arg(long)]
        json: bool,
    },
    /// Evaluate a word of A/B processes against a seed exponent pair.
    Expair {
        /// Word such as "BABABA^2BA^3BA^2B"; rightmost letter acts first.
        #[arg(long)]
        word: String,
        /// Seed kappa (default 0).
        #[arg(long, default_value = "0")]
        kappa: String,
        /// Seed lambda (default 1).
        #[arg(long, default_value = "1")]
        lambda: String,
    },
    /// Check the affine constraint table or compute its supremum.
    Constraints {
        /// Table file (embedded default table when absent).
        #[arg(long)]
        table: Option<PathBuf>,
        /// Print the exact supremum of admissible c.
        #[arg(long)]
        sup: bool,
        /// Evaluate all entries at this rational c.
        #[arg(long)]
        at: Option<String>,
    },
    /// Grid scan of |S(t)| over the minor-arc window.
    ExpsumScan {
        #[arg(long)]
        x: u64,
        #[arg(long, default_value = "21/20")]
        c: RationalExponent,
        #[arg(long, default_value_t = 4096)]
        grid: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Residual of the truncated sawtooth expansion.
    BurievCheck {
        /// The x argument of the expansion.
        #[arg(long)]
        x: f64,
        /// The y argument.
        #[arg(long)]
        y: f64,
        /// Truncation H >= 3.
        #[arg(long, default_value_t = 100)]
        h: u32,
    },
    /// Progression-discrepancy aggregate over moduli d <= d-max (report only).
    BvStat {
        #[arg(long)]
        x: u64,
        /// Frequency t.
        #[arg(long, default_value_t = 0.0)]
        t: f64,
        #[arg(long, default_value = "21/20")]
        c: RationalExponent,
        #[arg(long, default_value = "1/2", value_parser = parse_mu)]
        mu: MuRatio,
        #[arg(long = "d-max")]
        d_max: u64,
    },
    /// Middle-divisor statistics at (X, omega).
    Hooley {
        #[arg(long)]
        x: u64,
        #[arg(long, default_value_t = 1.0)]
        omega: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The analytic constants with explicit error bounds.
    Constants {
        /// Euler-product truncation.
        #[arg(long, default_value_t = 1_000_000)]
        p_trunc: u64,
        /// Partial-sum cutoff for chi4(d)/phi(d).
        #[arg(long, default_value_t = 1_000_000)]
        d_sum: u64,
        #[arg(long, default_value = "21/20")]
        c: RationalExponent,
    },
    /// Bundle of reports into a directory.
    Report {
        #[arg(long, default_value = "report-out")]
        out_dir: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        x: u64,
        #[arg(long, default_value = "21/20")]
        c: RationalExponent,
    },
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, content)
            .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn window_notes(c: &RationalExponent) {
    if !c.in_lemma_window() {
        eprintln!("note: c = {c} lies outside the lemma window (1, 3) \\ {{2}}");
    }
    if !c.in_theorem_window() {
        eprintln!("note: c = {c} lies outside the theorem window (1, 16559/15276)");
    }
}

fn run_count(args: &CountArgs, out: &Option<PathBuf>) -> Result<i32> {
    window_notes(&args.c);
    let pt = PrimeTable::sieve_with_spf(args.x)?;
    let vt = build_value_table(&pt, args.x, args.c, args.mu)?;
    let feas = feasibility(args.c, args.mu);
    let x_pow_c = linnikbench::arith::floor_pow(args.x, &args.c)?;
    let (n0, n1) = match (args.n, args.n0, args.n1) {
        (Some(n), _, _) => (n, n),
        (None, Some(a), Some(b)) => (a, b),
        (None, None, None) => (x_pow_c.saturating_sub(50).max(1), x_pow_c),
        _ => return Err(Error::Config("give either --n or both --n0/--n1".into())),
    };
    if n0 > n1 || n0 == 0 {
        return Err(Error::Config(format!("bad N-window [{n0}, {n1}]")));
    }
    let content = if args.binary {
        let mut out_s = String::new();
        out_s.push_str(&report::header_comment("count-binary", args));
        out_s.push('\n');
        out_s.push_str("N0,count,weighted_fixed,weighted_scale_bits,X,c,mu\n");
        for n0v in n0..=n1 {
            let (cnt, wt) = binary_count(n0v, &vt);
            out_s.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                n0v,
                cnt,
                wt,
                linnikbench::counter::PAIR_SCALE_BITS,
                args.x,
                args.c,
                args.mu
            ));
        }
        out_s
    } else {
        use rayon::prelude::*;
        let hist = pair_histogram(&vt, args.budget)?;
        // parallel over disjoint N's, rows ordered by N
        let rows: Result<Vec<_>> = (n0..=n1)
            .into_par_iter()
            .map(|n| gamma_of_n(n, &hist, &vt, args.mode))
            .collect();
        report::count_csv("count", args, &rows?)
    };
    emit(out, &content)?;
    if feas.status == Feasibility::Infeasible {
        eprintln!(
            "infeasible range: slack 1 - 3 mu^c = {} <= 0; every triple of primes in \
             (mu X, X] floors past N, so counts vanish (report written)",
            feas.slack.to_decimal_string(6)
        );
        return Ok(2);
    }
    Ok(0)
}

fn run_compare(args: &CompareArgs, out: &Option<PathBuf>, json: bool) -> Result<i32> {
    window_notes(&args.c);
    let x = (args.n1 as f64).powf(1.0 / args.c.to_f64()).ceil() as u64 + 1;
    let sieve_limit = x.max(args.sigma_p);
    let pt = PrimeTable::sieve_with_spf(sieve_limit)?;
    let vt = build_value_table(&pt, x, args.c, args.mu)?;
    let hist = pair_histogram(&vt, args.budget)?;
    let sigma = model::singular_series(&pt, args.sigma_p)?;
    let rep = model::compare(&hist, &vt, args.n0, args.n1, args.mode, &sigma)?;
    let content = report::compare_csv("compare", args, &rep);
    emit(out, &content)?;
    if json {
        let path = out
            .as_ref()
            .map(|p| p.with_extension("json"))
            .unwrap_or_else(|| PathBuf::from("compare.json"));
        fs::write(&path, serde_json::to_string_pretty(&rep).expect("report serializes"))
            .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))?;
    }
    if feasibility(args.c, args.mu).status == Feasibility::Infeasible {
        eprintln!(
            "infeasible range: counts vanish while the literal model is positive \
             (slack 1 - 3 mu^c <= 0)"
        );
        return Ok(2);
    }
    Ok(0)
}

fn run_constraints(table: &Option<PathBuf>, sup: bool, at: &Option<String>) -> Result<i32> {
    let table = match table {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
            ConstraintTable::parse(&text)?
        }
        None => ConstraintTable::default_table(),
    };
    if sup {
        let s = sup_admissible_c(&table)?;
        println!("{}", format_rat(&s.sup));
        if s.unbounded_in_window {
            println!("# unbounded in window (no entry caps c below 3)");
        }
        println!(
            "# attained={} binding={}",
            s.attained,
            if s.binding.is_empty() { "-".to_string() } else { s.binding.join("+") }
        );
        return Ok(0);
    }
    if let Some(c_str) = at {
        let c = parse_rat(c_str)?;
        let reports = check_constraints(&table, &c)?;
        println!("name,status,margin,binding_index,strict");
        let mut any_violated = false;
        for r in &reports {
            let status = match r.status {
                EntryStatus::Satisfied => "satisfied",
                EntryStatus::Equality => "equality",
                EntryStatus::Violated => "violated",
            };
            any_violated |= r.status == EntryStatus::Violated;
            println!(
                "{},{},{},{},{}",
                r.name,
                status,
                format_rat(&r.margin),
                r.binding_index,
                r.strict
            );
        }
        if any_violated {
            eprintln!("note: at least one entry is violated at c = {c_str}");
        }
        return Ok(0);
    }
    Err(Error::Config("constraints: give --sup or --at <c>".into()))
}

#[derive(Serialize)]
struct ConstantsOut {
    sigma: String,
    sigma_truncation: u64,
    sigma_tail_bound: f64,
    theta0: String,
    theta0_f64_check: f64,
    gamma_factor_c: String,
    gamma_factor: String,
    partial_chi_phi_d: u64,
    partial_chi_phi: String,
    quarter_sigma_minus_partial: f64,
}

fn run_constants(p_trunc: u64, d_sum: u64, c: RationalExponent) -> Result<i32> {
    let pt = PrimeTable::sieve(p_trunc.max(100))?;
    let sigma = model::singular_series(&pt, p_trunc)?;
    let partial = model::partial_chi_phi_sum(d_sum)?;
    let quarter = sigma.value.div_u64(4);
    let out = ConstantsOut {
        sigma: sigma.value.to_decimal_string(30),
        sigma_truncation: sigma.truncation,
        sigma_tail_bound: sigma.tail_bound,
        theta0: divstat::theta0().to_decimal_string(30),
        theta0_f64_check: divstat::theta0_f64(),
        gamma_factor_c: c.to_string(),
        gamma_factor: model::gamma_factor(c).to_decimal_string(30),
        partial_chi_phi_d: d_sum,
        partial_chi_phi: partial.to_decimal_string(30),
        quarter_sigma_minus_partial: (&quarter - &partial).to_f64(),
    };
    println!("{}", serde_json::to_string_pretty(&out).expect("constants serialize"));
    Ok(0)
}

fn run_report(out_dir: &PathBuf, x: u64, c: RationalExponent) -> Result<i32> {
    fs::create_dir_all(out_dir)
        .map_err(|e| Error::Config(format!("cannot create {}: {e}", out_dir.display())))?;
    #[derive(Serialize)]
    struct Cfg {
        x: u64,
        c: String,
    }
    let cfg = Cfg { x, c: c.to_string() };
    let pt = PrimeTable::sieve_with_spf(x.max(1000))?;

    // constraint statuses at the supremum
    let table = ConstraintTable::default_table();
    let s = sup_admissible_c(&table)?;
    let mut constraints_txt = format!("sup,{}\nattained,{}\n", format_rat(&s.sup), s.attained);
    for r in check_constraints(&table, &s.sup)? {
        let status = match r.status {
            EntryStatus::Satisfied => "satisfied",
            EntryStatus::Equality => "equality",
            EntryStatus::Violated => "violated",
        };
        constraints_txt.push_str(&format!("{},{},{}\n", r.name, status, format_rat(&r.margin)));
    }
    let scan = expsum::minor_arc_scan(&pt, &c, x, 4096)?;
    let hooley = divstat::hooley_report(&pt, x, 1.0)?;
    let sigma = model::singular_series(&pt, pt.limit())?;

    let files = [
        ("constraints.csv", constraints_txt),
        ("scan.csv", report::scan_csv("report", &cfg, &scan)),
        ("hooley.csv", report::hooley_csv("report", &cfg, &[hooley])),
        (
            "constants.json",
            serde_json::to_string_pretty(&serde_json::json!({
                "sigma": sigma.value.to_decimal_string(30),
                "sigma_tail_bound": sigma.tail_bound,
                "theta0": divstat::theta0().to_decimal_string(30),
                "gamma_factor": model::gamma_factor(c).to_decimal_string(30),
                "params": ParamSet::new(x as f64, c, ParamSet::DEFAULT_A)?,
            }))
            .expect("json"),
        ),
    ];
    let mut index = Vec::new();
    for (name, content) in files {
        let path = out_dir.join(name);
        fs::write(&path, content)
            .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))?;
        index.push(name);
    }
    let idx = serde_json::json!({
        "version": report::VERSION,
        "config": cfg,
        "files": index,
    });
    fs::write(out_dir.join("index.json"), serde_json::to_string_pretty(&idx).expect("json"))
        .map_err(|e| Error::Config(format!("cannot write index: {e}")))?;
    println!("wrote {} files to {}", index.len() + 1, out_dir.display());
    Ok(0)
}

fn dispatch(cli: &Cli) -> Result<i32> {
    match &cli.cmd {
        Cmd::SieveInfo { limit, spf } => {
            let pt = if *spf {
                PrimeTable::sieve_with_spf(*limit)?
            } else {
                PrimeTable::sieve(*limit)?
            };
            let theta: u128 = pt
                .primes()
                .iter()
                .map(|&p| linnikbench::arith::fixed_log(p).0 as u128)
                .sum();
            println!(
                "limit={} primes={} largest={} theta_fixed={} theta={} spf={}",
                pt.limit(),
                pt.prime_count(),
                pt.primes().last().copied().unwrap_or(0),
                theta,
                theta as f64 / (1u64 << 24) as f64,
                pt.has_spf()
            );
            Ok(0)
        }
        Cmd::Count { args, out } => run_count(args, out),
        Cmd::Compare { args, out, json } => run_compare(args, out, *json),
        Cmd::Expair { word, kappa, lambda } => {
            let seed =
                linnikbench::expair::ExponentPair::new(parse_rat(kappa)?, parse_rat(lambda)?)?;
            let pair = eval_word(word, Some(&seed))?;
            println!("{} {}", format_rat(pair.kappa()), format_rat(pair.lambda()));
            Ok(0)
        }
        Cmd::Constraints { table, sup, at } => run_constraints(table, *sup, at),
        Cmd::ExpsumScan { x, c, grid, out } => {
            window_notes(c);
            #[derive(Serialize)]
            struct Cfg<'a> {
                x: u64,
                c: &'a RationalExponent,
                grid: u32,
            }
            let pt = PrimeTable::sieve(*x)?;
            let scan = expsum::minor_arc_scan(&pt, c, *x, *grid)?;
            let content = report::scan_csv("expsum-scan", &Cfg { x: *x, c, grid: *grid }, &scan);
            emit(out, &content)?;
            eprintln!(
                "max|S|={} at t={}/{} normalized={} refined_abs={}",
                scan.max_abs, scan.argmax_num, scan.grid, scan.normalized, scan.refined_abs
            );
            Ok(0)
        }
        Cmd::BurievCheck { x, y, h } => {
            let (residual, bound) = expsum::buriev_residual(*x, *y, *h)?;
            println!(
                "residual={residual} bound={bound} ratio={}",
                if bound > 0.0 { residual / bound } else { f64::INFINITY }
            );
            Ok(0)
        }
        Cmd::BvStat { x, t, c, mu, d_max } => {
            let pt = PrimeTable::sieve_with_spf(*x)?;
            let agg = expsum::bv_aggregate(&pt, *x, *t, *mu, c, *d_max)?;
            println!(
                "d_max={} terms={} total={} worst_d={} worst_abs={} shape_x_over_log={}",
                agg.d_max,
                agg.terms,
                agg.total,
                agg.worst_d,
                agg.worst_abs,
                *x as f64 / (*x as f64).ln()
            );
            Ok(0)
        }
        Cmd::Hooley { x, omega, out } => {
            #[derive(Serialize)]
            struct Cfg {
                x: u64,
                omega: f64,
            }
            let pt = PrimeTable::sieve_with_spf(*x)?;
            let rep = divstat::hooley_report(&pt, *x, *omega)?;
            let content = report::hooley_csv("hooley", &Cfg { x: *x, omega: *omega }, &[rep]);
            emit(out, &content)?;
            Ok(0)
        }
        Cmd::Constants { p_trunc, d_sum, c } => run_constants(*p_trunc, *d_sum, *c),
        Cmd::Report { out_dir, x, c } => run_report(out_dir, *x, *c),
    }
}

fn main() -> ExitCode {
    // malformed command lines are configuration errors (exit 1); clap's
    // default usage-error code would collide with the infeasibility code 2
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let run = || match dispatch(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    };
    if cli.threads > 0 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build()
            .expect("thread pool");
        pool.install(run)
    } else {
        run()
    }
}
