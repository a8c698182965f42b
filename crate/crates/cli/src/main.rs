//! `weissler` — command-line front end for the hypercontractivity toolkit.
//!
//! Exit codes: 0 expected outcome, 2 usage error, 3 mathematical violation
//! found, 4 numeric failure.

use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use serde_json::json;
use weissler_core::error::Error;
use weissler_core::lens;
use weissler_core::margins;
use weissler_core::moment;
use weissler_core::oracle;
use weissler_core::scan;

const EXIT_OK: i32 = 0;
const EXIT_USAGE: i32 = 2;
const EXIT_VIOLATION: i32 = 3;
const EXIT_NUMERIC: i32 = 4;

#[derive(Parser)]
#[command(
    name = "weissler",
    version,
    about = "Complex hypercontractivity on the Hamming cube: admissibility queries, \
             inequality scans, counterexample searches, and multiplier bounds"
)]
struct Cli {
    /// Override the pass/fail margin tolerance of verification scans.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Worker thread count (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for randomized searches and certification.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

/// Complex numbers are written `re,im` on the command line.
fn parse_complex(s: &str) -> Result<Complex64, String> {
    let (re, im) = s
        .split_once(',')
        .ok_or_else(|| format!("expected re,im but got `{s}`"))?;
    let re: f64 = re.trim().parse().map_err(|e| format!("bad real part: {e}"))?;
    let im: f64 = im.trim().parse().map_err(|e| format!("bad imaginary part: {e}"))?;
    Ok(Complex64::new(re, im))
}

#[derive(Subcommand)]
enum Command {
    /// Check whether the noise parameter z is admissible for (p, q).
    Admissible {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        q: f64,
        #[arg(long, value_parser = parse_complex)]
        z: Complex64,
    },
    /// Emit the polar boundary r(t) of the admissible domain as CSV.
    Boundary {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        q: f64,
        /// Number of rows over one period t in [0, 2π).
        #[arg(long, default_value_t = 256)]
        count: usize,
    },
    /// Run a named inequality scan and report the worst margin.
    ///
    /// Lemma ids: reduced, two-point, necessity, mock-logsob, series, cap,
    /// final-chain, self-improvement, coefficient-ratio.
    Verify {
        lemma: String,
        #[arg(long, default_value_t = 2.5)]
        p: f64,
        #[arg(long)]
        q: Option<f64>,
        #[arg(long, value_parser = parse_complex)]
        z: Option<Complex64>,
        /// Points per grid axis.
        #[arg(long, default_value_t = 32)]
        grid: usize,
        /// Largest series/cap index l.
        #[arg(long, default_value_t = 12)]
        lmax: u32,
        /// Series truncation length.
        #[arg(long, default_value_t = 16)]
        truncation: u32,
    },
    /// Hill-climbing search for a contractivity violation at (p, q, z).
    Search {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        q: f64,
        #[arg(long, value_parser = parse_complex)]
        z: Complex64,
        /// Cube dimension of the candidate functions.
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long, default_value_t = 1000)]
        restarts: usize,
    },
    /// Solve a moment problem from a JSON problem file.
    Multiplier {
        problem: PathBuf,
    },
    /// Validate a solved multiplier bound against brute-force cube norms.
    Certify {
        problem: PathBuf,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        /// Cube dimension for the random test functions.
        #[arg(long, default_value_t = 5)]
        n: u32,
    },
}

/// 17 significant digits, enough to round-trip an f64.
fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

fn emit(out: &Option<PathBuf>, body: &str) -> Result<(), Error> {
    match out {
        Some(path) => fs::write(path, body)
            .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display()))),
        None => {
            if body.ends_with('\n') {
                print!("{body}");
            } else {
                println!("{body}");
            }
            Ok(())
        }
    }
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::InvalidInput(_) | Error::Resource(_) => EXIT_USAGE,
        _ => EXIT_NUMERIC,
    }
}

fn main() {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: cannot configure thread pool: {e}");
            std::process::exit(EXIT_USAGE);
        }
    }
    match run(&cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(exit_code_for(&e));
        }
    }
}

fn run(cli: &Cli) -> Result<i32, Error> {
    match &cli.command {
        Command::Admissible { p, q, z } => cmd_admissible(cli, *p, *q, *z),
        Command::Boundary { p, q, count } => cmd_boundary(cli, *p, *q, *count),
        Command::Verify { lemma, p, q, z, grid, lmax, truncation } => {
            cmd_verify(cli, lemma, *p, *q, *z, *grid, *lmax, *truncation)
        }
        Command::Search { p, q, z, n, restarts } => cmd_search(cli, *p, *q, *z, *n, *restarts),
        Command::Multiplier { problem } => cmd_multiplier(cli, problem),
        Command::Certify { problem, trials, n } => cmd_certify(cli, problem, *trials, *n),
    }
}

fn cmd_admissible(cli: &Cli, p: f64, q: f64, z: Complex64) -> Result<i32, Error> {
    let margin = lens::admissibility_margin(p, q, z)?;
    let admissible = lens::is_admissible(p, q, z)?;
    let mut report = json!({
        "schema": 1,
        "p": p,
        "q": q,
        "z": [z.re, z.im],
        "admissible": admissible,
        "margin": margin,
    });
    if (p - q).abs() < 1e-15 && p > 1.0 {
        let lens = lens::LensParams::new(p)?;
        report["lens"] = json!({
            "alpha": lens.alpha,
            "center_offset": lens.center_offset,
            "radius": lens.radius,
            "real_cap": lens.real_cap,
        });
    }
    emit(&cli.out, &serde_json::to_string_pretty(&report).expect("serializable"))?;
    Ok(if admissible { EXIT_OK } else { EXIT_VIOLATION })
}

fn cmd_boundary(cli: &Cli, p: f64, q: f64, count: usize) -> Result<i32, Error> {
    if count == 0 {
        return Err(Error::InvalidInput("boundary needs at least one row".into()));
    }
    let cross_check = (p - q).abs() < 1e-15 && p >= 2.0;
    let mut csv = String::from("t,r,c,margin");
    if cross_check {
        csv.push_str(",r_closed,cross_diff");
    }
    csv.push('\n');
    for i in 0..count {
        let t = 2.0 * std::f64::consts::PI * i as f64 / count as f64;
        let b = lens::boundary_point(p, q, t)?;
        let margin = lens::admissibility_margin(p, q, Complex64::from_polar(b.r, t))?;
        csv.push_str(&format!("{},{},{},{}", fmt17(t), fmt17(b.r), fmt17(b.c), fmt17(margin)));
        if cross_check {
            let folded = t.rem_euclid(std::f64::consts::PI);
            let reduced = folded.min(std::f64::consts::PI - folded);
            let closed = lens::boundary_radius_closed(p, reduced)?;
            csv.push_str(&format!(",{},{}", fmt17(closed), fmt17(closed - b.r)));
        }
        csv.push('\n');
    }
    emit(&cli.out, &csv)?;
    Ok(EXIT_OK)
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    cli: &Cli,
    lemma: &str,
    p: f64,
    q: Option<f64>,
    z: Option<Complex64>,
    grid: usize,
    lmax: u32,
    truncation: u32,
) -> Result<i32, Error> {
    let q = q.unwrap_or(p);
    let need_z = || z.ok_or_else(|| Error::InvalidInput(format!("lemma `{lemma}` needs --z")));

    // the dichotomy lemma is special: failure of monotonicity below p = 3 is
    // the predicted outcome, so finding the counterexample is a pass
    if lemma == "mock-logsob" && p < 3.0 {
        let (x, angle, slope) = margins::mock_logsob_counterexample(p)?;
        let report = json!({
            "schema": 1,
            "inequality": format!("mock_logsob(p={p})"),
            "counterexample": { "x": x, "angle": angle, "slope": slope },
            "pass": true,
            "note": "monotonicity fails below p = 3 as predicted; counterexample found",
        });
        emit(&cli.out, &serde_json::to_string_pretty(&report).expect("serializable"))?;
        return Ok(EXIT_OK);
    }

    let mut report = match lemma {
        "reduced" => scan::scan_reduced(p, (grid, grid, grid), true)?,
        "two-point" => scan::scan_two_point(p, q, need_z()?, grid.max(2), 1.0)?,
        "necessity" => scan::scan_necessity(p, q, need_z()?, grid.max(8))?,
        "mock-logsob" => scan::scan_mock_logsob(p, grid.max(64), 8 * grid.max(64))?,
        "series" => scan::scan_series(p / 2.0, (grid, grid, grid), truncation)?,
        "cap" => scan::scan_cap(2, lmax, (grid.max(2), grid.max(2)))?,
        "final-chain" => scan::scan_final_chain(p, (grid, grid))?,
        "self-improvement" => scan::scan_self_improvement(p, (grid, grid, grid))?,
        "coefficient-ratio" => scan::scan_coefficient_ratio(p / 2.0, lmax.max(3))?,
        other => {
            return Err(Error::InvalidInput(format!(
                "unknown lemma `{other}`; see `weissler verify --help` for the list"
            )))
        }
    };
    if let Some(tol) = cli.tolerance {
        report.tolerance = tol;
        report.pass = report.worst_margin >= -tol;
    }
    emit(&cli.out, &serde_json::to_string_pretty(&report).expect("serializable"))?;
    Ok(if report.pass { EXIT_OK } else { EXIT_VIOLATION })
}

fn cmd_search(
    cli: &Cli,
    p: f64,
    q: f64,
    z: Complex64,
    n: u32,
    restarts: usize,
) -> Result<i32, Error> {
    let cfg = oracle::SearchConfig::new(n, restarts, cli.seed)?;
    let report = oracle::search_report(p, q, z, &cfg)?;
    emit(&cli.out, &serde_json::to_string_pretty(&report).expect("serializable"))?;
    Ok(if report.pass { EXIT_OK } else { EXIT_VIOLATION })
}

fn read_problem(path: &PathBuf) -> Result<moment::MomentProblem, Error> {
    let body = fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    let file: moment::ProblemFile = serde_json::from_str(&body)
        .map_err(|e| Error::InvalidInput(format!("malformed problem file: {e}")))?;
    file.into_problem()
}

fn cmd_multiplier(cli: &Cli, path: &PathBuf) -> Result<i32, Error> {
    let prob = read_problem(path)?;
    let (sandwich, measure, _) = moment::solve(&prob)?;
    let solution = moment::SolutionFile::new(&sandwich, &measure);
    emit(&cli.out, &serde_json::to_string_pretty(&solution).expect("serializable"))?;
    Ok(EXIT_OK)
}

fn cmd_certify(cli: &Cli, path: &PathBuf, trials: usize, n: u32) -> Result<i32, Error> {
    let prob = read_problem(path)?;
    let (sandwich, _, _) = moment::solve(&prob)?;
    let worst = moment::certify_on_cube(&prob.phi, prob.d, prob.p, prob.q, trials, n, cli.seed)?;
    let pass = worst <= sandwich.upper + 1e-6;
    let report = json!({
        "schema": 1,
        "tv_upper": sandwich.upper,
        "worst_ratio": worst,
        "trials": trials,
        "n": n,
        "seed": cli.seed,
        "pass": pass,
    });
    emit(&cli.out, &serde_json::to_string_pretty(&report).expect("serializable"))?;
    Ok(if pass { EXIT_OK } else { EXIT_VIOLATION })
}
