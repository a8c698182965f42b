//! Brute-force contractivity checks on small cubes: the norm ratio
//! `||T_z f||_q / ||f||_p`, a seeded random-restart hill climb that hunts for
//! violations, and numerical verification of the tensorization and
//! induction equivalences that reduce the conjecture to `n = 1`.

use base64::Engine;
use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cube::CubeFunction;
use crate::error::{Error, Result};
use crate::report::WitnessParam;

/// Configuration of the violation search. Output is a deterministic
/// function of the configuration, independent of worker count.
#[derive(Debug, Clone, Serialize)]
pub struct SearchConfig {
    /// Cube dimension, at most 10.
    pub n: u32,
    pub restarts: usize,
    /// Hill-climbing steps per restart.
    pub steps: usize,
    /// Initial perturbation size.
    pub initial_step: f64,
    /// Multiplicative decay applied on a plateau.
    pub step_decay: f64,
    /// Decay floor; the climb stops early below it.
    pub step_floor: f64,
    pub seed: u64,
}

impl SearchConfig {
    pub fn new(n: u32, restarts: usize, seed: u64) -> Result<Self> {
        if n == 0 || n > 10 {
            return Err(Error::InvalidInput(format!("search dimension must be in 1..=10, got {n}")));
        }
        Ok(Self {
            n,
            restarts,
            steps: 400,
            initial_step: 0.5,
            step_decay: 0.5,
            step_floor: 1e-7,
            seed,
        })
    }
}

/// Best ratio found by a search together with its witness function.
#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub best_ratio: f64,
    pub witness: CubeFunction,
    pub restart_index: usize,
}

/// `||T_z f||_q / ||f||_p` for a not identically zero `f`.
pub fn norm_ratio(f: &CubeFunction, p: f64, q: f64, z: Complex64) -> Result<f64> {
    if f.is_zero(1e-300) {
        return Err(Error::InvalidInput("norm ratio of the zero function".into()));
    }
    Ok(f.apply_noise(z)?.lp_norm(q)? / f.lp_norm(p)?)
}

/// Fast path of the ratio for `n = 1` and `f = 1 + w x_1` (scale invariance
/// makes this parameterization complete up to the degenerate pure-character
/// case, which has ratio `|z|`).
fn two_point_ratio(p: f64, q: f64, z: Complex64, w: Complex64) -> f64 {
    let one = Complex64::ONE;
    let num = (((one + w * z).norm().powf(q) + (one - w * z).norm().powf(q)) / 2.0).powf(1.0 / q);
    let den = (((one + w).norm().powf(p) + (one - w).norm().powf(p)) / 2.0).powf(1.0 / p);
    num / den
}

fn climb<F: Fn(&[f64]) -> f64>(
    objective: F,
    x: &mut [f64],
    cfg: &SearchConfig,
    rng: &mut ChaCha8Rng,
) -> f64 {
    let mut best = objective(x);
    let mut step = cfg.initial_step;
    let mut since_improvement = 0usize;
    for _ in 0..cfg.steps {
        if step < cfg.step_floor {
            break;
        }
        let i = rng.gen_range(0..x.len());
        let delta = step * rng.gen_range(-1.0..1.0);
        let old = x[i];
        x[i] += delta;
        let val = objective(x);
        if val > best && val.is_finite() {
            best = val;
            since_improvement = 0;
        } else {
            x[i] = old;
            since_improvement += 1;
            if since_improvement >= 2 * x.len() {
                step *= cfg.step_decay;
                since_improvement = 0;
            }
        }
    }
    best
}

/// Random-restart hill climb maximizing the norm ratio at fixed `(p, q, z)`.
///
/// Restarts are independent; restart `i` draws from a stream derived from
/// `(seed, i)`, so the outcome does not depend on thread count. For
/// admissible `z` the theorem says the best ratio stays at 1; outside the
/// domain a ratio above 1 appears already at `n = 1`.
pub fn search_violation(p: f64, q: f64, z: Complex64, cfg: &SearchConfig) -> Result<SearchOutcome> {
    if !(1.0 <= p && p <= q) {
        return Err(Error::InvalidInput(format!(
            "search requires 1 <= p <= q, got p = {p}, q = {q}"
        )));
    }
    if cfg.restarts == 0 {
        return Err(Error::InvalidInput("search requires at least one restart".into()));
    }
    let results: Vec<(f64, Vec<f64>)> = (0..cfg.restarts)
        .into_par_iter()
        .map(|restart| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(restart as u64 + 1);
            if cfg.n == 1 {
                let mut x = [rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)];
                let best = climb(
                    |w| two_point_ratio(p, q, z, Complex64::new(w[0], w[1])),
                    &mut x,
                    cfg,
                    &mut rng,
                );
                (best, x.to_vec())
            } else {
                let len = 1usize << (cfg.n + 1);
                let mut x: Vec<f64> = (0..len).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let best = climb(
                    |coords| match coords_to_function(cfg.n, coords) {
                        Some(f) => norm_ratio(&f, p, q, z).unwrap_or(f64::NEG_INFINITY),
                        None => f64::NEG_INFINITY,
                    },
                    &mut x,
                    cfg,
                    &mut rng,
                );
                (best, x)
            }
        })
        .collect();

    let (restart_index, (best_ratio, coords)) = results
        .into_iter()
        .enumerate()
        .max_by(|a, b| {
            a.1 .0
                .partial_cmp(&b.1 .0)
                .unwrap_or(core::cmp::Ordering::Equal)
                .then(b.0.cmp(&a.0))
        })
        .expect("at least one restart");

    let witness = if cfg.n == 1 {
        CubeFunction::from_coeffs(vec![Complex64::ONE, Complex64::new(coords[0], coords[1])])?
    } else {
        coords_to_function(cfg.n, &coords)
            .ok_or_else(|| Error::Numeric("degenerate witness".into()))?
    };
    Ok(SearchOutcome { best_ratio, witness, restart_index })
}

fn coords_to_function(_n: u32, coords: &[f64]) -> Option<CubeFunction> {
    let coeffs: Vec<Complex64> = coords
        .chunks_exact(2)
        .map(|c| Complex64::new(c[0], c[1]))
        .collect();
    let f = CubeFunction::from_coeffs(coeffs).ok()?;
    if f.is_zero(1e-12) {
        None
    } else {
        Some(f)
    }
}

/// `|ratio(tensor_power(f, k)) - ratio(f)^k|`; zero up to FP noise.
pub fn tensorization_check(
    f: &CubeFunction,
    k: u32,
    p: f64,
    q: f64,
    z: Complex64,
) -> Result<f64> {
    let base = norm_ratio(f, p, q, z)?;
    let big = f.tensor_power(k)?;
    let power = norm_ratio(&big, p, q, z)?;
    Ok((power - base.powi(k as i32)).abs())
}

/// Numerically verifies the two inequality steps in the dimension-induction
/// argument for a function of `n >= 2` variables.
///
/// Splitting `f = A + x_1 B` on the first coordinate and writing the noisy
/// slices `va, vb`, the three displayed quantities are chained by the
/// `n = 1` inequality applied slice-wise and by Minkowski's inequality
/// (which needs `q/p >= 1`). Returns the minimum of the two successive gaps.
pub fn induction_step_check(f: &CubeFunction, p: f64, q: f64, z: Complex64) -> Result<f64> {
    if !(1.0 <= p && p <= q) {
        return Err(Error::InvalidInput(format!(
            "induction check requires 1 <= p <= q, got p = {p}, q = {q}"
        )));
    }
    let n = f.dimension();
    if n < 2 {
        return Err(Error::InvalidInput(format!("induction check requires n >= 2, got {n}")));
    }
    let half = 1usize << (n - 1);
    let mut a_coeffs = Vec::with_capacity(half);
    let mut b_coeffs = Vec::with_capacity(half);
    for s in 0..half {
        a_coeffs.push(f.coeff(s << 1));
        b_coeffs.push(f.coeff((s << 1) | 1));
    }
    let va = CubeFunction::from_coeffs(a_coeffs)?.apply_noise(z)?.synthesize();
    let vb = CubeFunction::from_coeffs(b_coeffs)?.apply_noise(z)?.synthesize();

    let m = half as f64;
    let mut q1_acc = 0.0;
    let mut q2_acc = 0.0;
    let mut q3_plus = 0.0;
    let mut q3_minus = 0.0;
    for (a, b) in va.iter().zip(&vb) {
        let plus = (a + b).norm().powf(q);
        let minus = (a - b).norm().powf(q);
        q1_acc += ((a + z * b).norm().powf(q) + (a - z * b).norm().powf(q)) / 2.0;
        q2_acc += (((a + b).norm().powf(p) + (a - b).norm().powf(p)) / 2.0).powf(q / p);
        q3_plus += plus;
        q3_minus += minus;
    }
    let q1 = (q1_acc / m).powf(p / q);
    let q2 = (q2_acc / m).powf(p / q);
    let q3 = ((q3_plus / m).powf(p / q) + (q3_minus / m).powf(p / q)) / 2.0;
    Ok((q2 - q1).min(q3 - q2))
}

/// JSON report for a search run; mirrors the scan report schema and carries
/// the witness coefficients as a base64 block of little-endian doubles
/// interleaved `re, im`.
#[derive(Debug, Clone, Serialize)]
pub struct SearchReport {
    pub schema: u32,
    pub inequality: String,
    pub config: SearchConfig,
    pub evaluated: u64,
    /// `1 - best_ratio`: nonnegative means no violation was found.
    pub worst_margin: f64,
    pub best_ratio: f64,
    pub witness: Vec<WitnessParam>,
    pub witness_coeffs_b64: String,
    pub pass: bool,
    pub seconds: f64,
}

/// Slack on `ratio <= 1` absorbing FP noise in the norms.
pub const RATIO_SLACK: f64 = 1e-8;

/// Runs [`search_violation`] and wraps the outcome in the report schema.
pub fn search_report(p: f64, q: f64, z: Complex64, cfg: &SearchConfig) -> Result<SearchReport> {
    let start = std::time::Instant::now();
    let outcome = search_violation(p, q, z, cfg)?;
    let mut bytes = Vec::with_capacity(outcome.witness.coeffs().len() * 16);
    for c in outcome.witness.coeffs() {
        bytes.extend_from_slice(&c.re.to_le_bytes());
        bytes.extend_from_slice(&c.im.to_le_bytes());
    }
    Ok(SearchReport {
        schema: 1,
        inequality: format!("contractivity(p={p},q={q},z={z})"),
        config: cfg.clone(),
        evaluated: (cfg.restarts * cfg.steps) as u64,
        worst_margin: 1.0 - outcome.best_ratio,
        best_ratio: outcome.best_ratio,
        witness: vec![
            WitnessParam::new("restart", outcome.restart_index as f64),
            WitnessParam::new("n", cfg.n as f64),
        ],
        witness_coeffs_b64: base64::engine::general_purpose::STANDARD.encode(bytes),
        pass: outcome.best_ratio <= 1.0 + RATIO_SLACK,
        seconds: start.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lens::boundary_point;

    fn random_function(n: u32, seed: u64) -> CubeFunction {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coeffs = (0..1usize << n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        CubeFunction::from_coeffs(coeffs).unwrap()
    }

    #[test]
    fn ratio_trivial_cases() {
        let c = CubeFunction::constant(3, Complex64::new(2.0, -1.0)).unwrap();
        let z = Complex64::new(0.3, 0.2);
        assert!((norm_ratio(&c, 2.0, 3.0, z).unwrap() - 1.0).abs() < 1e-12);
        let f = random_function(4, 1);
        assert!((norm_ratio(&f, 2.5, 2.5, Complex64::ONE).unwrap() - 1.0).abs() < 1e-12);
        let zero = CubeFunction::constant(2, Complex64::ZERO).unwrap();
        assert!(norm_ratio(&zero, 2.0, 2.0, z).is_err());
    }

    #[test]
    fn ratio_matches_two_point_form() {
        let p = 2.5;
        let b = boundary_point(p, p, core::f64::consts::FRAC_PI_4).unwrap();
        let z = Complex64::from_polar(b.r, core::f64::consts::FRAC_PI_4);
        let w = Complex64::from_polar(0.3, 0.2);
        let f = CubeFunction::from_coeffs(vec![Complex64::ONE, w]).unwrap();
        let r = norm_ratio(&f, p, p, z).unwrap();
        assert!((r - two_point_ratio(p, p, z, w)).abs() < 1e-13);
        assert!(r <= 1.0 + 1e-12);
    }

    #[test]
    fn search_admissible_stays_contractive() {
        let p = 2.5;
        let b = boundary_point(p, p, 0.6).unwrap();
        let z = Complex64::from_polar(b.r, 0.6);
        let cfg = SearchConfig::new(1, 300, 42).unwrap();
        let out = search_violation(p, p, z, &cfg).unwrap();
        assert!(out.best_ratio <= 1.0 + RATIO_SLACK, "ratio {}", out.best_ratio);
    }

    #[test]
    fn search_finds_exterior_violation() {
        let p = 2.5;
        let b = boundary_point(p, p, 0.6).unwrap();
        let z = Complex64::from_polar(1.05 * b.r, 0.6);
        let cfg = SearchConfig::new(1, 200, 7).unwrap();
        let out = search_violation(p, p, z, &cfg).unwrap();
        assert!(out.best_ratio > 1.0 + 1e-4, "ratio {}", out.best_ratio);
        // the reported witness reproduces the ratio
        let check = norm_ratio(&out.witness, p, p, z).unwrap();
        assert!((check - out.best_ratio).abs() < 1e-10);
    }

    #[test]
    fn search_multidimensional_agrees_with_two_point() {
        let p = 2.5;
        let b = boundary_point(p, p, 0.6).unwrap();
        let z = Complex64::from_polar(b.r, 0.6);
        let cfg = SearchConfig::new(3, 60, 11).unwrap();
        let out = search_violation(p, p, z, &cfg).unwrap();
        assert!(out.best_ratio <= 1.0 + RATIO_SLACK, "ratio {}", out.best_ratio);
    }

    #[test]
    fn search_reproducible() {
        let z = Complex64::new(0.5, 0.3);
        let cfg = SearchConfig::new(1, 50, 99).unwrap();
        let a = search_violation(2.2, 2.2, z, &cfg).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| search_violation(2.2, 2.2, z, &cfg)).unwrap();
        assert_eq!(a.best_ratio.to_bits(), b.best_ratio.to_bits());
        assert_eq!(a.restart_index, b.restart_index);
        assert_eq!(a.witness.coeffs(), b.witness.coeffs());
    }

    #[test]
    fn ray_exclusion_monotone() {
        // once a violation shows up along a ray, pushing further out keeps it
        let p = 2.5;
        let t = 0.9;
        let b = boundary_point(p, p, t).unwrap();
        let cfg = SearchConfig::new(1, 100, 5).unwrap();
        let mut prev = 0.0;
        for scale in [1.02, 1.05, 1.1, 1.2] {
            let z = Complex64::from_polar(scale * b.r, t);
            let out = search_violation(p, p, z, &cfg).unwrap();
            assert!(out.best_ratio >= prev - 1e-9, "scale {scale}");
            prev = out.best_ratio.max(prev);
        }
        assert!(prev > 1.0);
    }

    #[test]
    fn tensorization_identity() {
        let z = Complex64::new(0.4, 0.25);
        let f = random_function(2, 3);
        assert!(tensorization_check(&f, 1, 2.3, 2.7, z).unwrap() < 1e-14);
        assert!(tensorization_check(&f, 2, 2.3, 2.7, z).unwrap() < 1e-10);
        let g = random_function(1, 4);
        assert!(tensorization_check(&g, 3, 2.5, 2.5, z).unwrap() < 1e-10);
    }

    #[test]
    fn induction_step_gaps() {
        let p = 2.5;
        let b = boundary_point(p, p, 0.5).unwrap();
        let z = Complex64::from_polar(b.r, 0.5);
        // no x_1 dependence: every gap vanishes
        let mut coeffs = vec![Complex64::ZERO; 4];
        coeffs[0b00] = Complex64::new(1.0, 0.2);
        coeffs[0b10] = Complex64::new(0.4, -0.1);
        let f = CubeFunction::from_coeffs(coeffs).unwrap();
        assert!(induction_step_check(&f, p, p, z).unwrap().abs() < 1e-12);

        for seed in 0..8 {
            let f = random_function(2, 100 + seed);
            let gap = induction_step_check(&f, p, p, z).unwrap();
            assert!(gap >= -1e-10, "seed {seed}: {gap}");
        }
        for seed in 0..4 {
            let f = random_function(3, 200 + seed);
            let gap = induction_step_check(&f, p, p, z).unwrap();
            assert!(gap >= -1e-10, "seed {seed}: {gap}");
        }
    }

    #[test]
    fn search_report_roundtrip() {
        let z = Complex64::new(0.5, 0.2);
        let cfg = SearchConfig::new(1, 20, 1).unwrap();
        let report = search_report(2.5, 2.5, z, &cfg).unwrap();
        assert_eq!(report.schema, 1);
        let bytes = base64::engine::general_purpose::STANDARD
            .decode(&report.witness_coeffs_b64)
            .unwrap();
        assert_eq!(bytes.len(), 2 * 16);
    }
}
