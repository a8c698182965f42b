//! End-to-end acceptance suite. Each numbered check prints one PASS/FAIL
//! line; the test fails if any check does.

use std::time::Instant;

use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use weissler_core::cube::CubeFunction;
use weissler_core::lens::{alpha, boundary_point, boundary_radius_closed, boundary_radius_inf, dual_exponent};
use weissler_core::margins;
use weissler_core::moment::{self, MomentProblem};
use weissler_core::oracle::{self, SearchConfig};
use weissler_core::scan;

struct Tally {
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, id: &str, label: &str, ok: bool, detail: String, start: Instant) {
        let verdict = if ok { "PASS" } else { "FAIL" };
        println!(
            "criterion {id} ({label}): {verdict} [{detail}; {:.2}s]",
            start.elapsed().as_secs_f64()
        );
        if !ok {
            self.failures.push(format!("criterion {id}: {detail}"));
        }
    }
}

#[test]
fn acceptance() {
    let mut tally = Tally { failures: Vec::new() };

    // 1. reduced two-point inequality over the reduced domain, refined
    let start = Instant::now();
    let mut worst = f64::INFINITY;
    let mut ok = true;
    for p in [2.1, 2.5, 2.9] {
        let report = scan::scan_reduced(p, (32, 64, 32), true).unwrap();
        worst = worst.min(report.worst_margin);
        ok &= report.worst_margin >= -1e-10;
    }
    tally.check("1", "reduced-domain scan", ok, format!("worst margin {worst:.3e}"), start);

    // 2. necessity: slightly exterior boundary points admit two-point
    // violations at small w
    let start = Instant::now();
    let p = 2.5;
    let mut worst = 0.0f64;
    let mut ok = true;
    for k in 0..8 {
        let t = (k as f64 + 0.5) * core::f64::consts::PI / 8.0;
        let b = boundary_point(p, p, t).unwrap();
        let z = Complex64::from_polar(1.02 * b.r, t);
        let report = scan::scan_two_point(p, p, z, 100, 0.2).unwrap();
        worst = worst.min(report.worst_margin);
        ok &= report.worst_margin <= -1e-6;
    }
    tally.check("2", "necessity via exterior violations", ok, format!("strongest violation {worst:.3e}"), start);

    // 3. mock log-Sobolev dichotomy at p = 3
    let start = Instant::now();
    let mut ok = true;
    let mut detail = String::new();
    for p in [3.0, 3.5, 5.0] {
        let report = scan::scan_mock_logsob(p, 160, 512).unwrap();
        ok &= report.worst_margin >= -1e-9;
        detail.push_str(&format!("p={p}: min slope {:.2e}; ", report.worst_margin));
    }
    for p in [2.3, 2.5, 2.9] {
        match margins::mock_logsob_counterexample(p) {
            Ok((_, _, slope)) => {
                ok &= slope <= -1e-6;
                detail.push_str(&format!("p={p}: counterexample slope {slope:.2e}; "));
            }
            Err(e) => {
                ok = false;
                detail.push_str(&format!("p={p}: {e}; "));
            }
        }
    }
    tally.check("3", "mock log-Sobolev dichotomy", ok, detail.trim_end_matches("; ").to_string(), start);

    // 4. cap bound and its closed-form supremum
    let start = Instant::now();
    let report = scan::scan_cap(2, 12, (64, 64)).unwrap();
    let mut ok = report.worst_margin >= -1e-12;
    let mut sup_err = 0.0f64;
    for l in 2..=12u32 {
        let g = |x: f64| x.cos().powi(2 * l as i32 - 1) * x.sin();
        let mut best_x = 0.0;
        let mut best = f64::NEG_INFINITY;
        for i in 0..=4096 {
            let x = core::f64::consts::FRAC_PI_2 * i as f64 / 4096.0;
            if g(x) > best {
                best = g(x);
                best_x = x;
            }
        }
        let (mut lo, mut hi) = (best_x - 1e-3, best_x + 1e-3);
        while hi - lo > 1e-12 {
            let m1 = lo + (hi - lo) / 3.0;
            let m2 = hi - (hi - lo) / 3.0;
            if g(m1) < g(m2) {
                lo = m1;
            } else {
                hi = m2;
            }
        }
        sup_err = sup_err.max((g(0.5 * (lo + hi)) - margins::cap_sup(l)).abs());
    }
    ok &= sup_err <= 1e-10;
    ok &= (margins::cap_sup(2) - 3.0 * 3.0f64.sqrt() / 16.0).abs() < 1e-15;
    tally.check(
        "4",
        "cap bound",
        ok,
        format!("worst margin {:.3e}, sup mismatch {sup_err:.3e}", report.worst_margin),
        start,
    );

    // 5. series coefficients and the truncated series bound
    let start = Instant::now();
    let mut ok = margins::series_coeff_a(2) == 0.25;
    let mut worst_ratio = f64::INFINITY;
    let mut worst_series = f64::INFINITY;
    for s in [1.01, 1.25, 1.49] {
        let ratio = scan::scan_coefficient_ratio(s, 64).unwrap();
        worst_ratio = worst_ratio.min(ratio.worst_margin);
        ok &= ratio.worst_margin >= 0.0;
        let series = scan::scan_series(s, (24, 24, 24), 16).unwrap();
        worst_series = worst_series.min(series.worst_margin);
        ok &= series.worst_margin >= 0.0;
    }
    tally.check(
        "5",
        "series coefficient bounds",
        ok,
        format!("ratio margin {worst_ratio:.3e}, series margin {worst_series:.3e}"),
        start,
    );

    // 6. oracle search at boundary points plus tensorization
    let start = Instant::now();
    let p = 2.5;
    let mut best = 0.0f64;
    for k in 0..16 {
        let t = 2.0 * core::f64::consts::PI * k as f64 / 16.0;
        let b = boundary_point(p, p, t).unwrap();
        let z = Complex64::from_polar(b.r, t);
        let cfg = SearchConfig::new(1, 10_000, 2024).unwrap();
        let out = oracle::search_violation(p, p, z, &cfg).unwrap();
        best = best.max(out.best_ratio);
    }
    let mut ok = best <= 1.0 + 1e-8;
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut tensor_err = 0.0f64;
    for _ in 0..50 {
        let n = rng.gen_range(1..=2);
        let coeffs = (0..1usize << n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let f = CubeFunction::from_coeffs(coeffs).unwrap();
        let k = rng.gen_range(1..=3);
        let z = Complex64::new(rng.gen_range(-0.6..0.6), rng.gen_range(-0.6..0.6));
        tensor_err = tensor_err.max(oracle::tensorization_check(&f, k, 2.3, 2.7, z).unwrap());
    }
    ok &= tensor_err <= 1e-10;
    tally.check(
        "6",
        "oracle search and tensorization",
        ok,
        format!("best ratio - 1 = {:.3e}, tensor error {tensor_err:.3e}", best - 1.0),
        start,
    );

    // 7. endgame scalar bound, exact integer arithmetic
    let start = Instant::now();
    let ok = margins::endgame_rational_holds();
    tally.check("7", "endgame rational comparison", ok, "3*81 <= 256".into(), start);

    // 8. multiplier engine
    let start = Instant::now();
    let mut ok = true;
    let mut detail = String::new();
    {
        let d = 6;
        let phi: Vec<Complex64> = (0..=d).map(|j| Complex64::new(0.5f64.powi(j as i32), 0.0)).collect();
        let prob = MomentProblem::new(2.5, 2.5, d, phi).unwrap();
        let (s, _, _) = moment::solve(&prob).unwrap();
        ok &= s.lower >= 1.0 - 1e-3 && s.upper <= 1.0 + 1e-2;
        detail.push_str(&format!("geometric: [{:.6}, {:.6}]; ", s.lower, s.upper));
    }
    {
        let mut phi = vec![Complex64::ZERO; 7];
        phi[0] = Complex64::ONE;
        let prob = MomentProblem::new(2.5, 2.5, 6, phi).unwrap();
        let (s, _, _) = moment::solve(&prob).unwrap();
        ok &= (s.lower - 1.0).abs() <= 1e-6 && (s.upper - 1.0).abs() <= 1e-6;
        detail.push_str(&format!("delta: [{:.8}, {:.8}]; ", s.lower, s.upper));
    }
    for d in [2u32, 3, 4] {
        let phi: Vec<Complex64> = (0..=d).map(|j| Complex64::new(j as f64, 0.0)).collect();
        let prob = MomentProblem::new(2.5, 2.5, d, phi.clone()).unwrap();
        let (s, _, _) = moment::solve(&prob).unwrap();
        let bound = 10.0 * (d as f64).powf(alpha(2.5));
        ok &= s.upper <= bound;
        let worst = moment::certify_on_cube(&phi, d, 2.5, 2.5, 200, 5, 31 + d as u64).unwrap();
        ok &= worst <= s.upper + 1e-6;
        detail.push_str(&format!("laplacian d={d}: upper {:.3} <= {bound:.3}, cube {worst:.3}; ", s.upper));
    }
    tally.check("8", "multiplier engine", ok, detail.trim_end_matches("; ").to_string(), start);

    // 9. geometry cross-checks
    let start = Instant::now();
    let mut geo_err = 0.0f64;
    for p in [2.1, 2.5, 2.9, 4.0] {
        for i in 0..256 {
            // reduce by evenness and π-periodicity to the first quadrant
            let raw = 2.0 * core::f64::consts::PI * i as f64 / 256.0;
            let folded = raw.rem_euclid(core::f64::consts::PI);
            let t = folded.min(core::f64::consts::PI - folded);
            let closed = boundary_radius_closed(p, t).unwrap();
            let inf = boundary_radius_inf(p, p, t).unwrap();
            geo_err = geo_err.max((closed - inf).abs());
        }
    }
    let mut ok = geo_err <= 1e-9;
    let mut alpha_err = 0.0f64;
    for i in 0..20 {
        let p = 1.05 + 0.4 * i as f64;
        alpha_err = alpha_err.max((alpha(p) - alpha(dual_exponent(p).unwrap())).abs());
    }
    ok &= alpha_err <= 1e-12;
    tally.check(
        "9",
        "boundary and exponent geometry",
        ok,
        format!("boundary mismatch {geo_err:.3e}, alpha duality {alpha_err:.3e}"),
        start,
    );

    assert!(tally.failures.is_empty(), "failed: {:?}", tally.failures);
}
