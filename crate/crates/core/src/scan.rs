//! Grid scans over the inequality margins, with local refinement around the
//! worst cell. A scan is deterministic for a fixed grid regardless of
//! how many worker threads evaluate it.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lens::boundary_point;
use crate::margins;
use crate::report::{AxisSpec, VerificationReport, WitnessParam};

/// Default pass tolerance for theorem-side scans.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// Relative cell width down to which the worst cell is refined.
const REFINE_TARGET: f64 = 1e-4;
/// Points per axis in each local refinement pass.
const REFINE_POINTS: usize = 9;

fn decode(axes: &[AxisSpec], mut idx: usize, out: &mut Vec<f64>) {
    out.clear();
    for axis in axes {
        out.push(axis.value(idx % axis.count));
        idx /= axis.count;
    }
}

/// Evaluates `margin_fn` over the Cartesian grid, optionally refines around
/// the minimizer, and assembles the report. `witness_fn` converts the raw
/// grid coordinates of the minimizer into named parameters.
pub fn scan<F, W>(
    name: &str,
    axes: Vec<AxisSpec>,
    tolerance: f64,
    refine: bool,
    margin_fn: F,
    witness_fn: W,
) -> Result<VerificationReport>
where
    F: Fn(&[f64]) -> f64 + Sync,
    W: Fn(&[f64]) -> Vec<WitnessParam>,
{
    let total: usize = axes.iter().map(|a| a.count).product();
    if total == 0 || axes.is_empty() {
        return Err(Error::InvalidInput("empty grid".into()));
    }
    let start = std::time::Instant::now();

    let (worst, worst_idx) = (0..total)
        .into_par_iter()
        .map(|idx| {
            let mut coords = Vec::with_capacity(axes.len());
            decode(&axes, idx, &mut coords);
            (margin_fn(&coords), idx)
        })
        .reduce(
            || (f64::INFINITY, usize::MAX),
            |a, b| {
                if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a }
            },
        );

    let mut evaluated = total as u64;
    let mut worst_coords = Vec::new();
    decode(&axes, worst_idx, &mut worst_coords);
    let mut worst_margin = worst;

    if refine {
        let mut widths: Vec<f64> = axes.iter().map(|a| a.cell_width()).collect();
        let ranges: Vec<f64> = axes.iter().map(|a| (a.max - a.min).abs().max(1e-300)).collect();
        // shrink the box around the current minimizer until every cell is
        // below the relative target width
        for _ in 0..32 {
            if widths
                .iter()
                .zip(&ranges)
                .all(|(w, r)| *w <= REFINE_TARGET * r || *w == 0.0)
            {
                break;
            }
            let local: Vec<AxisSpec> = axes
                .iter()
                .zip(&worst_coords)
                .zip(&widths)
                .map(|((axis, &x), &w)| {
                    let lo = (x - w).max(axis.min);
                    let hi = (x + w).min(axis.max);
                    AxisSpec::new(&axis.name, lo, hi, if w == 0.0 { 1 } else { REFINE_POINTS })
                })
                .collect();
            let local_total: usize = local.iter().map(|a| a.count).product();
            let (m, idx) = (0..local_total)
                .into_par_iter()
                .map(|idx| {
                    let mut coords = Vec::with_capacity(local.len());
                    decode(&local, idx, &mut coords);
                    (margin_fn(&coords), idx)
                })
                .reduce(
                    || (f64::INFINITY, usize::MAX),
                    |a, b| {
                        if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a }
                    },
                );
            evaluated += local_total as u64;
            if m < worst_margin {
                worst_margin = m;
                decode(&local, idx, &mut worst_coords);
            }
            for (w, local_axis) in widths.iter_mut().zip(&local) {
                *w = local_axis.cell_width();
            }
        }
    }

    let witness = witness_fn(&worst_coords);
    Ok(VerificationReport {
        schema: 1,
        inequality: name.to_string(),
        grid: axes,
        evaluated,
        worst_margin,
        witness,
        tolerance,
        pass: worst_margin >= -tolerance,
        seconds: start.elapsed().as_secs_f64(),
    })
}

/// Scan of the reduced two-point inequality at `p = q` over the reduced
/// domain, with `c = c(t)` from the closed-form boundary.
///
/// Axes are fractions: `a = a_frac (pi/2 - t)` and `y = y_frac / c(t)`.
pub fn scan_reduced(p: f64, counts: (usize, usize, usize), refine: bool) -> Result<VerificationReport> {
    if !(2.0 < p && p < 3.0) {
        return Err(Error::InvalidInput(format!("reduced scan requires p in (2, 3), got {p}")));
    }
    let s = p / 2.0;
    let axes = vec![
        AxisSpec::new("a_frac", 0.0, 1.0, counts.0),
        AxisSpec::new("t", 0.0, core::f64::consts::FRAC_PI_2, counts.1),
        AxisSpec::new("y_frac", 0.0, 1.0, counts.2),
    ];
    let point = move |coords: &[f64]| -> margins::ReducedPoint {
        let (af, t, yf) = (coords[0], coords[1], coords[2]);
        let c = boundary_point(p, p, t).expect("valid boundary").c;
        margins::ReducedPoint {
            s,
            c,
            a: af * (core::f64::consts::FRAC_PI_2 - t),
            t,
            y: yf / c,
        }
    };
    scan(
        &format!("reduced(p={p})"),
        axes,
        DEFAULT_TOLERANCE,
        refine,
        move |coords| margins::reduced_margin(&point(coords)),
        move |coords| {
            let pt = point(coords);
            vec![
                WitnessParam::new("s", pt.s),
                WitnessParam::new("c", pt.c),
                WitnessParam::new("a", pt.a),
                WitnessParam::new("t", pt.t),
                WitnessParam::new("y", pt.y),
            ]
        },
    )
}

/// Scan of the two-point margin over a square `w`-grid at fixed `(p, q, z)`.
pub fn scan_two_point(
    p: f64,
    q: f64,
    z: Complex64,
    count: usize,
    w_max: f64,
) -> Result<VerificationReport> {
    let axes = vec![
        AxisSpec::new("w_re", -w_max, w_max, count),
        AxisSpec::new("w_im", -w_max, w_max, count),
    ];
    scan(
        &format!("two_point(p={p},q={q},z={z})"),
        axes,
        DEFAULT_TOLERANCE,
        false,
        move |c| {
            margins::two_point_margin(p, q, z, Complex64::new(c[0], c[1])).expect("valid inputs")
        },
        |c| vec![WitnessParam::new("w_re", c[0]), WitnessParam::new("w_im", c[1])],
    )
}

/// Scan of the infinitesimal necessity margin over unit directions.
pub fn scan_necessity(p: f64, q: f64, z: Complex64, count: usize) -> Result<VerificationReport> {
    let axes = vec![AxisSpec::new("v_angle", 0.0, core::f64::consts::PI, count)];
    scan(
        &format!("necessity(p={p},q={q},z={z})"),
        axes,
        1e-6,
        false,
        move |c| {
            margins::necessity_margin(p, q, z, Complex64::from_polar(1.0, c[0]))
                .expect("unit vector")
        },
        |c| vec![WitnessParam::new("v_angle", c[0])],
    )
}

/// Monotonicity scan of the mock log-Sobolev map: the margin is the forward
/// difference slope over consecutive angle grid points.
pub fn scan_mock_logsob(p: f64, x_count: usize, angle_count: usize) -> Result<VerificationReport> {
    if !(p > 2.0) {
        return Err(Error::InvalidInput(format!("mock log-Sobolev scan requires p > 2, got {p}")));
    }
    let h = core::f64::consts::FRAC_PI_2 / angle_count as f64;
    let axes = vec![
        AxisSpec::new("x", 0.05, 5.0, x_count),
        AxisSpec::new("angle", 0.0, core::f64::consts::FRAC_PI_2 - h, angle_count),
    ];
    scan(
        &format!("mock_logsob(p={p})"),
        axes,
        1e-9,
        false,
        move |c| {
            let lo = margins::mock_logsob_value(p, c[0], c[1]).expect("p > 2");
            let hi = margins::mock_logsob_value(p, c[0], c[1] + h).expect("p > 2");
            (hi - lo) / h
        },
        |c| vec![WitnessParam::new("x", c[0]), WitnessParam::new("angle", c[1])],
    )
}

/// Scan of the series comparison over the reduced domain. The margin near
/// the equality point is genuinely zero, so the scanned quantity is
/// `margin + tail_bound`: nonnegative exactly when the truncated margin is
/// no worse than the truncation uncertainty.
pub fn scan_series(
    s: f64,
    counts: (usize, usize, usize),
    truncation: u32,
) -> Result<VerificationReport> {
    let axes = vec![
        AxisSpec::new("a_frac", 0.0, 1.0, counts.0),
        AxisSpec::new("t", 0.0, core::f64::consts::FRAC_PI_2, counts.1),
        AxisSpec::new("y", 0.0, 1.0, counts.2),
    ];
    scan(
        &format!("series_bound(s={s})"),
        axes,
        DEFAULT_TOLERANCE,
        false,
        move |c| {
            let t = c[1];
            let a = c[0] * (core::f64::consts::FRAC_PI_2 - t);
            let m = margins::series_bound_margin(s, a, t, c[2], truncation).expect("reduced domain");
            m.margin + m.tail_bound
        },
        |c| {
            vec![
                WitnessParam::new("a_frac", c[0]),
                WitnessParam::new("t", c[1]),
                WitnessParam::new("y", c[2]),
            ]
        },
    )
}

/// Scan of the cap bound over `l` in `[l_min, l_max]` and the reduced
/// angles.
pub fn scan_cap(
    l_min: u32,
    l_max: u32,
    counts: (usize, usize),
) -> Result<VerificationReport> {
    if l_min < 2 || l_max < l_min {
        return Err(Error::InvalidInput(format!("cap scan requires 2 <= l_min <= l_max, got {l_min}..{l_max}")));
    }
    let axes = vec![
        AxisSpec::new("l", l_min as f64, l_max as f64, (l_max - l_min + 1) as usize),
        AxisSpec::new("a_frac", 0.0, 1.0, counts.0),
        AxisSpec::new("t_frac", 0.0, 1.0, counts.1),
    ];
    scan(
        "cap_integral",
        axes,
        1e-12,
        false,
        move |c| {
            let l = c[0].round() as u32;
            let a = c[1] * core::f64::consts::FRAC_PI_2;
            let t = c[2] * (core::f64::consts::FRAC_PI_2 - a);
            margins::cap_integral_margin(l, a, t).expect("reduced domain")
        },
        |c| {
            vec![
                WitnessParam::new("l", c[0].round()),
                WitnessParam::new("a_frac", c[1]),
                WitnessParam::new("t_frac", c[2]),
            ]
        },
    )
}

/// Scan of the endgame inequality with `C` tied to `t` through the
/// closed-form boundary (the relation that links them in the lens).
pub fn scan_final_chain(p: f64, counts: (usize, usize)) -> Result<VerificationReport> {
    if !(2.0 < p && p <= 3.0) {
        return Err(Error::InvalidInput(format!("final chain scan requires p in (2, 3], got {p}")));
    }
    let s = p / 2.0;
    let axes = vec![
        AxisSpec::new("a_frac", 0.0, 1.0, counts.0),
        AxisSpec::new("t", 0.0, core::f64::consts::FRAC_PI_2, counts.1),
    ];
    scan(
        &format!("final_chain(s={s})"),
        axes,
        DEFAULT_TOLERANCE,
        false,
        move |coords| {
            let t = coords[1];
            let a = coords[0] * (core::f64::consts::FRAC_PI_2 - t);
            let c = boundary_point(p, p, t).expect("valid boundary").c;
            margins::final_chain_margin(s, (c * c).clamp(1.0, 2.0 * s - 1.0), a, t)
                .expect("tied C in range")
        },
        |coords| vec![WitnessParam::new("a_frac", coords[0]), WitnessParam::new("t", coords[1])],
    )
}

/// Scan of the self-improvement inequality over `c in (1, sqrt(p-1)]` and
/// `c y in (1, 10]`.
pub fn scan_self_improvement(p: f64, counts: (usize, usize, usize)) -> Result<VerificationReport> {
    if !(p > 2.0) {
        return Err(Error::InvalidInput(format!("self-improvement scan requires p > 2, got {p}")));
    }
    let s = p / 2.0;
    let c_max = (p - 1.0).sqrt();
    let axes = vec![
        AxisSpec::new("c", 1.0, c_max, counts.0),
        AxisSpec::new("a", 0.0, core::f64::consts::FRAC_PI_2, counts.1),
        AxisSpec::new("cy", 1.0 + 1e-9, 10.0, counts.2),
    ];
    scan(
        &format!("self_improvement(s={s})"),
        axes,
        DEFAULT_TOLERANCE,
        false,
        move |coords| {
            let (c, a, cy) = (coords[0], coords[1], coords[2]);
            margins::self_improvement_margin(s, c, a, cy / c).expect("cy > 1")
        },
        |coords| {
            vec![
                WitnessParam::new("c", coords[0]),
                WitnessParam::new("a", coords[1]),
                WitnessParam::new("y", coords[2] / coords[0]),
            ]
        },
    )
}

/// Scan of the coefficient-ratio bound over `l in [2, l_max]`.
pub fn scan_coefficient_ratio(s: f64, l_max: u32) -> Result<VerificationReport> {
    let axes = vec![AxisSpec::new("l", 2.0, l_max as f64, (l_max - 1) as usize)];
    scan(
        &format!("coefficient_ratio(s={s})"),
        axes,
        0.0,
        false,
        move |c| margins::coefficient_ratio_check(c[0].round() as u32, s).expect("valid l"),
        |c| vec![WitnessParam::new("l", c[0].round())],
    )
}
