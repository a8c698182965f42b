//! Signed margins for every inequality in the proof chain of the two-point
//! theorem, plus the counterexample search for the regime where the
//! monotonicity route is known to break.
//!
//! All margins are oriented so that a nonnegative value means the inequality
//! holds at the given point.

use num_complex::Complex64;
use serde::Serialize;

use crate::cube::check_scalar;
use crate::error::{Error, Result};

/// A point of the reduced two-point inequality: exponent `s = p/2`, lens
/// value `c = c(t)`, angles `a`, `t`, and radius `y`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ReducedPoint {
    pub s: f64,
    pub c: f64,
    pub a: f64,
    pub t: f64,
    pub y: f64,
}

/// Two-point inequality margin at `(z, w)`:
/// `((|1+w|^p + |1-w|^p)/2)^{q/p} - (|1+wz|^q + |1-wz|^q)/2`.
pub fn two_point_margin(p: f64, q: f64, z: Complex64, w: Complex64) -> Result<f64> {
    check_scalar(z)?;
    check_scalar(w)?;
    if !(1.0 <= p && p <= q) {
        return Err(Error::InvalidInput(format!(
            "two_point_margin requires 1 <= p <= q, got p = {p}, q = {q}"
        )));
    }
    let one = Complex64::ONE;
    let lhs = (((one + w).norm().powf(p) + (one - w).norm().powf(p)) / 2.0).powf(q / p);
    let rhs = ((one + w * z).norm().powf(q) + (one - w * z).norm().powf(q)) / 2.0;
    Ok(lhs - rhs)
}

/// Infinitesimal (second-order in `w`) margin at a unit direction `v`:
/// `(|v|^2 + (p-2)(Re v)^2) - (|vz|^2 + (q-2)(Re vz)^2)`.
pub fn necessity_margin(p: f64, q: f64, z: Complex64, v: Complex64) -> Result<f64> {
    check_scalar(z)?;
    check_scalar(v)?;
    if (v.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidInput(format!("v must be a unit vector, |v| = {}", v.norm())));
    }
    let vz = v * z;
    Ok(v.norm_sqr() + (p - 2.0) * v.re * v.re - (vz.norm_sqr() + (q - 2.0) * vz.re * vz.re))
}

/// Minimum of [`necessity_margin`] over a 720-point grid of unit directions.
pub fn necessity_min(p: f64, q: f64, z: Complex64) -> Result<(f64, Complex64)> {
    let mut best = f64::INFINITY;
    let mut arg = Complex64::ONE;
    for i in 0..720 {
        let v = Complex64::from_polar(1.0, core::f64::consts::PI * i as f64 / 720.0);
        let m = necessity_margin(p, q, z, v)?;
        if m < best {
            best = m;
            arg = v;
        }
    }
    Ok((best, arg))
}

/// Margin of the reduced inequality with exponent `s`:
/// `(c^2 y^2 + 1 ± 2cy cos(a+t))^s` sums against the same expression at
/// `c = 1` and angle `a`.
pub fn reduced_margin(pt: &ReducedPoint) -> f64 {
    let ReducedPoint { s, c, a, t, y } = *pt;
    let cy = c * y;
    let lhs = (cy * cy + 1.0 + 2.0 * cy * (a + t).cos()).powf(s)
        + (cy * cy + 1.0 - 2.0 * cy * (a + t).cos()).powf(s);
    let rhs = (y * y + 1.0 + 2.0 * y * a.cos()).powf(s)
        + (y * y + 1.0 - 2.0 * y * a.cos()).powf(s);
    lhs - rhs
}

/// The two-term map whose monotonicity in the angle is the mock log-Sobolev
/// inequality; evaluated at angle `s_theta` for fixed `p > 2` and `x`.
pub fn mock_logsob_value(p: f64, x: f64, s_theta: f64) -> Result<f64> {
    if !(p > 2.0) {
        return Err(Error::InvalidInput(format!("mock log-Sobolev requires p > 2, got {p}")));
    }
    let g = 1.0 + (p - 2.0) * s_theta.cos().powi(2);
    let quad = 1.0 + x * x / g;
    let cross = 2.0 * x * s_theta.cos() / g.sqrt();
    Ok((quad + cross).powf(p / 2.0) + (quad - cross).powf(p / 2.0))
}

/// Minimum forward-difference slope of the mock log-Sobolev map over an
/// `(x, angle)` grid; the witness is returned with it.
pub fn mock_logsob_min_slope(p: f64, x_count: usize, angle_count: usize) -> Result<(f64, f64, f64)> {
    let h = core::f64::consts::FRAC_PI_2 / angle_count as f64;
    let mut worst = f64::INFINITY;
    let mut witness = (0.0, 0.0);
    for xi in 0..x_count {
        let x = 0.05 + 5.0 * xi as f64 / (x_count - 1) as f64;
        let mut prev = mock_logsob_value(p, x, 0.0)?;
        for si in 1..=angle_count {
            let s = h * si as f64;
            let cur = mock_logsob_value(p, x, s)?;
            let slope = (cur - prev) / h;
            if slope < worst {
                worst = slope;
                witness = (x, s - h);
            }
            prev = cur;
        }
    }
    Ok((worst, witness.0, witness.1))
}

/// Finds a point with strictly negative slope of the mock log-Sobolev map for
/// `p` in `(2, 3)`; such a witness exists exactly in that range.
///
/// Returns `(x, angle, slope)`. The search concentrates near the angle where
/// the weight hits `1/(p-1)`, which is where the power-series comparison
/// reverses.
pub fn mock_logsob_counterexample(p: f64) -> Result<(f64, f64, f64)> {
    if !(2.0 < p && p < 3.0) {
        return Err(Error::InvalidInput(format!(
            "counterexample search requires p in (2, 3), got {p}"
        )));
    }
    let (slope, x, s) = mock_logsob_min_slope(p, 160, 512)?;
    if slope < -1e-6 {
        return Ok((x, s, slope));
    }
    Err(Error::SearchFailure(format!(
        "no negative slope found for p = {p}; best slope {slope} at x = {x}, angle = {s}"
    )))
}

/// Generalized binomial coefficient `binom(s, k)` for real `s`, computed by
/// the falling-factorial product. Exact for integer arguments.
pub fn real_binomial(s: f64, k: u32) -> f64 {
    let mut acc = 1.0;
    for i in 0..k {
        acc *= (s - i as f64) / (i as f64 + 1.0);
    }
    acc
}

/// `sup_x cos^{2l-1}(x) sin(x) = ((2l-1)/(2l))^{(2l-1)/2} / sqrt(2l)`.
pub fn cap_sup(l: u32) -> f64 {
    let m = 2.0 * l as f64;
    ((m - 1.0) / m).powf((m - 1.0) / 2.0) / m.sqrt()
}

/// Series coefficient `a_l = 2 |binom(1/2, l)|`; `a_2 = 1/4` exactly.
pub fn series_coeff_a(l: u32) -> f64 {
    2.0 * real_binomial(0.5, l).abs()
}

/// Series coefficient
/// `b_l = sqrt(2l) ((2l-1)/(2l))^{(2l-1)/2} |binom(s, 2l)|`.
pub fn series_coeff_b(l: u32, s: f64) -> f64 {
    let m = 2.0 * l as f64;
    m.sqrt() * ((m - 1.0) / m).powf((m - 1.0) / 2.0) * real_binomial(s, 2 * l).abs()
}

/// Margin of the coefficient-ratio bound `b_{l+1}/b_l <= (l - 1/2)/(l + 1)`.
pub fn coefficient_ratio_check(l: u32, s: f64) -> Result<f64> {
    if l < 2 {
        return Err(Error::InvalidInput(format!("coefficient ratio needs l >= 2, got {l}")));
    }
    if !(1.0 < s && s < 1.5) {
        return Err(Error::InvalidInput(format!("coefficient ratio needs s in (1, 3/2), got {s}")));
    }
    let lf = l as f64;
    Ok((lf - 0.5) / (lf + 1.0) - series_coeff_b(l + 1, s) / series_coeff_b(l, s))
}

/// Result of the truncated series comparison: the margin against the closed
/// fourth-order bound, and a geometric estimate of the discarded tail.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SeriesMargin {
    pub margin: f64,
    pub tail_bound: f64,
}

/// Compares the tail series
/// `sum_{l>=2} (2y/(1+y^2))^{2l} (cos^{2l} a - cos^{2l}(a+t)) binom(s, 2l)`
/// against its closed upper bound
/// `(sqrt(3)/4) s(s-1)(s-2)(s-3)/2 (2y/(1+y^2))^2 y^2 sin(t)`.
///
/// The series is truncated at `l = truncation`; the unread tail is bounded by
/// a ratio-test geometric estimate and reported separately.
pub fn series_bound_margin(s: f64, a: f64, t: f64, y: f64, truncation: u32) -> Result<SeriesMargin> {
    if !(1.0 < s && s < 1.5) {
        return Err(Error::InvalidInput(format!("series bound needs s in (1, 3/2), got {s}")));
    }
    if truncation < 16 {
        return Err(Error::InvalidInput(format!(
            "truncation must be >= 16, got {truncation}"
        )));
    }
    if !(0.0 <= a && a <= a + t && a + t <= core::f64::consts::FRAC_PI_2 + 1e-12) || y < 0.0 {
        return Err(Error::InvalidInput(format!(
            "series bound needs 0 <= a <= a+t <= pi/2 and y >= 0, got a = {a}, t = {t}, y = {y}"
        )));
    }
    let w = 2.0 * y / (1.0 + y * y);
    let w2 = w * w;
    let ca = a.cos();
    let cat = (a + t).cos();
    let mut lhs = 0.0;
    let mut last_term_bound = 0.0;
    for l in 2..=truncation {
        let pow = w2.powi(l as i32);
        let coeff = real_binomial(s, 2 * l);
        lhs += pow * (ca.powi(2 * l as i32) - cat.powi(2 * l as i32)) * coeff;
        last_term_bound = pow * coeff.abs();
    }
    // successive term ratio is at most w^2 (l - 1/2)/(l + 1) < 1; bound the
    // tail by a geometric series with the ratio at the truncation index
    let lf = truncation as f64;
    let ratio = (w2 * (lf - 0.5) / (lf + 1.0)).min(1.0 - 1e-12);
    let tail_bound = last_term_bound * ratio / (1.0 - ratio);
    let rhs = 3f64.sqrt() / 4.0 * s * (s - 1.0) * (s - 2.0) * (s - 3.0) / 2.0 * w2 * y * y * t.sin();
    Ok(SeriesMargin { margin: rhs - lhs, tail_bound })
}

/// Margin of the sliding-window cap bound for `cos^{2l-1}(x) sin(x)`:
/// `sup · sin(t) - (cos^{2l}(a) - cos^{2l}(a+t)) / (2l)`.
pub fn cap_integral_margin(l: u32, a: f64, t: f64) -> Result<f64> {
    if l < 2 {
        return Err(Error::InvalidInput(format!("cap bound needs l >= 2, got {l}")));
    }
    if !(0.0 <= a && a <= a + t && a + t <= core::f64::consts::FRAC_PI_2 + 1e-12) {
        return Err(Error::InvalidInput(format!(
            "cap bound needs 0 <= a <= a+t <= pi/2, got a = {a}, t = {t}"
        )));
    }
    let m = 2 * l as i32;
    let integral = (a.cos().powi(m) - (a + t).cos().powi(m)) / (2.0 * l as f64);
    Ok(cap_sup(l) * t.sin() - integral)
}

/// Endpoint-minimum margin of the final linear-in-`u` inequality of the
/// chain, with `u = y^2` taken at `0` and `1/C`.
pub fn final_chain_margin(s: f64, c_sq: f64, a: f64, t: f64) -> Result<f64> {
    if !(1.0 < s && s <= 1.5) {
        return Err(Error::InvalidInput(format!("final chain needs s in (1, 3/2], got {s}")));
    }
    if !(1.0 - 1e-12..=2.0 * s - 1.0 + 1e-9).contains(&c_sq) {
        return Err(Error::InvalidInput(format!(
            "final chain needs C in [1, 2s-1], got C = {c_sq} for s = {s}"
        )));
    }
    if !(0.0 <= a && a <= a + t && a + t <= core::f64::consts::FRAC_PI_2 + 1e-12) {
        return Err(Error::InvalidInput(format!(
            "final chain needs 0 <= a <= a+t <= pi/2, got a = {a}, t = {t}"
        )));
    }
    let cat2 = (a + t).cos().powi(2);
    let base = (c_sq - 1.0) * (1.0 + 2.0 * (s - 1.0) * cat2)
        - 2.0 * (s - 1.0) * (a.cos().powi(2) - cat2);
    let slope = (c_sq - 1.0) * (1.0 - 2.0 * (s - 1.0) * (2.0 - s) * c_sq * cat2)
        - 3f64.sqrt() / 2.0 * (s - 1.0) * (s - 2.0) * (s - 3.0) * t.sin();
    Ok(base.min(base + slope / c_sq))
}

/// Exact rational anchor of the endgame: `sqrt(3) <= 16/9`, i.e.
/// `3 * 81 <= 256`, checked in integers with zero tolerance.
pub fn endgame_rational_holds() -> bool {
    3u64 * 81 <= 256
}

/// The endgame scalar `(s - 3/2)^2 + (4/sqrt(3) - 9/4)`, nonnegative as a
/// consequence of [`endgame_rational_holds`].
pub fn endgame_scalar(s: f64) -> f64 {
    (s - 1.5).powi(2) + (4.0 / 3f64.sqrt() - 2.25)
}

/// Margin of the self-improvement inequality for `c >= 1`, `c y > 1`:
/// `(c^2 + 1/(c^2 y^2) ± (2/y) cos a)^s` sums against the same at `c = 1`.
pub fn self_improvement_margin(s: f64, c: f64, a: f64, y: f64) -> Result<f64> {
    if c < 1.0 {
        return Err(Error::InvalidInput(format!("self-improvement needs c >= 1, got {c}")));
    }
    if c * y <= 1.0 {
        return Err(Error::InvalidInput(format!(
            "self-improvement needs c*y > 1, got c*y = {}",
            c * y
        )));
    }
    let cross = 2.0 / y * a.cos();
    let lhs_quad = c * c + 1.0 / (c * c * y * y);
    let rhs_quad = 1.0 + 1.0 / (y * y);
    let lhs = (lhs_quad + cross).powf(s) + (lhs_quad - cross).powf(s);
    let rhs = (rhs_quad + cross).powf(s) + (rhs_quad - cross).powf(s);
    Ok(lhs - rhs)
}
