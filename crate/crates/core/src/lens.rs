//! Geometry of the admissibility domain for the complex noise operator:
//! membership, polar boundary (both the variational and the closed form),
//! the exterior-angle exponent, and the `p <-> p'` duality.
//!
//! Admissibility of `(p, q, z)` is the condition
//! `|p - 2 - z^2 (q - 2)| <= p - |z|^2 q`. At `p = q` the domain is the lens
//! cut out by two circles through `±1`.

use num_complex::Complex64;
use serde::Serialize;

use crate::cube::check_scalar;
use crate::error::{Error, Result};

/// Derived lens geometry at `p = q`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LensParams {
    pub p: f64,
    pub q: f64,
    /// Distance of the two circle centers `±i·offset` from the origin:
    /// `|p-2| / (2 sqrt(p-1))`.
    pub center_offset: f64,
    /// Common circle radius `p / (2 sqrt(p-1))`.
    pub radius: f64,
    /// Exterior-angle exponent `alpha_p`.
    pub alpha: f64,
    /// `s = p/2`.
    pub s: f64,
    /// `min(sqrt(p-1), 1/sqrt(p-1))`, the extent of the lens along the
    /// imaginary axis; equals `r(pi/2)`.
    pub real_cap: f64,
}

impl LensParams {
    /// Lens parameters for `p = q > 1`.
    pub fn new(p: f64) -> Result<Self> {
        if !(p > 1.0) {
            return Err(Error::InvalidInput(format!("lens requires p > 1, got {p}")));
        }
        let root = (p - 1.0).sqrt();
        Ok(Self {
            p,
            q: p,
            center_offset: (p - 2.0).abs() / (2.0 * root),
            radius: p / (2.0 * root),
            alpha: alpha(p),
            s: p / 2.0,
            real_cap: root.min(1.0 / root),
        })
    }
}

/// A point of the domain boundary in polar coordinates.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PolarBoundary {
    /// Direction angle in radians.
    pub t: f64,
    /// Boundary radius `r(t)`.
    pub r: f64,
    /// `c(t) = 1 / r(t)`.
    pub c: f64,
}

/// Decides admissibility of `(p, q, z)`; the boundary counts as admissible.
pub fn is_admissible(p: f64, q: f64, z: Complex64) -> Result<bool> {
    Ok(admissibility_margin(p, q, z)? >= -BOUNDARY_TOL)
}

/// FP slack for boundary membership.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// Signed margin of the admissibility inequality,
/// `(p - |z|^2 q) - |p - 2 - z^2 (q - 2)|`; nonnegative means admissible.
pub fn admissibility_margin(p: f64, q: f64, z: Complex64) -> Result<f64> {
    check_scalar(z)?;
    if !(1.0 <= p && p <= q) || !q.is_finite() {
        return Err(Error::InvalidInput(format!(
            "admissibility requires 1 <= p <= q < inf, got p = {p}, q = {q}"
        )));
    }
    if q == 1.0 {
        // degenerate case: p = q = 1 and the domain is the segment [-1, 1]
        let on_segment = z.im.abs() <= BOUNDARY_TOL && z.re.abs() <= 1.0 + BOUNDARY_TOL;
        return Ok(if on_segment { 0.0 } else { -z.im.abs().max(z.re.abs() - 1.0) });
    }
    let lhs = (Complex64::new(p - 2.0, 0.0) - z * z * (q - 2.0)).norm();
    let rhs = p - z.norm_sqr() * q;
    Ok(rhs - lhs)
}

/// Boundary radius in direction `e^{it}` from the variational formula
/// `r(t) = inf_beta sqrt((1 + (p-2) cos^2 beta) / (1 + (q-2) cos^2(t+beta)))`.
///
/// The infimum is located on a 512-point grid over `[0, pi)` and refined by
/// golden-section search to absolute tolerance 1e-11.
pub fn boundary_radius_inf(p: f64, q: f64, t: f64) -> Result<f64> {
    if !(p > 1.0 && q > 1.0) {
        return Err(Error::InvalidInput(format!(
            "boundary_radius_inf requires p, q > 1, got p = {p}, q = {q}"
        )));
    }
    let objective = |beta: f64| {
        ((1.0 + (p - 2.0) * beta.cos().powi(2))
            / (1.0 + (q - 2.0) * (t + beta).cos().powi(2)))
        .sqrt()
    };
    const GRID: usize = 512;
    let step = core::f64::consts::PI / GRID as f64;
    let mut best_i = 0;
    let mut best = f64::INFINITY;
    for i in 0..GRID {
        let v = objective(i as f64 * step);
        if v < best {
            best = v;
            best_i = i;
        }
    }
    let lo = (best_i as f64 - 1.0) * step;
    let hi = (best_i as f64 + 1.0) * step;
    let r = golden_min(objective, lo, hi, 1e-11, 200)?;
    Ok(r)
}

/// Golden-section minimization of a unimodal bracket.
fn golden_min<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64, cap: u32) -> Result<f64> {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut iter = 0;
    while b - a > tol {
        iter += 1;
        if iter > cap {
            return Err(Error::Numeric(format!(
                "golden-section search did not converge: bracket [{a}, {b}] after {cap} iterations"
            )));
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    Ok(f1.min(f2))
}

/// Closed-form boundary radius at `p = q >= 2`, `t` in `[0, pi/2]`.
///
/// Solves the circle relation
/// `r^2 + e^2 + 2 r e sin(t) = s^2 / (2s - 1)` with `s = p/2` and
/// `e = (s-1)/sqrt(2s-1)` for its positive root.
pub fn boundary_radius_closed(p: f64, t: f64) -> Result<f64> {
    if !(p >= 2.0) {
        return Err(Error::InvalidInput(format!(
            "closed-form boundary requires p >= 2, got {p}"
        )));
    }
    if !(0.0..=core::f64::consts::FRAC_PI_2 + 1e-12).contains(&t) {
        return Err(Error::InvalidInput(format!("t = {t} outside [0, pi/2]")));
    }
    let s = p / 2.0;
    let e = (s - 1.0) / (2.0 * s - 1.0).sqrt();
    let disc = e * e * t.sin().powi(2) - e * e + s * s / (2.0 * s - 1.0);
    if disc < 0.0 {
        return Err(Error::Numeric(format!("negative discriminant {disc} at t = {t}")));
    }
    Ok(-e * t.sin() + disc.sqrt())
}

/// Boundary point with both radius representations filled from the closed
/// form when available, otherwise the variational one.
pub fn boundary_point(p: f64, q: f64, t: f64) -> Result<PolarBoundary> {
    // reduce by evenness and pi-periodicity for the closed form
    let r = if p == q && p >= 2.0 {
        let tr = t.abs() % core::f64::consts::PI;
        let tr = tr.min(core::f64::consts::PI - tr);
        boundary_radius_closed(p, tr)?
    } else {
        boundary_radius_inf(p, q, t)?
    };
    Ok(PolarBoundary { t, r, c: 1.0 / r })
}

/// The exterior-angle exponent
/// `alpha_p = 1 + (2/pi) arctan(|p-2| / (2 sqrt(p-1)))`.
pub fn alpha(p: f64) -> f64 {
    1.0 + core::f64::consts::FRAC_2_PI * ((p - 2.0).abs() / (2.0 * (p - 1.0).sqrt())).atan()
}

/// The dual exponent `p' = p / (p - 1)`.
pub fn dual_exponent(p: f64) -> Result<f64> {
    if !(p > 1.0) {
        return Err(Error::InvalidInput(format!("dual exponent requires p > 1, got {p}")));
    }
    Ok(p / (p - 1.0))
}
