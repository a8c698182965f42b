//! The extremal multiplier constant as a moment problem: the least total
//! variation of a complex atomic measure on the admissible domain with
//! prescribed power moments, sandwiched between a polynomial dual bound
//! (from below) and a feasible measure (from above).

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cube::CubeFunction;
use crate::error::{Error, Result};
use crate::lens::{boundary_point, is_admissible};
use crate::simplex::solve_equality_lp;

/// Phase discretization of the dual objective's modulus.
const PHASE_GRID: usize = 64;
/// Polyhedral approximation of each pointwise modulus constraint.
const POLYGON: usize = 16;

#[derive(Debug, Clone)]
pub struct MomentProblem {
    pub p: f64,
    pub q: f64,
    /// Spectral degree; `phi` has `d + 1` entries.
    pub d: u32,
    pub phi: Vec<Complex64>,
    /// Boundary discretization count.
    pub m: usize,
    pub gap_tolerance: f64,
    pub feasibility_tolerance: f64,
    /// Restrict both atoms and polynomial constraints to the real slice of
    /// the domain; the resulting constant dominates the complex one.
    pub real_only: bool,
}

impl MomentProblem {
    pub fn new(p: f64, q: f64, d: u32, phi: Vec<Complex64>) -> Result<Self> {
        let m = 64usize.max(16 * (d as usize + 1));
        Self::with_discretization(p, q, d, phi, m)
    }

    pub fn with_discretization(
        p: f64,
        q: f64,
        d: u32,
        phi: Vec<Complex64>,
        m: usize,
    ) -> Result<Self> {
        if !(1.0 <= p && p <= q) || !q.is_finite() || q <= 1.0 {
            return Err(Error::InvalidInput(format!(
                "moment problem requires 1 <= p <= q, q > 1, got p = {p}, q = {q}"
            )));
        }
        if d > 16 {
            return Err(Error::Resource(format!("degree cap is 16, got {d}")));
        }
        if phi.len() != d as usize + 1 {
            return Err(Error::InvalidInput(format!(
                "phi must have d + 1 = {} entries, got {}",
                d + 1,
                phi.len()
            )));
        }
        if phi.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidInput("phi must be finite".into()));
        }
        if m < 8 * (d as usize + 1) {
            return Err(Error::InvalidInput(format!(
                "boundary count {m} below the floor 8(d+1) = {}",
                8 * (d + 1)
            )));
        }
        Ok(Self {
            p,
            q,
            d,
            phi,
            m,
            gap_tolerance: 1e-6,
            feasibility_tolerance: 1e-8,
            real_only: false,
        })
    }

    /// Largest real |z| in the domain.
    fn real_cap(&self) -> f64 {
        ((self.p - 1.0) / (self.q - 1.0)).sqrt()
    }

    /// Boundary samples at `count` equispaced angles.
    fn boundary_samples(&self, count: usize) -> Result<Vec<Complex64>> {
        (0..count)
            .map(|k| {
                let t = 2.0 * core::f64::consts::PI * k as f64 / count as f64;
                let b = boundary_point(self.p, self.q, t)?;
                Ok(Complex64::from_polar(b.r, t))
            })
            .collect()
    }

    /// Equispaced samples of the real slice, endpoints included. Halving
    /// the count keeps a subset, so candidate sets nest under M-doubling.
    fn real_samples(&self, count: usize) -> Vec<Complex64> {
        let cap = self.real_cap();
        (0..=count)
            .map(|k| {
                let x = -cap + 2.0 * cap * k as f64 / count as f64;
                Complex64::new(x, 0.0)
            })
            .collect()
    }

    /// Candidate atom locations for the primal.
    fn candidate_atoms(&self) -> Result<Vec<Complex64>> {
        if self.real_only {
            return Ok(self.real_samples(self.m));
        }
        let mut atoms = self.boundary_samples(self.m)?;
        atoms.push(Complex64::ZERO);
        atoms.extend(self.real_samples(self.m / 2));
        Ok(atoms)
    }

    /// Points where the dual polynomial constraint is imposed; by the
    /// maximum modulus principle the domain boundary suffices.
    fn constraint_points(&self) -> Result<Vec<Complex64>> {
        if self.real_only {
            Ok(self.real_samples(self.m))
        } else {
            self.boundary_samples(self.m)
        }
    }

    /// Dense point set used to rescale a dual witness to a certified
    /// sup-norm of 1 on the (discretized) domain.
    fn rescale_points(&self) -> Result<Vec<Complex64>> {
        if self.real_only {
            Ok(self.real_samples(4 * self.m))
        } else {
            self.boundary_samples(4 * self.m)
        }
    }
}

/// A feasible representing measure; the primal side of the sandwich.
#[derive(Debug, Clone)]
pub struct AtomicMeasure {
    /// `(location, complex weight)` pairs.
    pub atoms: Vec<(Complex64, Complex64)>,
    pub tv_norm: f64,
    /// Max-norm moment residual against the problem's `phi`.
    pub residual: f64,
}

impl AtomicMeasure {
    pub fn moments(&self, d: u32) -> Vec<Complex64> {
        (0..=d)
            .map(|j| self.atoms.iter().map(|(z, c)| c * z.powu(j)).sum())
            .collect()
    }
}

/// A two-sided estimate of the extremal constant.
#[derive(Debug, Clone, Serialize)]
pub struct NormSandwich {
    pub lower: f64,
    pub upper: f64,
    pub gap: f64,
}

/// Dual witness: polynomial coefficients with certified sup-norm <= 1 on
/// the sampled domain, and the objective value they attain.
#[derive(Debug, Clone)]
pub struct DualWitness {
    pub value: f64,
    pub coefficients: Vec<Complex64>,
}

fn poly_eval(a: &[Complex64], z: Complex64) -> Complex64 {
    a.iter().rev().fold(Complex64::ZERO, |acc, &c| acc * z + c)
}

/// Maximizes `|sum_j phi_j a_j|` over polynomials with modulus at most 1 at
/// the constraint points, then rescales the winner by its exact maximum
/// modulus over a denser sample so the reported value is a genuine lower
/// bound for the constant on the discretized domain.
pub fn dual_lower_bound(prob: &MomentProblem) -> Result<DualWitness> {
    let n_vars = 2 * (prob.d as usize + 1);
    if prob.phi.iter().all(|c| c.norm() < 1e-300) {
        return Ok(DualWitness { value: 0.0, coefficients: vec![Complex64::ZERO; prob.d as usize + 1] });
    }
    let points = prob.constraint_points()?;
    let rescale = prob.rescale_points()?;

    // columns of the equality system A' y = c, one per linearized modulus
    // constraint Re(e^{i psi} p_a(z_k)) <= 1
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(points.len() * POLYGON);
    for &zk in &points {
        let powers: Vec<Complex64> = (0..=prob.d).map(|j| zk.powu(j)).collect();
        for m in 0..POLYGON {
            let psi = Complex64::from_polar(1.0, 2.0 * core::f64::consts::PI * m as f64 / POLYGON as f64);
            let mut col = Vec::with_capacity(n_vars);
            for w in powers.iter().map(|&pw| psi * pw) {
                col.push(w.re);
                col.push(-w.im);
            }
            cols.push(col);
        }
    }
    let cost = vec![1.0; cols.len()];

    let best = (0..PHASE_GRID)
        .into_par_iter()
        .map(|k| {
            let theta =
                Complex64::from_polar(1.0, 2.0 * core::f64::consts::PI * k as f64 / PHASE_GRID as f64);
            let mut rhs = Vec::with_capacity(n_vars);
            for w in prob.phi.iter().map(|&f| theta * f) {
                rhs.push(w.re);
                rhs.push(-w.im);
            }
            let sol = solve_equality_lp(&cols, &cost, &rhs)?;
            let a: Vec<Complex64> = sol
                .multipliers
                .chunks_exact(2)
                .map(|c| Complex64::new(c[0], c[1]))
                .collect();
            let sup = rescale
                .iter()
                .map(|&z| poly_eval(&a, z).norm())
                .fold(0.0f64, f64::max);
            if sup < 1e-300 {
                return Ok((0.0, k, a));
            }
            let objective: Complex64 = prob.phi.iter().zip(&a).map(|(f, c)| f * c).sum();
            Ok((objective.norm() / sup, k, a))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .max_by(|a, b| {
            a.0.partial_cmp(&b.0)
                .unwrap_or(core::cmp::Ordering::Equal)
                .then(b.1.cmp(&a.1))
        })
        .expect("nonempty phase grid");

    let (value, _, mut a) = best;
    let sup = rescale.iter().map(|&z| poly_eval(&a, z).norm()).fold(0.0f64, f64::max);
    if sup > 1e-300 {
        for c in &mut a {
            *c /= sup;
        }
    }
    if !value.is_finite() {
        return Err(Error::Numeric("dual bound is not finite".into()));
    }
    Ok(DualWitness { value, coefficients: a })
}

fn solve_complex(a: &mut [Complex64], b: &mut [Complex64], n: usize) -> Result<()> {
    for k in 0..n {
        let mut pr = k;
        let mut pv = a[k * n + k].norm_sqr();
        for r in k + 1..n {
            let v = a[r * n + k].norm_sqr();
            if v > pv {
                pr = r;
                pv = v;
            }
        }
        if pv < 1e-280 {
            return Err(Error::Numeric("singular moment system".into()));
        }
        if pr != k {
            for j in 0..n {
                a.swap(k * n + j, pr * n + j);
            }
            b.swap(k, pr);
        }
        let piv = a[k * n + k];
        for r in k + 1..n {
            let f = a[r * n + k] / piv;
            for j in k..n {
                let t = f * a[k * n + j];
                a[r * n + j] -= t;
            }
            let t = f * b[k];
            b[r] -= t;
        }
    }
    for k in (0..n).rev() {
        let mut acc = b[k];
        for j in k + 1..n {
            acc -= a[k * n + j] * b[j];
        }
        b[k] = acc / a[k * n + k];
    }
    Ok(())
}

/// One weighted-least-norm step of the TV minimization: with weights `w`,
/// returns the `c` minimizing `sum |c_k|^2 / w_k` subject to the moment
/// equalities. The iteration `w_k = sqrt(|c_k|^2 + eps^2)` with `eps`
/// driven to zero converges to a minimum-TV solution.
fn weighted_step(powers: &[Vec<Complex64>], phi: &[Complex64], w: &[f64]) -> Result<Vec<Complex64>> {
    let n = phi.len();
    let mut gram = vec![Complex64::ZERO; n * n];
    for j in 0..n {
        for l in 0..n {
            let mut acc = Complex64::ZERO;
            for (k, wk) in w.iter().enumerate() {
                acc += *wk * powers[k][j] * powers[k][l].conj();
            }
            gram[j * n + l] = acc;
        }
    }
    // tiny ridge keeps the Gram solvable when most weights have collapsed
    let ridge = 1e-14 * (0..n).map(|j| gram[j * n + j].norm()).fold(0.0f64, f64::max).max(1e-300);
    for j in 0..n {
        gram[j * n + j] += ridge;
    }
    let mut lambda = phi.to_vec();
    solve_complex(&mut gram, &mut lambda, n)?;
    Ok(w
        .iter()
        .enumerate()
        .map(|(k, wk)| {
            let mut acc = Complex64::ZERO;
            for j in 0..n {
                acc += powers[k][j].conj() * lambda[j];
            }
            *wk * acc
        })
        .collect())
}

/// Minimum-TV representing measure over the candidate atom set, via
/// iteratively reweighted least squares with epsilon-smoothing.
pub fn primal_measure(prob: &MomentProblem) -> Result<AtomicMeasure> {
    let atoms = prob.candidate_atoms()?;
    let powers: Vec<Vec<Complex64>> = atoms
        .iter()
        .map(|&z| (0..=prob.d).map(|j| z.powu(j)).collect())
        .collect();

    let mut c = vec![Complex64::ZERO; atoms.len()];
    let mut w = vec![1.0; atoms.len()];
    let mut eps = 1e-3;
    let mut prev_tv = f64::INFINITY;
    for _ in 0..400 {
        c = weighted_step(&powers, &prob.phi, &w).map_err(|_| {
            Error::Infeasible(format!(
                "moment system unsolvable at M = {}; try a larger discretization",
                prob.m
            ))
        })?;
        let tv: f64 = c.iter().map(|v| v.norm()).sum();
        for (wk, ck) in w.iter_mut().zip(&c) {
            *wk = (ck.norm_sqr() + eps * eps).sqrt();
        }
        if eps > 1e-10 {
            eps *= 0.9;
        } else if (prev_tv - tv).abs() < 1e-12 * tv.max(1.0) {
            break;
        }
        prev_tv = tv;
    }

    // drop the smallest atoms while their combined mass stays negligible
    let tv: f64 = c.iter().map(|v| v.norm()).sum();
    let mut order: Vec<usize> = (0..atoms.len()).collect();
    order.sort_by(|&i, &j| c[i].norm().partial_cmp(&c[j].norm()).unwrap());
    let mut dropped = 0.0;
    let mut keep = vec![true; atoms.len()];
    for &i in &order {
        let mass = c[i].norm();
        if dropped + mass <= 1e-10 * tv.max(1.0) {
            dropped += mass;
            keep[i] = false;
        } else {
            break;
        }
    }
    let kept: Vec<(Complex64, Complex64)> = atoms
        .iter()
        .zip(&c)
        .zip(&keep)
        .filter(|(_, &k)| k)
        .map(|((&z, &cv), _)| (z, cv))
        .collect();

    let measure = AtomicMeasure {
        tv_norm: kept.iter().map(|(_, c)| c.norm()).sum(),
        residual: 0.0,
        atoms: kept,
    };
    let residual = measure
        .moments(prob.d)
        .iter()
        .zip(&prob.phi)
        .map(|(m, f)| (m - f).norm())
        .fold(0.0f64, f64::max);
    if residual > prob.feasibility_tolerance {
        return Err(Error::Infeasible(format!(
            "moment residual {residual:.3e} exceeds {:.1e} at M = {}; try a larger discretization",
            prob.feasibility_tolerance, prob.m
        )));
    }
    Ok(AtomicMeasure { residual, ..measure })
}

/// Runs both sides and checks they sandwich: `lower <= upper + tolerance`.
pub fn solve(prob: &MomentProblem) -> Result<(NormSandwich, AtomicMeasure, DualWitness)> {
    let dual = dual_lower_bound(prob)?;
    let primal = primal_measure(prob)?;
    if dual.value > primal.tv_norm + prob.gap_tolerance {
        return Err(Error::Inconsistent(format!(
            "sandwich inverted: lower {:.12} > upper {:.12}",
            dual.value, primal.tv_norm
        )));
    }
    let sandwich = NormSandwich {
        lower: dual.value,
        upper: primal.tv_norm,
        gap: primal.tv_norm - dual.value,
    };
    Ok((sandwich, primal, dual))
}

/// `a_S -> phi(|S|) a_S` for a function with spectrum of degree at most `d`.
pub fn apply_multiplier(f: &CubeFunction, phi: &[Complex64], d: u32) -> Result<CubeFunction> {
    if phi.len() != d as usize + 1 {
        return Err(Error::InvalidInput(format!(
            "phi must have d + 1 = {} entries, got {}",
            d + 1,
            phi.len()
        )));
    }
    let deg = f.spectral_degree(1e-14);
    if deg > d {
        return Err(Error::InvalidInput(format!(
            "function has spectral degree {deg} above the multiplier degree {d}"
        )));
    }
    Ok(f.spectral_multiplier(phi))
}

/// Worst `||phi(f)||_q / ||f||_p` over seeded random functions of spectral
/// degree at most `d` on the `n`-cube; the multiplier bound says it never
/// exceeds the TV norm of any representing measure.
pub fn certify_on_cube(
    phi: &[Complex64],
    d: u32,
    p: f64,
    q: f64,
    trials: usize,
    n: u32,
    seed: u64,
) -> Result<f64> {
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    if n > 8 {
        return Err(Error::Resource(format!("certification cap is n = 8, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let coeffs: Vec<Complex64> = (0..1usize << n)
            .map(|s| {
                if s.count_ones() <= d {
                    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                } else {
                    Complex64::ZERO
                }
            })
            .collect();
        let f = CubeFunction::from_coeffs(coeffs)?;
        if f.is_zero(1e-12) {
            continue;
        }
        let g = apply_multiplier(&f, phi, d)?;
        if g.is_zero(1e-300) {
            continue;
        }
        worst = worst.max(g.lp_norm(q)? / f.lp_norm(p)?);
    }
    Ok(worst)
}

/// Checks every atom of a measure against the admissibility condition.
pub fn atoms_admissible(prob: &MomentProblem, measure: &AtomicMeasure, slack: f64) -> Result<bool> {
    for &(z, _) in &measure.atoms {
        let shrunk = z * Complex64::new(1.0 - slack, 0.0);
        if !is_admissible(prob.p, prob.q, shrunk)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// On-disk problem description.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProblemFile {
    pub p: f64,
    pub q: f64,
    pub d: u32,
    pub phi: Vec<[f64; 2]>,
    #[serde(rename = "M")]
    pub m: usize,
    pub tolerances: ToleranceFile,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ToleranceFile {
    pub gap: f64,
    pub feasibility: f64,
}

/// On-disk solution: the sandwich plus atom list as `[re, im, wre, wim]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolutionFile {
    pub lower: f64,
    pub upper: f64,
    pub gap: f64,
    pub atoms: Vec<[f64; 4]>,
}

impl ProblemFile {
    pub fn into_problem(self) -> Result<MomentProblem> {
        let phi = self.phi.iter().map(|c| Complex64::new(c[0], c[1])).collect();
        let mut prob = MomentProblem::with_discretization(self.p, self.q, self.d, phi, self.m)?;
        prob.gap_tolerance = self.tolerances.gap;
        prob.feasibility_tolerance = self.tolerances.feasibility;
        Ok(prob)
    }

    pub fn from_problem(prob: &MomentProblem) -> Self {
        Self {
            p: prob.p,
            q: prob.q,
            d: prob.d,
            phi: prob.phi.iter().map(|c| [c.re, c.im]).collect(),
            m: prob.m,
            tolerances: ToleranceFile {
                gap: prob.gap_tolerance,
                feasibility: prob.feasibility_tolerance,
            },
        }
    }
}

impl SolutionFile {
    pub fn new(sandwich: &NormSandwich, measure: &AtomicMeasure) -> Self {
        Self {
            lower: sandwich.lower,
            upper: sandwich.upper,
            gap: sandwich.gap,
            atoms: measure
                .atoms
                .iter()
                .map(|(z, c)| [z.re, z.im, c.re, c.im])
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lens::alpha;

    fn point_mass_phi(z0: Complex64, d: u32) -> Vec<Complex64> {
        (0..=d).map(|j| z0.powu(j)).collect()
    }

    #[test]
    fn problem_validation() {
        assert!(MomentProblem::new(2.5, 2.5, 2, vec![Complex64::ONE; 3]).is_ok());
        assert!(MomentProblem::new(2.5, 2.5, 2, vec![Complex64::ONE; 2]).is_err());
        assert!(MomentProblem::new(3.0, 2.5, 2, vec![Complex64::ONE; 3]).is_err());
        assert!(
            MomentProblem::with_discretization(2.5, 2.5, 2, vec![Complex64::ONE; 3], 16).is_err()
        );
    }

    #[test]
    fn dual_degree_zero_and_constant() {
        let phi0 = Complex64::new(0.3, -0.4);
        let prob = MomentProblem::new(2.5, 2.5, 0, vec![phi0]).unwrap();
        let w = dual_lower_bound(&prob).unwrap();
        assert!((w.value - 0.5).abs() < 1e-6, "got {}", w.value);

        let mut phi = vec![Complex64::ZERO; 5];
        phi[0] = Complex64::ONE;
        let prob = MomentProblem::new(2.5, 2.5, 4, phi).unwrap();
        let w = dual_lower_bound(&prob).unwrap();
        assert!(w.value <= 1.0 + 1e-9 && w.value >= 1.0 - 1e-6, "got {}", w.value);
    }

    #[test]
    fn dual_point_evaluation() {
        let z0 = Complex64::new(0.4, 0.3);
        let prob = MomentProblem::new(2.5, 2.5, 4, point_mass_phi(z0, 4)).unwrap();
        let w = dual_lower_bound(&prob).unwrap();
        assert!(w.value <= 1.0 + 1e-9, "got {}", w.value);
        assert!(w.value >= 1.0 - 1e-3, "got {}", w.value);
    }

    #[test]
    fn primal_point_masses() {
        // real atom: the measure should collapse to (nearly) a point mass
        let r = 0.5;
        let prob = MomentProblem::new(2.5, 2.5, 4, point_mass_phi(Complex64::new(r, 0.0), 4)).unwrap();
        let m = primal_measure(&prob).unwrap();
        assert!(m.residual <= prob.feasibility_tolerance);
        assert!(m.tv_norm <= 1.0 + 1e-4, "tv {}", m.tv_norm);
        assert!(m.tv_norm >= 1.0 - 1e-6, "tv {}", m.tv_norm);

        // origin
        let mut phi = vec![Complex64::ZERO; 4];
        phi[0] = Complex64::ONE;
        let prob = MomentProblem::new(2.5, 2.5, 3, phi).unwrap();
        let m = primal_measure(&prob).unwrap();
        assert!((m.tv_norm - 1.0).abs() < 1e-4, "tv {}", m.tv_norm);
        assert!(atoms_admissible(&prob, &m, 1e-9).unwrap());
    }

    #[test]
    fn sandwich_decaying_exponential() {
        let r = (-0.3f64).exp();
        let d = 6;
        let prob = MomentProblem::new(2.5, 2.5, d, point_mass_phi(Complex64::new(r, 0.0), d)).unwrap();
        let (s, _, _) = solve(&prob).unwrap();
        assert!(s.lower >= 1.0 - 1e-3, "lower {}", s.lower);
        assert!(s.upper <= 1.0 + 1e-4, "upper {}", s.upper);
        assert!(s.gap <= 1e-2);
    }

    #[test]
    fn laplacian_symbol_under_published_bound() {
        for d in [2u32, 3, 4] {
            let phi: Vec<Complex64> = (0..=d).map(|j| Complex64::new(j as f64, 0.0)).collect();
            let prob = MomentProblem::new(2.5, 2.5, d, phi).unwrap();
            let (s, m, _) = solve(&prob).unwrap();
            let bound = 10.0 * (d as f64).powf(alpha(2.5));
            assert!(s.upper <= bound, "d = {d}: upper {} vs bound {bound}", s.upper);
            assert!(s.lower <= s.upper + prob.gap_tolerance);
            assert!(m.residual <= prob.feasibility_tolerance);
        }
    }

    #[test]
    fn real_restriction_dominates() {
        let d = 3;
        let phi: Vec<Complex64> = (0..=d).map(|j| Complex64::new(j as f64, 0.0)).collect();
        let complex_prob = MomentProblem::new(2.5, 2.5, d, phi.clone()).unwrap();
        let mut real_prob = MomentProblem::new(2.5, 2.5, d, phi).unwrap();
        real_prob.real_only = true;
        let c = dual_lower_bound(&complex_prob).unwrap().value;
        let r = dual_lower_bound(&real_prob).unwrap().value;
        assert!(r >= c - 1e-6, "real {r} vs complex {c}");
    }

    #[test]
    fn refinement_monotonicity() {
        let d = 3;
        let phi = point_mass_phi(Complex64::new(0.3, 0.2), d);
        let coarse = MomentProblem::with_discretization(2.5, 2.5, d, phi.clone(), 64).unwrap();
        let fine = MomentProblem::with_discretization(2.5, 2.5, d, phi, 128).unwrap();
        let lo_c = dual_lower_bound(&coarse).unwrap().value;
        let lo_f = dual_lower_bound(&fine).unwrap().value;
        assert!(lo_f >= lo_c - 1e-9, "coarse {lo_c} fine {lo_f}");
        let up_c = primal_measure(&coarse).unwrap().tv_norm;
        let up_f = primal_measure(&fine).unwrap().tv_norm;
        assert!(up_f <= up_c + 1e-9, "coarse {up_c} fine {up_f}");
    }

    #[test]
    fn multiplier_spectral_action() {
        let f = CubeFunction::from_coeffs(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.5, -0.2),
            Complex64::new(-0.3, 0.1),
            Complex64::new(0.2, 0.4),
        ])
        .unwrap();
        // phi == 1 is the identity
        let id = apply_multiplier(&f, &[Complex64::ONE; 3], 2).unwrap();
        assert_eq!(id.coeffs(), f.coeffs());
        // phi(j) = j is the Laplacian
        let phi: Vec<Complex64> = (0..=2).map(|j| Complex64::new(j as f64, 0.0)).collect();
        let lap = apply_multiplier(&f, &phi, 2).unwrap();
        assert_eq!(lap.coeffs(), f.laplacian().coeffs());
        // phi(j) = z^j is the noise operator
        let z = Complex64::new(0.4, 0.2);
        let noisy = apply_multiplier(&f, &point_mass_phi(z, 2), 2).unwrap();
        let direct = f.apply_noise(z).unwrap();
        for (a, b) in noisy.coeffs().iter().zip(direct.coeffs()) {
            assert!((a - b).norm() < 1e-14);
        }
        // spectrum above d is rejected
        let g = CubeFunction::character(2, 0b11).unwrap();
        assert!(apply_multiplier(&g, &[Complex64::ONE; 2], 1).is_err());
    }

    #[test]
    fn certify_noise_multiplier_contractive() {
        let d = 3;
        let phi = point_mass_phi(Complex64::new(0.5, 0.0), d);
        let worst = certify_on_cube(&phi, d, 2.5, 2.5, 40, 4, 7).unwrap();
        assert!(worst <= 1.0 + 1e-8, "worst {worst}");
    }

    #[test]
    fn certify_within_tv_bound() {
        let d = 3;
        let phi: Vec<Complex64> = (0..=d).map(|j| Complex64::new(j as f64, 0.0)).collect();
        let prob = MomentProblem::new(2.5, 2.5, d, phi.clone()).unwrap();
        let m = primal_measure(&prob).unwrap();
        let worst = certify_on_cube(&phi, d, 2.5, 2.5, 60, 5, 11).unwrap();
        assert!(worst <= m.tv_norm + 1e-6, "worst {worst} vs tv {}", m.tv_norm);
    }

    #[test]
    fn wire_formats_roundtrip() {
        let prob = MomentProblem::new(2.5, 3.0, 2, vec![Complex64::ONE; 3]).unwrap();
        let file = ProblemFile::from_problem(&prob);
        let json = serde_json::to_string(&file).unwrap();
        assert!(json.contains("\"M\":"));
        let back: ProblemFile = serde_json::from_str(&json).unwrap();
        let prob2 = back.into_problem().unwrap();
        assert_eq!(prob2.d, prob.d);
        assert_eq!(prob2.m, prob.m);
    }
}
