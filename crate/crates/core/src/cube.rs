//! Fourier–Walsh representation of complex-valued functions on the Hamming
//! cube, with the noise operator, Laplacian, discrete gradient, heat
//! semigroup, and `L^p` norms.
//!
//! Conventions, fixed once and used everywhere:
//! * coefficient index `S` is a subset bitmask, bit `j-1` standing for
//!   coordinate `j`;
//! * vertex index `b` maps to `x_j = +1` if bit `j-1` of `b` is set, else
//!   `-1`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Practical dimension cap: 2^24 complex doubles is 256 MiB.
pub const DIMENSION_CAP: u32 = 24;

/// A function on `{-1,1}^n` stored by its `2^n` Fourier–Walsh coefficients.
///
/// Entry `S` of `coeffs` is the coefficient of the Walsh character
/// `w_S(x) = prod_{j in S} x_j`. The representation is immutable after
/// construction; every operation returns a fresh function.
#[derive(Debug, Clone, PartialEq)]
pub struct CubeFunction {
    n: u32,
    coeffs: Vec<Complex64>,
}

impl CubeFunction {
    /// Builds a function directly from Fourier coefficients.
    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Result<Self> {
        let n = check_power_of_two(coeffs.len())?;
        check_finite(&coeffs)?;
        Ok(Self { n, coeffs })
    }

    /// The constant function `f ≡ c`.
    pub fn constant(n: u32, c: Complex64) -> Result<Self> {
        if n > DIMENSION_CAP {
            return Err(Error::Resource(format!(
                "dimension {n} exceeds cap {DIMENSION_CAP}"
            )));
        }
        let mut coeffs = vec![Complex64::ZERO; 1 << n];
        coeffs[0] = c;
        Ok(Self { n, coeffs })
    }

    /// The Walsh character `w_S` for a subset bitmask `S`.
    pub fn character(n: u32, subset: usize) -> Result<Self> {
        let mut f = Self::constant(n, Complex64::ZERO)?;
        if subset >= 1 << n {
            return Err(Error::InvalidInput(format!(
                "subset mask {subset:#x} out of range for n = {n}"
            )));
        }
        f.coeffs[subset] = Complex64::ONE;
        Ok(f)
    }

    pub fn dimension(&self) -> u32 {
        self.n
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Fourier coefficient `a_S`.
    pub fn coeff(&self, subset: usize) -> Complex64 {
        self.coeffs[subset]
    }

    /// True if every coefficient is negligible.
    pub fn is_zero(&self, tol: f64) -> bool {
        self.coeffs.iter().all(|c| c.norm() <= tol)
    }

    /// Computes the Fourier–Walsh coefficients of a value table.
    ///
    /// `values[b]` is `f` at the vertex encoded by `b`. Runs the in-place
    /// butterfly in `O(n 2^n)` and scales by `2^{-n}`, so
    /// `coeffs[S] = 2^{-n} sum_x f(x) w_S(x)`.
    pub fn analyze(values: &[Complex64]) -> Result<Self> {
        let n = check_power_of_two(values.len())?;
        check_finite(values)?;
        let mut buf = values.to_vec();
        // forward butterfly: per coordinate, (u, v) -> (u + v, v - u) where v
        // sits at the vertex with x_j = +1
        for bit in 0..n {
            let half = 1usize << bit;
            let mut base = 0;
            while base < buf.len() {
                for i in base..base + half {
                    let u = buf[i];
                    let v = buf[i + half];
                    buf[i] = u + v;
                    buf[i + half] = v - u;
                }
                base += half << 1;
            }
        }
        let scale = 1.0 / (1u64 << n) as f64;
        for c in &mut buf {
            *c *= scale;
        }
        Ok(Self { n, coeffs: buf })
    }

    /// Evaluates the function on every vertex; inverse of [`analyze`].
    ///
    /// [`analyze`]: CubeFunction::analyze
    pub fn synthesize(&self) -> Vec<Complex64> {
        let mut buf = self.coeffs.clone();
        for bit in 0..self.n {
            let half = 1usize << bit;
            let mut base = 0;
            while base < buf.len() {
                for i in base..base + half {
                    let u = buf[i];
                    let v = buf[i + half];
                    buf[i] = u - v;
                    buf[i + half] = u + v;
                }
                base += half << 1;
            }
        }
        buf
    }

    /// Uniform-measure `L^p` norm, `p >= 1`.
    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        if !(p >= 1.0) {
            return Err(Error::InvalidInput(format!("lp_norm requires p >= 1, got {p}")));
        }
        let values = self.synthesize();
        let mean: f64 =
            values.iter().map(|v| v.norm().powf(p)).sum::<f64>() / values.len() as f64;
        Ok(mean.powf(1.0 / p))
    }

    /// The noise operator `T_z`: multiplies `a_S` by `z^{|S|}`.
    pub fn apply_noise(&self, z: Complex64) -> Result<Self> {
        check_scalar(z)?;
        let powers = noise_powers(z, self.n);
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(s, a)| a * powers[s.count_ones() as usize])
            .collect();
        Ok(Self { n: self.n, coeffs })
    }

    /// The discrete Laplacian: multiplies `a_S` by `|S|`.
    pub fn laplacian(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(s, a)| a * s.count_ones() as f64)
            .collect();
        Self { n: self.n, coeffs }
    }

    /// The discrete partial `D_j`, `1 <= j <= n`: keeps exactly the
    /// coefficients with `j` in `S`.
    pub fn partial(&self, j: u32) -> Result<Self> {
        if j == 0 || j > self.n {
            return Err(Error::InvalidInput(format!(
                "coordinate {j} out of range 1..={}",
                self.n
            )));
        }
        let bit = 1usize << (j - 1);
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(s, a)| if s & bit != 0 { *a } else { Complex64::ZERO })
            .collect();
        Ok(Self { n: self.n, coeffs })
    }

    /// Pointwise `|∇f|^2 = sum_j (D_j f)^2`.
    ///
    /// For genuinely complex `f` the squares are replaced by squared moduli
    /// and the second return value is `true`.
    pub fn gradient_sq(&self) -> (Vec<f64>, bool) {
        let values = self.synthesize();
        let complex_input = values.iter().any(|v| v.im.abs() > 1e-12);
        let mut out = vec![0.0; values.len()];
        for j in 1..=self.n {
            let dj = self.partial(j).expect("coordinate in range");
            for (acc, v) in out.iter_mut().zip(dj.synthesize()) {
                *acc += if complex_input { v.norm_sqr() } else { v.re * v.re };
            }
        }
        (out, complex_input)
    }

    /// The heat semigroup `e^{-tΔ} = T_{e^{-t}}`, `t >= 0`.
    pub fn heat(&self, t: f64) -> Result<Self> {
        if !(t >= 0.0) {
            return Err(Error::InvalidInput(format!("heat requires t >= 0, got {t}")));
        }
        self.apply_noise(Complex64::new((-t).exp(), 0.0))
    }

    /// A general spectral multiplier: `a_S -> phi(|S|) a_S`.
    pub(crate) fn spectral_multiplier(&self, phi: &[Complex64]) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(s, a)| {
                let k = s.count_ones() as usize;
                if k < phi.len() { a * phi[k] } else { Complex64::ZERO }
            })
            .collect();
        Self { n: self.n, coeffs }
    }

    /// Top degree with a non-negligible coefficient.
    pub fn spectral_degree(&self, tol: f64) -> u32 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm() > tol)
            .map(|(s, _)| s.count_ones())
            .max()
            .unwrap_or(0)
    }

    /// The product function `F(x^1, ..., x^k) = f(x^1) ... f(x^k)` on
    /// `{-1,1}^{kn}`.
    pub fn tensor_power(&self, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidInput("tensor_power requires k >= 1".into()));
        }
        let total = self.n.checked_mul(k).filter(|&m| m <= DIMENSION_CAP);
        let total = total.ok_or_else(|| {
            Error::Resource(format!(
                "tensor power dimension {}*{k} exceeds cap {DIMENSION_CAP}",
                self.n
            ))
        })?;
        let mut coeffs = vec![Complex64::ONE];
        for _ in 0..k {
            let mut next = vec![Complex64::ZERO; coeffs.len() << self.n];
            for (hi, &a) in coeffs.iter().enumerate() {
                for (lo, &b) in self.coeffs.iter().enumerate() {
                    next[(hi << self.n) | lo] = a * b;
                }
            }
            coeffs = next;
        }
        Ok(Self { n: total, coeffs })
    }
}

/// Precomputed `z^0 .. z^n`.
fn noise_powers(z: Complex64, n: u32) -> Vec<Complex64> {
    let mut powers = Vec::with_capacity(n as usize + 1);
    let mut acc = Complex64::ONE;
    for _ in 0..=n {
        powers.push(acc);
        acc *= z;
    }
    powers
}

fn check_power_of_two(len: usize) -> Result<u32> {
    if len == 0 || !len.is_power_of_two() {
        return Err(Error::InvalidInput(format!(
            "length {len} is not a power of two"
        )));
    }
    let n = len.trailing_zeros();
    if n > DIMENSION_CAP {
        return Err(Error::Resource(format!(
            "dimension {n} exceeds cap {DIMENSION_CAP}"
        )));
    }
    Ok(n)
}

fn check_finite(values: &[Complex64]) -> Result<()> {
    if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::InvalidInput("non-finite value".into()));
    }
    Ok(())
}

pub(crate) fn check_scalar(z: Complex64) -> Result<()> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::InvalidInput(format!("non-finite scalar {z}")));
    }
    Ok(())
}
