//! The heat kernel `ρ_t` on U(N) for the scaled metric, with respect to
//! normalized Haar measure.
//!
//! Two evaluation routes exist. The character series
//! `Σ_λ d_λ χ_λ(U) e^{−c₂(λ)t/2}` works for every N and converges fast for
//! large t. For N ≤ 2 and moderate t the density is instead evaluated by its
//! image sum (Poisson-dual) form, which stays positive and accurate however
//! small the density gets; the two routes are cross-checked in the tests.

mod images;
mod sampling;
mod series;

pub use sampling::{hk_sample, hk_sample_path};

use num_complex::Complex64;
use thiserror::Error;

use crate::unitary::Unitary;

/// Largest time at which the image-sum route is preferred.
const IMAGE_SUM_MAX_T: f64 = 4.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HeatKernelError {
    #[error("time must be positive and finite, got {0}")]
    InvalidTime(f64),
    #[error("highest weight must be a non-increasing nonempty tuple, got {0:?}")]
    InvalidWeight(Vec<i64>),
    #[error("dimension mismatch: weight has length {expected}, matrix is {got}×{got}")]
    Dimension { expected: usize, got: usize },
    #[error("invalid heat-kernel parameters: {0}")]
    InvalidParams(String),
    #[error(
        "series tail {tail:.3e} at cutoff {cutoff} exceeds the tolerance at t = {t} (t too small for the requested accuracy)"
    )]
    TruncationBudget { t: f64, cutoff: u32, tail: f64 },
    #[error("heat kernel value {value:.3e} at t = {t} is below the series noise floor")]
    Underflow { t: f64, value: f64 },
}

/// Highest weight of an irreducible representation of U(N).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Irrep(Vec<i64>);

impl Irrep {
    pub fn new(weights: Vec<i64>) -> Result<Self, HeatKernelError> {
        if weights.is_empty() || weights.windows(2).any(|w| w[0] < w[1]) {
            return Err(HeatKernelError::InvalidWeight(weights));
        }
        Ok(Self(weights))
    }

    pub fn trivial(n: usize) -> Self {
        Self(vec![0; n])
    }

    /// `(1, 0, …, 0)`.
    pub fn defining(n: usize) -> Self {
        let mut w = vec![0; n];
        w[0] = 1;
        Self(w)
    }

    /// `(1, …, 1)`.
    pub fn determinant(n: usize) -> Self {
        Self(vec![1; n])
    }

    pub fn weights(&self) -> &[i64] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }
}

/// Eigenvalue of `−Δ` on the λ-isotypic component:
/// `c₂(λ) = (1/N) Σ_i λ_i (λ_i + N + 1 − 2i)`.
pub fn casimir(lambda: &Irrep) -> f64 {
    series::casimir_of(&lambda.0)
}

/// Weyl dimension formula `Π_{i<j} (λ_i − λ_j + j − i)/(j − i)`.
pub fn weyl_dim(lambda: &Irrep) -> u64 {
    weyl_dim_f64(&lambda.0).round() as u64
}

pub(crate) fn weyl_dim_f64(l: &[i64]) -> f64 {
    let mut d = 1.0;
    for i in 0..l.len() {
        for j in (i + 1)..l.len() {
            d *= (l[i] - l[j] + (j - i) as i64) as f64 / (j - i) as f64;
        }
    }
    d
}

/// `χ_λ(U)`, evaluated without eigenvalues by the Jacobi–Trudi determinant
/// in the complete symmetric functions of U.
pub fn character(lambda: &Irrep, u: &Unitary) -> Result<Complex64, HeatKernelError> {
    let n = lambda.n();
    if u.n() != n {
        return Err(HeatKernelError::Dimension { expected: n, got: u.n() });
    }
    let low = lambda.0[n - 1];
    let mu: Vec<usize> = lambda.0.iter().map(|&l| (l - low) as usize).collect();
    let sym = series::Symmetric::new(u.matrix(), mu[0] + n);
    Ok(sym.det_power(low) * sym.jacobi_trudi(&mu))
}

/// Accuracy and truncation settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HKParams {
    /// Bound on the omitted part of the character series.
    pub tolerance: f64,
    /// Fixed weight cutoff `max|λ_i| ≤ Λ`. Forces the series route; `None`
    /// picks Λ from the tolerance.
    pub cutoff: Option<u32>,
    /// Brownian time step δ used by the sampler.
    pub brownian_step: f64,
}

impl Default for HKParams {
    fn default() -> Self {
        Self {
            tolerance: 1e-12,
            cutoff: None,
            brownian_step: 1e-3,
        }
    }
}

impl HKParams {
    pub fn validate(&self) -> Result<(), HeatKernelError> {
        if !(self.tolerance > 0.0 && self.tolerance < 1.0) {
            return Err(HeatKernelError::InvalidParams(format!(
                "tolerance must lie in (0, 1), got {}",
                self.tolerance
            )));
        }
        if self.cutoff == Some(0) {
            return Err(HeatKernelError::InvalidParams("cutoff must be at least 1".into()));
        }
        if !(self.brownian_step > 0.0 && self.brownian_step.is_finite()) {
            return Err(HeatKernelError::InvalidParams(format!(
                "brownian step must be positive, got {}",
                self.brownian_step
            )));
        }
        Ok(())
    }
}

fn check_time(t: f64) -> Result<(), HeatKernelError> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(HeatKernelError::InvalidTime(t))
    }
}

/// `(ρ_t(U), ∂_t ρ_t(U))` by the preferred route.
pub fn hk_density_dt(t: f64, u: &Unitary, p: &HKParams) -> Result<(f64, f64), HeatKernelError> {
    check_time(t)?;
    if u.n() <= 2 && t <= IMAGE_SUM_MAX_T && p.cutoff.is_none() {
        let (rho, drho) = images::density_dt(t, u);
        if rho > 0.0 && rho.is_finite() {
            return Ok((rho, drho));
        }
        return Err(HeatKernelError::Underflow { t, value: rho });
    }
    hk_series(t, u, p)
}

/// `ρ_t(U)`.
pub fn hk_density(t: f64, u: &Unitary, p: &HKParams) -> Result<f64, HeatKernelError> {
    hk_density_dt(t, u, p).map(|(r, _)| r)
}

/// `∂ρ_t(U)/∂t = ½Δρ_t(U)`.
pub fn hk_dt(t: f64, u: &Unitary, p: &HKParams) -> Result<f64, HeatKernelError> {
    hk_density_dt(t, u, p).map(|(_, d)| d)
}

/// Density and time derivative from the truncated character series alone.
pub fn hk_series(t: f64, u: &Unitary, p: &HKParams) -> Result<(f64, f64), HeatKernelError> {
    check_time(t)?;
    p.validate()?;
    let tr = series::truncation(u.n(), t, p)?;
    let (rho, drho) = tr.evaluate(u.matrix());
    if !(rho > tr.noise_floor()) {
        return Err(HeatKernelError::Underflow { t, value: rho });
    }
    Ok((rho, drho))
}

/// Density and time derivative from the image-sum form, N ≤ 2 only.
pub fn hk_image_sum(t: f64, u: &Unitary) -> Option<(f64, f64)> {
    (u.n() <= 2 && t > 0.0).then(|| images::density_dt(t, u))
}

/// The weight cutoff Λ the series route uses at time t.
pub fn series_cutoff(n: usize, t: f64, p: &HKParams) -> Result<u32, HeatKernelError> {
    check_time(t)?;
    Ok(series::truncation(n, t, p)?.cutoff())
}
