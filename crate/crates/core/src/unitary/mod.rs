//! Arithmetic on U(N) with the bi-invariant metric `⟨X,Y⟩ = N·trace(X*Y)`.
//!
//! The metric scale is fixed at `N`: with this choice the defining
//! representation has Casimir eigenvalue 1 for every `N`, and the
//! orthonormal basis satisfies `Σ_X X C X = −tr(C)·I` with the normalized
//! trace `tr = trace/N`.

mod matrix;

pub use matrix::CMat;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::surfgraph::SignedEdge;

/// Unitarity tolerance used on construction and after long products.
pub const UNITARITY_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum UnitaryError {
    #[error("matrix is not unitary (‖U*U − I‖ = {0:.3e})")]
    NotUnitary(f64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("edge variable {0} is unassigned")]
    Unassigned(usize),
}

/// The structure group U(N) together with its fixed metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    n: usize,
}

impl GroupSpec {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "U(N) requires N ≥ 1");
        Self { n }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Real dimension of U(N).
    pub fn dim(&self) -> usize {
        self.n * self.n
    }

    /// `⟨X,Y⟩ = N·Re trace(X*Y)`.
    pub fn inner(&self, x: &CMat, y: &CMat) -> f64 {
        let mut acc = 0.0;
        for (a, b) in x.as_slice().iter().zip(y.as_slice()) {
            acc += (a.conj() * b).re;
        }
        self.n as f64 * acc
    }

    pub fn identity(&self) -> Unitary {
        Unitary(CMat::identity(self.n))
    }

    /// `Σ_i g_i X_i` with `g_i` iid standard normal and `X_i` orthonormal.
    /// Built entrywise rather than through the basis.
    pub fn gaussian_algebra<R: Rng + ?Sized>(&self, rng: &mut R) -> CMat {
        let n = self.n;
        let diag = 1.0 / (n as f64).sqrt();
        let off = 1.0 / (2.0 * n as f64).sqrt();
        let mut m = CMat::zeros(n);
        for j in 0..n {
            let g: f64 = rng.sample(StandardNormal);
            m[(j, j)] = Complex64::new(0.0, g * diag);
            for k in (j + 1)..n {
                let g1: f64 = rng.sample(StandardNormal);
                let g2: f64 = rng.sample(StandardNormal);
                let z = Complex64::new(g1 * off, g2 * off);
                m[(j, k)] = z;
                m[(k, j)] = -z.conj();
            }
        }
        m
    }

    /// Haar-distributed unitary: Gram–Schmidt on a complex Ginibre matrix.
    /// Gram–Schmidt produces an `R` factor with positive diagonal, which is
    /// the phase convention that makes `Q` exactly Haar.
    pub fn haar<R: Rng + ?Sized>(&self, rng: &mut R) -> Unitary {
        let n = self.n;
        let s = std::f64::consts::FRAC_1_SQRT_2;
        loop {
            let z = CMat::from_fn(n, |_, _| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex64::new(re * s, im * s)
            });
            if let Some(q) = gram_schmidt_columns(&z) {
                return Unitary(q);
            }
        }
    }
}

/// Orthonormalizes the columns (two passes of modified Gram–Schmidt).
fn gram_schmidt_columns(z: &CMat) -> Option<CMat> {
    let n = z.dim();
    let mut cols: Vec<Vec<Complex64>> = (0..n).map(|j| (0..n).map(|i| z[(i, j)]).collect()).collect();
    for j in 0..n {
        for _pass in 0..2 {
            for k in 0..j {
                let proj: Complex64 = (0..n).map(|i| cols[k][i].conj() * cols[j][i]).sum();
                for i in 0..n {
                    let t = proj * cols[k][i];
                    cols[j][i] -= t;
                }
            }
        }
        let norm = cols[j].iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            return None;
        }
        for c in cols[j].iter_mut() {
            *c /= norm;
        }
    }
    Some(CMat::from_fn(n, |i, j| cols[j][i]))
}

/// An element of U(N).
#[derive(Debug, Clone, PartialEq)]
pub struct Unitary(CMat);

impl Unitary {
    /// Checks `‖U*U − I‖ ≤ 1e-10` (largest entry).
    pub fn new(m: CMat) -> Result<Self, UnitaryError> {
        let drift = unitarity_drift(&m);
        if drift > UNITARITY_TOL {
            return Err(UnitaryError::NotUnitary(drift));
        }
        Ok(Self(m))
    }

    /// Wraps without checking; callers guarantee unitarity by construction.
    pub(crate) fn new_unchecked(m: CMat) -> Self {
        Self(m)
    }

    pub fn phase(theta: f64) -> Self {
        Self(CMat::from_row_slice(1, &[Complex64::from_polar(1.0, theta)]))
    }

    /// `diag(e^{iθ_1}, …, e^{iθ_N})`.
    pub fn from_angles(angles: &[f64]) -> Self {
        let d: Vec<Complex64> = angles.iter().map(|&t| Complex64::from_polar(1.0, t)).collect();
        Self(CMat::diagonal(&d))
    }

    /// `exp(X)` for anti-Hermitian `X`, with closed forms for N = 1, 2.
    pub fn exp_algebra(x: &CMat) -> Self {
        Self(exp_anti_hermitian(x))
    }

    #[inline]
    pub fn matrix(&self) -> &CMat {
        &self.0
    }

    pub fn into_matrix(self) -> CMat {
        self.0
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.0.dim()
    }

    pub fn inverse(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn mul(&self, rhs: &Unitary) -> Unitary {
        Unitary(&self.0 * &rhs.0)
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    /// `trace(U)/N`.
    pub fn normalized_trace(&self) -> Complex64 {
        self.0.trace() / self.n() as f64
    }

    pub fn det(&self) -> Complex64 {
        self.0.det()
    }

    pub fn drift(&self) -> f64 {
        unitarity_drift(&self.0)
    }

    /// Polar projection back onto U(N) when drift exceeds the tolerance.
    pub fn reunitarize(&mut self) {
        if self.drift() > UNITARITY_TOL {
            self.0 = polar_unitary(&self.0);
        }
    }

    /// Sup-norm distance `max |U_ij − V_ij|`.
    pub fn distance(&self, other: &Unitary) -> f64 {
        (&self.0 - &other.0).max_abs()
    }
}

pub fn unitarity_drift(m: &CMat) -> f64 {
    let p = &m.adjoint() * m;
    (&p - &CMat::identity(m.dim())).max_abs()
}

/// Unitary polar factor by the Newton iteration `X ← (X + X^{-*})/2`.
fn polar_unitary(m: &CMat) -> CMat {
    let mut x = m.clone();
    for _ in 0..50 {
        let inv_adj = match x.inverse() {
            Some(inv) => inv.adjoint(),
            None => return x,
        };
        let next = (&x + &inv_adj).scale_re(0.5);
        let delta = (&next - &x).max_abs();
        x = next;
        if delta < 1e-15 {
            break;
        }
    }
    x
}

fn exp_anti_hermitian(x: &CMat) -> CMat {
    match x.dim() {
        1 => CMat::from_row_slice(1, &[Complex64::from_polar(1.0, x[(0, 0)].im)]),
        2 => {
            // X = iH, H = h0·I + h·σ; exp(iH) = e^{ih0}(cos r·I + i·sinc r·(H − h0 I)).
            let h00 = x[(0, 0)].im;
            let h11 = x[(1, 1)].im;
            let h01 = x[(0, 1)] * Complex64::new(0.0, -1.0);
            let h0 = 0.5 * (h00 + h11);
            let hz = 0.5 * (h00 - h11);
            let r = (hz * hz + h01.norm_sqr()).sqrt();
            let (cr, sc) = if r < 1e-4 {
                let r2 = r * r;
                (1.0 - r2 / 2.0 + r2 * r2 / 24.0, 1.0 - r2 / 6.0 + r2 * r2 / 120.0)
            } else {
                (r.cos(), r.sin() / r)
            };
            let ph = Complex64::from_polar(1.0, h0);
            let i_sc = Complex64::new(0.0, sc);
            CMat::from_row_slice(
                2,
                &[
                    ph * (cr + i_sc * hz),
                    ph * i_sc * h01,
                    ph * i_sc * h01.conj(),
                    ph * (cr - i_sc * hz),
                ],
            )
        }
        _ => x.exp(),
    }
}

/// Orthonormal basis of `u(N)` for the scaled metric.
#[derive(Debug, Clone)]
pub struct LieBasis {
    elements: Vec<CMat>,
}

impl LieBasis {
    pub fn new(spec: GroupSpec) -> Self {
        let n = spec.n();
        let nf = n as f64;
        let mut elements = Vec::with_capacity(n * n);
        let i = Complex64::new(0.0, 1.0);
        for j in 0..n {
            let mut m = CMat::zeros(n);
            m[(j, j)] = i / nf.sqrt();
            elements.push(m);
        }
        let s = 1.0 / (2.0 * nf).sqrt();
        for j in 0..n {
            for k in (j + 1)..n {
                let mut re = CMat::zeros(n);
                re[(j, k)] = Complex64::new(s, 0.0);
                re[(k, j)] = Complex64::new(-s, 0.0);
                elements.push(re);
                let mut im = CMat::zeros(n);
                im[(j, k)] = i * s;
                im[(k, j)] = i * s;
                elements.push(im);
            }
        }
        Self { elements }
    }

    pub fn elements(&self) -> &[CMat] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `Σ_X X C X`.
    pub fn casimir_sandwich(&self, c: &CMat) -> CMat {
        let n = c.dim();
        let mut acc = CMat::zeros(n);
        for x in &self.elements {
            let xcx = &(x * c) * x;
            acc = &acc + &xcx;
        }
        acc
    }
}

/// Evaluates the holonomy of a traversal word: the product is order
/// reversing, so `e_1 e_2 ⋯ e_k` evaluates to `g_k ⋯ g_2 g_1`.
pub fn word_eval(
    spec: GroupSpec,
    word: &[SignedEdge],
    edges: &[Option<Unitary>],
) -> Result<Unitary, UnitaryError> {
    let mut acc = CMat::identity(spec.n());
    let mut tmp = CMat::zeros(spec.n());
    for letter in word {
        let x = edges
            .get(letter.edge)
            .and_then(|e| e.as_ref())
            .ok_or(UnitaryError::Unassigned(letter.edge))?;
        if x.n() != spec.n() {
            return Err(UnitaryError::Dimension {
                expected: spec.n(),
                got: x.n(),
            });
        }
        if letter.inverse {
            CMat::mul_into(&x.matrix().adjoint(), &acc, &mut tmp);
        } else {
            CMat::mul_into(x.matrix(), &acc, &mut tmp);
        }
        std::mem::swap(&mut acc, &mut tmp);
    }
    let mut u = Unitary(acc);
    u.reunitarize();
    Ok(u)
}

/// Same as [`word_eval`] over a fully assigned slice.
pub fn word_eval_full(spec: GroupSpec, word: &[SignedEdge], edges: &[Unitary]) -> Unitary {
    let mut acc = CMat::identity(spec.n());
    let mut tmp = CMat::zeros(spec.n());
    for letter in word {
        let x = &edges[letter.edge];
        if letter.inverse {
            CMat::mul_into(&x.matrix().adjoint(), &acc, &mut tmp);
        } else {
            CMat::mul_into(x.matrix(), &acc, &mut tmp);
        }
        std::mem::swap(&mut acc, &mut tmp);
    }
    let mut u = Unitary(acc);
    u.reunitarize();
    u
}
