//! Wilson loops and the Makeenko–Migdal equation as numerical checks.
//!
//! At a simple crossing with faces `F₁..F₄`, the alternating area derivative
//! `(∂₁ − ∂₂ + ∂₃ − ∂₄) E[tr hol L]` equals `E[tr hol L₁ · tr hol L₂]`, where
//! `L₁, L₂` are the two loops obtained by cutting `L` at the crossing. The
//! local version on four edge variables replaces the right side by
//! `−E[∇^{a₁}·∇^{a₂} f]`.

mod functional;

pub use functional::{
    divergence_pair, divergence_pair_numeric, gauge_invariance_check, translate_dart, GaugeReport,
    LoopFunctional, GAUGE_TOL,
};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::heatkernel::HKParams;
use crate::montecarlo::{run_chains, ChainParams, ChainView, Estimate, McError, Method, Model, Summary};
use crate::surfgraph::{alternating_area_vector, split_loop, Crossing, GraphError, LoopWord, SignedEdge};
use crate::unitary::{GroupSpec, Unitary};
use crate::ymmeasure::{abelian_expectation, MeasureError, MeasureSpec};

/// Pass threshold for exact comparisons.
pub const EXACT_TOL: f64 = 1e-9;
/// Pass threshold, in combined standard errors, for Monte Carlo comparisons.
pub const SIGMA_TOL: f64 = 3.0;
/// Random trials of the gauge-invariance precheck in [`local_mm_check`].
const PRECHECK_TRIALS: usize = 200;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MmError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Mc(#[from] McError),
    #[error("method not applicable: {0}")]
    Inapplicable(String),
    #[error("finite-difference step: {0}")]
    FdStep(String),
    #[error("functional is not gauge invariant at the crossing (violation {0:.3e})")]
    NotGaugeInvariant(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WilsonMethod {
    Mc,
    AbelianExact,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LhsMethod {
    /// Score-function estimator from a single chain.
    Score,
    /// Central differences with one Richardson step. `None` picks
    /// `h = 0.05 · min adjacent area`.
    Fd { step: Option<f64> },
    /// Exact U(1) derivative.
    AbelianAnalytic,
}

/// How both sides of a check are computed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MmMethods {
    pub lhs: LhsMethod,
    pub rhs: WilsonMethod,
}

impl MmMethods {
    pub const MC: Self = Self {
        lhs: LhsMethod::Score,
        rhs: WilsonMethod::Mc,
    };
    pub const EXACT: Self = Self {
        lhs: LhsMethod::AbelianAnalytic,
        rhs: WilsonMethod::AbelianExact,
    };
}

/// Outcome of one Makeenko–Migdal comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct MMReport {
    pub lhs: Estimate,
    pub rhs: Estimate,
    /// `|lhs − rhs|`.
    pub abs_diff: f64,
    /// Standard error of `lhs − rhs`; accounts for correlation when both
    /// sides come from the same chains.
    pub combined_stderr: f64,
    /// `abs_diff / combined_stderr`, or 0 for exact comparisons.
    pub discrepancy_sigma: f64,
    /// Absolute tolerance used when both sides are exact.
    pub tolerance: Option<f64>,
    pub passed: bool,
    pub label: String,
}

impl MMReport {
    fn from_parts(lhs: Estimate, rhs: Estimate, combined_stderr: f64, label: String) -> Self {
        let abs_diff = (lhs.mean - rhs.mean).norm();
        if lhs.method.is_exact() && rhs.method.is_exact() {
            return Self {
                lhs,
                rhs,
                abs_diff,
                combined_stderr: 0.0,
                discrepancy_sigma: 0.0,
                tolerance: Some(EXACT_TOL),
                passed: abs_diff <= EXACT_TOL,
                label,
            };
        }
        let sigma = if combined_stderr > 0.0 {
            abs_diff / combined_stderr
        } else if abs_diff == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        Self {
            lhs,
            rhs,
            abs_diff,
            combined_stderr,
            discrepancy_sigma: sigma,
            tolerance: None,
            passed: sigma <= SIGMA_TOL,
            label,
        }
    }
}

fn require_u1(m: &MeasureSpec, what: &str) -> Result<(), MmError> {
    if m.group().n() == 1 {
        Ok(())
    } else {
        Err(MmError::Inapplicable(format!("{what} needs N = 1")))
    }
}

/// `E[f]` for a trace functional.
pub fn expectation(
    m: &MeasureSpec,
    f: &LoopFunctional,
    method: WilsonMethod,
    p: &ChainParams,
) -> Result<Estimate, MmError> {
    match method {
        WilsonMethod::AbelianExact => {
            require_u1(m, "abelian_exact")?;
            let v = abelian_expectation(m, &f.exponents(m.graph().edges().len()), None)?;
            Ok(Estimate::exact(v.value, Method::AbelianExact))
        }
        WilsonMethod::Mc => {
            let model = Model::from_measure(m);
            let spec = m.group();
            let s = run_chains(&model, p, 1, |v, out| {
                out[0] = f.eval(spec, v.edges());
                Ok(())
            })?;
            Ok(s.estimate(0, Method::Mc))
        }
    }
}

/// `E[tr hol L]`.
pub fn wilson_loop(
    m: &MeasureSpec,
    l: &LoopWord,
    method: WilsonMethod,
    p: &ChainParams,
) -> Result<Estimate, MmError> {
    expectation(m, &LoopFunctional::trace(l), method, p)
}

fn alternating_direction(m: &MeasureSpec, c: &Crossing) -> Vec<f64> {
    alternating_area_vector(m.graph(), c).iter().map(|&x| x as f64).collect()
}

/// Alternating score `Σ_F v_F ∂_{t_F} log ρ_{t_F}(h_F)`.
fn alternating_score(v: &ChainView<'_>, dir: &[f64]) -> Result<f64, McError> {
    let mut s = 0.0;
    for (f, &d) in dir.iter().enumerate() {
        if d != 0.0 {
            s += d * v.face_score(f)?;
        }
    }
    Ok(s)
}

/// Derivative of the expectation of `f` along the face direction `dir`.
/// Under the unnormalized measure, Monte Carlo values are reported per unit
/// of `Z`, that is `Z⁻¹ D∫f dμ̃`.
pub fn directional_derivative(
    m: &MeasureSpec,
    f: &LoopFunctional,
    dir: &[f64],
    method: LhsMethod,
    p: &ChainParams,
) -> Result<Estimate, MmError> {
    let nf = m.graph().faces().len();
    if dir.len() != nf {
        return Err(MmError::Inapplicable(format!(
            "direction has {} entries for {nf} faces",
            dir.len()
        )));
    }
    match method {
        LhsMethod::AbelianAnalytic => {
            require_u1(m, "abelian_analytic")?;
            let v = abelian_expectation(m, &f.exponents(m.graph().edges().len()), Some(dir))?;
            Ok(Estimate::exact(v.derivative.expect("direction given"), Method::AbelianAnalytic))
        }
        LhsMethod::Score => {
            let s = score_summary(m, f, None, dir, p)?;
            let (value, grad) = score_lhs(&s, m.normalized(), 4);
            Ok(s.linearized(value, &grad, Method::Score))
        }
        LhsMethod::Fd { step } => finite_difference(m, f, dir, step, p),
    }
}

/// Records `[f, S, f·S, g]` along the chains, where `S` is the alternating
/// score and `g` an optional second functional.
fn score_summary(
    m: &MeasureSpec,
    f: &LoopFunctional,
    g: Option<&LoopFunctional>,
    dir: &[f64],
    p: &ChainParams,
) -> Result<Summary, MmError> {
    let model = Model::from_measure(m);
    let spec = m.group();
    Ok(run_chains(&model, p, 4, |v, out| {
        let fv = f.eval(spec, v.edges());
        let s = alternating_score(v, dir)?;
        out[0] = fv;
        out[1] = Complex64::new(s, 0.0);
        out[2] = fv * s;
        out[3] = g.map_or(Complex64::new(0.0, 0.0), |g| g.eval(spec, v.edges()));
        Ok(())
    })?)
}

/// Value and gradient (with respect to the recorded means) of the score
/// estimator: `E[fS] − E[f]E[S]` when normalized, `E[fS]` otherwise.
fn score_lhs(s: &Summary, normalized: bool, k: usize) -> (Complex64, Vec<Complex64>) {
    let mu = s.means();
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let mut grad = vec![zero; k];
    grad[2] = one;
    if normalized {
        grad[0] = -mu[1];
        grad[1] = -mu[0];
        (mu[2] - mu[0] * mu[1], grad)
    } else {
        (mu[2], grad)
    }
}

fn finite_difference(
    m: &MeasureSpec,
    f: &LoopFunctional,
    dir: &[f64],
    step: Option<f64>,
    p: &ChainParams,
) -> Result<Estimate, MmError> {
    let areas = m.graph().areas();
    let adjacent: Vec<usize> = (0..dir.len()).filter(|&i| dir[i] != 0.0).collect();
    let min_area = adjacent.iter().map(|&i| areas[i]).fold(f64::INFINITY, f64::min);
    let vmax = adjacent.iter().map(|&i| dir[i].abs()).fold(0.0, f64::max);
    if adjacent.is_empty() {
        return Err(MmError::FdStep("direction is zero".into()));
    }
    let h = step.unwrap_or(0.05 * min_area);
    if !(h > 0.0) || 2.0 * h * vmax >= min_area {
        return Err(MmError::FdStep(format!(
            "step {h} is too large for the smallest adjacent area {min_area}"
        )));
    }
    // Common random numbers: every shifted measure reuses the seed.
    let at = |s: f64| -> Result<Estimate, MmError> {
        let shifted: Vec<f64> = areas.iter().zip(dir).map(|(a, d)| a + s * h * d).collect();
        expectation(&m.with_areas(&shifted)?, f, WilsonMethod::Mc, p)
    };
    let (p1, m1, p2, m2) = (at(1.0)?, at(-1.0)?, at(2.0)?, at(-2.0)?);
    // (4·D_h − D_2h)/3 with D_h = (E₊ − E₋)/2h.
    let c1 = 4.0 / (3.0 * 2.0 * h);
    let c2 = 1.0 / (3.0 * 4.0 * h);
    let mean = c1 * (p1.mean - m1.mean) - c2 * (p2.mean - m2.mean);
    let stderr = ((c1 * p1.stderr).powi(2)
        + (c1 * m1.stderr).powi(2)
        + (c2 * p2.stderr).powi(2)
        + (c2 * m2.stderr).powi(2))
    .sqrt();
    let n_eff = [p1, m1, p2, m2].iter().map(|e| e.n_eff).fold(f64::INFINITY, f64::min);
    Ok(Estimate {
        mean,
        stderr,
        n_eff,
        method: Method::Fd,
    })
}

fn split(m: &MeasureSpec, l: &LoopWord, c: &Crossing) -> Result<(LoopFunctional, LoopFunctional), MmError> {
    let (l1, l2) = split_loop(m.graph(), l, c)?;
    Ok((LoopFunctional::trace(l), LoopFunctional::product(&[&l1, &l2])))
}

/// Alternating area derivative of the Wilson loop at the crossing.
pub fn mm_lhs(
    m: &MeasureSpec,
    l: &LoopWord,
    c: &Crossing,
    method: LhsMethod,
    p: &ChainParams,
) -> Result<Estimate, MmError> {
    let (f, _) = split(m, l, c)?;
    directional_derivative(m, &f, &alternating_direction(m, c), method, p)
}

/// `E[tr hol L₁ · tr hol L₂]` for the two pieces of the loop.
pub fn mm_rhs(
    m: &MeasureSpec,
    l: &LoopWord,
    c: &Crossing,
    method: WilsonMethod,
    p: &ChainParams,
) -> Result<Estimate, MmError> {
    let (_, g) = split(m, l, c)?;
    expectation(m, &g, method, p)
}

/// Both sides of the Makeenko–Migdal equation and their discrepancy. With
/// the score method and Monte Carlo on the right, both sides come from the
/// same chains and the discrepancy uses the standard error of the
/// difference.
pub fn mm_check(
    m: &MeasureSpec,
    l: &LoopWord,
    c: &Crossing,
    methods: MmMethods,
    p: &ChainParams,
) -> Result<MMReport, MmError> {
    let label = format!(
        "{} at {}",
        m.graph().format_word(l.letters()),
        m.graph().vertices()[c.vertex]
    );
    if methods == MmMethods::MC {
        let (f, g) = split(m, l, c)?;
        let dir = alternating_direction(m, c);
        let s = score_summary(m, &f, Some(&g), &dir, p)?;
        let (value, grad) = score_lhs(&s, m.normalized(), 4);
        let lhs = s.linearized(value, &grad, Method::Score);
        let rhs = s.estimate(3, Method::Mc);
        let mut diff_grad = grad;
        diff_grad[3] = Complex64::new(-1.0, 0.0);
        let diff = s.linearized(value - rhs.mean, &diff_grad, Method::Score);
        return Ok(MMReport::from_parts(lhs, rhs, diff.stderr, label));
    }
    let lhs = mm_lhs(m, l, c, methods.lhs, p)?;
    let rhs = mm_rhs(m, l, c, methods.rhs, p)?;
    let se = lhs.stderr.hypot(rhs.stderr);
    Ok(MMReport::from_parts(lhs, rhs, se, label))
}

/// The local equation on four edge variables `a₁..a₄` with the measure
/// `Π_i ρ_{t_i}(a_{i+1}⁻¹ α_i a_i) da`. `f` is a trace functional over edge
/// indices 0–3 (`a_i`) and 4–7 (`α_i`); it must be gauge invariant at the
/// crossing. Compares `(∂₁ − ∂₂ + ∂₃ − ∂₄)∫f dμ` with `−∫∇^{a₁}·∇^{a₂}f dμ`,
/// both per unit of the total mass.
pub fn local_mm_check(
    group: GroupSpec,
    hk: HKParams,
    alpha: &[Unitary; 4],
    t: [f64; 4],
    f: &LoopFunctional,
    p: &ChainParams,
) -> Result<MMReport, MmError> {
    let darts = [0, 1, 2, 3].map(SignedEdge::forward);
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed ^ 0x9e37_79b9_7f4a_7c15);
    functional::require_gauge_invariance(f, group, 8, darts, PRECHECK_TRIALS, &mut rng)?;
    if t.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
        return Err(MmError::Inapplicable(format!("areas must be positive, got {t:?}")));
    }
    let model = Model::local(group, hk, alpha, t);
    let dir = [1.0, -1.0, 1.0, -1.0];
    let s = run_chains(&model, p, 2, |v, out| {
        let fv = f.eval(group, v.edges());
        out[0] = fv * alternating_score(v, &dir)?;
        out[1] = -divergence_pair(f, group, v.edges(), darts[0], darts[1]);
        Ok(())
    })?;
    let lhs = s.estimate(0, Method::Score);
    let rhs = s.estimate(1, Method::Mc);
    let one = Complex64::new(1.0, 0.0);
    let diff = s.linearized(lhs.mean - rhs.mean, &[one, -one], Method::Score);
    Ok(MMReport::from_parts(lhs, rhs, diff.stderr, "local K⁴".into()))
}
