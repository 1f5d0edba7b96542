//! Browser demo: heat-kernel densities, U(1) Wilson loops against area, and
//! a Makeenko–Migdal check on the figure-eight.

use std::f64::consts::PI;

use wasm_bindgen::prelude::*;

use mmsurf::fixtures;
use mmsurf::heatkernel::{hk_density, HKParams, HeatKernelError};
use mmsurf::mmcheck::{mm_check, MmMethods, WilsonMethod};
use mmsurf::montecarlo::ChainParams;
use mmsurf::unitary::Unitary;
use mmsurf::ymmeasure::{abelian_expectation, MeasureSpec};

/// `ρ_t` along `diag(e^{iθ}, e^{−iθ}, 1, …)` for `θ` on `points` grid points
/// of `[−π, π]`. For `N = 1` the path is `e^{iθ}`. Values below the series
/// noise floor are reported as 0.
pub fn density_curve(n: usize, t: f64, points: usize) -> Result<Vec<f64>, String> {
    if !(1..=4).contains(&n) {
        return Err(format!("N must be between 1 and 4, got {n}"));
    }
    let hk = HKParams::default();
    (0..points)
        .map(|k| {
            let th = -PI + 2.0 * PI * k as f64 / (points.max(2) - 1) as f64;
            let mut angles = vec![0.0; n];
            angles[0] = th;
            if n > 1 {
                angles[1] = -th;
            }
            match hk_density(t, &Unitary::from_angles(&angles), &hk) {
                Ok(v) => Ok(v),
                // Below the series noise floor: zero at plotting resolution.
                Err(HeatKernelError::Underflow { .. }) => Ok(0.0),
                Err(e) => Err(e.to_string()),
            }
        })
        .collect()
}

/// Exact U(1) Wilson loop of a simple loop enclosing area `s` on a sphere of
/// total area `total`, for `points` values of `s` in `(0, total)`.
pub fn wilson_vs_area(total: f64, points: usize) -> Result<Vec<f64>, String> {
    if !(total > 0.0 && total.is_finite()) {
        return Err(format!("total area must be positive, got {total}"));
    }
    (1..=points)
        .map(|k| {
            let s = total * k as f64 / (points + 1) as f64;
            let m = MeasureSpec::simple(fixtures::simple_loop_sphere(s, total - s), 1).map_err(|e| e.to_string())?;
            abelian_expectation(&m, &[1], None)
                .map(|v| v.value.re)
                .map_err(|e| e.to_string())
        })
        .collect()
}

/// One Makeenko–Migdal comparison on the four-lune figure-eight.
#[wasm_bindgen]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MmSummary {
    pub lhs: f64,
    pub lhs_stderr: f64,
    pub rhs: f64,
    pub rhs_stderr: f64,
    pub sigma: f64,
    pub passed: bool,
    pub exact: bool,
}

/// Exact for `N = 1`, Monte Carlo with `steps` sweeps per chain otherwise.
pub fn figure_eight_mm(n: usize, areas: &[f64], steps: usize, seed: u64) -> Result<MmSummary, String> {
    let areas: [f64; 4] = areas
        .try_into()
        .map_err(|_| format!("four areas are required, got {}", areas.len()))?;
    if !(1..=3).contains(&n) {
        return Err(format!("N must be between 1 and 3, got {n}"));
    }
    let (g, l, c) = fixtures::figure_eight_sphere(areas);
    let m = MeasureSpec::simple(g, n).map_err(|e| e.to_string())?;
    let methods = if n == 1 { MmMethods::EXACT } else { MmMethods::MC };
    let p = ChainParams {
        steps,
        burn_in: steps / 5,
        seed,
        chains: 2,
        ..ChainParams::default()
    };
    let r = mm_check(&m, &l, &c, methods, &p).map_err(|e| e.to_string())?;
    Ok(MmSummary {
        lhs: r.lhs.mean.re,
        lhs_stderr: r.lhs.stderr,
        rhs: r.rhs.mean.re,
        rhs_stderr: r.rhs.stderr,
        sigma: r.discrepancy_sigma,
        passed: r.passed,
        exact: methods.rhs == WilsonMethod::AbelianExact,
    })
}

fn js_err(e: String) -> JsValue {
    JsValue::from_str(&e)
}

#[wasm_bindgen(js_name = densityCurve)]
pub fn density_curve_js(n: usize, t: f64, points: usize) -> Result<Vec<f64>, JsValue> {
    density_curve(n, t, points).map_err(js_err)
}

#[wasm_bindgen(js_name = wilsonVsArea)]
pub fn wilson_vs_area_js(total: f64, points: usize) -> Result<Vec<f64>, JsValue> {
    wilson_vs_area(total, points).map_err(js_err)
}

#[wasm_bindgen(js_name = figureEightMm)]
pub fn figure_eight_mm_js(n: usize, areas: Vec<f64>, steps: usize, seed: u64) -> Result<MmSummary, JsValue> {
    figure_eight_mm(n, &areas, steps, seed).map_err(js_err)
}

/// Brownian value `e^{−s/2}` for comparison in the Wilson-loop plot.
#[wasm_bindgen(js_name = planarWilson)]
pub fn planar_wilson(s: f64) -> f64 {
    (-s / 2.0).exp()
}
