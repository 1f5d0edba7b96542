//! Image-sum form of the heat kernel for N ≤ 2.
//!
//! For U(1), `ρ_t(e^{iθ}) = √(2π/t) Σ_k exp(−(θ − 2πk)²/2t)`.
//!
//! For U(2), write the eigenvalue angles as `c ± x/2` with `|x| ≤ π`. Then
//!
//! ```text
//! ρ_t = e^{t/8} (8π/t²) Σ_m (−1)^m (x − 2πm)/(2 sin(x/2)) e^{−(x−2πm)²/2t} S_{m mod 2}(c)
//! S_p(c) = Σ_j exp(−(2c − 2π(2j + p))²/2t)
//! ```
//!
//! Everything is evaluated at complex `t` so that a complex step yields the
//! time derivative to full precision.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::unitary::Unitary;

/// Terms whose Gaussian exponent exceeds this are dropped (`e^{−46} ≈ 1e-20`).
const EXPONENT_CUTOFF: f64 = 46.0;
const STEP: f64 = 1e-20;

pub(super) fn density_dt(t: f64, u: &Unitary) -> (f64, f64) {
    let tz = Complex64::new(t, STEP);
    let v = match u.n() {
        1 => u1(tz, u.matrix()[(0, 0)].arg()),
        2 => {
            let (c, x) = u2_coordinates(u);
            u2(tz, c, x)
        }
        n => unreachable!("image sum is only implemented for N ≤ 2, got {n}"),
    };
    (v.re, v.im / STEP)
}

fn gauss(a2: f64, tz: Complex64) -> Complex64 {
    (-a2 / (2.0 * tz)).exp()
}

fn reach(t: f64) -> f64 {
    (2.0 * t * EXPONENT_CUTOFF).sqrt()
}

fn u1(tz: Complex64, theta: f64) -> Complex64 {
    let kmax = ((reach(tz.re) + PI) / (2.0 * PI)).ceil() as i64;
    let mut s = Complex64::new(0.0, 0.0);
    for k in -kmax..=kmax {
        let d = theta - 2.0 * PI * k as f64;
        s += gauss(d * d, tz);
    }
    (2.0 * PI / tz).sqrt() * s
}

/// `(c, x)` with eigenvalue angles `c ± x/2`, `x ∈ [0, π]`.
pub(super) fn u2_coordinates(u: &Unitary) -> (f64, f64) {
    let det = u.det();
    let tr = u.trace();
    let mut c = 0.5 * det.arg();
    let mut r = (tr * Complex64::from_polar(1.0, -c)).re;
    if r < 0.0 {
        c += PI;
        r = -r;
    }
    let x = 2.0 * (0.5 * r).clamp(-1.0, 1.0).acos();
    (c, x)
}

fn u2(tz: Complex64, c: f64, x: f64) -> Complex64 {
    let t = tz.re;
    let r = reach(t);
    let jmax = ((r + 3.0 * PI) / (4.0 * PI)).ceil() as i64 + 1;
    let s = |p: i64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in -jmax..=jmax {
            let d = 2.0 * c - 2.0 * PI * (2 * j + p) as f64;
            acc += gauss(d * d, tz);
        }
        acc
    };
    let s_even = s(0);
    let s_odd = s(1);
    let mmax = ((r + PI) / (2.0 * PI)).ceil() as i64;
    let mut sum = Complex64::new(0.0, 0.0);
    if x.abs() < 0.5 {
        // Pair m with −m so that nothing blows up at x = 0.
        let half = if x == 0.0 { 1.0 } else { (0.5 * x) / (0.5 * x).sin() };
        sum += half * gauss(x * x, tz) * s_even;
        for m in 1..=mmax {
            let a = 2.0 * PI * m as f64;
            let gm = gauss((x - a) * (x - a), tz);
            let gp = gauss((x + a) * (x + a), tz);
            let gamma = a * x / tz;
            // sinh(γ)/γ · e^{−(x² + a²)/2t}
            let sinhc_g = if gamma.norm() < 1.0 {
                let g2 = gamma * gamma;
                let series = 1.0 + g2 / 6.0 * (1.0 + g2 / 20.0 * (1.0 + g2 / 42.0 * (1.0 + g2 / 72.0)));
                series * gauss(x * x + a * a, tz)
            } else {
                (gm - gp) / (2.0 * gamma)
            };
            let bracket = (gm + gp) - 2.0 * a * a / tz * sinhc_g;
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            let sp = if m % 2 == 0 { s_even } else { s_odd };
            sum += sign * half * bracket * sp;
        }
    } else {
        let sin_half = 2.0 * (0.5 * x).sin();
        for m in -mmax..=mmax {
            let d = x - 2.0 * PI * m as f64;
            let sign = if m.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            let sp = if m.rem_euclid(2) == 0 { s_even } else { s_odd };
            sum += sign * (d / sin_half) * gauss(d * d, tz) * sp;
        }
    }
    (tz / 8.0).exp() * (8.0 * PI) / (tz * tz) * sum
}
