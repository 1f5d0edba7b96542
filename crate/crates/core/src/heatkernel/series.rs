use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_complex::Complex64;

use super::{weyl_dim_f64, HKParams, HeatKernelError};
use crate::unitary::CMat;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Elementary and complete symmetric functions of the eigenvalues of a
/// matrix, obtained from power sums by Newton's identities.
pub(super) struct Symmetric {
    h: Vec<Complex64>,
    det: Complex64,
    n: usize,
}

impl Symmetric {
    /// Computes `h_0 … h_{max_h}`.
    pub(super) fn new(u: &CMat, max_h: usize) -> Self {
        let n = u.dim();
        let mut p = Vec::with_capacity(n + 1);
        p.push(Complex64::new(n as f64, 0.0));
        let mut pow = u.clone();
        let mut tmp = CMat::zeros(n);
        for k in 1..=n {
            p.push(pow.trace());
            if k < n {
                CMat::mul_into(&pow, u, &mut tmp);
                std::mem::swap(&mut pow, &mut tmp);
            }
        }
        let mut e = vec![ONE; n + 1];
        for k in 1..=n {
            let mut acc = ZERO;
            for i in 1..=k {
                let term = e[k - i] * p[i];
                if i % 2 == 1 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            e[k] = acc / k as f64;
        }
        let mut h = vec![ZERO; max_h + 1];
        h[0] = ONE;
        for k in 1..=max_h {
            let mut acc = ZERO;
            for i in 1..=k.min(n) {
                let term = e[i] * h[k - i];
                if i % 2 == 1 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            h[k] = acc;
        }
        Self { h, det: e[n], n }
    }

    #[inline]
    fn h(&self, k: i64) -> Complex64 {
        if k < 0 {
            ZERO
        } else {
            self.h[k as usize]
        }
    }

    /// `det U^k`, using `det U⁻¹ = conj(det U)` on the unitary group.
    pub(super) fn det_power(&self, k: i64) -> Complex64 {
        if k >= 0 {
            self.det.powi(k as i32)
        } else {
            self.det.conj().powi((-k) as i32)
        }
    }

    /// Schur polynomial `s_μ = det[h_{μ_i − i + j}]` for a partition μ.
    pub(super) fn jacobi_trudi(&self, mu: &[usize]) -> Complex64 {
        match self.n {
            1 => self.h(mu[0] as i64),
            2 => {
                let (a, b) = (mu[0] as i64, mu[1] as i64);
                self.h(a) * self.h(b) - self.h(a + 1) * self.h(b - 1)
            }
            n => CMat::from_fn(n, |i, j| self.h(mu[i] as i64 - i as i64 + j as i64)).det(),
        }
    }
}

struct Term {
    mu: Vec<usize>,
    low: i64,
    weight: f64,
    c2: f64,
}

/// The set of weights kept at a given time and tolerance.
pub(super) struct Truncation {
    n: usize,
    terms: Vec<Term>,
    max_h: usize,
    cutoff: u32,
    low_range: i64,
    mass: f64,
    tolerance: f64,
}

impl Truncation {
    pub(super) fn cutoff(&self) -> u32 {
        self.cutoff
    }

    /// Values at or below this cannot be told apart from truncation and
    /// rounding error.
    pub(super) fn noise_floor(&self) -> f64 {
        100.0 * (self.tolerance + 1e-16 * self.mass)
    }

    pub(super) fn evaluate(&self, u: &CMat) -> (f64, f64) {
        debug_assert_eq!(u.dim(), self.n);
        let sym = Symmetric::new(u, self.max_h);
        let r = self.low_range;
        let dets: Vec<Complex64> = (-r..=r).map(|k| sym.det_power(k)).collect();
        let (mut rho, mut drho) = (0.0, 0.0);
        for term in &self.terms {
            let chi = dets[(term.low + r) as usize] * sym.jacobi_trudi(&term.mu);
            let v = term.weight * chi.re;
            rho += v;
            drho -= 0.5 * term.c2 * v;
        }
        (rho, drho)
    }
}

fn max_auto_cutoff(n: usize) -> u32 {
    match n {
        1 => 2000,
        2 => 300,
        3 => 80,
        _ => 30,
    }
}

/// Non-increasing tuples with `max(λ_1, −λ_N) = k`.
fn shell(n: usize, k: i64) -> Vec<Vec<i64>> {
    fn rec(n: usize, k: i64, upper: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == n {
            if cur[0] == k || cur[n - 1] == -k {
                out.push(cur.clone());
            }
            return;
        }
        let mut v = upper;
        while v >= -k {
            cur.push(v);
            rec(n, k, v, cur, out);
            cur.pop();
            v -= 1;
        }
    }
    let mut out = Vec::new();
    rec(n, k, k, &mut Vec::with_capacity(n), &mut out);
    out
}

pub(super) fn casimir_of(l: &[i64]) -> f64 {
    let n = l.len() as i64;
    let s: i64 = l
        .iter()
        .enumerate()
        .map(|(i, &x)| x * (x + n + 1 - 2 * (i as i64 + 1)))
        .sum();
    s as f64 / n as f64
}

/// Shell mass `Σ d² e^{−c₂t/2} max(1, c₂/2)`, which bounds the shell's
/// contribution to both the density and its time derivative.
fn shell_mass(n: usize, k: i64, t: f64) -> (Vec<Term>, f64) {
    let mut terms = Vec::new();
    let mut mass = 0.0;
    for l in shell(n, k) {
        let d = weyl_dim_f64(&l);
        let c2 = casimir_of(&l);
        let w = d * (-0.5 * c2 * t).exp();
        mass += d * w * (0.5 * c2).max(1.0);
        let low = l[n - 1];
        terms.push(Term {
            mu: l.iter().map(|&x| (x - low) as usize).collect(),
            low,
            weight: w,
            c2,
        });
    }
    (terms, mass)
}

/// Geometric tail bound from two consecutive shell masses.
fn tail_bound(next: f64, after: f64) -> f64 {
    if next == 0.0 {
        return 0.0;
    }
    let q = after / next;
    if q < 1.0 {
        next / (1.0 - q)
    } else {
        f64::INFINITY
    }
}

fn build(n: usize, t: f64, p: &HKParams) -> Result<Truncation, HeatKernelError> {
    let cap = p.cutoff.unwrap_or_else(|| max_auto_cutoff(n));
    let mut terms = Vec::new();
    let mut total = 0.0;
    let (mut next_terms, mut next_mass) = shell_mass(n, 0, t);
    let mut k: u32 = 0;
    loop {
        terms.append(&mut next_terms);
        total += next_mass;
        let (t1, m1) = shell_mass(n, k as i64 + 1, t);
        let done = if p.cutoff.is_some() {
            k == cap
        } else {
            k >= 1 && tail_bound(m1, shell_mass(n, k as i64 + 2, t).1) < p.tolerance
        };
        if done || k == cap {
            let tail = tail_bound(m1, shell_mass(n, k as i64 + 2, t).1);
            if tail >= p.tolerance {
                return Err(HeatKernelError::TruncationBudget { t, cutoff: k, tail });
            }
            let max_h = terms.iter().map(|x| x.mu[0]).max().unwrap_or(0) + n;
            return Ok(Truncation {
                n,
                terms,
                max_h,
                cutoff: k,
                low_range: k as i64,
                mass: total,
                tolerance: p.tolerance,
            });
        }
        next_terms = t1;
        next_mass = m1;
        k += 1;
    }
}

type Key = (usize, u64, u64, Option<u32>);

fn cache() -> &'static RwLock<HashMap<Key, Arc<Truncation>>> {
    static CACHE: OnceLock<RwLock<HashMap<Key, Arc<Truncation>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Shared truncation for `(N, t, ε, Λ)`, built once.
pub(super) fn truncation(n: usize, t: f64, p: &HKParams) -> Result<Arc<Truncation>, HeatKernelError> {
    let key = (n, t.to_bits(), p.tolerance.to_bits(), p.cutoff);
    if let Some(tr) = cache().read().expect("cache lock").get(&key) {
        return Ok(tr.clone());
    }
    let tr = Arc::new(build(n, t, p)?);
    let mut map = cache().write().expect("cache lock");
    if map.len() > 4096 {
        map.clear();
    }
    Ok(map.entry(key).or_insert(tr).clone())
}
