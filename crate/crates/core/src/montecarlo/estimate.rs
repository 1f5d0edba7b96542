use std::fmt;

use num_complex::Complex64;

/// How an estimate was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// Markov chain average under the Yang–Mills measure.
    Mc,
    /// Plain average over independent Haar-distributed configurations.
    HaarMc,
    /// Plain average over independent heat-kernel samples.
    Sampling,
    /// Score-function (likelihood-ratio) derivative estimator.
    Score,
    /// Central finite differences with one Richardson step.
    Fd,
    /// Exact U(1) lattice sum.
    AbelianExact,
    /// Term-wise derivative of the U(1) lattice sum.
    AbelianAnalytic,
    /// `ρ_A(id)` on the sphere.
    SphereExact,
    /// Closed-form or quadrature value.
    Analytic,
}

impl Method {
    pub fn is_exact(self) -> bool {
        matches!(
            self,
            Method::AbelianExact | Method::AbelianAnalytic | Method::SphereExact | Method::Analytic
        )
    }

    pub fn tag(self) -> &'static str {
        match self {
            Method::Mc => "mc",
            Method::HaarMc => "haar_mc",
            Method::Sampling => "sampling",
            Method::Score => "score",
            Method::Fd => "fd",
            Method::AbelianExact => "abelian_exact",
            Method::AbelianAnalytic => "abelian_analytic",
            Method::SphereExact => "sphere_exact",
            Method::Analytic => "analytic",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// A mean with its standard error. Exact values carry `stderr = 0` and
/// `n_eff = ∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: Complex64,
    pub stderr: f64,
    pub n_eff: f64,
    pub method: Method,
}

impl Estimate {
    pub fn exact(mean: Complex64, method: Method) -> Self {
        Self {
            mean,
            stderr: 0.0,
            n_eff: f64::INFINITY,
            method,
        }
    }

    /// `|a − b|` in units of `√(σ_a² + σ_b²)`; zero when both are exact and
    /// equal.
    pub fn sigma_distance(&self, other: &Estimate) -> f64 {
        let diff = (self.mean - other.mean).norm();
        let se = self.stderr.hypot(other.stderr);
        if se > 0.0 {
            diff / se
        } else if diff == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    }

    /// Linear combination `a·self + b·other` of independent estimates.
    pub fn combine(&self, a: f64, other: &Estimate, b: f64, method: Method) -> Estimate {
        let stderr = (a * self.stderr).hypot(b * other.stderr);
        Estimate {
            mean: a * self.mean + b * other.mean,
            stderr,
            n_eff: self.n_eff.min(other.n_eff),
            method,
        }
    }
}

impl fmt::Display for Estimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:.6}{:+.6}i ± {:.2e} [{}]",
            self.mean.re, self.mean.im, self.stderr, self.method
        )
    }
}

/// Batch means of a vector of observables recorded along one chain, with the
/// running cross moments needed for effective sample sizes.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainSummary {
    pub chain: u64,
    pub samples: usize,
    pub accepted: u64,
    pub proposed: u64,
    /// One row per completed batch.
    pub batch_means: Vec<Vec<Complex64>>,
    pub batch_size: usize,
    /// `Σ x_i` over all samples.
    sums: Vec<Complex64>,
    /// `Σ x_i conj(x_j)` over all samples, row-major.
    cross: Vec<Complex64>,
}

impl ChainSummary {
    pub(crate) fn new(chain: u64, k: usize, batch_size: usize) -> Self {
        Self {
            chain,
            samples: 0,
            accepted: 0,
            proposed: 0,
            batch_means: Vec::new(),
            batch_size: batch_size.max(1),
            sums: vec![Complex64::new(0.0, 0.0); k],
            cross: vec![Complex64::new(0.0, 0.0); k * k],
        }
    }

    pub(crate) fn record(&mut self, x: &[Complex64], batch: &mut [Complex64], in_batch: &mut usize) {
        let k = self.sums.len();
        for i in 0..k {
            self.sums[i] += x[i];
            for j in 0..k {
                self.cross[i * k + j] += x[i] * x[j].conj();
            }
            batch[i] += x[i];
        }
        self.samples += 1;
        *in_batch += 1;
        if *in_batch == self.batch_size {
            let s = 1.0 / self.batch_size as f64;
            self.batch_means.push(batch.iter().map(|b| b * s).collect());
            batch.iter_mut().for_each(|b| *b = Complex64::new(0.0, 0.0));
            *in_batch = 0;
        }
    }

    pub fn acceptance_rate(&self) -> f64 {
        if self.proposed == 0 {
            0.0
        } else {
            self.accepted as f64 / self.proposed as f64
        }
    }
}

/// Per-chain summaries of a run. Merging is a sorted union, so it is
/// associative and commutative and the final numbers do not depend on the
/// order in which chains finish.
#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    k: usize,
    chains: Vec<ChainSummary>,
}

impl Summary {
    pub fn new(k: usize, mut chains: Vec<ChainSummary>) -> Self {
        chains.sort_by_key(|c| c.chain);
        Self { k, chains }
    }

    pub fn merge(mut self, other: Summary) -> Summary {
        assert_eq!(self.k, other.k, "merging summaries of different observables");
        self.chains.extend(other.chains);
        self.chains.sort_by_key(|c| c.chain);
        self
    }

    pub fn observables(&self) -> usize {
        self.k
    }

    pub fn chains(&self) -> &[ChainSummary] {
        &self.chains
    }

    pub fn samples(&self) -> usize {
        self.chains.iter().map(|c| c.samples).sum()
    }

    pub fn acceptance_rate(&self) -> f64 {
        let (a, p) = self
            .chains
            .iter()
            .fold((0, 0), |(a, p), c| (a + c.accepted, p + c.proposed));
        if p == 0 {
            0.0
        } else {
            a as f64 / p as f64
        }
    }

    /// Grand means of all observables.
    pub fn means(&self) -> Vec<Complex64> {
        let n = self.samples().max(1) as f64;
        let mut m = vec![Complex64::new(0.0, 0.0); self.k];
        for c in &self.chains {
            for (mi, s) in m.iter_mut().zip(&c.sums) {
                *mi += s;
            }
        }
        m.iter().map(|x| x / n).collect()
    }

    pub fn estimate(&self, i: usize, method: Method) -> Estimate {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); self.k];
        coeffs[i] = Complex64::new(1.0, 0.0);
        let mean = self.means()[i];
        self.linearized(mean, &coeffs, method)
    }

    /// Estimate of a smooth function of the means, given its value and its
    /// gradient with respect to each mean (delta method). The standard error
    /// comes from the batch means of the linearized statistic.
    pub fn linearized(&self, value: Complex64, grad: &[Complex64], method: Method) -> Estimate {
        assert_eq!(grad.len(), self.k);
        let lin = |row: &[Complex64]| -> Complex64 { row.iter().zip(grad).map(|(x, g)| x * g).sum() };
        let batches: Vec<Complex64> = self
            .chains
            .iter()
            .flat_map(|c| c.batch_means.iter().map(|b| lin(b)))
            .collect();
        let nb = batches.len();
        let stderr = if nb >= 2 {
            let mean: Complex64 = batches.iter().sum::<Complex64>() / nb as f64;
            let var = batches.iter().map(|b| (b - mean).norm_sqr()).sum::<f64>() / (nb - 1) as f64;
            (var / nb as f64).sqrt()
        } else {
            f64::INFINITY
        };
        let n = self.samples().max(1) as f64;
        let means = self.means();
        let k = self.k;
        let mut second = 0.0;
        for c in &self.chains {
            for i in 0..k {
                for j in 0..k {
                    second += (grad[i] * grad[j].conj() * c.cross[i * k + j]).re;
                }
            }
        }
        let first = lin(&means);
        let var = (second / n - first.norm_sqr()).max(0.0);
        let n_eff = if stderr > 0.0 && stderr.is_finite() {
            (var / (stderr * stderr)).clamp(1.0, n)
        } else {
            n
        };
        Estimate {
            mean: value,
            stderr,
            n_eff,
            method,
        }
    }
}
