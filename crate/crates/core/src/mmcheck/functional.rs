//! Trace functionals, their mixed Laplacian at a crossing, and extended
//! gauge invariance.

use num_complex::Complex64;
use rand::Rng;

use super::MmError;
use crate::surfgraph::{GraphError, LoopWord, SignedEdge, SurfaceGraph, Word};
use crate::unitary::{word_eval_full, CMat, GroupSpec, LieBasis, Unitary};

/// Product of normalized traces of loop holonomies. The empty product is
/// the constant 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopFunctional {
    factors: Vec<Word>,
}

impl LoopFunctional {
    pub fn one() -> Self {
        Self { factors: Vec::new() }
    }

    pub fn trace(l: &LoopWord) -> Self {
        Self {
            factors: vec![l.letters().to_vec()],
        }
    }

    pub fn product(loops: &[&LoopWord]) -> Self {
        Self {
            factors: loops.iter().map(|l| l.letters().to_vec()).collect(),
        }
    }

    /// Factors given by words in the edge ids of `g`; each must be closed.
    pub fn parse(g: &SurfaceGraph, words: &[&str]) -> Result<Self, GraphError> {
        let factors = words
            .iter()
            .map(|w| LoopWord::parse(g, w).map(|l| l.letters().to_vec()))
            .collect::<Result<_, _>>()?;
        Ok(Self { factors })
    }

    /// Factors over raw edge indices, for models without a graph.
    pub fn from_words(factors: Vec<Word>) -> Self {
        Self { factors }
    }

    pub fn factors(&self) -> &[Word] {
        &self.factors
    }

    pub fn eval(&self, spec: GroupSpec, edges: &[Unitary]) -> Complex64 {
        self.factors
            .iter()
            .map(|w| word_eval_full(spec, w, edges).normalized_trace())
            .product()
    }

    /// Net exponent of each edge in the product of holonomies (U(1) only).
    pub fn exponents(&self, edge_count: usize) -> Vec<i64> {
        let words: Vec<&[SignedEdge]> = self.factors.iter().map(|w| w.as_slice()).collect();
        crate::ymmeasure::loop_exponents(edge_count, &words)
    }
}

/// Where right-multiplying a dart variable by `e^{sX}` inserts `X` into one
/// factor's matrix product, and with which sign.
struct Insertion {
    point: usize,
    sign: f64,
}

/// Matrix-order factors of a word: `mats[0]⋯mats[L−1]` is the holonomy.
fn matrices(w: &[SignedEdge], edges: &[Unitary]) -> Vec<CMat> {
    w.iter()
        .rev()
        .map(|l| {
            let x = edges[l.edge].matrix();
            if l.inverse {
                x.adjoint()
            } else {
                x.clone()
            }
        })
        .collect()
}

/// Occurrences of the dart variable `a` in `w`. A letter equal to `a`
/// becomes `a e^{sX}` (X right after it in matrix order); a letter equal to
/// `a⁻¹` becomes `e^{−sX} a⁻¹` (X right before it, negative sign).
fn insertions(w: &[SignedEdge], a: SignedEdge) -> Vec<Insertion> {
    let len = w.len();
    w.iter()
        .enumerate()
        .filter(|(_, l)| l.edge == a.edge)
        .map(|(p, l)| {
            let q = len - 1 - p;
            if l.inverse == a.inverse {
                Insertion { point: q + 1, sign: 1.0 }
            } else {
                Insertion { point: q, sign: -1.0 }
            }
        })
        .collect()
}

fn product(mats: &[CMat], n: usize) -> CMat {
    let mut acc = CMat::identity(n);
    for m in mats {
        acc = &acc * m;
    }
    acc
}

fn ntr(m: &CMat) -> Complex64 {
    m.trace() / m.dim() as f64
}

/// `(∇^a·∇^b f)` for a trace functional, where `∇^a` differentiates the
/// dart variable `a` along right translations. Uses
/// `Σ_X tr(AXBX) = −tr(A)tr(B)` and `Σ_X tr(AX)tr(BX) = −tr(AB)/N²`.
pub fn divergence_pair(
    f: &LoopFunctional,
    spec: GroupSpec,
    edges: &[Unitary],
    a: SignedEdge,
    b: SignedEdge,
) -> Complex64 {
    assert_ne!(a.edge, b.edge, "darts must lie on distinct edges");
    let n = spec.n();
    let mats: Vec<Vec<CMat>> = f.factors.iter().map(|w| matrices(w, edges)).collect();
    let traces: Vec<Complex64> = mats.iter().map(|m| ntr(&product(m, n))).collect();
    let ins_a: Vec<Vec<Insertion>> = f.factors.iter().map(|w| insertions(w, a)).collect();
    let ins_b: Vec<Vec<Insertion>> = f.factors.iter().map(|w| insertions(w, b)).collect();
    // Cyclic rotation of a factor so that X sits at the end: tr(R X).
    let rotated = |k: usize, point: usize| -> CMat {
        let m = &mats[k];
        &product(&m[point..], n) * &product(&m[..point], n)
    };
    let others = |skip: &[usize]| -> Complex64 {
        traces
            .iter()
            .enumerate()
            .filter(|(i, _)| !skip.contains(i))
            .map(|(_, t)| *t)
            .product()
    };
    let mut total = Complex64::new(0.0, 0.0);
    for k in 0..f.factors.len() {
        let m = &mats[k];
        let mut same = Complex64::new(0.0, 0.0);
        for ia in &ins_a[k] {
            for ib in &ins_b[k] {
                let (i1, i2) = (ia.point.min(ib.point), ia.point.max(ib.point));
                let outer = &product(&m[i2..], n) * &product(&m[..i1], n);
                let inner = product(&m[i1..i2], n);
                same -= ia.sign * ib.sign * ntr(&outer) * ntr(&inner);
            }
        }
        if same != Complex64::new(0.0, 0.0) {
            total += same * others(&[k]);
        }
        for l in 0..f.factors.len() {
            if l == k || ins_a[k].is_empty() || ins_b[l].is_empty() {
                continue;
            }
            let mut cross = Complex64::new(0.0, 0.0);
            for ia in &ins_a[k] {
                let ra = rotated(k, ia.point);
                for ib in &ins_b[l] {
                    let rb = rotated(l, ib.point);
                    cross -= ia.sign * ib.sign * ntr(&(&ra * &rb)) / (n * n) as f64;
                }
            }
            total += cross * others(&[k, l]);
        }
    }
    total
}

/// Right translation of a dart variable: `a → a·g`, expressed on the
/// underlying edge variable.
pub fn translate_dart(edges: &mut [Unitary], a: SignedEdge, g: &Unitary) {
    let x = &edges[a.edge];
    edges[a.edge] = if a.inverse { g.inverse().mul(x) } else { x.mul(g) };
}

/// `∇^a·∇^b f` by mixed central differences over an orthonormal basis.
pub fn divergence_pair_numeric(
    f: impl Fn(&[Unitary]) -> Complex64,
    basis: &LieBasis,
    edges: &[Unitary],
    a: SignedEdge,
    b: SignedEdge,
    h: f64,
) -> Complex64 {
    let mut total = Complex64::new(0.0, 0.0);
    let mut work = edges.to_vec();
    for x in basis.elements() {
        let plus = Unitary::exp_algebra(&x.scale_re(h));
        let minus = plus.inverse();
        let mut eval = |ga: &Unitary, gb: &Unitary| {
            work.clone_from_slice(edges);
            translate_dart(&mut work, a, ga);
            translate_dart(&mut work, b, gb);
            f(&work)
        };
        let v = eval(&plus, &plus) - eval(&plus, &minus) - eval(&minus, &plus) + eval(&minus, &minus);
        total += v / (4.0 * h * h);
    }
    total
}

/// Largest deviation found by [`gauge_invariance_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaugeReport {
    pub trials: usize,
    pub max_violation: f64,
    pub passed: bool,
}

/// Tolerance on extended gauge invariance.
pub const GAUGE_TOL: f64 = 1e-10;

/// Checks `f(a₁x, a₂, a₃x, a₄) = f(a₁, a₂x, a₃, a₄x) = f(a)` on random
/// configurations and random `x`.
pub fn gauge_invariance_check<R: Rng + ?Sized>(
    f: impl Fn(&[Unitary]) -> Complex64,
    spec: GroupSpec,
    edge_count: usize,
    darts: [SignedEdge; 4],
    trials: usize,
    rng: &mut R,
) -> GaugeReport {
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let edges: Vec<Unitary> = (0..edge_count).map(|_| spec.haar(rng)).collect();
        let x = spec.haar(rng);
        let base = f(&edges);
        for pair in [[0, 2], [1, 3]] {
            let mut moved = edges.clone();
            for i in pair {
                translate_dart(&mut moved, darts[i], &x);
            }
            worst = worst.max((f(&moved) - base).norm());
        }
    }
    GaugeReport {
        trials,
        max_violation: worst,
        passed: worst <= GAUGE_TOL,
    }
}

pub(super) fn require_gauge_invariance<R: Rng + ?Sized>(
    f: &LoopFunctional,
    spec: GroupSpec,
    edge_count: usize,
    darts: [SignedEdge; 4],
    trials: usize,
    rng: &mut R,
) -> Result<GaugeReport, MmError> {
    let r = gauge_invariance_check(|e| f.eval(spec, e), spec, edge_count, darts, trials, rng);
    if r.passed {
        Ok(r)
    } else {
        Err(MmError::NotGaugeInvariant(r.max_violation))
    }
}
