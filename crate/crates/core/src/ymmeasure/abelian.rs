//! Exact U(1) expectations by lattice summation.
//!
//! Expanding every face factor as `ρ_t(e^{iθ}) = Σ_n e^{−n²t/2} e^{inθ}` and
//! integrating out each free edge angle leaves one linear equation per edge
//! on the face modes `n ∈ Z^F`. The solutions form an affine lattice
//! `n₀ + K·z`; the Gaussian weight is enumerated on an ellipsoid around its
//! maximum until the neglected mass is below `e^{−RADIUS}` of the largest
//! term.

use num_complex::Complex64;

use super::{MeasureError, MeasureSpec};
use crate::surfgraph::SignedEdge;

/// Enumeration radius in units of the Gaussian exponent.
const RADIUS: f64 = 50.0;
const MAX_POINTS: f64 = 5e7;

/// Exact value, and its derivative along a face direction if requested.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbelianValue {
    pub value: Complex64,
    pub derivative: Option<Complex64>,
    /// Lattice points that contributed.
    pub terms: usize,
}

/// Exponent vector of a product of loop holonomies: the net number of
/// forward traversals of each edge.
pub fn loop_exponents(edge_count: usize, words: &[&[SignedEdge]]) -> Vec<i64> {
    let mut o = vec![0; edge_count];
    for w in words {
        for l in *w {
            o[l.edge] += l.sign();
        }
    }
    o
}

/// `E[Π_e e^{i o_e θ_e}]`, normalized or not according to the spec.
pub fn abelian_expectation(
    m: &MeasureSpec,
    exponents: &[i64],
    direction: Option<&[f64]>,
) -> Result<AbelianValue, MeasureError> {
    let num = lattice_sum(m, exponents, direction)?;
    if !m.normalized() {
        return Ok(num);
    }
    let zero = vec![0; exponents.len()];
    let z = lattice_sum(m, &zero, direction)?;
    let value = num.value / z.value;
    let derivative = match (num.derivative, z.derivative) {
        (Some(dn), Some(dz)) => Some((dn * z.value - num.value * dz) / (z.value * z.value)),
        _ => None,
    };
    Ok(AbelianValue {
        value,
        derivative,
        terms: num.terms,
    })
}

/// The unnormalized integral `∫ Π_e e^{i o_e θ_e} Π_F ρ_{t_F}(h_F) dθ`.
pub(crate) fn lattice_sum(
    m: &MeasureSpec,
    o: &[i64],
    direction: Option<&[f64]>,
) -> Result<AbelianValue, MeasureError> {
    if m.group().n() != 1 {
        return Err(MeasureError::Inapplicable(
            "the exact lattice sum needs N = 1".into(),
        ));
    }
    let g = m.graph();
    let ne = g.edges().len();
    let nf = g.faces().len();
    if o.len() != ne {
        return Err(MeasureError::Inapplicable(format!(
            "observable has {} exponents for {ne} edges",
            o.len()
        )));
    }
    if let Some(v) = direction {
        if v.len() != nf {
            return Err(MeasureError::Inapplicable(format!(
                "direction has {} entries for {nf} faces",
                v.len()
            )));
        }
    }
    // sigma[f][e]: net signed count of e in face f.
    let mut sigma = vec![vec![0i64; ne]; nf];
    for (fi, f) in g.faces().iter().enumerate() {
        for l in &f.word {
            sigma[fi][l.edge] += l.sign();
        }
    }
    struct Designated {
        edge: usize,
        sign: i64,
        counts: Vec<i64>,
        phi: f64,
    }
    let designated: Vec<Designated> = m
        .constraints()
        .iter()
        .map(|c| {
            let mut counts = vec![0i64; ne];
            for l in c.word() {
                counts[l.edge] += l.sign();
            }
            Designated {
                edge: c.designated().edge,
                sign: c.designated().sign(),
                counts,
                phi: c.angles()[0],
            }
        })
        .collect();
    let free = m.free_edges();
    let mut a = Vec::with_capacity(free.len());
    let mut b = Vec::with_capacity(free.len());
    for &e in &free {
        let mut row: Vec<i64> = (0..nf).map(|f| sigma[f][e]).collect();
        let mut rhs = o[e];
        for d in &designated {
            let k = d.sign * d.counts[e];
            if k != 0 {
                for f in 0..nf {
                    row[f] -= k * sigma[f][d.edge];
                }
                rhs -= k * o[d.edge];
            }
        }
        a.push(row);
        b.push(-rhs);
    }
    let Some(lattice) = solve_integer(&a, &b, nf) else {
        return Ok(AbelianValue {
            value: Complex64::new(0.0, 0.0),
            derivative: direction.map(|_| Complex64::new(0.0, 0.0)),
            terms: 0,
        });
    };
    let t: Vec<f64> = g.faces().iter().map(|f| f.area).collect();
    let phase = |n: &[i64]| -> f64 {
        designated
            .iter()
            .map(|d| {
                let k: i64 = (0..nf).map(|f| n[f] * sigma[f][d.edge]).sum::<i64>() + o[d.edge];
                d.sign as f64 * d.phi * k as f64
            })
            .sum()
    };
    let mut value = Complex64::new(0.0, 0.0);
    let mut deriv = Complex64::new(0.0, 0.0);
    let mut terms = 0;
    lattice.enumerate(&t, |n, exponent| {
        let w = Complex64::from_polar((-exponent).exp(), phase(n));
        value += w;
        if let Some(v) = direction {
            let s: f64 = (0..nf).map(|f| v[f] * (n[f] * n[f]) as f64).sum();
            deriv += -0.5 * s * w;
        }
        terms += 1;
    })?;
    Ok(AbelianValue {
        value,
        derivative: direction.map(|_| deriv),
        terms,
    })
}

/// Integer solutions `n₀ + K·z` of a linear system.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Lattice {
    pub(crate) particular: Vec<i64>,
    /// Columns spanning the kernel over Z.
    pub(crate) kernel: Vec<Vec<i64>>,
}

/// Solves `A n = b` over the integers by unimodular column reduction to
/// echelon form. `None` when there is no integer solution.
pub(crate) fn solve_integer(a: &[Vec<i64>], b: &[i64], cols: usize) -> Option<Lattice> {
    let rows = a.len();
    let mut m: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut u: Vec<Vec<i128>> = (0..cols)
        .map(|i| (0..cols).map(|j| (i == j) as i128).collect())
        .collect();
    let swap_cols = |mat: &mut Vec<Vec<i128>>, i: usize, j: usize| {
        for r in mat.iter_mut() {
            r.swap(i, j);
        }
    };
    let axpy_col = |mat: &mut Vec<Vec<i128>>, dst: usize, q: i128, src: usize| {
        for r in mat.iter_mut() {
            r[dst] -= q * r[src];
        }
    };
    let mut pivot_rows = Vec::new();
    for r in 0..rows {
        let p = pivot_rows.len();
        if p == cols {
            break;
        }
        loop {
            let best = (p..cols)
                .filter(|&c| m[r][c] != 0)
                .min_by_key(|&c| m[r][c].abs());
            let Some(bc) = best else { break };
            swap_cols(&mut m, p, bc);
            swap_cols(&mut u, p, bc);
            let piv = m[r][p];
            let mut clean = true;
            for c in (p + 1)..cols {
                let q = m[r][c].div_euclid(piv);
                if q != 0 {
                    axpy_col(&mut m, c, q, p);
                    axpy_col(&mut u, c, q, p);
                }
                clean &= m[r][c] == 0;
            }
            if clean {
                pivot_rows.push(r);
                break;
            }
        }
    }
    let k = pivot_rows.len();
    let mut y = vec![0i128; cols];
    for (j, &r) in pivot_rows.iter().enumerate() {
        let s = b[r] as i128 - (0..j).map(|i| m[r][i] * y[i]).sum::<i128>();
        if s % m[r][j] != 0 {
            return None;
        }
        y[j] = s / m[r][j];
    }
    for r in 0..rows {
        if (0..k).map(|i| m[r][i] * y[i]).sum::<i128>() != b[r] as i128 {
            return None;
        }
    }
    let particular = (0..cols)
        .map(|i| (0..k).map(|j| u[i][j] * y[j]).sum::<i128>() as i64)
        .collect();
    let kernel = (k..cols)
        .map(|j| (0..cols).map(|i| u[i][j] as i64).collect())
        .collect();
    Some(Lattice { particular, kernel })
}

impl Lattice {
    /// Calls `f(n, ½ Σ t_F n_F²)` for every lattice point within the
    /// enumeration radius of the minimum.
    pub(crate) fn enumerate(
        &self,
        t: &[f64],
        mut f: impl FnMut(&[i64], f64),
    ) -> Result<(), MeasureError> {
        let nf = t.len();
        let r = self.kernel.len();
        let energy = |n: &[i64]| -> f64 { 0.5 * (0..nf).map(|i| t[i] * (n[i] * n[i]) as f64).sum::<f64>() };
        if r == 0 {
            f(&self.particular, energy(&self.particular));
            return Ok(());
        }
        // G = Kᵀ T K, h = Kᵀ T n₀.
        let kcol = &self.kernel;
        let mut gram = vec![vec![0.0; r]; r];
        let mut h = vec![0.0; r];
        for i in 0..r {
            for j in 0..r {
                gram[i][j] = (0..nf).map(|q| t[q] * (kcol[i][q] * kcol[j][q]) as f64).sum();
            }
            h[i] = (0..nf).map(|q| t[q] * (kcol[i][q] * self.particular[q]) as f64).sum();
        }
        let ginv = invert(&gram).ok_or_else(|| MeasureError::Inapplicable("degenerate lattice".into()))?;
        let center: Vec<f64> = (0..r).map(|i| -(0..r).map(|j| ginv[i][j] * h[j]).sum::<f64>()).collect();
        let lo: Vec<i64> = (0..r)
            .map(|i| (center[i] - (2.0 * RADIUS * ginv[i][i]).sqrt()).floor() as i64)
            .collect();
        let hi: Vec<i64> = (0..r)
            .map(|i| (center[i] + (2.0 * RADIUS * ginv[i][i]).sqrt()).ceil() as i64)
            .collect();
        let count: f64 = (0..r).map(|i| (hi[i] - lo[i] + 1) as f64).product();
        if count > MAX_POINTS {
            return Err(MeasureError::LatticeTooLarge(count));
        }
        let point = |z: &[i64], n: &mut [i64]| {
            for q in 0..nf {
                n[q] = self.particular[q] + (0..r).map(|i| kcol[i][q] * z[i]).sum::<i64>();
            }
        };
        // Minimum energy over the box, so the cut is relative to the largest term.
        let mut n = vec![0i64; nf];
        let nearest: Vec<i64> = center.iter().map(|c| c.round() as i64).collect();
        point(&nearest, &mut n);
        let e_ref = energy(&n);
        let mut z = lo.clone();
        loop {
            point(&z, &mut n);
            let e = energy(&n);
            if e - e_ref <= RADIUS {
                f(&n, e);
            }
            let mut i = 0;
            loop {
                if i == r {
                    return Ok(());
                }
                z[i] += 1;
                if z[i] <= hi[i] {
                    break;
                }
                z[i] = lo[i];
                i += 1;
            }
        }
    }
}

fn invert(a: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| (i == j) as i64 as f64));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs()))?;
        if m[p][c].abs() < 1e-300 {
            return None;
        }
        m.swap(c, p);
        let d = m[c][c];
        m[c].iter_mut().for_each(|x| *x /= d);
        for r in 0..n {
            if r != c {
                let k = m[r][c];
                if k != 0.0 {
                    for j in 0..2 * n {
                        m[r][j] -= k * m[c][j];
                    }
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}
