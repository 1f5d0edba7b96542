//! Dense complex square matrices sized for the small groups this crate works
//! with. Storage is inline up to 4×4 so hot loops never touch the allocator.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use smallvec::SmallVec;

type Storage = SmallVec<[Complex64; 16]>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Row-major `n × n` complex matrix.
#[derive(Clone, PartialEq)]
pub struct CMat {
    n: usize,
    data: Storage,
}

impl fmt::Debug for CMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMat({}×{})", self.n, self.n)?;
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n)
                .map(|j| {
                    let z = self[(i, j)];
                    format!("{:+.6}{:+.6}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl std::ops::Index<(usize, usize)> for CMat {
    type Output = Complex64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMat {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

impl CMat {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: SmallVec::from_elem(ZERO, n * n),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Storage::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn diagonal(entries: &[Complex64]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &z) in entries.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    /// Builds from row-major data. Panics if `data.len()` is not a square.
    pub fn from_row_slice(n: usize, data: &[Complex64]) -> Self {
        assert_eq!(data.len(), n * n, "expected {} entries", n * n);
        Self {
            n,
            data: SmallVec::from_slice(data),
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_re(&self, s: f64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    /// `out = a · b`. `out` must not alias either input.
    #[inline]
    pub fn mul_into(a: &CMat, b: &CMat, out: &mut CMat) {
        let n = a.n;
        debug_assert_eq!(n, b.n);
        debug_assert_eq!(n, out.n);
        match n {
            1 => out.data[0] = a.data[0] * b.data[0],
            2 => {
                let (a, b) = (&a.data, &b.data);
                out.data[0] = a[0] * b[0] + a[1] * b[2];
                out.data[1] = a[0] * b[1] + a[1] * b[3];
                out.data[2] = a[2] * b[0] + a[3] * b[2];
                out.data[3] = a[2] * b[1] + a[3] * b[3];
            }
            _ => {
                for i in 0..n {
                    for j in 0..n {
                        let mut acc = ZERO;
                        for k in 0..n {
                            acc += a.data[i * n + k] * b.data[k * n + j];
                        }
                        out.data[i * n + j] = acc;
                    }
                }
            }
        }
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        (0..self.n)
            .map(|j| (0..self.n).map(|i| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn norm_frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// LU factorization with partial pivoting. Returns `None` for a
    /// numerically singular matrix.
    fn lu(&self) -> Option<(CMat, Vec<usize>, bool)> {
        let n = self.n;
        let mut a = self.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut odd = false;
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, a[(i, k)].norm()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pmax <= scale * 1e-300 {
                return None;
            }
            if p != k {
                for j in 0..n {
                    a.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                odd = !odd;
            }
            let pivot = a[(k, k)];
            for i in (k + 1)..n {
                let factor = a[(i, k)] / pivot;
                a[(i, k)] = factor;
                for j in (k + 1)..n {
                    let t = a[(k, j)];
                    a[(i, j)] -= factor * t;
                }
            }
        }
        Some((a, perm, odd))
    }

    pub fn det(&self) -> Complex64 {
        match self.n {
            0 => ONE,
            1 => self.data[0],
            2 => self.data[0] * self.data[3] - self.data[1] * self.data[2],
            _ => match self.lu() {
                None => ZERO,
                Some((lu, _, odd)) => {
                    let d: Complex64 = (0..self.n).map(|i| lu[(i, i)]).product();
                    if odd {
                        -d
                    } else {
                        d
                    }
                }
            },
        }
    }

    /// Solves `self · X = rhs`.
    pub fn solve(&self, rhs: &CMat) -> Option<CMat> {
        let n = self.n;
        let (lu, perm, _) = self.lu()?;
        let mut x = CMat::zeros(n);
        for col in 0..n {
            let mut y: SmallVec<[Complex64; 4]> = (0..n).map(|i| rhs[(perm[i], col)]).collect();
            for i in 0..n {
                for k in 0..i {
                    let t = lu[(i, k)] * y[k];
                    y[i] -= t;
                }
            }
            for i in (0..n).rev() {
                for k in (i + 1)..n {
                    let t = lu[(i, k)] * y[k];
                    y[i] -= t;
                }
                y[i] /= lu[(i, i)];
            }
            for i in 0..n {
                x[(i, col)] = y[i];
            }
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<CMat> {
        self.solve(&CMat::identity(self.n))
    }

    /// Matrix exponential by scaling and squaring around a diagonal
    /// [6/6] Padé approximant. Relative accuracy is near machine precision
    /// once the scaled norm is at most 1/2.
    pub fn exp(&self) -> CMat {
        let n = self.n;
        if n == 1 {
            return CMat::from_row_slice(1, &[self.data[0].exp()]);
        }
        let norm = self.norm_one();
        let mut squarings = 0u32;
        if norm > 0.5 {
            squarings = (norm / 0.5).log2().ceil() as u32;
        }
        let a = self.scale_re(0.5f64.powi(squarings as i32));
        let mut out = pade6(&a);
        let mut tmp = CMat::zeros(n);
        for _ in 0..squarings {
            CMat::mul_into(&out, &out, &mut tmp);
            std::mem::swap(&mut out, &mut tmp);
        }
        out
    }
}

const PADE6: [f64; 7] = [
    1.0,
    1.0 / 2.0,
    5.0 / 44.0,
    1.0 / 66.0,
    1.0 / 792.0,
    1.0 / 15840.0,
    1.0 / 665280.0,
];

fn pade6(a: &CMat) -> CMat {
    let n = a.dim();
    let id = CMat::identity(n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let even = &(&(&id.scale_re(PADE6[0]) + &a2.scale_re(PADE6[2])) + &a4.scale_re(PADE6[4]))
        + &a6.scale_re(PADE6[6]);
    let odd_inner =
        &(&id.scale_re(PADE6[1]) + &a2.scale_re(PADE6[3])) + &a4.scale_re(PADE6[5]);
    let odd = a * &odd_inner;
    let num = &even + &odd;
    let den = &even - &odd;
    den.solve(&num)
        .expect("Padé denominator is nonsingular for norm ≤ 1/2")
}

impl Mul for &CMat {
    type Output = CMat;
    fn mul(self, rhs: &CMat) -> CMat {
        let mut out = CMat::zeros(self.n);
        CMat::mul_into(self, rhs, &mut out);
        out
    }
}

impl Add for &CMat {
    type Output = CMat;
    fn add(self, rhs: &CMat) -> CMat {
        debug_assert_eq!(self.n, rhs.n);
        CMat {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CMat {
    type Output = CMat;
    fn sub(self, rhs: &CMat) -> CMat {
        debug_assert_eq!(self.n, rhs.n);
        CMat {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}
