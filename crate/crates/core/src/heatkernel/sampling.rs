use rand::Rng;
use rand_distr::StandardNormal;

use super::{check_time, HKParams, HeatKernelError};
use crate::unitary::{CMat, GroupSpec, Unitary};

/// Approximate Brownian motion on U(N) at time `t`: the product of
/// `m = ⌈t/δ⌉` geodesic increments `exp(√(t/m)·G)`. For N = 1 the product is
/// sampled in one draw, which has exactly the same law.
pub fn hk_sample<R: Rng + ?Sized>(
    t: f64,
    spec: GroupSpec,
    p: &HKParams,
    rng: &mut R,
) -> Result<Unitary, HeatKernelError> {
    Ok(hk_sample_path(&[t], spec, p, rng)?.pop().expect("one time"))
}

/// One Brownian path observed at increasing `times`. Each gap
/// `t_k − t_{k−1}` is covered by `⌈gap/δ⌉` equal steps, so a single time
/// reproduces [`hk_sample`].
pub fn hk_sample_path<R: Rng + ?Sized>(
    times: &[f64],
    spec: GroupSpec,
    p: &HKParams,
    rng: &mut R,
) -> Result<Vec<Unitary>, HeatKernelError> {
    p.validate()?;
    let mut prev = 0.0;
    for &t in times {
        check_time(t)?;
        if t <= prev {
            return Err(HeatKernelError::InvalidTime(t));
        }
        prev = t;
    }
    let n = spec.n();
    let mut out = Vec::with_capacity(times.len());
    if n == 1 {
        let mut theta = 0.0;
        let mut prev = 0.0;
        for &t in times {
            let g: f64 = rng.sample(StandardNormal);
            theta += (t - prev).sqrt() * g;
            prev = t;
            out.push(Unitary::phase(theta));
        }
        return Ok(out);
    }
    let mut acc = CMat::identity(n);
    let mut tmp = CMat::zeros(n);
    let mut prev = 0.0;
    for &t in times {
        let gap = t - prev;
        prev = t;
        let m = (gap / p.brownian_step).ceil().max(1.0) as usize;
        let scale = (gap / m as f64).sqrt();
        for step in 0..m {
            let x = spec.gaussian_algebra(rng).scale_re(scale);
            let inc = Unitary::exp_algebra(&x);
            CMat::mul_into(&acc, inc.matrix(), &mut tmp);
            std::mem::swap(&mut acc, &mut tmp);
            if step % 256 == 255 {
                acc = reunitarized(acc);
            }
        }
        acc = reunitarized(acc);
        out.push(Unitary::new_unchecked(acc.clone()));
    }
    Ok(out)
}

fn reunitarized(m: CMat) -> CMat {
    let mut u = Unitary::new_unchecked(m);
    u.reunitarize();
    u.into_matrix()
}
