use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::fixtures;
use crate::heatkernel::hk_series;
use crate::ymmeasure::{abelian_expectation, loop_exponents, ConjugacyConstraint};

fn quick(seed: u64) -> ChainParams {
    ChainParams {
        steps: 6_000,
        burn_in: 1_000,
        proposal_scale: 0.5,
        seed,
        chains: 4,
    }
}

fn wilson_mc(m: &MeasureSpec, word: &str, p: &ChainParams) -> Estimate {
    let w = m.graph().parse_word(word).unwrap();
    let spec = m.group();
    estimate(m, move |cfg| cfg.holonomy(spec, &w).unwrap().normalized_trace(), p).unwrap()
}

#[test]
fn constant_observable_has_zero_error() {
    let m = MeasureSpec::simple(fixtures::simple_loop_sphere(1.0, 1.0), 2).unwrap();
    let e = estimate(&m, |_| Complex64::new(1.0, 0.0), &quick(1)).unwrap();
    assert_eq!(e.mean, Complex64::new(1.0, 0.0));
    assert_eq!(e.stderr, 0.0);
    let tr = wilson_mc(&m, "e e^-1", &quick(1));
    assert!((tr.mean - 1.0).norm() < 1e-12);
}

#[test]
fn u1_simple_loop_chain_matches_lattice_sum() {
    let m = MeasureSpec::simple(fixtures::simple_loop_sphere(1.0, 1.0), 1).unwrap();
    let exact = abelian_expectation(&m, &[1], None).unwrap().value;
    let e = wilson_mc(&m, "e", &quick(7));
    let exact = Estimate::exact(exact, Method::AbelianExact);
    assert!(e.sigma_distance(&exact) < 3.0, "{e} vs {exact}");
    assert!(e.stderr < 0.01);
}

#[test]
fn u2_simple_loop_with_huge_outer_face_is_brownian() {
    let m = MeasureSpec::simple(fixtures::simple_loop_sphere(1.0, 100.0), 2).unwrap();
    let e = wilson_mc(&m, "e", &quick(3));
    let target = Estimate::exact(Complex64::new((-0.5f64).exp(), 0.0), Method::Analytic);
    assert!(e.sigma_distance(&target) < 3.0, "{e}");
}

#[test]
fn constrained_u1_chain_matches_lattice_sum() {
    let g = fixtures::constrained_disk(0.8, 1.2);
    let c = ConjugacyConstraint::parse(&g, "z", vec![1.9]).unwrap();
    let m = MeasureSpec::new(g, GroupSpec::new(1), HKParams::default(), vec![c], true).unwrap();
    let o = loop_exponents(3, &[&m.graph().parse_word("x^-1").unwrap()]);
    let exact = Estimate::exact(abelian_expectation(&m, &o, None).unwrap().value, Method::AbelianExact);
    let e = wilson_mc(&m, "x^-1", &quick(5));
    assert!(e.sigma_distance(&exact) < 3.0, "{e} vs {exact}");
}

#[test]
fn estimates_are_reproducible_from_the_seed() {
    let m = MeasureSpec::simple(fixtures::five_face_sphere([0.6; 5]), 2).unwrap();
    let p = ChainParams { steps: 600, burn_in: 100, ..quick(42) };
    let a = wilson_mc(&m, "e1 e2^-1", &p);
    let b = wilson_mc(&m, "e1 e2^-1", &p);
    assert_eq!(a.mean.re.to_bits(), b.mean.re.to_bits());
    assert_eq!(a.mean.im.to_bits(), b.mean.im.to_bits());
    assert_eq!(a.stderr.to_bits(), b.stderr.to_bits());
    let c = wilson_mc(&m, "e1 e2^-1", &ChainParams { seed: 43, ..p });
    assert_ne!(a.mean, c.mean);
}

#[test]
fn merging_chain_summaries_is_order_independent() {
    let m = MeasureSpec::simple(fixtures::simple_loop_sphere(0.7, 1.3), 2).unwrap();
    let model = Model::from_measure(&m);
    let w = m.graph().parse_word("e").unwrap();
    let obs = |v: &ChainView<'_>, out: &mut [Complex64]| {
        out[0] = v.holonomy(&w).normalized_trace();
        Ok(())
    };
    let run = |seed| {
        let p = ChainParams { steps: 900, burn_in: 100, seed, chains: 1, ..quick(0) };
        run_chains(&model, &p, 1, obs).unwrap()
    };
    // Re-label chains so the three runs are distinct chains of one sampler.
    let relabel = |mut s: Summary, id| {
        let mut cs = s.chains().to_vec();
        cs[0].chain = id;
        s = Summary::new(1, cs);
        s
    };
    let (a, b, c) = (relabel(run(1), 0), relabel(run(2), 1), relabel(run(3), 2));
    let x = a.clone().merge(b.clone()).merge(c.clone()).estimate(0, Method::Mc);
    let y = c.merge(a).merge(b).estimate(0, Method::Mc);
    assert!((x.mean - y.mean).norm() <= 1e-14);
    assert!((x.stderr - y.stderr).abs() <= 1e-14);
}

#[test]
fn u1_face_score_matches_series() {
    let m = MeasureSpec::simple(fixtures::simple_loop_sphere(0.9, 1.7), 1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..20 {
        let cfg = EdgeConfig::haar(&m, &mut rng).unwrap();
        for f in 0..2 {
            let face = &m.graph().faces()[f];
            let h = cfg.holonomy(m.group(), &face.word).unwrap();
            let (r, dr) = hk_series(face.area, &h, &HKParams::default()).unwrap();
            let s = face_score(&m, &cfg, f).unwrap();
            assert!((s - dr / r).abs() < 1e-8 * (1.0 + s.abs()));
        }
    }
}

#[test]
fn face_score_vanishes_for_large_areas() {
    let m = MeasureSpec::simple(fixtures::simple_loop_sphere(40.0, 40.0), 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let cfg = EdgeConfig::haar(&m, &mut rng).unwrap();
    assert!(face_score(&m, &cfg, 0).unwrap().abs() < 1e-6);
}

#[test]
fn summed_face_scores_give_the_total_area_derivative_of_log_z() {
    let g = fixtures::five_face_sphere([0.4, 0.8, 0.5, 0.7, 0.6]);
    let m = MeasureSpec::simple(g, 1).unwrap();
    let ones = vec![1.0; 5];
    let z = abelian_expectation(&m.with_normalized(false), &[0; 6], Some(&ones)).unwrap();
    let target = z.derivative.unwrap() / z.value;
    let model = Model::from_measure(&m);
    let s = run_chains(&model, &quick(12), 1, |v, out| {
        let mut acc = 0.0;
        for f in 0..5 {
            acc += v.face_score(f)?;
        }
        out[0] = Complex64::new(acc, 0.0);
        Ok(())
    })
    .unwrap();
    let e = s.estimate(0, Method::Score);
    let exact = Estimate::exact(target, Method::AbelianAnalytic);
    assert!(e.sigma_distance(&exact) < 3.0, "{e} vs {exact}");
}

#[test]
fn tiny_steps_and_flat_densities_are_always_accepted() {
    let m = MeasureSpec::simple(fixtures::five_face_sphere([0.5; 5]), 2).unwrap();
    let model = Model::from_measure(&m);
    let mut chain = Chain::new(&model, 1e-7).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..200 {
        chain.sweep(&mut rng).unwrap();
    }
    let (a, p) = chain.acceptance();
    assert!(a as f64 / p as f64 > 0.99);

    let flat = Model::from_measure(&MeasureSpec::simple(fixtures::five_face_sphere([80.0; 5]), 2).unwrap());
    let mut chain = Chain::new(&flat, 2.0).unwrap();
    for _ in 0..200 {
        chain.sweep(&mut rng).unwrap();
    }
    let (a, p) = chain.acceptance();
    assert!(a as f64 / p as f64 > 0.99);
}

#[test]
fn designated_edges_cannot_be_moved() {
    let g = fixtures::constrained_disk(1.0, 1.0);
    let c = ConjugacyConstraint::parse(&g, "z", vec![0.3, 0.1]).unwrap();
    let m = MeasureSpec::new(g, GroupSpec::new(2), HKParams::default(), vec![c], true).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let cfg = EdgeConfig::haar(&m, &mut rng).unwrap();
    let z = m.graph().edge_index("z").unwrap();
    assert_eq!(metropolis_step(&m, &cfg, z, 0.5, &mut rng), Err(McError::NotFree(z)));
    let y = m.graph().edge_index("y").unwrap();
    let (next, _) = metropolis_step(&m, &cfg, y, 0.5, &mut rng).unwrap();
    let h = next.holonomy(m.group(), m.constraints()[0].word()).unwrap();
    assert!(h.distance(&cfg.reps()[0]) < 1e-12);
}

#[test]
fn invalid_chain_parameters_are_rejected() {
    let bad = [
        ChainParams { burn_in: 10, steps: 10, ..quick(0) },
        ChainParams { proposal_scale: 0.0, ..quick(0) },
        ChainParams { proposal_scale: 2.5, ..quick(0) },
        ChainParams { chains: 0, ..quick(0) },
    ];
    for p in bad {
        assert!(matches!(p.validate(), Err(McError::InvalidParams(_))));
    }
}

/// Binned χ² test of the single-edge U(1) chain against its density
/// `ρ_s(e^{iθ})ρ_t(e^{−iθ})`.
#[test]
fn single_edge_chain_has_the_right_stationary_law() {
    let (s, t) = (0.6, 1.1);
    let m = MeasureSpec::simple(fixtures::simple_loop_sphere(s, t), 1).unwrap();
    let hk = HKParams::default();
    let bins = 20;
    let density = |th: f64| {
        crate::heatkernel::hk_density(s, &Unitary::phase(th), &hk).unwrap()
            * crate::heatkernel::hk_density(t, &Unitary::phase(-th), &hk).unwrap()
    };
    let mut expected = vec![0.0; bins];
    let fine = 200;
    for (b, e) in expected.iter_mut().enumerate() {
        for j in 0..fine {
            let th = -PI + 2.0 * PI * (b as f64 + (j as f64 + 0.5) / fine as f64) / bins as f64;
            *e += density(th);
        }
    }
    let total: f64 = expected.iter().sum();
    expected.iter_mut().for_each(|e| *e /= total);

    let model = Model::from_measure(&m);
    let mut chain = Chain::new(&model, 1.2).unwrap();
    let mut counts = vec![0usize; bins];
    let (thin, draws) = (25, 20_000);
    for sweep in 0..(500 + thin * draws) {
        let mut rng = sweep_rng(99, 0, sweep as u64);
        chain.sweep(&mut rng).unwrap();
        if sweep >= 500 && (sweep - 500) % thin == 0 {
            let th = chain.edges()[0].matrix()[(0, 0)].arg();
            let b = (((th + PI) / (2.0 * PI)) * bins as f64).floor() as usize;
            counts[b.min(bins - 1)] += 1;
        }
    }
    let chi2: f64 = counts
        .iter()
        .zip(&expected)
        .map(|(&c, &p)| {
            let e = p * draws as f64;
            (c as f64 - e).powi(2) / e
        })
        .sum();
    // 99% quantile of χ² with 19 degrees of freedom.
    assert!(chi2 < 36.19, "χ² = {chi2}");
}
