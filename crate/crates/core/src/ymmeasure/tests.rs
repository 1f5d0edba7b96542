use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::fixtures;
use crate::heatkernel::hk_density;
use crate::surfgraph::{alternating_area_vector, reorient_edge, subdivide_edge};

fn u1(m: &MeasureSpec) -> &MeasureSpec {
    assert_eq!(m.group().n(), 1);
    m
}

fn simple_loop_oracle(s: f64, t: f64) -> f64 {
    let num: f64 = (-10..=10)
        .map(|m: i32| {
            let m = m as f64;
            (-(m * m * s + (m + 1.0) * (m + 1.0) * t) / 2.0).exp()
        })
        .sum();
    let den: f64 = (-10..=10).map(|m: i32| (-((m * m) as f64) * (s + t) / 2.0).exp()).sum();
    num / den
}

fn wilson_exact(m: &MeasureSpec, word: &[SignedEdge]) -> Complex64 {
    let o = loop_exponents(m.graph().edges().len(), &[word]);
    abelian_expectation(u1(m), &o, None).unwrap().value
}

#[test]
fn simple_loop_wilson_loop_matches_lattice_oracle() {
    let m = MeasureSpec::simple(fixtures::simple_loop_sphere(1.0, 1.0), 1).unwrap();
    let w = m.graph().parse_word("e").unwrap();
    let v = wilson_exact(&m, &w);
    assert!((v.re - simple_loop_oracle(1.0, 1.0)).abs() < 1e-14);
    // The closed form evaluates to 0.7786397; the commonly quoted 0.778627
    // is off in the fifth digit.
    assert!((v.re - 0.7786397).abs() < 1e-7);
    assert!(v.im.abs() < 1e-15);
}

#[test]
fn simple_loop_large_outer_area_gives_brownian_marginal() {
    let m = MeasureSpec::simple(fixtures::simple_loop_sphere(1.0, 1e3), 1).unwrap();
    let w = m.graph().parse_word("e").unwrap();
    assert!((wilson_exact(&m, &w).re - (-0.5f64).exp()).abs() < 1e-12);
}

#[test]
fn zero_observable_has_expectation_one() {
    for g in fixtures::all_closed_fixtures() {
        let m = MeasureSpec::simple(g, 1).unwrap();
        let zero = vec![0; m.graph().edges().len()];
        let v = abelian_expectation(&m, &zero, None).unwrap();
        assert!((v.value - 1.0).norm() < 1e-14);
    }
}

#[test]
fn partition_function_on_sphere_agrees_across_methods() {
    let m = MeasureSpec::simple(fixtures::simple_loop_sphere(1.0, 1.0), 1).unwrap();
    let exact = partition_function(&m, ZMethod::SphereExact).unwrap();
    let lattice = partition_function(&m, ZMethod::AbelianExact).unwrap();
    let oracle: f64 = (-20..=20).map(|n: i32| (-((n * n) as f64)).exp()).sum();
    assert!((exact.mean.re - oracle).abs() < 1e-12);
    assert!((lattice.mean.re - oracle).abs() < 1e-12);
    assert!((oracle - 1.772637).abs() < 1e-6);
    let mc = partition_function(&m, ZMethod::Mc { samples: 20_000, seed: 3 }).unwrap();
    assert!(mc.sigma_distance(&exact) < 3.0, "{mc} vs {exact}");
    assert!(mc.stderr > 0.0 && mc.stderr < 0.05);
}

#[test]
fn partition_function_depends_only_on_total_area() {
    let total = 2.5;
    let a = MeasureSpec::simple(fixtures::simple_loop_sphere(1.1, 1.4), 1).unwrap();
    let b = MeasureSpec::simple(fixtures::five_face_sphere([0.3, 0.7, 0.5, 0.4, 0.6]), 1).unwrap();
    let (c, _, _) = fixtures::figure_eight_sphere([0.5, 0.5, 1.0, 0.5]);
    let c = MeasureSpec::simple(c, 1).unwrap();
    let rho = hk_density(total, &GroupSpec::new(1).identity(), &HKParams::default()).unwrap();
    for m in [a, b, c] {
        let z = partition_function(&m, ZMethod::AbelianExact).unwrap();
        assert!((z.mean.re - rho).abs() < 1e-10 * rho);
    }
}

#[test]
fn alternating_derivative_of_z_vanishes() {
    let (g, _, c) = fixtures::figure_eight_sphere([0.5, 1.0, 1.5, 1.0]);
    let v: Vec<f64> = alternating_area_vector(&g, &c).iter().map(|&x| x as f64).collect();
    let m = MeasureSpec::simple(g, 1).unwrap().with_normalized(false);
    let zero = vec![0; 4];
    let d = abelian_expectation(&m, &zero, Some(&v)).unwrap().derivative.unwrap();
    assert!(d.norm() < 1e-12);
}

#[test]
fn abelian_derivative_matches_finite_differences() {
    let (g, l, _) = fixtures::figure_eight_sphere([0.5, 1.0, 1.5, 1.0]);
    let m = MeasureSpec::simple(g.clone(), 1).unwrap();
    let o = loop_exponents(4, &[l.letters()]);
    let dir = [0.3, -1.0, 0.7, 0.2];
    let d = abelian_expectation(&m, &o, Some(&dir)).unwrap().derivative.unwrap();
    let h = 1e-5;
    let at = |s: f64| {
        let areas: Vec<f64> = g.areas().iter().zip(&dir).map(|(a, v)| a + s * v).collect();
        abelian_expectation(&m.with_areas(&areas).unwrap(), &o, None).unwrap().value
    };
    let fd = (at(h) - at(-h)) / (2.0 * h);
    assert!((d - fd).norm() < 1e-8, "{d} vs {fd}");
}

#[test]
fn density_of_five_face_sphere_is_product_of_face_kernels() {
    let areas = [0.3, 0.7, 0.5, 0.9, 0.6];
    let m = MeasureSpec::simple(fixtures::five_face_sphere(areas), 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let cfg = EdgeConfig::haar(&m, &mut rng).unwrap();
    let x: Vec<Unitary> = cfg.assigned();
    let hk = HKParams::default();
    let r = |t: f64, u: Unitary| hk_density(t, &u, &hk).unwrap();
    let expected = r(areas[0], x[1].inverse().mul(&x[0]))
        * r(areas[1], x[2].inverse().mul(&x[5]).mul(&x[1]))
        * r(areas[2], x[3].inverse().mul(&x[2]))
        * r(areas[3], x[0].inverse().mul(&x[4].inverse()).mul(&x[3]))
        * r(areas[4], x[5].inverse().mul(&x[4]));
    let d = density_unnormalized(&m, &cfg).unwrap();
    assert!((d - expected).abs() < 1e-12 * expected);
}

#[test]
fn density_is_flat_for_huge_areas() {
    let m = MeasureSpec::simple(fixtures::five_face_sphere([60.0; 5]), 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let cfg = EdgeConfig::haar(&m, &mut rng).unwrap();
    assert!((density_unnormalized(&m, &cfg).unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn density_is_invariant_under_reorientation() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for g in fixtures::all_closed_fixtures() {
        let m = MeasureSpec::simple(g.clone(), 2).unwrap();
        let cfg = EdgeConfig::haar(&m, &mut rng).unwrap();
        let d = density_unnormalized(&m, &cfg).unwrap();
        for e in 0..g.edges().len() {
            let flipped = m.with_graph(reorient_edge(&g, e)).unwrap();
            let mut c2 = cfg.clone();
            c2.set_edge(e, Some(cfg.edge(e).unwrap().inverse()));
            let d2 = density_unnormalized(&flipped, &c2).unwrap();
            assert!((d - d2).abs() <= 1e-12 * d.max(1.0), "edge {e}: {d} vs {d2}");
        }
    }
}

#[test]
fn missing_edge_is_reported() {
    let m = MeasureSpec::simple(fixtures::five_face_sphere([1.0; 5]), 1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut cfg = EdgeConfig::haar(&m, &mut rng).unwrap();
    cfg.set_edge(2, None);
    assert_eq!(
        density_unnormalized(&m, &cfg),
        Err(MeasureError::Missing("e3".into()))
    );
}

fn disk_measure(n: usize, angles: Vec<f64>, s: f64, t: f64) -> MeasureSpec {
    let g = fixtures::constrained_disk(s, t);
    let c = ConjugacyConstraint::parse(&g, "z", angles).unwrap();
    MeasureSpec::new(g, GroupSpec::new(n), HKParams::default(), vec![c], true).unwrap()
}

#[test]
fn substitution_puts_boundary_holonomy_in_the_class() {
    let angles = vec![0.9, -0.4];
    let m = disk_measure(2, angles.clone(), 0.8, 1.3);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..20 {
        let cfg = EdgeConfig::haar(&m, &mut rng).unwrap();
        let c = &m.constraints()[0];
        let h = cfg.holonomy(m.group(), c.word()).unwrap();
        assert!(h.distance(&cfg.reps()[0]) < 1e-12);
        // Same eigenvalues as diag(e^{iφ}).
        let d = Unitary::from_angles(&angles);
        assert!((h.trace() - d.trace()).norm() < 1e-12);
        assert!((h.det() - d.det()).norm() < 1e-12);
        assert!(density_unnormalized(&m, &cfg).unwrap() > 0.0);
    }
}

#[test]
fn identity_class_forces_identity_holonomy() {
    let (g, _, _) = fixtures::figure_eight_disk([1.0; 4]);
    let c = ConjugacyConstraint::parse(&g, "z", vec![0.0, 0.0]).unwrap();
    let m = MeasureSpec::new(g, GroupSpec::new(2), HKParams::default(), vec![c], true).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let cfg = EdgeConfig::haar(&m, &mut rng).unwrap();
    let h = cfg.holonomy(m.group(), m.constraints()[0].word()).unwrap();
    assert!(h.distance(&m.group().identity()) < 1e-12);
}

#[test]
fn u1_constraint_is_a_single_value() {
    let m = disk_measure(1, vec![1.1], 1.0, 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..5 {
        let cfg = EdgeConfig::haar(&m, &mut rng).unwrap();
        let z = cfg.edge(m.graph().edge_index("z").unwrap()).unwrap();
        assert!((z.matrix()[(0, 0)] - Complex64::from_polar(1.0, 1.1)).norm() < 1e-14);
    }
}

/// `∫ e^{−iθ} ρ_s(e^{−iθ}) ρ_t(e^{i(φ+θ)}) dθ / ∫ ρ_s(e^{−iθ}) ρ_t(e^{i(φ+θ)}) dθ`
/// by the periodic trapezoid rule.
fn disk_quadrature(s: f64, t: f64, phi: f64) -> Complex64 {
    let hk = HKParams::default();
    let k = 4000;
    let (mut num, mut den) = (Complex64::new(0.0, 0.0), 0.0);
    for j in 0..k {
        let th = 2.0 * PI * j as f64 / k as f64;
        let w = hk_density(s, &Unitary::phase(-th), &hk).unwrap()
            * hk_density(t, &Unitary::phase(phi + th), &hk).unwrap();
        num += Complex64::from_polar(w, -th);
        den += w;
    }
    num / den
}

#[test]
fn constrained_disk_reduces_to_a_single_integral() {
    for (s, t, phi) in [(1.0, 1.0, 0.7), (0.4, 2.0, 2.5), (1.5, 0.6, -1.2)] {
        let m = disk_measure(1, vec![phi], s, t);
        let o = loop_exponents(3, &[&m.graph().parse_word("x^-1").unwrap()]);
        let v = abelian_expectation(&m, &o, None).unwrap().value;
        let q = disk_quadrature(s, t, phi);
        assert!((v - q).norm() < 1e-8, "{v} vs {q}");
    }
}

#[test]
fn u1_wilson_loops_survive_subdivision() {
    let g = fixtures::five_face_sphere([0.3, 0.7, 0.5, 0.9, 0.6]);
    let (l, _) = fixtures::five_face_loop(&g);
    let m = MeasureSpec::simple(g.clone(), 1).unwrap();
    let before = wilson_exact(&m, l.letters());
    for e in 0..g.edges().len() {
        let (g2, rw) = subdivide_edge(&g, e).unwrap();
        let m2 = MeasureSpec::simple(g2, 1).unwrap();
        let after = wilson_exact(&m2, &rw.rewrite(l.letters()));
        assert!((before - after).norm() < 1e-10);
    }
}

#[test]
fn u1_wilson_loops_survive_edge_addition() {
    let (g, l, c) = fixtures::nongeneric_figure_eight([2.0, 1.0, 0.7]);
    let (g2, _) = fixtures::generic_counterpart(&g, &c, 1.2, 0.8).unwrap();
    let m = MeasureSpec::simple(g, 1).unwrap();
    let m2 = MeasureSpec::simple(g2, 1).unwrap();
    let a = wilson_exact(&m, l.letters());
    let b = wilson_exact(&m2, l.letters());
    assert!((a - b).norm() < 1e-10, "{a} vs {b}");
}

#[test]
fn inapplicable_methods_are_rejected() {
    let disk = disk_measure(1, vec![0.3], 1.0, 1.0);
    assert!(matches!(
        partition_function(&disk, ZMethod::SphereExact),
        Err(MeasureError::Inapplicable(_))
    ));
    let m2 = MeasureSpec::simple(fixtures::simple_loop_sphere(1.0, 1.0), 2).unwrap();
    assert!(matches!(
        partition_function(&m2, ZMethod::AbelianExact),
        Err(MeasureError::Inapplicable(_))
    ));
}

#[test]
fn constraints_must_name_a_boundary_component() {
    let g = fixtures::constrained_disk(1.0, 1.0);
    assert!(matches!(
        ConjugacyConstraint::parse(&g, "x", vec![0.0]),
        Err(MeasureError::Constraint(_))
    ));
    let c = ConjugacyConstraint::parse(&g, "z", vec![0.0]).unwrap();
    assert!(matches!(
        MeasureSpec::new(g.clone(), GroupSpec::new(2), HKParams::default(), vec![c.clone()], true),
        Err(MeasureError::Constraint(_))
    ));
    assert!(matches!(
        MeasureSpec::new(g, GroupSpec::new(1), HKParams::default(), vec![c.clone(), c], true),
        Err(MeasureError::Constraint(_))
    ));
}

#[test]
fn negative_area_is_an_invalid_graph() {
    let g = fixtures::simple_loop_sphere(1.0, -1.0);
    assert!(matches!(
        MeasureSpec::simple(g, 1),
        Err(MeasureError::InvalidGraph(_))
    ));
}
