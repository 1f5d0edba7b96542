//! Command dispatch. Each command turns a resolved configuration into rows
//! of the results table.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mmsurf::fixtures;
use mmsurf::mmcheck::{
    directional_derivative, divergence_pair, divergence_pair_numeric, gauge_invariance_check, local_mm_check,
    mm_check, mm_lhs, wilson_loop, LhsMethod, LoopFunctional, MMReport, MmError, MmMethods, WilsonMethod,
};
use mmsurf::montecarlo::{Estimate, Method};
use mmsurf::surfgraph::{alternating_area_vector, reorient_edge, subdivide_edge, LoopWord, SignedEdge};
use mmsurf::unitary::{CMat, GroupSpec, LieBasis, Unitary};
use mmsurf::ymmeasure::{partition_function, MeasureError, MeasureSpec, ZMethod};

use crate::config::{AlphaChoice, Command, Resolved, RunConfig, ZMethodName};
use crate::output::Row;

#[derive(Debug)]
pub struct RunError(pub String);

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<MmError> for RunError {
    fn from(e: MmError) -> Self {
        RunError(e.to_string())
    }
}

impl From<MeasureError> for RunError {
    fn from(e: MeasureError) -> Self {
        RunError(e.to_string())
    }
}

fn measure<'a>(r: &'a Resolved, what: &str) -> Result<&'a MeasureSpec, RunError> {
    r.measure
        .as_ref()
        .ok_or_else(|| RunError(format!("`{what}` needs a [graph] section")))
}

fn section<'a, T>(opt: &'a Option<T>, name: &str) -> Result<&'a T, RunError> {
    opt.as_ref().ok_or_else(|| RunError(format!("missing [{name}] section")))
}

/// Runs `command` and returns the result rows.
pub fn run(command: Command, cfg: &RunConfig, r: &Resolved) -> Result<Vec<Row>, RunError> {
    match command {
        Command::Validate => validate(r),
        Command::Partition => partition(cfg, r),
        Command::Wilson => wilson(cfg, r),
        Command::MmCheck => mm(cfg, r),
        Command::LocalMmCheck => local(cfg, r),
        Command::Selftest => selftest(cfg.seed),
    }
}

fn validate(r: &Resolved) -> Result<Vec<Row>, RunError> {
    let mut rows = Vec::new();
    if let Some(m) = &r.measure {
        let g = m.graph();
        let exact = |x: f64| Estimate::exact(Complex64::new(x, 0.0), Method::Analytic);
        rows.push(Row::estimate("euler_characteristic", &exact(g.euler_characteristic() as f64)));
        rows.push(Row::estimate("total_area", &exact(g.total_area())));
        rows.push(Row::estimate("free_edges", &exact(m.free_edges().len() as f64)));
    }
    for (name, c) in &r.crossings {
        let generic = if c.is_generic() { 1.0 } else { 0.0 };
        let e = Estimate::exact(Complex64::new(generic, 0.0), Method::Analytic);
        rows.push(Row::estimate(&format!("crossing_generic[{name}]"), &e));
    }
    Ok(rows)
}

fn partition(cfg: &RunConfig, r: &Resolved) -> Result<Vec<Row>, RunError> {
    let m = measure(r, "partition")?;
    let o = section(&cfg.partition, "partition")?;
    let method = match o.method {
        ZMethodName::Mc => ZMethod::Mc {
            samples: o.samples,
            seed: cfg.seed,
        },
        ZMethodName::SphereExact => ZMethod::SphereExact,
        ZMethodName::AbelianExact => ZMethod::AbelianExact,
    };
    let z = partition_function(m, method)?;
    let mut rows = vec![Row::estimate("Z", &z)];
    let g = m.graph();
    if o.method != ZMethodName::SphereExact && g.euler_characteristic() == 2 && g.boundary().is_empty() {
        let exact = partition_function(m, ZMethod::SphereExact)?;
        rows.push(Row::estimate("rho_A(id)", &exact));
        rows.push(Row::comparison("Z_vs_rho_A(id)", &z, &exact, 1e-10));
    }
    Ok(rows)
}

fn wilson(cfg: &RunConfig, r: &Resolved) -> Result<Vec<Row>, RunError> {
    let m = measure(r, "wilson")?;
    let o = section(&cfg.wilson, "wilson")?;
    let names: Vec<&str> = if o.loops.is_empty() {
        r.loops.iter().map(|(n, _)| n.as_str()).collect()
    } else {
        o.loops.iter().map(String::as_str).collect()
    };
    let mut rows = Vec::new();
    for name in names {
        let l = r.loop_named(name).expect("validated");
        let e = wilson_loop(m, l, o.method.into(), &r.chain)?;
        rows.push(Row::estimate(&format!("W[{name}]"), &e));
    }
    Ok(rows)
}

fn report_rows(rows: &mut Vec<Row>, tag: &str, rep: &MMReport) {
    rows.push(Row::estimate(&format!("mm_lhs[{tag}]"), &rep.lhs));
    rows.push(Row::estimate(&format!("mm_rhs[{tag}]"), &rep.rhs));
    rows.push(Row::report(&format!("mm_discrepancy[{tag}]"), rep));
}

fn mm(cfg: &RunConfig, r: &Resolved) -> Result<Vec<Row>, RunError> {
    let m = measure(r, "mm-check")?;
    let o = section(&cfg.mm_check, "mm_check")?;
    let l = r.loop_named(&o.loop_name).expect("validated");
    let c = r.crossing_named(&o.crossing).expect("validated");
    let methods = MmMethods {
        lhs: o.lhs_method(),
        rhs: o.rhs.into(),
    };
    let rep = mm_check(m, l, c, methods, &r.chain)?;
    let tag = format!("{}@{}", o.loop_name, o.crossing);
    let mut rows = Vec::new();
    report_rows(&mut rows, &tag, &rep);
    if o.cross_check_fd && !matches!(methods.lhs, LhsMethod::Fd { .. }) {
        let fd = mm_lhs(m, l, c, LhsMethod::Fd { step: o.fd_step }, &r.chain)?;
        rows.push(Row::estimate(&format!("mm_lhs_fd[{tag}]"), &fd));
        rows.push(Row::comparison(&format!("lhs_vs_fd[{tag}]"), &rep.lhs, &fd, 1e-9));
    }
    Ok(rows)
}

fn local(cfg: &RunConfig, r: &Resolved) -> Result<Vec<Row>, RunError> {
    let lm = r
        .local
        .as_ref()
        .ok_or_else(|| RunError("missing [local_mm] section".into()))?;
    let spec = r.group;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let draws = match lm.alpha {
        AlphaChoice::Identity => 1,
        AlphaChoice::Haar => lm.draws,
    };
    let mut rows = Vec::new();
    for k in 0..draws {
        let alpha = match lm.alpha {
            AlphaChoice::Identity => [0; 4].map(|_| spec.identity()),
            AlphaChoice::Haar => [0; 4].map(|_| spec.haar(&mut rng)),
        };
        let p = mmsurf::montecarlo::ChainParams {
            seed: cfg.seed.wrapping_add(k as u64),
            ..r.chain
        };
        let rep = local_mm_check(spec, r.hk, &alpha, lm.t, &lm.functional, &p)?;
        report_rows(&mut rows, &format!("alpha{k}"), &rep);
    }
    Ok(rows)
}

fn check(quantity: &str, method: Method, value: f64, tol: f64) -> Row {
    Row::check(quantity, method, value, value <= tol)
}

/// Fast exact and algebraic invariants on the built-in fixtures.
pub fn selftest(seed: u64) -> Result<Vec<Row>, RunError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = mmsurf::montecarlo::ChainParams::default();
    let mut rows = Vec::new();

    let (g, l, c) = fixtures::figure_eight_sphere([0.5, 1.0, 1.5, 1.0]);
    let m1 = MeasureSpec::simple(g, 1)?;
    let rep = mm_check(&m1, &l, &c, MmMethods::EXACT, &p)?;
    rows.push(Row::report("abelian_mm[figure_eight]", &rep));

    let (ng, nl, nc) = fixtures::nongeneric_figure_eight([2.0, 0.7, 1.1]);
    let rep = mm_check(&MeasureSpec::simple(ng, 1)?, &nl, &nc, MmMethods::EXACT, &p)?;
    rows.push(Row::report("abelian_mm[nongeneric]", &rep));

    let mut worst: f64 = 0.0;
    for n in 1..=4 {
        let basis = LieBasis::new(GroupSpec::new(n));
        for _ in 0..100 {
            let c = CMat::from_fn(n, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            let lhs = basis.casimir_sandwich(&c);
            let rhs = CMat::identity(n).scale(-c.trace() / n as f64);
            worst = worst.max((&lhs - &rhs).max_abs());
        }
    }
    rows.push(check("casimir_sandwich_identity", Method::Analytic, worst, 1e-12));

    let spec = GroupSpec::new(2);
    let f = SignedEdge::forward;
    let b = |e| SignedEdge::forward(e).inv();
    let form = LoopFunctional::from_words(vec![vec![f(0), f(5), b(3), f(1), f(4), b(2)]]);
    let darts = [0, 1, 2, 3].map(f);
    let gauge = gauge_invariance_check(|e| form.eval(spec, e), spec, 6, darts, 1000, &mut rng);
    rows.push(check("gauge_invariance[crossing_form]", Method::Analytic, gauge.max_violation, 1e-10));

    let basis = LieBasis::new(spec);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let e: Vec<Unitary> = (0..6).map(|_| spec.haar(&mut rng)).collect();
        let exact = divergence_pair(&form, spec, &e, f(0), f(1));
        let num = divergence_pair_numeric(|x| form.eval(spec, x), &basis, &e, f(0), f(1), 1e-4);
        worst = worst.max((exact - num).norm());
    }
    rows.push(check("divergence_numeric_vs_analytic", Method::Analytic, worst, 1e-6));

    let five = fixtures::five_face_sphere([0.3, 0.7, 0.5, 0.9, 0.6]);
    let m5 = MeasureSpec::simple(five.clone(), 1)?.with_normalized(false);
    let za = partition_function(&m5, ZMethod::AbelianExact)?;
    let zs = partition_function(&m5, ZMethod::SphereExact)?;
    rows.push(check("Z_lattice_vs_rho_A(id)", Method::AbelianExact, (za.mean - zs.mean).norm(), 1e-10));

    let (fl, _) = fixtures::five_face_loop(&five);
    let m5 = m5.with_normalized(true);
    let w = wilson_loop(&m5, &fl, WilsonMethod::AbelianExact, &p)?;
    let flipped = reorient_edge(&five, 2);
    let fl2 = LoopWord::new(&flipped, flip_letters(fl.letters(), 2)).map_err(|e| RunError(e.to_string()))?;
    let w2 = wilson_loop(&m5.with_graph(flipped)?, &fl2, WilsonMethod::AbelianExact, &p)?;
    rows.push(check("reorientation_invariance", Method::AbelianExact, (w.mean - w2.mean).norm(), 1e-12));

    let (sub, rw) = subdivide_edge(&five, 4).map_err(|e| RunError(e.to_string()))?;
    let fl3 = LoopWord::new(&sub, rw.rewrite(fl.letters())).map_err(|e| RunError(e.to_string()))?;
    let w3 = wilson_loop(&m5.with_graph(sub)?, &fl3, WilsonMethod::AbelianExact, &p)?;
    rows.push(check("subdivision_invariance", Method::AbelianExact, (w.mean - w3.mean).norm(), 1e-10));

    let (sg, _, sc) = fixtures::figure_eight_sphere([1.0; 4]);
    let sym = LoopFunctional::parse(&sg, &["e1 e2^-1", "e2 e3^-1", "e3 e4^-1", "e4 e1^-1"])
        .map_err(|e| RunError(e.to_string()))?;
    let dir: Vec<f64> = alternating_area_vector(&sg, &sc).iter().map(|&x| x as f64).collect();
    let d = directional_derivative(&MeasureSpec::simple(sg, 1)?, &sym, &dir, LhsMethod::AbelianAnalytic, &p)?;
    rows.push(check("symmetric_lhs_vanishes", Method::AbelianAnalytic, d.mean.norm(), 1e-12));
    Ok(rows)
}

fn flip_letters(w: &[SignedEdge], edge: usize) -> Vec<SignedEdge> {
    w.iter().map(|&l| if l.edge == edge { l.inv() } else { l }).collect()
}
