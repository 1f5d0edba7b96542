//! The Yang–Mills measure on a graph: the product of one heat-kernel factor
//! per face, optionally with boundary holonomies constrained to conjugacy
//! classes.

mod abelian;

pub use abelian::{abelian_expectation, loop_exponents, AbelianValue};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::heatkernel::{hk_density, HKParams, HeatKernelError};
use crate::montecarlo::{Estimate, Method};
use crate::surfgraph::{GraphError, LoopWord, SignedEdge, SurfaceGraph, Word};
use crate::unitary::{word_eval, GroupSpec, Unitary, UnitaryError};

/// Tolerance on a substituted boundary holonomy.
const CONSTRAINT_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeasureError {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Unitary(#[from] UnitaryError),
    #[error(transparent)]
    HeatKernel(#[from] HeatKernelError),
    #[error("constraint: {0}")]
    Constraint(String),
    #[error("edge `{0}` is unassigned")]
    Missing(String),
    #[error("method not applicable: {0}")]
    Inapplicable(String),
    #[error("lattice enumeration too large ({0} points)")]
    LatticeTooLarge(f64),
}

/// Boundary holonomy constrained to the conjugacy class with eigenvalue
/// angles `angles`. The last letter of the given word is the designated edge
/// that gets solved for.
#[derive(Debug, Clone, PartialEq)]
pub struct ConjugacyConstraint {
    word: Word,
    component: usize,
    angles: Vec<f64>,
}

impl ConjugacyConstraint {
    /// `word` must be a cyclic rotation of one of the graph's boundary
    /// components.
    pub fn new(g: &SurfaceGraph, word: &LoopWord, angles: Vec<f64>) -> Result<Self, MeasureError> {
        let w = word.letters().to_vec();
        let component = g
            .boundary()
            .iter()
            .position(|b| is_rotation(b, &w))
            .ok_or_else(|| {
                MeasureError::Constraint(format!(
                    "`{}` is not a boundary component",
                    g.format_word(&w)
                ))
            })?;
        let last = w[w.len() - 1];
        if w.iter().filter(|l| l.edge == last.edge).count() != 1 {
            return Err(MeasureError::Constraint(format!(
                "designated edge `{}` occurs more than once in its boundary word",
                g.edges()[last.edge].id
            )));
        }
        if angles.iter().any(|a| !a.is_finite()) {
            return Err(MeasureError::Constraint("angles must be finite".into()));
        }
        Ok(Self {
            word: w,
            component,
            angles,
        })
    }

    pub fn parse(g: &SurfaceGraph, word: &str, angles: Vec<f64>) -> Result<Self, MeasureError> {
        Self::new(g, &LoopWord::parse(g, word)?, angles)
    }

    pub fn word(&self) -> &[SignedEdge] {
        &self.word
    }

    pub fn component(&self) -> usize {
        self.component
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    /// The edge whose variable is solved for.
    pub fn designated(&self) -> SignedEdge {
        self.word[self.word.len() - 1]
    }

    /// `V·diag(e^{iφ})·V⁻¹`.
    pub fn representative(&self, v: &Unitary) -> Unitary {
        let d = Unitary::from_angles(&self.angles);
        v.mul(&d).mul(&v.inverse())
    }
}

fn is_rotation(a: &[SignedEdge], b: &[SignedEdge]) -> bool {
    a.len() == b.len() && (0..a.len()).any(|r| a[r..].iter().chain(&a[..r]).eq(b.iter()))
}

/// Everything that defines a measure.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureSpec {
    graph: SurfaceGraph,
    group: GroupSpec,
    hk: HKParams,
    constraints: Vec<ConjugacyConstraint>,
    normalized: bool,
}

impl MeasureSpec {
    pub fn new(
        graph: SurfaceGraph,
        group: GroupSpec,
        hk: HKParams,
        constraints: Vec<ConjugacyConstraint>,
        normalized: bool,
    ) -> Result<Self, MeasureError> {
        let report = graph.validate();
        if let Some(v) = report.violations.first() {
            return Err(MeasureError::InvalidGraph(v.to_string()));
        }
        hk.validate()?;
        for (i, c) in constraints.iter().enumerate() {
            if c.angles.len() != group.n() {
                return Err(MeasureError::Constraint(format!(
                    "constraint {i} has {} angles, expected {}",
                    c.angles.len(),
                    group.n()
                )));
            }
            if c.component >= graph.boundary().len() || !is_rotation(&graph.boundary()[c.component], &c.word) {
                return Err(MeasureError::Constraint(format!("constraint {i} does not match the graph")));
            }
            if constraints[..i].iter().any(|d| d.component == c.component) {
                return Err(MeasureError::Constraint(format!(
                    "two constraints on boundary component {}",
                    c.component
                )));
            }
        }
        Ok(Self {
            graph,
            group,
            hk,
            constraints,
            normalized,
        })
    }

    /// Normalized, unconstrained measure with default heat-kernel settings.
    pub fn simple(graph: SurfaceGraph, n: usize) -> Result<Self, MeasureError> {
        Self::new(graph, GroupSpec::new(n), HKParams::default(), Vec::new(), true)
    }

    pub fn graph(&self) -> &SurfaceGraph {
        &self.graph
    }

    pub fn group(&self) -> GroupSpec {
        self.group
    }

    pub fn hk(&self) -> &HKParams {
        &self.hk
    }

    pub fn constraints(&self) -> &[ConjugacyConstraint] {
        &self.constraints
    }

    pub fn normalized(&self) -> bool {
        self.normalized
    }

    pub fn with_normalized(&self, normalized: bool) -> Self {
        Self {
            normalized,
            ..self.clone()
        }
    }

    pub fn with_areas(&self, areas: &[f64]) -> Result<Self, MeasureError> {
        Self::new(
            self.graph.with_areas(areas),
            self.group,
            self.hk,
            self.constraints.clone(),
            self.normalized,
        )
    }

    pub fn with_graph(&self, graph: SurfaceGraph) -> Result<Self, MeasureError> {
        Self::new(graph, self.group, self.hk, self.constraints.clone(), self.normalized)
    }

    /// Edges solved for by constraints.
    pub fn designated_edges(&self) -> Vec<usize> {
        self.constraints.iter().map(|c| c.designated().edge).collect()
    }

    /// Edges sampled freely.
    pub fn free_edges(&self) -> Vec<usize> {
        let d = self.designated_edges();
        (0..self.graph.edges().len()).filter(|e| !d.contains(e)).collect()
    }
}

/// Edge variables indexed like the graph's edges, plus one class
/// representative per constraint.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeConfig {
    edges: Vec<Option<Unitary>>,
    reps: Vec<Unitary>,
}

impl EdgeConfig {
    pub fn new(edges: Vec<Option<Unitary>>, reps: Vec<Unitary>) -> Self {
        Self { edges, reps }
    }

    pub fn complete(edges: Vec<Unitary>) -> Self {
        Self {
            edges: edges.into_iter().map(Some).collect(),
            reps: Vec::new(),
        }
    }

    /// Free edges set to the identity, designated edges solved for with
    /// class representatives `diag(e^{iφ})`.
    pub fn identity(m: &MeasureSpec) -> Result<Self, MeasureError> {
        let id = m.group.identity();
        let partial = EdgeConfig {
            edges: partial_edges(m, |_| id.clone()),
            reps: m.constraints.iter().map(|c| c.representative(&id)).collect(),
        };
        apply_constraints(m, &partial)
    }

    /// Haar-random free edges and Haar-conjugated class representatives.
    pub fn haar<R: Rng + ?Sized>(m: &MeasureSpec, rng: &mut R) -> Result<Self, MeasureError> {
        let g = m.group;
        let edges = partial_edges(m, |_| g.haar(rng));
        let reps = m
            .constraints
            .iter()
            .map(|c| c.representative(&g.haar(rng)))
            .collect();
        apply_constraints(m, &EdgeConfig { edges, reps })
    }

    pub fn edges(&self) -> &[Option<Unitary>] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> Option<&Unitary> {
        self.edges.get(e).and_then(|x| x.as_ref())
    }

    pub fn set_edge(&mut self, e: usize, x: Option<Unitary>) {
        self.edges[e] = x;
    }

    pub fn reps(&self) -> &[Unitary] {
        &self.reps
    }

    /// All edges, panicking on a missing one.
    pub fn assigned(&self) -> Vec<Unitary> {
        self.edges
            .iter()
            .map(|x| x.clone().expect("complete configuration"))
            .collect()
    }

    pub fn holonomy(&self, spec: GroupSpec, word: &[SignedEdge]) -> Result<Unitary, UnitaryError> {
        word_eval(spec, word, &self.edges)
    }
}

fn partial_edges(m: &MeasureSpec, mut f: impl FnMut(usize) -> Unitary) -> Vec<Option<Unitary>> {
    let designated = m.designated_edges();
    (0..m.graph.edges().len())
        .map(|e| (!designated.contains(&e)).then(|| f(e)))
        .collect()
}

/// Value of a designated edge that makes the boundary holonomy equal `c`.
/// With boundary letters `g_1 … g_k` and `g_k` designated,
/// `g_k = c·(g_{k−1}⋯g_1)⁻¹`.
pub(crate) fn solve_designated(
    spec: GroupSpec,
    c: &ConjugacyConstraint,
    rep: &Unitary,
    edges: &[Option<Unitary>],
) -> Result<Unitary, UnitaryError> {
    let w = c.word();
    let rest = word_eval(spec, &w[..w.len() - 1], edges)?;
    let g = rep.mul(&rest.inverse());
    Ok(if c.designated().inverse { g.inverse() } else { g })
}

/// Fills in the designated edge of every constraint from the class
/// representatives in `partial`.
pub fn apply_constraints(m: &MeasureSpec, partial: &EdgeConfig) -> Result<EdgeConfig, MeasureError> {
    if partial.edges.len() != m.graph.edges().len() {
        return Err(MeasureError::Constraint(format!(
            "configuration has {} edges, graph has {}",
            partial.edges.len(),
            m.graph.edges().len()
        )));
    }
    if partial.reps.len() != m.constraints.len() {
        return Err(MeasureError::Constraint(format!(
            "{} class representatives for {} constraints",
            partial.reps.len(),
            m.constraints.len()
        )));
    }
    let mut edges = partial.edges.clone();
    for c in &m.constraints {
        edges[c.designated().edge] = None;
    }
    for (c, rep) in m.constraints.iter().zip(&partial.reps) {
        let x = solve_designated(m.group, c, rep, &edges).map_err(|e| match e {
            UnitaryError::Unassigned(i) => MeasureError::Missing(m.graph.edges()[i].id.clone()),
            other => other.into(),
        })?;
        edges[c.designated().edge] = Some(x);
    }
    Ok(EdgeConfig {
        edges,
        reps: partial.reps.clone(),
    })
}

/// `Π_F ρ_{|F|}(h_F)`.
pub fn density_unnormalized(m: &MeasureSpec, cfg: &EdgeConfig) -> Result<f64, MeasureError> {
    let spec = m.group;
    let missing = |e: UnitaryError| match e {
        UnitaryError::Unassigned(i) => MeasureError::Missing(m.graph.edges()[i].id.clone()),
        other => other.into(),
    };
    for (c, rep) in m.constraints.iter().zip(&cfg.reps) {
        let h = word_eval(spec, c.word(), &cfg.edges).map_err(missing)?;
        if h.distance(rep) > CONSTRAINT_TOL {
            return Err(MeasureError::Constraint(format!(
                "boundary holonomy of component {} misses its class representative by {:.2e}",
                c.component,
                h.distance(rep)
            )));
        }
    }
    let mut p = 1.0;
    for f in m.graph.faces() {
        let h = word_eval(spec, &f.word, &cfg.edges).map_err(missing)?;
        p *= hk_density(f.area, &h, &m.hk)?;
    }
    Ok(p)
}

/// How to compute a partition function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ZMethod {
    /// Average of the unnormalized density over Haar-random configurations.
    Mc { samples: usize, seed: u64 },
    /// `ρ_A(id)` with `A` the total area; closed spheres only.
    SphereExact,
    /// Exact lattice sum; U(1) only.
    AbelianExact,
}

/// `Z = ∫ Π_F ρ_{|F|}(h_F) dx`.
pub fn partition_function(m: &MeasureSpec, method: ZMethod) -> Result<Estimate, MeasureError> {
    match method {
        ZMethod::SphereExact => {
            let g = &m.graph;
            if g.euler_characteristic() != 2 || !g.boundary().is_empty() {
                return Err(MeasureError::Inapplicable(
                    "sphere_exact requires a closed graph with Euler characteristic 2".into(),
                ));
            }
            let z = hk_density(g.total_area(), &m.group.identity(), &m.hk)?;
            Ok(Estimate::exact(Complex64::new(z, 0.0), Method::SphereExact))
        }
        ZMethod::AbelianExact => {
            let zero = vec![0; m.graph.edges().len()];
            let v = abelian::lattice_sum(m, &zero, None)?;
            Ok(Estimate::exact(v.value, Method::AbelianExact))
        }
        ZMethod::Mc { samples, seed } => {
            if samples < 2 {
                return Err(MeasureError::Inapplicable("mc needs at least 2 samples".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let batch = (samples as f64).sqrt().ceil() as usize;
            let mut summary = crate::montecarlo::ChainSummary::new(0, 1, batch);
            let mut acc = vec![Complex64::new(0.0, 0.0)];
            let mut in_batch = 0;
            for _ in 0..samples {
                let cfg = EdgeConfig::haar(m, &mut rng)?;
                let d = match density_unnormalized(m, &cfg) {
                    Ok(d) => d,
                    Err(MeasureError::HeatKernel(HeatKernelError::Underflow { .. })) => 0.0,
                    Err(e) => return Err(e),
                };
                summary.record(&[Complex64::new(d, 0.0)], &mut acc, &mut in_batch);
            }
            let s = crate::montecarlo::Summary::new(1, vec![summary]);
            Ok(s.estimate(0, Method::HaarMc))
        }
    }
}

#[cfg(test)]
mod tests;
