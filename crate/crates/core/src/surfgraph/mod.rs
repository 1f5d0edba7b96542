//! Admissible graphs on compact surfaces, described combinatorially.
//!
//! A graph is a set of vertices, oriented edges, faces given by their
//! boundary words, and boundary components given as words. Nothing about the
//! embedding is inferred: the measure only needs face words and areas.

mod loops;
mod surgery;

pub use loops::{
    alternating_area_vector, holonomy_word, split_loop, Crossing, HolonomyFactor, LoopWord,
};
pub use surgery::{add_generic_edge, reorient_edge, subdivide_edge, EdgeAddition, WordRewrite};

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("duplicate {kind} id `{id}`")]
    DuplicateId { kind: &'static str, id: String },
    #[error("unknown {kind} `{id}`")]
    UnknownId { kind: &'static str, id: String },
    #[error("malformed word token `{0}`")]
    BadToken(String),
    #[error("word is empty")]
    EmptyWord,
    #[error("word is not a closed walk: {0}")]
    NotClosed(String),
    #[error("invalid crossing: {0}")]
    Crossing(String),
    #[error("loop does not cross at the vertex: {0}")]
    Split(String),
    #[error("invalid edge addition: {0}")]
    EdgeAddition(String),
}

/// An edge traversed forwards or backwards.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedEdge {
    pub edge: usize,
    pub inverse: bool,
}

impl SignedEdge {
    pub const fn forward(edge: usize) -> Self {
        Self { edge, inverse: false }
    }

    pub const fn backward(edge: usize) -> Self {
        Self { edge, inverse: true }
    }

    pub const fn inv(self) -> Self {
        Self {
            edge: self.edge,
            inverse: !self.inverse,
        }
    }

    /// `+1` for a forward traversal, `-1` for a backward one.
    pub fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

pub type Word = Vec<SignedEdge>;

/// Inverse word: reversed with every letter inverted.
pub fn invert_word(w: &[SignedEdge]) -> Word {
    w.iter().rev().map(|l| l.inv()).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub id: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Face {
    pub id: String,
    pub word: Word,
    pub area: f64,
}

/// A graph together with its faces, their areas and the boundary of the
/// surface. Construction only resolves ids; the structural invariants are
/// checked by [`SurfaceGraph::validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceGraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    faces: Vec<Face>,
    boundary: Vec<Word>,
}

/// Builder that takes everything by string id.
#[derive(Debug, Default, Clone)]
pub struct GraphBuilder {
    vertices: Vec<String>,
    edges: Vec<(String, String, String)>,
    faces: Vec<(String, String, f64)>,
    boundary: Vec<String>,
}

impl GraphBuilder {
    pub fn vertex(mut self, id: &str) -> Self {
        self.vertices.push(id.to_string());
        self
    }

    pub fn vertices<'a>(mut self, ids: impl IntoIterator<Item = &'a str>) -> Self {
        self.vertices.extend(ids.into_iter().map(String::from));
        self
    }

    pub fn edge(mut self, id: &str, source: &str, target: &str) -> Self {
        self.edges
            .push((id.to_string(), source.to_string(), target.to_string()));
        self
    }

    /// `word` uses the token syntax of [`SurfaceGraph::parse_word`].
    pub fn face(mut self, id: &str, word: &str, area: f64) -> Self {
        self.faces.push((id.to_string(), word.to_string(), area));
        self
    }

    pub fn boundary(mut self, word: &str) -> Self {
        self.boundary.push(word.to_string());
        self
    }

    pub fn build(self) -> Result<SurfaceGraph, GraphError> {
        let mut g = SurfaceGraph {
            vertices: Vec::new(),
            edges: Vec::new(),
            faces: Vec::new(),
            boundary: Vec::new(),
        };
        for v in self.vertices {
            if g.vertices.contains(&v) {
                return Err(GraphError::DuplicateId { kind: "vertex", id: v });
            }
            g.vertices.push(v);
        }
        for (id, s, t) in self.edges {
            if g.edge_index(&id).is_some() {
                return Err(GraphError::DuplicateId { kind: "edge", id });
            }
            let source = g.vertex_index(&s).ok_or(GraphError::UnknownId {
                kind: "vertex",
                id: s,
            })?;
            let target = g.vertex_index(&t).ok_or(GraphError::UnknownId {
                kind: "vertex",
                id: t,
            })?;
            g.edges.push(Edge { id, source, target });
        }
        for (id, word, area) in self.faces {
            if g.face_index(&id).is_some() {
                return Err(GraphError::DuplicateId { kind: "face", id });
            }
            let word = g.parse_word(&word)?;
            g.faces.push(Face { id, word, area });
        }
        for word in self.boundary {
            let w = g.parse_word(&word)?;
            g.boundary.push(w);
        }
        Ok(g)
    }
}

/// One violated invariant, reported as data.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NonPositiveArea { face: String, area: f64 },
    EmptyFace { face: String },
    FaceNotClosed { face: String },
    BoundaryNotClosed { index: usize },
    EmptyBoundary { index: usize },
    EdgeIncidence { edge: String, faces: usize, boundary: usize },
    IsolatedVertex { vertex: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonPositiveArea { face, area } => {
                write!(f, "face `{face}` has non-positive area {area}")
            }
            Violation::EmptyFace { face } => write!(f, "face `{face}` has an empty boundary word"),
            Violation::FaceNotClosed { face } => {
                write!(f, "boundary word of face `{face}` is not a closed walk")
            }
            Violation::BoundaryNotClosed { index } => {
                write!(f, "boundary component {index} is not a closed walk")
            }
            Violation::EmptyBoundary { index } => write!(f, "boundary component {index} is empty"),
            Violation::EdgeIncidence { edge, faces, boundary } => write!(
                f,
                "edge `{edge}` occurs {faces} time(s) in faces and {boundary} time(s) in the boundary (expected 2 in total, at most 1 in the boundary)"
            ),
            Violation::IsolatedVertex { vertex } => write!(f, "vertex `{vertex}` has no edges"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeIncidence {
    pub edge: String,
    pub face_count: usize,
    pub boundary_count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub vertex_count: usize,
    pub edge_count: usize,
    pub face_count: usize,
    pub euler_characteristic: i64,
    pub total_area: f64,
    pub incidences: Vec<EdgeIncidence>,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl SurfaceGraph {
    pub fn builder() -> GraphBuilder {
        GraphBuilder::default()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn boundary(&self) -> &[Word] {
        &self.boundary
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == id)
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.id == id)
    }

    pub fn face_index(&self, id: &str) -> Option<usize> {
        self.faces.iter().position(|f| f.id == id)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    pub fn total_area(&self) -> f64 {
        self.faces.iter().map(|f| f.area).sum()
    }

    pub fn areas(&self) -> Vec<f64> {
        self.faces.iter().map(|f| f.area).collect()
    }

    /// Copy of the graph with new face areas (same order as `faces()`).
    pub fn with_areas(&self, areas: &[f64]) -> SurfaceGraph {
        assert_eq!(areas.len(), self.faces.len());
        let mut g = self.clone();
        for (f, &a) in g.faces.iter_mut().zip(areas) {
            f.area = a;
        }
        g
    }

    /// Vertex a signed edge leaves from.
    pub fn origin(&self, l: SignedEdge) -> usize {
        let e = &self.edges[l.edge];
        if l.inverse {
            e.target
        } else {
            e.source
        }
    }

    /// Vertex a signed edge arrives at.
    pub fn terminus(&self, l: SignedEdge) -> usize {
        self.origin(l.inv())
    }

    /// Parses whitespace-separated tokens `id` or `id^-1`.
    pub fn parse_word(&self, text: &str) -> Result<Word, GraphError> {
        text.split_whitespace()
            .map(|tok| {
                let (id, inverse) = match tok.strip_suffix("^-1") {
                    Some(id) => (id, true),
                    None => (tok, false),
                };
                if id.is_empty() || id.contains('^') {
                    return Err(GraphError::BadToken(tok.to_string()));
                }
                let edge = self.edge_index(id).ok_or(GraphError::UnknownId {
                    kind: "edge",
                    id: id.to_string(),
                })?;
                Ok(SignedEdge { edge, inverse })
            })
            .collect()
    }

    pub fn format_word(&self, w: &[SignedEdge]) -> String {
        w.iter()
            .map(|l| {
                let id = &self.edges[l.edge].id;
                if l.inverse {
                    format!("{id}^-1")
                } else {
                    id.clone()
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// True for a nonempty word whose consecutive letters chain up,
    /// cyclically.
    pub fn is_closed_walk(&self, w: &[SignedEdge]) -> bool {
        if w.is_empty() || w.iter().any(|l| l.edge >= self.edges.len()) {
            return false;
        }
        (0..w.len()).all(|i| self.terminus(w[i]) == self.origin(w[(i + 1) % w.len()]))
    }

    /// Edge indices that lie on the boundary of the surface.
    pub fn boundary_edges(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.boundary.iter().flatten().map(|l| l.edge).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Faces whose boundary word contains `edge`, with multiplicity.
    pub fn faces_containing(&self, edge: usize) -> Vec<usize> {
        self.faces
            .iter()
            .enumerate()
            .flat_map(|(i, f)| f.word.iter().filter(move |l| l.edge == edge).map(move |_| i))
            .collect()
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for f in &self.faces {
            if !(f.area > 0.0) || !f.area.is_finite() {
                violations.push(Violation::NonPositiveArea {
                    face: f.id.clone(),
                    area: f.area,
                });
            }
            if f.word.is_empty() {
                violations.push(Violation::EmptyFace { face: f.id.clone() });
            } else if !self.is_closed_walk(&f.word) {
                violations.push(Violation::FaceNotClosed { face: f.id.clone() });
            }
        }
        for (index, b) in self.boundary.iter().enumerate() {
            if b.is_empty() {
                violations.push(Violation::EmptyBoundary { index });
            } else if !self.is_closed_walk(b) {
                violations.push(Violation::BoundaryNotClosed { index });
            }
        }
        let mut face_counts = vec![0usize; self.edges.len()];
        let mut boundary_counts = vec![0usize; self.edges.len()];
        for l in self.faces.iter().flat_map(|f| &f.word) {
            face_counts[l.edge] += 1;
        }
        for l in self.boundary.iter().flatten() {
            boundary_counts[l.edge] += 1;
        }
        let mut incidences = Vec::with_capacity(self.edges.len());
        for (i, e) in self.edges.iter().enumerate() {
            let (fc, bc) = (face_counts[i], boundary_counts[i]);
            if fc + bc != 2 || bc > 1 {
                violations.push(Violation::EdgeIncidence {
                    edge: e.id.clone(),
                    faces: fc,
                    boundary: bc,
                });
            }
            incidences.push(EdgeIncidence {
                edge: e.id.clone(),
                face_count: fc,
                boundary_count: bc,
            });
        }
        for (v, id) in self.vertices.iter().enumerate() {
            if !self.edges.iter().any(|e| e.source == v || e.target == v) {
                violations.push(Violation::IsolatedVertex { vertex: id.clone() });
            }
        }
        ValidationReport {
            vertex_count: self.vertices.len(),
            edge_count: self.edges.len(),
            face_count: self.faces.len(),
            euler_characteristic: self.euler_characteristic(),
            total_area: self.total_area(),
            incidences,
            violations,
        }
    }
}
