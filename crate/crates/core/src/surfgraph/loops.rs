use std::fmt;

use super::{GraphError, SignedEdge, SurfaceGraph, Word};

/// A closed edge path in a graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LoopWord(Word);

impl LoopWord {
    pub fn new(g: &SurfaceGraph, word: Word) -> Result<Self, GraphError> {
        if word.is_empty() {
            return Err(GraphError::EmptyWord);
        }
        if let Some(l) = word.iter().find(|l| l.edge >= g.edges().len()) {
            return Err(GraphError::UnknownId {
                kind: "edge",
                id: format!("#{}", l.edge),
            });
        }
        if !g.is_closed_walk(&word) {
            return Err(GraphError::NotClosed(g.format_word(&word)));
        }
        Ok(Self(word))
    }

    pub fn parse(g: &SurfaceGraph, text: &str) -> Result<Self, GraphError> {
        Self::new(g, g.parse_word(text)?)
    }

    pub fn letters(&self) -> &[SignedEdge] {
        &self.0
    }

    pub fn inverse(&self) -> LoopWord {
        LoopWord(super::invert_word(&self.0))
    }

    /// Concatenation of two loops based at the same vertex.
    pub fn concat(&self, other: &LoopWord) -> Vec<SignedEdge> {
        let mut w = self.0.clone();
        w.extend_from_slice(&other.0);
        w
    }

    pub(crate) fn from_word_unchecked(word: Word) -> Self {
        Self(word)
    }
}

/// One factor of a holonomy product: an edge variable or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HolonomyFactor {
    pub edge: usize,
    pub inverse: bool,
}

impl fmt::Display for HolonomyFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverse {
            write!(f, "x{}^-1", self.edge)
        } else {
            write!(f, "x{}", self.edge)
        }
    }
}

/// Matrix-product order of a word's holonomy: parallel transport reverses
/// the order, so `e_1 ⋯ e_k` becomes `x_k^{±1} ⋯ x_1^{±1}` read left to
/// right.
pub fn holonomy_word(w: &[SignedEdge]) -> Vec<HolonomyFactor> {
    w.iter()
        .rev()
        .map(|l| HolonomyFactor {
            edge: l.edge,
            inverse: l.inverse,
        })
        .collect()
}

/// A simple crossing at an interior vertex: four outgoing darts in cyclic
/// order and the four faces around them, with `e₁` between `F₄` and `F₁`
/// (face `F_i` sits between `e_i` and `e_{i+1}`).
#[derive(Debug, Clone, PartialEq)]
pub struct Crossing {
    pub vertex: usize,
    pub darts: [SignedEdge; 4],
    pub faces: [usize; 4],
}

/// Whether face word `w` turns from `into` (arriving) to `out` (leaving)
/// somewhere, cyclically.
fn has_corner(w: &[SignedEdge], arrive: SignedEdge, leave: SignedEdge) -> bool {
    let n = w.len();
    (0..n).any(|i| w[i] == arrive && w[(i + 1) % n] == leave)
}

impl Crossing {
    pub fn new(
        g: &SurfaceGraph,
        vertex: usize,
        darts: [SignedEdge; 4],
        faces: [usize; 4],
    ) -> Result<Self, GraphError> {
        if vertex >= g.vertices().len() {
            return Err(GraphError::Crossing(format!("unknown vertex #{vertex}")));
        }
        for d in &darts {
            if d.edge >= g.edges().len() {
                return Err(GraphError::Crossing(format!("unknown edge #{}", d.edge)));
            }
            if g.origin(*d) != vertex {
                return Err(GraphError::Crossing(format!(
                    "dart {} does not leave vertex `{}`",
                    g.format_word(&[*d]),
                    g.vertices()[vertex]
                )));
            }
        }
        for i in 0..4 {
            for j in (i + 1)..4 {
                if darts[i] == darts[j] {
                    return Err(GraphError::Crossing("darts are not distinct".into()));
                }
            }
        }
        let boundary = g.boundary_edges();
        if let Some(d) = darts.iter().find(|d| boundary.contains(&d.edge)) {
            return Err(GraphError::Crossing(format!(
                "dart {} lies on the boundary; the crossing must be interior",
                g.format_word(&[*d])
            )));
        }
        for (i, &f) in faces.iter().enumerate() {
            let face = g
                .faces()
                .get(f)
                .ok_or_else(|| GraphError::Crossing(format!("unknown face #{f}")))?;
            let (a, b) = (darts[i], darts[(i + 1) % 4]);
            if !has_corner(&face.word, b.inv(), a) && !has_corner(&face.word, a.inv(), b) {
                return Err(GraphError::Crossing(format!(
                    "face `{}` does not contain the corner between {} and {}",
                    face.id,
                    g.format_word(&[a]),
                    g.format_word(&[b])
                )));
            }
        }
        Ok(Self { vertex, darts, faces })
    }

    /// Looks up, for each corner, the face whose word turns through it.
    pub fn with_inferred_faces(
        g: &SurfaceGraph,
        vertex: usize,
        darts: [SignedEdge; 4],
    ) -> Result<Self, GraphError> {
        let mut faces = [usize::MAX; 4];
        for (i, slot) in faces.iter_mut().enumerate() {
            let (a, b) = (darts[i], darts[(i + 1) % 4]);
            *slot = g
                .faces()
                .iter()
                .position(|f| has_corner(&f.word, b.inv(), a) || has_corner(&f.word, a.inv(), b))
                .ok_or_else(|| GraphError::Crossing(format!("no face has corner {i}")))?;
        }
        Self::new(g, vertex, darts, faces)
    }

    /// Parses darts from a word string and faces from ids.
    pub fn parse(
        g: &SurfaceGraph,
        vertex: &str,
        darts: &str,
        faces: &[&str; 4],
    ) -> Result<Self, GraphError> {
        let v = g.vertex_index(vertex).ok_or(GraphError::UnknownId {
            kind: "vertex",
            id: vertex.to_string(),
        })?;
        let d = g.parse_word(darts)?;
        let d: [SignedEdge; 4] = d
            .try_into()
            .map_err(|_| GraphError::Crossing("exactly four darts are required".into()))?;
        let mut f = [0usize; 4];
        for (slot, id) in f.iter_mut().zip(faces) {
            *slot = g.face_index(id).ok_or(GraphError::UnknownId {
                kind: "face",
                id: id.to_string(),
            })?;
        }
        Self::new(g, v, d, f)
    }

    /// True when the four darts lie on distinct edges and the four faces are
    /// distinct.
    pub fn is_generic(&self) -> bool {
        let mut edges: Vec<usize> = self.darts.iter().map(|d| d.edge).collect();
        edges.sort_unstable();
        edges.dedup();
        let mut faces = self.faces.to_vec();
        faces.sort_unstable();
        faces.dedup();
        edges.len() == 4 && faces.len() == 4
    }
}

/// Cuts a loop at a simple crossing into `L₁` (from the start to the first
/// return) and `L₂` (the rest). The loop is first rotated to start along
/// `e₁`; it must then return along `e₄⁻¹`, leave along `e₂` and finally
/// return along `e₃⁻¹`, with no other visits to the vertex.
pub fn split_loop(
    g: &SurfaceGraph,
    l: &LoopWord,
    c: &Crossing,
) -> Result<(LoopWord, LoopWord), GraphError> {
    let w = l.letters();
    let [d1, d2, d3, d4] = c.darts;
    let starts: Vec<usize> = (0..w.len()).filter(|&i| w[i] == d1).collect();
    let start = match starts.as_slice() {
        [s] => *s,
        [] => return Err(GraphError::Split("loop never leaves along e1".into())),
        _ => return Err(GraphError::Split("loop leaves along e1 more than once".into())),
    };
    let rotated: Word = w[start..].iter().chain(&w[..start]).copied().collect();
    let visits: Vec<usize> = (0..rotated.len())
        .filter(|&i| g.origin(rotated[i]) == c.vertex)
        .collect();
    if visits.len() != 2 {
        return Err(GraphError::Split(format!(
            "loop visits the vertex {} time(s), expected 2",
            visits.len()
        )));
    }
    let k = visits[1];
    let last = rotated[rotated.len() - 1];
    if rotated[k - 1] != d4.inv() || rotated[k] != d2 || last != d3.inv() {
        return Err(GraphError::Split(
            "traversal does not follow e1 → e4⁻¹ → e2 → e3⁻¹".into(),
        ));
    }
    Ok((
        LoopWord::from_word_unchecked(rotated[..k].to_vec()),
        LoopWord::from_word_unchecked(rotated[k..].to_vec()),
    ))
}

/// `+1, −1, +1, −1` on `F₁..F₄`, accumulated over repeated faces. Dense over
/// all faces of the graph.
pub fn alternating_area_vector(g: &SurfaceGraph, c: &Crossing) -> Vec<i32> {
    let mut v = vec![0i32; g.faces().len()];
    for (i, &f) in c.faces.iter().enumerate() {
        v[f] += if i % 2 == 0 { 1 } else { -1 };
    }
    v
}
