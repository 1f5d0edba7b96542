use super::{Crossing, Edge, Face, GraphError, SignedEdge, SurfaceGraph, Word};

/// Letter substitution produced by [`subdivide_edge`]: every occurrence of
/// the old edge `e` becomes `e′ e″`, and `e⁻¹` becomes `e″⁻¹ e′⁻¹`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordRewrite {
    pub edge: usize,
    pub first: usize,
    pub second: usize,
}

impl WordRewrite {
    pub fn rewrite(&self, w: &[SignedEdge]) -> Word {
        let mut out = Vec::with_capacity(w.len() + 2);
        for &l in w {
            if l.edge != self.edge {
                out.push(l);
            } else if l.inverse {
                out.push(SignedEdge::backward(self.second));
                out.push(SignedEdge::backward(self.first));
            } else {
                out.push(SignedEdge::forward(self.first));
                out.push(SignedEdge::forward(self.second));
            }
        }
        out
    }

    /// Outgoing darts keep their vertex: `e` leaves through `e′`, `e⁻¹`
    /// through `e″⁻¹`.
    pub fn rewrite_dart(&self, d: SignedEdge) -> SignedEdge {
        if d.edge != self.edge {
            d
        } else if d.inverse {
            SignedEdge::backward(self.second)
        } else {
            SignedEdge::forward(self.first)
        }
    }

    pub fn rewrite_crossing(&self, c: &Crossing) -> Crossing {
        Crossing {
            vertex: c.vertex,
            darts: c.darts.map(|d| self.rewrite_dart(d)),
            faces: c.faces,
        }
    }
}

/// Inserts a fresh vertex in the middle of `edge`. The edge keeps its index
/// as the first half (`<id>.1`), the second half (`<id>.2`) is appended, and
/// the new vertex is `<id>.mid`. Areas are untouched.
pub fn subdivide_edge(
    g: &SurfaceGraph,
    edge: usize,
) -> Result<(SurfaceGraph, WordRewrite), GraphError> {
    let old = g.edges.get(edge).ok_or_else(|| GraphError::UnknownId {
        kind: "edge",
        id: format!("#{edge}"),
    })?;
    let (first_id, second_id, mid_id) = (
        format!("{}.1", old.id),
        format!("{}.2", old.id),
        format!("{}.mid", old.id),
    );
    for id in [&first_id, &second_id] {
        if g.edge_index(id).is_some() {
            return Err(GraphError::DuplicateId { kind: "edge", id: id.clone() });
        }
    }
    if g.vertex_index(&mid_id).is_some() {
        return Err(GraphError::DuplicateId { kind: "vertex", id: mid_id });
    }
    let mut out = g.clone();
    let mid = out.vertices.len();
    out.vertices.push(mid_id);
    let (source, target) = (old.source, old.target);
    out.edges[edge] = Edge { id: first_id, source, target: mid };
    let second = out.edges.len();
    out.edges.push(Edge { id: second_id, source: mid, target });
    let rw = WordRewrite { edge, first: edge, second };
    for f in &mut out.faces {
        f.word = rw.rewrite(&f.word);
    }
    for b in &mut out.boundary {
        *b = rw.rewrite(b);
    }
    Ok((out, rw))
}

/// Swaps the orientation of one edge, inverting it in every word.
pub fn reorient_edge(g: &SurfaceGraph, edge: usize) -> SurfaceGraph {
    let mut out = g.clone();
    let e = &mut out.edges[edge];
    std::mem::swap(&mut e.source, &mut e.target);
    let flip = |w: &mut Word| {
        for l in w.iter_mut().filter(|l| l.edge == edge) {
            *l = l.inv();
        }
    };
    for f in &mut out.faces {
        flip(&mut f.word);
    }
    for b in &mut out.boundary {
        flip(b);
    }
    out
}

/// How to cut one face in two with a new edge between two of its corners.
///
/// With face word `w_0 … w_{n−1}` and cut positions `i < j`, the new edge runs
/// from the start of `w_i` to the start of `w_j`; the first piece is
/// `w_i … w_{j−1} e⁻¹` and keeps the face's slot, the second is
/// `w_j … w_{n−1} w_0 … w_{i−1} e` and is appended.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeAddition {
    pub face: usize,
    pub from: usize,
    pub to: usize,
    pub edge_id: String,
    pub face_ids: (String, String),
    pub areas: (f64, f64),
}

/// Adds one edge inside a face, keeping the vertex set. Returns the new graph
/// and the crossing with its faces relabeled from the new corners.
pub fn add_generic_edge(
    g: &SurfaceGraph,
    c: &Crossing,
    spec: &EdgeAddition,
) -> Result<(SurfaceGraph, Crossing), GraphError> {
    let face = g.faces.get(spec.face).ok_or_else(|| {
        GraphError::EdgeAddition(format!("unknown face #{}", spec.face))
    })?;
    let (a1, a2) = spec.areas;
    if !(a1 > 0.0 && a2 > 0.0) {
        return Err(GraphError::EdgeAddition(format!(
            "sub-areas must be positive, got {a1} and {a2}"
        )));
    }
    if (a1 + a2 - face.area).abs() > 1e-12 * face.area.max(1.0) {
        return Err(GraphError::EdgeAddition(format!(
            "sub-areas {a1} + {a2} do not sum to the face area {}",
            face.area
        )));
    }
    let n = face.word.len();
    if !(spec.from < spec.to && spec.to < n) {
        return Err(GraphError::EdgeAddition(format!(
            "corner positions {}..{} are not on face `{}` of length {n}",
            spec.from, spec.to, face.id
        )));
    }
    if g.edge_index(&spec.edge_id).is_some() {
        return Err(GraphError::DuplicateId { kind: "edge", id: spec.edge_id.clone() });
    }
    for id in [&spec.face_ids.0, &spec.face_ids.1] {
        if g.face_index(id).is_some() && *id != face.id {
            return Err(GraphError::DuplicateId { kind: "face", id: id.clone() });
        }
    }
    if spec.face_ids.0 == spec.face_ids.1 {
        return Err(GraphError::DuplicateId { kind: "face", id: spec.face_ids.0.clone() });
    }
    let w = &face.word;
    let source = g.origin(w[spec.from]);
    let target = g.origin(w[spec.to]);
    let mut out = g.clone();
    let e = out.edges.len();
    out.edges.push(Edge { id: spec.edge_id.clone(), source, target });
    let mut first: Word = w[spec.from..spec.to].to_vec();
    first.push(SignedEdge::backward(e));
    let mut second: Word = w[spec.to..].iter().chain(&w[..spec.from]).copied().collect();
    second.push(SignedEdge::forward(e));
    out.faces[spec.face] = Face {
        id: spec.face_ids.0.clone(),
        word: first,
        area: a1,
    };
    out.faces.push(Face {
        id: spec.face_ids.1.clone(),
        word: second,
        area: a2,
    });
    let crossing = Crossing::with_inferred_faces(&out, c.vertex, c.darts)?;
    Ok((out, crossing))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::surfgraph::{split_loop, LoopWord};

    #[test]
    fn subdividing_single_loop_edge() {
        let g = fixtures::simple_loop_sphere(1.0, 1.0);
        let (h, rw) = subdivide_edge(&g, 0).unwrap();
        let r = h.validate();
        assert!(r.is_valid(), "{:?}", r.violations);
        assert_eq!((r.vertex_count, r.edge_count, r.face_count), (2, 2, 2));
        assert_eq!(r.euler_characteristic, 2);
        assert_eq!(
            rw.rewrite(&[SignedEdge::forward(0)]),
            vec![SignedEdge::forward(0), SignedEdge::forward(1)]
        );
        assert_eq!(
            rw.rewrite(&[SignedEdge::backward(0)]),
            vec![SignedEdge::backward(1), SignedEdge::backward(0)]
        );
    }

    #[test]
    fn subdividing_five_face_fixture() {
        let g = fixtures::five_face_sphere([1.0, 2.0, 3.0, 4.0, 5.0]);
        let e5 = g.edge_index("e5").unwrap();
        let (h, _) = subdivide_edge(&g, e5).unwrap();
        let r = h.validate();
        assert!(r.is_valid());
        assert_eq!((r.vertex_count, r.edge_count, r.face_count), (4, 7, 5));
        assert_eq!(r.euler_characteristic, 2);
        assert_eq!(h.total_area(), g.total_area());
        assert_eq!(h.format_word(&h.faces()[4].word), "e5.1 e5.2 e6^-1");
    }

    #[test]
    fn subdivided_loop_still_splits() {
        let (g, l, c) = fixtures::figure_eight_sphere([1.0; 4]);
        let (h, rw) = subdivide_edge(&g, g.edge_index("e4").unwrap()).unwrap();
        let l2 = LoopWord::new(&h, rw.rewrite(l.letters())).unwrap();
        let c2 = rw.rewrite_crossing(&c);
        let c2 = Crossing::new(&h, c2.vertex, c2.darts, c2.faces).unwrap();
        let (a, b) = split_loop(&h, &l2, &c2).unwrap();
        assert_eq!(h.format_word(a.letters()), "e1 e4.2^-1 e4.1^-1");
        assert_eq!(h.format_word(b.letters()), "e2 e3^-1");
    }

    #[test]
    fn generic_counterpart_of_nongeneric_fixture() {
        let (g, _, c) = fixtures::nongeneric_figure_eight([2.0, 1.0, 1.0]);
        let (h, c2) = fixtures::generic_counterpart(&g, &c, 1.2, 0.8).unwrap();
        let r = h.validate();
        assert!(r.is_valid(), "{:?}", r.violations);
        assert_eq!(r.euler_characteristic, g.euler_characteristic());
        assert!((h.total_area() - g.total_area()).abs() < 1e-15);
        assert!(c2.is_generic());
        assert_eq!(h.faces()[c2.faces[0]].area + h.faces()[c2.faces[2]].area, 2.0);
    }

    #[test]
    fn edge_addition_rejects_bad_specs() {
        let (g, _, c) = fixtures::nongeneric_figure_eight([2.0, 1.0, 1.0]);
        let outer = g.face_index("O").unwrap();
        let spec = EdgeAddition {
            face: outer,
            from: 1,
            to: 3,
            edge_id: "e5".into(),
            face_ids: ("O1".into(), "O2".into()),
            areas: (2.0, 0.0),
        };
        assert!(matches!(add_generic_edge(&g, &c, &spec), Err(GraphError::EdgeAddition(_))));
        let spec = EdgeAddition { areas: (1.0, 0.5), ..spec };
        assert!(add_generic_edge(&g, &c, &spec).is_err());
        let spec = EdgeAddition { areas: (1.0, 1.0), to: 4, ..spec };
        assert!(add_generic_edge(&g, &c, &spec).is_err());
    }

    #[test]
    fn reorienting_twice_is_identity() {
        let g = fixtures::five_face_sphere([1.0; 5]);
        let h = reorient_edge(&reorient_edge(&g, 2), 2);
        assert_eq!(g, h);
        assert!(reorient_edge(&g, 2).validate().is_valid());
    }
}
