//! Graphs used throughout the tests, the CLI examples and the web demo.

use crate::surfgraph::{
    add_generic_edge, Crossing, EdgeAddition, GraphError, LoopWord, SurfaceGraph,
};

/// One vertex, one loop edge `e`, faces `in = e` (area `s`) and
/// `out = e⁻¹` (area `t`).
pub fn simple_loop_sphere(s: f64, t: f64) -> SurfaceGraph {
    SurfaceGraph::builder()
        .vertex("v")
        .edge("e", "v", "v")
        .face("in", "e", s)
        .face("out", "e^-1", t)
        .build()
        .expect("fixture")
}

/// Three vertices, six edges and five faces on S², with face holonomies
/// `x₂⁻¹x₁, x₃⁻¹x₆x₂, x₄⁻¹x₃, x₁⁻¹x₅⁻¹x₄, x₆⁻¹x₅`.
pub fn five_face_sphere(areas: [f64; 5]) -> SurfaceGraph {
    SurfaceGraph::builder()
        .vertices(["v", "w", "u"])
        .edge("e1", "v", "w")
        .edge("e2", "v", "w")
        .edge("e3", "v", "u")
        .edge("e4", "v", "u")
        .edge("e5", "w", "u")
        .edge("e6", "w", "u")
        .face("F1", "e1 e2^-1", areas[0])
        .face("F2", "e2 e6 e3^-1", areas[1])
        .face("F3", "e3 e4^-1", areas[2])
        .face("F4", "e4 e5^-1 e1^-1", areas[3])
        .face("F5", "e5 e6^-1", areas[4])
        .build()
        .expect("fixture")
}

/// The loop `e1 e5 e4⁻¹ e2 e6 e3⁻¹` on [`five_face_sphere`] and its crossing
/// at `v`.
pub fn five_face_loop(g: &SurfaceGraph) -> (LoopWord, Crossing) {
    let l = LoopWord::parse(g, "e1 e5 e4^-1 e2 e6 e3^-1").expect("fixture");
    let c = Crossing::parse(g, "v", "e1 e2 e3 e4", &["F1", "F2", "F3", "F4"]).expect("fixture");
    (l, c)
}

/// Four edges `e1..e4` from `v` to `w` cut S² into four lunes
/// `F_i = e_i e_{i+1}⁻¹`. The loop `e1 e4⁻¹ e2 e3⁻¹` crosses itself at `v`.
pub fn figure_eight_sphere(areas: [f64; 4]) -> (SurfaceGraph, LoopWord, Crossing) {
    let g = SurfaceGraph::builder()
        .vertices(["v", "w"])
        .edge("e1", "v", "w")
        .edge("e2", "v", "w")
        .edge("e3", "v", "w")
        .edge("e4", "v", "w")
        .face("F1", "e1 e2^-1", areas[0])
        .face("F2", "e2 e3^-1", areas[1])
        .face("F3", "e3 e4^-1", areas[2])
        .face("F4", "e4 e1^-1", areas[3])
        .build()
        .expect("fixture");
    let l = LoopWord::parse(&g, "e1 e4^-1 e2 e3^-1").expect("fixture");
    let c = Crossing::parse(&g, "v", "e1 e2 e3 e4", &["F1", "F2", "F3", "F4"]).expect("fixture");
    (g, l, c)
}

/// Figure-eight whose two lobes sit inside one outer face, so `F₁ = F₃`.
/// Areas are `[outer, lobe A, lobe B]`; lobe A is `F₄`, lobe B is `F₂`.
pub fn nongeneric_figure_eight(areas: [f64; 3]) -> (SurfaceGraph, LoopWord, Crossing) {
    let g = SurfaceGraph::builder()
        .vertices(["v", "p", "q"])
        .edge("e1", "v", "p")
        .edge("e2", "v", "q")
        .edge("e3", "v", "q")
        .edge("e4", "v", "p")
        .face("O", "e1 e4^-1 e3 e2^-1", areas[0])
        .face("A", "e4 e1^-1", areas[1])
        .face("B", "e2 e3^-1", areas[2])
        .build()
        .expect("fixture");
    let l = LoopWord::parse(&g, "e1 e4^-1 e2 e3^-1").expect("fixture");
    let c = Crossing::parse(&g, "v", "e1 e2 e3 e4", &["O", "B", "O", "A"]).expect("fixture");
    (g, l, c)
}

/// Cuts the outer face of [`nongeneric_figure_eight`] with an edge `e5` from
/// `p` to `q`. The piece holding the `e3, e4` corner gets `a3`, the piece
/// holding the `e1, e2` corner gets `a1`.
pub fn generic_counterpart(
    g: &SurfaceGraph,
    c: &Crossing,
    a3: f64,
    a1: f64,
) -> Result<(SurfaceGraph, Crossing), GraphError> {
    let face = g.face_index("O").ok_or(GraphError::UnknownId {
        kind: "face",
        id: "O".into(),
    })?;
    let spec = EdgeAddition {
        face,
        from: 1,
        to: 3,
        edge_id: "e5".into(),
        face_ids: ("O3".into(), "O1".into()),
        areas: (a3, a1),
    };
    add_generic_edge(g, c, &spec)
}

/// Disk with boundary loop `z`, an inner loop face `x⁻¹` (area `s`) and the
/// annulus cut along `y` into the face `x y z y⁻¹` (area `t`).
pub fn constrained_disk(s: f64, t: f64) -> SurfaceGraph {
    SurfaceGraph::builder()
        .vertices(["p", "q"])
        .edge("x", "p", "p")
        .edge("y", "p", "q")
        .edge("z", "q", "q")
        .face("inner", "x^-1", s)
        .face("outer", "x y z y^-1", t)
        .boundary("z")
        .build()
        .expect("fixture")
}

/// The four-lune figure-eight placed inside a disk: `F₄` is joined to the
/// boundary loop `z` through the edge `y`.
pub fn figure_eight_disk(areas: [f64; 4]) -> (SurfaceGraph, LoopWord, Crossing) {
    let g = SurfaceGraph::builder()
        .vertices(["v", "w", "q"])
        .edge("e1", "v", "w")
        .edge("e2", "v", "w")
        .edge("e3", "v", "w")
        .edge("e4", "v", "w")
        .edge("y", "w", "q")
        .edge("z", "q", "q")
        .face("F1", "e1 e2^-1", areas[0])
        .face("F2", "e2 e3^-1", areas[1])
        .face("F3", "e3 e4^-1", areas[2])
        .face("F4", "e4 y z y^-1 e1^-1", areas[3])
        .boundary("z")
        .build()
        .expect("fixture");
    let l = LoopWord::parse(&g, "e1 e4^-1 e2 e3^-1").expect("fixture");
    let c = Crossing::parse(&g, "v", "e1 e2 e3 e4", &["F1", "F2", "F3", "F4"]).expect("fixture");
    (g, l, c)
}

/// Every fixture on the closed sphere, with generic unit-ish areas.
pub fn all_closed_fixtures() -> Vec<SurfaceGraph> {
    let (g8, _, _) = figure_eight_sphere([0.5, 1.0, 1.5, 1.0]);
    let (ng, _, c) = nongeneric_figure_eight([2.0, 1.0, 1.0]);
    let (gc, _) = generic_counterpart(&ng, &c, 1.2, 0.8).expect("fixture");
    vec![
        simple_loop_sphere(1.0, 2.0),
        five_face_sphere([0.3, 0.7, 0.5, 0.9, 0.6]),
        g8,
        ng,
        gc,
    ]
}
