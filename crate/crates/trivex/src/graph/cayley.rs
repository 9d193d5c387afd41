//! Cayley graphs of the tower groups, their relator triangles and the
//! delta-wye transformation.

use super::{GraphError, LabeledGraph};
use crate::group::{GenLabel, GroupElement, PcPresentation};

/// A Cayley graph together with its vertex order (group enumeration order)
/// and the group it came from.
#[derive(Clone, Debug)]
pub struct CayleyGraph {
    pub graph: LabeledGraph,
    pub elements: Vec<GroupElement>,
    pub pcp: PcPresentation,
}

/// Builds `Cay(G_k, S)` with `S` the six labelled generators
/// `x0^{+-1}, x1^{+-1}, x3^{+-1}`. Vertices are group elements in
/// enumeration order; every vertex carries one dart per labelled generator,
/// so the graph is 6-valent, with doubled edges exactly where a generator
/// coincides with an inverse (the class-1 quotient).
pub fn cayley(pcp: &PcPresentation, cap_log2: usize) -> Result<CayleyGraph, GraphError> {
    let elements = pcp.enumerate(cap_log2)?;
    let gens = pcp.generator_set();
    let n = elements.len();
    let mut graph = LabeledGraph::new(n);
    // one dart (g, s) per vertex and labelled generator; the reverse of
    // (g, s) is (g s, s^-1)
    let mut dart_of = vec![[u32::MAX; 6]; n];
    for (gi, g) in elements.iter().enumerate() {
        for (label, s) in &gens {
            let slot = label.index();
            if dart_of[gi][slot] != u32::MAX {
                continue;
            }
            let h = pcp.multiply(g, s);
            let hi = pcp.lex_index(&h);
            debug_assert_ne!(gi, hi, "generators are nontrivial");
            let (d1, d2) = graph.add_edge(gi as u32, hi as u32, Some(slot as u8));
            dart_of[gi][slot] = d1;
            dart_of[hi][label.inverse().index()] = d2;
        }
    }
    // the dart labelled s at h must really point along s: relabel the
    // reverse darts (the edge label pair is (s, s^-1), not one shared label)
    for (v, slots) in dart_of.iter().enumerate() {
        for (slot, &d) in slots.iter().enumerate() {
            assert_ne!(d, u32::MAX, "missing dart at vertex {v} slot {slot}");
            graph.set_dart_label(d, Some(slot as u8));
        }
    }
    Ok(CayleyGraph {
        graph,
        elements,
        pcp: pcp.clone(),
    })
}

impl CayleyGraph {
    /// The dart at `v` labelled with generator slot `s`.
    pub fn dart_with_label(&self, v: u32, label: GenLabel) -> u32 {
        *self
            .graph
            .darts_at(v)
            .iter()
            .find(|&&d| self.graph.dart(d).label == Some(label.index() as u8))
            .expect("every vertex has one dart per labelled generator")
    }

    pub fn vertex_of(&self, g: &GroupElement) -> u32 {
        self.pcp.lex_index(g) as u32
    }
}

/// One relator triangle `(g, g x0, g x0 x1)` with its three darts
/// (labelled `x0`, `x1`, `x3` in cyclic order).
#[derive(Clone, Debug)]
pub struct Triangle {
    pub corners: [u32; 3],
    pub darts: [u32; 3],
}

/// The structural triangles of a Cayley graph: one per group element `g`,
/// with corners `g, g x0, g x0 x1`, closing up by `x0 x1 x3 = e`. Every
/// vertex lies in exactly three of them and every edge in exactly one;
/// any violated count signals a corrupt group and is a hard failure.
pub fn relator_triangles(cay: &CayleyGraph) -> Result<Vec<Triangle>, GraphError> {
    let pcp = &cay.pcp;
    let x0 = pcp.image(0);
    let x1 = pcp.image(1);
    let n = cay.elements.len();
    let mut triangles = Vec::with_capacity(n);
    let mut vertex_count = vec![0usize; n];
    let mut edge_count = vec![0usize; cay.graph.num_edges()];
    for (gi, g) in cay.elements.iter().enumerate() {
        let a = gi as u32;
        let gb = pcp.multiply(g, &x0);
        let b = cay.vertex_of(&gb);
        let gc = pcp.multiply(&gb, &x1);
        let c = cay.vertex_of(&gc);
        let d0 = cay.dart_with_label(a, GenLabel::X0);
        let d1 = cay.dart_with_label(b, GenLabel::X1);
        let d2 = cay.dart_with_label(c, GenLabel::X3);
        if cay.graph.head(d0) != b || cay.graph.head(d1) != c || cay.graph.head(d2) != a {
            return Err(GraphError::Structural(
                "triangle does not close up along x0, x1, x3".into(),
            ));
        }
        if d0 == d1 || d1 == d2 || d0 == d2 {
            return Err(GraphError::Structural("degenerate triangle darts".into()));
        }
        for v in [a, b, c] {
            vertex_count[v as usize] += 1;
        }
        for d in [d0, d1, d2] {
            edge_count[(d.min(cay.graph.reverse(d)) / 2) as usize] += 1;
        }
        triangles.push(Triangle {
            corners: [a, b, c],
            darts: [d0, d1, d2],
        });
    }
    if vertex_count.iter().any(|&c| c != 3) {
        return Err(GraphError::Structural(
            "a vertex does not lie in exactly 3 triangles".into(),
        ));
    }
    if edge_count.iter().any(|&c| c != 1) {
        return Err(GraphError::Structural(
            "an edge does not lie in exactly 1 triangle".into(),
        ));
    }
    Ok(triangles)
}

/// All 3-cliques of the simple graph underlying `g`, as sorted corner
/// triples. Used to confirm that the structural relator triangles are the
/// only triangles the Cayley graphs carry; any excess clique is surfaced by
/// the census rather than silently ignored.
pub fn clique_triangles(g: &LabeledGraph) -> Vec<[u32; 3]> {
    let n = g.n();
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
    for (u, v) in g.edge_list() {
        if adj[u as usize].last() != Some(&v) {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
    }
    for row in &mut adj {
        row.sort_unstable();
        row.dedup();
    }
    let mut out = Vec::new();
    for u in 0..n as u32 {
        for &v in &adj[u as usize] {
            if v <= u {
                continue;
            }
            // common neighbors above v close a triangle exactly once
            for &w in &adj[u as usize] {
                if w > v && adj[v as usize].binary_search(&w).is_ok() {
                    out.push([u, v, w]);
                }
            }
        }
    }
    out
}

/// Compares the structural triangles with the exhaustive 3-clique census.
/// Returns `(relator_count, clique_count, coincide)`.
pub fn triangle_census(cay: &CayleyGraph, triangles: &[Triangle]) -> (usize, usize, bool) {
    let mut structural: Vec<[u32; 3]> = triangles
        .iter()
        .map(|t| {
            let mut c = t.corners;
            c.sort_unstable();
            c
        })
        .collect();
    structural.sort_unstable();
    structural.dedup();
    let mut cliques = clique_triangles(&cay.graph);
    cliques.sort_unstable();
    (
        structural.len(),
        cliques.len(),
        structural == cliques,
    )
}

/// The delta-wye transformation: every listed triangle is replaced by a new
/// vertex joined to its three corners, the triangle edges are removed and
/// all other edges are kept. Corner `g` of the triangle at `h` gets the
/// label of the triangle edge not adjacent to it: 1 for `g = h`, 3 for
/// `g = h x0`, 0 for `g = h x0 x1`.
///
/// New vertices are appended after the old ones in triangle order, so the
/// vertex numbering is reproducible.
pub fn delta_y(x: &LabeledGraph, triangles: &[Triangle]) -> Result<LabeledGraph, GraphError> {
    let mut covered = vec![false; x.num_darts()];
    for t in triangles {
        for &d in &t.darts {
            for half in [d, x.reverse(d)] {
                if covered[half as usize] {
                    return Err(GraphError::SharedTriangleEdges);
                }
                covered[half as usize] = true;
            }
        }
    }
    let n = x.n();
    let mut out = LabeledGraph::new(n + triangles.len());
    // untouched edges survive with their labels
    for d in 0..x.num_darts() as u32 {
        if d < x.reverse(d) && !covered[d as usize] {
            out.add_edge(x.dart(d).src, x.head(d), x.dart(d).label);
        }
    }
    const CORNER_LABEL: [u8; 3] = [1, 3, 0];
    for (t, tri) in triangles.iter().enumerate() {
        let star = (n + t) as u32;
        for (c, &corner) in tri.corners.iter().enumerate() {
            out.add_edge(star, corner, Some(CORNER_LABEL[c]));
        }
    }
    out.compute_bipartition();
    Ok(out)
}
