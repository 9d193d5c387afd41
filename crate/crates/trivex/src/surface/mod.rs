//! Rotation systems on the trivalent graphs, face tracing, genus data and
//! the hyperbolic geometry of the tessellated surfaces.

mod hyperbolic;
mod render;
mod report;

pub use hyperbolic::{
    h0_from_observed_c, hyperbolic_face_data, quad_bound, surface_lambda_bounds,
    HyperbolicFaceData, LambdaBounds, QuadBound, C_PLUS_3_NOTE,
};
pub use render::render_disk;
pub use report::{hat_genus, hat_surface_report, surface_report, HatSurfaceReport, SurfaceReport};

use crate::graph::LabeledGraph;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SurfaceError {
    #[error("rotation is not a single cycle on the star of vertex {0}")]
    BadRotation(u32),
    #[error("vertex {0} does not carry exactly the labels 0, 1, 3")]
    MissingLabels(u32),
    #[error("face tracing needs a connected graph")]
    Disconnected,
    #[error("parameters are not hyperbolic: {0}")]
    NonHyperbolic(String),
    #[error("render radius {0} exceeds the cap {1}")]
    RadiusCap(usize, usize),
    #[error("render patch exceeds {0} tiles")]
    TooManyTiles(usize),
    #[error("structural violation: {0}")]
    Structural(String),
    #[error(transparent)]
    Spectral(#[from] crate::spectral::SpectralError),
}

/// Face-tracing convention: which way to turn after crossing an edge.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Turn {
    Left,
    Right,
}

/// A graph with a rotation system: a cyclic successor on the darts of each
/// vertex star, determining an embedding into an oriented surface.
#[derive(Clone, Debug)]
pub struct OrientedMap {
    pub graph: LabeledGraph,
    rot_next: Vec<u32>,
    rot_prev: Vec<u32>,
}

impl OrientedMap {
    /// Validates that `rot_next` permutes each star in a single cycle.
    pub fn new(graph: LabeledGraph, rot_next: Vec<u32>) -> Result<Self, SurfaceError> {
        assert_eq!(rot_next.len(), graph.num_darts());
        let mut rot_prev = vec![u32::MAX; rot_next.len()];
        for (d, &nxt) in rot_next.iter().enumerate() {
            rot_prev[nxt as usize] = d as u32;
        }
        for v in 0..graph.n() as u32 {
            let star = graph.darts_at(v);
            if star.is_empty() {
                continue;
            }
            let mut seen = 0usize;
            let mut d = star[0];
            loop {
                if graph.dart(d).src != v {
                    return Err(SurfaceError::BadRotation(v));
                }
                seen += 1;
                d = rot_next[d as usize];
                if d == star[0] {
                    break;
                }
                if seen > star.len() {
                    return Err(SurfaceError::BadRotation(v));
                }
            }
            if seen != star.len() {
                return Err(SurfaceError::BadRotation(v));
            }
        }
        if rot_prev.contains(&u32::MAX) {
            return Err(SurfaceError::BadRotation(u32::MAX));
        }
        Ok(OrientedMap {
            graph,
            rot_next,
            rot_prev,
        })
    }

    pub fn rot_next(&self, d: u32) -> u32 {
        self.rot_next[d as usize]
    }

    pub fn rot_prev(&self, d: u32) -> u32 {
        self.rot_prev[d as usize]
    }
}

/// The faces of an embedding, each a cyclic dart sequence, together with
/// the Euler characteristic and genus of the closed oriented surface.
#[derive(Clone, Debug)]
pub struct FaceSet {
    pub faces: Vec<Vec<u32>>,
    pub euler: i64,
    pub genus: i64,
}

impl FaceSet {
    /// Common face length, if the tessellation is regular.
    pub fn uniform_length(&self) -> Option<usize> {
        let l = self.faces.first()?.len();
        self.faces.iter().all(|f| f.len() == l).then_some(l)
    }
}

/// Orients the transform `T_k`: vertices below `nblue` came from the Cayley
/// graph and cycle their darts in label order 0 -> 3 -> 1; the added
/// triangle vertices cycle 1 -> 3 -> 0.
pub fn orient_tk(t: &LabeledGraph, nblue: usize) -> Result<OrientedMap, SurfaceError> {
    let mut rot_next = vec![u32::MAX; t.num_darts()];
    for v in 0..t.n() as u32 {
        let order: [u8; 3] = if (v as usize) < nblue {
            [0, 3, 1]
        } else {
            [1, 3, 0]
        };
        let mut by_label = [u32::MAX; 3];
        for &d in t.darts_at(v) {
            let Some(l) = t.dart(d).label else {
                return Err(SurfaceError::MissingLabels(v));
            };
            let Some(pos) = order.iter().position(|&o| o == l) else {
                return Err(SurfaceError::MissingLabels(v));
            };
            if by_label[pos] != u32::MAX {
                return Err(SurfaceError::MissingLabels(v));
            }
            by_label[pos] = d;
        }
        if by_label.contains(&u32::MAX) {
            return Err(SurfaceError::MissingLabels(v));
        }
        for i in 0..3 {
            rot_next[by_label[i] as usize] = by_label[(i + 1) % 3];
        }
    }
    OrientedMap::new(t.clone(), rot_next)
}

/// Traces the faces of the embedding: orbits of
/// `d -> rot^{-1}(reverse(d))` for left turns, `d -> rot(reverse(d))`
/// for right turns. Genus comes from the Euler formula.
pub fn trace_faces(map: &OrientedMap, turn: Turn) -> Result<FaceSet, SurfaceError> {
    let g = &map.graph;
    if !g.is_connected() {
        return Err(SurfaceError::Disconnected);
    }
    let nd = g.num_darts();
    let mut seen = vec![false; nd];
    let mut faces = Vec::new();
    for start in 0..nd as u32 {
        if seen[start as usize] {
            continue;
        }
        let mut face = Vec::new();
        let mut d = start;
        while !seen[d as usize] {
            seen[d as usize] = true;
            face.push(d);
            let r = g.reverse(d);
            d = match turn {
                Turn::Left => map.rot_prev(r),
                Turn::Right => map.rot_next(r),
            };
        }
        if d != start {
            return Err(SurfaceError::Structural(
                "face orbit left its starting dart".into(),
            ));
        }
        faces.push(face);
    }
    let euler = g.n() as i64 - g.num_edges() as i64 + faces.len() as i64;
    if euler % 2 != 0 || euler > 2 {
        return Err(SurfaceError::Structural(format!(
            "impossible Euler characteristic {euler} for a closed oriented surface"
        )));
    }
    Ok(FaceSet {
        faces,
        euler,
        genus: (2 - euler) / 2,
    })
}

/// The dual graph of an embedding: one vertex per face, one edge per
/// primal edge between the faces on its two sides.
pub fn dual_graph(map: &OrientedMap, faces: &FaceSet) -> Result<LabeledGraph, SurfaceError> {
    let g = &map.graph;
    let mut face_of = vec![u32::MAX; g.num_darts()];
    for (fi, face) in faces.faces.iter().enumerate() {
        for &d in face {
            face_of[d as usize] = fi as u32;
        }
    }
    let mut dual = LabeledGraph::new(faces.faces.len());
    for d in 0..g.num_darts() as u32 {
        if d < g.reverse(d) {
            let (a, b) = (face_of[d as usize], face_of[g.reverse(d) as usize]);
            if a == b {
                return Err(SurfaceError::Structural(
                    "dual loop: both sides of an edge lie on one face".into(),
                ));
            }
            dual.add_edge(a, b, None);
        }
    }
    dual.compute_bipartition();
    Ok(dual)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cayley, delta_y, relator_triangles};
    use crate::group::{pquotient, tower_presentation, QuotientLimits};

    pub(crate) fn tk(k: usize) -> (LabeledGraph, usize) {
        let pcp = pquotient(&tower_presentation(), k, &QuotientLimits::default()).unwrap();
        let cay = cayley(&pcp, 20).unwrap();
        let tris = relator_triangles(&cay).unwrap();
        let nblue = cay.graph.n();
        (delta_y(&cay.graph, &tris).unwrap(), nblue)
    }

    /// Cube with the rotation induced by its geometric embedding: the three
    /// neighbor directions ordered counterclockwise around the outward
    /// vertex normal.
    fn geographic_cube() -> OrientedMap {
        let g = crate::graph::testgraphs::cube();
        let coord = |v: u32| -> [f64; 3] {
            [
                if v & 1 == 1 { 1.0 } else { -1.0 },
                if v & 2 == 2 { 1.0 } else { -1.0 },
                if v & 4 == 4 { 1.0 } else { -1.0 },
            ]
        };
        let mut rot_next = vec![u32::MAX; g.num_darts()];
        for v in 0..8u32 {
            let p = coord(v);
            let norm = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
            let nrm = [p[0] / norm, p[1] / norm, p[2] / norm];
            let seed = if nrm[0].abs() < 0.9 {
                [1.0, 0.0, 0.0]
            } else {
                [0.0, 1.0, 0.0]
            };
            let dot = seed[0] * nrm[0] + seed[1] * nrm[1] + seed[2] * nrm[2];
            let mut basis1 = [0.0; 3];
            for i in 0..3 {
                basis1[i] = seed[i] - dot * nrm[i];
            }
            let b1n = (basis1.iter().map(|x| x * x).sum::<f64>()).sqrt();
            basis1.iter_mut().for_each(|x| *x /= b1n);
            let basis2 = [
                nrm[1] * basis1[2] - nrm[2] * basis1[1],
                nrm[2] * basis1[0] - nrm[0] * basis1[2],
                nrm[0] * basis1[1] - nrm[1] * basis1[0],
            ];
            let mut angled: Vec<(f64, u32)> = g
                .darts_at(v)
                .iter()
                .map(|&d| {
                    let w = coord(g.head(d));
                    let dir = [w[0] - p[0], w[1] - p[1], w[2] - p[2]];
                    let x: f64 = (0..3).map(|i| dir[i] * basis1[i]).sum();
                    let y: f64 = (0..3).map(|i| dir[i] * basis2[i]).sum();
                    (y.atan2(x), d)
                })
                .collect();
            angled.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            for i in 0..3 {
                rot_next[angled[i].1 as usize] = angled[(i + 1) % 3].1;
            }
        }
        OrientedMap::new(g, rot_next).unwrap()
    }

    #[test]
    fn cube_with_geographic_rotation_is_a_sphere() {
        let map = geographic_cube();
        for turn in [Turn::Left, Turn::Right] {
            let fs = trace_faces(&map, turn).unwrap();
            assert_eq!(fs.faces.len(), 6);
            assert_eq!(fs.uniform_length(), Some(4));
            assert_eq!(fs.genus, 0);
        }
        // the dual of the cube on the sphere is the octahedron
        let fs = trace_faces(&map, Turn::Left).unwrap();
        let dual = dual_graph(&map, &fs).unwrap();
        let w = crate::graph::is_isomorphic(
            &dual,
            &crate::graph::testgraphs::octahedron(),
            1 << 20,
        )
        .unwrap();
        assert!(w.is_some());
    }

    #[test]
    fn t2_orientation_traces_24_octagons() {
        let (t2, nblue) = tk(2);
        let map = orient_tk(&t2, nblue).unwrap();
        let left = trace_faces(&map, Turn::Left).unwrap();
        let right = trace_faces(&map, Turn::Right).unwrap();
        let octagonal = [&left, &right]
            .into_iter()
            .find(|fs| fs.uniform_length() == Some(8))
            .expect("one convention yields octagons");
        assert_eq!(octagonal.faces.len(), 24);
        assert_eq!(octagonal.genus, 5);
    }

    #[test]
    fn t1_is_spherical() {
        let (t1, nblue) = tk(1);
        let map = orient_tk(&t1, nblue).unwrap();
        let left = trace_faces(&map, Turn::Left).unwrap();
        let right = trace_faces(&map, Turn::Right).unwrap();
        let spherical = [&left, &right]
            .into_iter()
            .find(|fs| fs.uniform_length() == Some(4))
            .expect("one convention yields squares");
        assert_eq!(spherical.faces.len(), 6);
        assert_eq!(spherical.genus, 0);
    }

    #[test]
    fn faces_partition_the_darts() {
        let (t3, nblue) = tk(3);
        let map = orient_tk(&t3, nblue).unwrap();
        for turn in [Turn::Left, Turn::Right] {
            let fs = trace_faces(&map, turn).unwrap();
            let mut count = vec![0usize; t3.num_darts()];
            for face in &fs.faces {
                for &d in face {
                    count[d as usize] += 1;
                }
            }
            assert!(count.iter().all(|&c| c == 1));
        }
    }

    #[test]
    fn missing_labels_are_rejected() {
        let (mut t2, nblue) = tk(2);
        t2.set_dart_label(0, None);
        assert!(matches!(
            orient_tk(&t2, nblue),
            Err(SurfaceError::MissingLabels(_))
        ));
    }
}
