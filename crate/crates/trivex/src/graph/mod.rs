//! Finite labelled (multi)graphs with explicit darts, the Cayley graphs
//! `X_k`, their relator triangles and the delta-wye transformation to the
//! trivalent graphs `T_k`.

mod cayley;
mod cheeger;
pub mod export;
mod iso;

pub use cayley::{
    cayley, clique_triangles, delta_y, relator_triangles, triangle_census, CayleyGraph, Triangle,
};
pub use cheeger::{cheeger_exact, cheeger_report, cheeger_spectral_lower, CheegerReport};
pub use iso::{cayley_label_isomorphism, color_refinement, is_isomorphic, verify_mapping};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("graph is not simple")]
    NotSimple,
    #[error("graph too large: {n} vertices, cap {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("an edge lies in more than one listed triangle")]
    SharedTriangleEdges,
    #[error("structural violation: {0}")]
    Structural(String),
    #[error("search limit exhausted")]
    SearchLimit,
    #[error(transparent)]
    Group(#[from] crate::group::GroupError),
}

/// A half-edge: its source vertex, the opposite half-edge and an optional
/// label.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Dart {
    pub src: u32,
    pub rev: u32,
    pub label: Option<u8>,
}

/// A finite multigraph given by its dart table. The reverse map is an
/// involution without fixed darts, so the dart count is twice the edge
/// count; multi-edges are permitted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledGraph {
    n: usize,
    darts: Vec<Dart>,
    adj: Vec<Vec<u32>>,
    bipartition: Option<Vec<u8>>,
}

impl LabeledGraph {
    pub fn new(n: usize) -> Self {
        LabeledGraph {
            n,
            darts: Vec::new(),
            adj: vec![Vec::new(); n],
            bipartition: None,
        }
    }

    /// Adds an edge `u -- v`; both darts get `label`. Returns the dart ids.
    pub fn add_edge(&mut self, u: u32, v: u32, label: Option<u8>) -> (u32, u32) {
        assert!(u != v, "loops are not used anywhere in this construction");
        let d1 = self.darts.len() as u32;
        let d2 = d1 + 1;
        self.darts.push(Dart {
            src: u,
            rev: d2,
            label,
        });
        self.darts.push(Dart {
            src: v,
            rev: d1,
            label,
        });
        self.adj[u as usize].push(d1);
        self.adj[v as usize].push(d2);
        (d1, d2)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.darts.len() / 2
    }

    pub fn num_darts(&self) -> usize {
        self.darts.len()
    }

    pub fn dart(&self, d: u32) -> &Dart {
        &self.darts[d as usize]
    }

    /// Target vertex of a dart.
    pub fn head(&self, d: u32) -> u32 {
        self.darts[self.darts[d as usize].rev as usize].src
    }

    pub fn reverse(&self, d: u32) -> u32 {
        self.darts[d as usize].rev
    }

    pub fn darts_at(&self, v: u32) -> &[u32] {
        &self.adj[v as usize]
    }

    pub fn set_dart_label(&mut self, d: u32, label: Option<u8>) {
        self.darts[d as usize].label = label;
    }

    pub fn degree(&self, v: u32) -> usize {
        self.adj[v as usize].len()
    }

    /// Neighbors of `v` with multiplicity, in dart order.
    pub fn neighbors(&self, v: u32) -> impl Iterator<Item = u32> + '_ {
        self.adj[v as usize].iter().map(move |&d| self.head(d))
    }

    /// Undirected edge list with multiplicity, sorted.
    pub fn edge_list(&self) -> Vec<(u32, u32)> {
        let mut edges: Vec<(u32, u32)> = (0..self.darts.len() as u32)
            .filter(|&d| d < self.reverse(d))
            .map(|d| {
                let u = self.dart(d).src;
                let v = self.head(d);
                (u.min(v), u.max(v))
            })
            .collect();
        edges.sort_unstable();
        edges
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut ds: Vec<usize> = (0..self.n).map(|v| self.adj[v].len()).collect();
        ds.sort_unstable();
        ds
    }

    pub fn is_regular(&self) -> Option<usize> {
        let ds = self.degree_sequence();
        match (ds.first(), ds.last()) {
            (Some(a), Some(b)) if a == b => Some(*a),
            _ => None,
        }
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0u32];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &d in self.darts_at(v) {
                let w = self.head(d);
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n
    }

    pub fn is_simple(&self) -> bool {
        for v in 0..self.n as u32 {
            let mut hs: Vec<u32> = self.neighbors(v).collect();
            hs.sort_unstable();
            if hs.windows(2).any(|w| w[0] == w[1]) || hs.contains(&v) {
                return false;
            }
        }
        true
    }

    /// Two-colors the graph if possible and caches the classes.
    pub fn compute_bipartition(&mut self) -> Option<&[u8]> {
        if self.bipartition.is_none() {
            let mut color = vec![u8::MAX; self.n];
            for start in 0..self.n as u32 {
                if color[start as usize] != u8::MAX {
                    continue;
                }
                color[start as usize] = 0;
                let mut queue = std::collections::VecDeque::from([start]);
                while let Some(v) = queue.pop_front() {
                    let c = color[v as usize];
                    for &d in self.darts_at(v) {
                        let w = self.head(d) as usize;
                        if color[w] == u8::MAX {
                            color[w] = 1 - c;
                            queue.push_back(w as u32);
                        } else if color[w] == c {
                            return None;
                        }
                    }
                }
            }
            self.bipartition = Some(color);
        }
        self.bipartition.as_deref()
    }

    pub fn bipartition(&self) -> Option<&[u8]> {
        self.bipartition.as_deref()
    }

    /// Neighbor lists with multiplicity, for the spectral operators.
    pub fn neighbor_lists(&self) -> Vec<Vec<u32>> {
        (0..self.n as u32)
            .map(|v| self.neighbors(v).collect())
            .collect()
    }

    /// Sum of degrees and twice the edge count; equal by construction,
    /// exposed for the handshake checks in tests.
    pub fn handshake(&self) -> (usize, usize) {
        (
            (0..self.n).map(|v| self.adj[v].len()).sum(),
            2 * self.num_edges(),
        )
    }
}

/// Checks that `map` is a label-preserving graph homomorphism `big -> small`
/// that is a local bijection on darts: at every vertex the multisets of
/// (label, mapped head) agree.
pub fn covering_check(big: &LabeledGraph, small: &LabeledGraph, map: &[u32]) -> bool {
    if map.len() != big.n() {
        return false;
    }
    if map.iter().any(|&v| v as usize >= small.n()) {
        return false;
    }
    for v in 0..big.n() as u32 {
        let mv = map[v as usize];
        let mut up: Vec<(Option<u8>, u32)> = big
            .darts_at(v)
            .iter()
            .map(|&d| (big.dart(d).label, map[big.head(d) as usize]))
            .collect();
        let mut down: Vec<(Option<u8>, u32)> = small
            .darts_at(mv)
            .iter()
            .map(|&d| (small.dart(d).label, small.head(d)))
            .collect();
        up.sort_unstable();
        down.sort_unstable();
        if up != down {
            return false;
        }
    }
    true
}

#[cfg(test)]
pub(crate) mod testgraphs {
    use super::LabeledGraph;

    /// The 3-cube on bit-vectors 0..8.
    pub fn cube() -> LabeledGraph {
        let mut g = LabeledGraph::new(8);
        for u in 0..8u32 {
            for b in 0..3 {
                let v = u ^ (1 << b);
                if u < v {
                    g.add_edge(u, v, None);
                }
            }
        }
        g
    }

    pub fn complete(n: u32) -> LabeledGraph {
        let mut g = LabeledGraph::new(n as usize);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v, None);
            }
        }
        g
    }

    pub fn complete_bipartite(a: u32, b: u32) -> LabeledGraph {
        let mut g = LabeledGraph::new((a + b) as usize);
        for u in 0..a {
            for v in 0..b {
                g.add_edge(u, a + v, None);
            }
        }
        g
    }

    /// The octahedron as the complete tripartite graph K_{2,2,2}: vertices
    /// 2i, 2i+1 form the i-th non-adjacent pair.
    pub fn octahedron() -> LabeledGraph {
        let mut g = LabeledGraph::new(6);
        for u in 0..6u32 {
            for v in u + 1..6 {
                if u / 2 != v / 2 {
                    g.add_edge(u, v, None);
                }
            }
        }
        g
    }
}
