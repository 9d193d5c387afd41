//! Cheeger constants: exhaustive on small graphs, spectral lower bound
//! otherwise.

use super::{GraphError, LabeledGraph};
use serde::Serialize;

const EXACT_CAP: usize = 20;

/// The exact edge-expansion minimum together with a witness cut.
#[derive(Clone, Debug, Serialize)]
pub struct CheegerReport {
    /// `(boundary edges, subset size, ratio)` over all subsets of at most
    /// half the vertices; present only when the graph is small enough.
    pub exact: Option<(u64, u64, f64)>,
    /// `sigma / 2`, valid for any connected regular graph.
    pub spectral_lower: Option<f64>,
}

/// Exhaustive Cheeger constant `min |boundary(S)| / |S|` over all subsets
/// with `1 <= |S| <= n/2`. Ratios are compared exactly by cross
/// multiplication.
pub fn cheeger_exact(g: &LabeledGraph) -> Result<(u64, u64, f64), GraphError> {
    let n = g.n();
    if n > EXACT_CAP {
        return Err(GraphError::TooLarge { n, cap: EXACT_CAP });
    }
    if !g.is_connected() || n < 2 {
        return Err(GraphError::Structural(
            "Cheeger constant needs a connected graph on >= 2 vertices".into(),
        ));
    }
    let edges = g.edge_list();
    let mut best: (u64, u64) = (u64::MAX, 1);
    for mask in 1u32..(1 << n) - 1 {
        let size = mask.count_ones() as u64;
        if size > (n / 2) as u64 {
            continue;
        }
        let cut = edges
            .iter()
            .filter(|&&(u, v)| (mask >> u & 1) != (mask >> v & 1))
            .count() as u64;
        // cut/size < best.0/best.1
        if cut * best.1 < best.0 * size {
            best = (cut, size);
        }
    }
    Ok((best.0, best.1, best.0 as f64 / best.1 as f64))
}

/// The discrete Buser-side bound `h >= sigma/2` from the spectral gap.
pub fn cheeger_spectral_lower(sigma: f64) -> f64 {
    sigma / 2.0
}

/// Exact value when the graph is small, spectral lower bound whenever a gap
/// is supplied.
pub fn cheeger_report(g: &LabeledGraph, sigma: Option<f64>) -> CheegerReport {
    CheegerReport {
        exact: cheeger_exact(g).ok(),
        spectral_lower: sigma.map(cheeger_spectral_lower),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::testgraphs::*;

    #[test]
    fn cube_cheeger_is_one() {
        // a face cut: 4 edges over 4 vertices
        let (cut, size, h) = cheeger_exact(&cube()).unwrap();
        assert_eq!((cut, size), (4, 4));
        assert_eq!(h, 1.0);
    }

    #[test]
    fn k4_cheeger_is_two() {
        // best cut is a 2-subset with 4 boundary edges
        let (cut, size, h) = cheeger_exact(&complete(4)).unwrap();
        assert_eq!(h, 2.0);
        assert_eq!(cut as f64 / size as f64, 2.0);
    }

    #[test]
    fn large_graphs_fall_back_to_the_bound() {
        let mut big = LabeledGraph::new(30);
        for i in 0..29u32 {
            big.add_edge(i, i + 1, None);
        }
        let r = cheeger_report(&big, Some(0.5857864376269049));
        assert!(r.exact.is_none());
        let lb = r.spectral_lower.unwrap();
        assert!((lb - 0.29289321881345254).abs() < 1e-15);
    }
}
