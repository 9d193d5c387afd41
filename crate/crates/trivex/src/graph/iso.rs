//! Graph isomorphism for small simple graphs: colour refinement plus
//! backtracking, with an independent witness verification, and the
//! label-driven isomorphism check for Cayley graphs.

use super::{GraphError, LabeledGraph};
use crate::f2::Bits;
use std::collections::BTreeMap;

const SIZE_CAP: usize = 5000;

/// Stable colouring by iterated neighbourhood refinement (1-dimensional
/// Weisfeiler-Leman). Colours are renumbered canonically each round, so two
/// isomorphic graphs get identical colour histograms.
pub fn color_refinement(g: &LabeledGraph) -> Vec<usize> {
    let n = g.n();
    let mut color: Vec<usize> = (0..n as u32).map(|v| g.degree(v)).collect();
    loop {
        let mut signatures: Vec<(usize, Vec<usize>)> = (0..n as u32)
            .map(|v| {
                let mut nb: Vec<usize> = g.neighbors(v).map(|w| color[w as usize]).collect();
                nb.sort_unstable();
                (color[v as usize], nb)
            })
            .collect();
        let mut lookup: BTreeMap<&(usize, Vec<usize>), usize> = BTreeMap::new();
        for sig in &signatures {
            let next = lookup.len();
            lookup.entry(sig).or_insert(next);
        }
        let next: Vec<usize> = signatures.iter().map(|s| lookup[s]).collect();
        let stable = {
            // partition unchanged when the number of classes stagnates
            let old_classes = {
                let mut c = color.clone();
                c.sort_unstable();
                c.dedup();
                c.len()
            };
            lookup.len() == old_classes
        };
        color = next;
        signatures.clear();
        if stable {
            return color;
        }
    }
}

fn histogram(colors: &[usize]) -> Vec<(usize, usize)> {
    let mut h: BTreeMap<usize, usize> = BTreeMap::new();
    for &c in colors {
        *h.entry(c).or_default() += 1;
    }
    h.into_iter().collect()
}

fn adjacency_rows(g: &LabeledGraph) -> Vec<Bits> {
    let n = g.n();
    let mut rows = vec![Bits::zeros(n); n];
    for v in 0..n as u32 {
        for w in g.neighbors(v) {
            rows[v as usize].set(w as usize, true);
        }
    }
    rows
}

/// Searches for a vertex bijection preserving adjacency. Returns a witness
/// mapping (image of each vertex of `g1`) or `None` when the graphs are
/// certifiably non-isomorphic. Simple graphs only; `node_limit` bounds the
/// backtracking.
pub fn is_isomorphic(
    g1: &LabeledGraph,
    g2: &LabeledGraph,
    node_limit: u64,
) -> Result<Option<Vec<u32>>, GraphError> {
    if g1.n() > SIZE_CAP || g2.n() > SIZE_CAP {
        return Err(GraphError::TooLarge {
            n: g1.n().max(g2.n()),
            cap: SIZE_CAP,
        });
    }
    if !g1.is_simple() || !g2.is_simple() {
        return Err(GraphError::NotSimple);
    }
    if g1.n() != g2.n()
        || g1.num_edges() != g2.num_edges()
        || g1.degree_sequence() != g2.degree_sequence()
    {
        return Ok(None);
    }
    let c1 = color_refinement(g1);
    let c2 = color_refinement(g2);
    if histogram(&c1) != histogram(&c2) {
        return Ok(None);
    }
    let n = g1.n();
    let a1 = adjacency_rows(g1);
    let a2 = adjacency_rows(g2);

    // candidates per colour in g2
    let mut by_color: BTreeMap<usize, Vec<u32>> = BTreeMap::new();
    for (v, &c) in c2.iter().enumerate() {
        by_color.entry(c).or_default().push(v as u32);
    }

    // process g1 vertices rarest colour first, then by index: deterministic
    // and keeps candidate sets small early
    let mut order: Vec<u32> = (0..n as u32).collect();
    let color_size: Vec<usize> = c1.iter().map(|c| by_color[c].len()).collect();
    order.sort_by_key(|&v| (color_size[v as usize], v));

    let mut mapping = vec![u32::MAX; n];
    let mut used = vec![false; n];
    let mut nodes = 0u64;

    fn backtrack(
        depth: usize,
        order: &[u32],
        c1: &[usize],
        by_color: &BTreeMap<usize, Vec<u32>>,
        a1: &[Bits],
        a2: &[Bits],
        mapping: &mut [u32],
        used: &mut [bool],
        nodes: &mut u64,
        node_limit: u64,
    ) -> Result<bool, GraphError> {
        if depth == order.len() {
            return Ok(true);
        }
        let u = order[depth];
        for &v in &by_color[&c1[u as usize]] {
            if used[v as usize] {
                continue;
            }
            *nodes += 1;
            if *nodes > node_limit {
                return Err(GraphError::SearchLimit);
            }
            // adjacency with all previously mapped vertices must agree
            let ok = order[..depth].iter().all(|&w| {
                a1[u as usize].get(w as usize)
                    == a2[v as usize].get(mapping[w as usize] as usize)
            });
            if !ok {
                continue;
            }
            mapping[u as usize] = v;
            used[v as usize] = true;
            if backtrack(
                depth + 1,
                order,
                c1,
                by_color,
                a1,
                a2,
                mapping,
                used,
                nodes,
                node_limit,
            )? {
                return Ok(true);
            }
            mapping[u as usize] = u32::MAX;
            used[v as usize] = false;
        }
        Ok(false)
    }

    let found = backtrack(
        0, &order, &c1, &by_color, &a1, &a2, &mut mapping, &mut used, &mut nodes, node_limit,
    )?;
    if !found {
        return Ok(None);
    }
    // the witness is re-verified edge by edge, independently of the search
    if !verify_mapping(g1, g2, &mapping) {
        return Err(GraphError::Structural(
            "isomorphism witness failed re-verification".into(),
        ));
    }
    Ok(Some(mapping))
}

/// Independent witness check: `map` must be a bijection carrying the edge
/// multiset of `g1` exactly onto that of `g2` (multiplicities included).
pub fn verify_mapping(g1: &LabeledGraph, g2: &LabeledGraph, map: &[u32]) -> bool {
    if map.len() != g1.n() || g1.n() != g2.n() {
        return false;
    }
    let mut seen = vec![false; g2.n()];
    for &v in map {
        if v as usize >= g2.n() || seen[v as usize] {
            return false;
        }
        seen[v as usize] = true;
    }
    let mut mapped: Vec<(u32, u32)> = g1
        .edge_list()
        .into_iter()
        .map(|(u, v)| {
            let (a, b) = (map[u as usize], map[v as usize]);
            (a.min(b), a.max(b))
        })
        .collect();
    mapped.sort_unstable();
    mapped == g2.edge_list()
}

/// Isomorphism of labelled Cayley graphs rooted at given vertices: the
/// mapping is forced by following equally-labelled darts from the roots
/// (`relabel[s]` is the label in `g2` matching label `s` in `g1`), then
/// verified. Requires every vertex to carry exactly one dart per label.
pub fn cayley_label_isomorphism(
    g1: &LabeledGraph,
    g2: &LabeledGraph,
    relabel: &[u8],
    root1: u32,
    root2: u32,
) -> Option<Vec<u32>> {
    if g1.n() != g2.n() {
        return None;
    }
    let dart_by_label = |g: &LabeledGraph, v: u32, l: u8| -> Option<u32> {
        let mut found = None;
        for &d in g.darts_at(v) {
            if g.dart(d).label == Some(l) {
                if found.is_some() {
                    return None; // label repeated: not deterministic
                }
                found = Some(d);
            }
        }
        found
    };
    let mut map = vec![u32::MAX; g1.n()];
    map[root1 as usize] = root2;
    let mut queue = std::collections::VecDeque::from([root1]);
    while let Some(u) = queue.pop_front() {
        let v = map[u as usize];
        for &d in g1.darts_at(u) {
            let l = g1.dart(d).label?;
            let l2 = *relabel.get(l as usize)?;
            let d2 = dart_by_label(g2, v, l2)?;
            let (hu, hv) = (g1.head(d), g2.head(d2));
            if map[hu as usize] == u32::MAX {
                map[hu as usize] = hv;
                queue.push_back(hu);
            } else if map[hu as usize] != hv {
                return None;
            }
        }
    }
    if map.iter().any(|&v| v == u32::MAX) {
        return None; // g1 not connected from the root
    }
    verify_mapping(g1, g2, &map).then_some(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::testgraphs::*;

    #[test]
    fn octahedron_is_k222() {
        // both are 4-regular on 6 vertices whose complement is a perfect
        // matching
        let mut pi4_like = LabeledGraph::new(6);
        for u in 0..6u32 {
            for v in u + 1..6 {
                if v != u ^ 1 {
                    pi4_like.add_edge(u, v, None);
                }
            }
        }
        let w = is_isomorphic(&pi4_like, &octahedron(), 1 << 20)
            .unwrap()
            .expect("isomorphic");
        assert!(verify_mapping(&pi4_like, &octahedron(), &w));
    }

    #[test]
    fn cube_vs_k33() {
        // different sizes: certifiably non-isomorphic
        assert!(is_isomorphic(&cube(), &complete_bipartite(3, 3), 1 << 20)
            .unwrap()
            .is_none());
        // same size, same degree sequence, different structure
        let k44 = complete_bipartite(4, 4);
        let mut cube4 = cube();
        let _ = cube4.compute_bipartition();
        assert!(is_isomorphic(&cube4, &k44, 1 << 20).unwrap().is_none());
    }

    #[test]
    fn refinement_distinguishes_regular_pairs() {
        // C6 vs 2xC3: both 2-regular; colour refinement alone cannot split
        // them, the backtracking must
        let mut c6 = LabeledGraph::new(6);
        for i in 0..6u32 {
            c6.add_edge(i, (i + 1) % 6, None);
        }
        let mut c33 = LabeledGraph::new(6);
        for i in 0..3u32 {
            c33.add_edge(i, (i + 1) % 3, None);
            c33.add_edge(3 + i, 3 + (i + 1) % 3, None);
        }
        assert!(is_isomorphic(&c6, &c33, 1 << 20).unwrap().is_none());
    }

    #[test]
    fn multigraphs_are_rejected() {
        let mut m = LabeledGraph::new(2);
        m.add_edge(0, 1, None);
        m.add_edge(0, 1, None);
        assert!(matches!(
            is_isomorphic(&m, &m, 1 << 20),
            Err(GraphError::NotSimple)
        ));
    }

    #[test]
    fn witness_verification_rejects_bad_maps() {
        let g = cube();
        let mut map: Vec<u32> = (0..8).collect();
        map.swap(0, 1); // 0 and 1 are adjacent to different sets now
        assert!(!verify_mapping(&g, &g, &map));
        let id: Vec<u32> = (0..8).collect();
        assert!(verify_mapping(&g, &g, &id));
    }

    #[test]
    fn labelled_cayley_iso_on_a_cycle() {
        // two labelled 4-cycles, one with labels rotated
        let mut g1 = LabeledGraph::new(4);
        let mut g2 = LabeledGraph::new(4);
        for i in 0..4u32 {
            // label 0 forward, 1 backward
            let (d1, d2) = g1.add_edge(i, (i + 1) % 4, Some(0));
            g1.set_dart_label(d1, Some(0));
            g1.set_dart_label(d2, Some(1));
            let (e1, e2) = g2.add_edge(i, (i + 1) % 4, Some(0));
            g2.set_dart_label(e1, Some(0));
            g2.set_dart_label(e2, Some(1));
        }
        let w = cayley_label_isomorphism(&g1, &g2, &[0, 1], 0, 2).expect("rotation works");
        assert_eq!(w[0], 2);
        // swapping the label correspondence reverses orientation, still fine
        assert!(cayley_label_isomorphism(&g1, &g2, &[1, 0], 0, 0).is_some());
    }
}
