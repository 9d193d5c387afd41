//! Graph export formats: plain edge lists, graph6 and DOT.

use super::{GraphError, LabeledGraph};
use std::fmt::Write;

/// Plain edge list, one `u v` pair per line (0-indexed), preceded by `#`
/// comment lines.
pub fn to_edge_list(g: &LabeledGraph, header: &[String]) -> String {
    let mut out = String::new();
    for line in header {
        writeln!(out, "# {line}").unwrap();
    }
    writeln!(out, "# vertices {} edges {}", g.n(), g.num_edges()).unwrap();
    for (u, v) in g.edge_list() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

/// graph6 encoding (simple graphs only). Supports the short form for
/// `n <= 62` and the 4-byte form for larger graphs.
pub fn to_graph6(g: &LabeledGraph) -> Result<String, GraphError> {
    if !g.is_simple() {
        return Err(GraphError::NotSimple);
    }
    let n = g.n();
    if n > 258_047 {
        return Err(GraphError::TooLarge { n, cap: 258_047 });
    }
    let mut out = String::new();
    if n <= 62 {
        out.push((n as u8 + 63) as char);
    } else {
        out.push('~');
        for shift in [12, 6, 0] {
            out.push(((n >> shift & 63) as u8 + 63) as char);
        }
    }
    let mut adj = vec![false; n * n];
    for (u, v) in g.edge_list() {
        adj[u as usize * n + v as usize] = true;
        adj[v as usize * n + u as usize] = true;
    }
    // upper triangle, column by column
    let mut bits: Vec<bool> = Vec::with_capacity(n * (n - 1) / 2);
    for j in 1..n {
        for i in 0..j {
            bits.push(adj[i * n + j]);
        }
    }
    for chunk in bits.chunks(6) {
        let mut v = 0u8;
        for (i, &b) in chunk.iter().enumerate() {
            if b {
                v |= 1 << (5 - i);
            }
        }
        out.push((v + 63) as char);
    }
    Ok(out)
}

/// DOT output with label attributes on edges and bipartition classes on
/// vertices when known.
pub fn to_dot(g: &LabeledGraph, name: &str, header: &[String]) -> String {
    let mut out = String::new();
    for line in header {
        writeln!(out, "// {line}").unwrap();
    }
    writeln!(out, "graph {name} {{").unwrap();
    if let Some(classes) = g.bipartition() {
        for (v, &c) in classes.iter().enumerate() {
            writeln!(out, "  {v} [class={c}];").unwrap();
        }
    }
    let mut darts: Vec<u32> = (0..g.num_darts() as u32)
        .filter(|&d| d < g.reverse(d))
        .collect();
    darts.sort_by_key(|&d| {
        let u = g.dart(d).src;
        let v = g.head(d);
        (u.min(v), u.max(v), d)
    });
    for d in darts {
        let u = g.dart(d).src;
        let v = g.head(d);
        match g.dart(d).label {
            Some(l) => writeln!(out, "  {u} -- {v} [label={l}];").unwrap(),
            None => writeln!(out, "  {u} -- {v};").unwrap(),
        }
    }
    writeln!(out, "}}").unwrap();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::testgraphs::*;

    #[test]
    fn k4_graph6_is_the_known_string() {
        assert_eq!(to_graph6(&complete(4)).unwrap(), "C~");
    }

    /// Minimal decoder used as the round-trip oracle.
    fn from_graph6(s: &str) -> LabeledGraph {
        let bytes = s.as_bytes();
        let (n, rest) = if bytes[0] == b'~' {
            let n = ((bytes[1] - 63) as usize) << 12
                | ((bytes[2] - 63) as usize) << 6
                | (bytes[3] - 63) as usize;
            (n, &bytes[4..])
        } else {
            ((bytes[0] - 63) as usize, &bytes[1..])
        };
        let mut bits = Vec::new();
        for &b in rest {
            let v = b - 63;
            for i in (0..6).rev() {
                bits.push(v >> i & 1 == 1);
            }
        }
        let mut g = LabeledGraph::new(n);
        let mut idx = 0;
        for j in 1..n {
            for i in 0..j {
                if bits[idx] {
                    g.add_edge(i as u32, j as u32, None);
                }
                idx += 1;
            }
        }
        g
    }

    #[test]
    fn graph6_round_trip() {
        for g in [cube(), octahedron(), complete_bipartite(3, 3)] {
            let enc = to_graph6(&g).unwrap();
            let back = from_graph6(&enc);
            assert_eq!(back.edge_list(), g.edge_list());
        }
        // large form kicks in above 62 vertices
        let mut path = LabeledGraph::new(100);
        for i in 0..99u32 {
            path.add_edge(i, i + 1, None);
        }
        let enc = to_graph6(&path).unwrap();
        assert!(enc.starts_with('~'));
        assert_eq!(from_graph6(&enc).edge_list(), path.edge_list());
    }

    #[test]
    fn edge_list_and_dot_are_deterministic() {
        let g = cube();
        let h = vec!["tool test".to_string()];
        assert_eq!(to_edge_list(&g, &h), to_edge_list(&g, &h));
        let e = to_edge_list(&g, &h);
        assert!(e.starts_with("# tool test\n# vertices 8 edges 12\n0 1\n"));
        let d = to_dot(&g, "cube", &h);
        assert!(d.contains("graph cube {"));
        assert!(d.contains("0 -- 1;"));
    }

    #[test]
    fn graph6_rejects_multigraphs() {
        let mut m = LabeledGraph::new(2);
        m.add_edge(0, 1, None);
        m.add_edge(0, 1, None);
        assert!(to_graph6(&m).is_err());
    }
}
