//! Poincare-disk rendering of a universal-cover patch of the tessellation:
//! a seed regular polygon at the origin and its reflection orbit out to a
//! combinatorial radius, drawn with geodesic arcs.

use super::{trace_faces, OrientedMap, SurfaceError, Turn};
use num_complex::Complex64;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt::Write;

const RADIUS_CAP: usize = 6;
const TILE_CAP: usize = 100_000;

/// An orientation-aware Moebius transform `z -> (a w + b)/(c w + d)` with
/// `w = conj(z)` when `flip` is set. Composition renormalizes the
/// determinant to control drift.
#[derive(Clone, Copy, Debug)]
struct Moebius {
    m: [Complex64; 4],
    flip: bool,
}

impl Moebius {
    fn identity() -> Self {
        Moebius {
            m: [
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
            ],
            flip: false,
        }
    }

    /// Inversion in the circle with center `c` and squared radius `r2`.
    fn circle_inversion(c: Complex64, r2: f64) -> Self {
        Moebius {
            m: [c, Complex64::new(r2, 0.0) - c * c.conj(), Complex64::new(1.0, 0.0), -c.conj()],
            flip: true,
        }
    }

    /// Reflection across the diameter at angle `theta`.
    fn diameter_reflection(theta: f64) -> Self {
        Moebius {
            m: [
                Complex64::from_polar(1.0, 2.0 * theta),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
            ],
            flip: true,
        }
    }

    fn apply(&self, z: Complex64) -> Complex64 {
        let w = if self.flip { z.conj() } else { z };
        (self.m[0] * w + self.m[1]) / (self.m[2] * w + self.m[3])
    }

    /// `self` after `other`: `z -> self(other(z))`.
    fn compose(&self, other: &Moebius) -> Moebius {
        let o = if self.flip {
            [
                other.m[0].conj(),
                other.m[1].conj(),
                other.m[2].conj(),
                other.m[3].conj(),
            ]
        } else {
            other.m
        };
        let mut m = [
            self.m[0] * o[0] + self.m[1] * o[2],
            self.m[0] * o[1] + self.m[1] * o[3],
            self.m[2] * o[0] + self.m[3] * o[2],
            self.m[2] * o[1] + self.m[3] * o[3],
        ];
        let det = m[0] * m[3] - m[1] * m[2];
        let s = det.sqrt();
        if s.norm() > 1e-300 {
            for entry in &mut m {
                *entry /= s;
            }
        }
        Moebius {
            m,
            flip: self.flip ^ other.flip,
        }
    }
}

/// The geodesic through two interior points: a circle orthogonal to the
/// unit circle, or a diameter when the points are collinear with 0.
enum Geodesic {
    Arc { center: Complex64, radius: f64 },
    Line,
}

fn geodesic_through(z1: Complex64, z2: Complex64) -> Geodesic {
    let det = 4.0 * (z1.re * z2.im - z2.re * z1.im);
    if det.abs() < 1e-12 {
        return Geodesic::Line;
    }
    let b1 = z1.norm_sqr() + 1.0;
    let b2 = z2.norm_sqr() + 1.0;
    let cx = (b1 * 2.0 * z2.im - b2 * 2.0 * z1.im) / det;
    let cy = (b2 * 2.0 * z1.re - b1 * 2.0 * z2.re) / det;
    let center = Complex64::new(cx, cy);
    Geodesic::Arc {
        center,
        radius: (center.norm_sqr() - 1.0).max(0.0).sqrt(),
    }
}

fn reflection_across(z1: Complex64, z2: Complex64) -> Moebius {
    match geodesic_through(z1, z2) {
        Geodesic::Arc { center, radius } => Moebius::circle_inversion(center, radius * radius),
        Geodesic::Line => Moebius::diameter_reflection((z2 - z1).arg()),
    }
}

fn quantize(z: Complex64) -> (i64, i64) {
    ((z.re * 1e6).round() as i64, (z.im * 1e6).round() as i64)
}

/// Draws tiles of the `{m, 3}` tessellation out to combinatorial radius
/// `radius` around a seed face centered at the origin, as an SVG document.
/// The face size `m` is read off the map; output is deterministic.
pub fn render_disk(map: &OrientedMap, radius: usize) -> Result<String, SurfaceError> {
    if radius > RADIUS_CAP {
        return Err(SurfaceError::RadiusCap(radius, RADIUS_CAP));
    }
    if map.graph.is_regular() != Some(3) {
        return Err(SurfaceError::NonHyperbolic(
            "disk rendering expects a trivalent map".into(),
        ));
    }
    let m = [Turn::Left, Turn::Right]
        .into_iter()
        .find_map(|t| trace_faces(map, t).ok().and_then(|f| f.uniform_length()))
        .ok_or_else(|| {
            SurfaceError::Structural("no turn convention yields uniform faces".into())
        })?;
    if m < 7 {
        return Err(SurfaceError::NonHyperbolic(format!(
            "{m}-gons with interior angle 2 pi / 3 do not tessellate the hyperbolic plane"
        )));
    }
    let mf = m as f64;

    // seed polygon: hyperbolic circumradius R with cosh R = cot(pi/m) cot(pi/3)
    let cosh_r = 1.0 / (PI / mf).tan() / (PI / 3.0).tan();
    let euclid_r = (cosh_r.acosh() / 2.0).tanh();
    let seed: Vec<Complex64> = (0..m)
        .map(|j| Complex64::from_polar(euclid_r, 2.0 * PI * (j as f64 + 0.5) / mf))
        .collect();
    let side_reflections: Vec<Moebius> = (0..m)
        .map(|j| reflection_across(seed[j], seed[(j + 1) % m]))
        .collect();

    // breadth-first reflection orbit, deduplicated on quantized centers
    // with a neighbour-cell probe against drift
    let mut tiles: Vec<Moebius> = vec![Moebius::identity()];
    let mut centers: Vec<Complex64> = vec![Complex64::new(0.0, 0.0)];
    let mut cells: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    cells.insert(quantize(centers[0]), vec![0]);
    let mut frontier: Vec<usize> = vec![0];
    for _ in 0..radius {
        let mut next_frontier = Vec::new();
        for &ti in &frontier {
            let t = tiles[ti];
            for refl in &side_reflections {
                let nt = t.compose(refl);
                let c = nt.apply(Complex64::new(0.0, 0.0));
                let q = quantize(c);
                let mut known = false;
                'probe: for dx in -1..=1 {
                    for dy in -1..=1 {
                        if let Some(ids) = cells.get(&(q.0 + dx, q.1 + dy)) {
                            if ids.iter().any(|&i| (centers[i] - c).norm() < 1e-7) {
                                known = true;
                                break 'probe;
                            }
                        }
                    }
                }
                if !known {
                    if tiles.len() >= TILE_CAP {
                        return Err(SurfaceError::TooManyTiles(TILE_CAP));
                    }
                    let id = tiles.len();
                    tiles.push(nt);
                    centers.push(c);
                    cells.entry(q).or_default().push(id);
                    next_frontier.push(id);
                }
            }
        }
        frontier = next_frontier;
    }

    // collect the edges of every tile, deduplicated on endpoints
    let mut edge_seen: HashMap<((i64, i64), (i64, i64)), ()> = HashMap::new();
    let mut arcs: Vec<(Complex64, Complex64)> = Vec::new();
    for t in &tiles {
        for j in 0..m {
            let a = t.apply(seed[j]);
            let b = t.apply(seed[(j + 1) % m]);
            let (qa, qb) = (quantize(a), quantize(b));
            let key = if qa <= qb { (qa, qb) } else { (qb, qa) };
            if edge_seen.insert(key, ()).is_none() {
                arcs.push((a, b));
            }
        }
    }

    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="-1.05 -1.05 2.1 2.1">"#
    )
    .unwrap();
    writeln!(
        svg,
        "<!-- {{m}}={m} tiles={} radius={radius} -->",
        tiles.len()
    )
    .unwrap();
    writeln!(svg, r#"<g transform="scale(1,-1)" fill="none">"#).unwrap();
    writeln!(
        svg,
        r#"<circle cx="0" cy="0" r="1" stroke="black" stroke-width="0.004"/>"#
    )
    .unwrap();
    for (a, b) in &arcs {
        match geodesic_through(*a, *b) {
            Geodesic::Arc { center, radius } => {
                let cross = (a - center).re * (b - center).im - (a - center).im * (b - center).re;
                let sweep = if cross > 0.0 { 1 } else { 0 };
                writeln!(
                    svg,
                    r#"<path class="edge" d="M {:.7} {:.7} A {:.7} {:.7} 0 0 {} {:.7} {:.7}" stroke="steelblue" stroke-width="0.003"/>"#,
                    a.re, a.im, radius, radius, sweep, b.re, b.im
                )
                .unwrap();
            }
            Geodesic::Line => {
                writeln!(
                    svg,
                    r#"<path class="edge" d="M {:.7} {:.7} L {:.7} {:.7}" stroke="steelblue" stroke-width="0.003"/>"#,
                    a.re, a.im, b.re, b.im
                )
                .unwrap();
            }
        }
    }
    writeln!(svg, "</g>").unwrap();
    writeln!(svg, "</svg>").unwrap();
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::super::tests::tk;
    use super::*;
    use crate::surface::orient_tk;

    fn t2_map() -> OrientedMap {
        let (t2, nblue) = tk(2);
        orient_tk(&t2, nblue).unwrap()
    }

    #[test]
    fn radius_zero_is_one_octagon() {
        let svg = render_disk(&t2_map(), 0).unwrap();
        assert_eq!(svg.matches("<path class=\"edge\"").count(), 8);
        assert!(svg.contains("tiles=1 "));
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn radius_one_adds_one_neighbor_per_side() {
        let svg = render_disk(&t2_map(), 1).unwrap();
        assert!(svg.contains("tiles=9 "));
    }

    #[test]
    fn output_is_deterministic() {
        let a = render_disk(&t2_map(), 2).unwrap();
        let b = render_disk(&t2_map(), 2).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn caps_and_flat_inputs_are_rejected() {
        assert!(matches!(
            render_disk(&t2_map(), 7),
            Err(SurfaceError::RadiusCap(7, 6))
        ));
        let (t1, nblue) = tk(1);
        let map1 = orient_tk(&t1, nblue).unwrap();
        assert!(matches!(
            render_disk(&map1, 1),
            Err(SurfaceError::NonHyperbolic(_))
        ));
    }

    #[test]
    fn tile_counts_follow_the_growth_of_the_833_tessellation() {
        // layers of {8,3}: 1, 9, 33, ...: each new layer strictly grows
        let m0 = render_disk(&t2_map(), 0).unwrap();
        let m1 = render_disk(&t2_map(), 1).unwrap();
        let m2 = render_disk(&t2_map(), 2).unwrap();
        let count = |s: &str| -> usize {
            let tag = "tiles=";
            let rest = &s[s.find(tag).unwrap() + tag.len()..];
            rest[..rest.find(' ').unwrap()].parse().unwrap()
        };
        assert_eq!(count(&m0), 1);
        assert_eq!(count(&m1), 9);
        assert!(count(&m2) > 9);
    }
}
