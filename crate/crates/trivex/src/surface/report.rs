//! Combinatorial and geometric summary of one tessellated surface.

use super::{
    hyperbolic_face_data, orient_tk, trace_faces, HyperbolicFaceData, SurfaceError, Turn,
};
use crate::graph::LabeledGraph;
use crate::group::{PcPresentation, FINITE_WIDTH_NOTE};
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct SurfaceReport {
    pub k: usize,
    /// Group order exponent: `|G_k| = 2^n_gens_log2`.
    pub n_gens_log2: usize,
    /// Generator order exponent: `ord(x_i) = 2^gen_order_log2`.
    pub gen_order_log2: u32,
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub face_length: usize,
    /// Genus from the Euler formula on traced faces (the computed value).
    pub genus: i64,
    /// Genus from the branched-covering count, `1 + (1 - mu)/2 |G|`.
    pub genus_hurwitz: i64,
    /// Closed form `1 + 2^(N-n-1) (2^n - 3)`.
    pub genus_closed_form: i64,
    pub genus_consistent: bool,
    /// `mu = 3 / 2^n` as an exact fraction.
    pub mu_num: u64,
    pub mu_den: u64,
    pub mu: f64,
    /// Non-flatness `6g / |E|` as an exact reduced fraction.
    pub nonflat_num: u64,
    pub nonflat_den: u64,
    pub nonflat: f64,
    /// The isometry group of the closed surface has order at least
    /// `2^n_gens_log2`.
    pub isometry_lower_log2: usize,
    /// Genus of the tube surface built from Y-pieces: `1 + |V|/2`.
    pub hat_genus: u64,
    /// The non-compact picture has one cusp per face.
    pub cusp_count: usize,
    /// Combinatorial boundary length of each cusp, `2^(n+1)`.
    pub cusp_length: u64,
    pub cusp_length_exceeds_2pi: bool,
    /// Which turn convention reproduces the `2^(n+1)`-gon faces.
    pub turn_convention: Turn,
    pub both_turns_match: bool,
    pub genus_left: i64,
    pub genus_right: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub face_data: Option<HyperbolicFaceData>,
    pub note: &'static str,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Builds the full report for the class-`k` tessellation; `t` is the
/// delta-wye transform with its `nblue` Cayley vertices first.
pub fn surface_report(
    pcp: &PcPresentation,
    t: &LabeledGraph,
    nblue: usize,
) -> Result<SurfaceReport, SurfaceError> {
    let k = pcp.class();
    let big_n = pcp.order_log2();
    let ord = pcp.element_order(&pcp.image(0));
    let n_k = ord.trailing_zeros();
    let expected_len = 1usize << (n_k + 1);

    let map = orient_tk(t, nblue)?;
    let left = trace_faces(&map, Turn::Left)?;
    let right = trace_faces(&map, Turn::Right)?;
    let left_match = left.uniform_length() == Some(expected_len);
    let right_match = right.uniform_length() == Some(expected_len);
    let (turn, chosen) = if left_match {
        (Turn::Left, &left)
    } else if right_match {
        (Turn::Right, &right)
    } else {
        return Err(SurfaceError::Structural(format!(
            "neither turn convention yields uniform {expected_len}-gon faces"
        )));
    };

    // Hurwitz genus 1 + (1 - 3/2^n) 2^(N-1), in exact integer arithmetic
    let genus_hurwitz = 1 + (1i64 << (big_n - 1)) - 3 * (1i64 << (big_n as u32 - n_k - 1));
    let genus_closed_form = 1 + (1i64 << (big_n as u32 - n_k - 1)) * ((1i64 << n_k) - 3);
    let genus = chosen.genus;

    let mu_den = 1u64 << n_k;
    let mu_g = gcd(3, mu_den);
    let edges = t.num_edges() as u64;
    let six_g = 6 * genus as u64;
    let nf_g = gcd(six_g.max(1), edges);
    let face_data = hyperbolic_face_data(n_k, big_n, genus).ok();

    Ok(SurfaceReport {
        k,
        n_gens_log2: big_n,
        gen_order_log2: n_k,
        vertices: t.n(),
        edges: t.num_edges(),
        faces: chosen.faces.len(),
        face_length: expected_len,
        genus,
        genus_hurwitz,
        genus_closed_form,
        genus_consistent: genus == genus_hurwitz && genus == genus_closed_form,
        mu_num: 3 / mu_g,
        mu_den: mu_den / mu_g,
        mu: 3.0 / mu_den as f64,
        nonflat_num: six_g / nf_g,
        nonflat_den: edges / nf_g,
        nonflat: six_g as f64 / edges as f64,
        isometry_lower_log2: big_n,
        hat_genus: hat_genus(t.n() as u64),
        cusp_count: chosen.faces.len(),
        cusp_length: expected_len as u64,
        cusp_length_exceeds_2pi: expected_len as f64 > 2.0 * std::f64::consts::PI,
        turn_convention: turn,
        both_turns_match: left_match && right_match,
        genus_left: left.genus,
        genus_right: right.genus,
        face_data,
        note: FINITE_WIDTH_NOTE,
    })
}

impl SurfaceReport {
    pub fn csv_header() -> &'static str {
        "k,N_k,n_k,V,E,F,face_len,genus,genus_hurwitz,ratio,hat_genus"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}/{},{}",
            self.k,
            self.n_gens_log2,
            self.gen_order_log2,
            self.vertices,
            self.edges,
            self.faces,
            self.face_length,
            self.genus,
            self.genus_hurwitz,
            self.nonflat_num,
            self.nonflat_den,
            self.hat_genus
        )
    }
}

/// Genus of the tube surface around a trivalent graph on `vertices`
/// vertices: `2g - 2 = |V|`.
pub fn hat_genus(vertices: u64) -> u64 {
    1 + vertices / 2
}

/// Tower data of the tube surfaces.
#[derive(Clone, Debug, Serialize)]
pub struct HatSurfaceReport {
    pub k: usize,
    pub genus: u64,
    /// Isometry group order lower bound `|V|/2`.
    pub isometry_lower: u64,
    /// Index of the covering from the next level, `|V_{k+1}| / |V_k|`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub covering_index_from_next: Option<u64>,
    pub index_is_power_of_two: Option<bool>,
}

pub fn hat_surface_report(
    k: usize,
    vertices: u64,
    vertices_next: Option<u64>,
) -> HatSurfaceReport {
    let index = vertices_next.map(|vn| vn / vertices);
    HatSurfaceReport {
        k,
        genus: hat_genus(vertices),
        isometry_lower: vertices / 2,
        covering_index_from_next: index,
        index_is_power_of_two: index.map(|i| i.is_power_of_two()),
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::tk;
    use super::*;
    use crate::group::{pquotient, tower_presentation, QuotientLimits};

    fn report(k: usize) -> SurfaceReport {
        let pcp = pquotient(&tower_presentation(), k, &QuotientLimits::default()).unwrap();
        let (t, nblue) = tk(k);
        surface_report(&pcp, &t, nblue).unwrap()
    }

    #[test]
    fn class_two_report() {
        let r = report(2);
        assert_eq!(
            (r.vertices, r.edges, r.faces, r.face_length, r.genus),
            (64, 96, 24, 8, 5)
        );
        assert!(r.genus_consistent);
        assert_eq!((r.mu_num, r.mu_den), (3, 4));
        assert_eq!((r.nonflat_num, r.nonflat_den), (5, 16));
        assert!((r.nonflat - 0.3125).abs() < 1e-15);
        assert_eq!(r.hat_genus, 33);
        assert_eq!(r.cusp_count, 24);
        assert!(r.cusp_length_exceeds_2pi);
        assert!(r.face_data.is_some());
    }

    #[test]
    fn class_one_report_is_spherical() {
        let r = report(1);
        assert_eq!((r.faces, r.face_length, r.genus), (6, 4, 0));
        assert!(r.genus_consistent);
        assert_eq!(r.hat_genus, 5);
        assert!(r.face_data.is_none());
        assert!(!r.cusp_length_exceeds_2pi);
    }

    #[test]
    fn closed_forms_hold_up_to_class_four() {
        let expected = [
            (1usize, 6usize, 4usize, 0i64),
            (2, 24, 8, 5),
            (3, 96, 8, 17),
            (4, 384, 16, 321),
        ];
        for (k, faces, flen, genus) in expected {
            let r = report(k);
            assert_eq!((r.faces, r.face_length, r.genus), (faces, flen, genus));
            assert!(r.genus_consistent, "genus mismatch at k = {k}");
        }
    }

    #[test]
    fn hat_tower_indices() {
        let r2 = hat_surface_report(2, 64, Some(256));
        assert_eq!(r2.genus, 33);
        assert_eq!(r2.covering_index_from_next, Some(4));
        assert_eq!(r2.index_is_power_of_two, Some(true));
        let r1 = hat_surface_report(1, 8, Some(64));
        assert_eq!(r1.genus, 5);
        assert_eq!(r1.covering_index_from_next, Some(8));
    }

    #[test]
    fn csv_row_shape() {
        let r = report(2);
        assert_eq!(
            r.csv_row(),
            "2,5,2,64,96,24,8,5,5,5/16,33".to_string()
        );
        assert!(SurfaceReport::csv_header().starts_with("k,"));
    }
}
