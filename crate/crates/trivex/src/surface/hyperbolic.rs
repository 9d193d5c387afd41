//! Hyperbolic metric data of the tessellations and the closed-form
//! eigenvalue and Cheeger bounds driven by the measured spectral gap.

use super::SurfaceError;
use serde::Serialize;
use std::f64::consts::PI;

/// Metric data of one face and one dual triangle of the tessellation with
/// generator order `2^n`: regular hyperbolic `2^(n+1)`-gons with interior
/// angle `2 pi / 3`, dual equilateral triangles with angle `pi / 2^n`.
/// Areas come from the angle defect.
#[derive(Clone, Debug, Serialize)]
pub struct HyperbolicFaceData {
    pub m: u64,
    pub interior_angle: f64,
    pub polygon_side: f64,
    pub polygon_circumradius: f64,
    pub polygon_area: f64,
    pub triangle_angle: f64,
    pub triangle_side: f64,
    pub triangle_altitude: f64,
    pub triangle_area: f64,
    /// `|F| * polygon area`, `2|G| * triangle area` and `2 pi (2g - 2)`;
    /// all three must agree.
    pub total_area_faces: f64,
    pub total_area_triangles: f64,
    pub total_area_gauss_bonnet: f64,
    /// Combinatorial boundary length of a face is `m >= 8 > 2 pi`, the
    /// large-cusp condition of the non-compact picture.
    pub cusp_length_ok: bool,
}

impl HyperbolicFaceData {
    pub fn consistent(&self, rel_tol: f64) -> bool {
        let a = self.total_area_faces;
        let b = self.total_area_triangles;
        let c = self.total_area_gauss_bonnet;
        let scale = a.abs().max(1.0);
        (a - b).abs() <= rel_tol * scale && (a - c).abs() <= rel_tol * scale
    }
}

/// Face data for the class-`k` tessellation: `n_k` is the generator-order
/// exponent, `n_gens_log2` the group-order exponent, `genus` the surface
/// genus. Requires `n_k >= 2`; the class-1 picture is spherical.
pub fn hyperbolic_face_data(
    n_k: u32,
    n_gens_log2: usize,
    genus: i64,
) -> Result<HyperbolicFaceData, SurfaceError> {
    if n_k < 2 {
        return Err(SurfaceError::NonHyperbolic(format!(
            "faces with angle 2 pi / 3 need at least 7 sides, got {}",
            1u64 << (n_k + 1)
        )));
    }
    let m = 1u64 << (n_k + 1);
    let mf = m as f64;
    let interior = 2.0 * PI / 3.0;
    let polygon_area = (mf - 2.0) * PI - mf * interior;
    let alpha = PI / (1u64 << n_k) as f64;
    let triangle_area = PI - 3.0 * alpha;
    // right-triangle relations at the face center: angles pi/m at the
    // center, interior/2 at the vertex
    let polygon_side = 2.0 * ((PI / mf).cos() / (interior / 2.0).sin()).acosh();
    let polygon_circumradius = (1.0 / (PI / mf).tan() / (interior / 2.0).tan()).acosh();
    let triangle_side = 2.0 * ((alpha / 2.0).cos() / alpha.sin()).acosh();
    let triangle_altitude = (alpha.cos() / (alpha / 2.0).sin()).acosh();
    let faces = 3u64 << (n_gens_log2 as u32 - n_k);
    let group = 1u64 << n_gens_log2;
    let data = HyperbolicFaceData {
        m,
        interior_angle: interior,
        polygon_side,
        polygon_circumradius,
        polygon_area,
        triangle_angle: alpha,
        triangle_side,
        triangle_altitude,
        triangle_area,
        total_area_faces: faces as f64 * polygon_area,
        total_area_triangles: 2.0 * group as f64 * triangle_area,
        total_area_gauss_bonnet: 2.0 * PI * (2 * genus - 2) as f64,
        cusp_length_ok: mf > 2.0 * PI,
    };
    if !data.consistent(1e-12) {
        return Err(SurfaceError::Structural(format!(
            "area cross-check failed: {} vs {} vs {}",
            data.total_area_faces, data.total_area_triangles, data.total_area_gauss_bonnet
        )));
    }
    Ok(data)
}

/// The quadrilateral bound: two equilateral triangles with interior angle
/// `alpha` glued along a side admit no short separating arc between
/// opposite sides. `cosh h = cos(alpha) / sin(alpha/2)` is the triangle
/// altitude, the trirectangle step gives
/// `cosh(l) >= cosh(h) sin(3 alpha / 2) = cos(alpha)(1 + 2 cos(alpha))`,
/// and the Neumann-eigenvalue ratio `l / pi` stays above 1/4.
#[derive(Clone, Debug, Serialize)]
pub struct QuadBound {
    pub alpha: f64,
    pub cosh_h: f64,
    pub h: f64,
    pub cosh_ell_lower: f64,
    pub ell_lower: f64,
    /// `ell_lower / pi`, a lower bound for the quadrilateral Cheeger ratio.
    pub cheeger_ratio_lower: f64,
}

pub fn quad_bound(alpha: f64) -> Result<QuadBound, SurfaceError> {
    if !(alpha > 0.0 && alpha <= PI / 4.0 + 1e-15) {
        return Err(SurfaceError::NonHyperbolic(format!(
            "alpha = {alpha} outside (0, pi/4]"
        )));
    }
    let cosh_h = alpha.cos() / (alpha / 2.0).sin();
    let cosh_ell = alpha.cos() * (1.0 + 2.0 * alpha.cos());
    let ell = cosh_ell.acosh();
    let ratio = ell / PI;
    let bound = QuadBound {
        alpha,
        cosh_h,
        h: cosh_h.acosh(),
        cosh_ell_lower: cosh_ell,
        ell_lower: ell,
        cheeger_ratio_lower: ratio,
    };
    if ratio <= 0.25 {
        return Err(SurfaceError::Structural(format!(
            "quadrilateral ratio {ratio} fell to 1/4; the bound is violated"
        )));
    }
    Ok(bound)
}

/// Laplace and Cheeger lower bounds for the two surface families, driven by
/// the measured spectral gap `sigma` of the trivalent graph.
#[derive(Clone, Debug, Serialize)]
pub struct LambdaBounds {
    pub sigma: f64,
    /// `(1/4) * sigma / (24 + sigma)`: first positive Laplace eigenvalue of
    /// the closed tessellated surface.
    pub lambda1_closed_lower: f64,
    /// `sigma / 2`: graph Cheeger constant.
    pub h_graph_lower: f64,
    /// `(sigma/2) / (144 pi^2)`: first positive eigenvalue of the tube
    /// surface built from Y-pieces.
    pub lambda1_tube_lower: f64,
    pub note: &'static str,
}

/// Sign note for the Cheeger route: the trivalent spectrum bound is
/// `lambda1 <= sqrt(C + 3)`, so `h0` uses `C + 3`; a `C - 3` variant is a
/// misprint and would even be undefined for observed `C < 3`.
pub const C_PLUS_3_NOTE: &str =
    "h0 = (3 - sqrt(C + 3))/2 with C + 3 under the root, forced by lambda1 <= sqrt(C + 3)";

pub fn surface_lambda_bounds(sigma: f64) -> LambdaBounds {
    let h = sigma / 2.0;
    LambdaBounds {
        sigma,
        lambda1_closed_lower: 0.25 * sigma / (24.0 + sigma),
        h_graph_lower: h,
        lambda1_tube_lower: h / (144.0 * PI * PI),
        note: C_PLUS_3_NOTE,
    }
}

/// `h0 = (3 - sqrt(C + 3)) / 2` from an observed largest nontrivial
/// 6-valent eigenvalue `C`.
pub fn h0_from_observed_c(c: f64) -> f64 {
    (3.0 - (c + 3.0).sqrt()) / 2.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn face_data_at_class_two() {
        // octagons of area 2 pi / 3, triangles of area pi / 4, total 16 pi
        let d = hyperbolic_face_data(2, 5, 5).unwrap();
        assert_eq!(d.m, 8);
        assert!((d.polygon_area - 2.0 * PI / 3.0).abs() < 1e-14);
        assert!((d.triangle_area - PI / 4.0).abs() < 1e-14);
        assert!((d.total_area_faces - 16.0 * PI).abs() < 1e-12);
        assert!((d.total_area_triangles - 16.0 * PI).abs() < 1e-12);
        assert!((d.total_area_gauss_bonnet - 16.0 * PI).abs() < 1e-12);
        assert!(d.cusp_length_ok);
    }

    #[test]
    fn class_one_is_not_hyperbolic() {
        assert!(matches!(
            hyperbolic_face_data(1, 2, 0),
            Err(SurfaceError::NonHyperbolic(_))
        ));
    }

    #[test]
    fn quad_bound_at_pi_over_4() {
        let q = quad_bound(PI / 4.0).unwrap();
        // cosh h = cos(pi/4)/sin(pi/8)
        assert!((q.cosh_h - 1.8477590650225735).abs() < 1e-12);
        // cosh l = (1 + sqrt 2)/sqrt 2, l = 1.12838...
        assert!((q.cosh_ell_lower - (1.0 + 2f64.sqrt()) / 2f64.sqrt()).abs() < 1e-12);
        assert!((q.ell_lower - 1.12838).abs() < 1e-5);
        assert!(q.cheeger_ratio_lower > 0.25);
    }

    #[test]
    fn trirectangle_route_agrees() {
        // cosh(h) sin(3a/2) = cos(a)(1 + 2 cos(a)) identically
        for j in 2..=20 {
            let a = PI / (1u64 << j) as f64;
            let lhs = (a.cos() / (a / 2.0).sin()) * (1.5 * a).sin();
            let rhs = a.cos() * (1.0 + 2.0 * a.cos());
            assert!((lhs - rhs).abs() < 1e-12);
            let q = quad_bound(a).unwrap();
            assert!(q.cheeger_ratio_lower > 0.25, "ratio dipped at j = {j}");
        }
    }

    #[test]
    fn alpha_range_is_enforced() {
        assert!(quad_bound(0.0).is_err());
        assert!(quad_bound(PI / 3.0).is_err());
    }

    #[test]
    fn lambda_bounds_at_the_smallest_gap() {
        // sigma(T_2) = 2 - sqrt 2
        let sigma = 2.0 - 2f64.sqrt();
        let b = surface_lambda_bounds(sigma);
        assert!((b.lambda1_closed_lower - 0.0059563).abs() < 1e-6);
        assert!((b.h_graph_lower - 0.2928932188134524).abs() < 1e-14);
        assert!((b.lambda1_tube_lower - 2.0609e-4).abs() < 1e-6);
        // degenerate gap gives vanishing bounds
        let z = surface_lambda_bounds(0.0);
        assert_eq!(z.lambda1_closed_lower, 0.0);
        assert_eq!(z.h_graph_lower, 0.0);
        assert_eq!(z.lambda1_tube_lower, 0.0);
    }

    #[test]
    fn h0_uses_c_plus_3() {
        // an observed C < 3 would make a C - 3 variant undefined
        let h0 = h0_from_observed_c(2.8284271247461903);
        assert!(h0 > 0.0 && h0 < 0.3);
        assert!((h0 - (3.0 - (5.82842712474619f64).sqrt()) / 2.0).abs() < 1e-15);
    }
}
