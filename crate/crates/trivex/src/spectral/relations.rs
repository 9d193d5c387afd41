//! The exact spectral relations tying `X_k` to its delta-wye transform:
//! the squaring identity on white vertices, the eigenvalue correspondence
//! `mu = lambda^2 - 3`, eigenfunction lifting, spectrum containment along
//! covers, spectral gaps and Ramanujan verdicts.

use super::{AdjacencyOperator, SpectralError};
use crate::graph::LabeledGraph;
use serde::Serialize;

/// Witness of a failed squaring identity check.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SquaringMismatch {
    pub white: u32,
    pub other: u32,
    pub two_paths_minus_3: i64,
    pub adjacency: i64,
}

/// Exact integer check of `A_X = (A_T)^2 - 3` restricted to the white
/// vertices `0..nwhite` of the transform `t` of `x`. Multigraph
/// multiplicities count on both sides.
pub fn verify_squaring_identity(
    x: &LabeledGraph,
    t: &LabeledGraph,
    nwhite: usize,
) -> Result<(), Box<SquaringMismatch>> {
    assert_eq!(x.n(), nwhite);
    let mut row = vec![0i64; nwhite];
    for v in 0..nwhite as u32 {
        let mut touched: Vec<u32> = Vec::new();
        for g in t.neighbors(v) {
            for u in t.neighbors(g) {
                if (u as usize) < nwhite {
                    if row[u as usize] == 0 {
                        touched.push(u);
                    }
                    row[u as usize] += 1;
                }
            }
        }
        row[v as usize] -= t.degree(v) as i64;
        let mut expect = vec![0i64; nwhite];
        for u in x.neighbors(v) {
            expect[u as usize] += 1;
        }
        for &u in touched.iter().chain(std::iter::once(&v)) {
            if row[u as usize] != expect[u as usize] {
                let m = SquaringMismatch {
                    white: v,
                    other: u,
                    two_paths_minus_3: row[u as usize],
                    adjacency: expect[u as usize],
                };
                return Err(Box::new(m));
            }
        }
        for u in 0..nwhite {
            if expect[u] != 0 && !touched.contains(&(u as u32)) && u != v as usize {
                let m = SquaringMismatch {
                    white: v,
                    other: u as u32,
                    two_paths_minus_3: 0,
                    adjacency: expect[u],
                };
                return Err(Box::new(m));
            }
        }
        for &u in &touched {
            row[u as usize] = 0;
        }
        row[v as usize] = 0;
    }
    Ok(())
}

/// One multiplicity-bookkeeping row of the eigenvalue correspondence.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ClusterRow {
    pub mu: f64,
    pub mult_x: usize,
    pub mult_t_plus: usize,
    pub mult_t_minus: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct MapSpectraReport {
    /// `max_i |t_i + t_{n-1-i}|` over the sorted transform spectrum.
    pub symmetry_defect: f64,
    pub min_x: f64,
    /// Every cluster satisfied its multiplicity constraints and every
    /// transform eigenvalue was accounted for.
    pub bookkeeping_ok: bool,
    pub accounted_t: usize,
    pub total_t: usize,
    pub clusters: Vec<ClusterRow>,
}

/// Verifies the eigenvalue correspondence between `spec_x` and `spec_t`
/// (both ascending): each eigenvalue `mu != -3` of multiplicity `m` must
/// appear in the transform spectrum as `+-sqrt(mu+3)` with multiplicity
/// `m` on each side, and `mu = -3` as `0` with multiplicity `2m`.
pub fn map_spectra(spec_x: &[f64], spec_t: &[f64], tol: f64) -> MapSpectraReport {
    let nt = spec_t.len();
    let mut symmetry_defect = 0.0f64;
    for i in 0..nt / 2 {
        symmetry_defect = symmetry_defect.max((spec_t[i] + spec_t[nt - 1 - i]).abs());
    }
    let min_x = spec_x.first().copied().unwrap_or(0.0);

    let count_near = |target: f64| -> usize {
        spec_t.iter().filter(|&&v| (v - target).abs() <= tol).count()
    };
    let mut clusters = Vec::new();
    let mut accounted = 0usize;
    let mut ok = true;
    let mut i = 0;
    while i < spec_x.len() {
        let mut j = i + 1;
        while j < spec_x.len() && spec_x[j] - spec_x[j - 1] <= tol {
            j += 1;
        }
        let mu = spec_x[i..j].iter().sum::<f64>() / (j - i) as f64;
        let mult_x = j - i;
        let (tp, tm) = if (mu + 3.0).abs() <= tol {
            let zeros = count_near(0.0);
            accounted += zeros;
            ok &= zeros == 2 * mult_x;
            (zeros, zeros)
        } else {
            let lambda = (mu + 3.0).max(0.0).sqrt();
            let tp = count_near(lambda);
            let tm = count_near(-lambda);
            accounted += tp + tm;
            ok &= tp == mult_x && tm == mult_x;
            (tp, tm)
        };
        clusters.push(ClusterRow {
            mu,
            mult_x,
            mult_t_plus: tp,
            mult_t_minus: tm,
        });
        i = j;
    }
    ok &= accounted == nt;
    MapSpectraReport {
        symmetry_defect,
        min_x,
        bookkeeping_ok: ok,
        accounted_t: accounted,
        total_t: nt,
        clusters,
    }
}

/// Result of lifting one eigenpair of the base graph to the transform.
#[derive(Clone, Debug)]
pub enum LiftOutcome {
    /// `mu != -3`: both lifted vectors with their residuals at
    /// `+-sqrt(mu+3)`.
    Lifted {
        lambda: f64,
        residual_plus: f64,
        residual_minus: f64,
    },
    /// `mu = -3`: extension by zero; an eigenvector of eigenvalue 0 exactly
    /// when all triangle sums vanish.
    KernelExtension {
        max_triangle_sum: f64,
        extension_residual: f64,
        is_eigenvector: bool,
    },
}

/// Lifts an eigenpair `(f, mu)` of the base graph to the transform `t`
/// whose white vertices `0..nwhite` carry `f`.
pub fn lift_eigenvector(
    t: &LabeledGraph,
    nwhite: usize,
    f: &[f64],
    mu: f64,
    tol: f64,
) -> Result<LiftOutcome, SpectralError> {
    assert_eq!(f.len(), nwhite);
    if mu < -3.0 - 1e-8 {
        return Err(SpectralError::SolverBug(format!(
            "eigenvalue {mu} below -3 is impossible here"
        )));
    }
    let op = AdjacencyOperator::from_graph(t);
    let n = t.n();
    let green_sum = |g: u32| -> f64 { t.neighbors(g).map(|w| f[w as usize]).sum() };
    if (mu + 3.0).abs() <= tol {
        let mut big = vec![0.0; n];
        big[..nwhite].copy_from_slice(f);
        let mut out = vec![0.0; n];
        op.matvec(&big, &mut out);
        let extension_residual = out.iter().map(|v| v * v).sum::<f64>().sqrt();
        let max_triangle_sum = (nwhite..n)
            .map(|g| green_sum(g as u32).abs())
            .fold(0.0f64, f64::max);
        return Ok(LiftOutcome::KernelExtension {
            max_triangle_sum,
            extension_residual,
            is_eigenvector: extension_residual <= tol,
        });
    }
    let lambda = (mu + 3.0).sqrt();
    let residual = |sign: f64| -> f64 {
        let mut big = vec![0.0; n];
        big[..nwhite].copy_from_slice(f);
        for g in nwhite..n {
            big[g] = sign / lambda * green_sum(g as u32);
        }
        let mut out = vec![0.0; n];
        op.matvec(&big, &mut out);
        let norm = big.iter().map(|v| v * v).sum::<f64>().sqrt();
        out.iter()
            .zip(&big)
            .map(|(a, v)| (a - sign * lambda * v).powi(2))
            .sum::<f64>()
            .sqrt()
            / norm
    };
    Ok(LiftOutcome::Lifted {
        lambda,
        residual_plus: residual(1.0),
        residual_minus: residual(-1.0),
    })
}

/// `sigma = d - lambda1` for a connected `d`-regular graph, cross-checked
/// against the Rayleigh quotient of the supplied eigenvector. Returns
/// `(sigma, rayleigh_defect, mean_defect)`.
pub fn spectral_gap(
    g: &LabeledGraph,
    lambda1: f64,
    eigvec: &[f64],
) -> Result<(f64, f64, f64), SpectralError> {
    let d = g
        .is_regular()
        .ok_or_else(|| SpectralError::SolverBug("spectral gap needs a regular graph".into()))?;
    let sigma = d as f64 - lambda1;
    let norm2: f64 = eigvec.iter().map(|v| v * v).sum();
    let mut dirichlet = 0.0;
    for (u, v) in g.edge_list() {
        dirichlet += (eigvec[u as usize] - eigvec[v as usize]).powi(2);
    }
    let rayleigh_defect = (dirichlet / norm2 - sigma).abs();
    let mean_defect = eigvec.iter().sum::<f64>().abs() / (g.n() as f64).sqrt();
    Ok((sigma, rayleigh_defect, mean_defect))
}

const RAMANUJAN_SLACK: f64 = 1e-9;

/// A `d`-regular graph is Ramanujan when every eigenvalue besides `+-d`
/// lies in `[-2 sqrt(d-1), 2 sqrt(d-1)]`.
pub fn ramanujan_from_spectrum(values: &[f64], d: usize) -> bool {
    let bound = 2.0 * ((d - 1) as f64).sqrt() + RAMANUJAN_SLACK;
    values
        .iter()
        .filter(|&&v| (v - d as f64).abs() > RAMANUJAN_SLACK && (v + d as f64).abs() > RAMANUJAN_SLACK)
        .all(|&v| v.abs() <= bound)
}

/// Verdict from the extreme nontrivial eigenvalues only (iterative path).
pub fn ramanujan_from_extremes(lambda1: f64, lambda_min: f64, d: usize) -> bool {
    let bound = 2.0 * ((d - 1) as f64).sqrt() + RAMANUJAN_SLACK;
    lambda1.abs() <= bound && lambda_min.abs() <= bound
}

/// Multiset inclusion of sorted spectra within `tol`, by greedy matching.
pub fn spectrum_containment(small: &[f64], big: &[f64], tol: f64) -> bool {
    let mut j = 0;
    'outer: for &v in small {
        while j < big.len() {
            if (big[j] - v).abs() <= tol {
                j += 1;
                continue 'outer;
            }
            if big[j] > v + tol {
                return false;
            }
            j += 1;
        }
        return false;
    }
    true
}
