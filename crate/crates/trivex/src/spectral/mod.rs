//! Adjacency spectra: dense and iterative eigensolvers, spectral gaps,
//! Ramanujan verdicts and the exact relations between the spectra of `X_k`
//! and `T_k`.

mod dense;
mod lanczos;
mod relations;

pub use dense::{symmetric_eigen, tridiagonal_eigen, DenseEigen};
pub use lanczos::{extreme_eigenvalues, Extremes, LanczosOptions};
pub use relations::{
    lift_eigenvector, map_spectra, ramanujan_from_extremes, ramanujan_from_spectrum,
    spectral_gap, spectrum_containment, verify_squaring_identity, LiftOutcome, MapSpectraReport,
    SquaringMismatch,
};

use crate::graph::LabeledGraph;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("graph has {n} vertices, dense cap is {cap}")]
    SizeCap { n: usize, cap: usize },
    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence { what: String, iterations: usize },
    #[error("deflation vectors are not independent or leave no space")]
    BadDeflation,
    #[error("solver invariant violated: {0}")]
    SolverBug(String),
}

/// The adjacency operator of a multigraph in compressed row form;
/// multi-edges contribute their multiplicity.
#[derive(Clone, Debug)]
pub struct AdjacencyOperator {
    n: usize,
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl AdjacencyOperator {
    pub fn from_graph(g: &LabeledGraph) -> Self {
        let n = g.n();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::with_capacity(g.num_darts());
        offsets.push(0);
        for v in 0..n as u32 {
            targets.extend(g.neighbors(v));
            offsets.push(targets.len());
        }
        AdjacencyOperator {
            n,
            offsets,
            targets,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.n);
        assert_eq!(y.len(), self.n);
        for v in 0..self.n {
            let mut acc = 0.0;
            for &w in &self.targets[self.offsets[v]..self.offsets[v + 1]] {
                acc += x[w as usize];
            }
            y[v] = acc;
        }
    }

    pub fn dense_matrix(&self) -> Vec<f64> {
        let mut a = vec![0.0; self.n * self.n];
        for v in 0..self.n {
            for &w in &self.targets[self.offsets[v]..self.offsets[v + 1]] {
                a[v * self.n + w as usize] += 1.0;
            }
        }
        a
    }

    /// `<Ax, y> = <x, Ay>` on random probes; the row representation is
    /// symmetric by construction, this guards the construction itself.
    pub fn symmetry_probe(&self, trials: usize, seed: u64) -> f64 {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut worst = 0.0f64;
        for _ in 0..trials {
            let x: Vec<f64> = (0..self.n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let y: Vec<f64> = (0..self.n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let mut ax = vec![0.0; self.n];
            let mut ay = vec![0.0; self.n];
            self.matvec(&x, &mut ax);
            self.matvec(&y, &mut ay);
            let lhs: f64 = ax.iter().zip(&y).map(|(a, b)| a * b).sum();
            let rhs: f64 = x.iter().zip(&ay).map(|(a, b)| a * b).sum();
            worst = worst.max((lhs - rhs).abs());
        }
        worst
    }
}

pub const DEFAULT_DENSE_CAP: usize = 2048;

/// Eigenvalues only, ascending; no residual certificate (use
/// [`dense_spectrum`] when eigenvectors or certified residuals matter).
pub fn dense_eigenvalues(g: &LabeledGraph, cap: usize) -> Result<Vec<f64>, SpectralError> {
    let n = g.n();
    if n > cap {
        return Err(SpectralError::SizeCap { n, cap });
    }
    let op = AdjacencyOperator::from_graph(g);
    Ok(symmetric_eigen(&op.dense_matrix(), n, false)?.values)
}

/// Full spectrum of a graph with eigenvectors, residual-checked: every
/// eigenpair satisfies `|Av - lambda v| <= 1e-8 * max_degree`.
pub fn dense_spectrum(g: &LabeledGraph, cap: usize) -> Result<DenseEigen, SpectralError> {
    let n = g.n();
    if n > cap {
        return Err(SpectralError::SizeCap { n, cap });
    }
    let op = AdjacencyOperator::from_graph(g);
    let eig = symmetric_eigen(&op.dense_matrix(), n, true)?;
    let d = g.degree_sequence().last().copied().unwrap_or(0) as f64;
    let tol = 1e-8 * d.max(1.0);
    let mut ax = vec![0.0; n];
    for j in 0..n {
        let v = eig.vector(j).expect("vectors requested");
        op.matvec(&v, &mut ax);
        let r: f64 = ax
            .iter()
            .zip(&v)
            .map(|(a, x)| (a - eig.values[j] * x).powi(2))
            .sum::<f64>()
            .sqrt();
        if r > tol {
            return Err(SpectralError::SolverBug(format!(
                "eigenpair {j} residual {r:.3e} exceeds {tol:.3e}"
            )));
        }
    }
    Ok(eig)
}

/// Summary of one spectral computation, ready for serialization.
#[derive(Clone, Debug, Serialize)]
pub struct SpectrumReport {
    pub graph: String,
    pub n: usize,
    pub d: usize,
    /// Largest eigenvalue orthogonal to the trivial eigenvectors.
    pub lambda1: f64,
    pub lambda_min: f64,
    /// `d - lambda1`, the spectral gap.
    pub sigma: f64,
    pub ramanujan: bool,
    pub method: String,
    pub residual: f64,
    /// Observed stand-in for the universal constant: the largest nontrivial
    /// eigenvalue seen on this graph (never a proved bound).
    pub observed_c: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<Vec<f64>>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::testgraphs::*;

    #[test]
    fn known_small_spectra() {
        let eig = dense_spectrum(&complete(4), 2048).unwrap();
        let expect = [-1.0, -1.0, -1.0, 3.0];
        for (v, e) in eig.values.iter().zip(expect) {
            assert!((v - e).abs() < 1e-10);
        }
        let eig = dense_spectrum(&cube(), 2048).unwrap();
        let expect = [-3.0, -1.0, -1.0, -1.0, 1.0, 1.0, 1.0, 3.0];
        for (v, e) in eig.values.iter().zip(expect) {
            assert!((v - e).abs() < 1e-10);
        }
    }

    #[test]
    fn trace_identities() {
        let g = octahedron();
        let eig = dense_spectrum(&g, 2048).unwrap();
        let sum: f64 = eig.values.iter().sum();
        assert!(sum.abs() < 1e-9, "trace of a simple graph vanishes");
        let sq: f64 = eig.values.iter().map(|v| v * v).sum();
        assert!((sq - 2.0 * g.num_edges() as f64).abs() < 1e-8);
    }

    #[test]
    fn size_cap_is_enforced() {
        let g = complete(10);
        assert!(matches!(
            dense_spectrum(&g, 5),
            Err(SpectralError::SizeCap { .. })
        ));
    }

    #[test]
    fn operator_is_symmetric_on_probes() {
        let op = AdjacencyOperator::from_graph(&complete_bipartite(3, 4));
        assert!(op.symmetry_probe(20, 3) < 1e-12);
    }

    #[test]
    fn dense_and_lanczos_agree_on_lambda1() {
        // spot check of the two solver paths on the same graph
        let g = octahedron();
        let eig = dense_spectrum(&g, 2048).unwrap();
        let op = AdjacencyOperator::from_graph(&g);
        let ones = vec![1.0; g.n()];
        let ext = extreme_eigenvalues(&op, &[ones], &LanczosOptions::default()).unwrap();
        // octahedron spectrum: {-2,-2,0,0,0,4}; deflated max is 0
        assert!((ext.lambda_max - eig.values[g.n() - 2]).abs() < 1e-7);
        assert!((ext.lambda_min - eig.values[0]).abs() < 1e-7);
    }
}
