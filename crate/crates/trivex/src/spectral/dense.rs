//! Dense symmetric eigensolver: Householder tridiagonalization followed by
//! implicit-shift QL sweeps, the classic EISPACK pair, with optional
//! accumulation of the orthogonal transformations.

use super::SpectralError;

/// Eigenvalues (ascending) and, on request, the matching orthonormal
/// eigenvectors as columns of a row-major `n x n` matrix.
#[derive(Clone, Debug)]
pub struct DenseEigen {
    pub values: Vec<f64>,
    pub vectors: Option<Vec<f64>>,
}

impl DenseEigen {
    pub fn vector(&self, j: usize) -> Option<Vec<f64>> {
        let n = self.values.len();
        self.vectors
            .as_ref()
            .map(|z| (0..n).map(|k| z[k * n + j]).collect())
    }
}

/// Full eigendecomposition of a symmetric matrix given row-major.
pub fn symmetric_eigen(a: &[f64], n: usize, want_vectors: bool) -> Result<DenseEigen, SpectralError> {
    assert_eq!(a.len(), n * n);
    if n == 0 {
        return Ok(DenseEigen {
            values: vec![],
            vectors: want_vectors.then(Vec::new),
        });
    }
    let mut z = a.to_vec();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tred2(&mut z, n, &mut d, &mut e, want_vectors);
    tql2(&mut d, &mut e, &mut z, n, want_vectors)?;
    // sort ascending, carrying columns along
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let vectors = want_vectors.then(|| {
        let mut v = vec![0.0; n * n];
        for (newj, &oldj) in order.iter().enumerate() {
            for k in 0..n {
                v[k * n + newj] = z[k * n + oldj];
            }
        }
        v
    });
    Ok(DenseEigen { values, vectors })
}

/// Eigenvalues of a symmetric tridiagonal matrix (`diag`, `sub`), plus the
/// eigenvector matrix when requested. `sub[i]` couples `i` and `i+1`.
pub fn tridiagonal_eigen(
    diag: &[f64],
    sub: &[f64],
    want_vectors: bool,
) -> Result<DenseEigen, SpectralError> {
    let n = diag.len();
    assert_eq!(sub.len(), n.saturating_sub(1));
    let mut d = diag.to_vec();
    // tql2 expects e[i] to couple i-1 and i, shifted down afterwards
    let mut e = vec![0.0; n];
    e[1..n].copy_from_slice(sub);
    let mut z = vec![0.0; if want_vectors { n * n } else { 0 }];
    if want_vectors {
        for i in 0..n {
            z[i * n + i] = 1.0;
        }
    }
    tql2(&mut d, &mut e, &mut z, n, want_vectors)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let vectors = want_vectors.then(|| {
        let mut v = vec![0.0; n * n];
        for (newj, &oldj) in order.iter().enumerate() {
            for k in 0..n {
                v[k * n + newj] = z[k * n + oldj];
            }
        }
        v
    });
    Ok(DenseEigen { values, vectors })
}

/// Householder reduction to tridiagonal form; on exit `d` holds the
/// diagonal, `e[1..]` the subdiagonal, and `z` the accumulated orthogonal
/// matrix when `accumulate` is set.
fn tred2(z: &mut [f64], n: usize, d: &mut [f64], e: &mut [f64], accumulate: bool) {
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let scale: f64 = (0..=l).map(|k| z[i * n + k].abs()).sum();
            if scale == 0.0 {
                e[i] = z[i * n + l];
            } else {
                for k in 0..=l {
                    z[i * n + k] /= scale;
                    h += z[i * n + k] * z[i * n + k];
                }
                let f = z[i * n + l];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                z[i * n + l] = f - g;
                let mut fsum = 0.0;
                for j in 0..=l {
                    if accumulate {
                        z[j * n + i] = z[i * n + j] / h;
                    }
                    let mut g = 0.0;
                    for k in 0..=j {
                        g += z[j * n + k] * z[i * n + k];
                    }
                    for k in j + 1..=l {
                        g += z[k * n + j] * z[i * n + k];
                    }
                    e[j] = g / h;
                    fsum += e[j] * z[i * n + j];
                }
                let hh = fsum / (h + h);
                for j in 0..=l {
                    let f = z[i * n + j];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        z[j * n + k] -= f * e[k] + g * z[i * n + k];
                    }
                }
            }
        } else {
            e[i] = z[i * n + l];
        }
        d[i] = h;
    }
    if accumulate {
        d[0] = 0.0;
    }
    e[0] = 0.0;
    if accumulate {
        for i in 0..n {
            let l = i;
            if d[i] != 0.0 {
                for j in 0..l {
                    let mut g = 0.0;
                    for k in 0..l {
                        g += z[i * n + k] * z[k * n + j];
                    }
                    for k in 0..l {
                        z[k * n + j] -= g * z[k * n + i];
                    }
                }
            }
            d[i] = z[i * n + i];
            z[i * n + i] = 1.0;
            for j in 0..l {
                z[j * n + i] = 0.0;
                z[i * n + j] = 0.0;
            }
        }
    } else {
        for i in 0..n {
            d[i] = z[i * n + i];
        }
    }
}

/// Implicit-shift QL on a tridiagonal matrix; rotations are applied to the
/// columns of `z` when `accumulate` is set.
fn tql2(
    d: &mut [f64],
    e: &mut [f64],
    z: &mut [f64],
    n: usize,
    accumulate: bool,
) -> Result<(), SpectralError> {
    if n == 0 {
        return Ok(());
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 64 {
                return Err(SpectralError::NoConvergence {
                    what: "QL sweep".into(),
                    iterations: iter,
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if accumulate {
                    for k in 0..n {
                        f = z[k * n + i + 1];
                        z[k * n + i + 1] = s * z[k * n + i] + c * f;
                        z[k * n + i] = c * z[k * n + i] - s * f;
                    }
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}
