//! Dense symmetric eigen-decomposition and eigenspace projections.
//!
//! The solver is a cyclic Jacobi iteration: simple, deterministic, and
//! accurate to working precision for the symmetric matrices this crate
//! meets (adjacency matrices up to a couple thousand vertices). Keeping it
//! in-tree avoids a linear-algebra dependency whose pivoting or threading
//! could perturb golden outputs.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::gw::Embedding;

/// Largest matrix the dense path accepts.
pub const DENSE_BUDGET: usize = 2048;

const SWEEP_LIMIT: usize = 100;

/// Row-major square matrix.
#[derive(Debug, Clone)]
pub struct SquareMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    pub fn zeros(n: usize) -> SquareMatrix {
        SquareMatrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> SquareMatrix {
        let mut m = SquareMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.data[i * n + j] = f(i, j);
            }
        }
        m
    }

    /// Weighted adjacency matrix of a graph.
    pub fn adjacency(g: &Graph) -> SquareMatrix {
        SquareMatrix {
            n: g.n(),
            data: g.adjacency_matrix(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    /// Induced infinity norm (maximum absolute row sum).
    pub fn inf_norm(&self) -> f64 {
        (0..self.n)
            .map(|i| self.data[i * self.n..(i + 1) * self.n].iter().map(|x| x.abs()).sum())
            .fold(0.0, f64::max)
    }
}

/// Full spectrum of a symmetric matrix: eigenvalues ascending, matching
/// orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    /// `eigenvectors[i]` is the unit eigenvector for `eigenvalues[i]`.
    pub eigenvectors: Vec<Vec<f64>>,
}

impl Spectrum {
    /// Groups eigenvalues whose gaps are at most `cluster_tol`, returning
    /// `(cluster mean, multiplicity)` pairs in ascending order.
    pub fn multiplicities(&self, cluster_tol: f64) -> Vec<(f64, usize)> {
        let mut out: Vec<(f64, usize)> = Vec::new();
        for &ev in &self.eigenvalues {
            match out.last_mut() {
                Some((mean, count)) if (ev - *mean).abs() <= cluster_tol => {
                    *mean = (*mean * *count as f64 + ev) / (*count as f64 + 1.0);
                    *count += 1;
                }
                _ => out.push((ev, 1)),
            }
        }
        out
    }
}

fn default_tol(a: &SquareMatrix) -> f64 {
    1e-10 * a.n() as f64 * a.inf_norm().max(1.0)
}

/// Cluster width used when deciding eigenvalue multiplicities.
pub fn default_cluster_tol(a: &SquareMatrix) -> f64 {
    1e-6 * a.inf_norm().max(1.0)
}

/// Eigen-decomposition by cyclic Jacobi sweeps with the default tolerance
/// `10⁻¹⁰ · n · ‖A‖∞`.
pub fn symmetric_eigen(a: &SquareMatrix) -> Result<Spectrum> {
    symmetric_eigen_with_tol(a, default_tol(a))
}

pub fn symmetric_eigen_with_tol(a: &SquareMatrix, tol: f64) -> Result<Spectrum> {
    let n = a.n();
    if n == 0 {
        return Err(Error::InvalidArgument("empty matrix".into()));
    }
    if n > DENSE_BUDGET {
        return Err(Error::Budget(format!(
            "matrix dimension {n} exceeds the dense budget {DENSE_BUDGET}"
        )));
    }
    for i in 0..n {
        for j in i + 1..n {
            if (a.get(i, j) - a.get(j, i)).abs() > tol {
                return Err(Error::InvalidArgument(format!(
                    "matrix is asymmetric at ({i}, {j})"
                )));
            }
        }
    }

    let mut m = a.data.clone();
    // Symmetrize exactly so rotations preserve symmetry bit for bit.
    for i in 0..n {
        for j in i + 1..n {
            let avg = 0.5 * (m[i * n + j] + m[j * n + i]);
            m[i * n + j] = avg;
            m[j * n + i] = avg;
        }
    }
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }

    let off = |m: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                s += m[i * n + j] * m[i * n + j];
            }
        }
        (2.0 * s).sqrt()
    };

    let mut converged = false;
    for _ in 0..SWEEP_LIMIT {
        if off(&m) <= tol {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = m[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[q * n + q] - m[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // M ← Gᵀ M G for the rotation G in the (p, q) plane.
                for i in 0..n {
                    let mip = m[i * n + p];
                    let miq = m[i * n + q];
                    m[i * n + p] = c * mip - s * miq;
                    m[i * n + q] = s * mip + c * miq;
                }
                for j in 0..n {
                    let mpj = m[p * n + j];
                    let mqj = m[q * n + j];
                    m[p * n + j] = c * mpj - s * mqj;
                    m[q * n + j] = s * mpj + c * mqj;
                }
                for i in 0..n {
                    let vip = v[i * n + p];
                    let viq = v[i * n + q];
                    v[i * n + p] = c * vip - s * viq;
                    v[i * n + q] = s * vip + c * viq;
                }
            }
        }
    }
    if !converged && off(&m) > tol {
        return Err(Error::NoConvergence(format!(
            "Jacobi iteration still off by {} after {SWEEP_LIMIT} sweeps",
            off(&m)
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[i * n + i].partial_cmp(&m[j * n + j]).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| m[i * n + i]).collect();
    let eigenvectors: Vec<Vec<f64>> = order
        .iter()
        .map(|&col| (0..n).map(|row| v[row * n + col]).collect())
        .collect();
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
    })
}

/// Smallest eigenvalue of a symmetric matrix.
pub fn min_eigenvalue(a: &SquareMatrix) -> Result<f64> {
    Ok(symmetric_eigen(a)?.eigenvalues[0])
}

/// Rows of the orthonormal basis of the eigenspace nearest `target`
/// (eigenvalues within `cluster_tol` are merged into one space), plus the
/// space's dimension. Row `i` is vertex i's coordinate vector; its squared
/// norm is the projector diagonal `P_ii`.
pub fn eigenspace_rows(
    a: &SquareMatrix,
    target: f64,
    cluster_tol: f64,
) -> Result<(Vec<Vec<f64>>, usize)> {
    let spectrum = symmetric_eigen(a)?;
    let picked: Vec<usize> = (0..spectrum.eigenvalues.len())
        .filter(|&i| (spectrum.eigenvalues[i] - target).abs() <= cluster_tol)
        .collect();
    if picked.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "no eigenvalue within {cluster_tol} of {target}"
        )));
    }
    let r = picked.len();
    let n = a.n();
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| picked.iter().map(|&j| spectrum.eigenvectors[j][i]).collect())
        .collect();
    Ok((rows, r))
}

/// Unit-vector embedding from the eigenspace nearest `target`: projector
/// rows normalized individually. Fails on a (near) zero-norm row rather
/// than fabricating a direction.
pub fn eigenspace_embedding(a: &SquareMatrix, target: f64, cluster_tol: f64) -> Result<Embedding> {
    let (mut rows, _r) = eigenspace_rows(a, target, cluster_tol)?;
    for (i, row) in rows.iter_mut().enumerate() {
        let norm = row.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm < 1e-8 {
            return Err(Error::InvalidArgument(format!(
                "projector row {i} has norm {norm:.2e}; vertex does not meet the eigenspace"
            )));
        }
        for x in row.iter_mut() {
            *x /= norm;
        }
    }
    Embedding::new(rows)
}
