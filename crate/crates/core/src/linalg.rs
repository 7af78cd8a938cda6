// Thin wrappers over nalgebra's dense decompositions.

use nalgebra::DMatrix;

use crate::C64;

/// Eigen-decomposition of a Hermitian matrix with eigenvalues sorted ascending.
#[derive(Debug, Clone)]
pub(crate) struct HermitianEigen {
    pub values: Vec<f64>,
    /// Column `j` is the unit eigenvector for `values[j]`.
    pub vectors: DMatrix<C64>,
}

pub(crate) fn hermitian_eigen(m: &DMatrix<C64>) -> HermitianEigen {
    let n = m.nrows();
    if n == 0 {
        return HermitianEigen { values: Vec::new(), vectors: DMatrix::zeros(0, 0) };
    }
    // Symmetrize first so round-off asymmetry never reaches the solver.
    let sym = DMatrix::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    HermitianEigen { values, vectors }
}

/// Eigenvalues of a general complex square matrix via the complex Schur form.
pub(crate) fn complex_eigenvalues(m: DMatrix<C64>) -> Option<Vec<C64>> {
    let n = m.nrows();
    if n == 0 {
        return Some(Vec::new());
    }
    if n == 1 {
        return Some(vec![m[(0, 0)]]);
    }
    m.try_schur(f64::EPSILON, 10_000)?.eigenvalues().map(|v| v.iter().copied().collect())
}

/// Numerical rank from singular values relative to the largest one.
pub(crate) fn rank(m: &DMatrix<C64>, rel_tol: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.clone().singular_values();
    let max = sv.iter().cloned().fold(0.0_f64, f64::max);
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * max).count()
}
