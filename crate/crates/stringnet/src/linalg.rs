//! Small dense helpers over `nalgebra`.

use nalgebra::DMatrix;

use crate::C64;

pub type CMat = DMatrix<C64>;

pub fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

pub fn one() -> C64 {
    C64::new(1.0, 0.0)
}

/// Singular values, largest first.
pub fn singular_values(m: &CMat) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    s
}

/// Numerical rank with a cutoff relative to the largest singular value.
pub fn rank(m: &CMat, rel: f64) -> usize {
    let s = singular_values(m);
    match s.first() {
        Some(&top) if top > 0.0 => s.iter().filter(|&&x| x > rel * top).count(),
        _ => 0,
    }
}

/// Orthonormal basis of the right null space, as columns.
pub fn null_space(m: &CMat, rel: f64) -> CMat {
    let n = m.ncols();
    // pad to at least square so the SVD returns a full set of right vectors
    let rows = m.nrows().max(n);
    let mut sq = CMat::zeros(rows, n);
    sq.view_mut((0, 0), (m.nrows(), n)).copy_from(m);
    let svd = sq.svd(false, true);
    let vt = svd.v_t.expect("v_t");
    let top = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let cols: Vec<usize> = (0..n).filter(|&k| svd.singular_values[k] <= rel * top.max(1.0)).collect();
    let mut out = CMat::zeros(n, cols.len());
    for (j, &k) in cols.iter().enumerate() {
        let row = vt.row(k).adjoint();
        out.set_column(j, &row);
    }
    out
}

/// Least-squares solution of `a x = b` and the residual norm `‖a x − b‖`.
pub fn least_squares(a: &CMat, b: &CMat) -> (CMat, f64) {
    let svd = a.clone().svd(true, true);
    let x = svd.solve(b, 1e-12).expect("svd solve");
    let r = (a * &x - b).norm();
    (x, r)
}

/// Largest entry modulus.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &CMat) -> Vec<f64> {
    let mut v: Vec<f64> = m.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}
