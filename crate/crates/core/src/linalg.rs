//! Small dense-matrix helpers on top of `faer`.

use faer::Side;

use crate::{CMat, Error, Result, C64};

pub fn zeros(n: usize) -> CMat {
    CMat::zeros(n, n)
}

pub fn identity(n: usize) -> CMat {
    CMat::from_fn(n, n, |i, j| if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })
}

pub fn adjoint(m: &CMat) -> CMat {
    CMat::from_fn(m.ncols(), m.nrows(), |i, j| m[(j, i)].conj())
}

pub fn transpose(m: &CMat) -> CMat {
    CMat::from_fn(m.ncols(), m.nrows(), |i, j| m[(j, i)])
}

pub fn conj(m: &CMat) -> CMat {
    CMat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)].conj())
}

pub fn scale(m: &CMat, s: C64) -> CMat {
    CMat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] * s)
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (ar, ac) = (a.nrows(), a.ncols());
    let (br, bc) = (b.nrows(), b.ncols());
    CMat::from_fn(ar * br, ac * bc, |i, j| a[(i / br, j / bc)] * b[(i % br, j % bc)])
}

pub fn trace(m: &CMat) -> C64 {
    (0..m.nrows().min(m.ncols())).map(|i| m[(i, i)]).sum()
}

/// `Tr[a · b]` without forming the product.
pub fn trace_product(a: &CMat, b: &CMat) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..a.nrows() {
        for k in 0..a.ncols() {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

pub fn max_abs(m: &CMat) -> f64 {
    let mut best = 0.0f64;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            best = best.max(m[(i, j)].norm());
        }
    }
    best
}

/// `max |m - m†|`.
pub fn hermitian_deviation(m: &CMat) -> f64 {
    let mut dev = 0.0f64;
    for j in 0..m.ncols() {
        for i in 0..=j.min(m.nrows() - 1) {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

pub fn hermitian_part(m: &CMat) -> CMat {
    CMat::from_fn(m.nrows(), m.ncols(), |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5)
}

/// Eigen-decomposition of a Hermitian matrix; eigenvalues ascending.
pub fn eigh(m: &CMat) -> Result<(Vec<f64>, CMat)> {
    let evd = m.self_adjoint_eigen(Side::Lower).map_err(|_| Error::EigenFailure)?;
    let s = evd.S().column_vector();
    let values = (0..m.nrows()).map(|i| s[i].re).collect();
    Ok((values, evd.U().to_owned()))
}

/// Smallest eigenvalue of the Hermitian part of `m`.
pub fn min_eigenvalue(m: &CMat) -> Result<f64> {
    let (values, _) = eigh(&hermitian_part(m))?;
    Ok(values.first().copied().unwrap_or(0.0))
}

/// `v† m v` change of basis into the frame spanned by the columns of `v`.
pub fn to_frame(v: &CMat, m: &CMat) -> CMat {
    let vd = adjoint(v);
    &vd * (m * v)
}

/// `v m v†`, the inverse of [`to_frame`].
pub fn from_frame(v: &CMat, m: &CMat) -> CMat {
    let vd = adjoint(v);
    v * (m * &vd)
}

/// Solves `a x = b` by partial-pivot LU.
pub fn solve(a: &CMat, b: &CMat) -> Result<CMat> {
    use faer::linalg::solvers::Solve;
    let lu = a.partial_piv_lu();
    let x = lu.solve(b);
    if (0..x.ncols()).any(|j| (0..x.nrows()).any(|i| !x[(i, j)].re.is_finite() || !x[(i, j)].im.is_finite())) {
        return Err(Error::Singular);
    }
    Ok(x)
}
