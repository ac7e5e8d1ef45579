//! Dense matrix exponential by Padé(13) scaling and squaring.

use crate::linalg::{identity, solve};
use crate::{CMat, Result, C64};

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// Largest 1-norm for which the degree-13 approximant is accurate to double precision.
const THETA13: f64 = 5.371920351148152;

fn norm1(m: &CMat) -> f64 {
    (0..m.ncols()).map(|j| (0..m.nrows()).map(|i| m[(i, j)].norm()).sum::<f64>()).fold(0.0, f64::max)
}

fn combine(terms: &[(&CMat, f64)], n: usize) -> CMat {
    CMat::from_fn(n, n, |i, j| terms.iter().map(|(m, c)| m[(i, j)] * *c).sum::<C64>())
}

/// `exp(m)` for a square complex matrix.
pub fn expm(m: &CMat) -> Result<CMat> {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "expm needs a square matrix");
    let nrm = norm1(m);
    let s = if nrm > THETA13 { (nrm / THETA13).log2().ceil() as i32 } else { 0 };
    let a = crate::linalg::scale(m, C64::new(0.5f64.powi(s), 0.0));

    let id = identity(n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let b = &PADE13;

    let u_inner = combine(&[(&a6, b[13]), (&a4, b[11]), (&a2, b[9])], n);
    let u_tail = combine(&[(&a6, b[7]), (&a4, b[5]), (&a2, b[3]), (&id, b[1])], n);
    let u = &a * (&a6 * &u_inner + u_tail);

    let v_inner = combine(&[(&a6, b[12]), (&a4, b[10]), (&a2, b[8])], n);
    let v_tail = combine(&[(&a6, b[6]), (&a4, b[4]), (&a2, b[2]), (&id, b[0])], n);
    let v = &a6 * &v_inner + v_tail;

    let mut r = solve(&(&v - &u), &(&v + &u))?;
    for _ in 0..s {
        r = &r * &r;
    }
    Ok(r)
}
