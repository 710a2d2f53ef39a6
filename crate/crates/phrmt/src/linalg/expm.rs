//! Matrix exponential by scaling-and-squaring with a Padé(13) approximant.

use super::{identity, one_norm, scale, solve, CMatrix};
use crate::error::Result;
use crate::scalar::{cr, r, Scalar};

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

/// `exp(a)` for a square complex matrix.
pub fn expm<T: Scalar>(a: &CMatrix<T>) -> Result<CMatrix<T>> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm requires a square matrix");
    if n == 0 {
        return Ok(a.clone());
    }
    if n == 1 {
        let mut out = a.clone();
        out[[0, 0]] = a[[0, 0]].exp();
        return Ok(out);
    }

    // theta_13 from the standard error analysis of the Padé(13) approximant.
    let theta13 = r::<T>(5.371920351148152);
    let norm = one_norm(a);
    let squarings = if norm > theta13 {
        (norm / theta13).log2().ceil().to_f64().unwrap_or(0.0).max(0.0) as u32
    } else {
        0
    };
    let factor = cr(r::<T>(0.5).powi(squarings as i32));
    let a_scaled = scale(a, factor);

    let eye = identity::<T>(n);
    let a2 = a_scaled.dot(&a_scaled);
    let a4 = a2.dot(&a2);
    let a6 = a2.dot(&a4);

    let b = |k: usize| cr(r::<T>(PADE13[k]));

    let u_inner = scale(&a6, b(13)) + scale(&a4, b(11)) + scale(&a2, b(9));
    let u_poly = a6.dot(&u_inner)
        + scale(&a6, b(7))
        + scale(&a4, b(5))
        + scale(&a2, b(3))
        + scale(&eye, b(1));
    let u = a_scaled.dot(&u_poly);

    let v_inner = scale(&a6, b(12)) + scale(&a4, b(10)) + scale(&a2, b(8));
    let v = a6.dot(&v_inner)
        + scale(&a6, b(6))
        + scale(&a4, b(4))
        + scale(&a2, b(2))
        + scale(&eye, b(0));

    let num = &v + &u;
    let den = &v - &u;
    let mut result = solve(&den, &num)?;

    for _ in 0..squarings {
        result = result.dot(&result);
    }
    Ok(result)
}
