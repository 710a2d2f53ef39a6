//! Eigensolvers: a cyclic Jacobi method for Hermitian matrices and a
//! characteristic-polynomial route for general small matrices.

use ndarray::Array2;

use super::{identity, max_abs, one_norm, trace, CMatrix};
use crate::error::{Error, Result};
use crate::scalar::{cr, r, Scalar, C};

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Returns eigenvalues in descending order together with a unitary matrix
/// whose columns are the corresponding eigenvectors, so `a ≈ V Λ V†`.
/// The input is Hermitized (`(a + a†)/2`) before iterating; callers that need
/// to detect non-Hermitian inputs should measure that residual themselves.
pub fn eigh<T: Scalar>(a: &CMatrix<T>) -> Result<(Vec<T>, CMatrix<T>)> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::Argument("eigh requires a square matrix".into()));
    }
    if n == 0 {
        return Ok((Vec::new(), Array2::zeros((0, 0))));
    }

    // Hermitize; diagonal becomes exactly real.
    let mut m: CMatrix<T> = Array2::zeros((n, n));
    let half = cr(r::<T>(0.5));
    for i in 0..n {
        for j in 0..n {
            m[[i, j]] = (a[[i, j]] + a[[j, i]].conj()) * half;
        }
        m[[i, i]] = cr(m[[i, i]].re);
    }

    let mut v = identity::<T>(n);
    let scale = max_abs(&m).max(T::one());
    let stop = scale * T::epsilon() * r::<T>(n as f64);
    let max_sweeps = 64;

    for _sweep in 0..max_sweeps {
        let mut off = T::zero();
        for p in 0..n {
            for q in p + 1..n {
                off = off.max(m[[p, q]].norm());
            }
        }
        if off <= stop {
            break;
        }

        for p in 0..n {
            for q in p + 1..n {
                let g = m[[p, q]];
                let gmag = g.norm();
                if gmag <= stop * r::<T>(1e-3) {
                    continue;
                }
                // Unitary 2x2 rotation J = [[c, s·u], [-s·conj(u), c]] with
                // u = g/|g| zeroes the (p, q) entry.
                let u = g / cr(gmag);
                let tau = (m[[q, q]].re - m[[p, p]].re) / (r::<T>(2.0) * gmag);
                let t = if tau >= T::zero() {
                    T::one() / (tau + (T::one() + tau * tau).sqrt())
                } else {
                    -T::one() / (-tau + (T::one() + tau * tau).sqrt())
                };
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;

                let cs = cr(c);
                let su = u * cr(s);

                // Column update: col_p ← c·col_p − s·conj(u)·col_q,
                //                col_q ← s·u·col_p + c·col_q.
                for row in 0..n {
                    let mp = m[[row, p]];
                    let mq = m[[row, q]];
                    m[[row, p]] = mp * cs - mq * su.conj();
                    m[[row, q]] = mp * su + mq * cs;
                }
                // Row update with J†.
                for col in 0..n {
                    let mp = m[[p, col]];
                    let mq = m[[q, col]];
                    m[[p, col]] = mp * cs - mq * su;
                    m[[q, col]] = mp * su.conj() + mq * cs;
                }
                m[[p, q]] = C::new(T::zero(), T::zero());
                m[[q, p]] = C::new(T::zero(), T::zero());
                m[[p, p]] = cr(m[[p, p]].re);
                m[[q, q]] = cr(m[[q, q]].re);

                for row in 0..n {
                    let vp = v[[row, p]];
                    let vq = v[[row, q]];
                    v[[row, p]] = vp * cs - vq * su.conj();
                    v[[row, q]] = vp * su + vq * cs;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let vals: Vec<T> = (0..n).map(|i| m[[i, i]].re).collect();
    order.sort_by(|&i, &j| vals[j].partial_cmp(&vals[i]).expect("finite eigenvalues"));

    let sorted_vals: Vec<T> = order.iter().map(|&i| vals[i]).collect();
    let mut sorted_vecs: CMatrix<T> = Array2::zeros((n, n));
    for (new_col, &old_col) in order.iter().enumerate() {
        for row in 0..n {
            sorted_vecs[[row, new_col]] = v[[row, old_col]];
        }
    }
    Ok((sorted_vals, sorted_vecs))
}

/// Characteristic polynomial coefficients by the Faddeev-LeVerrier recursion.
///
/// Returns `[a_1, ..., a_n]` for `p(z) = z^n + a_1 z^(n-1) + ... + a_n`.
fn char_poly<T: Scalar>(a: &CMatrix<T>) -> Vec<C<T>> {
    let n = a.nrows();
    let mut coeffs = Vec::with_capacity(n);
    let mut m = a.clone();
    for k in 1..=n {
        let c = -trace(&m) / cr(r::<T>(k as f64));
        coeffs.push(c);
        if k < n {
            let mut shifted = m.clone();
            for i in 0..n {
                shifted[[i, i]] += c;
            }
            m = a.dot(&shifted);
        }
    }
    coeffs
}

fn horner<T: Scalar>(coeffs: &[C<T>], z: C<T>) -> C<T> {
    let mut p = C::new(T::one(), T::zero());
    for &c in coeffs {
        p = p * z + c;
    }
    p
}

fn horner_derivative<T: Scalar>(coeffs: &[C<T>], z: C<T>) -> C<T> {
    let n = coeffs.len();
    let mut p = cr(r::<T>(n as f64));
    for (k, &c) in coeffs.iter().take(n - 1).enumerate() {
        let degree = r::<T>((n - 1 - k) as f64);
        p = p * z + c * cr(degree);
    }
    p
}

/// Eigenvalues of a general (possibly non-Hermitian) small complex matrix.
///
/// The spectrum is obtained as the roots of the characteristic polynomial:
/// Faddeev-LeVerrier for the coefficients, then Durand-Kerner iteration with
/// a Newton polish. The matrix is centered by its mean eigenvalue and scaled
/// to unit norm first, which keeps the polynomial well conditioned for the
/// dimensions used here (n ≤ 8). Results are sorted by descending real part,
/// then descending imaginary part.
pub fn eigenvalues_general<T: Scalar>(a: &CMatrix<T>) -> Result<Vec<C<T>>> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::Argument("eigenvalues_general requires a square matrix".into()));
    }
    if n == 0 {
        return Ok(Vec::new());
    }

    let shift = trace(a) / cr(r::<T>(n as f64));
    let mut b = a.clone();
    for i in 0..n {
        b[[i, i]] -= shift;
    }
    let scale = one_norm(&b).max(T::epsilon());
    let b = b.mapv(|v| v / cr(scale));

    let coeffs = char_poly(&b);

    // Cauchy-style inclusion radius for the initial ring.
    let mut radius = T::zero();
    for (k, c) in coeffs.iter().enumerate() {
        let mag = c.norm().powf(T::one() / r::<T>((k + 1) as f64));
        radius = radius.max(mag);
    }
    let radius = radius * r::<T>(2.0) + r::<T>(0.5);

    let two_pi = T::PI() * r::<T>(2.0);
    let mut roots: Vec<C<T>> = (0..n)
        .map(|i| {
            let angle = two_pi * (r::<T>(i as f64) + r::<T>(0.35)) / r::<T>(n as f64);
            C::from_polar(radius, angle)
        })
        .collect();

    let tol = T::epsilon() * r::<T>(16.0);
    for _iter in 0..400 {
        let mut max_step = T::zero();
        for i in 0..n {
            let zi = roots[i];
            let mut denom = C::new(T::one(), T::zero());
            for (j, &zj) in roots.iter().enumerate() {
                if j != i {
                    denom *= zi - zj;
                }
            }
            if denom.norm() == T::zero() {
                denom = C::new(T::epsilon(), T::epsilon());
            }
            let step = horner(&coeffs, zi) / denom;
            roots[i] = zi - step;
            max_step = max_step.max(step.norm());
        }
        if max_step <= tol {
            break;
        }
    }

    // Newton polish sharpens simple roots to machine precision.
    for root in roots.iter_mut() {
        for _ in 0..3 {
            let p = horner(&coeffs, *root);
            let dp = horner_derivative(&coeffs, *root);
            if dp.norm() > T::epsilon() {
                *root -= p / dp;
            }
        }
    }

    let mut out: Vec<C<T>> = roots
        .into_iter()
        .map(|z| z * cr(scale) + shift)
        .collect();
    out.sort_by(|x, y| {
        y.re.partial_cmp(&x.re)
            .expect("finite eigenvalues")
            .then(y.im.partial_cmp(&x.im).expect("finite eigenvalues"))
    });
    Ok(out)
}
