//! Dense complex linear algebra for small matrices.
//!
//! Everything here is sized for the reduced operators of this model
//! (dimensions up to a few dozen), favours clarity over cache tuning, and is
//! generic over the real scalar type.

mod eig;
mod expm;

pub use eig::{eigenvalues_general, eigh};
pub use expm::expm;

use ndarray::{Array1, Array2};

use crate::error::{Error, Result};
use crate::scalar::{cr, r, Scalar, C};

/// Complex matrix over scalar `T`.
pub type CMatrix<T> = Array2<C<T>>;
/// Complex vector over scalar `T`.
pub type CVector<T> = Array1<C<T>>;

/// Identity matrix of size `n`.
pub fn identity<T: Scalar>(n: usize) -> CMatrix<T> {
    let mut m = Array2::zeros((n, n));
    for i in 0..n {
        m[[i, i]] = C::new(T::one(), T::zero());
    }
    m
}

/// Square matrix with the given complex diagonal.
pub fn from_diag<T: Scalar>(d: &[C<T>]) -> CMatrix<T> {
    let mut m = Array2::zeros((d.len(), d.len()));
    for (i, &v) in d.iter().enumerate() {
        m[[i, i]] = v;
    }
    m
}

/// Conjugate transpose.
pub fn adjoint<T: Scalar>(a: &CMatrix<T>) -> CMatrix<T> {
    let mut out = Array2::zeros((a.ncols(), a.nrows()));
    for ((i, j), v) in a.indexed_iter() {
        out[[j, i]] = v.conj();
    }
    out
}

/// Commutator `[a, b] = ab - ba`.
pub fn commutator<T: Scalar>(a: &CMatrix<T>, b: &CMatrix<T>) -> CMatrix<T> {
    a.dot(b) - b.dot(a)
}

/// Anticommutator `{a, b} = ab + ba`.
pub fn anticommutator<T: Scalar>(a: &CMatrix<T>, b: &CMatrix<T>) -> CMatrix<T> {
    a.dot(b) + b.dot(a)
}

/// Scales a matrix by a complex factor.
pub fn scale<T: Scalar>(a: &CMatrix<T>, z: C<T>) -> CMatrix<T> {
    a.mapv(|e| e * z)
}

/// Largest entry magnitude, `max_ij |a_ij|`.
pub fn max_abs<T: Scalar>(a: &CMatrix<T>) -> T {
    a.iter().fold(T::zero(), |acc, v| acc.max(v.norm()))
}

/// `max_ij |a_ij - b_ij|`.
pub fn max_abs_diff<T: Scalar>(a: &CMatrix<T>, b: &CMatrix<T>) -> T {
    debug_assert_eq!(a.dim(), b.dim());
    a.iter()
        .zip(b.iter())
        .fold(T::zero(), |acc, (x, y)| acc.max((*x - *y).norm()))
}

/// Deviation from Hermiticity, `max |a - a†|`.
pub fn hermiticity_residual<T: Scalar>(a: &CMatrix<T>) -> T {
    max_abs_diff(a, &adjoint(a))
}

/// Maximum column sum of entry magnitudes (induced 1-norm).
pub fn one_norm<T: Scalar>(a: &CMatrix<T>) -> T {
    let mut best = T::zero();
    for j in 0..a.ncols() {
        let s = a.column(j).iter().map(|v| v.norm()).sum::<T>();
        best = best.max(s);
    }
    best
}

/// Trace of a square matrix.
pub fn trace<T: Scalar>(a: &CMatrix<T>) -> C<T> {
    let mut t = C::new(T::zero(), T::zero());
    for i in 0..a.nrows() {
        t += a[[i, i]];
    }
    t
}

/// Hermitian inner product `⟨x|y⟩ = Σ conj(x_i) y_i`.
pub fn vdot<T: Scalar>(x: &CVector<T>, y: &CVector<T>) -> C<T> {
    x.iter()
        .zip(y.iter())
        .fold(C::new(T::zero(), T::zero()), |acc, (a, b)| {
            acc + a.conj() * *b
        })
}

/// Euclidean norm of a complex vector.
pub fn vnorm<T: Scalar>(x: &CVector<T>) -> T {
    x.iter().map(|v| v.norm_sqr()).sum::<T>().sqrt()
}

/// Solves `A X = B` by Gaussian elimination with partial pivoting.
pub fn solve<T: Scalar>(a: &CMatrix<T>, b: &CMatrix<T>) -> Result<CMatrix<T>> {
    let n = a.nrows();
    if a.ncols() != n || b.nrows() != n {
        return Err(Error::Argument("solve requires square A and matching B".into()));
    }
    let m = b.ncols();
    let mut aug: CMatrix<T> = Array2::zeros((n, n + m));
    for i in 0..n {
        for j in 0..n {
            aug[[i, j]] = a[[i, j]];
        }
        for j in 0..m {
            aug[[i, n + j]] = b[[i, j]];
        }
    }
    let scale_limit = one_norm(a).max(T::one()) * T::epsilon() * r::<T>(n as f64);

    for col in 0..n {
        let mut pivot_row = col;
        let mut pivot_mag = aug[[col, col]].norm();
        for row in col + 1..n {
            let mag = aug[[row, col]].norm();
            if mag > pivot_mag {
                pivot_mag = mag;
                pivot_row = row;
            }
        }
        if pivot_mag <= scale_limit {
            return Err(Error::IllConditioned {
                cond: f64::INFINITY,
                limit: 1e12,
            });
        }
        if pivot_row != col {
            for j in 0..n + m {
                let tmp = aug[[col, j]];
                aug[[col, j]] = aug[[pivot_row, j]];
                aug[[pivot_row, j]] = tmp;
            }
        }
        let pivot = aug[[col, col]];
        for row in col + 1..n {
            let factor = aug[[row, col]] / pivot;
            if factor.norm() == T::zero() {
                continue;
            }
            for j in col..n + m {
                let v = aug[[col, j]];
                aug[[row, j]] -= factor * v;
            }
        }
    }

    let mut x: CMatrix<T> = Array2::zeros((n, m));
    for col in (0..n).rev() {
        let pivot = aug[[col, col]];
        for j in 0..m {
            let mut sum = aug[[col, n + j]];
            for k in col + 1..n {
                sum -= aug[[col, k]] * x[[k, j]];
            }
            x[[col, j]] = sum / pivot;
        }
    }
    Ok(x)
}

/// Matrix inverse via [`solve`] against the identity.
pub fn inverse<T: Scalar>(a: &CMatrix<T>) -> Result<CMatrix<T>> {
    solve(a, &identity(a.nrows()))
}

/// Condition-number estimate `‖A‖₁ ‖A⁻¹‖₁`.
pub fn condition_one<T: Scalar>(a: &CMatrix<T>) -> Result<T> {
    let inv = inverse(a)?;
    Ok(one_norm(a) * one_norm(&inv))
}

/// Asserts that a complex value is real to within `tol` and returns its real
/// part.
pub fn real_checked<T: Scalar>(z: C<T>, tol: T) -> Result<T> {
    let scale = T::one().max(z.re.abs());
    if z.im.abs() > tol * scale {
        return Err(Error::ComplexResidue {
            imag: z.im.to_f64().unwrap_or(f64::NAN),
            tolerance: (tol * scale).to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(z.re)
}

/// Builds a matrix from a slice of rows given as complex entries.
pub fn from_rows<T: Scalar>(rows: &[Vec<C<T>>]) -> CMatrix<T> {
    let nr = rows.len();
    let nc = rows.first().map(Vec::len).unwrap_or(0);
    let mut m = Array2::zeros((nr, nc));
    for (i, row) in rows.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            m[[i, j]] = v;
        }
    }
    m
}

/// Outer product `|x⟩⟨y|`.
pub fn outer<T: Scalar>(x: &CVector<T>, y: &CVector<T>) -> CMatrix<T> {
    let mut m = Array2::zeros((x.len(), y.len()));
    for i in 0..x.len() {
        for j in 0..y.len() {
            m[[i, j]] = x[i] * y[j].conj();
        }
    }
    m
}

/// Real diagonal lifted to a complex matrix.
pub fn from_real_diag<T: Scalar>(d: &[T]) -> CMatrix<T> {
    let entries: Vec<C<T>> = d.iter().map(|&v| cr(v)).collect();
    from_diag(&entries)
}
