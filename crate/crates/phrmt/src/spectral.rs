//! Schmidt-paired eigenbasis of the bipartite Wishart blocks and the
//! operators reduced onto it.
//!
//! The left block `WW†` and the right block `W†W` share their `M` nonzero
//! eigenvalues. Pairing their eigenvectors mode by mode turns each mode into
//! a two-level system on which the reduced operators act like Pauli matrices
//! scaled by `√x_k`.

use ndarray::{Array1, Array2};
use rand_distr::{Distribution, StandardNormal};

use crate::ensemble::{sample_block, EnsembleConfig, ProjectedBlock};
use crate::error::{Error, Result};
use crate::linalg::{eigh, from_diag, identity, scale, CMatrix, CVector};
use crate::scalar::{ci, cr, r, Scalar, C};

/// Absolute gap below which two shared eigenvalues are treated as degenerate.
pub fn tie_threshold<T: Scalar>() -> T {
    r::<T>(1e-12)
}

/// Rank threshold relative to the largest eigenvalue.
pub fn rank_threshold<T: Scalar>(x_max: T) -> T {
    r::<T>(1e-10) * x_max
}

/// Paired eigendata of the two Wishart blocks.
///
/// `x` holds the shared eigenvalues in strictly descending order. `x_vecs[k]`
/// is supported on the first `M` coordinates, `y_vecs[k]` on the rest, and
/// `y_vecs[k] = W† x_vecs[k] / √x_k`.
#[derive(Debug, Clone)]
pub struct SchmidtBasis<T: Scalar> {
    pub x: Vec<T>,
    pub x_vecs: Vec<CVector<T>>,
    pub y_vecs: Vec<CVector<T>>,
}

impl<T: Scalar> SchmidtBasis<T> {
    pub fn modes(&self) -> usize {
        self.x.len()
    }

    /// Full dimension of the ambient space.
    pub fn dim(&self) -> usize {
        self.x_vecs.first().map(|v| v.len()).unwrap_or(0)
    }

    /// Column-stacks `x_vecs` then `y_vecs` into an `N × 2M` isometry.
    pub fn isometry(&self) -> CMatrix<T> {
        let n = self.dim();
        let m = self.modes();
        let mut v = Array2::zeros((n, 2 * m));
        for (k, vec) in self.x_vecs.iter().enumerate() {
            for i in 0..n {
                v[[i, k]] = vec[i];
            }
        }
        for (k, vec) in self.y_vecs.iter().enumerate() {
            for i in 0..n {
                v[[i, m + k]] = vec[i];
            }
        }
        v
    }
}

/// Computes the Schmidt basis of a sampled block.
///
/// Eigenvector phases are fixed by rotating each `|x_k⟩` so its
/// largest-magnitude component is real and positive; `|y_k⟩` then carries no
/// independent phase. Fails with [`Error::DegenerateSpectrum`] when two
/// eigenvalues are closer than [`tie_threshold`] (resample advised) and with
/// [`Error::RankDeficient`] when an eigenvalue falls below [`rank_threshold`].
pub fn schmidt_basis<T: Scalar>(block: &ProjectedBlock<T>) -> Result<SchmidtBasis<T>> {
    let m = block.m();
    let n = block.n();

    let left = block.wishart_left();
    let (vals, vecs) = eigh(&left)?;

    let x_max = vals.first().copied().unwrap_or(T::zero());
    let rank_tol = rank_threshold(x_max);
    for (k, &v) in vals.iter().enumerate() {
        if v <= rank_tol {
            return Err(Error::RankDeficient {
                index: k,
                value: v.to_f64().unwrap_or(f64::NAN),
                threshold: rank_tol.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    for k in 1..m {
        let gap = (vals[k - 1] - vals[k]).abs();
        if gap < tie_threshold() {
            return Err(Error::DegenerateSpectrum {
                gap: gap.to_f64().unwrap_or(f64::NAN),
                threshold: tie_threshold::<T>().to_f64().unwrap_or(f64::NAN),
            });
        }
    }

    let wd = block.w_adjoint();
    let mut x_vecs = Vec::with_capacity(m);
    let mut y_vecs = Vec::with_capacity(m);
    for k in 0..m {
        // Embed the M-dimensional eigenvector into the first M coordinates.
        let mut xv: CVector<T> = Array1::zeros(n);
        for i in 0..m {
            xv[i] = vecs[[i, k]];
        }
        // Phase convention: largest-magnitude component real positive.
        let mut best = 0usize;
        let mut best_mag = T::zero();
        for i in 0..n {
            let mag = xv[i].norm();
            if mag > best_mag {
                best_mag = mag;
                best = i;
            }
        }
        let phase = xv[best] / cr(best_mag);
        let xv = xv.mapv(|z| z * phase.conj());

        let inv_sqrt = cr(T::one() / vals[k].sqrt());
        let yv = wd.dot(&xv).mapv(|z| z * inv_sqrt);

        x_vecs.push(xv);
        y_vecs.push(yv);
    }

    Ok(SchmidtBasis { x: vals, x_vecs, y_vecs })
}

/// Samples a block and computes its Schmidt basis, incrementing the seed on
/// degenerate draws.
///
/// Returns the basis, the block that produced it, and the number of resamples
/// performed (recorded in experiment metadata).
pub fn schmidt_basis_resampling<T: Scalar>(
    config: &EnsembleConfig,
    max_resamples: usize,
) -> Result<(SchmidtBasis<T>, ProjectedBlock<T>, usize)>
where
    StandardNormal: Distribution<T>,
{
    let mut attempt = 0usize;
    loop {
        let cfg = config.with_seed(config.seed.wrapping_add(attempt as u64));
        let block = sample_block::<T>(&cfg)?;
        match schmidt_basis(&block) {
            Ok(basis) => return Ok((basis, block, attempt)),
            Err(Error::DegenerateSpectrum { .. }) | Err(Error::RankDeficient { .. })
                if attempt < max_resamples =>
            {
                attempt += 1;
            }
            Err(e) => return Err(e),
        }
    }
}

/// The operators `Û, R̂, Ŝ, T̂` expressed in the ordered basis
/// `(|x_1⟩ … |x_M⟩, |y_1⟩ … |y_M⟩)` as `2M × 2M` matrices.
///
/// `Ŝ` uses the `√x_k` scaling that makes its eigenvalues `±√x_k`, matching
/// `R̂` and the anticommutation algebra of the polar-decomposed triple.
#[derive(Debug, Clone)]
pub struct ReducedOperators<T: Scalar> {
    pub u_hat: CMatrix<T>,
    pub r_hat: CMatrix<T>,
    pub s_hat: CMatrix<T>,
    pub t_hat: CMatrix<T>,
    /// Shared eigenvalues, descending.
    pub x: Vec<T>,
}

impl<T: Scalar> ReducedOperators<T> {
    pub fn modes(&self) -> usize {
        self.x.len()
    }

    pub fn dim(&self) -> usize {
        2 * self.x.len()
    }

    /// `f(Û)` for a scalar function applied mode by mode on the diagonal.
    pub fn u_function(&self, f: impl Fn(T) -> C<T>) -> CMatrix<T> {
        let m = self.modes();
        let mut d = Vec::with_capacity(2 * m);
        for &xk in &self.x {
            d.push(f(xk));
        }
        for &xk in &self.x {
            d.push(f(xk));
        }
        from_diag(&d)
    }
}

/// Builds the reduced operators from a Schmidt basis.
pub fn reduced_operators<T: Scalar>(basis: &SchmidtBasis<T>) -> ReducedOperators<T> {
    let m = basis.modes();
    let dim = 2 * m;
    let mut u_hat: CMatrix<T> = Array2::zeros((dim, dim));
    let mut r_hat: CMatrix<T> = Array2::zeros((dim, dim));
    let mut s_hat: CMatrix<T> = Array2::zeros((dim, dim));
    let mut t_hat: CMatrix<T> = Array2::zeros((dim, dim));

    for (k, &xk) in basis.x.iter().enumerate() {
        let sq = xk.sqrt();
        u_hat[[k, k]] = cr(xk);
        u_hat[[m + k, m + k]] = cr(xk);
        t_hat[[k, k]] = cr(xk);
        t_hat[[m + k, m + k]] = cr(-xk);
        r_hat[[k, m + k]] = cr(sq);
        r_hat[[m + k, k]] = cr(sq);
        s_hat[[k, m + k]] = ci(-sq);
        s_hat[[m + k, k]] = ci(sq);
    }

    ReducedOperators { u_hat, r_hat, s_hat, t_hat, x: basis.x.clone() }
}

/// The polar-decomposed generator triple
/// `g = (Û^(-1/2) R̂, Û^(-1/2) Ŝ, Û^(-1) T̂)`.
///
/// The three matrices are Hermitian, unitary, and satisfy the Pauli algebra
/// `{g_i, g_j} = 2δ_ij` and `[g_i, g_j] = 2iε_ijk g_k`; for `M = 1` they are
/// exactly the Pauli matrices in the `(|x₁⟩, |y₁⟩)` basis.
#[derive(Debug, Clone)]
pub struct PauliTriple<T: Scalar> {
    pub g1: CMatrix<T>,
    pub g2: CMatrix<T>,
    pub g3: CMatrix<T>,
}

impl<T: Scalar> PauliTriple<T> {
    pub fn dim(&self) -> usize {
        self.g1.nrows()
    }

    pub fn axis(&self, axis: PauliAxis) -> &CMatrix<T> {
        match axis {
            PauliAxis::X => &self.g1,
            PauliAxis::Y => &self.g2,
            PauliAxis::Z => &self.g3,
        }
    }
}

/// Names the three generators by the Pauli matrix they extend.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

/// Builds the generator triple from the reduced operators.
///
/// Fails with [`Error::RankDeficient`] if any mode eigenvalue is not strictly
/// positive (the inverse powers of `Û` would not exist).
pub fn pauli_triple<T: Scalar>(ops: &ReducedOperators<T>) -> Result<PauliTriple<T>> {
    let x_max = ops.x.first().copied().unwrap_or(T::zero());
    let tol = rank_threshold(x_max);
    for (k, &xk) in ops.x.iter().enumerate() {
        if xk <= tol {
            return Err(Error::RankDeficient {
                index: k,
                value: xk.to_f64().unwrap_or(f64::NAN),
                threshold: tol.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    let inv_sqrt = ops.u_function(|x| cr(T::one() / x.sqrt()));
    let inv = ops.u_function(|x| cr(T::one() / x));
    Ok(PauliTriple {
        g1: inv_sqrt.dot(&ops.r_hat),
        g2: inv_sqrt.dot(&ops.s_hat),
        g3: inv.dot(&ops.t_hat),
    })
}

/// Conjugates `g_j` by `exp(a g_i)`:
/// returns `exp(a g_i) g_j exp(−a g_i)`, which equals
/// `g_j cosh(2a) + ½ [g_i, g_j] sinh(2a)` for `i ≠ j`.
///
/// The exponentials use `exp(a g) = cosh(a)·1 + sinh(a)·g`, valid because
/// each generator squares to the identity.
pub fn bch_conjugate<T: Scalar>(
    triple: &PauliTriple<T>,
    a: T,
    i: PauliAxis,
    j: PauliAxis,
) -> Result<CMatrix<T>> {
    if i == j {
        return Err(Error::Argument("bch_conjugate requires distinct axes".into()));
    }
    let gi = triple.axis(i);
    let gj = triple.axis(j);
    let dim = gi.nrows();
    let eye = identity::<T>(dim);
    let plus = scale(&eye, cr(a.cosh())) + scale(gi, cr(a.sinh()));
    let minus = scale(&eye, cr(a.cosh())) - scale(gi, cr(a.sinh()));
    Ok(plus.dot(gj).dot(&minus))
}

/// Point on the Bloch sphere.
#[derive(Debug, Clone, Copy)]
pub struct BlochVector<T: Scalar> {
    /// Polar angle in `[0, π]`.
    pub theta: T,
    /// Azimuthal angle in `[0, 2π)`.
    pub phi: T,
}

impl<T: Scalar> BlochVector<T> {
    pub fn new(theta: T, phi: T) -> Result<Self> {
        if !theta.is_finite() || !phi.is_finite() {
            return Err(Error::Argument("Bloch angles must be finite".into()));
        }
        if theta < T::zero() || theta > T::PI() {
            return Err(Error::Argument("theta must lie in [0, pi]".into()));
        }
        let two_pi = T::PI() * r::<T>(2.0);
        if phi < T::zero() || phi >= two_pi {
            return Err(Error::Argument("phi must lie in [0, 2*pi)".into()));
        }
        Ok(Self { theta, phi })
    }

    /// Cartesian components `(sinθ cosφ, sinθ sinφ, cosθ)`.
    pub fn components(&self) -> [T; 3] {
        [
            self.theta.sin() * self.phi.cos(),
            self.theta.sin() * self.phi.sin(),
            self.theta.cos(),
        ]
    }
}

/// The projector `(1 + u·g)/2` onto the Bloch-sphere pure states of every
/// mode; it has trace `M` and the vectors
/// `cos(θ/2)|x_k⟩ + sin(θ/2) e^{iφ} |y_k⟩` as eigenvectors with eigenvalue 1.
pub fn bloch_projector<T: Scalar>(
    ops: &ReducedOperators<T>,
    bloch: &BlochVector<T>,
) -> Result<CMatrix<T>> {
    let triple = pauli_triple(ops)?;
    let [ux, uy, uz] = bloch.components();
    let dim = triple.dim();
    let mut p = identity::<T>(dim);
    p = p + scale(&triple.g1, cr(ux)) + scale(&triple.g2, cr(uy)) + scale(&triple.g3, cr(uz));
    Ok(scale(&p, cr(r::<T>(0.5))))
}
