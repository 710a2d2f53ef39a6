//! Seeded sampling of the Gaussian block and construction of the operator
//! quartet `(R, S, T, U)`.
//!
//! The random matrix `W` carries a single rectangular Gaussian block in its
//! top-right corner; only that `M × (N−M)` block is ever nonzero, so it is
//! sampled directly instead of projecting a full `N × N` Gaussian matrix.

use ndarray::Array2;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{adjoint, CMatrix};
use crate::scalar::{Scalar, C};

/// Entry type of the sampled Gaussian block.
///
/// `Complex` entries have independent standard-normal real and imaginary
/// parts (per-entry variance 2); `Real` entries are standard normals. The
/// convention is reported in output metadata because the entropy dynamics
/// depend on the sampled eigenvalues only.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarClass {
    Complex,
    Real,
}

impl ScalarClass {
    pub fn label(&self) -> &'static str {
        match self {
            ScalarClass::Complex => "complex",
            ScalarClass::Real => "real",
        }
    }
}

/// Dimensions and seed for one ensemble draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnsembleConfig {
    /// Full dimension `N`.
    pub n: usize,
    /// Block dimension `M`, restricted to `N ≥ 2M`.
    pub m: usize,
    /// Seed that fully determines the draw.
    pub seed: u64,
    pub scalar_class: ScalarClass,
}

impl EnsembleConfig {
    pub fn new(n: usize, m: usize, seed: u64, scalar_class: ScalarClass) -> Result<Self> {
        if m < 1 {
            return Err(Error::Config(format!("block dimension m must be positive, got {m}")));
        }
        if n < 2 * m {
            return Err(Error::Config(format!(
                "dimensions must satisfy n >= 2m, got n = {n}, m = {m}"
            )));
        }
        Ok(Self { n, m, seed, scalar_class })
    }

    /// Same configuration with a different seed (used when a degenerate draw
    /// must be resampled).
    pub fn with_seed(&self, seed: u64) -> Self {
        Self { seed, ..*self }
    }
}

/// The sampled block together with its embedding `W`.
///
/// `w` is `N × N` and vanishes outside the top-right `M × (N−M)` block, so
/// `w · w = 0` holds exactly (structurally, not just numerically).
#[derive(Debug, Clone)]
pub struct ProjectedBlock<T: Scalar> {
    pub w: CMatrix<T>,
    /// The raw `M × (N−M)` Gaussian block.
    pub h_block: CMatrix<T>,
    pub config: EnsembleConfig,
}

impl<T: Scalar> ProjectedBlock<T> {
    pub fn n(&self) -> usize {
        self.config.n
    }

    pub fn m(&self) -> usize {
        self.config.m
    }

    /// `W†` as a dense matrix.
    pub fn w_adjoint(&self) -> CMatrix<T> {
        adjoint(&self.w)
    }

    /// The `M × M` Wishart block `(W W†)` restricted to its nonzero corner,
    /// i.e. `H H†` for the sampled block `H`.
    pub fn wishart_left(&self) -> CMatrix<T> {
        self.h_block.dot(&adjoint(&self.h_block))
    }

    /// The `(N−M) × (N−M)` Wishart block `H† H`.
    pub fn wishart_right(&self) -> CMatrix<T> {
        adjoint(&self.h_block).dot(&self.h_block)
    }
}

/// The four Hermitian matrices generated by one draw:
/// `R = W + W†`, `S = −i(W − W†)`, `T = WW† − W†W`, `U = WW† + W†W`.
///
/// `U` commutes with the other three and closes the identity
/// `R² + S² + T² = 2U + U²`.
#[derive(Debug, Clone)]
pub struct OperatorQuartet<T: Scalar> {
    pub r: CMatrix<T>,
    pub s: CMatrix<T>,
    pub t: CMatrix<T>,
    pub u: CMatrix<T>,
}

/// Draws the Gaussian block for `config` and embeds it as `W`.
///
/// The same seed always reproduces the same block bit for bit: entries are
/// drawn from a ChaCha8 stream in row-major order, real part before imaginary
/// part.
pub fn sample_block<T: Scalar>(config: &EnsembleConfig) -> Result<ProjectedBlock<T>>
where
    StandardNormal: Distribution<T>,
{
    // Re-validate so hand-constructed configs cannot bypass the invariants.
    let config = EnsembleConfig::new(config.n, config.m, config.seed, config.scalar_class)?;
    let (n, m) = (config.n, config.m);
    let cols = n - m;

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut h_block: CMatrix<T> = Array2::zeros((m, cols));
    for i in 0..m {
        for j in 0..cols {
            let re: T = StandardNormal.sample(&mut rng);
            let im: T = match config.scalar_class {
                ScalarClass::Complex => StandardNormal.sample(&mut rng),
                ScalarClass::Real => T::zero(),
            };
            h_block[[i, j]] = C::new(re, im);
        }
    }

    let mut w: CMatrix<T> = Array2::zeros((n, n));
    for i in 0..m {
        for j in 0..cols {
            w[[i, m + j]] = h_block[[i, j]];
        }
    }

    Ok(ProjectedBlock { w, h_block, config })
}

/// Builds the operator quartet from a sampled block.
pub fn build_quartet<T: Scalar>(block: &ProjectedBlock<T>) -> OperatorQuartet<T> {
    let w = &block.w;
    let wd = block.w_adjoint();
    let ww = w.dot(&wd);
    let dww = wd.dot(w);

    let minus_i = C::new(T::zero(), -T::one());
    let r = w + &wd;
    let s = (w - &wd).mapv(|z| z * minus_i);
    let t = &ww - &dww;
    let u = &ww + &dww;
    OperatorQuartet { r, s, t, u }
}
