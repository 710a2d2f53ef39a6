//! Closed-form solution of the metric flow.
//!
//! For one mode with eigenvalue `x` the pair `(α, β)` obeys
//!
//! ```text
//! α̇ = −tanh(2β√x)/√x · [b cosh(2αx) + c sinh(2αx)]
//! β̇ =                    b sinh(2αx) + c cosh(2αx)
//! ```
//!
//! whose solution is elementary: `σ = sinh(2β√x)` is harmonic with frequency
//! `ω = 2√(x(b²−c²))`, and `α`, `ν`, `γ` follow from it. All three coupling
//! regimes are evaluated through one complex-arithmetic path with principal
//! branches (the square root of `b²−c²` is taken once and reused so the two
//! occurrences stay on the same branch); results are verified real before
//! they are returned. The degenerate point `b = c` uses the analytic limits.

use crate::dynamics::CouplingParams;
use crate::error::{Error, Result};
use crate::linalg::real_checked;
use crate::scalar::{cr, r, Scalar, C};

/// Tolerance for the imaginary residue allowed when continuing the closed
/// forms through complex arithmetic.
fn residue_tol<T: Scalar>() -> T {
    r::<T>(1e-9)
}

/// Closed-form metric flow for one coupling-parameter set.
///
/// All methods are per-mode functions of the eigenvalue `x > 0` and time `t`.
#[derive(Debug, Clone)]
pub struct MetricFlow<T: Scalar> {
    pub params: CouplingParams<T>,
    /// `b² − c²`.
    d: T,
    /// `√(b² − c²)` on the principal branch, shared by every occurrence.
    sqrt_d: C<T>,
    /// `√(C₁² + b² − c²)`, real by the domain restriction.
    root_c1d: T,
}

impl<T: Scalar> MetricFlow<T> {
    /// Validates the parameter domain and caches the shared constants.
    ///
    /// Requires `b > 0` (the integration constant `−atanh(c/b)` must exist)
    /// and `C₁² + b² − c² > 0` (the flow amplitude stays real).
    pub fn new(params: CouplingParams<T>) -> Result<Self> {
        if params.b <= T::zero() {
            return Err(Error::UnsupportedParameters(
                "flow requires b > 0: the alpha integration constant -atanh(c/b) is undefined"
                    .into(),
            ));
        }
        let d = params.d();
        let c1d = params.c1 * params.c1 + d;
        if c1d <= T::zero() {
            return Err(Error::UnsupportedParameters(format!(
                "flow requires c1^2 + b^2 - c^2 > 0, got {}",
                c1d.to_f64().unwrap_or(f64::NAN)
            )));
        }
        Ok(Self {
            params,
            d,
            sqrt_d: cr(d).sqrt(),
            root_c1d: c1d.sqrt(),
        })
    }

    fn tau(&self, t: T) -> T {
        t + self.params.c2
    }

    fn exceptional(&self) -> bool {
        self.d == T::zero()
    }

    /// Complex oscillator phase `ω τ = 2 √x √d τ`.
    fn omega_tau(&self, x: T, t: T) -> C<T> {
        self.sqrt_d * cr(r::<T>(2.0) * x.sqrt() * self.tau(t))
    }

    /// `σ(x, t) = sinh(2β√x) = C₁ sin(ωτ)/√d`, real in every regime.
    pub fn sigma(&self, x: T, t: T) -> Result<T> {
        if self.exceptional() {
            // lim_{d→0} C₁ sin(2√(xd)τ)/√d = 2 C₁ √x τ
            return Ok(r::<T>(2.0) * self.params.c1 * x.sqrt() * self.tau(t));
        }
        let z = self.omega_tau(x, t).sin() * cr(self.params.c1) / self.sqrt_d;
        real_checked(z, residue_tol())
    }

    /// `β(x, t) = asinh(σ)/(2√x)`.
    pub fn beta(&self, x: T, t: T) -> Result<T> {
        Ok(self.sigma(x, t)?.asinh() / (r::<T>(2.0) * x.sqrt()))
    }

    /// `exp(4αx)` from the solved ratio form; positive in every regime.
    pub fn exp_four_alpha_x(&self, x: T, t: T) -> Result<T> {
        let p = &self.params;
        if self.exceptional() {
            let c1 = p.c1;
            let denom = (p.b + p.c) * (p.b + p.c)
                * (T::one() + r::<T>(4.0) * c1 * c1 * x * self.tau(t) * self.tau(t));
            return Ok(r::<T>(4.0) * c1 * c1 / denom);
        }
        let cos = self.omega_tau(x, t).cos() * cr(p.c1);
        let root = cr(self.root_c1d);
        let ratio = (root + cos) / (root - cos);
        let z = ratio * cr((p.b - p.c) / (p.b + p.c));
        let value = real_checked(z, residue_tol())?;
        if value <= T::zero() {
            return Err(Error::ComplexResidue {
                imag: value.to_f64().unwrap_or(f64::NAN),
                tolerance: 0.0,
            });
        }
        Ok(value)
    }

    /// `α(x, t) = ln(exp(4αx))/(4x)`.
    pub fn alpha(&self, x: T, t: T) -> Result<T> {
        Ok(self.exp_four_alpha_x(x, t)?.ln() / (r::<T>(4.0) * x))
    }

    /// `ν(x, t) = (b² − c²)√(C₁² + b² − c²) / (C₁² + b² − c² − C₁² cos²(ωτ))`.
    pub fn nu(&self, x: T, t: T) -> Result<T> {
        let p = &self.params;
        if self.exceptional() {
            let c1 = p.c1;
            return Ok(c1 / (T::one() + r::<T>(4.0) * c1 * c1 * x * self.tau(t) * self.tau(t)));
        }
        let cos = self.omega_tau(x, t).cos();
        let c1_sq = cr(p.c1 * p.c1);
        let denom = cr(self.root_c1d * self.root_c1d) - c1_sq * cos * cos;
        let z = cr(self.d) * cr(self.root_c1d) / denom;
        real_checked(z, residue_tol())
    }

    /// `ν` recomputed from its definition `[b cosh(2αx) + c sinh(2αx)] / cosh(2β√x)`.
    pub fn nu_from_definition(&self, x: T, t: T) -> Result<T> {
        let p = &self.params;
        let two_alpha_x = r::<T>(2.0) * self.alpha(x, t)? * x;
        let two_beta_sx = r::<T>(2.0) * self.beta(x, t)? * x.sqrt();
        Ok((p.b * two_alpha_x.cosh() + p.c * two_alpha_x.sinh()) / two_beta_sx.cosh())
    }

    /// Number of half-periods completed by the oscillator phase; zero outside
    /// the oscillatory regime.
    pub fn branch_count(&self, x: T, t: T) -> i64 {
        if self.d <= T::zero() {
            return 0;
        }
        let omega = r::<T>(2.0) * (x * self.d).sqrt();
        let k = (omega * self.tau(t) / T::PI() + r::<T>(0.5)).floor();
        k.to_f64().unwrap_or(0.0) as i64
    }

    /// The accumulated rotation `γ(x, t) = √x ∫ ν dt'`, continuous in `t` and
    /// zero at `t = −C₂`.
    ///
    /// In the oscillatory regime the `atan ∘ tan` composition is lifted to a
    /// continuous function by adding `π/2` per half-period. The saturating
    /// regime uses the hyperbolic form of the same continuation directly
    /// (`tan` of a large imaginary argument overflows in floating point long
    /// before `tanh` saturates); the two agree wherever both are finite, see
    /// the continuation test below.
    pub fn gamma(&self, x: T, t: T) -> Result<T> {
        let half = r::<T>(0.5);
        if self.exceptional() {
            return Ok(half * (r::<T>(2.0) * self.params.c1 * x.sqrt() * self.tau(t)).atan());
        }
        if self.d < T::zero() {
            let d_abs = -self.d;
            let k = self.root_c1d / d_abs.sqrt();
            let theta = r::<T>(2.0) * (x * d_abs).sqrt() * self.tau(t);
            return Ok(half * (k * theta.tanh()).atan());
        }
        let k_c = cr(self.root_c1d) / self.sqrt_d;
        let principal = (k_c * self.omega_tau(x, t).tan()).atan();
        let principal = real_checked(principal, residue_tol())?;
        let lift = T::PI() * half * r::<T>(self.branch_count(x, t) as f64);
        Ok(half * principal + lift)
    }

    /// Principal-branch complex continuation of the rotation integral,
    /// without the half-period lift. Exists to witness that the regime split
    /// in [`MetricFlow::gamma`] evaluates one formula, not two.
    #[doc(hidden)]
    pub fn gamma_principal_continuation(&self, x: T, t: T) -> Result<T> {
        let k_c = cr(self.root_c1d) / self.sqrt_d;
        let principal = (k_c * self.omega_tau(x, t).tan()).atan();
        Ok(real_checked(principal, residue_tol())? * r::<T>(0.5))
    }

    /// Asymptotic rotation `γ∞ = ½ atan √((C₁² + b² − c²)/(c² − b²))` reached
    /// as `t → ∞` when the spectrum is complex (`b < c`).
    pub fn gamma_infinity(&self) -> Result<T> {
        if self.d >= T::zero() {
            return Err(Error::UnsupportedParameters(
                "gamma has no finite limit unless c > b".into(),
            ));
        }
        let ratio = self.root_c1d * self.root_c1d / (-self.d);
        Ok(r::<T>(0.5) * ratio.sqrt().atan())
    }

    /// `β̇` from the flow equation, evaluated on the closed-form `α`.
    pub fn beta_dot(&self, x: T, t: T) -> Result<T> {
        let p = &self.params;
        let two_alpha_x = r::<T>(2.0) * self.alpha(x, t)? * x;
        Ok(p.b * two_alpha_x.sinh() + p.c * two_alpha_x.cosh())
    }

    /// `α̇` from the flow equation, evaluated on the closed-form `(α, β)`.
    pub fn alpha_dot(&self, x: T, t: T) -> Result<T> {
        let p = &self.params;
        let sx = x.sqrt();
        let two_alpha_x = r::<T>(2.0) * self.alpha(x, t)? * x;
        let two_beta_sx = r::<T>(2.0) * self.beta(x, t)? * sx;
        Ok(-two_beta_sx.tanh() / sx * (p.b * two_alpha_x.cosh() + p.c * two_alpha_x.sinh()))
    }

    /// The asserted reuse of the solution for the second Hamiltonian's metric
    /// ansatz: `δ = √x · α`, `ζ = β`, which reproduces `ξ(t) = ν(t)` and
    /// `ξ_I = ν_I` identically. Whether this pair actually satisfies the
    /// second flow system is measured, not assumed; see
    /// [`crate::dynamics::oracle::a2_reuse_discrepancy`].
    pub fn delta_claimed(&self, x: T, t: T) -> Result<T> {
        Ok(x.sqrt() * self.alpha(x, t)?)
    }

    /// See [`MetricFlow::delta_claimed`].
    pub fn zeta_claimed(&self, x: T, t: T) -> Result<T> {
        self.beta(x, t)
    }
}
