//! Bell states of generator eigenstates, their time evolution, and the von
//! Neumann entropy of the reduced single-qubit density matrix.
//!
//! Each mode pair `(m, n)` carries two qubits. For the first pipeline the
//! qubit basis is the chiral eigenbasis `|X±_k⟩` of `R̂`; for the second it is
//! the `|x_k⟩, |y_k⟩` eigenbasis of `T̂`. In both cases the Bell states
//! `Φ± = (|++⟩ ± |−−⟩)/√2` evolve by acquiring opposite phases `e^{∓iΔ}`
//! with `Δ = γ_m + γ_n`, which drives the reduced eigenvalues
//! `λ₁,₂ = (1 ± sinθ cos2Δ)/2` and hence the entropy dynamics: aperiodic
//! oscillation while `Δ` grows without bound (`b > c`) and saturation once
//! `Δ → Δ∞` (`b < c`).

use ndarray::Array1;

use crate::dynamics::{HamiltonianKind, MetricFlow};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, CVector};
use crate::scalar::{cr, r, Scalar, C};
use crate::spectral::ReducedOperators;

/// Which generator supplies the qubit basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    /// Chiral qubits `|X±⟩` (eigenstates of `R̂`).
    R,
    /// Bipartite qubits `|x⟩, |y⟩` (eigenstates of `T̂`).
    T,
}

impl Generator {
    pub fn label(&self) -> &'static str {
        match self {
            Generator::R => "r",
            Generator::T => "t",
        }
    }
}

/// A mode pair carrying the two qubits, with the Bell states in the ordered
/// two-qubit product basis (`m` is the slow index).
#[derive(Debug, Clone)]
pub struct BellPair<T: Scalar> {
    pub generator: Generator,
    /// 1-based mode indices into the descending eigenvalue list.
    pub m_index: usize,
    pub n_index: usize,
    /// Mode eigenvalues backing the two qubits.
    pub x_m: T,
    pub x_n: T,
}

impl<T: Scalar> BellPair<T> {
    pub fn new(
        ops: &ReducedOperators<T>,
        generator: Generator,
        m_index: usize,
        n_index: usize,
    ) -> Result<Self> {
        let modes = ops.modes();
        if m_index < 1 || m_index > modes || n_index < 1 || n_index > modes {
            return Err(Error::Argument(format!(
                "mode indices must lie in 1..={modes}, got ({m_index}, {n_index})"
            )));
        }
        if m_index == n_index {
            return Err(Error::Argument("mode indices must be distinct".into()));
        }
        Ok(Self {
            generator,
            m_index,
            n_index,
            x_m: ops.x[m_index - 1],
            x_n: ops.x[n_index - 1],
        })
    }

    /// `Φ⁺ = (|++⟩ + |−−⟩)/√2` in product coordinates.
    pub fn phi_plus(&self) -> CVector<T> {
        bell_vector(T::one())
    }

    /// `Φ⁻ = (|++⟩ − |−−⟩)/√2`.
    pub fn phi_minus(&self) -> CVector<T> {
        bell_vector(-T::one())
    }
}

fn bell_vector<T: Scalar>(sign: T) -> CVector<T> {
    let inv_sqrt2 = T::one() / r::<T>(2.0).sqrt();
    let mut v: CVector<T> = Array1::zeros(4);
    v[0] = cr(inv_sqrt2);
    v[3] = cr(sign * inv_sqrt2);
    v
}

/// A two-qubit state at one instant of the evolution.
#[derive(Debug, Clone)]
pub struct EvolvedState<T: Scalar> {
    /// Product-basis components, including the dynamical phase.
    pub chi: CVector<T>,
    pub t: T,
    /// Accumulated rotation `Δ = γ_m + γ_n`.
    pub delta: T,
    /// Mixing angle of the initial superposition.
    pub theta: T,
}

/// The initial superposition `χ(0) = cos(θ/2) Φ⁺ + sin(θ/2) Φ⁻`.
///
/// Its coefficient matrix over the qubit product basis is diagonal with
/// entries `(cos(θ/2) ± sin(θ/2))/√2`; the state is a Bell state at `θ = 0`
/// or `π` (maximal entanglement) and a product state at `θ = π/2`.
/// The state is attached to the flow origin `t = −C₂`, where the accumulated
/// rotation vanishes.
pub fn initial_state<T: Scalar>(theta: T, pair: &BellPair<T>) -> EvolvedState<T> {
    let half = theta / r::<T>(2.0);
    let plus = pair.phi_plus();
    let minus = pair.phi_minus();
    let chi = plus.mapv(|z| z * cr(half.cos())) + minus.mapv(|z| z * cr(half.sin()));
    EvolvedState { chi, t: T::zero(), delta: T::zero(), theta }
}

/// Evolves the initial superposition to time `t`.
///
/// The Bell states are eigenstates of the evolution with phases `e^{∓iΔ}`;
/// equivalently the product amplitudes on `(|++⟩, |−−⟩)` mix through the
/// rotation `[[cosΔ, −i sinΔ], [−i sinΔ, cosΔ]]`. The two generator
/// pipelines implement one route each and agree coordinate for coordinate.
/// An overall dynamical phase `e^{−i(x_m + x_n)(t + C₂)}` is kept so the
/// state matches the dense propagator oracle exactly.
pub fn evolve<T: Scalar>(
    state: &EvolvedState<T>,
    pair: &BellPair<T>,
    flow: &MetricFlow<T>,
    t: T,
) -> Result<EvolvedState<T>> {
    let delta = flow.gamma(pair.x_m, t)? + flow.gamma(pair.x_n, t)?;
    let tau = t + flow.params.c2;
    let phase = C::from_polar(T::one(), -(pair.x_m + pair.x_n) * tau);
    let half = state.theta / r::<T>(2.0);

    let chi = match pair.generator {
        Generator::R => {
            // Bell-basis route: opposite phases on Φ±.
            let a = C::from_polar(half.cos(), -delta);
            let b = C::from_polar(half.sin(), delta);
            let plus = pair.phi_plus();
            let minus = pair.phi_minus();
            (plus.mapv(|z| z * a) + minus.mapv(|z| z * b)).mapv(|z| z * phase)
        }
        Generator::T => {
            // Product-basis route: rotation on the (|xx⟩, |yy⟩) span.
            let initial = initial_state(state.theta, pair).chi;
            let cosd = cr(delta.cos());
            let misin = C::new(T::zero(), -delta.sin());
            let mut chi: CVector<T> = Array1::zeros(4);
            chi[0] = cosd * initial[0] + misin * initial[3];
            chi[3] = misin * initial[0] + cosd * initial[3];
            chi[1] = initial[1];
            chi[2] = initial[2];
            chi.mapv(|z| z * phase)
        }
    };
    Ok(EvolvedState { chi, t, delta, theta: state.theta })
}

/// Reduced density matrix of the `m` qubit with its eigenvalues in
/// descending order (`lambda1 ≥ lambda2`).
#[derive(Debug, Clone)]
pub struct ReducedDensity<T: Scalar> {
    pub rho: CMatrix<T>,
    pub lambda1: T,
    pub lambda2: T,
}

/// Traces out the `n` qubit by explicit index contraction,
/// `ρᵐ_ik = Σ_l χ_il χ̄_kl`.
///
/// Works for any normalized four-component state, not only those produced by
/// [`initial_state`] and [`evolve`]; for pipeline states the result is
/// diagonal with entries `(1 ± sinθ cos2Δ)/2`.
pub fn partial_trace<T: Scalar>(state: &EvolvedState<T>) -> ReducedDensity<T> {
    let chi = &state.chi;
    let mut rho: CMatrix<T> = CMatrix::zeros((2, 2));
    for i in 0..2 {
        for k in 0..2 {
            let mut sum = C::new(T::zero(), T::zero());
            for l in 0..2 {
                sum += chi[2 * i + l] * chi[2 * k + l].conj();
            }
            rho[[i, k]] = sum;
        }
    }
    // Hermitian 2x2 spectrum in closed form.
    let half_tr = (rho[[0, 0]].re + rho[[1, 1]].re) / r::<T>(2.0);
    let gap = (rho[[0, 0]].re - rho[[1, 1]].re) / r::<T>(2.0);
    let radius = (gap * gap + rho[[0, 1]].norm_sqr()).sqrt();
    ReducedDensity { rho, lambda1: half_tr + radius, lambda2: half_tr - radius }
}

/// Tolerance for eigenvalues slightly outside `[0, 1]` from roundoff.
fn density_tol<T: Scalar>() -> T {
    r::<T>(1e-9)
}

/// Von Neumann entropy `S = −λ₁ ln λ₁ − λ₂ ln λ₂` (natural logarithm,
/// `0·ln 0 := 0`).
///
/// Rejects eigenvalues outside `[−tol, 1+tol]`; values inside are clamped to
/// `[0, 1]` before the logarithms.
pub fn von_neumann<T: Scalar>(density: &ReducedDensity<T>) -> Result<T> {
    entropy_from_lambdas(density.lambda1, density.lambda2)
}

/// Entropy from a pair of eigenvalues; see [`von_neumann`].
pub fn entropy_from_lambdas<T: Scalar>(lambda1: T, lambda2: T) -> Result<T> {
    let tol = density_tol::<T>();
    let mut s = T::zero();
    for lambda in [lambda1, lambda2] {
        if lambda < -tol || lambda > T::one() + tol {
            return Err(Error::InvalidDensity {
                value: lambda.to_f64().unwrap_or(f64::NAN),
            });
        }
        let clamped = lambda.max(T::zero()).min(T::one());
        if clamped > T::zero() {
            s -= clamped * clamped.ln();
        }
    }
    Ok(s)
}

/// Closed-form reduced eigenvalues `λ₁,₂ = (1 ± sinθ cos2Δ)/2`.
pub fn lambdas_closed<T: Scalar>(theta: T, delta: T) -> (T, T) {
    let half = r::<T>(0.5);
    let shift = theta.sin() * (r::<T>(2.0) * delta).cos();
    (half * (T::one() + shift), half * (T::one() - shift))
}

/// One sampled point of an entropy trajectory.
#[derive(Debug, Clone, Copy)]
pub struct EntropyRecord<T: Scalar> {
    pub t: T,
    pub delta: T,
    pub lambda1: T,
    pub lambda2: T,
    pub entropy: T,
}

/// Sampled `(t, Δ, λ₁, λ₂, S)` records for one experiment.
#[derive(Debug, Clone)]
pub struct EntropyTrace<T: Scalar> {
    pub records: Vec<EntropyRecord<T>>,
}

impl<T: Scalar> EntropyTrace<T> {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn max_entropy(&self) -> T {
        self.records.iter().fold(T::zero(), |acc, r| acc.max(r.entropy))
    }
}

/// Samples the closed-form entropy trajectory of a Bell-pair experiment on
/// `t_grid`.
pub fn entropy_trace<T: Scalar>(
    flow: &MetricFlow<T>,
    pair: &BellPair<T>,
    theta: T,
    t_grid: &[T],
) -> Result<EntropyTrace<T>> {
    let mut records = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let delta = flow.gamma(pair.x_m, t)? + flow.gamma(pair.x_n, t)?;
        let (lambda1, lambda2) = lambdas_closed(theta, delta);
        let entropy = entropy_from_lambdas(lambda1, lambda2)?;
        records.push(EntropyRecord { t, delta, lambda1, lambda2, entropy });
    }
    Ok(EntropyTrace { records })
}

/// Occupation weights of the two bipartite components after evolving the
/// single pure state `cos(θ/2)|x_k⟩ + sin(θ/2) e^{iφ}|y_k⟩` of one mode.
///
/// The first generator rotates the mixing angle by `γ_k`, so the weights
/// oscillate while the rotation grows and freeze at `γ∞` once the spectrum is
/// complex; the second produces pure phases and leaves the weights constant.
pub fn single_state_weights<T: Scalar>(
    kind: HamiltonianKind,
    theta: T,
    gamma_k: T,
) -> (T, T) {
    let half = theta / r::<T>(2.0);
    let angle = match kind {
        HamiltonianKind::A1 => half - gamma_k,
        HamiltonianKind::A2 => half,
    };
    (angle.cos() * angle.cos(), angle.sin() * angle.sin())
}

/// Verification oracles kept on deliberately independent code paths.
pub mod oracle {
    use super::*;
    use crate::linalg::{expm, identity};

    /// Evolves the initial superposition with a dense propagator: the
    /// generator `(x_m + x_n)(t + C₂)·1 + Δ·(σ_x ⊗ σ_x)` is assembled as a
    /// full 4×4 matrix and exponentiated by scaling-and-squaring. The
    /// commuting pieces make this the exact time-ordered propagator.
    pub fn evolve_dense<T: Scalar>(
        state: &EvolvedState<T>,
        pair: &BellPair<T>,
        flow: &MetricFlow<T>,
        t: T,
    ) -> Result<CVector<T>> {
        let delta = flow.gamma(pair.x_m, t)? + flow.gamma(pair.x_n, t)?;
        let tau = t + flow.params.c2;
        let dynamical = (pair.x_m + pair.x_n) * tau;

        let mut generator = identity::<T>(4).mapv(|z| z * cr(dynamical));
        // σ_x ⊗ σ_x in product coordinates: anti-diagonal ones.
        for (row, col) in [(0usize, 3usize), (1, 2), (2, 1), (3, 0)] {
            generator[[row, col]] += cr(delta);
        }
        let propagator = expm(&generator.mapv(|z| z * C::new(T::zero(), -T::one())))?;

        let chi0 = initial_state(state.theta, pair).chi;
        Ok(propagator.dot(&chi0))
    }

    /// Reduced density of the `m` qubit from a raw four-component state.
    pub fn reduced_from_raw<T: Scalar>(chi: &CVector<T>, t: T, theta: T) -> ReducedDensity<T> {
        let state = EvolvedState { chi: chi.clone(), t, delta: T::zero(), theta };
        partial_trace(&state)
    }
}
