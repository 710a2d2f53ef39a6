//! Named verification checks over a sampled experiment.
//!
//! Each check measures a residual against a pinned tolerance and reports a
//! pass/fail verdict; the experiment runner's `verify` mode prints one line
//! per check and fails on any gate violation. Findings are measurements that
//! document model behavior without gating.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dynamics::{
    a2_reuse_discrepancy, density_evolution_check, dyson_metric, dyson_transform, flow_ode_oracle,
    hamiltonian, hermitian_target, HamiltonianKind, MetricFlow, Regime,
};
use crate::ensemble::{build_quartet, EnsembleConfig, OperatorQuartet, ProjectedBlock};
use crate::entanglement::{
    entropy_from_lambdas, entropy_trace, evolve, initial_state, lambdas_closed, partial_trace,
    BellPair, Generator,
};
use crate::error::Result;
use crate::figures::time_grid;
use crate::linalg::{
    adjoint, anticommutator, commutator, eigenvalues_general, eigh, expm, hermiticity_residual,
    identity, max_abs, max_abs_diff, outer, scale, vnorm, CVector,
};
use crate::scalar::{ci, cr};
use crate::spectral::{
    bloch_projector, pauli_triple, reduced_operators, schmidt_basis_resampling, BlochVector,
    PauliAxis, ReducedOperators,
};
use crate::{C64, Real};

/// Outcome of one named check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub residual: Real,
    pub tolerance: Real,
    pub passed: bool,
    /// Gates fail the suite; findings only report.
    pub gate: bool,
    pub note: Option<String>,
}

impl CheckResult {
    fn gate(name: &str, residual: Real, tolerance: Real) -> Self {
        Self {
            name: name.to_string(),
            residual,
            tolerance,
            passed: residual < tolerance,
            gate: true,
            note: None,
        }
    }

    /// A control that must *exceed* its threshold to pass (fault injection).
    fn control(name: &str, residual: Real, threshold: Real) -> Self {
        Self {
            name: name.to_string(),
            residual,
            tolerance: threshold,
            passed: residual > threshold,
            gate: true,
            note: Some("fault injection: residual must exceed the threshold".to_string()),
        }
    }

    fn finding(name: &str, residual: Real, note: String) -> Self {
        Self {
            name: name.to_string(),
            residual,
            tolerance: Real::NAN,
            passed: true,
            gate: false,
            note: Some(note),
        }
    }
}

/// Algebra tolerance scaled by the operator magnitude.
pub fn algebra_tolerance(quartet: &OperatorQuartet<Real>) -> Real {
    1e-10 * Real::max(1.0, max_abs(&quartet.u))
}

/// Commutation relations, Casimir identity, Hermiticity and nilpotency of one
/// sampled quartet.
pub fn quartet_checks(block: &ProjectedBlock<Real>, quartet: &OperatorQuartet<Real>) -> Vec<CheckResult> {
    let tol = algebra_tolerance(quartet);
    let two_i = ci(2.0);
    let q = quartet;
    let mut out = Vec::new();

    let ww = block.w.dot(&block.w);
    out.push(CheckResult::gate("w-nilpotency", max_abs(&ww), tol));

    out.push(CheckResult::gate(
        "commutator-rs-equals-2it",
        max_abs(&(commutator(&q.r, &q.s) - scale(&q.t, two_i))),
        tol,
    ));
    out.push(CheckResult::gate(
        "commutator-st-equals-2iru",
        max_abs(&(commutator(&q.s, &q.t) - scale(&q.r.dot(&q.u), two_i))),
        tol,
    ));
    out.push(CheckResult::gate(
        "commutator-tr-equals-2isu",
        max_abs(&(commutator(&q.t, &q.r) - scale(&q.s.dot(&q.u), two_i))),
        tol,
    ));

    let u_comm = [&q.r, &q.s, &q.t]
        .iter()
        .map(|m| max_abs(&commutator(&q.u, m)))
        .fold(0.0, Real::max);
    out.push(CheckResult::gate("casimir-commutes", u_comm, tol));

    let lhs = q.r.dot(&q.r) + q.s.dot(&q.s) + q.t.dot(&q.t);
    let rhs = scale(&q.u, cr(2.0)) + q.u.dot(&q.u);
    out.push(CheckResult::gate("casimir-identity", max_abs_diff(&lhs, &rhs), tol));

    let herm = [&q.r, &q.s, &q.t, &q.u]
        .iter()
        .map(|m| hermiticity_residual(m))
        .fold(0.0, Real::max);
    out.push(CheckResult::gate("quartet-hermiticity", herm, tol));

    let trace_residual = (crate::linalg::trace(&q.u)
        - crate::linalg::trace(&block.wishart_left()) * cr(2.0))
    .norm();
    out.push(CheckResult::gate("u-trace-doubling", trace_residual, tol));
    out
}

/// Shared spectrum of the two Wishart blocks and the pairing identity.
pub fn wishart_checks(block: &ProjectedBlock<Real>, quartet: &OperatorQuartet<Real>) -> Result<Vec<CheckResult>> {
    let tol = algebra_tolerance(quartet);
    let m = block.m();
    let (left, _) = eigh(&block.wishart_left())?;
    let (right, _) = eigh(&block.wishart_right())?;

    let shared = left
        .iter()
        .zip(right.iter())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, Real::max);
    let null = right.iter().skip(m).map(|v| v.abs()).fold(0.0, Real::max);

    Ok(vec![
        CheckResult::gate("wishart-shared-spectrum", shared, tol),
        CheckResult::gate("wishart-null-spectrum", null, tol),
    ])
}

/// Schmidt-basis identities: orthonormality and the adjoint pairing.
pub fn schmidt_checks(
    block: &ProjectedBlock<Real>,
    basis: &crate::spectral::SchmidtBasis<Real>,
) -> Vec<CheckResult> {
    let quartet = build_quartet(block);
    let tol = algebra_tolerance(&quartet);
    let mut out = Vec::new();

    let all: Vec<&CVector<Real>> = basis.x_vecs.iter().chain(basis.y_vecs.iter()).collect();
    let mut gram_residual: Real = 0.0;
    for (i, a) in all.iter().enumerate() {
        for (j, b) in all.iter().enumerate() {
            let g = crate::linalg::vdot(a, b);
            let expect = if i == j { cr(1.0) } else { cr(0.0) };
            gram_residual = gram_residual.max((g - expect).norm());
        }
    }
    out.push(CheckResult::gate("schmidt-orthonormality", gram_residual, tol));

    let wd = block.w_adjoint();
    let mut pairing: Real = 0.0;
    for k in 0..basis.modes() {
        let lhs = wd.dot(&basis.x_vecs[k]);
        let rhs = basis.y_vecs[k].mapv(|z| z * cr(basis.x[k].sqrt()));
        let diff = &lhs - &rhs;
        pairing = pairing.max(vnorm(&diff));
    }
    out.push(CheckResult::gate("schmidt-pairing-identity", pairing, tol));
    out
}

/// Consistency of the analytic reduced operators with the projection of the
/// full ones, and their `±√x` spectra.
pub fn reduction_checks(
    block: &ProjectedBlock<Real>,
    basis: &crate::spectral::SchmidtBasis<Real>,
    ops: &ReducedOperators<Real>,
) -> Result<Vec<CheckResult>> {
    let quartet = build_quartet(block);
    let tol = algebra_tolerance(&quartet);
    let v = basis.isometry();
    let vd = adjoint(&v);

    let projection = [
        (&quartet.r, &ops.r_hat),
        (&quartet.s, &ops.s_hat),
        (&quartet.t, &ops.t_hat),
        (&quartet.u, &ops.u_hat),
    ]
    .iter()
    .map(|(full, reduced)| max_abs_diff(&vd.dot(*full).dot(&v), reduced))
    .fold(0.0, Real::max);

    // r̂ and ŝ carry ±√x_k; t̂ is diagonal with ±x_k.
    let sorted = |mut v: Vec<Real>| {
        v.sort_by(|a, b| b.partial_cmp(a).unwrap());
        v
    };
    let sqrt_pairs = sorted(ops.x.iter().flat_map(|&x| [x.sqrt(), -x.sqrt()]).collect());
    let full_pairs = sorted(ops.x.iter().flat_map(|&x| [x, -x]).collect());
    let mut spectrum: Real = 0.0;
    for (mat, expected) in [
        (&ops.r_hat, &sqrt_pairs),
        (&ops.s_hat, &sqrt_pairs),
        (&ops.t_hat, &full_pairs),
    ] {
        let (vals, _) = eigh(mat)?;
        for (v, e) in vals.iter().zip(expected.iter()) {
            spectrum = spectrum.max((v - e).abs());
        }
    }

    Ok(vec![
        CheckResult::gate("projection-consistency", projection, tol),
        CheckResult::gate("reduced-spectrum-pairing", spectrum, tol),
    ])
}

/// Pauli algebra of the generator triple plus the conjugation identity and
/// the Bloch projector.
pub fn generator_checks(ops: &ReducedOperators<Real>) -> Result<Vec<CheckResult>> {
    let tol = 1e-10;
    let g = pauli_triple(ops)?;
    let gs = [&g.g1, &g.g2, &g.g3];
    let dim = g.dim();
    let eye = identity::<Real>(dim);
    let mut out = Vec::new();

    let mut anti: Real = 0.0;
    for (i, gi) in gs.iter().enumerate() {
        for (j, gj) in gs.iter().enumerate() {
            let expect = if i == j {
                scale(&eye, cr(2.0))
            } else {
                crate::linalg::CMatrix::zeros((dim, dim))
            };
            anti = anti.max(max_abs_diff(&anticommutator(gi, gj), &expect));
        }
    }
    out.push(CheckResult::gate("pauli-anticommutators", anti, tol));

    let comm = max_abs(&(commutator(&g.g1, &g.g2) - scale(&g.g3, ci(2.0))))
        .max(max_abs(&(commutator(&g.g2, &g.g3) - scale(&g.g1, ci(2.0)))))
        .max(max_abs(&(commutator(&g.g3, &g.g1) - scale(&g.g2, ci(2.0)))));
    out.push(CheckResult::gate("pauli-commutators", comm, tol));

    let unitary = gs
        .iter()
        .map(|gi| max_abs_diff(&gi.dot(&adjoint(gi)), &eye).max(hermiticity_residual(gi)))
        .fold(0.0, Real::max);
    out.push(CheckResult::gate("pauli-unitarity", unitary, tol));

    // Conjugation identity at a fixed parameter against both routes.
    let a = 0.3;
    let mut bch_closed: Real = 0.0;
    let mut bch_oracle: Real = 0.0;
    let axes = [
        (PauliAxis::X, PauliAxis::Y, &g.g2, &g.g3, 1.0),
        (PauliAxis::Y, PauliAxis::Z, &g.g3, &g.g1, 1.0),
        (PauliAxis::Z, PauliAxis::X, &g.g1, &g.g2, 1.0),
    ];
    for (i, j, gj, gk, sign) in axes {
        let result = crate::spectral::bch_conjugate(&g, a, i, j)?;
        let closed = scale(gj, cr((2.0 * a).cosh())) + scale(gk, ci(sign * (2.0 * a).sinh()));
        bch_closed = bch_closed.max(max_abs_diff(&result, &closed));

        let gi = g.axis(i);
        let e_plus = expm(&scale(gi, cr(a)))?;
        let e_minus = expm(&scale(gi, cr(-a)))?;
        bch_oracle = bch_oracle.max(max_abs_diff(&result, &e_plus.dot(gj).dot(&e_minus)));
    }
    out.push(CheckResult::gate("conjugation-closed-form", bch_closed, tol));
    out.push(CheckResult::gate("conjugation-exponential-oracle", bch_oracle, tol));

    let bloch = BlochVector::new(0.8, 1.3)?;
    let p = bloch_projector(ops, &bloch)?;
    out.push(CheckResult::gate("bloch-idempotency", max_abs_diff(&p.dot(&p), &p), tol));
    let trace_residual = (crate::linalg::trace(&p) - cr(ops.modes() as Real)).norm();
    out.push(CheckResult::gate("bloch-trace", trace_residual, tol));

    let m = ops.modes();
    let mut eig_res: Real = 0.0;
    for k in 0..m {
        let mut v: CVector<Real> = CVector::zeros(2 * m);
        v[k] = cr((0.8f64 / 2.0).cos());
        v[m + k] = C64::from_polar((0.8f64 / 2.0).sin(), 1.3);
        let pv = p.dot(&v);
        let diff = &pv - &v;
        eig_res = eig_res.max(vnorm(&diff));
    }
    out.push(CheckResult::gate("bloch-pure-eigenvectors", eig_res, tol));
    Ok(out)
}

/// Closed-form spectra of both Hamiltonians against dense diagonalization.
pub fn spectrum_checks(
    ops: &ReducedOperators<Real>,
    coupling: &crate::dynamics::CouplingParams<Real>,
) -> Result<Vec<CheckResult>> {
    let tol = 1e-9;
    let mut out = Vec::new();
    for kind in [HamiltonianKind::A1, HamiltonianKind::A2] {
        let pair = hamiltonian(ops, coupling, kind)?;
        let direct = eigenvalues_general(&pair.matrix)?;
        let closed = pair.closed_form_spectrum();
        let residual = direct
            .iter()
            .zip(closed.iter())
            .map(|(d, c)| (d - c).norm())
            .fold(0.0, Real::max);
        out.push(CheckResult::gate(
            &format!("spectrum-closed-form-{}", kind.label()),
            residual,
            tol,
        ));
    }
    Ok(out)
}

/// Closed-form flow against the step-halving integrator plus the analytic
/// flow identities.
pub fn flow_checks(
    ops: &ReducedOperators<Real>,
    coupling: &crate::dynamics::CouplingParams<Real>,
) -> Result<Vec<CheckResult>> {
    let flow = MetricFlow::new(*coupling)?;
    let mut out = Vec::new();

    // Oracle comparison on the sampled eigenvalues.
    let grid = time_grid(0.0, 10.0, 51);
    let mut oracle_residual: Real = 0.0;
    for &x in &ops.x {
        let init = (flow.alpha(x, 0.0)?, flow.beta(x, 0.0)?);
        let traj = flow_ode_oracle(coupling, HamiltonianKind::A1, x, &grid, init)?;
        for (k, &t) in grid.iter().enumerate() {
            oracle_residual = oracle_residual.max((traj.alpha[k] - flow.alpha(x, t)?).abs());
            oracle_residual = oracle_residual.max((traj.beta[k] - flow.beta(x, t)?).abs());
        }
    }
    out.push(CheckResult::gate("flow-vs-ode-oracle", oracle_residual, 1e-6));

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let d = coupling.d();

    // Second differences of σ against the oscillator equation. In the
    // growing regime σ is exponentially large, so the residual is normalized
    // by the equation's own scale there.
    let h = 1e-4;
    let mut sigma_residual: Real = 0.0;
    for _ in 0..100 {
        let x = rng.gen_range(0.5..10.0);
        let t = rng.gen_range(0.1..10.0);
        let s0 = flow.sigma(x, t - h)?;
        let s1 = flow.sigma(x, t)?;
        let s2 = flow.sigma(x, t + h)?;
        let second = (s2 - 2.0 * s1 + s0) / (h * h);
        let residual = (second + 4.0 * x * d * s1).abs();
        let scaled = match coupling.regime() {
            Regime::Broken => residual / (1.0 + (4.0 * x * d * s1).abs()),
            _ => residual,
        };
        sigma_residual = sigma_residual.max(scaled);
    }
    out.push(CheckResult::gate("sigma-harmonic-oscillator", sigma_residual, 1e-5));

    // Central differences of β against its flow equation.
    let hd = 1e-5;
    let mut beta_dot_residual: Real = 0.0;
    for _ in 0..100 {
        let x = rng.gen_range(0.5..10.0);
        let t = rng.gen_range(0.1..10.0);
        let numeric = (flow.beta(x, t + hd)? - flow.beta(x, t - hd)?) / (2.0 * hd);
        beta_dot_residual = beta_dot_residual.max((numeric - flow.beta_dot(x, t)?).abs());
    }
    out.push(CheckResult::gate("beta-derivative-equation", beta_dot_residual, 1e-6));

    // tanh(2αx) from the inverted flow equation (real spectrum only).
    if coupling.regime() == Regime::Unbroken {
        let (b, c) = (coupling.b, coupling.c);
        let mut inversion: Real = 0.0;
        for _ in 0..100 {
            let x = rng.gen_range(0.5..10.0);
            let t = rng.gen_range(0.1..10.0);
            let beta_dot = flow.beta_dot(x, t)?;
            let lhs = (2.0 * flow.alpha(x, t)? * x).tanh();
            let rhs = (-b * c + beta_dot * (b * b - c * c + beta_dot * beta_dot).sqrt())
                / (b * b + beta_dot * beta_dot);
            inversion = inversion.max((lhs - rhs).abs());
        }
        out.push(CheckResult::gate("flow-inversion-identity", inversion, 1e-8));
    }

    // ν from the solved expression vs its definition.
    let mut nu_residual: Real = 0.0;
    for _ in 0..100 {
        let x = rng.gen_range(0.5..10.0);
        let t = rng.gen_range(0.0..10.0);
        nu_residual = nu_residual.max((flow.nu(x, t)? - flow.nu_from_definition(x, t)?).abs());
    }
    out.push(CheckResult::gate("nu-consistency", nu_residual, 1e-8));

    // Continuity of γ on a fine grid.
    let dt = 1e-3;
    let mut continuity_ratio: Real = 0.0;
    for &x in &ops.x {
        let nu_max = (0..=10_000)
            .map(|k| flow.nu(x, dt * k as Real).unwrap_or(0.0))
            .fold(0.0, Real::max);
        let bound = 2.0 * x.sqrt() * nu_max * dt;
        let mut prev = flow.gamma(x, 0.0)?;
        for k in 1..=10_000 {
            let g = flow.gamma(x, dt * k as Real)?;
            continuity_ratio = continuity_ratio.max((g - prev).abs() / bound);
            prev = g;
        }
    }
    out.push(CheckResult::gate("gamma-continuity", continuity_ratio, 1.0));

    Ok(out)
}

/// Metric identity checks: removal of the non-Hermitian terms, Hermiticity of
/// the image, and the frozen-derivative fault injection.
pub fn dyson_checks(
    ops: &ReducedOperators<Real>,
    coupling: &crate::dynamics::CouplingParams<Real>,
) -> Result<Vec<CheckResult>> {
    let flow = MetricFlow::new(*coupling)?;
    let pair = hamiltonian(ops, coupling, HamiltonianKind::A1)?;
    let tol = 1e-8 * (1.0 + max_abs(&ops.u_hat));
    // Outside the oscillatory regime the metric's condition number grows
    // exponentially in time; stay inside the invertibility ceiling.
    let t_end = match coupling.regime() {
        Regime::Unbroken => 5.0,
        _ => 2.0,
    };
    let grid = time_grid(0.0, t_end, 50);

    let mut identity_residual: Real = 0.0;
    let mut herm_residual: Real = 0.0;
    let mut control_residual = Real::INFINITY;
    let zero = crate::linalg::CMatrix::zeros(pair.matrix.dim());
    for &t in &grid {
        let (mu, mu_dot) = dyson_metric(ops, &flow, t)?;
        let h = dyson_transform(&pair, &mu, &mu_dot)?;
        let target = hermitian_target(ops, &flow, t)?;
        identity_residual = identity_residual.max(max_abs_diff(&h, &target));
        herm_residual = herm_residual.max(hermiticity_residual(&h));

        let h_frozen = dyson_transform(&pair, &mu, &zero)?;
        control_residual = control_residual.min(max_abs_diff(&h_frozen, &target));
    }

    Ok(vec![
        CheckResult::gate("dyson-removes-non-hermitian-terms", identity_residual, tol),
        CheckResult::gate("dyson-image-hermiticity", herm_residual, tol),
        CheckResult::control("dyson-frozen-derivative-control", control_residual, 1e-3),
    ])
}

/// Twin density-matrix integration and its fault injection.
pub fn density_checks(
    ops: &ReducedOperators<Real>,
    coupling: &crate::dynamics::CouplingParams<Real>,
) -> Result<Vec<CheckResult>> {
    let flow = MetricFlow::new(*coupling)?;
    let pair = hamiltonian(ops, coupling, HamiltonianKind::A1)?;
    let m = ops.modes();
    let mut v: CVector<Real> = CVector::zeros(2 * m);
    let theta = std::f64::consts::FRAC_PI_2;
    v[0] = cr((theta / 2.0).cos());
    v[m] = cr((theta / 2.0).sin());
    let rho0 = outer(&v, &v);
    // The conjugation amplifies integration error by the metric condition
    // number, which grows exponentially outside the oscillatory regime; keep
    // the window where that amplification stays well inside the tolerance.
    let t_end = match coupling.regime() {
        Regime::Unbroken => 5.0,
        _ => 1.5,
    };
    let grid = time_grid(0.0, t_end, 21);

    let report = density_evolution_check(&pair, ops, &flow, &rho0, &grid, false)?;
    let control = density_evolution_check(&pair, ops, &flow, &rho0, &grid, true)?;

    Ok(vec![
        CheckResult::gate("density-twin-spectral-match", report.worst(), 1e-6),
        CheckResult::control("density-frozen-derivative-control", control.worst(), 1e-3),
    ])
}

/// Bell-state evolution against the dense propagator, the reduced closed
/// form against explicit contraction, and the generator equivalence.
pub fn entanglement_checks(
    ops: &ReducedOperators<Real>,
    coupling: &crate::dynamics::CouplingParams<Real>,
    theta: Real,
    m_index: usize,
    n_index: usize,
) -> Result<Vec<CheckResult>> {
    let flow = MetricFlow::new(*coupling)?;
    let mut out = Vec::new();

    let r_pair = BellPair::new(ops, Generator::R, m_index, n_index)?;
    let t_pair = BellPair::new(ops, Generator::T, m_index, n_index)?;
    let state = initial_state(theta, &r_pair);
    let grid = time_grid(0.0, 10.0, 101);

    let mut dense_residual: Real = 0.0;
    let mut unitarity: Real = 0.0;
    for &t in &grid {
        let evolved = evolve(&state, &r_pair, &flow, t)?;
        let dense = crate::entanglement::oracle::evolve_dense(&state, &r_pair, &flow, t)?;
        for idx in 0..4 {
            dense_residual = dense_residual.max((evolved.chi[idx] - dense[idx]).norm());
        }
        unitarity = unitarity.max((vnorm(&evolved.chi) - 1.0).abs());
    }
    out.push(CheckResult::gate("evolution-dense-oracle", dense_residual, 1e-10));
    out.push(CheckResult::gate("state-unitarity", unitarity, 1e-12));

    // Closed-form eigenvalues against brute-force evolution plus contraction
    // for random mixing angles and rotations.
    let mut rng = ChaCha8Rng::seed_from_u64(0xface);
    let mut contraction_residual: Real = 0.0;
    let eye4 = identity::<Real>(4);
    for _ in 0..1000 {
        let th = rng.gen_range(0.0..std::f64::consts::PI);
        let delta = rng.gen_range(-10.0..10.0);

        let mut generator = eye4.mapv(|z| z * cr(0.0));
        for (row, col) in [(0usize, 3usize), (1, 2), (2, 1), (3, 0)] {
            generator[[row, col]] = cr(delta);
        }
        let propagator = expm(&generator.mapv(|z| z * ci(-1.0)))?;
        let chi0 = initial_state(th, &r_pair).chi;
        let chi = propagator.dot(&chi0);
        let rho = crate::entanglement::oracle::reduced_from_raw(&chi, 0.0, th);

        let (l1, l2) = lambdas_closed(th, delta);
        contraction_residual = contraction_residual
            .max((rho.lambda1 - l1.max(l2)).abs())
            .max((rho.lambda2 - l1.min(l2)).abs());
    }
    out.push(CheckResult::gate("reduced-closed-vs-contraction", contraction_residual, 1e-10));

    let r_trace = entropy_trace(&flow, &r_pair, theta, &grid)?;
    let t_trace = entropy_trace(&flow, &t_pair, theta, &grid)?;
    let mut equivalence: Real = 0.0;
    let mut bound: Real = 0.0;
    for (a, b) in r_trace.records.iter().zip(t_trace.records.iter()) {
        equivalence = equivalence.max((a.entropy - b.entropy).abs());
        bound = bound.max(a.entropy - std::f64::consts::LN_2);
    }
    out.push(CheckResult::gate("generator-equivalence", equivalence, 1e-10));
    out.push(CheckResult::gate("entropy-bound", bound.max(0.0), 1e-12));

    // Explicit contraction agrees with the closed form along the actual
    // trajectory too.
    let mut trajectory_residual: Real = 0.0;
    for &t in grid.iter().take(25) {
        let evolved = evolve(&state, &r_pair, &flow, t)?;
        let rho = partial_trace(&evolved);
        let (l1, l2) = lambdas_closed(theta, evolved.delta);
        trajectory_residual = trajectory_residual.max((rho.lambda1 - l1.max(l2)).abs());
        let s_closed = entropy_from_lambdas(l1, l2)?;
        let s_contract = crate::entanglement::von_neumann(&rho)?;
        trajectory_residual = trajectory_residual.max((s_closed - s_contract).abs());
    }
    out.push(CheckResult::gate("trajectory-closed-vs-contraction", trajectory_residual, 1e-10));

    Ok(out)
}

/// Measured drift of the second metric ansatz's asserted closed-form reuse.
///
/// The reuse `(δ, ζ) = (√x α, β)` satisfies the second flow system only at
/// `x = 1`; the drift at the sampled eigenvalues is a property of the model
/// worth reporting, not a defect gate.
pub fn a2_reuse_finding(
    ops: &ReducedOperators<Real>,
    coupling: &crate::dynamics::CouplingParams<Real>,
) -> Result<CheckResult> {
    let grid = time_grid(0.0, 2.0, 41);
    let mut worst: Real = 0.0;
    for &x in &ops.x {
        worst = worst.max(a2_reuse_discrepancy(coupling, x, &grid)?);
    }
    let control = a2_reuse_discrepancy(coupling, 1.0, &grid)?;
    Ok(CheckResult::finding(
        "second-ansatz-closed-form-reuse",
        worst,
        format!(
            "max drift {worst:.3e} from the true flow at the sampled eigenvalues \
             (control at x = 1: {control:.3e}); the reuse only reproduces the \
             rotation phases, not the flow parameters themselves"
        ),
    ))
}

/// Inputs for one verification run.
#[derive(Debug, Clone)]
pub struct VerifySetup {
    pub ensemble: EnsembleConfig,
    pub coupling: crate::dynamics::CouplingParams<Real>,
    pub theta: Real,
    pub m_index: usize,
    pub n_index: usize,
}

/// Everything the runner reports about one verification run.
#[derive(Debug, Clone)]
pub struct VerifyOutcome {
    pub results: Vec<CheckResult>,
    pub x: Vec<Real>,
    pub regime: Regime,
    pub resamples: usize,
}

impl VerifyOutcome {
    pub fn all_gates_pass(&self) -> bool {
        self.results.iter().all(|c| !c.gate || c.passed)
    }
}

/// Runs the full verification suite for one sampled experiment.
pub fn run_suite(setup: &VerifySetup) -> Result<VerifyOutcome> {
    let (basis, block, resamples) = schmidt_basis_resampling::<Real>(&setup.ensemble, 16)?;
    let quartet = build_quartet(&block);
    let ops = reduced_operators(&basis);

    let mut results = Vec::new();
    results.extend(quartet_checks(&block, &quartet));
    results.extend(wishart_checks(&block, &quartet)?);
    results.extend(schmidt_checks(&block, &basis));
    results.extend(reduction_checks(&block, &basis, &ops)?);
    results.extend(generator_checks(&ops)?);
    results.extend(spectrum_checks(&ops, &setup.coupling)?);
    results.extend(flow_checks(&ops, &setup.coupling)?);
    results.extend(dyson_checks(&ops, &setup.coupling)?);
    results.extend(density_checks(&ops, &setup.coupling)?);
    results.extend(entanglement_checks(
        &ops,
        &setup.coupling,
        setup.theta,
        setup.m_index,
        setup.n_index,
    )?);
    results.push(a2_reuse_finding(&ops, &setup.coupling)?);

    Ok(VerifyOutcome {
        results,
        x: ops.x.clone(),
        regime: setup.coupling.regime(),
        resamples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::CouplingParams;
    use crate::ensemble::ScalarClass;

    #[test]
    fn full_suite_passes_on_reference_configuration() {
        let setup = VerifySetup {
            ensemble: EnsembleConfig::new(6, 2, 7, ScalarClass::Complex).unwrap(),
            coupling: CouplingParams::new(1.2, 1.0, 2.0, 0.0).unwrap(),
            theta: std::f64::consts::FRAC_PI_2,
            m_index: 1,
            n_index: 2,
        };
        let outcome = run_suite(&setup).unwrap();
        for check in &outcome.results {
            assert!(
                !check.gate || check.passed,
                "gate failed: {} residual {:.3e} tol {:.3e}",
                check.name,
                check.residual,
                check.tolerance
            );
        }
        assert!(outcome.all_gates_pass());
        // The reuse finding is present and reports a visible drift.
        let finding = outcome
            .results
            .iter()
            .find(|c| !c.gate)
            .expect("finding present");
        assert!(finding.residual > 1e-4);
    }

    #[test]
    fn suite_covers_broken_regime() {
        let setup = VerifySetup {
            ensemble: EnsembleConfig::new(6, 2, 11, ScalarClass::Complex).unwrap(),
            coupling: CouplingParams::new(1.0, 1.2, 2.0, 0.0).unwrap(),
            theta: std::f64::consts::FRAC_PI_2,
            m_index: 1,
            n_index: 2,
        };
        let outcome = run_suite(&setup).unwrap();
        assert!(outcome.all_gates_pass(), "{:#?}", outcome.results.iter().filter(|c| c.gate && !c.passed).collect::<Vec<_>>());
        assert_eq!(outcome.regime, Regime::Broken);
    }
}
