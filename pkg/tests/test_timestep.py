import numpy as np
import pytest

from blockfd import (FOURTH_BLOCK, SECOND_BLOCK, IntegrationBlowupError,
                     SchemeSpec, StepPolicy, build_operator, eigvec_coefficients,
                     exp_cos_problem, ibvp_grid, integrate, integrate_batch,
                     mode_samples, periodic_grid, project, rk4_order_check,
                     rk4_step, spectral_radius_factor, evaluate_rhs)
from blockfd.symbols import SPLIT_PERIODIC_HALF


# --------------------------------------------------------------- rk4_step

def test_scalar_decay_step():
    out = float(rk4_step(lambda t, u: -u, 1.0, 0.0, 0.1))
    assert out == pytest.approx(0.90483750, abs=1e-12)
    gap = abs(out - np.exp(-0.1))
    assert 5e-8 < gap < 1e-7


def test_zero_rhs_keeps_state():
    v = np.array([1.0, -2.0, 3.0])
    np.testing.assert_array_equal(rk4_step(lambda t, u: 0 * u, v, 0.0, 0.5), v)


def test_diagonal_system_decouples():
    lam = np.array([-1.0, -2.0, 0.5])
    v = np.ones(3)
    out = rk4_step(lambda t, u: lam * u, v, 0.0, 0.1)
    for i in range(3):
        scalar = rk4_step(lambda t, u: lam[i] * u, 1.0, 0.0, 0.1)
        assert out[i] == pytest.approx(float(scalar), rel=1e-15)


def test_step_validation_and_blowup():
    with pytest.raises(ValueError):
        rk4_step(lambda t, u: -u, 1.0, 0.0, 0.0)
    with pytest.raises(IntegrationBlowupError):
        rk4_step(lambda t, u: u * np.inf, 1.0, 0.0, 0.1)


def test_temporal_order():
    assert rk4_order_check("decay") == pytest.approx(4.0, abs=0.1)
    assert rk4_order_check("cosine") == pytest.approx(4.0, abs=0.1)
    with pytest.raises(ValueError):
        rk4_order_check("sine")


def test_halving_dt_reduces_error_sixteenfold():
    errs = []
    for dt in (0.1, 0.05):
        u, t = 1.0, 0.0
        for _ in range(round(1.0 / dt)):
            u = rk4_step(lambda t, v: -v, u, t, dt)
            t += dt
        errs.append(abs(float(u) - np.exp(-1.0)))
    assert errs[0] / errs[1] == pytest.approx(16.0, rel=0.05)


# --------------------------------------------------------------- policy

def test_policy_defaults_and_dt():
    g = periodic_grid(16, 1.0)
    assert StepPolicy().dt(g, SECOND_BLOCK) == pytest.approx(0.1 * g.s**2)
    assert StepPolicy().dt(g, FOURTH_BLOCK) == pytest.approx(0.05 * g.s**2)
    assert StepPolicy(kappa=0.2).dt(g, SECOND_BLOCK) == pytest.approx(0.2 * g.s**2)
    with pytest.raises(ValueError):
        StepPolicy(kappa=-1.0).dt(g, SECOND_BLOCK)


def test_spectral_radius_factor_closed_form():
    # second-order block: max|Q| s^2 = (4 - 8c + Delta_max)/2, Delta_max at
    # theta = 0 equals 4(1-2c); at c = -1/4 this gives 6
    assert spectral_radius_factor(SECOND_BLOCK, -0.25) == pytest.approx(6.0, rel=1e-6)
    assert spectral_radius_factor(SECOND_BLOCK, 0.0) == pytest.approx(4.0, rel=1e-6)


@pytest.mark.parametrize("stencil,kappa,cs", [
    (SECOND_BLOCK, 0.1, [0.0, -0.25, 1 / 6, -1 / 6]),
    (FOURTH_BLOCK, 0.05, [0.0, 4 / 13, 1 / 6, -1 / 6]),
])
def test_experiment_configs_inside_stability_interval(stencil, kappa, cs):
    policy = StepPolicy(kappa=kappa)
    for c in cs:
        assert policy.stability_margin(stencil, c) <= 2.78


# --------------------------------------------------------------- integrate

def test_t_end_zero_returns_projection():
    prob = exp_cos_problem("periodic", 2 * np.pi)
    g = periodic_grid(8, 1.0)
    op = build_operator(g, SchemeSpec(SECOND_BLOCK, "periodic", -0.25))
    np.testing.assert_array_equal(integrate(op, prob, 0.0),
                                  project(prob, g, 0.0))


def test_homogeneous_eigenvector_decay():
    # with F = 0, an eigenvector evolves as exp(Q1 t); at this dt the RK4
    # defect C dt^4 |Q1|^5 t sits far below roundoff accumulation
    from blockfd import companion

    N, c = 16, -0.25
    g = periodic_grid(N, 2 * np.pi)
    op = build_operator(g, SchemeSpec(SECOND_BLOCK, "periodic", c))
    rec = eigvec_coefficients(2, g.h, c, SPLIT_PERIODIC_HALF, N=N)
    nu = companion(2, N, SPLIT_PERIODIC_HALF)
    psi = (rec.alpha1 * mode_samples(2, N, SPLIT_PERIODIC_HALF, g.n_points)
           + rec.beta1 * mode_samples(nu, N, SPLIT_PERIODIC_HALF, g.n_points))
    v = np.real(psi)
    t_end, dt = 0.05, 2e-4
    state = v.copy()
    t = 0.0
    for _ in range(round(t_end / dt)):
        state = rk4_step(lambda tt, u: op.matrix @ u, state, t, dt)
        t += dt
    exact = np.exp(rec.q1 * t_end) * v
    rel = np.linalg.norm(state - exact) / np.linalg.norm(exact)
    assert rel <= 1e-12


@pytest.mark.parametrize("bc", ["periodic", "dirichlet", "neumann"])
def test_fast_path_matches_reference_stepper(bc):
    # the banded production kernel is algebraically the same four-stage
    # update as rk4_step on evaluate_rhs
    if bc == "periodic":
        g = periodic_grid(8, 1.0)
        prob = exp_cos_problem("periodic", 2 * np.pi)
    else:
        g = ibvp_grid(8, 1.0)
        prob = exp_cos_problem("ibvp", np.pi)
    op = build_operator(g, SchemeSpec(SECOND_BLOCK, bc, -0.25))
    data = prob.boundary_data(bc, g.L) if bc != "periodic" else None
    nsteps, dt = 25, 1e-4
    policy = StepPolicy(kappa=dt / g.s**2)
    fast = integrate(op, prob, nsteps * dt, policy, data=data)
    ref = project(prob, g, 0.0)
    t = 0.0
    for _ in range(nsteps):
        def rhs(tt, u):
            return evaluate_rhs(op, u, tt, data=data,
                                forcing=np.asarray(prob.forcing(g.points, tt)))
        ref = rk4_step(rhs, ref, t, dt)
        t += dt
    np.testing.assert_allclose(fast, ref, rtol=1e-12, atol=1e-13)


def test_partial_final_step_lands_on_t_end():
    prob = exp_cos_problem("periodic", 2 * np.pi)
    g = periodic_grid(8, 1.0)
    op = build_operator(g, SchemeSpec(SECOND_BLOCK, "periodic", -0.25))
    policy = StepPolicy(kappa=0.1)
    dt = policy.dt(g, SECOND_BLOCK)
    t_end = 10.5 * dt  # forces a half-size last step
    out = integrate(op, prob, t_end, policy)
    ref = project(prob, g, 0.0)
    t = 0.0
    for k in range(10):
        def rhs(tt, u):
            return evaluate_rhs(op, u, tt,
                                forcing=np.asarray(prob.forcing(g.points, tt)))
        ref = rk4_step(rhs, ref, t, dt)
        t += dt
    ref = rk4_step(lambda tt, u: evaluate_rhs(
        op, u, tt, forcing=np.asarray(prob.forcing(g.points, tt))),
        ref, t, t_end - t)
    np.testing.assert_allclose(out, ref, rtol=1e-12, atol=1e-13)


def test_instability_abort_reports_configuration():
    prob = exp_cos_problem("periodic", 2 * np.pi)
    g = periodic_grid(8, 1.0)
    op = build_operator(g, SchemeSpec(SECOND_BLOCK, "periodic", 0.9))
    with pytest.warns(UserWarning):
        with pytest.raises(IntegrationBlowupError) as err:
            integrate(op, prob, 4.0, StepPolicy(kappa=3.0))
    assert err.value.c == 0.9
    assert err.value.N == 8
    assert err.value.dt is not None and err.value.t is not None


def test_batch_requires_shared_configuration():
    prob = exp_cos_problem("periodic", 2 * np.pi)
    g = periodic_grid(8, 1.0)
    op1 = build_operator(g, SchemeSpec(SECOND_BLOCK, "periodic", 0.0))
    op2 = build_operator(g, SchemeSpec(FOURTH_BLOCK, "periodic", 0.0))
    with pytest.raises(ValueError):
        integrate_batch([op1, op2], prob, 0.1)
    with pytest.raises(ValueError):
        integrate_batch([], prob, 0.1)


def test_numpy_fallback_kernel_matches_compiled():
    from blockfd import timestep as ts

    prob = exp_cos_problem("ibvp", np.pi)
    g = ibvp_grid(8, 1.0)
    op = build_operator(g, SchemeSpec(SECOND_BLOCK, "neumann", -0.25))
    fast = integrate(op, prob, 0.003, StepPolicy(kappa=0.1))
    had = ts.HAVE_NUMBA
    try:
        ts.HAVE_NUMBA = False
        slow = integrate(op, prob, 0.003, StepPolicy(kappa=0.1))
    finally:
        ts.HAVE_NUMBA = had
    np.testing.assert_allclose(fast, slow, rtol=1e-13, atol=1e-15)


def test_batch_matches_individual_runs():
    prob = exp_cos_problem("periodic", 2 * np.pi)
    g = periodic_grid(8, 1.0)
    ops = [build_operator(g, SchemeSpec(SECOND_BLOCK, "periodic", c))
           for c in (0.0, -0.25)]
    batch = integrate_batch(ops, prob, 0.01)
    for op, row in zip(ops, batch):
        np.testing.assert_allclose(integrate(op, prob, 0.01), row,
                                   rtol=1e-13)
