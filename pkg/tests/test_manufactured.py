import numpy as np
import pytest

from blockfd import (exp_cos_problem, ibvp_grid, periodic_grid,
                     polynomial_problem, problem_by_name, project)


def test_peak_value():
    prob = exp_cos_problem("periodic", 2 * np.pi)
    assert float(prob.u(0.0, 0.0)) == pytest.approx(np.e, rel=1e-15)


def test_forcing_at_origin():
    # u_t(0,0) = 0 and u_xx(0,0) = -k^2 e, so F(0,0) = k^2 e
    k = 2 * np.pi
    prob = exp_cos_problem("periodic", k)
    assert float(prob.forcing(0.0, 0.0)) == pytest.approx(k * k * np.e,
                                                          rel=1e-13)


def test_pde_residual_vanishes():
    prob = exp_cos_problem("ibvp", np.pi)
    rng = np.random.default_rng(42)
    x = rng.uniform(0, 1, 100)
    t = rng.uniform(0, 2, 100)
    resid = prob.u_t(x, t) - prob.derivative(x, t, 2) - prob.forcing(x, t)
    assert np.abs(resid).max() <= 1e-12 * np.abs(prob.forcing(x, t)).max()


@pytest.mark.parametrize("n", range(5))
def test_derivative_chain_against_finite_differences(n):
    # each analytic derivative's x-derivative matches a central difference
    # of the previous one (chain-wise check through fifth order)
    prob = exp_cos_problem("periodic", 2 * np.pi)
    rng = np.random.default_rng(3)
    x = rng.uniform(0, 1, 40)
    t = 0.37
    eps = 1e-5
    fd = (prob.derivative(x + eps, t, n)
          - prob.derivative(x - eps, t, n)) / (2 * eps)
    exact = prob.derivative(x, t, n + 1)
    scale = np.abs(exact).max()
    assert np.abs(fd - exact).max() <= 1e-7 * scale


@pytest.mark.parametrize("n", range(4))
def test_time_derivative_chain(n):
    prob = exp_cos_problem("ibvp", np.pi)
    x = np.linspace(0.1, 0.9, 7)
    eps = 1e-5
    fd = (prob.derivative(x, 0.4 + eps, n)
          - prob.derivative(x, 0.4 - eps, n)) / (2 * eps)
    exact = prob.time_derivative(x, 0.4, n)
    assert np.abs(fd - exact).max() <= 1e-7 * np.abs(exact).max()


def test_trace_identities():
    # uxx(0,t) = g0'(t) - F(0,t) and uxxx(0,t) = gx0'(t) - F_x(0,t)
    prob = exp_cos_problem("ibvp", np.pi)
    for t in (0.0, 0.31, 1.7):
        for x in (0.0, 1.0):
            lhs = float(prob.derivative(x, t, 2))
            rhs = float(prob.time_derivative(x, t, 0) - prob.forcing(x, t))
            assert lhs == pytest.approx(rhs, rel=1e-12)
            lhs = float(prob.derivative(x, t, 3))
            rhs = float(prob.time_derivative(x, t, 1)
                        - prob.forcing_dx(x, t, 1))
            assert lhs == pytest.approx(rhs, rel=1e-12)


def test_polynomial_problems():
    p = polynomial_problem([0.0, 1.0, -1.0])  # x - x^2 = x(1-x) on L=1
    x = np.linspace(0, 1, 5)
    np.testing.assert_allclose(p.forcing(x, 0.0), 2.0)
    p4 = polynomial_problem([0, 0, 0, 0, 1.0])
    np.testing.assert_allclose(p4.forcing(x, 0.0), -12 * x**2)
    const = polynomial_problem([3.0])
    np.testing.assert_allclose(const.forcing(x, 0.0), 0.0)
    data = const.boundary_data("dirichlet", 1.0)
    assert data.trace("g0", 0.5) == 3.0
    assert data.trace("uxx0", 0.5) == 0.0


def test_polynomial_degree_limit():
    with pytest.raises(ValueError):
        polynomial_problem(np.ones(7))
    with pytest.raises(ValueError):
        polynomial_problem([])


def test_projection_basics():
    prob = polynomial_problem([2.0])
    g = periodic_grid(8, 1.0)
    np.testing.assert_array_equal(project(prob, g, 0.0), np.full(18, 2.0))
    pe = exp_cos_problem("periodic", 2 * np.pi)
    np.testing.assert_array_equal(project(pe, g, 0.0),
                                  np.asarray(pe.initial(g.points)))
    with pytest.raises(ValueError):
        project(pe, g, -1.0)


def test_projection_agrees_at_shared_abscissae():
    pe = exp_cos_problem("ibvp", np.pi)
    g1 = ibvp_grid(8, 1.0)
    g2 = ibvp_grid(16, 1.0)
    v1 = project(pe, g1, 0.25)
    v2 = project(pe, g2, 0.25)
    for i, x in enumerate(g1.points):
        close = np.nonzero(np.abs(g2.points - x) < 1e-12)[0]
        for j in close:
            assert v1[i] == pytest.approx(v2[j], abs=1e-15)


def test_problem_by_name():
    assert problem_by_name("exp-cos-periodic").name == "exp-cos-periodic"
    assert problem_by_name("exp-cos-ibvp").name == "exp-cos-ibvp"
    assert problem_by_name("poly:1,0,3").name == "poly-deg2"
    for bad in ("nope", "poly:", "poly:a,b"):
        with pytest.raises(ValueError):
            problem_by_name(bad)
