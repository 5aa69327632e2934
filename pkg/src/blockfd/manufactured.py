"""Manufactured solutions: exact u, forcing F = u_t - u_xx, and traces.

The workhorse is the traveling profile u(x, t) = exp(cos(k(x - t))).
It is not a heat-equation solution by itself, so the forcing
F = u_t - u_xx is nonzero by construction; that is the point of the
method: u is known in closed form, so errors can be measured exactly.
Because u depends on x - t only, every time derivative is minus the
next space derivative, and all traces reduce to the spatial derivative
chain, which is hard-coded up to fifth order (the fifth-order Neumann
closure needs u_xxxxx at the walls) and cross-checked against finite
differences in the test suite.

Steady polynomial profiles (F = -u_xx) drive the polynomial-exactness
checks of the boundary closures.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .grid import BlockGrid
from .operators import DIRICHLET, NEUMANN, PERIODIC, BoundaryData

PROBLEM_KIND_PERIODIC = "periodic"
PROBLEM_KIND_IBVP = "ibvp"


@dataclass(frozen=True)
class ManufacturedProblem:
    """Closed-form exact solution with forcing and boundary-trace factories.

    ``derivative(x, t, n)`` is the n-th spatial derivative of u
    (n = 0..5); ``time_derivative(x, t, n)`` is d/dt of the n-th spatial
    derivative and ``time_derivative2`` its second time derivative.  All
    three are exact closed forms, so the PDE-derived trace route agrees
    with the exact traces to roundoff.
    """
    name: str
    kind: str
    derivative: Callable = field(repr=False)
    time_derivative: Callable = field(repr=False)
    time_derivative2: Callable = field(repr=False)
    forcing_impl: Callable | None = field(repr=False, default=None)

    def u(self, x, t):
        return self.derivative(x, t, 0)

    def initial(self, x):
        return self.derivative(x, 0.0, 0)

    def u_t(self, x, t):
        return self.time_derivative(x, t, 0)

    def forcing(self, x, t):
        if self.forcing_impl is not None:
            return self.forcing_impl(x, t)
        return self.time_derivative(x, t, 0) - self.derivative(x, t, 2)

    def forcing_dx(self, x, t, n: int):
        """n-th spatial derivative of the forcing."""
        return self.time_derivative(x, t, n) - self.derivative(x, t, n + 2)

    def forcing_dt(self, x, t, n: int):
        """d/dt of the n-th spatial derivative of the forcing (exact)."""
        return self.time_derivative2(x, t, n) - self.time_derivative(x, t, n + 2)

    def boundary_data(self, bc: str, L: float, exact: bool = True) -> BoundaryData:
        """All traces at x = 0 and x = L that the closures can ask for.

        With ``exact=True`` the wall derivatives are read directly off
        the solution; with ``exact=False`` they are derived from the
        boundary data and forcing via the PDE identities (uxx = g' - F
        and friends).  Both routes agree to roundoff for a consistent
        manufactured problem, which the test suite pins down.
        """
        if bc == PERIODIC:
            return BoundaryData({})
        ends = (0.0, float(L))

        # accessors stay vectorized over t (the integrator precomputes
        # traces for whole spans of stage times at once)
        def dx(point, n):
            return lambda t: self.derivative(point, t, n)

        def dt(point, n):
            return lambda t: self.time_derivative(point, t, n)

        def dt2(point, n):
            return lambda t: self.time_derivative2(point, t, n)

        def fdx(point, n):
            return lambda t: self.forcing_dx(point, t, n)

        def fdt(point, n):
            return lambda t: self.forcing_dt(point, t, n)

        x0, xL = ends
        if bc == DIRICHLET:
            if exact:
                return BoundaryData({
                    "g0": dx(x0, 0), "gL": dx(xL, 0),
                    "uxx0": dx(x0, 2), "uxxL": dx(xL, 2),
                    "uxxxx0": dx(x0, 4), "uxxxxL": dx(xL, 4),
                })
            return BoundaryData.for_dirichlet(
                g0=dx(x0, 0), gL=dx(xL, 0), dg0=dt(x0, 0), dgL=dt(xL, 0),
                ddg0=dt2(x0, 0), ddgL=dt2(xL, 0),
                forcing_traces={
                    "F0": fdx(x0, 0), "FL": fdx(xL, 0),
                    "Ft0": fdt(x0, 0), "FtL": fdt(xL, 0),
                    "Fxx0": fdx(x0, 2), "FxxL": fdx(xL, 2),
                })
        if bc == NEUMANN:
            if exact:
                return BoundaryData({
                    "gx0": dx(x0, 1), "gxL": dx(xL, 1),
                    "uxxx0": dx(x0, 3), "uxxxL": dx(xL, 3),
                    "uxxxxx0": dx(x0, 5), "uxxxxxL": dx(xL, 5),
                })
            return BoundaryData.for_neumann(
                gx0=dx(x0, 1), gxL=dx(xL, 1), dgx0=dt(x0, 1), dgxL=dt(xL, 1),
                ddgx0=dt2(x0, 1), ddgxL=dt2(xL, 1),
                forcing_traces={
                    "Fx0": fdx(x0, 1), "FxL": fdx(xL, 1),
                    "Ftx0": fdt(x0, 1), "FtxL": fdt(xL, 1),
                    "Fxxx0": fdx(x0, 3), "FxxxL": fdx(xL, 3),
                })
        raise ValueError(f"unknown boundary condition {bc!r}")


# --------------------------------------------------------------------------
# exp(cos) traveling profile
# --------------------------------------------------------------------------

def _expcos_term(xi: np.ndarray, n: int) -> np.ndarray:
    """n-th derivative of g(xi) = exp(cos xi), orders 0..5.

    Hard-coded polynomials in (sin, cos) times g; the test suite checks
    them against central finite differences through fifth order.
    """
    cs = np.cos(xi)
    g = np.exp(cs)
    if n == 0:
        return g
    if n == 2:
        return (np.sin(xi) ** 2 - cs) * g
    if n == 4:
        return (cs**4 + 6 * cs**3 + 5 * cs * cs - 5 * cs - 3) * g
    sn = np.sin(xi)
    if n == 1:
        return -sn * g
    if n == 3:
        return sn * cs * (3.0 + cs) * g
    if n == 5:
        return sn * (9.0 - 5 * cs - 25 * cs * cs - 10 * cs**3 - sn**4) * g
    raise ValueError("spatial derivatives available up to order 5")


def exp_cos_problem(kind: str, wavenumber: float) -> ManufacturedProblem:
    """u(x, t) = exp(cos(k (x - t))).

    ``kind`` only labels the intended grid family; the profile itself is
    smooth and periodic with period 2*pi/k, matching the [0, 1] default
    experiments with k = 2*pi (periodic) and k = pi (boundary runs).
    The traveling structure turns time derivatives into space ones:
    d/dt (d/dx)^n u = -(d/dx)^(n+1) u.
    """
    if kind not in (PROBLEM_KIND_PERIODIC, PROBLEM_KIND_IBVP):
        raise ValueError(f"unknown problem kind {kind!r}")
    if not wavenumber > 0:
        raise ValueError("wavenumber must be positive")
    k = float(wavenumber)

    def derivative(x, t, n):
        xi = k * (np.asarray(x, dtype=float) - t)
        return k**n * _expcos_term(xi, n)

    def time_derivative(x, t, n):
        return -derivative(x, t, n + 1)

    def time_derivative2(x, t, n):
        return derivative(x, t, n + 2)

    def forcing_impl(x, t):
        # F = u_t - u_xx = -(u_x + u_xx); one fused evaluation
        xi = k * (np.asarray(x, dtype=float) - t)
        sn, cs = np.sin(xi), np.cos(xi)
        return -np.exp(cs) * (k * (-sn) + k * k * (sn * sn - cs))

    return ManufacturedProblem(
        name=f"exp-cos-{kind}", kind=kind, derivative=derivative,
        time_derivative=time_derivative, time_derivative2=time_derivative2,
        forcing_impl=forcing_impl)


# --------------------------------------------------------------------------
# steady polynomials
# --------------------------------------------------------------------------

def polynomial_problem(coefficients) -> ManufacturedProblem:
    """Steady u(x) = sum_k a_k x^k, degree <= 5; F = -u_xx.

    Exercises the polynomial-exactness invariants of the boundary
    closures (degree 2 for the second-order block, degree 4 for the
    fourth-order one, all with exact boundary data).
    """
    coeffs = np.asarray(coefficients, dtype=float)
    if coeffs.ndim != 1 or coeffs.size == 0:
        raise ValueError("coefficients must be a non-empty 1-D sequence")
    if coeffs.size > 6:
        raise ValueError("degree > 5 exceeds the closures' exactness range")

    def derivative(x, t, n):
        if not 0 <= n <= 5:
            raise ValueError("spatial derivatives available up to order 5")
        d = np.polynomial.polynomial.polyder(coeffs, n) if n else coeffs
        return np.polynomial.polynomial.polyval(np.asarray(x, dtype=float), d)

    def zero(x, t, n):
        return np.zeros(np.shape(np.asarray(x, dtype=float)))

    degree = coeffs.size - 1
    return ManufacturedProblem(
        name=f"poly-deg{degree}", kind=PROBLEM_KIND_IBVP,
        derivative=derivative, time_derivative=zero, time_derivative2=zero)


def project(problem: ManufacturedProblem, grid: BlockGrid, t: float) -> np.ndarray:
    """Pointwise projection of the exact solution onto the grid."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    return np.asarray(problem.u(grid.points, t), dtype=float)


# --------------------------------------------------------------------------
# selection by name (CLI surface)
# --------------------------------------------------------------------------

def problem_by_name(name: str) -> ManufacturedProblem:
    """Problems addressable from the command line.

    ``exp-cos-periodic`` (k = 2*pi), ``exp-cos-ibvp`` (k = pi), or
    ``poly:a0,a1,...`` for steady polynomials.
    """
    if name == "exp-cos-periodic":
        return exp_cos_problem(PROBLEM_KIND_PERIODIC, 2 * np.pi)
    if name == "exp-cos-ibvp":
        return exp_cos_problem(PROBLEM_KIND_IBVP, np.pi)
    if name.startswith("poly:"):
        try:
            coeffs = [float(tok) for tok in name[5:].split(",") if tok]
        except ValueError:
            raise ValueError(f"bad polynomial spec {name!r}") from None
        if not coeffs:
            raise ValueError(f"bad polynomial spec {name!r}")
        return polynomial_problem(coeffs)
    raise ValueError(f"unknown problem {name!r}")
