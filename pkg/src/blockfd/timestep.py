"""Classical RK4 propagation of the semi-discrete heat systems.

The step size follows dt = kappa * s^2 with a conservative kappa
(defaults 0.1 for the second-order block, 0.05 for the fourth-order
one), so that dt times the worst symbol magnitude stays well inside the
RK4 real-axis stability interval |z| <= 2.78; the margin is a pure
function of (stencil order, c, kappa) because the parasitic symbols
scale exactly like 1/s^2.  Fixed steps keep convergence tables
deterministic; the final step is shortened to land exactly on t_end.

Because the systems are linear with banded operators, the production
loop runs in a compiled kernel over precomputed per-stage forcing and
boundary-trace tables; it is algebraically the same four-stage update as
:func:`rk4_step`, which remains the reference implementation (the test
suite checks the two paths agree to roundoff).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from ._stencils import FOURTH_BLOCK, SECOND_BLOCK, row_multiplier
from .grid import BlockGrid
from .manufactured import ManufacturedProblem, project
from .operators import PERIODIC, BoundaryData, DiscreteOperator

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn
        return wrap if not (args and callable(args[0])) else args[0]

RK4_REAL_AXIS_LIMIT = 2.78
DEFAULT_KAPPA = {SECOND_BLOCK: 0.1, FOURTH_BLOCK: 0.05}

_BAND_REACH = 3
_CHUNK_STEPS = 4096


class IntegrationBlowupError(RuntimeError):
    """Non-finite values appeared during time stepping."""

    def __init__(self, message: str, c: float | None = None,
                 N: int | None = None, dt: float | None = None,
                 t: float | None = None):
        super().__init__(message)
        self.c, self.N, self.dt, self.t = c, N, dt, t


@dataclass(frozen=True)
class StepPolicy:
    """Fixed-step policy dt = kappa * s^2 with t_end snapping.

    ``kappa=None`` picks the per-stencil default.  ``snap=True`` (the
    only supported mode) shortens the final step to land on t_end.
    """
    kappa: float | None = None
    snap: bool = True

    def kappa_for(self, stencil_order: str) -> float:
        k = DEFAULT_KAPPA[stencil_order] if self.kappa is None else self.kappa
        if not k > 0:
            raise ValueError("kappa must be positive")
        return k

    def dt(self, grid: BlockGrid, stencil_order: str) -> float:
        return self.kappa_for(stencil_order) * grid.s ** 2

    def stability_margin(self, stencil_order: str, c: float) -> float:
        """dt * max |symbol|, the quantity that must stay <= 2.78."""
        return self.kappa_for(stencil_order) * spectral_radius_factor(
            stencil_order, c)


def spectral_radius_factor(stencil_order: str, c: float) -> float:
    """max_w |Q(w)| * s^2 over both branches (dimensionless).

    Sampled over the full phase range of the split spectra; the maximum
    always sits on the parasitic branch.
    """
    theta = np.linspace(0.0, np.pi / 2, 1441)
    me_w = row_multiplier(stencil_order, 0, theta, c)
    mo_w = row_multiplier(stencil_order, 1, theta, c)
    me_v = row_multiplier(stencil_order, 0, theta - np.pi, c)
    mo_v = row_multiplier(stencil_order, 1, theta - np.pi, c)
    tr = 0.5 * (me_w + mo_w + me_v + mo_v)
    det = 0.25 * ((me_w + mo_w) * (me_v + mo_v)
                  - (me_v - mo_v) * (me_w - mo_w))
    disc = np.lib.scimath.sqrt(tr * tr - 4 * det)
    lam = np.concatenate([(tr + disc) / 2, (tr - disc) / 2])
    return float(np.abs(lam).max())


# --------------------------------------------------------------------------
# reference step
# --------------------------------------------------------------------------

def rk4_step(rhs, state, t: float, dt: float):
    """One classical four-stage step of state' = rhs(t, state)."""
    if not dt > 0:
        raise ValueError("dt must be positive")
    state = np.asarray(state, dtype=float)
    k1 = np.asarray(rhs(t, state))
    k2 = np.asarray(rhs(t + dt / 2, state + dt / 2 * k1))
    k3 = np.asarray(rhs(t + dt / 2, state + dt / 2 * k2))
    k4 = np.asarray(rhs(t + dt, state + dt * k3))
    out = state + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    if not np.all(np.isfinite(out)):
        raise IntegrationBlowupError(
            f"non-finite state after step at t={t}", dt=dt, t=t)
    return out


def rk4_order_check(problem: str = "decay") -> float:
    """Observed temporal order on a scalar ODE (expected 4).

    ``decay`` integrates u' = -u over [0, 1]; ``cosine`` u' = cos t.
    """
    if problem == "decay":
        rhs = lambda t, u: -u
        exact = np.exp(-1.0)
    elif problem == "cosine":
        rhs = lambda t, u: np.cos(t)
        exact = np.sin(1.0)
    else:
        raise ValueError(f"unknown check problem {problem!r}")
    dts, errs = [], []
    for k in range(3):
        dt = 0.1 / 2 ** k
        n = round(1.0 / dt)
        u = 1.0 if problem == "decay" else 0.0
        t = 0.0
        for i in range(n):
            u = rk4_step(rhs, u, t, dt)
            t += dt
        dts.append(dt)
        errs.append(abs(float(u) - exact))
    slope = np.polyfit(np.log(dts), np.log(errs), 1)[0]
    return float(slope)


# --------------------------------------------------------------------------
# banded production loop
# --------------------------------------------------------------------------

@njit(cache=True)
def _stage(W, btop, bbot, v, f, tr, periodic, has_bc, out):  # pragma: no cover
    n = v.shape[0]
    for p in range(3, n - 3):
        acc = 0.0
        for j in range(7):
            acc += W[p, j] * v[p + j - 3]
        out[p] = acc
    for p in range(3):
        acc = 0.0
        for j in range(7):
            q = p + j - 3
            if q < 0:
                if periodic:
                    acc += W[p, j] * v[q + n]
            else:
                acc += W[p, j] * v[q]
        out[p] = acc
    for p in range(n - 3, n):
        acc = 0.0
        for j in range(7):
            q = p + j - 3
            if q >= n:
                if periodic:
                    acc += W[p, j] * v[q - n]
            else:
                acc += W[p, j] * v[q]
        out[p] = acc
    if has_bc:
        nch = tr.shape[0]
        for r in range(2):
            acc_t = 0.0
            acc_b = 0.0
            for ch in range(nch):
                acc_t += btop[r, ch] * tr[ch]
                acc_b += bbot[r, ch] * tr[ch]
            out[r] += acc_t
            out[n - 2 + r] += acc_b
    for p in range(n):
        out[p] += f[p]


@njit(cache=True)
def _rk4_chunk(W, btop, bbot, state, F, TR, dt, periodic, has_bc):  # pragma: no cover
    ncase, n = state.shape
    nsteps = (F.shape[0] - 1) // 2
    half = 0.5 * dt
    sixth = dt / 6.0
    k1 = np.empty(n)
    k2 = np.empty(n)
    k3 = np.empty(n)
    k4 = np.empty(n)
    w = np.empty(n)
    for ic in range(ncase):
        v = state[ic]
        for step in range(nsteps):
            i0 = 2 * step
            _stage(W[ic], btop[ic], bbot[ic], v, F[i0], TR[i0],
                   periodic, has_bc, k1)
            for p in range(n):
                w[p] = v[p] + half * k1[p]
            _stage(W[ic], btop[ic], bbot[ic], w, F[i0 + 1], TR[i0 + 1],
                   periodic, has_bc, k2)
            for p in range(n):
                w[p] = v[p] + half * k2[p]
            _stage(W[ic], btop[ic], bbot[ic], w, F[i0 + 1], TR[i0 + 1],
                   periodic, has_bc, k3)
            for p in range(n):
                w[p] = v[p] + dt * k3[p]
            _stage(W[ic], btop[ic], bbot[ic], w, F[i0 + 2], TR[i0 + 2],
                   periodic, has_bc, k4)
            for p in range(n):
                v[p] = v[p] + sixth * (k1[p] + 2.0 * (k2[p] + k3[p]) + k4[p])


def _stage_numpy(W, btop, bbot, v, f, tr, periodic, has_bc):
    n = v.shape[0]
    ve = np.empty(n + 6)
    ve[3:-3] = v
    if periodic:
        ve[:3] = v[-3:]
        ve[-3:] = v[:3]
    else:
        ve[:3] = 0.0
        ve[-3:] = 0.0
    out = np.zeros(n)
    for j in range(7):
        out += W[:, j] * ve[j:j + n]
    if has_bc:
        out[:2] += btop @ tr
        out[-2:] += bbot @ tr
    return out + f


def _rk4_chunk_numpy(W, btop, bbot, state, F, TR, dt, periodic, has_bc):
    ncase, n = state.shape
    nsteps = (F.shape[0] - 1) // 2
    for ic in range(ncase):
        v = state[ic]
        for step in range(nsteps):
            i0 = 2 * step
            args = (W[ic], btop[ic], bbot[ic])
            k1 = _stage_numpy(*args, v, F[i0], TR[i0], periodic, has_bc)
            k2 = _stage_numpy(*args, v + dt / 2 * k1, F[i0 + 1], TR[i0 + 1],
                              periodic, has_bc)
            k3 = _stage_numpy(*args, v + dt / 2 * k2, F[i0 + 1], TR[i0 + 1],
                              periodic, has_bc)
            k4 = _stage_numpy(*args, v + dt * k3, F[i0 + 2], TR[i0 + 2],
                              periodic, has_bc)
            v += dt / 6 * (k1 + 2 * (k2 + k3) + k4)


def _band_of(matrix: np.ndarray, periodic: bool) -> np.ndarray:
    """Extract the 7-wide alternating band; exact for both grid kinds."""
    n = matrix.shape[0]
    rows = np.arange(n)
    W = np.zeros((n, 2 * _BAND_REACH + 1))
    for j in range(2 * _BAND_REACH + 1):
        d = j - _BAND_REACH
        if periodic:
            W[:, j] = matrix[rows, (rows + d) % n]
        else:
            ok = (rows + d >= 0) & (rows + d < n)
            W[ok, j] = matrix[rows[ok], rows[ok] + d]
    return W


def _resolve_data(op: DiscreteOperator, problem: ManufacturedProblem,
                  data: BoundaryData | None) -> BoundaryData | None:
    if op.spec.bc == PERIODIC:
        return None
    if data is None:
        return problem.boundary_data(op.spec.bc, op.grid.L)
    return data


def integrate_batch(ops: list[DiscreteOperator], problem: ManufacturedProblem,
                    t_end: float, policy: StepPolicy | None = None,
                    data: BoundaryData | None = None) -> np.ndarray:
    """Propagate several operators that differ only in c, sharing the
    per-stage forcing and trace tables.  Returns states (n_ops, n)."""
    if not ops:
        raise ValueError("need at least one operator")
    grid, spec0 = ops[0].grid, ops[0].spec
    for op in ops[1:]:
        if op.grid is not grid and not np.array_equal(op.grid.points,
                                                      grid.points):
            raise ValueError("batched operators must share one grid")
        if (op.spec.bc, op.spec.stencil_order) != (spec0.bc,
                                                   spec0.stencil_order):
            raise ValueError("batched operators must share bc and stencil")
    policy = policy or StepPolicy()
    margin = max(policy.stability_margin(spec0.stencil_order, op.spec.c)
                 for op in ops)
    if margin > RK4_REAL_AXIS_LIMIT:
        warnings.warn(
            f"dt * max|symbol| = {margin:.2f} exceeds the RK4 stability "
            f"interval {RK4_REAL_AXIS_LIMIT}", stacklevel=2)

    n = grid.n_points
    periodic = spec0.bc == PERIODIC
    data = _resolve_data(ops[0], problem, data)
    x = grid.points

    state = np.empty((len(ops), n))
    state[:] = project(problem, grid, 0.0)
    if t_end == 0:
        return state
    if t_end < 0:
        raise ValueError("t_end must be nonnegative")

    dt = policy.dt(grid, spec0.stencil_order)
    n_full = int(np.floor(t_end / dt + 1e-9))
    rem = t_end - n_full * dt
    if rem <= 1e-9 * dt:
        rem = 0.0

    W = np.stack([_band_of(op.matrix, periodic) for op in ops])
    if periodic:
        btop = np.zeros((len(ops), 2, 1))
        bbot = np.zeros((len(ops), 2, 1))
        channels = ()
    else:
        channels = ops[0].trace_channels
        btop = np.stack([op.boundary_coeffs[:2] for op in ops])
        bbot = np.stack([op.boundary_coeffs[-2:] for op in ops])

    kernel = _rk4_chunk if HAVE_NUMBA else _rk4_chunk_numpy
    half_dt = dt / 2.0

    def run_span(start_step: int, nsteps: int, step_dt: float,
                 t_start: float | None = None):
        if t_start is None:
            times = (2 * start_step + np.arange(2 * nsteps + 1)) * half_dt
        else:
            times = t_start + np.arange(2 * nsteps + 1) * (step_dt / 2.0)
        F = np.ascontiguousarray(np.broadcast_to(
            problem.forcing(x[None, :], times[:, None]),
            (times.size, n)).astype(float))
        if periodic:
            TR = np.zeros((times.size, 1))
        else:
            TR = np.ascontiguousarray(
                data.trace_vector(channels, times).T)
        kernel(W, btop, bbot, state, F, TR, step_dt, periodic, not periodic)
        if not np.all(np.isfinite(state)):
            bad = int(np.argmax(~np.isfinite(state).all(axis=1)))
            t_now = (start_step + nsteps) * dt
            raise IntegrationBlowupError(
                f"integration blew up: c={ops[bad].spec.c}, N={grid.N}, "
                f"dt={step_dt:.3e}, t<={t_now:.6f}",
                c=ops[bad].spec.c, N=grid.N, dt=step_dt, t=t_now)

    done = 0
    while done < n_full:
        span = min(_CHUNK_STEPS, n_full - done)
        run_span(done, span, dt)
        done += span
    if rem > 0.0:
        run_span(n_full, 1, rem, t_start=n_full * dt)
    return state


def integrate(op: DiscreteOperator, problem: ManufacturedProblem,
              t_end: float, policy: StepPolicy | None = None,
              data: BoundaryData | None = None) -> np.ndarray:
    """State at t_end of dv/dt = Qv + B(t) + F(t), v(0) = projection of u."""
    return integrate_batch([op], problem, t_end, policy, data)[0]
