"""Semi-discrete spatial operators for the 1-D heat equation.

The periodic operators apply the two-point-block stencils with wraparound.
The Dirichlet/Neumann operators live on the quarter-offset grid and are
produced by mechanical ghost-point elimination: every stencil reference to
a point outside [0, L] is replaced by its mirror-image closure

* Dirichlet, ghost at distance a behind the wall:
  ``u(-a) = -u(a) + 2*g + a^2*uxx + (a^4/12)*uxxxx``
  (the even-derivative terms, truncated to the closure order),
* Neumann: ``u(-a) = u(a) - 2*a*gx + (derivative corrections)``, where
  the uxxx/uxxxxx coefficients are pinned by a compatibility condition
  on the operator's constant mode rather than by plain value
  interpolation (see the note in ``_ghost_rules``),

and the trace terms are collected, with the same 1/s^2 (or 1/(12 s^2))
scaling as the stencil entry they replace, into an affine boundary vector
B(t) = C @ traces(t).  The wall-derivative traces uxx, uxxx, ... are not
extra data: on the wall the PDE turns them into time derivatives of the
boundary data minus forcing traces (uxx = g' - F, uxxx = gx' - F_x, and
again for the next even/odd order), which is how
:class:`BoundaryData` computes them when exact traces are not supplied.

Everything is assembled dense; problem sizes stay in the hundreds of
points, and the time integrator extracts the banded structure itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._stencils import (FOURTH_BLOCK, SECOND_BLOCK, STENCIL_ORDERS,
                        row_patterns)
from .grid import IBVP_QUARTER, PERIODIC_HALF, BlockGrid

PERIODIC = "periodic"
DIRICHLET = "dirichlet"
NEUMANN = "neumann"

#: trace channels of the boundary-vector coefficient matrix, in column order
DIRICHLET_CHANNELS = ("g0", "gL", "uxx0", "uxxL", "uxxxx0", "uxxxxL")
NEUMANN_CHANNELS = ("gx0", "gxL", "uxxx0", "uxxxL", "uxxxxx0", "uxxxxxL")


@dataclass(frozen=True)
class SchemeSpec:
    """Scheme selection: stencil order, boundary condition, free parameter c.

    Construction never fails on large c; instead ``advisories`` carries
    the violated stability bounds (c >= 1/2 breaks von Neumann stability,
    c >= 3/8 the coefficient-determinant bound), so deliberately unstable
    experiments remain expressible.
    """
    stencil_order: str
    bc: str
    c: float

    def __post_init__(self):
        if self.stencil_order not in STENCIL_ORDERS:
            raise ValueError(f"unknown stencil order {self.stencil_order!r}")
        if self.bc not in (PERIODIC, DIRICHLET, NEUMANN):
            raise ValueError(f"unknown boundary condition {self.bc!r}")
        if not math.isfinite(self.c):
            raise ValueError("c must be finite")

    @property
    def advisories(self) -> tuple[str, ...]:
        out = []
        if self.c >= 0.5:
            out.append("c >= 1/2: von Neumann condition violated")
        if self.c >= 0.375:
            out.append("c >= 3/8: coefficient determinant bound violated")
        return tuple(out)


class MissingTraceError(KeyError):
    """A boundary closure asked for a trace the BoundaryData cannot supply."""


class BoundaryData:
    """Time-dependent boundary values and wall-derivative traces.

    ``accessors`` maps channel names (see DIRICHLET_CHANNELS /
    NEUMANN_CHANNELS) to callables of t.  Use the ``for_dirichlet`` /
    ``for_neumann`` constructors to derive the wall-derivative traces
    from boundary data and forcing via the PDE instead of supplying
    them directly.
    """

    def __init__(self, accessors: dict):
        self._accessors = dict(accessors)

    def __contains__(self, name: str) -> bool:
        return name in self._accessors

    def trace(self, name: str, t: float) -> float:
        try:
            fn = self._accessors[name]
        except KeyError:
            raise MissingTraceError(
                f"boundary data lacks the {name!r} trace") from None
        return float(fn(t))

    def trace_vector(self, channels: tuple[str, ...], t) -> np.ndarray:
        """Trace values for the given channels; t may be an array."""
        t = np.asarray(t, dtype=float)
        out = np.zeros((len(channels),) + t.shape)
        for i, name in enumerate(channels):
            if name not in self._accessors:
                raise MissingTraceError(
                    f"boundary data lacks the {name!r} trace")
            out[i] = self._accessors[name](t)
        return out

    @classmethod
    def for_dirichlet(cls, g0, gL, dg0, dgL, forcing_traces,
                      ddg0=None, ddgL=None) -> "BoundaryData":
        """Dirichlet data with uxx/uxxxx traces derived from the PDE.

        ``forcing_traces`` maps names among {"F0","FL","Ft0","FtL",
        "Fxx0","FxxL"} to callables; on the wall uxx = g' - F and
        uxxxx = g'' - F_t - F_xx.  The second time derivatives are only
        needed by the fourth-order closure.
        """
        acc = {
            "g0": g0, "gL": gL,
            "uxx0": lambda t: dg0(t) - forcing_traces["F0"](t),
            "uxxL": lambda t: dgL(t) - forcing_traces["FL"](t),
        }
        if ddg0 is not None:
            acc["uxxxx0"] = lambda t: (ddg0(t) - forcing_traces["Ft0"](t)
                                       - forcing_traces["Fxx0"](t))
        if ddgL is not None:
            acc["uxxxxL"] = lambda t: (ddgL(t) - forcing_traces["FtL"](t)
                                       - forcing_traces["FxxL"](t))
        return cls(acc)

    @classmethod
    def for_neumann(cls, gx0, gxL, dgx0, dgxL, forcing_traces,
                    ddgx0=None, ddgxL=None) -> "BoundaryData":
        """Neumann data with uxxx/uxxxxx traces derived from the PDE.

        On the wall uxxx = gx' - F_x and uxxxxx = gx'' - F_tx - F_xxx.
        """
        acc = {
            "gx0": gx0, "gxL": gxL,
            "uxxx0": lambda t: dgx0(t) - forcing_traces["Fx0"](t),
            "uxxxL": lambda t: dgxL(t) - forcing_traces["FxL"](t),
        }
        if ddgx0 is not None:
            acc["uxxxxx0"] = lambda t: (ddgx0(t) - forcing_traces["Ftx0"](t)
                                        - forcing_traces["Fxxx0"](t))
        if ddgxL is not None:
            acc["uxxxxxL"] = lambda t: (ddgxL(t) - forcing_traces["FtxL"](t)
                                        - forcing_traces["FxxxL"](t))
        return cls(acc)


@dataclass(frozen=True)
class DiscreteOperator:
    """Matrix action of the spatial operator plus its affine boundary term.

    The semi-discrete system is dv/dt = matrix @ v + B(t) + F(t) with
    B(t) = boundary_coeffs @ traces(t) (identically zero for periodic
    operators, where boundary_coeffs is empty).
    """
    grid: BlockGrid
    spec: SchemeSpec
    matrix: np.ndarray = field(repr=False)
    trace_channels: tuple[str, ...]
    boundary_coeffs: np.ndarray = field(repr=False)

    @property
    def n_points(self) -> int:
        return self.grid.n_points

    @property
    def n_boundary_rows(self) -> int:
        """Rows at each end whose stencil was modified by the closure."""
        return 0 if self.spec.bc == PERIODIC else 2

    def boundary_vector(self, t: float, data: BoundaryData | None) -> np.ndarray:
        if self.spec.bc == PERIODIC:
            return np.zeros(self.n_points)
        if data is None:
            raise MissingTraceError(
                f"{self.spec.bc} operator needs BoundaryData")
        traces = data.trace_vector(self.trace_channels, t)
        return self.boundary_coeffs @ traces

    def __post_init__(self):
        self.matrix.setflags(write=False)
        self.boundary_coeffs.setflags(write=False)


def _ghost_rules(bc: str, stencil_order: str, h: float, n: int) -> dict:
    """Elimination rules: ghost index -> (mirror index, sign, trace terms).

    Trace terms map channel column -> coefficient; channels are ordered
    (left value, right value, left low trace, right low trace, left high
    trace, right high trace).  The high-order terms only enter the
    fourth-order block's closure.
    """
    a = h / 4.0
    fourth = stencil_order == FOURTH_BLOCK
    if bc == DIRICHLET:
        lo_near, lo_far = a * a, 9 * a * a
        hi_near = a**4 / 12.0 if fourth else 0.0
        hi_far = 81 * a**4 / 12.0 if fourth else 0.0
        return {
            -1: (0, -1.0, {0: 2.0, 2: lo_near, 4: hi_near}),
            -2: (1, -1.0, {0: 2.0, 2: lo_far, 4: hi_far}),
            n: (n - 1, -1.0, {1: 2.0, 3: lo_near, 5: hi_near}),
            n + 1: (n - 2, -1.0, {1: 2.0, 3: lo_far, 5: hi_far}),
        }
    if bc == NEUMANN:
        # The derivative-trace coefficients are NOT the plain mirror-value
        # Taylor coefficients.  The Neumann operator keeps the constant in
        # its kernel with the plain ones vector as left null vector, so the
        # constant mode integrates s*1'(u_xx - B) over time; B must therefore
        # reproduce the Euler-Maclaurin series of the midpoint sum,
        #   s*sum(u_xx) = [u_x] - (s^2/24)[u_xxx] + (7 s^4/5760)[u_xxxxx],
        # or the solution error stalls at the quadrature order no matter
        # how accurate the rest of the scheme is.  Matching the series
        # (weights below: the two rows touching each ghost sum to 1 for the
        # near ghost and to -1/12 for the far one) pins the coefficients:
        # second-order block (near ghost only):  +a^3/3;
        # fourth-order block: u_xxx terms as interpolated (-a^3/3, -9a^3
        # already match), near u_xxxxx -a^5/60, far +13a^5/60.
        # Mirror-value accuracy is reduced at most to the same order as the
        # closure's own truncation, and the affected derivatives vanish on
        # the polynomial-exactness range, so only the Neumann drift changes.
        val_near, val_far = h / 2.0, 3 * h / 2.0
        if fourth:
            lo_near, lo_far = -a**3 / 3.0, -9 * a**3
            hi_near, hi_far = -a**5 / 60.0, 13 * a**5 / 60.0
        else:
            lo_near, lo_far = a**3 / 3.0, -9 * a**3
            hi_near = hi_far = 0.0
        return {
            -1: (0, 1.0, {0: -val_near, 2: lo_near, 4: hi_near}),
            -2: (1, 1.0, {0: -val_far, 2: lo_far, 4: hi_far}),
            n: (n - 1, 1.0, {1: val_near, 3: -lo_near, 5: -hi_near}),
            n + 1: (n - 2, 1.0, {1: val_far, 3: -lo_far, 5: -hi_far}),
        }
    raise ValueError(f"no ghost rules for bc {bc!r}")


def _assemble(grid: BlockGrid, spec: SchemeSpec):
    n = grid.n_points
    s = grid.s
    even, odd, scale = row_patterns(spec.stencil_order, spec.c)
    matrix = np.zeros((n, n))
    bcoeffs = np.zeros((n, 6))
    periodic = spec.bc == PERIODIC
    rules = None if periodic else _ghost_rules(spec.bc, spec.stencil_order,
                                               grid.h, n)
    for p in range(n):
        pattern = even if p % 2 == 0 else odd
        for d, a in pattern.items():
            w = a * scale / (s * s)
            q = p + d
            if periodic:
                matrix[p, q % n] += w
            elif 0 <= q < n:
                matrix[p, q] += w
            else:
                mirror, sign, traces = rules[q]
                matrix[p, mirror] += sign * w
                for col, tc in traces.items():
                    bcoeffs[p, col] += w * tc
    return matrix, bcoeffs


def _check_size(grid: BlockGrid, spec: SchemeSpec) -> None:
    # 8 points keep the stencils from self-overlapping (periodic) or
    # reaching both walls at once; fourth-order closures need one more block
    need = 10 if (spec.bc != PERIODIC
                  and spec.stencil_order == FOURTH_BLOCK) else 8
    if grid.n_points < need:
        raise ValueError(
            f"grid with {grid.n_points} points is too small for the "
            f"{spec.stencil_order} {spec.bc} operator (needs {need})")


def build_periodic(grid: BlockGrid, spec: SchemeSpec) -> DiscreteOperator:
    """Circulant-block operator on the half-offset periodic grid."""
    if spec.bc != PERIODIC:
        raise ValueError(f"spec bc is {spec.bc!r}, expected periodic")
    if grid.kind != PERIODIC_HALF:
        raise ValueError(f"periodic operator needs a {PERIODIC_HALF} grid, "
                         f"got {grid.kind}")
    _check_size(grid, spec)
    matrix, _ = _assemble(grid, spec)
    return DiscreteOperator(grid=grid, spec=spec, matrix=matrix,
                            trace_channels=(), boundary_coeffs=np.zeros((grid.n_points, 0)))


def _build_ibvp(grid: BlockGrid, spec: SchemeSpec,
                channels: tuple[str, ...]) -> DiscreteOperator:
    if grid.kind != IBVP_QUARTER:
        raise ValueError(f"{spec.bc} operator needs an {IBVP_QUARTER} grid, "
                         f"got {grid.kind}")
    _check_size(grid, spec)
    matrix, bcoeffs = _assemble(grid, spec)
    if spec.stencil_order == SECOND_BLOCK:
        # the second-order closure never touches the high-order traces
        channels = channels[:4]
        bcoeffs = bcoeffs[:, :4].copy()
    return DiscreteOperator(grid=grid, spec=spec, matrix=matrix,
                            trace_channels=channels, boundary_coeffs=bcoeffs)


def build_dirichlet(grid: BlockGrid, spec: SchemeSpec) -> DiscreteOperator:
    """Dirichlet operator via ghost elimination on the quarter grid."""
    if spec.bc != DIRICHLET:
        raise ValueError(f"spec bc is {spec.bc!r}, expected dirichlet")
    return _build_ibvp(grid, spec, DIRICHLET_CHANNELS)


def build_neumann(grid: BlockGrid, spec: SchemeSpec) -> DiscreteOperator:
    """Neumann operator via ghost elimination on the quarter grid."""
    if spec.bc != NEUMANN:
        raise ValueError(f"spec bc is {spec.bc!r}, expected neumann")
    return _build_ibvp(grid, spec, NEUMANN_CHANNELS)


def build_operator(grid: BlockGrid, spec: SchemeSpec) -> DiscreteOperator:
    if spec.bc == PERIODIC:
        return build_periodic(grid, spec)
    if spec.bc == DIRICHLET:
        return build_dirichlet(grid, spec)
    return build_neumann(grid, spec)


def evaluate_rhs(op: DiscreteOperator, state: np.ndarray, t: float,
                 data: BoundaryData | None = None,
                 forcing: np.ndarray | None = None) -> np.ndarray:
    """Right-hand side matrix@state + B(t) + forcing at time t."""
    state = np.asarray(state, dtype=float)
    if state.shape != (op.n_points,):
        raise ValueError(f"state has shape {state.shape}, "
                         f"expected ({op.n_points},)")
    out = op.matrix @ state
    if op.spec.bc != PERIODIC:
        out += op.boundary_vector(t, data)
    if forcing is not None:
        forcing = np.asarray(forcing, dtype=float)
        if forcing.shape != (op.n_points,):
            raise ValueError(f"forcing has shape {forcing.shape}, "
                             f"expected ({op.n_points},)")
        out += forcing
    return out
