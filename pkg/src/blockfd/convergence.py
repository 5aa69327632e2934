"""Error norms, truncation measurement, order fitting, study orchestration.

The error norm is the s-weighted discrete L2 norm sqrt(s * sum |.|^2) in
which all stability bounds are stated.  A convergence study integrates a
(scheme, bc, c, N) matrix of configurations against a manufactured
solution, measures the error at t_end, and fits observed orders both
pairwise (consecutive rows) and by least squares over each c group.

The truncation profile splits the operator defect u_xx - (Q u + B) into
its interior part (pointwise O(h), driven by the odd c-terms) and the
boundary difference T_B (the extra defect of the closure rows relative
to the unconstrained interior stencil, pointwise O(h^2)).  The study's
central measurement is that the c = -1/4 solution error converges two
orders faster than that interior truncation.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field

import numpy as np

from ._stencils import SECOND_BLOCK, row_patterns
from .grid import ibvp_grid, periodic_grid
from .manufactured import ManufacturedProblem, project
from .operators import PERIODIC, DiscreteOperator, SchemeSpec, build_operator
from .symbols import (SPLIT_IBVP, ModalBasis, _alternating_eigenvalue,
                      _edge_mode_eigenvalues, eigvec_coefficients)
from .timestep import StepPolicy, integrate_batch

CSV_COLUMNS = ("scheme", "bc", "c", "N", "s", "error", "observed_order")


def error_norm(v: np.ndarray, u_proj: np.ndarray, s: float) -> float:
    """s-weighted discrete L2 norm of v - u_proj."""
    v = np.asarray(v, dtype=float)
    u_proj = np.asarray(u_proj, dtype=float)
    if v.shape != u_proj.shape:
        raise ValueError(f"length mismatch {v.shape} vs {u_proj.shape}")
    d = v - u_proj
    return float(np.sqrt(s * np.dot(d, d)))


def observed_order(errors, spacings) -> float:
    """Least-squares slope of log(error) against log(spacing)."""
    errors = np.asarray(errors, dtype=float)
    spacings = np.asarray(spacings, dtype=float)
    if errors.size < 2 or errors.size != spacings.size:
        raise ValueError("need at least two matching (error, spacing) rows")
    if np.any(errors <= 0) or np.any(spacings <= 0):
        raise ValueError("errors and spacings must be positive")
    return float(np.polyfit(np.log(spacings), np.log(errors), 1)[0])


# --------------------------------------------------------------------------
# truncation measurement
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class TruncationProfile:
    """Operator defect on the exact solution at one resolution.

    ``t_e`` is the full defect vector, ``t_b`` its boundary-difference
    part (defect of the closure rows minus the free interior stencil's
    defect at the same points; zero away from the walls).  Max-abs
    summaries feed the slope fits across resolutions.
    """
    N: int
    s: float
    t_e: np.ndarray = field(repr=False)
    t_b: np.ndarray = field(repr=False)
    interior_max: float
    interior_norm: float
    boundary_max: float


def _interior_defect(op: DiscreteOperator, problem: ManufacturedProblem,
                     t: float) -> np.ndarray:
    """u_xx - (interior stencil applied with analytic off-grid samples)."""
    grid = op.grid
    even, odd, scale = row_patterns(op.spec.stencil_order, op.spec.c)
    n = grid.n_points
    reach = 3
    xe = np.concatenate([
        grid.points[0] + grid.s * np.arange(-reach, 0),
        grid.points,
        grid.points[-1] + grid.s * np.arange(1, reach + 1),
    ])
    ue = np.asarray(problem.u(xe, t), dtype=float)
    acc = np.zeros(n)
    for parity, pattern in ((0, even), (1, odd)):
        rows = np.arange(parity, n, 2)
        for d, a in pattern.items():
            acc[rows] += a * ue[rows + reach + d]
    acc *= scale / grid.s**2
    return np.asarray(problem.derivative(grid.points, t, 2),
                      dtype=float) - acc


def truncation_vector(op: DiscreteOperator, problem: ManufacturedProblem,
                      t: float = 0.0) -> TruncationProfile:
    """Pointwise defect of the exact solution under the discrete operator."""
    grid = op.grid
    u_proj = project(problem, grid, t)
    uxx = np.asarray(problem.derivative(grid.points, t, 2), dtype=float)
    applied = op.matrix @ u_proj
    if op.spec.bc != PERIODIC:
        applied = applied + op.boundary_vector(
            t, problem.boundary_data(op.spec.bc, grid.L))
    t_e = uxx - applied
    nb = op.n_boundary_rows
    if nb:
        t_b = t_e - _interior_defect(op, problem, t)
        t_b[nb:-nb] = 0.0  # closure rows are the entire support
        interior = t_e[nb:-nb]
    else:
        t_b = np.zeros_like(t_e)
        interior = t_e
    return TruncationProfile(
        N=grid.N, s=grid.s, t_e=t_e, t_b=t_b,
        interior_max=float(np.abs(interior).max()),
        interior_norm=float(np.sqrt(grid.s * np.dot(interior, interior))),
        boundary_max=float(np.abs(t_b).max()))


# --------------------------------------------------------------------------
# convergence studies
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class StudyRow:
    scheme: str
    bc: str
    c: float
    N: int
    s: float
    error: float
    observed_order: float | None  # vs the previous row of the same c group


@dataclass(frozen=True)
class ConvergenceReport:
    rows: tuple[StudyRow, ...]
    problem: str
    t_end: float
    kappa: float
    fitted_orders: dict  # c -> least-squares slope over the group

    def group(self, c: float) -> list[StudyRow]:
        return [r for r in self.rows if r.c == c]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.rows:
            w.writerow([
                r.scheme, r.bc, repr(r.c), r.N, repr(r.s),
                f"{r.error:.16e}",
                "" if r.observed_order is None else f"{r.observed_order:.6f}",
            ])
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps({
            "metadata": {
                "problem": self.problem,
                "t_end": self.t_end,
                "kappa": self.kappa,
                "fitted_orders": {repr(c): o
                                  for c, o in self.fitted_orders.items()},
            },
            "rows": [asdict(r) for r in self.rows],
        }, indent=2)


def run_study(scheme: str, bc: str, c_values, N_values,
              problem: ManufacturedProblem, t_end: float = 1.0,
              policy: StepPolicy | None = None, L: float = 1.0) -> ConvergenceReport:
    """Integrate every (c, N) configuration and fit observed orders.

    Rows are grouped by c and sorted by N ascending within each group;
    all c values of one N share a single batched integration.  An
    instability abort propagates with the offending (c, N) identified.
    """
    policy = policy or StepPolicy()
    c_values = [float(c) for c in c_values]
    N_values = sorted(int(N) for N in N_values)
    make_grid = periodic_grid if bc == PERIODIC else ibvp_grid

    errors = {}
    spacings = {}
    for N in N_values:
        grid = make_grid(N, L)
        ops = [build_operator(grid, SchemeSpec(scheme, bc, c))
               for c in c_values]
        states = integrate_batch(ops, problem, t_end, policy)
        exact = project(problem, grid, t_end)
        for c, state in zip(c_values, states):
            errors[(c, N)] = error_norm(state, exact, grid.s)
            spacings[N] = grid.s

    rows = []
    fitted = {}
    for c in c_values:
        errs = [errors[(c, N)] for N in N_values]
        for i, N in enumerate(N_values):
            if i == 0:
                order = None
            else:
                order = (np.log(errs[i - 1] / errs[i])
                         / np.log(spacings[N_values[i - 1]] / spacings[N]))
            rows.append(StudyRow(scheme=scheme, bc=bc, c=c, N=N,
                                 s=spacings[N], error=errs[i],
                                 observed_order=None if order is None
                                 else float(order)))
        if len(N_values) >= 2:
            fitted[c] = observed_order(errs, [spacings[N] for N in N_values])
    kappa = policy.kappa_for(scheme)
    return ConvergenceReport(rows=tuple(rows), problem=problem.name,
                             t_end=float(t_end), kappa=kappa,
                             fitted_orders=fitted)


# --------------------------------------------------------------------------
# symbol table (the N=6 benchmark and its generalization)
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SymbolTable:
    N: int
    c: float
    periodic: tuple[float, ...]                  # all 4N symbols, ascending
    dirichlet: dict                              # omega -> tuple of symbols
    neumann: dict

    def to_dict(self) -> dict:
        return {
            "N": self.N, "c": self.c,
            "periodic": list(self.periodic),
            "dirichlet": {str(w): list(v) for w, v in self.dirichlet.items()},
            "neumann": {str(w): list(v) for w, v in self.neumann.items()},
        }


def symbol_table(N: int, c: float, h: float | None = None,
                 stencil_order: str = SECOND_BLOCK) -> SymbolTable:
    """Periodic symbol multiset and per-frequency Dirichlet/Neumann columns.

    ``h`` defaults to the analysis convention pi/N of the quarter grid.
    """
    if h is None:
        h = np.pi / N
    s = h / 2.0
    alt = _alternating_eigenvalue(stencil_order, c, s)
    edge = _edge_mode_eigenvalues(stencil_order, N, h, c)
    dirichlet = {0: (alt,), N: (edge["sin"],)}
    neumann = {0: (0.0,), N: (edge["cos"],)}
    periodic = [0.0, alt, edge["sin"], edge["cos"]]
    for omega in range(1, N):
        rec = eigvec_coefficients(omega, h, c, SPLIT_IBVP, N=N,
                                  stencil_order=stencil_order)
        pair = (float(np.real(rec.q2)), float(np.real(rec.q1)))
        dirichlet[omega] = pair
        neumann[omega] = pair
        periodic += [*pair, *pair]  # +-omega both carry the pair
    return SymbolTable(N=N, c=float(c), periodic=tuple(sorted(periodic)),
                       dirichlet=dirichlet, neumann=neumann)


def n6_symbol_table(c: float) -> SymbolTable:
    """The N = 6 benchmark table (24 periodic symbols, both bc columns)."""
    return symbol_table(6, c)


# --------------------------------------------------------------------------
# modal diagnostics
# --------------------------------------------------------------------------

def modal_error_decomposition(basis: ModalBasis, error: np.ndarray):
    """|coefficient| of the error on each eigenvector column.

    Diagnostic view of where the error-inhibition acts: with c = -1/4
    the physical low-mode coefficients drop while the parasitic ones
    stay at the truncation level but decay like exp(Q2 t).
    """
    coeffs = basis.modal_coefficients(np.asarray(error, dtype=float))
    return [(omega, branch, float(abs(z)))
            for (omega, branch), z in zip(basis.columns, coeffs)]
