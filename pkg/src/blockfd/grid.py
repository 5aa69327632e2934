"""Two-point-block grids for the 1-D heat equation.

Two grid families are supported, both uniform with point spacing s = h/2
where h is the block width:

* ``periodic-half``: blocks [x_j, x_j + h] with nodes at x_j = j*h and
  x_j + h/2, j = 0..N, h = L/(N+1).  2(N+1) points, the last one at
  L - h/2; the grid wraps around.
* ``ibvp-quarter``: blocks offset a quarter spacing into the domain,
  nodes at j*h + h/4 and j*h + 3h/4, j = 0..N-1, h = L/N.  2N points,
  none of which lies on a boundary.

The quarter-offset grid, reflected about both ends of [0, L], tiles the
4N-point quarter-offset periodic grid on [0, 2L]; that reflection is what
makes the boundary closures in :mod:`blockfd.operators` work.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

PERIODIC_HALF = "periodic-half"
IBVP_QUARTER = "ibvp-quarter"


@dataclass(frozen=True)
class BlockGrid:
    """Immutable uniform two-point-block grid."""

    kind: str
    N: int
    L: float
    h: float
    s: float
    points: np.ndarray = field(repr=False)

    @property
    def n_points(self) -> int:
        return self.points.size

    def __post_init__(self):
        self.points.setflags(write=False)


def _check_args(N: int, L: float) -> None:
    if N != int(N) or N < 2:
        raise ValueError(f"block count N must be an integer >= 2, got {N}")
    if N % 2 != 0:
        raise ValueError(f"block count N must be even, got {N}")
    if not (L > 0):
        raise ValueError(f"domain length L must be positive, got {L}")


def periodic_grid(N: int, L: float) -> BlockGrid:
    """Half-offset periodic grid: 2(N+1) points on [0, L), h = L/(N+1)."""
    _check_args(N, L)
    h = L / (N + 1)
    j = np.arange(N + 1)
    points = np.empty(2 * (N + 1))
    points[0::2] = j * h
    points[1::2] = j * h + h / 2
    return BlockGrid(kind=PERIODIC_HALF, N=int(N), L=float(L), h=h, s=h / 2,
                     points=points)


def ibvp_grid(N: int, L: float) -> BlockGrid:
    """Quarter-offset grid: 2N interior points on (0, L), h = L/N."""
    _check_args(N, L)
    h = L / N
    j = np.arange(N)
    points = np.empty(2 * N)
    points[0::2] = j * h + h / 4
    points[1::2] = j * h + 3 * h / 4
    return BlockGrid(kind=IBVP_QUARTER, N=int(N), L=float(L), h=h, s=h / 2,
                     points=points)
