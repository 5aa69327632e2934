"""Interior stencil coefficients of the two-point-block schemes.

Each block contributes two rows.  Offsets are in units of the point
spacing s = h/2, relative to the row's own point; the weights still have
to be multiplied by ``scale / s**2``.

The free parameter c couples the two rows: it adds an odd-order
difference that cancels in the block average but makes the truncation
error oscillate from point to point, which is what lets suitable c
values inhibit the error (c = -1/4 for the second-order block,
c = 4/13 for the fourth-order block).
"""

from __future__ import annotations

import numpy as np

SECOND_BLOCK = "second-block"
FOURTH_BLOCK = "fourth-block"

STENCIL_ORDERS = (SECOND_BLOCK, FOURTH_BLOCK)

#: widest one-sided reach of any row pattern, in points
MAX_REACH = 3


def row_patterns(stencil_order: str, c: float):
    """Return (even_weights, odd_weights, scale).

    The weight dicts map point offsets to coefficients; ``scale`` is the
    prefactor multiplying 1/s**2 (1 for the second-order block, 1/12 for
    the fourth-order one).
    """
    if stencil_order == SECOND_BLOCK:
        even = {-1: 1 - c, 0: -2 + 3 * c, 1: 1 - 3 * c, 2: c}
        odd = {-2: c, -1: 1 - 3 * c, 0: -2 + 3 * c, 1: 1 - c}
        return even, odd, 1.0
    if stencil_order == FOURTH_BLOCK:
        even = {-2: -1 - c, -1: 16 + 5 * c, 0: -30 - 10 * c,
                1: 16 + 10 * c, 2: -1 - 5 * c, 3: c}
        odd = {-3: c, -2: -1 - 5 * c, -1: 16 + 10 * c,
               0: -30 - 10 * c, 1: 16 + 5 * c, 2: -1 - c}
        return even, odd, 1.0 / 12.0
    raise ValueError(f"unknown stencil order {stencil_order!r}")


def pattern_arrays(stencil_order: str, c: float):
    """Row patterns as dense weight arrays over offsets -3..3.

    Returns (offsets, even, odd, scale) with ``offsets = [-3, ..., 3]``;
    unused slots are zero.
    """
    even, odd, scale = row_patterns(stencil_order, c)
    offsets = np.arange(-MAX_REACH, MAX_REACH + 1)
    we = np.zeros(offsets.size)
    wo = np.zeros(offsets.size)
    for d, a in even.items():
        we[d + MAX_REACH] = a
    for d, a in odd.items():
        wo[d + MAX_REACH] = a
    return offsets, we, wo, scale


def row_multiplier(stencil_order: str, parity: int, theta, c: float):
    """Fourier multiplier of one row pattern at phase-per-point theta.

    Returns the dimensionless symbol ``scale * sum_d w_d e^(i theta d)``;
    dividing by s**2 gives the action of the row on ``e^(i k x)`` samples
    with ``theta = k*s``.  ``parity`` 0 selects the block's first row,
    1 the second.
    """
    even, odd, scale = row_patterns(stencil_order, c)
    pat = even if parity == 0 else odd
    theta = np.asarray(theta, dtype=float)
    acc = np.zeros(theta.shape, dtype=complex)
    for d, a in pat.items():
        acc += a * np.exp(1j * theta * d)
    return scale * acc if theta.shape else complex(scale * acc)
