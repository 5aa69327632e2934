"""Closed-form spectral analysis of the two-point-block operators.

A block operator is not diagonalized by the plain discrete Fourier
transform: each low frequency w couples to an aliased companion nu (the
split spectrum).  On the pair (e^{iwx}, e^{inux}) the operator acts as a
2x2 block, whose eigenvalues Q1(w) >= Q2(w) are the physical and
parasitic symbols and whose eigenvectors give the coefficient pairs
(alpha_k, beta_k).

Two splits are supported:

* ``periodic-half``: w in {-N/2..N/2}, nu = w -+ (N+1);
  e^{inux} equals e^{iwx} on whole nodes and -e^{iwx} on half nodes.
* ``ibvp``: the quarter-offset grid doubled to a periodic one,
  w in {-N+1..N}, nu = w -+ 2N; the companion picks up -+i factors
  instead of +-1.

All phases are dimensionless.  The sample of the frequency-w mode at
point p is e^{i theta (p + off)} with theta its phase advance per point
spacing s; aliasing makes the companion phase exactly theta -+ pi.  On
the analysis domains theta equals w*h/2, and the same machinery covers
experiment grids on [0, 1] where it is pi*w/(N+1) resp. pi*w/(2N).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._stencils import SECOND_BLOCK, row_multiplier

SPLIT_PERIODIC_HALF = "periodic-half"
SPLIT_IBVP = "ibvp"

DIRICHLET = "dirichlet"
NEUMANN = "neumann"


# --------------------------------------------------------------------------
# split-spectrum bookkeeping
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class FrequencyPair:
    """A frequency and its aliased companion under the chosen split."""
    omega: int
    nu: int


def companion(omega: int, N: int, split: str) -> int:
    """Aliased companion frequency nu(omega)."""
    if split == SPLIT_PERIODIC_HALF:
        period = N + 1
        if not -N // 2 <= omega <= N // 2:
            raise ValueError(f"omega {omega} outside -N/2..N/2 for N={N}")
    elif split == SPLIT_IBVP:
        period = 2 * N
        if not -N + 1 <= omega <= N:
            raise ValueError(f"omega {omega} outside -N+1..N for N={N}")
    else:
        raise ValueError(f"unknown split {split!r}")
    return omega - period if omega > 0 else omega + period


def frequency_pairs(N: int, split: str) -> list[FrequencyPair]:
    if split == SPLIT_PERIODIC_HALF:
        omegas = range(-N // 2, N // 2 + 1)
    elif split == SPLIT_IBVP:
        omegas = range(-N + 1, N + 1)
    else:
        raise ValueError(f"unknown split {split!r}")
    return [FrequencyPair(w, companion(w, N, split)) for w in omegas]


def lattice_theta(omega: int, N: int, split: str) -> float:
    """Phase advance per grid point of the frequency-omega mode."""
    if split == SPLIT_PERIODIC_HALF:
        return np.pi * omega / (N + 1)
    return np.pi * omega / (2 * N)


def _phase_shift(split: str) -> float:
    # x_p = p*s on the half grid, (p + 1/2)*s on the quarter grid
    return 0.0 if split == SPLIT_PERIODIC_HALF else 0.5


def _tau_even(omega: int, split: str) -> complex:
    """Ratio e^{i nu x_p} / e^{i omega x_p} at even points."""
    if split == SPLIT_PERIODIC_HALF:
        return 1.0 + 0.0j
    return -1.0j if omega > 0 else 1.0j


def _companion_theta(theta: float, omega: int) -> float:
    return theta - np.pi if omega > 0 else theta + np.pi


def mode_samples(omega: int, N: int, split: str, n_points: int) -> np.ndarray:
    """Samples of e^{i omega x} on the first n_points of the split's grid."""
    p = np.arange(n_points)
    th = lattice_theta(omega, N, split)
    return np.exp(1j * th * (p + _phase_shift(split)))


def split_relation_residual(omega: int, N: int, split: str) -> float:
    """Max pointwise defect of the companion-mode relation on the grid.

    On the half grid e^{inux} must equal e^{iwx} at even points and its
    negative at odd points; on the quarter grid the factors are -+i for
    w > 0 (+-i for w <= 0).
    """
    n = 2 * (N + 1) if split == SPLIT_PERIODIC_HALF else 4 * N
    nu = companion(omega, N, split)
    ew = mode_samples(omega, N, split, n)
    en = mode_samples(nu, N, split, n)
    tau = np.empty(n, dtype=complex)
    tau[0::2] = _tau_even(omega, split)
    tau[1::2] = -_tau_even(omega, split)
    return float(np.abs(en - tau * ew).max())


# --------------------------------------------------------------------------
# symbols
# --------------------------------------------------------------------------

def _discriminant_from_theta(theta, c: float):
    rad = (2 * c * c * np.cos(4 * theta) + 38 * c * c
           + 8 * (c - 1) * (3 * c - 1) * np.cos(2 * theta) - 32 * c + 8)
    return np.lib.scimath.sqrt(rad)


def _symbols_from_theta(theta: float, c: float, s: float):
    delta = _discriminant_from_theta(theta, c)
    base = -4 + 2 * c * (np.cos(2 * theta) + 3)
    q1 = _maybe_real((base + delta) / (2 * s * s))
    q2 = _maybe_real((base - delta) / (2 * s * s))
    return q1, q2, delta


def discriminant(omega: int, h: float, c: float):
    """Discriminant of the 2x2 block symbol (second-order block).

    Real and positive for c < 1/2; for larger c it may turn imaginary,
    which is exactly the loss of von Neumann stability.
    """
    return _discriminant_from_theta(omega * h / 2.0, c)


def _maybe_real(z, tol: float = 1e-12):
    z = complex(z)
    if abs(z.imag) <= tol * max(1.0, abs(z.real)):
        return z.real
    return z


def interior_symbols(omega: int, h: float, c: float):
    """Eigenvalue pair (Q1, Q2) of the second-order block at frequency omega.

    Q1 is the physical branch (-> -omega^2 as h -> 0), Q2 the parasitic
    O(1/h^2) branch.  At omega = 0 the pair is (0, (-4+8c)/s^2).  h is
    the block width of the analysis grid, so the phase per point is
    omega*h/2.
    """
    s = h / 2.0
    if omega == 0:
        return 0.0, (-4 + 8 * c) / s**2
    q1, q2, _ = _symbols_from_theta(omega * h / 2.0, c, s)
    return q1, q2


def _thetas(omega: int, h: float, split: str, N: int | None):
    """Phases (theta_w, theta_nu) for either convention.

    With N given, the lattice convention pi*w/(N+1) resp. pi*w/(2N) is
    used (correct for any domain length); otherwise the continuum
    convention theta = w*h/2 of the analysis domains.
    """
    if N is None:
        th = omega * h / 2.0
    else:
        th = lattice_theta(omega, N, split)
    return th, _companion_theta(th, omega)


def block_symbols(stencil_order: str, omega: int, h: float, c: float,
                  split: str, N: int | None = None):
    """Symbols of either block stencil from the 2x2 sublattice system.

    Works for both stencil orders and both splits; branch 1 is the one
    with the larger real part, which for c < 1/2 is the physical branch.
    Returns (Q1, Q2, (alpha1, beta1), (alpha2, beta2)) with the
    eigenvector coefficients unnormalized.
    """
    s = h / 2.0
    th_w, th_v = _thetas(omega, h, split, N)
    me_w = row_multiplier(stencil_order, 0, th_w, c) / s**2
    mo_w = row_multiplier(stencil_order, 1, th_w, c) / s**2
    me_v = row_multiplier(stencil_order, 0, th_v, c) / s**2
    mo_v = row_multiplier(stencil_order, 1, th_v, c) / s**2
    a2 = 0.5 * np.array([[me_w + mo_w, me_v - mo_v],
                         [me_w - mo_w, me_v + mo_v]])
    lam, vec = np.linalg.eig(a2)
    order = np.argsort(-lam.real)
    lam, vec = lam[order], vec[:, order]
    tau = _tau_even(omega, split)
    pairs = []
    for k in range(2):
        alpha = vec[0, k]
        beta = vec[1, k] / tau
        pairs.append((alpha, beta))
    return _maybe_real(lam[0]), _maybe_real(lam[1]), pairs[0], pairs[1]


# --------------------------------------------------------------------------
# eigenvector coefficients
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SymbolRecord:
    """Symbols and normalized eigenvector coefficients at one frequency."""
    omega: int
    q1: float | complex
    q2: float | complex
    r1: complex
    r2: complex
    alpha1: complex
    beta1: complex
    alpha2: complex
    beta2: complex
    delta: float | complex
    mu1: complex
    mu2: complex
    sigma1: complex
    sigma2: complex

    @property
    def det(self) -> complex:
        return self.alpha1 * self.beta2 - self.alpha2 * self.beta1


def _normalize_pair(r1: complex, r2: complex):
    """Coefficient normalization |alpha|^2 + |beta|^2 = 1 per branch."""
    n1 = np.sqrt(1.0 + abs(r1) ** 2)
    alpha1, beta1 = 1.0 / n1, r1 / n1
    if r2 == 0:
        alpha2, beta2 = 0.0 + 0.0j, 1.0 + 0.0j
    else:
        n2 = np.sqrt(1.0 + abs(r2) ** 2)
        alpha2, beta2 = (abs(r2) / r2) / n2, abs(r2) / n2
    return alpha1, beta1, alpha2, beta2


def eigvec_coefficients(omega: int, h: float, c: float, split: str,
                        N: int | None = None,
                        stencil_order: str = SECOND_BLOCK) -> SymbolRecord:
    """Symbol record for omega != 0 (the 2x2 coupled system's solution).

    The branch-k eigenvector is alpha_k e^{iwx} + beta_k e^{inux} with
    ratio r_k = beta_k/alpha_k recovered from the sublattice system, so
    the pairing with Q_k is automatic.  c = 0 decouples the system and
    the record degenerates to the plain Fourier basis.  Pass N to pin
    the lattice phase convention (see :func:`block_symbols`).
    """
    if omega == 0:
        raise ValueError("omega = 0 is a special mode; use interior_symbols")
    s = h / 2.0
    th_w, th_v = _thetas(omega, h, split, N)

    if stencil_order == SECOND_BLOCK:
        q1, q2, delta = _symbols_from_theta(th_w, c, s)
    else:
        q1, q2, _, _ = block_symbols(stencil_order, omega, h, c, split, N=N)
        delta = _maybe_real((q1 - q2) * s * s)

    mu1 = complex(row_multiplier(stencil_order, 0, th_w, c)) / s**2
    mu2 = complex(row_multiplier(stencil_order, 1, th_w, c)) / s**2
    sigma1 = complex(row_multiplier(stencil_order, 0, th_v, c)) / s**2
    sigma2 = complex(row_multiplier(stencil_order, 1, th_v, c)) / s**2

    if c == 0:
        # decoupled: each Fourier mode is already an eigenvector
        r1, r2 = 0.0 + 0.0j, 0.0 + 0.0j
        alpha1, beta1, alpha2, beta2 = 1.0, 0.0 + 0.0j, 0.0 + 0.0j, 1.0
    else:
        tau = _tau_even(omega, split)
        r1 = (q1 - mu1) / ((sigma1 - q1) * tau)
        r2 = (q2 - mu1) / ((sigma1 - q2) * tau)
        if not (np.isfinite(r1) and np.isfinite(r2)):
            raise ValueError(
                f"degenerate eigenvector ratio at omega={omega}, c={c}")
        alpha1, beta1, alpha2, beta2 = _normalize_pair(r1, r2)

    return SymbolRecord(omega=omega, q1=q1, q2=q2, r1=complex(r1),
                        r2=complex(r2), alpha1=complex(alpha1),
                        beta1=complex(beta1), alpha2=complex(alpha2),
                        beta2=complex(beta2), delta=delta,
                        mu1=mu1, mu2=mu2, sigma1=sigma1, sigma2=sigma2)


# --------------------------------------------------------------------------
# modal basis
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ModalBasis:
    """Full eigenvector matrix Psi = F^{-1} A and its diagnostics.

    ``norm_psi`` is the operator norm from euclidean coefficient space
    to the s-weighted grid norm (bounded by sqrt(2)); ``norm_psi_inverse``
    the euclidean norm of Psi^{-1} (bounded by (10*sqrt(2)/9)*sqrt(s) as
    long as the coefficient-block determinant stays above 0.9).
    """
    split: str
    N: int
    h: float
    c: float
    s: float
    columns: tuple  # (omega, branch) per column
    psi: np.ndarray = field(repr=False)
    coeff_matrix: np.ndarray = field(repr=False)
    fourier: np.ndarray = field(repr=False)
    eigenvalues: np.ndarray = field(repr=False)
    dets: np.ndarray = field(repr=False)
    norm_psi: float
    norm_psi_inverse: float
    det_min: float

    def modal_coefficients(self, v: np.ndarray) -> np.ndarray:
        """Expansion coefficients of a grid vector in the Psi columns."""
        return np.linalg.solve(self.psi, v.astype(complex))


def assemble_modal_basis(N: int, h: float, c: float,
                         split: str = SPLIT_PERIODIC_HALF,
                         stencil_order: str = SECOND_BLOCK) -> ModalBasis:
    """Build Psi, A and the stability diagnostics for the periodic grid."""
    if N % 2 != 0:
        raise ValueError("N must be even")
    s = h / 2.0
    n = 2 * (N + 1) if split == SPLIT_PERIODIC_HALF else 4 * N
    pairs = frequency_pairs(N, split)

    psi = np.zeros((n, n), dtype=complex)
    fourier = np.zeros((n, n), dtype=complex)
    coeff = np.zeros((n, n), dtype=complex)
    eigs = np.zeros(n)
    dets = np.zeros(len(pairs))
    columns = []
    fnorm = np.sqrt(n * s)  # unit s-weighted norm for each Fourier column

    for i, fp in enumerate(pairs):
        ew = mode_samples(fp.omega, N, split, n) / fnorm
        en = mode_samples(fp.nu, N, split, n) / fnorm
        col = 2 * i
        fourier[:, col] = ew
        fourier[:, col + 1] = en
        if fp.omega == 0:
            if stencil_order == SECOND_BLOCK:
                q1 = 0.0
                q2 = _alternating_eigenvalue(stencil_order, c, s)
            else:
                q1, q2 = block_symbols(stencil_order, 0, h, c, split, N=N)[:2]
            block = np.eye(2)
            dets[i] = 1.0
        else:
            rec = eigvec_coefficients(fp.omega, h, c, split, N=N,
                                      stencil_order=stencil_order)
            q1, q2 = rec.q1, rec.q2
            block = np.array([[rec.alpha1, rec.alpha2],
                              [rec.beta1, rec.beta2]])
            dets[i] = abs(rec.det)
        coeff[col:col + 2, col:col + 2] = block
        psi[:, col] = ew * block[0, 0] + en * block[1, 0]
        psi[:, col + 1] = ew * block[0, 1] + en * block[1, 1]
        eigs[col], eigs[col + 1] = np.real(q1), np.real(q2)
        columns += [(fp.omega, 1), (fp.omega, 2)]

    sv = np.linalg.svd(psi, compute_uv=False)
    return ModalBasis(split=split, N=N, h=h, c=c, s=s, columns=tuple(columns),
                      psi=psi, coeff_matrix=coeff, fourier=fourier,
                      eigenvalues=eigs, dets=dets,
                      norm_psi=float(np.sqrt(s) * sv[0]),
                      norm_psi_inverse=float(1.0 / sv[-1]),
                      det_min=float(dets.min()))


# --------------------------------------------------------------------------
# reflected eigenvectors of the boundary problems
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class IbvpEigenpair:
    omega: int
    eigenvalue: float
    vector: np.ndarray = field(repr=False)


def _alternating_eigenvalue(stencil_order: str, c: float, s: float) -> float:
    # the (1,-1,1,-1,...) mode is a pure companion mode with theta = pi
    return float(np.real(row_multiplier(stencil_order, 0, np.pi, c))) / s**2


def _edge_mode_eigenvalues(stencil_order: str, N: int, h: float, c: float):
    """Eigenvalues of the sin(N.) and cos(N.) modes of the quarter grid."""
    q1, q2, p1, p2 = block_symbols(stencil_order, N, h, c, SPLIT_IBVP, N=N)
    if abs(q1 - q2) <= 1e-9 * max(1.0, abs(q1)):
        return {"sin": float(np.real(q1)), "cos": float(np.real(q2))}
    out = {}
    for q, (alpha, beta) in ((q1, p1), (q2, p2)):
        r = beta / alpha
        out["sin" if np.real(r) < 0 else "cos"] = float(np.real(q))
    if set(out) != {"sin", "cos"}:
        raise RuntimeError("could not classify the edge modes")
    return out


def ibvp_eigenpairs(N: int, h: float, c: float, bc: str,
                    stencil_order: str = SECOND_BLOCK) -> list[IbvpEigenpair]:
    """All 2N eigenpairs of the homogeneous Dirichlet/Neumann operator.

    For omega = 1..N-1 the eigenvectors are odd (Dirichlet) or even
    (Neumann) reflections of the periodic pair, sampled on the 2N
    interior points; each boundary condition adds two special modes:
    the alternating mode and sin(N.) for Dirichlet, the constant and
    cos(N.) for Neumann.  Pairs are ordered by omega with the parasitic
    branch first; vectors have unit euclidean norm.
    """
    if bc not in (DIRICHLET, NEUMANN):
        raise ValueError(f"unknown boundary condition {bc!r}")
    s = h / 2.0
    n = 2 * N
    p = np.arange(n) + 0.5
    trig = np.sin if bc == DIRICHLET else np.cos

    def sampled(omega: int) -> np.ndarray:
        return trig(lattice_theta(omega, N, SPLIT_IBVP) * p)

    def unit(v: np.ndarray) -> np.ndarray:
        return v / np.linalg.norm(v)

    out = []
    if bc == DIRICHLET:
        out.append(IbvpEigenpair(0, _alternating_eigenvalue(stencil_order, c, s),
                                 unit(sampled(2 * N))))
    else:
        out.append(IbvpEigenpair(0, 0.0, unit(np.ones(n))))

    for omega in range(1, N):
        rec = eigvec_coefficients(omega, h, c, SPLIT_IBVP, N=N,
                                  stencil_order=stencil_order)
        nu = companion(omega, N, SPLIT_IBVP)
        for q, alpha, beta in ((rec.q2, rec.alpha2, rec.beta2),
                               (rec.q1, rec.alpha1, rec.beta1)):
            a, b = complex(alpha), complex(beta)
            if max(abs(a.imag), abs(b.imag)) > 1e-9:
                raise RuntimeError(
                    f"expected real reflection coefficients at omega={omega}")
            vec = a.real * sampled(omega) + b.real * sampled(nu)
            out.append(IbvpEigenpair(omega, float(np.real(q)), unit(vec)))

    edge = _edge_mode_eigenvalues(stencil_order, N, h, c)
    key = "sin" if bc == DIRICHLET else "cos"
    out.append(IbvpEigenpair(N, edge[key], unit(sampled(N))))
    return out


# --------------------------------------------------------------------------
# small-(omega h) error model
# --------------------------------------------------------------------------

def error_model_coefficient(c: float) -> float:
    """Leading low-mode error coefficient (1+4c)/(12-24c).

    The physical symbol behaves as -w^2 + coeff * w^4 s^2 + O(h^4); the
    coefficient vanishes at c = -1/4, which upgrades the solution error
    from second to third order.
    """
    if c == 0.5:
        raise ValueError("c = 1/2 is a pole of the error model")
    return (1 + 4 * c) / (12 - 24 * c)


@dataclass(frozen=True)
class ExpansionResiduals:
    """Distances between exact symbols/coefficients and their truncated
    small-(omega h) expansions, for asymptotic slope tests."""
    omega: int
    h: float
    c: float
    q1_vs_laplacian: float      # |Q1 + w^2|
    q1_vs_model: float          # |Q1 - (-w^2 + coeff w^4 s^2)|
    q2_vs_parasite: float       # |Q2 + (4-8c)/s^2|
    alpha1_vs_one: float
    beta1_vs_model: float       # beta1 ~ -i c (w s)^3 / (4 - 8c)
    alpha2_vs_model: float      # alpha2 ~ i c (w s) / (2c - 1)
    beta2_vs_one: float


def expansion_residuals(omega: int, h: float, c: float) -> ExpansionResiduals:
    """Residuals at one (omega, h); slopes over h-halvings give orders."""
    s = h / 2.0
    q1, q2 = interior_symbols(omega, h, c)
    rec = eigvec_coefficients(omega, h, c, SPLIT_PERIODIC_HALF)
    coeff = error_model_coefficient(c)
    ws = omega * s
    return ExpansionResiduals(
        omega=omega, h=h, c=c,
        q1_vs_laplacian=abs(q1 + omega**2),
        q1_vs_model=abs(q1 - (-omega**2 + coeff * omega**4 * s * s)),
        q2_vs_parasite=abs(q2 + (4 - 8 * c) / s**2),
        alpha1_vs_one=abs(rec.alpha1 - 1.0),
        beta1_vs_model=abs(rec.beta1 - (-1j * c * ws**3 / (4 - 8 * c))),
        alpha2_vs_model=abs(rec.alpha2 - (1j * c * ws / (2 * c - 1))),
        beta2_vs_one=abs(rec.beta2 - 1.0),
    )
