"""Independent finite-difference oracle for the wells behind each model.

Everything here works from the coordinate-space potential alone: a uniform
grid, a three-point Laplacian with Dirichlet ends, and LAPACK's tridiagonal
eigensolver.  No ladder algebra enters, so agreement with the closed-form
spectra and matrix elements is a genuine cross-check.

The discretization error is O(h^2); every public quantity is Richardson
extrapolated from the grid and its half-step refinement, (4 E_{h/2} - E_h)/3.
Soft wells expand their window automatically until the requested eigenstates
carry no weight at the boundary; the trigonometric well has true walls and is
clamped just inside its poles instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .models import DomainError, Harmonic, Model, ModifiedPT, Morse, TrigPT
from .states import ConvergenceError

MIN_NODES = 500
_BOUNDARY_TOL = 1e-8
_EXPAND_TRIES = 6


@dataclass(frozen=True)
class GridSpec:
    x_min: float
    x_max: float
    n_nodes: int
    expandable: bool = True

    def __post_init__(self) -> None:
        if not self.x_max > self.x_min:
            raise ValueError(f"empty window [{self.x_min}, {self.x_max}]")
        if self.n_nodes < MIN_NODES:
            raise ValueError(f"need at least {MIN_NODES} nodes, got {self.n_nodes}")


def oracle_potential(model: Model) -> tuple[Callable[[np.ndarray], np.ndarray], GridSpec, float]:
    """Well potential, default window, and the offset from well to model energies.

    model.energy(n) + offset equals the well eigenvalue; only the Morse
    algebraic convention sits below its well by that constant.
    """
    if isinstance(model, Morse):
        depth = model.well_depth
        beta = model.well_beta

        def v_morse(x: np.ndarray) -> np.ndarray:
            return depth * (1.0 - np.exp(-beta * x)) ** 2

        return v_morse, GridSpec(-3.0 / beta, 20.0 / beta, 3001), model.well_offset
    if isinstance(model, ModifiedPT):
        u0 = model.well_depth
        a = model.a

        def v_mpt(x: np.ndarray) -> np.ndarray:
            return u0 * np.tanh(a * x) ** 2

        return v_mpt, GridSpec(-24.0 / a, 24.0 / a, 3001), 0.0
    if isinstance(model, TrigPT):
        u0 = model.well_depth
        a = model.a
        clamp = 1e-6 * np.pi / a

        def v_tpt(x: np.ndarray) -> np.ndarray:
            return u0 * np.tan(a * x) ** 2

        half = np.pi / (2.0 * a) - clamp
        return v_tpt, GridSpec(-half, half, 2001, expandable=False), 0.0
    if isinstance(model, Harmonic):
        mw2 = model.mu * model.omega**2

        def v_ho(x: np.ndarray) -> np.ndarray:
            return 0.5 * mw2 * x**2

        width = (model.hbar / (model.mu * model.omega)) ** 0.5
        return v_ho, GridSpec(-14.0 * width, 14.0 * width, 2001), 0.0
    raise TypeError(f"unsupported model {model!r}")


def _check_count(model: Model, count: int) -> None:
    if count < 1:
        raise ValueError(f"count must be positive, got {count}")
    bound = model.bound_dim
    if bound is not None and count > bound:
        raise DomainError(
            f"only {bound} bound levels exist; cannot resolve {count}"
        )


def _solve(
    v_func: Callable[[np.ndarray], np.ndarray],
    mu: float,
    hbar: float,
    x_min: float,
    x_max: float,
    n_nodes: int,
    count: int,
    want_vectors: bool,
):
    xs = np.linspace(x_min, x_max, n_nodes)
    h = xs[1] - xs[0]
    kin = hbar * hbar / (2.0 * mu * h * h)
    diag = 2.0 * kin + v_func(xs)
    off = np.full(n_nodes - 1, -kin)
    if want_vectors:
        vals, vecs = eigh_tridiagonal(diag, off, select="i", select_range=(0, count - 1))
        return xs, vals, vecs.T / np.sqrt(h)
    vals = eigh_tridiagonal(
        diag, off, select="i", select_range=(0, count - 1), eigvals_only=True
    )
    return xs, vals, None


def _boundary_leak(psis: np.ndarray) -> tuple[float, float]:
    peak = np.max(np.abs(psis), axis=1)
    left = float(np.max(np.abs(psis[:, 0]) / peak))
    right = float(np.max(np.abs(psis[:, -1]) / peak))
    return left, right


def fd_eigensystem(
    model: Model, count: int, grid: GridSpec | None = None
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Well eigenvalues and continuum-normalized eigenvectors on the grid.

    Returns (xs, well_energies, psis); psis[j] is the j-th eigenfunction.
    The window grows until the requested states vanish at both ends, unless
    the grid is marked non-expandable.
    """
    _check_count(model, count)
    v_func, default_grid, _ = oracle_potential(model)
    if grid is None:
        grid = default_grid
    x_min, x_max = grid.x_min, grid.x_max
    for _ in range(_EXPAND_TRIES):
        xs, vals, psis = _solve(
            v_func, model.mu, model.hbar, x_min, x_max, grid.n_nodes, count, True
        )
        left, right = _boundary_leak(psis)
        if (left < _BOUNDARY_TOL and right < _BOUNDARY_TOL) or not grid.expandable:
            return xs, vals, psis
        span = x_max - x_min
        if left >= _BOUNDARY_TOL:
            x_min -= 0.3 * span
        if right >= _BOUNDARY_TOL:
            x_max += 0.3 * span
    raise ConvergenceError(
        f"boundary amplitude stayed above {_BOUNDARY_TOL} after "
        f"{_EXPAND_TRIES} window expansions"
    )


def fd_spectrum(model: Model, count: int, grid: GridSpec | None = None) -> np.ndarray:
    """Richardson-extrapolated eigenvalues in the model's energy convention."""
    _check_count(model, count)
    v_func, default_grid, offset = oracle_potential(model)
    if grid is None:
        grid = default_grid
    xs, coarse, _ = fd_eigensystem(model, count, grid)
    settled = GridSpec(xs[0], xs[-1], 2 * grid.n_nodes - 1, expandable=False)
    _, fine, _ = _solve(
        v_func,
        model.mu,
        model.hbar,
        settled.x_min,
        settled.x_max,
        settled.n_nodes,
        count,
        False,
    )
    return (4.0 * fine - coarse) / 3.0 - offset


def _align_signs(xs: np.ndarray, psis: np.ndarray) -> np.ndarray:
    """Ground state positive at its peak, then every <j-1|x|j> positive."""
    out = psis.copy()
    peak = np.argmax(np.abs(out[0]))
    if out[0, peak] < 0.0:
        out[0] = -out[0]
    for j in range(1, out.shape[0]):
        overlap = np.trapezoid(out[j - 1] * xs * out[j], xs)
        if overlap < 0.0:
            out[j] = -out[j]
    return out


def fd_matrix_element(
    model: Model, kind: str, m: int, n: int, grid: GridSpec | None = None
) -> float:
    """<m|x|n>, or the real coefficient c in <m|p|n> = i c, from the grid alone.

    Signs follow the same convention as the ladder-side tables (ground state
    positive, one-step coordinate couplings positive), so values are directly
    comparable.  Richardson extrapolated like the spectra.
    """
    if kind not in ("x", "p"):
        raise ValueError(f"kind must be 'x' or 'p', got {kind!r}")
    count = max(m, n) + 1
    _check_count(model, count)
    v_func, default_grid, _ = oracle_potential(model)
    if grid is None:
        grid = default_grid
    xs_c, _, psis_c = fd_eigensystem(model, count, grid)
    fine_nodes = 2 * grid.n_nodes - 1

    def element(xs: np.ndarray, psis: np.ndarray) -> float:
        psis = _align_signs(xs, psis)
        if kind == "x":
            return float(np.trapezoid(psis[m] * xs * psis[n], xs))
        dpsi = np.gradient(psis[n], xs[1] - xs[0])
        return -model.hbar * float(np.trapezoid(psis[m] * dpsi, xs))

    coarse_val = element(xs_c, psis_c)
    xs_f, _, psis_f = _solve(
        v_func, model.mu, model.hbar, xs_c[0], xs_c[-1], fine_nodes, count, True
    )
    fine_val = element(xs_f, psis_f)
    return (4.0 * fine_val - coarse_val) / 3.0
