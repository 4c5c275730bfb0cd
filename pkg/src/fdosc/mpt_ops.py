"""Coordinate and momentum operators for the modified Poschl-Teller well.

The bound eigenfunctions are known in closed form,

    psi_n(x) = N_n sech^eps(a x) F_n(w),   w = (1 - tanh(a x)) / 2,

where eps = s - n and F_n is a terminating hypergeometric series (a degree-n
polynomial in w).  Matrix elements are integrated after the substitution
zeta = tanh(a x), which maps the line onto (-1, 1) and turns every integrand
into polynomial * (1 - zeta^2)^(power) apart from the atanh factor carried by
the coordinate itself; Gauss-Legendre handles these to near machine accuracy,
and the node count is doubled until the tables stop moving.  The substitution
keeps working when s grows and the low eigenfunctions become much narrower
than the top ones, where any fixed x-space rule loses resolution.

From the one-step and three-step elements the operators are written in ladder
form,

    x = sqrt(hbar/(2 mu omega)) (A F(n) + F(n) A^dag + A^3 G(n) + G(n) A^dag^3)
    p = -i sqrt(hbar mu omega/2) (A R(n) - R(n) A^dag + A^3 S(n) - S(n) A^dag^3)

which reproduces the exact bound-block elements with |Delta n| in {1, 3}.
The coefficient functions need bound eigenfunctions on both sides, so no
coupling reaches above the bound block; rows past it stay empty, and second
moments over bound states are exact without padding.

Sign convention: psi_0 > 0 everywhere, then signs are flipped level by level so
every <n-1|x|n> is positive.  Levels alternate parity, which forces every
even-|Delta n| element (diagonal included) to vanish; the tables zero them
exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_legendre

from .models import DomainError, ModifiedPT, ladder_down_element
from .operators import QuadOperator
from .states import ConvergenceError

#: half-width of the x-space window in units of 1/a, used only by the
#: real-line evaluation helpers and the finite-difference cross-check; the
#: slowest bound state decays like exp(-a|x|), so the tails are below 1e-18
_WINDOW = 24.0
_NODES_START = 256
_NODES_MAX = 8192
_TABLE_TOL = 1e-10
_NORM_TOL = 1e-12


@lru_cache(maxsize=16)
def _gauss_nodes(count: int) -> tuple[np.ndarray, np.ndarray]:
    return roots_legendre(count)


def _jacobi_pair(n: int, eps: int, zeta: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(P_{n-1}, P_n) for the symmetric Jacobi family P_k^{(eps,eps)} at zeta.

    The terminating series in w = (1 - zeta)/2 is proportional to
    P_n^{(eps,eps)}(zeta); its raw coefficients cancel catastrophically once
    the degree is large, while the three-term recurrence stays stable because
    the polynomials oscillate on the interval.
    """
    p_prev = np.zeros_like(zeta)
    p_cur = np.ones_like(zeta)
    for k in range(1, n + 1):
        two = 2 * k + 2 * eps
        a_k = 2 * k * (k + 2 * eps) * (two - 2)
        b_k = (two - 1) * two * (two - 2)
        c_k = 2 * (k + eps - 1) ** 2 * two
        p_prev, p_cur = p_cur, (b_k * zeta * p_cur - c_k * p_prev) / a_k
    return p_prev, p_cur


def _raw_psi(model: ModifiedPT, n: int, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Unnormalized eigenfunction and its x-derivative on the given points."""
    s = model.s
    eps = s - n
    a = model.a
    th = np.tanh(a * x)
    sech = 1.0 / np.cosh(a * x)
    base = sech**eps
    p_below, p_here = _jacobi_pair(n, eps, th)
    psi = base * p_here
    # d/dzeta[(1-z^2)^(e/2) P_n] = s (1-z^2)^(e/2-1) (P_{n-1} - z P_n) since
    # n + eps = s; the chain rule in zeta = tanh(a x) cancels the -1 power
    dpsi = a * s * base * (p_below - th * p_here)
    return psi, dpsi


def _raw_psi_zeta(
    model: ModifiedPT, n: int, zeta: np.ndarray, om: np.ndarray | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """Unnormalized eigenfunction and its zeta-derivative at zeta = tanh(a x).

    Same raw scale as _raw_psi, so both share the quadrature norms; eps >= 1
    on the bound block keeps the derivative finite away from the endpoints.
    om overrides 1 - zeta^2 when the caller knows it to better accuracy.
    """
    s = model.s
    eps = s - n
    if om is None:
        om = 1.0 - zeta * zeta
    base = om ** (0.5 * eps)
    p_below, p_here = _jacobi_pair(n, eps, zeta)
    psi = base * p_here
    dpsi = s * (base / om) * (p_below - zeta * p_here)
    return psi, dpsi


@dataclass
class MptTables:
    """Converged matrix-element tables over the bound block.

    x_table[m, n] = <m|x|n>; the momentum element is i * p_table[m, n] with
    p_table real and antisymmetric.
    """

    model: ModifiedPT
    nodes: int
    raw_norms: np.ndarray
    signs: np.ndarray
    x_table: np.ndarray
    p_table: np.ndarray


def _build_tables(model: ModifiedPT, nodes: int) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    s = model.s
    a = model.a
    t, tw = _gauss_nodes(nodes)
    # zeta = sin(theta) on top of zeta = tanh(a x): the half-integer powers of
    # 1 - zeta^2 become entire cosine powers in theta, so Gauss-Legendre is
    # left fighting only the log-damped arctanh factor at the endpoints
    theta = 0.5 * np.pi * t
    zeta = np.sin(theta)
    cos_t = np.cos(theta)
    om = cos_t * cos_t
    jac = 0.5 * np.pi * cos_t * tw
    # dx = dzeta / (a (1 - zeta^2)); u carries the measure for x-space overlaps
    u = jac / (a * om)
    xval = np.arctanh(zeta) / a

    psis = np.empty((s, zeta.size))
    dpsis = np.empty((s, zeta.size))
    raw_norms = np.empty(s)
    for n in range(s):
        p_raw, dp_raw = _raw_psi_zeta(model, n, zeta, om)
        raw_norms[n] = np.sqrt(np.sum(u * p_raw * p_raw))
        psis[n] = p_raw / raw_norms[n]
        dpsis[n] = dp_raw / raw_norms[n]

    signs = np.ones(s)
    x_table = (psis * u * xval) @ psis.T
    for n in range(1, s):
        if signs[n - 1] * x_table[n - 1, n] < 0.0:
            signs[n] = -1.0
    x_table = signs[:, None] * signs[None, :] * x_table
    # <m|p|n> = -i hbar Int psi_m dpsi_n/dx dx; the tanh Jacobian cancels
    # against the measure, leaving only the theta-map weights
    p_table = -model.hbar * (psis * jac) @ dpsis.T
    p_table = signs[:, None] * signs[None, :] * p_table

    # parity alternates with the level, so even-step elements vanish exactly
    m_idx, n_idx = np.indices((s, s))
    even = (m_idx - n_idx) % 2 == 0
    x_table[even] = 0.0
    p_table[even] = 0.0
    x_table = 0.5 * (x_table + x_table.T)
    # antisymmetry holds up to boundary terms that vanish at zeta = +-1
    p_table = 0.5 * (p_table - p_table.T)
    return raw_norms, signs, x_table, p_table


@lru_cache(maxsize=8)
def mpt_tables(model: ModifiedPT) -> MptTables:
    """Matrix-element tables, node-doubled until stable."""
    nodes = _NODES_START
    prev = _build_tables(model, nodes)
    while nodes < _NODES_MAX:
        nodes *= 2
        cur = _build_tables(model, nodes)
        x_drift = float(np.max(np.abs(cur[2] - prev[2])))
        p_drift = float(np.max(np.abs(cur[3] - prev[3])))
        norm_drift = float(np.max(np.abs(cur[0] / prev[0] - 1.0)))
        if x_drift < _TABLE_TOL and p_drift < _TABLE_TOL and norm_drift < _NORM_TOL:
            return MptTables(model, nodes, cur[0], cur[1], cur[2], cur[3])
        prev = cur
    raise ConvergenceError(
        f"matrix-element tables did not stabilize by {_NODES_MAX} quadrature nodes"
    )


def _check_level_range(model: ModifiedPT, n: int, lowest: int) -> None:
    if not lowest <= n <= model.s - 1:
        raise DomainError(
            f"level {n} outside [{lowest}, {model.s - 1}] for the bound block"
        )


def mpt_eigenfunction(model: ModifiedPT, n: int, x: np.ndarray) -> np.ndarray:
    """Normalized bound eigenfunction with the table sign convention."""
    _check_level_range(model, n, 0)
    tables = mpt_tables(model)
    psi, _ = _raw_psi(model, n, np.asarray(x, dtype=float))
    return tables.signs[n] * psi / tables.raw_norms[n]


def mpt_eigenfunction_prime(model: ModifiedPT, n: int, x: np.ndarray) -> np.ndarray:
    """x-derivative of the normalized eigenfunction."""
    _check_level_range(model, n, 0)
    tables = mpt_tables(model)
    _, dpsi = _raw_psi(model, n, np.asarray(x, dtype=float))
    return tables.signs[n] * dpsi / tables.raw_norms[n]


def mpt_matrix_element(model: ModifiedPT, kind: str, m: int, n: int) -> float:
    """Exact <m|x|n>, or the real coefficient c in <m|p|n> = i c."""
    _check_level_range(model, m, 0)
    _check_level_range(model, n, 0)
    tables = mpt_tables(model)
    if kind == "x":
        return float(tables.x_table[m, n])
    if kind == "p":
        return float(tables.p_table[m, n])
    raise ValueError(f"kind must be 'x' or 'p', got {kind!r}")


def mpt_p_element_fd(model: ModifiedPT, m: int, n: int, n_points: int = 160_001) -> float:
    """Finite-difference check of the momentum element (coefficient of i).

    Differentiates the eigenfunction on a uniform grid with a second-order
    stencil and Richardson-extrapolates the trapezoid integral over the step.
    """
    _check_level_range(model, m, 0)
    _check_level_range(model, n, 0)
    half = _WINDOW / model.a

    def estimate(points: int) -> float:
        x = np.linspace(-half, half, points)
        psi_m = mpt_eigenfunction(model, m, x)
        psi_n = mpt_eigenfunction(model, n, x)
        dpsi_n = np.gradient(psi_n, x[1] - x[0])
        return -model.hbar * float(np.trapezoid(psi_m * dpsi_n, x))

    coarse = estimate((n_points - 1) // 2 + 1)
    fine = estimate(n_points)
    return (4.0 * fine - coarse) / 3.0


def _ladder_f(model: ModifiedPT, n: int) -> float:
    return float(np.sqrt(model.f_squared(n)))


def mpt_coeff_f(model: ModifiedPT, n: int) -> float:
    """One-step coordinate coefficient; -> 1 in the oscillator limit."""
    _check_level_range(model, n, 1)
    scale = (2.0 * model.mu * model.omega / model.hbar) ** 0.5
    table = mpt_tables(model).x_table
    return scale * table[n - 1, n] / (_ladder_f(model, n) * n**0.5)


def mpt_coeff_g(model: ModifiedPT, n: int) -> float:
    """Three-step coordinate coefficient; small and -> 0 in the oscillator limit."""
    _check_level_range(model, n, 3)
    scale = (2.0 * model.mu * model.omega / model.hbar) ** 0.5
    table = mpt_tables(model).x_table
    denom = (
        _ladder_f(model, n)
        * _ladder_f(model, n - 1)
        * _ladder_f(model, n - 2)
        * (n * (n - 1) * (n - 2)) ** 0.5
    )
    return scale * table[n - 3, n] / denom


def mpt_coeff_r(model: ModifiedPT, n: int) -> float:
    """One-step momentum coefficient; -> 1 in the oscillator limit."""
    _check_level_range(model, n, 1)
    scale = (2.0 / (model.hbar * model.mu * model.omega)) ** 0.5
    table = mpt_tables(model).p_table
    return -scale * table[n - 1, n] / (_ladder_f(model, n) * n**0.5)


def mpt_coeff_s(model: ModifiedPT, n: int) -> float:
    """Three-step momentum coefficient."""
    _check_level_range(model, n, 3)
    scale = (2.0 / (model.hbar * model.mu * model.omega)) ** 0.5
    table = mpt_tables(model).p_table
    denom = (
        _ladder_f(model, n)
        * _ladder_f(model, n - 1)
        * _ladder_f(model, n - 2)
        * (n * (n - 1) * (n - 2)) ** 0.5
    )
    return -scale * table[n - 3, n] / denom


def mpt_delta5_ratio(model: ModifiedPT) -> float:
    """Largest |Delta n| >= 5 element relative to the largest element.

    Measures what the three-step ladder expansion cannot represent.
    """
    tables = mpt_tables(model)
    s = model.s
    m_idx, n_idx = np.indices((s, s))
    far = np.abs(m_idx - n_idx) >= 5
    worst = 0.0
    for table in (tables.x_table, tables.p_table):
        top = float(np.max(np.abs(table)))
        if top > 0.0 and far.any():
            worst = max(worst, float(np.max(np.abs(table[far]))) / top)
    return worst


def _resolve_dim(model: ModifiedPT, dim: int | None) -> int:
    if dim is None:
        dim = model.bound_dim + 3
    if dim < 1:
        raise DomainError(f"dim must be positive, got {dim}")
    if dim > model.bound_dim + 3:
        raise DomainError(
            f"dim {dim} exceeds bound block {model.bound_dim} plus three padding rows"
        )
    return dim


def mpt_x_matrix(model: ModifiedPT, dim: int | None = None) -> QuadOperator:
    """Coordinate matrix; Hermitian, couplings at |Delta n| of 1 and 3 only."""
    dim = _resolve_dim(model, dim)
    s = model.bound_dim
    pref = (model.hbar / (2.0 * model.mu * model.omega)) ** 0.5
    mat = np.zeros((dim, dim), dtype=np.complex128)
    for n in range(1, min(dim, s)):
        val = pref * mpt_coeff_f(model, n) * ladder_down_element(model, n)
        mat[n - 1, n] = val
        mat[n, n - 1] = val
    for n in range(3, min(dim, s)):
        down3 = (
            ladder_down_element(model, n)
            * ladder_down_element(model, n - 1)
            * ladder_down_element(model, n - 2)
        )
        val = pref * mpt_coeff_g(model, n) * down3
        mat[n - 3, n] = val
        mat[n, n - 3] = val
    bandwidth = 0 if dim >= s else 3
    return QuadOperator(mat, "x", bandwidth=bandwidth)


def mpt_p_matrix(model: ModifiedPT, dim: int | None = None) -> QuadOperator:
    """Momentum matrix; Hermitian, pure imaginary, zero diagonal."""
    dim = _resolve_dim(model, dim)
    s = model.bound_dim
    pref = (model.hbar * model.mu * model.omega / 2.0) ** 0.5
    mat = np.zeros((dim, dim), dtype=np.complex128)
    for n in range(1, min(dim, s)):
        val = pref * mpt_coeff_r(model, n) * ladder_down_element(model, n)
        mat[n - 1, n] = -1j * val
        mat[n, n - 1] = 1j * val
    for n in range(3, min(dim, s)):
        down3 = (
            ladder_down_element(model, n)
            * ladder_down_element(model, n - 1)
            * ladder_down_element(model, n - 2)
        )
        val = pref * mpt_coeff_s(model, n) * down3
        mat[n - 3, n] = -1j * val
        mat[n, n - 3] = 1j * val
    bandwidth = 0 if dim >= s else 3
    return QuadOperator(mat, "p", bandwidth=bandwidth)
