"""Coordinate and momentum matrices for the Morse well on the number basis.

The position and momentum operators are expanded through second order in the
deformed ladder operators,

    x = sqrt(hbar/(2 mu omega)) (f00(n) + f10(n) A^dag + A f10(n) + ...)
    p = i sqrt(hbar mu omega/2) (g10(n) A^dag - A g10(n) + ...)

with coefficient functions of the level index built from k = 2N+1.  The
expansion reproduces the exact bound-state matrix elements of the well up to
couplings of |Delta n| <= 2.  All coefficients approach their oscillator
values (f10, g10 -> 1, the rest -> 0) as k grows; the diagonal and the
two-step couplings vanish only like 1/sqrt(k).

The diagonal coefficient f00 contains a logarithm whose argument changes sign
at the top of the bound ladder, so matrices taller than the bound block carry
a zero diagonal on the padded rows.  Such matrices are valid for states
supported on the bound block only; moments() guards that with the bandwidth
leakage check.
"""

from __future__ import annotations

import math

from scipy.special import digamma

import numpy as np

from .models import DomainError, Morse, ladder_up_element
from .operators import QuadOperator

#: switch point between direct harmonic-number summation and the digamma form
_F0_DIRECT_MAX = 10_000


def f0_constant(k: int) -> float:
    """ln k minus the harmonic number H_{k-2}, up to Euler's constant.

    Computed as a compensated direct sum for small k and through digamma
    (psi(k-1) = H_{k-2} - gamma) for large k; the two branches agree to
    machine precision at the crossover.
    """
    if k < 3:
        raise DomainError(f"k = {k} is below the smallest Morse ladder (k >= 3)")
    if k <= _F0_DIRECT_MAX:
        harmonic = math.fsum(1.0 / p for p in range(1, k - 1))
        return math.log(k) - harmonic + np.euler_gamma
    return math.log(k) - float(digamma(k - 1))


def log_argument(k: int, n: int) -> float:
    """Argument of the logarithm inside f00; positive for 1 <= n <= N-1."""
    return (k - 2.0) * (k - n - 1.0) / ((k - 1.0 - 2.0 * n) * (k - 2.0 * n))


def coeff_f00(k: int, n: int) -> float:
    """Diagonal coordinate coefficient; defined on the bound block only."""
    if n < 0 or 2 * n >= k - 1:
        raise DomainError(
            f"f00 is defined for levels below the bound block top, got n = {n} at k = {k}"
        )
    if n == 0:
        return math.sqrt(k) * f0_constant(k)
    arg = log_argument(k, n)
    if arg <= 0.0:
        raise DomainError(f"log argument {arg} <= 0 at n = {n}, k = {k}")
    return math.sqrt(k) * (f0_constant(k) + math.log(arg))


def coeff_f10(k: int, n: int) -> float:
    """One-step coordinate coefficient; -> 1 in the oscillator limit."""
    if n < 0 or n >= k:
        raise DomainError(f"f10 needs 0 <= n < k, got n = {n}, k = {k}")
    return math.sqrt((k - 1.0) / k) * (1.0 + n / (k - n))


def coeff_f20(k: int, n: int) -> float:
    """Two-step coordinate coefficient; O(1/sqrt(k))."""
    if n < 0 or n >= k:
        raise DomainError(f"f20 needs 0 <= n < k, got n = {n}, k = {k}")
    return -(k - 1.0) * math.sqrt(k) / (2.0 * (k - n + 1.0) * (k - n))


def coeff_g10(k: int, n: int) -> float:
    """One-step momentum coefficient; -> 1 in the oscillator limit."""
    if n < 0 or n >= k:
        raise DomainError(f"g10 needs 0 <= n < k, got n = {n}, k = {k}")
    return math.sqrt((k - 1.0) / k) * ((k - 2.0 * n) / (k - n))


def coeff_g20(k: int, n: int) -> float:
    """Two-step momentum coefficient; O(1/sqrt(k)) and negative low in the well."""
    if n < 0 or n >= k:
        raise DomainError(f"g20 needs 0 <= n < k, got n = {n}, k = {k}")
    return -(k - 1.0) * (k - 2.0 * n + 1.0) / (math.sqrt(k) * (k - n + 1.0) * (k - n))


def _resolve_dim(model: Morse, dim: int | None) -> int:
    if dim is None:
        # two padding rows keep ||M psi||^2 exact for bound-block states
        dim = model.bound_dim + 2
    if dim < 1:
        raise DomainError(f"dim must be positive, got {dim}")
    if dim > model.invariant_dim:
        raise DomainError(
            f"dim {dim} exceeds the invariant block {model.invariant_dim}"
        )
    return dim


def morse_x_matrix(model: Morse, dim: int | None = None) -> QuadOperator:
    """Coordinate matrix; Hermitian, pentadiagonal, diagonal zeroed above the well."""
    dim = _resolve_dim(model, dim)
    k = model.child_k
    pref = (model.hbar / (2.0 * model.mu * model.omega)) ** 0.5
    mat = np.zeros((dim, dim), dtype=np.complex128)
    for n in range(min(dim, model.bound_dim)):
        mat[n, n] = pref * coeff_f00(k, n)
    for n in range(dim - 1):
        up = ladder_up_element(model, n)
        val = pref * coeff_f10(k, n + 1) * up
        mat[n + 1, n] = val
        mat[n, n + 1] = val
    for n in range(dim - 2):
        up2 = ladder_up_element(model, n) * ladder_up_element(model, n + 1)
        val = pref * coeff_f20(k, n + 2) * up2
        mat[n + 2, n] = val
        mat[n, n + 2] = val
    return QuadOperator(mat, "x", bandwidth=2)


def morse_p_matrix(model: Morse, dim: int | None = None) -> QuadOperator:
    """Momentum matrix; Hermitian, pure imaginary couplings, zero diagonal."""
    dim = _resolve_dim(model, dim)
    k = model.child_k
    pref = (model.hbar * model.mu * model.omega / 2.0) ** 0.5
    mat = np.zeros((dim, dim), dtype=np.complex128)
    for n in range(dim - 1):
        up = ladder_up_element(model, n)
        val = pref * coeff_g10(k, n + 1) * up
        mat[n + 1, n] = 1j * val
        mat[n, n + 1] = -1j * val
    for n in range(dim - 2):
        up2 = ladder_up_element(model, n) * ladder_up_element(model, n + 1)
        val = pref * coeff_g20(k, n + 2) * up2
        mat[n + 2, n] = 1j * val
        mat[n, n + 2] = -1j * val
    return QuadOperator(mat, "p", bandwidth=2)
