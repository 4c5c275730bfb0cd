"""Quadrature operators on the number basis and moment evaluation.

A QuadOperator is a dense Hermitian matrix over |0>..|dim-1> together with its
coupling bandwidth.  Second moments are evaluated as <M^2> = ||M psi||^2,
which is exact provided the state keeps no weight in the top `bandwidth` rows
of the matrix; moments() enforces that with a leakage guard, and the deformed
builders (morse_ops, mpt_ops) default to two or three padding rows above the
bound block for exactly this reason.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .models import Harmonic, Model
from .states import FockVector

#: tolerated state amplitude inside an operator's top padding rows
LEAK_TOL = 1e-10


class NumericsError(RuntimeError):
    """A computed quantity violated an exactness guard (leakage, negative
    variance, spurious imaginary part, vanishing commutator)."""


@dataclass
class QuadOperator:
    matrix: np.ndarray
    label: str
    bandwidth: int

    def __post_init__(self) -> None:
        self.matrix = np.asarray(self.matrix, dtype=np.complex128)
        if self.matrix.ndim != 2 or self.matrix.shape[0] != self.matrix.shape[1]:
            raise ValueError(f"operator matrix must be square, got {self.matrix.shape}")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def hermiticity_defect(op: QuadOperator) -> float:
    """max |M - M^dagger| over all elements."""
    return float(np.max(np.abs(op.matrix - op.matrix.conj().T)))


def _padded_amps(op: QuadOperator, state: FockVector) -> np.ndarray:
    if state.dim > op.dim:
        raise ValueError(
            f"state dim {state.dim} exceeds operator dim {op.dim}"
        )
    amps = np.zeros(op.dim, dtype=np.complex128)
    amps[: state.dim] = state.amps
    guard = min(op.bandwidth, op.dim)
    leak = float(np.max(np.abs(amps[op.dim - guard :]))) if guard else 0.0
    if leak > LEAK_TOL:
        raise NumericsError(
            f"state keeps amplitude {leak:.3e} in the top {guard} rows of the "
            f"{op.label} matrix; second moments would be truncated "
            f"(enlarge the operator dim)"
        )
    return amps


def moments(op: QuadOperator, state: FockVector) -> tuple[float, float]:
    """(mean, variance) of a Hermitian operator in the given state.

    mean = <psi|M|psi>, variance = ||M psi||^2 - mean^2.
    """
    amps = _padded_amps(op, state)
    applied = op.matrix @ amps
    mean_c = np.vdot(amps, applied)
    if abs(mean_c.imag) > 1e-10:
        raise NumericsError(
            f"<{op.label}> has imaginary part {mean_c.imag:.3e}; operator not Hermitian?"
        )
    mean = float(mean_c.real)
    second = float(np.vdot(applied, applied).real)
    variance = second - mean * mean
    if variance < -1e-10:
        raise NumericsError(f"variance of {op.label} came out {variance:.3e} < 0")
    return mean, max(variance, 0.0)


def commutator_expectation(
    x_op: QuadOperator, p_op: QuadOperator, state: FockVector
) -> complex:
    """<[X, P]> evaluated as <X psi|P psi> - <P psi|X psi>."""
    if x_op.dim != p_op.dim:
        raise ValueError(f"operator dims differ: {x_op.dim} vs {p_op.dim}")
    amps = _padded_amps(x_op, state)
    _padded_amps(p_op, state)
    xs = x_op.matrix @ amps
    ps = p_op.matrix @ amps
    return complex(2j * np.vdot(xs, ps).imag)


def normalized_uncertainty(
    state: FockVector, x_op: QuadOperator, p_op: QuadOperator
) -> float:
    """Delta_xp = 4 var(x) var(p) / |<[x, p]>|^2; equals 1 at minimum uncertainty."""
    _, var_x = moments(x_op, state)
    _, var_p = moments(p_op, state)
    comm = commutator_expectation(x_op, p_op, state)
    denom = abs(comm) ** 2
    if denom < 1e-24 * max(var_x * var_p, 1e-300):
        raise NumericsError(
            "commutator expectation vanishes; the normalized uncertainty "
            "product is undefined for this state"
        )
    return 4.0 * var_x * var_p / denom


def harmonic_x_matrix(model: Harmonic, dim: int) -> QuadOperator:
    """x = sqrt(hbar/(2 mu omega)) (a + a^dag)."""
    scale = (model.hbar / (2.0 * model.mu * model.omega)) ** 0.5
    mat = np.zeros((dim, dim), dtype=np.complex128)
    for n in range(1, dim):
        mat[n - 1, n] = mat[n, n - 1] = scale * n**0.5
    return QuadOperator(mat, "x", bandwidth=1)


def harmonic_p_matrix(model: Harmonic, dim: int) -> QuadOperator:
    """p = i sqrt(hbar mu omega / 2) (a^dag - a)."""
    scale = (model.hbar * model.mu * model.omega / 2.0) ** 0.5
    mat = np.zeros((dim, dim), dtype=np.complex128)
    for n in range(1, dim):
        mat[n, n - 1] = 1j * scale * n**0.5
        mat[n - 1, n] = -1j * scale * n**0.5
    return QuadOperator(mat, "p", bandwidth=1)


def quadrature_pair(model: Model, dim: int | None = None) -> tuple[QuadOperator, QuadOperator]:
    """Deformed (x, p) matrices appropriate for the model.

    Dispatches to the Morse or modified Poschl-Teller builders; the harmonic
    model gets the textbook ladder forms.  The trigonometric well has no
    published quadrature expansion, so it is refused.
    """
    from .models import Morse, ModifiedPT, TrigPT

    if isinstance(model, Morse):
        from .morse_ops import morse_p_matrix, morse_x_matrix

        return morse_x_matrix(model, dim), morse_p_matrix(model, dim)
    if isinstance(model, ModifiedPT):
        from .mpt_ops import mpt_p_matrix, mpt_x_matrix

        return mpt_x_matrix(model, dim), mpt_p_matrix(model, dim)
    if isinstance(model, Harmonic):
        if dim is None:
            raise ValueError("dim is required for the harmonic quadratures")
        return harmonic_x_matrix(model, dim), harmonic_p_matrix(model, dim)
    if isinstance(model, TrigPT):
        raise ValueError(
            "no coordinate/momentum expansion is defined for the trigonometric well"
        )
    raise TypeError(f"unsupported model {model!r}")
