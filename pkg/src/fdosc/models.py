"""Deformed-oscillator models of shape-invariant potential wells.

Each model supplies a deformation profile f^2(n) for the ladder pair
A = a f(n_hat), A^dag = f(n_hat) a^dag, so that

    A |n> = sqrt(n f^2(n)) |n-1>,   A^dag |n> = sqrt((n+1) f^2(n+1)) |n+1>,

and the Hamiltonian H = (hbar*Omega/2)(A A^dag + A^dag A) is diagonal in the
number basis with

    E_n = (hbar*Omega/2) [n f^2(n) + (n+1) f^2(n+1)].

The supported profiles:

    Harmonic   f^2(n) = 1
    Morse      f^2(n) = 1 - n/(2N+1)                (N bound levels)
    ModifiedPT f^2(n) = chi * (2s+1 - n),  chi = hbar a^2 / (2 mu Omega)
    TrigPT     f^2(n) = chi * (n + 2 lam - 1)

Morse and ModifiedPT have finitely many bound levels and a finite invariant
ladder block (the up/down couplings vanish where f^2 hits zero); TrigPT and
Harmonic are unbounded.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union


class DomainError(ValueError):
    """Quantum number or parameter outside a model's valid range."""


def _check_positive(**kwargs: float) -> None:
    for name, value in kwargs.items():
        if not value > 0:
            raise ValueError(f"{name} must be positive, got {value}")


@dataclass(frozen=True)
class Harmonic:
    """Undeformed reference oscillator, f^2(n) = 1."""

    omega: float = 1.0
    mu: float = 1.0
    hbar: float = 1.0

    label = "harmonic"

    def __post_init__(self) -> None:
        _check_positive(omega=self.omega, mu=self.mu, hbar=self.hbar)

    @property
    def bound_dim(self) -> Optional[int]:
        return None

    @property
    def invariant_dim(self) -> Optional[int]:
        return None

    def f_squared(self, n: int) -> float:
        _check_level(n)
        return 1.0

    def energy(self, n: int) -> float:
        """E_n = hbar*omega*(n + 1/2)."""
        _check_level(n)
        return self.hbar * self.omega * (n + 0.5)


@dataclass(frozen=True)
class Morse:
    """Morse well with n_bound bound levels.

    The deformation is f^2(n) = 1 - chi*n with chi = 1/(2*n_bound + 1), so the
    ladder-coupling zero sits at n = 2*n_bound + 1 and the invariant block has
    dimension 2*n_bound + 1.  Energies follow the anharmonic closed form

        E_n = hbar*omega*(n + 1/2 - chi*(n + 1/2)^2 - chi/4),

    which sits the constant hbar*omega*chi/4 below the same well's spectrum
    measured from the potential minimum (see well_energy).
    """

    n_bound: int = 22
    omega: float = 1.0
    mu: float = 1.0
    hbar: float = 1.0

    label = "morse"

    def __post_init__(self) -> None:
        if not isinstance(self.n_bound, int) or self.n_bound < 1:
            raise ValueError(f"n_bound must be an integer >= 1, got {self.n_bound}")
        _check_positive(omega=self.omega, mu=self.mu, hbar=self.hbar)

    @property
    def child_k(self) -> int:
        """Anharmonicity order parameter k = 2*n_bound + 1."""
        return 2 * self.n_bound + 1

    @property
    def chi(self) -> float:
        """Anharmonicity chi = 1/(2*n_bound + 1)."""
        return 1.0 / self.child_k

    @property
    def bound_dim(self) -> int:
        return self.n_bound

    @property
    def invariant_dim(self) -> int:
        return self.child_k

    @property
    def well_depth(self) -> float:
        """Dissociation energy D of the equivalent Morse well."""
        return self.hbar * self.omega * self.child_k / 4.0

    @property
    def well_beta(self) -> float:
        """Range parameter beta of the equivalent well, from omega = beta*sqrt(2D/mu)."""
        return self.omega * (self.mu / (2.0 * self.well_depth)) ** 0.5

    @property
    def well_offset(self) -> float:
        """Constant separating E_n from the well spectrum: hbar*omega*chi/4."""
        return self.hbar * self.omega * self.chi / 4.0

    def f_squared(self, n: int) -> float:
        _check_level(n)
        return 1.0 - self.chi * n

    def energy(self, n: int) -> float:
        _check_level(n)
        if n >= self.n_bound:
            raise DomainError(
                f"level n={n} is at or above the dissociation limit; the well "
                f"holds {self.n_bound} bound levels (n <= {self.n_bound - 1})"
            )
        half = n + 0.5
        return self.hbar * self.omega * (half - self.chi * half * half - self.chi / 4.0)


@dataclass(frozen=True)
class ModifiedPT:
    """Modified Poschl-Teller well U0 * tanh^2(a x) with s bound levels.

    f^2(n) = chi*(2s+1-n), chi = hbar*a^2/(2*mu*omega).  The reference
    frequency omega is a free scale that cancels in the Hamiltonian; the
    default makes f^2(0) = 1.
    """

    s: int = 10
    a: float = 1.0
    mu: float = 1.0
    hbar: float = 1.0
    omega: Optional[float] = None

    label = "mpt"

    def __post_init__(self) -> None:
        if not isinstance(self.s, int) or self.s < 1:
            raise ValueError(f"s must be an integer >= 1, got {self.s}")
        _check_positive(a=self.a, mu=self.mu, hbar=self.hbar)
        if self.omega is None:
            object.__setattr__(self, "omega", self.default_omega())
        _check_positive(omega=self.omega)

    def default_omega(self) -> float:
        return self.hbar * self.a**2 * (2 * self.s + 1) / (2.0 * self.mu)

    @property
    def chi(self) -> float:
        return self.hbar * self.a**2 / (2.0 * self.mu * self.omega)

    @property
    def bound_dim(self) -> int:
        return self.s

    @property
    def invariant_dim(self) -> int:
        return 2 * self.s + 1

    @property
    def well_depth(self) -> float:
        """U0 = (hbar^2 a^2 / 2 mu) * s*(s+1)."""
        return self.hbar**2 * self.a**2 * self.s * (self.s + 1) / (2.0 * self.mu)

    def f_squared(self, n: int) -> float:
        _check_level(n)
        return self.chi * (2 * self.s + 1 - n)

    def energy(self, n: int) -> float:
        """E_n = (hbar^2 a^2 / 2 mu) * (-n^2 + 2 s n + s)."""
        _check_level(n)
        if n >= self.s:
            raise DomainError(
                f"level n={n} is at or above the dissociation limit; the well "
                f"holds {self.s} bound levels (n <= {self.s - 1})"
            )
        scale = self.hbar**2 * self.a**2 / (2.0 * self.mu)
        return scale * (-(n**2) + 2 * self.s * n + self.s)


@dataclass(frozen=True)
class TrigPT:
    """Trigonometric Poschl-Teller well U0 * tan^2(a x) on (-pi/2a, pi/2a).

    f^2(n) = chi*(n + 2*lam - 1) grows with n; every level is bound.  The
    default omega = hbar*a^2*lam/mu is the scale at which the coherent-state
    closed forms take their simplest shape (chi = 1/(2*lam)).
    """

    lam: float = 2.0
    a: float = 1.0
    mu: float = 1.0
    hbar: float = 1.0
    omega: Optional[float] = None

    label = "tpt"

    def __post_init__(self) -> None:
        if not self.lam > 1:
            raise ValueError(f"lam must exceed 1, got {self.lam}")
        _check_positive(a=self.a, mu=self.mu, hbar=self.hbar)
        if self.omega is None:
            object.__setattr__(self, "omega", self.default_omega())
        _check_positive(omega=self.omega)

    def default_omega(self) -> float:
        return self.hbar * self.a**2 * self.lam / self.mu

    @property
    def chi(self) -> float:
        return self.hbar * self.a**2 / (2.0 * self.mu * self.omega)

    @property
    def bound_dim(self) -> Optional[int]:
        return None

    @property
    def invariant_dim(self) -> Optional[int]:
        return None

    @property
    def well_depth(self) -> float:
        """U0 = (hbar^2 a^2 / 2 mu) * lam*(lam-1)."""
        return self.hbar**2 * self.a**2 * self.lam * (self.lam - 1.0) / (2.0 * self.mu)

    @property
    def half_width(self) -> float:
        """Half-period pi/(2a) of the confining domain."""
        import math

        return math.pi / (2.0 * self.a)

    def f_squared(self, n: int) -> float:
        _check_level(n)
        return self.chi * (n + 2.0 * self.lam - 1.0)

    def energy(self, n: int) -> float:
        """E_n = (hbar^2 a^2 / 2 mu) * (n^2 + 2*lam*n + lam)."""
        _check_level(n)
        scale = self.hbar**2 * self.a**2 / (2.0 * self.mu)
        return scale * (n**2 + 2.0 * self.lam * n + self.lam)


Model = Union[Harmonic, Morse, ModifiedPT, TrigPT]

FINITE_MODELS = (Morse, ModifiedPT)


def _check_level(n: int) -> None:
    if not isinstance(n, (int,)) or isinstance(n, bool):
        raise DomainError(f"quantum number must be an integer, got {n!r}")
    if n < 0:
        raise DomainError(f"quantum number must be nonnegative, got {n}")


def is_bounded(model: Model) -> bool:
    return model.bound_dim is not None


def ladder_down_element(model: Model, n: int) -> float:
    """Coupling <n-1| A |n> = sqrt(n f^2(n)); zero at n = 0.

    Raises DomainError outside the invariant subspace (f^2 < 0).
    """
    _check_level(n)
    if n == 0:
        return 0.0
    f2 = model.f_squared(n)
    if f2 < 0.0:
        raise DomainError(
            f"level n={n} lies outside the invariant ladder block "
            f"(f^2(n) = {f2:.6g} < 0)"
        )
    return (n * f2) ** 0.5


def ladder_up_element(model: Model, n: int) -> float:
    """Coupling <n+1| A^dag |n> = sqrt((n+1) f^2(n+1))."""
    return ladder_down_element(model, n + 1)


def commutator_eigenvalue(model: Model, n: int) -> float:
    """Eigenvalue of [A, A^dag] on |n>: (n+1) f^2(n+1) - n f^2(n)."""
    _check_level(n)
    return (n + 1) * model.f_squared(n + 1) - n * model.f_squared(n)


def generic_energy(model: Model, n: int) -> float:
    """Symmetrized ladder-pair energy (hbar*Omega/2)[n f^2(n) + (n+1) f^2(n+1)].

    Equals the model's closed-form energy wherever the latter is defined; kept
    as an independent expression for cross-checks.
    """
    _check_level(n)
    half = 0.5 * model.hbar * model.omega
    return half * (n * model.f_squared(n) + (n + 1) * model.f_squared(n + 1))


def well_energy(model: Model, n: int) -> float:
    """Level energy measured from the potential-well minimum.

    Identical to energy(n) except for Morse, where the ladder-pair convention
    sits hbar*omega*chi/4 below the well spectrum.
    """
    offset = model.well_offset if isinstance(model, Morse) else 0.0
    return model.energy(n) + offset


def annihilation_matrix(model: Model, dim: int):
    """Dense (dim x dim) matrix of the deformed annihilation operator A.

    Elements A[n-1, n] = sqrt(n f^2(n)).  For finite models dim must not
    exceed the invariant block dimension.
    """
    import numpy as np

    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    inv = model.invariant_dim
    if inv is not None and dim > inv:
        raise DomainError(
            f"dim={dim} exceeds the invariant block dimension {inv} of {model.label}"
        )
    mat = np.zeros((dim, dim))
    for n in range(1, dim):
        mat[n - 1, n] = ladder_down_element(model, n)
    return mat
