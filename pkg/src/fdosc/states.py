"""Coherent states of a deformed ladder pair.

Two standard constructions are provided for every model:

* AOCS, the annihilation-operator coherent state: the normalized solution of
  A |alpha, f> = alpha |alpha, f>, built from the stable recurrence
  c_n = alpha * c_{n-1} / (sqrt(n) f(n)).

* DOCS, the displacement-operator coherent state exp(alpha A^dag -
  alpha^* A)|0>.  For the finitely laddered models (Morse, ModifiedPT) the
  deformed ladder is a rescaled su(2) pair, so the displaced vacuum has exact
  binomial amplitudes

      c_n = sqrt(C(m, n)) zeta^n / (1+|zeta|^2)^(m/2),
      zeta = e^{i phi} tan(|alpha| sqrt(chi)),  m = invariant_dim - 1,

  with a tangent pole at |alpha| sqrt(chi) = pi/2.  TrigPT is the su(1,1)
  analogue with zeta = e^{i phi} tanh(|alpha| sqrt(chi)) and Gamma-ratio
  amplitudes; Harmonic reduces to the Glauber state.

Amplitude magnitudes are assembled in log space throughout, so states close
to the tangent pole and high-order Gamma ratios stay finite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm
from scipy.optimize import brentq
from scipy.special import gammaln

from .models import (
    DomainError,
    Harmonic,
    Model,
    Morse,
    ModifiedPT,
    TrigPT,
    annihilation_matrix,
    is_bounded,
)

TRUNCATION_BOUND = "bound"
TRUNCATION_BLOCK = "block"
TRUNCATION_ADAPTIVE = "adaptive"

KIND_AOCS = "aocs"
KIND_DOCS = "docs"

#: consecutive sub-threshold terms required before an adaptive sum stops
_ADAPTIVE_RUN = 3
_ADAPTIVE_MAX_DIM = 200_000


class ConvergenceError(RuntimeError):
    """A numeric procedure failed to reach its stated tolerance."""


@dataclass
class FockVector:
    """State amplitudes over number states |0>, |1>, ..., |dim-1>.

    norm_kept records the L2 norm the closed-form amplitudes retained after
    truncation, before any renormalization (1.0 when nothing was cut).
    """

    amps: np.ndarray
    norm_kept: float = 1.0

    def __post_init__(self) -> None:
        self.amps = np.asarray(self.amps, dtype=np.complex128)
        if self.amps.ndim != 1 or self.amps.shape[0] < 1:
            raise ValueError(
                f"amplitudes must form a nonempty vector, got shape {self.amps.shape}"
            )

    @property
    def dim(self) -> int:
        return self.amps.shape[0]

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))


def default_truncation(model: Model) -> str:
    return TRUNCATION_BOUND if is_bounded(model) else TRUNCATION_ADAPTIVE


def _resolve_truncation(model: Model, truncation: str | None, kind: str) -> str:
    trunc = default_truncation(model) if truncation is None else truncation
    if trunc not in (TRUNCATION_BOUND, TRUNCATION_BLOCK, TRUNCATION_ADAPTIVE):
        raise ValueError(f"unknown truncation {trunc!r}")
    if trunc in (TRUNCATION_BOUND, TRUNCATION_BLOCK) and not is_bounded(model):
        raise ValueError(
            f"truncation {trunc!r} is undefined for the unbounded model "
            f"{model.label!r}; use adaptive truncation"
        )
    if trunc == TRUNCATION_ADAPTIVE and is_bounded(model):
        raise ValueError(
            f"adaptive truncation is undefined for the finite model "
            f"{model.label!r}; use {TRUNCATION_BOUND!r} or {TRUNCATION_BLOCK!r}"
        )
    if trunc == TRUNCATION_BLOCK and kind == KIND_AOCS:
        raise ValueError(
            "AOCS is defined on the bound block only; block truncation applies to DOCS"
        )
    return trunc


def _adaptive_sum(log_mag, phase_step: complex, eps: float) -> tuple[np.ndarray, float]:
    """Accumulate amplitudes c_n = exp(log_mag(n)) * phase_step**n adaptively.

    Stops once the squared amplitude stays below eps times the accumulated
    squared norm for _ADAPTIVE_RUN consecutive terms.  Returns the amplitudes
    scaled so their largest magnitude is 1, together with the log of the
    scale that was divided out; working in the log domain keeps very large
    and very small coherence amplitudes finite.
    """
    logs = []
    log_norm2 = -math.inf
    log_eps = math.log(eps)
    run = 0
    for n in range(_ADAPTIVE_MAX_DIM):
        lm = log_mag(n)
        logs.append(lm)
        log_norm2 = np.logaddexp(log_norm2, 2.0 * lm)
        if 2.0 * lm < log_eps + log_norm2:
            run += 1
            if run >= _ADAPTIVE_RUN:
                break
        else:
            run = 0
    else:
        raise ConvergenceError(
            f"adaptive truncation did not converge within {_ADAPTIVE_MAX_DIM} levels"
        )
    log_arr = np.asarray(logs)
    peak = float(np.max(log_arr))
    mags = np.exp(log_arr - peak)
    phases = np.asarray(phase_step, dtype=np.complex128) ** np.arange(log_arr.size)
    return mags * phases, peak


def _unit(amps: np.ndarray) -> tuple[np.ndarray, float]:
    """(amps / ||amps||, ||amps||), peak-scaled so subnormal vectors survive."""
    peak = float(np.max(np.abs(amps)))
    if peak == 0.0 or not math.isfinite(peak):
        raise ConvergenceError(
            f"amplitudes cannot be normalized (peak magnitude {peak})"
        )
    scaled = amps / peak
    rest = float(np.linalg.norm(scaled))
    return scaled / rest, peak * rest


def build_aocs(
    model: Model,
    alpha: complex,
    truncation: str | None = None,
    renormalize: bool = True,
    tail_eps: float = 1e-16,
) -> FockVector:
    """Annihilation-operator coherent state, normalized numerically.

    Finite models are truncated to their bound block; unbounded models use
    adaptive truncation with the given tail threshold.  The eigen-residual of
    the truncated state is available via aocs_residual.
    """
    alpha = complex(alpha)
    trunc = _resolve_truncation(model, truncation, KIND_AOCS)
    del renormalize  # the eigenstate has no printed prefactor; always unit norm
    if trunc == TRUNCATION_BOUND:
        dim = model.bound_dim
        amps = np.zeros(dim, dtype=np.complex128)
        amps[0] = 1.0
        for n in range(1, dim):
            amps[n] = alpha * amps[n - 1] / (
                math.sqrt(n) * math.sqrt(model.f_squared(n))
            )
        kept = 1.0
    else:
        # ratio recurrence in log magnitude to survive large alpha
        r = abs(alpha)
        if r == 0.0:
            amps = np.array([1.0 + 0.0j])
            kept = 1.0
        else:
            phase_step = alpha / r
            logs = [0.0]

            def log_mag(n: int, _logs=logs) -> float:
                if n == 0:
                    return 0.0
                if n == len(_logs):
                    step = math.log(r) - 0.5 * math.log(n) - 0.5 * math.log(
                        model.f_squared(n)
                    )
                    _logs.append(_logs[-1] + step)
                return _logs[n]

            amps, _ = _adaptive_sum(log_mag, phase_step, tail_eps)
            kept = 1.0
    unit, _ = _unit(amps)
    return FockVector(unit, norm_kept=kept)


def _docs_pole(model: Model) -> float:
    """Largest admissible |alpha| scale for the tangent map (finite models)."""
    return 0.5 * math.pi / math.sqrt(model.chi)


def _binomial_amps(m: int, zeta: complex, top: int) -> tuple[np.ndarray, float]:
    """c_n = sqrt(C(m,n)) zeta^n / (1+|zeta|^2)^(m/2) for n = 0..top.

    Returned peak-scaled with the log of the divided-out scale, like
    _adaptive_sum; close to the tangent pole the raw magnitudes underflow.
    """
    n = np.arange(top + 1)
    r = abs(zeta)
    if r == 0.0:
        amps = np.zeros(top + 1, dtype=np.complex128)
        amps[0] = 1.0
        return amps, 0.0
    log_c = 0.5 * (gammaln(m + 1) - gammaln(n + 1) - gammaln(m - n + 1))
    log_mag = log_c + n * math.log(r) - 0.5 * m * math.log1p(r * r)
    peak = float(np.max(log_mag))
    phases = np.exp(1j * n * np.angle(zeta))
    return np.exp(log_mag - peak) * phases, peak


def build_docs(
    model: Model,
    alpha: complex,
    truncation: str | None = None,
    renormalize: bool = True,
    tail_eps: float = 1e-16,
) -> FockVector:
    """Displacement-operator coherent state exp(alpha A^dag - alpha^* A)|0>.

    Closed forms per model (see module docstring); the Morse/ModifiedPT map
    requires |alpha| sqrt(chi) < pi/2.  With renormalize=False the printed
    prefactor is kept, so a truncated state reports its norm deficit.
    """
    alpha = complex(alpha)
    trunc = _resolve_truncation(model, truncation, KIND_DOCS)
    r = abs(alpha)
    phi = math.atan2(alpha.imag, alpha.real)

    if isinstance(model, (Morse, ModifiedPT)):
        pole = _docs_pole(model)
        if r >= pole:
            raise DomainError(
                f"|alpha| = {r:.6g} is at or beyond the tangent pole "
                f"{pole:.6g} of the {model.label} displacement map"
            )
        zeta = cmath_from_polar(math.tan(r * math.sqrt(model.chi)), phi)
        m = model.invariant_dim - 1
        top = model.bound_dim - 1 if trunc == TRUNCATION_BOUND else m
        amps, log_scale = _binomial_amps(m, zeta, top)
    elif isinstance(model, TrigPT):
        zeta = cmath_from_polar(math.tanh(r * math.sqrt(model.chi)), phi)
        amps, log_scale = _su11_amps(model.lam, zeta, tail_eps)
    elif isinstance(model, Harmonic):
        amps, log_scale = glauber_amplitudes(alpha, tail_eps=tail_eps), 0.0
    else:
        raise TypeError(f"unsupported model {model!r}")

    unit, scaled_norm = _unit(amps)
    kept = math.exp(log_scale) * scaled_norm if log_scale != 0.0 else scaled_norm
    if renormalize:
        return FockVector(unit, norm_kept=kept)
    return FockVector(amps * math.exp(log_scale), norm_kept=kept)


def cmath_from_polar(mag: float, phase: float) -> complex:
    return complex(mag * math.cos(phase), mag * math.sin(phase))


def _su11_amps(lam: float, zeta: complex, tail_eps: float) -> tuple[np.ndarray, float]:
    """c_n = (1-|zeta|^2)^lam * zeta^n * sqrt(Gamma(2 lam + n)/(n! Gamma(2 lam)))."""
    r = abs(zeta)
    if r == 0.0:
        return np.array([1.0 + 0.0j]), 0.0
    if r >= 1.0:
        raise DomainError(f"|zeta| = {r:.6g} outside the unit disk")
    base = lam * math.log1p(-r * r)
    log_r = math.log(r)
    g0 = gammaln(2.0 * lam)

    def log_mag(n: int) -> float:
        return base + n * log_r + 0.5 * (gammaln(2.0 * lam + n) - gammaln(n + 1) - g0)

    phase_step = zeta / r
    return _adaptive_sum(log_mag, phase_step, tail_eps)


def glauber_amplitudes(alpha: complex, dim: int | None = None, tail_eps: float = 1e-16) -> np.ndarray:
    """Glauber amplitudes e^{-|alpha|^2/2} alpha^n / sqrt(n!).

    With dim given, returns exactly that many levels; otherwise truncates
    adaptively.
    """
    alpha = complex(alpha)
    r = abs(alpha)
    if r == 0.0:
        n_levels = 1 if dim is None else dim
        amps = np.zeros(n_levels, dtype=np.complex128)
        amps[0] = 1.0
        return amps

    def log_mag(n: int) -> float:
        return n * math.log(r) - 0.5 * gammaln(n + 1) - 0.5 * r * r

    phase_step = alpha / r
    if dim is None:
        amps, log_scale = _adaptive_sum(log_mag, phase_step, tail_eps)
        # the Glauber peak magnitude never exceeds 1, so this cannot overflow
        return amps * math.exp(log_scale)
    n = np.arange(dim)
    log_mags = n * math.log(r) - 0.5 * gammaln(n + 1) - 0.5 * r * r
    return np.exp(log_mags) * phase_step ** n


def build_state(
    model: Model,
    kind: str,
    alpha: complex,
    truncation: str | None = None,
    renormalize: bool = True,
    tail_eps: float = 1e-16,
) -> FockVector:
    """Dispatch to build_aocs / build_docs by kind."""
    if kind == KIND_AOCS:
        return build_aocs(model, alpha, truncation, renormalize, tail_eps)
    if kind == KIND_DOCS:
        return build_docs(model, alpha, truncation, renormalize, tail_eps)
    raise ValueError(f"unknown coherent-state kind {kind!r}")


def docs_exponential_oracle(model: Model, alpha: complex, dim: int | None = None) -> FockVector:
    """Brute-force displaced vacuum: expm(alpha A^dag - alpha^* A) |0>.

    For finite models the exponential closes on the invariant block, so dim
    defaults to (and must equal) invariant_dim and the result is exact.  For
    unbounded models the caller chooses dim; the call refuses if the result
    keeps significant weight in the top rows (truncation was too tight).
    """
    alpha = complex(alpha)
    if is_bounded(model):
        if dim is None:
            dim = model.invariant_dim
        if dim != model.invariant_dim:
            raise ValueError(
                f"the exponential closes on the invariant block; "
                f"dim must be {model.invariant_dim}, got {dim}"
            )
    elif dim is None:
        raise ValueError("dim is required for unbounded models")
    a_mat = annihilation_matrix(model, dim)
    gen = alpha * a_mat.T - np.conj(alpha) * a_mat
    vac = np.zeros(dim, dtype=np.complex128)
    vac[0] = 1.0
    amps = expm(gen) @ vac
    if not is_bounded(model):
        tail = float(np.sum(np.abs(amps[-3:]) ** 2))
        if tail > 1e-12:
            raise ConvergenceError(
                f"displaced vacuum keeps squared tail mass {tail:.3e} in the top "
                f"3 of {dim} rows; enlarge dim"
            )
    return FockVector(amps)


def occupation_distribution(state: FockVector) -> np.ndarray:
    """P_n = |c_n|^2."""
    return np.abs(state.amps) ** 2


def mean_occupation(state: FockVector) -> float:
    """<n> = sum_n n P_n."""
    p = occupation_distribution(state)
    return float(np.dot(np.arange(state.dim), p))


def overlap(bra: FockVector, ket: FockVector) -> complex:
    """<bra|ket> with zero padding of the shorter vector."""
    d = min(bra.dim, ket.dim)
    return complex(np.vdot(bra.amps[:d], ket.amps[:d]))


def aocs_residual(model: Model, state: FockVector, alpha: complex) -> float:
    """||A|psi> - alpha|psi>|| on the state's truncation."""
    a_mat = annihilation_matrix(model, state.dim)
    return float(np.linalg.norm(a_mat @ state.amps - complex(alpha) * state.amps))


def invert_alpha(
    model: Model,
    kind: str,
    target_mean_n: float,
    truncation: str | None = None,
    renormalize: bool = True,
) -> float:
    """|alpha| whose coherent state has the requested mean occupation.

    The mean is monotone in |alpha| for every model/kind, so a bracketing
    root find suffices.  Raises DomainError with the reachable supremum when
    the target exceeds what the truncated family can deliver.
    """
    if target_mean_n < 0:
        raise DomainError(f"target mean occupation must be >= 0, got {target_mean_n}")
    if target_mean_n == 0:
        return 0.0

    def mean_at(r: float) -> float:
        state = build_state(model, kind, r, truncation, renormalize)
        return mean_occupation(state)

    def g(r: float) -> float:
        return mean_at(r) - target_mean_n

    lo = 0.0
    if kind == KIND_DOCS and isinstance(model, (Morse, ModifiedPT)):
        hi = _docs_pole(model) * (1.0 - 1e-9)
        if g(hi) < 0.0:
            raise DomainError(
                f"target mean occupation {target_mean_n} is unreachable; the "
                f"displacement map saturates at mean {mean_at(hi):.6g} below "
                f"its tangent pole"
            )
    else:
        hi = 1.0
        for _ in range(60):
            if g(hi) > 0.0:
                break
            hi *= 2.0
        else:
            raise DomainError(
                f"target mean occupation {target_mean_n} is unreachable; "
                f"mean saturates near {mean_at(hi):.6g}"
            )
    root = brentq(g, lo, hi, xtol=1e-13, rtol=1e-15, maxiter=200)
    achieved = mean_at(root)
    if abs(achieved - target_mean_n) > 1e-8:
        raise ConvergenceError(
            f"alpha inversion missed the target mean: wanted {target_mean_n}, "
            f"got {achieved!r}"
        )
    return float(root)
