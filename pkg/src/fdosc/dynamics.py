"""Closed-form time evolution and phase-space readout.

Every model here has a purely diagonal Hamiltonian on the number basis, so
evolution is exact: amplitudes pick up phases exp(-i E_n t / hbar) and both
the norm and the occupation distribution are conserved identically.  The
heavy part is only the moment sweep along a time grid, which is delegated to
the compiled/batched kernels.

For the Morse well the ladder expectation obeys a closed factorization,

    <A>(t) = exp(-i omega t (1 - 2 chi)) sum_n c*_{n-1} c_n d(n)
             exp(2 i omega chi t (n - 1)),

equivalent to evolving each pair frequency E_n - E_{n-1} directly.  Both
pipelines are implemented and their disagreement is exposed as a residual;
the same factorization makes |<A>| exactly periodic with pi/(omega chi).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import backend_name, timeseries_moments
from .models import (
    Harmonic,
    Model,
    ModifiedPT,
    Morse,
    TrigPT,
    ladder_down_element,
)
from .operators import NumericsError, QuadOperator, _padded_amps, quadrature_pair
from .states import FockVector

DEFAULT_T_STEPS = 4096


def level_energies(model: Model, dim: int) -> np.ndarray:
    """Closed-form energies for the lowest `dim` levels."""
    return np.array([model.energy(n) for n in range(dim)])


def evolve(model: Model, state: FockVector, t: float) -> FockVector:
    """State after time t; diagonal phases only."""
    energies = level_energies(model, state.dim)
    phases = np.exp(-1j * energies * t / model.hbar)
    return FockVector(state.amps * phases, norm_kept=state.norm_kept)


def default_time_grid(model: Model, t_steps: int = DEFAULT_T_STEPS) -> np.ndarray:
    """Grid covering the natural long period of each model.

    Morse: one full pair-phase period 2 pi/(omega chi).  Modified PT:
    16 pi mu/(hbar a^2), several revivals of the quadratic spectrum.  The
    trigonometric well revives exactly every 4 pi mu/(hbar a^2) (integer
    spectrum in units of hbar a^2/(2 mu)); the harmonic grid spans four
    classical periods.
    """
    if t_steps < 2:
        raise ValueError(f"t_steps must be at least 2, got {t_steps}")
    if isinstance(model, Morse):
        horizon = 2.0 * np.pi / (model.omega * model.chi)
    elif isinstance(model, ModifiedPT):
        horizon = 16.0 * np.pi * model.mu / (model.hbar * model.a**2)
    elif isinstance(model, TrigPT):
        horizon = 8.0 * np.pi * model.mu / (model.hbar * model.a**2)
    elif isinstance(model, Harmonic):
        horizon = 8.0 * np.pi / model.omega
    else:
        raise TypeError(f"unsupported model {model!r}")
    return np.linspace(0.0, horizon, t_steps)


@dataclass
class TimeSeries:
    t: np.ndarray
    mean_x: np.ndarray
    mean_p: np.ndarray
    var_x: np.ndarray
    var_p: np.ndarray
    delta_xp: np.ndarray
    model_label: str
    backend: str

    COLUMNS = ("t", "mean_x", "mean_p", "var_x", "var_p", "delta_xp")

    def column(self, name: str) -> np.ndarray:
        if name not in self.COLUMNS:
            raise KeyError(name)
        return getattr(self, name)


def trajectory(
    model: Model,
    state: FockVector,
    t: np.ndarray | None = None,
    x_op: QuadOperator | None = None,
    p_op: QuadOperator | None = None,
    backend: str | None = None,
) -> TimeSeries:
    """Moments of x and p along a time grid, plus the uncertainty product."""
    if t is None:
        t = default_time_grid(model)
    t = np.asarray(t, dtype=float)
    if (x_op is None) != (p_op is None):
        raise ValueError("pass both x_op and p_op or neither")
    if x_op is None:
        dim = state.dim + 2 if isinstance(model, Harmonic) else None
        x_op, p_op = quadrature_pair(model, dim)
    if x_op.dim != p_op.dim:
        raise ValueError(f"operator dims differ: {x_op.dim} vs {p_op.dim}")

    amps = _padded_amps(x_op, state)
    _padded_amps(p_op, state)
    energies = np.zeros(x_op.dim)
    # padding rows hold zero amplitude, so their placeholder energy is inert
    energies[: state.dim] = level_energies(model, state.dim)

    used = backend_name(backend)
    raw = timeseries_moments(
        amps, energies, t, x_op.matrix, p_op.matrix, model.hbar, backend=used
    )
    mean_x, mean_p, var_x, var_p, cross_im = raw
    var_x = np.maximum(var_x, 0.0)
    var_p = np.maximum(var_p, 0.0)
    # <[x,p]> = 2i Im<x psi|p psi>, so delta = var_x var_p / Im^2
    floor = 1e-12 * float(np.max(var_x * var_p)) + 1e-300
    if np.any(cross_im**2 <= floor):
        raise NumericsError(
            "commutator expectation vanishes somewhere on the grid; "
            "the normalized uncertainty product is undefined there"
        )
    delta = var_x * var_p / cross_im**2
    return TimeSeries(
        t=t,
        mean_x=mean_x,
        mean_p=mean_p,
        var_x=var_x,
        var_p=var_p,
        delta_xp=delta,
        model_label=model.label,
        backend=used,
    )


@dataclass
class AlphaScan:
    alpha_abs: np.ndarray
    mean_n: np.ndarray
    var_x: np.ndarray
    var_p: np.ndarray
    delta_xp: np.ndarray
    model_label: str
    kind: str

    COLUMNS = ("alpha_abs", "mean_n", "var_x", "var_p", "delta_xp")

    def column(self, name: str) -> np.ndarray:
        if name not in self.COLUMNS:
            raise KeyError(name)
        return getattr(self, name)


def scan_alpha(
    model: Model,
    kind: str,
    alpha_abs: np.ndarray,
    phase: float = 0.0,
    truncation: str | None = None,
    x_op: QuadOperator | None = None,
    p_op: QuadOperator | None = None,
) -> AlphaScan:
    """Initial-time second moments as the coherence amplitude grows."""
    from .operators import moments, normalized_uncertainty
    from .states import build_state, cmath_from_polar, mean_occupation

    alpha_abs = np.asarray(alpha_abs, dtype=float)
    if np.any(alpha_abs < 0.0):
        raise ValueError("alpha magnitudes must be nonnegative")
    if (x_op is None) != (p_op is None):
        raise ValueError("pass both x_op and p_op or neither")
    mean_n = np.empty(alpha_abs.size)
    var_x = np.empty(alpha_abs.size)
    var_p = np.empty(alpha_abs.size)
    delta = np.empty(alpha_abs.size)
    for i, mag in enumerate(alpha_abs):
        state = build_state(
            model, kind, cmath_from_polar(float(mag), phase), truncation=truncation
        )
        if x_op is None:
            dim = state.dim + 2 if isinstance(model, Harmonic) else None
            ops = quadrature_pair(model, dim)
        else:
            ops = (x_op, p_op)
        mean_n[i] = mean_occupation(state)
        _, var_x[i] = moments(ops[0], state)
        _, var_p[i] = moments(ops[1], state)
        delta[i] = normalized_uncertainty(state, ops[0], ops[1])
    return AlphaScan(
        alpha_abs=alpha_abs,
        mean_n=mean_n,
        var_x=var_x,
        var_p=var_p,
        delta_xp=delta,
        model_label=model.label,
        kind=kind,
    )


def ladder_expectation(model: Model, state: FockVector, t: np.ndarray) -> np.ndarray:
    """<A>(t) from the pair frequencies E_n - E_{n-1}; complex array over t."""
    t = np.asarray(t, dtype=float)
    if state.dim < 2:
        return np.zeros(t.shape, dtype=np.complex128)
    energies = level_energies(model, state.dim)
    downs = np.array([ladder_down_element(model, n) for n in range(1, state.dim)])
    pairs = np.conj(state.amps[:-1]) * state.amps[1:] * downs
    freqs = (energies[1:] - energies[:-1]) / model.hbar
    return np.exp(-1j * np.outer(t, freqs)) @ pairs


def morse_ladder_closed_form(model: Morse, state: FockVector, t: np.ndarray) -> np.ndarray:
    """<A>(t) from the factorized Morse form; see the module docstring."""
    t = np.asarray(t, dtype=float)
    if state.dim < 2:
        return np.zeros(t.shape, dtype=np.complex128)
    downs = np.array([ladder_down_element(model, n) for n in range(1, state.dim)])
    pairs = np.conj(state.amps[:-1]) * state.amps[1:] * downs
    ns = np.arange(1, state.dim)
    rate = 2.0 * model.omega * model.chi
    inner = np.exp(1j * np.outer(t, rate * (ns - 1))) @ pairs
    return np.exp(-1j * model.omega * (1.0 - 2.0 * model.chi) * t) * inner


def heisenberg_residual(model: Morse, state: FockVector, t: np.ndarray) -> float:
    """max_t |<A>(t) by pair frequencies - <A>(t) by the factorized form|."""
    direct = ladder_expectation(model, state, t)
    closed = morse_ladder_closed_form(model, state, t)
    return float(np.max(np.abs(direct - closed)))


def revival_period(model: Morse) -> float:
    """Period after which |<A>| repeats exactly: pi/(omega chi)."""
    return np.pi / (model.omega * model.chi)


def revival_residual(
    model: Morse, state: FockVector, t: np.ndarray | None = None
) -> float:
    """max_t | |<A>(t + T)| - |<A>(t)| | over a grid, T the revival period."""
    if t is None:
        t = np.linspace(0.0, revival_period(model), 257)
    t = np.asarray(t, dtype=float)
    base = np.abs(ladder_expectation(model, state, t))
    shifted = np.abs(ladder_expectation(model, state, t + revival_period(model)))
    return float(np.max(np.abs(shifted - base)))
