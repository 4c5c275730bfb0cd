"""Time evolution: conservation laws, closed-form cross-checks, scans.

The harmonic model doubles as an oracle here since every quantity has a
textbook closed form; the Morse factorized ladder form and the parity flip
of the deformed position are the model-specific claims under test.
"""

import numpy as np
import pytest

from fdosc.dynamics import (
    AlphaScan,
    default_time_grid,
    evolve,
    heisenberg_residual,
    ladder_expectation,
    revival_period,
    revival_residual,
    scan_alpha,
    trajectory,
)
from fdosc.models import Harmonic, ModifiedPT, Morse, TrigPT
from fdosc.operators import NumericsError, normalized_uncertainty, quadrature_pair
from fdosc.states import FockVector, build_docs, glauber_amplitudes, invert_alpha

MORSE = Morse()
MPT = ModifiedPT()
HO = Harmonic()


def test_evolution_conserves_norm_and_occupation():
    alpha = invert_alpha(MORSE, "docs", 2.0)
    state = build_docs(MORSE, alpha)
    probs = np.abs(state.amps) ** 2
    for t in (0.3, 17.0, 4000.0):
        moved = evolve(MORSE, state, t)
        assert abs(moved.norm - 1.0) < 1e-12
        assert np.max(np.abs(np.abs(moved.amps) ** 2 - probs)) < 1e-12


def test_evolve_zero_time_is_identity():
    state = build_docs(MPT, 0.9)
    moved = evolve(MPT, state, 0.0)
    assert np.array_equal(moved.amps, state.amps)


def test_harmonic_trajectory_matches_rotating_glauber():
    alpha = 1.2 * np.exp(0.5j)
    state = FockVector(glauber_amplitudes(alpha))
    ts = trajectory(HO, state)
    rotating = alpha * np.exp(-1j * HO.omega * ts.t)
    # x = sqrt(2 hbar / mu omega) Re alpha(t), p = sqrt(2 hbar mu omega) Im
    assert np.max(np.abs(ts.mean_x - np.sqrt(2.0) * rotating.real)) < 1e-10
    assert np.max(np.abs(ts.mean_p - np.sqrt(2.0) * rotating.imag)) < 1e-10
    assert np.max(np.abs(ts.var_x - 0.5)) < 1e-10
    assert np.max(np.abs(ts.var_p - 0.5)) < 1e-10
    assert np.max(np.abs(ts.delta_xp - 1.0)) < 1e-10


def test_harmonic_ladder_expectation_rotates():
    alpha = 0.8 - 0.3j
    state = FockVector(glauber_amplitudes(alpha))
    t = np.linspace(0.0, 9.0, 181)
    got = ladder_expectation(HO, state, t)
    assert np.max(np.abs(got - alpha * np.exp(-1j * HO.omega * t))) < 1e-10


def test_ladder_expectation_single_level_is_zero():
    state = FockVector(np.array([1.0 + 0.0j]))
    t = np.linspace(0.0, 3.0, 11)
    assert np.array_equal(ladder_expectation(MORSE, state, t), np.zeros(11, complex))


def test_morse_pair_frequencies_match_factorized_form():
    state = build_docs(MORSE, invert_alpha(MORSE, "docs", 2.0))
    t = np.linspace(0.0, revival_period(MORSE), 257)
    assert heisenberg_residual(MORSE, state, t) < 1e-10


def test_morse_revival_is_exact():
    assert revival_period(MORSE) == pytest.approx(45.0 * np.pi, rel=1e-15)
    state = build_docs(MORSE, invert_alpha(MORSE, "docs", 2.0))
    assert revival_residual(MORSE, state) < 1e-10


def test_mpt_alpha_flip_negates_position():
    plus = build_docs(MPT, 1.1)
    t = np.linspace(0.0, 5.0, 64)
    ref = trajectory(MPT, plus, t)

    # alpha -> -alpha through the builder; the only inexactness is the
    # floating representation of the pi phase
    minus = build_docs(MPT, -1.1)
    neg = trajectory(MPT, minus, t)
    assert np.max(np.abs(ref.mean_x + neg.mean_x)) < 1e-14

    # the same flip applied directly to the amplitudes negates every odd
    # level exactly, and the odd-band position matrix negates with it bitwise
    flip = FockVector(plus.amps * (-1.0) ** np.arange(plus.dim), norm_kept=plus.norm_kept)
    odd = trajectory(MPT, flip, t)
    assert np.array_equal(ref.mean_x, -odd.mean_x)
    assert np.array_equal(ref.var_x, odd.var_x)
    assert np.array_equal(ref.delta_xp, odd.delta_xp)


def test_trajectory_rejects_mismatched_operator_args():
    state = build_docs(MPT, 0.5)
    x_op, p_op = quadrature_pair(MPT)
    with pytest.raises(ValueError):
        trajectory(MPT, state, np.linspace(0.0, 1.0, 4), x_op=x_op)
    small_x, _ = quadrature_pair(MPT, 6)
    with pytest.raises(ValueError):
        trajectory(MPT, state, np.linspace(0.0, 1.0, 4), x_op=small_x, p_op=p_op)


def test_trajectory_leak_guard_catches_top_level_state():
    amps = np.zeros(23, dtype=complex)
    amps[22] = 1.0
    with pytest.raises(NumericsError):
        trajectory(MORSE, FockVector(amps), np.linspace(0.0, 1.0, 4))


def test_vanishing_commutator_is_rejected():
    # passing the position matrix on both slots makes <[X, P]> exactly zero,
    # which must surface as a numeric failure and not as a division blowup
    state = FockVector(glauber_amplitudes(0.7 + 0.2j))
    x_op, _ = quadrature_pair(HO, state.dim + 2)
    with pytest.raises(NumericsError):
        trajectory(HO, state, np.linspace(0.0, 1.0, 8), x_op=x_op, p_op=x_op)
    with pytest.raises(NumericsError):
        normalized_uncertainty(state, x_op, x_op)


def test_default_time_grid_horizons():
    assert default_time_grid(MORSE)[-1] == pytest.approx(90.0 * np.pi, rel=1e-15)
    assert default_time_grid(MPT)[-1] == pytest.approx(16.0 * np.pi, rel=1e-15)
    assert default_time_grid(TrigPT())[-1] == pytest.approx(8.0 * np.pi, rel=1e-15)
    assert default_time_grid(HO)[-1] == pytest.approx(8.0 * np.pi, rel=1e-15)
    grid = default_time_grid(MORSE, t_steps=17)
    assert grid.size == 17 and grid[0] == 0.0
    with pytest.raises(ValueError):
        default_time_grid(MORSE, t_steps=1)
    with pytest.raises(TypeError):
        default_time_grid(object())


def test_series_column_access():
    state = build_docs(MPT, 0.4)
    ts = trajectory(MPT, state, np.linspace(0.0, 1.0, 8))
    assert np.array_equal(ts.column("var_x"), ts.var_x)
    with pytest.raises(KeyError):
        ts.column("nope")
    scan = scan_alpha(HO, "docs", np.array([0.0, 1.0]))
    assert np.array_equal(scan.column("mean_n"), scan.mean_n)
    with pytest.raises(KeyError):
        scan.column("t")


def test_scan_alpha_harmonic_is_flat():
    scan = scan_alpha(HO, "docs", np.array([0.0, 0.5, 1.0, 2.0]))
    assert isinstance(scan, AlphaScan)
    assert np.max(np.abs(scan.var_x - 0.5)) < 1e-9
    assert np.max(np.abs(scan.var_p - 0.5)) < 1e-9
    assert np.max(np.abs(scan.delta_xp - 1.0)) < 1e-9
    assert np.max(np.abs(scan.mean_n - scan.alpha_abs**2)) < 1e-9


def test_scan_alpha_morse_row_zero_is_vacuum():
    scan = scan_alpha(MORSE, "docs", np.linspace(0.0, 2.0, 9))
    assert scan.var_x[0] == pytest.approx(0.5056847545219639, rel=1e-10)
    assert scan.var_p[0] == pytest.approx(0.4763514211886307, rel=1e-10)
    # Robertson bound holds pointwise across the scan
    assert np.all(scan.delta_xp >= 1.0 - 1e-12)


def test_scan_alpha_rejects_negative_magnitudes():
    with pytest.raises(ValueError):
        scan_alpha(HO, "docs", np.array([0.5, -0.1]))
    x_op, _ = quadrature_pair(MPT)
    with pytest.raises(ValueError):
        scan_alpha(MPT, "docs", np.array([0.5]), x_op=x_op)
