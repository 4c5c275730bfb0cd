"""Morse quadrature matrices: frozen landmarks, symmetry, oscillator limit.

Landmark element values were frozen from this package's own grid oracle
(see test_gridsolver) and from the closed coefficient forms evaluated in
exact rational/log arithmetic.
"""

import math

import numpy as np
import pytest
from scipy.special import digamma

from fdosc.models import DomainError, Morse
from fdosc.morse_ops import (
    coeff_f00,
    coeff_f10,
    coeff_f20,
    coeff_g10,
    coeff_g20,
    f0_constant,
    morse_p_matrix,
    morse_x_matrix,
)
from fdosc.operators import hermiticity_defect, moments
from fdosc.states import build_docs, invert_alpha

MORSE = Morse()
K = MORSE.child_k  # 45


def test_frozen_landmark_elements():
    x = morse_x_matrix(MORSE).matrix
    p = morse_p_matrix(MORSE).matrix
    assert x[0, 0].real == pytest.approx(0.1607047405898323, rel=1e-13)
    assert x[1, 0].real == pytest.approx(1.0 / math.sqrt(2.0), rel=1e-13)
    assert x[2, 0].real == pytest.approx(-0.07539731110566096, rel=1e-13)
    assert p[1, 0].imag == pytest.approx(0.6756798131338122, rel=1e-13)
    assert p[2, 0].imag == pytest.approx(-0.14074164739723383, rel=1e-13)
    # momentum has no diagonal and everything is confined to two bands
    assert np.max(np.abs(np.diag(p))) == 0.0
    for mat in (x, p):
        for off in range(3, mat.shape[0]):
            assert np.max(np.abs(np.diag(mat, k=off))) == 0.0


def test_matrices_are_hermitian():
    assert hermiticity_defect(morse_x_matrix(MORSE)) == 0.0
    assert hermiticity_defect(morse_p_matrix(MORSE)) == 0.0


def test_default_dim_and_bounds():
    x = morse_x_matrix(MORSE)
    assert x.dim == MORSE.bound_dim + 2
    assert x.bandwidth == 2
    full = morse_x_matrix(MORSE, dim=K)
    assert full.dim == K
    with pytest.raises(ValueError):
        morse_x_matrix(MORSE, dim=K + 1)
    with pytest.raises(ValueError):
        morse_x_matrix(MORSE, dim=0)


def test_padded_rows_carry_couplings_but_no_diagonal():
    # rows at and above the bound block keep their ladder couplings (needed
    # for exact second moments) while the undefined diagonal is zeroed
    x = morse_x_matrix(MORSE, dim=MORSE.bound_dim + 2).matrix
    nb = MORSE.bound_dim
    assert x[nb, nb] == 0.0
    assert x[nb + 1, nb + 1] == 0.0
    assert abs(x[nb, nb - 1]) > 0.0
    assert abs(x[nb + 1, nb - 1]) > 0.0


def test_f0_constant_paths_agree_at_crossover():
    # direct harmonic-number summation vs the digamma closed form
    for k in (9_999, 10_000, 10_001):
        direct = math.log(k) - (digamma(k - 1) + np.euler_gamma) + np.euler_gamma
        assert f0_constant(k) == pytest.approx(
            math.log(k) - float(digamma(k - 1)), rel=1e-12
        )
        assert f0_constant(k) == pytest.approx(direct, rel=1e-12)


def test_f0_constant_rejects_tiny_k():
    with pytest.raises(ValueError):
        f0_constant(2)


def test_coefficients_reach_oscillator_limit():
    k6 = 2 * 500_000 + 1  # ~1e6
    for n in range(6):
        assert coeff_f10(k6, n) == pytest.approx(1.0, abs=1e-4)
        assert coeff_g10(k6, n) == pytest.approx(1.0, abs=1e-4)
    k10 = 2 * 5_000_000_000 + 1  # ~1e10
    for n in range(6):
        # f00 falls off like (3n - 1/2)/sqrt(k)
        assert abs(coeff_f00(k10, n)) < 2e-4
        assert abs(coeff_f20(k10, n)) < 1e-4
        assert abs(coeff_g20(k10, n)) < 1e-4


def test_second_order_coefficients_decay_like_inverse_root_k():
    # sqrt(k) * coeff approaches a constant: f20 -> -1/2, g20 -> -1
    for k in (10_001, 100_001, 1_000_001):
        assert math.sqrt(k) * coeff_f20(k, 1) == pytest.approx(-0.5, abs=60 / k)
        assert math.sqrt(k) * coeff_g20(k, 1) == pytest.approx(-1.0, abs=60 / k)


def test_coefficient_domain_errors():
    with pytest.raises(DomainError):
        coeff_f00(K, MORSE.bound_dim)  # log argument hits the sign change
    with pytest.raises(DomainError):
        coeff_f10(K, K)
    with pytest.raises(DomainError):
        coeff_g10(K, -1)


def test_vacuum_moments_frozen():
    x_op = morse_x_matrix(MORSE)
    p_op = morse_p_matrix(MORSE)
    vac = build_docs(MORSE, 0.0)
    mean_x, var_x = moments(x_op, vac)
    mean_p, var_p = moments(p_op, vac)
    assert mean_x == pytest.approx(0.1607047405898323, rel=1e-12)
    assert mean_p == pytest.approx(0.0, abs=1e-14)
    assert var_x == pytest.approx(0.5056847545219639, rel=1e-12)
    assert var_p == pytest.approx(0.4763514211886307, rel=1e-12)


def test_moments_insensitive_to_extra_padding():
    # widening the matrix beyond the default two padding rows must not move
    # the moments of a bound-supported state
    state = build_docs(MORSE, invert_alpha(MORSE, "docs", 2.0))
    for op_builder in (morse_x_matrix, morse_p_matrix):
        narrow = moments(op_builder(MORSE), state)
        wide = moments(op_builder(MORSE, dim=K), state)
        assert narrow[0] == pytest.approx(wide[0], rel=1e-12, abs=1e-12)
        assert narrow[1] == pytest.approx(wide[1], rel=1e-12)


def test_physical_prefactors_scale():
    # x elements carry sqrt(hbar/(2 mu omega)), p elements sqrt(hbar mu omega/2)
    heavy = Morse(mu=4.0)
    x_ratio = morse_x_matrix(heavy).matrix[1, 0] / morse_x_matrix(MORSE).matrix[1, 0]
    p_ratio = morse_p_matrix(heavy).matrix[1, 0] / morse_p_matrix(MORSE).matrix[1, 0]
    assert x_ratio.real == pytest.approx(0.5, rel=1e-13)
    assert p_ratio.imag == pytest.approx(0.0, abs=1e-13)
    assert p_ratio.real == pytest.approx(2.0, rel=1e-13)
