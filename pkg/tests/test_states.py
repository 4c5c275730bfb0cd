"""Coherent-state construction against brute-force oracles.

Expected values here were frozen from the independent oracles in this suite
(direct series, matrix exponential, binomial closed forms), not copied from
published tables.
"""

import math

import numpy as np
import pytest
from scipy.special import gammaln, hyp0f1

from fdosc.models import DomainError, Harmonic, ModifiedPT, Morse, TrigPT
from fdosc.states import (
    ConvergenceError,
    FockVector,
    aocs_residual,
    build_aocs,
    build_docs,
    build_state,
    docs_exponential_oracle,
    glauber_amplitudes,
    invert_alpha,
    mean_occupation,
    occupation_distribution,
    overlap,
)

MORSE = Morse()
MPT = ModifiedPT()
TPT = TrigPT()
HO = Harmonic()


def brute_aocs(model, alpha, dim):
    """Direct product-form amplitudes c_n = alpha^n / sqrt(n! f^2(1)..f^2(n))."""
    amps = np.zeros(dim, dtype=np.complex128)
    amps[0] = 1.0
    for n in range(1, dim):
        amps[n] = amps[n - 1] * alpha / math.sqrt(n * model.f_squared(n))
    return amps / np.linalg.norm(amps)


# ------------------------------------------------------------------- AOCS


@pytest.mark.parametrize(
    "model,dim", [(MORSE, 22), (MPT, 10), (HO, 40), (TPT, 40)]
)
def test_aocs_matches_direct_product_form(model, dim):
    alpha = 1.1 * np.exp(0.25j)
    state = build_aocs(model, alpha)
    ref = brute_aocs(model, alpha, max(dim, state.dim))
    d = min(state.dim, len(ref))
    assert np.max(np.abs(state.amps[:d] - ref[:d])) < 1e-13
    # anything past the compared prefix is negligible on both sides
    assert np.linalg.norm(ref[d:]) < 1e-8


def test_aocs_alpha_zero_is_vacuum():
    state = build_aocs(TPT, 0.0)
    assert state.dim == 1
    assert state.amps[0] == 1.0 + 0.0j
    bound = build_aocs(MORSE, 0.0)
    assert bound.dim == 22
    assert abs(bound.amps[0]) == 1.0
    assert np.all(bound.amps[1:] == 0.0)


def test_aocs_unit_norm():
    for model, alpha in ((MORSE, 1.3), (MPT, 0.9), (TPT, 2.7), (HO, 3.3)):
        state = build_aocs(model, alpha)
        assert state.norm == pytest.approx(1.0, abs=1e-13)
        assert state.norm_kept == 1.0


def test_aocs_eigen_residual_unbounded():
    # adaptive truncation makes the ladder relation hold to roundoff-level
    for model in (TPT, HO):
        alpha = 1.3
        res = aocs_residual(model, build_aocs(model, alpha), alpha)
        assert res < 1e-7 * max(1.0, alpha)


def test_aocs_eigen_residual_bound_truncated_decreases():
    # finite models clip the ladder at the top bound level, so the residual
    # is reported rather than asserted; it must shrink as alpha -> 0
    for model in (MORSE, MPT):
        mags = [1.3, 0.9, 0.6, 0.3, 0.1]
        residuals = [
            aocs_residual(model, build_aocs(model, m), m) for m in mags
        ]
        assert all(b < a for a, b in zip(residuals, residuals[1:])), residuals


def test_tpt_aocs_norm_matches_hypergeometric_identity():
    # raw series norm^2 = 0F1(; 2 lam; |alpha|^2/chi); the ground amplitude
    # of the unit-normalized state encodes it as 1/|c_0|^2
    for alpha in (0.4, 1.3, 2.9):
        state = build_aocs(TPT, alpha)
        closed = float(hyp0f1(2.0 * TPT.lam, alpha**2 / TPT.chi))
        assert 1.0 / abs(state.amps[0]) ** 2 == pytest.approx(closed, rel=1e-12)


def test_aocs_rejects_block_truncation():
    with pytest.raises(ValueError):
        build_aocs(MORSE, 0.5, truncation="block")
    with pytest.raises(ValueError):
        build_aocs(TPT, 0.5, truncation="bound")


def test_adaptive_cap_raises_convergence_error():
    with pytest.raises(ConvergenceError):
        build_aocs(HO, 500.0)


# ------------------------------------------------------------------- DOCS


@pytest.mark.parametrize("model", [MORSE, MPT])
@pytest.mark.parametrize("mag", [0.1, 0.5, 1.0, 2.0])
def test_docs_block_matches_matrix_exponential(model, mag):
    alpha = mag * np.exp(0.37j)
    closed = build_docs(model, alpha, truncation="block")
    oracle = docs_exponential_oracle(model, alpha)
    assert closed.dim == model.invariant_dim
    assert np.max(np.abs(closed.amps - oracle.amps)) < 1e-8


def test_docs_truncated_unbounded_matches_matrix_exponential():
    alpha = 1.7 * np.exp(-0.6j)
    closed = build_docs(TPT, alpha)
    oracle = docs_exponential_oracle(TPT, alpha, dim=closed.dim + 60)
    assert np.max(np.abs(closed.amps - oracle.amps[: closed.dim])) < 1e-10


def test_docs_bound_truncation_norm_accounting():
    # bound truncation drops real weight at large alpha; norm_kept records it
    state = build_docs(MORSE, 3.0, renormalize=False)
    assert state.dim == 22
    assert state.norm_kept == pytest.approx(state.norm, rel=1e-12)
    assert state.norm_kept < 1.0
    renorm = build_docs(MORSE, 3.0)
    assert renorm.norm == pytest.approx(1.0, abs=1e-13)
    assert renorm.norm_kept == pytest.approx(state.norm_kept, rel=1e-12)
    # the full invariant block keeps everything
    block = build_docs(MORSE, 3.0, truncation="block")
    assert block.norm_kept == pytest.approx(1.0, abs=1e-12)


def test_docs_pole_location():
    pole = math.pi / (2.0 * math.sqrt(MORSE.chi))
    assert pole == pytest.approx(10.5372220966, rel=1e-10)
    with pytest.raises(DomainError):
        build_docs(MORSE, pole * 1.0000001)
    # immediately below the pole the construction must still normalize
    state = build_docs(MORSE, pole * (1.0 - 1e-9), truncation="block")
    assert state.norm == pytest.approx(1.0, abs=1e-12)
    assert mean_occupation(state) > 43.0


def test_docs_mpt_pole_location():
    pole = math.pi / (2.0 * math.sqrt(MPT.chi))
    assert pole == pytest.approx(7.1982930689, rel=1e-10)
    with pytest.raises(DomainError):
        build_docs(MPT, pole + 0.01)


def test_docs_binomial_tail_and_mode():
    # displacement map sends the vacuum to an su(2) binomial; the frozen
    # amplitudes below were solved for mean occupation 4 and 2
    alpha4 = invert_alpha(MORSE, "docs", 4.0)
    assert alpha4 == pytest.approx(2.054571051, rel=1e-8)
    probs = occupation_distribution(build_docs(MORSE, alpha4))
    assert np.all(probs[18:] < 1e-4)

    alpha2 = invert_alpha(MORSE, "docs", 2.0)
    assert alpha2 == pytest.approx(1.441256495, rel=1e-8)
    probs2 = occupation_distribution(build_docs(MORSE, alpha2))
    assert int(np.argmax(probs2)) in (1, 2)


def test_docs_mpt_small_amplitude_tail():
    alpha = invert_alpha(MPT, "docs", 0.1)
    probs = occupation_distribution(build_docs(MPT, alpha))
    assert np.all(probs[5:] < 1e-6)


def test_docs_binomial_closed_form_occupations():
    # independent binomial check: P_n = C(m, n) q^n / (1+q)^m with
    # q = tan^2(|alpha| sqrt(chi)) and m = invariant_dim - 1
    alpha = 1.441256495
    q = math.tan(alpha * math.sqrt(MORSE.chi)) ** 2
    m = MORSE.invariant_dim - 1
    n = np.arange(m + 1)
    log_binom = gammaln(m + 1) - gammaln(n + 1) - gammaln(m - n + 1)
    ref = np.exp(log_binom + n * math.log(q) - m * math.log1p(q))
    probs = occupation_distribution(build_docs(MORSE, alpha, truncation="block"))
    assert np.max(np.abs(probs - ref)) < 1e-12


# --------------------------------------------------------- inverse solver


def test_invert_alpha_hits_target_mean():
    for model, kind, target in (
        (MORSE, "docs", 0.2),
        (MORSE, "docs", 2.0),
        (MORSE, "aocs", 2.0),
        (MPT, "docs", 1.0),
        (TPT, "docs", 2.0),
        (TPT, "aocs", 1.5),
        (HO, "docs", 2.0),
    ):
        mag = invert_alpha(model, kind, target)
        state = build_state(model, kind, mag)
        assert mean_occupation(state) == pytest.approx(target, abs=1e-8)


def test_invert_alpha_frozen_landmarks():
    assert invert_alpha(MORSE, "docs", 0.2) == pytest.approx(0.452610348, rel=1e-8)
    assert invert_alpha(MORSE, "aocs", 2.0) == pytest.approx(
        1.3654210446, rel=1e-8
    )
    # Glauber: mean n = |alpha|^2 exactly
    assert invert_alpha(HO, "docs", 2.0) == pytest.approx(math.sqrt(2.0), rel=1e-9)


def test_invert_alpha_unreachable_target():
    with pytest.raises(DomainError):
        invert_alpha(MORSE, "docs", 40.0)
    with pytest.raises(DomainError):
        invert_alpha(MPT, "docs", 25.0)
    with pytest.raises(DomainError):
        invert_alpha(MORSE, "docs", -0.5)
    assert invert_alpha(MPT, "aocs", 0.0) == 0.0


# ------------------------------------------------------------- degeneration


def test_harmonic_all_constructions_coincide():
    alpha = 0.8 * np.exp(0.4j)
    aocs = build_aocs(HO, alpha)
    docs = build_docs(HO, alpha)
    closed = glauber_amplitudes(alpha, dim=aocs.dim)
    d = min(aocs.dim, docs.dim)
    assert np.max(np.abs(aocs.amps[:d] - docs.amps[:d])) < 1e-10
    assert np.max(np.abs(aocs.amps - closed)) < 1e-10


def test_harmonic_overlap_closed_form():
    alpha, beta = 0.5, 1.0
    ov = overlap(build_docs(HO, beta), build_docs(HO, alpha))
    assert abs(ov) == pytest.approx(math.exp(-abs(beta - alpha) ** 2 / 2.0), abs=1e-10)


def test_harmonic_poisson_occupation():
    alpha = 1.2
    state = build_aocs(HO, alpha)
    n = np.arange(state.dim)
    ref = np.exp(-(alpha**2) + 2 * n * math.log(alpha) - gammaln(n + 1))
    assert np.max(np.abs(occupation_distribution(state) - ref)) < 1e-10


# ----------------------------------------------------------------- misc


def test_build_state_dispatch():
    assert build_state(HO, "aocs", 0.3).dim == build_aocs(HO, 0.3).dim
    with pytest.raises(ValueError):
        build_state(HO, "glauber", 0.3)


def test_fock_vector_validation():
    with pytest.raises(ValueError):
        FockVector(np.zeros((2, 2), dtype=np.complex128))
    vec = FockVector(np.array([0.6, 0.8], dtype=np.complex128))
    assert vec.dim == 2
    assert vec.norm == pytest.approx(1.0, rel=1e-15)
