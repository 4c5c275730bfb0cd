"""Self-contained oracle suites: every closed form against an independent check.

Each suite returns CheckResult rows; nothing here asserts.  The CLI renders
them as a report and tests pin the thresholds.  Conventions: `direction` is
"<" when the value must stay below the threshold (defects, residuals) and
">=" when it must stay above (the Robertson bound).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, hyp0f1

from .dynamics import (
    default_time_grid,
    heisenberg_residual,
    ladder_expectation,
    level_energies,
    revival_residual,
    trajectory,
)
from .gridsolver import fd_matrix_element, fd_spectrum
from .models import Harmonic, Model, ModifiedPT, Morse, TrigPT
from .mpt_ops import mpt_eigenfunction, mpt_matrix_element, mpt_p_element_fd
from .operators import hermiticity_defect, quadrature_pair
from .states import (
    aocs_residual,
    build_aocs,
    build_docs,
    docs_exponential_oracle,
    glauber_amplitudes,
    invert_alpha,
    occupation_distribution,
    overlap,
)

_DOCS_MAGS = (0.1, 0.5, 1.0, 2.0)


@dataclass
class CheckResult:
    name: str
    value: float
    threshold: float
    passed: bool
    direction: str = "<"

    @classmethod
    def below(cls, name: str, value: float, threshold: float) -> "CheckResult":
        return cls(name, float(value), threshold, bool(value < threshold), "<")

    @classmethod
    def at_least(cls, name: str, value: float, threshold: float) -> "CheckResult":
        return cls(name, float(value), threshold, bool(value >= threshold), ">=")


def _spectral_check(model: Model, n_top: int, tol: float) -> CheckResult:
    fd = fd_spectrum(model, n_top + 1)
    alg = level_energies(model, n_top + 1)
    rel = float(np.max(np.abs(fd - alg) / np.abs(alg)))
    return CheckResult.below(f"spectrum_rel_err_n{n_top}", rel, tol)


def _docs_expm_check(model: Model, truncated: bool = False) -> CheckResult:
    worst = 0.0
    for mag in _DOCS_MAGS:
        alpha = mag * np.exp(0.37j)
        if truncated:
            # unbounded spectrum: exponentiate well past the closed form's
            # adaptive cutoff so oracle truncation error stays negligible
            closed = build_docs(model, alpha)
            oracle = docs_exponential_oracle(model, alpha, dim=closed.dim + 60)
            dev = float(np.max(np.abs(closed.amps - oracle.amps[: closed.dim])))
        else:
            closed = build_docs(model, alpha, truncation="block")
            oracle = docs_exponential_oracle(model, alpha)
            dev = float(np.max(np.abs(closed.amps - oracle.amps)))
        worst = max(worst, dev)
    return CheckResult.below("docs_closed_vs_expm", worst, 1e-8)


def _hermiticity_check(model: Model, dim: int | None = None) -> CheckResult:
    x_op, p_op = quadrature_pair(model, dim)
    worst = max(hermiticity_defect(x_op), hermiticity_defect(p_op))
    return CheckResult.below("quadrature_hermiticity", worst, 1e-12)


def _evolution_checks(model: Model, state) -> list[CheckResult]:
    t = default_time_grid(model)
    energies = level_energies(model, state.dim)
    phases = np.exp(-1j * np.outer(t, energies) / model.hbar)
    psi = phases * state.amps[None, :]
    norms = np.linalg.norm(psi, axis=1)
    occ_drift = float(
        np.max(np.abs(np.abs(psi) ** 2 - np.abs(state.amps[None, :]) ** 2))
    )
    return [
        CheckResult.below("norm_drift_4096_steps", float(np.max(np.abs(norms - 1.0))), 1e-12),
        CheckResult.below("occupation_drift_4096_steps", occ_drift, 1e-12),
    ]


def verify_morse(model: Morse | None = None) -> list[CheckResult]:
    model = model or Morse()
    state = build_docs(model, invert_alpha(model, "docs", 2.0))
    ts = trajectory(model, state)
    t_check = np.linspace(0.0, default_time_grid(model)[-1], 97)
    checks = [
        _spectral_check(model, 10, 1e-3),
        _docs_expm_check(model),
        _hermiticity_check(model),
        *_evolution_checks(model, state),
        CheckResult.at_least("robertson_min", float(np.min(ts.delta_xp)), 1.0 - 1e-8),
        CheckResult.below(
            "heisenberg_two_pipeline_residual",
            heisenberg_residual(model, state, t_check),
            1e-10,
        ),
        CheckResult.below("ladder_revival_residual", revival_residual(model, state), 1e-10),
    ]
    return checks


def verify_mpt(model: ModifiedPT | None = None) -> list[CheckResult]:
    model = model or ModifiedPT()
    cross = max(
        abs(mpt_matrix_element(model, "x", m, n) - fd_matrix_element(model, "x", m, n))
        for m, n in ((0, 1), (1, 2), (2, 3), (0, 3))
    )
    p_fd = max(
        abs(mpt_matrix_element(model, "p", m, n) - mpt_p_element_fd(model, m, n))
        for m, n in ((0, 1), (0, 3))
    )
    # parity-forbidden elements, recomputed directly rather than read from
    # the (exactly zeroed) tables
    xs = np.linspace(-24.0 / model.a, 24.0 / model.a, 20001)
    parity = 0.0
    for m, n in ((0, 0), (0, 2), (1, 3)):
        val = np.trapezoid(
            mpt_eigenfunction(model, m, xs) * xs * mpt_eigenfunction(model, n, xs), xs
        )
        parity = max(parity, abs(float(val)))
    state = build_docs(model, invert_alpha(model, "docs", 1.0))
    ts = trajectory(model, state)
    checks = [
        _spectral_check(model, 7, 1e-4),
        _docs_expm_check(model),
        _hermiticity_check(model),
        CheckResult.below("x_elements_vs_grid_oracle", cross, 1e-5),
        CheckResult.below("p_elements_vs_gradient_oracle", p_fd, 1e-8),
        CheckResult.below("parity_forbidden_elements", parity, 1e-8),
        *_evolution_checks(model, state),
        CheckResult.at_least("robertson_min", float(np.min(ts.delta_xp)), 1.0 - 1e-8),
    ]
    return checks


def verify_tpt(model: TrigPT | None = None) -> list[CheckResult]:
    model = model or TrigPT()
    alpha = 1.3
    state = build_aocs(model, alpha)
    # the ground amplitude encodes the series norm: |c_0|^-2 = 0F1(; 2 lam; |a|^2/chi)
    norm_sq = 1.0 / abs(state.amps[0]) ** 2
    closed = float(hyp0f1(2.0 * model.lam, alpha**2 / model.chi))
    residual = aocs_residual(model, state, alpha)
    checks = [
        _spectral_check(model, 7, 1e-4),
        _docs_expm_check(model, truncated=True),
        CheckResult.below(
            "aocs_norm_vs_hypergeometric", abs(norm_sq / closed - 1.0), 1e-10
        ),
        CheckResult.below(
            "aocs_eigen_residual", residual, 1e-7 * max(1.0, alpha)
        ),
    ]
    return checks


def verify_harmonic(model: Harmonic | None = None) -> list[CheckResult]:
    model = model or Harmonic()
    alpha = 0.8 * np.exp(0.4j)
    aocs = build_aocs(model, alpha)
    docs = build_docs(model, alpha)
    d = min(aocs.dim, docs.dim)
    glauber_dev = float(np.max(np.abs(aocs.amps[:d] - docs.amps[:d])))
    closed = glauber_amplitudes(alpha, dim=aocs.dim)
    closed_dev = float(np.max(np.abs(aocs.amps - closed)))

    n = np.arange(aocs.dim)
    r2 = abs(alpha) ** 2
    poisson = np.exp(-r2 + n * np.log(r2) - gammaln(n + 1))
    poisson_dev = float(np.max(np.abs(occupation_distribution(aocs) - poisson)))

    beta = 1.3 * np.exp(-0.2j)
    ov = abs(overlap(build_docs(model, beta), docs))
    ov_closed = math.exp(-abs(beta - alpha) ** 2 / 2.0)

    ts = trajectory(model, docs)
    delta_dev = float(np.max(np.abs(ts.delta_xp - 1.0)))
    scale = math.sqrt(2.0 * model.hbar / (model.mu * model.omega))
    rotating = alpha * np.exp(-1j * model.omega * ts.t)
    x_closed = scale * rotating.real
    p_closed = math.sqrt(2.0 * model.hbar * model.mu * model.omega) * rotating.imag
    rotation_dev = max(
        float(np.max(np.abs(ts.mean_x - x_closed))),
        float(np.max(np.abs(ts.mean_p - p_closed))),
    )
    ladder = ladder_expectation(model, docs, ts.t)
    ladder_dev = float(np.max(np.abs(ladder - rotating)))

    checks = [
        _spectral_check(model, 7, 1e-6),
        CheckResult.below("aocs_equals_docs", glauber_dev, 1e-10),
        CheckResult.below("amplitudes_vs_glauber_closed_form", closed_dev, 1e-10),
        CheckResult.below("occupation_vs_poisson", poisson_dev, 1e-10),
        CheckResult.below("overlap_vs_closed_form", abs(ov - ov_closed), 1e-10),
        CheckResult.below("uncertainty_product_minus_one", delta_dev, 1e-10),
        CheckResult.below("phase_space_rotation_residual", rotation_dev, 1e-10),
        CheckResult.below("ladder_expectation_rotation", ladder_dev, 1e-10),
        CheckResult.below(
            "aocs_eigen_residual", aocs_residual(model, aocs, alpha), 1e-7
        ),
    ]
    return checks


_SUITES = {
    "morse": verify_morse,
    "mpt": verify_mpt,
    "tpt": verify_tpt,
    "harmonic": verify_harmonic,
}


def verify_suite(labels: list[str] | None = None) -> dict[str, list[CheckResult]]:
    """Run the named suites (all four by default)."""
    if labels is None:
        labels = list(_SUITES)
    out: dict[str, list[CheckResult]] = {}
    for label in labels:
        if label not in _SUITES:
            raise ValueError(f"unknown suite {label!r}; pick from {sorted(_SUITES)}")
        out[label] = _SUITES[label]()
    return out
