"""Backend selection and agreement for the trajectory moment kernels."""

import numpy as np
import pytest

import fdosc._kernels as kernels
from fdosc._kernels import (
    HAS_NUMBA,
    _env_wants_numba,
    backend_name,
    timeseries_moments,
    timeseries_moments_numpy,
)
from fdosc.models import Morse
from fdosc.operators import _padded_amps, quadrature_pair
from fdosc.dynamics import level_energies
from fdosc.states import build_docs, invert_alpha


def _problem():
    model = Morse()
    state = build_docs(model, invert_alpha(model, "docs", 2.0))
    x_op, p_op = quadrature_pair(model)
    amps = _padded_amps(x_op, state)
    energies = np.zeros(x_op.dim)
    energies[: state.dim] = level_energies(model, state.dim)
    ts = np.linspace(0.0, 40.0, 257)
    return amps, energies, ts, x_op.matrix, p_op.matrix, model.hbar


def test_numpy_dispatch_equals_direct_call():
    args = _problem()
    via_dispatch = timeseries_moments(*args, backend="numpy")
    direct = timeseries_moments_numpy(*args)
    assert via_dispatch.shape == (5, 257)
    assert np.array_equal(via_dispatch, direct)


@pytest.mark.skipif(not HAS_NUMBA, reason="numba unavailable or disabled")
def test_backends_agree():
    args = _problem()
    a = timeseries_moments(*args, backend="numpy")
    b = timeseries_moments(*args, backend="numba")
    scale = np.max(np.abs(a), axis=1, keepdims=True) + 1e-300
    assert np.max(np.abs(a - b) / scale) < 1e-12


def test_env_flag_parsing(monkeypatch):
    for value in ("0", "false", "OFF ", " No"):
        monkeypatch.setenv("FDOSC_NUMBA", value)
        assert not _env_wants_numba()
    for value in ("1", "on", "yes", "anything"):
        monkeypatch.setenv("FDOSC_NUMBA", value)
        assert _env_wants_numba()
    monkeypatch.delenv("FDOSC_NUMBA", raising=False)
    assert _env_wants_numba()


def test_backend_name_resolution(monkeypatch):
    assert backend_name("numpy") == "numpy"
    with pytest.raises(ValueError):
        backend_name("fortran")
    monkeypatch.setattr(kernels, "HAS_NUMBA", False)
    assert kernels.backend_name(None) == "numpy"
    with pytest.raises(RuntimeError):
        kernels.backend_name("numba")
    monkeypatch.setattr(kernels, "HAS_NUMBA", True)
    assert kernels.backend_name(None) == "numba"
