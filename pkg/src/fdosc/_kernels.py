"""Hot loops for phase-space trajectories, with a numba and a numpy backend.

The one expensive operation is sweeping a time grid: for every t the state
picks up diagonal phases exp(-i E_n t / hbar) and five moments are read out
(<x>, <p>, var x, var p, Im<[x,p]>/2).  Both backends compute identical
arithmetic; the numba path runs the per-time loop compiled, the numpy path
batches all times into matrix products.

Backend choice: the FDOSC_NUMBA environment variable (default on; set to
0/false/off/no to force pure numpy), overridable per call.  Import of numba
happens lazily so the variable is honored without reinstalling.
"""

from __future__ import annotations

import os

import numpy as np

_FALSY = {"0", "false", "off", "no"}


def _env_wants_numba() -> bool:
    return os.environ.get("FDOSC_NUMBA", "1").strip().lower() not in _FALSY


HAS_NUMBA = False
_jit_moments = None

if _env_wants_numba():
    try:
        import numba  # noqa: F401  (availability probe; compiled lazily)

        HAS_NUMBA = True
    except ImportError:  # pragma: no cover - numba is a hard dependency
        HAS_NUMBA = False


def backend_name(backend: str | None = None) -> str:
    """Resolve the backend that timeseries_moments would use."""
    if backend is None:
        return "numba" if HAS_NUMBA else "numpy"
    if backend not in ("numba", "numpy"):
        raise ValueError(f"backend must be 'numba' or 'numpy', got {backend!r}")
    if backend == "numba" and not HAS_NUMBA:
        raise RuntimeError("numba backend requested but numba is unavailable or disabled")
    return backend


def timeseries_moments_numpy(
    amps: np.ndarray,
    energies: np.ndarray,
    ts: np.ndarray,
    xmat: np.ndarray,
    pmat: np.ndarray,
    hbar: float,
) -> np.ndarray:
    """Batched numpy evaluation; returns a (5, len(ts)) array.

    Rows: mean x, mean p, var x, var p, Im <x psi | p psi>.
    """
    phases = np.exp(-1j * np.outer(ts, energies) / hbar)
    psi = phases * amps[None, :]
    xs = psi @ xmat.T  # (T, D); row t is X @ psi_t
    ps = psi @ pmat.T
    mean_x = np.einsum("ti,ti->t", psi.conj(), xs).real
    mean_p = np.einsum("ti,ti->t", psi.conj(), ps).real
    second_x = np.einsum("ti,ti->t", xs.conj(), xs).real
    second_p = np.einsum("ti,ti->t", ps.conj(), ps).real
    cross = np.einsum("ti,ti->t", xs.conj(), ps).imag
    out = np.empty((5, ts.size))
    out[0] = mean_x
    out[1] = mean_p
    out[2] = second_x - mean_x**2
    out[3] = second_p - mean_p**2
    out[4] = cross
    return out


def _build_jit():
    from numba import njit

    @njit(cache=True)
    def jit_moments(amps, energies, ts, xmat, pmat, hbar):  # pragma: no cover
        dim = amps.shape[0]
        nt = ts.shape[0]
        out = np.empty((5, nt))
        psi = np.empty(dim, dtype=np.complex128)
        xs = np.empty(dim, dtype=np.complex128)
        ps = np.empty(dim, dtype=np.complex128)
        for it in range(nt):
            t = ts[it]
            for n in range(dim):
                ang = -energies[n] * t / hbar
                psi[n] = amps[n] * complex(np.cos(ang), np.sin(ang))
            for m in range(dim):
                accx = 0.0 + 0.0j
                accp = 0.0 + 0.0j
                for n in range(dim):
                    accx += xmat[m, n] * psi[n]
                    accp += pmat[m, n] * psi[n]
                xs[m] = accx
                ps[m] = accp
            mean_x = 0.0
            mean_p = 0.0
            sec_x = 0.0
            sec_p = 0.0
            cross = 0.0
            for m in range(dim):
                c = psi[m]
                mean_x += (np.conj(c) * xs[m]).real
                mean_p += (np.conj(c) * ps[m]).real
                sec_x += (np.conj(xs[m]) * xs[m]).real
                sec_p += (np.conj(ps[m]) * ps[m]).real
                cross += (np.conj(xs[m]) * ps[m]).imag
            out[0, it] = mean_x
            out[1, it] = mean_p
            out[2, it] = sec_x - mean_x * mean_x
            out[3, it] = sec_p - mean_p * mean_p
            out[4, it] = cross
        return out

    return jit_moments


def timeseries_moments(
    amps: np.ndarray,
    energies: np.ndarray,
    ts: np.ndarray,
    xmat: np.ndarray,
    pmat: np.ndarray,
    hbar: float,
    backend: str | None = None,
) -> np.ndarray:
    """Moments along a time grid; see timeseries_moments_numpy for the layout."""
    global _jit_moments
    choice = backend_name(backend)
    amps = np.ascontiguousarray(amps, dtype=np.complex128)
    energies = np.ascontiguousarray(energies, dtype=np.float64)
    ts = np.ascontiguousarray(ts, dtype=np.float64)
    xmat = np.ascontiguousarray(xmat, dtype=np.complex128)
    pmat = np.ascontiguousarray(pmat, dtype=np.complex128)
    if choice == "numba":
        if _jit_moments is None:
            _jit_moments = _build_jit()
        return _jit_moments(amps, energies, ts, xmat, pmat, float(hbar))
    return timeseries_moments_numpy(amps, energies, ts, xmat, pmat, float(hbar))
