"""Deterministic master-equation time evolution.

Two routes are provided on purpose: an adaptive embedded Runge-Kutta
integrator with dense output (the workhorse), and exact propagation
through the eigendecomposition of the superoperator (the trust anchor for
small systems). They are cross-validated in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence, Union

import numpy as np
import scipy.integrate
import scipy.linalg

from .liouville import Superoperator, apply_lindbladian, assemble_superoperator, unvec, vec
from .models import LindbladSet
from .operators import SparseOperator

__all__ = [
    "Trajectory",
    "ObservableSeries",
    "evolve",
    "propagate_exact",
    "observable_series",
    "purity_rate",
    "random_density_matrix",
    "series_to_csv",
    "oscillation_spectrum",
    "spectral_peaks",
    "peak_to_peak",
]

TRACE_TOL = 1e-8
HERM_TOL = 1e-8


@dataclass(frozen=True)
class Trajectory:
    """States on an ascending time grid.

    Every stored state is checked for unit trace and Hermiticity (drift
    below 1e-8); a violation aborts the run rather than returning bad data.
    """

    times: np.ndarray
    states: tuple[np.ndarray, ...]
    rel_tol: float


@dataclass(frozen=True)
class ObservableSeries:
    times: np.ndarray
    values: np.ndarray


def _validate_initial_state(rho0: np.ndarray, psd_tol: float = 1e-10) -> np.ndarray:
    rho0 = np.asarray(rho0, dtype=complex)
    if rho0.ndim != 2 or rho0.shape[0] != rho0.shape[1]:
        raise ValueError(f"rho0 must be square, got shape {rho0.shape}")
    if abs(np.trace(rho0) - 1.0) > psd_tol:
        raise ValueError(f"rho0 trace {np.trace(rho0)} is not 1")
    if np.max(np.abs(rho0 - rho0.conj().T)) > psd_tol:
        raise ValueError("rho0 is not Hermitian")
    if float(np.min(scipy.linalg.eigvalsh(rho0))) < -psd_tol:
        raise ValueError("rho0 is not positive semidefinite")
    return rho0


def _check_trajectory_invariants(times, states) -> None:
    for t, rho in zip(times, states):
        trace_err = abs(np.trace(rho) - 1.0)
        herm_err = float(np.linalg.norm(rho - rho.conj().T))
        if trace_err > TRACE_TOL or herm_err > HERM_TOL:
            raise RuntimeError(
                f"trajectory invariant violated at t={t}: "
                f"trace drift {trace_err:.3e}, hermiticity drift {herm_err:.3e}"
            )


def evolve(
    h: SparseOperator,
    lindblads: LindbladSet,
    rho0: np.ndarray,
    t_grid: Sequence[float],
    rel_tol: float = 1e-9,
    abs_tol: float = 1e-12,
    method: str = "DOP853",
) -> Trajectory:
    """Integrate the master equation and sample it on ``t_grid``.

    Uses an adaptive embedded Runge-Kutta pair with dense output; the
    local error per step is kept at ``rel_tol`` relative to the state.
    The grid must be ascending; integration starts at ``t_grid[0]`` from
    the validated ``rho0``.

    Raises ``RuntimeError`` if the integrator stalls (stiffness): exact
    propagation via :func:`propagate_exact` is the fallback there.
    """
    rho0 = _validate_initial_state(rho0)
    t = np.asarray(t_grid, dtype=float)
    if t.ndim != 1 or t.size < 1 or np.any(np.diff(t) <= 0):
        raise ValueError("t_grid must be a strictly ascending 1-d grid")
    d = h.space.dim
    if rho0.shape != (d, d):
        raise ValueError(f"rho0 shape {rho0.shape} does not match dim {d}")

    s = assemble_superoperator(h, lindblads)
    if s.matrix is not None:
        m = s.matrix

        def rhs(_t, y):
            return m @ y

    else:

        def rhs(_t, y):
            return vec(apply_lindbladian(h, lindblads, unvec(y, d)))

    if t.size == 1:
        states = (rho0,)
        _check_trajectory_invariants(t, states)
        return Trajectory(times=t, states=states, rel_tol=rel_tol)

    sol = scipy.integrate.solve_ivp(
        rhs,
        (t[0], t[-1]),
        vec(rho0),
        method=method,
        t_eval=t,
        rtol=rel_tol,
        atol=abs_tol,
    )
    if not sol.success:
        raise RuntimeError(
            "integration failed (likely stiffness / step-size underflow): "
            f"{sol.message}; consider propagate_exact for this system"
        )
    states = tuple(unvec(sol.y[:, i], d) for i in range(t.size))
    _check_trajectory_invariants(t, states)
    return Trajectory(times=t, states=states, rel_tol=rel_tol)


def propagate_exact(
    s: Superoperator,
    rho0: np.ndarray,
    t_grid: Sequence[float],
) -> Trajectory:
    """Exact evolution through the eigendecomposition of the superoperator.

    ``rho(t) = V exp(diag(lambda) (t - t0)) V^{-1} vec(rho0)``. Intended as
    the oracle for small systems; cost grows as d^6.
    """
    if s.matrix is None:
        raise ValueError("propagate_exact needs the explicit superoperator matrix")
    rho0 = _validate_initial_state(rho0)
    t = np.asarray(t_grid, dtype=float)
    if t.ndim != 1 or t.size < 1 or np.any(np.diff(t) < 0):
        raise ValueError("t_grid must be ascending")
    d = s.dim
    w, v = scipy.linalg.eig(s.matrix.toarray())
    y0 = scipy.linalg.solve(v, vec(rho0))
    states = []
    for ti in t:
        y = v @ (np.exp(w * (ti - t[0])) * y0)
        states.append(unvec(y, d))
    _check_trajectory_invariants(t, states)
    return Trajectory(times=t, states=tuple(states), rel_tol=0.0)


def observable_series(traj: Trajectory, obs: SparseOperator) -> ObservableSeries:
    """Expectation values ``Re tr(O rho(t))`` along a trajectory.

    ``obs`` must be Hermitian; the imaginary residue of the trace is
    required to stay below 1e-10.
    """
    om = obs.mat
    herm_err = float(np.abs(om - om.conjugate().transpose()).max())
    if herm_err > 1e-12:
        raise ValueError(f"observable is not Hermitian (asymmetry {herm_err:.3e})")
    if obs.space.dim != traj.states[0].shape[0]:
        raise ValueError("observable dimension does not match the trajectory")
    values = np.empty(traj.times.size)
    for i, rho in enumerate(traj.states):
        val = complex(np.trace(om @ rho))
        if abs(val.imag) > 1e-10:
            raise RuntimeError(
                f"imaginary residue {val.imag:.3e} in a Hermitian expectation"
            )
        values[i] = val.real
    return ObservableSeries(times=traj.times.copy(), values=values)


def purity_rate(
    rho: np.ndarray, h: SparseOperator, lindblads: LindbladSet
) -> float:
    """Instantaneous purity derivative ``d/dt tr rho^2 = 2 Re tr(rho L(rho))``."""
    rho = np.asarray(rho, dtype=complex)
    image = apply_lindbladian(h, lindblads, rho)
    return float(2.0 * np.trace(rho @ image).real)


def random_density_matrix(dim: int, seed: int) -> np.ndarray:
    """Full-rank random state ``G G^dag / tr`` with seeded complex normal ``G``.

    Deterministic for a given ``(dim, seed)``.
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def series_to_csv(
    path: Union[str, Path],
    series: ObservableSeries,
    comments: Sequence[str] = (),
) -> None:
    """Write "t,value" rows; metadata goes into leading ``#`` comments."""
    lines = [f"# {c}" for c in comments]
    lines.append("t,value")
    for t, v in zip(series.times, series.values):
        lines.append(f"{float(t)!r},{float(v)!r}")
    Path(path).write_text("\n".join(lines) + "\n")


# -- small signal-analysis helpers used by the acceptance checks ----------


def peak_to_peak(series: ObservableSeries, t_min: float, t_max: float) -> float:
    """Max minus min of the series restricted to ``t_min <= t <= t_max``."""
    mask = (series.times >= t_min) & (series.times <= t_max)
    if not np.any(mask):
        raise ValueError(f"no samples in window [{t_min}, {t_max}]")
    vals = series.values[mask]
    return float(np.max(vals) - np.min(vals))


def oscillation_spectrum(
    series: ObservableSeries, t_min: float, t_max: float
) -> tuple[np.ndarray, np.ndarray]:
    """Windowed DFT magnitude of the mean-subtracted series.

    Returns ``(omega, amplitude)`` over nonnegative angular frequencies.
    A Hann window keeps spectral leakage below the peak-detection
    threshold used downstream. Requires a uniform grid inside the window.
    """
    mask = (series.times >= t_min) & (series.times <= t_max)
    t = series.times[mask]
    x = series.values[mask]
    if t.size < 8:
        raise ValueError("window too short for a spectrum")
    dt = np.diff(t)
    if np.max(np.abs(dt - dt[0])) > 1e-9 * dt[0]:
        raise ValueError("oscillation_spectrum needs a uniform time grid")
    x = x - np.mean(x)
    window = np.hanning(t.size)
    amp = np.abs(np.fft.rfft(x * window))
    freq = np.fft.rfftfreq(t.size, d=dt[0])
    return 2.0 * np.pi * freq, amp


def spectral_peaks(
    omega: np.ndarray,
    amplitude: np.ndarray,
    rel_threshold: float = 0.1,
    skip_dc_bins: int = 2,
) -> np.ndarray:
    """Angular frequencies of local maxima above ``rel_threshold * max``.

    The first ``skip_dc_bins`` bins are excluded: they hold the residue of
    the stationary (zero-frequency) component, not an oscillation.
    """
    if amplitude.size < 3:
        return np.array([])
    peak_scale = float(np.max(amplitude[skip_dc_bins:]))
    if peak_scale == 0.0:
        return np.array([])
    peaks = []
    for i in range(max(1, skip_dc_bins), amplitude.size - 1):
        if (
            amplitude[i] >= amplitude[i - 1]
            and amplitude[i] >= amplitude[i + 1]
            and amplitude[i] >= rel_threshold * peak_scale
        ):
            peaks.append(omega[i])
    return np.asarray(peaks)
