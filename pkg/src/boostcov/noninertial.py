"""Non-inertial coordinate histories and the twin phase they accumulate.

An observer displaced by ``xi(t)`` uses

    t' = (1 + v^2/2c^2) t - v.r/c^2,    r' = r - xi(t)

and a plane wave carrying its rest energy picks up, relative to an observer
who never moved, the phase ``int_0^t1 m |xi_dot|^2 / 2 dt``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
from scipy import integrate

from .spacetime import Event, Vec3, VecLike

__all__ = [
    "Trajectory",
    "Rest",
    "QuadraticRamp",
    "SmoothBump",
    "PiecewiseLinear",
    "Tabulated",
    "TwinPhaseResult",
    "noninertial_transform",
    "twin_phase",
    "phase_difference",
    "parse_trajectory",
    "load_trajectory_file",
]

X_AXIS = Vec3(1.0, 0.0, 0.0)
DEFAULT_RTOL = 1e-10
MAX_EVALUATIONS = 1_000_000


class Trajectory:
    """Displacement history on ``[0, t_end]``.

    Scalar kinds move along ``axis``. Subclasses provide ``_xi`` and
    ``_xi_dot`` returning floats (or length-3 arrays for vector samples) and
    may list ``breakpoints`` where the velocity is not smooth.
    """

    axis: Vec3 = X_AXIS
    t1: float
    t_end: float

    def _xi(self, t: float):
        raise NotImplementedError

    def _xi_dot(self, t: float):
        raise NotImplementedError

    def breakpoints(self) -> list[float]:
        return [0.0, self.t1]

    def _check_time(self, t: float) -> float:
        t = float(t)
        if not (0.0 <= t <= self.t_end):
            raise ValueError(f"t={t!r} outside trajectory domain [0, {self.t_end}]")
        return t

    def _as_vec(self, value) -> Vec3:
        arr = np.asarray(value, dtype=float)
        if arr.ndim == 0:
            return self.axis * float(arr)
        return Vec3.of(arr)

    def xi(self, t: float) -> Vec3:
        return self._as_vec(self._xi(self._check_time(t)))

    def xi_dot(self, t: float) -> Vec3:
        return self._as_vec(self._xi_dot(self._check_time(t)))

    def speed2(self, t: float) -> float:
        return float(np.sum(np.square(self._xi_dot(t))))


@dataclass(frozen=True)
class Rest(Trajectory):
    t_end: float = 1.0

    @property
    def t1(self) -> float:
        return self.t_end

    def _xi(self, t):
        return 0.0

    def _xi_dot(self, t):
        return 0.0


@dataclass(frozen=True)
class QuadraticRamp(Trajectory):
    """``xi = a t^2 / 2`` until ``t1``, then held at ``a t1^2 / 2``."""

    a: float
    t1: float
    t_end: Optional[float] = None
    axis: Vec3 = X_AXIS

    def __post_init__(self):
        if not self.t1 > 0:
            raise ValueError("t1 must be positive")
        object.__setattr__(self, "t_end", self.t1 if self.t_end is None else float(self.t_end))
        object.__setattr__(self, "axis", Vec3.of(self.axis))

    def _xi(self, t):
        tt = min(t, self.t1)
        return 0.5 * self.a * tt * tt

    def _xi_dot(self, t):
        return self.a * t if t < self.t1 else 0.0


@dataclass(frozen=True)
class SmoothBump(Trajectory):
    """``xi = amplitude * sin^2(pi t / t1)`` on ``[0, t1]``, zero afterwards."""

    amplitude: float
    t1: float
    t_end: Optional[float] = None
    axis: Vec3 = X_AXIS

    def __post_init__(self):
        if not self.t1 > 0:
            raise ValueError("t1 must be positive")
        object.__setattr__(self, "t_end", self.t1 if self.t_end is None else float(self.t_end))
        object.__setattr__(self, "axis", Vec3.of(self.axis))

    def _xi(self, t):
        if t >= self.t1:
            return 0.0
        return self.amplitude * math.sin(math.pi * t / self.t1) ** 2

    def _xi_dot(self, t):
        if t >= self.t1:
            return 0.0
        w = math.pi / self.t1
        return self.amplitude * w * math.sin(2.0 * w * t)


def _samples(times, values) -> tuple[np.ndarray, np.ndarray]:
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    if times.ndim != 1 or len(times) < 2:
        raise ValueError("need at least two sample times")
    if values.shape[0] != len(times) or values.ndim not in (1, 2):
        raise ValueError("values must have one row per sample time")
    if values.ndim == 2 and values.shape[1] != 3:
        raise ValueError("vector samples need 3 components")
    if np.any(np.diff(times) <= 0):
        raise ValueError("sample times must be strictly increasing")
    if times[0] != 0.0:
        raise ValueError("sample times must start at t=0")
    if not (np.all(np.isfinite(times)) and np.all(np.isfinite(values))):
        raise ValueError("samples must be finite")
    times.setflags(write=False)
    values.setflags(write=False)
    return times, values


@dataclass(frozen=True, eq=False)
class PiecewiseLinear(Trajectory):
    """Linear interpolation between ``(t, xi)`` samples; velocity is piecewise constant."""

    times: np.ndarray
    values: np.ndarray
    axis: Vec3 = X_AXIS

    def __post_init__(self):
        times, values = _samples(self.times, self.values)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "axis", Vec3.of(self.axis))

    @property
    def t1(self) -> float:
        return float(self.times[-1])

    @property
    def t_end(self) -> float:
        return self.t1

    def breakpoints(self):
        return self.times.tolist()

    def _segment(self, t):
        i = int(np.searchsorted(self.times, t, side="right")) - 1
        return min(max(i, 0), len(self.times) - 2)

    def _xi(self, t):
        i = self._segment(t)
        t0, t1 = self.times[i], self.times[i + 1]
        return self.values[i] + (self.values[i + 1] - self.values[i]) * (t - t0) / (t1 - t0)

    def _xi_dot(self, t):
        i = self._segment(t)
        return (self.values[i + 1] - self.values[i]) / (self.times[i + 1] - self.times[i])

    def exact_phase(self, m: float) -> float:
        """``sum m v_i^2 dt_i / 2`` over the segments."""
        dt = np.diff(self.times)
        dv = np.diff(self.values, axis=0)
        v2 = dv**2 if dv.ndim == 1 else np.sum(dv**2, axis=1)
        return float(0.5 * m * np.sum(v2 / dt))


@dataclass(frozen=True, eq=False)
class Tabulated(Trajectory):
    """Sampled ``xi`` with a centred-difference velocity; accurate to O(dt^2)."""

    times: np.ndarray
    values: np.ndarray
    axis: Vec3 = X_AXIS
    velocities: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        times, values = _samples(self.times, self.values)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "axis", Vec3.of(self.axis))
        vel = np.gradient(values, times, axis=0, edge_order=2) if len(times) > 2 \
            else np.gradient(values, times, axis=0)
        vel.setflags(write=False)
        object.__setattr__(self, "velocities", vel)

    @property
    def t1(self) -> float:
        return float(self.times[-1])

    @property
    def t_end(self) -> float:
        return self.t1

    def breakpoints(self):
        return self.times.tolist()

    def _interp(self, table, t):
        if table.ndim == 1:
            return float(np.interp(t, self.times, table))
        return np.array([np.interp(t, self.times, table[:, k]) for k in range(3)])

    def _xi(self, t):
        return self._interp(self.values, t)

    def _xi_dot(self, t):
        return self._interp(self.velocities, t)


@dataclass(frozen=True)
class TwinPhaseResult:
    phi: float
    estimated_error: float
    evaluations: int


def noninertial_transform(e: Event, traj: Trajectory, c: float, v: Optional[VecLike] = None) -> Event:
    """Coordinates of ``e`` seen by an observer displaced along ``traj``.

    The velocity in the time line defaults to ``xi_dot(t)``; pass ``v`` to
    hold it fixed instead.
    """
    if not c > 0:
        raise ValueError("c must be positive")
    vel = traj.xi_dot(e.t) if v is None else Vec3.of(v)
    r_new = e.r - traj.xi(e.t)
    t_new = (1.0 + 0.5 * vel.norm2() / c**2) * e.t - vel.dot(e.r) / c**2
    return Event(t_new, r_new)


def _sampled_phase(times, values, m):
    vel = np.gradient(values, times, axis=0, edge_order=2) if len(times) > 2 \
        else np.gradient(values, times, axis=0)
    speed2 = vel**2 if vel.ndim == 1 else np.sum(vel**2, axis=1)
    return float(integrate.trapezoid(0.5 * m * speed2, times))


def _tabulated_phase(traj: Tabulated, m: float) -> TwinPhaseResult:
    fine = _sampled_phase(traj.times, traj.values, m)
    n = len(traj.times)
    if n >= 5 and n % 2 == 1:
        # both differencing and quadrature are O(dt^2): Richardson on the full pipeline
        coarse = _sampled_phase(traj.times[::2], traj.values[::2], m)
        err = abs(fine - coarse) / 3.0
    elif n >= 6:
        coarse = _sampled_phase(traj.times[:-1:2], traj.values[:-1:2], m)
        tail = _sampled_phase(traj.times[:-1], traj.values[:-1], m)
        err = abs(tail - coarse) / 3.0
    else:
        err = abs(fine)
    return TwinPhaseResult(fine, err, n)


def twin_phase(traj: Trajectory, m: float, rtol: float = DEFAULT_RTOL,
               max_evaluations: int = MAX_EVALUATIONS) -> TwinPhaseResult:
    """Accumulated phase ``int_0^t1 m |xi_dot|^2 / 2 dt``.

    Integrated segment by segment between the trajectory's breakpoints with
    adaptive Gauss-Kronrod quadrature.
    """
    if not (math.isfinite(m) and m > 0):
        raise ValueError("mass must be positive")
    if isinstance(traj, Rest):
        return TwinPhaseResult(0.0, 0.0, 0)
    if isinstance(traj, Tabulated):
        return _tabulated_phase(traj, m)

    def f(t):
        return 0.5 * m * traj.speed2(t)

    edges = sorted({b for b in traj.breakpoints() if 0.0 <= b <= traj.t1} | {0.0, traj.t1})
    phi = err = 0.0
    evals = 0
    for a, b in zip(edges, edges[1:]):
        mid = f(0.5 * (a + b))
        if not math.isfinite(mid):
            raise ValueError(f"non-finite velocity on [{a}, {b}]")
        budget = max_evaluations - evals
        if budget < 21:
            raise RuntimeError("quadrature evaluation budget exhausted")
        val, abserr, info = integrate.quad(
            f, a, b, epsabs=0.0, epsrel=rtol, limit=max(1, budget // 21), full_output=1
        )[:3]
        if not (math.isfinite(val) and math.isfinite(abserr)):
            raise ValueError(f"non-integrable velocity on [{a}, {b}]")
        phi += val
        err += abserr
        evals += int(info["neval"])
    return TwinPhaseResult(phi, err, evals)


def phase_difference(a: Trajectory, b: Trajectory, m: float) -> float:
    """Relative twin phase of two histories for the same mass."""
    return twin_phase(a, m).phi - twin_phase(b, m).phi


def _kv(body: str, required: Sequence[str]) -> dict:
    out = {}
    for item in filter(None, body.split(",")):
        key, sep, val = item.partition("=")
        if not sep:
            raise ValueError(f"expected key=value, got {item!r}")
        out[key.strip()] = float(val)
    missing = [k for k in required if k not in out]
    extra = [k for k in out if k not in required]
    if missing or extra:
        raise ValueError(f"trajectory needs exactly {list(required)}, got {sorted(out)}")
    return out


def load_trajectory_file(path) -> Tabulated:
    """Two-column text file of ``t xi`` rows with strictly increasing ``t``."""
    data = np.loadtxt(Path(path), ndmin=2)
    if data.shape[1] != 2:
        raise ValueError(f"{path}: expected two columns (t, xi), got {data.shape[1]}")
    return Tabulated(data[:, 0], data[:, 1])


def parse_trajectory(spec: str) -> Trajectory:
    """Parse ``rest``, ``quad:a=..,t1=..``, ``bump:amp=..,t1=..`` or ``file:<path>``."""
    kind, _, body = spec.strip().partition(":")
    kind = kind.lower()
    if kind == "rest" and not body:
        return Rest()
    if kind == "quad":
        kv = _kv(body, ("a", "t1"))
        return QuadraticRamp(kv["a"], kv["t1"])
    if kind == "bump":
        kv = _kv(body, ("amp", "t1"))
        return SmoothBump(kv["amp"], kv["t1"])
    if kind == "file" and body:
        return load_trajectory_file(body)
    raise ValueError(f"unrecognised trajectory {spec!r}")
