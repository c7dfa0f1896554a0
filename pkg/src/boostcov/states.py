"""Plane waves, their phases, and energy/momentum read off them.

Natural units with hbar = 1; ``c`` stays an explicit parameter. Waves are
written ``psi = exp(i phi)`` with ``phi = E t - p.r``, so energy and momentum
are extracted as ``E = d(phi)/dt`` and ``p = -grad(phi)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np

from .spacetime import (
    BoostKind,
    BoostSpec,
    Event,
    FrameMatrix,
    Vec3,
    VecLike,
    boost_matrix,
)

__all__ = [
    "MIN_MASS",
    "PlaneWave",
    "LinearPhaseWave",
    "PhaseFactor",
    "EnergyMomentum",
    "WaveField",
    "ExtendedBoostResult",
    "StepTooLargeError",
    "phase_at",
    "energy_momentum",
    "schrodinger_residual",
    "galilei_boost_wave",
    "phase_shift_boost",
    "extended_boost_wave",
    "probe_energy_momentum",
    "safe_steps",
]

MIN_MASS = 1e-9


def _check_mass(m: float) -> float:
    m = float(m)
    if not (math.isfinite(m) and m >= MIN_MASS):
        raise ValueError(f"mass must be >= {MIN_MASS:g}, got {m!r}")
    return m


@dataclass(frozen=True)
class PlaneWave:
    """Free Schroedinger plane wave, optionally carrying the rest energy ``m c^2``."""

    m: float
    p: Vec3 = Vec3()
    include_rest: bool = False
    c: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "m", _check_mass(self.m))
        object.__setattr__(self, "p", Vec3.of(self.p))
        if self.include_rest:
            if self.c is None or not (math.isfinite(self.c) and self.c > 0):
                raise ValueError("a rest-energy wave needs a finite c > 0")
            object.__setattr__(self, "c", float(self.c))

    @property
    def rest_energy(self) -> float:
        return self.m * self.c**2 if self.include_rest else 0.0

    @property
    def kinetic_energy(self) -> float:
        return self.p.norm2() / (2.0 * self.m)

    @property
    def E(self) -> float:
        return self.rest_energy + self.kinetic_energy

    def as_linear(self) -> "LinearPhaseWave":
        return LinearPhaseWave(self.E, self.p)


@dataclass(frozen=True)
class LinearPhaseWave:
    """``exp(i(E t - p.r))`` with no dispersion relation imposed."""

    E: float
    p: Vec3 = Vec3()

    def __post_init__(self):
        object.__setattr__(self, "E", float(self.E))
        object.__setattr__(self, "p", Vec3.of(self.p))

    def as_linear(self) -> "LinearPhaseWave":
        return self


Wave = Union[PlaneWave, LinearPhaseWave]


@dataclass(frozen=True)
class PhaseFactor:
    """Multiplier ``exp(i(alpha t - beta.r))``."""

    alpha: float
    beta: Vec3 = Vec3()

    def apply(self, w: Wave) -> LinearPhaseWave:
        lin = w.as_linear()
        return LinearPhaseWave(lin.E + self.alpha, lin.p + Vec3.of(self.beta))


@dataclass(frozen=True)
class EnergyMomentum:
    E: float
    p: Vec3

    def distance(self, other: "EnergyMomentum") -> float:
        """Max-norm distance over ``(E, px, py, pz)``."""
        dp = self.p - other.p
        return max(abs(self.E - other.E), abs(dp.x), abs(dp.y), abs(dp.z))


@dataclass(frozen=True)
class WaveField:
    """A pure-phase field ``Event -> exp(i phase(t, r))``.

    ``phase`` takes ``(t, r)`` with ``r`` a length-3 array.
    """

    phase: Callable[[float, np.ndarray], float]
    label: str = "field"

    def __call__(self, e: Event) -> complex:
        return complex(np.exp(1j * self.phase(e.t, e.r.as_array())))

    @classmethod
    def from_wave(cls, w: Wave) -> "WaveField":
        lin = w.as_linear()
        E, p = lin.E, lin.p.as_array()
        return cls(lambda t, r: E * t - float(p @ r), label=f"wave(E={E:g})")

    def pulled_back(self, matrix: FrameMatrix, label: Optional[str] = None) -> "WaveField":
        """The field ``e -> self(matrix @ e)``."""
        m = np.array(matrix.m)
        inner = self.phase

        def phase(t, r):
            x = m @ np.concatenate(([t], r))
            return inner(x[0], x[1:])

        return WaveField(phase, label or f"{self.label}∘M")


def phase_at(w: Wave, e: Event) -> float:
    lin = w.as_linear()
    return lin.E * e.t - lin.p.dot(e.r)


def energy_momentum(w: Wave) -> EnergyMomentum:
    lin = w.as_linear()
    return EnergyMomentum(lin.E, lin.p)


def schrodinger_residual(
    w: Wave, m: float, include_rest: bool = False, c: Optional[float] = None
) -> float:
    """Distance of ``w`` from the free Schroedinger dispersion for mass ``m``.

    Zero iff ``E = m c^2 [include_rest] + p^2/2m``.
    """
    m = _check_mass(m)
    lin = w.as_linear()
    rest = m * c**2 if include_rest else 0.0
    return abs(lin.E - (rest + lin.p.norm2() / (2.0 * m)))


def galilei_boost_wave(w: PlaneWave, v: VecLike) -> LinearPhaseWave:
    """Rewrite ``w`` in Galilei-boosted coordinates ``(t, r - v t)``.

    Momentum is untouched and the frequency shifts by ``p.v``, which leaves the
    result off the Schroedinger mass shell.
    """
    v = Vec3.of(v)
    return LinearPhaseWave(w.E + w.p.dot(v), w.p)


def phase_shift_boost(w: PlaneWave, v: VecLike, rule_mass: float) -> LinearPhaseWave:
    """Galilei boost followed by the mass-dependent phase factor.

    The factor is built for ``rule_mass``; only when it equals ``w.m`` does the
    result land back on the mass shell with ``p' = p + m v``.
    """
    v = Vec3.of(v)
    rule_mass = _check_mass(rule_mass)
    shift = PhaseFactor(0.5 * rule_mass * v.norm2(), v * rule_mass)
    return shift.apply(galilei_boost_wave(w, v))


@dataclass(frozen=True)
class ExtendedBoostResult:
    """Outcome of an extended boost on a rest-energy plane wave.

    ``truncated`` keeps only the terms that survive as ``c -> infinity``;
    ``field`` is the exact composition of the wave with the inverse boost,
    to be probed numerically. ``inverse`` is the matrix used for that.
    """

    truncated: LinearPhaseWave
    field: WaveField
    inverse: FrameMatrix
    dropped: dict = field(default_factory=dict)


def extended_boost_wave(
    w: PlaneWave, b: BoostSpec, drop_c2_terms: bool = False
) -> ExtendedBoostResult:
    if not w.include_rest:
        raise ValueError("extended_boost_wave needs a wave carrying its rest energy")
    if b.kind is not BoostKind.EXTENDED:
        raise ValueError(f"extended_boost_wave needs an extended boost, got {b.kind.value}")
    m, c, p, v = w.m, b.c, w.p, b.v
    if w.c != c:
        raise ValueError(f"wave has c={w.c} but boost has c={c}")
    s = 0.5 * v.norm2() / c**2
    kinetic = w.kinetic_energy

    # Expanding E t - p.r with t = (1+s)t' + v.r'/c^2, r = r' + v t':
    #   E'  = m c^2 + p^2/2m - p.v + (m c^2) s + (p^2/2m) s
    #   p'  = p - (m c^2) v/c^2 - (p^2/2m) v/c^2
    # The rest energy turns the O(1/c^2) pieces into m v^2/2 and m v; the
    # kinetic products vanish as 1/c^2 and are dropped.
    E_t = w.rest_energy + kinetic - p.dot(v) + 0.5 * m * v.norm2()
    p_t = p - v * m
    dropped = {"E": kinetic * s, "p": (-v * (kinetic / c**2)).as_array().tolist()}

    forward = boost_matrix(b, drop_c2_terms=drop_c2_terms)
    inverse = forward.inverse()
    field_ = WaveField.from_wave(w).pulled_back(inverse, label="extended-boosted")
    return ExtendedBoostResult(LinearPhaseWave(E_t, p_t), field_, inverse, dropped)


class StepTooLargeError(ValueError):
    """The probe step spans more than a quarter turn of phase."""


_ALIAS_LIMIT = math.pi / 2


def _phase_diff(f: WaveField, plus: Event, minus: Event) -> float:
    a, b = f(plus), f(minus)
    if abs(a) < 1e-300 or abs(b) < 1e-300:
        raise ValueError("field vanishes at a probe point; phase undefined")
    dphi = float(np.angle(a * np.conj(b)))
    if abs(dphi) > _ALIAS_LIMIT:
        raise StepTooLargeError(
            f"phase step {dphi:.3f} rad exceeds pi/2; reduce the probe step"
        )
    return dphi


def probe_energy_momentum(f: WaveField, e: Event, h_t: float, h_r: float) -> EnergyMomentum:
    """Central-difference ``E = d(phi)/dt``, ``p = -grad(phi)`` at ``e``.

    Differences are taken as the argument of ``f(e+h)/f(e-h)``, which is
    immune to 2 pi wrapping as long as the phase moves less than pi/2 over
    the stencil; beyond that :class:`StepTooLargeError` is raised.
    """
    if not (h_t > 0 and h_r > 0):
        raise ValueError("probe steps must be positive")
    t, r = e.t, e.r
    E = _phase_diff(f, Event(t + h_t, r), Event(t - h_t, r)) / (2 * h_t)
    p = []
    for axis in np.eye(3):
        d = Vec3.of(axis * h_r)
        p.append(-_phase_diff(f, Event(t, r + d), Event(t, r - d)) / (2 * h_r))
    return EnergyMomentum(E, Vec3(*p))


def safe_steps(E: float, p: VecLike, fraction: float = 0.25) -> tuple[float, float]:
    """Steps that move a linear phase by at most ``fraction`` rad per side.

    For a linear phase central differences carry no truncation error, so the
    largest alias-safe step minimises rounding noise.
    """
    p = Vec3.of(p)
    h_t = fraction / max(abs(E), 1.0)
    h_r = fraction / max(abs(p.x), abs(p.y), abs(p.z), 1.0)
    return h_t, h_r
