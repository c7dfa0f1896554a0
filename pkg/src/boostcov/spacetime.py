"""Coordinate boosts of spacetime events.

Three flavours of boost act on raw ``(t, x, y, z)`` coordinates:

* ``GALILEI``  -- ``t' = t``, ``r' = r - v t``
* ``EXTENDED`` -- ``t' = (1 + v^2/2c^2) t - v.r/c^2``, ``r' = r - v t``
* ``LORENTZ``  -- the exact boost along ``v``

Time and space are deliberately *not* put on a common ``ct`` footing, so the
matrix entries have mixed units (row 0 in time, rows 1-3 in length).
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

import numpy as np

__all__ = [
    "Vec3",
    "Event",
    "BoostKind",
    "BoostSpec",
    "FrameMatrix",
    "ValidityWarning",
    "boost_event",
    "boost_matrix",
    "compose",
    "inverse_residual",
    "inverse_residual_closed_form",
]

#: |v|/c above which the extended boost is outside its advertised regime.
EXTENDED_VALIDITY_RATIO = 0.3


class ValidityWarning(UserWarning):
    """Emitted when an extended boost is used with |v|/c above 0.3."""


@dataclass(frozen=True)
class Vec3:
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    def __post_init__(self):
        for name in ("x", "y", "z"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"Vec3.{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)

    @classmethod
    def of(cls, value: "VecLike") -> "Vec3":
        """Coerce a Vec3, a length-3 sequence/array or a scalar (taken along x)."""
        if isinstance(value, Vec3):
            return value
        arr = np.asarray(value, dtype=float)
        if arr.ndim == 0:
            return cls(float(arr), 0.0, 0.0)
        if arr.shape != (3,):
            raise ValueError(f"expected 3 components, got shape {arr.shape}")
        return cls(*arr.tolist())

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def __iter__(self):
        return iter((self.x, self.y, self.z))

    def __add__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x - other.x, self.y - other.y, self.z - other.z)

    def __neg__(self) -> "Vec3":
        return Vec3(-self.x, -self.y, -self.z)

    def __mul__(self, k: float) -> "Vec3":
        return Vec3(k * self.x, k * self.y, k * self.z)

    __rmul__ = __mul__

    def dot(self, other: "Vec3") -> float:
        return self.x * other.x + self.y * other.y + self.z * other.z

    def norm2(self) -> float:
        return self.dot(self)

    def norm(self) -> float:
        return math.hypot(self.x, self.y, self.z)


VecLike = Union[Vec3, Iterable[float], np.ndarray, float]


@dataclass(frozen=True)
class Event:
    """A spacetime point ``(t, r)``."""

    t: float
    r: Vec3 = Vec3()

    def __post_init__(self):
        t = float(self.t)
        if not math.isfinite(t):
            raise ValueError(f"Event.t must be finite, got {t!r}")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "r", Vec3.of(self.r))

    @classmethod
    def from_array(cls, arr) -> "Event":
        arr = np.asarray(arr, dtype=float)
        return cls(float(arr[0]), Vec3(*arr[1:4].tolist()))

    def as_array(self) -> np.ndarray:
        return np.array([self.t, self.r.x, self.r.y, self.r.z])


class BoostKind(enum.Enum):
    GALILEI = "galilei"
    EXTENDED = "extended"
    LORENTZ = "lorentz"


@dataclass(frozen=True)
class BoostSpec:
    """Boost velocity ``v``, light speed ``c`` and flavour."""

    v: Vec3
    c: float = 1.0
    kind: BoostKind = BoostKind.EXTENDED

    def __post_init__(self):
        object.__setattr__(self, "v", Vec3.of(self.v))
        object.__setattr__(self, "kind", BoostKind(self.kind))
        c = float(self.c)
        if not (math.isfinite(c) and c > 0):
            raise ValueError(f"c must be finite and positive, got {c!r}")
        object.__setattr__(self, "c", c)
        if self.kind is not BoostKind.GALILEI:
            ratio = self.v.norm() / c
            if ratio >= 1.0:
                raise ValueError(f"|v|/c = {ratio:g} >= 1 for a {self.kind.value} boost")
            if self.kind is BoostKind.EXTENDED and ratio > EXTENDED_VALIDITY_RATIO:
                warnings.warn(
                    f"|v|/c = {ratio:g} exceeds {EXTENDED_VALIDITY_RATIO}; "
                    "the extended boost is a low-velocity expansion",
                    ValidityWarning,
                    stacklevel=3,
                )

    @property
    def beta2(self) -> float:
        return self.v.norm2() / self.c**2

    @property
    def gamma(self) -> float:
        return 1.0 / math.sqrt(1.0 - self.beta2)

    def reversed(self) -> "BoostSpec":
        """The same boost with ``-v``."""
        return BoostSpec(-self.v, self.c, self.kind)


@dataclass(frozen=True, eq=False)
class FrameMatrix:
    """A 4x4 linear map on ``(t, x, y, z)`` columns."""

    m: np.ndarray

    def __post_init__(self):
        m = np.array(self.m, dtype=float)
        if m.shape != (4, 4):
            raise ValueError(f"FrameMatrix needs shape (4, 4), got {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValueError("FrameMatrix entries must be finite")
        m.setflags(write=False)
        object.__setattr__(self, "m", m)

    def __getitem__(self, idx):
        return self.m[idx]

    def __eq__(self, other):
        return isinstance(other, FrameMatrix) and np.array_equal(self.m, other.m)

    def apply(self, e: Event) -> Event:
        return Event.from_array(self.m @ e.as_array())

    def inverse(self) -> "FrameMatrix":
        return FrameMatrix(np.linalg.inv(self.m))

    @classmethod
    def identity(cls) -> "FrameMatrix":
        return cls(np.eye(4))


def boost_event(e: Event, b: BoostSpec) -> Event:
    """Apply the boost ``b`` to the event ``e``."""
    v, c, t, r = b.v, b.c, e.t, e.r
    r_galilei = r - v * t
    if b.kind is BoostKind.GALILEI:
        return Event(t, r_galilei)
    if b.kind is BoostKind.EXTENDED:
        s = 0.5 * v.norm2() / c**2
        return Event((1.0 + s) * t - v.dot(r) / c**2, r_galilei)

    v2 = v.norm2()
    if v2 == 0.0:
        return e
    gamma = b.gamma
    t_new = gamma * (t - v.dot(r) / c**2)
    # parallel part of r picks up gamma, perpendicular part is untouched
    r_par = v * (v.dot(r) / v2)
    r_new = r - r_par + (r_par - v * t) * gamma
    return Event(t_new, r_new)


def boost_matrix(b: BoostSpec, drop_c2_terms: bool = False) -> FrameMatrix:
    """Matrix form of :func:`boost_event`.

    ``drop_c2_terms`` zeroes the ``1/c^2`` entries of an extended boost, which
    leaves the Galilei matrix. It is a sabotage hook for tests and
    ``verify --sabotage``; other kinds ignore it.
    """
    v = b.v.as_array()
    c2 = b.c**2
    m = np.eye(4)
    # 0.0 - v keeps zero components as +0.0
    m[1:, 0] = 0.0 - v
    if b.kind is BoostKind.EXTENDED and not drop_c2_terms:
        m[0, 0] = 1.0 + 0.5 * b.v.norm2() / c2
        m[0, 1:] = (0.0 - v) / c2
    elif b.kind is BoostKind.LORENTZ:
        v2 = b.v.norm2()
        if v2 == 0.0:
            return FrameMatrix(np.eye(4))
        gamma = b.gamma
        m[0, 0] = gamma
        m[0, 1:] = (0.0 - gamma * v) / c2
        m[1:, 0] = 0.0 - gamma * v
        m[1:, 1:] = np.eye(3) + (gamma - 1.0) * np.outer(v, v) / v2
    return FrameMatrix(m)


def compose(a: FrameMatrix, b: FrameMatrix) -> FrameMatrix:
    """Matrix product ``a @ b`` (apply ``b`` first)."""
    return FrameMatrix(a.m @ b.m)


def _extended_rational(v: Vec3, c: float, sign: int) -> list[list[Fraction]]:
    vq = [Fraction(x) * sign for x in v]
    c2 = Fraction(c) ** 2
    s = sum(x * x for x in vq) / (2 * c2)
    rows = [[1 + s] + [-x / c2 for x in vq]]
    for i in range(3):
        rows.append([-vq[i]] + [Fraction(int(i == j)) for j in range(3)])
    return rows


def inverse_residual(b: BoostSpec) -> FrameMatrix:
    """``T(-v) T(v) - I`` for the extended boost.

    The entries are tiny differences of order-one numbers (entry (0, 0) is
    ``v^4/4c^4``), so the product is formed in exact rational arithmetic on
    the given floats and rounded once at the end.
    """
    if b.kind is not BoostKind.EXTENDED:
        raise ValueError(f"inverse_residual needs an extended boost, got {b.kind.value}")
    fwd = _extended_rational(b.v, b.c, +1)
    back = _extended_rational(b.v, b.c, -1)
    out = np.empty((4, 4))
    for i in range(4):
        for j in range(4):
            acc = sum(back[i][k] * fwd[k][j] for k in range(4))
            out[i, j] = float(acc - int(i == j))
    return FrameMatrix(out)


def inverse_residual_closed_form(b: BoostSpec) -> FrameMatrix:
    """Hand-derived entries of ``T(-v) T(v) - I`` with ``s = v^2/2c^2``.

    ``(0,0) = s^2``, ``(i,0) = v_i s``, ``(0,i) = -v_i s/c^2`` and
    ``(i,j) = -v_i v_j/c^2``.
    """
    v = b.v.as_array()
    c2 = b.c**2
    s = 0.5 * b.v.norm2() / c2
    out = np.empty((4, 4))
    out[0, 0] = s * s
    out[1:, 0] = v * s
    out[0, 1:] = -v * s / c2
    out[1:, 1:] = -np.outer(v, v) / c2
    return FrameMatrix(out)
