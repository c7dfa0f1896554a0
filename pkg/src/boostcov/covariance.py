"""Numerical certification of the covariance claims for plane waves.

Each ``check_*`` function returns a :class:`CheckVerdict`. Exact algebraic
identities are held to ``1e-12`` relative to ``max(1, |value|)``; quantities
that should vanish only as ``1/c^2`` are held to ten times their leading
closed-form truncation term plus a floating-point noise floor for the
finite-difference probe. Checks with several parts report
``max(part_residual / part_threshold)`` against a threshold of 1 and keep the
raw parts in ``details``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .spacetime import (
    BoostKind,
    BoostSpec,
    Event,
    Vec3,
    VecLike,
    boost_event,
    boost_matrix,
    inverse_residual,
    inverse_residual_closed_form,
)
from .states import (
    EnergyMomentum,
    PlaneWave,
    WaveField,
    energy_momentum,
    extended_boost_wave,
    galilei_boost_wave,
    phase_shift_boost,
    probe_energy_momentum,
    safe_steps,
    schrodinger_residual,
)

__all__ = [
    "EXACT_TOL",
    "TRUNCATION_FACTOR",
    "RESIDUAL_FLOOR",
    "CheckVerdict",
    "CovarianceReport",
    "OrderScanResult",
    "probe_events",
    "check_galilei_noncovariance",
    "check_phase_shift_covariance",
    "check_mass_dependence",
    "check_extended_covariance",
    "check_operator_transform",
    "check_inverse_residual",
    "extended_truncation_gap",
    "extended_momentum_error",
    "lorentz_reference_gap",
    "order_scan",
    "verify_suite",
]

EXACT_TOL = 1e-12
TRUNCATION_FACTOR = 10.0
RESIDUAL_FLOOR = 1e-15
OPERATOR_TOL = 1e-8
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class CheckVerdict:
    name: str
    residual: float
    threshold: float
    details: dict = field(default_factory=dict)
    inconclusive: bool = False

    @property
    def passed(self) -> bool:
        return (not self.inconclusive) and self.residual <= self.threshold

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "residual": self.residual,
            "threshold": self.threshold,
            "passed": self.passed,
            "inconclusive": self.inconclusive,
            "details": self.details,
        }


@dataclass(frozen=True)
class CovarianceReport:
    verdicts: list
    inputs: dict = field(default_factory=dict)

    @property
    def overall(self) -> bool:
        """True when every conclusive verdict passed."""
        return all(v.passed for v in self.verdicts if not v.inconclusive)

    def failed(self) -> list:
        return [v for v in self.verdicts if not v.passed and not v.inconclusive]


@dataclass(frozen=True)
class OrderScanResult:
    samples: list
    fitted_exponent: float
    fit_quality: float
    converged_to_zero: bool = False

    def as_dict(self) -> dict:
        return {
            "samples": [{"c": c, "residual": r} for c, r in self.samples],
            "fitted_exponent": self.fitted_exponent,
            "fit_quality": self.fit_quality,
            "converged_to_zero": self.converged_to_zero,
        }


def _scaled(x: float) -> float:
    return EXACT_TOL * max(1.0, abs(x))


def _combine(name: str, parts: dict, details: dict, inconclusive: bool = False) -> CheckVerdict:
    """Fold ``{part: (residual, threshold)}`` into one normalised verdict."""
    ratio = max(r / t for r, t in parts.values())
    details = dict(details)
    details["parts"] = {k: {"residual": r, "threshold": t} for k, (r, t) in parts.items()}
    return CheckVerdict(name, float(ratio), 1.0, details, inconclusive)


def probe_events(seed: int = 0, n_random: int = 8) -> list[Event]:
    """Nine grid events ``t, x in {0, 0.5, 1}`` plus seeded random events.

    Random events have ``t`` in [0, 1] and ``r`` in [-1, 1]^3.
    """
    grid = [Event(t, (x, 0.0, 0.0)) for t in (0.0, 0.5, 1.0) for x in (0.0, 0.5, 1.0)]
    rng = np.random.default_rng(seed)
    rand = [
        Event(rng.uniform(0.0, 1.0), rng.uniform(-1.0, 1.0, size=3))
        for _ in range(n_random)
    ]
    return grid + rand


def _probe_noise(E: float, p: Vec3, events: Sequence[Event], h_t: float, h_r: float) -> float:
    # rounding of a phase of size |phi| divided by the stencil width
    phi_max = max(abs(E * e.t) + p.norm() * e.r.norm() for e in events) + 1.0
    return 64.0 * _EPS * phi_max * (1.0 / h_t + 1.0 / h_r)


def _em_dict(em: EnergyMomentum) -> dict:
    return {"E": em.E, "p": list(em.p)}


def check_galilei_noncovariance(w: PlaneWave, v: VecLike, events: Optional[Sequence[Event]] = None) -> CheckVerdict:
    """Confirm the Galilei boost leaves ``w`` off-shell by exactly ``|p.v|``.

    Passing means non-covariance is certified: the boosted frequency misses the
    mass shell by ``|p.v|`` and the probed momentum equals the unboosted one.
    """
    v = Vec3.of(v)
    events = list(events) if events is not None else probe_events()
    pv = w.p.dot(v)
    boosted = galilei_boost_wave(w, v)
    gap = schrodinger_residual(boosted, w.m, w.include_rest, w.c)

    field_ = WaveField.from_wave(w).pulled_back(boost_matrix(BoostSpec(v, 1.0, BoostKind.GALILEI)))
    h_t, h_r = safe_steps(boosted.E, boosted.p)
    drift = max(
        max(abs(a - b) for a, b in zip(probe_energy_momentum(field_, e, h_t, h_r).p, w.p))
        for e in events
    )
    parts = {
        "offshell_gap": (abs(gap - abs(pv)), _scaled(boosted.E)),
        "momentum_drift": (drift, EXACT_TOL + _probe_noise(boosted.E, w.p, events, h_t, h_r)),
    }
    details = {"p_dot_v": pv, "offshell_gap": gap, "boosted": _em_dict(energy_momentum(boosted))}
    inconclusive = abs(pv) <= EXACT_TOL * max(1.0, w.p.norm() * v.norm())
    return _combine("galilei_noncovariance", parts, details, inconclusive)


def check_phase_shift_covariance(w: PlaneWave, v: VecLike) -> CheckVerdict:
    """Phase-shift boost with the wave's own mass gives ``((p+mv)^2/2m, p+mv)``."""
    v = Vec3.of(v)
    boosted = phase_shift_boost(w, v, w.m)
    got = energy_momentum(boosted)
    p_exp = w.p + v * w.m
    expected = EnergyMomentum(w.rest_energy + p_exp.norm2() / (2 * w.m), p_exp)
    dist = got.distance(expected)
    onshell = schrodinger_residual(boosted, w.m, w.include_rest, w.c)
    scale = _scaled(max(abs(expected.E), p_exp.norm()))
    parts = {"against_formula": (dist, scale), "onshell": (onshell, scale)}
    return _combine("phase_shift_covariance", parts, {"boosted": _em_dict(got)})


def check_mass_dependence(w1_mass: float, w2_mass: float, v: VecLike, p: VecLike = (0.0, 0.0, 0.0)) -> CheckVerdict:
    """One phase-shift rule cannot serve two masses.

    The factor built for ``w1_mass`` is applied to a wave of mass ``w2_mass``;
    its momentum then misses the covariant value by ``|(w1 - w2) v|``.
    """
    if w1_mass == w2_mass:
        raise ValueError("check_mass_dependence needs two different masses")
    v = Vec3.of(v)
    wave = PlaneWave(w2_mass, p)
    with_wrong_rule = phase_shift_boost(wave, v, rule_mass=w1_mass)
    with_own_rule = phase_shift_boost(wave, v, rule_mass=w2_mass)
    gap = (with_wrong_rule.p - with_own_rule.p).norm()
    expected = abs(w1_mass - w2_mass) * v.norm()
    offshell = schrodinger_residual(with_wrong_rule, w2_mass)
    details = {"momentum_gap": gap, "expected_gap": expected, "offshell_residual": offshell}
    return CheckVerdict(
        "mass_dependence",
        abs(gap - expected),
        _scaled(max(wave.p.norm(), w1_mass * v.norm(), w2_mass * v.norm())),
        details,
        inconclusive=v.norm() == 0.0,
    )


def _extended_truncation_scale(w: PlaneWave, b: BoostSpec) -> tuple[float, float]:
    """Leading ``1/c^2`` terms left out of the truncated extended-boost result.

    With the exact inverse boost, ``E' = (E - p.v)/(1 - s)`` and
    ``p' = p - E' v/c^2``; expanding in ``s = v^2/2c^2`` gives these.
    """
    m, p, v, c2 = w.m, w.p, b.v, b.c**2
    s = 0.5 * v.norm2() / c2
    kinetic = w.kinetic_energy
    tau_E = abs(kinetic - p.dot(v)) * s + m * v.norm2() ** 2 / (4 * c2)
    tau_p = v.norm() * (p - v * m).norm2() / (2 * m * c2)
    return tau_E, tau_p


def extended_truncation_gap(
    w: PlaneWave, b: BoostSpec, events: Optional[Sequence[Event]] = None, drop_c2_terms: bool = False
) -> float:
    """Max-norm gap between probed exact and truncated extended-boost (E', p')."""
    events = list(events) if events is not None else probe_events()
    res = extended_boost_wave(w, b, drop_c2_terms=drop_c2_terms)
    trunc = energy_momentum(res.truncated)
    h_t, h_r = safe_steps(trunc.E, trunc.p)
    return max(probe_energy_momentum(res.field, e, h_t, h_r).distance(trunc) for e in events)


def check_extended_covariance(
    w: PlaneWave, b: BoostSpec, events: Optional[Sequence[Event]] = None, drop_c2_terms: bool = False
) -> CheckVerdict:
    """Extended boost maps ``(mc^2 + p^2/2m, p)`` to ``(mc^2 + (p-mv)^2/2m, p-mv)``.

    Part (a) compares the truncated result with the closed form. Part (b)
    probes the exactly composed field and requires its distance from the
    truncated result to stay within the ``1/c^2`` truncation budget.
    """
    events = list(events) if events is not None else probe_events()
    res = extended_boost_wave(w, b, drop_c2_terms=drop_c2_terms)
    trunc = energy_momentum(res.truncated)
    m, v = w.m, b.v
    p_exp = w.p - v * m
    expected = EnergyMomentum(m * b.c**2 + p_exp.norm2() / (2 * m), p_exp)

    h_t, h_r = safe_steps(trunc.E, trunc.p)
    probed = [probe_energy_momentum(res.field, e, h_t, h_r) for e in events]
    gap = max(pr.distance(trunc) for pr in probed)
    tau_E, tau_p = _extended_truncation_scale(w, b)
    budget = TRUNCATION_FACTOR * max(tau_E, tau_p) + _probe_noise(trunc.E, trunc.p, events, h_t, h_r)

    parts = {
        "truncated_vs_formula": (trunc.distance(expected), _scaled(expected.E)),
        "exact_vs_truncated": (gap, budget),
    }
    details = {
        "truncated": _em_dict(trunc),
        "probed_first": _em_dict(probed[0]),
        "gap": gap,
        "tau_E": tau_E,
        "tau_p": tau_p,
        "c": b.c,
    }
    return _combine("extended_covariance", parts, details)


def _chain_rule(b: BoostSpec, dt: float, grad: np.ndarray, drop_c2_terms: bool) -> tuple[float, np.ndarray]:
    """Primed derivatives from unprimed ones for the map ``unprimed = T(-v) primed``.

    Galilei:  d't = dt + v.grad,                 grad' = grad
    Extended: d't = (1 + v^2/2c^2) dt + v.grad,  grad' = grad + (v/c^2) dt
    Lorentz:  transpose of the exact inverse boost matrix.
    """
    v = b.v.as_array()
    if b.kind is BoostKind.GALILEI or (b.kind is BoostKind.EXTENDED and drop_c2_terms):
        return dt + float(v @ grad), grad
    if b.kind is BoostKind.EXTENDED:
        c2 = b.c**2
        s = 0.5 * float(v @ v) / c2
        return (1.0 + s) * dt + float(v @ grad), grad + v * dt / c2
    jac = boost_matrix(b.reversed()).m
    out = jac.T @ np.concatenate(([dt], grad))
    return float(out[0]), out[1:]


def _operator_sides(w: PlaneWave, b: BoostSpec, e: Event, drop_c2_terms: bool):
    back = boost_matrix(b.reversed(), drop_c2_terms=drop_c2_terms)
    primed = boost_event(e, b)
    sampled = back.apply(primed)
    psi = WaveField.from_wave(w)
    boosted = psi.pulled_back(back)

    E0 = energy_momentum(w)
    h_t, h_r = safe_steps(E0.E + abs(E0.p.dot(b.v)) + w.m * b.v.norm2(), E0.p + b.v * w.m)
    lhs = probe_energy_momentum(boosted, primed, h_t, h_r)
    rhs0 = probe_energy_momentum(psi, sampled, h_t, h_r)
    dt_p, grad_p = _chain_rule(b, rhs0.E, -rhs0.p.as_array(), drop_c2_terms)
    rhs = EnergyMomentum(dt_p, Vec3.of(-grad_p))
    return lhs, rhs, (h_t, h_r), [primed, sampled]


def extended_momentum_error(w: PlaneWave, b: BoostSpec, e: Event, drop_c2_terms: bool = False) -> float:
    """``|p'_probed - (p - m v)|`` after composing ``w`` with ``T(-v)``."""
    lhs, _, _, _ = _operator_sides(w, b, e, drop_c2_terms)
    return (lhs.p - (w.p - b.v * w.m)).norm()


def check_operator_transform(w: PlaneWave, b: BoostSpec, e: Event, drop_c2_terms: bool = False) -> CheckVerdict:
    """Finite-difference primed derivatives against the chain-rule combination.

    The boosted field is ``psi(T(-v) e')``, so the chain rule is exact and
    both sides agree to probe accuracy. For an extended boost with rest
    energy the probed momentum must also equal ``p - m v`` up to its
    ``|v| p^2 / 2 m c^2`` truncation.
    """
    lhs, rhs, (h_t, h_r), pts = _operator_sides(w, b, e, drop_c2_terms)
    noise = _probe_noise(lhs.E, lhs.p, pts, h_t, h_r)
    parts = {"operator": (lhs.distance(rhs), OPERATOR_TOL * max(1.0, abs(lhs.E)) + noise)}
    details = {"lhs": _em_dict(lhs), "rhs": _em_dict(rhs), "kind": b.kind.value}
    if b.kind is BoostKind.EXTENDED and w.include_rest:
        err = (lhs.p - (w.p - b.v * w.m)).norm()
        tau = b.v.norm() * w.kinetic_energy / b.c**2
        parts["momentum_shift"] = (err, TRUNCATION_FACTOR * tau + EXACT_TOL + noise)
        details["momentum_error"] = err
    name = f"operator_transform[{b.kind.value}]"
    return _combine(name, parts, details)


def check_inverse_residual(b: BoostSpec) -> CheckVerdict:
    """``T(-v) T(v) - I`` against its hand-derived closed form, entrywise relative."""
    got = inverse_residual(b).m
    ref = inverse_residual_closed_form(b).m
    denom = np.where(ref != 0.0, np.abs(ref), 1.0)
    rel = float(np.max(np.abs(got - ref) / denom))
    return CheckVerdict(
        "inverse_residual_closed_form",
        rel,
        1e-14,
        {"entry_00": float(got[0, 0]), "entry_10": float(got[1, 0])},
    )


def lorentz_reference_gap(
    w: PlaneWave, v: VecLike, c: float, events: Optional[Sequence[Event]] = None
) -> float:
    """Phase gap between the exact Lorentz-boosted wave and the extended result.

    The reference wave has ``E = sqrt(m^2 c^4 + p^2 c^2)`` and momentum ``p``;
    it is carried to the moving frame with the exact inverse boost. The
    comparison phase uses ``(mc^2 + (p-mv)^2/2m, p-mv)``. Returns the max of
    ``|phi_exact - phi_extended|`` over the probe events.
    """
    v = Vec3.of(v)
    lorentz = BoostSpec(v, c, BoostKind.LORENTZ)
    events = list(events) if events is not None else probe_events()
    m, p = w.m, w.p
    E_rel = m * c**2 * math.sqrt(1.0 + p.norm2() / (m * c) ** 2)
    k = np.concatenate(([E_rel], -p.as_array())) @ boost_matrix(lorentz.reversed()).m
    p_ext = p - v * m
    k_ext = np.concatenate(([m * c**2 + p_ext.norm2() / (2 * m)], -p_ext.as_array()))
    dk = k - k_ext
    return max(abs(float(dk @ e.as_array())) for e in events)


def order_scan(
    residual: Callable[[float], float], c_values: Iterable[float], floor: float = RESIDUAL_FLOOR
) -> OrderScanResult:
    """Evaluate ``residual(c)`` on the given ``c`` and fit the log-log slope.

    ``fit_quality`` is the coefficient of determination of the fit. If fewer
    than two samples clear ``floor`` the exponent is NaN and
    ``converged_to_zero`` is set.
    """
    cs = [float(c) for c in c_values]
    if len(cs) < 4:
        raise ValueError(f"order_scan needs at least 4 c values, got {len(cs)}")
    if any(b <= a for a, b in zip(cs, cs[1:])):
        raise ValueError("c values must be strictly increasing")
    samples = [(c, abs(float(residual(c)))) for c in cs]
    usable = [(c, r) for c, r in samples if r > floor]
    if len(usable) < 2:
        return OrderScanResult(samples, float("nan"), float("nan"), converged_to_zero=True)
    x = np.log([c for c, _ in usable])
    y = np.log([r for _, r in usable])
    slope, intercept = np.polyfit(x, y, 1)
    ss_res = float(np.sum((y - (slope * x + intercept)) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    quality = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return OrderScanResult(samples, float(slope), float(min(max(quality, 0.0), 1.0)))


def _random_unit(rng: np.random.Generator) -> np.ndarray:
    d = rng.normal(size=3)
    return d / np.linalg.norm(d)


def random_phase_shift_instances(seed: int, n: int = 100):
    """``(wave, v)`` with m in [0.1, 10], |p| <= 5, |v| <= 1."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        m = rng.uniform(0.1, 10.0)
        p = _random_unit(rng) * rng.uniform(0.0, 5.0)
        v = _random_unit(rng) * rng.uniform(0.0, 1.0)
        out.append((PlaneWave(m, p), Vec3.of(v)))
    return out


def random_extended_instances(seed: int, n: int = 100):
    """``(wave, boost)`` with m in [0.1, 10], |p| <= 5, c in [10, 1000], |v|/c <= 0.2."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        m = rng.uniform(0.1, 10.0)
        c = float(np.exp(rng.uniform(np.log(10.0), np.log(1000.0))))
        p = _random_unit(rng) * rng.uniform(0.0, 5.0)
        v = _random_unit(rng) * rng.uniform(0.0, 0.2) * c
        out.append((PlaneWave(m, p, include_rest=True, c=c), BoostSpec(v, c, BoostKind.EXTENDED)))
    return out


def _worst(name: str, verdicts: list) -> CheckVerdict:
    conclusive = [v for v in verdicts if not v.inconclusive]
    if not conclusive:
        return CheckVerdict(name, 0.0, 1.0, {"count": len(verdicts)}, inconclusive=True)
    worst = max(conclusive, key=lambda v: v.residual / v.threshold)
    details = {
        "count": len(verdicts),
        "inconclusive": len(verdicts) - len(conclusive),
        "failed": sum(not v.passed for v in conclusive),
        "worst": worst.details,
    }
    return CheckVerdict(name, worst.residual / worst.threshold, 1.0, details)


def verify_suite(
    m: float = 1.0,
    p: VecLike = (1.0, 0.0, 0.0),
    v: VecLike = (0.2, 0.0, 0.0),
    c: float = 10.0,
    seed: int = 42,
    batch: int = 100,
    drop_c2_terms: bool = False,
) -> CovarianceReport:
    """Run every check on one instance plus a seeded random batch.

    Verdicts are ordered by name.
    """
    p, v = Vec3.of(p), Vec3.of(v)
    events = probe_events(seed)
    plain = PlaneWave(m, p)
    rest = PlaneWave(m, p, include_rest=True, c=c)
    ext = BoostSpec(v, c, BoostKind.EXTENDED)
    gal = BoostSpec(v, c, BoostKind.GALILEI)
    other_mass = 2.0 * m

    verdicts = [
        check_galilei_noncovariance(plain, v, events),
        check_phase_shift_covariance(plain, v),
        check_mass_dependence(m, other_mass, v, p),
        check_extended_covariance(rest, ext, events, drop_c2_terms),
        _worst("operator_transform[galilei]",
               [check_operator_transform(plain, gal, e) for e in events]),
        _worst("operator_transform[extended]",
               [check_operator_transform(rest, ext, e, drop_c2_terms) for e in events]),
        check_inverse_residual(ext),
    ]
    if batch > 0:
        verdicts.append(_worst(
            "phase_shift_covariance[batch]",
            [check_phase_shift_covariance(w, vv) for w, vv in random_phase_shift_instances(seed, batch)],
        ))
        verdicts.append(_worst(
            "extended_covariance[batch]",
            [check_extended_covariance(w, b, events, drop_c2_terms)
             for w, b in random_extended_instances(seed, batch)],
        ))
        rng = np.random.default_rng(seed)
        verdicts.append(_worst(
            "inverse_residual_closed_form[batch]",
            [check_inverse_residual(BoostSpec(_random_unit(rng) * rng.uniform(0.0, 0.3) * c, c))
             for _ in range(batch)],
        ))
    verdicts.sort(key=lambda vd: vd.name)
    inputs = {"m": m, "p": list(p), "v": list(v), "c": c, "batch": batch,
              "sabotage": "drop-c2-terms" if drop_c2_terms else None}
    return CovarianceReport(verdicts, inputs)
