import math

import numpy as np
import pytest

from boostcov.covariance import (
    CheckVerdict,
    CovarianceReport,
    check_extended_covariance,
    check_galilei_noncovariance,
    check_inverse_residual,
    check_mass_dependence,
    check_operator_transform,
    check_phase_shift_covariance,
    extended_momentum_error,
    extended_truncation_gap,
    lorentz_reference_gap,
    order_scan,
    probe_events,
    random_extended_instances,
    random_phase_shift_instances,
    verify_suite,
)
from boostcov.spacetime import BoostSpec, Event, Vec3
from boostcov.states import PlaneWave

C_SCAN = [10.0, 20.0, 40.0, 80.0]


def rest_wave(m, p, c):
    return PlaneWave(m, p, include_rest=True, c=c)


class TestVerdictTypes:
    def test_passed_tracks_threshold(self):
        assert CheckVerdict("x", 1.0, 1.0).passed
        assert not CheckVerdict("x", 1.0 + 1e-9, 1.0).passed
        assert not CheckVerdict("x", 0.0, 1.0, inconclusive=True).passed

    def test_overall_ignores_inconclusive(self):
        report = CovarianceReport([CheckVerdict("a", 0, 1), CheckVerdict("b", 0, 1, inconclusive=True)])
        assert report.overall
        report = CovarianceReport([CheckVerdict("a", 2, 1)])
        assert not report.overall and report.failed()[0].name == "a"

    def test_probe_events_deterministic(self):
        a, b = probe_events(3), probe_events(3)
        assert a == b and len(a) == 17
        assert a[:9] == [Event(t, (x, 0, 0)) for t in (0, 0.5, 1) for x in (0, 0.5, 1)]


class TestGalileiNoncovariance:
    def test_example(self):
        vd = check_galilei_noncovariance(PlaneWave(1, (1, 0, 0)), (0.3, 0, 0))
        assert vd.passed
        assert vd.details["offshell_gap"] == pytest.approx(0.3, abs=1e-12)

    @pytest.mark.parametrize("v", [(0, 0, 0), (0, 0.4, 0)])
    def test_degenerate_is_inconclusive(self, v):
        vd = check_galilei_noncovariance(PlaneWave(1, (1, 0, 0)), v)
        assert vd.inconclusive and not vd.passed

    def test_gap_is_exactly_p_dot_v(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            p, v = rng.normal(size=3), rng.normal(size=3) * 0.3
            vd = check_galilei_noncovariance(PlaneWave(rng.uniform(0.1, 10), p), v)
            assert vd.details["offshell_gap"] == pytest.approx(abs(p @ v), abs=1e-12)
            assert vd.passed


class TestPhaseShiftCovariance:
    def test_example(self):
        vd = check_phase_shift_covariance(PlaneWave(1, (1, 0, 0)), (0.2, 0, 0))
        assert vd.passed and vd.details["boosted"]["E"] == pytest.approx(0.72, abs=1e-12)

    def test_zero_velocity(self):
        assert check_phase_shift_covariance(PlaneWave(1, (1, 0, 0)), (0, 0, 0)).passed

    def test_random_batch(self):
        instances = random_phase_shift_instances(seed=1, n=100)
        assert all(check_phase_shift_covariance(w, v).passed for w, v in instances)


class TestMassDependence:
    def test_example(self):
        vd = check_mass_dependence(1.0, 2.0, (0.2, 0, 0))
        assert vd.passed and vd.details["momentum_gap"] == pytest.approx(0.2, abs=1e-12)
        assert vd.details["offshell_residual"] > 0

    def test_tiny_mass_gap(self):
        vd = check_mass_dependence(1.0, 1.000001, (1, 0, 0))
        assert vd.passed and vd.details["momentum_gap"] == pytest.approx(1e-6, abs=1e-12)

    def test_zero_velocity_inconclusive(self):
        vd = check_mass_dependence(1.0, 2.0, (0, 0, 0))
        assert vd.inconclusive and vd.details["momentum_gap"] == 0.0

    def test_equal_masses_rejected(self):
        with pytest.raises(ValueError):
            check_mass_dependence(1.0, 1.0, (0.2, 0, 0))


class TestExtendedCovariance:
    def test_example(self):
        vd = check_extended_covariance(rest_wave(1, (1, 0, 0), 10.0), BoostSpec((0.2, 0, 0), 10.0))
        assert vd.passed
        assert vd.details["truncated"]["E"] == pytest.approx(100.32, abs=1e-12)
        assert vd.details["truncated"]["p"] == pytest.approx([0.8, 0, 0], abs=1e-12)

    def test_zero_velocity_exact(self):
        w = rest_wave(1, (1, 0, 0), 10.0)
        vd = check_extended_covariance(w, BoostSpec((0, 0, 0), 10.0))
        assert vd.passed and vd.details["gap"] < 1e-10

    def test_comoving(self):
        v = Vec3(0.3, 0.2, 0)
        vd = check_extended_covariance(rest_wave(2.0, v * 2.0, 10.0), BoostSpec(v, 10.0))
        assert vd.passed
        assert vd.details["truncated"]["p"] == pytest.approx([0, 0, 0], abs=1e-12)

    def test_missing_rest_energy(self):
        with pytest.raises(ValueError):
            check_extended_covariance(PlaneWave(1, (1, 0, 0)), BoostSpec((0.2, 0, 0), 10.0))

    def test_random_batch(self):
        instances = random_extended_instances(seed=2, n=100)
        events = probe_events(2)
        failed = [(w, b) for w, b in instances if not check_extended_covariance(w, b, events).passed]
        assert not failed

    def test_sabotage_breaks_it(self):
        vd = check_extended_covariance(
            rest_wave(1, (1, 0, 0), 10.0), BoostSpec((0.2, 0, 0), 10.0), drop_c2_terms=True
        )
        assert not vd.passed

    def test_gap_order(self):
        scan = order_scan(
            lambda c: extended_truncation_gap(rest_wave(1, (1, 0, 0), c), BoostSpec((0.2, 0, 0), c)), C_SCAN
        )
        assert scan.fitted_exponent <= -1.9 and scan.fit_quality >= 0.999


class TestOperatorTransform:
    @pytest.mark.parametrize("e", probe_events(0))
    def test_galilei(self, e):
        vd = check_operator_transform(PlaneWave(1, (1, 0.5, 0)), BoostSpec((0.3, 0.1, 0), 1.0, "galilei"), e)
        assert vd.passed
        lhs, rhs = vd.details["lhs"], vd.details["rhs"]
        assert abs(lhs["E"] - rhs["E"]) < 1e-8
        assert np.max(np.abs(np.subtract(lhs["p"], rhs["p"]))) < 1e-8

    def test_galilei_reads_shift_by_v_dot_grad(self):
        # d't phi = dt phi + v.grad phi  ->  E' = E - v.p ; p' = p
        w, v = PlaneWave(1, (1, 0, 0)), (0.3, 0, 0)
        vd = check_operator_transform(w, BoostSpec(v, 1.0, "galilei"), Event(0.5, (0.5, 0, 0)))
        assert vd.details["lhs"]["E"] == pytest.approx(0.5 - 0.3, abs=1e-12)
        assert vd.details["lhs"]["p"] == pytest.approx([1, 0, 0], abs=1e-12)

    def test_zero_velocity(self):
        vd = check_operator_transform(PlaneWave(1, (1, 0, 0)), BoostSpec((0, 0, 0), 1.0, "galilei"), Event(0.2))
        assert vd.passed and vd.details["lhs"] == vd.details["rhs"]

    def test_extended(self):
        w, b = rest_wave(1, (1, 0, 0), 10.0), BoostSpec((0.2, 0, 0), 10.0)
        vd = check_operator_transform(w, b, Event(0.5, (0.5, 0, 0)))
        assert vd.passed
        # p - m v plus the |v| p^2 / 2 m c^2 tail
        assert vd.details["momentum_error"] == pytest.approx(0.2 * 0.5 / 100, rel=1e-6)

    def test_lorentz(self):
        vd = check_operator_transform(PlaneWave(1, (1, 0, 0), True, 3.0),
                                      BoostSpec((0.5, 0.5, 0), 3.0, "lorentz"), Event(0.3, (0.1, 0, 0)))
        assert vd.passed

    def test_extended_momentum_order(self):
        e = Event(0.5, (0.5, 0, 0))
        scan = order_scan(
            lambda c: extended_momentum_error(rest_wave(1, (1, 0, 0), c), BoostSpec((0.2, 0, 0), c), e), C_SCAN
        )
        assert scan.fitted_exponent <= -1.9

    def test_sabotage(self):
        vd = check_operator_transform(rest_wave(1, (1, 0, 0), 10.0), BoostSpec((0.2, 0, 0), 10.0),
                                      Event(0.5, (0.5, 0, 0)), drop_c2_terms=True)
        assert not vd.passed


class TestLorentzGap:
    def test_trivial(self):
        assert lorentz_reference_gap(rest_wave(1, (0, 0, 0), 10.0), (0, 0, 0), 10.0) == 0.0

    def test_decreases_fourfold(self):
        gaps = [lorentz_reference_gap(rest_wave(1, (1, 0, 0), c), (0.1, 0, 0), c) for c in C_SCAN]
        for a, b in zip(gaps, gaps[1:]):
            assert 3.8 < a / b < 4.2

    def test_rest_particle_exponent(self):
        # p = 0: exact (E', p') = (gamma m c^2, -gamma m v) against (m c^2 + m v^2/2, -m v)
        m, v = 1.0, np.array([0.1, 0.0, 0.0])

        def oracle(c):
            g = 1 / math.sqrt(1 - v @ v / c**2)
            dE = m * c**2 * (g - 1) - 0.5 * m * v @ v
            dk = (g - 1) * m * v
            return max(abs(dE * e.t + dk @ e.r.as_array()) for e in probe_events())

        scan = order_scan(lambda c: lorentz_reference_gap(rest_wave(m, (0, 0, 0), c), v, c), C_SCAN)
        assert scan.fitted_exponent <= -1.9
        for c, gap in scan.samples:
            assert gap == pytest.approx(oracle(c), rel=1e-6)

    def test_superluminal(self):
        with pytest.raises(ValueError):
            lorentz_reference_gap(rest_wave(1, (0, 0, 0), 1.0), (1.0, 0, 0), 1.0)


class TestOrderScan:
    def test_synthetic_power_law(self):
        scan = order_scan(lambda c: 1 / c**2, C_SCAN)
        assert scan.fitted_exponent == pytest.approx(-2.0, abs=1e-6)
        assert scan.fit_quality == pytest.approx(1.0, abs=1e-12)

    def test_machine_zero(self):
        scan = order_scan(lambda c: 0.0, C_SCAN)
        assert scan.converged_to_zero and math.isnan(scan.fitted_exponent)

    def test_needs_four_values(self):
        with pytest.raises(ValueError):
            order_scan(lambda c: 1 / c, [1, 2, 3])

    def test_needs_increasing(self):
        with pytest.raises(ValueError):
            order_scan(lambda c: 1 / c, [1, 2, 2, 3])

    def test_noisy_fit_quality_drops(self):
        scan = order_scan(lambda c: c**-2 * (3.0 if c == 20.0 else 1.0), C_SCAN)
        assert scan.fit_quality < 0.999


class TestInverseResidualCheck:
    def test_passes(self):
        assert check_inverse_residual(BoostSpec((0.3, -0.1, 0.2), 2.0)).passed


class TestSuite:
    def test_default_passes(self):
        report = verify_suite(batch=20)
        assert report.overall, [v.name for v in report.failed()]
        assert [v.name for v in report.verdicts] == sorted(v.name for v in report.verdicts)

    def test_sabotage_fails_momentum_checks(self):
        report = verify_suite(batch=0, drop_c2_terms=True)
        failed = {v.name for v in report.failed()}
        assert failed == {"extended_covariance", "operator_transform[extended]"}

    def test_deterministic(self):
        a = [v.as_dict() for v in verify_suite(batch=10, seed=7).verdicts]
        b = [v.as_dict() for v in verify_suite(batch=10, seed=7).verdicts]
        assert a == b
