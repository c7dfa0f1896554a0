import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boostcov.spacetime import BoostSpec, Event, Vec3, boost_matrix
from boostcov.states import (
    EnergyMomentum,
    LinearPhaseWave,
    PhaseFactor,
    PlaneWave,
    StepTooLargeError,
    WaveField,
    energy_momentum,
    extended_boost_wave,
    galilei_boost_wave,
    phase_at,
    phase_shift_boost,
    probe_energy_momentum,
    safe_steps,
    schrodinger_residual,
)

masses = st.floats(0.1, 10.0)
comp5 = st.floats(-5.0 / math.sqrt(3), 5.0 / math.sqrt(3))
comp1 = st.floats(-1.0 / math.sqrt(3), 1.0 / math.sqrt(3))
momenta = st.tuples(comp5, comp5, comp5)
velocities = st.tuples(comp1, comp1, comp1)


def assert_em(got: EnergyMomentum, E, p, tol=1e-12):
    assert got.E == pytest.approx(E, abs=tol)
    np.testing.assert_allclose(list(got.p), list(Vec3.of(p)), atol=tol, rtol=0)


class TestPlaneWave:
    def test_rejects_tiny_mass(self):
        with pytest.raises(ValueError):
            PlaneWave(0.0)
        with pytest.raises(ValueError):
            PlaneWave(1e-12)

    def test_rest_needs_c(self):
        with pytest.raises(ValueError):
            PlaneWave(1.0, include_rest=True)

    def test_field_has_unit_modulus(self):
        f = WaveField.from_wave(PlaneWave(2.0, (0.3, -1, 2), True, 10.0))
        for e in [Event(0.1, (1, 2, 3)), Event(5.0, (-3, 0, 0))]:
            assert abs(f(e)) == pytest.approx(1.0, abs=1e-15)


class TestPhaseAt:
    def test_no_rest_example(self):
        # 0.5 * 2 - 1
        assert phase_at(PlaneWave(1, (1, 0, 0)), Event(2.0, (1, 0, 0))) == 0.0

    def test_rest_only(self):
        assert phase_at(PlaneWave(1, (0, 0, 0), True, 10.0), Event(1.0, (4, 5, 6))) == 100.0

    def test_origin(self):
        for w in [PlaneWave(3, (1, 2, 3)), LinearPhaseWave(7.0, (1, 1, 1))]:
            assert phase_at(w, Event(0.0)) == 0.0


class TestEnergyMomentum:
    def test_dispersion(self):
        assert_em(energy_momentum(PlaneWave(1, (1, 0, 0))), 0.5, (1, 0, 0))

    def test_rest_only(self):
        assert_em(energy_momentum(PlaneWave(2, (0, 0, 0), True, 10.0)), 200.0, (0, 0, 0))

    def test_linear_identity(self):
        assert_em(energy_momentum(LinearPhaseWave(0.8, (1, 0, 0))), 0.8, (1, 0, 0))


class TestSchrodingerResidual:
    def test_galilei_output_example(self):
        assert schrodinger_residual(LinearPhaseWave(0.8, (1, 0, 0)), 1.0) == pytest.approx(0.3, abs=1e-15)

    def test_zero_wave(self):
        assert schrodinger_residual(LinearPhaseWave(0.0), 1.0) == 0.0

    @given(m=masses, p=momenta, rest=st.booleans(), c=st.floats(1.0, 1e3))
    def test_plane_waves_are_on_shell(self, m, p, rest, c):
        w = PlaneWave(m, p, rest, c)
        assert schrodinger_residual(w, m, rest, c) == 0.0


class TestGalileiBoostWave:
    def test_example(self):
        out = galilei_boost_wave(PlaneWave(1, (1, 0, 0)), (0.3, 0, 0))
        assert_em(energy_momentum(out), 0.8, (1, 0, 0))

    def test_zero_velocity(self):
        w = PlaneWave(2, (1, -1, 0))
        assert galilei_boost_wave(w, (0, 0, 0)) == w.as_linear()

    def test_particle_at_rest(self):
        out = galilei_boost_wave(PlaneWave(2), (0.4, 0.1, 0))
        assert_em(energy_momentum(out), 0.0, (0, 0, 0))

    @given(m=masses, p=momenta, v=velocities)
    def test_momentum_never_changes(self, m, p, v):
        w = PlaneWave(m, p)
        assert galilei_boost_wave(w, v).p == w.p

    def test_matches_composition_with_boost(self):
        """phi(t, r - v t) read off by the probe, independent of the closed form."""
        w, v = PlaneWave(1.5, (0.4, -0.2, 0.7)), (0.3, 0.2, -0.1)
        f = WaveField.from_wave(w).pulled_back(boost_matrix(BoostSpec(v, 1.0, "galilei")))
        out = energy_momentum(galilei_boost_wave(w, v))
        probed = probe_energy_momentum(f, Event(0.3, (0.1, 0.2, 0.3)), *safe_steps(out.E, out.p))
        assert probed.distance(out) < 1e-13


class TestPhaseShiftBoost:
    def test_example(self):
        out = phase_shift_boost(PlaneWave(1, (1, 0, 0)), (0.2, 0, 0), 1.0)
        assert_em(energy_momentum(out), 0.72, (1.2, 0, 0))
        assert schrodinger_residual(out, 1.0) < 1e-15

    def test_zero_velocity(self):
        w = PlaneWave(1, (1, 2, 3))
        assert phase_shift_boost(w, (0, 0, 0), 1.0) == w.as_linear()

    def test_wrong_mass_rule(self):
        w = PlaneWave(2, (0, 0, 0))
        wrong = phase_shift_boost(w, (0.2, 0, 0), rule_mass=1.0)
        right = phase_shift_boost(w, (0.2, 0, 0), rule_mass=2.0)
        assert wrong.p.x == pytest.approx(0.2, abs=1e-15)
        assert right.p.x == pytest.approx(0.4, abs=1e-15)
        assert schrodinger_residual(wrong, 2.0) > 0
        assert schrodinger_residual(right, 2.0) < 1e-15

    def test_phase_factor_adds_coefficients(self):
        out = PhaseFactor(0.5, Vec3(1, 2, 3)).apply(LinearPhaseWave(1.0, (1, 1, 1)))
        assert out == LinearPhaseWave(1.5, (2, 3, 4))

    @given(m=masses, p=momenta, v=velocities)
    @settings(max_examples=200)
    def test_own_mass_lands_on_shell(self, m, p, v):
        out = phase_shift_boost(PlaneWave(m, p), v, m)
        assert schrodinger_residual(out, m) < 1e-12

    @given(m=masses, rule=masses, p=momenta, v=velocities)
    @settings(max_examples=200)
    def test_off_shell_gap_matches_brute_force(self, m, rule, p, v):
        # brute force: build the wave's own and mismatched results from scratch
        p, v = np.array(p), np.array(v)
        E = p @ p / (2 * m) + p @ v + 0.5 * rule * v @ v
        p_new = p + rule * v
        brute = abs(E - p_new @ p_new / (2 * m))
        out = phase_shift_boost(PlaneWave(m, p), v, rule)
        assert schrodinger_residual(out, m) == pytest.approx(brute, abs=1e-12 * max(1, abs(E)))
        # closed form of the same gap
        analytic = abs((1 - rule / m) * (p @ v + 0.5 * rule * v @ v))
        assert brute == pytest.approx(analytic, abs=1e-11 * max(1, abs(E)))


class TestExtendedBoostWave:
    def test_example(self):
        out = extended_boost_wave(PlaneWave(1, (1, 0, 0), True, 10.0), BoostSpec((0.2, 0, 0), 10.0))
        assert_em(energy_momentum(out.truncated), 100.32, (0.8, 0, 0))

    def test_zero_velocity(self):
        w = PlaneWave(1.5, (1, 2, 0), True, 10.0)
        out = extended_boost_wave(w, BoostSpec((0, 0, 0), 10.0))
        assert_em(energy_momentum(out.truncated), w.E, w.p)

    def test_comoving(self):
        m, v = 2.0, Vec3(0.3, -0.1, 0.2)
        out = extended_boost_wave(PlaneWave(m, v * m, True, 10.0), BoostSpec(v, 10.0))
        assert_em(energy_momentum(out.truncated), m * 100.0, (0, 0, 0))

    def test_requires_rest_energy(self):
        with pytest.raises(ValueError):
            extended_boost_wave(PlaneWave(1, (1, 0, 0)), BoostSpec((0.2, 0, 0), 10.0))

    def test_requires_extended_kind(self):
        with pytest.raises(ValueError):
            extended_boost_wave(PlaneWave(1, (1, 0, 0), True, 10.0), BoostSpec((0.2, 0, 0), 10.0, "lorentz"))

    def test_untruncated_field_matches_block_inverse(self):
        """Exact inverse by block elimination: E' = (E - p.v)/(1 - s), p' = p - E' v/c^2."""
        m, p, v, c = 1.3, np.array([0.5, -0.2, 0.1]), np.array([0.4, 0.3, 0.0]), 5.0
        s = 0.5 * v @ v / c**2
        E = m * c**2 + p @ p / (2 * m)
        E_new = (E - p @ v) / (1 - s)
        p_new = p - E_new * v / c**2
        out = extended_boost_wave(PlaneWave(m, p, True, c), BoostSpec(v, c))
        h = safe_steps(E_new, p_new)
        for e in [Event(0.0), Event(0.4, (0.3, -0.2, 0.9))]:
            probed = probe_energy_momentum(out.field, e, *h)
            assert probed.E == pytest.approx(E_new, rel=1e-12)
            np.testing.assert_allclose(list(probed.p), p_new, atol=1e-11)


class TestProbe:
    def test_plane_wave(self):
        w = PlaneWave(1, (1, 0, 0))
        got = probe_energy_momentum(WaveField.from_wave(w), Event(0.0), 1e-4, 1e-4)
        assert_em(got, 0.5, (1, 0, 0), tol=1e-7)

    def test_constant_field(self):
        got = probe_energy_momentum(WaveField(lambda t, r: 0.3), Event(1.0, (1, 1, 1)), 0.1, 0.1)
        assert_em(got, 0.0, (0, 0, 0), tol=0)

    def test_rest_energy_needs_small_step(self):
        f = WaveField.from_wave(PlaneWave(1, (1, 0, 0), True, 10.0))
        with pytest.raises(StepTooLargeError):
            probe_energy_momentum(f, Event(0.0), math.pi / 200, 1e-4)
        got = probe_energy_momentum(f, Event(0.0), math.pi / 1000, 1e-4)
        assert_em(got, 100.5, (1, 0, 0), tol=1e-5)

    def test_rejects_nonpositive_steps(self):
        with pytest.raises(ValueError):
            probe_energy_momentum(WaveField(lambda t, r: 0.0), Event(0.0), 0.0, 0.1)

    def test_vanishing_field_guarded(self):
        class Dead(WaveField):
            def __call__(self, e):
                return 0j

        with pytest.raises(ValueError):
            probe_energy_momentum(Dead(lambda t, r: 0.0), Event(0.0), 0.1, 0.1)

    def test_second_order_convergence(self):
        # phi = E t - p.r + k (t^3 + x^3): central differences err by k h^2 exactly
        E, p, k = 0.7, np.array([0.4, -0.3, 0.2]), 0.9
        f = WaveField(lambda t, r: E * t - p @ r + k * (t**3 + r[0] ** 3))
        e = Event(0.5, (0.6, 0.0, 0.0))
        exact = EnergyMomentum(E + 3 * k * 0.25, Vec3.of(p - np.array([3 * k * 0.36, 0, 0])))
        errors = [probe_energy_momentum(f, e, h, h).distance(exact) for h in (0.02, 0.01, 0.005)]
        assert errors[0] == pytest.approx(k * 0.02**2, rel=1e-6)
        ratios = [a / b for a, b in zip(errors, errors[1:])]
        for ratio in ratios:
            assert 3.5 <= ratio <= 4.5
