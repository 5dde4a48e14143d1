import math

import numpy as np
import pytest

from monosweep.errors import NormDriftExceeded
from monosweep.models import (
    MultiLevelParams,
    ProfileShape,
    SweepClass,
    SweepModel,
    SweepProfile,
    TwoLevelParams,
)
from monosweep.monodromy import transition_probability, transition_probability_scaled
from monosweep.numerics import IntegratorConfig
from monosweep.propagator import (
    PropagationConfig,
    class_invariance_check,
    propagate,
    propagate_multilevel_states,
)

PI = math.pi


class TestConfig:
    def test_factor_floor(self):
        with pytest.raises(ValueError):
            PropagationConfig(t_max_factor=5.0)

    def test_window_formula(self):
        cfg = PropagationConfig(t_max_factor=10.0, tol=1e-8)
        assert cfg.u_max() == pytest.approx(10.0 * math.log(1e8))
        loose = PropagationConfig(t_max_factor=12.0, tol=0.9)
        assert loose.u_max() == pytest.approx(12.0)


class TestPropagate:
    def test_uncoupled_transition_is_certain(self):
        res = propagate(TwoLevelParams(E0=0.4, E1=0.6, V0=0.0))
        assert res.probability == pytest.approx(1.0, abs=1e-8)
        assert res.trusted

    def test_full_pulse_extinguishes(self):
        p = TwoLevelParams.from_scaled(PI, 0.0, 0.8)
        res = propagate(p)
        assert res.probability == pytest.approx(0.0, abs=1e-8)

    def test_matches_closed_form(self):
        p = TwoLevelParams.from_scaled(1.0, 1.0, 1.0)
        res = propagate(p)
        assert res.probability == pytest.approx(transition_probability(p), abs=1e-6)
        assert res.norm_drift < 1e-8
        assert res.uncertainty < 1e-6

    def test_norm_conservation(self):
        res = propagate(TwoLevelParams.from_scaled(2.0, 2.0, 2.0))
        assert res.norm_drift < 1e-8
        assert abs(float(np.sum(np.abs(res.final_state) ** 2)) - 1.0) < 1e-8

    def test_window_doubling_is_converged(self):
        # With a loose tol the window is short enough that the preparation
        # error bound 10*exp(-t_max/T) is a measurable target.
        p = TwoLevelParams.from_scaled(0.8, 1.0, 1.2)
        tol = math.exp(-1.5)  # u_max = 15
        base = PropagationConfig(t_max_factor=10.0, tol=tol)
        doubled = PropagationConfig(t_max_factor=20.0, tol=tol)
        p1 = propagate(p, base).probability
        p2 = propagate(p, doubled).probability
        assert abs(p2 - p1) < 10.0 * math.exp(-base.u_max())

    def test_untrusted_raises(self):
        sloppy = PropagationConfig(
            integrator=IntegratorConfig(rel_tol=1e-5, abs_tol=1e-7)
        )
        p = TwoLevelParams.from_scaled(2.0, 2.0, 2.0)
        with pytest.raises(NormDriftExceeded):
            propagate(p, sloppy)
        res = propagate(p, sloppy, require_trusted=False)
        assert not res.trusted

    def test_time_reversal_symmetry(self):
        # Without the pulse, reversing the sweep (E1 -> -E1) preserves P.
        fwd = propagate(TwoLevelParams(E0=0.0, E1=0.7, V0=0.4)).probability
        back = propagate(TwoLevelParams(E0=0.0, E1=-0.7, V0=0.4)).probability
        assert fwd == pytest.approx(back, abs=1e-8)

    def test_multilevel_two_level_equivalence(self):
        # The bordered N=2 model carries the ramp on one diagonal entry, so
        # it matches the symmetric two-level model at half the amplitude.
        ml = MultiLevelParams(E1=0.8, T=1.0, couplings=(0.5,))
        res_ml = propagate(ml)
        res_tl = propagate(TwoLevelParams(E0=0.0, E1=0.4, V0=0.5))
        assert res_ml.probability == pytest.approx(res_tl.probability, abs=1e-8)
        assert res_ml.probabilities is not None
        assert res_ml.probabilities[1] == pytest.approx(res_tl.probability, abs=1e-8)

    def test_multilevel_overlaps_sum_to_one(self):
        p = MultiLevelParams(E1=0.5, T=1.0, couplings=(0.3, 0.6, 0.2))
        res = propagate(p)
        assert float(np.sum(res.probabilities)) == pytest.approx(1.0, abs=1e-8)
        assert 0.0 <= res.probability <= 1.0

    def test_class2_profile_runs(self):
        model = SweepModel(
            SweepProfile(SweepClass.CLASS2, ProfileShape.SINH),
            TwoLevelParams(E0=0.3, E1=0.5, V0=0.7),
        )
        res = propagate(model)
        assert 0.0 <= res.probability <= 1.0
        assert res.trusted


class TestMultilevelStates:
    def test_states_are_normalized(self):
        p = MultiLevelParams(E1=0.5, T=1.0, couplings=(0.4, 0.7))
        times = np.linspace(-2.0, 2.0, 9)
        states = propagate_multilevel_states(p, times)
        norms = np.sum(np.abs(states) ** 2, axis=1)
        assert np.allclose(norms, 1.0, atol=1e-8)

    def test_final_state_matches_propagate(self):
        p = MultiLevelParams(E1=0.5, T=1.0, couplings=(0.4, 0.7))
        cfg = PropagationConfig()
        u_max = cfg.u_max()
        states = propagate_multilevel_states(p, [u_max * p.T], cfg)
        res = propagate(p, cfg)
        overlap = abs(np.vdot(states[-1], res.final_state))
        assert overlap == pytest.approx(1.0, abs=1e-8)


class TestClassInvariance:
    COEFFS = (1 / PI, 1 / PI, 1 / PI)

    def test_single_profile_trivially_passes(self):
        report = class_invariance_check(
            self.COEFFS, [SweepProfile(SweepClass.CLASS1, ProfileShape.SINH)]
        )
        assert report.passed and report.max_pairwise_diff == 0.0

    def test_sinh_and_linear_agree(self):
        report = class_invariance_check(
            self.COEFFS,
            [
                SweepProfile(SweepClass.CLASS1, ProfileShape.SINH),
                SweepProfile(SweepClass.CLASS1, ProfileShape.LINEAR),
            ],
        )
        assert report.passed
        assert report.max_pairwise_diff < report.tolerance

    def test_linear_and_cubic_agree(self):
        report = class_invariance_check(
            self.COEFFS,
            [
                SweepProfile(SweepClass.CLASS1, ProfileShape.LINEAR),
                SweepProfile(SweepClass.CLASS1, ProfileShape.CUBIC),
            ],
        )
        assert report.passed

    def test_matches_closed_form(self):
        report = class_invariance_check(
            self.COEFFS, [SweepProfile(SweepClass.CLASS1, s) for s in ProfileShape]
        )
        expected = transition_probability_scaled(1.0, 1.0, 1.0)
        for prob in report.probabilities:
            assert prob == pytest.approx(expected, abs=1e-6)
