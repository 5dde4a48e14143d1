import cmath
import math

import mpmath
import numpy as np
import pytest

from monosweep.errors import (
    MaxStepsExceeded,
    NonConvergence,
    PoleInC,
    StepUnderflow,
)
from monosweep.numerics import (
    ArcSegment,
    ContourPath,
    IntegratorConfig,
    LineSegment,
    eval_2f1,
    eval_2f1_derivative,
    geometric_breakpoints,
    integrate_linear_ode,
)


class TestEval2F1:
    def test_at_zero_is_one(self):
        assert eval_2f1(0.3 + 0.1j, -0.2j, 1.4, 0.0) == 1.0 + 0.0j

    def test_log_closed_form(self):
        # 2F1(1,1;2;x) = -log(1-x)/x
        for x in (0.5, 0.3 + 0.2j, -0.7, 0.1 - 0.6j):
            expected = -cmath.log(1 - x) / x
            assert eval_2f1(1, 1, 2, x) == pytest.approx(expected, rel=1e-13)

    def test_binomial_closed_form(self):
        # 2F1(a,b;b;x) = (1-x)^(-a)
        a, x = 0.3 + 0.1j, 0.2
        expected = cmath.exp(-a * cmath.log(1 - x))
        assert eval_2f1(a, 0.7, 0.7, x) == pytest.approx(expected, rel=1e-13)

    def test_against_mpmath(self):
        rng = np.random.default_rng(3)
        mpmath.mp.dps = 30
        for _ in range(25):
            a = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
            b = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
            c = complex(rng.uniform(0.5, 2), rng.uniform(-2, 2))
            x = complex(rng.uniform(-0.6, 0.6), rng.uniform(-0.5, 0.5))
            ref = complex(mpmath.hyp2f1(a, b, c, x))
            assert eval_2f1(a, b, c, x) == pytest.approx(ref, rel=1e-12)

    def test_derivative_contiguous_relation(self):
        # (ab/c) 2F1(a+1,b+1;c+1;x) against a Richardson-extrapolated
        # finite-difference derivative.
        def stencil(a, b, c, x, h):
            return (
                eval_2f1(a, b, c, x - 2 * h)
                - 8 * eval_2f1(a, b, c, x - h)
                + 8 * eval_2f1(a, b, c, x + h)
                - eval_2f1(a, b, c, x + 2 * h)
            ) / (12 * h)

        rng = np.random.default_rng(7)
        for _ in range(10):
            a = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
            b = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
            c = complex(rng.uniform(0.8, 2), rng.uniform(-1, 1))
            x = complex(rng.uniform(-0.5, 0.5) * 0.9, rng.uniform(-0.3, 0.3))
            h = 2.5e-3
            coarse = stencil(a, b, c, x, h)
            fine = stencil(a, b, c, x, h / 2)
            richardson = (16 * fine - coarse) / 15
            exact = eval_2f1_derivative(a, b, c, x)
            assert abs(richardson - exact) / abs(exact) < 1e-10

    def test_pole_in_c(self):
        for c in (0.0, -1.0, -2.0):
            with pytest.raises(PoleInC):
                eval_2f1(0.5, 0.5, c, 0.1)

    def test_non_convergence(self):
        with pytest.raises(NonConvergence):
            eval_2f1(5.0, 5.0, 0.5, 0.99, max_terms=40)

    def test_series_region_enforced(self):
        with pytest.raises(ValueError):
            eval_2f1(1, 1, 2, 1.2)


class TestContourPath:
    def test_disconnected_rejected(self):
        with pytest.raises(ValueError):
            ContourPath((LineSegment(0, 1), LineSegment(2, 3)))

    def test_clearance_rejected(self):
        with pytest.raises(ValueError):
            ContourPath((LineSegment(-0.5, 0.5),), clearance=0.1)

    def test_circle_is_closed(self):
        path = ContourPath.circle(1.0, 0.6, clearance=0.05)
        assert path.is_closed
        assert path.min_distance_to(0.0) == pytest.approx(0.4)
        assert path.length == pytest.approx(2 * math.pi * 0.6)

    def test_arc_distance(self):
        arc = ArcSegment(0.0, 1.0, 0.0, math.pi / 2)
        assert arc.min_distance_to(0.0) == pytest.approx(1.0)
        assert arc.min_distance_to(2.0) == pytest.approx(1.0)
        # Off the swept sector: closest approach is an endpoint (here i).
        assert arc.min_distance_to(-2.0) == pytest.approx(math.sqrt(5.0))

    def test_config_validation(self):
        with pytest.raises(ValueError):
            IntegratorConfig(rel_tol=0.0)
        with pytest.raises(ValueError):
            IntegratorConfig(max_steps=0)


def _hyp_system(alpha, beta, gamma):
    def rhs(z):
        den = z * (1 - z)
        return np.array(
            [[0, 1], [alpha * beta / den, ((1 + alpha + beta) * z - gamma) / den]]
        )

    return rhs


class TestIntegrateLinearOde:
    def test_scalar_exponential(self):
        y = integrate_linear_ode(lambda t: 1j, [1.0], (0.0, math.pi))
        assert y[0] == pytest.approx(-1.0, abs=1e-9)

    def test_reverse_interval(self):
        y = integrate_linear_ode(lambda t: 1j, [1.0], (math.pi, 0.0))
        assert y[0] == pytest.approx(cmath.exp(-1j * math.pi), abs=1e-9)

    def test_trivial_monodromy(self):
        # Closed loop around neither hypergeometric singularity returns y0.
        rhs = _hyp_system(0.4j, -0.9j, 0.6 + 0.2j)
        loop = ContourPath.circle(0.5, 0.2, clearance=0.05)
        y0 = np.array([0.7 + 0.1j, -0.3 + 0.4j])
        y = integrate_linear_ode(rhs, y0, loop)
        assert np.allclose(y, y0, atol=1e-10)

    def test_decoupled_moduli_preserved(self):
        # Diagonal sweep Hamiltonian: amplitudes only pick up phases.
        def rhs(t):
            eps = 0.3 / math.cosh(t) + 0.5 * math.tanh(t)
            return np.array([[-1j * eps, 0.0], [0.0, 1j * eps]])

        y0 = np.array([0.6, 0.8], dtype=complex)
        y = integrate_linear_ode(rhs, y0, (-30.0, 30.0))
        assert np.abs(y) == pytest.approx(np.abs(y0), abs=1e-9)

    def test_norm_drift_bound(self):
        # Anti-Hermitian generator: drift <= 10 * rel_tol per unit length.
        def rhs(t):
            h = np.array([[math.cos(t), 0.3 + 0.1 * math.sin(t)],
                          [0.3 + 0.1 * math.sin(t), -math.cos(t)]])
            return -1j * h

        rel_tol = 1e-8
        length = 10.0
        cfg = IntegratorConfig(rel_tol=rel_tol, abs_tol=1e-12)
        y0 = np.array([1.0, 0.0], dtype=complex)
        y = integrate_linear_ode(rhs, y0, (0.0, length), cfg)
        drift = abs(float(np.sum(np.abs(y) ** 2)) - 1.0)
        assert drift <= 10.0 * rel_tol * length

    def test_halving_tolerance_never_hurts(self):
        def rhs(t):
            return np.array([[1j * (1.0 + 0.5 * math.sin(t))]])

        def run(rel):
            cfg = IntegratorConfig(rel_tol=rel, abs_tol=1e-14)
            return integrate_linear_ode(rhs, [1.0], (0.0, 20.0), cfg)[0]

        ref = run(1e-13)
        errors = [abs(run(rel) - ref)
                  for rel in (1e-5, 5e-6, 2.5e-6, 1.25e-6, 6.25e-7)]
        assert all(a >= b for a, b in zip(errors, errors[1:]))

    def test_step_underflow_at_singularity(self):
        rhs = _hyp_system(0.3j, -0.5j, 0.5 + 0.1j)
        path = ContourPath((LineSegment(0.5, 1.0),))
        with pytest.raises((StepUnderflow, MaxStepsExceeded)):
            integrate_linear_ode(rhs, [1.0, 0.0], path,
                                 IntegratorConfig(max_steps=100_000))

    def test_max_steps_exceeded(self):
        with pytest.raises(MaxStepsExceeded):
            integrate_linear_ode(lambda t: 50j, [1.0], (0.0, 1000.0),
                                 IntegratorConfig(max_steps=5))

    def test_scipy_cross_check(self):
        from scipy.integrate import solve_ivp

        def h(t):
            return np.array([[0.4 * math.tanh(t), 0.3], [0.3, -0.4 * math.tanh(t)]])

        y0 = np.array([1.0, 0.0], dtype=complex)
        ours = integrate_linear_ode(lambda t: -1j * h(t), y0, (-20.0, 20.0))
        ref = solve_ivp(
            lambda t, y: -1j * (h(t) @ y), (-20.0, 20.0), y0,
            method="DOP853", rtol=1e-11, atol=1e-13,
        ).y[:, -1]
        assert np.allclose(ours, ref, atol=1e-8)


def test_geometric_breakpoints():
    pts = geometric_breakpoints(184.0)
    assert pts[0] == -184.0 and pts[-1] == 184.0 and 0.0 in pts
    assert pts == sorted(pts)
    pts_small = geometric_breakpoints(0.5)
    assert pts_small == [-0.5, 0.0, 0.5]
