"""Pure-numpy integration kernels.

This is the fallback compute lane used when the compiled extension
(``monosweep._kernels``) is not available.  Both lanes implement the same
embedded Dormand-Prince 5(4) step with the same controller constants, so they
are interchangeable up to floating-point roundoff.

System encodings shared with the compiled lane:

* sweep family: ``FAMILY_CLASS1`` (coupling ~ 1/sqrt(1+y^2)) or
  ``FAMILY_CLASS2`` (coupling ~ 1/(1+y^2)),
* sweep shape: ``SHAPE_SINH``, ``SHAPE_LINEAR``, ``SHAPE_CUBIC`` for
  y(u) = sinh(u), u, u + u^3 with u = t/T,
* contour segments: ``SEG_LINE`` (start/end points) and ``SEG_ARC``
  (center, radius, start/end angle), both parametrized by arc length.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import MaxStepsExceeded, StepUnderflow

FAMILY_CLASS1 = 1
FAMILY_CLASS2 = 2

SHAPE_SINH = 0
SHAPE_LINEAR = 1
SHAPE_CUBIC = 2

SEG_LINE = 0
SEG_ARC = 1

# Dormand-Prince 5(4) tableau.
_C2, _C3, _C4, _C5 = 1 / 5, 3 / 10, 4 / 5, 8 / 9
_A21 = 1 / 5
_A31, _A32 = 3 / 40, 9 / 40
_A41, _A42, _A43 = 44 / 45, -56 / 15, 32 / 9
_A51, _A52, _A53, _A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
_A61, _A62, _A63, _A64, _A65 = (
    9017 / 3168,
    -355 / 33,
    46732 / 5247,
    49 / 176,
    -5103 / 18656,
)
_B1, _B3, _B4, _B5, _B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
_E1, _E3, _E4, _E5, _E6, _E7 = (
    71 / 57600,
    -71 / 16695,
    71 / 1920,
    -17253 / 339200,
    22 / 525,
    -1 / 40,
)

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0
_EPS16 = 16.0 * np.finfo(float).eps


def _sech(x):
    # 1/cosh without overflow for large |x|.
    ax = abs(x)
    e = math.exp(-ax)
    return 2.0 * e / (1.0 + e * e)


def _initial_step(f, s0, y0, f0, direction, span, rtol, atol):
    sc = atol + rtol * np.abs(y0)
    d0 = math.sqrt(float(np.mean(np.abs(y0 / sc) ** 2)))
    d1 = math.sqrt(float(np.mean(np.abs(f0 / sc) ** 2)))
    if d0 < 1e-5 or d1 < 1e-5:
        # Nearly stationary start: scale the probe step with the span so that
        # windows many decades wide do not begin at an unreachable step size.
        h0 = 1e-6 * max(1.0, 1e-3 * span)
    else:
        h0 = 0.01 * d0 / d1
    h0 = min(h0, span)
    y1 = y0 + direction * h0 * f0
    f1 = f(s0 + direction * h0, y1)
    d2 = math.sqrt(float(np.mean(np.abs((f1 - f0) / sc) ** 2))) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6 * max(1.0, 1e-3 * span), h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** 0.2
    return min(100.0 * h0, h1, span)


def integrate_callable(f, s0, s1, y0, rtol, atol, h0, max_steps, track_norm=False):
    """Adaptive DP5(4) for dy/ds = f(s, y) with complex y.

    Returns ``(y, steps, norm_dev)`` at s = s1.  ``norm_dev`` is the maximal
    deviation of sum |y_i|^2 from its initial value over accepted steps (0.0
    unless ``track_norm``).
    """
    y = np.array(y0, dtype=complex)
    span = abs(s1 - s0)
    if span == 0.0:
        return y, 0, 0.0
    direction = 1.0 if s1 >= s0 else -1.0
    s = 0.0  # arc position along the span; actual parameter is s0 + direction*s

    k1 = f(s0, y)
    if h0 > 0.0:
        h = min(h0, span)
    else:
        h = _initial_step(f, s0, y, k1, direction, span, rtol, atol)

    norm0 = float(np.sum(np.abs(y) ** 2))
    norm_dev = 0.0
    steps = 0

    while s < span:
        if steps >= max_steps:
            raise MaxStepsExceeded(f"no convergence within {max_steps} steps")
        # Underflow means the step can no longer advance the arc position.
        if h < max(_EPS16 * s, 5e-292):
            raise StepUnderflow(f"step size underflow (h={h:.3e} at s={s:.3e})")
        h = min(h, span - s)
        steps += 1
        hd = direction * h
        sa = s0 + direction * s

        k2 = f(sa + _C2 * hd, y + hd * (_A21 * k1))
        k3 = f(sa + _C3 * hd, y + hd * (_A31 * k1 + _A32 * k2))
        k4 = f(sa + _C4 * hd, y + hd * (_A41 * k1 + _A42 * k2 + _A43 * k3))
        k5 = f(
            sa + _C5 * hd,
            y + hd * (_A51 * k1 + _A52 * k2 + _A53 * k3 + _A54 * k4),
        )
        k6 = f(
            sa + hd,
            y + hd * (_A61 * k1 + _A62 * k2 + _A63 * k3 + _A64 * k4 + _A65 * k5),
        )
        y5 = y + hd * (_B1 * k1 + _B3 * k3 + _B4 * k4 + _B5 * k5 + _B6 * k6)
        k7 = f(sa + hd, y5)

        err_vec = hd * (
            _E1 * k1 + _E3 * k3 + _E4 * k4 + _E5 * k5 + _E6 * k6 + _E7 * k7
        )
        sc = atol + rtol * np.maximum(np.abs(y), np.abs(y5))
        err = math.sqrt(float(np.mean(np.abs(err_vec / sc) ** 2)))

        if err <= 1.0:
            s += h
            y = y5
            k1 = k7
            if track_norm:
                norm_dev = max(norm_dev, abs(float(np.sum(np.abs(y) ** 2)) - norm0))
            factor = _MAX_FACTOR if err == 0.0 else min(
                _MAX_FACTOR, max(_MIN_FACTOR, _SAFETY * err ** -0.2)
            )
            h *= factor
        elif math.isnan(err):
            # Singular right-hand side inside the trial step.
            h *= _MIN_FACTOR
        else:
            h *= max(_MIN_FACTOR, min(1.0, _SAFETY * err ** -0.2))

    return y, steps, norm_dev


def _sweep_coefficients(family, shape, e0t, e1t, v0t, u):
    """Dimensionless (T*eps, T*V) of the sweep Hamiltonian at u = t/T."""
    if shape == SHAPE_SINH:
        sech = _sech(u)
        eps = e0t * sech + e1t * math.tanh(u)
        v = v0t if family == FAMILY_CLASS1 else v0t * sech
        return eps, v
    if shape == SHAPE_LINEAR:
        y, dy = u, 1.0
    else:
        y, dy = u + u**3, 1.0 + 3.0 * u * u
    one_y2 = 1.0 + y * y
    eps = (e0t + e1t * y) / one_y2 * dy
    if family == FAMILY_CLASS1:
        v = v0t / math.sqrt(one_y2) * dy
    else:
        v = v0t / one_y2 * dy
    return eps, v


def two_level(family, shape, e0t, e1t, v0t, u0, u1, y0, rtol, atol, h0, max_steps,
              track_norm=True):
    """Propagate i dpsi/du = (T H(u)) psi for a two-level sweep model."""

    def f(u, y):
        eps, v = _sweep_coefficients(family, shape, e0t, e1t, v0t, u)
        return np.array(
            [
                -1j * (eps * y[0] + v * y[1]),
                -1j * (v * y[0] - eps * y[1]),
            ]
        )

    return integrate_callable(f, u0, u1, y0, rtol, atol, h0, max_steps, track_norm)


def multi_level(e1t, vts, u0, u1, y0, rtol, atol, h0, max_steps, track_norm=True):
    """Propagate the N-level bordered model: H00 = E1 T tanh(u), H0j = Vj T."""
    vts = np.asarray(vts, dtype=float)

    def f(u, y):
        out = np.empty_like(y)
        out[0] = -1j * (e1t * math.tanh(u) * y[0] + np.dot(vts, y[1:]))
        out[1:] = -1j * vts * y[0]
        return out

    return integrate_callable(f, u0, u1, y0, rtol, atol, h0, max_steps, track_norm)


def multi_level_samples(e1t, vts, u0, u_eval, y0, rtol, atol, h0, max_steps):
    """States of the N-level model at each u in ``u_eval`` (monotone from u0)."""
    states = np.empty((len(u_eval), len(y0)), dtype=complex)
    y = np.array(y0, dtype=complex)
    steps = 0
    ua = u0
    for i, ub in enumerate(u_eval):
        y, st, _ = multi_level(e1t, vts, ua, ub, y, rtol, atol, h0, max_steps,
                               track_norm=False)
        steps += st
        states[i] = y
        ua = ub
    return states, steps


def hyp_frame_segment(alpha, beta, gamma, kind, za, zb, center, radius, th0, th1,
                      frame, rtol, atol, h0, max_steps):
    """Transport a 2x2 solution frame of the hypergeometric ODE along a segment.

    The frame rows are (value, derivative), columns are independent solutions.
    Segments are parametrized by arc length; the chain rule supplies dz/ds.
    """
    ab = alpha * beta
    apb1 = 1.0 + alpha + beta

    if kind == SEG_LINE:
        length = abs(zb - za)
        tau = (zb - za) / length

        def zpoint(s):
            return za + s * tau, tau

    else:
        sweep = th1 - th0
        length = radius * abs(sweep)
        sigma = 1.0 if sweep >= 0.0 else -1.0

        def zpoint(s):
            th = th0 + sigma * s / radius
            e = complex(math.cos(th), math.sin(th))
            return center + radius * e, 1j * sigma * e

    def f(s, y):
        z, dz = zpoint(s)
        den = z * (1.0 - z)
        a = ab / den
        b = (apb1 * z - gamma) / den
        out = np.empty(4, dtype=complex)
        out[0] = dz * y[2]
        out[1] = dz * y[3]
        out[2] = dz * (a * y[0] + b * y[2])
        out[3] = dz * (a * y[1] + b * y[3])
        return out

    y0 = np.asarray(frame, dtype=complex).reshape(4)
    y, steps, _ = integrate_callable(f, 0.0, length, y0, rtol, atol, h0, max_steps)
    return y.reshape(2, 2), steps


def okubo_line(amat, z0, z1, d0, rtol, atol, h0, max_steps):
    """Integrate (z I - C) d' = A d along the real z axis, C = diag(i,-i,...,-i)."""
    amat = np.asarray(amat, dtype=complex)

    def f(z, d):
        out = amat @ d
        out[0] /= z - 1j
        out[1:] /= z + 1j
        return out

    y, steps, _ = integrate_callable(f, z0, z1, d0, rtol, atol, h0, max_steps)
    return y, steps
