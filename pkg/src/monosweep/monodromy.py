"""Analytic transition probabilities from hypergeometric monodromy.

The two-level sweep model reduces, after eliminating the diagonal and mapping
time to z(t) = (sinh(t/T) + i)/2i, to the hypergeometric equation

    z(1-z) c'' + (gamma - (1+alpha+beta) z) c' - alpha*beta c = 0

with parameters

    alpha = iT(-E1 + s),  beta = iT(-E1 - s),  gamma = 1/2 + E0 T - i E1 T,

s = sqrt(E1^2 + V0^2).  The partner amplitude satisfies the same equation
with E0, E1 negated (primed parameters).  The physical time contour runs from
z = +i*inf + 1/2 down to -i*inf + 1/2; deforming it, the nontrivial part is a
counterclockwise loop around the singular point z = 1 whose action on the
fundamental solutions at infinity,

    f(z; alpha) = z^-alpha 2F1(alpha, alpha-gamma+1; alpha-beta+1; 1/z),
    f(z; beta)  = z^-beta  2F1(beta-gamma+1, beta; beta-alpha+1; 1/z),

is a 2x2 monodromy matrix.  Its (1,1) element carries the surviving
excited-state amplitude; everything here is phrased with the unit phase
e(x) = exp(2*pi*i*x).

Two independent routes to the transition probability are provided:
:func:`transition_probability` (closed form in scaled variables) and
:func:`transition_probability_assembled` (monodromy elements combined with
the asymptotic eigenvector components and the sech pulse phase).  A numeric
continuation oracle, :func:`numeric_monodromy`, transports solution frames
around explicit contours and never touches the closed forms.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ._backend import kernels
from .errors import BasisIllConditioned, PreconditionViolated, SingularConnection
from .models import TwoLevelParams, asymptotic_amplitudes
from .numerics import (
    ArcSegment,
    ContourPath,
    DEFAULT_INTEGRATOR,
    IntegratorConfig,
    LineSegment,
    eval_2f1,
    eval_2f1_derivative,
    require_finite,
)

TWO_PI = 2.0 * math.pi


def phase_factor(x) -> complex:
    """The unit phase e(x) = exp(2*pi*i*x) for complex x."""
    return cmath.exp(2j * math.pi * complex(x))


@dataclass(frozen=True)
class HypergeometricParams:
    """Parameter triple (alpha, beta, gamma) of the reduced equation.

    For physical inputs alpha and beta are pure imaginary.  The primed
    partner (sign-flipped E0, E1) is (-beta, -alpha, 1-gamma).
    """

    alpha: complex
    beta: complex
    gamma: complex

    def primed(self) -> "HypergeometricParams":
        return HypergeometricParams(-self.beta, -self.alpha, 1.0 - self.gamma)


def hypergeometric_params(p: TwoLevelParams, primed: bool = False) -> HypergeometricParams:
    """Map the physical constants to the hypergeometric triple."""
    E0, E1 = (-p.E0, -p.E1) if primed else (p.E0, p.E1)
    s = math.hypot(E1, p.V0)
    hp = HypergeometricParams(
        alpha=1j * p.T * (-E1 + s),
        beta=1j * p.T * (-E1 - s),
        gamma=0.5 + E0 * p.T - 1j * E1 * p.T,
    )
    return hp


def connection_matrix(hp: HypergeometricParams) -> np.ndarray:
    """Connection matrix S relating the solution pairs adapted to z=1 and z=inf.

    Columns act on (f(z;alpha)-like, f(z;beta)-like); rows on the pair adapted
    to the singular point z = 1.  Diverges when e(-alpha) = e(beta-gamma).
    """
    den = phase_factor(-hp.alpha) - phase_factor(hp.beta - hp.gamma)
    if abs(den) < 1e-13:
        raise SingularConnection(
            f"resonant parameters: |e(-alpha) - e(beta-gamma)| = {abs(den):.3e}"
        )
    ebg = phase_factor(hp.beta - hp.gamma)
    return (
        np.array(
            [
                [ebg - phase_factor(-hp.gamma),
                 phase_factor(hp.alpha + hp.beta - 2 * hp.gamma) - ebg],
                [1.0 - phase_factor(-hp.alpha), ebg - 1.0],
            ]
        )
        / den
    )


def local_monodromy(hp: HypergeometricParams) -> np.ndarray:
    """Monodromy of the z=1-adapted pair around z=1: diag(1, e(gamma-alpha-beta))."""
    return np.array(
        [[1.0, 0.0], [0.0, phase_factor(hp.gamma - hp.alpha - hp.beta)]],
        dtype=complex,
    )


def monodromy_element11(hp: HypergeometricParams) -> complex:
    """Closed form of the (1,1) monodromy element in the basis at infinity."""
    ebg = phase_factor(hp.beta - hp.gamma)
    num = ebg - phase_factor(-hp.gamma) + phase_factor(-hp.alpha) - 1.0
    den = ebg - phase_factor(hp.alpha - hp.gamma)
    return num / den


@dataclass(frozen=True)
class MonodromyData:
    """Connection matrix, local loop monodromy, and their conjugation.

    ``matrix`` is connection^-1 @ local @ connection, the monodromy of the
    basis at infinity around z = 1 (up to a diagonal rescaling that leaves
    the diagonal, trace, determinant and spectrum untouched).
    """

    connection: np.ndarray
    local: np.ndarray
    matrix: np.ndarray
    element11: complex
    element11_primed: complex


def global_monodromy(hp: HypergeometricParams) -> MonodromyData:
    """Assemble the monodromy matrix around z = 1 and its closed-form element.

    Cross-checks the matrix-product route against the closed form at the
    1e-10 level; a mismatch indicates a transcription bug, not roundoff.
    """
    s = connection_matrix(hp)
    g = local_monodromy(hp)
    det = s[0, 0] * s[1, 1] - s[0, 1] * s[1, 0]
    s_inv = np.array([[s[1, 1], -s[0, 1]], [-s[1, 0], s[0, 0]]]) / det
    full = s_inv @ g @ s
    elem = monodromy_element11(hp)
    if abs(elem - full[0, 0]) >= 1e-10 * max(1.0, abs(elem)):
        raise AssertionError(
            f"monodromy element mismatch: closed form {elem}, matrix {full[0, 0]}"
        )
    return MonodromyData(
        connection=s,
        local=g,
        matrix=full,
        element11=elem,
        element11_primed=monodromy_element11(hp.primed()),
    )


def _frame_at(z: complex, hp: HypergeometricParams) -> np.ndarray:
    """Values/derivatives of the fundamental solutions at infinity, |1/z| < 1.

    Uses the principal branch of log z, which matches continuous tracking
    from arg(z) = pi/2 at the top of the physical contour for anchors in the
    upper half plane.
    """
    u = 1.0 / z
    frame = np.empty((2, 2), dtype=complex)
    for j, (expo, a, b, c) in enumerate(
        (
            (hp.alpha, hp.alpha, hp.alpha - hp.gamma + 1.0, hp.alpha - hp.beta + 1.0),
            (hp.beta, hp.beta - hp.gamma + 1.0, hp.beta, hp.beta - hp.alpha + 1.0),
        )
    ):
        val = eval_2f1(a, b, c, u)
        dval = eval_2f1_derivative(a, b, c, u)
        zpow = cmath.exp(-expo * cmath.log(z))
        frame[0, j] = zpow * val
        frame[1, j] = -expo * zpow / z * val - zpow / z**2 * dval
    return frame


def _transport(frame, path: ContourPath, hp, cfg: IntegratorConfig):
    w = np.asarray(frame, dtype=complex)
    for seg in path.segments:
        if isinstance(seg, LineSegment):
            args = (kernels.SEG_LINE, seg.start, seg.end, 0.0j, 0.0, 0.0, 0.0)
        else:
            args = (
                kernels.SEG_ARC,
                0.0j,
                0.0j,
                seg.center,
                seg.radius,
                seg.theta0,
                seg.theta1,
            )
        w, _ = kernels.hyp_frame_segment(
            hp.alpha,
            hp.beta,
            hp.gamma,
            *args,
            w,
            cfg.rel_tol,
            cfg.abs_tol,
            cfg.initial_step,
            cfg.max_steps,
        )
    return w


def default_monodromy_loop(orientation: int = 1) -> ContourPath:
    """Loop from z = 1/2 around z = 1 only: out to 0.4, a radius-0.6 circle, back.

    orientation +1 (counterclockwise) matches the physical contour
    deformation; -1 gives the inverse monodromy.
    """
    circle = ArcSegment(1.0 + 0.0j, 0.6, math.pi, math.pi + orientation * TWO_PI)
    return ContourPath(
        (
            LineSegment(0.5 + 0.0j, 0.4 + 0.0j),
            circle,
            LineSegment(0.4 + 0.0j, 0.5 + 0.0j),
        ),
        clearance=0.05,
        avoid=(0.0 + 0.0j,),
    )


def numeric_monodromy(
    hp: HypergeometricParams,
    cfg: IntegratorConfig = DEFAULT_INTEGRATOR,
    loop: ContourPath | None = None,
    orientation: int = 1,
    anchor_height: float = 8.0,
) -> np.ndarray:
    """Monodromy matrix by ODE continuation, independent of the closed forms.

    Builds the solution frame at an anchor high above the loop base (series
    region), transports it down to the base point, then once around ``loop``
    (default: the counterclockwise loop around z = 1).  Returns the matrix R
    with continued_frame = base_frame @ R.  Compare against the analytic
    route via the basis-independent invariants: trace, determinant and the
    diagonal elements.
    """
    if loop is None:
        loop = default_monodromy_loop(orientation)
    if not loop.is_closed:
        raise ValueError("monodromy loop must be closed")
    base = loop.start
    anchor = complex(base.real, base.imag + anchor_height)
    if abs(anchor) <= 1.0:
        raise ValueError("anchor must lie in the series region |z| > 1")

    frame_anchor = _frame_at(anchor, hp)
    descent = ContourPath((LineSegment(anchor, base),), clearance=0.05)
    frame_base = _transport(frame_anchor, descent, hp, cfg)

    det = frame_base[0, 0] * frame_base[1, 1] - frame_base[0, 1] * frame_base[1, 0]
    if abs(det) < 1e-10:
        raise BasisIllConditioned(
            f"fundamental-solution frame nearly singular: |det| = {abs(det):.3e}"
        )

    frame_looped = _transport(frame_base, loop, hp, cfg)
    return require_finite(np.linalg.solve(frame_base, frame_looped),
                          "monodromy matrix")


@dataclass(frozen=True)
class AsymptoticPhases:
    """Phases dressing the incoming asymptotic solution.

    pulse:  (pi/2) E0 T, accumulated by the sech pulse half-area.
    sweep:  E1 T log 2, from the tanh ramp versus |t|.
    branch / branch_primed: complex leftovers of the z^-alpha branch choice
        (2*alpha*log 2 content); these cancel in any probability.
    global_phase: free overall phase, fixed to zero.
    """

    pulse: float
    sweep: float
    branch: complex
    branch_primed: complex
    global_phase: float = 0.0


class InitialCoefficients(NamedTuple):
    coeff_c1: complex
    coeff_c2: complex
    phases: AsymptoticPhases


def initial_coefficients(p: TwoLevelParams) -> InitialCoefficients:
    """Coefficients of the decaying fundamental solutions fixed by the ground state.

    With the branch arg(z) = pi/2 as t -> -inf and zero global phase, the
    incoming ground state excites only f(z; alpha) in the first amplitude and
    only f(z; alpha') in the second; the partner coefficients vanish
    identically.
    """
    hp = hypergeometric_params(p)
    hp_primed = hypergeometric_params(p, primed=True)
    amp, amp_p = asymptotic_amplitudes(p.E1, p.V0)

    pulse = p.T * p.E0 * math.pi / 2.0
    sweep = p.T * p.E1 * math.log(2.0)
    log2 = math.log(2.0)

    coeff_c1 = amp * cmath.exp(
        1j * math.pi * hp.alpha / 2.0 - 1j * sweep - 1j * pulse - 2.0 * hp.alpha * log2
    )
    coeff_c2 = -amp_p * cmath.exp(
        1j * math.pi * hp_primed.alpha / 2.0
        + 1j * sweep
        + 1j * pulse
        - 2.0 * hp_primed.alpha * log2
    )
    phases = AsymptoticPhases(
        pulse=pulse,
        sweep=sweep,
        branch=-2j * hp.alpha * log2,
        branch_primed=-2j * hp_primed.alpha * log2,
    )
    return InitialCoefficients(coeff_c1, coeff_c2, phases)


def _ratio_sq_sinh(u: float, w: float) -> float:
    """sinh(u)^2 / sinh(w)^2 for 0 <= |u| <= w, overflow-safe."""
    au = abs(u)
    if w == 0.0:
        return 1.0
    if w < 300.0:
        r = math.sinh(au) / math.sinh(w)
    else:
        r = math.exp(au - w) * (1.0 - math.exp(-2.0 * au)) / (1.0 - math.exp(-2.0 * w))
    return r * r


def _ratio_sq_cosh(u: float, w: float) -> float:
    """cosh(u)^2 / cosh(w)^2 for 0 <= |u| <= w, overflow-safe."""
    au = abs(u)
    if w < 300.0:
        r = math.cosh(au) / math.cosh(w)
    else:
        r = math.exp(au - w) * (1.0 + math.exp(-2.0 * au)) / (1.0 + math.exp(-2.0 * w))
    return r * r


def transition_probability_scaled(eps0: float, eps1: float, v: float) -> float:
    """Closed-form nonadiabatic transition probability in scaled variables.

    P = sinh^2(eps1) cos^2(eps0) / sinh^2(w) + cosh^2(eps1) sin^2(eps0) / cosh^2(w),
    w = sqrt(eps1^2 + v^2).  Even in each of eps0, eps1, v separately.
    """
    if eps1 == 0.0 and v == 0.0:
        raise PreconditionViolated("eps1 = v = 0 has no asymptotic ground state")
    w = math.hypot(eps1, v)
    return (
        _ratio_sq_sinh(eps1, w) * math.cos(eps0) ** 2
        + _ratio_sq_cosh(eps1, w) * math.sin(eps0) ** 2
    )


def transition_probability(p: TwoLevelParams) -> float:
    """Closed-form transition probability for the physical constants."""
    sp = p.scaled
    return transition_probability_scaled(sp.eps0, sp.eps1, sp.v)


def transition_probability_assembled(p: TwoLevelParams) -> float:
    """Transition probability assembled from monodromy elements.

    Combines the (1,1) elements for both amplitudes with the asymptotic
    eigenvector components and the sech pulse phase, in scaled variables:

        P = | (eps1/2w) (a e^{eps1-w} e^{-i eps0} + a' e^{-eps1-w} e^{i eps0})
            +  (1/2)   (a e^{eps1-w} e^{-i eps0} - a' e^{-eps1-w} e^{i eps0}) |^2.

    Kept independent of :func:`transition_probability` so the two routes can
    cross-check each other.
    """
    data = global_monodromy(hypergeometric_params(p))
    sp = p.scaled
    w = math.hypot(sp.eps1, sp.v)
    t1 = data.element11 * math.exp(sp.eps1 - w) * cmath.exp(-1j * sp.eps0)
    t2 = data.element11_primed * math.exp(-sp.eps1 - w) * cmath.exp(1j * sp.eps0)
    amp = sp.eps1 / (2.0 * w) * (t1 + t2) + 0.5 * (t1 - t2)
    return abs(amp) ** 2


def extremal_probabilities_scaled(eps1: float, v: float) -> tuple[float, float]:
    """Envelope (P_min, P_max) of the probability over the sech pulse area.

    P_min = sinh^2(eps1)/sinh^2(w) at eps0 = n*pi;
    P_max = cosh^2(eps1)/cosh^2(w) at eps0 = (n + 1/2)*pi.
    """
    w = math.hypot(eps1, v)
    if w == 0.0:
        raise PreconditionViolated("eps1 = v = 0 has no asymptotic ground state")
    return _ratio_sq_sinh(eps1, w), _ratio_sq_cosh(eps1, w)


def extremal_probabilities(p: TwoLevelParams) -> tuple[float, float]:
    """Envelope (P_min, P_max); depends only on E1, V0, T (E0 is the swept knob)."""
    sp = p.scaled
    return extremal_probabilities_scaled(sp.eps1, sp.v)


class LandauZenerLimit(NamedTuple):
    """Both candidate exponential rates for the steep-sweep limit.

    ``printed`` uses exp(-pi V0^2 T / (2 E1)); ``alternative`` uses
    exp(-pi V0^2 T / E1), which is what the closed form approaches as
    E1 T -> inf.  The factor-two tension is reported, not resolved.
    """

    printed: float
    alternative: float


def limit_formula(p: TwoLevelParams, which: str):
    """Known limiting formulas: 'rosen_zener', 'demkov_kunike' or 'landau_zener'.

    rosen_zener (requires E1 = 0): sin^2(pi T E0) / cosh^2(pi T V0).
    demkov_kunike (requires E0 = 0): sinh^2(pi T E1) / sinh^2(pi T s).
    landau_zener (requires E1 > 0): returns a :class:`LandauZenerLimit` with
    both candidate exponents.
    """
    if which == "rosen_zener":
        if p.E1 != 0.0:
            raise PreconditionViolated("rosen_zener limit requires E1 = 0")
        sp = p.scaled
        return math.sin(sp.eps0) ** 2 / math.cosh(sp.v) ** 2
    if which == "demkov_kunike":
        if p.E0 != 0.0:
            raise PreconditionViolated("demkov_kunike limit requires E0 = 0")
        sp = p.scaled
        return _ratio_sq_sinh(sp.eps1, math.hypot(sp.eps1, sp.v))
    if which == "landau_zener":
        if not p.E1 > 0.0:
            raise PreconditionViolated("landau_zener limit requires E1 > 0")
        rate = math.pi * p.V0**2 * p.T / p.E1
        return LandauZenerLimit(printed=math.exp(-rate / 2.0), alternative=math.exp(-rate))
    raise ValueError(f"unknown limit {which!r}")
