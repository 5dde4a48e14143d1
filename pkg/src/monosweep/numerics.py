"""Complex-plane numerics: the Gauss hypergeometric series, contour paths and
an adaptive integrator for linear ODE systems.

Everything here is a pure function of its inputs; the types are immutable and
safe to share across threads.  Analytic continuation of the hypergeometric
function outside the unit disc is *not* done by series transformations: the
ODE engine transports solutions along explicit contours instead.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np

from . import _pykernels
from .errors import NonConvergence, PoleInC


def eval_2f1(a, b, c, x, tol: float = 1e-14, max_terms: int = 100_000) -> complex:
    """Gauss hypergeometric series 2F1(a, b; c; x) for complex parameters.

    Valid in the series region |x| < 1.  Truncates once the term magnitude
    stays below ``tol`` relative to the partial sum for three consecutive
    terms.

    Raises:
        PoleInC: if c is a non-positive integer (series undefined).
        NonConvergence: if ``max_terms`` terms do not reach the tolerance.
        ValueError: if |x| >= 1.
    """
    a = complex(a)
    b = complex(b)
    c = complex(c)
    x = complex(x)

    c_round = round(c.real)
    if c_round <= 0 and abs(c - c_round) <= 1e-14 * max(1.0, abs(c)):
        raise PoleInC(f"c={c} is a non-positive integer")
    if abs(x) >= 1.0:
        raise ValueError(f"|x|={abs(x)} outside the series region |x| < 1")
    if x == 0:
        return 1.0 + 0.0j

    total = 1.0 + 0.0j
    term = 1.0 + 0.0j
    small_run = 0
    for n in range(max_terms):
        term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * x
        total += term
        if abs(term) < tol * abs(total):
            small_run += 1
            if small_run >= 3:
                return total
        else:
            small_run = 0
    raise NonConvergence(f"series did not converge within {max_terms} terms")


def eval_2f1_derivative(a, b, c, x, tol: float = 1e-14) -> complex:
    """d/dx 2F1(a, b; c; x) via the contiguous relation (ab/c) 2F1(a+1, b+1; c+1; x)."""
    return a * b / c * eval_2f1(a + 1, b + 1, c + 1, x, tol=tol)


@dataclass(frozen=True)
class LineSegment:
    """Straight segment between two points of the complex plane."""

    start: complex
    end: complex

    @property
    def length(self) -> float:
        return abs(self.end - self.start)

    def point(self, s: float) -> complex:
        return self.start + (s / self.length) * (self.end - self.start)

    def min_distance_to(self, p: complex) -> float:
        d = self.end - self.start
        t = ((p - self.start).real * d.real + (p - self.start).imag * d.imag) / (
            abs(d) ** 2
        )
        t = min(1.0, max(0.0, t))
        return abs(self.start + t * d - p)


@dataclass(frozen=True)
class ArcSegment:
    """Circular arc; theta1 > theta0 runs counterclockwise."""

    center: complex
    radius: float
    theta0: float
    theta1: float

    @property
    def start(self) -> complex:
        return self.center + self.radius * cmath.exp(1j * self.theta0)

    @property
    def end(self) -> complex:
        return self.center + self.radius * cmath.exp(1j * self.theta1)

    @property
    def length(self) -> float:
        return self.radius * abs(self.theta1 - self.theta0)

    def point(self, s: float) -> complex:
        sigma = 1.0 if self.theta1 >= self.theta0 else -1.0
        return self.center + self.radius * cmath.exp(
            1j * (self.theta0 + sigma * s / self.radius)
        )

    def min_distance_to(self, p: complex) -> float:
        rel = p - self.center
        rho = abs(rel)
        if rho == 0.0:
            return self.radius
        # Angle of p seen from the center, unwound into the swept interval.
        phi = math.atan2(rel.imag, rel.real)
        lo, hi = sorted((self.theta0, self.theta1))
        k_lo = math.ceil((lo - phi) / (2 * math.pi))
        k_hi = math.floor((hi - phi) / (2 * math.pi))
        if k_lo <= k_hi:
            return abs(rho - self.radius)
        return min(abs(self.start - p), abs(self.end - p))


Segment = Union[LineSegment, ArcSegment]


@dataclass(frozen=True)
class ContourPath:
    """Piecewise path in the complex plane built from lines and arcs.

    Consecutive segments must share endpoints.  When ``clearance`` is
    positive, construction verifies that the path keeps at least that
    distance from every point in ``avoid`` (the hypergeometric singularities
    0 and 1 by default).
    """

    segments: tuple[Segment, ...]
    clearance: float = 0.0
    avoid: tuple[complex, ...] = (0.0 + 0.0j, 1.0 + 0.0j)

    def __post_init__(self):
        if not self.segments:
            raise ValueError("empty path")
        for prev, nxt in zip(self.segments, self.segments[1:]):
            gap = abs(complex(prev.end) - complex(nxt.start))
            if gap > 1e-12 * max(1.0, abs(prev.end)):
                raise ValueError(f"disconnected segments (gap {gap:.3e})")
        if self.clearance > 0.0:
            for p in self.avoid:
                d = self.min_distance_to(p)
                if d < self.clearance:
                    raise ValueError(
                        f"path approaches {p} at distance {d:.3e} < clearance "
                        f"{self.clearance:.3e}"
                    )

    @property
    def start(self) -> complex:
        return complex(self.segments[0].start)

    @property
    def end(self) -> complex:
        return complex(self.segments[-1].end)

    @property
    def is_closed(self) -> bool:
        return abs(self.start - self.end) <= 1e-12 * max(1.0, abs(self.start))

    @property
    def length(self) -> float:
        return sum(seg.length for seg in self.segments)

    def min_distance_to(self, p: complex) -> float:
        return min(seg.min_distance_to(complex(p)) for seg in self.segments)

    @classmethod
    def from_points(cls, *points: complex, clearance: float = 0.0) -> "ContourPath":
        segs = tuple(
            LineSegment(complex(a), complex(b)) for a, b in zip(points, points[1:])
        )
        return cls(segs, clearance=clearance)

    @classmethod
    def circle(
        cls,
        center: complex,
        radius: float,
        start_angle: float = math.pi,
        orientation: int = 1,
        clearance: float = 0.0,
    ) -> "ContourPath":
        """Full circle from ``start_angle``; orientation +1 is counterclockwise."""
        seg = ArcSegment(
            complex(center),
            float(radius),
            start_angle,
            start_angle + orientation * 2 * math.pi,
        )
        return cls((seg,), clearance=clearance)


@dataclass(frozen=True)
class IntegratorConfig:
    """Tolerances and budget for the adaptive Dormand-Prince 5(4) driver.

    ``initial_step == 0`` selects the step automatically.
    """

    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    initial_step: float = 0.0
    max_steps: int = 1_000_000

    def __post_init__(self):
        if self.rel_tol <= 0.0 or self.abs_tol <= 0.0:
            raise ValueError("tolerances must be positive")
        if self.initial_step < 0.0:
            raise ValueError("initial_step must be >= 0")
        if self.max_steps <= 0:
            raise ValueError("max_steps must be positive")


DEFAULT_INTEGRATOR = IntegratorConfig()

RhsMatrix = Callable[[complex], "np.ndarray"]


def _as_matrix(m) -> np.ndarray:
    arr = np.atleast_2d(np.asarray(m, dtype=complex))
    if arr.shape[0] != arr.shape[1]:
        raise ValueError(f"coefficient matrix is not square: shape {arr.shape}")
    return arr


def integrate_linear_ode(
    rhs: RhsMatrix,
    y0,
    path: Union[ContourPath, Sequence[float]],
    cfg: IntegratorConfig = DEFAULT_INTEGRATOR,
) -> np.ndarray:
    """Solve y' = M(.) y along a real interval or a complex contour.

    For a real interval ``(t0, t1)`` the equation is dy/dt = rhs(t) @ y.  For
    a :class:`ContourPath` each segment is parametrized by arc length s and
    the chain rule dy/ds = z'(s) rhs(z(s)) y is applied; segments are
    integrated in order with the state carried across joints.

    ``rhs`` may return a scalar for one-dimensional systems.  Returns the
    solution vector at the end of the path.
    """
    y = np.atleast_1d(np.asarray(y0, dtype=complex))

    if isinstance(path, ContourPath):
        for seg in path.segments:
            if isinstance(seg, LineSegment):
                tau = (seg.end - seg.start) / seg.length
                za = seg.start

                def f(s, yv, tau=tau, za=za):
                    return tau * (_as_matrix(rhs(za + s * tau)) @ yv)

            else:
                sigma = 1.0 if seg.theta1 >= seg.theta0 else -1.0
                center, radius, th0 = seg.center, seg.radius, seg.theta0

                def f(s, yv, sigma=sigma, center=center, radius=radius, th0=th0):
                    e = cmath.exp(1j * (th0 + sigma * s / radius))
                    z = center + radius * e
                    return (1j * sigma * e) * (_as_matrix(rhs(z)) @ yv)

            y, _, _ = _pykernels.integrate_callable(
                f,
                0.0,
                seg.length,
                y,
                cfg.rel_tol,
                cfg.abs_tol,
                cfg.initial_step,
                cfg.max_steps,
            )
        return y

    t0, t1 = float(path[0]), float(path[1])

    def f(t, yv):
        return _as_matrix(rhs(t)) @ yv

    y, _, _ = _pykernels.integrate_callable(
        f, t0, t1, y, cfg.rel_tol, cfg.abs_tol, cfg.initial_step, cfg.max_steps
    )
    return y


def require_finite(arr, what: str = "value"):
    """Reject NaN/Inf before results cross a public boundary."""
    a = np.asarray(arr)
    if not np.all(np.isfinite(a.view(float) if a.dtype == complex else a)):
        raise ValueError(f"non-finite {what}")
    return arr


def geometric_breakpoints(u_max: float, base: float = 8.0) -> list[float]:
    """Symmetric breakpoints 0, +-1, +-base, ..., +-u_max for span chaining.

    Splitting a long integration window at geometrically spaced points keeps
    the floating-point representation of the running parameter accurate
    relative to its magnitude (important for windows of width 1e9 and more).
    """
    if u_max <= 0.0:
        raise ValueError("u_max must be positive")
    pts = [0.0, min(1.0, u_max)]
    while pts[-1] < u_max:
        pts.append(min(pts[-1] * base, u_max))
    return [-p for p in reversed(pts[1:])] + pts
