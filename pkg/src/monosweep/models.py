"""Physical models: the two-level sweep Hamiltonian, its generalized sweep
families with pluggable monotone profiles y(t), the bordered N-level model,
and exact asymptotic eigenstates.

Units: hbar = 1 throughout.  The two-level Hamiltonian is

    H(t) = ((eps(t), V(t)), (V(t), -eps(t))),
    eps(t) = E0 sech(t/T) + E1 tanh(t/T),   V(t) = V0,

which is the y(t) = sinh(t/T) member of the class-1 family

    eps(t) = (E0 T + E1 T y) / (1 + y^2) * dy/dt,
    V(t)   = V0 T / sqrt(1 + y^2) * dy/dt,

for any monotone y with y(+-inf) = +-inf.  The class-2 family replaces the
coupling by V0 T / (1 + y^2) * dy/dt.  The admitted profiles grow at least
linearly, |y(t)| >= |t/T| eventually, so the asymptotic ground state is
well defined.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import _pykernels
from .errors import DegenerateAsymptote

PI = math.pi


@dataclass(frozen=True)
class ScaledParams:
    """Dimensionless parameters (eps0, eps1, v) = pi*T*(E0, E1, V0).

    The transition probability depends on the model only through these.
    """

    eps0: float
    eps1: float
    v: float

    def to_params(self, T: float = 1.0) -> "TwoLevelParams":
        return TwoLevelParams(
            self.eps0 / (PI * T), self.eps1 / (PI * T), self.v / (PI * T), T
        )


@dataclass(frozen=True)
class TwoLevelParams:
    """Constants of the two-level sweep model.

    E0: sech pulse amplitude, E1: tanh sweep amplitude, V0: constant
    coupling, T: sweep time scale.  E1 = V0 = 0 is rejected: the asymptotic
    Hamiltonian would be degenerate and "ground state" meaningless.
    """

    E0: float
    E1: float
    V0: float
    T: float = 1.0

    def __post_init__(self):
        if not self.T > 0.0:
            raise ValueError("T must be positive")
        if self.E1 == 0.0 and self.V0 == 0.0:
            raise DegenerateAsymptote("E1 = V0 = 0: degenerate asymptotic levels")
        for name in ("E0", "E1", "V0", "T"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")

    @property
    def scaled(self) -> ScaledParams:
        return ScaledParams(PI * self.T * self.E0, PI * self.T * self.E1,
                            PI * self.T * self.V0)

    @classmethod
    def from_scaled(cls, eps0: float, eps1: float, v: float,
                    T: float = 1.0) -> "TwoLevelParams":
        return ScaledParams(eps0, eps1, v).to_params(T)


class SweepClass(enum.Enum):
    CLASS1 = _pykernels.FAMILY_CLASS1
    CLASS2 = _pykernels.FAMILY_CLASS2


class ProfileShape(enum.Enum):
    SINH = _pykernels.SHAPE_SINH
    LINEAR = _pykernels.SHAPE_LINEAR
    CUBIC = _pykernels.SHAPE_CUBIC


@dataclass(frozen=True)
class SweepProfile:
    """A named monotone profile y(u), u = t/T, with its exact derivative."""

    kind: SweepClass
    shape: ProfileShape

    def y(self, u: float) -> float:
        if self.shape is ProfileShape.SINH:
            return math.sinh(u)
        if self.shape is ProfileShape.LINEAR:
            return u
        return u + u**3

    def dy_du(self, u: float) -> float:
        if self.shape is ProfileShape.SINH:
            return math.cosh(u)
        if self.shape is ProfileShape.LINEAR:
            return 1.0
        return 1.0 + 3.0 * u * u

    def u_for_y(self, target: float) -> float:
        """Inverse profile: the u with y(u) = target (target > 0)."""
        if target <= 0.0:
            raise ValueError("target must be positive")
        if self.shape is ProfileShape.SINH:
            return math.asinh(target)
        if self.shape is ProfileShape.LINEAR:
            return target
        u = target ** (1.0 / 3.0)
        for _ in range(60):
            f = u + u**3 - target
            step = f / (1.0 + 3.0 * u * u)
            u -= step
            if abs(step) <= 1e-15 * abs(u):
                break
        return u


@dataclass(frozen=True)
class SweepModel:
    """A class-1 or class-2 sweep with the given profile and constants."""

    profile: SweepProfile
    params: TwoLevelParams


@dataclass(frozen=True)
class MultiLevelParams:
    """Bordered N-level model: H00 = E1 tanh(t/T), H0j = Hj0 = Vj, else 0."""

    E1: float
    T: float
    couplings: tuple[float, ...]

    def __post_init__(self):
        if not self.T > 0.0:
            raise ValueError("T must be positive")
        if len(self.couplings) < 1:
            raise ValueError("need at least one coupling (N >= 2)")
        if not all(math.isfinite(v) for v in self.couplings):
            raise ValueError("couplings must be finite")
        object.__setattr__(self, "couplings", tuple(float(v) for v in self.couplings))

    @property
    def n_levels(self) -> int:
        return len(self.couplings) + 1


def hamiltonian_at(model, t: float) -> np.ndarray:
    """2x2 Hamiltonian of a :class:`TwoLevelParams` or :class:`SweepModel` at time t."""
    if isinstance(model, TwoLevelParams):
        model = SweepModel(SweepProfile(SweepClass.CLASS1, ProfileShape.SINH), model)
    p = model.params
    eps, v = _pykernels._sweep_coefficients(
        model.profile.kind.value,
        model.profile.shape.value,
        p.E0 * p.T,
        p.E1 * p.T,
        p.V0 * p.T,
        t / p.T,
    )
    eps /= p.T
    v /= p.T
    return np.array([[eps, v], [v, -eps]])


def multilevel_hamiltonian(p: MultiLevelParams, t: float) -> np.ndarray:
    """N x N Hamiltonian of the bordered model at time t."""
    n = p.n_levels
    h = np.zeros((n, n))
    h[0, 0] = p.E1 * math.tanh(t / p.T)
    h[0, 1:] = p.couplings
    h[1:, 0] = p.couplings
    return h


def asymptotic_amplitudes(E1: float, V0: float) -> tuple[float, float]:
    """Eigenvector components (A, A') of the asymptotic two-level Hamiltonian.

    A = sqrt((E1 + s) / 2s), A' = sqrt((s - E1) / 2s) with s = sqrt(E1^2+V0^2),
    evaluated in the cancellation-free branch; A^2 + A'^2 = 1.
    """
    s = math.hypot(E1, V0)
    if s == 0.0:
        raise DegenerateAsymptote("E1 = V0 = 0")
    if E1 >= 0.0:
        big = math.sqrt((s + E1) / (2.0 * s))
        small = abs(V0) / math.sqrt(2.0 * s * (s + E1))
        return big, small
    small = abs(V0) / math.sqrt(2.0 * s * (s - E1))
    big = math.sqrt((s - E1) / (2.0 * s))
    return small, big


def _gauge_fix(vec: np.ndarray) -> np.ndarray:
    i = int(np.argmax(np.abs(vec)))
    if vec[i] < 0.0:
        return -vec
    return vec


def asymptotic_ground_state(p: TwoLevelParams, side: int) -> tuple[np.ndarray, float]:
    """Exact ground eigenpair of H(t -> side*inf); side is -1 or +1.

    States carry the gauge "largest component positive".  For side = -1 and
    V0 > 0 this is (A, -A') with energy -sqrt(E1^2 + V0^2).
    """
    vec, energy = _asymptotic_pair(p, side, excited=False)
    return vec, energy


def asymptotic_excited_state(p: TwoLevelParams, side: int) -> tuple[np.ndarray, float]:
    """Exact excited eigenpair of H(t -> side*inf); (A, A') at +inf for V0 > 0."""
    return _asymptotic_pair(p, side, excited=True)


def _asymptotic_pair(p, side, excited):
    if side not in (-1, 1):
        raise ValueError("side must be -1 or +1")
    E1, V0 = p.E1, p.V0
    s = math.hypot(E1, V0)
    amp, amp_p = asymptotic_amplitudes(E1, V0)
    g = 1.0 if V0 >= 0.0 else -1.0
    if side == -1:
        # H(-inf) = ((-E1, V0), (V0, E1))
        vec = np.array([g * amp_p, amp]) if excited else np.array([g * amp, -amp_p])
    else:
        # H(+inf) = ((E1, V0), (V0, -E1))
        vec = np.array([g * amp, amp_p]) if excited else np.array([g * amp_p, -amp])
    energy = s if excited else -s
    return _gauge_fix(vec), energy


def norm_error(state: np.ndarray) -> float:
    """|sum |a_i|^2 - 1| of an amplitude vector."""
    return abs(float(np.sum(np.abs(np.asarray(state)) ** 2)) - 1.0)
