"""Closed-form optimal weights for  int_a^b exp(2 pi i omega x) phi(x) dx.

Three regimes are handled separately:

* ``ZERO``      omega == 0, a plain integral;
* ``RESONANT``  omega*h an integer, the oscillating factor is constant on the
  lattice and the weights are pure boundary layers;
* ``GENERIC``   everything else.

Weights on ``[a, b]`` come from the unit interval through
``x = (b - a) y + a``: the effective frequency is ``omega * (b - a)``, the
lattice step on ``[0, 1]`` is ``1/N`` and every weight picks up the factor
``(b - a) exp(2 pi i omega a)``.

In the generic branch the interior weights are

    C_beta = K exp(2 pi i omega h beta) + a1 lam**beta + b1 lam**(N - beta),

``a1`` and ``b1`` solve a 2x2 linear system (matching the ``e^{h beta}``
terms of the optimality equations and the second moment condition), ``C_0``
follows from matching the ``h beta`` terms and ``C_N`` from the first moment
condition. All differences of nearby exponentials go through ``expm1`` so
that the weights stay accurate as ``omega -> 0``.
"""

from __future__ import annotations

import cmath
import enum
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ConfigurationError,
    DomainError,
    NearResonanceWarning,
    NumericError,
    RegimeError,
)
from .kernel import lambda1, powers, x_cosh_minus_sinh

DEFAULT_EPS_RES = 1e-12
NEAR_RESONANCE = 1e-6

TWO_PI_I = 2j * math.pi


@dataclass(frozen=True)
class Interval:
    """``[a, b]`` split into ``N`` equal steps."""

    a: float
    b: float
    N: int

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b)) or not self.a < self.b:
            raise DomainError(f"need finite a < b, got a={self.a}, b={self.b}")
        if int(self.N) != self.N or self.N < 1:
            raise DomainError(f"N must be a positive integer, got {self.N!r}")
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))

    @classmethod
    def unit(cls, N: int) -> "Interval":
        return cls(0.0, 1.0, N)

    @property
    def length(self) -> float:
        return self.b - self.a

    @property
    def h(self) -> float:
        return (self.b - self.a) / self.N

    @property
    def nodes(self) -> np.ndarray:
        return self.a + self.h * np.arange(self.N + 1)


class Regime(str, enum.Enum):
    ZERO = "zero"
    RESONANT = "resonant"
    GENERIC = "generic"


@dataclass(frozen=True)
class Auxiliaries:
    """Unit-interval scalars behind a weight set.

    ``None`` where the regime has no such term. On ``[a, b]`` these are the
    values at the effective frequency, before the ``(b - a) e^{2 pi i omega a}``
    scaling.
    """

    K: complex | None = None
    a1: complex | None = None
    b1: complex | None = None


@dataclass(frozen=True)
class CoefficientSet:
    weights: np.ndarray
    interval: Interval
    omega: float
    regime: Regime
    aux: Auxiliaries | None = None
    p0: complex | None = None
    d: complex | None = None
    warning: str | None = field(default=None, compare=False)

    def __post_init__(self):
        w = np.array(self.weights, dtype=complex)
        if w.shape != (self.interval.N + 1,):
            raise DomainError(f"expected {self.interval.N + 1} weights, got shape {w.shape}")
        if not np.all(np.isfinite(w)):
            raise NumericError("non-finite weight")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    def __len__(self):
        return len(self.weights)

    @property
    def lambda1(self) -> float:
        return lambda1(1.0 / self.interval.N)


def resonance_distance(omega: float, interval: Interval) -> float:
    """Distance from ``omega * h`` to the nearest integer."""
    t = omega * interval.h
    return abs(t - round(t))


def classify(omega: float, interval: Interval, eps_res: float = DEFAULT_EPS_RES) -> Regime:
    if not 0.0 < eps_res <= 1e-6:
        raise ConfigurationError(f"eps_res must lie in (0, 1e-6], got {eps_res}")
    if omega == 0:
        return Regime.ZERO
    if resonance_distance(omega, interval) <= eps_res:
        return Regime.RESONANT
    return Regime.GENERIC


def _near_resonance_note(omega, interval, eps_res):
    dist = resonance_distance(omega, interval)
    if eps_res < dist < NEAR_RESONANCE:
        msg = (
            f"omega*h={omega * interval.h!r} is {dist:.1e} from an integer; "
            "closed form is ill-conditioned here, prefer the oracle"
        )
        warnings.warn(msg, NearResonanceWarning, stacklevel=3)
        return msg
    return None


def _require_n(N):
    if int(N) != N or N < 2:
        raise DomainError(f"closed forms need N >= 2, got {N!r}")
    return int(N)


# -- omega = 0 -----------------------------------------------------------------


def _zero_unit_weights(N: int):
    h = 1.0 / N
    lam = lambda1(h)
    lp = powers(lam, N + 1)
    eh = math.exp(h)
    eh1 = math.expm1(h)
    # 2e^h - 2 - h e^h - h == -4 e^{h/2} (u cosh u - sinh u), u = h/2
    num = -4.0 * math.exp(h / 2) * float(x_cosh_minus_sinh(h / 2))
    K = num * (lam - 1.0) / (2.0 * eh1 * eh1 * (lam + lp[N + 1]))
    beta = np.arange(1, N)
    w = np.empty(N + 1)
    w[1:N] = h + K * ((eh - lam) * lp[beta] + (1.0 - lam * eh) * lp[N - beta])
    w[0] = 1.0 - h / eh1 - K * (lam - lp[N])
    w[N] = -1.0 + eh * h / eh1 - K * (lam - lp[N]) * eh
    return w, K


def coeffs_unit_zero(N: int) -> CoefficientSet:
    """Optimal weights for the plain integral over [0, 1]."""
    N = _require_n(N)
    w, K = _zero_unit_weights(N)
    return CoefficientSet(w, Interval.unit(N), 0.0, Regime.ZERO, Auxiliaries(K=K))


# -- generic omega ---------------------------------------------------------------


def _k_unit(w_eff: float, N: int) -> complex:
    """K_{omega,2} on [0, 1], written with e^{2 pi i omega h}.

    Sign differs from the commonly quoted expression; this one is the
    value that satisfies the optimality system.
    """
    h = 1.0 / N
    z = TWO_PI_I * w_eff
    zh = z * h
    E = cmath.exp(zh)
    em = _cexpm1(zh)
    d1 = math.expm1(h) - em  # e^h - E
    d2 = -_cexpm1(zh + h)  # 1 - E e^h
    D = -math.expm1(2 * h) * em * em + 2 * h * d1 * d2
    return -2.0 * d1 * d2 * em * em / (z * z * (z * z - 1.0) * E * D)


def _k_interval(omega: float, interval: Interval) -> complex:
    """K_{omega,2} in the [a, b] parametrisation (uses E^{-1} - e^{1/N})."""
    N = interval.N
    u = 1.0 / N
    wl = 2.0 * math.pi * omega * interval.length
    zh = 1j * 2.0 * math.pi * omega * interval.h
    em = _cexpm1(zh)
    d1 = math.expm1(u) - em  # e^{1/N} - E
    d3 = _cexpm1(-zh) - math.expm1(u)  # E^{-1} - e^{1/N}
    d2 = -_cexpm1(zh + u)  # 1 - E e^{1/N}
    D = -math.expm1(2 * u) * em * em + 2 * u * d1 * d2
    return -2.0 * d1 * d3 * em * em / (wl * wl * (wl * wl + 1.0) * D)


def _cexpm1(z: complex) -> complex:
    """Complex ``exp(z) - 1`` accurate for small ``|z|``."""
    # exp(x+iy) - 1 = expm1(x) cos y + (cos y - 1) + i e^x sin y
    x, y = z.real, z.imag
    cm1 = -2.0 * math.sin(y / 2) ** 2
    return complex(math.expm1(x) * math.cos(y) + cm1, math.exp(x) * math.sin(y))


def _generic_from_k(w_eff: float, N: int, K: complex):
    """Boundary-layer amplitudes and weights on [0, 1] given K."""
    h = 1.0 / N
    lam = lambda1(h)
    lp = powers(lam, N)
    lN = lp[N]
    z = TWO_PI_I * w_eff
    zh = z * h
    E = cmath.exp(zh)
    em = _cexpm1(zh)
    eh = math.exp(h)
    eh1 = math.expm1(h)
    ez1 = _cexpm1(z)  # e^z - 1
    e_minus_ez = -math.e * _cexpm1(z - 1.0)  # e - e^z
    d1 = eh1 - em  # e^h - E

    # 2x2 system for (a1, b1)
    m11 = lam * (1.0 - lN) / ((lam - 1.0) * (lam - eh))
    m12 = lam * (1.0 - lN) / ((lam - 1.0) * (1.0 - lam * eh))
    m21 = lam * (math.e - lN) / ((lam - 1.0) * (lam - eh))
    m22 = lam * (lN * math.e - 1.0) / ((lam - 1.0) * (lam * eh - 1.0))
    s = 1.0 / (z * (z - 1.0) * eh1) + K * E / (em * d1)
    r1 = -ez1 * s
    r2 = e_minus_ez * s
    det = m11 * m22 - m12 * m21
    a1 = (r1 * m22 - m12 * r2) / det
    b1 = (m11 * r2 - m21 * r1) / det

    beta = np.arange(1, N)
    w = np.empty(N + 1, dtype=complex)
    w[1:N] = np.exp(zh * beta) * K + a1 * lp[beta] + b1 * lp[N - beta]
    w[0] = K * E / em - 1.0 / z + a1 * lam / (lam - 1.0) + b1 * lN / (1.0 - lam)
    # sum_{beta=1}^{N-1} E^beta = E (E^{N-1} - 1) / (E - 1)
    interior_sum = K * E * _cexpm1(z - zh) / em + (a1 + b1) * (lam - lN) / (1.0 - lam)
    w[N] = ez1 / z - w[0] - interior_sum
    return w, a1, b1


def coeffs_unit_generic(omega: float, N: int, eps_res: float = DEFAULT_EPS_RES) -> CoefficientSet:
    """Optimal weights on [0, 1] for ``omega * h`` not an integer."""
    N = _require_n(N)
    interval = Interval.unit(N)
    regime = classify(omega, interval, eps_res)
    if regime is not Regime.GENERIC:
        raise RegimeError(f"omega={omega} with N={N} is {regime.value}, not generic")
    note = _near_resonance_note(omega, interval, eps_res)
    K = _k_unit(omega, N)
    w, a1, b1 = _generic_from_k(omega, N, K)
    return CoefficientSet(w, interval, omega, regime, Auxiliaries(K, a1, b1), warning=note)


# -- resonant omega --------------------------------------------------------------


def _resonant_unit_weights(w_eff: float, N: int):
    h = 1.0 / N
    lam = lambda1(h)
    lp = powers(lam, N)
    lN = lp[N]
    z = TWO_PI_I * w_eff
    eh = math.exp(h)
    eh1 = math.expm1(h)
    den = z * (z - 1.0) * lam * eh1 * (lN + 1.0)
    a1 = (eh - lam) * (1.0 - lam) / den
    b1 = (1.0 - eh * lam) * (1.0 - lam) / den
    beta = np.arange(1, N)
    w = np.empty(N + 1, dtype=complex)
    w[1:N] = a1 * lp[beta] + b1 * lp[N - beta]
    lead = z * (1.0 - z) * (-eh1)
    w[0] = (
        (z * (-eh1) - 1.0) / lead
        + a1 * lam * lam / ((1.0 - lam) * (eh - lam))
        + b1 * lN / ((1.0 - lam) * (1.0 - lam * eh))
    )
    w[N] = (
        (z * eh1 - eh) / lead
        + a1 * eh * lN / ((1.0 - lam) * (eh - lam))
        + b1 * eh * lam * lam / ((1.0 - lam) * (1.0 - lam * eh))
    )
    return w, a1, b1


def coeffs_unit_resonant(omega: float, N: int, eps_res: float = DEFAULT_EPS_RES) -> CoefficientSet:
    """Optimal weights on [0, 1] when ``omega * h`` is a nonzero integer."""
    N = _require_n(N)
    interval = Interval.unit(N)
    regime = classify(omega, interval, eps_res)
    if regime is not Regime.RESONANT:
        raise RegimeError(f"omega={omega} with N={N} is {regime.value}, not resonant")
    w, a1, b1 = _resonant_unit_weights(omega, N)
    return CoefficientSet(w, interval, omega, regime, Auxiliaries(None, a1, b1))


# -- general interval ------------------------------------------------------------


def coeffs_interval(
    omega: float, interval: Interval, eps_res: float = DEFAULT_EPS_RES
) -> CoefficientSet:
    """Optimal weights on ``[a, b]``; dispatches on the regime of ``omega * h``.

    The rule is exact for ``1`` and ``exp(-(x - a)/(b - a))``, the image of
    ``{1, e^{-y}}`` under the affine map.
    """
    _require_n(interval.N)
    N = interval.N
    L = interval.length
    regime = classify(omega, interval, eps_res)
    if regime is Regime.ZERO:
        w, K = _zero_unit_weights(N)
        return CoefficientSet(L * w, interval, 0.0, regime, Auxiliaries(K=K))

    scale = L * cmath.exp(TWO_PI_I * omega * interval.a)
    w_eff = omega * L
    if regime is Regime.RESONANT:
        w, a1, b1 = _resonant_unit_weights(w_eff, N)
        return CoefficientSet(scale * w, interval, omega, regime, Auxiliaries(None, a1, b1))

    note = _near_resonance_note(omega, interval, eps_res)
    K = _k_interval(omega, interval)
    w, a1, b1 = _generic_from_k(w_eff, N, K)
    return CoefficientSet(scale * w, interval, omega, regime, Auxiliaries(K, a1, b1), warning=note)


def scaled_unit_weights(omega: float, interval: Interval, eps_res: float = DEFAULT_EPS_RES) -> np.ndarray:
    """``(b - a) e^{2 pi i omega a}`` times the unit-interval weights at ``omega (b - a)``.

    Independent second route to :func:`coeffs_interval`.
    """
    N = interval.N
    w_eff = omega * interval.length
    unit = Interval.unit(N)
    regime = classify(w_eff, unit, eps_res)
    if regime is Regime.ZERO:
        base = coeffs_unit_zero(N).weights
    elif regime is Regime.RESONANT:
        base = coeffs_unit_resonant(w_eff, N, eps_res).weights
    else:
        base = coeffs_unit_generic(w_eff, N, eps_res).weights
    return interval.length * cmath.exp(TWO_PI_I * omega * interval.a) * base
