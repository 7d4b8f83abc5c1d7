"""Lattice kernel for the operator d^4/dx^4 - d^2/dx^2.

Everything here depends only on the step size ``h``: the palindromic
quadratic whose small root ``lambda1`` drives the boundary layers of the
optimal weights, the fundamental solution ``g2`` and its discrete inverse
``d2`` on the lattice ``h * Z``.

Small-``h`` cancellation is the main numerical hazard. Both ``sinh(x) - x``
and ``x cosh(x) - sinh(x)`` are O(x^3) and are evaluated by their Taylor
series below ``_SERIES_CUTOFF``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ConfigurationError, DomainError

_SERIES_CUTOFF = 0.5
_SERIES_TERMS = 10


def _odd_series(x, coef):
    """Evaluate sum_k coef(k) * x**(2k+1), k = 1.._SERIES_TERMS, by Horner in x**2."""
    x2 = x * x
    acc = np.zeros_like(x)
    for k in range(_SERIES_TERMS, 0, -1):
        acc = acc * x2 + coef(k)
    return acc * x2 * x


def sinh_minus_x(x):
    """``sinh(x) - x`` without cancellation near zero."""
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < _SERIES_CUTOFF
    series = _odd_series(np.where(small, x, 0.0), lambda k: 1.0 / math.factorial(2 * k + 1))
    with np.errstate(over="ignore"):
        direct = np.sinh(np.where(small, 1.0, x)) - np.where(small, 1.0, x)
    out = np.where(small, series, direct)
    return out[()] if out.ndim == 0 else out


def x_cosh_minus_sinh(x):
    """``x cosh(x) - sinh(x)`` without cancellation near zero."""
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < _SERIES_CUTOFF
    series = _odd_series(np.where(small, x, 0.0), lambda k: 2.0 * k / math.factorial(2 * k + 1))
    xs = np.where(small, 1.0, x)
    with np.errstate(over="ignore", invalid="ignore"):
        direct = xs * np.cosh(xs) - np.sinh(xs)
    out = np.where(small, series, direct)
    return out[()] if out.ndim == 0 else out


def g2(x):
    """Fundamental solution ``sgn(x)/2 * (sinh(x) - x)``.

    Even in ``x``; evaluated as ``(sinh|x| - |x|)/2`` so that both parity
    and small-argument accuracy are exact by construction.
    """
    return 0.5 * sinh_minus_x(np.abs(x))


def g2_antiderivative(x):
    """Odd antiderivative of :func:`g2` vanishing at 0.

    ``sgn(x)/2 * (cosh(x) - 1 - x**2/2)``; the bracket is O(x^4) and uses
    the identity ``cosh(x) - 1 - x**2/2 = 2 sinh(x/2)**2 - x**2/2``
    only away from zero.
    """
    x = np.asarray(x, dtype=float)
    ax = np.abs(x)
    small = ax < _SERIES_CUTOFF
    xs = np.where(small, ax, 0.0)
    x2 = xs * xs
    acc = np.zeros_like(xs)
    for k in range(_SERIES_TERMS + 1, 1, -1):
        acc = acc * x2 + 1.0 / math.factorial(2 * k)
    series = acc * x2 * x2
    xl = np.where(small, 1.0, ax)
    with np.errstate(over="ignore"):
        direct = np.cosh(xl) - 1.0 - 0.5 * xl * xl
    out = 0.5 * np.sign(x) * np.where(small, series, direct)
    return out[()] if out.ndim == 0 else out


def _check_step(h):
    if not (isinstance(h, (int, float, np.floating)) and math.isfinite(h)) or h <= 0:
        raise DomainError(f"step size must be a positive finite number, got {h!r}")
    return float(h)


def quadratic_coefficients(h):
    """Return ``(p, q)`` with ``P2(lam) = p*lam**2 + q*lam + p``.

    ``p = 1 + 2h e^h - e^{2h}`` and ``q = -2(1 - e^{2h} + h(e^{2h} + 1))``,
    rewritten as ``p = -2 e^h (sinh h - h)`` and ``q = -4 e^h (h cosh h - sinh h)``.
    """
    h = _check_step(h)
    eh = math.exp(h)
    return -2.0 * eh * float(sinh_minus_x(h)), -4.0 * eh * float(x_cosh_minus_sinh(h))


def p2(lam, h):
    """Evaluate the quadratic ``P2`` at ``lam``."""
    p, q = quadratic_coefficients(h)
    return (p * lam + q) * lam + p


def lambda1(h) -> float:
    """Root of ``P2`` inside the unit disc.

    Dividing ``P2`` by ``p`` gives ``lam**2 + 2 r lam + 1`` with
    ``r = (h cosh h - sinh h) / (sinh h - h) > 1``. The large root
    ``-r - sqrt(r**2 - 1)`` is free of cancellation; its reciprocal is
    the answer since the roots multiply to one.
    """
    h = _check_step(h)
    try:
        r = float(x_cosh_minus_sinh(h)) / float(sinh_minus_x(h))
    except (OverflowError, ZeroDivisionError) as exc:
        raise DomainError(f"step size {h} outside the representable range") from exc
    if not math.isfinite(r) or r <= 1.0:
        raise DomainError(f"no real root inside the unit disc for h={h}")
    big = -r - math.sqrt((r - 1.0) * (r + 1.0))
    lam = 1.0 / big
    if not abs(lam) < 1.0:
        raise DomainError(f"|lambda1| >= 1 for h={h}")
    return lam


@dataclass(frozen=True)
class KernelContext:
    """Scalars of the discrete operator for one step size."""

    h: float
    lambda1: float
    p: float
    A: float
    C: float

    @classmethod
    def from_step(cls, h) -> "KernelContext":
        h = _check_step(h)
        lam = lambda1(h)
        p, _ = quadratic_coefficients(h)
        eh = math.exp(h)
        # lam + 1/lam = -2r; keeps C and A free of the (lam**2 + 1)/lam division
        lam_sum = lam + 1.0 / lam
        C = (1.0 + eh) ** 2 - eh * lam_sum
        A = 2.0 * (lam - 1.0) * lam * eh * (2.0 * math.cosh(h) - lam_sum) / (lam + 1.0)
        return cls(h=h, lambda1=lam, p=p, A=A, C=C)


def d2(beta: int, ctx: KernelContext) -> float:
    """Discrete analogue of d^4/dx^4 - d^2/dx^2 at lattice index ``beta``."""
    k = abs(int(beta))
    if k == 0:
        return (2.0 * ctx.C + ctx.A / ctx.lambda1) / ctx.p
    if k == 1:
        return (-2.0 * math.exp(ctx.h) + ctx.A) / ctx.p
    return ctx.A * powers(ctx.lambda1, k - 1)[-1] / ctx.p


def powers(lam: float, n: int) -> np.ndarray:
    """``[lam**0, ..., lam**n]`` by repeated multiplication (``lam`` may be negative)."""
    out = np.empty(n + 1)
    out[0] = 1.0
    if n:
        out[1:] = np.cumprod(np.full(n, lam))
    return out


def d2_window(ctx: KernelContext, M: int) -> np.ndarray:
    """``d2(beta)`` for ``beta = -M..M``."""
    M = int(M)
    lam_pows = powers(ctx.lambda1, max(M - 1, 0))
    half = np.empty(M + 1)
    half[0] = d2(0, ctx)
    if M >= 1:
        half[1] = d2(1, ctx)
    if M >= 2:
        half[2:] = ctx.A * lam_pows[1:M] / ctx.p
    return np.concatenate([half[:0:-1], half])


@dataclass(frozen=True)
class LatticeFunction:
    """Real values on ``beta = -half_width..half_width``."""

    half_width: int
    values: np.ndarray

    def __post_init__(self):
        if len(self.values) != 2 * self.half_width + 1:
            raise ValueError("values length does not match half_width")

    def __getitem__(self, beta: int) -> float:
        if abs(beta) > self.half_width:
            raise IndexError(beta)
        return float(self.values[beta + self.half_width])

    @property
    def betas(self) -> np.ndarray:
        return np.arange(-self.half_width, self.half_width + 1)


def delta(half_width: int) -> LatticeFunction:
    values = np.zeros(2 * half_width + 1)
    values[half_width] = 1.0
    return LatticeFunction(half_width, values)


def convolve_check(
    ctx: KernelContext,
    M: int,
    sample: Callable[[np.ndarray], np.ndarray] | None = None,
) -> LatticeFunction:
    """Truncated convolution ``sum_{|gamma|<=M} d2(gamma) * sample(h(beta - gamma))``.

    ``sample`` defaults to :func:`g2`, in which case the result should be
    the discrete delta. Values are returned for ``|beta| <= M // 2``.
    """
    if M < 10:
        raise ConfigurationError(f"window half-width M={M} is too small (need M >= 10)")
    sample = g2 if sample is None else sample
    D = d2_window(ctx, M)
    gammas = np.arange(-M, M + 1)
    half = M // 2
    betas = np.arange(-half, half + 1)
    grid = ctx.h * (betas[:, None] - gammas[None, :])
    return LatticeFunction(half, np.asarray(sample(grid), dtype=float) @ D)


def truncation_bound(ctx: KernelContext, M: int, sample=None) -> np.ndarray:
    """Error allowance for :func:`convolve_check` at each returned ``beta``.

    Tail term ``2 |lambda1|**(M/2) * max|sample|`` plus the standard
    floating-point summation bound ``n * eps * sum |d2 * sample|``.
    """
    sample = g2 if sample is None else sample
    D = d2_window(ctx, M)
    gammas = np.arange(-M, M + 1)
    half = M // 2
    betas = np.arange(-half, half + 1)
    S = np.abs(np.asarray(sample(ctx.h * (betas[:, None] - gammas[None, :])), dtype=float))
    tail = 2.0 * abs(ctx.lambda1) ** (M / 2) * S.max()
    rounding = len(gammas) * np.finfo(float).eps * (S @ np.abs(D))
    return tail + rounding
