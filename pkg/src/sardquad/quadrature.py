"""Apply weight sets to integrands and measure the error against exact values."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import integrate

from .coefficients import DEFAULT_EPS_RES, CoefficientSet, Interval, coeffs_interval
from .errors import ContractError, EvaluationError
from .oracle import solve_interval


@dataclass(frozen=True)
class Integrand:
    id: str
    evaluate: Callable[[np.ndarray], np.ndarray]

    def __call__(self, x):
        return self.evaluate(x)


INTEGRANDS = {
    "one": Integrand("one", lambda x: np.ones_like(np.asarray(x, dtype=float))),
    "x": Integrand("x", lambda x: np.asarray(x, dtype=float)),
    "exp_x": Integrand("exp_x", np.exp),
    "x_exp_x": Integrand("x_exp_x", lambda x: np.asarray(x, dtype=float) * np.exp(x)),
}

# reference integrals over [-1, 1]
REFERENCE_IDS = {"g1": "x", "g2": "exp_x", "g3": "x_exp_x"}


@dataclass(frozen=True)
class ErrorRecord:
    integrand: str
    omega: float
    N: int
    interval: tuple[float, float]
    approx: complex
    exact: complex
    R: float


def optimal_coefficients(
    omega: float, interval: Interval, eps_res: float = DEFAULT_EPS_RES
) -> CoefficientSet:
    """Closed-form weights for ``N >= 2``; the dense oracle for ``N = 1``."""
    if interval.N == 1:
        return solve_interval(omega, interval, eps_res).coefficients
    return coeffs_interval(omega, interval, eps_res)


def apply(coeffs: CoefficientSet, f) -> complex:
    """``sum_beta C_beta f(a + h beta)``."""
    x = coeffs.interval.nodes
    samples = np.asarray(f(x), dtype=complex)
    if samples.shape != x.shape:
        samples = np.broadcast_to(samples, x.shape)
    bad = ~np.isfinite(samples)
    if bad.any():
        k = int(np.argmax(bad))
        raise EvaluationError(f"non-finite sample at node beta={k}, x={x[k]!r}")
    return complex(coeffs.weights @ samples)


def apply_samples(coeffs: CoefficientSet, samples) -> complex:
    samples = np.asarray(samples, dtype=complex)
    if samples.shape != coeffs.weights.shape:
        raise ContractError(f"expected {len(coeffs)} samples, got {samples.shape}")
    return complex(coeffs.weights @ samples)


def reference_exact(id: str, omega: float) -> complex:
    """Closed-form ``int_{-1}^{1} e^{2 pi i omega x} phi(x) dx`` for the three test integrands.

    ``g1``: phi = x, ``g2``: phi = e^x, ``g3``: phi = x e^x.
    """
    if id not in REFERENCE_IDS:
        raise ContractError(f"unknown reference integral {id!r}; expected one of g1, g2, g3")
    w = omega
    if id == "g1":
        if w == 0:
            return 0j
        t = 2 * math.pi * w
        return 2j / t**2 * (math.sin(t) - t * math.cos(t))
    z = 2j * math.pi * w
    if id == "g2":
        if w == 0:
            return complex((math.e**2 - 1) / math.e)
        return (cmath.exp(z + 1) - cmath.exp(-z - 1)) / (z + 1)
    if w == 0:
        return complex(2 / math.e)
    plus, minus = cmath.exp(z + 1), cmath.exp(-z - 1)
    return (plus + minus) / (z + 1) - (plus - minus) / (z + 1) ** 2


def exact_moment(power: int, rate: float, omega: float, a: float, b: float) -> complex:
    """``int_a^b x**power e^{(2 pi i omega + rate) x} dx`` for ``power`` in {0, 1}."""
    c = 2j * math.pi * omega + rate
    if c == 0:
        return complex(b - a) if power == 0 else complex((b * b - a * a) / 2)
    ea, eb = cmath.exp(c * a), cmath.exp(c * b)
    if power == 0:
        return (eb - ea) / c
    if power == 1:
        return eb * (b / c - 1 / c**2) - ea * (a / c - 1 / c**2)
    raise ContractError("only power 0 or 1 is supported")


_MOMENTS = {"one": (0, 0.0), "x": (1, 0.0), "exp_x": (0, 1.0), "x_exp_x": (1, 1.0)}


def adaptive_exact(f, omega: float, a: float, b: float, tol: float = 1e-14) -> complex:
    """Oscillatory adaptive quadrature (QUADPACK QAWO) for arbitrary ``f``."""
    w = 2 * math.pi * omega

    def part(g, weight):
        if w == 0:
            val = integrate.quad(g, a, b, epsabs=tol, epsrel=tol, limit=500)[0]
            return val if weight == "cos" else 0.0
        return integrate.quad(g, a, b, weight=weight, wvar=w, epsabs=tol, epsrel=tol, limit=500)[0]

    def re(x):
        return complex(f(x)).real

    def im(x):
        return complex(f(x)).imag

    real = part(re, "cos") - part(im, "sin")
    imag = part(re, "sin") + part(im, "cos")
    return complex(real, imag)


def exact_for(integrand: Integrand, omega: float, interval: Interval) -> complex:
    """Exact integral: closed form when known, adaptive quadrature otherwise."""
    if integrand.id in _MOMENTS:
        power, rate = _MOMENTS[integrand.id]
        return exact_moment(power, rate, omega, interval.a, interval.b)
    return adaptive_exact(integrand.evaluate, omega, interval.a, interval.b)


def error_R(coeffs: CoefficientSet, f: Integrand, exact: complex) -> ErrorRecord:
    approx = apply(coeffs, f)
    iv = coeffs.interval
    return ErrorRecord(
        integrand=getattr(f, "id", "custom"),
        omega=coeffs.omega,
        N=iv.N,
        interval=(iv.a, iv.b),
        approx=approx,
        exact=complex(exact),
        R=abs(approx - exact),
    )


def sweep(
    integrand: Integrand,
    omegas: Sequence[float],
    Ns: Sequence[int],
    interval: tuple[float, float] = (-1.0, 1.0),
    exact: Callable[[float], complex] | None = None,
    eps_res: float = DEFAULT_EPS_RES,
) -> list[ErrorRecord]:
    """One record per ``(N, omega)``, rows ordered by ``N`` then ``omega``."""
    omegas, Ns = list(omegas), list(Ns)
    if not omegas or not Ns:
        raise ContractError("sweep needs at least one omega and one N")
    a, b = interval
    records = []
    for N in Ns:
        iv = Interval(a, b, N)
        for w in omegas:
            coeffs = optimal_coefficients(w, iv, eps_res)
            ex = exact(w) if exact is not None else exact_for(integrand, w, iv)
            records.append(error_R(coeffs, integrand, ex))
    return records


def reference_integrand(id: str) -> Integrand:
    return INTEGRANDS[REFERENCE_IDS[id]]


