"""Brute-force ground truth: assemble and densely solve the optimality system.

Unknowns are the weights ``C_0..C_N`` on ``[0, 1]`` plus two multipliers
``p0`` (constants) and ``d`` (``e^{-x}``). Rows ``0..N`` say that the
kernel-weighted sum at each node reproduces ``f2``; the last two rows are
the moment conditions. Nothing here touches the closed-form formulas.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .coefficients import (
    DEFAULT_EPS_RES,
    CoefficientSet,
    Interval,
    classify,
)
from .errors import ContractError, DomainError, RegimeError, SolverError
from .kernel import g2, g2_antiderivative

PIVOT_RTOL = 1e-14


def f2_rhs(beta, omega: float, N: int):
    """Right-hand side of the node equations at ``x = h*beta``, ``h = 1/N``.

    Equals ``int_0^1 exp(2 pi i omega y) g2(x - y) dy``.
    """
    if omega == 0:
        raise RegimeError("f2_rhs is undefined at omega = 0; use f2_rhs_zero")
    t = np.asarray(beta, dtype=float) / N
    z = 2j * math.pi * omega
    ez = cmath.exp(z)
    out = (
        np.exp(-t) / 4 * (ez * math.e - 2 * np.exp((z + 1) * t) + 1) / (z + 1)
        - np.exp(t) / 4 * (ez / math.e - 2 * np.exp((z - 1) * t) + 1) / (z - 1)
        + (ez - 2 * np.exp(z * t) + 1) / (2 * z * z)
        + (t * ez + t - ez) / (2 * z)
    )
    return out[()] if out.ndim == 0 else out


def f2_rhs_zero(beta, N: int):
    """Limit of :func:`f2_rhs` as omega -> 0: ``int_0^1 g2(x - y) dy``."""
    t = np.asarray(beta, dtype=float) / N
    out = g2_antiderivative(t) - g2_antiderivative(t - 1.0)
    return out[()] if np.ndim(out) == 0 else out


def moment_targets(omega: float) -> tuple[complex, complex]:
    """Exact ``int_0^1 e^{2 pi i omega y} * {1, e^{-y}} dy``."""
    if omega == 0:
        return 1.0 + 0j, complex(-math.expm1(-1.0))
    z = 2j * math.pi * omega
    return (cmath.exp(z) - 1) / z, (cmath.exp(z - 1) - 1) / (z - 1)


def _labels(N):
    return tuple(f"C{k}" for k in range(N + 1)) + ("p0", "d")


@dataclass(frozen=True)
class OptimalitySystem:
    matrix: np.ndarray
    rhs: np.ndarray
    omega: float
    N: int
    layout: tuple[str, ...]

    @property
    def size(self) -> int:
        return self.N + 3


@dataclass(frozen=True)
class OracleSolution:
    coefficients: CoefficientSet
    p0: complex
    d: complex
    residual: float
    matrix_norm: float


def assemble(omega: float, N: int, order=None) -> OptimalitySystem:
    """Build the ``(N+3)``-square system on ``[0, 1]``.

    ``order`` optionally permutes the unknowns (a sequence of column
    indices into the natural layout ``C_0..C_N, p0, d``).
    """
    if int(N) != N or N < 1:
        raise DomainError(f"N must be a positive integer, got {N!r}")
    N = int(N)
    n = N + 3
    h = 1.0 / N
    x = h * np.arange(N + 1)
    ex = np.exp(-x)
    A = np.zeros((n, n), dtype=complex)
    b = np.zeros(n, dtype=complex)
    A[: N + 1, : N + 1] = g2(x[:, None] - x[None, :])
    A[: N + 1, N + 1] = 1.0
    A[: N + 1, N + 2] = ex
    A[N + 1, : N + 1] = 1.0
    A[N + 2, : N + 1] = ex
    beta = np.arange(N + 1)
    b[: N + 1] = f2_rhs_zero(beta, N) if omega == 0 else f2_rhs(beta, omega, N)
    b[N + 1], b[N + 2] = moment_targets(omega)

    layout = _labels(N)
    if order is not None:
        order = list(order)
        if sorted(order) != list(range(n)):
            raise ContractError("order must be a permutation of the unknown indices")
        A = A[:, order]
        layout = tuple(layout[k] for k in order)
    return OptimalitySystem(A, b, float(omega), N, layout)


def solve(system: OptimalitySystem, eps_res: float = DEFAULT_EPS_RES) -> OracleSolution:
    """Dense LU solve with partial pivoting."""
    A, b = system.matrix, system.rhs
    norm = float(np.abs(A).max())
    lu, piv = scipy.linalg.lu_factor(A)
    pivots = np.abs(np.diag(lu))
    smallest = float(pivots.min())
    if smallest <= PIVOT_RTOL * norm:
        raise SolverError(f"matrix singular to working precision (pivot {smallest:.3e})", smallest)
    x = scipy.linalg.lu_solve((lu, piv), b)
    residual = float(np.abs(A @ x - b).max())

    by_label = dict(zip(system.layout, x))
    N = system.N
    weights = np.array([by_label[f"C{k}"] for k in range(N + 1)])
    interval = Interval.unit(N)
    coeffs = CoefficientSet(
        weights,
        interval,
        system.omega,
        classify(system.omega, interval, eps_res),
        p0=complex(by_label["p0"]),
        d=complex(by_label["d"]),
    )
    return OracleSolution(coeffs, coeffs.p0, coeffs.d, residual, norm)


def solve_interval(omega: float, interval: Interval, eps_res: float = DEFAULT_EPS_RES) -> OracleSolution:
    """Oracle weights on ``[a, b]`` via the affine map to ``[0, 1]``.

    ``p0`` and ``d`` are reported for the unit-interval system.
    """
    unit = solve(assemble(omega * interval.length, interval.N), eps_res)
    scale = interval.length * cmath.exp(2j * math.pi * omega * interval.a)
    coeffs = CoefficientSet(
        scale * unit.coefficients.weights,
        interval,
        float(omega),
        classify(omega, interval, eps_res),
        p0=unit.p0,
        d=unit.d,
    )
    return OracleSolution(coeffs, unit.p0, unit.d, unit.residual, unit.matrix_norm)


def compare(oracle: OracleSolution | CoefficientSet, closed: CoefficientSet) -> float:
    """Largest entrywise ``|oracle - closed|``."""
    ref = oracle.coefficients if isinstance(oracle, OracleSolution) else oracle
    if ref.weights.shape != closed.weights.shape:
        raise ContractError(f"shape mismatch: {ref.weights.shape} vs {closed.weights.shape}")
    if ref.interval != closed.interval or ref.omega != closed.omega:
        raise ContractError("coefficient sets belong to different (omega, interval)")
    return float(np.abs(ref.weights - closed.weights).max())
