import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from sardquad import kernel
from sardquad.errors import ConfigurationError, DomainError
from sardquad.kernel import KernelContext, convolve_check, d2, g2, lambda1, p2


def mp_lambda1_radical(h):
    """Closed-form radical for the small root at high precision.

    The discriminant term is 2h(1 - e^{2h}); with 2h(1 - e^h) the expression
    is not a root of the quadratic at all.
    """
    h = mpmath.mpf(h)
    e, e2 = mpmath.exp(h), mpmath.exp(2 * h)
    num = h * (e2 + 1) - e2 + 1 - (e - 1) * mpmath.sqrt(h**2 * (e + 1) ** 2 + 2 * h * (1 - e2))
    return num / (1 - e2 + 2 * h * e)


def mp_p2(lam, h):
    e, e2 = mpmath.exp(h), mpmath.exp(2 * h)
    p = 1 + 2 * h * e - e2
    return p * lam**2 - 2 * (1 - e2 + h * (e2 + 1)) * lam + p


def test_lambda1_near_limit():
    assert abs(lambda1(1 / 100) - (math.sqrt(3) - 2)) < 1e-3


def test_lambda1_bisection_oracle(mp50):
    h = mpmath.mpf("0.5")
    lo, hi = mpmath.mpf(-1) + mpmath.mpf(10) ** -30, mpmath.mpf(0)
    flo = mp_p2(lo, h)
    for _ in range(200):
        mid = (lo + hi) / 2
        if mp_p2(mid, h) * flo > 0:
            lo, flo = mid, mp_p2(mid, h)
        else:
            hi = mid
    assert abs(lambda1(0.5) - float(lo)) <= 1e-12


@pytest.mark.parametrize("N", [1, 2, 3, 7, 10, 33, 100, 250, 999, 1000])
def test_lambda1_matches_radical(mp50, N):
    assert lambda1(1 / N) == pytest.approx(float(mp_lambda1_radical(mpmath.mpf(1) / N)), rel=1e-13, abs=0)


def test_lambda1_root_and_containment_grid():
    for N in range(1, 1001):
        h = 1 / N
        lam = lambda1(h)
        p, q = kernel.quadratic_coefficients(h)
        scale = abs(p) * lam * lam + abs(q * lam) + abs(p)
        assert abs(p2(lam, h)) <= 1e-12 * scale
        assert abs(lam) < 1


def test_lambda1_reciprocal_pair():
    for h in (0.01, 0.3, 2.0):
        lam = lambda1(h)
        p, q = kernel.quadratic_coefficients(h)
        other = -q / p - lam  # sum of roots
        assert lam * other == pytest.approx(1.0, rel=1e-12)


def test_lambda1_quadratic_convergence():
    errs = [abs(lambda1(h) - (math.sqrt(3) - 2)) for h in (1 / 10, 1 / 20, 1 / 40)]
    for coarse, fine in zip(errs, errs[1:]):
        assert 3.5 <= coarse / fine <= 4.5


@pytest.mark.parametrize("h", [0.0, -0.1, float("nan"), float("inf")])
def test_lambda1_rejects_bad_step(h):
    with pytest.raises(DomainError):
        lambda1(h)


def test_g2_values(mp50):
    assert g2(0.0) == 0.0
    assert g2(-1.0) == g2(1.0)
    expected = float((mpmath.sinh(1) - 1) / 2)
    assert g2(1.0) == pytest.approx(expected, rel=1e-15)
    assert g2(1.0) == pytest.approx(0.0876005968219007, rel=1e-14)


@given(st.floats(min_value=-30, max_value=30, allow_nan=False))
def test_g2_even_and_accurate(x):
    assert g2(x) == g2(-x)
    y = x
    # sinh x - x loses about 2*log10(1/|x|) digits to cancellation
    with mpmath.workdps(40 + 3 * max(0, -math.floor(math.log10(abs(x) or 1.0)))):
        x = mpmath.mpf(x)
        ref = mpmath.sign(x) / 2 * (mpmath.sinh(x) - x)
    assert g2(y) == pytest.approx(float(ref), rel=1e-13, abs=1e-300)


def test_g2_antiderivative_matches_quadrature():
    for x in (-2.0, -0.3, 0.001, 0.7, 3.0):
        with mpmath.workdps(30):
            ref = mpmath.quad(lambda u: mpmath.sign(u) / 2 * (mpmath.sinh(u) - u), [0, x])
        assert kernel.g2_antiderivative(x) == pytest.approx(float(ref), rel=1e-12, abs=1e-300)


def test_d2_tail_and_parity():
    for h in (0.05, 0.1, 0.7):
        ctx = KernelContext.from_step(h)
        assert d2(3, ctx) == pytest.approx(ctx.lambda1 * d2(2, ctx), rel=1e-14)
        for k in range(6):
            assert d2(-k, ctx) == d2(k, ctx)
        w = kernel.d2_window(ctx, 20)
        np.testing.assert_array_equal(w, w[::-1])
        np.testing.assert_allclose(w[23:] / w[22:-1], ctx.lambda1, rtol=1e-13)


def mp_d2_literal(h, M):
    """Three-branch D2 written out directly at high precision."""
    h = mpmath.mpf(h)
    lam = mp_lambda1_radical(h)
    e = mpmath.exp(h)
    p = 1 + 2 * h * e - mpmath.exp(2 * h)
    C = 1 + 2 * e + mpmath.exp(2 * h) - e * (lam**2 + 1) / lam
    A = 2 * (lam - 1) * (lam * (mpmath.exp(2 * h) + 1) - e * (lam**2 + 1)) / (lam + 1)

    def D(b):
        b = abs(b)
        if b >= 2:
            return A * lam ** (b - 1) / p
        return (-2 * e + A) / p if b == 1 else (2 * C + A / lam) / p

    return D


def test_d2_center_from_convolution_identity():
    h, M = mpmath.mpf("0.1"), 200
    with mpmath.workdps(60):
        D = mp_d2_literal(h, M)

        def G(x):
            return mpmath.sign(x) / 2 * (mpmath.sinh(x) - x)

        # identity at beta=1 isolates d2(0) because g2(h) != 0
        rest = mpmath.fsum(D(g) * G(h * (1 - g)) for g in range(-M, M + 1) if g != 0)
        d0 = (0 - rest) / G(h)
        d0 = float(d0)
    ctx = KernelContext.from_step(0.1)
    assert d2(0, ctx) == pytest.approx(d0, rel=1e-10)


def test_delta_identity():
    ctx = KernelContext.from_step(0.1)
    conv = convolve_check(ctx, 200)
    assert conv[0] == pytest.approx(1.0, abs=1e-8)
    assert abs(conv[5]) < 1e-8
    inner = np.abs(conv.betas) <= 50
    np.testing.assert_allclose(conv.values[inner], kernel.delta(conv.half_width).values[inner], atol=1e-8)


@pytest.mark.parametrize(
    "sample",
    [np.exp, lambda x: np.exp(-x), np.ones_like, lambda x: x],
    ids=["exp", "exp_neg", "one", "linear"],
)
def test_annihilation(sample):
    ctx = KernelContext.from_step(0.1)
    vals = convolve_check(ctx, 200, sample).values
    bound = kernel.truncation_bound(ctx, 200, sample)
    assert np.all(np.abs(vals) <= bound)


def test_window_too_small():
    with pytest.raises(ConfigurationError):
        convolve_check(KernelContext.from_step(0.1), 9)


def test_series_branches_agree_at_cutoff():
    for f in (kernel.sinh_minus_x, kernel.x_cosh_minus_sinh):
        lo, hi = f(np.nextafter(0.5, 0)), f(0.5)
        assert lo == pytest.approx(hi, rel=1e-13)
