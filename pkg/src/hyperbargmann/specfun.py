"""Orthogonal polynomials, terminating hypergeometric sums and Gamma ratios.

Every evaluator accepts scalars or numpy arrays for the argument and
returns a value of matching shape. Laguerre polynomials also accept
complex arguments (needed when integrating along rotated rays).
"""

from __future__ import annotations

import math
import numbers

import numpy as np
from scipy.special import gammaln

__all__ = [
    "laguerre",
    "laguerre_table",
    "jacobi",
    "jacobi_deflated",
    "gauss2f1_terminating",
    "kummer1f1_terminating",
    "log_gamma_ratio",
    "log_factorial",
]

T_SLACK = 1e-12


def _check_degree(k, name="k"):
    if isinstance(k, bool) or not isinstance(k, numbers.Integral):
        raise ValueError(f"{name} must be an integer, got {k!r}")
    if k < 0:
        raise ValueError(f"{name} must be non-negative, got {k}")
    return int(k)


def _is_negative_integer(a) -> bool:
    return float(a).is_integer() and a < 0


def _scalar_out(x, out):
    return out[()] if np.ndim(x) == 0 else out


# ---------------------------------------------------------------------------
# Laguerre


def laguerre(k: int, alpha: float, x):
    """Generalized Laguerre polynomial L_k^(alpha)(x) by the degree recurrence."""
    k = _check_degree(k)
    x = np.asarray(x)
    if not np.all(np.isfinite(x)):
        raise ValueError("laguerre: argument must be finite")
    x = x.astype(np.result_type(x, float))
    prev = np.ones_like(x)
    if k == 0:
        return _scalar_out(x, prev)
    cur = 1 + alpha - x
    for n in range(1, k):
        prev, cur = cur, ((2 * n + 1 + alpha - x) * cur - (n + alpha) * prev) / (n + 1)
    return _scalar_out(x, cur)


def laguerre_table(kmax: int, alpha: float, x) -> np.ndarray:
    """Stack of L_0 .. L_kmax at x, shape (kmax + 1, *x.shape)."""
    kmax = _check_degree(kmax, "kmax")
    x = np.asarray(x)
    x = x.astype(np.result_type(x, float))
    out = np.empty((kmax + 1,) + x.shape, dtype=x.dtype)
    out[0] = 1
    if kmax >= 1:
        out[1] = 1 + alpha - x
    for n in range(1, kmax):
        out[n + 1] = ((2 * n + 1 + alpha - x) * out[n] - (n + alpha) * out[n - 1]) / (n + 1)
    return out


# ---------------------------------------------------------------------------
# Jacobi


def _check_t(t):
    t = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(t)):
        raise ValueError("jacobi: argument must be finite")
    if np.any(np.abs(t) > 1 + T_SLACK):
        raise ValueError("jacobi: argument outside [-1, 1]")
    return t


def _jacobi_recurrence(k, a, b, t):
    prev = np.ones_like(t)
    if k == 0:
        return prev
    cur = (a + 1) + (a + b + 2) * (t - 1) / 2
    ab = a + b
    for n in range(1, k):
        s = 2 * n + ab
        c1 = 2 * (n + 1) * (n + ab + 1) * s
        c2 = (s + 1) * (s + 2) * s
        c3 = (s + 1) * (a * a - b * b)
        c4 = 2 * (n + a) * (n + b) * (s + 2)
        prev, cur = cur, ((c2 * t + c3) * cur - c4 * prev) / c1
    return cur


def _jacobi_hypergeometric(k, a, b, t, deflate=0):
    """Finite 2F1 form of P_k^(a,b), stable for a negative integer first parameter.

    Uses P_k^(a,b)(t) = (-1)^k P_k^(b,a)(-t) and
    P_k^(b,a)(x) = (1+b)_k / k! ((1+x)/2)^k 2F1(-k, -(a+k); 1+b; (x-1)/(x+1)),
    multiplied through so that no division by (1+x) occurs. With
    ``deflate = s`` the result is divided by ((t-1)/2)^s, which requires
    every surviving term to carry that factor (true when a = -s).
    """
    if _is_negative_integer(b) and -b <= k:
        raise ValueError("jacobi: second parameter hits a pole of (1+b)_j")
    lo = (1 - t) / 2      # (1 - t)/2, equals |z|^2 for t = 1 - 2|z|^2
    hi = -(1 + t) / 2     # ((x - 1)/2) with x = -t
    terms = k
    if float(a + k).is_integer() and a + k >= 0:
        # (-(a+k))_j vanishes beyond j = a + k
        terms = min(k, int(a + k))
    if deflate and terms > k - deflate:
        raise ValueError("jacobi_deflated: polynomial lacks the requested factor")
    # coefficient of lo^(k-j) hi^j, starting from (1+b)_k / k!
    coef = math.exp(gammaln(1 + b + k) - gammaln(1 + b) - gammaln(k + 1)) if b > -1 else (
        _pochhammer(1 + b, k) / math.factorial(k))
    total = np.zeros_like(t)
    for j in range(terms + 1):
        total = total + coef * lo ** (k - j - deflate) * hi ** j
        coef *= (j - k) * (-(a + k) + j) / ((1 + b + j) * (j + 1))
    sign = (-1) ** k * (-1) ** deflate
    return sign * total


def _pochhammer(x, n):
    out = 1.0
    for j in range(n):
        out *= x + j
    return out


def jacobi(k: int, a: float, b: float, t):
    """Jacobi polynomial P_k^(a,b)(t) for t in [-1, 1].

    Generic parameters (a, b > -1) go through the three-term recurrence in
    the degree. Negative-integer parameters, where the recurrence
    coefficients degenerate, go through the terminating 2F1 sum.
    """
    k = _check_degree(k)
    t = _check_t(t)
    if a > -1 and b > -1:
        out = _jacobi_recurrence(k, a, b, t)
    elif b > -1 or not _is_negative_integer(b):
        out = _jacobi_hypergeometric(k, a, b, t)
    else:
        # swap so the non-integer parameter sits in the Pochhammer denominator
        out = (-1) ** k * _jacobi_hypergeometric(k, b, a, -t)
    return _scalar_out(t, out)


def jacobi_deflated(k: int, s: int, b: float, t):
    """P_k^(-s,b)(t) / ((t-1)/2)^s for 1 <= s <= k.

    The quotient is a polynomial of degree k - s, finite at t = 1 where the
    plain evaluation would need 0/0.
    """
    k = _check_degree(k)
    s = _check_degree(s, "s")
    if not 0 <= s <= k:
        raise ValueError(f"jacobi_deflated: need 0 <= s <= k, got s={s}, k={k}")
    t = _check_t(t)
    if s == 0:
        return jacobi(k, 0.0, b, t)
    return _scalar_out(t, _jacobi_hypergeometric(k, -s, b, t, deflate=s))


# ---------------------------------------------------------------------------
# Terminating hypergeometric sums


def gauss2f1_terminating(k: int, b: float, c: float, y):
    """Sum_{j<=k} (-k)_j (b)_j / ((c)_j j!) y^j."""
    k = _check_degree(k)
    y = np.asarray(y)
    y = y.astype(np.result_type(y, float))
    last = k
    if _is_negative_integer(b) and -b < k:
        last = int(-b)
    if _is_negative_integer(c) and -c < last:
        raise ValueError(f"gauss2f1_terminating: pole in (c)_j with c={c}")
    if c == 0 and last > 0:
        raise ValueError("gauss2f1_terminating: pole in (c)_j with c=0")
    total = np.ones_like(y)
    term = np.ones_like(y)
    for j in range(last):
        term = term * ((j - k) * (b + j) / ((c + j) * (j + 1))) * y
        total = total + term
    return _scalar_out(y, total)


def kummer1f1_terminating(m: int, c: float, x):
    """Sum_{j<=m} (-m)_j / ((c)_j j!) x^j."""
    m = _check_degree(m, "m")
    if float(c).is_integer() and c <= 0 and -c < m:
        raise ValueError(f"kummer1f1_terminating: pole in (c)_j with c={c}")
    x = np.asarray(x)
    x = x.astype(np.result_type(x, float))
    total = np.ones_like(x)
    term = np.ones_like(x)
    for j in range(m):
        term = term * ((j - m) / ((c + j) * (j + 1))) * x
        total = total + term
    return _scalar_out(x, total)


# ---------------------------------------------------------------------------
# Gamma ratios

_STIRLING_MIN = 30.0
# B_{2n} / (2n (2n - 1))
_STIRLING = (1 / 12, -1 / 360, 1 / 1260, -1 / 1680, 1 / 1188, -691 / 360360)


def _stirling_tail(x):
    inv = 1 / x
    inv2 = inv * inv
    acc = np.zeros_like(x)
    for c in reversed(_STIRLING):
        acc = acc * inv2 + c
    return acc * inv


def log_gamma_ratio(p, q):
    """ln Gamma(p) - ln Gamma(q) without the cancellation of a plain difference.

    For large arguments the Stirling expansion is differenced term by term,
    so the large (x - 1/2) ln x pieces never meet as separate numbers.
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if np.any(~(p > 0)) or np.any(~(q > 0)):
        raise ValueError("log_gamma_ratio: arguments must be positive")
    shape = np.broadcast(p, q).shape
    p = np.broadcast_to(p, shape).ravel()
    q = np.broadcast_to(q, shape).ravel()
    out = gammaln(p) - gammaln(q)
    big = (p >= _STIRLING_MIN) & (q >= _STIRLING_MIN)
    if np.any(big):
        pb, qb = p[big], q[big]
        d = pb - qb
        out[big] = (d * np.log(qb) + (pb - 0.5) * np.log1p(d / qb) - d
                    + (_stirling_tail(pb) - _stirling_tail(qb)))
    out[p == q] = 0.0
    out = out.reshape(shape)
    return out[()] if out.ndim == 0 else out


def log_factorial(n):
    return gammaln(np.asarray(n, dtype=float) + 1)
