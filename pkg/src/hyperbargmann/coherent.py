"""Half-line basis psi_k and the coherent states Psi_z of a Landau level."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .eigenspace import DEFAULT_DELTA, _alt_log_coef, _zbar_jacobi, check_disk
from .params import ModelParams
from .quadrature import gauss_laguerre
from .specfun import laguerre, log_factorial

__all__ = [
    "ConvergenceError",
    "RadialFunction",
    "TruncationSpec",
    "psi_basis",
    "psi_table",
    "psi_input",
    "combo_input",
    "powerexp_input",
    "coherent_closed",
    "coherent_series",
    "coherent_norm",
    "inner_halfline",
]


class ConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class RadialFunction:
    """A function of xi > 0 behaving like xi**power * exp(-rate * xi) * poly.

    ``degree`` bounds the polynomial factor. ``analytic`` promises that ``fn``
    accepts complex arguments and is holomorphic in the right half-plane
    (principal-branch powers allowed); the transform then integrates along
    a rotated ray, which is exact for polynomial factors.
    """

    fn: Callable
    power: float
    rate: float
    degree: int = 0
    analytic: bool = False
    label: str = "custom"

    def __call__(self, xi):
        return self.fn(xi)

    def check_admissible(self) -> None:
        if not self.power > 0:
            raise ValueError(f"{self.label}: power must be positive for a finite norm")
        if not 0 < self.rate <= 0.5:
            raise ValueError(f"{self.label}: decay rate must lie in (0, 1/2], got {self.rate}")

    def spot_check(self, samples: Sequence[float] | None = None) -> bool:
        """True when |f| xi^-power e^(rate xi) (1+xi)^-degree stays bounded on samples."""
        xi = np.geomspace(1e-3, 200, 60) if samples is None else np.asarray(samples, float)
        with np.errstate(over="ignore", invalid="ignore"):
            g = (np.abs(self.fn(xi)) * np.exp(self.rate * xi - self.power * np.log(xi))
                 / (1 + xi) ** self.degree)
        if not np.all(np.isfinite(g)):
            return False
        head = g[xi <= 50]
        tail = g[xi > 50]
        bound = head.max() if head.size else 1.0
        return bool(tail.size == 0 or tail.max() <= 10 * bound + 1e-300)


@dataclass(frozen=True)
class TruncationSpec:
    """Series truncation: fixed ``max_terms`` or doubling up to ``limit``."""

    max_terms: int | None = None
    target_tol: float = 1e-13
    start: int = 64
    limit: int = 4096

    def __post_init__(self):
        if self.max_terms is not None and self.max_terms < 1:
            raise ValueError("TruncationSpec: max_terms must be >= 1")
        if not self.target_tol > 0:
            raise ValueError("TruncationSpec: target_tol must be positive")


# ---------------------------------------------------------------------------
# psi basis


def _log_psi_front(params, x):
    # log(xi^(nu-m) e^(-xi/2)); principal branch for complex xi
    return params.half_power * np.log(x) - x / 2


def _psi(params, k, x):
    log_c = 0.5 * (math.lgamma(k + 1) - math.lgamma(params.alpha + 1 + k))
    return np.exp(_log_psi_front(params, x) + log_c) * laguerre(k, params.alpha, x)


def psi_basis(params: ModelParams, k: int, xi):
    """Orthonormal basis function psi_k of L^2((0, inf), dxi/xi)."""
    if isinstance(k, bool) or int(k) != k or k < 0:
        raise ValueError(f"basis index must be a non-negative integer, got {k!r}")
    xi = np.asarray(xi)
    if np.iscomplexobj(xi) or not np.all(xi > 0):
        raise ValueError("psi_basis: xi must be real and positive")
    out = _psi(params, int(k), xi.astype(float))
    return out[()] if out.ndim == 0 else out


def psi_table(params: ModelParams, kmax: int, x) -> np.ndarray:
    """psi_0 .. psi_kmax at x, shape (kmax + 1, *x.shape).

    Runs the Laguerre recurrence on the normalized functions, so the
    exponential factor is applied once up front and large x cannot overflow.
    Accepts complex x (principal branch of xi^(nu-m)).
    """
    x = np.asarray(x)
    x = x.astype(np.result_type(x, float))
    a = params.alpha
    out = np.empty((kmax + 1,) + x.shape, dtype=x.dtype)
    out[0] = np.exp(_log_psi_front(params, x) - 0.5 * math.lgamma(a + 1))
    if kmax >= 1:
        out[1] = (1 + a - x) * out[0] / math.sqrt(a + 1)
    for k in range(1, kmax):
        r1 = math.sqrt((k + 1) / (a + 1 + k))
        r2 = math.sqrt((k + 1) * k / ((a + 1 + k) * (a + k)))
        out[k + 1] = ((2 * k + 1 + a - x) * out[k] * r1 - (k + a) * out[k - 1] * r2) / (k + 1)
    return out


# ---------------------------------------------------------------------------
# built-in inputs


def psi_input(params: ModelParams, k: int) -> RadialFunction:
    return combo_input(params, [0.0] * k + [1.0], label=f"psi:{k}")


def combo_input(params: ModelParams, coeffs: Sequence[float], label: str | None = None) -> RadialFunction:
    """sum_k coeffs[k] psi_k."""
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.ndim != 1 or coeffs.size == 0:
        raise ValueError("combo_input: need a non-empty coefficient list")
    kmax = coeffs.size - 1

    def fn(x):
        return np.tensordot(coeffs, psi_table(params, kmax, x), axes=1)

    return RadialFunction(fn, params.half_power, 0.5, kmax, True,
                          label or "combo:" + ",".join(f"{c:g}" for c in coeffs))


def powerexp_input(a: float, b: float) -> RadialFunction:
    """xi**a * exp(-b xi); requires a > 0 and 0 < b < 1/2."""
    if not a > 0:
        raise ValueError(f"powerexp: power must be positive, got {a}")
    if not 0 < b < 0.5:
        raise ValueError(f"powerexp: decay bound violated, need 0 < b < 1/2, got b={b}")

    def fn(x):
        return np.exp(a * np.log(x) - b * x)

    return RadialFunction(fn, a, b, 0, True, f"powerexp:{a:g},{b:g}")


def inner_halfline(f: RadialFunction, g: RadialFunction, order: int = 128) -> complex:
    """<f, g> = int conj(f) g dxi/xi by a Gauss-Laguerre rule matched to the tags."""
    s = f.rate + g.rate
    alpha = f.power + g.power - 1
    rule = gauss_laguerre(alpha, order)
    u = rule.nodes
    vals = np.conj(f(u / s)) * g(u / s)
    # dxi/xi = du/u; divide out the rule weight u^alpha e^-u
    logs = rule.log_weights + u - (alpha + 1) * np.log(u)
    return np.sum(np.exp(logs) * vals)


# ---------------------------------------------------------------------------
# coherent states


def _disk_quantities(z):
    one_minus_z = 1 - z
    abs2 = np.abs(one_minus_z) ** 2
    a = np.abs(z)
    one_minus_r2 = (1 - a) * (1 + a)
    return one_minus_z, abs2, one_minus_r2


def coherent_closed(params: ModelParams, z, xi, delta: float = DEFAULT_DELTA):
    """Closed-form wave function Psi_{nu,m;z}(xi)."""
    z = check_disk(z, delta)
    xi = np.asarray(xi)
    if np.iscomplexobj(xi) or not np.all(xi > 0):
        raise ValueError("coherent_closed: xi must be real and positive")
    z, xi = np.broadcast_arrays(z, xi.astype(float))
    out = _coherent_closed(params, z, xi)
    return out[()] if out.ndim == 0 else out


def _coherent_closed(params, z, xi):
    nu, m, alpha = params.nu, params.m, params.alpha
    omz, abs2, omr2 = _disk_quantities(z)
    ratio = (1 + z) / omz
    rate = omr2 / abs2
    log_val = (0.5 * (float(log_factorial(m)) - math.lgamma(2 * nu - m))
               + m * np.log(abs2) - 2 * nu * np.log(omz)
               + (nu - m) * np.log(omr2) + (nu - m) * np.log(xi) - xi / 2 * ratio)
    return (-1) ** m * np.exp(log_val) * laguerre(m, alpha, xi * rate)


def coherent_series(params: ModelParams, z, xi, trunc: TruncationSpec | None = None,
                    delta: float = DEFAULT_DELTA, full_output: bool = False):
    """Psi_{nu,m;z}(xi) from its expansion over psi_k.

    ``z`` is a single disk point, ``xi`` scalar or array. With
    ``full_output`` a dict with the number of terms and a tail estimate is
    returned as well. Raises ConvergenceError when the last terms are not
    below ``target_tol`` relative to the partial sums.
    """
    trunc = trunc or TruncationSpec()
    z = complex(check_disk(z, delta))
    xi = np.asarray(xi)
    if np.iscomplexobj(xi) or not np.all(xi > 0):
        raise ValueError("coherent_series: xi must be real and positive")
    xi = xi.astype(float)
    nu, m = params.nu, params.m
    omr2 = (1 - abs(z)) * (1 + abs(z))
    front = omr2 ** (nu - m)

    K = trunc.max_terms if trunc.max_terms is not None else trunc.start
    while True:
        psis = psi_table(params, K, xi)
        coeffs = np.array([(-1) ** k * math.exp(_alt_log_coef(params, k))
                           * complex(_zbar_jacobi(params, k, np.asarray(z)))
                           for k in range(K + 1)])
        terms = front * coeffs.reshape((-1,) + (1,) * xi.ndim) * psis
        total = terms.sum(axis=0)
        last = np.max(np.abs(terms[-8:]), axis=0)
        scale = np.max(np.abs(total)) if total.size else 0.0
        converged = bool(np.all(last <= trunc.target_tol * max(scale, 1e-300)))
        if converged or trunc.max_terms is not None or K >= trunc.limit:
            break
        K = min(2 * K, trunc.limit)
    if not converged:
        raise ConvergenceError(
            f"coherent series not converged at K={K}: last term {np.max(last):.3e}")
    qz = abs(z)
    tail = float(np.max(last) * qz / (1 - qz)) if qz > 0 else 0.0
    value = total[()] if total.ndim == 0 else total
    if full_output:
        return value, {"terms": K + 1, "tail": tail}
    return value


def coherent_norm(params: ModelParams, z, order: int = 64) -> float:
    """<Psi_z, Psi_z> in L^2(dxi/xi) by Gauss-Laguerre after u = rate * xi.

    |Psi_z|^2 / xi is (rate xi)^alpha e^(-rate xi) times a polynomial of
    degree 2m, so an order-n rule with 2n - 1 >= 2m is exact.
    """
    z = complex(check_disk(z))
    alpha = params.alpha
    omz, abs2, omr2 = _disk_quantities(z)
    rate = omr2 / abs2
    rule = gauss_laguerre(alpha, order)
    xi = rule.nodes / rate
    vals = np.abs(_coherent_closed(params, np.full_like(xi, z, dtype=complex), xi)) ** 2
    # |Psi|^2 / xi dxi, with the rule weight u^alpha e^-u divided out
    logs = rule.log_weights + rule.nodes - alpha * np.log(rule.nodes) - np.log(xi) - math.log(rate)
    return float(np.sum(np.exp(logs) * vals))
