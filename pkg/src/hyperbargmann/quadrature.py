"""Gauss rules on the half-line and product rules on the unit disk."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import gammaln, roots_jacobi, roots_legendre

from .params import ModelParams

__all__ = [
    "QuadratureError",
    "HalfLineRule",
    "DiskRule",
    "gauss_laguerre",
    "integrate_halfline",
    "disk_rule",
    "disk_mass",
    "integrate_disk",
    "write_rule_csv",
]

DEFAULT_HALFLINE_ORDER = 128
DEFAULT_GRID = (200, 256, 1 - 1e-3)


class QuadratureError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class HalfLineRule:
    """Gauss rule for the weight x**alpha * exp(-x) on (0, inf)."""

    alpha: float
    nodes: np.ndarray
    weights: np.ndarray
    log_weights: np.ndarray

    @property
    def order(self) -> int:
        return len(self.nodes)


def _laguerre_pair_scaled(n, alpha, x):
    """L_n and L_{n-1} at x, both divided by exp(log_scale)."""
    prev = np.zeros_like(x)
    cur = np.ones_like(x)
    log_scale = np.zeros_like(x)
    for k in range(n):
        # (k+1) L_{k+1} = (2k+1+alpha-x) L_k - (k+alpha) L_{k-1}
        nxt = ((2 * k + 1 + alpha - x) * cur - (k + alpha) * prev) / (k + 1)
        prev, cur = cur, nxt
        big = np.abs(cur) > 1e100
        if np.any(big):
            prev = np.where(big, prev * 1e-100, prev)
            cur = np.where(big, cur * 1e-100, cur)
            log_scale = log_scale + np.where(big, 100 * math.log(10), 0.0)
    return cur, prev, log_scale


@lru_cache(maxsize=64)
def _gauss_laguerre_cached(alpha: float, n: int) -> HalfLineRule:
    k = np.arange(n, dtype=float)
    diag = 2 * k + alpha + 1
    off = np.sqrt(k[1:] * (k[1:] + alpha))
    try:
        x = eigh_tridiagonal(diag, off, eigvals_only=True)
    except np.linalg.LinAlgError as exc:
        raise QuadratureError(
            f"eigen-solver failed for Gauss-Laguerre rule alpha={alpha}, n={n}") from exc
    x = np.sort(x)
    # Newton polish; eigenvalues carry absolute error ~ eps * x_max
    for _ in range(3):
        ln, lm1, _ = _laguerre_pair_scaled(n, alpha, x)
        deriv = (n * ln - (n + alpha) * lm1) / x
        x = x - ln / deriv
    _, lm1, log_scale = _laguerre_pair_scaled(n, alpha, x)
    log_w = (gammaln(n + alpha) - gammaln(n + 1) - math.log(n + alpha) + np.log(x)
             - 2 * (np.log(np.abs(lm1)) + log_scale))
    w = np.exp(log_w)
    if not (np.all(np.diff(x) > 0) and x[0] > 0 and np.all(np.isfinite(log_w))):
        raise QuadratureError(
            f"Gauss-Laguerre construction degenerated for alpha={alpha}, n={n}")
    for arr in (x, w, log_w):
        arr.setflags(write=False)
    return HalfLineRule(alpha, x, w, log_w)


def gauss_laguerre(alpha: float, n: int = DEFAULT_HALFLINE_ORDER) -> HalfLineRule:
    """Golub-Welsch rule for x**alpha exp(-x), nodes refined by Newton steps.

    Weights come from the closed form
    w_i = Gamma(n+alpha) x_i / (n! (n+alpha) L_{n-1}(x_i)^2) evaluated in log
    space, so the tiny weights at large nodes keep full relative accuracy.
    """
    if not alpha > -1:
        raise ValueError(f"gauss_laguerre: alpha must exceed -1, got {alpha}")
    if int(n) != n or n < 1:
        raise ValueError(f"gauss_laguerre: order must be a positive integer, got {n}")
    return _gauss_laguerre_cached(float(alpha), int(n))


def integrate_halfline(rule: HalfLineRule, f) -> complex:
    """Sum of w_i f(x_i); the caller has already divided out x**alpha exp(-x)."""
    values = np.asarray(f(rule.nodes) if callable(f) else f)
    if values.shape != rule.nodes.shape:
        raise ValueError("integrate_halfline: sample count does not match the rule")
    bad = np.flatnonzero(~np.isfinite(values))
    if bad.size:
        i = int(bad[0])
        raise QuadratureError(
            f"non-finite integrand at node {i} (x={rule.nodes[i]!r})")
    return np.sum(rule.weights * values)


# ---------------------------------------------------------------------------
# Disk


@dataclass(frozen=True, eq=False)
class DiskRule:
    """Polar product rule for the measure (1 - |z|^2)**exponent dmu(z).

    Points are ordered radius-outer, angle-inner. ``r_max`` is None for the
    full-disk rule; then radial nodes are Gauss-Jacobi in u = r^2 adapted to
    integrands that blow up like (1 - |z|^2)**(-tilt) at the rim.
    """

    n_r: int
    n_theta: int
    r_max: float | None
    exponent: float
    tilt: float
    r: np.ndarray
    theta: np.ndarray
    radial_weights: np.ndarray
    z: np.ndarray
    weights: np.ndarray

    @property
    def size(self) -> int:
        return self.n_r * self.n_theta

    def same_grid(self, other: "DiskRule") -> bool:
        return (self is other) or (
            self.n_r == other.n_r and self.n_theta == other.n_theta
            and np.array_equal(self.r, other.r))


def disk_mass(nu: float, r_max: float | None = None) -> float:
    """Closed form of the integral of (1 - |z|^2)**(2nu - 2) over |z| <= r_max."""
    p = 2 * nu - 1
    if r_max is None:
        return math.pi / p
    return math.pi * -math.expm1(p * math.log1p(-r_max * r_max)) / p


@lru_cache(maxsize=32)
def _disk_rule_cached(exponent, n_r, n_theta, r_max, tilt):
    if r_max is None:
        # int_0^1 g(u) (1-u)^p du with p = exponent - tilt, u = (1+x)/2
        p = exponent - tilt
        x, w = roots_jacobi(n_r, p, 0.0)
        u = (1 + x) / 2
        wu = w * 2.0 ** (-p - 1) * (1 - u) ** tilt
    else:
        umax = r_max * r_max
        x, w = roots_legendre(n_r)
        u = umax * (1 + x) / 2
        wu = w * umax / 2 * (1 - u) ** exponent
    r = np.sqrt(u)
    # dmu = r dr dtheta = du dtheta / 2
    radial = wu / 2
    theta = 2 * np.pi * np.arange(n_theta) / n_theta
    z = (r[:, None] * np.exp(1j * theta)[None, :]).ravel()
    weights = np.repeat(radial * (2 * np.pi / n_theta), n_theta)
    for arr in (r, theta, radial, z, weights):
        arr.setflags(write=False)
    return DiskRule(n_r, n_theta, r_max, exponent, tilt, r, theta, radial, z, weights)


def disk_rule(params: ModelParams, n_r: int = DEFAULT_GRID[0],
              n_theta: int = DEFAULT_GRID[1], r_max: float | None = None,
              tilt: float | None = None) -> DiskRule:
    """Product rule for (1 - |z|^2)**(2nu - 2) on the disk.

    With ``r_max`` the radial direction is Gauss-Legendre in u = r^2 on
    [0, r_max^2] with the weight folded into the weights. Without it the
    rule covers the whole disk (nodes stay strictly inside) and integrates
    (1 - |z|^2)**(-tilt) * polynomial exactly; ``tilt`` defaults to 2m, the
    rim growth of |Phi_k|^2 on level m. Angular nodes are uniform, so every
    Fourier mode e^{ik theta} with 0 < |k| < n_theta integrates to zero.
    """
    if int(n_r) != n_r or int(n_theta) != n_theta or n_r < 4 or n_theta < 4:
        raise ValueError(f"disk_rule: need integer n_r, n_theta >= 4, got {n_r}, {n_theta}")
    if r_max is not None and not 0 < r_max < 1:
        raise ValueError(f"disk_rule: r_max must lie in (0, 1), got {r_max}")
    exponent = params.weight_exponent
    if tilt is None:
        tilt = 2 * params.m
    if r_max is None and not exponent - tilt > -1:
        raise ValueError(f"disk_rule: tilt {tilt} leaves a non-integrable radial weight")
    return _disk_rule_cached(float(exponent), int(n_r), int(n_theta),
                             None if r_max is None else float(r_max), float(tilt))


def integrate_disk(rule: DiskRule, values) -> complex:
    values = np.asarray(values)
    if values.shape != rule.z.shape:
        raise ValueError("integrate_disk: sample count does not match the rule")
    return np.sum(rule.weights * values)


def write_rule_csv(rule: HalfLineRule | DiskRule, path) -> None:
    """Export nodes and weights as ``node,weight`` rows (17 significant digits).

    Disk rules export their radial part (nodes are radii).
    """
    if isinstance(rule, DiskRule):
        nodes, weights = rule.r, rule.radial_weights
    else:
        nodes, weights = rule.nodes, rule.weights
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["node", "weight"])
        for x, w in zip(nodes, weights):
            writer.writerow([f"{x:.17g}", f"{w:.17g}"])
