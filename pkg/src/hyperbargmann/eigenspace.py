"""Eigenbasis, norms and reproducing kernel of a hyperbolic Landau level.

All evaluators are vectorized over the disk coordinate ``z`` (complex
scalar or array). Points must satisfy |z| <= 1 - delta.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .params import ModelParams
from .quadrature import DiskRule
from .specfun import jacobi, jacobi_deflated, log_gamma_ratio, log_factorial

__all__ = [
    "DEFAULT_DELTA",
    "DiskPoint",
    "GridField",
    "check_disk",
    "phi",
    "rho",
    "log_rho",
    "big_phi",
    "big_phi_alt",
    "basis_table",
    "kernel",
    "kernel_diag",
    "mercer_diag",
    "sample_field",
]

DEFAULT_DELTA = 1e-6

DiskPoint = complex


def check_disk(z, delta: float = DEFAULT_DELTA) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(z)):
        raise ValueError("disk point must be finite")
    if delta > 0:
        if np.any(np.abs(z) > 1 - delta):
            raise ValueError(f"disk point outside |z| <= 1 - {delta}")
    elif np.any(np.abs(z) >= 1):
        raise ValueError("disk point outside the open unit disk")
    return z


def _out(z, value):
    return value[()] if np.ndim(value) == 0 else value


def _one_minus_r2(z):
    a = np.abs(z)
    return (1 - a) * (1 + a)


def _check_index(k):
    if isinstance(k, bool) or int(k) != k or k < 0:
        raise ValueError(f"basis index must be a non-negative integer, got {k!r}")
    return int(k)


# ---------------------------------------------------------------------------


def _phi(params, k, z):
    m, alpha = params.m, params.alpha
    r2 = np.abs(z) ** 2
    t = np.clip(1 - 2 * r2, -1.0, 1.0)
    # Cartesian powers: at z = 0 the angular factor is the limit 0 (or 1 when m == k)
    if k <= m:
        ang = np.conj(z) ** (m - k)
    else:
        ang = z ** (k - m)
    lo = min(m, k)
    return (-1) ** lo * _one_minus_r2(z) ** (-m) * ang * jacobi(lo, abs(m - k), alpha, t)


def phi(params: ModelParams, k: int, z, delta: float = DEFAULT_DELTA):
    """Orthogonal (unnormalized) eigenfunction phi_k on level m."""
    k = _check_index(k)
    z = check_disk(z, delta)
    return _out(z, _phi(params, k, z))


def log_rho(params: ModelParams, k: int) -> float:
    m, alpha = params.m, params.alpha
    lo, hi = min(m, k), max(m, k)
    return float(math.log(math.pi / alpha) + log_factorial(hi) - log_factorial(lo)
                 + log_gamma_ratio(alpha + 1 + lo, alpha + 1 + hi))


def rho(params: ModelParams, k: int) -> float:
    """Squared L^{2,nu} norm of phi_k."""
    return math.exp(log_rho(params, _check_index(k)))


def big_phi(params: ModelParams, k: int, z, delta: float = DEFAULT_DELTA):
    """Orthonormal eigenfunction Phi_k = phi_k / sqrt(rho_k)."""
    k = _check_index(k)
    z = check_disk(z, delta)
    return _out(z, _phi(params, k, z) * math.exp(-0.5 * log_rho(params, k)))


def _zbar_jacobi(params, k, z):
    """conj(z)^(m-k) P_k^(m-k, alpha)(1 - 2|z|^2), valid for every k >= 0.

    For k > m the negative power of conj(z) cancels against the factor
    ((t-1)/2)^(k-m) = (-|z|^2)^(k-m) that P_k^(m-k, alpha) carries, leaving
    (-1)^(k-m) z^(k-m) times the deflated polynomial.
    """
    m, alpha = params.m, params.alpha
    t = np.clip(1 - 2 * np.abs(z) ** 2, -1.0, 1.0)
    if k <= m:
        return np.conj(z) ** (m - k) * jacobi(k, m - k, alpha, t)
    s = k - m
    return (-1) ** s * z ** s * jacobi_deflated(k, s, alpha, t)


def _alt_log_coef(params, k):
    m, alpha = params.m, params.alpha
    return 0.5 * float(log_factorial(k) - log_factorial(m)
                       + log_gamma_ratio(alpha + 1 + m, alpha + 1 + k))


def big_phi_alt(params: ModelParams, k: int, z, delta: float = DEFAULT_DELTA):
    """Phi_k from the rewritten closed form built on P_k^(m-k, alpha)."""
    k = _check_index(k)
    z = check_disk(z, delta)
    alpha = params.alpha
    coef = (-1) ** k * math.sqrt(alpha / math.pi) * math.exp(_alt_log_coef(params, k))
    return _out(z, coef * _one_minus_r2(z) ** (-params.m) * _zbar_jacobi(params, k, z))


def basis_table(params: ModelParams, kmax: int, z, delta: float = 0.0) -> np.ndarray:
    """Phi_0 .. Phi_kmax at z, shape (kmax + 1, *z.shape)."""
    z = check_disk(z, delta)
    out = np.empty((kmax + 1,) + z.shape, dtype=complex)
    for k in range(kmax + 1):
        out[k] = _phi(params, k, z) * math.exp(-0.5 * log_rho(params, k))
    return out


# ---------------------------------------------------------------------------


def kernel(params: ModelParams, z, w, delta: float = DEFAULT_DELTA):
    """Reproducing kernel K_m(z, w) of the level-m eigenspace."""
    z = check_disk(z, delta)
    w = check_disk(w, delta)
    nu, m, alpha = params.nu, params.m, params.alpha
    zw = 1 - z * np.conj(w)
    q = _one_minus_r2(z) * _one_minus_r2(w) / np.abs(zw) ** 2
    # Re(1 - z conj(w)) > 0 on the bidisk, so the principal branch is never cut
    power = zw ** (-2 * nu)
    t = np.clip(2 * q - 1, -1.0, 1.0)
    value = alpha / math.pi * power * q ** (-m) * jacobi(m, 0.0, alpha, t)
    return _out(value, value)


def kernel_diag(params: ModelParams, z, delta: float = DEFAULT_DELTA):
    """K_m(z, z) = (alpha / pi) (1 - |z|^2)^(-2 nu)."""
    z = check_disk(z, delta)
    value = params.alpha / math.pi * _one_minus_r2(z) ** (-params.beta)
    return _out(z, value)


def mercer_diag(params: ModelParams, z, tol: float = 1e-13, kmax: int = 4096,
                start: int = 64, delta: float = DEFAULT_DELTA):
    """Partial sums of sum_k |Phi_k(z)|^2, doubled until they settle.

    Returns ``(value, K)`` where K is the last index included. The sum stops
    once doubling changes it by less than ``tol`` relative.
    """
    z = check_disk(z, delta)
    total = np.zeros(z.shape)
    k = 0
    K = start
    previous = None
    while True:
        while k <= K:
            total = total + np.abs(_phi(params, k, z)) ** 2 * math.exp(-log_rho(params, k))
            k += 1
        if previous is not None and np.all(np.abs(total - previous) <= tol * np.abs(total)):
            break
        if K >= kmax:
            break
        previous = total.copy()
        K = min(2 * K, kmax)
    return _out(z, total), K


# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GridField:
    """Complex samples on the points of a polar disk rule."""

    grid: DiskRule
    values: np.ndarray

    def __post_init__(self):
        if np.shape(self.values) != self.grid.z.shape:
            raise ValueError("GridField: values do not match the grid size")

    def to_csv(self, path, comments: dict | None = None) -> None:
        """Write ``r,theta,re,im`` rows, radius outer, 17 significant digits."""
        write_field_csv(self, path, comments)


def sample_field(grid: DiskRule, fn) -> GridField:
    return GridField(grid, np.asarray(fn(grid.z), dtype=complex))


def write_field_csv(field: GridField, path, comments: dict | None = None) -> None:
    grid = field.grid
    with open(path, "w", newline="") as fh:
        for key, val in (comments or {}).items():
            fh.write(f"# {key}={val}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["r", "theta", "re", "im"])
        values = field.values.reshape(grid.n_r, grid.n_theta)
        for i, r in enumerate(grid.r):
            for j, th in enumerate(grid.theta):
                v = values[i, j]
                writer.writerow([f"{r:.17g}", f"{th:.17g}", f"{v.real:.17g}", f"{v.imag:.17g}"])


def read_field_csv(path):
    """Read back (r, theta, values) from a field CSV, skipping comment lines."""
    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(line for line in fh if not line.startswith("#"))
        header = next(reader)
        if header != ["r", "theta", "re", "im"]:
            raise ValueError(f"unexpected field header {header}")
        for row in reader:
            rows.append([float(v) for v in row])
    arr = np.array(rows)
    return arr[:, 0], arr[:, 1], arr[:, 2] + 1j * arr[:, 3]
