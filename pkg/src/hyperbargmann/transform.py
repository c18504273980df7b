"""Generalized second Bargmann transform W_{nu,m} and its verifiers."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .coherent import RadialFunction, inner_halfline, psi_table
from .eigenspace import GridField, _phi, check_disk, log_rho
from .params import ModelParams, make_params
from .quadrature import DEFAULT_HALFLINE_ORDER, DiskRule, QuadratureError, gauss_laguerre
from .specfun import laguerre

__all__ = [
    "TransformRequest",
    "EigenResidualReport",
    "IsometryReport",
    "StencilError",
    "bargmann_transform",
    "transform_values",
    "transform_callable",
    "second_bargmann",
    "adjoint_reconstruct",
    "isometry_check",
    "eigen_residual",
    "dbar_residual",
]

DOUBLING_TOL = 1e-8
_BATCH = 2048


class StencilError(RuntimeError):
    """Finite-difference step too small: the residual grows when h halves."""


@dataclass(frozen=True)
class TransformRequest:
    """What to transform, where, and with which half-line rule.

    ``targets`` is either a DiskRule (result is a GridField on its points)
    or a sequence of disk points (result is an array). ``mode`` picks the
    integration path: "rotated" integrates along the ray where the kernel
    exponential is real (requires an analytic input), "real" keeps xi real
    and lets the oscillating phase ride along, "auto" picks rotated when
    the input allows it.
    """

    params: ModelParams
    input: RadialFunction
    targets: DiskRule | Sequence[complex] | np.ndarray
    order: int = DEFAULT_HALFLINE_ORDER
    check: bool = False
    mode: str = "auto"
    delta: float = 0.0

    def __post_init__(self):
        if self.mode not in ("auto", "rotated", "real"):
            raise ValueError(f"unknown integration mode {self.mode!r}")
        if self.mode == "rotated" and not self.input.analytic:
            raise ValueError("rotated integration needs an analytic input")
        self.input.check_admissible()


def _log_prefactor(params, z):
    """log of (-1)^m sqrt(alpha m!/(pi Gamma(2nu-m))) |1-z|^2m (1-|z|^2)^-m (1-z)^-2nu, sign aside."""
    nu, m, alpha = params.nu, params.m, params.alpha
    omz = 1 - z
    a = np.abs(z)
    omr2 = (1 - a) * (1 + a)
    const = 0.5 * (math.log(alpha / math.pi) + math.lgamma(m + 1) - math.lgamma(2 * nu - m))
    # Re(1 - z) > 0 on the disk: principal log is continuous there
    return const + m * np.log(np.abs(omz) ** 2) - m * np.log(omr2) - 2 * nu * np.log(omz)


def _transform_batch(params, fn, z, rule, rotated):
    nu, m, alpha = params.nu, params.m, params.alpha
    omz = 1 - z
    a = np.abs(z)
    omr2 = (1 - a) * (1 + a)
    w = (1 + z) / omz
    rate = omr2 / np.abs(omz) ** 2          # Re w, computed without cancellation
    b = fn.rate
    c = (w / 2 + b) if rotated else (rate / 2 + b).astype(complex)
    u = rule.nodes[None, :]
    c = c[:, None]
    xi = u / c
    p = nu - m - 1
    # integrand xi^p e^{-xi w/2} L_m(xi rate) f(xi) dxi with xi = u/c, weight u^beta e^-u divided out
    logs = (rule.log_weights[None, :] + u - u * (w[:, None] / 2) / c
            + p * (np.log(u) - np.log(c)) - rule.alpha * np.log(u) - np.log(c))
    vals = np.exp(logs) * laguerre(m, alpha, xi * rate[:, None]) * fn(xi)
    integral = vals.sum(axis=1)
    return (-1) ** m * np.exp(_log_prefactor(params, z)) * integral


def transform_values(params: ModelParams, fn: RadialFunction, z, order: int = DEFAULT_HALFLINE_ORDER,
                     check: bool = False, mode: str = "auto", delta: float = 0.0) -> np.ndarray:
    """W_{nu,m}[fn] at the points z (any shape)."""
    z = check_disk(z, delta)
    fn.check_admissible()
    rotated = mode == "rotated" or (mode == "auto" and fn.analytic)
    # rule exponent matches xi^(nu-m-1) * xi^power
    rule_alpha = params.half_power - 1 + fn.power
    flat = z.ravel()
    out = np.empty(flat.shape, dtype=complex)
    rule = gauss_laguerre(rule_alpha, order)
    fine = gauss_laguerre(rule_alpha, 2 * order) if check else None
    bad = []
    for start in range(0, flat.size, _BATCH):
        sl = slice(start, start + _BATCH)
        out[sl] = _transform_batch(params, fn, flat[sl], rule, rotated)
        if check:
            ref = _transform_batch(params, fn, flat[sl], fine, rotated)
            scale = max(np.max(np.abs(ref)), 1e-300)
            # relative to the sup of the batch: near zeros of W[f] only absolute accuracy exists
            err = np.abs(out[sl] - ref) / scale
            bad.extend(int(i) + start for i in np.flatnonzero(err > DOUBLING_TOL))
    if bad:
        pts = ", ".join(f"{flat[i]:.6g}" for i in bad[:5])
        raise QuadratureError(
            f"order doubling {order}->{2 * order} disagrees beyond {DOUBLING_TOL:g} "
            f"at {len(bad)} target(s), e.g. {pts}")
    return out.reshape(z.shape)


def bargmann_transform(req: TransformRequest):
    """Evaluate the request; GridField for rule targets, array for point lists."""
    if isinstance(req.targets, DiskRule):
        values = transform_values(req.params, req.input, req.targets.z, req.order,
                                  req.check, req.mode, req.delta)
        return GridField(req.targets, values)
    return transform_values(req.params, req.input, np.asarray(req.targets, dtype=complex),
                            req.order, req.check, req.mode, req.delta)


def transform_callable(params: ModelParams, fn: RadialFunction, order: int = DEFAULT_HALFLINE_ORDER):
    """z -> W[fn](z), for finite-difference verifiers."""
    return lambda z: transform_values(params, fn, z, order)


def second_bargmann(nu: float, fn: RadialFunction, targets, order: int = DEFAULT_HALFLINE_ORDER):
    """Second Bargmann transform (level m = 0), coded from its own formula.

    sqrt((2nu-1)/(pi Gamma(2nu))) (1-z)^(-2nu) int xi^nu exp(-(xi/2)(1+z)/(1-z)) f(xi) dxi/xi,
    integrated along the ray xi = u / ((1+z)/(2(1-z)) + rate).
    """
    params = make_params(nu, 0)
    grid = targets if isinstance(targets, DiskRule) else None
    z = check_disk(grid.z if grid is not None else np.asarray(targets, dtype=complex), 0.0)
    fn.check_admissible()
    if not fn.analytic:
        raise ValueError("second_bargmann integrates along a rotated ray; input must be analytic")
    rule = gauss_laguerre(nu - 1 + fn.power, order)
    flat = z.ravel()
    out = np.empty(flat.shape, dtype=complex)
    norm = 0.5 * (math.log(2 * nu - 1) - math.log(math.pi) - math.lgamma(2 * nu))
    for start in range(0, flat.size, _BATCH):
        zz = flat[start:start + _BATCH][:, None]
        half = (1 + zz) / (2 * (1 - zz))
        c = half + fn.rate
        u = rule.nodes[None, :]
        xi = u / c
        # xi^(nu-1) e^{-half xi} dxi = c^-nu u^(nu-1) e^{-half u/c} du
        logs = (rule.log_weights[None, :] + u * (1 - half / c) + (nu - 1 - rule.alpha) * np.log(u)
                - nu * np.log(c))
        integral = np.sum(np.exp(logs) * fn(xi), axis=1)
        out[start:start + _BATCH] = np.exp(norm - 2 * nu * np.log(1 - zz[:, 0])) * integral
    out = out.reshape(z.shape)
    return GridField(grid, out) if grid is not None else out


# ---------------------------------------------------------------------------
# adjoint and isometry


def _kernel_matrix(params, z, xi):
    """Transform kernel k(z, xi) w.r.t. dxi/xi, shape (len(xi), len(z))."""
    nu, m, alpha = params.nu, params.m, params.alpha
    omz = 1 - z
    a = np.abs(z)
    rate = (1 - a) * (1 + a) / np.abs(omz) ** 2
    w = (1 + z) / omz
    x = xi[:, None]
    logs = _log_prefactor(params, z)[None, :] + (nu - m) * np.log(x) - x * w[None, :] / 2
    return (-1) ** m * np.exp(logs) * laguerre(m, alpha, x * rate[None, :])


def adjoint_reconstruct(params: ModelParams, field: GridField, xi_targets, disk: DiskRule,
                        method: str = "spectral", kmax: int | None = None) -> np.ndarray:
    """W*F(xi) = int conj(k(z, xi)) F(z) (1-|z|^2)^(2nu-2) dmu(z) on the disk rule.

    ``method="kernel"`` integrates the closed-form kernel directly. As a
    function of z that kernel is not square integrable (its expansion
    sum_j Phi_j(z) psi_j(xi) has coefficients that do not decay in j), so
    the uniform angular rule aliases modes j = n_theta, 2 n_theta, ... and
    the error falls off only like n_theta**-(nu - m - 1/2).

    ``method="spectral"`` integrates against the kernel projected onto
    Phi_0 .. Phi_kmax, i.e. sum_j psi_j(xi) <Phi_j, F>, with every inner
    product taken by the disk rule. The rule is exact on that span when
    kmax < n_theta / 2 and kmax <= n_r, so fields in it reconstruct to
    rounding error. Default ``kmax`` is the largest such value.
    """
    if not field.grid.same_grid(disk):
        raise ValueError("adjoint_reconstruct: field is not sampled on the given disk rule")
    xi = np.asarray(xi_targets, dtype=float).ravel()
    if not np.all(xi > 0):
        raise ValueError("adjoint_reconstruct: xi targets must be positive")
    wf = disk.weights * field.values
    if method == "kernel":
        out = np.zeros(xi.shape, dtype=complex)
        for start in range(0, disk.z.size, _BATCH):
            sl = slice(start, start + _BATCH)
            K = _kernel_matrix(params, disk.z[sl], xi)
            out += np.conj(K) @ wf[sl]
        return out
    if method != "spectral":
        raise ValueError(f"unknown adjoint method {method!r}")
    if kmax is None:
        kmax = min(disk.n_theta // 2 - 1, disk.n_r)
    coeffs = np.array([np.sum(np.conj(_phi(params, j, disk.z)) * wf) * math.exp(-0.5 * log_rho(params, j))
                       for j in range(kmax + 1)])
    return coeffs @ psi_table(params, kmax, xi)


@dataclass
class IsometryReport:
    gram_in: np.ndarray
    gram_out: np.ndarray

    @property
    def max_deviation(self) -> float:
        return float(np.max(np.abs(self.gram_in - self.gram_out))) if self.gram_in.size else 0.0

    def deviation_from_identity(self) -> tuple[float, float]:
        eye = np.eye(len(self.gram_in))
        return (float(np.max(np.abs(self.gram_in - eye))),
                float(np.max(np.abs(self.gram_out - eye))))


def isometry_check(params: ModelParams, inputs: Sequence[RadialFunction], disk: DiskRule,
                   order: int = DEFAULT_HALFLINE_ORDER) -> IsometryReport:
    """Gram matrices of the inputs in L^2(dxi/xi) and of their images in L^{2,nu}."""
    n = len(inputs)
    gin = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for j in range(i, n):
            gin[i, j] = inner_halfline(inputs[i], inputs[j], order)
            gin[j, i] = np.conj(gin[i, j])
    images = np.array([transform_values(params, f, disk.z, order) for f in inputs])
    gout = (np.conj(images) * disk.weights) @ images.T if n else np.zeros((0, 0))
    return IsometryReport(gin, gout)


# ---------------------------------------------------------------------------
# differential checks


@dataclass(frozen=True)
class EigenResidualReport:
    max_residual: float
    epsilon_used: float
    stencil_h: float
    points_checked: int


def _stencil(F, z, h):
    f0 = F(z)
    fxp, fxm = F(z + h), F(z - h)
    fyp, fym = F(z + 1j * h), F(z - 1j * h)
    lap = (fxp + fxm + fyp + fym - 4 * f0) / h ** 2
    dx = (fxp - fxm) / (2 * h)
    dy = (fyp - fym) / (2 * h)
    return f0, lap / 4, (dx + 1j * dy) / 2


def apply_operator(params: ModelParams, F: Callable, z, h: float = 1e-4):
    """-4(1-|z|^2)[(1-|z|^2) d^2F/dz dzbar - 2nu zbar dF/dzbar] by central differences."""
    z = np.asarray(z, dtype=complex)
    f0, dzdzb, dzb = _stencil(F, z, h)
    s = 1 - np.abs(z) ** 2
    return f0, -4 * s * (s * dzdzb - params.beta * np.conj(z) * dzb)


def eigen_residual(params: ModelParams, F: Callable, points, h: float = 1e-4,
                   tol: float = 1e-4) -> EigenResidualReport:
    """max |H F - eps F| / max(1, |F|) over points with |z| <= 0.8.

    Falls back to Richardson extrapolation over (h, h/2) when the plain
    stencil misses ``tol``.
    """
    z = np.asarray(points, dtype=complex).ravel()
    if np.any(np.abs(z) > 0.8):
        raise ValueError("eigen_residual: points must satisfy |z| <= 0.8")
    eps = params.epsilon

    def resid(step):
        f0, hf = apply_operator(params, F, z, step)
        return np.abs(hf - eps * f0) / np.maximum(1.0, np.abs(f0)), hf, f0

    r1, hf1, f0 = resid(h)
    used = h
    best = float(np.max(r1)) if z.size else 0.0
    if best > tol:
        r2, hf2, _ = resid(h / 2)
        if np.max(r2) > 2 * best:
            raise StencilError(f"residual grows when h halves ({best:.3e} -> {np.max(r2):.3e}); "
                               f"step h={h:g} is too small")
        rich = (4 * hf2 - hf1) / 3
        best = float(np.max(np.abs(rich - eps * f0) / np.maximum(1.0, np.abs(f0))))
        used = h / 2
    return EigenResidualReport(best, eps, used, int(z.size))


def dbar_residual(F: Callable, points, h: float = 1e-4) -> float:
    """max |dF/dzbar| / max(1, |F|): zero for holomorphic F.

    The central-difference dbar of a holomorphic F carries an h^2 F'''/6
    truncation term, so the (h, h/2) Richardson combination is reported.
    """
    z = np.asarray(points, dtype=complex).ravel()
    if not z.size:
        return 0.0
    f0, _, d1 = _stencil(F, z, h)
    _, _, d2 = _stencil(F, z, h / 2)
    dzb = (4 * d2 - d1) / 3
    return float(np.max(np.abs(dzb) / np.maximum(1.0, np.abs(f0))))
