"""Named numerical checks, grouped into suites, with extended-precision oracles.

Every check returns a :class:`CheckResult` (name, measured value,
tolerance). A check passes when its value is finite and at most the
tolerance. Oracles that stand in for "independent" evaluations are
direct finite sums carried out in mpmath at 40 significant digits.
"""

from __future__ import annotations

import csv
import math
import sys
from dataclasses import dataclass
from typing import Callable, Iterable

import mpmath
import numpy as np

from .coherent import (RadialFunction, coherent_closed, coherent_norm, coherent_series,
                       combo_input, inner_halfline, powerexp_input, psi_input, psi_table)
from .eigenspace import (basis_table, big_phi, big_phi_alt, kernel, kernel_diag, log_rho,
                         mercer_diag, phi, rho)
from .params import ModelParams, levels, make_params
from .quadrature import DEFAULT_HALFLINE_ORDER, disk_rule, gauss_laguerre
from .specfun import (gauss2f1_terminating, jacobi, kummer1f1_terminating, laguerre,
                      log_gamma_ratio)
from .transform import (GridField, adjoint_reconstruct, dbar_residual, eigen_residual,
                        isometry_check, second_bargmann, transform_values)

__all__ = ["CheckResult", "SUITES", "TOLERANCES", "run_suite", "write_report"]

_DPS = 40

TOLERANCES = {
    # special functions
    "laguerre_vs_series_oracle": 1e-11,
    "jacobi_vs_series_oracle": 1e-11,
    "jacobi_symmetry": 1e-12,
    "jacobi_negative_parameter_identity": 1e-10,
    "gauss2f1_vs_oracle": 1e-12,
    "kummer_laguerre_reduction": 1e-12,
    "bilateral_generating_function": 1e-8,
    "log_gamma_ratio_vs_oracle": 1e-13,
    # eigenspace
    "gram_orthonormality": 1e-7,
    "norm_formula": 1e-8,
    "alternate_form_agreement": 1e-12,
    "kernel_hermitian": 1e-12,
    "mercer_diagonal": 1e-6,
    "reproducing_property": 1e-6,
    # coherent states
    "psi_orthonormality": 1e-10,
    "series_vs_closed": 1e-8,
    "coherent_normalization": 1e-8,
    "coefficient_modulus": 1e-8,
    "exponent_real_part": 1e-12,
    # transform
    "basis_correspondence": 1e-8,
    "input_gram": 1e-6,
    "output_gram": 1e-6,
    "combo_norm": 1e-6,
    "eigen_residual_basis": 1e-4,
    "eigen_residual_transform": 1e-4,
    "constant_annihilated": 1e-6,
    "second_bargmann_reduction": 1e-12,
    "holomorphic_range": 1e-6,
    "resolution_of_identity": 1e-4,
    "roundtrip_norm": 1e-5,
    "orthocomplement_annihilated": 1e-3,
}


@dataclass(frozen=True)
class CheckResult:
    name: str
    value: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.value) and self.value <= self.tolerance)

    def row(self) -> list[str]:
        return [self.name, f"{self.value:.6e}", f"{self.tolerance:.1e}", "pass" if self.passed else "FAIL"]


# ---------------------------------------------------------------------------
# mpmath oracles (finite sums straight from the definitions)


def _mp_binom(n, j):
    """Generalized binomial C(n, j) for real n and integer j >= 0, by the falling product."""
    out = mpmath.mpf(1)
    for i in range(j):
        out *= (mpmath.mpf(n) - i) / (i + 1)
    return out


def oracle_laguerre(k, alpha, x):
    with mpmath.workdps(_DPS):
        x = mpmath.mpf(x)
        return float(sum((-1) ** j * _mp_binom(k + mpmath.mpf(alpha), k - j) * x ** j
                         / mpmath.factorial(j) for j in range(k + 1)))


def oracle_jacobi(k, a, b, t):
    with mpmath.workdps(_DPS):
        t = mpmath.mpf(t)
        lo, hi = (t - 1) / 2, (t + 1) / 2
        return float(sum(_mp_binom(k + mpmath.mpf(a), k - s) * _mp_binom(k + mpmath.mpf(b), s)
                         * lo ** s * hi ** (k - s) for s in range(k + 1)))


def oracle_2f1(k, b, c, y):
    with mpmath.workdps(_DPS):
        y, b, c = mpmath.mpf(y), mpmath.mpf(b), mpmath.mpf(c)
        return float(sum(mpmath.rf(-k, j) * mpmath.rf(b, j) / (mpmath.rf(c, j) * mpmath.factorial(j))
                         * y ** j for j in range(k + 1)))


def oracle_log_gamma_ratio(p, q):
    with mpmath.workdps(_DPS):
        return float(mpmath.loggamma(mpmath.mpf(p)) - mpmath.loggamma(mpmath.mpf(q)))


# ---------------------------------------------------------------------------
# helpers


def _alphas(nu):
    return sorted({0.0, 0.5, 1.0} | {p.alpha for p in levels(nu)})


def _scaled_err(got, ref):
    """max |got - ref| / max(1, max |ref|) over a sample set."""
    got, ref = np.asarray(got), np.asarray(ref)
    return float(np.max(np.abs(got - ref)) / max(1.0, float(np.max(np.abs(ref)))))


def _rel_to_sup(got, ref):
    """max |got - ref| / max |ref|: relative error normalized by the size of the sample."""
    got, ref = np.asarray(got), np.asarray(ref)
    return float(np.max(np.abs(got - ref)) / max(float(np.max(np.abs(ref))), 1e-300))


_T_SAMPLES = np.linspace(-0.9, 0.9, 7)
_X_SAMPLES = np.array([0.1, 1.0, 3.0, 7.7, 15.0])


def _polar_points(radius, n_r=4, n_theta=8):
    r = np.linspace(0.0, radius, n_r + 1)[1:]
    th = 2 * np.pi * (np.arange(n_theta) + 0.5) / n_theta
    return np.concatenate([[0.0], (r[:, None] * np.exp(1j * th)[None, :]).ravel()])


# ---------------------------------------------------------------------------
# specfun suite


def check_laguerre(nu):
    worst = 0.0
    for a in _alphas(nu):
        for k in range(13):
            ref = [oracle_laguerre(k, a, x) for x in _X_SAMPLES]
            worst = max(worst, _rel_to_sup(laguerre(k, a, _X_SAMPLES), ref))
    return worst


def check_jacobi(nu):
    worst = 0.0
    pairs = [(a, b) for a in _alphas(nu) for b in _alphas(nu)]
    for k in range(13):
        cases = pairs + [(-s, b) for s in range(1, k + 1) for b in _alphas(nu)]
        for a, b in cases:
            ref = [oracle_jacobi(k, a, b, t) for t in _T_SAMPLES]
            worst = max(worst, _rel_to_sup(jacobi(k, a, b, _T_SAMPLES), ref))
    return worst


def check_jacobi_symmetry(nu):
    worst = 0.0
    for a in _alphas(nu):
        for b in _alphas(nu):
            for k in range(9):
                lhs = jacobi(k, a, b, _T_SAMPLES)
                rhs = (-1) ** k * jacobi(k, b, a, -_T_SAMPLES)
                worst = max(worst, _rel_to_sup(lhs, rhs))
    return worst


def check_negative_parameter_identity(nu):
    """k!/(k-s)! P_k^(-s,a) = Gamma(k+a+1)/Gamma(k-s+a+1) ((t-1)/2)^s P_{k-s}^(s,a)."""
    worst = 0.0
    t = np.linspace(-0.95, 0.95, 9)
    for a in [x for x in _alphas(nu) if x > 0]:
        for k in range(1, 7):
            for s in range(1, k + 1):
                lhs = math.factorial(k) / math.factorial(k - s) * jacobi(k, -s, a, t)
                rhs = (math.exp(log_gamma_ratio(k + a + 1, k - s + a + 1)) * ((t - 1) / 2) ** s
                       * jacobi(k - s, s, a, t))
                worst = max(worst, _rel_to_sup(lhs, rhs))
    return worst


def check_gauss2f1(nu):
    worst = 0.0
    ys = np.array([-1.1, -0.4, 0.3, 0.9])
    for k in range(13):
        for b in (-2.0, 0.5, 2.0, -float(min(k, 3))):
            for c in [1 + a for a in _alphas(nu)] + [5.4]:
                ref = [oracle_2f1(k, b, c, y) for y in ys]
                worst = max(worst, _rel_to_sup(gauss2f1_terminating(k, b, c, ys), ref))
    return worst


def check_kummer_laguerre(nu):
    worst = 0.0
    for a in _alphas(nu):
        for m in range(9):
            lhs = kummer1f1_terminating(m, 1 + a, _X_SAMPLES)
            rhs = math.exp(math.lgamma(m + 1) - log_gamma_ratio(1 + a + m, 1 + a)) \
                * laguerre(m, a, _X_SAMPLES)
            worst = max(worst, _rel_to_sup(lhs, rhs))
    return worst


def check_bilateral(nu, K=200):
    """sum_k lam^k 2F1(-k, b; 1+a; y) L_k^(a)(x) against its closed form."""
    worst = 0.0
    for p in levels(nu):
        a, b = p.alpha, -p.m
        for lam in (0.3, -0.5, 0.7j, 0.45 + 0.45j):
            for r2 in (0.2, 0.6):
                y = -(1 - r2) / r2
                for x in (0.5, 2.0, 6.0):
                    terms = [lam ** k * gauss2f1_terminating(k, b, 1 + a, y) * laguerre(k, a, x)
                             for k in range(K + 1)]
                    lhs = complex(sum(terms))
                    den = 1 - lam + y * lam
                    arg = x * y * lam / ((1 - lam) * den)
                    # 1F1(b; 1+a; .) with b = -m terminates
                    rhs = ((1 - lam) ** (b - 1 - a) / den ** b * np.exp(-x * lam / (1 - lam))
                           * kummer1f1_terminating(p.m, 1 + a, arg))
                    worst = max(worst, abs(lhs - rhs) / abs(rhs))
    return worst


def check_log_gamma_ratio(nu):
    worst = 0.0
    pairs = [(5, 5), (6, 5), (7.5, 2.5), (0.1, 3.3), (1e-3, 2.0), (40.5, 38.0), (1e3 + 0.5, 1e3),
             (2 * nu, 2 * nu - 1), (1e6, 1e6 - 3.5), (123456.7, 98765.4), (60.0, 0.7)]
    for p, q in pairs:
        ref = oracle_log_gamma_ratio(p, q)
        worst = max(worst, abs(float(log_gamma_ratio(p, q)) - ref) / max(1.0, abs(ref)))
    return worst


SPECFUN_CHECKS: list[tuple[str, Callable[[float], float]]] = [
    ("laguerre_vs_series_oracle", check_laguerre),
    ("jacobi_vs_series_oracle", check_jacobi),
    ("jacobi_symmetry", check_jacobi_symmetry),
    ("jacobi_negative_parameter_identity", check_negative_parameter_identity),
    ("gauss2f1_vs_oracle", check_gauss2f1),
    ("kummer_laguerre_reduction", check_kummer_laguerre),
    ("bilateral_generating_function", check_bilateral),
    ("log_gamma_ratio_vs_oracle", check_log_gamma_ratio),
]


# ---------------------------------------------------------------------------
# eigenspace suite


def check_gram(p: ModelParams, kmax=8):
    R = disk_rule(p, 24, 32)
    B = basis_table(p, kmax, R.z)
    G = (np.conj(B) * R.weights) @ B.T
    return float(np.max(np.abs(G - np.eye(kmax + 1))))


def check_norms(p: ModelParams, kmax=8):
    R = disk_rule(p, 24, 32)
    return max(abs(np.sum(R.weights * np.abs(phi(p, k, R.z, 0.0)) ** 2) / rho(p, k) - 1)
               for k in range(kmax + 1))


def check_alternate_form(p: ModelParams, kmax=12):
    z = _polar_points(0.9)
    return max(_scaled_err(big_phi_alt(p, k, z), big_phi(p, k, z)) for k in range(kmax + 1))


def check_kernel_hermitian(p: ModelParams):
    z = _polar_points(0.8, 3, 5)
    zz, ww = np.meshgrid(z, z[::-1])
    return _scaled_err(kernel(p, zz, ww), np.conj(kernel(p, ww, zz)))


def check_mercer(p: ModelParams):
    z = np.array([0.0, 0.3, 0.45j, 0.6 * np.exp(0.7j), -0.6])
    value, _ = mercer_diag(p, z)
    return float(np.max(np.abs(value / kernel_diag(p, z) - 1)))


def check_reproducing(p: ModelParams, kmax=5):
    R = disk_rule(p, 48, 64)
    z = np.array([0.0, 0.25, 0.5j, -0.5 * np.exp(0.6j), 0.35 - 0.2j])
    K = kernel(p, z[:, None], R.z[None, :], 0.0)
    worst = 0.0
    for k in range(kmax + 1):
        lhs = (K * R.weights) @ big_phi(p, k, R.z, 0.0)
        worst = max(worst, float(np.max(np.abs(lhs - big_phi(p, k, z)))))
    return worst


EIGENSPACE_CHECKS = [
    ("gram_orthonormality", check_gram),
    ("norm_formula", check_norms),
    ("alternate_form_agreement", check_alternate_form),
    ("kernel_hermitian", check_kernel_hermitian),
    ("mercer_diagonal", check_mercer),
    ("reproducing_property", check_reproducing),
]


# ---------------------------------------------------------------------------
# coherent suite

_COHERENT_Z = (0.0, 0.3, 0.5 * np.exp(1j * np.pi / 3), -0.7)


def check_psi_orthonormality(p: ModelParams, kmax=8, order=DEFAULT_HALFLINE_ORDER):
    fns = [psi_input(p, k) for k in range(kmax + 1)]
    G = np.array([[inner_halfline(f, g, order) for g in fns] for f in fns])
    return float(np.max(np.abs(G - np.eye(kmax + 1))))


def check_series_vs_closed(p: ModelParams):
    xi = gauss_laguerre(p.alpha, 32).nodes
    worst = 0.0
    for z in _COHERENT_Z:
        ref = coherent_closed(p, z, xi)
        got = coherent_series(p, z, xi)
        worst = max(worst, _scaled_err(got, ref))
    return worst


def check_coherent_norm(p: ModelParams):
    return max(abs(coherent_norm(p, z) - 1) for z in _COHERENT_Z)


def _coherent_as_input(p, z):
    rate = (1 - abs(z) ** 2) / abs(1 - z) ** 2
    return RadialFunction(lambda x: coherent_closed(p, z, x), p.half_power, rate / 2, p.m,
                          label="coherent")


def check_coefficient_modulus(p: ModelParams, kmax=8, order=DEFAULT_HALFLINE_ORDER):
    worst = 0.0
    for z in (0.0, 0.3, 0.4j, -0.5 * np.exp(0.3j)):
        cs = _coherent_as_input(p, z)
        scale = math.sqrt(kernel_diag(p, z))
        for k in range(kmax + 1):
            coef = inner_halfline(cs, psi_input(p, k), order)
            worst = max(worst, abs(abs(coef) * scale - abs(big_phi(p, k, z))))
    return worst


def check_exponent_real_part(p: ModelParams):
    z = np.concatenate([_polar_points(0.999, 6, 16), [0.9999, -0.9999, 0.9999j]])
    w = (1 + z) / (1 - z)
    formula = (1 - np.abs(z) ** 2) / np.abs(1 - z) ** 2
    if not np.all(formula > 0):
        return math.inf
    return _rel_to_sup(w.real, formula)


COHERENT_CHECKS = [
    ("psi_orthonormality", check_psi_orthonormality),
    ("series_vs_closed", check_series_vs_closed),
    ("coherent_normalization", check_coherent_norm),
    ("coefficient_modulus", check_coefficient_modulus),
    ("exponent_real_part", check_exponent_real_part),
]


# ---------------------------------------------------------------------------
# transform suite


def _test_inputs(p, kmax=8):
    return [psi_input(p, k) for k in range(kmax + 1)]


def check_basis_correspondence(p: ModelParams, kmax=8, order=DEFAULT_HALFLINE_ORDER):
    z = _polar_points(0.8)
    return max(float(np.max(np.abs(transform_values(p, psi_input(p, k), z, order, check=True)
                                   - big_phi(p, k, z))))
               for k in range(kmax + 1))


def _isometry(p, order):
    R = disk_rule(p, 24, 32)
    return isometry_check(p, _test_inputs(p), R, order).deviation_from_identity()


def check_combo_norm(p: ModelParams, order=DEFAULT_HALFLINE_ORDER):
    R = disk_rule(p, 24, 32)
    F = transform_values(p, combo_input(p, [2 ** -0.5, 2 ** -0.5]), R.z, order)
    return abs(math.sqrt(float(np.sum(R.weights * np.abs(F) ** 2))) - 1)


_STENCIL_POINTS = np.array([0.1, 0.3j, -0.45 + 0.2j, 0.6 * np.exp(2.2j), 0.8 * np.exp(-0.9j), 0.75])


def check_eigen_basis(p: ModelParams):
    return max(eigen_residual(p, lambda z, k=k: big_phi(p, k, z, 0.0), _STENCIL_POINTS).max_residual
               for k in range(4))


def check_eigen_transform(p: ModelParams, order=DEFAULT_HALFLINE_ORDER):
    fn = psi_input(p, 2)
    return eigen_residual(p, lambda z: transform_values(p, fn, z, order),
                          _STENCIL_POINTS).max_residual


def check_constant(p: ModelParams):
    return eigen_residual(p, lambda z: np.ones_like(z), _STENCIL_POINTS).max_residual


def check_second_bargmann(p: ModelParams, order=DEFAULT_HALFLINE_ORDER):
    z = _polar_points(0.9)
    fns = _test_inputs(p, 3) + [powerexp_input(p.nu + 0.3, 0.2)]
    return max(_scaled_err(transform_values(p, f, z, order), second_bargmann(p.nu, f, z, order))
               for f in fns)


def check_holomorphic(p: ModelParams, order=DEFAULT_HALFLINE_ORDER):
    z = _polar_points(0.8)
    return max(dbar_residual(lambda w, f=f: transform_values(p, f, w, order), z)
               for f in (psi_input(p, 2), powerexp_input(p.nu + 0.3, 0.2)))


_XI = np.linspace(0.1, 20.0, 100)


def _roundtrip_rule(p):
    return disk_rule(p, 32, 64)


def check_resolution(p: ModelParams, order=DEFAULT_HALFLINE_ORDER):
    R = _roundtrip_rule(p)
    fns = _test_inputs(p) + [combo_input(p, [2 ** -0.5, 2 ** -0.5])]
    worst = 0.0
    for f in fns:
        F = GridField(R, transform_values(p, f, R.z, order))
        worst = max(worst, float(np.max(np.abs(adjoint_reconstruct(p, F, _XI, R) - f(_XI)))))
    return worst


def _halfline_norm(p, fn):
    rule = gauss_laguerre(p.alpha, 64)
    u = rule.nodes
    return math.sqrt(float(np.sum(np.exp(rule.log_weights + u - (p.alpha + 1) * np.log(u))
                                  * np.abs(fn(u)) ** 2)))


def check_roundtrip_norm(p: ModelParams, order=DEFAULT_HALFLINE_ORDER):
    R = _roundtrip_rule(p)
    f = combo_input(p, [2 ** -0.5, 2 ** -0.5])
    F = GridField(R, transform_values(p, f, R.z, order))
    return abs(_halfline_norm(p, lambda x: adjoint_reconstruct(p, F, x, R)) - 1)


def check_orthocomplement(p: ModelParams):
    R = _roundtrip_rule(p)
    if p.m == 0:
        values = np.conj(big_phi(p, 1, R.z, 0.0))
    else:
        values = big_phi(make_params(p.nu, 0), 1, R.z, 0.0)
    F = GridField(R, values)
    norm_f = math.sqrt(float(np.sum(R.weights * np.abs(values) ** 2)))
    return _halfline_norm(p, lambda x: adjoint_reconstruct(p, F, x, R)) / norm_f


def _transform_checks(p: ModelParams, order: int):
    cache = {}

    def gram(side):
        if "dev" not in cache:
            cache["dev"] = _isometry(p, order)
        return cache["dev"][side]

    rows = [
        ("basis_correspondence", lambda: check_basis_correspondence(p, order=order)),
        ("input_gram", lambda: gram(0)),
        ("output_gram", lambda: gram(1)),
        ("combo_norm", lambda: check_combo_norm(p, order)),
        ("eigen_residual_basis", lambda: check_eigen_basis(p)),
        ("eigen_residual_transform", lambda: check_eigen_transform(p, order)),
    ]
    if p.m == 0:
        rows += [
            ("constant_annihilated", lambda: check_constant(p)),
            ("second_bargmann_reduction", lambda: check_second_bargmann(p, order)),
            ("holomorphic_range", lambda: check_holomorphic(p, order)),
        ]
    rows += [
        ("resolution_of_identity", lambda: check_resolution(p, order)),
        ("roundtrip_norm", lambda: check_roundtrip_norm(p, order)),
        ("orthocomplement_annihilated", lambda: check_orthocomplement(p)),
    ]
    return rows


# ---------------------------------------------------------------------------

SUITES = ("specfun", "eigenspace", "coherent", "transform", "all")


def _safe(fn) -> float:
    try:
        return float(fn())
    except (ArithmeticError, ValueError, RuntimeError) as exc:
        print(f"check raised {type(exc).__name__}: {exc}", file=sys.stderr)
        return math.inf


def run_suite(suite: str, nu: float, m: int | None = None,
              order: int = DEFAULT_HALFLINE_ORDER, tolerances: dict | None = None) -> list[CheckResult]:
    """Run a suite for one level (``m``) or every admissible level (``m=None``).

    Level-dependent checks are named ``name`` for a single level and
    ``name[m=j]`` when several levels are run.
    """
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    tol = dict(TOLERANCES)
    for key, val in (tolerances or {}).items():
        if key not in tol:
            raise ValueError(f"unknown check name {key!r} in tolerance override")
        if not val > 0:
            raise ValueError(f"tolerance for {key} must be positive")
        tol[key] = float(val)
    plist = [make_params(nu, m)] if m is not None else levels(nu)
    if not plist:
        plist = levels(nu)
    want = SUITES[:-1] if suite == "all" else (suite,)
    results: list[CheckResult] = []

    def add(name, fn, p=None):
        label = name if p is None or len(plist) == 1 else f"{name}[m={p.m}]"
        results.append(CheckResult(label, _safe(fn), tol[name]))

    if "specfun" in want:
        for name, fn in SPECFUN_CHECKS:
            add(name, lambda fn=fn: fn(nu))
    for p in plist:
        if "eigenspace" in want:
            for name, fn in EIGENSPACE_CHECKS:
                add(name, lambda fn=fn: fn(p), p)
        if "coherent" in want:
            for name, fn in COHERENT_CHECKS:
                add(name, lambda fn=fn: fn(p), p)
        if "transform" in want:
            for name, fn in _transform_checks(p, order):
                add(name, fn, p)
    return results


def write_report(results: Iterable[CheckResult], fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["check", "value", "tolerance", "pass"])
    for r in results:
        writer.writerow(r.row())
