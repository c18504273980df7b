"""Model parameters (nu, m) and the spectral constants derived from them."""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass, field

# alpha = 2(nu - m) - 1 must stay clear of zero
NU_GUARD = 1e-12


class ParameterError(ValueError):
    """Raised for inadmissible (nu, m) pairs."""


def max_level(nu: float) -> int:
    """Largest level index m with m < nu - 1/2 (strict)."""
    nu = _check_nu(nu)
    top = nu - 0.5
    m = math.ceil(top) - 1
    return max(m, 0)


def _check_nu(nu) -> float:
    if isinstance(nu, bool) or not isinstance(nu, numbers.Real):
        raise ParameterError(f"nu must be a real number, got {nu!r}")
    nu = float(nu)
    if not math.isfinite(nu):
        raise ParameterError(f"nu must be finite, got {nu!r}")
    if nu <= 0.5 + NU_GUARD:
        raise ParameterError(
            f"nu must exceed 1/2 for a discrete spectrum to exist, got nu={nu}")
    return nu


@dataclass(frozen=True)
class ModelParams:
    """Admissible pair (nu, m) with derived exponents.

    ``beta`` is the weight exponent 2*nu, ``alpha`` = 2(nu - m) - 1 is the
    Laguerre/Jacobi parameter and ``epsilon`` the Landau level 4m(2nu - m - 1).
    Build instances with :func:`make_params`.
    """

    nu: float
    m: int
    beta: float = field(init=False)
    alpha: float = field(init=False)
    epsilon: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "beta", 2 * self.nu)
        object.__setattr__(self, "alpha", 2 * (self.nu - self.m) - 1)
        object.__setattr__(self, "epsilon", 4 * self.m * (2 * self.nu - self.m - 1))

    @property
    def weight_exponent(self) -> float:
        """Exponent of (1 - |z|^2) in the disk measure."""
        return self.beta - 2

    @property
    def half_power(self) -> float:
        """nu - m, the power of xi carried by the half-line basis."""
        return self.nu - self.m


def make_params(nu: float, m: int) -> ModelParams:
    nu = _check_nu(nu)
    if isinstance(m, bool) or not isinstance(m, numbers.Integral):
        raise ParameterError(f"level index must be an integer, got {m!r}")
    m = int(m)
    if m < 0:
        raise ParameterError(f"level index must be non-negative, got m={m}")
    if not m < nu - 0.5:
        raise ParameterError(
            f"level index out of range: m={m} requires m < nu - 1/2 = {nu - 0.5}")
    return ModelParams(nu, m)


def levels(nu: float) -> list[ModelParams]:
    """All admissible levels for a given nu, lowest first."""
    return [make_params(nu, m) for m in range(max_level(nu) + 1)]
