"""Special functions, semi-infinite quadrature and alternating binomial sums.

These are the shared numerical building blocks for the analytic coverage
evaluators. All integrands handled here decay exponentially, so a single
adaptive pass over (0, inf) is reliable.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate

__all__ = [
    "QuadratureSpec",
    "NumericsError",
    "gamma_fn",
    "eta",
    "integrate_semi_infinite",
    "alternating_binomial_sum",
]


class NumericsError(ValueError):
    """Raised on domain errors or non-convergent quadrature."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances for the semi-infinite integrals of the coverage formulas.

    abs_tol/rel_tol are the tolerances requested from the adaptive rule;
    accept_tol, when set, is the error estimate beyond which the result is
    rejected (default: ten times the requested tolerance). Separating the
    two lets a caller ask for more accuracy than it strictly requires.
    """

    abs_tol: float = 1e-8
    rel_tol: float = 1e-8
    max_subdivisions: int = 200
    accept_tol: float | None = None

    def __post_init__(self):
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise NumericsError("quadrature tolerances must be positive")
        if self.max_subdivisions < 1:
            raise NumericsError("max_subdivisions must be >= 1")
        if self.accept_tol is not None and self.accept_tol <= 0:
            raise NumericsError("accept_tol must be positive")


def gamma_fn(x: float) -> float:
    """Gamma function for positive real arguments."""
    if x <= 0:
        raise NumericsError(f"gamma_fn requires x > 0, got {x}")
    return math.gamma(x)


def eta(N: int) -> float:
    """Sharpness constant N*(N!)^(-1/N) of the N-term gamma-dummy bound."""
    if N < 1:
        raise NumericsError(f"eta requires N >= 1, got {N}")
    return N * math.factorial(N) ** (-1.0 / N)


def integrate_semi_infinite(f: Callable[[float], float],
                            spec: QuadratureSpec = QuadratureSpec()) -> float:
    """Adaptive integral of f over (0, inf) for exponentially decaying f.

    A first pass uses spec.max_subdivisions; if its error estimate misses
    the tolerance, one retry with a 5x subdivision budget is made before
    raising (sharp integrand features occasionally need the extra splits).
    """
    with warnings.catch_warnings():
        # convergence is judged from the returned error estimate below
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        for limit in (spec.max_subdivisions, 5 * spec.max_subdivisions):
            result, abserr = integrate.quad(
                f, 0.0, np.inf,
                epsabs=spec.abs_tol, epsrel=spec.rel_tol,
                limit=limit,
            )
            if spec.accept_tol is not None:
                threshold = spec.accept_tol
            else:
                threshold = 10.0 * max(spec.abs_tol,
                                       spec.rel_tol * abs(result), 1e-300)
            if np.isfinite(result) and abserr <= threshold:
                return result
    raise NumericsError(
        f"semi-infinite quadrature did not converge (err={abserr:.2e})",
        partial=result,
    )


def alternating_binomial_sum(N: int, term: Callable[[int], float]) -> float:
    """Sum of C(N,n) * (-1)^(n+1) * term(n) for n = 1..N.

    Terms are accumulated from n=N down to n=1 so that the largest binomial
    weights enter last; for N <= 20 the binomials are exact in floating point.
    """
    if N < 1:
        raise NumericsError(f"alternating_binomial_sum requires N >= 1, got {N}")
    if N > 20:
        raise NumericsError("N > 20 risks inexact binomial coefficients")
    total = 0.0
    for n in range(N, 0, -1):
        total += math.comb(N, n) * (-1.0) ** (n + 1) * term(n)
    return total
