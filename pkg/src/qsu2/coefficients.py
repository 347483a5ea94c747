"""Scalar formulas: g(k), the Clebsch-Gordan column coefficients of the
GNS action, their crystal (q -> 0) limits, and the analytic estimates on
g used by the compactness diagnostics.

All coefficient functions take Gamma points in doubled coordinates and
apply the validity-first rule: when the target basis vector of a term
does not exist (it would violate the Gamma invariants), the coefficient
is 0 by definition and no division is attempted.  This is exactly the
set of sites where the raw formulas degenerate to 0/0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .lattice import GammaIndex, is_valid_gamma


def g(k: int, q: float) -> float:
    """sqrt(1 - q^(2k)); strictly increasing in k with g(0) = 0."""
    if k < 0:
        raise ValueError("negative q-index")
    return math.sqrt(1.0 - q ** (2 * k))


def g_exact0(k: int) -> int:
    """Crystal limit of g: 0 at k = 0, else 1."""
    if k < 0:
        raise ValueError("negative q-index")
    return 0 if k == 0 else 1


def t_parts(t: int) -> tuple[int, int]:
    """Positive and negative parts (t_plus, t_minus) of an integer."""
    return (max(t, 0), max(-t, 0))


@dataclass(frozen=True)
class Mode:
    """Scalar mode of an operator: exact integers at q = 0, floats otherwise."""

    kind: str  # "exact0" or "float"
    q: float = 0.0

    @property
    def exact(self) -> bool:
        return self.kind == "exact0"


EXACT_ZERO = Mode("exact0")


def float_mode(q: float) -> Mode:
    if not -1.0 < q < 1.0:
        raise ValueError("deformation parameter must satisfy |q| < 1")
    if q == 0.0:
        raise ValueError("q=0 has a dedicated exact mode (EXACT_ZERO)")
    return Mode("float", q)


def _check_gamma(n2: int, i2: int, j2: int) -> None:
    if not is_valid_gamma(GammaIndex(n2, i2, j2)):
        raise ValueError(f"invalid Gamma point ({n2}, {i2}, {j2})")


def a_plus(n2: int, i2: int, j2: int, q: float) -> float:
    """Raising coefficient of the alpha action, target (n+1/2, i-1/2, j-1/2)."""
    _check_gamma(n2, i2, j2)
    if not is_valid_gamma(GammaIndex(n2 + 1, i2 - 1, j2 - 1)):
        return 0.0
    exp = n2 + (i2 + j2) // 2 + 1  # = 2n + i + j + 1
    num = g((n2 - j2) // 2 + 1, q) * g((n2 - i2) // 2 + 1, q)
    return q**exp * num / (g(n2 + 1, q) * g(n2 + 2, q))


def a_minus(n2: int, i2: int, j2: int, q: float) -> float:
    """Lowering coefficient of the alpha action, target (n-1/2, i-1/2, j-1/2)."""
    _check_gamma(n2, i2, j2)
    if not is_valid_gamma(GammaIndex(n2 - 1, i2 - 1, j2 - 1)):
        return 0.0
    num = g((n2 + j2) // 2, q) * g((n2 + i2) // 2, q)
    return num / (g(n2, q) * g(n2 + 1, q))


def b_plus(n2: int, i2: int, j2: int, q: float) -> float:
    """Raising coefficient of the beta action, target (n+1/2, i+1/2, j-1/2)."""
    _check_gamma(n2, i2, j2)
    if not is_valid_gamma(GammaIndex(n2 + 1, i2 + 1, j2 - 1)):
        return 0.0
    exp = (n2 + j2) // 2  # = n + j
    num = g((n2 - j2) // 2 + 1, q) * g((n2 + i2) // 2 + 1, q)
    return -(q**exp) * num / (g(n2 + 1, q) * g(n2 + 2, q))


def b_minus(n2: int, i2: int, j2: int, q: float) -> float:
    """Lowering coefficient of the beta action, target (n-1/2, i+1/2, j-1/2)."""
    _check_gamma(n2, i2, j2)
    if not is_valid_gamma(GammaIndex(n2 - 1, i2 + 1, j2 - 1)):
        return 0.0
    exp = (n2 + i2) // 2  # = n + i
    num = g((n2 + j2) // 2, q) * g((n2 - i2) // 2, q)
    return q**exp * num / (g(n2, q) * g(n2 + 1, q))


# Crystal limits of the four coefficients.  a_plus is O(q) and vanishes;
# the others become indicators with values in {-1, 0, +1}.  The branch
# priority at the corner i = j = -n goes to the j = -n case (the b_minus
# numerator vanishes there).

def a_plus0(n2: int, i2: int, j2: int) -> int:
    _check_gamma(n2, i2, j2)
    return 0


def a_minus0(n2: int, i2: int, j2: int) -> int:
    _check_gamma(n2, i2, j2)
    return 1 if (i2 > -n2 and j2 > -n2) else 0


def b_plus0(n2: int, i2: int, j2: int) -> int:
    _check_gamma(n2, i2, j2)
    return -1 if j2 == -n2 else 0


def b_minus0(n2: int, i2: int, j2: int) -> int:
    _check_gamma(n2, i2, j2)
    return 1 if (i2 == -n2 and j2 > -n2) else 0


@dataclass(frozen=True)
class GEstimateRow:
    k: int
    lhs1: float  # |1 - g(k)|
    bound1: float  # q^(2k)
    lhs2: float  # |1 - 1/g(k)|
    bound2: float  # c * q^(2k)


@dataclass(frozen=True)
class GEstimateReport:
    q: float
    c: float
    rows: tuple[GEstimateRow, ...]
    passed: bool


def verify_g_estimates(q: float, kmax: int) -> GEstimateReport:
    """Check |1 - g(k)| < q^(2k) and |1 - 1/g(k)| < c q^(2k) for k = 1..kmax.

    The constant is c = (1 - q^2)^(-1/2) = 1/g(1), the smallest k-uniform
    constant of this shape: (1 - g(k))/g(k) <= q^(2k)/g(1).

    The left-hand sides are evaluated through the cancellation-free
    identities 1 - g = q^(2k)/(1 + g) and 1 - 1/g = q^(2k)/(g(1 + g));
    the naive subtraction 1 - sqrt(1 - x) carries no significant digits
    once x drops near machine epsilon and would fake violations there.
    """
    if q == 0.0:
        raise ValueError("estimates vacuous at q=0")
    if not 0.0 < abs(q) < 1.0:
        raise ValueError("deformation parameter must satisfy 0 < |q| < 1")
    if kmax < 1:
        raise ValueError("kmax must be at least 1")
    c = 1.0 / g(1, q)
    rows = []
    ok = True
    for k in range(1, kmax + 1):
        gk = g(k, q)
        bound = q ** (2 * k)
        lhs1 = bound / (1.0 + gk)
        lhs2 = bound / (gk * (1.0 + gk))
        rows.append(GEstimateRow(k, lhs1, bound, lhs2, c * bound))
        ok = ok and lhs1 < bound and lhs2 < c * bound
    return GEstimateReport(q, c, tuple(rows), ok)
