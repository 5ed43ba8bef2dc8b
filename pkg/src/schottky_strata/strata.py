"""Admissible tuples and stratum-level counting.

Everything is indexed by tuples (g, p; t, r, s) with p prime, g >= 2 and

    g = p(t + r + s - 1) + 1 - r,

equivalently g - 1 = p(t + s - 1) + r(p - 1).  All counting here is exact
integer arithmetic; no floats anywhere.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

__all__ = [
    "AdmissibleTuple",
    "Basis",
    "ComponentBounds",
    "StratumReport",
    "is_prime",
    "is_admissible",
    "enumerate_tuples",
    "count_strata",
    "closed_form_count",
    "m_count",
    "dimension",
    "component_bounds",
    "stratum_report",
]


def is_prime(n):
    """Deterministic trial division; inputs here are small."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _validate_gp(g, p):
    for name, value in (("g", g), ("p", p)):
        if not isinstance(value, int) or isinstance(value, bool):
            raise ValueError(f"{name} must be an integer, got {value!r}")
    if g < 2:
        raise ValueError(f"genus must be >= 2, got g={g}")
    if p < 2 or not is_prime(p):
        raise ValueError(f"p must be a prime >= 2, got p={p}")


def _validate_trs(t, r, s):
    for name, value in (("t", t), ("r", r), ("s", s)):
        if not isinstance(value, int) or isinstance(value, bool):
            raise ValueError(f"{name} must be an integer, got {value!r}")
        if value < 0:
            raise ValueError(f"{name} must be >= 0, got {value}")


def is_admissible(g, p, t, r, s):
    """True iff g = p(t+r+s-1) + 1 - r.

    Raises ValueError for non-prime p, g < 2 or negative entries;
    returns a plain boolean for well-formed inputs.
    """
    _validate_gp(g, p)
    _validate_trs(t, r, s)
    return g == p * (t + r + s - 1) + 1 - r


@dataclass(frozen=True)
class AdmissibleTuple:
    """A tuple (g, p; t, r, s) satisfying the defining relation.

    Construction validates, so instances are admissible by fiat.
    """

    g: int
    p: int
    t: int
    r: int
    s: int

    def __post_init__(self):
        if not is_admissible(self.g, self.p, self.t, self.r, self.s):
            raise ValueError(
                f"({self.g},{self.p};{self.t},{self.r},{self.s}) is not admissible: "
                f"g != p(t+r+s-1)+1-r"
            )

    @property
    def trs(self):
        return (self.t, self.r, self.s)

    def __str__(self):
        return f"({self.g},{self.p};{self.t},{self.r},{self.s})"


class Basis(enum.Enum):
    """Which statement pins down the connected-component count."""

    THEOREM_CASE_1 = "theorem_case_1"
    THEOREM_CASE_3 = "theorem_case_3"
    UPPER_ONLY = "upper_only"
    EXAMPLE2_FAMILY = "example2_family"


@dataclass(frozen=True)
class ComponentBounds:
    """Connected-component data for one stratum.

    ``irreducible_count`` (= the upper bound) is always known exactly;
    ``exact`` is the connected-component count when a theorem settles it,
    None otherwise.
    """

    irreducible_count: int
    upper: int
    exact: Optional[int]
    basis: Basis

    def __post_init__(self):
        if self.upper != self.irreducible_count:
            raise ValueError("upper bound must equal the irreducible count")
        if self.exact is not None and not (1 <= self.exact <= self.upper):
            raise ValueError(f"exact={self.exact} outside [1, {self.upper}]")


@dataclass(frozen=True)
class StratumReport:
    tuple: AdmissibleTuple
    m_count: int
    dimension: int
    components: ComponentBounds


def enumerate_tuples(g, p):
    """All admissible (t, r, s) for the given genus and prime, as tuples.

    Iterates pairs (t, s) with t + s <= floor((g+p-1)/p) and solves
    r = (g - 1 - p(t+s-1)) / (p-1), keeping the nonnegative exact
    quotients.  Output is sorted lexicographically by (t, r, s).
    """
    _validate_gp(g, p)
    bound = (g + p - 1) // p
    found = []
    for t in range(bound + 1):
        for s in range(bound + 1 - t):
            if (g - p * (t + s)) % (p - 1) != 0:
                continue
            num = g - 1 - p * (t + s - 1)
            if num < 0 or num % (p - 1) != 0:
                continue
            found.append(AdmissibleTuple(g, p, t, num // (p - 1), s))
    found.sort(key=lambda a: a.trs)
    return found


def count_strata(p, g):
    """Number of admissible tuples for (g, p).

    Same value as ``len(enumerate_tuples(g, p))`` (asserted in the tests)
    but allocation-free, counting the (t, s) pairs directly.
    """
    _validate_gp(g, p)
    bound = (g + p - 1) // p
    count = 0
    for total in range(bound + 1):
        if (g - p * total) % (p - 1) == 0 and g - 1 - p * (total - 1) >= 0:
            count += total + 1  # pairs (t, s) with t + s = total
    return count


def closed_form_count(p, g):
    """Closed-form stratum count for p in {2, 3}.

    For p = 2 every pair (t, s) with t + s <= floor((g+1)/2) works.  For
    p = 3 the parity condition "g - 3(t+s) even" filters the pairs, giving
    four cases keyed to the parities of g and of floor((g+2)/3).
    """
    _validate_gp(g, p)
    if p == 2:
        n = (g + 1) // 2
        return (1 + n) * (2 + n) // 2
    if p == 3:
        n = (g + 2) // 3
        if g % 2 == 0:
            if n % 2 == 0:
                return (n + 2) ** 2 // 4
            return (n + 1) ** 2 // 4
        if n % 2 == 0:
            return n * (n + 2) // 4
        return (n + 1) * (n + 3) // 4
    raise ValueError(f"closed form only available for p in {{2, 3}}, got p={p}")


def m_count(tup):
    """Number of irreducible components of the stratum of ``tup``.

    This is the count of index-p normal Schottky subgroups of a
    cyclic-Schottky group of that type, up to geometric automorphisms:
    1 for p = 2, and the product of two binomial coefficients

        C(r + (p-3)/2, (p-3)/2) * C(s + (p-3)/2, (p-3)/2)

    for odd p.  For p = 3 both factors collapse to C(r,0) = C(s,0) = 1.
    Exact integers throughout; independent of t.
    """
    if tup.p == 2:
        return 1
    half = (tup.p - 3) // 2
    return math.comb(tup.r + half, half) * math.comb(tup.s + half, half)


def dimension(tup):
    """Complex dimension (3g - 3 - r(p-3)) / p of each irreducible component.

    The quotient is an exact integer for admissible tuples and equals
    3(t + s - 1) + 2r; both forms are computed and cross-asserted.
    """
    num = 3 * tup.g - 3 - tup.r * (tup.p - 3)
    if num % tup.p != 0:
        raise AssertionError(f"dimension of {tup} is not an integer: {num}/{tup.p}")
    dim = num // tup.p
    assert dim == 3 * (tup.t + tup.s - 1) + 2 * tup.r
    return dim


def _example2_family_member(tup):
    # (t, r, s) = ((p-1)(m-1), mp, 0) for some m >= 4, p >= 5
    if tup.p < 5 or tup.s != 0 or tup.r == 0 or tup.r % tup.p != 0:
        return False
    m = tup.r // tup.p
    return m >= 4 and tup.t == (tup.p - 1) * (m - 1)


def component_bounds(tup):
    """Connected-component bounds for the stratum of ``tup``.

    exact=1 when p <= 3 or when p >= 5 with r = s = 0; exact=M when
    p >= 5 and r or s is a non-multiple of p; exact=1 for the fiber-product
    family (t, r, s) = ((p-1)(m-1), mp, 0), m >= 4; otherwise only the
    upper bound M is reported.
    """
    m = m_count(tup)
    if tup.p in (2, 3) or (tup.p >= 5 and tup.r == 0 and tup.s == 0):
        return ComponentBounds(m, m, 1, Basis.THEOREM_CASE_1)
    if tup.p >= 5 and (tup.r % tup.p != 0 or tup.s % tup.p != 0):
        return ComponentBounds(m, m, m, Basis.THEOREM_CASE_3)
    if _example2_family_member(tup):
        return ComponentBounds(m, m, 1, Basis.EXAMPLE2_FAMILY)
    return ComponentBounds(m, m, None, Basis.UPPER_ONLY)


def stratum_report(g, p):
    """One StratumReport per admissible tuple of (g, p), in (t, r, s) order."""
    return [
        StratumReport(tup, m_count(tup), dimension(tup), component_bounds(tup))
        for tup in enumerate_tuples(g, p)
    ]
