"""Rotation-number tuples and the fiber-product curve family.

An order-p automorphism with 2m fixed points on each of two commuting
p-gonal projections is encoded by a tuple in (Z_p^*)^m considered up to
coordinate rescaling and permutation.  Tuples in distinct orbits witness
non-conjugate cyclic actions; the curve

    y1^p = prod (x - a_{j,1})^{alpha_j} (x - a_{j,2})^{p - alpha_j}
    y2^p = prod (x - b_{j,1})^{beta_j}  (x - b_{j,2})^{p - beta_j}

carries both actions, and the numeric check below substitutes the closed
fixed-point formulas into the defining equations and reports residuals.
"""

from __future__ import annotations

import cmath
import itertools
import math
import warnings
from dataclasses import dataclass
from typing import Tuple

import mpmath

from .homorbits import BudgetExceeded
from .strata import AdmissibleTuple, is_prime

__all__ = [
    "RotationTuple",
    "CurveData",
    "NearSingular",
    "canonical_rotation",
    "same_orbit",
    "count_orbits",
    "witness_pair",
    "example2_type",
    "random_curve",
    "fixed_point_check",
    "quotient_orbifold_check",
]


class NearSingular(ValueError):
    """Branch points too close together for residuals to mean anything."""


def _check_p(p):
    if p < 5 or not is_prime(p):
        raise ValueError(f"p must be a prime >= 5, got {p}")


@dataclass(frozen=True)
class RotationTuple:
    """Element of (Z_p^*)^m up to rescaling and permutation."""

    p: int
    entries: Tuple[int, ...]

    def __post_init__(self):
        _check_p(self.p)
        if not self.entries:
            raise ValueError("rotation tuple must have length >= 1")
        for c in self.entries:
            if not 1 <= c <= self.p - 1:
                raise ValueError(f"entry {c} is not a unit mod {self.p}")

    @property
    def m(self):
        return len(self.entries)


def canonical_rotation(x):
    """Lexicographically least sorted rescale: min over units of sorted(lam*x)."""
    p = x.p
    return min(
        tuple(sorted(lam * c % p for c in x.entries)) for lam in range(1, p)
    )


def same_orbit(x, y):
    """True iff y = lam * (x permuted) for some unit lam and permutation."""
    if x.p != y.p:
        raise ValueError(f"modulus mismatch: {x.p} vs {y.p}")
    if x.m != y.m:
        raise ValueError(f"length mismatch: {x.m} vs {y.m}")
    return canonical_rotation(x) == canonical_rotation(y)


def _all_canonical_forms(p, m, budget):
    _check_p(p)
    if m < 1:
        raise ValueError("m must be >= 1")
    total = (p - 1) ** m
    if total > budget:
        raise BudgetExceeded(total, budget)
    forms = set()
    for entries in itertools.product(range(1, p), repeat=m):
        forms.add(canonical_rotation(RotationTuple(p, entries)))
    return forms


def count_orbits(p, m, budget=10**7):
    """Number of orbits in (Z_p^*)^m, by exhaustive canonicalisation."""
    return len(_all_canonical_forms(p, m, budget))


def witness_pair(p, m, budget=10**7):
    """Two tuples in distinct orbits (lex-least canonical forms), or None.

    Returns None exactly when the action is transitive.
    """
    forms = sorted(_all_canonical_forms(p, m, budget))
    if len(forms) < 2:
        return None
    return (RotationTuple(p, forms[0]), RotationTuple(p, forms[1]))


def example2_type(p, m):
    """Admissible tuple of the fiber-product family:
    (g, p; (p-1)(m-1), mp, 0) with g = (p-1)(2mp - p - 1).

    The topological conclusions need m >= 4; smaller m still yields a
    well-defined admissible tuple and only triggers a warning.
    """
    _check_p(p)
    if m < 1:
        raise ValueError("m must be >= 1")
    if m < 4:
        warnings.warn(
            f"m={m} is below the m >= 4 hypothesis of the fiber-product family",
            stacklevel=2,
        )
    g = (p - 1) * (2 * m * p - p - 1)
    return AdmissibleTuple(g, p, (p - 1) * (m - 1), m * p, 0)


@dataclass(frozen=True)
class CurveData:
    """Branch data of the fiber product of two p-gonal curves.

    ``a`` and ``b`` are m pairs of branch points (all 4m pairwise
    distinct); ``alpha`` and ``beta`` are the exponent tuples.
    """

    p: int
    a: Tuple[Tuple[complex, complex], ...]
    b: Tuple[Tuple[complex, complex], ...]
    alpha: RotationTuple
    beta: RotationTuple

    def __post_init__(self):
        _check_p(self.p)
        m = len(self.a)
        if len(self.b) != m or self.alpha.m != m or self.beta.m != m:
            raise ValueError("a, b, alpha, beta must share one length m")
        if self.alpha.p != self.p or self.beta.p != self.p:
            raise ValueError("exponent tuples must share the curve's p")

    @property
    def m(self):
        return len(self.a)

    def branch_points(self):
        return [z for pair in self.a for z in pair] + [
            z for pair in self.b for z in pair
        ]

    def to_json(self):
        pairs = lambda block: [[[z.real, z.imag] for z in pair] for pair in block]
        return {
            "p": self.p,
            "a": pairs(self.a),
            "b": pairs(self.b),
            "alpha": list(self.alpha.entries),
            "beta": list(self.beta.entries),
        }

    @classmethod
    def from_json(cls, data):
        unpair = lambda block: tuple(
            tuple(complex(re, im) for re, im in pair) for pair in block
        )
        p = data["p"]
        return cls(
            p,
            unpair(data["a"]),
            unpair(data["b"]),
            RotationTuple(p, tuple(data["alpha"])),
            RotationTuple(p, tuple(data["beta"])),
        )


def random_curve(p, m, rng, radius=1.2, min_sep=0.05):
    """Deterministic-for-a-seed random CurveData with well-spread points."""
    points = []
    while len(points) < 4 * m:
        z = complex(rng.uniform(-radius, radius), rng.uniform(-radius, radius))
        if all(abs(z - w) >= min_sep for w in points):
            points.append(z)
    a = tuple((points[2 * j], points[2 * j + 1]) for j in range(m))
    b = tuple((points[2 * m + 2 * j], points[2 * m + 2 * j + 1]) for j in range(m))
    alpha = RotationTuple(p, tuple(rng.randrange(1, p) for _ in range(m)))
    beta = RotationTuple(p, tuple(rng.randrange(1, p) for _ in range(m)))
    return CurveData(p, a, b, alpha, beta)


def _backend(dps):
    if dps is None:
        return {
            "to_c": complex,
            "exp": cmath.exp,
            "log": cmath.log,
            "pi": math.pi,
            "abs": abs,
        }
    return {
        "to_c": lambda z: mpmath.mpc(z.real, z.imag),
        "exp": mpmath.exp,
        "log": mpmath.log,
        "pi": mpmath.pi,
        "abs": lambda z: float(abs(z)),
    }


def fixed_point_check(curve, tolerance=1e-9, dps=None):
    """Substitute the closed-form fixed points into both curve equations.

    For every branch point of the first projection the points
    (a_{j,d}, 0, w^k * (prod (a_{j,d}-b_{i,1})^{beta_i}
    (a_{j,d}-b_{i,2})^{p-beta_i})^{1/p}) must lie on the curve, and
    symmetrically for the second projection.  Integer exponents are applied
    by exact powering before a single principal p-th root; the w^k factor
    then sweeps all root branches.  Passes iff the max residual is at most
    tolerance * (1 + max coordinate magnitude).

    ``dps`` switches the evaluation to mpmath at that many decimal digits
    (used to confirm residuals shrink with added precision).
    """
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    pts = curve.branch_points()
    for i, z in enumerate(pts):
        for w in pts[i + 1 :]:
            if abs(z - w) < 1e-12:
                raise NearSingular(
                    f"branch points {z} and {w} are closer than 1e-12"
                )

    if dps is None:
        return _fixed_point_residuals(curve, tolerance, _backend(None))
    with mpmath.workdps(dps):
        return _fixed_point_residuals(curve, tolerance, _backend(dps))


def _fixed_point_residuals(curve, tolerance, be):
    p, m = curve.p, curve.m
    to_c = be["to_c"]
    omega = be["exp"](2j * be["pi"] / p)
    a = [[to_c(z) for z in pair] for pair in curve.a]
    b = [[to_c(z) for z in pair] for pair in curve.b]
    alpha, beta = curve.alpha.entries, curve.beta.entries

    def poly(x, pairs, exps):
        acc = to_c(complex(1))
        for (z1, z2), q in zip(pairs, exps):
            acc *= (x - z1) ** q * (x - z2) ** (p - q)
        return acc

    def principal_root(z):
        return be["exp"](be["log"](z) / p)

    entries = []
    max_res = 0.0
    max_mag = 0.0
    for family, pairs, exps in (("u", a, alpha), ("v", b, beta)):
        # fixed points of the first action sit over the a-points and get
        # their y2 from the beta product, and vice versa
        other_pairs = b if family == "u" else a
        other_exps = beta if family == "u" else alpha
        for j in range(m):
            for delta in (0, 1):
                x = pairs[j][delta]
                base = poly(x, other_pairs, other_exps)
                root = principal_root(base)
                zero_side = poly(x, pairs, exps)  # contains the factor (x - x)
                for k in range(p):
                    y_other = omega**k * root
                    res_zero = be["abs"](zero_side)  # y_vanishing^p == 0
                    res_other = be["abs"](y_other**p - base)
                    res = max(res_zero, res_other)
                    mag = max(be["abs"](x), be["abs"](y_other))
                    max_res = max(max_res, res)
                    max_mag = max(max_mag, mag)
                    entries.append(
                        {
                            "point": f"{family}[{j + 1},{delta + 1},{k}]",
                            "residual": res,
                        }
                    )
    scale = 1.0 + max_mag
    return {
        "passed": max_res <= tolerance * scale,
        "max_residual": max_res,
        "scale": scale,
        "threshold": tolerance * scale,
        "tolerance": tolerance,
        "points": entries,
    }


def quotient_orbifold_check(tup):
    """Euler-characteristic bookkeeping for the degree-p quotient:
    2g - 2 = p(2(t+s) - 2) + 2r(p-1).

    An algebraic consequence of admissibility; kept as a tautology guard.
    """
    left = 2 * tup.g - 2
    right = tup.p * (2 * (tup.t + tup.s) - 2) + 2 * tup.r * (tup.p - 1)
    return left == right
