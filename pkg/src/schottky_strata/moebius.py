"""Double-precision Moebius transformations and matrix realisations of
cyclic-Schottky structural data.

Maps are unit-determinant 2x2 complex matrices up to sign; every test
against the identity compares with both +I and -I.  Tolerances live in a
single configuration object rather than as scattered literals.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

from .cyclic_schottky import GroupSpec, build_spec, kernel_sample

__all__ = [
    "INF",
    "MobiusClass",
    "MobiusMap",
    "Tolerances",
    "DEFAULT_TOLERANCES",
    "FixedPoints",
    "MatrixGroupSpec",
    "classify",
    "fixed_points",
    "order_check",
    "build_matrix_group",
    "purely_loxodromic_sample",
]

INF = math.inf  # the point at infinity on the Riemann sphere


@dataclass(frozen=True)
class Tolerances:
    classify: float = 1e-9
    order: float = 1e-8
    commutation: float = 1e-10
    determinant: float = 1e-12


DEFAULT_TOLERANCES = Tolerances()


class MobiusClass(enum.Enum):
    LOXODROMIC = "loxodromic"
    ELLIPTIC = "elliptic"
    PARABOLIC = "parabolic"
    IDENTITY = "identity"


class MobiusMap:
    """Matrix [[a, b], [c, d]] normalised to determinant 1.

    The square root of the determinant is chosen so the resulting trace
    has nonnegative real part (ties: nonnegative imaginary part), which
    makes normalisation idempotent and sign-stable.
    """

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d, normalize=True):
        a, b, c, d = complex(a), complex(b), complex(c), complex(d)
        if normalize:
            det = a * d - b * c
            if abs(det) == 0:
                raise ValueError("matrix is singular")
            root = cmath.sqrt(det)
            a, b, c, d = a / root, b / root, c / root, d / root
            tr = a + d
            if tr.real < 0 or (tr.real == 0 and tr.imag < 0):
                a, b, c, d = -a, -b, -c, -d
        self.a, self.b, self.c, self.d = a, b, c, d

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def trace(self):
        return self.a + self.d

    def det(self):
        return self.a * self.d - self.b * self.c

    def __mul__(self, other):
        return MobiusMap(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
            normalize=False,
        )

    def inverse(self):
        # determinant is 1, so the adjugate is the inverse
        return MobiusMap(self.d, -self.b, -self.c, self.a, normalize=False)

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = MobiusMap(1, 0, 0, 1, normalize=False)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def apply(self, z):
        if z == INF:
            return INF if self.c == 0 else self.a / self.c
        num = self.a * z + self.b
        den = self.c * z + self.d
        if den == 0:
            return INF
        return num / den

    def __repr__(self):
        return f"MobiusMap({self.a!r}, {self.b!r}, {self.c!r}, {self.d!r})"


def _frobenius(entries):
    return math.sqrt(sum(abs(x) ** 2 for x in entries))


def dist_to_unit(m):
    """min(||M - I||, ||M + I||) in the Frobenius norm (PSL sign folded)."""
    plus = _frobenius((m.a - 1, m.b, m.c, m.d - 1))
    minus = _frobenius((m.a + 1, m.b, m.c, m.d + 1))
    return min(plus, minus)


def classify(m, eps=None, tolerances=DEFAULT_TOLERANCES):
    """Trace classification, identity and parabolic first.

    IDENTITY within eps of +-I; PARABOLIC when tr^2 is within eps of 4;
    ELLIPTIC when tr^2 is real within eps and lies in [0, 4-eps];
    LOXODROMIC otherwise.
    """
    eps = tolerances.classify if eps is None else eps
    if dist_to_unit(m) <= eps:
        return MobiusClass.IDENTITY
    tr2 = m.trace() ** 2
    if abs(tr2 - 4) <= eps:
        return MobiusClass.PARABOLIC
    if abs(tr2.imag) <= eps and -eps <= tr2.real <= 4 - eps:
        return MobiusClass.ELLIPTIC
    return MobiusClass.LOXODROMIC


@dataclass(frozen=True)
class FixedPoints:
    points: Tuple[object, ...]  # complex values or INF
    attracting: Optional[object] = None
    repelling: Optional[object] = None


def _multiplier_abs(m, z):
    """|derivative| at a fixed point (computed in the 1/z chart at infinity)."""
    if z == INF:
        if m.c != 0:
            raise ValueError("infinity is not fixed")
        return abs(m.d / m.a)
    return 1.0 / abs(m.c * z + m.d) ** 2


def fixed_points(m, eps=None, tolerances=DEFAULT_TOLERANCES):
    """Fixed points on the sphere; loxodromic maps get attract/repel labels.

    Solves c z^2 + (d - a) z - b = 0, with infinity fixed exactly when
    c = 0.  Identity input is rejected.
    """
    cls = classify(m, eps=eps, tolerances=tolerances)
    if cls is MobiusClass.IDENTITY:
        raise ValueError("identity has no isolated fixed points")
    pts = []
    if m.c == 0:
        pts.append(INF)
        if m.a != m.d:
            pts.append(m.b / (m.d - m.a))
    elif cls is MobiusClass.PARABOLIC:
        pts = [(m.a - m.d) / (2 * m.c)]
    else:
        disc = cmath.sqrt((m.d - m.a) ** 2 + 4 * m.b * m.c)
        z1 = ((m.a - m.d) + disc) / (2 * m.c)
        z2 = ((m.a - m.d) - disc) / (2 * m.c)
        pts = [z1] if z1 == z2 else [z1, z2]
    if cls is not MobiusClass.LOXODROMIC or len(pts) != 2:
        return FixedPoints(tuple(pts))
    mults = [_multiplier_abs(m, z) for z in pts]
    if mults[0] < 1 <= mults[1]:
        att, rep = pts[0], pts[1]
    else:
        att, rep = pts[1], pts[0]
    return FixedPoints(tuple(pts), attracting=att, repelling=rep)


def order_check(m, p, eps=None, tolerances=DEFAULT_TOLERANCES):
    """True iff M^p is +-I within eps and M itself is not the identity."""
    eps = tolerances.order if eps is None else eps
    if dist_to_unit(m) <= tolerances.classify:
        return False
    return dist_to_unit(m**p) <= eps


# ---------------------------------------------------------------------------
# concrete matrix groups
#
# All three factory matrices are written in closed form (entries of the
# conjugated diagonal model expanded symbolically) rather than as matrix
# products; this keeps each entry within a couple of ulps and is what makes
# the order/commutation checks meaningful at distant centers.

_MACH_EPS = 2.220446049250313e-16


def _loxodromic_at(center, offset, multiplier):
    """Loxodromic with real fixed points center -+ offset; attracting at
    center + offset; trace sqrt(m) + 1/sqrt(m)."""
    u = math.sqrt(multiplier)
    ch, sh = (u + 1 / u) / 2, (u - 1 / u) / 2
    k = center / offset
    return MobiusMap(
        ch + k * sh,
        -((center * center - offset * offset) / offset) * sh,
        sh / offset,
        ch - k * sh,
    )


def _elliptic_conj_pair(center, offset, p):
    """Order-p rotation fixing the conjugate pair center -+ i*offset.

    The fixed points are conjugate, so the matrix is real.
    """
    cs, sn = math.cos(math.pi / p), math.sin(math.pi / p)
    k = center / offset
    return MobiusMap(
        cs + k * sn,
        -((center * center + offset * offset) / offset) * sn,
        sn / offset,
        cs - k * sn,
    )


def _elliptic_real_pair(center, offset, p):
    """Order-p rotation fixing the real pair center -+ offset (pair frame)."""
    cs, sn = math.cos(math.pi / p), math.sin(math.pi / p)
    k = center / offset
    return MobiusMap(
        cs + 1j * k * sn,
        -1j * ((center * center - offset * offset) / offset) * sn,
        1j * sn / offset,
        cs - 1j * k * sn,
    )


@dataclass(frozen=True)
class MatrixGroupSpec:
    """Concrete matrices for a GroupSpec, one per roster symbol."""

    spec: GroupSpec
    matrices: Dict[Tuple[str, int], MobiusMap]
    centers: Dict[Tuple[str, int], complex]
    separation: float
    multiplier: float = 9.0
    offset: float = 0.1


def build_matrix_group(
    tup,
    separation=10.0,
    multiplier=9.0,
    offset=0.1,
    tolerances=DEFAULT_TOLERANCES,
):
    """Place the free factors at well-separated centers on the real axis.

    Elliptic factors take the centers nearest the origin, then the
    commuting pairs, then the loxodromic factors (the torsion checks have
    the tightest tolerances and their double-precision accuracy decays
    with the center magnitude).  Elliptic generators rotate by 2 pi / p
    about center -+ offset*i; loxodromic generators have real fixed
    points center -+ offset; each pair shares one real fixed-point set,
    so its commutator vanishes to rounding.  The construction certifies
    the algebraic/classification invariants below, not discreteness.
    """
    if separation <= 0 or offset <= 0 or multiplier <= 1:
        raise ValueError("separation and offset must be positive, multiplier > 1")
    spec = build_spec(tup)
    p = tup.p
    matrices = {}
    centers = {}
    slot = 0
    for j in range(1, tup.r + 1):
        center = slot * separation
        matrices[("e", j)] = _elliptic_conj_pair(center, offset, p)
        centers[("e", j)] = complex(center, 0)
        slot += 1
    for k in range(1, tup.s + 1):
        center = slot * separation
        matrices[("t", k)] = _loxodromic_at(center, offset, multiplier)
        matrices[("f", k)] = _elliptic_real_pair(center, offset, p)
        centers[("t", k)] = complex(center, 0)
        centers[("f", k)] = complex(center, 0)
        slot += 1
    for j in range(1, tup.t + 1):
        center = slot * separation
        matrices[("a", j)] = _loxodromic_at(center, offset, multiplier)
        centers[("a", j)] = complex(center, 0)
        slot += 1

    mg = MatrixGroupSpec(spec, matrices, centers, separation, multiplier, offset)
    _validate_matrix_group(mg, tolerances)
    return mg


def _frobenius_m(m):
    return _frobenius(m.entries())


def _validate_matrix_group(mg, tolerances):
    """Internal bug guard for freshly built groups.

    Far centers make the torsion checks intrinsically ill-conditioned in
    doubles (errors grow like ||M||^3 for orders, ||T||*||F|| for
    commutators), so the guard widens the configured tolerances by those
    condition factors.  Tests assert the plain tolerances on the
    well-conditioned instances.
    """
    p = mg.spec.p
    for sym, m in mg.matrices.items():
        kind = sym[0]
        if kind in ("a", "t"):
            if classify(m, tolerances=tolerances) is not MobiusClass.LOXODROMIC:
                raise AssertionError(f"{sym} is not loxodromic")
        else:
            eff = max(tolerances.order, 64 * _MACH_EPS * _frobenius_m(m) ** 3)
            if not order_check(m, p, eps=eff, tolerances=tolerances):
                raise AssertionError(f"{sym} does not have order {p}")
            if classify(m, tolerances=tolerances) is not MobiusClass.ELLIPTIC:
                raise AssertionError(f"{sym} is not elliptic")
    for k in range(1, mg.spec.tuple.s + 1):
        t_m, f_m = mg.matrices[("t", k)], mg.matrices[("f", k)]
        delta = commutator_defect(t_m, f_m)
        eff = max(
            tolerances.commutation,
            64 * _MACH_EPS * _frobenius_m(t_m) * _frobenius_m(f_m),
        )
        if delta > eff:
            raise AssertionError(f"pair {k} fails to commute: {delta}")


def commutator_defect(m1, m2):
    """min over signs of ||m1 m2 -+ m2 m1|| in the Frobenius norm."""
    ab, ba = m1 * m2, m2 * m1
    return min(
        _frobenius([x - y for x, y in zip(ab.entries(), ba.entries())]),
        _frobenius([x + y for x, y in zip(ab.entries(), ba.entries())]),
    )


def word_matrix(mg, word):
    """Evaluate an FPWord as a product of the roster matrices."""
    result = MobiusMap(1, 0, 0, 1, normalize=False)
    for sym, exp in word.syllables:
        result = result * (mg.matrices[sym] ** exp)
    return result


def purely_loxodromic_sample(
    mg,
    phi,
    max_syllables=4,
    eps=None,
    budget=10**6,
    tolerances=DEFAULT_TOLERANCES,
):
    """Classify every short kernel word; pass iff all non-identity products
    are loxodromic.

    Violations (elliptic/parabolic evaluations) are reported with the
    offending word and its trace; they indicate insufficient separation
    rather than a hard error.
    """
    eps = tolerances.classify if eps is None else eps
    words = kernel_sample(phi, max_syllables, budget=budget)
    entries = []
    violations = []
    n_lox = 0
    n_identity = 0
    for w in words:
        m = word_matrix(mg, w)
        cls = classify(m, eps=eps, tolerances=tolerances)
        tr = m.trace()
        entry = {"word": str(w), "class": cls.value, "trace": [tr.real, tr.imag]}
        entries.append(entry)
        if cls is MobiusClass.LOXODROMIC:
            n_lox += 1
        elif cls is MobiusClass.IDENTITY:
            n_identity += 1
        else:
            violations.append(entry)
    return {
        "passed": not violations,
        "n_words": len(words),
        "n_loxodromic": n_lox,
        "n_identity": n_identity,
        "violations": violations,
        "words": entries,
    }
