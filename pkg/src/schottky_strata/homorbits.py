"""Brute-force orbit oracles for generator-image data.

A surjective homomorphism from a cyclic-Schottky group onto Z_p with
torsion-free kernel is described by its images on the generator roster:
a vector ``a`` (loxodromic free factors, any residues), ``e`` (elliptic
factors, units only), and per-pair vectors ``tau``/``f`` (loxodromic /
elliptic halves of the rank-two abelian factors; ``f`` units only).

Two independent counters live here:

* ``orbit_count_tuples`` enumerates the unit-vector pairs (u, v) and counts
  distinct canonical forms under block permutation, entrywise inversion
  u -> p - u, and optionally a global unit rescale.
* ``bfs_orbit_count`` explores the full image space under the elementary
  moves that geometric automorphisms induce (torsion shifts into the
  loxodromic images, block permutations/inversions, Nielsen moves on the
  free block when no torsion is present) and counts connected components.

Neither counter consults the binomial formula in :mod:`.strata`; the two
routes are compared in tests.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .strata import is_prime

__all__ = [
    "ActionSpec",
    "ImageTuple",
    "HomImage",
    "BudgetExceeded",
    "PERM_INV",
    "PERM_INV_SCALE",
    "canonical_form",
    "orbit_count_tuples",
    "bfs_orbit_count",
    "kernel_signature",
]


class BudgetExceeded(RuntimeError):
    """Raised when an enumeration would exceed its configured budget."""

    def __init__(self, required, budget, what="tuples"):
        self.required = required
        self.budget = budget
        super().__init__(
            f"enumeration requires {required} {what}, exceeding budget {budget}"
        )


def _check_prime(p, minimum=2):
    if p < minimum or not is_prime(p):
        raise ValueError(f"p must be a prime >= {minimum}, got {p}")


@dataclass(frozen=True)
class ActionSpec:
    """Which elementary identifications the canonical form quotients by."""

    permute: bool = True
    invert: bool = True
    global_scale: bool = False

    def __post_init__(self):
        if not (self.permute or self.invert or self.global_scale):
            raise ValueError("at least one action flag must be set")


PERM_INV = ActionSpec(permute=True, invert=True, global_scale=False)
PERM_INV_SCALE = ActionSpec(permute=True, invert=True, global_scale=True)


@dataclass(frozen=True)
class ImageTuple:
    """Unit vectors u (length r) and v (length s) of images in Z_p^*."""

    p: int
    u: Tuple[int, ...]
    v: Tuple[int, ...]

    def __post_init__(self):
        _check_prime(self.p)
        for block in (self.u, self.v):
            for c in block:
                if not 1 <= c <= self.p - 1:
                    raise ValueError(f"entry {c} not a unit mod {self.p}")


@dataclass(frozen=True)
class HomImage:
    """Full image vector of a homomorphism onto Z_p with torsion-free kernel.

    ``a`` and ``tau`` take any residues, ``e`` and ``f`` must be units
    (the torsion-free condition), and at least one coordinate has to be
    nonzero (surjectivity; when r = s = 0 this forces some a_j != 0).
    """

    p: int
    a: Tuple[int, ...] = ()
    e: Tuple[int, ...] = ()
    tau: Tuple[int, ...] = ()
    f: Tuple[int, ...] = ()

    def __post_init__(self):
        _check_prime(self.p)
        if len(self.tau) != len(self.f):
            raise ValueError("tau and f must have equal length (one per pair)")
        for c in self.a + self.tau:
            if not 0 <= c <= self.p - 1:
                raise ValueError(f"residue {c} out of range mod {self.p}")
        for c in self.e + self.f:
            if not 1 <= c <= self.p - 1:
                raise ValueError(
                    f"elliptic image {c} must be a unit mod {self.p} "
                    "(torsion-free kernel)"
                )
        if not any(self.flat()):
            raise ValueError("homomorphism is not surjective: all images are zero")

    def flat(self):
        return self.a + self.e + self.tau + self.f

    def scaled(self, lam):
        """Post-compose with multiplication by the unit ``lam``."""
        p = self.p
        return HomImage(
            p,
            tuple(lam * c % p for c in self.a),
            tuple(lam * c % p for c in self.e),
            tuple(lam * c % p for c in self.tau),
            tuple(lam * c % p for c in self.f),
        )


def _reduce_entry(c, p, invert):
    return min(c, p - c) if invert else c


def _block_canon(block, p, lam, action):
    mapped = [_reduce_entry(lam * c % p, p, action.invert) for c in block]
    if action.permute:
        mapped.sort()
    return tuple(mapped)


def canonical_form(x, action=PERM_INV):
    """Canonical representative of the orbit of ``x`` under ``action``.

    With permute+invert each entry is replaced by min(c, p-c) and each
    block sorted; with global_scale the lexicographically least result
    over all unit multiples (applied to both blocks simultaneously) is
    taken.  Idempotent and constant on orbits.
    """
    p = x.p
    lams = range(1, p) if action.global_scale else (1,)
    best = None
    for lam in lams:
        cand = (_block_canon(x.u, p, lam, action), _block_canon(x.v, p, lam, action))
        if best is None or cand < best:
            best = cand
    return ImageTuple(p, best[0], best[1])


def _product_array(values, k):
    """Cartesian product values^k as a (len(values)^k, k) uint8 array."""
    n = len(values)
    total = n**k
    arr = np.empty((total, k), dtype=np.uint8)
    vals = np.asarray(values, dtype=np.uint8)
    for i in range(k):
        inner = n ** (k - 1 - i)
        arr[:, i] = np.tile(np.repeat(vals, inner), n ** i)
    return arr


def _encode_rows(arr, p):
    """Big-endian base-p code per row; order-preserving and injective."""
    k = arr.shape[1]
    if p**k >= 2**63:
        raise BudgetExceeded(p**k, 2**63, what="distinct codes")
    powers = (p ** np.arange(k - 1, -1, -1)).astype(np.uint64)
    return arr.astype(np.uint64) @ powers


def orbit_count_tuples(p, r, s, action=PERM_INV, budget=10**7):
    """Count distinct canonical forms over all of (Z_p^*)^r x (Z_p^*)^s.

    Plain exhaustive enumeration (vectorised), no formula involved.
    Raises BudgetExceeded when (p-1)^(r+s) exceeds ``budget``.
    """
    _check_prime(p, minimum=3)
    if p >= 256:
        raise ValueError("residues must fit in a byte")
    if r < 0 or s < 0:
        raise ValueError("r and s must be >= 0")
    total = (p - 1) ** (r + s)
    if total > budget:
        raise BudgetExceeded(total, budget)
    k = r + s
    if k == 0:
        return 1
    arr = _product_array(range(1, p), k)
    lams = range(1, p) if action.global_scale else (1,)
    best = None
    residues = np.arange(p, dtype=np.int64)
    for lam in lams:
        table = (lam * residues) % p
        if action.invert:
            table = np.minimum(table, p - table)
        mapped = table.astype(np.uint8)[arr]
        if action.permute:
            mapped[:, :r] = np.sort(mapped[:, :r], axis=1)
            mapped[:, r:] = np.sort(mapped[:, r:], axis=1)
        codes = _encode_rows(mapped, p)
        best = codes if best is None else np.minimum(best, codes)
    return int(np.unique(best).size)


def _primitive_root(p):
    for g in range(2, p):
        seen, x = set(), 1
        for _ in range(p - 1):
            x = x * g % p
            seen.add(x)
        if len(seen) == p - 1:
            return g
    return 1  # p == 2


def _neighbors(state, p, t, r, s, *, scale_root, proof_moves, invert_tau_with_f):
    """Images reachable by one elementary move.  State layout: a | e | tau | f."""
    a = state[:t]
    e = state[t : t + r]
    tau = state[t + r : t + r + s]
    f = state[t + r + s :]

    def rebuild(a=a, e=e, tau=tau, f=f):
        return a + e + tau + f

    if proof_moves:
        # torsion shifts tau_k -> tau_k + f_k
        for k in range(s):
            tau2 = tau[:k] + ((tau[k] + f[k]) % p,) + tau[k + 1 :]
            yield rebuild(tau=tau2)
        if r > 0 or s > 0:
            # shift a_j by the first available elliptic image
            shift = e[0] if r > 0 else f[0]
            for j in range(t):
                a2 = a[:j] + ((a[j] + shift) % p,) + a[j + 1 :]
                yield rebuild(a=a2)
        else:
            # Nielsen moves within the free block
            for j in range(t):
                for i in range(t):
                    if i != j:
                        a2 = a[:j] + ((a[j] + a[i]) % p,) + a[j + 1 :]
                        yield rebuild(a=a2)
            for j in range(t):
                a2 = a[:j] + ((-a[j]) % p,) + a[j + 1 :]
                yield rebuild(a=a2)
            for j in range(t - 1):
                a2 = list(a)
                a2[j], a2[j + 1] = a2[j + 1], a2[j]
                yield rebuild(a=tuple(a2))
    # e-block permutations and entrywise inversion
    for j in range(r - 1):
        e2 = list(e)
        e2[j], e2[j + 1] = e2[j + 1], e2[j]
        yield rebuild(e=tuple(e2))
    for j in range(r):
        e2 = e[:j] + (p - e[j],) + e[j + 1 :]
        yield rebuild(e=e2)
    # pair permutations and pair inversion
    for k in range(s - 1):
        tau2, f2 = list(tau), list(f)
        tau2[k], tau2[k + 1] = tau2[k + 1], tau2[k]
        f2[k], f2[k + 1] = f2[k + 1], f2[k]
        yield rebuild(tau=tuple(tau2), f=tuple(f2))
    for k in range(s):
        f2 = f[:k] + (p - f[k],) + f[k + 1 :]
        if invert_tau_with_f:
            tau2 = tau[:k] + ((-tau[k]) % p,) + tau[k + 1 :]
        else:
            tau2 = tau
        yield rebuild(tau=tau2, f=f2)
    if scale_root is not None:
        yield tuple(scale_root * c % p for c in state)


def bfs_orbit_count(
    p,
    t,
    r,
    s,
    action=PERM_INV,
    *,
    proof_moves=True,
    invert_tau_with_f=True,
    budget=10**7,
):
    """Count orbits of valid image vectors under the elementary move set.

    The move set is exactly: (a) tau_k -> tau_k + f_k; (b) a_j shifted by
    e_1 (or f_1 when r = 0 < s); (c) Nielsen moves on the a-block when
    r = s = 0; (d) permutation/inversion of the e-block; (e) permutation
    of (tau, f) pairs and pair inversion (simultaneous negation of tau_k
    with f_k unless ``invert_tau_with_f`` is cleared); (f) a global unit
    rescale iff ``action.global_scale``.  ``proof_moves`` switches the
    normalisation moves (a)-(c) on and off.

    Exhaustive BFS with a byte-encoded visited set; the valid states are
    those with unit e/f entries and at least one nonzero coordinate.
    """
    _check_prime(p)
    total = p**t * (p - 1) ** r * p**s * (p - 1) ** s
    if total > budget:
        raise BudgetExceeded(total, budget, what="image vectors")
    if p - 1 >= 256:
        raise ValueError("residues must fit in a byte")
    scale_root = _primitive_root(p) if action.global_scale else None

    residues = tuple(range(p))
    units = tuple(range(1, p))
    states = []
    for a in itertools.product(residues, repeat=t):
        if r == 0 and s == 0 and not any(a):
            continue
        for e in itertools.product(units, repeat=r):
            for tau in itertools.product(residues, repeat=s):
                for f in itertools.product(units, repeat=s):
                    states.append(a + e + tau + f)

    visited = set()
    count = 0
    for start in states:
        key = bytes(start)
        if key in visited:
            continue
        count += 1
        visited.add(key)
        frontier = [start]
        while frontier:
            nxt = []
            for state in frontier:
                for nb in _neighbors(
                    state,
                    p,
                    t,
                    r,
                    s,
                    scale_root=scale_root,
                    proof_moves=proof_moves,
                    invert_tau_with_f=invert_tau_with_f,
                ):
                    k = bytes(nb)
                    if k not in visited:
                        visited.add(k)
                        nxt.append(nb)
            frontier = nxt
    return count


def kernel_signature(h):
    """Scale-invariant of the kernel: the image vector normalised so that
    its first nonzero coordinate is 1.

    Two image vectors have the same kernel iff they agree after this
    rescale, since a homomorphism onto Z_p is determined by its kernel up
    to post-composition with a unit.
    """
    for c in h.flat():
        if c:
            return h.scaled(pow(c, -1, h.p))
    raise ValueError("zero image vector has no signature")
