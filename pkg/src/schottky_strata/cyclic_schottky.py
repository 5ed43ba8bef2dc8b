"""Structural model of a cyclic-Schottky group and its index-p kernels.

A group of type (g, p; t, r, s) is the free product of t infinite cyclic
groups <A_j>, r cyclic groups <E_j> of order p, and s rank-two abelian
groups <T_k, F_k | F_k^p, [T_k, F_k]>.  Words are kept in syllable normal
form: freely reduced, elliptic exponents in 1..p-1, and within a commuting
pair the T-syllable written before the F-syllable.

Kernels of homomorphisms onto Z_p are handled three ways: a membership
test (image sum), a bounded enumeration of short kernel words, and a
Reidemeister-Schreier rewrite over the transversal xi^0..xi^{p-1} followed
by Tietze elimination down to a relator-free generating set of size g.

Text syntax for words: whitespace-separated syllables ``a1``, ``e2^3``,
``t1^-1`` (kind letter + index, optional ^exponent).
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Dict, List, Tuple

from .homorbits import BudgetExceeded, HomImage
from .strata import AdmissibleTuple

__all__ = [
    "GroupSpec",
    "FPWord",
    "KHom",
    "SimplificationStalled",
    "build_spec",
    "normal_form",
    "word_inverse",
    "word_concat",
    "parse_fpword",
    "fpword_str",
    "kernel_membership",
    "kernel_sample",
    "kernel_presentation",
    "normalized_homs",
]

# roster symbols are (kind, index) with kind in "aetf", index 1-based
Symbol = Tuple[str, int]

_KIND_ORDER = {"a": 0, "e": 1, "t": 2, "f": 3}


class SimplificationStalled(RuntimeError):
    """Tietze elimination could not reach a relator-free presentation."""


@dataclass(frozen=True)
class GroupSpec:
    """Generator roster and relators for one admissible tuple."""

    tuple: AdmissibleTuple

    @property
    def p(self):
        return self.tuple.p

    def symbols(self):
        """Roster in canonical order: A_j, E_j, then T_k, F_k per pair."""
        t, r, s = self.tuple.t, self.tuple.r, self.tuple.s
        out = [("a", j) for j in range(1, t + 1)]
        out += [("e", j) for j in range(1, r + 1)]
        for k in range(1, s + 1):
            out.append(("t", k))
            out.append(("f", k))
        return out

    def is_elliptic(self, sym):
        return sym[0] in ("e", "f")

    def relators(self):
        """E_j^p, F_k^p and [T_k, F_k] as raw letter sequences."""
        p = self.p
        rel = []
        for j in range(1, self.tuple.r + 1):
            rel.append(((("e", j), 1),) * p)
        for k in range(1, self.tuple.s + 1):
            rel.append(((("f", k), 1),) * p)
            rel.append(
                ((("t", k), 1), (("f", k), 1), (("t", k), -1), (("f", k), -1))
            )
        return rel


def build_spec(tup):
    """GroupSpec for an admissible tuple (the tuple constructor validates)."""
    if not isinstance(tup, AdmissibleTuple):
        raise ValueError("build_spec expects an AdmissibleTuple")
    return GroupSpec(tup)


@dataclass(frozen=True)
class FPWord:
    """Word in syllable normal form: tuple of (symbol, exponent) pairs."""

    syllables: Tuple[Tuple[Symbol, int], ...]

    def __len__(self):
        return len(self.syllables)

    @property
    def is_identity(self):
        return not self.syllables

    def __str__(self):
        return fpword_str(self)


def _push_syllable(stack, sym, exp, spec):
    """Append one syllable, restoring normal form locally."""
    p = spec.p
    elliptic = spec.is_elliptic(sym)
    if elliptic:
        exp %= p
    if exp == 0:
        return
    while True:
        if not stack:
            stack.append((sym, exp))
            return
        top_sym, top_exp = stack[-1]
        if top_sym == sym:
            stack.pop()
            exp = top_exp + exp
            if elliptic:
                exp %= p
            if exp == 0:
                return
            continue
        # commuting pair: rewrite F_k T_k -> T_k F_k
        if sym[0] == "t" and top_sym == ("f", sym[1]):
            stack.pop()
            _push_syllable(stack, sym, exp, spec)
            _push_syllable(stack, top_sym, top_exp, spec)
            return
        stack.append((sym, exp))
        return


def normal_form(spec, syllables):
    """Unique normal form of a raw (symbol, exponent) sequence.

    The result is empty iff the word represents the identity.
    """
    roster = set(spec.symbols())
    stack = []
    for sym, exp in syllables:
        if sym not in roster:
            raise ValueError(f"symbol {sym} not in roster of {spec.tuple}")
        _push_syllable(stack, sym, exp, spec)
    return FPWord(tuple(stack))


def word_inverse(spec, w):
    return normal_form(spec, [(sym, -exp) for sym, exp in reversed(w.syllables)])


def word_concat(spec, *words):
    syl = []
    for w in words:
        syl.extend(w.syllables)
    return normal_form(spec, syl)


_TOKEN = re.compile(r"([aetf])([1-9][0-9]*)(?:\^(-?[1-9][0-9]*))?$")


def parse_fpword(spec, text):
    """Parse the ``e1^3 a2 e1^-3`` syntax."""
    syl = []
    for token in text.split():
        m = _TOKEN.match(token)
        if not m:
            raise ValueError(f"bad syllable token {token!r}")
        kind, idx, exp = m.group(1), int(m.group(2)), m.group(3)
        syl.append(((kind, idx), 1 if exp is None else int(exp)))
    return normal_form(spec, syl)


def fpword_str(w):
    parts = []
    for (kind, idx), exp in w.syllables:
        parts.append(f"{kind}{idx}" if exp == 1 else f"{kind}{idx}^{exp}")
    return " ".join(parts)


@dataclass(frozen=True)
class KHom:
    """A HomImage bound to a GroupSpec (one image per roster symbol)."""

    spec: GroupSpec
    hom: HomImage

    def __post_init__(self):
        tup = self.spec.tuple
        h = self.hom
        if h.p != tup.p:
            raise ValueError("modulus mismatch between spec and images")
        if (len(h.a), len(h.e), len(h.tau), len(h.f)) != (tup.t, tup.r, tup.s, tup.s):
            raise ValueError("image vector lengths do not match the roster")

    def image(self, sym):
        kind, idx = sym
        block = {"a": self.hom.a, "e": self.hom.e, "t": self.hom.tau,
                 "f": self.hom.f}[kind]
        return block[idx - 1]


def kernel_membership(phi, w):
    """True iff the signed image sum of the word vanishes mod p."""
    p = phi.spec.p
    total = 0
    for sym, exp in w.syllables:
        total += exp * phi.image(sym)
    return total % p == 0


def _syllable_alphabet(spec):
    """Finite syllable choices used by kernel_sample.

    Loxodromic syllables carry exponent +-1 only; elliptic syllables sweep
    the full exponent range 1..p-1, so the enumeration is complete up to
    that loxodromic exponent bound.
    """
    p = spec.p
    out = []
    for sym in spec.symbols():
        if spec.is_elliptic(sym):
            out.extend((sym, c) for c in range(1, p))
        else:
            out.extend((sym, c) for c in (-1, 1))
    return out


def _may_follow(prev_sym, sym):
    if prev_sym is None:
        return True
    if prev_sym == sym:
        return False  # same symbol would merge into one syllable
    # normal form writes T_k before F_k, so F_k cannot precede T_k
    if sym[0] == "t" and prev_sym == ("f", sym[1]):
        return False
    return True


def kernel_sample(phi, max_syllables, budget=10**6):
    """All normal-form kernel words with at most ``max_syllables`` syllables
    (loxodromic exponents restricted to +-1), identity excluded.

    Deterministic order: by syllable count, then lexicographically in the
    roster/exponent order.  Raises BudgetExceeded when the enumeration
    grows past ``budget`` words.
    """
    if max_syllables < 0:
        raise ValueError("max_syllables must be >= 0")
    spec = phi.spec
    p = spec.p
    alphabet = _syllable_alphabet(spec)
    out = []
    seen = 0
    level = [((), None, 0)]  # (syllables, last symbol, image sum)
    for _ in range(max_syllables):
        nxt = []
        for syls, prev, total in level:
            for sym, exp in alphabet:
                if not _may_follow(prev, sym):
                    continue
                seen += 1
                if seen > budget:
                    raise BudgetExceeded(seen, budget, what="sampled words")
                word = syls + ((sym, exp),)
                img = (total + exp * phi.image(sym)) % p
                nxt.append((word, sym, img))
                if img == 0:
                    out.append(FPWord(word))
        level = nxt
    return out


def normalized_homs(spec):
    """Exhaustive normalized image vectors on a spec.

    The normal form fixes a = 0 and tau = 0 (reachable by the torsion-shift
    moves) and sweeps all unit vectors e, f; when r = s = 0 the single
    representative a = (1, 0, ..., 0) remains after rescaling.
    """
    tup = spec.tuple
    p = spec.p
    units = tuple(range(1, p))
    if tup.r == 0 and tup.s == 0:
        yield KHom(spec, HomImage(p, a=(1,) + (0,) * (tup.t - 1)))
        return
    for e in itertools.product(units, repeat=tup.r):
        for f in itertools.product(units, repeat=tup.s):
            yield KHom(
                spec,
                HomImage(p, a=(0,) * tup.t, e=e, tau=(0,) * tup.s, f=f),
            )


# ---------------------------------------------------------------------------
# Reidemeister-Schreier over the transversal xi^0 .. xi^{p-1}

def _transversal_pivot(phi):
    """Pick the symbol whose powers form the transversal.

    Preference: E_1, else F_1, else the first A_j with nonzero image.  The
    images are rescaled so the pivot maps to 1; rescaling does not change
    the kernel.
    """
    spec = phi.spec
    tup = spec.tuple
    if tup.r > 0:
        return ("e", 1)
    if tup.s > 0:
        return ("f", 1)
    for j in range(1, tup.t + 1):
        if phi.image(("a", j)) != 0:
            return ("a", j)
    raise ValueError("homomorphism is not surjective: no usable pivot")


def _free_reduce_ids(word):
    out = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return out


def _cyclic_reduce_ids(word):
    w = _free_reduce_ids(word)
    while len(w) >= 2 and w[0] == -w[-1]:
        w = w[1:-1]
    return w


def _substitute(word, gen, repl):
    """Replace occurrences of +-gen by repl / reversed-negated repl."""
    inv = [-x for x in reversed(repl)]
    out = []
    for x in word:
        if x == gen:
            out.extend(repl)
        elif x == -gen:
            out.extend(inv)
        else:
            out.append(x)
    return _cyclic_reduce_ids(out)


def kernel_presentation(phi):
    """Free generating set of the kernel, of size exactly g.

    Rewrites the relators over the Schreier generators for the transversal
    xi^0..xi^{p-1}, then eliminates generators occurring exactly once in
    some relator (shortest relators first, ties by generator index) until
    no relators remain.  Every returned word has zero image.
    """
    spec = phi.spec
    tup = spec.tuple
    p = spec.p
    xi = _transversal_pivot(phi)
    lam = pow(phi.image(xi), -1, p)
    img = {sym: lam * phi.image(sym) % p for sym in spec.symbols()}

    # Schreier generators x_{i, sym} = xi^i sym xi^-(i + img[sym]); the
    # pivot column contributes only x_{p-1, xi} (= xi^p), the rest are tree
    # edges.  Ids are allocated symbol-major, cosets ascending.
    gen_id: Dict[Tuple[int, Symbol], int] = {}
    gen_key: List[Tuple[int, Symbol]] = [None]  # 1-based
    for sym in spec.symbols():
        for i in range(p):
            if sym == xi and i != p - 1:
                continue
            gen_id[(i, sym)] = len(gen_key)
            gen_key.append((i, sym))

    def rewrite(relator, start):
        cur = start
        out = []
        for sym, sgn in relator:
            v = img[sym]
            if sgn > 0:
                key = (cur, sym)
                cur = (cur + v) % p
                if key in gen_id:
                    out.append(gen_id[key])
            else:
                cur = (cur - v) % p
                key = (cur, sym)
                if key in gen_id:
                    out.append(-gen_id[key])
        if cur != start:
            raise AssertionError("relator rewrite did not close up")
        return _cyclic_reduce_ids(out)

    relators = []
    seen = set()
    for rel in spec.relators():
        for i in range(p):
            w = rewrite(rel, i)
            if w and tuple(w) not in seen:
                seen.add(tuple(w))
                relators.append(w)

    eliminated = set()
    while relators:
        relators.sort(key=lambda w: (len(w), w))
        chosen = None
        for rel in relators:
            once = [x for x in {abs(y) for y in rel}
                    if sum(1 for y in rel if abs(y) == x) == 1]
            if once:
                chosen = (rel, min(once))
                break
        if chosen is None:
            raise SimplificationStalled(
                f"no once-occurring generator among {len(relators)} relators"
            )
        rel, gen = chosen
        pos = next(i for i, y in enumerate(rel) if abs(y) == gen)
        rotated = rel[pos:] + rel[:pos]
        if rotated[0] < 0:
            rotated = [-x for x in reversed(rotated)]
            rotated = rotated[-1:] + rotated[:-1]
        # rotated = [gen, w1, ..., wm]  =>  gen = (w1..wm)^-1
        repl = [-x for x in reversed(rotated[1:])]
        eliminated.add(gen)
        relators.remove(rel)
        relators = [w for w in (_substitute(v, gen, repl) for v in relators) if w]

    survivors = [i for i in range(1, len(gen_key)) if i not in eliminated]
    words = []
    for gid in survivors:
        i, sym = gen_key[gid]
        j = (i + img[sym]) % p
        raw = [(xi, i), (sym, 1), (xi, -j)]
        words.append(normal_form(spec, raw))

    expected = tup.g
    if len(words) != expected:
        raise SimplificationStalled(
            f"simplified to {len(words)} generators, expected {expected}"
        )
    for w in words:
        if not kernel_membership(phi, w):
            raise AssertionError(f"presentation word {w} escapes the kernel")
    return words
