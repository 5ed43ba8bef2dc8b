"""Free-group words, abelian homomorphisms, Stallings foldings and
Schreier generators.

Words are stored reduced at all times as tuples of nonzero signed
generator indices (1 .. rank for generators, negatives for inverses).
Text syntax: lowercase letters a..z are generators, uppercase letters
their inverses, read left to right; e.g. ``bAB`` is B A^-1 B^-1.

Subgroups of free groups are represented by their folded core graphs
(deterministic automata over the signed alphabet), which decide
membership, index and rank.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass
from typing import Dict, List, Tuple

__all__ = [
    "INFINITE",
    "FreeWord",
    "AbelianHom",
    "StallingsGraph",
    "reduce_word",
    "parse_word",
    "word_str",
    "map_letters",
    "hom_image",
    "fold",
    "membership",
    "index_and_rank",
    "schreier_kernel",
    "verify_example1",
    "example1_data",
]

INFINITE = math.inf


def _reduce_letters(letters):
    out = []
    for x in letters:
        if x == 0:
            raise ValueError("letter 0 is not a generator")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


@dataclass(frozen=True)
class FreeWord:
    """A freely reduced word in the free group of the given rank."""

    rank: int
    letters: Tuple[int, ...]

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("rank must be >= 1")
        for x in self.letters:
            if not 1 <= abs(x) <= self.rank:
                raise ValueError(f"letter {x} outside rank {self.rank}")
        reduced = _reduce_letters(self.letters)
        if reduced != self.letters:
            object.__setattr__(self, "letters", reduced)

    def __mul__(self, other):
        if self.rank != other.rank:
            raise ValueError("rank mismatch")
        return FreeWord(self.rank, self.letters + other.letters)

    def __invert__(self):
        return FreeWord(self.rank, tuple(-x for x in reversed(self.letters)))

    def __pow__(self, n):
        if n < 0:
            return (~self) ** (-n)
        return FreeWord(self.rank, self.letters * n)

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        return word_str(self)


def reduce_word(letters, rank):
    """Freely reduce a raw signed-letter sequence."""
    return FreeWord(rank, tuple(letters))


def parse_word(text, rank):
    """Parse the a..z / A..Z syntax into a FreeWord."""
    letters = []
    for ch in text:
        if "a" <= ch <= "z":
            letters.append(ord(ch) - ord("a") + 1)
        elif "A" <= ch <= "Z":
            letters.append(-(ord(ch) - ord("A") + 1))
        else:
            raise ValueError(f"invalid character {ch!r} in word {text!r}")
    return FreeWord(rank, tuple(letters))


def word_str(w):
    """Inverse of parse_word; round-trips exactly on reduced words."""
    out = []
    for x in w.letters:
        if x > 0:
            out.append(chr(ord("a") + x - 1))
        else:
            out.append(chr(ord("A") - x - 1))
    return "".join(out)


def map_letters(w, images):
    """Apply a letter substitution: generator i maps to images[i-1]."""
    if len(images) != w.rank:
        raise ValueError("need one image per generator")
    rank = images[0].rank
    out = []
    for x in w.letters:
        img = images[abs(x) - 1]
        out.extend(img.letters if x > 0 else (~img).letters)
    return FreeWord(rank, tuple(out))


@dataclass(frozen=True)
class AbelianHom:
    """Homomorphism from a free group to Z_{m1} (x Z_{m2} ...) by exponent sums."""

    rank: int
    moduli: Tuple[int, ...]
    images: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        from .strata import is_prime

        if len(self.images) != self.rank:
            raise ValueError("need one image vector per generator")
        for m in self.moduli:
            if not is_prime(m):
                raise ValueError(f"modulus {m} is not prime")
        for img in self.images:
            if len(img) != len(self.moduli):
                raise ValueError("image dimension does not match moduli")

    def codomain(self):
        return tuple(itertools.product(*(range(m) for m in self.moduli)))

    def apply_letter(self, coset, x):
        img = self.images[abs(x) - 1]
        sign = 1 if x > 0 else -1
        return tuple(
            (c + sign * v) % m for c, v, m in zip(coset, img, self.moduli)
        )


def hom_image(phi, w):
    """Image of a word: signed sum of generator images mod the moduli."""
    if phi.rank != w.rank:
        raise ValueError("rank mismatch")
    acc = (0,) * len(phi.moduli)
    for x in w.letters:
        acc = phi.apply_letter(acc, x)
    return acc


class StallingsGraph:
    """Folded core graph of a finitely generated subgroup of a free group.

    Vertices are 0..n-1 with basepoint 0; ``adj[v]`` maps signed letters
    to target vertices (an x-edge from v to w stores both (v, x) -> w and
    (w, -x) -> v).  Instances are canonically labelled by breadth-first
    discovery from the basepoint, so equality is graph isomorphism
    respecting the basepoint and labels.
    """

    def __init__(self, rank, adj):
        self.rank = rank
        self.adj = adj  # list of dicts, vertex 0 is the basepoint

    @property
    def n_vertices(self):
        return len(self.adj)

    def key(self):
        return (
            self.rank,
            tuple(tuple(sorted(d.items())) for d in self.adj),
        )

    def __eq__(self, other):
        return isinstance(other, StallingsGraph) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"StallingsGraph(rank={self.rank}, vertices={self.n_vertices})"


def _letter_order(rank):
    # generator order a < b < ..., positive before negative
    out = []
    for g in range(1, rank + 1):
        out.append(g)
        out.append(-g)
    return out


def fold(generators):
    """Folded core graph of the subgroup generated by the given words.

    Builds a bouquet of loops at the basepoint, folds (merges targets of
    equal-labelled edges) to a deterministic automaton, prunes any
    non-basepoint valence-one vertices, and relabels breadth-first.
    Deterministic; input order does not change the result because of the
    final canonical relabelling.
    """
    if not generators:
        raise ValueError("need at least one generator word")
    rank = generators[0].rank
    if any(w.rank != rank for w in generators):
        raise ValueError("all generators must share one ambient rank")

    parent = [0]
    adj: List[Dict[int, int]] = [dict()]

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    def new_vertex():
        parent.append(len(parent))
        adj.append(dict())
        return len(parent) - 1

    pending = deque()

    def add_edge(u, x, v):
        u, v = find(u), find(v)
        old = adj[u].get(x)
        if old is not None:
            if find(old) != v:
                pending.append((find(old), v))
            return
        adj[u][x] = v
        old = adj[v].get(-x)
        if old is not None:
            if find(old) != u:
                pending.append((find(old), u))
            return
        adj[v][-x] = u

    for w in generators:
        if not w.letters:
            continue
        cur = 0
        for x in w.letters[:-1]:
            nxt = new_vertex()
            add_edge(cur, x, nxt)
            cur = nxt
        add_edge(cur, w.letters[-1], 0)
        # merging may already be pending; flush before next word
        _flush_folds(parent, adj, pending, find)
    _flush_folds(parent, adj, pending, find)

    # compact to live vertices; the basepoint's class must stay vertex 0
    live = {find(v) for v in range(len(parent))}
    base_root = find(0)
    ordered = [base_root] + sorted(live - {base_root})
    remap = {v: i for i, v in enumerate(ordered)}
    compact = [dict() for _ in ordered]
    for v in ordered:
        for x, w_ in adj[v].items():
            compact[remap[v]][x] = remap[find(w_)]

    _prune_to_core(compact)
    return _canonical_relabel(rank, compact)


def _flush_folds(parent, adj, pending, find):
    while pending:
        u, v = pending.popleft()
        u, v = find(u), find(v)
        if u == v:
            continue
        if len(adj[u]) < len(adj[v]):
            u, v = v, u
        parent[v] = u
        edges = adj[v]
        adj[v] = dict()
        for x, w in edges.items():
            w = find(w)
            old = adj[u].get(x)
            if old is None:
                adj[u][x] = w
                # the reverse entry at w may point at v; fix it
                back = adj[w].get(-x)
                if back is None or find(back) == v:
                    adj[w][-x] = u
                elif find(back) != u:
                    pending.append((find(back), u))
            elif find(old) != w:
                pending.append((find(old), w))


def _prune_to_core(adj):
    # iteratively drop non-basepoint vertices of valence <= 1
    changed = True
    while changed:
        changed = False
        for v in range(1, len(adj)):
            if adj[v] is not None and len(adj[v]) <= 1:
                for x, w in list(adj[v].items()):
                    adj[w].pop(-x, None)
                adj[v] = None
                changed = True
    if any(d is None for d in adj):
        live = [v for v in range(len(adj)) if adj[v] is not None]
        remap = {v: i for i, v in enumerate(live)}
        new = [
            {x: remap[w] for x, w in adj[v].items()} for v in live
        ]
        adj[:] = new


def _canonical_relabel(rank, adj):
    order = _letter_order(rank)
    label = {0: 0}
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for x in order:
            w = adj[v].get(x)
            if w is not None and w not in label:
                label[w] = len(label)
                queue.append(w)
    if len(label) != len(adj):
        raise AssertionError("folded graph is not connected")
    new = [dict() for _ in adj]
    for v, d in enumerate(adj):
        for x, w in d.items():
            new[label[v]][x] = label[w]
    return StallingsGraph(rank, new)


def membership(graph, w):
    """True iff the word traces a closed path at the basepoint."""
    v = 0
    for x in w.letters:
        v = graph.adj[v].get(x)
        if v is None:
            return False
    return v == 0


def index_and_rank(graph):
    """(index, rank) of the subgroup carried by a folded graph.

    Index is the vertex count when every vertex has all 2*rank edge slots
    filled, INFINITE otherwise.  Rank is E - V + 1 with E the number of
    positive-labelled edges.
    """
    complete = all(len(d) == 2 * graph.rank for d in graph.adj)
    edges = sum(1 for d in graph.adj for x in d if x > 0)
    rank = edges - graph.n_vertices + 1
    index = graph.n_vertices if complete else INFINITE
    if index is not INFINITE:
        assert rank == 1 + index * (graph.rank - 1)
    return (index, rank)


def schreier_kernel(phi):
    """Schreier generators of ker(phi) for a surjective AbelianHom.

    Cosets are the codomain elements; representatives form the
    shortlex-least transversal (generator order a < b < ..., positive
    letters before negative).  For each representative u and positive
    generator x the word u x (rep of u.x)^-1 is emitted unless it reduces
    to the identity, giving 1 + n(k-1) words for index n and rank k.
    """
    k = phi.rank
    zero = (0,) * len(phi.moduli)
    reps = {zero: ()}
    order = []  # cosets in shortlex discovery order
    queue = deque([zero])
    while queue:
        c = queue.popleft()
        order.append(c)
        u = reps[c]
        for x in _letter_order(k):
            if u and u[-1] == -x:
                continue  # unreduced extension never shortlex-least
            d = phi.apply_letter(c, x)
            if d not in reps:
                reps[d] = u + (x,)
                queue.append(d)
    n = 1
    for m in phi.moduli:
        n *= m
    if len(reps) != n:
        raise ValueError("homomorphism is not surjective onto its codomain")

    out = []
    for c in order:
        u = reps[c]
        for x in range(1, k + 1):
            d = phi.apply_letter(c, x)
            letters = u + (x,) + tuple(-y for y in reversed(reps[d]))
            w = FreeWord(k, letters)
            if w.letters:
                out.append(w)
    return out


# ---------------------------------------------------------------------------
# Example-1 verification: the rank-26 kernel inside a rank-two group with
# two commuting order-5 quotients.

def example1_data():
    """Words and homomorphisms used by verify_example1."""
    rank = 2
    theta = AbelianHom(rank, (5, 5), ((1, 0), (0, 1)))
    # kernels of these two define the index-5 overgroups of ker(theta)
    to_second = AbelianHom(rank, (5,), ((0,), (1,)))
    to_first = AbelianHom(rank, (5,), ((1,), (0,)))
    c_words = [parse_word(w, rank) for w in
               ("a", "baB", "bbaBB", "bbbaBBB", "bbbbaBBBB", "bbbbb")]
    d_words = [parse_word(w, rank) for w in
               ("b", "abA", "aabAA", "aaabAAA", "aaaabAAAA", "aaaaa")]
    gamma_members = [parse_word(w, rank) for w in
                     ("aaaaa", "abbbbbA", "aabbbbbAA", "aaabbbbbAAA",
                      "aaaabbbbbAAAA")]
    return {
        "theta": theta,
        "k1_hom": to_second,
        "k2_hom": to_first,
        "c_words": c_words,
        "d_words": d_words,
        "gamma_members": gamma_members,
    }


def _check(checks, name, passed, detail=""):
    checks.append({"name": name, "pass": bool(passed), "detail": detail})


def verify_example1():
    """Run the full worked-example suite; returns a report dict.

    Checks: (a) the rank-two kernel of the Z_5 x Z_5 quotient has index 25
    and rank 26; (b) both intermediate subgroups have index 5 / rank 6 and
    are generated exactly by the listed words; (c) the swap a<->b maps
    every Schreier generator of the kernel back into the kernel; (d) the
    swap carries the first word list onto the second; (e) the five listed
    kernel members are members.
    """
    data = example1_data()
    theta = data["theta"]
    rank = theta.rank
    swap = [parse_word("b", rank), parse_word("a", rank)]
    checks = []

    gamma_gens = schreier_kernel(theta)
    gamma_graph = fold(gamma_gens)
    idx, rk = index_and_rank(gamma_graph)
    _check(checks, "gamma_index_rank", (idx, rk) == (25, 26),
           f"index={idx} rank={rk}")

    for label, hom, words in (
        ("k1", data["k1_hom"], data["c_words"]),
        ("k2", data["k2_hom"], data["d_words"]),
    ):
        listed_graph = fold(words)
        idx, rk = index_and_rank(listed_graph)
        _check(checks, f"{label}_index_rank", (idx, rk) == (5, 6),
               f"index={idx} rank={rk}")
        kernel_graph = fold(schreier_kernel(hom))
        _check(checks, f"{label}_generates", listed_graph == kernel_graph,
               "listed words fold to the subgroup graph")
        _check(checks, f"{label}_members",
               all(membership(kernel_graph, w) for w in words),
               "all listed words are members")

    zero = (0, 0)
    psi_gens = [map_letters(w, swap) for w in gamma_gens]
    _check(checks, "psi_preserves_gamma",
           all(hom_image(theta, w) == zero for w in psi_gens),
           "swap image of every Schreier generator lies in the kernel")

    swapped = [map_letters(w, swap) for w in data["c_words"]]
    _check(checks, "psi_c_equals_d",
           all(u == v for u, v in zip(swapped, data["d_words"])),
           "swap carries each C-word to the matching D-word")

    members = data["gamma_members"]
    _check(checks, "gamma_listed_members",
           all(hom_image(theta, w) == zero and membership(gamma_graph, w)
               for w in members),
           "five listed members verified by image and by graph")

    return {"passed": all(c["pass"] for c in checks), "checks": checks}
