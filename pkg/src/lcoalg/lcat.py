"""Finite ordinals [n] = {1..n} with partial maps, and their generators.

Every partial map decomposes into sums and composites of five arrows:
the face d_1 : [0] -> [1], its retraction z_1 : [1] -> [0], the identity of
[1], the total degeneracy s_1 : [2] -> [1], and the twist t : [2] -> [2].
``decompose`` produces one such word (restriction, then permutation, then a
monotone epi-mono factorization); only the recomposition property is
contractual.
"""

from __future__ import annotations

from dataclasses import dataclass


class PartialMap:
    """Partial map [n] -> [m]; mapping is a dict defined exactly on its domain."""

    __slots__ = ("n", "m", "mapping")

    def __init__(self, n: int, m: int, mapping: dict):
        self.n = int(n)
        self.m = int(m)
        mp = {}
        for k, v in mapping.items():
            k, v = int(k), int(v)
            if not (1 <= k <= self.n) or not (1 <= v <= self.m):
                raise ValueError(f"entry {k}->{v} outside [{n}] -> [{m}]")
            mp[k] = v
        self.mapping = mp

    @property
    def domain(self):
        return frozenset(self.mapping)

    def __call__(self, i: int):
        return self.mapping.get(i)

    def __eq__(self, other):
        return (isinstance(other, PartialMap) and self.n == other.n
                and self.m == other.m and self.mapping == other.mapping)

    def __hash__(self):
        return hash((self.n, self.m, tuple(sorted(self.mapping.items()))))

    def __repr__(self):
        inside = ", ".join(f"{k}->{v}" for k, v in sorted(self.mapping.items()))
        return f"[{self.n}->{self.m}: {inside}]"

    def pretty(self) -> str:
        inside = ", ".join(f"{k}↦{v}" for k, v in sorted(self.mapping.items()))
        return f"[{self.n}→{self.m}: {inside}]"

    def is_total(self) -> bool:
        return len(self.mapping) == self.n

    def is_identity(self) -> bool:
        return self.n == self.m and self.mapping == {i: i for i in range(1, self.n + 1)}

    @staticmethod
    def identity(n: int) -> "PartialMap":
        return PartialMap(n, n, {i: i for i in range(1, n + 1)})

    @staticmethod
    def empty(n: int, m: int) -> "PartialMap":
        return PartialMap(n, m, {})

    @staticmethod
    def total(n: int, m: int, images) -> "PartialMap":
        return PartialMap(n, m, {i + 1: v for i, v in enumerate(images)})


def compose(g: PartialMap, f: PartialMap) -> PartialMap:
    """g o f, defined where f is defined and f's value lies in g's domain."""
    if f.m != g.n:
        raise ValueError(f"size mismatch: [{f.n}]->[{f.m}] then [{g.n}]->[{g.m}]")
    mapping = {}
    for k, v in f.mapping.items():
        w = g.mapping.get(v)
        if w is not None:
            mapping[k] = w
    return PartialMap(f.n, g.m, mapping)


def pm_sum(f: PartialMap, g: PartialMap) -> PartialMap:
    """Block sum [n+n'] -> [m+m'], strictly associative with [0] as unit."""
    mapping = dict(f.mapping)
    for k, v in g.mapping.items():
        mapping[k + f.n] = v + f.m
    return PartialMap(f.n + g.n, f.m + g.m, mapping)


# -- special arrows ---------------------------------------------------------


def face(n: int, i: int) -> PartialMap:
    """d_i : [n] -> [n+1], skipping the value i (1 <= i <= n+1)."""
    if not 1 <= i <= n + 1:
        raise ValueError(f"face index {i} out of range for [{n}]")
    return PartialMap(n, n + 1, {x: (x if x < i else x + 1) for x in range(1, n + 1)})


def degeneracy(n: int, i: int) -> PartialMap:
    """s_i : [n] -> [n-1], total, collapsing i and i+1 (1 <= i <= n-1); s_1 on [1]."""
    if n == 1 and i == 1:
        return PartialMap(1, 0, {})
    if not 1 <= i <= n - 1:
        raise ValueError(f"degeneracy index {i} out of range for [{n}]")
    return PartialMap(n, n - 1, {x: (x if x <= i else x - 1) for x in range(1, n + 1)})


def retraction(f: PartialMap) -> PartialMap:
    """Minimal retraction of an injective total map: domain = image, inverse."""
    if not f.is_total() or len(set(f.mapping.values())) != f.n:
        raise ValueError("retraction needs an injective total map")
    return PartialMap(f.m, f.n, {v: k for k, v in f.mapping.items()})


def zeta(n: int, i: int) -> PartialMap:
    """The minimal retraction of d_i : [n] -> [n+1]."""
    return retraction(face(n, i))


def twist(n: int = 2, i: int = 1) -> PartialMap:
    """Adjacent block twist on [n] swapping i and i+1."""
    mapping = {x: x for x in range(1, n + 1)}
    mapping[i], mapping[i + 1] = i + 1, i
    return PartialMap(n, n, mapping)


def total_collapse(n: int) -> PartialMap:
    """The only total map [n] -> [1] (the arrow inducing the diagonal)."""
    return PartialMap(n, 1, {i: 1 for i in range(1, n + 1)})


GENERATORS = ("d", "s", "zeta", "twist", "id")


def generator(kind: str, n: int = 1, i: int = 1) -> PartialMap:
    if kind == "d":
        return face(n, i)
    if kind == "s":
        return degeneracy(n, i)
    if kind == "zeta":
        return zeta(n, i)
    if kind == "twist":
        return twist(n, i)
    if kind == "id":
        return PartialMap.identity(n)
    raise ValueError(f"unknown generator kind {kind!r}")


@dataclass
class Word:
    """Composition (left to right = outermost first) of generator steps."""

    steps: list

    def evaluate(self) -> PartialMap:
        out = None
        for kind, n, i in reversed(self.steps):
            arrow = generator(kind, n, i)
            out = arrow if out is None else compose(arrow, out)
        if out is None:
            raise ValueError("empty word needs an ambient identity")
        return out


def decompose(f: PartialMap):
    """Word of generators composing to f (empty list for identities).

    Shape: (faces) o (degeneracies) o (twists) o (domain restrictions);
    the returned list is outermost-first, evaluate_word recomposes it.
    """
    pipeline = []   # innermost (first applied) first
    n = f.n
    # 1. restrict away the non-domain elements, largest slot first
    size = n
    for j in sorted(range(1, n + 1), reverse=True):
        if j not in f.domain:
            pipeline.append(("zeta", size - 1, j))
            size -= 1
    # the restricted map is total on [size]
    imgs = [f.mapping[k] for k in sorted(f.domain)]
    # 2. bubble-sort into weakly increasing order with adjacent twists
    for _ in range(len(imgs)):
        for b in range(len(imgs) - 1):
            if imgs[b] > imgs[b + 1]:
                imgs[b], imgs[b + 1] = imgs[b + 1], imgs[b]
                pipeline.append(("twist", size, b + 1))
    # 3. monotone epi: collapse equal neighbours, rightmost first
    out = list(imgs)
    width = size
    j = width - 1
    while j >= 1:
        if out[j] == out[j - 1]:
            pipeline.append(("s", width, j))
            del out[j]
            width -= 1
        j -= 1
    if out != sorted(set(out)):
        raise AssertionError("surjection step failed to sort")
    # 4. mono: insert missing values with faces, smallest value first
    have = set(out)
    cur = width
    for v in range(1, f.m + 1):
        if v not in have:
            pipeline.append(("d", cur, v))
            cur += 1
    return list(reversed(pipeline))


def evaluate_word(steps, n: int) -> PartialMap:
    """Evaluate a decomposition word starting from id_[n]."""
    out = PartialMap.identity(n)
    for kind, nn, i in reversed(steps):
        out = compose(generator(kind, nn, i), out)
    return out
