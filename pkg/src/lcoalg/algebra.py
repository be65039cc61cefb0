"""Permutations, parity signs, and the group ring k[Sigma_n] over F_p.

Permutations act on {1, ..., n} and are stored as the tuple of images
(images[i-1] = image of i).  The group ring is a dict permutation -> scalar
with no explicit zeros.
"""

from __future__ import annotations

from itertools import permutations as _all_perms

from .linalg import check_prime


class Permutation:
    __slots__ = ("images",)

    def __init__(self, images):
        images = tuple(int(i) for i in images)
        n = len(images)
        if sorted(images) != list(range(1, n + 1)):
            raise ValueError(f"not a bijection of 1..{n}: {images}")
        self.images = images

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        return f"Permutation{self.images}"

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    @staticmethod
    def identity(n: int) -> "Permutation":
        return Permutation(range(1, n + 1))

    @staticmethod
    def transposition(n: int, i: int, j: int) -> "Permutation":
        im = list(range(1, n + 1))
        im[i - 1], im[j - 1] = j, i
        return Permutation(im)

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, v in enumerate(self.images):
            inv[v - 1] = i + 1
        return Permutation(inv)

    def is_identity(self) -> bool:
        return self.images == tuple(range(1, self.n + 1))

    def parity(self) -> int:
        """0 for even, 1 for odd."""
        seen = [False] * self.n
        par = 0
        for i in range(self.n):
            if seen[i]:
                continue
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = self.images[j] - 1
                length += 1
            par ^= (length - 1) & 1
        return par


def compose(a: Permutation, b: Permutation) -> Permutation:
    """(a o b)(i) = a(b(i))."""
    if a.n != b.n:
        raise ValueError(f"size mismatch: {a.n} vs {b.n}")
    return Permutation(tuple(a.images[bi - 1] for bi in b.images))


def sign(perm: Permutation, p: int) -> int:
    """Parity of perm as +-1 in F_p (always 1 in characteristic 2)."""
    check_prime(p)
    return (p - 1) % p if perm.parity() else 1 % p


def all_permutations(n: int):
    """All of Sigma_n in lexicographic image order (identity first)."""
    return [Permutation(im) for im in _all_perms(range(1, n + 1))]


def block_permutation(perm: Permutation, sizes) -> Permutation:
    """The permutation of sum(sizes) letters moving blocks as perm moves letters.

    Position-block i of the result (of size sizes[perm(i)]) is filled with
    the letters of source block perm(i), order preserved inside blocks.
    """
    sizes = [int(s) for s in sizes]
    if perm.n != len(sizes):
        raise ValueError("block count mismatch")
    offsets = [0]
    for s in sizes:
        offsets.append(offsets[-1] + s)
    images = []
    # images of the letters of source block j, laid out at the position of
    # block perm^{-1}(j): equivalently walk positions i and emit block perm(i).
    target_offset = [0]
    for i in range(1, len(sizes) + 1):
        target_offset.append(target_offset[-1] + sizes[perm(i) - 1])
    img = [0] * offsets[-1]
    for i in range(1, len(sizes) + 1):
        j = perm(i)  # source block placed at position block i
        for t in range(sizes[j - 1]):
            img[offsets[j - 1] + t] = target_offset[i - 1] + t + 1
    return Permutation(img)


class GroupRingElement:
    """Element of k[Sigma_n]: finite table permutation -> nonzero scalar."""

    __slots__ = ("n", "p", "coeffs")

    def __init__(self, n: int, p: int, coeffs=None):
        self.n = int(n)
        self.p = check_prime(p)
        table = {}
        if coeffs:
            for perm, c in coeffs.items():
                if not isinstance(perm, Permutation):
                    perm = Permutation(perm)
                if perm.n != self.n:
                    raise ValueError("arity mismatch in group ring element")
                c = int(c) % p
                if c:
                    table[perm] = (table.get(perm, 0) + c) % p
        self.coeffs = {k: v for k, v in table.items() if v}

    @staticmethod
    def unit(n: int, p: int) -> "GroupRingElement":
        return GroupRingElement(n, p, {Permutation.identity(n): 1})

    @staticmethod
    def of(perm: Permutation, p: int, c: int = 1) -> "GroupRingElement":
        return GroupRingElement(perm.n, p, {perm: c})

    def __add__(self, other):
        self._check(other)
        out = dict(self.coeffs)
        for perm, c in other.coeffs.items():
            out[perm] = (out.get(perm, 0) + c) % self.p
        return GroupRingElement(self.n, self.p, out)

    def __sub__(self, other):
        self._check(other)
        out = dict(self.coeffs)
        for perm, c in other.coeffs.items():
            out[perm] = (out.get(perm, 0) - c) % self.p
        return GroupRingElement(self.n, self.p, out)

    def scale(self, c: int) -> "GroupRingElement":
        return GroupRingElement(self.n, self.p,
                                {k: (v * c) % self.p for k, v in self.coeffs.items()})

    def _check(self, other):
        if not isinstance(other, GroupRingElement) or other.n != self.n or other.p != self.p:
            raise ValueError("arity or characteristic mismatch")

    def __eq__(self, other):
        return (isinstance(other, GroupRingElement) and other.n == self.n
                and other.p == self.p and other.coeffs == self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = [f"{c}*{perm.images}" for perm, c in
                 sorted(self.coeffs.items(), key=lambda kv: kv[0].images)]
        return " + ".join(parts)


def ring_multiply(a: GroupRingElement, b: GroupRingElement) -> GroupRingElement:
    """Convolution product on k[Sigma_n]."""
    a._check(b)
    out = {}
    for pa, ca in a.coeffs.items():
        for pb, cb in b.coeffs.items():
            prod = compose(pa, pb)
            out[prod] = (out.get(prod, 0) + ca * cb) % a.p
    return GroupRingElement(a.n, a.p, out)


def koszul_sign_of_reordering(degrees, positions, p: int) -> int:
    """Sign of moving graded symbols from order 0..m-1 to the given order.

    positions[i] is the source index of the symbol landing in slot i of the
    target order.  The sign is (-1)^k where k counts inversions between
    symbols of odd degree.
    """
    s = 0
    m = len(positions)
    for i in range(m):
        for j in range(i + 1, m):
            if positions[i] > positions[j] and degrees[positions[i]] % 2 and degrees[positions[j]] % 2:
                s ^= 1
    return (p - 1) % p if s else 1 % p
