"""Quasi-free truncated operads presented by generators with boundaries.

A generator has an arity (>= 2), a degree, and a boundary expression over the
previously declared generators (a cycle, so that d^2 = 0).  The component of
arity a is the free module on normal-form tree monomials; Sigma_a acts freely
by leaf relabeling, with the identity-leaf-word trees as orbit
representatives.  Composition overflowing the arity window raises
TruncationError for a plain operad; an arity-truncated view (the T_n functor)
returns zero instead.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations as _perms

import numpy as np

from . import linalg, trees
from .algebra import Permutation, all_permutations
from .dgmod import (DGMorphism, FreeDGModule, GroupAction, tensor_power,
                    tensor_power_map, tensor_power_permutation)


class TruncationError(ValueError):
    pass


@dataclass(frozen=True)
class GeneratorDecl:
    id: str
    arity: int
    degree: int
    boundary: tuple = ()      # sorted tuple of (tree, coeff); () when closed

    def boundary_dict(self):
        return dict(self.boundary)


def make_decl(gen_id, arity, degree, boundary=None):
    items = tuple(sorted((boundary or {}).items())) if boundary else ()
    return GeneratorDecl(gen_id, int(arity), int(degree), items)


class OperadElement:
    """Homogeneous formal combination of tree monomials."""

    __slots__ = ("p", "arity", "degree", "terms")

    def __init__(self, p, arity, degree, terms=None):
        self.p = p
        self.arity = int(arity)
        self.degree = int(degree)
        self.terms = {}
        for t, c in (terms or {}).items():
            c = int(c) % p
            if c:
                self.terms[t] = c

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        assert (self.arity, self.degree) == (other.arity, other.degree)
        out = dict(self.terms)
        for t, c in other.terms.items():
            out[t] = (out.get(t, 0) + c) % self.p
        return OperadElement(self.p, self.arity, self.degree, out)

    def scale(self, c):
        return OperadElement(self.p, self.arity, self.degree,
                             {t: (v * c) % self.p for t, v in self.terms.items()})

    def __sub__(self, other):
        return self + other.scale(-1)

    def __eq__(self, other):
        return (isinstance(other, OperadElement) and self.p == other.p
                and self.arity == other.arity and self.degree == other.degree
                and self.terms == other.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = [f"{c}*{trees.pretty(t)}" for t, c in sorted(self.terms.items())]
        return " + ".join(bits)


class QuasiFreeOperad:
    """Truncated operad presented by a generator list.

    overflow: "error" raises TruncationError past the arity window,
    "zero" nulls such compositions (the arity-truncation functor T_n).
    """

    def __init__(self, p, gens, max_arity, max_degree, overflow="error",
                 name="P", check=True):
        self.p = linalg.check_prime(p)
        self.gens = list(gens)
        self.by_id = {g.id: g for g in self.gens}
        if len(self.by_id) != len(self.gens):
            raise ValueError("duplicate generator ids")
        self.N = int(max_arity)
        self.D = int(max_degree)
        self.overflow = overflow
        self.name = name
        self.gen_degree = {g.id: g.degree for g in self.gens}
        self.gen_arity = {g.id: g.arity for g in self.gens}
        self.gen_boundary = {g.id: g.boundary_dict() for g in self.gens}
        self._reps_cache = {}
        self._basis_cache = {}
        self._component_cache = {}
        if check:
            self._validate_gens()

    # -- generator hygiene ---------------------------------------------------

    def _validate_gens(self):
        seen = set()
        for g in self.gens:
            if g.arity < 2:
                raise ValueError(f"generator {g.id} has arity < 2")
            if g.degree < 0 or g.degree > self.D:
                raise ValueError(f"generator {g.id} degree outside window")
            bd = g.boundary_dict()
            for t, c in bd.items():
                for nid in trees.nodes_dfs(t):
                    if nid not in seen:
                        raise ValueError(
                            f"boundary of {g.id} uses undeclared generator {nid}")
                if sorted(trees.leaf_word(t)) != list(range(1, g.arity + 1)):
                    raise ValueError(f"boundary tree of {g.id} has bad leaf word")
                if trees.tree_degree(t, self.gen_degree) != g.degree - 1:
                    raise ValueError(f"boundary of {g.id} not of degree {g.degree - 1}")
            if bd:
                el = OperadElement(self.p, g.arity, g.degree - 1, bd)
                if not self.differential(el).is_zero():
                    raise ValueError(f"boundary of {g.id} is not a cycle")
            seen.add(g.id)

    # -- elements -------------------------------------------------------------

    def unit(self):
        return OperadElement(self.p, 1, 0, {trees.leaf(1): 1})

    def generator_element(self, gen_id):
        g = self.by_id[gen_id]
        return OperadElement(self.p, g.arity, g.degree,
                             {trees.corolla(gen_id, g.arity): 1})

    def element_from_tree(self, t, coeff=1):
        return OperadElement(self.p, trees.tree_arity(t),
                             trees.tree_degree(t, self.gen_degree), {t: coeff})

    def normal_form(self, raw_tree, coeff=1):
        """Absorb permutation parts of raw node labels; idempotent."""
        t, sgn = trees.push_group_labels(raw_tree, self.gen_degree, self.p)
        return self.element_from_tree(t, coeff * sgn % self.p)

    # -- structure maps --------------------------------------------------------

    def gamma(self, f: OperadElement, gs):
        """Operadic composition, bilinear in every slot."""
        if f.arity != len(gs):
            raise ValueError("gamma: arity of f must match number of arguments")
        arity = sum(g.arity for g in gs)
        degree = f.degree + sum(g.degree for g in gs)
        if arity > self.N:
            if self.overflow == "zero":
                return OperadElement(self.p, arity, degree)
            raise TruncationError(
                f"composite arity {arity} exceeds window {self.N}")
        if degree > self.D:
            raise TruncationError(
                f"composite degree {degree} exceeds window {self.D}")
        out = {}
        for ft, fc in f.terms.items():
            for combo in _iter_term_combos(gs):
                gts, gc = combo
                t, sgn = trees.gamma_monomial(ft, gts, self.gen_degree, self.p)
                c = (fc * gc * sgn) % self.p
                if c:
                    out[t] = (out.get(t, 0) + c) % self.p
        return OperadElement(self.p, arity, degree, out)

    def sigma_action(self, x: OperadElement, sigma: Permutation) -> OperadElement:
        if sigma.n != x.arity:
            raise ValueError("permutation arity mismatch")
        out = {}
        for t, c in x.terms.items():
            out[trees.sigma_act_tree(t, sigma)] = c
        return OperadElement(self.p, x.arity, x.degree, out)

    def differential(self, x: OperadElement) -> OperadElement:
        out = {}
        for t, c in x.terms.items():
            for s, cs in trees.differential_monomial(
                    t, self.gen_degree, self.gen_boundary, self.p).items():
                out[s] = (out.get(s, 0) + c * cs) % self.p
        return OperadElement(self.p, x.arity, x.degree - 1, out)

    def epsilon(self, x: OperadElement) -> int:
        """Augmentation: 1 on each degree-0 monomial, 0 in positive degree."""
        if x.degree != 0:
            return 0
        return sum(x.terms.values()) % self.p

    # -- bases -----------------------------------------------------------------

    def reps(self, arity, degree):
        """Identity-leaf-word normal forms of the given arity and degree."""
        key = (arity, degree)
        if key not in self._reps_cache:
            if arity == 1:
                out = [trees.leaf(1)] if degree == 0 else []
            else:
                out = sorted(self._enum_consecutive(1, arity, degree))
            self._reps_cache[key] = out
        return self._reps_cache[key]

    def _enum_consecutive(self, lo, hi, degree):
        """Trees over labels lo..hi in planar increasing order."""
        n = hi - lo + 1
        if n == 1:
            if degree == 0:
                yield trees.leaf(lo)
            return
        for g in self.gens:
            k = g.arity
            if k > n or g.degree > degree:
                continue
            rem = degree - g.degree
            for cuts in _compositions(n, k):
                blocks = []
                a = lo
                for size in cuts:
                    blocks.append((a, a + size - 1))
                    a += size
                for dist in _degree_splits(rem, k):
                    for kids in self._block_product(blocks, dist, 0, []):
                        yield trees.node(g.id, kids)

    def _block_product(self, blocks, dist, i, acc):
        if i == len(blocks):
            yield tuple(acc)
            return
        lo, hi = blocks[i]
        for sub in self._enum_consecutive(lo, hi, dist[i]):
            acc.append(sub)
            yield from self._block_product(blocks, dist, i + 1, acc)
            acc.pop()

    def basis(self, arity, degree):
        """All normal-form monomials: orbits of the representatives."""
        key = (arity, degree)
        if key not in self._basis_cache:
            if arity == 1:
                out = list(self.reps(1, degree))
            else:
                out = []
                for rep in self.reps(arity, degree):
                    for sigma in all_permutations(arity):
                        out.append(trees.sigma_act_tree(rep, sigma))
                out = sorted(set(out))
            self._basis_cache[key] = out
        return self._basis_cache[key]

    def component(self, arity, max_degree=None) -> FreeDGModule:
        """The arity component as a free module with its Sigma action."""
        D = self.D if max_degree is None else min(max_degree, self.D)
        key = (arity, D)
        if key in self._component_cache:
            return self._component_cache[key]
        basis = [self.basis(arity, d) for d in range(D + 1)]
        index = [{t: i for i, t in enumerate(b)} for b in basis]
        diff = [None]
        for d in range(1, D + 1):
            m = linalg.zeros(len(basis[d - 1]), len(basis[d]))
            for col, t in enumerate(basis[d]):
                for s, c in trees.differential_monomial(
                        t, self.gen_degree, self.gen_boundary, self.p).items():
                    m[index[d - 1][s], col] = (m[index[d - 1][s], col] + c) % self.p
            diff.append(m)
        aug = np.ones(len(basis[0]), dtype=np.int64) % self.p
        coaug = 0 if basis[0] else None
        symmetry = None
        if arity >= 2:
            maps = {}
            for sigma in all_permutations(arity):
                per = []
                for d in range(D + 1):
                    idx = np.array(
                        [index[d][trees.sigma_act_tree(t, sigma)] for t in basis[d]],
                        dtype=np.int64) if basis[d] else np.zeros(0, dtype=np.int64)
                    per.append((idx, np.ones(len(basis[d]), dtype=np.int64)))
                maps[sigma] = per
            reps = [[index[d][r] for r in self.reps(arity, d)] for d in range(D + 1)]
            symmetry = GroupAction(arity, maps, reps)
        mod = FreeDGModule(self.p, basis, diff, aug=aug, coaug=coaug,
                           symmetry=symmetry, name=f"{self.name}({arity})")
        self._component_cache[key] = mod
        return mod

    # -- truncation functors -----------------------------------------------------

    def truncate(self, n) -> "QuasiFreeOperad":
        """T_n: components above arity n vanish, overflow compositions are zero."""
        return QuasiFreeOperad(self.p, self.gens, min(n, self.N), self.D,
                               overflow="zero", name=f"T{n}{self.name}",
                               check=False)


def theta_restrict(gens, n):
    """theta_n on the generating data: drop generators of arity > n."""
    return [g for g in gens if g.arity <= n]


def _compositions(n, k):
    """Ordered ways to write n as k positive parts."""
    if k == 1:
        yield (n,)
        return
    for first in range(1, n - k + 2):
        for rest in _compositions(n - first, k - 1):
            yield (first,) + rest


def _degree_splits(total, k):
    """Ordered ways to write total as k nonnegative parts."""
    if k == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _degree_splits(total - first, k - 1):
            yield (first,) + rest


def _iter_term_combos(gs):
    """Expand the multilinear product of OperadElements over their terms."""
    combos = [((), 1)]
    for g in gs:
        new = []
        for ts, c in combos:
            for t, ct in g.terms.items():
                new.append((ts + (t,), (c * ct) % g.p))
        combos = new
    for ts, c in combos:
        yield list(ts), c


# ---------------------------------------------------------------------------
# dense coendomorphism targets


@dataclass
class SModule:
    """Arity-indexed collection of components with their symmetric actions."""

    components: dict = field(default_factory=dict)

    def component(self, n) -> FreeDGModule:
        return self.components[n]

    def arities(self):
        return sorted(self.components)


class Coend:
    """Coend(A)(n) = Hom(A, A^(x)n) for a small dense module A."""

    def __init__(self, A: FreeDGModule, max_arity, D=None):
        self.A = A
        self.p = A.p
        self.D = A.D if D is None else D
        self.powers = {n: tensor_power(A, n, D=self.D) for n in range(max_arity + 1)}

    def power(self, n):
        return self.powers[n]

    def element(self, n, mor: DGMorphism):
        assert mor.source is self.powers[1] and mor.target is self.powers[n]
        return CoendElement(self, n, mor)

    def identity(self):
        return CoendElement(self, 1, DGMorphism.identity(self.powers[1]))

    def hom_differential(self, el: "CoendElement") -> "CoendElement":
        """delta F = d o F - (-1)^{|F|} F o d in the Hom complex."""
        mor = el.mor
        k = mor.degree
        out = DGMorphism(mor.source, mor.target, k - 1)
        p = self.p
        sgn = 1 if k % 2 == 0 else p - 1
        for d in range(mor.source.D + 1):
            if not (0 <= d + k - 1 <= mor.target.D):
                continue
            term = linalg.zeros(mor.target.dim(d + k - 1), mor.source.dim(d))
            if 0 <= d + k <= mor.target.D:
                term = (mor.target.d_matrix(d + k) @ mor.block(d)) % p
            if d >= 1:
                term = (term - sgn * (mor.block(d - 1) @ mor.source.d_matrix(d))) % p
            out.set_block(d, term % p)
        return CoendElement(self, el.n, out)


@dataclass
class CoendElement:
    coend: Coend
    n: int
    mor: DGMorphism

    @property
    def degree(self):
        return self.mor.degree

    def act(self, sigma: Permutation) -> "CoendElement":
        perm = tensor_power_permutation(self.coend.power(self.n), self.coend.A, sigma)
        return CoendElement(self.coend, self.n, perm.compose(self.mor))

    def add(self, other: "CoendElement") -> "CoendElement":
        return CoendElement(self.coend, self.n, self.mor + other.mor)

    def scale(self, c) -> "CoendElement":
        return CoendElement(self.coend, self.n, self.mor.scale(c))

    def compose_with(self, args) -> "CoendElement":
        """gamma(self; args) = (g_1 (x) ... (x) g_r) o self."""
        total = sum(g.n for g in args)
        tens = tensor_power_map([g.mor for g in args],
                                self.coend.power(self.n),
                                self.coend.power(total), self.coend.A)
        return CoendElement(self.coend, total, tens.compose(self.mor))

    def equal(self, other: "CoendElement") -> bool:
        if self.n != other.n or self.mor.degree != other.mor.degree:
            return False
        for d in range(self.mor.source.D + 1):
            if (self.mor.block(d) != other.mor.block(d)).any():
                return False
        return True


def evaluate_morphism(operad: QuasiFreeOperad, assignment, x: OperadElement,
                      coend: Coend, check_boundaries=True) -> CoendElement:
    """Evaluate the operad morphism fixed by a generator assignment.

    assignment: gen_id -> CoendElement of matching arity and degree, required
    to respect boundaries: delta(assignment[g]) = evaluation of g's boundary.
    Trees evaluate bottom-up, a node g with children g_1..g_r going to
    (g_1 (x) ... (x) g_r) o assignment[g]; Sigma-equivariant and linear.
    """
    if check_boundaries:
        for g in operad.gens:
            if g.id not in assignment:
                continue
            img = assignment[g.id]
            if (img.n, img.degree) != (g.arity, g.degree):
                raise ValueError(f"assignment of {g.id} has wrong arity or degree")
            want = coend.hom_differential(img)
            have = _evaluate_element(
                operad, assignment,
                OperadElement(operad.p, g.arity, g.degree - 1, g.boundary_dict()),
                coend)
            if not want.equal(have):
                raise ValueError(f"assignment does not respect the boundary of {g.id}")
    return _evaluate_element(operad, assignment, x, coend)


def _evaluate_element(operad, assignment, x, coend):
    acc = None
    for t, c in sorted(x.terms.items()):
        el = _evaluate_tree(operad, assignment, t, coend).scale(c)
        acc = el if acc is None else acc.add(el)
    if acc is None:
        n = x.arity
        z = DGMorphism(coend.power(1), coend.power(n), x.degree)
        return CoendElement(coend, n, z)
    return acc


def _evaluate_tree(operad, assignment, t, coend):
    w = trees.leaf_word(t)
    n = len(w)
    if trees.is_leaf(t):
        return coend.identity()
    # normalize to the consecutive representative, then act by w^{-1}
    relab = {label: i + 1 for i, label in enumerate(w)}
    t_tilde = trees.relabel(t, relab)
    ev = _evaluate_consecutive(operad, assignment, t_tilde, coend)
    if w == tuple(range(1, n + 1)):
        return ev
    w_perm = Permutation(w)
    return ev.act(w_perm.inverse())


def _evaluate_consecutive(operad, assignment, t, coend):
    if trees.is_leaf(t):
        return coend.identity()
    gen_id = t[1]
    kids = []
    for c in t[2]:
        word = trees.leaf_word(c)
        local = trees.relabel(c, {l: i + 1 for i, l in enumerate(word)})
        kids.append(_evaluate_consecutive(operad, assignment, local, coend))
    root = assignment[gen_id]
    return root.compose_with(kids)
