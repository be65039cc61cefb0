"""Constructive null-homotopy extension and relative lifting.

The lemma engine extends a null homotopy over a free complement generator by
generator in increasing degree, solving d x = (rhs) with the deterministic
solver; the relative lift runs the same extension inside the mapping cone of
the quasi-isomorphism and splits the answer into a chain map and a homotopy,
exactly as in the constructive proof.  Equivariant variants solve on orbit
representatives only and fill in the rest of each free orbit by transport.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .algebra import Permutation, all_permutations
from .dgmod import (DGMorphism, FreeDGModule, GroupAction, Homotopy,
                    MappingCone, WindowError, mapping_cone)


class LiftError(RuntimeError):
    """Unsolvable system during an extension (names the degree)."""


@dataclass
class BasisPartition:
    """Per-degree split of a module basis into L' indices and P indices.

    L' must span a subcomplex; P is the free complement whose columns the
    extension solves.  Both lists must partition range(dim(d)) at every d.
    """

    sub: list
    comp: list

    @staticmethod
    def by_degree_cut(L: FreeDGModule, cut: int) -> "BasisPartition":
        """L' = everything of degree < cut (a subcomplex), P = the rest."""
        sub, comp = [], []
        for d in range(L.D + 1):
            idx = list(range(L.dim(d)))
            if d < cut:
                sub.append(idx)
                comp.append([])
            else:
                sub.append([])
                comp.append(idx)
        return BasisPartition(sub, comp)

    @staticmethod
    def all_new(L: FreeDGModule) -> "BasisPartition":
        return BasisPartition.by_degree_cut(L, 0)

    def check(self, L: FreeDGModule):
        for d in range(L.D + 1):
            got = sorted(self.sub[d] + self.comp[d])
            if got != list(range(L.dim(d))):
                raise ValueError(f"partition does not cover degree {d}")
            # L' closed under the differential
            for j in self.sub[d]:
                col = L.d_matrix(d)[:, j] if d >= 1 else np.zeros(0)
                for i in np.nonzero(col)[0]:
                    if int(i) not in self.sub[d - 1]:
                        raise ValueError(
                            f"L' not a subcomplex: degree {d} basis {j} hits {i}")


def extend_null_homotopy(f: DGMorphism, partition: BasisPartition,
                         h_prime: DGMorphism | None,
                         orbit_fill=None) -> Homotopy:
    """Extend a null homotopy of f|L' over the free complement P.

    f : L -> N homogeneous of degree k with d f = (-1)^k f d; N must be
    acyclic in the degrees used (unsolvability raises LiftError naming the
    degree).  h_prime holds the existing homotopy values on the L' columns
    (ignored elsewhere); pass None when L' = 0.

    orbit_fill, when given, is (reps_by_degree, fill) where only the listed
    representative columns are solved and fill(d, rep_col, value_vector)
    yields (col, vector) pairs for the rest of the orbit.
    """
    L, N, k, p = f.source, f.target, f.degree, f.p
    partition.check(L)
    sgn_k = 1 if k % 2 == 0 else p - 1
    H = Homotopy(L, N, k, f=DGMorphism.zero(L, N, k), g=f)
    cols = {d: {} for d in range(L.D + 1)}
    for d in range(L.D + 1):
        for j in partition.sub[d]:
            if h_prime is None:
                raise ValueError("nonempty L' needs h_prime")
            cols[d][j] = h_prime.block(d)[:, j] % p

    def h_of(d, v):
        out = np.zeros(N.dim(d + k + 1), dtype=np.int64)
        for j in np.nonzero(v)[0]:
            j = int(j)
            if j not in cols[d]:
                raise LiftError(f"homotopy value missing at degree {d} column {j}")
            out = (out + int(v[j]) * cols[d][j]) % p
        return out

    for d in range(L.D + 1):
        if d + k + 1 > N.D or d + k + 1 < 1:
            continue    # window edge: no room to store the value
        todo = partition.comp[d]
        reps_here = None
        if orbit_fill is not None:
            reps_by_degree, fill = orbit_fill
            reps_here = [j for j in reps_by_degree[d] if j in set(todo)]
            todo = reps_here
        dn = N.d_matrix(d + k + 1)
        for j in todo:
            rhs = f.block(d)[:, j].copy() % p
            if d >= 1:
                rhs = (rhs - sgn_k * h_of(d - 1, L.d_matrix(d)[:, j])) % p
            x = linalg.solve(dn, rhs, p)
            if x is None:
                raise LiftError(
                    f"extension unsolvable at degree {d} (target degree {d + k + 1})")
            cols[d][j] = x % p
            if orbit_fill is not None:
                for col, vec in orbit_fill[1](d, j, x % p):
                    cols[d][col] = vec % p
    for d in range(L.D + 1):
        if d + k + 1 > N.D or d + k + 1 < 1:
            continue
        m = linalg.zeros(N.dim(d + k + 1), L.dim(d))
        for j, v in cols[d].items():
            m[:, j] = v
        H.set_block(d, m)
    return H


@dataclass
class LiftResult:
    alpha: DGMorphism
    homotopy: Homotopy        # d H + (-1)^k H d = phi - f alpha
    cone: MappingCone


def relative_lift(f: DGMorphism, phi: DGMorphism, partition: BasisPartition,
                  alpha_prime: DGMorphism | None = None,
                  h_prime: Homotopy | None = None,
                  check_quasi_iso: bool = True,
                  orbit_fill=None, cone_action: GroupAction | None = None) -> LiftResult:
    """Lift phi : L -> N along the quasi-isomorphism f : M -> N.

    Returns (alpha : L -> M of degree k - l, H) with the exact postconditions

        d alpha = (-1)^{k-l} alpha d          (alpha is a chain map)
        f alpha - phi = -(d H + (-1)^k H d)   (H extends h_prime)

    alpha extends alpha_prime on the L' columns of the partition.
    """
    L, N, k, l = phi.source, phi.target, phi.degree, f.degree
    if f.target is not N:
        raise ValueError("phi and f must share their target")
    if check_quasi_iso:
        through = max(0, min(f.source.D, N.D) - 1)
        if not is_quasi_iso(f, through):
            raise ValueError("f is not a quasi-isomorphism inside the window")
    coned = mapping_cone(f)
    if cone_action is not None:
        coned.cone.symmetry = cone_action
    u_phi = coned.inclusion.compose(phi)
    w_prime = None
    if alpha_prime is not None or h_prime is not None:
        w_prime = DGMorphism(L, coned.cone, k + 1)
        for d in range(L.D + 1):
            if d + k + 1 > coned.cone.D:
                continue
            m_part = alpha_prime.block(d) if alpha_prime is not None else \
                linalg.zeros(f.source.dim(d + k - l), L.dim(d))
            n_part = h_prime.block(d) if h_prime is not None else \
                linalg.zeros(N.dim(d + k + 1), L.dim(d))
            blk = linalg.zeros(coned.cone.dim(d + k + 1), L.dim(d))
            for i, (tag, _, jj) in enumerate(coned.cone.basis[d + k + 1]):
                blk[i] = m_part[jj] if tag == "s" else n_part[jj]
            w_prime.set_block(d, blk)
    fill = None
    if orbit_fill is not None:
        reps_by_degree, action_pairs = orbit_fill
        perms = [s for s in all_permutations(action_pairs.n) if not s.is_identity()]

        def fill_fn(d, rep_col, value):
            for s in perms:
                idxL, sgnL = L.symmetry.act_indices(s, d)
                col = int(idxL[rep_col])
                csgn = int(sgnL[rep_col])
                vec = action_pairs.act_vector(s, d + k + 1, value, f.p)
                yield col, (vec * csgn) % f.p
        fill = (reps_by_degree, fill_fn)
    W = extend_null_homotopy(u_phi, partition, w_prime, orbit_fill=fill)
    alpha = DGMorphism(L, f.source, k - l)
    H = Homotopy(L, N, k)
    for d in range(L.D + 1):
        if d + k + 1 > coned.cone.D:
            continue
        blk = W.block(d)
        am = linalg.zeros(f.source.dim(d + k - l), L.dim(d))
        hm = linalg.zeros(N.dim(d + k + 1), L.dim(d))
        for i, (tag, _, jj) in enumerate(coned.cone.basis[d + k + 1]):
            if tag == "s":
                am[jj] = blk[i]
            else:
                hm[jj] = blk[i]
        if 0 <= d + k - l <= f.source.D:
            alpha.set_block(d, am)
        H.set_block(d, hm)
    H.f = f.compose(alpha)
    H.g = phi
    return LiftResult(alpha, H, coned)


def cone_group_action(coned: MappingCone, act_M: GroupAction,
                      act_N: GroupAction) -> GroupAction:
    """Diagonal action on C(f) = sM (+) N; valid when f is equivariant."""
    cone, l = coned.cone, coned.f.degree
    maps = {}
    perms = all_permutations(act_M.n)
    for s in perms:
        per_deg = []
        for d in range(cone.D + 1):
            idx = np.zeros(cone.dim(d), dtype=np.int64)
            sgn = np.ones(cone.dim(d), dtype=np.int64)
            lut = {key[:1] + key[2:]: i for i, key in enumerate(cone.basis[d])}
            for i, (tag, _, j) in enumerate(cone.basis[d]):
                if tag == "s":
                    e = d - l - 1
                    im, sg = act_M.act_indices(s, e)
                else:
                    im, sg = act_N.act_indices(s, d)
                idx[i] = lut[(tag, int(im[j]))]
                sgn[i] = int(sg[j])
            per_deg.append((idx, sgn))
        maps[s] = per_deg
    reps = [[] for _ in range(cone.D + 1)]
    return GroupAction(act_M.n, maps, reps)


def induced_homology_map(f: DGMorphism, d: int):
    """Matrix of H_d(f) : H_d(source) -> H_{d+l}(target) in rep bases."""
    M, N, l, p = f.source, f.target, f.degree, f.p
    dim_m, reps_m, rel_m = M.homology(d)
    dim_n, reps_n, rel_n = N.homology(d + l)
    if not (rel_m and rel_n):
        raise WindowError(f"homology unreliable at degree {d} (window edge)")
    out = linalg.zeros(dim_n, dim_m)
    for i in range(dim_m):
        img = f.apply(d, reps_m[i])
        cls = N.homology_class(d + l, img)
        if cls is None:
            raise ValueError("chain map sent a cycle to a non-cycle")
        out[:, i] = cls
    return out, dim_m, dim_n


def is_quasi_iso(f: DGMorphism, through: int) -> bool:
    """True iff H_d(f) is an isomorphism for 0 <= d <= through."""
    if through + 1 > min(f.source.D, f.target.D - f.degree):
        raise WindowError("need one degree of headroom above 'through'")
    for d in range(through + 1):
        m, dim_m, dim_n = induced_homology_map(f, d)
        if dim_m != dim_n or linalg.rank(m, f.p) != dim_m:
            return False
    return True
