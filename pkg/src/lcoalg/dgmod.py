"""Finite-type differential graded modules with chosen bases.

Degrees live in a window 0..D.  The differential lowers degree by one,
d o d = 0 and eps o d = 0 are asserted at construction.  Sign conventions
(fixed once, used everywhere):

  * chain map of degree k:    d f = (-1)^k f d
  * homotopy H from f to g:   d H + (-1)^k H d = g - f     (k = deg f = deg g)
  * null homotopy H of f:     d H + (-1)^k H d = f
  * tensor differential:      d(x (x) y) = dx (x) y + (-1)^|x| x (x) dy
  * tensor of maps:           (f (x) g)(x (x) y) = (-1)^{|g||x|} f(x) (x) g(y)
  * cone of f of degree l:    C(f)_d = M_{d-l-1} (+) N_d,
                              d(m, x) = (-(-1)^l dm, f m + dx)

These are the equations displayed in the constructive proof of the relative
lifting theorem; everything downstream (lifts, witnesses) is checked against
them as exact matrix identities per degree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import linalg
from .algebra import Permutation, all_permutations


class WindowError(ValueError):
    """Raised when a request needs data beyond the degree window."""


@dataclass
class GroupAction:
    """Right Sigma_n-action on a graded basis by signed basis permutation.

    ``maps[perm][d] = (idx, sgn)`` means basis element i of degree d is sent
    to sgn[i] * basis[idx[i]] under the right action of perm.  ``reps[d]``
    lists orbit-representative indices; freeness means every orbit has size
    n! and the orbits of the representatives partition the basis.
    """

    n: int
    maps: dict
    reps: list

    def act_indices(self, perm: Permutation, d: int):
        return self.maps[perm][d]

    def act_vector(self, perm: Permutation, d: int, v: np.ndarray, p: int) -> np.ndarray:
        idx, sgn = self.maps[perm][d]
        out = np.zeros_like(v)
        # v[i] coefficient on basis i; image spreads it onto idx[i]
        np.add.at(out, idx, (v * sgn) % p)
        return out % p


class FreeDGModule:
    """Graded module with ordered basis per degree and degree -1 differential."""

    def __init__(self, p, basis, diff, aug=None, coaug=None, symmetry=None,
                 name="", check=True):
        self.p = linalg.check_prime(p)
        self.basis = [list(b) for b in basis]
        self.D = len(self.basis) - 1
        if len(diff) != len(self.basis):
            raise ValueError("diff must have one entry per degree (entry 0 ignored)")
        self.diff = [None] + [linalg.as_matrix(m, p) for m in diff[1:]]
        self.aug = None if aug is None else (np.asarray(aug, dtype=np.int64) % p)
        self.coaug = coaug
        self.symmetry = symmetry
        self.name = name
        self._index = [
            {key: i for i, key in enumerate(bd)} for bd in self.basis
        ]
        if check:
            self.validate()

    # -- shape helpers ------------------------------------------------------

    def dim(self, d: int) -> int:
        if d < 0 or d > self.D:
            return 0
        return len(self.basis[d])

    def dims(self):
        return [self.dim(d) for d in range(self.D + 1)]

    def index_of(self, d: int, key) -> int:
        return self._index[d][key]

    def d_matrix(self, d: int) -> np.ndarray:
        """Matrix of the differential from degree d to d-1."""
        if d <= 0 or d > self.D:
            return linalg.zeros(self.dim(d - 1), self.dim(d))
        return self.diff[d]

    def zero_vector(self, d: int) -> np.ndarray:
        return np.zeros(self.dim(d), dtype=np.int64)

    def basis_vector(self, d: int, i: int) -> np.ndarray:
        v = self.zero_vector(d)
        v[i] = 1
        return v

    # -- validation ---------------------------------------------------------

    def validate(self):
        p = self.p
        for d in range(1, self.D + 1):
            m = self.d_matrix(d)
            if m.shape != (self.dim(d - 1), self.dim(d)):
                raise ValueError(f"{self.name}: differential shape wrong at degree {d}")
            if d >= 2:
                if ((self.d_matrix(d - 1) @ m) % p).any():
                    raise ValueError(f"{self.name}: d^2 != 0 at degree {d}")
        if self.aug is not None:
            if self.aug.shape != (self.dim(0),):
                raise ValueError(f"{self.name}: augmentation shape wrong")
            if self.D >= 1 and ((self.aug @ self.d_matrix(1)) % p).any():
                raise ValueError(f"{self.name}: eps o d != 0")
            if self.coaug is not None and self.aug[self.coaug] % p != 1:
                raise ValueError(f"{self.name}: eps o eta != 1")
        if self.symmetry is not None:
            self._validate_symmetry()

    def _validate_symmetry(self):
        sym = self.symmetry
        p = self.p
        perms = all_permutations(sym.n)
        fact = 1
        for i in range(2, sym.n + 1):
            fact *= i
        for d in range(self.D + 1):
            if len(self.basis[d]) != fact * len(sym.reps[d]):
                raise ValueError(
                    f"{self.name}: basis at degree {d} is not free on "
                    f"{len(sym.reps[d])} representatives")
            seen = set()
            for r in sym.reps[d]:
                for perm in perms:
                    idx, _ = sym.act_indices(perm, d)
                    seen.add(int(idx[r]))
            if len(seen) != self.dim(d):
                raise ValueError(f"{self.name}: orbits of reps do not cover degree {d}")
        for perm in perms:
            for d in range(1, self.D + 1):
                idx_d, sgn_d = sym.act_indices(perm, d)
                idx_l, sgn_l = sym.act_indices(perm, d - 1)
                m = self.d_matrix(d)
                # equivariance: act then d == d then act, columnwise
                for j in range(self.dim(d)):
                    lhs = self.act_on_vector(perm, d - 1, m[:, j])
                    rhs = (m[:, int(idx_d[j])] * int(sgn_d[j])) % p
                    if (lhs != rhs).any():
                        raise ValueError(
                            f"{self.name}: differential not equivariant at degree {d}")
            if self.aug is not None:
                idx0, sgn0 = sym.act_indices(perm, 0)
                for j in range(self.dim(0)):
                    if (self.aug[j] - self.aug[int(idx0[j])] * int(sgn0[j])) % p:
                        raise ValueError(f"{self.name}: augmentation not equivariant")

    def act_on_vector(self, perm: Permutation, d: int, v: np.ndarray) -> np.ndarray:
        return self.symmetry.act_vector(perm, d, v % self.p, self.p)

    # -- homology -----------------------------------------------------------

    def homology(self, d: int):
        """Returns (dimension, representative cycles as rows, reliable flag).

        reliable is False when d + 1 exceeds the window, in which case the
        boundary space from above is incomplete and the numbers are only an
        upper bound ("unreliable at window edge").
        """
        p = self.p
        cycles = linalg.kernel_basis(self.d_matrix(d), p) if d > 0 else \
            linalg.eye(self.dim(0))
        reliable = d + 1 <= self.D
        bmat = self.d_matrix(d + 1)
        span = linalg.IncrementalSpan(self.dim(d), p)
        for j in range(bmat.shape[1]):
            span.add(bmat[:, j])
        reps = [z for z in cycles if span.add(z)]
        reps = np.array(reps, dtype=np.int64).reshape(len(reps), self.dim(d))
        return len(reps), reps, reliable

    def homology_class(self, d: int, v: np.ndarray):
        """Coordinates of the class [v] in the homology(d) representative basis.

        Returns None if v is not a cycle.
        """
        p = self.p
        if ((self.d_matrix(d) @ v) % p).any():
            return None
        _, reps, _ = self.homology(d)
        cols = [reps[i] for i in range(reps.shape[0])]
        bmat = self.d_matrix(d + 1)
        A = np.concatenate([reps.T, bmat], axis=1) if reps.size else bmat
        x = linalg.solve(A, v, p)
        if x is None:
            raise ValueError("cycle not in span of representatives and boundaries")
        return x[: reps.shape[0]] % p


class DGMorphism:
    """Homogeneous degree-k map given by per-degree blocks source_d -> target_{d+k}."""

    def __init__(self, source: FreeDGModule, target: FreeDGModule, degree: int,
                 blocks=None):
        self.source = source
        self.target = target
        self.degree = int(degree)
        self.p = source.p
        if target.p != self.p:
            raise ValueError("characteristic mismatch")
        self.blocks = {}
        if blocks:
            for d, m in blocks.items():
                self.set_block(d, m)

    def defined_degrees(self):
        k = self.degree
        return [d for d in range(self.source.D + 1)
                if 0 <= d + k <= self.target.D]

    def set_block(self, d: int, m):
        m = linalg.as_matrix(m, self.p)
        want = (self.target.dim(d + self.degree), self.source.dim(d))
        if m.shape != want:
            raise ValueError(f"block at degree {d} has shape {m.shape}, want {want}")
        self.blocks[d] = m

    def block(self, d: int) -> np.ndarray:
        if d in self.blocks:
            return self.blocks[d]
        return linalg.zeros(self.target.dim(d + self.degree), self.source.dim(d))

    def apply(self, d: int, v: np.ndarray) -> np.ndarray:
        return (self.block(d) @ (v % self.p)) % self.p

    def is_chain_map(self, through: Optional[int] = None) -> bool:
        """d f = (-1)^k f d on all degrees where every block is in-window."""
        k, p = self.degree, self.p
        sgn = 1 if k % 2 == 0 else p - 1
        hi = self.source.D if through is None else min(through, self.source.D)
        for d in range(1, hi + 1):
            if d + k > self.target.D or d + k < 1:
                continue
            lhs = (self.target.d_matrix(d + k) @ self.block(d)) % p
            rhs = (sgn * (self.block(d - 1) @ self.source.d_matrix(d))) % p
            if (lhs != rhs).any():
                return False
        return True

    def __add__(self, other: "DGMorphism") -> "DGMorphism":
        assert self.degree == other.degree
        out = DGMorphism(self.source, self.target, self.degree)
        for d in set(self.blocks) | set(other.blocks):
            out.set_block(d, (self.block(d) + other.block(d)) % self.p)
        return out

    def scale(self, c: int) -> "DGMorphism":
        out = DGMorphism(self.source, self.target, self.degree)
        for d in self.blocks:
            out.set_block(d, (self.blocks[d] * (c % self.p)) % self.p)
        return out

    def __sub__(self, other):
        return self + other.scale(-1)

    def compose(self, other: "DGMorphism") -> "DGMorphism":
        """self o other."""
        if other.target is not self.source:
            raise ValueError("composition target/source mismatch")
        out = DGMorphism(other.source, self.target, self.degree + other.degree)
        for d in other.defined_degrees():
            mid = d + other.degree
            if 0 <= mid + self.degree <= self.target.D:
                out.set_block(d, (self.block(mid) @ other.block(d)) % self.p)
        return out

    @staticmethod
    def identity(M: FreeDGModule) -> "DGMorphism":
        out = DGMorphism(M, M, 0)
        for d in range(M.D + 1):
            out.set_block(d, linalg.eye(M.dim(d)))
        return out

    @staticmethod
    def zero(source: FreeDGModule, target: FreeDGModule, degree: int) -> "DGMorphism":
        return DGMorphism(source, target, degree)


class Homotopy(DGMorphism):
    """Degree k+1 map connecting two degree-k morphisms f and g.

    Defining equation, asserted by check():  d H + (-1)^k H d = g - f,
    on every degree where all blocks involved are inside the window.
    """

    def __init__(self, source, target, k, f=None, g=None, blocks=None):
        super().__init__(source, target, k + 1, blocks=blocks)
        self.k = int(k)
        self.f = f
        self.g = g

    def defect(self, d: int) -> np.ndarray:
        """Matrix of (d H + (-1)^k H d) - (g - f) at source degree d."""
        p = self.p
        sgn = 1 if self.k % 2 == 0 else p - 1
        term = (self.target.d_matrix(d + self.k + 1) @ self.block(d)) % p
        term = (term + sgn * (self.block(d - 1) @ self.source.d_matrix(d))) % p
        if self.g is not None:
            term = (term - self.g.block(d)) % p
        if self.f is not None:
            term = (term + self.f.block(d)) % p
        return term % p

    def check(self, through: Optional[int] = None) -> bool:
        hi = self.source.D if through is None else min(through, self.source.D)
        for d in range(hi + 1):
            if d + self.k + 1 > self.target.D:
                continue
            if self.defect(d).any():
                return False
        return True


# ---------------------------------------------------------------------------
# constructions


def tensor(M: FreeDGModule, N: FreeDGModule, D: Optional[int] = None,
           name: str = "") -> FreeDGModule:
    """Tensor product truncated to total degree <= D (default: min window)."""
    p = M.p
    if D is None:
        D = max(M.D, N.D)
    D = min(D, M.D + N.D)
    basis = []
    for d in range(D + 1):
        row = []
        for e in range(d + 1):
            if e > M.D or d - e > N.D:
                continue
            for x in M.basis[e]:
                for y in N.basis[d - e]:
                    row.append((x, y))
        basis.append(row)
    mod = FreeDGModule.__new__(FreeDGModule)
    mod.p = p
    mod.basis = basis
    mod.D = D
    mod._index = [{k: i for i, k in enumerate(b)} for b in basis]
    # assemble differential via index lookups
    diff = [None]
    pos = []
    for d in range(D + 1):
        table = {}
        i = 0
        for e in range(d + 1):
            if e > M.D or d - e > N.D:
                continue
            for xi in range(M.dim(e)):
                for yi in range(N.dim(d - e)):
                    table[(e, xi, yi)] = i
                    i += 1
        pos.append(table)
    for d in range(1, D + 1):
        m = linalg.zeros(len(basis[d - 1]), len(basis[d]))
        for (e, xi, yi), col in pos[d].items():
            if e >= 1:
                dm = M.d_matrix(e)[:, xi]
                for xj in np.nonzero(dm)[0]:
                    m[pos[d - 1][(e - 1, int(xj), yi)], col] += int(dm[xj])
            if d - e >= 1:
                sgn = 1 if e % 2 == 0 else -1
                dn = N.d_matrix(d - e)[:, yi]
                for yj in np.nonzero(dn)[0]:
                    m[pos[d - 1][(e, xi, int(yj))], col] += sgn * int(dn[yj])
        diff.append(m % p)
    mod.diff = diff
    if M.aug is not None and N.aug is not None:
        aug = np.zeros(len(basis[0]), dtype=np.int64)
        for (e, xi, yi), col in pos[0].items():
            aug[col] = (M.aug[xi] * N.aug[yi]) % p
        mod.aug = aug
    else:
        mod.aug = None
    mod.coaug = None
    if M.coaug is not None and N.coaug is not None:
        mod.coaug = mod._index[0][(M.basis[0][M.coaug], N.basis[0][N.coaug])]
    mod.symmetry = None
    mod.name = name or f"({M.name})(x)({N.name})"
    mod.validate()
    return mod


def tensor_morphisms(f: DGMorphism, g: DGMorphism, source: FreeDGModule,
                     target: FreeDGModule) -> DGMorphism:
    """f (x) g on prebuilt tensor modules, with the Koszul sign (-1)^{|g| |x|}."""
    p = f.p
    out = DGMorphism(source, target, f.degree + g.degree)
    for d in range(source.D + 1):
        if not (0 <= d + out.degree <= target.D):
            continue
        m = linalg.zeros(target.dim(d + out.degree), source.dim(d))
        for col, (x, y) in enumerate(source.basis[d]):
            # locate degrees of x and y
            e = _degree_of(f.source, x)
            dy = d - e
            if dy > g.source.D or e > f.source.D:
                continue
            xi = f.source.index_of(e, x)
            yi = g.source.index_of(dy, y)
            fx = f.block(e)[:, xi]
            gy = g.block(dy)[:, yi]
            sgn = 1 if (g.degree * e) % 2 == 0 else p - 1
            for a in np.nonzero(fx)[0]:
                for b in np.nonzero(gy)[0]:
                    xkey = f.target.basis[e + f.degree][a]
                    ykey = g.target.basis[dy + g.degree][b]
                    row = target.index_of(d + out.degree, (xkey, ykey))
                    m[row, col] = (m[row, col] + sgn * int(fx[a]) * int(gy[b])) % p
        out.set_block(d, m)
    return out


def _degree_of(M: FreeDGModule, key):
    for d in range(M.D + 1):
        if key in M._index[d]:
            return d
    raise KeyError(key)


def tensor_power(M: FreeDGModule, n: int, D: Optional[int] = None,
                 name: str = "") -> FreeDGModule:
    """n-fold tensor power with flat tuple keys (n = 0 gives the ground field)."""
    p = M.p
    if D is None:
        D = M.D
    if n == 0:
        return FreeDGModule(p, [[()]] + [[] for _ in range(D)],
                            [None] + [linalg.zeros(1 if d == 1 else 0, 0)
                                      for d in range(1, D + 1)],
                            aug=[1], coaug=0, name=name or "k")
    degree_of = {}
    for d in range(M.D + 1):
        for key in M.basis[d]:
            degree_of[key] = d

    basis = [[] for _ in range(D + 1)]

    def fill(prefix, deg, remaining):
        if remaining == 0:
            basis[deg].append(tuple(prefix))
            return
        for e in range(0, D - deg + 1):
            if e > M.D:
                break
            for key in M.basis[e]:
                prefix.append(key)
                fill(prefix, deg + e, remaining - 1)
                prefix.pop()

    fill([], 0, n)
    index = [{k: i for i, k in enumerate(b)} for b in basis]
    diff = [None]
    for d in range(1, D + 1):
        m = linalg.zeros(len(basis[d - 1]), len(basis[d]))
        for col, key in enumerate(basis[d]):
            pre = 0
            for slot in range(n):
                e = degree_of[key[slot]]
                if e >= 1:
                    sgn = 1 if pre % 2 == 0 else p - 1
                    dv = M.d_matrix(e)[:, M.index_of(e, key[slot])]
                    for r in np.nonzero(dv)[0]:
                        nk = key[:slot] + (M.basis[e - 1][int(r)],) + key[slot + 1:]
                        m[index[d - 1][nk], col] = \
                            (m[index[d - 1][nk], col] + sgn * int(dv[r])) % p
                pre += e
        diff.append(m)
    aug = None
    if M.aug is not None:
        aug = np.zeros(len(basis[0]), dtype=np.int64)
        for i, key in enumerate(basis[0]):
            v = 1
            for slot in range(n):
                v = (v * int(M.aug[M.index_of(0, key[slot])])) % p
            aug[i] = v
    coaug = None
    if M.coaug is not None and basis[0]:
        unit_key = tuple(M.basis[0][M.coaug] for _ in range(n))
        coaug = index[0][unit_key]
    return FreeDGModule(p, basis, diff, aug=aug, coaug=coaug,
                        name=name or f"{M.name}^(x){n}")


def tensor_power_degree(M: FreeDGModule, key) -> int:
    d = 0
    for k in key:
        d += _degree_of(M, k)
    return d


def tensor_power_map(fs, src: FreeDGModule, tgt: FreeDGModule,
                     factor: FreeDGModule) -> DGMorphism:
    """(f_1 (x) ... (x) f_n) between tensor powers of ``factor``.

    Each f_i is a DGMorphism from tensor_power(factor, 1) to a tensor power
    of ``factor``; outputs are flattened into tgt's flat keys.  Koszul rule:
    applying f_i to x_i costs (-1)^{deg f_i * (|x_1| + ... + |x_{i-1}|)}.
    """
    p = factor.p
    degs = [f.degree for f in fs]
    out = DGMorphism(src, tgt, sum(degs))
    fdeg = {}
    for d in range(factor.D + 1):
        for key in factor.basis[d]:
            fdeg[key] = d
    for d in range(src.D + 1):
        if not (0 <= d + out.degree <= tgt.D):
            continue
        m = linalg.zeros(tgt.dim(d + out.degree), src.dim(d))
        for col, key in enumerate(src.basis[d]):
            terms = [((), 1)]
            pre = 0
            ok = True
            for slot, f in enumerate(fs):
                e = fdeg[key[slot]]
                sgn = 1 if (degs[slot] * pre) % 2 == 0 else p - 1
                if not (0 <= e + f.degree <= f.target.D):
                    ok = False
                    break
                xv = f.block(e)[:, f.source.index_of(e, (key[slot],))]
                new_terms = []
                for r in np.nonzero(xv)[0]:
                    flat = f.target.basis[e + f.degree][int(r)]
                    for acc, c in terms:
                        new_terms.append((acc + flat,
                                          (c * sgn * int(xv[r])) % p))
                terms = new_terms
                pre += e
                if not terms:
                    break
            if not ok:
                continue
            for flat, c in terms:
                m[tgt.index_of(d + out.degree, flat), col] = \
                    (m[tgt.index_of(d + out.degree, flat), col] + c) % p
        out.set_block(d, m)
    return out


def tensor_power_permutation(pow_mod: FreeDGModule, factor: FreeDGModule,
                             sigma) -> DGMorphism:
    """Right action of sigma on a tensor power: slot i receives factor sigma(i).

    Koszul sign of the induced reordering of graded factors.
    """
    from .algebra import koszul_sign_of_reordering
    p = pow_mod.p
    fdeg = {}
    for d in range(factor.D + 1):
        for key in factor.basis[d]:
            fdeg[key] = d
    out = DGMorphism(pow_mod, pow_mod, 0)
    n = sigma.n
    for d in range(pow_mod.D + 1):
        m = linalg.zeros(pow_mod.dim(d), pow_mod.dim(d))
        for col, key in enumerate(pow_mod.basis[d]):
            new = tuple(key[sigma(i + 1) - 1] for i in range(n))
            degs = [fdeg[k] for k in key]
            positions = [sigma(i + 1) - 1 for i in range(n)]
            sgn = koszul_sign_of_reordering(degs, positions, p)
            m[pow_mod.index_of(d, new), col] = sgn
        out.set_block(d, m)
    return out


@dataclass
class MappingCone:
    f: DGMorphism
    cone: FreeDGModule
    inclusion: DGMorphism          # u : N -> C(f), x -> (0, x)
    source_positions: list = field(default_factory=list)
    target_positions: list = field(default_factory=list)

    def split(self, d: int, v: np.ndarray):
        """Split a cone vector of degree d into (M_{d-l-1} part, N_d part)."""
        M, N = self.f.source, self.f.target
        l = self.f.degree
        sm = np.zeros(M.dim(d - l - 1), dtype=np.int64)
        sn = np.zeros(N.dim(d), dtype=np.int64)
        for i, (tag, _, j) in enumerate(self.cone.basis[d]):
            if tag == "s":
                sm[j] = v[i]
            else:
                sn[j] = v[i]
        return sm, sn

    def embed(self, d: int, m_part, n_part) -> np.ndarray:
        v = self.cone.zero_vector(d)
        for i, (tag, _, j) in enumerate(self.cone.basis[d]):
            v[i] = (m_part[j] if tag == "s" else n_part[j]) % self.cone.p
        return v


def mapping_cone(f: DGMorphism, name: str = "") -> MappingCone:
    """Cone with the block differential of the relative-lifting proof."""
    M, N, l, p = f.source, f.target, f.degree, f.p
    D = min(M.D + l + 1, N.D)
    basis = []
    for d in range(D + 1):
        row = [("t", key, i) for i, key in enumerate(N.basis[d])]
        e = d - l - 1
        if 0 <= e <= M.D:
            row += [("s", key, i) for i, key in enumerate(M.basis[e])]
        basis.append(row)
    diff = [None]
    sgn = -1 if l % 2 == 0 else 1       # -(-1)^l
    for d in range(1, D + 1):
        m = linalg.zeros(len(basis[d - 1]), len(basis[d]))
        idx_prev = {key[:1] + key[2:]: i for i, key in enumerate(basis[d - 1])}
        e = d - l - 1
        for col, (tag, _, j) in enumerate(basis[d]):
            if tag == "t":
                dn = N.d_matrix(d)[:, j]
                for a in np.nonzero(dn)[0]:
                    m[idx_prev[("t", int(a))], col] += int(dn[a])
            else:
                dm = M.d_matrix(e)[:, j]
                for a in np.nonzero(dm)[0]:
                    m[idx_prev[("s", int(a))], col] += sgn * int(dm[a])
                fb = f.block(e)[:, j]
                for a in np.nonzero(fb)[0]:
                    m[idx_prev[("t", int(a))], col] += int(fb[a])
        diff.append(m % p)
    cone = FreeDGModule(p, basis, diff, name=name or f"C({f.source.name}->{f.target.name})")
    u = DGMorphism(N, cone, 0)
    for d in range(min(N.D, D) + 1):
        m = linalg.zeros(cone.dim(d), N.dim(d))
        for i, (tag, _, j) in enumerate(cone.basis[d]):
            if tag == "t":
                m[i, j] = 1
        u.set_block(d, m)
    return MappingCone(f, cone, u)
