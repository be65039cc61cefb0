"""Shared builders for small chain complexes used across the test suite."""

import numpy as np

from lcoalg import linalg
from lcoalg.dgmod import DGMorphism, FreeDGModule


def module_point(p, D=2, name="k"):
    basis = [["u"]] + [[] for _ in range(D)]
    diff = [None] + [linalg.zeros(len(basis[d - 1]), len(basis[d]))
                     for d in range(1, D + 1)]
    return FreeDGModule(p, basis, diff, aug=[1], coaug=0, name=name)


def module_interval(p, D=2, name="I"):
    """Two-term complex k -> k with d = 1 (acyclic)."""
    basis = [["b"], ["t"]] + [[] for _ in range(D - 1)]
    diff = [None, np.array([[1]])] + [linalg.zeros(len(basis[d - 1]), len(basis[d]))
                                      for d in range(2, D + 1)]
    return FreeDGModule(p, basis, diff, name=name)


def module_circle(p, D=2, name="S1"):
    """Chains of the minimal circle: one basis element in degrees 0 and 1."""
    basis = [["v"], ["e"]] + [[] for _ in range(D - 1)]
    diff = [None, np.array([[0]])] + [linalg.zeros(len(basis[d - 1]), len(basis[d]))
                                      for d in range(2, D + 1)]
    return FreeDGModule(p, basis, diff, aug=[1], coaug=0, name=name)


def random_invertible(rng, n, p):
    if n == 0:
        return linalg.zeros(0, 0)
    while True:
        m = np.array([[rng.randrange(p) for _ in range(n)] for _ in range(n)])
        if linalg.rank(m, p) == n:
            return m


def invert(m, p):
    n = m.shape[0]
    if n == 0:
        return m
    aug = np.concatenate([m, linalg.eye(n)], axis=1)
    r, piv = linalg.rref(aug, p)
    assert piv == list(range(n)), "matrix not invertible"
    return r[:, n:]


def random_complex(rng, p, D=3, max_dim=8, extra_acyclic=0, name="R"):
    """Random complex built from elementary pieces conjugated by random bases.

    Pieces: single generators (contribute homology) and intervals (acyclic).
    Returns (module, piece list) where pieces are ('h', d) or ('i', d).
    """
    pieces = []
    for _ in range(rng.randrange(1, 4)):
        pieces.append(("h", rng.randrange(D + 1)))
    for _ in range(rng.randrange(1, 4) + extra_acyclic):
        pieces.append(("i", rng.randrange(1, D + 1)))
    dims = [0] * (D + 1)
    for kind, d in pieces:
        dims[d] += 1
        if kind == "i":
            dims[d - 1] += 1
    while max(dims) > max_dim:
        dims = [min(x, max_dim) for x in dims]
        break
    diff_elem = [None]
    # lay out basis: first the generators of pieces in order
    index = [[] for _ in range(D + 1)]
    cnt = [0] * (D + 1)
    tops, bots = [], []
    for k, (kind, d) in enumerate(pieces):
        t = cnt[d]
        cnt[d] += 1
        tops.append((d, t))
        if kind == "i":
            b = cnt[d - 1]
            cnt[d - 1] += 1
            bots.append((d - 1, b))
        else:
            bots.append(None)
    dims = cnt
    for d in range(1, D + 1):
        m = linalg.zeros(dims[d - 1], dims[d])
        for k, (kind, dd) in enumerate(pieces):
            if kind == "i" and dd == d:
                m[bots[k][1], tops[k][1]] = 1
        diff_elem.append(m)
    U = [random_invertible(rng, dims[d], p) for d in range(D + 1)]
    Ui = [invert(u, p) for u in U]
    diff = [None] + [(U[d - 1] @ diff_elem[d] @ Ui[d]) % p for d in range(1, D + 1)]
    basis = [[f"{name}{d}_{i}" for i in range(dims[d])] for d in range(D + 1)]
    mod = FreeDGModule(p, basis, diff, name=name)
    mod._pieces = pieces
    mod._U = U
    mod._Ui = Ui
    mod._tops = tops
    mod._bots = bots
    return mod


def random_chain_map(rng, L, M, p):
    """Random degree-0 chain map L -> M using L's elementary pieces."""
    blocks = {d: linalg.zeros(M.dim(d), L.dim(d)) for d in range(L.D + 1)}
    for k, (kind, d) in enumerate(L._pieces):
        if kind == "i":
            v = np.array([rng.randrange(p) for _ in range(M.dim(d))])
            top_col = L._tops[k][1]
            bot_col = L._bots[k][1]
            blocks[d][:, top_col] = v
            if M.dim(d - 1):
                blocks[d - 1][:, bot_col] = (M.d_matrix(d) @ v) % p
        else:
            # single generator in degree d: needs a cycle of M_d
            cyc = linalg.kernel_basis(M.d_matrix(d), p) if d > 0 else \
                linalg.eye(M.dim(d))
            if cyc.shape[0]:
                v = np.zeros(M.dim(d), dtype=np.int64)
                for row in cyc:
                    v = (v + rng.randrange(p) * row) % p
                blocks[d][:, L._tops[k][1]] = v
    f = DGMorphism(L, M, 0)
    for d in range(L.D + 1):
        f.set_block(d, (blocks[d] @ L._Ui[d]) % p)
    assert f.is_chain_map()
    return f


def random_quasi_iso(rng, p, D=3, name="Q"):
    """(f, M, N) with f : M -> N a random quasi-isomorphism."""
    M = random_complex(rng, p, D=D, name=name + "src")
    extras = [rng.randrange(1, D + 1) for _ in range(rng.randrange(1, 3))]
    # explicit slot layout: M-part, then bottoms of intervals from above,
    # then tops of intervals at this degree
    slots = []
    for e in range(D + 1):
        row = [("m", i) for i in range(M.dim(e))]
        row += [("bot", k) for k, dd in enumerate(extras) if dd == e + 1]
        row += [("top", k) for k, dd in enumerate(extras) if dd == e]
        slots.append(row)
    pos = [{s: i for i, s in enumerate(row)} for row in slots]
    dims = [len(row) for row in slots]
    diff_elem = [None]
    for d in range(1, D + 1):
        m = linalg.zeros(dims[d - 1], dims[d])
        for col, slot in enumerate(slots[d]):
            if slot[0] == "m":
                dm = M.d_matrix(d)[:, slot[1]]
                for r in np.nonzero(dm)[0]:
                    m[pos[d - 1][("m", int(r))], col] = int(dm[r])
            elif slot[0] == "top":
                m[pos[d - 1][("bot", slot[1])], col] = 1
        diff_elem.append(m)
    V = [random_invertible(rng, dims[d], p) for d in range(D + 1)]
    Vi = [invert(v, p) for v in V]
    diff = [None] + [(V[d - 1] @ diff_elem[d] @ Vi[d]) % p for d in range(1, D + 1)]
    basis = [[f"{name}{d}_{i}" for i in range(dims[d])] for d in range(D + 1)]
    N = FreeDGModule(p, basis, diff, name=name)
    f = DGMorphism(M, N, 0)
    for d in range(D + 1):
        inc = linalg.zeros(dims[d], M.dim(d))
        for i in range(M.dim(d)):
            inc[pos[d][("m", i)], i] = 1
        f.set_block(d, (V[d] @ inc) % p)
    assert f.is_chain_map()
    return f, M, N


def restrict(L, cut, name=None):
    """Subcomplex spanned by degrees < cut, same basis names."""
    basis = [L.basis[d] if d < cut else [] for d in range(L.D + 1)]
    diff = [None]
    for d in range(1, L.D + 1):
        if d < cut:
            diff.append(L.d_matrix(d))
        else:
            diff.append(linalg.zeros(len(basis[d - 1]), len(basis[d])))
    return FreeDGModule(L.p, basis, diff, name=name or (L.name + "'"))
