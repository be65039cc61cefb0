"""Dense exact linear algebra over a prime field F_p.

Matrices are numpy int64 arrays with entries reduced mod p.  Elimination is
deterministic (leftmost pivot column, first nonzero row) so that kernels,
solutions and homology representatives are reproducible across runs.  For
p = 2 a bit-packed elimination path keeps desk-scale problems (a few
thousand rows/columns) fast; it implements the identical pivot rule.
"""

from __future__ import annotations

import numpy as np

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def check_prime(p: int) -> int:
    if not is_prime(p):
        raise ValueError(f"characteristic {p} is not prime")
    return p


def inv_mod(a: int, p: int) -> int:
    return pow(int(a) % p, p - 2, p)


def as_matrix(A, p: int) -> np.ndarray:
    M = np.asarray(A, dtype=np.int64) % p
    if M.ndim != 2:
        raise ValueError("matrix expected")
    return M


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.int64)


def eye(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


# ---------------------------------------------------------------------------
# bit-packed GF(2) elimination


def _pack_rows(M: np.ndarray) -> np.ndarray:
    return np.packbits(M.astype(np.uint8), axis=1, bitorder="little")


def _rref2(M: np.ndarray):
    """Packed RREF over GF(2); returns (dense rref, pivot column list)."""
    m, n = M.shape
    if m == 0 or n == 0:
        return M.copy(), []
    R = _pack_rows(M)
    pivots = []
    row = 0
    for col in range(n):
        byte, bit = col >> 3, 1 << (col & 7)
        block = R[row:, byte] & bit
        nz = np.nonzero(block)[0]
        if nz.size == 0:
            continue
        piv = row + nz[0]
        if piv != row:
            R[[row, piv]] = R[[piv, row]]
        hit = np.nonzero(R[:, byte] & bit)[0]
        hit = hit[hit != row]
        if hit.size:
            R[hit] ^= R[row]
        pivots.append(col)
        row += 1
        if row == m:
            break
    out = np.unpackbits(R, axis=1, bitorder="little")[:, :n].astype(np.int64)
    return out, pivots


# ---------------------------------------------------------------------------
# generic mod-p elimination


def _rrefp(M: np.ndarray, p: int):
    R = M.copy() % p
    m, n = R.shape
    pivots = []
    row = 0
    for col in range(n):
        if row == m:
            break
        nz = np.nonzero(R[row:, col])[0]
        if nz.size == 0:
            continue
        piv = row + nz[0]
        if piv != row:
            R[[row, piv]] = R[[piv, row]]
        R[row] = (R[row] * inv_mod(R[row, col], p)) % p
        hit = np.nonzero(R[:, col])[0]
        hit = hit[hit != row]
        if hit.size:
            R[hit] = (R[hit] - np.outer(R[hit, col], R[row])) % p
        pivots.append(col)
        row += 1
    return R, pivots


def rref(M, p: int):
    """Reduced row echelon form with leftmost-pivot rule.

    Returns (R, pivots) where pivots lists the pivot columns in order.
    """
    M = as_matrix(M, p)
    if p == 2:
        return _rref2(M)
    return _rrefp(M, p)


def rank(M, p: int) -> int:
    return len(rref(M, p)[1])


def solve(A, b, p: int):
    """One solution x of A x = b over F_p, or None if inconsistent.

    Deterministic: free variables are set to zero, elimination uses the
    leftmost-pivot rule.  Inconsistency is a value, not an error.
    """
    A = as_matrix(A, p)
    b = np.asarray(b, dtype=np.int64) % p
    m, n = A.shape
    if b.shape != (m,):
        raise ValueError("dimension mismatch in solve")
    aug = np.concatenate([A, b.reshape(m, 1)], axis=1)
    R, pivots = rref(aug, p)
    if n in pivots:
        return None
    x = np.zeros(n, dtype=np.int64)
    for r, c in enumerate(pivots):
        x[c] = R[r, n]
    return x


def kernel_basis(M, p: int) -> np.ndarray:
    """Rows span ker(M) (as row vectors x with M x = 0); deterministic."""
    M = as_matrix(M, p)
    m, n = M.shape
    R, pivots = rref(M, p)
    free = [c for c in range(n) if c not in set(pivots)]
    out = np.zeros((len(free), n), dtype=np.int64)
    for i, fc in enumerate(free):
        out[i, fc] = 1
        for r, c in enumerate(pivots):
            out[i, c] = (-R[r, fc]) % p
    return out


def row_space_basis(M, p: int) -> np.ndarray:
    R, pivots = rref(M, p)
    return R[: len(pivots)]


def in_row_space(v, M, p: int) -> bool:
    M = as_matrix(M, p)
    v = np.asarray(v, dtype=np.int64).reshape(1, -1) % p
    if M.shape[0] == 0:
        return not v.any()
    return rank(M, p) == rank(np.concatenate([M, v]), p)


class IncrementalSpan:
    """Row space accumulator with membership tests (used by orbit sweeps)."""

    def __init__(self, dim: int, p: int):
        self.p = p
        self.dim = dim
        self._rows = np.zeros((0, dim), dtype=np.int64)

    @property
    def rank(self) -> int:
        return self._rows.shape[0]

    def contains(self, v) -> bool:
        v = np.asarray(v, dtype=np.int64) % self.p
        return bool(self._reduce(v) is None)

    def _reduce(self, v):
        """Reduce v against stored rref rows; None if it reduces to zero."""
        p = self.p
        v = v.copy() % p
        for row in self._rows:
            lead = np.nonzero(row)[0]
            if lead.size == 0:
                continue
            c = lead[0]
            if v[c]:
                v = (v - v[c] * inv_mod(row[c], p) * row) % p
        nz = np.nonzero(v)[0]
        if nz.size == 0:
            return None
        return v * inv_mod(v[nz[0]], p) % p

    def add(self, v) -> bool:
        """Insert v; returns True if the span grew."""
        red = self._reduce(np.asarray(v, dtype=np.int64))
        if red is None:
            return False
        rows = np.concatenate([self._rows, red.reshape(1, -1)])
        self._rows = row_space_basis(rows, self.p)
        return True
