import random

import numpy as np
import pytest

from lcoalg import linalg


@pytest.mark.parametrize("p", [2, 3, 5])
def test_solve_identity(p):
    A = linalg.eye(4)
    b = np.array([1, 0, p - 1, 2]) % p
    x = linalg.solve(A, b, p)
    assert ((A @ x - b) % p == 0).all()


def test_solve_zero_inconsistent():
    A = linalg.zeros(3, 3)
    assert linalg.solve(A, np.array([1, 0, 0]), 2) is None


@pytest.mark.parametrize("p", [2, 3])
def test_solve_random_plugback(p):
    rng = random.Random(11 + p)
    for _ in range(25):
        A = np.array([[rng.randrange(p) for _ in range(10)] for _ in range(8)])
        x0 = np.array([rng.randrange(p) for _ in range(10)])
        b = (A @ x0) % p
        x = linalg.solve(A, b, p)
        assert x is not None
        assert ((A @ x - b) % p == 0).all()


@pytest.mark.parametrize("p", [2, 3])
def test_none_means_outside_column_space(p):
    rng = random.Random(5)
    hits = 0
    for _ in range(60):
        A = np.array([[rng.randrange(p) for _ in range(4)] for _ in range(6)])
        b = np.array([rng.randrange(p) for _ in range(6)])
        x = linalg.solve(A, b, p)
        if x is None:
            hits += 1
            aug = np.concatenate([A, b.reshape(-1, 1)], axis=1)
            assert linalg.rank(aug, p) == linalg.rank(A, p) + 1
        else:
            assert ((A @ x - b) % p == 0).all()
    assert hits > 0


@pytest.mark.parametrize("p", [2, 3])
def test_kernel_basis(p):
    rng = random.Random(7)
    A = np.array([[rng.randrange(p) for _ in range(9)] for _ in range(5)])
    K = linalg.kernel_basis(A, p)
    assert K.shape[0] == 9 - linalg.rank(A, p)
    for v in K:
        assert ((A @ v) % p == 0).all()
    assert linalg.rank(K, p) == K.shape[0]


def test_packed_and_generic_agree_mod2():
    rng = random.Random(3)
    for _ in range(10):
        A = np.array([[rng.randrange(2) for _ in range(17)] for _ in range(12)])
        r2, piv2 = linalg._rref2(A.copy())
        rp, pivp = linalg._rrefp(A.copy(), 2)
        assert piv2 == pivp
        assert (r2 % 2 == rp % 2).all()


def test_incremental_span():
    span = linalg.IncrementalSpan(4, 3)
    assert span.add([1, 0, 0, 0])
    assert span.add([1, 1, 0, 0])
    assert not span.add([2, 1, 0, 0])
    assert span.contains([0, 2, 0, 0])
    assert not span.contains([0, 0, 1, 0])
