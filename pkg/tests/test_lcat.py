import random

import pytest

from lcoalg.lcat import (PartialMap, compose, decompose, degeneracy,
                         evaluate_word, face, generator, pm_sum, retraction,
                         total_collapse, twist, zeta)


def test_zeta1_d1_is_identity_of_0():
    d1 = face(0, 1)
    z1 = zeta(0, 1)
    assert compose(z1, d1) == PartialMap.identity(0)
    # z_1 : [1] -> [0] coincides with the universal degeneracy
    assert z1 == degeneracy(1, 1)


@pytest.mark.parametrize("n,i", [(1, 1), (1, 2), (2, 1), (2, 2), (2, 3), (3, 2)])
def test_zeta_retracts_face(n, i):
    assert compose(zeta(n, i), face(n, i)) == PartialMap.identity(n)


def test_zeta_is_unique_minimal_retraction():
    """Brute force: the only retraction with domain = image of d_i."""
    from itertools import product
    for n, i in [(1, 1), (2, 2)]:
        d = face(n, i)
        img = frozenset(d.mapping.values())
        found = []
        for values in product(range(1, n + 1), repeat=len(img)):
            cand = PartialMap(n + 1, n, dict(zip(sorted(img), values)))
            if compose(cand, d) == PartialMap.identity(n):
                found.append(cand)
        assert found == [zeta(n, i)]


def test_compose_with_empty():
    f = PartialMap.empty(3, 2)
    g = PartialMap.identity(2)
    assert compose(g, f) == f
    h = PartialMap(2, 3, {1: 2})
    assert compose(h, PartialMap.empty(1, 2)) == PartialMap.empty(1, 3)


def test_face_formula():
    d2 = face(2, 2)
    assert d2.mapping == {1: 1, 2: 3}


def test_s1_total_collapse():
    s1 = degeneracy(2, 1)
    assert s1.is_total() and s1.mapping == {1: 1, 2: 1}
    assert s1 == total_collapse(2)


def test_zeta2_of_d2_on_2():
    z = zeta(2, 2)
    assert z.domain == frozenset({1, 3})
    assert z.mapping == {1: 1, 3: 2}


def test_sum_identities():
    assert pm_sum(PartialMap.identity(1), PartialMap.identity(1)) == \
        PartialMap.identity(2)


def test_sum_face_shift():
    lhs = pm_sum(face(0, 1), PartialMap.identity(1))
    # evaluate both sides pointwise: [1] -> [2] keeping 1 -> 2
    assert lhs == PartialMap(1, 2, {1: 2})


def test_sum_strictly_associative():
    rng = random.Random(3)
    for _ in range(20):
        maps = [random_partial(rng, rng.randrange(0, 3), rng.randrange(0, 3))
                for _ in range(3)]
        a, b, c = maps
        assert pm_sum(pm_sum(a, b), c) == pm_sum(a, pm_sum(b, c))
        assert pm_sum(a, PartialMap.identity(0)) == a
        assert pm_sum(PartialMap.identity(0), a) == a


def test_compose_associative_random():
    rng = random.Random(9)
    for _ in range(50):
        n, m, k, l = (rng.randrange(0, 4) for _ in range(4))
        f = random_partial(rng, n, m)
        g = random_partial(rng, m, k)
        h = random_partial(rng, k, l)
        assert compose(h, compose(g, f)) == compose(compose(h, g), f)


def random_partial(rng, n, m):
    mapping = {}
    for i in range(1, n + 1):
        if m and rng.random() < 0.7:
            mapping[i] = rng.randrange(1, m + 1)
    return PartialMap(n, m, mapping)


def test_decompose_identity_empty():
    assert decompose(PartialMap.identity(3)) == []
    assert evaluate_word([], 3) == PartialMap.identity(3)


def test_decompose_twist_single_generator():
    word = decompose(twist(2))
    assert word == [("twist", 2, 1)]


def test_decompose_roundtrip_random():
    rng = random.Random(17)
    for _ in range(200):
        n, m = rng.randrange(0, 5), rng.randrange(0, 4)
        f = random_partial(rng, n, m)
        word = decompose(f)
        assert evaluate_word(word, n) == f


def test_decompose_roundtrip_4_to_3():
    rng = random.Random(23)
    for _ in range(50):
        f = random_partial(rng, 4, 3)
        assert evaluate_word(decompose(f), 4) == f


def test_retraction_rejects_non_injective():
    with pytest.raises(ValueError):
        retraction(degeneracy(2, 1))


def test_generator_index_errors():
    with pytest.raises(ValueError):
        face(2, 4)
    with pytest.raises(ValueError):
        degeneracy(3, 3)
    with pytest.raises(ValueError):
        generator("nope")


def test_pretty():
    z = zeta(2, 2)
    assert z.pretty() == "[3→2: 1↦1, 3↦2]"
