import random

import numpy as np
import pytest

from helpers import (module_circle, module_interval, random_chain_map,
                     random_complex, random_quasi_iso, restrict)
from lcoalg import linalg
from lcoalg.dgmod import DGMorphism, Homotopy, mapping_cone
from lcoalg.lifting import (BasisPartition, LiftError, extend_null_homotopy,
                            induced_homology_map, is_quasi_iso, relative_lift)


def test_extend_trivial_zero_map():
    M = module_circle(3)
    N = module_interval(3)
    f = DGMorphism.zero(M, N, 0)
    H = extend_null_homotopy(f, BasisPartition.all_new(M), None)
    assert all(not H.block(d).any() for d in range(M.D + 1))
    assert H.check()


def test_extend_plugback_into_acyclic_cone():
    rng = random.Random(31)
    for p in (2, 3):
        for _ in range(10):
            M = random_complex(rng, p, D=3, name="L")
            N = random_complex(rng, p, D=3, name="Nsrc")
            fq, _, target = random_quasi_iso(rng, p, D=3)
            cone = mapping_cone(fq)
            phi = random_chain_map(rng, M, fq.target, p)
            u_phi = cone.inclusion.compose(phi)
            H = extend_null_homotopy(u_phi, BasisPartition.all_new(M), None)
            assert H.check()


def test_extend_no_extension_needed():
    """L' = L returns h unchanged."""
    rng = random.Random(5)
    p = 2
    M = random_complex(rng, p, D=2, name="L")
    fq, _, _ = random_quasi_iso(rng, p, D=2)
    cone = mapping_cone(fq)
    phi = random_chain_map(rng, M, fq.target, p)
    u_phi = cone.inclusion.compose(phi)
    H = extend_null_homotopy(u_phi, BasisPartition.all_new(M), None)
    part = BasisPartition.by_degree_cut(M, M.D + 1)  # everything in L'
    H2 = extend_null_homotopy(u_phi, part, H)
    for d in range(M.D + 1):
        assert (H.block(d) == H2.block(d)).all()


def test_extend_unsolvable_names_degree():
    p = 2
    M = module_circle(p, D=2)
    N = module_circle(p, D=2)
    f = DGMorphism.identity(M)  # not null-homotopic: H(S1) != 0
    with pytest.raises(LiftError) as err:
        extend_null_homotopy(f, BasisPartition.all_new(M), None)
    assert "degree" in str(err.value)


def test_relative_lift_identity_case():
    rng = random.Random(41)
    p = 3
    L = random_complex(rng, p, D=3, name="L")
    M = random_complex(rng, p, D=3, name="M")
    f = DGMorphism.identity(M)
    phi = random_chain_map(rng, L, M, p)
    res = relative_lift(f, phi, BasisPartition.all_new(L))
    assert res.alpha.is_chain_map()
    assert res.homotopy.check()


@pytest.mark.parametrize("p", [2, 3])
def test_relative_lift_randomized_postconditions(p):
    rng = random.Random(100 + p)
    for _ in range(10):
        f, M, N = random_quasi_iso(rng, p, D=3)
        L = random_complex(rng, p, D=3, name="L")
        psi = random_chain_map(rng, L, M, p)
        phi = f.compose(psi)
        res = relative_lift(f, phi, BasisPartition.all_new(L))
        alpha, H = res.alpha, res.homotopy
        assert alpha.is_chain_map()
        # f alpha - phi = -(d H + H d) exactly, i.e. H connects f alpha to phi
        assert H.f is not None and H.check()


@pytest.mark.parametrize("p", [2, 3])
def test_relative_lift_extension_property(p):
    rng = random.Random(200 + p)
    for _ in range(6):
        f, M, N = random_quasi_iso(rng, p, D=3)
        L = random_complex(rng, p, D=3, name="L")
        psi = random_chain_map(rng, L, M, p)
        phi = f.compose(psi)
        cut = 2
        Lsub = restrict(L, cut)
        phi_sub = DGMorphism(Lsub, N, 0,
                             {d: phi.block(d) if d < cut else
                              linalg.zeros(N.dim(d), 0) for d in range(L.D + 1)})
        first = relative_lift(f, phi_sub, BasisPartition.all_new(Lsub))
        alpha_prime = DGMorphism(L, M, 0)
        h_prime = Homotopy(L, N, 0)
        for d in range(L.D + 1):
            am = linalg.zeros(M.dim(d), L.dim(d))
            hm = linalg.zeros(N.dim(d + 1), L.dim(d)) if d + 1 <= N.D else None
            if d < cut:
                am[:, : Lsub.dim(d)] = first.alpha.block(d)
                if hm is not None:
                    hm[:, : Lsub.dim(d)] = first.homotopy.block(d)
            alpha_prime.set_block(d, am)
            if hm is not None:
                h_prime.set_block(d, hm)
        part = BasisPartition.by_degree_cut(L, cut)
        res = relative_lift(f, phi, part, alpha_prime=alpha_prime, h_prime=h_prime)
        assert res.alpha.is_chain_map()
        assert res.homotopy.check()
        for d in range(cut):
            assert (res.alpha.block(d)[:, : Lsub.dim(d)] ==
                    first.alpha.block(d)).all()
            if d + 1 <= N.D:
                assert (res.homotopy.block(d)[:, : Lsub.dim(d)] ==
                        first.homotopy.block(d)).all()


def test_is_quasi_iso_basic():
    p = 3
    M = module_circle(p, D=3)
    assert is_quasi_iso(DGMorphism.identity(M), 2)
    f = DGMorphism.zero(M, M, 0)
    assert not is_quasi_iso(f, 1)


def test_random_quasi_iso_detected():
    rng = random.Random(77)
    for p in (2, 3):
        for _ in range(5):
            f, M, N = random_quasi_iso(rng, p, D=3)
            assert is_quasi_iso(f, 2)


def test_cone_acyclic_iff_quasi_iso_crosscheck():
    rng = random.Random(88)
    p = 2
    f, M, N = random_quasi_iso(rng, p, D=3)
    cone = mapping_cone(f).cone
    for d in range(1, 3):
        assert cone.homology(d)[0] == 0


def test_induced_homology_map_shapes():
    p = 3
    M = module_circle(p, D=3)
    m, a, b = induced_homology_map(DGMorphism.identity(M), 1)
    assert (a, b) == (1, 1) and m[0, 0] == 1
