import random
from math import comb

import pytest

from conftest import maximal_ideal, module_family, residue_field, square_quotient
from oracles import complex_homology_dim, hilbert_oracle, koszul_betti
from ncres.ring import AlgebraError, RingContext, parse_polynomial
from ncres.groebner import FreeModuleMap
from ncres.modules import (FPModule, INFINITE, ModuleMorphism, cokernel,
                           cokernel_with_projection, direct_sum,
                           direct_sum_with_maps, free_module, homology, image,
                           kernel, kernel_with_inclusion, make_module,
                           minimal_generator_indices, minimal_presentation,
                           minimal_resolution, syzygy)


def test_hilbert_function_matches_oracle(ctx2, ctx3):
    for ctx in (ctx2, ctx3):
        for name, m in module_family(ctx).items():
            engine = m.hilbert_function(5)
            oracle = [hilbert_oracle(m.gen_degrees,
                                     m.relations.column_vecs(), ctx, t)
                      for t in range(6)]
            assert engine == oracle, name


def test_hilbert_shuffle_invariance(ctx2):
    """Permuting relation columns must not change the module."""
    rng = random.Random(5)
    m = square_quotient(ctx2)
    base = m.hilbert_function(5)
    cols = list(m.relations.cols)
    degs = list(m.relations.source_degrees)
    for _ in range(4):
        order = list(range(len(cols)))
        rng.shuffle(order)
        rel = FreeModuleMap(ctx2, tuple(degs[j] for j in order),
                            m.gen_degrees, [cols[j] for j in order])
        assert make_module(m.gen_degrees, rel, ctx2).hilbert_function(5) == base


def test_k_dimension(ctx2):
    fam = module_family(ctx2)
    assert fam["k"].k_dimension() == 1
    assert fam["R/m2"].k_dimension() == 3
    assert fam["R"].k_dimension() is INFINITE
    assert fam["m"].k_dimension() is INFINITE


def test_standard_monomials_sorted(ctx2):
    m = square_quotient(ctx2)
    std = m.standard_monomials()
    assert std == [(0, (0, 0)), (0, (0, 1)), (0, (1, 0))]


def test_twist(ctx2):
    m = square_quotient(ctx2)
    up = m.twist(2)
    assert up.hilbert_function(4) == [0, 0] + m.hilbert_function(2)
    assert up.twist(-2) == m


def test_module_equality_and_zero(ctx2):
    k = residue_field(ctx2)
    assert k == residue_field(ctx2)
    assert not k.is_zero()
    x = ctx2.variable("x")
    one = ctx2.one()
    z = make_module([0], FreeModuleMap(ctx2, (0,), (0,), [[one]]), ctx2)
    assert z.is_zero()


def test_morphism_well_definedness(ctx2):
    k = residue_field(ctx2)
    R = free_module(ctx2)
    x = ctx2.variable("x")
    # R -> k sending 1 to class of 1: fine
    ModuleMorphism(R, k, FreeModuleMap.identity(ctx2, (0,)))
    # k -> R sending class of 1 to 1 is not well defined (x * 1 != 0 in R)
    with pytest.raises(AlgebraError):
        ModuleMorphism(k, R, FreeModuleMap.identity(ctx2, (0,)))
    # but k -> k is
    ident = ModuleMorphism.identity(k)
    assert ident.compose(ident) == ident


def test_direct_sum_hilbert(ctx2):
    a = residue_field(ctx2)
    b = square_quotient(ctx2).twist(1)
    s, inc_a, inc_b, pr_a, pr_b = direct_sum_with_maps(a, b)
    ha = a.hilbert_function(5)
    hb = b.hilbert_function(5)
    assert s.hilbert_function(5) == [u + v for u, v in zip(ha, hb)]
    assert pr_a.compose(inc_a) == ModuleMorphism.identity(a)
    assert pr_b.compose(inc_b) == ModuleMorphism.identity(b)
    assert pr_a.compose(inc_b).is_zero()


def test_kernel_image_cokernel_euler(ctx2):
    """dim source_t = dim ker_t + dim im_t, and dim coker = dim target - im."""
    R = free_module(ctx2)
    m2 = square_quotient(ctx2)
    proj = ModuleMorphism(R, m2, FreeModuleMap.identity(ctx2, (0,)))
    ker, inc = kernel_with_inclusion(proj)
    img = image(proj)
    cok = cokernel(proj)
    for t in range(6):
        hs = R.hilbert_function(t)[t]
        hk = ker.hilbert_function(t)[t]
        hi = img.hilbert_function(t)[t]
        ht = m2.hilbert_function(t)[t]
        hc = cok.hilbert_function(t)[t]
        assert hs == hk + hi
        assert hc == ht - hi
    assert cok.is_zero()
    assert proj.compose(inc).is_zero()
    # kernel of a surjection R -> R/m^2 is m^2
    assert ker.hilbert_function(4) == [0, 0, 3, 4, 5]


def test_homology_of_exact_pair(ctx3):
    k = residue_field(ctx3)
    res = minimal_resolution(k, 3)
    F = [free_module(ctx3, (0,))] + \
        [free_module(ctx3, d.source_degrees) for d in res.maps]
    d1 = ModuleMorphism(F[1], F[0], res.maps[0])
    d2 = ModuleMorphism(F[2], F[1], res.maps[1])
    assert d1.compose(d2).is_zero()
    assert homology(d1, d2).is_zero()
    # but H_0 of the complex 0 -> F1 -> F0 is k
    zero_in = ModuleMorphism.zero(free_module(ctx3, ()), F[1], 0)
    h = cokernel(d1)
    assert h.hilbert_function(3) == [1, 0, 0, 0]


def test_minimal_presentation(ctx2):
    x, y = ctx2.variable("x"), ctx2.variable("y")
    one = ctx2.one()
    # redundant generator: second gen equals x * first
    rel = FreeModuleMap(ctx2, (1, 2), (0, 1),
                        [[x, -one], [x * y, -y]])
    m = make_module([0, 1], rel, ctx2)
    m_min, to_min, from_min = minimal_presentation(m)
    assert m_min.rank == 1
    assert m_min.hilbert_function(5) == m.hilbert_function(5)
    assert to_min.compose(from_min) == ModuleMorphism.identity(m_min)
    assert not any(f.constant_term() for col in m_min.relations.cols
                   for f in col)


def test_minimal_generator_indices(ctx2):
    x = ctx2.variable("x")
    one = ctx2.one()
    rel = FreeModuleMap(ctx2, (1,), (0, 1), [[x, -one]])
    m = make_module([0, 1], rel, ctx2)
    assert minimal_generator_indices(m) == [0]


def test_koszul_betti_numbers(ctx1, ctx2, ctx3):
    """[DERIVED] binomial Betti numbers of k for r = 1, 2, 3."""
    for ctx in (ctx1, ctx2, ctx3):
        r = ctx.nvars
        k = residue_field(ctx)
        res = minimal_resolution(k, r + 1)
        assert res.betti == koszul_betti(r)
        assert res.complete
        assert syzygy(k, r).relations.source_rank == 0
        assert syzygy(k, r).rank == 1
        assert syzygy(k, r + 1).is_zero()


def test_resolution_is_exact_degreewise(ctx2):
    """Dense-homology oracle confirms exactness of computed resolutions."""
    for m in (square_quotient(ctx2), maximal_ideal(ctx2)):
        res = minimal_resolution(m, ctx2.nvars + 1)
        degrees = [res.min_module.gen_degrees] + \
            [d.source_degrees for d in res.maps]
        # chain complex: homology at interior spots must vanish
        co_maps = []
        for d in reversed(res.maps):
            co_maps.append([[d.cols[j][i] for i in range(d.target_rank)]
                            for j in range(d.source_rank)])
        co_degrees = list(reversed(degrees))
        for i in range(1, len(co_degrees) - 1):
            for t in range(7):
                assert complex_homology_dim(co_degrees, co_maps, i, t,
                                            ctx2) == 0


def test_resolution_minimality(ctx3):
    m = square_quotient(ctx3)
    res = minimal_resolution(m, 3)
    for d in res.maps:
        assert not any(f.constant_term() for col in d.cols for f in col)


def test_syzygy_of_free_and_negatives(ctx2):
    R = free_module(ctx2)
    assert syzygy(R, 1).is_zero()
    with pytest.raises(AlgebraError):
        syzygy(R, -1)


def test_syzygy_of_maximal_ideal_shifts(ctx2):
    k = residue_field(ctx2)
    m = maximal_ideal(ctx2)
    # omega m = omega^2 k
    assert syzygy(m, 1).hilbert_function(5) == \
        syzygy(k, 2).hilbert_function(5)
