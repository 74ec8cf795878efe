import math

import pytest

from conftest import closure
from verikit.errors import HypothesisViolated, InvalidFrame
from verikit.linmod import FpSubmodule, diag_module
from verikit.perm_core import PermGroup, cyclic_group, dihedral_group, pconj, pid, pmul, symmetric_group
from verikit.suites import aug_s4_closure_instance, cp_wreath_closure_frame
from verikit.wreath import (ImprimitiveFrame, block_kernel, block_perm_standard, closure_lower_bound,
                            contains_power, cycle_coordinates, direct_product_embedding, embed_tuple,
                            indecomposable_closure, iterated_wreath_bounds, ritt_obstruction, sign_module,
                            socle_module, wreath_product)


def brute_kernel(G, F):
    return {g for g in closure(G.raw_generators, G.degree)
            if all({g[x] for x in c} == set(c) for c in F.blocks.blocks)}


def c2_wr_c3():
    return wreath_product(cyclic_group(2), cyclic_group(3))


def x6():
    # X^6 = X^2 o X^3 with contiguous blocks of size 2
    sigma = block_perm_standard((1, 2, 0), 2)
    t = embed_tuple([(1, 0), pid(2), pid(2)], 2)
    return PermGroup(6, [pmul(t, sigma)])


D4_ON_PAIRS = PermGroup(4, [(1, 0, 3, 2), (2, 3, 0, 1), (1, 0, 2, 3)])


@pytest.mark.parametrize("G, frame", [
    (c2_wr_c3(), lambda G: ImprimitiveFrame.standard(G, 2)),
    (D4_ON_PAIRS, lambda G: ImprimitiveFrame.standard(G, 2)),
    (dihedral_group(6), lambda G: ImprimitiveFrame.detect(G, 3)),
    (wreath_product(symmetric_group(3), cyclic_group(2)), lambda G: ImprimitiveFrame.standard(G, 3)),
])
def test_block_kernel_matches_brute_force(G, frame):
    F = frame(G)
    assert set(block_kernel(F).elements()) == brute_kernel(G, F)


def test_wreath_order():
    assert c2_wr_c3().order() == 2 ** 3 * 3
    assert wreath_product(symmetric_group(3), cyclic_group(2)).order() == 36 * 2


def test_standard_frame_rejects_non_blocks():
    with pytest.raises(InvalidFrame):
        ImprimitiveFrame.standard(PermGroup(4, [(1, 2, 3, 0)]), 2)


def test_socle_module_full_and_diagonal():
    F = ImprimitiveFrame.standard(c2_wr_c3(), 2)
    assert socle_module(F).module == FpSubmodule.full(2, 3)
    G = x6()
    assert G.order() == 6
    F = ImprimitiveFrame.standard(G, 2)
    sm = socle_module(F, cycle_element=G.raw_generators[0])
    assert sm.module == diag_module(2, 3)


def test_cycle_coordinates_rotate_under_the_cycle():
    G = c2_wr_c3()
    F = ImprimitiveFrame.standard(G, 2)
    x = next(g for g in G.elements() if len(set(F.blocks.block_action(g))) == 3
             and F.blocks.block_action(g) != (0, 1, 2) and _is_full_cycle(g))
    cells, gens = cycle_coordinates(F, x, (1, 0))
    assert sorted(cells) == [0, 1, 2]
    for k in range(2):
        assert pconj(gens[k], x) == gens[k + 1]


def _is_full_cycle(g):
    x, n = 0, 0
    while True:
        x = g[x]
        n += 1
        if x == 0:
            return n == len(g)


def test_sign_module_of_dihedral_wreath():
    G = wreath_product(dihedral_group(3), cyclic_group(2))
    F = ImprimitiveFrame.standard(G, 3)
    assert sign_module(F) == FpSubmodule.full(2, 2)


def test_contains_power():
    F = ImprimitiveFrame.standard(wreath_product(symmetric_group(3), cyclic_group(2)), 3)
    assert contains_power(F, block_kernel(F), symmetric_group(3))


def test_ritt_moves_and_product_embedding():
    C6 = cyclic_group(6)
    assert ritt_obstruction(C6) == 2
    assert direct_product_embedding(ImprimitiveFrame.detect(C6, 3))
    G = c2_wr_c3()
    assert ritt_obstruction(G) == 1
    assert not direct_product_embedding(ImprimitiveFrame.standard(G, 2))


@pytest.mark.parametrize("p", [3, 5, 7])
def test_iterated_bounds_closed_forms(p):
    for n in range(1, 5):
        b = iterated_wreath_bounds(p, n)
        s = sum(p ** k for k in range(n))
        assert b.kernel_lower == p ** s * 2 ** (p ** (n - 1))
        assert b.ambient_order == (2 * p) ** s
    L = math.log(2) / math.log(p)
    assert abs(iterated_wreath_bounds(p, 2).hausdorff_lower - (1 - L / (p * (1 + L)))) < 1e-12


def test_iterated_bounds_need_odd_prime():
    with pytest.raises(HypothesisViolated):
        iterated_wreath_bounds(2, 3)


def test_aug_power_closure_certificate():
    res = closure_lower_bound(aug_s4_closure_instance(3))
    assert res.contains_target
    assert res.target.dim == 9
    assert res.certified_elements


def test_codimension_one_closure():
    F, W = cp_wreath_closure_frame(3, 3)
    res = indecomposable_closure(F, W, 0)
    assert res.extras["codim_in_W1_power"] <= 1
