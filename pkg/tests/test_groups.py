"""Unitary and norm-one groups by enumeration, reduced-norm images, and
finite abelian quotients with their invariant factors."""

import pytest
from order_oracles import sl_order, special_unitary_order, unitary_order

from azunorm import presets
from azunorm.algebras import AlgebraWithInvolution, MatrixAlgebra, transpose_involution
from azunorm.groups import (FiniteAbelianPresentation, enumerate_special,
                            enumerate_unitary, functor_linear, functor_unitary,
                            nrd_image, nrd_unit_image)
from azunorm.rings import ExactAlgebraError, PrimeField, ProductRing, Zmod
from azunorm.transfers import FiniteFreeExtension, etale_extension

F3 = PrimeField(3)


def test_unitary_group_order_matches_formula():
    aw = presets.unitary_m2_f3i("identity")
    u = enumerate_unitary(aw)
    su = enumerate_special(aw, "SU")
    assert len(u) == unitary_order(2, 3) == 96
    assert len(su) == special_unitary_order(2, 3) == 24


def test_unitary_order_is_form_independent():
    for h in presets.H_NAMES:
        aw = presets.unitary_m2_f3i(h)
        assert len(enumerate_unitary(aw)) == unitary_order(2, 3)


def test_special_linear_order_matches_formula():
    sl = enumerate_special(presets.matrix_preset(3, 2), "SL")
    assert len(sl) == sl_order(2, 3) == 24


def test_degree_one_unitary_groups_are_the_circles():
    for name in presets.ETALE_NAMES:
        aw = presets.degree_one_unitary(name)
        c = aw.center_ring
        assert len(enumerate_unitary(aw)) == len(c.unitary_scalars())
        assert len(enumerate_special(aw, "SU")) == 1


def test_unitary_members_replay():
    aw = presets.unitary_m2_f3i("hyperbolic")
    alg = aw.algebra
    one = alg.one_p()
    for g in enumerate_unitary(aw):
        assert alg.mul_p(g.payload, aw.sigma_p(g.payload)) == one


def test_norm_image_of_unitary_group():
    aw = presets.unitary_m2_f3i("identity")
    u = enumerate_unitary(aw)
    img = nrd_image(u, aw)
    circle = set(aw.center_ring.unitary_scalars())
    assert img == circle
    assert len(img) == 4


def test_first_isomorphism_count():
    # |U| = |SU| * |nrd(U)| for every shipped unitary case
    cases = [presets.unitary_m2_f3i(h) for h in presets.H_NAMES]
    cases += [presets.degree_one_unitary(n) for n in presets.ETALE_NAMES]
    for aw in cases:
        u = enumerate_unitary(aw)
        su = enumerate_special(aw, "SU")
        img = nrd_image(u, aw)
        assert len(u) == len(su) * len(img)


def test_norm_image_rejects_non_closed_sets():
    aw = presets.unitary_m2_f3i("identity")
    i = aw.embed_center(aw.center_ring.sqrt_gen)
    with pytest.raises(ExactAlgebraError):
        nrd_image([i], aw)


def test_unit_norm_image_split_and_table():
    m2 = presets.matrix_preset(3, 2)
    assert nrd_unit_image(m2) == {F3.int_p(1), F3.int_p(2)}
    table, _ = presets.quaternion_preset(5)
    f5 = table.base
    assert nrd_unit_image(table) == {f5.int_p(k) for k in (1, 2, 3, 4)}


def test_orthogonal_group_replay():
    a = MatrixAlgebra(F3, 2)
    aw = AlgebraWithInvolution(a, transpose_involution(a))
    so = enumerate_special(aw, "SO")
    one = a.one_p()
    onec = aw.center_ring.one_p()
    for g in so:
        assert a.mul_p(g.payload, aw.sigma_p(g.payload)) == one
        assert aw.nrd_p(g.payload) == onec
    # closure under multiplication
    members = {g.payload for g in so}
    for g in so:
        for h in so:
            assert a.mul_p(g.payload, h.payload) in members


# -- abelian presentations -------------------------------------------------------

def test_invariant_factors_cyclic():
    z9 = Zmod(9)
    units = [p for p in z9.elements_p() if z9.is_unit_p(p)]
    pres = FiniteAbelianPresentation(z9, units)
    assert pres.order == 6
    assert pres.elementary_divisors == [6]


def test_invariant_factors_product():
    f3 = PrimeField(3)
    f9c = presets.etale_preset("f3i")
    pr = ProductRing([f3, f9c])
    units = [p for p in pr.elements_p() if pr.is_unit_p(p)]
    pres = FiniteAbelianPresentation(pr, units)
    assert pres.order == 16
    assert pres.elementary_divisors == [2, 8]


def test_invariant_factors_of_quotient():
    c = presets.etale_preset("f3i")
    units = [p for p in c.elements_p() if c.is_unit_p(p)]
    squares = [c.mul_p(p, p) for p in units]
    pres = FiniteAbelianPresentation(c, units, squares)
    assert pres.order == 2
    assert pres.elementary_divisors == [2]
    # coset structure replays
    for rep, members in pres.cosets:
        for m in members:
            assert pres.rep(m) == rep
    for r1, _ in pres.cosets:
        for r2, _ in pres.cosets:
            prod = pres.op(r1, r2)
            assert prod in {r for r, _ in pres.cosets}
            assert pres.op(prod, pres.inverse_rep(r2)) == r1


def test_divisors_do_not_depend_on_input_order():
    z9 = Zmod(9)
    units = [p for p in z9.elements_p() if z9.is_unit_p(p)]
    a = FiniteAbelianPresentation(z9, units)
    b = FiniteAbelianPresentation(z9, list(reversed(units)))
    assert a.elementary_divisors == b.elementary_divisors
    assert [r for r, _ in a.cosets] == [r for r, _ in b.cosets]


def test_presentation_rejects_non_groups():
    z9 = Zmod(9)
    with pytest.raises(ExactAlgebraError):
        FiniteAbelianPresentation(z9, [z9.int_p(1), z9.int_p(3)])
    with pytest.raises(ExactAlgebraError):
        FiniteAbelianPresentation(z9, [z9.int_p(1), z9.int_p(2)])  # not closed


# -- functor values ---------------------------------------------------------------

def test_power_quotient_orders():
    ext = etale_extension(presets.etale_preset("f3i"))
    assert functor_linear(None, ext, 2).order == 2
    assert functor_linear(None, ext, 1).order == 1
    # d = 0 keeps the whole unit group
    assert functor_linear(None, ext, 0).order == 8


def test_split_algebra_swallows_everything():
    ext = etale_extension(presets.etale_preset("f3i"))
    q = functor_linear(presets.matrix_preset(3, 2), ext, 2)
    assert q.is_trivial


def test_unitary_functor_orders():
    f3id = FiniteFreeExtension.identity(F3)
    c = presets.etale_preset("f3i")
    assert functor_unitary(c, f3id, 2).order == 2
    assert functor_unitary(c, f3id, 0).order == 4
    aw = presets.unitary_m2_f3i("identity")
    assert functor_unitary(aw, f3id, 1).order == 1
    assert functor_unitary(aw, f3id, 0).order == 1


def test_unitary_functor_rejects_first_kind():
    a = MatrixAlgebra(F3, 2)
    aw = AlgebraWithInvolution(a, transpose_involution(a))
    from azunorm.rings import ClassificationError
    with pytest.raises(ClassificationError):
        functor_unitary(aw, FiniteFreeExtension.identity(F3), 1)
