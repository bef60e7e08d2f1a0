"""Assembled chain complexes over gluing data: d*d, filtration, cohomology."""

from fractions import Fraction
from itertools import combinations_with_replacement

import pytest

from jbkit.jbcomplex import (
    factories,
    graded_pieces,
    deformation_ring_dimension,
    euler_characteristic_check,
    induced_chain_map,
    jb_assemble,
    jb_cohomology,
    verify_d_squared,
)
from jbkit.jbcomplex.assemble import factor_degree, factor_parity


# -- d*d = 0 on the verified domain -------------------------------------

@pytest.mark.parametrize(
    "factory,order",
    [
        (factories.abelian_triangle, 2),
        (factories.abelian_triangle, 3),
        (factories.abelian_triangle, 4),
        (factories.nonabelian_triangle, 2),
        (factories.nonabelian_triangle, 3),
        (factories.lie_pair, 2),
        (factories.lie_pair, 3),
        (factories.lie_pair, 4),
        (factories.dg_pair, 3),
        (factories.dg_pair, 4),
        (factories.mc_pair, 3),
        (factories.dg_triangle, 3),
        (factories.obstructed_triangle, 3),
    ],
)
def test_d_squared_zero(factory, order):
    jb = jb_assemble(factory(order))
    assert verify_d_squared(jb) == []


def test_d_squared_guard_on_odd_self_bracket_triangle():
    # mc_toy has an odd generator with a nonzero self-bracket; on a
    # triangle that regime needs corrections the assembly does not
    # model (see the Scope note in the assemble module), and the guard
    # must report it rather than silently pass.
    jb = jb_assemble(factories.mc_triangle(3))
    assert verify_d_squared(jb) != []


# -- filtration by factor count ------------------------------------------

def _factor_counts(jb):
    return {deg: [len(fs) for fs, _ in monos] for deg, monos in jb.basis.items()}


@pytest.mark.parametrize("factory,order", [
    (factories.nonabelian_triangle, 3),
    (factories.dg_pair, 4),
])
def test_differential_preserves_filtration(factory, order):
    jb = jb_assemble(factory(order))
    counts = _factor_counts(jb)
    for deg in jb.degrees():
        mat = jb.matrix(deg)
        tgt = counts.get(deg + 1, [])
        src = counts.get(deg, [])
        for (r, c), v in mat.entries.items():
            assert v != 0
            assert tgt[r] <= src[c]


@pytest.mark.parametrize("factory,order", [
    (factories.abelian_triangle, 3),
    (factories.nonabelian_triangle, 3),
    (factories.dg_triangle, 3),
])
def test_graded_pieces_match_combinatorial_count(factory, order):
    # independent recount: enumerate multisets of (simplex, basis)
    # factors directly, drop repeated odd factors, and give each
    # admissible k-multiset its order - k choices of tag
    sela = factory(order)
    jb = jb_assemble(sela)
    factors = [
        (s, b) for s in sela.simplices() for b in range(sela.algebra(s).dim)
    ]
    expect = {}
    for k in range(1, order):
        for combo in combinations_with_replacement(sorted(factors), k):
            if any(
                a == b and factor_parity(sela, a)
                for a, b in zip(combo, combo[1:])
            ):
                continue
            deg = sum(factor_degree(sela, f) for f in combo)
            expect[(k, deg)] = expect.get((k, deg), 0) + (order - k)
    for k in range(1, order):
        got = graded_pieces(jb, k)
        want = {deg: n for (kk, deg), n in expect.items() if kk == k and n}
        assert got == want


def test_graded_pieces_rejects_bad_count():
    jb = jb_assemble(factories.abelian_triangle(2))
    with pytest.raises(ValueError, match="positive"):
        graded_pieces(jb, 0)


# -- cohomology ----------------------------------------------------------

def test_abelian_triangle_cohomology_is_nerve_cohomology():
    # order 2 leaves one monomial per simplex: the complex is the nerve
    # complex of a solid triangle, so only the bottom class survives
    jb = jb_assemble(factories.abelian_triangle(2))
    assert {d: jb.dim(d) for d in jb.degrees()} == {-1: 3, 0: 3, 1: 1}
    assert jb_cohomology(jb, -1)[0] == 1
    assert jb_cohomology(jb, 0)[0] == 0
    assert jb_cohomology(jb, 1)[0] == 0
    assert deformation_ring_dimension(jb) == 1


def test_abelian_triangle_order3_wedge_of_classes():
    # with two generators and coefficients (t, t^2) the bottom classes
    # are the four e_i t^k; their pairwise products survive only when
    # the tags still fit under t^3, leaving the single e1 t wedge e2 t
    jb = jb_assemble(factories.abelian_triangle(3, dim=2))
    coh = {d: jb_cohomology(jb, d)[0] for d in jb.degrees()}
    assert coh == {-2: 1, -1: 4, 0: 0, 1: 0, 2: 0}


def test_lie_pair_deformation_ring():
    # the inclusion complex has a three-dimensional cokernel, giving
    # three dual generators on top of the unit
    jb = jb_assemble(factories.lie_pair(2))
    assert jb_cohomology(jb, -1)[0] == 0
    assert jb_cohomology(jb, 0)[0] == 3
    assert deformation_ring_dimension(jb) == 4


def test_cohomology_representatives_are_cycles():
    jb = jb_assemble(factories.lie_pair(2))
    dim, reps = jb_cohomology(jb, 0)
    assert len(reps) == dim
    for rep in reps:
        img = {}
        for mono, coeff in rep.items():
            for out, v in jb.differential_of_chain({mono: coeff}).items():
                img[out] = img.get(out, Fraction(0)) + v
        assert not any(img.values())


@pytest.mark.parametrize("factory,order", [
    (factories.abelian_triangle, 2),
    (factories.abelian_triangle, 3),
    (factories.lie_pair, 2),
    (factories.dg_pair, 3),
    (factories.zero_sela, 2),
])
def test_euler_characteristic(factory, order):
    jb = jb_assemble(factory(order))
    out = euler_characteristic_check(jb)
    assert out["equal"], out


def test_zero_sela_is_unit_complex():
    jb = jb_assemble(factories.zero_sela(3))
    assert {d: jb.dim(d) for d in jb.degrees()} == {}
    assert deformation_ring_dimension(jb) == 1


# -- degree windows and caps ----------------------------------------------

def test_window_matches_full_complex_inside():
    full = jb_assemble(factories.nonabelian_triangle(3))
    part = jb_assemble(factories.nonabelian_triangle(3), degree_window=(-1, 1))
    for deg in (-1, 0, 1):
        assert part.basis[deg] == full.basis[deg]
    assert part.matrix(0).entries == full.matrix(0).entries


def test_window_validation():
    with pytest.raises(ValueError, match="empty degree window"):
        jb_assemble(factories.abelian_triangle(2), degree_window=(1, 0))
    jb = jb_assemble(factories.abelian_triangle(2), degree_window=(0, 1))
    with pytest.raises(ValueError, match="window"):
        jb_cohomology(jb, 0)
    with pytest.raises(ValueError, match="full complex"):
        euler_characteristic_check(jb)


def test_sym_cap_refuses_truncation():
    with pytest.raises(ValueError, match="below the nilpotency bound"):
        jb_assemble(factories.abelian_triangle(4), sym_cap=1)
    jb = jb_assemble(factories.abelian_triangle(4), sym_cap=3)
    assert verify_d_squared(jb) == []


# -- functoriality ---------------------------------------------------------

def test_abelianization_induces_chain_map():
    source = jb_assemble(factories.nonabelian_triangle(3))
    target = jb_assemble(factories.abelian_triangle(3, dim=2))
    mat = factories.abelianization_matrix()
    morphism = {s: mat for s in source.sela.simplices()}
    maps = induced_chain_map(source, target, morphism)
    for deg in source.degrees():
        if deg + 1 not in maps:
            continue
        left = target.matrix(deg).mul(maps[deg])
        right = maps[deg + 1].mul(source.matrix(deg))
        assert left.entries == right.entries
