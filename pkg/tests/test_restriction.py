import random

import pytest

from alcove import (
    NotAnAutomorphism,
    NotReduced,
    TooLarge,
    diagram_automorphism,
    folded_omega,
    identify_type,
    realize_type,
    restrict_datum,
    validate,
    verify_folding,
)

FOLDED_TYPES = {
    "2A2": "BC1",
    "2A3": "C2",
    "2A4": "BC2",
    "2A5": "C3",
    "2A7": "C4",
    "2D3": "C2",  # B2 presented, canonical label C2
    "2D4": "B3",
    "2D5": "B4",
    "3D4": "G2",
    "2E6": "F4",
}

# |W| of the folded datum, the expected size of the fixed subgroup
FIXED_ORDERS = {
    "2A2": 2,
    "2A3": 8,
    "2A4": 8,
    "2A5": 48,
    "2D4": 48,
    "2D5": 384,
    "3D4": 12,
}


def test_trivial_fold_is_the_identity(datum_cache):
    d = datum_cache("A3")
    res = restrict_datum(d, ())
    assert res.projection.is_identity()
    assert res.inclusion.is_identity()
    assert res.folded.roots == d.roots
    assert res.folded.coroots == d.coroots
    assert res.folded.simple == d.simple
    assert res.fibers == tuple((i,) for i in range(d.n_roots))
    assert not any(res.doubled)


@pytest.mark.parametrize("label,folded", sorted(FOLDED_TYPES.items()))
def test_folded_type_identification(label, folded):
    datum, autos = realize_type(label, "sc")
    res = restrict_datum(datum, autos)
    types = identify_type(res.folded)
    assert len(types) == 1
    assert str(types[0][0]) == folded


@pytest.mark.parametrize("label", sorted(FOLDED_TYPES))
def test_folded_datum_is_valid(label):
    datum, autos = realize_type(label, "sc")
    res = restrict_datum(datum, autos)
    assert validate(res.folded).ok


@pytest.mark.parametrize("label", sorted(FOLDED_TYPES))
def test_fibers_partition_the_roots(label):
    datum, autos = realize_type(label, "sc")
    res = restrict_datum(datum, autos)
    seen = sorted(i for fiber in res.fibers for i in fiber)
    assert seen == list(range(datum.n_roots))
    # every fiber restricts to the same folded root
    for k, fiber in enumerate(res.fibers):
        images = {tuple(res.projection.apply(datum.roots[i])) for i in fiber}
        assert images == {res.folded.roots[k]}


@pytest.mark.parametrize("label", sorted(FOLDED_TYPES))
def test_folded_pairing_is_two(label):
    datum, autos = realize_type(label, "sc")
    res = restrict_datum(datum, autos)
    for a, av in zip(res.folded.roots, res.folded.coroots):
        assert sum(x * y for x, y in zip(a, av)) == 2


def test_doubled_branch_fires_exactly_for_even_a(datum_cache):
    for label in ("2A2", "2A4"):
        datum, autos = realize_type(label, "sc")
        res = restrict_datum(datum, autos)
        assert any(res.doubled)
        assert not res.folded.reduced
    for label in ("2A3", "2D4", "3D4"):
        datum, autos = realize_type(label, "sc")
        res = restrict_datum(datum, autos)
        assert not any(res.doubled)
        assert res.folded.reduced


def test_doubled_coroot_relation_2a2():
    datum, autos = realize_type("2A2", "sc")
    res = restrict_datum(datum, autos)
    by_root = dict(zip(res.folded.roots, res.folded.coroots))
    for a, av in by_root.items():
        da = tuple(2 * x for x in a)
        if da in by_root:
            # the doubled root's coroot is half the coroot of the short root
            assert tuple(2 * x for x in by_root[da]) == av


@pytest.mark.parametrize("label", sorted(FOLDED_TYPES))
def test_projection_inclusion_duality(label):
    datum, autos = realize_type(label, "sc")
    res = restrict_datum(datum, autos)
    rng = random.Random(13)
    n, nf = datum.rank, res.folded.rank
    for _ in range(50):
        x = [rng.randint(-9, 9) for _ in range(n)]
        c = [rng.randint(-9, 9) for _ in range(nf)]
        lhs = sum(a * b for a, b in zip(res.projection.apply(x), c))
        rhs = sum(a * b for a, b in zip(x, res.inclusion.apply(c)))
        assert lhs == rhs


def test_projection_section_identity():
    datum, autos = realize_type("2E6", "sc")
    res = restrict_datum(datum, autos)
    assert (res.projection @ res.section).is_identity()
    assert (res.section.T @ res.inclusion).is_identity()


def test_inclusion_columns_are_fixed_by_the_group():
    datum, autos = realize_type("3D4", "sc")
    res = restrict_datum(datum, autos)
    for g in res.group:
        gd = g.inverse_unimodular().T
        for j in range(res.folded.rank):
            col = res.inclusion.column(j)
            assert tuple(gd.apply(col)) == col


@pytest.mark.parametrize(
    "label,expected",
    [
        ("2A3", {1: 4, 2: 4}),
        ("3D4", {1: 6, 3: 6}),
        ("2E6", {1: 24, 2: 24}),
        ("2A2", {1: 2, 2: 2}),
    ],
)
def test_fiber_sizes_match_restricted_root_multiplicities(label, expected):
    datum, autos = realize_type(label, "sc")
    res = restrict_datum(datum, autos)
    sizes = {}
    for f in res.fibers:
        sizes[len(f)] = sizes.get(len(f), 0) + 1
    assert sizes == expected


def test_full_s3_fold_of_d4(datum_cache):
    from alcove import diagram_automorphism, parse_type, twist_permutation

    d4 = datum_cache("D4")
    tri = diagram_automorphism(d4, twist_permutation(parse_type("3D4")))
    flip = diagram_automorphism(d4, twist_permutation(parse_type("2D4")))
    res = restrict_datum(d4, (tri, flip))
    assert len(res.group) == 6
    assert [str(t) for t, _ in identify_type(res.folded)] == ["G2"]
    report = verify_folding(d4, (tri, flip))
    assert report.fixed_order == report.folded_weyl_order == 12
    assert report.ok


@pytest.mark.parametrize("label,fixed", sorted(FIXED_ORDERS.items()))
def test_fixed_weyl_orders(label, fixed):
    datum, autos = realize_type(label, "sc")
    report = verify_folding(datum, autos)
    assert report.fixed_order == fixed
    assert report.folded_weyl_order == fixed
    assert report.restriction_injective
    assert report.generators_contained
    assert report.folded_validation.ok
    assert report.ok


FOLDED_OMEGAS = {
    "2A2": (),
    "2A3": (2,),
    "2A4": (),
    "2A5": (2,),
    "2D3": (2,),
    "2D4": (2,),
    "2D5": (2,),
    "3D4": (),
    "2E6": (),
}


@pytest.mark.parametrize("label,factors", sorted(FOLDED_OMEGAS.items()))
def test_folded_omega(label, factors):
    datum, autos = realize_type(label, "sc")
    assert folded_omega(datum, autos).invariant_factors == factors


@pytest.mark.parametrize("label", ["2A2", "2A4"])
def test_nonreduced_alcove_is_a_fundamental_domain(label):
    # reduction into the BC alcove must be constant on affine-Weyl orbits;
    # an alcove cut out by the wrong affine wall would fail this
    from fractions import Fraction

    from alcove import act, fundamental_alcove, generate_weyl, reduce_to_alcove
    from alcove.weyl_affine import AffineMap

    datum, autos = realize_type(label, "sc")
    folded = restrict_datum(datum, autos).folded
    alc = fundamental_alcove(folded)
    W = generate_weyl(folded)
    rng = random.Random(59)
    for _ in range(150):
        x = tuple(
            Fraction(rng.randint(-40, 40), rng.randint(1, 9)) for _ in range(folded.rank)
        )
        x0, witness = reduce_to_alcove(alc, x)
        assert alc.contains(x0)
        assert act(witness, x) == x0
        w = W[rng.randrange(len(W))]
        q = [
            sum(rng.randint(-2, 2) * r[k] for r in folded.simple_roots())
            for k in range(folded.rank)
        ]
        moved = act(AffineMap(w, tuple(Fraction(v) for v in q)), x)
        assert reduce_to_alcove(alc, moved)[0] == x0


def test_refolding_nonreduced_raises():
    datum, autos = realize_type("2A2", "sc")
    folded = restrict_datum(datum, autos).folded
    with pytest.raises(NotReduced):
        restrict_datum(folded, ())


def test_rank_mismatch_rejected(datum_cache):
    datum = datum_cache("A3")
    wrong = diagram_automorphism(datum_cache("A2"), (1, 0))
    with pytest.raises(NotAnAutomorphism):
        restrict_datum(datum, wrong)


def test_group_closure_cap():
    datum, autos = realize_type("3D4", "sc")
    with pytest.raises(TooLarge):
        restrict_datum(datum, autos, max_group_order=2)


def test_closure_contains_all_powers():
    datum, autos = realize_type("3D4", "sc")
    res = restrict_datum(datum, autos)
    assert len(res.group) == 3


def test_realize_type_untwisted():
    datum, autos = realize_type("B3", "sc")
    assert autos == ()
    assert datum.n_roots == 18


def test_realize_type_twisted():
    datum, autos = realize_type("2A5", "sc")
    assert len(autos) == 1
    assert autos[0].order == 2
    assert datum.n_roots == 30
