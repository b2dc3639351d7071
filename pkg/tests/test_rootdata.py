import pytest

from alcove import (
    BasedRootDatum,
    CartanType,
    InvalidRank,
    NotAnAutomorphism,
    NotIrreducible,
    build_datum,
    cartan_matrix,
    coxeter_number,
    diagram_automorphism,
    direct_sum,
    fundamental_group,
    highest_coroot,
    identify_type,
    identity_automorphism,
    parse_type,
    torus_datum,
    twist_permutation,
    validate,
)

# closed-form root counts, used purely as an oracle against the BFS closure
ROOT_COUNTS = {
    **{f"A{n}": n * (n + 1) for n in range(1, 9)},
    **{f"B{n}": 2 * n * n for n in range(2, 9)},
    **{f"C{n}": 2 * n * n for n in range(2, 9)},
    **{f"D{n}": 2 * n * (n - 1) for n in range(2, 9)},
    "E6": 72,
    "E7": 126,
    "E8": 240,
    "F4": 48,
    "G2": 12,
}

SC_FUNDAMENTAL_GROUPS = {
    "A1": (2,), "A2": (3,), "A3": (4,), "A4": (5,), "A7": (8,),
    "B2": (2,), "B3": (2,), "B8": (2,),
    "C3": (2,), "C8": (2,),
    "D4": (2, 2), "D5": (4,), "D6": (2, 2), "D7": (4,), "D8": (2, 2),
    "E6": (3,), "E7": (2,), "E8": (),
    "F4": (), "G2": (),
}

COXETER_NUMBERS = {
    "A1": 2, "A5": 6, "B4": 8, "C4": 8, "D5": 8, "E6": 12, "E7": 18,
    "E8": 30, "F4": 12, "G2": 6,
}


def test_parse_type():
    assert parse_type("A3") == CartanType("A", 3)
    assert parse_type("2A5") == CartanType("A", 5, 2)
    assert parse_type("3D4") == CartanType("D", 4, 3)
    assert str(parse_type("2E6")) == "2E6"
    with pytest.raises(InvalidRank):
        parse_type("H3")
    with pytest.raises(InvalidRank):
        parse_type("E9")
    with pytest.raises(InvalidRank):
        parse_type("2B3")


def test_cartan_matrix_shapes():
    assert cartan_matrix("A", 2).data == ((2, -1), (-1, 2))
    assert cartan_matrix("G", 2).data == ((2, -1), (-3, 2))
    F = cartan_matrix("F", 4)
    assert F.data[1][2] == -2 and F.data[2][1] == -1
    B = cartan_matrix("B", 3)
    assert B.data[1][2] == -2 and B.data[2][1] == -1
    C = cartan_matrix("C", 3)
    assert C.data[2][1] == -2 and C.data[1][2] == -1


def test_a1_bases():
    adj = build_datum("A1", "adjoint")
    assert adj.simple_roots() == [(1,)]
    assert adj.simple_coroots() == [(2,)]
    sc = build_datum("A1", "sc")
    assert sc.simple_roots() == [(2,)]
    assert sc.simple_coroots() == [(1,)]


@pytest.mark.parametrize("label,count", sorted(ROOT_COUNTS.items()))
def test_root_counts(datum_cache, label, count):
    assert datum_cache(label).n_roots == count
    assert datum_cache(label, "adjoint").n_roots == count


@pytest.mark.parametrize("label", ["A3", "B3", "C3", "D4", "F4", "G2", "E6"])
def test_validate_built_data(datum_cache, label):
    assert validate(datum_cache(label)).ok
    assert validate(datum_cache(label, "adjoint")).ok


def test_validate_full_reflection_check_rank_8(datum_cache):
    assert validate(datum_cache("B8")).ok
    assert validate(datum_cache("A8")).ok
    assert validate(datum_cache("E7")).ok


def test_validate_catches_negated_coroot(datum_cache):
    d = datum_cache("A2")
    coroots = list(d.coroots)
    coroots[0] = tuple(-x for x in coroots[0])
    bad = BasedRootDatum(d.rank, d.roots, coroots, d.simple)
    report = validate(bad)
    assert not report.ok
    assert "-2" in report.message or "dual" in report.message or "coroot" in report.message


def test_highest_coroot_small_cases(datum_cache):
    _, marks, _ = highest_coroot(datum_cache("A1"))
    assert marks == (1,)
    _, marks, _ = highest_coroot(datum_cache("A2"))
    assert marks == (1, 1)
    _, marks, _ = highest_coroot(datum_cache("C3"))
    assert marks == (1, 2, 2)
    _, marks, _ = highest_coroot(datum_cache("G2"))
    assert marks == (2, 3)


def test_highest_coroot_is_dominant_and_maximal(datum_cache):
    for label in ["A4", "B4", "C4", "D5", "F4", "E6"]:
        d = datum_cache(label)
        top, marks, root = highest_coroot(d)
        assert all(x >= 0 for x in marks)
        # dominance against every simple root
        for a in d.simple_roots():
            assert sum(x * y for x, y in zip(a, top)) >= 0
        # the paired root really is the partner under the bijection
        idx = d.coroots.index(top)
        assert d.roots[idx] == root


@pytest.mark.parametrize("label,h", sorted(COXETER_NUMBERS.items()))
def test_coxeter_numbers(datum_cache, label, h):
    assert coxeter_number(datum_cache(label)) == h


def test_coxeter_number_a_series(datum_cache):
    for n in range(1, 9):
        assert coxeter_number(datum_cache(f"A{n}")) == n + 1


def test_coxeter_requires_irreducible():
    d = direct_sum(build_datum("A1"), build_datum("A1"))
    with pytest.raises(NotIrreducible):
        coxeter_number(d)


@pytest.mark.parametrize("label,factors", sorted(SC_FUNDAMENTAL_GROUPS.items()))
def test_fundamental_groups_sc(datum_cache, label, factors):
    fg = fundamental_group(datum_cache(label))
    assert fg.invariant_factors == factors
    assert fg.free_rank == 0


def test_fundamental_group_order_is_cartan_det(datum_cache):
    for label in ["A3", "B4", "C5", "D6", "E6", "E7", "F4", "G2"]:
        d = datum_cache(label)
        assert fundamental_group(d).torsion_order == abs(d.cartan.det())


def test_fundamental_group_adjoint_trivial(datum_cache):
    for label in ["A3", "D4", "E6"]:
        fg = fundamental_group(datum_cache(label, "adjoint"))
        assert fg.invariant_factors == ()
        assert fg.free_rank == 0


def test_fundamental_group_with_torus_factor():
    d = direct_sum(torus_datum(1), build_datum("A1", "sc"))
    fg = fundamental_group(d)
    assert fg.invariant_factors == (2,)
    assert fg.free_rank == 1


@pytest.mark.parametrize(
    "label",
    ["A1", "A4", "B3", "B5", "C3", "C6", "D4", "D7", "E6", "E7", "E8", "F4", "G2"],
)
def test_identify_roundtrip(datum_cache, label):
    for isogeny in ("sc", "adjoint"):
        types = identify_type(datum_cache(label, isogeny))
        assert len(types) == 1
        assert str(types[0][0]) == label


def test_identify_canonical_labels(datum_cache):
    # D3 is A3 and B2 is C2; the canonical label wins
    assert str(identify_type(datum_cache("D3"))[0][0]) == "A3"
    assert str(identify_type(datum_cache("B2"))[0][0]) == "C2"
    assert str(identify_type(datum_cache("C2"))[0][0]) == "C2"


def test_identify_direct_sum():
    d = direct_sum(build_datum("A2"), build_datum("G2"))
    labels = sorted(str(t) for t, _ in identify_type(d))
    assert labels == ["A2", "G2"]


def test_diagram_automorphism_identity(datum_cache):
    d = datum_cache("A3")
    theta = diagram_automorphism(d, (0, 1, 2))
    assert theta.matrix.is_identity()
    assert theta.order == 1
    assert identity_automorphism(d).matrix.is_identity()


def test_diagram_automorphism_a3_flip(datum_cache):
    d = datum_cache("A3")
    theta = diagram_automorphism(d, (2, 1, 0))
    assert theta.order == 2
    alphas = d.simple_roots()
    for i, j in enumerate((2, 1, 0)):
        assert tuple(theta.matrix.apply(alphas[i])) == alphas[j]
    covs = d.simple_coroots()
    for i, j in enumerate((2, 1, 0)):
        assert tuple(theta.dual_matrix.apply(covs[i])) == covs[j]


def test_diagram_automorphism_d4_triality(datum_cache):
    d = datum_cache("D4")
    perm = twist_permutation(parse_type("3D4"))
    theta = diagram_automorphism(d, perm)
    assert theta.order == 3
    assert theta.matrix.pow(3).is_identity()
    flip = diagram_automorphism(d, twist_permutation(parse_type("2D4")))
    assert flip.order == 2


def test_diagram_automorphism_e6_flip(datum_cache):
    theta = diagram_automorphism(datum_cache("E6"), twist_permutation(parse_type("2E6")))
    assert theta.order == 2


def test_diagram_automorphism_rejects_bad_permutation(datum_cache):
    with pytest.raises(NotAnAutomorphism):
        diagram_automorphism(datum_cache("A3"), (1, 0, 2))
    with pytest.raises(NotAnAutomorphism):
        diagram_automorphism(datum_cache("B3"), (2, 1, 0))


def test_adjoint_and_sc_have_same_cartan(datum_cache):
    for label in ["A3", "B3", "G2"]:
        assert datum_cache(label).cartan == datum_cache(label, "adjoint").cartan


def test_datum_json_roundtrip(datum_cache):
    d = datum_cache("C3")
    d2 = BasedRootDatum.from_json(d.to_json())
    assert d2.roots == d.roots
    assert d2.coroots == d.coroots
    assert d2.simple == d.simple
    assert validate(d2).ok


def test_build_rejects_twisted_and_invalid():
    with pytest.raises(InvalidRank):
        build_datum("2A3")
    with pytest.raises(InvalidRank):
        build_datum("B1")
    with pytest.raises(InvalidRank):
        CartanType("E", 9)
