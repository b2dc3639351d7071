"""Folding a reduced based root datum along a finite automorphism group.

The folded character lattice is the coinvariants of X modulo torsion; the
folded cocharacter lattice is the invariants of the dual.  Roots fold to
their restrictions, and a folded coroot is the fiber sum of coroots,
doubled when the restricted root is half another one.  The result can be
non-reduced (type BC); its alcove machinery still applies because the
highest folded coroot is taken by dominance inside the folded coroot set.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    AlcoveError,
    NotAnAutomorphism,
    NotReduced,
    TooLarge,
)
from .lattice import (
    IntMatrix,
    IntVector,
    kernel_int_basis,
    smith_normal_form,
)
from .rootdata import (
    BasedRootDatum,
    CartanType,
    DatumAutomorphism,
    ValidationReport,
    build_datum,
    diagram_automorphism,
    parse_type,
    twist_permutation,
    validate,
)
from .weyl_affine import (
    DEFAULT_WEYL_CAP,
    OmegaGroup,
    _matrix_factory,
    _weyl_permutations,
    omega_by_cosets,
)

DEFAULT_GROUP_CAP = 6


@dataclass(frozen=True)
class RestrictionResult:
    """Folded datum plus the maps that define it.

    ``projection`` maps X onto the folded lattice; ``inclusion`` embeds the
    folded cocharacter basis into the dual of X; ``section`` is a right
    inverse of ``projection``.  ``fibers[k]`` lists the source roots whose
    restriction is folded root k; ``doubled[k]`` flags 2*root also being a
    folded root.
    """

    source: BasedRootDatum
    group: tuple[IntMatrix, ...]
    folded: BasedRootDatum
    projection: IntMatrix
    inclusion: IntMatrix
    section: IntMatrix
    fibers: tuple[tuple[int, ...], ...]
    doubled: tuple[bool, ...]

    def to_json(self) -> dict:
        return {
            "folded": self.folded.to_json(),
            "projection": [list(r) for r in self.projection.data],
            "inclusion": [list(r) for r in self.inclusion.data],
            "fibers": [list(f) for f in self.fibers],
            "doubled": list(self.doubled),
        }


def _closure(matrices, cap: int):
    """Multiplicative closure of a set of unimodular matrices."""
    if not matrices:
        return ()
    n = matrices[0].rows
    ident = IntMatrix.identity(n)
    seen = {ident: None}
    queue = [ident]
    while queue:
        m = queue.pop(0)
        for g in matrices:
            p = g @ m
            if p not in seen:
                if len(seen) >= cap:
                    raise TooLarge(f"automorphism group exceeds the cap {cap}")
                seen[p] = None
                queue.append(p)
    return tuple(seen)


def _normalize_generators(datum, automorphisms):
    if automorphisms is None:
        automorphisms = ()
    if isinstance(automorphisms, DatumAutomorphism):
        automorphisms = (automorphisms,)
    gens = []
    for a in automorphisms:
        if not isinstance(a, DatumAutomorphism):
            raise NotAnAutomorphism("expected DatumAutomorphism instances")
        if a.matrix.rows != datum.rank:
            raise NotAnAutomorphism("automorphism rank differs from the datum")
        a.root_permutation(datum)  # raises if it does not preserve the roots
        gens.append(a)
    return tuple(gens)


def restrict_datum(
    datum: BasedRootDatum,
    automorphisms=(),
    max_group_order: int = DEFAULT_GROUP_CAP,
) -> RestrictionResult:
    """Fold a reduced based root datum along a finite automorphism group."""
    for a in datum.roots:
        if tuple(2 * x for x in a) in datum._root_index:
            raise NotReduced("folding requires a reduced source datum")
    gens = _normalize_generators(datum, automorphisms)
    n = datum.rank
    group = _closure([g.matrix for g in gens], max_group_order)
    if not group:
        group = (IntMatrix.identity(n),)

    nontrivial = [g for g in group if not g.is_identity()]
    if not nontrivial:
        projection = section = inclusion = IntMatrix.identity(n)
        nf = n
    else:
        eye = IntMatrix.identity(n)
        cols = []
        for g in nontrivial:
            diff = g - eye
            cols.extend(diff.column(j) for j in range(n))
        N = IntMatrix.from_columns(cols, rows=n)
        snf = smith_normal_form(N)
        r = snf.rank
        nf = n - r
        Uinv = snf.U.inverse_unimodular()
        projection = IntMatrix([snf.U.row(i) for i in range(r, n)], cols=n)
        section = IntMatrix.from_columns([Uinv.column(i) for i in range(r, n)], rows=n)
        # invariants of the dual lattice under the contragredient action
        stacked = []
        for g in nontrivial:
            gt = g.T - eye
            stacked.extend(gt.data)
        K_cols = kernel_int_basis(IntMatrix(stacked, cols=n))
        if len(K_cols) != nf:
            raise AlcoveError("fixed dual lattice rank differs from the folded rank")
        K = IntMatrix.from_columns(K_cols, rows=n)
        pairing = section.T @ K
        if abs(pairing.det()) != 1:
            raise AlcoveError("folded lattices are not dual under the canonical pairing")
        inclusion = K @ pairing.inverse_unimodular()
        if not (section.T @ inclusion).is_identity():
            raise AlcoveError("folded dual basis normalization failed")

    # fold the roots and group the fibers
    restricted = [tuple(projection.apply(a)) for a in datum.roots]
    fiber_map: dict[IntVector, list[int]] = {}
    order: list[IntVector] = []
    for pos in datum.simple:
        fa = restricted[pos]
        if fa not in fiber_map:
            fiber_map[fa] = []
            order.append(fa)
    for idx, fa in enumerate(restricted):
        if fa not in fiber_map:
            fiber_map[fa] = []
            order.append(fa)
        fiber_map[fa].append(idx)

    folded_set = set(order)
    doubled = tuple(tuple(2 * x for x in fa) in folded_set for fa in order)
    sectionT = section.T
    folded_coroots = []
    for fa, dbl in zip(order, doubled):
        acc = [0] * n
        for idx in fiber_map[fa]:
            cv = datum.coroots[idx]
            for k in range(n):
                acc[k] += cv[k]
        cov = sectionT.apply(acc)
        if tuple(inclusion.apply(cov)) != tuple(acc):
            raise AlcoveError("fiber coroot sum does not lie in the fixed dual lattice")
        if dbl:
            cov = tuple(2 * v for v in cov)
        folded_coroots.append(tuple(cov))

    simple_positions = []
    seen_simple = set()
    for pos in datum.simple:
        fa = restricted[pos]
        if fa not in seen_simple:
            seen_simple.add(fa)
            simple_positions.append(order.index(fa))

    folded = BasedRootDatum(
        nf,
        order,
        folded_coroots,
        simple_positions,
        reduced=not any(doubled),
    )
    return RestrictionResult(
        datum,
        group,
        folded,
        projection,
        inclusion,
        section,
        tuple(tuple(fiber_map[fa]) for fa in order),
        doubled,
    )


# ---------------------------------------------------------------------------
# fixed-point Weyl verification


@dataclass(frozen=True)
class FoldReport:
    """Outcome of checking a folding against its fixed-point Weyl group."""

    folded_validation: ValidationReport
    fixed_order: int
    folded_weyl_order: int
    restriction_injective: bool
    generators_contained: bool

    @property
    def ok(self) -> bool:
        return (
            self.folded_validation.ok
            and self.restriction_injective
            and self.generators_contained
            and self.fixed_order == self.folded_weyl_order
        )

    def to_json(self) -> dict:
        return {
            "folded_datum_valid": self.folded_validation.ok,
            "folded_datum_message": self.folded_validation.message,
            "fixed_weyl_order": self.fixed_order,
            "folded_weyl_order": self.folded_weyl_order,
            "restriction_injective": self.restriction_injective,
            "generators_contained": self.generators_contained,
            "ok": self.ok,
        }


def _dual_weyl_matrices(datum: BasedRootDatum):
    """Enumerate the Weyl group in its action on the dual lattice."""
    gens = [datum.dual_reflection(i) for i in datum.simple]
    ident = IntMatrix.identity(datum.rank)
    seen = {ident: None}
    queue = [ident]
    while queue:
        m = queue.pop(0)
        for g in gens:
            p = g @ m
            if p not in seen:
                seen[p] = None
                queue.append(p)
    return set(seen), gens


def verify_folding(datum: BasedRootDatum, automorphisms, cap: int = DEFAULT_WEYL_CAP) -> FoldReport:
    """Check that folding produces a root datum whose Weyl group is the
    fixed-point Weyl group of the source, acting on the fixed dual lattice.

    The fixed elements of W are found by scanning the full enumeration, the
    restriction map is checked to be injective on them, and its image is
    compared with the folded Weyl group by order and generator containment.
    """
    res = restrict_datum(datum, automorphisms)
    report_validation = validate(res.folded)

    perms = _weyl_permutations(datum, cap)
    gens = _normalize_generators(datum, automorphisms)
    taus = [g.root_permutation(datum) for g in gens]
    nroots = datum.n_roots
    fixed = []
    for p in perms:
        ok = True
        for tau in taus:
            for k in range(nroots):
                if tau[p[k]] != p[tau[k]]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            fixed.append(p)

    def inv_perm(p):
        return tuple(sorted(range(len(p)), key=p.__getitem__))

    matrix_of = _matrix_factory(datum)
    sectionT = res.section.T
    K = res.inclusion
    restrictions = set()
    for p in fixed:
        minv = matrix_of(inv_perm(p))
        mdual = minv.T
        image = mdual @ K
        rmat = sectionT @ image
        if K @ rmat != image:
            raise AlcoveError("fixed Weyl element does not preserve the fixed dual lattice")
        restrictions.add(rmat)

    injective = len(restrictions) == len(fixed)
    folded_weyl, folded_gens = _dual_weyl_matrices(res.folded)
    contained = all(g in restrictions for g in folded_gens)
    return FoldReport(
        report_validation,
        len(fixed),
        len(folded_weyl),
        injective,
        contained,
    )


def folded_omega(datum: BasedRootDatum, automorphisms=()) -> OmegaGroup:
    """Alcove stabilizer of the folded datum."""
    res = restrict_datum(datum, automorphisms)
    return omega_by_cosets(res.folded)


# ---------------------------------------------------------------------------
# convenience: realize a (possibly twisted) type label


def realize_type(ctype: CartanType | str, isogeny: str = "sc"):
    """Build the untwisted datum of a type label plus its twist generators.

    Returns ``(datum, automorphisms)`` where the automorphism tuple is empty
    for untwisted labels.
    """
    if isinstance(ctype, str):
        ctype = parse_type(ctype)
    base = CartanType(ctype.series, ctype.rank, 1)
    datum = build_datum(base, isogeny)
    if ctype.twist == 1:
        return datum, ()
    perm = twist_permutation(ctype)
    return datum, (diagram_automorphism(datum, perm),)
