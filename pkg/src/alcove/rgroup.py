"""Alcove-point stabilizers and the classification they induce.

A unitary unramified parameter class corresponds to a point of the closed
folded alcove; the group that controls the associated principal-series
reducibility is the stabilizer of that point inside the alcove stabilizer.
This module computes those stabilizers exactly, checks the compatibility
between the coset action and translation-plus-reduction, relates the
coinvariants of X/Q to the folded quotient, and sweeps the classification
over every subgroup of the alcove stabilizer.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import AlcoveError, NotSemisimple, PointOutsideAlcove
from .lattice import (
    FiniteAbelianGroup,
    IntMatrix,
    IntVector,
    RationalVector,
    Subgroup,
    abelian_subgroup_invariants,
    cokernel,
    enumerate_subgroups,
    is_integral,
    rational_solve,
    torsion_part,
    vec_add,
    vector,
)
from .rootdata import BasedRootDatum, fundamental_group
from .restriction import RestrictionResult, realize_type, restrict_datum
from .weyl_affine import (
    Alcove,
    OmegaGroup,
    act,
    omega_by_cosets,
    random_alcove_point,
    reduce_to_alcove,
)


# ---------------------------------------------------------------------------
# parameter points


@dataclass(frozen=True)
class ParameterPoint:
    """Rational point of the closed alcove standing for a parameter class."""

    point: RationalVector
    provenance: str = ""


def parameter_point(alcove: Alcove, coords, provenance: str = "") -> ParameterPoint:
    pt = vector(coords)
    values = alcove.values(pt)
    if any(v < 0 for v in values):
        raise PointOutsideAlcove(f"wall values {values} contain a negative entry")
    return ParameterPoint(pt, provenance)


def point_from_label(alcove: Alcove, label: str) -> ParameterPoint:
    """Parse 'c0', 'face:I' (comma-separated wall indices), or coordinates."""
    label = label.strip()
    if label == "c0":
        return ParameterPoint(alcove.c0, "c0")
    if label.startswith("face:"):
        active = [int(s) for s in label[5:].split(",") if s != ""]
        return parameter_point(alcove, alcove.face_barycenter(active), label)
    coords = [s for s in label.split(",") if s != ""]
    return parameter_point(alcove, vector(coords), label)


# ---------------------------------------------------------------------------
# stabilizers


@dataclass(frozen=True)
class StabilizerSubgroup:
    """Subgroup of an alcove stabilizer fixing a point, with its type."""

    indices: tuple[int, ...]
    iota_images: tuple[IntVector, ...]
    invariant_factors: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.indices)


def stabilizer(omega: OmegaGroup, point: ParameterPoint) -> StabilizerSubgroup:
    """Elements of the alcove stabilizer fixing the point exactly."""
    pt = point.point
    values = omega.alcove.values(pt)
    if any(v < 0 for v in values):
        raise PointOutsideAlcove("stabilizers are defined on the closed alcove only")
    indices = tuple(i for i, m in enumerate(omega.elements) if act(m, pt) == pt)
    index_set = set(indices)
    for i in indices:
        for j in indices:
            if omega.table[i][j] not in index_set:
                raise AlcoveError("point stabilizer is not closed under composition")
    images = tuple(omega.iota_images[i] for i in indices)
    factors = abelian_subgroup_invariants(omega.invariant_factors, images) if len(indices) > 1 else ()
    return StabilizerSubgroup(indices, images, factors)


# ---------------------------------------------------------------------------
# compatibility of the two actions


@dataclass(frozen=True)
class CompatibilityResult:
    ok: bool
    residues: IntVector
    point: RationalVector
    lhs: RationalVector
    rhs: RationalVector


def compatibility_check(omega: OmegaGroup, residues, point: ParameterPoint) -> CompatibilityResult:
    """Check that acting by the stabilizer element of a class equals
    translating by the recentred representative and reducing to the alcove.

    The element with class a sends x to the reduction of x + x_a, where
    x_a = (w^{-1} - 1)c0 is the integral representative of a.
    """
    residues = tuple(int(r) for r in residues)
    i = omega.index_by_iota(residues)
    elt = omega.elements[i]
    inv = omega.elements[omega.inverse_index(i)]
    c0 = omega.alcove.c0
    x_a = tuple(a - b for a, b in zip(inv.matrix.apply(c0), c0))
    if not is_integral(x_a):
        raise AlcoveError("recentred representative is not integral")
    lhs = act(elt, point.point)
    rhs, _ = reduce_to_alcove(omega.alcove, vec_add(point.point, x_a))
    return CompatibilityResult(lhs == rhs, residues, point.point, lhs, rhs)


# ---------------------------------------------------------------------------
# coinvariants bridge


@dataclass(frozen=True)
class CoinvariantsBridge:
    """(X/Q) coinvariants, its surjection onto the folded quotient, and the
    torsion of the coinvariant lattice, all in invariant-factor form.

    ``surjection`` maps residue tuples of the coinvariant group to residue
    tuples of the folded quotient.  Whether the kernel is isomorphic to the
    coinvariant-lattice torsion is reported, not assumed.
    """

    restriction: RestrictionResult
    coinvariants: FiniteAbelianGroup
    folded_quotient: FiniteAbelianGroup
    surjection: dict
    kernel_elements: tuple[IntVector, ...]
    kernel_factors: tuple[int, ...]
    torsion_factors: tuple[int, ...]

    @property
    def kernel_order(self) -> int:
        return len(self.kernel_elements)

    @property
    def kernel_matches_torsion(self) -> bool:
        return self.kernel_factors == self.torsion_factors

    def to_json(self) -> dict:
        return {
            "coinvariants": list(self.coinvariants.invariant_factors),
            "folded_quotient": list(self.folded_quotient.invariant_factors),
            "kernel": list(self.kernel_factors),
            "lattice_torsion": list(self.torsion_factors),
            "kernel_matches_torsion": self.kernel_matches_torsion,
        }


def coinvariants_bridge(datum: BasedRootDatum, automorphisms=()) -> CoinvariantsBridge:
    """Compute the coinvariants of X/Q and its map onto the folded quotient."""
    res = restrict_datum(datum, automorphisms)
    n = datum.rank
    nontrivial = [g for g in res.group if not g.is_identity()]
    eye = IntMatrix.identity(n)
    cols = [datum.roots[i] for i in datum.simple]
    for g in nontrivial:
        diff = g - eye
        cols.extend(diff.column(j) for j in range(n))
    quot = cokernel(IntMatrix.from_columns(cols, rows=n))
    if quot.free_rank:
        raise NotSemisimple("coinvariants of X/Q need a semisimple datum")
    A = quot.torsion

    folded_fg = fundamental_group(res.folded)
    if folded_fg.free_rank:
        raise NotSemisimple("folded datum is not semisimple")
    folded_quot = folded_fg.torsion

    surjection = {}
    for r in A.elements():
        rep = A.representative(r)
        surjection[r] = folded_quot.project(res.projection.apply(rep))
    # homomorphism and surjectivity checks
    for r1 in A.elements():
        for r2 in A.elements():
            left = surjection[A.add(r1, r2)]
            right = folded_quot.add(surjection[r1], surjection[r2]) if folded_quot.invariant_factors else ()
            if left != right:
                raise AlcoveError("coinvariants map is not a homomorphism")
    if set(surjection.values()) != set(folded_quot.elements()):
        raise AlcoveError("coinvariants map is not onto the folded quotient")

    zero = folded_quot.zero()
    kernel = tuple(sorted(r for r, img in surjection.items() if img == zero))
    kernel_factors = abelian_subgroup_invariants(A.invariant_factors, kernel) if len(kernel) > 1 else ()

    if nontrivial:
        tcols = []
        for g in nontrivial:
            diff = g - eye
            tcols.extend(diff.column(j) for j in range(n))
        lattice_quot = cokernel(IntMatrix.from_columns(tcols, rows=n))
    else:
        lattice_quot = cokernel(IntMatrix.from_columns([], rows=n))
    torsion_factors = torsion_part(lattice_quot).invariant_factors

    return CoinvariantsBridge(
        res,
        A,
        folded_quot,
        surjection,
        kernel,
        kernel_factors,
        torsion_factors,
    )


@dataclass(frozen=True)
class PreimageOrders:
    """Order bookkeeping for the preimage of a point stabilizer."""

    preimage_order: int
    kernel_order: int
    stabilizer_order: int

    @property
    def law_holds(self) -> bool:
        return self.preimage_order == self.kernel_order * self.stabilizer_order


def stabilizer_preimage_orders(
    bridge: CoinvariantsBridge, omega: OmegaGroup, point: ParameterPoint
) -> PreimageOrders:
    """Count the coinvariant classes whose image fixes the point."""
    if bridge.folded_quotient != omega.quotient:
        raise AlcoveError("bridge and alcove stabilizer use different quotient presentations")
    stab = stabilizer(omega, point)
    fixed_images = set(stab.iota_images)
    count = sum(1 for img in bridge.surjection.values() if img in fixed_images)
    return PreimageOrders(count, bridge.kernel_order, stab.order)


# ---------------------------------------------------------------------------
# classification sweep


@dataclass(frozen=True)
class SubgroupRealization:
    subgroup: Subgroup
    element_indices: tuple[int, ...]
    realized: bool
    sample_point: RationalVector | None


@dataclass(frozen=True)
class ClassificationReport:
    omega_factors: tuple[int, ...]
    realizations: tuple[SubgroupRealization, ...]

    @property
    def realized_all(self) -> bool:
        return all(r.realized for r in self.realizations)

    def realized_subgroups(self):
        return [r.subgroup for r in self.realizations if r.realized]

    def to_json(self) -> dict:
        return {
            "omega_factors": list(self.omega_factors),
            "subgroups": [
                {
                    "order": r.subgroup.order,
                    "factors": list(r.subgroup.invariant_factors),
                    "elements": [list(e) for e in r.subgroup.elements],
                    "realized": r.realized,
                    "sample_point": [str(c) for c in r.sample_point] if r.sample_point else None,
                }
                for r in self.realizations
            ],
            "all_subgroups_realized": self.realized_all,
        }


def _fixed_space_basis(omega: OmegaGroup, indices):
    """Basis of the linear part of the affine fixed space of a subgroup."""
    n = omega.alcove.datum.rank
    rows = []
    eye = IntMatrix.identity(n)
    for i in indices:
        m = omega.elements[i].matrix
        if m.is_identity():
            continue
        diff = m - eye
        rows.extend(diff.data)
    if not rows:
        basis = [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
        return basis
    _, kernel = rational_solve(rows, [0] * len(rows), ncols=n)
    return kernel


def classify_stabilizers(
    datum: BasedRootDatum,
    automorphisms=(),
    seed: int = 0,
    max_subgroup_order: int = 64,
    tries: int = 100,
) -> ClassificationReport:
    """Which subgroups of the alcove stabilizer occur as point stabilizers.

    For each subgroup, a generic rational point of its affine fixed space
    inside the closed alcove is sampled (deterministically, from the seed)
    and its exact stabilizer recorded; resampling rejects points picked up
    by a strictly larger subgroup.
    """
    res = restrict_datum(datum, automorphisms)
    omega = omega_by_cosets(res.folded)
    subs = enumerate_subgroups(omega.quotient, max_subgroup_order)
    rng = random.Random(seed)
    alcove = omega.alcove
    c0 = alcove.c0
    realizations = []
    for sub in subs:
        indices = tuple(sorted(omega.index_by_iota(r) for r in sub.elements))
        basis = _fixed_space_basis(omega, indices)
        sample = None
        for _ in range(tries):
            if basis:
                offset = [Fraction(0)] * len(c0)
                for b in basis:
                    coeff = Fraction(rng.randint(-89, 89), rng.randint(97, 181))
                    for k, v in enumerate(b):
                        offset[k] += coeff * v
                x = tuple(a + o for a, o in zip(c0, offset))
                shrink = 0
                while not alcove.contains(x) and shrink < 200:
                    offset = [o / 2 for o in offset]
                    x = tuple(a + o for a, o in zip(c0, offset))
                    shrink += 1
                if not alcove.contains(x):
                    continue
            else:
                x = c0
            stab = stabilizer(omega, ParameterPoint(x))
            if stab.indices == indices:
                sample = x
                break
            if not basis:
                break
        realizations.append(SubgroupRealization(sub, indices, sample is not None, sample))
    return ClassificationReport(omega.invariant_factors, tuple(realizations))


# ---------------------------------------------------------------------------
# the headline table


TABLE1_ROWS = (
    "A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8",
    "B2", "B3", "B5", "B8",
    "C2", "C3", "C5", "C8",
    "D4", "D5", "D6", "D7", "D8",
    "E6", "E7",
    "2A5", "2A7",
    "2D3", "2D4", "2D5",
)


def printed_omega_factors(label: str) -> tuple[int, ...]:
    """The printed table column for a row label."""
    from .rootdata import parse_type

    ct = parse_type(label)
    if ct.twist == 2 and ct.series == "A":
        return (2,)
    if ct.twist == 2 and ct.series == "D":
        return (2,)
    s, n = ct.series, ct.rank
    if s == "A":
        return (n + 1,)
    if s in ("B", "C"):
        return (2,)
    if s == "D":
        return (2, 2) if n % 2 == 0 else (2,)
    if s == "E" and n == 6:
        return (3,)
    if s == "E" and n == 7:
        return (2,)
    raise AlcoveError(f"{label} has no table row")


def standard_omega_factors(label: str) -> tuple[int, ...]:
    """Reference values from the lattice quotients themselves.

    Differs from the printed column in one place: X/Q of odd D is cyclic of
    order 4, while the printed table says order 2.
    """
    from .rootdata import parse_type

    ct = parse_type(label)
    if ct.twist == 1 and ct.series == "D" and ct.rank % 2 == 1:
        return (4,)
    return printed_omega_factors(label)


@dataclass(frozen=True)
class Table1Row:
    label: str
    computed: tuple[int, ...]
    printed: tuple[int, ...]
    standard: tuple[int, ...]

    @property
    def match(self) -> bool:
        return self.computed == self.printed

    @property
    def known_discrepancy(self) -> bool:
        return (not self.match) and self.computed == self.standard and self.printed != self.standard

    def to_json(self) -> dict:
        out = {
            "type": self.label,
            "expected": list(self.printed),
            "computed": list(self.computed),
            "match": self.match,
        }
        if not self.match:
            out["standard"] = list(self.standard)
            out["known_discrepancy"] = self.known_discrepancy
        return out


def table1(rows=TABLE1_ROWS) -> list[Table1Row]:
    """Compute the alcove-stabilizer column for every table row and diff it
    against the printed values.

    Mismatches are reported with both the printed and the computed value;
    the odd-D rows are a documented discrepancy between the printed table
    and the lattice quotient.
    """
    out = []
    for label in rows:
        datum, autos = realize_type(label, "sc")
        if autos:
            res = restrict_datum(datum, autos)
            omega = omega_by_cosets(res.folded)
        else:
            omega = omega_by_cosets(datum)
        out.append(
            Table1Row(
                label,
                omega.invariant_factors,
                printed_omega_factors(label),
                standard_omega_factors(label),
            )
        )
    return out


# ---------------------------------------------------------------------------
# sweeps shared by the CLI verify suites and the acceptance tests


COMPAT_REPRESENTATIVES = ("A4", "B3", "C3", "D4", "D5", "E6", "E7", "2A5", "2D4")


@dataclass(frozen=True)
class SweepReport:
    label: str
    samples: int
    compat_failures: int
    order_law_failures: int
    kernel_factors: tuple[int, ...]
    torsion_factors: tuple[int, ...]
    kernel_matches_torsion: bool
    first_failure: CompatibilityResult | None

    @property
    def ok(self) -> bool:
        return self.compat_failures == 0 and self.order_law_failures == 0

    def to_json(self) -> dict:
        return {
            "type": self.label,
            "samples": self.samples,
            "compat_failures": self.compat_failures,
            "order_law_failures": self.order_law_failures,
            "kernel": list(self.kernel_factors),
            "lattice_torsion": list(self.torsion_factors),
            "kernel_matches_torsion": self.kernel_matches_torsion,
            "ok": self.ok,
        }


def compatibility_sweep(label: str, samples: int = 1000, seed: int = 7) -> SweepReport:
    """Random-point sweep of the action compatibility and the order law."""
    datum, autos = realize_type(label, "sc")
    bridge = coinvariants_bridge(datum, autos)
    omega = omega_by_cosets(bridge.restriction.folded)
    rng = random.Random(seed)
    compat_failures = 0
    order_failures = 0
    first_failure = None
    classes = list(omega.iota_images)
    for _ in range(samples):
        x = random_alcove_point(omega.alcove, rng)
        pt = ParameterPoint(x)
        for residues in classes:
            result = compatibility_check(omega, residues, pt)
            if not result.ok:
                compat_failures += 1
                if first_failure is None:
                    first_failure = result
        orders = stabilizer_preimage_orders(bridge, omega, pt)
        if not orders.law_holds:
            order_failures += 1
    return SweepReport(
        label,
        samples,
        compat_failures,
        order_failures,
        bridge.kernel_factors,
        bridge.torsion_factors,
        bridge.kernel_matches_torsion,
        first_failure,
    )
