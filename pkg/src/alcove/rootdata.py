"""Based root data: construction, validation, and basic invariants.

Coordinates are chosen so that everything stays integral: adjoint data use
the simple roots as the basis of the character lattice, simply connected
data use the simple coroots as the basis of the cocharacter lattice (so the
character lattice carries the fundamental-weight basis).  The pairing is
always the standard dot product between a lattice and its dual basis.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .errors import (
    DimensionMismatch,
    InvalidRank,
    NotAnAutomorphism,
    NotIrreducible,
    NotSemisimple,
    Unrecognized,
)
from .lattice import (
    IntMatrix,
    LatticeQuotient,
    cokernel,
    is_integral,
    rational_solve,
    smith_normal_form,
    to_int_vector,
    vec_dot,
)

SERIES_RANKS = {
    "A": range(1, 1000),
    "B": range(2, 1000),
    "C": range(2, 1000),
    "D": range(2, 1000),
    "E": (6, 7, 8),
    "F": (4,),
    "G": (2,),
}

_TYPE_RE = re.compile(r"^([123]?)(BC|[A-G])(\d+)$")


@dataclass(frozen=True)
class CartanType:
    """Series label, rank, and twist order (1 untwisted, 2 or 3 twisted)."""

    series: str
    rank: int
    twist: int = 1

    def __post_init__(self):
        if self.series == "BC":
            if self.rank < 1:
                raise InvalidRank(f"BC{self.rank}")
        elif self.series not in SERIES_RANKS or self.rank not in SERIES_RANKS[self.series]:
            raise InvalidRank(f"{self.series}{self.rank}")
        if self.twist not in (1, 2, 3):
            raise InvalidRank(f"twist order {self.twist}")
        if self.twist == 2:
            ok = (
                (self.series == "A" and self.rank >= 2)
                or (self.series == "D" and self.rank >= 3)
                or (self.series == "E" and self.rank == 6)
            )
            if not ok:
                raise InvalidRank(f"no order-2 twist of {self.series}{self.rank}")
        if self.twist == 3 and (self.series, self.rank) != ("D", 4):
            raise InvalidRank(f"no order-3 twist of {self.series}{self.rank}")

    def __str__(self):
        prefix = str(self.twist) if self.twist != 1 else ""
        return f"{prefix}{self.series}{self.rank}"


def parse_type(label: str) -> CartanType:
    """Parse labels like 'A3', '2A5', '3D4', 'E6', 'BC2'."""
    m = _TYPE_RE.match(label.strip())
    if not m:
        raise InvalidRank(f"cannot parse type label {label!r}")
    twist = int(m.group(1)) if m.group(1) else 1
    return CartanType(m.group(2), int(m.group(3)), twist)


def cartan_matrix(series: str, rank: int) -> IntMatrix:
    """Cartan pairings C[i][j] = <alpha_i, coroot_j> in Bourbaki numbering."""
    if series not in SERIES_RANKS or rank not in SERIES_RANKS[series]:
        raise InvalidRank(f"{series}{rank}")
    C = [[2 if i == j else 0 for j in range(rank)] for i in range(rank)]

    def bond(i, j, cij=-1, cji=-1):
        C[i][j] = cij
        C[j][i] = cji

    if series == "A":
        for i in range(rank - 1):
            bond(i, i + 1)
    elif series == "B":
        for i in range(rank - 2):
            bond(i, i + 1)
        bond(rank - 2, rank - 1, -2, -1)  # last node short
    elif series == "C":
        for i in range(rank - 2):
            bond(i, i + 1)
        bond(rank - 2, rank - 1, -1, -2)  # last node long
    elif series == "D":
        for i in range(rank - 2):
            bond(i, i + 1)
        if rank >= 3:
            bond(rank - 3, rank - 1)
    elif series == "E":
        chain = [0, 2, 3, 4, 5, 6, 7][: rank - 1]
        for a, b in zip(chain, chain[1:]):
            bond(a, b)
        bond(1, 3)
    elif series == "F":
        bond(0, 1)
        bond(1, 2, -2, -1)
        bond(2, 3)
    elif series == "G":
        bond(0, 1, -1, -3)
    return IntMatrix(C)


class BasedRootDatum:
    """The tuple (X, R, Delta, Xv, Rv, Deltav) in integer coordinates.

    ``roots[i]`` pairs with ``coroots[i]``; ``simple`` lists the indices of
    the base inside ``roots``.  The pairing between X and its dual is the
    coordinate dot product.
    """

    def __init__(self, rank, roots, coroots, simple, reduced=True):
        self.rank = int(rank)
        self.roots = tuple(tuple(int(v) for v in r) for r in roots)
        self.coroots = tuple(tuple(int(v) for v in c) for c in coroots)
        self.simple = tuple(int(i) for i in simple)
        self.reduced = bool(reduced)
        if len(self.roots) != len(self.coroots):
            raise DimensionMismatch("roots and coroots must be parallel lists")
        for r in self.roots:
            if len(r) != self.rank:
                raise DimensionMismatch("root coordinate length differs from rank")
        for c in self.coroots:
            if len(c) != self.rank:
                raise DimensionMismatch("coroot coordinate length differs from rank")
        for i in self.simple:
            if not 0 <= i < len(self.roots):
                raise DimensionMismatch("simple index out of range")
        self._root_index = {r: i for i, r in enumerate(self.roots)}

    # -- basic accessors

    @property
    def n_roots(self) -> int:
        return len(self.roots)

    def simple_roots(self):
        return [self.roots[i] for i in self.simple]

    def simple_coroots(self):
        return [self.coroots[i] for i in self.simple]

    def root_index(self, root):
        return self._root_index.get(tuple(root))

    @cached_property
    def cartan(self) -> IntMatrix:
        """Pairing matrix of the base: entry (i, j) is <alpha_i, coroot_j>."""
        alphas = self.simple_roots()
        covs = self.simple_coroots()
        return IntMatrix([[vec_dot(a, c) for c in covs] for a in alphas], cols=len(covs))

    # -- structural properties

    @cached_property
    def semisimple_rank(self) -> int:
        if not self.simple:
            return 0
        return smith_normal_form(IntMatrix.from_columns(self.simple_roots(), rows=self.rank)).rank

    def is_semisimple(self) -> bool:
        return self.semisimple_rank == self.rank

    @cached_property
    def components(self) -> tuple[tuple[int, ...], ...]:
        """Connected components of the Dynkin graph, as simple positions."""
        l = len(self.simple)
        C = self.cartan
        seen = [False] * l
        comps = []
        for s in range(l):
            if seen[s]:
                continue
            comp = []
            stack = [s]
            seen[s] = True
            while stack:
                i = stack.pop()
                comp.append(i)
                for j in range(l):
                    if not seen[j] and (C.data[i][j] or C.data[j][i]):
                        seen[j] = True
                        stack.append(j)
            comps.append(tuple(sorted(comp)))
        return tuple(comps)

    def is_irreducible(self) -> bool:
        return len(self.components) == 1 and len(self.simple) > 0

    @cached_property
    def root_simple_coords(self) -> tuple[tuple[Fraction, ...], ...]:
        """Coordinates of each root over the base; exact rational solve."""
        alphas = self.simple_roots()
        A_rows = list(zip(*alphas)) if alphas else []
        out = []
        for r in self.roots:
            sol, _ = rational_solve(A_rows, r, ncols=len(alphas))
            if sol is None:
                raise NotSemisimple("root outside the span of the base")
            out.append(sol)
        return tuple(out)

    # -- reflection matrices

    def reflection(self, root_idx: int) -> IntMatrix:
        """Matrix on X of the reflection in the given root."""
        a = self.roots[root_idx]
        av = self.coroots[root_idx]
        n = self.rank
        return IntMatrix([[int(i == j) - a[i] * av[j] for j in range(n)] for i in range(n)], cols=n)

    def dual_reflection(self, root_idx: int) -> IntMatrix:
        """Matrix on the dual lattice of the same reflection."""
        a = self.roots[root_idx]
        av = self.coroots[root_idx]
        n = self.rank
        return IntMatrix([[int(i == j) - av[i] * a[j] for j in range(n)] for i in range(n)], cols=n)

    # -- serialization

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "roots": [list(r) for r in self.roots],
            "coroots": [list(c) for c in self.coroots],
            "simple": list(self.simple),
            "bijection": list(range(self.n_roots)),
            "reduced": self.reduced,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "BasedRootDatum":
        bij = obj.get("bijection") or list(range(len(obj["roots"])))
        coroots = [obj["coroots"][j] for j in bij]
        return cls(obj["rank"], obj["roots"], coroots, obj["simple"], obj.get("reduced", True))

    def __repr__(self):
        return f"BasedRootDatum(rank={self.rank}, roots={self.n_roots}, simple={len(self.simple)})"


# ---------------------------------------------------------------------------
# construction


def _reflection_closure(simple_pairs):
    """Close a simple system under its reflections, tracking coroots."""
    pairs = list(simple_pairs)
    index = {p[0]: i for i, p in enumerate(pairs)}
    queue = list(range(len(pairs)))
    while queue:
        i = queue.pop(0)
        a, av = pairs[i]
        for sa, sav in simple_pairs:
            n = vec_dot(a, sav)
            m = vec_dot(sa, av)
            b = tuple(x - n * y for x, y in zip(a, sa))
            bv = tuple(x - m * y for x, y in zip(av, sav))
            if b not in index:
                index[b] = len(pairs)
                pairs.append((b, bv))
                queue.append(len(pairs) - 1)
    return pairs


def build_datum(ctype: CartanType | str, isogeny: str = "sc") -> BasedRootDatum:
    """Build the based root datum of an untwisted type.

    ``isogeny`` is 'sc' (simply connected: simple coroots form the basis of
    the dual lattice) or 'adjoint' (simple roots form the basis of X).
    Roots are enumerated by reflection closure from the base, not from
    hard-coded tables.
    """
    if isinstance(ctype, str):
        ctype = parse_type(ctype)
    if ctype.twist != 1:
        raise InvalidRank(f"{ctype} is twisted; build the untwisted datum and fold it")
    if ctype.series == "BC":
        raise InvalidRank("BC data arise from folding, not direct construction")
    C = cartan_matrix(ctype.series, ctype.rank)
    n = ctype.rank
    eye = IntMatrix.identity(n)
    if isogeny == "adjoint":
        simple_pairs = [(eye.row(i), C.column(i)) for i in range(n)]
    elif isogeny == "sc":
        simple_pairs = [(C.row(i), eye.column(i)) for i in range(n)]
    else:
        raise ValueError(f"unknown isogeny {isogeny!r}")
    pairs = _reflection_closure(simple_pairs)
    roots = [p[0] for p in pairs]
    coroots = [p[1] for p in pairs]
    return BasedRootDatum(n, roots, coroots, range(n), reduced=True)


def torus_datum(rank: int) -> BasedRootDatum:
    """Central torus factor: a lattice with no roots."""
    return BasedRootDatum(rank, [], [], [], reduced=True)


def direct_sum(*data: BasedRootDatum) -> BasedRootDatum:
    """Block-diagonal direct sum of root data."""
    rank = sum(d.rank for d in data)
    roots = []
    coroots = []
    simple = []
    offset = 0
    count = 0
    for d in data:
        for r in d.roots:
            roots.append((0,) * offset + r + (0,) * (rank - offset - d.rank))
        for c in d.coroots:
            coroots.append((0,) * offset + c + (0,) * (rank - offset - d.rank))
        simple.extend(count + i for i in d.simple)
        count += d.n_roots
        offset += d.rank
    return BasedRootDatum(rank, roots, coroots, simple, reduced=all(d.reduced for d in data))


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    message: str = ""
    witness: tuple = ()


def validate(datum: BasedRootDatum) -> ValidationReport:
    """Check every root-datum axiom; report the first violation found."""
    roots, coroots = datum.roots, datum.coroots

    if len(set(roots)) != len(roots):
        return ValidationReport(False, "duplicate roots")
    if len(set(coroots)) != len(coroots):
        return ValidationReport(False, "duplicate coroots")

    for i, (a, av) in enumerate(zip(roots, coroots)):
        p = vec_dot(a, av)
        if p != 2:
            return ValidationReport(False, f"<alpha, coroot> = {p} != 2", (i,))

    pair_index = {a: i for i, a in enumerate(roots)}
    for i, a in enumerate(roots):
        j = pair_index.get(tuple(-x for x in a))
        if j is None:
            return ValidationReport(False, "root set not symmetric under negation", (i,))
        if coroots[j] != tuple(-x for x in coroots[i]):
            return ValidationReport(False, "coroot of -alpha is not -coroot(alpha)", (i,))

    alphas = datum.simple_roots()
    if alphas:
        A = IntMatrix.from_columns(alphas, rows=datum.rank)
        if smith_normal_form(A).rank != len(alphas):
            return ValidationReport(False, "base is linearly dependent")

    try:
        coords = datum.root_simple_coords
    except NotSemisimple:
        return ValidationReport(False, "some root lies outside the span of the base")
    for i, cs in enumerate(coords):
        if not is_integral(cs):
            return ValidationReport(False, "root is not an integer combination of the base", (i,))
        signs = {1 if c > 0 else -1 for c in cs if c != 0}
        if len(signs) > 1:
            return ValidationReport(False, "root has mixed signs over the base", (i,))

    if datum.reduced:
        for i, a in enumerate(roots):
            if tuple(2 * x for x in a) in pair_index:
                return ValidationReport(False, "datum marked reduced but contains a doubled root", (i,))

    for i in range(len(roots)):
        s = datum.reflection(i)
        sv = datum.dual_reflection(i)
        for j, b in enumerate(roots):
            k = pair_index.get(tuple(s.apply(b)))
            if k is None:
                return ValidationReport(False, "reflection does not permute the roots", (i, j))
            if tuple(sv.apply(coroots[j])) != coroots[k]:
                return ValidationReport(False, "dual reflection breaks the root-coroot bijection", (i, j))

    return ValidationReport(True)


# ---------------------------------------------------------------------------
# invariants of an irreducible component


def _require_irreducible(datum: BasedRootDatum):
    if not datum.is_irreducible():
        raise NotIrreducible("operation requires an irreducible datum")


def highest_coroot(datum: BasedRootDatum):
    """Highest coroot of an irreducible datum.

    Returns ``(coroot, marks, root)`` where ``marks`` are the coordinates of
    the highest coroot over the simple coroots and ``root`` is its partner
    under the root-coroot bijection.  Found as the dominant coroot of
    maximal height, which also covers non-reduced (BC) systems.
    """
    _require_irreducible(datum)
    covs = datum.simple_coroots()
    B_rows = list(zip(*covs))
    alphas = datum.simple_roots()
    best = None
    tie = False
    for i, cv in enumerate(datum.coroots):
        if any(vec_dot(a, cv) < 0 for a in alphas):
            continue  # not dominant
        sol, _ = rational_solve(B_rows, cv, ncols=len(covs))
        if sol is None:
            raise NotSemisimple("coroot outside the span of the simple coroots")
        height = sum(sol)
        if best is None or height > best[0]:
            best = (height, i, sol)
            tie = False
        elif height == best[0]:
            tie = True
    if best is None or tie:
        raise NotIrreducible("highest coroot is not unique; datum is not irreducible")
    _, idx, sol = best
    if not is_integral(sol) or any(c < 0 for c in sol):
        raise NotSemisimple("highest coroot has non-integral marks")
    return datum.coroots[idx], to_int_vector(sol), datum.roots[idx]


def coxeter_number(datum: BasedRootDatum) -> int:
    """1 plus the sum of the marks of the highest coroot."""
    _, marks, _ = highest_coroot(datum)
    return 1 + sum(marks)


def fundamental_group(datum: BasedRootDatum) -> LatticeQuotient:
    """X modulo the root lattice: torsion part plus free rank."""
    Q = IntMatrix.from_columns(datum.simple_roots(), rows=datum.rank)
    return cokernel(Q)


# ---------------------------------------------------------------------------
# type identification


def _cartan_match(C: IntMatrix, R: IntMatrix) -> bool:
    """Is C equal to R after a simultaneous row/column permutation?"""
    n = C.rows
    if R.rows != n:
        return False
    if sorted(sorted(row) for row in C.data) != sorted(sorted(row) for row in R.data):
        return False

    assignment = [-1] * n
    used = [False] * n

    def extend(i):
        if i == n:
            return True
        for t in range(n):
            if used[t]:
                continue
            ok = C.data[i][i] == R.data[t][t]
            if ok:
                for j in range(i):
                    u = assignment[j]
                    if C.data[i][j] != R.data[t][u] or C.data[j][i] != R.data[u][t]:
                        ok = False
                        break
            if ok:
                assignment[i] = t
                used[t] = True
                if extend(i + 1):
                    return True
                used[t] = False
                assignment[i] = -1
        return False

    return extend(0)


# Trying C before B makes the rank-2 coincidence B2 = C2 resolve to C2; A
# comes first so that D3 resolves to A3.
_CANDIDATE_ORDER = ("A", "C", "B", "D", "E", "F", "G")


def identify_type(datum: BasedRootDatum):
    """Cartan type of every irreducible component.

    Components containing doubled roots are labelled BC.  Coinciding
    presentations get a canonical label (D3 -> A3, B2 -> C2).  Returns a
    list of ``(CartanType, simple_positions)`` pairs.
    """
    results = []
    root_support = datum.root_simple_coords
    alphas = datum.simple_roots()
    covs = datum.simple_coroots()
    for comp in datum.components:
        C = IntMatrix(
            [[vec_dot(alphas[i], covs[j]) for j in comp] for i in comp],
            cols=len(comp),
        )
        rank = len(comp)
        comp_root_idx = [i for i, cs in enumerate(root_support) if any(cs[p] != 0 for p in comp)]
        rset = {datum.roots[i] for i in comp_root_idx}
        doubled = any(tuple(2 * x for x in datum.roots[i]) in rset for i in comp_root_idx)
        if doubled:
            ref = IntMatrix([[2]]) if rank == 1 else cartan_matrix("B", rank)
            if not _cartan_match(C, ref):
                raise Unrecognized("non-reduced component with unexpected base pairings", C)
            results.append((CartanType("BC", rank), comp))
            continue
        found = None
        for series in _CANDIDATE_ORDER:
            if rank not in SERIES_RANKS[series]:
                continue
            if series == "D" and rank == 2:
                continue  # reducible, never an irreducible component
            if _cartan_match(C, cartan_matrix(series, rank)):
                found = CartanType(series, rank)
                break
        if found is None:
            raise Unrecognized(f"rank-{rank} component matches no reference type", C)
        results.append((found, comp))
    return results


# ---------------------------------------------------------------------------
# automorphisms


@dataclass(frozen=True)
class DatumAutomorphism:
    """Lattice automorphism preserving the based structure.

    ``matrix`` acts on X, ``perm`` is the induced permutation of the simple
    positions, and ``order`` is the multiplicative order of the matrix.
    """

    matrix: IntMatrix
    perm: tuple[int, ...]
    order: int

    @cached_property
    def dual_matrix(self) -> IntMatrix:
        """Contragredient action on the dual lattice."""
        return self.matrix.inverse_unimodular().T

    def root_permutation(self, datum: BasedRootDatum) -> tuple[int, ...]:
        out = []
        for a in datum.roots:
            j = datum.root_index(self.matrix.apply(a))
            if j is None:
                raise NotAnAutomorphism("matrix does not permute the roots")
            out.append(j)
        return tuple(out)


def identity_automorphism(datum: BasedRootDatum) -> DatumAutomorphism:
    return DatumAutomorphism(IntMatrix.identity(datum.rank), tuple(range(len(datum.simple))), 1)


def diagram_automorphism(datum: BasedRootDatum, perm) -> DatumAutomorphism:
    """The lattice automorphism induced by a base permutation.

    ``perm[i]`` is the position simple position i is sent to.  The
    permutation must preserve the Cartan pairings, and the datum must be
    semisimple so the images of the base pin the map down.
    """
    perm = tuple(int(p) for p in perm)
    l = len(datum.simple)
    if sorted(perm) != list(range(l)):
        raise NotAnAutomorphism("not a permutation of the simple positions")
    C = datum.cartan
    for i in range(l):
        for j in range(l):
            if C.data[perm[i]][perm[j]] != C.data[i][j]:
                raise NotAnAutomorphism("permutation does not preserve the Cartan pairings")
    if not datum.is_semisimple():
        raise NotSemisimple("diagram automorphisms need a semisimple datum")

    alphas = datum.simple_roots()
    n = datum.rank
    # theta alpha_i = alpha_{perm(i)}, so row r of theta solves
    # A^T x = (r-th coordinates of the permuted base).
    theta_rows = []
    A_T_rows = [tuple(a) for a in alphas]  # rows of A^T
    for r in range(n):
        rhs = [alphas[perm[i]][r] for i in range(l)]
        sol, kernel = rational_solve(A_T_rows, rhs, ncols=n)
        if sol is None or kernel:
            raise NotAnAutomorphism("no unique linear map realizes the permutation")
        if not is_integral(sol):
            raise NotAnAutomorphism("induced map is not integral on the lattice")
        theta_rows.append(to_int_vector(sol))
    theta = IntMatrix(theta_rows)
    if abs(theta.det()) != 1:
        raise NotAnAutomorphism("induced map is not a lattice automorphism")

    perm_roots = {}
    for i, a in enumerate(datum.roots):
        j = datum.root_index(theta.apply(a))
        if j is None:
            raise NotAnAutomorphism("induced map does not permute the roots")
        perm_roots[i] = j
    theta_dual = theta.inverse_unimodular().T
    for i, j in perm_roots.items():
        if tuple(theta_dual.apply(datum.coroots[i])) != datum.coroots[j]:
            raise NotAnAutomorphism("induced map breaks the root-coroot bijection")

    order = 1
    power = theta
    while not power.is_identity():
        power = power @ theta
        order += 1
        if order > 24:
            raise NotAnAutomorphism("automorphism order exceeds the expected bound")
    return DatumAutomorphism(theta, perm, order)


def twist_permutation(ctype: CartanType) -> tuple[int, ...]:
    """Canonical base permutation realizing a twisted type label."""
    s, n, t = ctype.series, ctype.rank, ctype.twist
    if t == 1:
        return tuple(range(n))
    if s == "A" and t == 2:
        return tuple(n - 1 - i for i in range(n))
    if s == "D" and t == 2:
        perm = list(range(n))
        perm[n - 2], perm[n - 1] = perm[n - 1], perm[n - 2]
        return tuple(perm)
    if s == "D" and n == 4 and t == 3:
        # rotate the three outer nodes around the centre node 1
        return (2, 1, 3, 0)
    if s == "E" and n == 6 and t == 2:
        return (5, 1, 4, 3, 2, 0)
    raise InvalidRank(f"no canonical twist for {ctype}")
