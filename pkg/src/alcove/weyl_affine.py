"""Weyl groups, the extended affine Weyl group, alcoves, and their stabilizers.

The extended affine Weyl group is W acting on X ⊗ Q together with
translations by X; the affine Weyl group uses translations by the root
lattice only.  The stabilizer of the fundamental alcove is computed two
independent ways: by scanning W for elements whose recentred action is
integral (feasible when W is enumerable), and by extracting the unique
alcove-preserving element of each translation coset (scales to E7 and
beyond).  The two constructions are cross-checked in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd

from .errors import (
    AlcoveError,
    CapExceeded,
    DimensionMismatch,
    NonTermination,
    NotSemisimple,
)
from .lattice import (
    FiniteAbelianGroup,
    IntMatrix,
    IntVector,
    RationalVector,
    is_integral,
    rational_solve,
    to_int_vector,
    vec_add,
    vec_dot,
    vector,
)
from .rootdata import (
    BasedRootDatum,
    fundamental_group,
    highest_coroot,
)

DEFAULT_WEYL_CAP = 10_000_000


# ---------------------------------------------------------------------------
# elements


@dataclass(frozen=True)
class WeylElement:
    """Linear part of an (extended) affine Weyl element.

    ``word`` is a sequence of simple-reflection positions whose product is
    ``matrix``; it is None for elements produced without word tracking.
    """

    matrix: IntMatrix
    word: tuple[int, ...] | None = None


@dataclass(frozen=True)
class AffineMap:
    """x -> matrix @ x + translation on X ⊗ Q."""

    linear: WeylElement
    translation: RationalVector

    @property
    def matrix(self) -> IntMatrix:
        return self.linear.matrix

    def compose(self, other: "AffineMap") -> "AffineMap":
        """self after other: (w1,t1)(w2,t2) = (w1 w2, t1 + w1 t2)."""
        m = self.matrix @ other.matrix
        t = vec_add(self.matrix.apply(other.translation), self.translation)
        word = None
        if self.linear.word is not None and other.linear.word is not None:
            word = self.linear.word + other.linear.word
        return AffineMap(WeylElement(m, word), vector(t))

    def inverse(self) -> "AffineMap":
        minv = self.matrix.inverse_unimodular()
        t = tuple(-v for v in minv.apply(self.translation))
        word = tuple(reversed(self.linear.word)) if self.linear.word is not None else None
        return AffineMap(WeylElement(minv, word), vector(t))

    def is_identity(self) -> bool:
        return self.matrix.is_identity() and all(v == 0 for v in self.translation)

    def to_json(self) -> dict:
        from .lattice import format_fraction

        return {
            "matrix": [list(r) for r in self.matrix.data],
            "translation": [format_fraction(v) for v in self.translation],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "AffineMap":
        return cls(WeylElement(IntMatrix(obj["matrix"])), vector(obj["translation"]))


def identity_map(rank: int) -> AffineMap:
    return AffineMap(WeylElement(IntMatrix.identity(rank), ()), vector([0] * rank))


def translation_map(t) -> AffineMap:
    t = vector(t)
    return AffineMap(WeylElement(IntMatrix.identity(len(t)), ()), t)


def act(m: AffineMap, x) -> RationalVector:
    """Exact image of a rational point under an affine map."""
    x = vector(x)
    if len(x) != m.matrix.cols:
        raise DimensionMismatch(f"point length {len(x)} for rank {m.matrix.cols}")
    return tuple(a + b for a, b in zip(m.matrix.apply(x), m.translation))


# ---------------------------------------------------------------------------
# Weyl group enumeration


def _weyl_permutations(datum: BasedRootDatum, cap: int = DEFAULT_WEYL_CAP):
    """Enumerate W as permutations of the root list, with words.

    BFS over right multiplication by simple reflections; faithful because
    the roots span (semisimple required).  Returns an insertion-ordered dict
    mapping permutation tuples to words.
    """
    if not datum.is_semisimple():
        raise NotSemisimple("Weyl enumeration needs a semisimple datum")
    nroots = datum.n_roots
    gens = []
    for ridx in datum.simple:
        s = datum.reflection(ridx)
        perm = []
        for a in datum.roots:
            j = datum.root_index(s.apply(a))
            if j is None:
                raise AlcoveError("simple reflection does not permute the roots")
            perm.append(j)
        gens.append(tuple(perm))
    ident = tuple(range(nroots))
    seen: dict[tuple, tuple] = {ident: ()}
    queue = [ident]
    qi = 0
    rng_n = range(nroots)
    while qi < len(queue):
        p = queue[qi]
        qi += 1
        word = seen[p]
        for i, g in enumerate(gens):
            q = tuple(p[g[k]] for k in rng_n)
            if q not in seen:
                if len(seen) >= cap:
                    raise CapExceeded(
                        f"Weyl group exceeds the cap of {cap}", partial_count=len(seen)
                    )
                seen[q] = word + (i,)
                queue.append(q)
    return seen


def _matrix_factory(datum: BasedRootDatum):
    """Return a function turning a root permutation into its matrix on X."""
    alphas = datum.simple_roots()
    S = IntMatrix.from_columns(alphas, rows=datum.rank)
    det = S.det()
    # adjugate = det * S^{-1}, integral for any integer matrix
    n = datum.rank
    aug = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(S.data)]
    for c in range(n):
        pr = next(i for i in range(c, n) if aug[i][c] != 0)
        aug[c], aug[pr] = aug[pr], aug[c]
        pv = aug[c][c]
        aug[c] = [v / pv for v in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [v - f * w for v, w in zip(aug[i], aug[c])]
    adj_rows = []
    for i in range(n):
        row = []
        for j in range(n):
            v = aug[i][n + j] * det
            if v.denominator != 1:
                raise AlcoveError("adjugate of the base matrix is not integral")
            row.append(v.numerator)
        adj_rows.append(row)
    adj = IntMatrix(adj_rows)
    simple = datum.simple
    roots = datum.roots

    def matrix_of(perm) -> IntMatrix:
        B = IntMatrix.from_columns([roots[perm[s]] for s in simple], rows=n)
        num = B @ adj
        rows = []
        for r in num.data:
            row = []
            for v in r:
                q, rem = divmod(v, det)
                if rem:
                    raise AlcoveError("Weyl matrix is not integral")
                row.append(q)
            rows.append(row)
        return IntMatrix(rows)

    return matrix_of


def generate_weyl(datum: BasedRootDatum, cap: int = DEFAULT_WEYL_CAP):
    """Full enumeration of W as matrices on X, deduplicated, with words."""
    perms = _weyl_permutations(datum, cap)
    matrix_of = _matrix_factory(datum)
    return [WeylElement(matrix_of(p), w) for p, w in perms.items()]


# ---------------------------------------------------------------------------
# the fundamental alcove


@dataclass(frozen=True)
class Wall:
    """Affine functional x -> offset + <x, vec>, with its reflection."""

    vec: IntVector
    offset: int
    refl_matrix: IntMatrix
    refl_translation: IntVector


@dataclass(frozen=True)
class Alcove:
    """Closed fundamental alcove of an irreducible semisimple datum.

    Wall 0 carries the affine functional 1 - <., highest coroot>; walls
    1..l carry the simple coroots.  The weighted barycenter evaluates to
    1/h on every wall.
    """

    datum: BasedRootDatum
    walls: tuple[Wall, ...]
    vertices: tuple[RationalVector, ...]
    c0: RationalVector
    h: int
    marks: tuple[int, ...]
    top_coroot: IntVector
    top_root: IntVector

    def value(self, x, i: int) -> Fraction:
        w = self.walls[i]
        return w.offset + vec_dot(vector(x), w.vec)

    def values(self, x):
        x = vector(x)
        return tuple(w.offset + vec_dot(x, w.vec) for w in self.walls)

    def contains(self, x) -> bool:
        return all(v >= 0 for v in self.values(x))

    def contains_interior(self, x) -> bool:
        return all(v > 0 for v in self.values(x))

    def active_walls(self, x) -> tuple[int, ...]:
        return tuple(i for i, v in enumerate(self.values(x)) if v == 0)

    def face_barycenter(self, active) -> RationalVector:
        """Barycenter of the face on which the given walls vanish."""
        active = set(active)
        if any(i < 0 or i >= len(self.walls) for i in active):
            raise DimensionMismatch(f"wall index out of range 0..{len(self.walls) - 1}")
        idx = [i for i in range(len(self.walls)) if i not in active]
        if not idx:
            raise DimensionMismatch("no vertex spans the requested face")
        k = Fraction(1, len(idx))
        acc = [Fraction(0)] * self.datum.rank
        for i in idx:
            for j, v in enumerate(self.vertices[i]):
                acc[j] += v
        return tuple(a * k for a in acc)


def weighted_barycenter(datum: BasedRootDatum) -> RationalVector:
    """The point where every alcove wall functional equals 1/h."""
    top_cv, marks, _ = highest_coroot(datum)
    h = 1 + sum(marks)
    covs = datum.simple_coroots()
    rhs = [Fraction(1, h)] * len(covs)
    sol, kernel = rational_solve(covs, rhs, ncols=datum.rank)
    if sol is None or kernel:
        raise NotSemisimple("barycenter equations are not uniquely solvable")
    if 1 - vec_dot(sol, top_cv) != Fraction(1, h):
        raise AlcoveError("barycenter fails the affine wall equation")
    return sol


def fundamental_alcove(datum: BasedRootDatum) -> Alcove:
    """Build the closed alcove, its vertices, and the weighted barycenter."""
    top_cv, marks, top_root = highest_coroot(datum)
    h = 1 + sum(marks)
    c0 = weighted_barycenter(datum)
    n = datum.rank
    covs = datum.simple_coroots()

    walls = []
    s_beta_idx = datum.root_index(top_root)
    walls.append(
        Wall(
            tuple(-v for v in top_cv),
            1,
            datum.reflection(s_beta_idx),
            top_root,
        )
    )
    for pos, ridx in enumerate(datum.simple):
        walls.append(Wall(covs[pos], 0, datum.reflection(ridx), (0,) * n))

    vertices = [vector([0] * n)]
    for i in range(len(covs)):
        rows = [covs[j] for j in range(len(covs)) if j != i] + [top_cv]
        rhs = [Fraction(0)] * (len(covs) - 1) + [Fraction(1)]
        sol, kernel = rational_solve(rows, rhs, ncols=n)
        if sol is None or kernel:
            raise NotSemisimple("alcove vertex equations are not uniquely solvable")
        vertices.append(sol)

    alc = Alcove(
        datum,
        tuple(walls),
        tuple(vertices),
        c0,
        h,
        tuple(marks),
        top_cv,
        top_root,
    )
    if alc.values(c0) != tuple([Fraction(1, h)] * len(walls)):
        raise AlcoveError("barycenter does not evaluate to 1/h on every wall")
    return alc


# ---------------------------------------------------------------------------
# alcove reduction


def reduce_to_alcove(alcove: Alcove, x, max_steps: int = 1_000_000):
    """Map x into the closed alcove by affine simple reflections.

    Repeatedly reflects in the most-violated wall (ties to the lowest wall
    index).  Returns ``(x0, witness)`` with witness in the affine Weyl
    group (translations in the root lattice) and witness(x) = x0.  The step
    cap is a bug guard; valid input never reaches it.
    """
    x = vector(x)
    n = alcove.datum.rank
    if len(x) != n:
        raise DimensionMismatch(f"point length {len(x)} for rank {n}")
    den = reduce(lambda d, c: d * c.denominator // gcd(d, c.denominator), x, 1)
    num = [int(c * den) for c in x]
    M = [[int(i == j) for j in range(n)] for i in range(n)]
    t = [0] * n
    walls = alcove.walls
    rng_n = range(n)
    steps = 0
    while True:
        worst = -1
        worst_val = 0
        for idx, w in enumerate(walls):
            v = w.offset * den + sum(a * b for a, b in zip(w.vec, num))
            if v < worst_val:
                worst_val = v
                worst = idx
        if worst < 0:
            break
        steps += 1
        if steps > max_steps:
            raise NonTermination(f"alcove reduction exceeded {max_steps} steps")
        w = walls[worst]
        L = w.refl_matrix.data
        c = w.refl_translation
        num = [sum(L[i][k] * num[k] for k in rng_n) + den * c[i] for i in rng_n]
        M = [[sum(L[i][k] * M[k][j] for k in rng_n) for j in rng_n] for i in rng_n]
        t = [sum(L[i][k] * t[k] for k in rng_n) + c[i] for i in rng_n]
    x0 = tuple(Fraction(v, den) for v in num)
    witness = AffineMap(WeylElement(IntMatrix(M)), vector(t))
    if act(witness, x) != x0:
        raise AlcoveError("reduction witness does not map the input to the output")
    return x0, witness


# ---------------------------------------------------------------------------
# the alcove stabilizer


@dataclass(frozen=True)
class OmegaGroup:
    """Stabilizer of the closed alcove inside the extended affine Weyl group.

    Elements are sorted by their class in X/Q, so the two construction
    routes produce literally comparable lists.  ``iota_images[i]`` is the
    residue tuple of element i in the invariant-factor presentation of X/Q.
    """

    alcove: Alcove
    elements: tuple[AffineMap, ...]
    table: tuple[tuple[int, ...], ...]
    iota_images: tuple[IntVector, ...]
    quotient: FiniteAbelianGroup

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        return self.quotient.invariant_factors

    @property
    def identity_index(self) -> int:
        return 0

    def inverse_index(self, i: int) -> int:
        row = self.table[i]
        for j, k in enumerate(row):
            if k == 0:
                return j
        raise AlcoveError("element has no inverse in the table")

    def index_by_iota(self, residues) -> int:
        residues = tuple(int(r) for r in residues)
        try:
            return self.iota_images.index(residues)
        except ValueError:
            raise AlcoveError(f"no element with class {residues}") from None

    def check_iota(self) -> dict:
        """Cross-check the two descriptions of the class map on elements.

        The recentred formula sends an element with tangent part w to the
        class of (w^{-1} - 1)c0; the coset formula reads off the class of
        the translation part.  Both must agree, be bijective onto X/Q, and
        be a homomorphism against the multiplication table.
        """
        G = self.quotient
        c0 = self.alcove.c0
        agree = True
        for i in range(self.order):
            j = self.inverse_index(i)
            winv = self.elements[j].matrix
            vec = tuple(a - b for a, b in zip(winv.apply(c0), c0))
            if not is_integral(vec):
                agree = False
                break
            if G.project(to_int_vector(vec)) != self.iota_images[i]:
                agree = False
                break
        bijective = len(set(self.iota_images)) == self.order == G.order
        homomorphism = True
        for i in range(self.order):
            for j in range(self.order):
                expected = G.add(self.iota_images[i], self.iota_images[j]) if G.invariant_factors else ()
                if self.iota_images[self.table[i][j]] != expected:
                    homomorphism = False
        return {"formulas_agree": agree, "bijective": bijective, "homomorphism": homomorphism}

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "factors": list(self.invariant_factors),
            "iota_images": [list(r) for r in self.iota_images],
            "elements": [m.to_json() for m in self.elements],
        }


def _assemble_omega(alcove: Alcove, G: FiniteAbelianGroup, maps) -> OmegaGroup:
    entries = []
    for m in maps:
        t_int = to_int_vector(m.translation)
        entries.append((G.project(t_int), m))
    entries.sort(key=lambda e: e[0])
    residues = tuple(e[0] for e in entries)
    elements = tuple(e[1] for e in entries)
    if len(set(residues)) != len(residues):
        raise AlcoveError("distinct stabilizer elements share a class in X/Q")
    if len(elements) != G.order:
        raise AlcoveError(
            f"alcove stabilizer has order {len(elements)}, but |X/Q| = {G.order}"
        )
    c0 = alcove.c0
    vset = set(alcove.vertices)
    for m in elements:
        if act(m, c0) != c0:
            raise AlcoveError("stabilizer element moves the weighted barycenter")
        if {act(m, v) for v in alcove.vertices} != vset:
            raise AlcoveError("stabilizer element does not permute the alcove vertices")
    lookup = {(m.matrix, m.translation): i for i, m in enumerate(elements)}
    table = []
    for a in elements:
        row = []
        for b in elements:
            c = a.compose(b)
            k = lookup.get((c.matrix, c.translation))
            if k is None:
                raise AlcoveError("alcove stabilizer is not closed under composition")
            row.append(k)
        table.append(tuple(row))
    return OmegaGroup(alcove, elements, tuple(table), residues, G)


def omega_by_barycenter(datum: BasedRootDatum, cap: int = DEFAULT_WEYL_CAP) -> OmegaGroup:
    """Alcove stabilizer by scanning W for recentred-integral elements.

    An element w contributes exactly when (w^{-1} - 1)c0 lies in X; it then
    acts as x -> w(x - c0) + c0.  Requires enumerating W, so it is capped;
    use the coset construction for large groups.
    """
    alcove = fundamental_alcove(datum)
    fg = fundamental_group(datum)
    if fg.free_rank:
        raise NotSemisimple("alcove stabilizer needs a semisimple datum")
    G = fg.torsion
    perms = _weyl_permutations(datum, cap)
    matrix_of = _matrix_factory(datum)

    alphas = datum.simple_roots()
    A_rows = list(zip(*alphas))
    mu, _ = rational_solve(A_rows, alcove.c0, ncols=len(alphas))
    if mu is None:
        raise NotSemisimple("barycenter lies outside the root span")
    L = reduce(lambda d, c: d * c.denominator // gcd(d, c.denominator), mu, 1)
    z = [int(m * L) for m in mu]
    c0L = [int(c * L) for c in alcove.c0]
    n = datum.rank
    simple = datum.simple
    roots = datum.roots

    hits = []
    for p, word in perms.items():
        acc = [0] * n
        for j, s in enumerate(simple):
            zj = z[j]
            if zj:
                r = roots[p[s]]
                for k in range(n):
                    acc[k] += zj * r[k]
        ok = True
        for k in range(n):
            if (c0L[k] - acc[k]) % L:
                ok = False
                break
        if ok:
            tvec = tuple((c0L[k] - acc[k]) // L for k in range(n))
            hits.append(AffineMap(WeylElement(matrix_of(p), word), vector(tvec)))
    return _assemble_omega(alcove, G, hits)


def omega_by_cosets(datum: BasedRootDatum) -> OmegaGroup:
    """Alcove stabilizer extracted from the translation cosets of X/Q.

    For each class, translate the barycenter by a representative and reduce
    back into the alcove; composing the witness with the translation gives
    the unique alcove-preserving element of that coset.  Never enumerates W.
    """
    alcove = fundamental_alcove(datum)
    fg = fundamental_group(datum)
    if fg.free_rank:
        raise NotSemisimple("alcove stabilizer needs a semisimple datum")
    G = fg.torsion
    maps = []
    for residues in G.elements():
        x_rep = G.representative(residues)
        start = vec_add(vector(x_rep), alcove.c0)
        _, witness = reduce_to_alcove(alcove, start)
        omega = witness.compose(translation_map(x_rep))
        maps.append(omega)
    return _assemble_omega(alcove, G, maps)


# ---------------------------------------------------------------------------
# sampling helper (used by sweeps and the CLI)


def random_alcove_point(alcove: Alcove, rng, boundary_bias: float = 0.35) -> RationalVector:
    """Seeded random rational point of the closed alcove.

    A random convex combination of the vertices; with probability
    ``boundary_bias`` a vertex weight is zeroed, so faces get sampled too.
    """
    weights = []
    for _ in alcove.vertices:
        if rng.random() < boundary_bias:
            weights.append(0)
        else:
            weights.append(rng.randint(1, 9))
    if not any(weights):
        weights[rng.randrange(len(weights))] = 1
    total = sum(weights)
    acc = [Fraction(0)] * alcove.datum.rank
    for w, v in zip(weights, alcove.vertices):
        if w:
            for k, c in enumerate(v):
                acc[k] += w * c
    return tuple(a / total for a in acc)
