"""Exact integer-lattice algebra.

Smith normal form with transform tracking, lattice quotients (cokernels),
coinvariants, torsion, membership tests, and subgroup enumeration for finite
abelian groups.  Everything runs over Python's arbitrary-precision integers
and ``fractions.Fraction``; no floating point is used anywhere.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import DimensionMismatch, NonUnimodular, TooLarge

IntVector = tuple[int, ...]
RationalVector = tuple[Fraction, ...]

DEFAULT_SUBGROUP_CAP = 64


# ---------------------------------------------------------------------------
# rational vectors


def vector(coords) -> RationalVector:
    """Coerce an iterable of ints, Fractions or 'p/q' strings to a vector."""
    return tuple(Fraction(c) for c in coords)


def vec_add(x, y):
    if len(x) != len(y):
        raise DimensionMismatch(f"vector lengths {len(x)} and {len(y)} differ")
    return tuple(a + b for a, b in zip(x, y))


def vec_sub(x, y):
    if len(x) != len(y):
        raise DimensionMismatch(f"vector lengths {len(x)} and {len(y)} differ")
    return tuple(a - b for a, b in zip(x, y))


def vec_scale(c, x):
    return tuple(c * a for a in x)


def vec_dot(x, y):
    if len(x) != len(y):
        raise DimensionMismatch(f"vector lengths {len(x)} and {len(y)} differ")
    return sum(a * b for a, b in zip(x, y))


def is_integral(x) -> bool:
    return all(Fraction(a).denominator == 1 for a in x)


def to_int_vector(x) -> IntVector:
    out = []
    for a in x:
        f = Fraction(a)
        if f.denominator != 1:
            raise ValueError(f"entry {a} is not an integer")
        out.append(f.numerator)
    return tuple(out)


def format_fraction(q) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# integer matrices


class IntMatrix:
    """Immutable integer matrix with exact arithmetic.

    Entries are plain Python ints, so there is no overflow; Smith pivots can
    grow well past 64 bits without trouble.
    """

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data, cols: int | None = None):
        rows = tuple(tuple(int(v) for v in row) for row in data)
        ncols = len(rows[0]) if rows else (0 if cols is None else cols)
        for row in rows:
            if len(row) != ncols:
                raise DimensionMismatch("ragged rows")
        object.__setattr__(self, "rows", len(rows))
        object.__setattr__(self, "cols", ncols)
        object.__setattr__(self, "data", rows)

    def __setattr__(self, name, value):
        raise AttributeError("IntMatrix is immutable")

    # -- constructors

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, m: int, n: int) -> "IntMatrix":
        return cls([[0] * n for _ in range(m)], cols=n)

    @classmethod
    def from_columns(cls, columns, rows: int | None = None) -> "IntMatrix":
        columns = [tuple(c) for c in columns]
        if columns:
            m = len(columns[0])
        elif rows is not None:
            m = rows
        else:
            raise DimensionMismatch("rows required for an empty column set")
        return cls([[col[i] for col in columns] for i in range(m)], cols=len(columns))

    # -- access

    def row(self, i: int) -> IntVector:
        return self.data[i]

    def column(self, j: int) -> IntVector:
        return tuple(row[j] for row in self.data)

    def columns(self):
        return [self.column(j) for j in range(self.cols)]

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix([[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)], cols=self.rows)

    # -- arithmetic

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise DimensionMismatch(f"{self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        ocols = list(zip(*other.data)) if other.data else []
        out = []
        for row in self.data:
            out.append([sum(a * b for a, b in zip(row, col)) for col in ocols])
        return IntMatrix(out, cols=other.cols)

    def apply(self, v):
        """Matrix-vector product; accepts int or Fraction entries."""
        if len(v) != self.cols:
            raise DimensionMismatch(f"vector length {len(v)} for {self.rows}x{self.cols}")
        return tuple(sum(a * b for a, b in zip(row, v)) for row in self.data)

    def __add__(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch("shape mismatch")
        return IntMatrix(
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.data, other.data)],
            cols=self.cols,
        )

    def __sub__(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch("shape mismatch")
        return IntMatrix(
            [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.data, other.data)],
            cols=self.cols,
        )

    def __neg__(self):
        return IntMatrix([[-a for a in row] for row in self.data], cols=self.cols)

    def pow(self, k: int) -> "IntMatrix":
        if self.rows != self.cols:
            raise DimensionMismatch("power of a non-square matrix")
        out = IntMatrix.identity(self.rows)
        base = self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    # -- predicates and scalar invariants

    def is_identity(self) -> bool:
        return self.rows == self.cols and all(
            self.data[i][j] == int(i == j) for i in range(self.rows) for j in range(self.cols)
        )

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise DimensionMismatch("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        M = [list(row) for row in self.data]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if M[k][k] == 0:
                for i in range(k + 1, n):
                    if M[i][k]:
                        M[k], M[i] = M[i], M[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
                M[i][k] = 0
            prev = M[k][k]
        return sign * M[n - 1][n - 1]

    def is_unimodular(self) -> bool:
        return self.rows == self.cols and abs(self.det()) == 1

    def inverse_unimodular(self) -> "IntMatrix":
        """Exact inverse of a matrix with determinant +-1."""
        if self.rows != self.cols:
            raise DimensionMismatch("inverse of a non-square matrix")
        n = self.rows
        aug = [
            [Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)]
            for i, row in enumerate(self.data)
        ]
        for c in range(n):
            pr = next((i for i in range(c, n) if aug[i][c] != 0), None)
            if pr is None:
                raise NonUnimodular("matrix is singular")
            aug[c], aug[pr] = aug[pr], aug[c]
            pv = aug[c][c]
            aug[c] = [v / pv for v in aug[c]]
            for i in range(n):
                if i != c and aug[i][c] != 0:
                    f = aug[i][c]
                    aug[i] = [v - f * w for v, w in zip(aug[i], aug[c])]
        inv = []
        for i in range(n):
            row = aug[i][n:]
            if any(v.denominator != 1 for v in row):
                raise NonUnimodular("matrix is not unimodular")
            inv.append([v.numerator for v in row])
        return IntMatrix(inv, cols=n)

    # -- serialization: row-major decimal strings keep arbitrary precision safe

    def to_json(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [str(v) for row in self.data for v in row],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "IntMatrix":
        m, n = int(obj["rows"]), int(obj["cols"])
        ent = [int(s) for s in obj["entries"]]
        if len(ent) != m * n:
            raise DimensionMismatch("entry count does not match shape")
        return cls([ent[i * n : (i + 1) * n] for i in range(m)], cols=n)

    # -- dunder

    def __eq__(self, other):
        return (
            isinstance(other, IntMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.data))

    def __repr__(self):
        return f"IntMatrix({[list(r) for r in self.data]!r})"


# ---------------------------------------------------------------------------
# exact rational linear solves


def rational_solve(rows, rhs, ncols: int | None = None):
    """Solve A x = b exactly over the rationals.

    ``rows`` are the rows of A.  Returns ``(particular, kernel_basis)`` where
    ``particular`` is None when the system is inconsistent and
    ``kernel_basis`` spans the solution space of A x = 0.
    """
    m = len(rows)
    if ncols is None:
        ncols = len(rows[0]) if m else 0
    if len(rhs) != m:
        raise DimensionMismatch("rhs length does not match row count")
    aug = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(rows, rhs)]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, m) if aug[i][c] != 0), None)
        if pr is None:
            continue
        aug[r], aug[pr] = aug[pr], aug[r]
        pv = aug[r][c]
        aug[r] = [v / pv for v in aug[r]]
        for i in range(m):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [v - f * w for v, w in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    pivot_set = set(pivots)
    kernel = []
    for f in range(ncols):
        if f in pivot_set:
            continue
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -aug[i][f]
        kernel.append(tuple(v))
    for i in range(r, m):
        if aug[i][ncols] != 0:
            return None, kernel
    particular = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        particular[c] = aug[i][ncols]
    return tuple(particular), kernel


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SmithDecomposition:
    """U @ A @ V == D with U, V unimodular and D diagonal.

    ``factors`` is the full diagonal of D: nonnegative, each nonzero entry
    divides the next, zeros trailing.
    """

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    factors: tuple[int, ...]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.factors if d)


def smith_normal_form(A: IntMatrix) -> SmithDecomposition:
    """Smith normal form with smallest-pivot selection.

    Total on any rectangular integer matrix.  The smallest-magnitude pivot
    strategy keeps coefficient growth tame at the ranks used here.
    """
    m, n = A.rows, A.cols
    D = [list(row) for row in A.data]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        if i != j:
            D[i], D[j] = D[j], D[i]
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        if i != j:
            for r in D:
                r[i], r[j] = r[j], r[i]
            for r in V:
                r[i], r[j] = r[j], r[i]

    def add_row(dst, src, c):
        Dd, Ds = D[dst], D[src]
        for k in range(n):
            Dd[k] += c * Ds[k]
        Ud, Us = U[dst], U[src]
        for k in range(m):
            Ud[k] += c * Us[k]

    def add_col(dst, src, c):
        for r in D:
            r[dst] += c * r[src]
        for r in V:
            r[dst] += c * r[src]

    def negate_row(i):
        D[i] = [-v for v in D[i]]
        U[i] = [-v for v in U[i]]

    limit = min(m, n)
    t = 0
    while t < limit:
        piv = None
        best = None
        for i in range(t, m):
            Di = D[i]
            for j in range(t, n):
                v = Di[j]
                if v and (best is None or abs(v) < best):
                    best = abs(v)
                    piv = (i, j)
        if piv is None:
            break
        swap_rows(t, piv[0])
        swap_cols(t, piv[1])
        if D[t][t] < 0:
            negate_row(t)
        while True:
            dirty = False
            for i in range(t + 1, m):
                v = D[i][t]
                if v:
                    q = v // D[t][t]
                    if q:
                        add_row(i, t, -q)
                    if D[i][t]:
                        swap_rows(t, i)  # remainder is a strictly smaller pivot
                        if D[t][t] < 0:
                            negate_row(t)
                        dirty = True
            if dirty:
                continue
            for j in range(t + 1, n):
                v = D[t][j]
                if v:
                    q = v // D[t][t]
                    if q:
                        add_col(j, t, -q)
                    if D[t][j]:
                        swap_cols(t, j)
                        dirty = True
            if dirty:
                continue
            break
        offender = None
        for i in range(t + 1, m):
            Di = D[i]
            for j in range(t + 1, n):
                if Di[j] % D[t][t]:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            add_row(t, offender, 1)
            continue
        t += 1
    factors = tuple(D[i][i] for i in range(limit))
    return SmithDecomposition(IntMatrix(U), IntMatrix(D, cols=n), IntMatrix(V), factors)


def kernel_int_basis(A: IntMatrix) -> tuple[IntVector, ...]:
    """Basis of the saturated integer kernel {x : A x = 0}."""
    snf = smith_normal_form(A)
    r = snf.rank
    return tuple(snf.V.column(j) for j in range(r, A.cols))


# ---------------------------------------------------------------------------
# finite abelian groups and lattice quotients


class FiniteAbelianGroup:
    """Finite abelian group in invariant-factor form d1 | d2 | ... (all > 1).

    Comes with a projection from an ambient lattice Z^n and a section picking
    a representative for each residue class, so elements can move back and
    forth between the group and the lattice.
    """

    __slots__ = ("invariant_factors", "ambient_rank", "_proj_rows", "_reps")

    def __init__(self, invariant_factors, proj_rows, reps, ambient_rank):
        factors = tuple(int(d) for d in invariant_factors)
        if any(d <= 1 for d in factors):
            raise ValueError("invariant factors must all exceed 1")
        object.__setattr__(self, "invariant_factors", factors)
        object.__setattr__(self, "_proj_rows", tuple(tuple(r) for r in proj_rows))
        object.__setattr__(self, "_reps", tuple(tuple(r) for r in reps))
        object.__setattr__(self, "ambient_rank", int(ambient_rank))

    def __setattr__(self, name, value):
        raise AttributeError("FiniteAbelianGroup is immutable")

    @classmethod
    def from_factors(cls, factors) -> "FiniteAbelianGroup":
        """Abstract group with ambient Z^k and coordinate projection."""
        factors = tuple(int(d) for d in factors)
        k = len(factors)
        eye = IntMatrix.identity(k)
        return cls(factors, [eye.row(i) for i in range(k)], [eye.column(i) for i in range(k)], k)

    @property
    def order(self) -> int:
        n = 1
        for d in self.invariant_factors:
            n *= d
        return n

    def is_trivial(self) -> bool:
        return not self.invariant_factors

    def project(self, v) -> IntVector:
        """Residue tuple of an integer ambient vector."""
        v = to_int_vector(v)
        if len(v) != self.ambient_rank:
            raise DimensionMismatch(f"expected length {self.ambient_rank}, got {len(v)}")
        return tuple(
            sum(a * b for a, b in zip(row, v)) % d
            for row, d in zip(self._proj_rows, self.invariant_factors)
        )

    def representative(self, residues) -> IntVector:
        """An ambient vector projecting to the given residue tuple."""
        residues = tuple(int(r) for r in residues)
        if len(residues) != len(self.invariant_factors):
            raise DimensionMismatch("residue tuple has wrong length")
        out = [0] * self.ambient_rank
        for r, rep in zip(residues, self._reps):
            for k in range(self.ambient_rank):
                out[k] += r * rep[k]
        return tuple(out)

    def elements(self):
        return itertools.product(*(range(d) for d in self.invariant_factors))

    def add(self, a, b) -> IntVector:
        return tuple((x + y) % d for x, y, d in zip(a, b, self.invariant_factors))

    def neg(self, a) -> IntVector:
        return tuple((-x) % d for x, d in zip(a, self.invariant_factors))

    def zero(self) -> IntVector:
        return (0,) * len(self.invariant_factors)

    def __eq__(self, other):
        return (
            isinstance(other, FiniteAbelianGroup)
            and self.invariant_factors == other.invariant_factors
            and self.ambient_rank == other.ambient_rank
            and self._proj_rows == other._proj_rows
        )

    def __hash__(self):
        return hash((self.invariant_factors, self.ambient_rank, self._proj_rows))

    def __repr__(self):
        if not self.invariant_factors:
            return "FiniteAbelianGroup(trivial)"
        desc = " x ".join(f"Z/{d}" for d in self.invariant_factors)
        return f"FiniteAbelianGroup({desc})"


@dataclass(frozen=True)
class LatticeQuotient:
    """Presentation of Z^n / L: a torsion group plus a free rank."""

    torsion: FiniteAbelianGroup
    free_rank: int
    free_rows: tuple[IntVector, ...]

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        return self.torsion.invariant_factors

    @property
    def torsion_order(self) -> int:
        return self.torsion.order

    def project(self, v):
        """(torsion residues, free coordinates) of an ambient integer vector."""
        res = self.torsion.project(v)
        v = to_int_vector(v)
        free = tuple(sum(a * b for a, b in zip(row, v)) for row in self.free_rows)
        return res, free


def cokernel(A: IntMatrix) -> LatticeQuotient:
    """Quotient of Z^(A.rows) by the column span of A."""
    snf = smith_normal_form(A)
    m = A.rows
    r = snf.rank
    Uinv = snf.U.inverse_unimodular()
    tor_idx = [i for i in range(r) if snf.factors[i] > 1]
    torsion = FiniteAbelianGroup(
        [snf.factors[i] for i in tor_idx],
        [snf.U.row(i) for i in tor_idx],
        [Uinv.column(i) for i in tor_idx],
        m,
    )
    free_rows = tuple(snf.U.row(i) for i in range(r, m))
    return LatticeQuotient(torsion, m - r, free_rows)


def coinvariants(g: IntMatrix) -> LatticeQuotient:
    """Quotient of the lattice by the image of (g - 1), for unimodular g."""
    if g.rows != g.cols:
        raise DimensionMismatch("automorphism matrix must be square")
    if abs(g.det()) != 1:
        raise NonUnimodular("coinvariants need a lattice automorphism")
    return cokernel(g - IntMatrix.identity(g.rows))


def torsion_part(q: LatticeQuotient) -> FiniteAbelianGroup:
    """Torsion subgroup of a quotient, with the parent-compatible projection."""
    return q.torsion


def lattice_membership(v, basis: IntMatrix):
    """Integer coordinates of v in the given lattice basis, or None.

    ``basis`` has the lattice generators as columns; they are assumed
    linearly independent.
    """
    v = vector(v)
    if len(v) != basis.rows:
        raise DimensionMismatch(f"vector length {len(v)} vs ambient rank {basis.rows}")
    if basis.cols == basis.rows and basis.is_identity():
        return to_int_vector(v) if is_integral(v) else None
    particular, _ = rational_solve(basis.data, v)
    if particular is None or not is_integral(particular):
        return None
    return to_int_vector(particular)


# ---------------------------------------------------------------------------
# subgroup machinery


def abelian_subgroup_invariants(ambient_factors, generators) -> tuple[int, ...]:
    """Invariant factors of the subgroup generated inside prod Z/d_i.

    Presents the subgroup as L/K where K is the relation lattice of the
    ambient group and L is K extended by lifts of the generators; two Smith
    reductions finish the job.
    """
    ambient_factors = tuple(int(d) for d in ambient_factors)
    k = len(ambient_factors)
    gens = [tuple(int(x) for x in g) for g in generators]
    if k == 0 or not gens:
        return ()
    for g in gens:
        if len(g) != k:
            raise DimensionMismatch("generator has wrong length")
    relation_cols = [tuple(d if i == j else 0 for i in range(k)) for j, d in enumerate(ambient_factors)]
    M = IntMatrix.from_columns(gens + relation_cols, rows=k)
    snf = smith_normal_form(M)
    if snf.rank != k:
        raise ValueError("ambient relations must have full rank")
    U = snf.U
    # Coordinates of the relation lattice in the basis {s_i * Uinv_col_i} of L.
    coords = []
    for i in range(k):
        s = snf.factors[i]
        row = []
        for j in range(k):
            num = U.data[i][j] * ambient_factors[j]
            if num % s:
                raise ValueError("relation lattice escapes the subgroup lattice")
            row.append(num // s)
        coords.append(row)
    inner = smith_normal_form(IntMatrix(coords))
    if inner.rank != k:
        raise ValueError("subgroup quotient is not finite")
    return tuple(d for d in inner.factors if d > 1)


@dataclass(frozen=True)
class Subgroup:
    """Subgroup of a finite abelian group, as explicit residue tuples."""

    elements: tuple[IntVector, ...]
    generators: tuple[IntVector, ...]
    invariant_factors: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.elements)


def enumerate_subgroups(G: FiniteAbelianGroup, max_order: int = DEFAULT_SUBGROUP_CAP):
    """All subgroups of G, without duplicates.

    Grows subgroups one generator at a time and dedupes by element set;
    fine for the small groups that occur here (|G| <= 64 by default).
    """
    if G.order > max_order:
        raise TooLarge(f"group of order {G.order} exceeds the cap {max_order}")
    zero = G.zero()
    all_elems = sorted(G.elements())

    def close(base: frozenset, x) -> frozenset:
        # base is a subgroup, so the closure is the union of base-cosets of <x>.
        out = set(base)
        y = x
        while y != zero:
            out.update(G.add(h, y) for h in base)
            y = G.add(y, x)
        return frozenset(out)

    start = frozenset([zero])
    found: dict[frozenset, tuple] = {start: ()}
    frontier = [start]
    while frontier:
        H = frontier.pop(0)
        gens = found[H]
        for x in all_elems:
            if x in H:
                continue
            H2 = close(H, x)
            if H2 not in found:
                found[H2] = gens + (x,)
                frontier.append(H2)
    out = []
    for H, gens in found.items():
        elems = tuple(sorted(H))
        gens = gens if gens else ()
        inv = abelian_subgroup_invariants(G.invariant_factors, elems) if len(elems) > 1 else ()
        out.append(Subgroup(elems, gens, inv))
    out.sort(key=lambda s: (s.order, s.elements))
    return out
