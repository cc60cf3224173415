"""Exact linear algebra over Q.

Vectors are tuples of :class:`fractions.Fraction`.  Matrices are immutable
row-major grids.  Subspaces are stored as the rows of a reduced row echelon
matrix (equivalently, the columns of a reduced column echelon basis), so two
subspaces with the same span compare equal.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ContainmentError, DimensionError

Vector = tuple  # tuple[Fraction, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


def to_scalar(x) -> Fraction:
    """Parse an int, Fraction or a string such as ``"-3/4"`` into a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def scalar_to_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def zero_vector(n: int) -> Vector:
    return (ZERO,) * n


def unit_vector(n: int, i: int) -> Vector:
    v = [ZERO] * n
    v[i] = ONE
    return tuple(v)


def add_vectors(u: Sequence[Fraction], v: Sequence[Fraction]) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def scale_vector(c: Fraction, v: Sequence[Fraction]) -> Vector:
    return tuple(c * a for a in v)


def is_zero_vector(v: Sequence[Fraction]) -> bool:
    return not any(v)


@dataclass(frozen=True)
class ExactMatrix:
    rows: int
    cols: int
    entries: tuple  # tuple of row tuples

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise DimensionError(
                f"entries do not form a {self.rows}x{self.cols} grid")

    # construction

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable], cols: int | None = None) -> "ExactMatrix":
        data = tuple(tuple(to_scalar(x) for x in r) for r in rows)
        if cols is None:
            if not data:
                raise DimensionError("column count required for a matrix without rows")
            cols = len(data[0])
        return cls(len(data), cols, data)

    @classmethod
    def from_columns(cls, columns: Iterable[Sequence], rows: int) -> "ExactMatrix":
        cols = [tuple(to_scalar(x) for x in c) for c in columns]
        for c in cols:
            if len(c) != rows:
                raise DimensionError("column length does not match row count")
        return cls(rows, len(cols), tuple(tuple(c[i] for c in cols) for i in range(rows)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "ExactMatrix":
        return cls(rows, cols, tuple((ZERO,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls(n, n, tuple(unit_vector(n, i) for i in range(n)))

    @classmethod
    def diagonal(cls, values: Sequence) -> "ExactMatrix":
        n = len(values)
        return cls(n, n, tuple(
            tuple(to_scalar(values[i]) if i == j else ZERO for j in range(n)) for i in range(n)))

    # access

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> Vector:
        return self.entries[i]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.entries)

    def columns(self) -> list:
        return [self.column(j) for j in range(self.cols)]

    @property
    def shape(self) -> tuple:
        return (self.rows, self.cols)

    @property
    def T(self) -> "ExactMatrix":
        return ExactMatrix(self.cols, self.rows,
                           tuple(tuple(r[j] for r in self.entries) for j in range(self.cols)))

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.entries)

    # arithmetic

    def apply(self, v: Sequence[Fraction]) -> Vector:
        if len(v) != self.cols:
            raise DimensionError(f"vector of length {len(v)} for a {self.rows}x{self.cols} matrix")
        nz = [(j, x) for j, x in enumerate(v) if x]
        return tuple(sum((r[j] * x for j, x in nz), ZERO) for r in self.entries)

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        other_rows = other.entries
        out = []
        for r in self.entries:
            acc = [ZERO] * other.cols
            for k, x in enumerate(r):
                if x:
                    for j, y in enumerate(other_rows[k]):
                        if y:
                            acc[j] += x * y
            out.append(tuple(acc))
        return ExactMatrix(self.rows, other.cols, tuple(out))

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.shape != other.shape:
            raise DimensionError(f"cannot add {self.shape} and {other.shape}")
        return ExactMatrix(self.rows, self.cols, tuple(
            tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries)))

    def __neg__(self) -> "ExactMatrix":
        return self.scale(-1)

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        return self + (-other)

    def scale(self, c) -> "ExactMatrix":
        c = to_scalar(c)
        return ExactMatrix(self.rows, self.cols, tuple(tuple(c * a for a in r) for r in self.entries))

    def hstack(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.rows != other.rows:
            raise DimensionError("hstack needs equal row counts")
        return ExactMatrix(self.rows, self.cols + other.cols,
                           tuple(r + s for r, s in zip(self.entries, other.entries)))

    def vstack(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.cols:
            raise DimensionError("vstack needs equal column counts")
        return ExactMatrix(self.rows + other.rows, self.cols, self.entries + other.entries)

    def kron(self, other: "ExactMatrix") -> "ExactMatrix":
        out = []
        for r in self.entries:
            for s in other.entries:
                out.append(tuple(a * b for a in r for b in s))
        return ExactMatrix(self.rows * other.rows, self.cols * other.cols, tuple(out))

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "ExactMatrix":
        return ExactMatrix(len(rows), len(cols),
                           tuple(tuple(self.entries[i][j] for j in cols) for i in rows))

    def rank(self) -> int:
        return len(rref(self)[1])

    # serialization

    def to_json(self) -> list:
        return [[scalar_to_str(x) for x in r] for r in self.entries]

    @classmethod
    def from_json(cls, data: list, cols: int | None = None) -> "ExactMatrix":
        return cls.from_rows(data, cols=cols)

    def __repr__(self) -> str:
        body = "; ".join(" ".join(scalar_to_str(x) for x in r) for r in self.entries)
        return f"ExactMatrix({self.rows}x{self.cols}: [{body}])"


def _rref_rows(rows: list, ncols: int) -> list:
    """In-place Gauss-Jordan elimination on a list of mutable rows; returns pivot columns."""
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        pivot_row = None
        for i in range(r, nrows):
            if rows[i][c]:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        pr = rows[r]
        inv = ONE / pr[c]
        if inv != ONE:
            for j in range(c, ncols):
                if pr[j]:
                    pr[j] *= inv
        nz = [j for j in range(c, ncols) if pr[j]]
        for i in range(nrows):
            if i != r:
                f = rows[i][c]
                if f:
                    ri = rows[i]
                    for j in nz:
                        ri[j] -= f * pr[j]
        pivots.append(c)
        r += 1
    return pivots


def rref(m: ExactMatrix) -> tuple:
    """Reduced row echelon form of ``m`` and its pivot columns."""
    rows = [list(r) for r in m.entries]
    pivots = _rref_rows(rows, m.cols)
    return ExactMatrix(m.rows, m.cols, tuple(tuple(r) for r in rows)), tuple(pivots)


def det(m: ExactMatrix) -> Fraction:
    if m.rows != m.cols:
        raise DimensionError("determinant of a non-square matrix")
    rows = [list(r) for r in m.entries]
    n = m.rows
    result = ONE
    for c in range(n):
        p = next((i for i in range(c, n) if rows[i][c]), None)
        if p is None:
            return ZERO
        if p != c:
            rows[c], rows[p] = rows[p], rows[c]
            result = -result
        pv = rows[c][c]
        result *= pv
        for i in range(c + 1, n):
            f = rows[i][c] / pv
            if f:
                for j in range(c, n):
                    rows[i][j] -= f * rows[c][j]
    return result


def inverse(m: ExactMatrix) -> ExactMatrix:
    if m.rows != m.cols:
        raise DimensionError("inverse of a non-square matrix")
    n = m.rows
    aug = [list(r) + list(unit_vector(n, i)) for i, r in enumerate(m.entries)]
    pivots = _rref_rows(aug, 2 * n)
    if tuple(pivots[:n]) != tuple(range(n)):
        raise DimensionError("matrix is singular")
    return ExactMatrix(n, n, tuple(tuple(r[n:]) for r in aug))


@dataclass(frozen=True)
class Subspace:
    """A subspace of Q^ambient_dim in canonical echelon form.

    ``vectors`` are the nonzero rows of the reduced row echelon form of any
    spanning set; ``pivots`` are their pivot coordinates.
    """

    ambient_dim: int
    vectors: tuple
    pivots: tuple

    @classmethod
    def span(cls, vectors: Iterable[Sequence], ambient_dim: int) -> "Subspace":
        rows = []
        for v in vectors:
            if len(v) != ambient_dim:
                raise DimensionError(f"vector of length {len(v)} in ambient dimension {ambient_dim}")
            if any(v):
                rows.append([to_scalar(x) for x in v])
        pivots = _rref_rows(rows, ambient_dim)
        return cls(ambient_dim, tuple(tuple(r) for r in rows[:len(pivots)]), tuple(pivots))

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, (), ())

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, tuple(unit_vector(n, i) for i in range(n)), tuple(range(n)))

    @property
    def dim(self) -> int:
        return len(self.vectors)

    @property
    def basis(self) -> ExactMatrix:
        """Basis vectors as the columns of an ambient_dim x dim matrix."""
        return ExactMatrix.from_columns(self.vectors, self.ambient_dim)

    def coordinates(self, v: Sequence[Fraction]) -> Vector:
        """Coordinates of ``v`` in the echelon basis; raises if ``v`` is not in the span."""
        coords = tuple(v[p] for p in self.pivots)
        residual = list(v)
        for c, b in zip(coords, self.vectors):
            if c:
                for j, x in enumerate(b):
                    if x:
                        residual[j] -= c * x
        if any(residual):
            raise ContainmentError("vector does not lie in the subspace")
        return coords

    def contains(self, v: Sequence[Fraction]) -> bool:
        try:
            self.coordinates(v)
        except ContainmentError:
            return False
        return True

    def issubspace(self, other: "Subspace") -> bool:
        _check_ambient(self, other)
        return all(other.contains(v) for v in self.vectors)

    def __le__(self, other: "Subspace") -> bool:
        return self.issubspace(other)

    def __add__(self, other: "Subspace") -> "Subspace":
        return subspace_sum(self, other)

    def __and__(self, other: "Subspace") -> "Subspace":
        return intersect(self, other)

    def annihilator(self) -> ExactMatrix:
        """Rows spanning the linear equations that cut out this subspace."""
        n = self.ambient_dim
        if self.dim == 0:
            return ExactMatrix.identity(n)
        eq = kernel(ExactMatrix(self.dim, n, self.vectors))
        return ExactMatrix(eq.dim, n, eq.vectors)

    def to_json(self) -> dict:
        return {"ambient_dim": self.ambient_dim,
                "basis": [[scalar_to_str(x) for x in v] for v in self.vectors]}

    @classmethod
    def from_json(cls, data: dict) -> "Subspace":
        return cls.span(data["basis"], data["ambient_dim"])


def _check_ambient(a: Subspace, b: Subspace) -> None:
    if a.ambient_dim != b.ambient_dim:
        raise DimensionError(f"ambient dimensions differ: {a.ambient_dim} vs {b.ambient_dim}")


def kernel(m: ExactMatrix) -> Subspace:
    red, pivots = rref(m)
    pivset = set(pivots)
    vecs = []
    for f in range(m.cols):
        if f in pivset:
            continue
        v = [ZERO] * m.cols
        v[f] = ONE
        for row, pc in zip(red.entries, pivots):
            v[pc] = -row[f]
        vecs.append(v)
    return Subspace.span(vecs, m.cols)


def image(m: ExactMatrix) -> Subspace:
    return Subspace.span(m.columns(), m.rows)


def apply_to_subspace(m: ExactMatrix, s: Subspace) -> Subspace:
    """The image m(s)."""
    if s.ambient_dim != m.cols:
        raise DimensionError("subspace does not live in the domain of the matrix")
    return Subspace.span((m.apply(v) for v in s.vectors), m.rows)


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    _check_ambient(a, b)
    return Subspace.span(a.vectors + b.vectors, a.ambient_dim)


def intersect(a: Subspace, b: Subspace) -> Subspace:
    """a ∩ b from the kernel of [A | -B] acting on stacked coordinates."""
    _check_ambient(a, b)
    n = a.ambient_dim
    if a.dim == 0 or b.dim == 0:
        return Subspace.zero(n)
    stacked = ExactMatrix.from_columns(
        list(a.vectors) + [scale_vector(-ONE, v) for v in b.vectors], n)
    sols = kernel(stacked)
    vecs = []
    for s in sols.vectors:
        v = [ZERO] * n
        for c, bv in zip(s[:a.dim], a.vectors):
            if c:
                for j, x in enumerate(bv):
                    if x:
                        v[j] += c * x
        vecs.append(v)
    return Subspace.span(vecs, n)


def preimage(m: ExactMatrix, s: Subspace) -> Subspace:
    """{x | m x ∈ s}."""
    if s.ambient_dim != m.rows:
        raise DimensionError(f"target subspace in dimension {s.ambient_dim}, matrix has {m.rows} rows")
    equations = s.annihilator()
    if equations.rows == 0:
        return Subspace.full(m.cols)
    return kernel(equations @ m)


@dataclass(frozen=True)
class QuotientSpace:
    """numerator / denominator with explicit representatives and projector.

    ``representatives`` is ambient_dim x dim, ``projector`` is dim x ambient_dim;
    projector @ representatives is the identity and the projector kills the
    denominator.  The projector is only meaningful on the numerator.
    """

    ambient_dim: int
    numerator: Subspace
    denominator: Subspace
    representatives: ExactMatrix
    projector: ExactMatrix

    @property
    def dim(self) -> int:
        return self.representatives.cols

    def project(self, v: Sequence[Fraction]) -> Vector:
        return self.projector.apply(v)

    def representative(self, j: int) -> Vector:
        return self.representatives.column(j)

    def lift(self, coords: Sequence[Fraction]) -> Vector:
        return self.representatives.apply(coords)


def quotient(num: Subspace, den: Subspace) -> QuotientSpace:
    _check_ambient(num, den)
    if not den.issubspace(num):
        raise ContainmentError("denominator is not contained in the numerator")
    n = num.ambient_dim
    k = num.dim
    # den in numerator coordinates, then echelon form there
    den_rows = [list(num.coordinates(v)) for v in den.vectors]
    den_piv = _rref_rows(den_rows, k)
    den_rows = den_rows[:len(den_piv)]
    free = [j for j in range(k) if j not in set(den_piv)]
    reps = [num.vectors[j] for j in free]
    # coordinates c = v[num.pivots]; reduce c modulo den rows; read off free slots.
    # entry (t, ambient i): linear functional on ambient vectors.
    proj = []
    for f in free:
        row = [ZERO] * n
        # c_f - sum_i c_{den_piv[i]} * den_rows[i][f]
        row[num.pivots[f]] += ONE
        for drow, dp in zip(den_rows, den_piv):
            x = drow[f]
            if x:
                row[num.pivots[dp]] -= x
        proj.append(tuple(row))
    return QuotientSpace(
        n, num, den,
        ExactMatrix.from_columns(reps, n),
        ExactMatrix(len(proj), n, tuple(proj)),
    )
