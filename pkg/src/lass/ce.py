"""Finite-dimensional Lie algebras, their representations and Chevalley-Eilenberg complexes.

Exterior basis convention (shared by every module): p-forms are indexed by
strictly increasing index tuples in lexicographic order, and
ξ^{i_1}∧...∧ξ^{i_p}(e_{i_1}, ..., e_{i_p}) = 1.  A form evaluated on
arbitrary vectors is therefore a sum of coefficient times minor.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, combinations_with_replacement
from typing import Sequence

from .cochain import CochainComplex
from .errors import DimensionError, PreconditionError, StructuralError, Verdict
from .exactq import (
    ONE,
    ZERO,
    ExactMatrix,
    QuotientSpace,
    Subspace,
    det,
    quotient,
    to_scalar,
    unit_vector,
)


# exterior multi-index helpers

def wedge_basis(n: int, k: int) -> list:
    return list(combinations(range(n), k))


def insert_index(rest: tuple, i: int):
    """Sort ``(i,) + rest``: returns (sign, sorted tuple), or (0, None) on repetition."""
    pos = bisect_left(rest, i)
    if pos < len(rest) and rest[pos] == i:
        return 0, None
    return (-1 if pos % 2 else 1), rest[:pos] + (i,) + rest[pos:]


def permutation_sign(seq: Sequence[int]) -> int:
    """Sign of the permutation sorting ``seq`` (0 if it has repeats)."""
    if len(set(seq)) != len(seq):
        return 0
    sign = 1
    s = list(seq)
    for i in range(len(s)):
        for j in range(i + 1, len(s)):
            if s[i] > s[j]:
                sign = -sign
    return sign


@dataclass(frozen=True)
class LieAlgebra:
    """Structure constants c[i][j][k]: [e_i, e_j] = Σ_k c[i][j][k] e_k."""

    dim: int
    structure: tuple
    labels: tuple = ()

    def __post_init__(self):
        n = self.dim
        if len(self.structure) != n or any(
                len(row) != n or any(len(v) != n for v in row) for row in self.structure):
            raise StructuralError(f"structure constants must be a {n}x{n}x{n} array")
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"e{i + 1}" for i in range(n)))
        elif len(self.labels) != n:
            raise StructuralError("one label per basis vector required")

    @classmethod
    def from_brackets(cls, dim: int, brackets: dict, labels: Sequence[str] = (),
                      antisymmetrize: bool = True) -> "LieAlgebra":
        """``brackets`` maps (i, j) to {k: coeff}; with ``antisymmetrize`` the (j, i) entry is filled in."""
        c = [[[ZERO] * dim for _ in range(dim)] for _ in range(dim)]
        for (i, j), coeffs in brackets.items():
            for k, x in coeffs.items():
                c[i][j][int(k)] = to_scalar(x)
                if antisymmetrize:
                    c[j][i][int(k)] = -to_scalar(x)
        return cls(dim, tuple(tuple(tuple(v) for v in row) for row in c), tuple(labels))

    @classmethod
    def abelian(cls, dim: int, labels: Sequence[str] = ()) -> "LieAlgebra":
        return cls.from_brackets(dim, {}, labels)

    def bracket(self, u: Sequence[Fraction], v: Sequence[Fraction]) -> tuple:
        out = [ZERO] * self.dim
        for i, a in enumerate(u):
            if not a:
                continue
            for j, b in enumerate(v):
                if not b:
                    continue
                ab = a * b
                for k, c in enumerate(self.structure[i][j]):
                    if c:
                        out[k] += ab * c
        return tuple(out)

    def basis_bracket(self, i: int, j: int) -> tuple:
        return self.structure[i][j]

    def ad(self, i: int) -> ExactMatrix:
        """Adjoint action of e_i as a matrix."""
        return ExactMatrix.from_columns([self.structure[i][j] for j in range(self.dim)], self.dim)

    def permuted(self, perm: Sequence[int]) -> "LieAlgebra":
        """Same algebra in the basis f_a = e_{perm[a]}."""
        n = self.dim
        inv = [0] * n
        for a, i in enumerate(perm):
            inv[i] = a
        c = [[[self.structure[perm[a]][perm[b]][perm[d]] for d in range(n)]
              for b in range(n)] for a in range(n)]
        return LieAlgebra(n, tuple(tuple(tuple(v) for v in row) for row in c),
                          tuple(self.labels[i] for i in perm))

    def to_json(self) -> dict:
        brackets = []
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                coeffs = {str(k): str(x) for k, x in enumerate(self.structure[i][j]) if x}
                if coeffs:
                    brackets.append({"i": i, "j": j, "coeffs": coeffs})
        return {"dim": self.dim, "basis": list(self.labels), "brackets": brackets}


@dataclass(frozen=True)
class Representation:
    """Matrices rho_i (m x m), one per basis vector of the acting Lie algebra."""

    dim: int
    matrices: tuple
    labels: tuple = ()

    def __post_init__(self):
        for a in self.matrices:
            if a.shape != (self.dim, self.dim):
                raise StructuralError(f"representation matrix of shape {a.shape}, expected {self.dim}x{self.dim}")
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"v{a + 1}" for a in range(self.dim)))
        elif len(self.labels) != self.dim:
            raise StructuralError("one label per carrier basis vector required")

    @classmethod
    def trivial(cls, g: LieAlgebra, dim: int = 1) -> "Representation":
        return cls(dim, tuple(ExactMatrix.zeros(dim, dim) for _ in range(g.dim)))

    @classmethod
    def adjoint(cls, g: LieAlgebra) -> "Representation":
        return cls(g.dim, tuple(g.ad(i) for i in range(g.dim)), g.labels)

    @property
    def n_generators(self) -> int:
        return len(self.matrices)

    def act(self, x: Sequence[Fraction]) -> ExactMatrix:
        out = ExactMatrix.zeros(self.dim, self.dim)
        for c, m in zip(x, self.matrices):
            if c:
                out = out + m.scale(c)
        return out

    def conjugated(self, p: ExactMatrix, p_inv: ExactMatrix) -> "Representation":
        return Representation(self.dim, tuple(p @ m @ p_inv for m in self.matrices))

    def to_json(self) -> dict:
        return {"dim": self.dim, "matrices": [m.to_json() for m in self.matrices]}


def check_jacobi(g: LieAlgebra) -> Verdict:
    n = g.dim
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if g.structure[i][j][k] != -g.structure[j][i][k]:
                    return Verdict.failed(f"antisymmetry fails for ({i},{j}) in component {k}",
                                          site=(i, j, k))
    e = [unit_vector(n, i) for i in range(n)]
    for i, j, k in combinations(range(n), 3):
        total = [ZERO] * n
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            t = g.bracket(e[a], g.bracket(e[b], e[c]))
            total = [x + y for x, y in zip(total, t)]
        if any(total):
            return Verdict.failed(f"Jacobi identity fails on ({i},{j},{k})", site=(i, j, k))
    return Verdict.passed("antisymmetric and Jacobi")


def check_flat(g: LieAlgebra, V: Representation) -> Verdict:
    if V.n_generators != g.dim:
        return Verdict.failed(f"{V.n_generators} matrices for a {g.dim}-dimensional Lie algebra")
    for i in range(g.dim):
        for j in range(i + 1, g.dim):
            lhs = V.matrices[i] @ V.matrices[j] - V.matrices[j] @ V.matrices[i]
            rhs = V.act(g.structure[i][j])
            if lhs != rhs:
                return Verdict.failed(f"flatness fails on ({i},{j})", site=(i, j))
    return Verdict.passed("flat")


# Koszul differential with operator coefficients

def koszul_differential(n: int, k: int, m: int, action: Sequence[ExactMatrix], structure) -> ExactMatrix:
    """d: ∧^k (Q^n)* ⊗ M -> ∧^{k+1} (Q^n)* ⊗ M for the Koszul formula.

    ``action[a]`` is the operator by which generator a acts on the
    m-dimensional coefficient space M.  ``structure[a][b]`` is a list of
    pairs (l, coefficient) where [e_a, e_b] = Σ_l coefficient·e_l and the
    coefficient is a Fraction or an m x m operator (function coefficients).
    Basis index of (I, s) is index(I)*m + s.
    """
    src = wedge_basis(n, k)
    tgt = wedge_basis(n, k + 1)
    src_index = {I: t for t, I in enumerate(src)}
    rows = [[ZERO] * (len(src) * m) for _ in range(len(tgt) * m)]
    for t, J in enumerate(tgt):
        base = t * m
        for i, x in enumerate(J):
            rest = J[:i] + J[i + 1:]
            col = src_index[rest] * m
            sign = -1 if i % 2 else 1
            A = action[x]
            for b in range(m):
                row = rows[base + b]
                for a, val in enumerate(A.entries[b]):
                    if val:
                        row[col + a] += sign * val
        for i in range(len(J)):
            for j in range(i + 1, len(J)):
                sign = -1 if (i + j) % 2 else 1
                rest = J[:i] + J[i + 1:j] + J[j + 1:]
                for l, coeff in structure[J[i]][J[j]]:
                    s2, I = insert_index(rest, l)
                    if not s2:
                        continue
                    col = src_index[I] * m
                    sg = sign * s2
                    if isinstance(coeff, ExactMatrix):
                        for b in range(m):
                            row = rows[base + b]
                            for a, val in enumerate(coeff.entries[b]):
                                if val:
                                    row[col + a] += sg * val
                    else:
                        for b in range(m):
                            rows[base + b][col + b] += sg * coeff
    return ExactMatrix(len(tgt) * m, len(src) * m, tuple(tuple(r) for r in rows))


def _structure_lists(g: LieAlgebra):
    return [[[(l, c) for l, c in enumerate(g.structure[a][b]) if c] for b in range(g.dim)]
            for a in range(g.dim)]


def form_labels(alg_labels: Sequence[str], k: int, coeff_labels: Sequence[str]) -> list:
    out = []
    for I in wedge_basis(len(alg_labels), k):
        ext = "∧".join(f"ξ{alg_labels[i]}" for i in I) if I else "1"
        for s in coeff_labels:
            out.append(ext if len(coeff_labels) == 1 and s == "1" else f"{ext}⊗{s}")
    return out


def ce_complex(g: LieAlgebra, V: Representation | None = None, *, check: bool = True) -> CochainComplex:
    if V is None:
        V = Representation(1, tuple(ExactMatrix.zeros(1, 1) for _ in range(g.dim)), ("1",))
    if check:
        for verdict in (check_jacobi(g), check_flat(g, V)):
            if not verdict:
                raise PreconditionError(verdict.message)
    n, m = g.dim, V.dim
    structure = _structure_lists(g)
    dims = [len(wedge_basis(n, k)) * m for k in range(n + 1)]
    diffs = [koszul_differential(n, k, m, V.matrices, structure) for k in range(n)]
    labels = [form_labels(g.labels, k, V.labels) for k in range(n + 1)]
    return CochainComplex(dims, diffs, labels)


def evaluate_form(coords: Sequence[Fraction], n: int, k: int, m: int,
                  args: Sequence[Sequence[Fraction]]) -> tuple:
    """Value in Q^m of a k-form (standard coordinates) on k argument vectors of Q^n."""
    if len(args) != k:
        raise DimensionError(f"{len(args)} arguments for a {k}-form")
    out = [ZERO] * m
    cols = [tuple(a) for a in args]
    for t, I in enumerate(wedge_basis(n, k)):
        block = coords[t * m:(t + 1) * m]
        if not any(block):
            continue
        minor = det(ExactMatrix(k, k, tuple(tuple(cols[c][i] for c in range(k)) for i in I))) if k else ONE
        if minor:
            for s in range(m):
                out[s] += minor * block[s]
    return tuple(out)


def exterior_power_matrix(T: ExactMatrix, k: int) -> ExactMatrix:
    """∧^k T on the sorted-subset basis: entry (J, I) is the minor T[J, I]."""
    basis_r = wedge_basis(T.rows, k)
    basis_c = wedge_basis(T.cols, k)
    return ExactMatrix(len(basis_r), len(basis_c), tuple(
        tuple(det(T.submatrix(J, I)) if k else ONE for I in basis_c) for J in basis_r))


# constructions on representations

def dual_rep(V: Representation) -> Representation:
    return Representation(V.dim, tuple(-m.T for m in V.matrices),
                          tuple(f"{s}*" for s in V.labels))


def tensor_rep(V: Representation, W: Representation) -> Representation:
    if V.n_generators != W.n_generators:
        raise DimensionError("representations of different Lie algebras")
    iv = ExactMatrix.identity(V.dim)
    iw = ExactMatrix.identity(W.dim)
    mats = tuple(a.kron(iw) + iv.kron(b) for a, b in zip(V.matrices, W.matrices))
    labels = tuple(f"{a}⊗{b}" for a in V.labels for b in W.labels)
    return Representation(V.dim * W.dim, mats, labels)


def exterior_power_rep(V: Representation, p: int) -> Representation:
    """Derivation action on ∧^p V with the sorted-subset basis."""
    basis = wedge_basis(V.dim, p)
    index = {I: t for t, I in enumerate(basis)}
    mats = []
    for A in V.matrices:
        rows = [[ZERO] * len(basis) for _ in basis]
        for t, I in enumerate(basis):
            for s, i in enumerate(I):
                rest = I[:s] + I[s + 1:]
                for j in range(V.dim):
                    a = A.entries[j][i]
                    if not a:
                        continue
                    # v_i at slot s replaced by v_j; move it to the front first
                    sg, J = insert_index(rest, j)
                    if not sg:
                        continue
                    sign = sg * (-1 if s % 2 else 1)
                    rows[index[J]][t] += sign * a
        mats.append(ExactMatrix(len(basis), len(basis), tuple(tuple(r) for r in rows)))
    labels = tuple("∧".join(V.labels[i] for i in I) if I else "1" for I in basis)
    return Representation(len(basis), tuple(mats), labels)


def sym_basis(n: int, p: int) -> list:
    return list(combinations_with_replacement(range(n), p))


def sym_power_rep(V: Representation, p: int) -> Representation:
    """Derivation action on S^p V with the sorted-multiset basis."""
    basis = sym_basis(V.dim, p)
    index = {I: t for t, I in enumerate(basis)}
    mats = []
    for A in V.matrices:
        rows = [[ZERO] * len(basis) for _ in basis]
        for t, I in enumerate(basis):
            for s, i in enumerate(I):
                rest = I[:s] + I[s + 1:]
                for j in range(V.dim):
                    a = A.entries[j][i]
                    if a:
                        J = tuple(sorted(rest + (j,)))
                        rows[index[J]][t] += a
        mats.append(ExactMatrix(len(basis), len(basis), tuple(tuple(r) for r in rows)))
    labels = tuple("·".join(V.labels[i] for i in I) if I else "1" for I in basis)
    return Representation(len(basis), tuple(mats), labels)


# subalgebras, quotients, Bott connection

class Subalgebra:
    """A subspace of g given by column vectors in g-coordinates, closed under the bracket.

    The canonical basis b_1..b_s is the echelon basis of the span; the
    complement used everywhere is spanned by standard basis vectors at the
    non-pivot coordinates.
    """

    def __init__(self, parent: LieAlgebra, vectors: Sequence[Sequence], *, check: bool = True):
        self.parent = parent
        self.space = Subspace.span(vectors, parent.dim)
        if check and not self.is_closed():
            raise PreconditionError("subspace is not closed under the bracket")

    @classmethod
    def from_matrix(cls, parent: LieAlgebra, basis_vectors: ExactMatrix, **kw) -> "Subalgebra":
        return cls(parent, basis_vectors.columns(), **kw)

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def basis(self) -> tuple:
        return self.space.vectors

    @property
    def complement_indices(self) -> tuple:
        piv = set(self.space.pivots)
        return tuple(i for i in range(self.parent.dim) if i not in piv)

    @property
    def complement(self) -> tuple:
        n = self.parent.dim
        return tuple(unit_vector(n, i) for i in self.complement_indices)

    def is_closed(self) -> bool:
        return all(self.space.contains(self.parent.bracket(u, v))
                   for u, v in combinations(self.basis, 2))

    def is_ideal(self) -> bool:
        n = self.parent.dim
        return all(self.space.contains(self.parent.bracket(unit_vector(n, i), v))
                   for i in range(n) for v in self.basis)

    def is_abelian(self) -> bool:
        return all(not any(self.parent.bracket(u, v)) for u, v in combinations(self.basis, 2))

    def coordinates(self, v: Sequence[Fraction]) -> tuple:
        return self.space.coordinates(v)

    def h_component(self, v: Sequence[Fraction]) -> tuple:
        """Coordinates in (b_i) of the h-part of v for g = h ⊕ complement."""
        return tuple(v[p] for p in self.space.pivots)

    def as_lie_algebra(self) -> LieAlgebra:
        s = self.dim
        c = [[list(self.coordinates(self.parent.bracket(u, v))) for v in self.basis] for u in self.basis]
        labels = tuple(f"b{i + 1}" for i in range(s))
        if all(sum(1 for x in b if x) == 1 for b in self.basis):
            labels = tuple(self.parent.labels[p] for p in self.space.pivots)
        return LieAlgebra(s, tuple(tuple(tuple(v) for v in row) for row in c), labels)

    def adapted_basis(self) -> ExactMatrix:
        """Columns: b_1..b_s followed by the complement vectors."""
        return ExactMatrix.from_columns(list(self.basis) + list(self.complement), self.parent.dim)

    def quotient_space(self) -> QuotientSpace:
        return quotient(Subspace.full(self.parent.dim), self.space)


def restrict_rep(V: Representation, h: Subalgebra) -> Representation:
    return Representation(V.dim, tuple(V.act(b) for b in h.basis), V.labels)


def quotient_lie_algebra(g: LieAlgebra, h: Subalgebra) -> LieAlgebra:
    if not h.is_ideal():
        raise PreconditionError("quotient by a subalgebra that is not an ideal")
    qs = h.quotient_space()
    reps = [qs.representative(j) for j in range(qs.dim)]
    c = [[list(qs.project(g.bracket(u, v))) for v in reps] for u in reps]
    labels = tuple(f"{g.labels[i]}̄" for i in h.complement_indices)
    return LieAlgebra(qs.dim, tuple(tuple(tuple(v) for v in row) for row in c), labels)


def bott_rep(g: LieAlgebra, h: Subalgebra) -> Representation:
    """Representation of h (canonical basis) on g/h: β·ᾱ = [β, α] mod h."""
    qs = h.quotient_space()
    reps = [qs.representative(j) for j in range(qs.dim)]
    mats = []
    for b in h.basis:
        mats.append(ExactMatrix.from_columns([qs.project(g.bracket(b, a)) for a in reps], qs.dim))
    labels = tuple(f"{g.labels[i]}̄" for i in h.complement_indices)
    return Representation(qs.dim, tuple(mats), labels)


def lie_algebra_from_json(data: dict) -> LieAlgebra:
    dim = int(data["dim"])
    brackets = {}
    for entry in data.get("brackets", []):
        i, j = int(entry["i"]), int(entry["j"])
        if not (0 <= i < dim and 0 <= j < dim):
            raise StructuralError(f"bracket index out of range: ({i},{j})")
        coeffs = {int(k): v for k, v in entry.get("coeffs", {}).items()}
        if any(not 0 <= k < dim for k in coeffs):
            raise StructuralError(f"bracket coefficient index out of range in ({i},{j})")
        brackets[(i, j)] = coeffs
    c = [[[ZERO] * dim for _ in range(dim)] for _ in range(dim)]
    explicit = set()
    for (i, j), coeffs in brackets.items():
        explicit.add((i, j))
        for k, x in coeffs.items():
            c[i][j][k] = to_scalar(x)
    # fill antisymmetric counterparts only where the pair was not given explicitly
    for (i, j), coeffs in brackets.items():
        if (j, i) not in explicit:
            for k, x in coeffs.items():
                c[j][i][k] = -to_scalar(x)
    return LieAlgebra(dim, tuple(tuple(tuple(v) for v in row) for row in c),
                      tuple(data.get("basis", ())))


def representation_from_json(data: dict, g: LieAlgebra) -> Representation:
    m = int(data["dim"])
    mats = tuple(ExactMatrix.from_rows(a, cols=m) for a in data["matrices"])
    if len(mats) != g.dim:
        raise StructuralError(f"{len(mats)} representation matrices for a {g.dim}-dimensional algebra")
    return Representation(m, mats, tuple(data.get("basis", ())))
