"""Polynomial Lie algebroids g × W -> W with the origin fixed, and their k-jet complexes.

A polynomial is a dict {exponent tuple: Fraction}.  Sections are
polynomial combinations of the constant generators e_a, with

    ♯(e_a) = Σ_i P_a^i(w) ∂_i,      [e_a, e_b] = Σ_d c_ab^d(w) e_d.

Everything is truncated modulo the ideal of polynomials of degree > k.
The jet complex is ∧•g* ⊗ Pol^{≤k}(W) ⊗ V, filtered by polynomial degree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Sequence

from .ce import (
    LieAlgebra,
    Representation,
    ce_complex,
    koszul_differential,
    sym_power_rep,
    tensor_rep,
    wedge_basis,
)
from .cochain import CochainComplex, FilteredComplex, betti, check_complex, check_filtration
from .errors import PreconditionError, StructuralError, Verdict
from .exactq import ZERO, ExactMatrix, Subspace, scalar_to_str, to_scalar
from .spectral import engine

# polynomials

def degree(alpha: tuple) -> int:
    return sum(alpha)


def monomials(m: int, d: int) -> list:
    """Exponent vectors of total degree d, lexicographically descending."""
    out = []
    for combo in combinations_with_replacement(range(m), d):
        alpha = [0] * m
        for i in combo:
            alpha[i] += 1
        out.append(tuple(alpha))
    return sorted(out, reverse=True)


def monomial_basis(m: int, k: int) -> list:
    """Graded lexicographic basis of Pol^{≤k}(Q^m)."""
    return [alpha for d in range(k + 1) for alpha in monomials(m, d)]


def poly(terms) -> dict:
    out = {}
    for alpha, c in (terms.items() if isinstance(terms, dict) else terms):
        c = to_scalar(c)
        if c:
            alpha = tuple(alpha)
            out[alpha] = out.get(alpha, ZERO) + c
    return {a: c for a, c in out.items() if c}


def poly_add(f: dict, g: dict, scale=1) -> dict:
    out = dict(f)
    for a, c in g.items():
        out[a] = out.get(a, ZERO) + scale * c
    return {a: c for a, c in out.items() if c}


def poly_mul(f: dict, g: dict, k: int | None = None) -> dict:
    out = {}
    for a, x in f.items():
        for b, y in g.items():
            ab = tuple(i + j for i, j in zip(a, b))
            if k is not None and degree(ab) > k:
                continue
            out[ab] = out.get(ab, ZERO) + x * y
    return {a: c for a, c in out.items() if c}


def poly_diff(f: dict, i: int) -> dict:
    out = {}
    for a, c in f.items():
        if a[i]:
            b = a[:i] + (a[i] - 1,) + a[i + 1:]
            out[b] = out.get(b, ZERO) + a[i] * c
    return {a: c for a, c in out.items() if c}


def truncate(f: dict, k: int) -> dict:
    return {a: c for a, c in f.items() if degree(a) <= k}


def apply_field(field_: Sequence[dict], f: dict, k: int | None = None) -> dict:
    """X(f) = Σ_i X^i ∂_i f."""
    out = {}
    for i, Xi in enumerate(field_):
        if Xi:
            out = poly_add(out, poly_mul(Xi, poly_diff(f, i), k))
    return out


def poly_to_str(f: dict, names: Sequence[str]) -> str:
    if not f:
        return "0"
    parts = []
    for a in sorted(f, key=lambda a: (degree(a), a), reverse=True):
        mono = "·".join(n if e == 1 else f"{n}^{e}" for n, e in zip(names, a) if e) or "1"
        parts.append(f"{scalar_to_str(f[a])}*{mono}")
    return " + ".join(parts)


# algebroids

@dataclass
class PolyJetAlgebroid:
    fiber_dim: int
    base_dim: int
    order: int
    anchor: list                 # anchor[a][i] = P_a^i
    structure: list              # structure[a][b][d] = c_ab^d
    labels: tuple = ()
    base_labels: tuple = ()

    def __post_init__(self):
        n, m = self.fiber_dim, self.base_dim
        if len(self.anchor) != n or any(len(X) != m for X in self.anchor):
            raise StructuralError(f"anchor must list {m} components for each of {n} generators")
        if len(self.structure) != n or any(len(row) != n or any(len(v) != n for v in row)
                                           for row in self.structure):
            raise StructuralError(f"structure functions must be an {n}x{n}x{n} array")
        zero = (0,) * m
        for a, X in enumerate(self.anchor):
            for i, P in enumerate(X):
                if P.get(zero):
                    raise PreconditionError(f"anchor of generator {a} does not vanish at the origin")
                if any(len(alpha) != m for alpha in P):
                    raise StructuralError("exponent vector of the wrong length")
        if not self.labels:
            self.labels = tuple(f"e{a + 1}" for a in range(n))
        if not self.base_labels:
            self.base_labels = tuple(f"w{i + 1}" for i in range(m))

    @property
    def monomials(self) -> list:
        return monomial_basis(self.base_dim, self.order)

    def with_order(self, k: int) -> "PolyJetAlgebroid":
        return PolyJetAlgebroid(self.fiber_dim, self.base_dim, k, self.anchor, self.structure,
                                self.labels, self.base_labels)

    def is_linear(self) -> bool:
        """Linear anchor and constant structure functions."""
        return (all(degree(a) == 1 for X in self.anchor for P in X for a in P)
                and all(degree(a) == 0 for row in self.structure for v in row for c in v for a in c))

    def linearization(self) -> tuple:
        """(fiber Lie algebra at 0, matrices B_a of the linear part of the anchor)."""
        n, m = self.fiber_dim, self.base_dim
        zero = (0,) * m
        c = [[[self.structure[a][b][d].get(zero, ZERO) for d in range(n)] for b in range(n)]
             for a in range(n)]
        L = LieAlgebra(n, tuple(tuple(tuple(v) for v in row) for row in c), self.labels)
        mats = []
        for X in self.anchor:
            rows = [[X[i].get(tuple(1 if t == j else 0 for t in range(m)), ZERO) for j in range(m)]
                    for i in range(m)]
            mats.append(ExactMatrix.from_rows(rows, cols=m))
        return L, mats

    def to_json(self) -> dict:
        anchor = []
        for a, X in enumerate(self.anchor):
            terms = [{"coord": i, "monomial": list(alpha), "coeff": scalar_to_str(c)}
                     for i, P in enumerate(X) for alpha, c in sorted(P.items(), reverse=True)]
            anchor.append({"gen": a, "field": terms})
        sf = []
        n = self.fiber_dim
        for a in range(n):
            for b in range(a + 1, n):
                for d in range(n):
                    for alpha, c in sorted(self.structure[a][b][d].items(), reverse=True):
                        sf.append({"a": a, "b": b, "target": d, "monomial": list(alpha),
                                   "coeff": scalar_to_str(c)})
        return {"fiber_dim": n, "base_dim": self.base_dim, "order": self.order,
                "fiber_basis": list(self.labels), "base_basis": list(self.base_labels),
                "anchor": anchor, "structure_functions": sf}

    @classmethod
    def from_json(cls, data: dict) -> "PolyJetAlgebroid":
        n, m = int(data["fiber_dim"]), int(data["base_dim"])
        anchor = [[{} for _ in range(m)] for _ in range(n)]
        for entry in data.get("anchor", []):
            a = int(entry["gen"])
            for t in entry["field"]:
                P = anchor[a][int(t["coord"])]
                alpha = tuple(t["monomial"])
                P[alpha] = P.get(alpha, ZERO) + to_scalar(t["coeff"])
        structure = [[[{} for _ in range(n)] for _ in range(n)] for _ in range(n)]
        for t in data.get("structure_functions", []):
            a, b, d = int(t["a"]), int(t["b"]), int(t["target"])
            alpha = tuple(t["monomial"])
            c = to_scalar(t["coeff"])
            structure[a][b][d][alpha] = structure[a][b][d].get(alpha, ZERO) + c
            if t.get("antisymmetrize", True):
                structure[b][a][d][alpha] = structure[b][a][d].get(alpha, ZERO) - c
        clean = lambda P: {k: v for k, v in P.items() if v}
        return cls(n, m, int(data["order"]),
                   [[clean(P) for P in X] for X in anchor],
                   [[[clean(P) for P in v] for v in row] for row in structure],
                   tuple(data.get("fiber_basis", ())), tuple(data.get("base_basis", ())))


def action_algebroid(g: LieAlgebra, rho: Representation, k: int) -> PolyJetAlgebroid:
    """Action algebroid g ⋉ W; the anchor of e_a is the linear field w ↦ -ρ(a) w."""
    m = rho.dim
    units = [tuple(1 if t == j else 0 for t in range(m)) for j in range(m)]
    anchor = []
    for A in rho.matrices:
        anchor.append([{units[j]: -A.entries[i][j] for j in range(m) if A.entries[i][j]}
                       for i in range(m)])
    zero = (0,) * m
    structure = [[[({zero: c} if c else {}) for c in g.structure[a][b]] for b in range(g.dim)]
                 for a in range(g.dim)]
    return PolyJetAlgebroid(g.dim, m, k, anchor, structure, g.labels, rho.labels)


def check_axioms_mod(A: PolyJetAlgebroid) -> Verdict:
    """Antisymmetry, Jacobi and anchor compatibility modulo degree > order."""
    n, k = A.fiber_dim, A.order
    c = A.structure
    for a in range(n):
        for b in range(n):
            for d in range(n):
                if poly_add(c[a][b][d], c[b][a][d]):
                    return Verdict.failed(f"c_{a}{b}^{d} is not antisymmetric", site=(a, b, d))
    # [♯a, ♯b] = Σ_d c_ab^d ♯d
    for a in range(n):
        for b in range(a + 1, n):
            for i in range(A.base_dim):
                lhs = poly_add(apply_field(A.anchor[a], A.anchor[b][i], k),
                               apply_field(A.anchor[b], A.anchor[a][i], k), -1)
                rhs = {}
                for d in range(n):
                    rhs = poly_add(rhs, poly_mul(c[a][b][d], A.anchor[d][i], k))
                diff = truncate(poly_add(lhs, rhs, -1), k)
                if diff:
                    mono = max(diff)
                    return Verdict.failed(
                        f"anchor not bracket-compatible for ({a},{b}), component {i}, monomial {list(mono)}",
                        site=(a, b, i, mono))
    # Σ_cyc ♯a(c_bc^e) + c_bc^d c_ad^e = 0
    for a in range(n):
        for b in range(a + 1, n):
            for cc in range(b + 1, n):
                for e in range(n):
                    total = {}
                    for x, y, z in ((a, b, cc), (b, cc, a), (cc, a, b)):
                        total = poly_add(total, apply_field(A.anchor[x], c[y][z][e], k))
                        for d in range(n):
                            total = poly_add(total, poly_mul(c[y][z][d], c[x][d][e], k))
                    total = truncate(total, k)
                    if total:
                        mono = max(total)
                        return Verdict.failed(
                            f"Jacobi fails for ({a},{b},{cc}), component {e}, monomial {list(mono)}",
                            site=(a, b, cc, e, mono))
    return Verdict.passed(f"algebroid axioms hold modulo degree > {k}")


# the jet complex

def _field_operator(X: Sequence[dict], basis: list, k: int) -> ExactMatrix:
    index = {alpha: t for t, alpha in enumerate(basis)}
    cols = []
    for alpha in basis:
        img = apply_field(X, {alpha: Fraction(1)}, k)
        col = [ZERO] * len(basis)
        for beta, v in img.items():
            col[index[beta]] += v
        cols.append(col)
    return ExactMatrix.from_columns(cols, len(basis))


def _mult_operator(f: dict, basis: list, k: int) -> ExactMatrix:
    index = {alpha: t for t, alpha in enumerate(basis)}
    cols = []
    for alpha in basis:
        col = [ZERO] * len(basis)
        for beta, v in poly_mul(f, {alpha: Fraction(1)}, k).items():
            col[index[beta]] += v
        cols.append(col)
    return ExactMatrix.from_columns(cols, len(basis))


@dataclass
class JetComplex:
    algebroid: PolyJetAlgebroid
    V: Representation
    filtered: FilteredComplex
    basis: list = field(default_factory=list)     # monomials of Pol^{≤k}

    @property
    def complex(self) -> CochainComplex:
        return self.filtered.complex

    @property
    def order(self) -> int:
        return self.algebroid.order

    @property
    def ss(self):
        return engine(self.filtered)

    def poly_degree(self, n: int, index: int) -> int:
        m = self.V.dim
        return degree(self.basis[(index % (len(self.basis) * m)) // m])


def jet_complex(A: PolyJetAlgebroid, V: Representation | None = None, k: int | None = None,
                *, check: bool = True) -> JetComplex:
    if k is not None and k != A.order:
        A = A.with_order(k)
    k = A.order
    n = A.fiber_dim
    if V is None:
        V = Representation(1, tuple(ExactMatrix.zeros(1, 1) for _ in range(n)), ("1",))
    if len(V.matrices) != n:
        raise StructuralError("V must have one matrix per fiber generator")
    if check:
        v = check_axioms_mod(A)
        if not v:
            raise PreconditionError(v.message)
    basis = A.monomials
    P = len(basis)
    idP, idV = ExactMatrix.identity(P), ExactMatrix.identity(V.dim)
    action = [_field_operator(A.anchor[a], basis, k).kron(idV) + idP.kron(V.matrices[a])
              for a in range(n)]
    structure = [[[(d, _mult_operator(A.structure[a][b][d], basis, k).kron(idV))
                   for d in range(n) if A.structure[a][b][d]] for b in range(n)] for a in range(n)]
    M = P * V.dim
    dims = [len(wedge_basis(n, j)) * M for j in range(n + 1)]
    diffs = [koszul_differential(n, j, M, action, structure) for j in range(n)]
    labels = []
    for j in range(n + 1):
        row = []
        for I in wedge_basis(n, j):
            ext = "∧".join(f"ξ{A.labels[i]}" for i in I) or "1"
            for alpha in basis:
                mono = "·".join(nm if e == 1 else f"{nm}^{e}"
                                for nm, e in zip(A.base_labels, alpha) if e) or "1"
                for s in V.labels:
                    row.append(f"{ext}⊗{mono}" + ("" if V.dim == 1 else f"⊗{s}"))
        labels.append(row)
    c = CochainComplex(dims, diffs, labels)
    levels = []
    for j in range(n + 1):
        seq = []
        for p in range(k + 1):
            vecs = []
            for t in range(dims[j]):
                if degree(basis[(t % M) // V.dim]) >= p:
                    vecs.append([Fraction(1) if s == t else ZERO for s in range(dims[j])])
            seq.append(Subspace.span(vecs, dims[j]))
        levels.append(seq)
    jc = JetComplex(A, V, FilteredComplex(c, levels), basis)
    if check:
        for verdict in (check_complex(c), check_filtration(jc.filtered)):
            if not verdict:
                raise StructuralError(verdict.message)
    return jc


# checks at finite order

def e1_oracle_rep(A: PolyJetAlgebroid, V: Representation, p: int) -> tuple:
    """(fiber algebra L, S^p of the dual linear part of the anchor ⊗ V)."""
    L, mats = A.linearization()
    dual_lin = Representation(A.base_dim, tuple(B.T for B in mats), A.base_labels)
    return L, tensor_rep(sym_power_rep(dual_lin, p), V)


def e1_oracle_table(A: PolyJetAlgebroid, V: Representation | None = None) -> dict:
    if V is None:
        V = Representation(1, tuple(ExactMatrix.zeros(1, 1) for _ in range(A.fiber_dim)), ("1",))
    out = {}
    for p in range(A.order + 1):
        L, W = e1_oracle_rep(A, V, p)
        for j, b in enumerate(betti(ce_complex(L, W))):
            if b:
                out[(p, j - p)] = b
    return out


def e1_invariant_check(A: PolyJetAlgebroid, V: Representation | None = None, k: int | None = None):
    """Compare E_1 of the jet complex with H^{p+q}(L, S^p W* ⊗ V); returns (verdict, engine, oracle)."""
    jc = jet_complex(A, V, k)
    got = jc.ss.nonzero_dims(1)
    want = e1_oracle_table(jc.algebroid, jc.V)
    if got != want:
        keys = sorted(set(got) | set(want))
        bad = [pq for pq in keys if got.get(pq, 0) != want.get(pq, 0)]
        return Verdict.failed(f"E_1 differs from the invariant oracle at {bad}", site=bad), got, want
    return Verdict.passed("E_1 matches the invariant oracle"), got, want


def is_degree_preserving(jc: JetComplex) -> bool:
    c = jc.complex
    for n in range(c.top):
        D = c.d(n)
        for i, row in enumerate(D.entries):
            di = jc.poly_degree(n + 1, i)
            for j, x in enumerate(row):
                if x and jc.poly_degree(n, j) != di:
                    return False
    return True


def linearisable_stabilization_check(A: PolyJetAlgebroid, V: Representation | None = None,
                                     k: int | None = None) -> Verdict:
    jc = jet_complex(A, V, k)
    ss = jc.ss
    nonzero = [(r, pq, rk) for r in range(1, ss.p_max + 1) for pq, rk in ss.ranks(r).items()]
    if nonzero:
        r, (p, q), rk = nonzero[0]
        return Verdict.failed(f"d_{r} ≠ 0 at ({p},{q}) (rank {rk}); no degeneration at E_1",
                              site=(r, p, q))
    if not jc.algebroid.is_linear():
        raise PreconditionError("the product formula is stated for linear anchors and constant brackets")
    if not is_degree_preserving(jc):
        return Verdict.failed("E_1 degenerates but d mixes polynomial degrees")
    total = [0] * (jc.algebroid.fiber_dim + 1)
    for (p, q), b in e1_oracle_table(jc.algebroid, jc.V).items():
        total[p + q] += b
    direct = list(betti(jc.complex))
    if direct != total:
        return Verdict.failed(f"H(J^k) = {direct}, product formula gives {total}")
    return Verdict.passed(f"degenerates at E_1; H(J^k) = {direct}")


def scaling_matrix(jc: JetComplex, n: int, lam) -> ExactMatrix:
    lam = to_scalar(lam)
    return ExactMatrix.diagonal([lam ** jc.poly_degree(n, t) for t in range(jc.complex.dim(n))])


def scalar_pullback_check(A: PolyJetAlgebroid, lam, V: Representation | None = None) -> Verdict:
    """Does pulling back along w ↦ λw commute with d?"""
    if not to_scalar(lam):
        raise PreconditionError("λ must be nonzero")
    jc = jet_complex(A, V)
    c = jc.complex
    for n in range(c.top):
        lhs = c.d(n) @ scaling_matrix(jc, n, lam)
        rhs = scaling_matrix(jc, n + 1, lam) @ c.d(n)
        if lhs != rhs:
            return Verdict.failed(f"m_λ* does not commute with d in degree {n}", site=n)
    return Verdict.passed("m_λ* commutes with d")


def jet_betti(A: PolyJetAlgebroid, V: Representation | None = None, k: int | None = None) -> tuple:
    return betti(jet_complex(A, V, k).complex)
