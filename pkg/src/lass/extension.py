"""Abelian extensions l -> g -> B: curvature, extension class, contraction and d_2.

Contraction convention, for γ ∈ Ω^2(B, l) and ω ∈ Ω^p(B, ∧^q l* ⊗ V):

    (i_γ ω)(b_1, ..., b_{p+2}) = Σ_{i<j} (-1)^{i+j-1} ι_{γ(b_i, b_j)} ω(b_1, ..b̂_i..b̂_j.., b_{p+2})

with 1-based positions and ι inserting into the first slot of the ∧•l* part.
Against the engine, with E_2 transported by ω ↦ ω(β̃_1..β̃_p, λ_1..λ_q),
this convention gives d_2 = D2_SIGN · (-1)^p · i_[γ] with D2_SIGN = -1,
calibrated once on the Heisenberg algebra modulo its center.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from .ce import (
    LieAlgebra,
    Representation,
    Subalgebra,
    ce_complex,
    insert_index,
    quotient_lie_algebra,
    wedge_basis,
)
from .cochain import CochainComplex, cohomology
from .errors import InternalConsistencyError, PreconditionError, StructuralError, Verdict
from .exactq import ZERO, ExactMatrix, image, to_scalar
from .serre import HSInstance, e2_model, e2_transport, hs_filtration
from .spectral import engine

D2_SIGN = -1


@dataclass
class AbelianExtension:
    g: LieAlgebra
    l: Subalgebra
    V: Representation
    splitting: ExactMatrix          # dim g x dim B, columns σ(b_j)
    B: LieAlgebra = field(init=False)

    def __post_init__(self):
        if not self.l.is_ideal():
            raise PreconditionError("l is not an ideal")
        if not self.l.is_abelian():
            raise PreconditionError("l is not abelian")
        for b in self.l.basis:
            if not self.V.act(b).is_zero():
                raise PreconditionError("l does not act trivially on V")
        self.B = quotient_lie_algebra(self.g, self.l)
        if self.splitting.shape != (self.g.dim, self.B.dim):
            raise StructuralError(f"splitting of shape {self.splitting.shape}, "
                                  f"expected {(self.g.dim, self.B.dim)}")
        qs = self.l.quotient_space()
        if qs.projector @ self.splitting != ExactMatrix.identity(self.B.dim):
            raise StructuralError("splitting is not a section of the projection g -> B")

    @classmethod
    def build(cls, g: LieAlgebra, l_vectors: Sequence, V: Representation | None = None,
              splitting: ExactMatrix | None = None) -> "AbelianExtension":
        l = Subalgebra(g, l_vectors)
        if V is None:
            V = Representation(1, tuple(ExactMatrix.zeros(1, 1) for _ in range(g.dim)), ("1",))
        if splitting is None:
            splitting = ExactMatrix.from_columns(l.complement, g.dim)
        return cls(g, l, V, splitting)

    def sigma(self, j: int) -> tuple:
        return self.splitting.column(j)

    def l_representation(self) -> Representation:
        """∇^L_b x = [σ(b), x] on l, in l's echelon basis."""
        mats = []
        for j in range(self.B.dim):
            cols = [self.l.coordinates(self.g.bracket(self.sigma(j), x)) for x in self.l.basis]
            mats.append(ExactMatrix.from_columns(cols, self.l.dim))
        return Representation(self.l.dim, tuple(mats))

    def shifted(self, lam: ExactMatrix) -> "AbelianExtension":
        """Splitting σ + λ for λ: B -> l given as a dim l x dim B matrix in l-coordinates."""
        delta = ExactMatrix.from_columns(self.l.basis, self.g.dim) @ lam
        return AbelianExtension(self.g, self.l, self.V, self.splitting + delta)


@dataclass(frozen=True)
class CurvatureForm:
    """gamma[i][j] = γ(b_i, b_j) in l-coordinates."""

    values: tuple

    def cochain(self) -> tuple:
        """γ as an element of C^2(B, l) in CE coordinates."""
        nB = len(self.values)
        out = []
        for i, j in wedge_basis(nB, 2):
            out.extend(self.values[i][j])
        return tuple(out)


def curvature(ext: AbelianExtension) -> CurvatureForm:
    nB = ext.B.dim
    vals = []
    for i in range(nB):
        row = []
        for j in range(nB):
            lhs = ext.g.bracket(ext.sigma(i), ext.sigma(j))
            corr = ext.splitting.apply(ext.B.structure[i][j])
            diff = tuple(a - b for a, b in zip(lhs, corr))
            try:
                row.append(ext.l.coordinates(diff))
            except Exception as exc:
                raise StructuralError(f"curvature value γ({i},{j}) is not in l") from exc
        vals.append(tuple(row))
    return CurvatureForm(tuple(vals))


def l_complex(ext: AbelianExtension) -> CochainComplex:
    return ce_complex(ext.B, ext.l_representation())


def check_curvature(ext: AbelianExtension, gamma: CurvatureForm | None = None) -> Verdict:
    gamma = curvature(ext) if gamma is None else gamma
    n = ext.B.dim
    for i in range(n):
        for j in range(n):
            if gamma.values[i][j] != tuple(-x for x in gamma.values[j][i]):
                return Verdict.failed(f"γ not antisymmetric at ({i},{j})", site=(i, j))
    c = l_complex(ext)
    if any(c.d(2).apply(gamma.cochain())):
        return Verdict.failed("γ is not d_B-closed")
    return Verdict.passed("antisymmetric and closed")


@dataclass
class ExtensionClass:
    coordinates: tuple            # in the chosen basis of H^2(B, l)
    primitive: tuple | None       # λ with d_B λ = γ when the class vanishes

    @property
    def is_zero(self) -> bool:
        return not any(self.coordinates)


def extension_class(ext: AbelianExtension) -> ExtensionClass:
    c = l_complex(ext)
    gamma = curvature(ext).cochain()
    H2 = cohomology(c, 2)
    if not H2.numerator.contains(gamma):
        raise StructuralError("curvature is not closed")
    coords = H2.project(gamma) if H2.dim else ()
    primitive = None
    if not any(coords):
        primitive = solve(c.d(1), gamma)
    return ExtensionClass(tuple(coords), primitive)


def solve(m: ExactMatrix, rhs: Sequence) -> tuple | None:
    """One solution x of m x = rhs, or None."""
    from .exactq import rref
    aug = m.hstack(ExactMatrix.from_columns([rhs], m.rows))
    red, piv = rref(aug)
    if m.cols in piv:
        return None
    x = [ZERO] * m.cols
    for row, pc in zip(red.entries, piv):
        x[pc] = row[m.cols]
    return tuple(x)


def same_class(ext: AbelianExtension, other: AbelianExtension) -> bool:
    """γ' - γ is d_B-exact."""
    g1 = curvature(ext).cochain()
    g2 = curvature(other).cochain()
    diff = tuple(a - b for a, b in zip(g2, g1))
    return image(l_complex(ext).d(1)).contains(diff)


# contraction

def contraction_matrix(gamma: CurvatureForm, nB: int, nl: int, m: int, p: int, q: int) -> ExactMatrix:
    """i_γ: C^p(B, ∧^q l* ⊗ V) -> C^{p+2}(B, ∧^{q-1} l* ⊗ V) in CE coordinates."""
    src_B = wedge_basis(nB, p)
    tgt_B = wedge_basis(nB, p + 2)
    if q <= 0:
        # ∧^{q-1} l* = 0
        return ExactMatrix.zeros(0, len(src_B) * len(wedge_basis(nl, q)) * m)
    src_l = wedge_basis(nl, q)
    tgt_l = wedge_basis(nl, q - 1)
    src_B_index = {J: t for t, J in enumerate(src_B)}
    src_l_index = {I: t for t, I in enumerate(src_l)}
    fs, ft = len(src_l) * m, len(tgt_l) * m
    rows = [[ZERO] * (len(src_B) * fs) for _ in range(len(tgt_B) * ft)]
    for tJ, J in enumerate(tgt_B):
        for i, j in combinations(range(p + 2), 2):
            # 1-based positions: (-1)^{(i+1)+(j+1)-1} = (-1)^{i+j+1}
            sign = 1 if (i + j) % 2 else -1
            x = gamma.values[J[i]][J[j]]
            rest = J[:i] + J[i + 1:j] + J[j + 1:]
            sJ = src_B_index[rest]
            for tI, I in enumerate(tgt_l):
                for t, xt in enumerate(x):
                    if not xt:
                        continue
                    s2, K = insert_index(I, t)
                    if not s2:
                        continue
                    sK = src_l_index[K]
                    for a in range(m):
                        rows[tJ * ft + tI * m + a][sJ * fs + sK * m + a] += sign * s2 * xt
    return ExactMatrix(len(tgt_B) * ft, len(src_B) * fs, tuple(tuple(r) for r in rows))


def contract_igamma(gamma: CurvatureForm, omega: Sequence, nl: int, m: int, p: int, q: int) -> tuple:
    return contraction_matrix(gamma, len(gamma.values), nl, m, p, q).apply(omega)


# d_2

@dataclass
class D2Cell:
    pq: tuple
    engine: ExactMatrix          # transported d_2 on the oracle model
    oracle: ExactMatrix          # D2_SIGN (-1)^p i_[γ] on cohomology
    engine_rank: int
    oracle_rank: int

    @property
    def equal(self) -> bool:
        return self.engine == self.oracle

    def to_json(self) -> dict:
        return {"pq": list(self.pq), "engine_rank": self.engine_rank,
                "oracle_rank": self.oracle_rank, "equal": self.equal}


def d2_cells(ext: AbelianExtension, inst: HSInstance | None = None) -> list:
    inst = hs_filtration(ext.g, ext.l, ext.V) if inst is None else inst
    ss = engine(inst.filtered)
    gamma = curvature(ext)
    nB, nl, m = ext.B.dim, ext.l.dim, ext.V.dim
    models = {q: e2_model(inst, q) for q in range(nl + 1)}
    for q, model in models.items():
        H = model.induced.cohomology
        if H.dim != H.ambient_dim:
            raise InternalConsistencyError("H^q(l, V) should equal Ω^q(l, V) for an abelian extension")
    cells = []
    for q in range(1, nl + 1):
        for p in range(0, nB - 1):
            src_model, tgt_model = models[q], models[q - 1]
            Hs = cohomology(src_model.complex, p)
            Ht = cohomology(tgt_model.complex, p + 2)
            Ts = e2_transport(inst, p, q, src_model)
            Tt = e2_transport(inst, p + 2, q - 1, tgt_model)
            D = ss.differential(2, p, p + q)
            transported = Tt @ D @ inverse_or_empty(Ts)
            C = contraction_matrix(gamma, nB, nl, m, p, q)
            sign = D2_SIGN * (-1 if p % 2 else 1)
            if Hs.dim and Ht.dim:
                oracle = (Ht.projector @ C @ Hs.representatives).scale(sign)
            else:
                oracle = ExactMatrix.zeros(Ht.dim, Hs.dim)
            cells.append(D2Cell((p, q), transported, oracle, transported.rank(), oracle.rank()))
    return cells


def inverse_or_empty(T: ExactMatrix) -> ExactMatrix:
    from .exactq import inverse
    if T.rows == 0:
        return T.T
    return inverse(T)


def d2_check(ext: AbelianExtension) -> tuple:
    cells = d2_cells(ext)
    bad = [c.pq for c in cells if not c.equal]
    if bad:
        return Verdict.failed(f"d_2 differs from the contraction at {bad}", site=bad), cells
    return Verdict.passed("d_2 equals the contraction with the extension class"), cells


def splitting_from_json(data, g: LieAlgebra, nB: int) -> ExactMatrix:
    cols = [[to_scalar(x) for x in col] for col in data]
    return ExactMatrix.from_columns(cols, g.dim)
