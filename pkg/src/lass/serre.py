"""Hochschild-Serre filtration of a subalgebra and the E_0 / E_1 / E_2 identifications."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from .ce import (
    LieAlgebra,
    Representation,
    Subalgebra,
    bott_rep,
    ce_complex,
    check_flat,
    dual_rep,
    evaluate_form,
    exterior_power_matrix,
    exterior_power_rep,
    quotient_lie_algebra,
    restrict_rep,
    tensor_rep,
    wedge_basis,
)
from .cochain import CochainComplex, FilteredComplex, cohomology
from .errors import PreconditionError, Verdict
from .exactq import (
    ZERO,
    ExactMatrix,
    QuotientSpace,
    Subspace,
    det,
    inverse,
    kernel,
    unit_vector,
)
from .spectral import d0_matrix, e_entry, engine


def _trivial_rep(g: LieAlgebra) -> Representation:
    return Representation(1, tuple(ExactMatrix.zeros(1, 1) for _ in range(g.dim)), ("1",))


def hs_levels(g: LieAlgebra, h: Subalgebra, V: Representation) -> list:
    """F^p C^n = ⊕_{k >= p} ∧^{n-k} C° ⊗ ∧^k h° ⊗ V in standard coordinates."""
    N, s, m = g.dim, h.dim, V.dim
    dual = inverse(h.adapted_basis())  # rows: dual basis of (b_1..b_s, c_1..c_t)
    levels = []
    for n in range(N + 1):
        forms = exterior_power_matrix(dual.T, n)  # column I = φ^I in standard coords
        basis = wedge_basis(N, n)
        by_count: dict = {}
        for col, I in enumerate(basis):
            k = sum(1 for i in I if i >= s)
            by_count.setdefault(k, []).append(col)
        seq = []
        for p in range(n + 1):
            vecs = []
            for k, cols in by_count.items():
                if k < p:
                    continue
                for col in cols:
                    phi = forms.column(col)
                    for a in range(m):
                        v = [ZERO] * (len(basis) * m)
                        for K, x in enumerate(phi):
                            if x:
                                v[K * m + a] = x
                        vecs.append(v)
            seq.append(Subspace.span(vecs, len(basis) * m))
        levels.append(seq)
    return levels


def classical_form_levels(g: LieAlgebra, h: Subalgebra, V: Representation) -> list:
    """F^p C^n = {ω | ω(α_1..α_n) = 0 whenever α_1..α_{n-p+1} ∈ h}, as kernels of evaluations."""
    N, m = g.dim, V.dim
    levels = []
    for n in range(N + 1):
        basis = wedge_basis(N, n)
        seq = []
        for p in range(n + 2):
            if p == 0:
                seq.append(Subspace.full(len(basis) * m))
                continue
            if p > n:
                seq.append(Subspace.zero(len(basis) * m))
                continue
            rows = []
            for hs in wedge_basis(h.dim, n - p + 1):
                for gs in wedge_basis(N, p - 1):
                    args = [h.basis[i] for i in hs] + [unit_vector(N, j) for j in gs]
                    X = ExactMatrix.from_columns(args, N)
                    minors = [det(X.submatrix(K, range(n))) for K in basis]
                    for a in range(m):
                        row = [ZERO] * (len(basis) * m)
                        for K, x in enumerate(minors):
                            row[K * m + a] = x
                        rows.append(row)
            if rows:
                seq.append(kernel(ExactMatrix(len(rows), len(basis) * m, tuple(tuple(r) for r in rows))))
            else:
                seq.append(Subspace.full(len(basis) * m))
        levels.append(seq)
    return levels


@dataclass
class HSInstance:
    g: LieAlgebra
    h: Subalgebra
    V: Representation
    filtered: FilteredComplex
    complement: tuple = field(default=())

    @cached_property
    def h_algebra(self) -> LieAlgebra:
        return self.h.as_lie_algebra()

    @cached_property
    def V_h(self) -> Representation:
        return restrict_rep(self.V, self.h)

    @cached_property
    def bott(self) -> Representation:
        return bott_rep(self.g, self.h)

    @property
    def codim(self) -> int:
        return self.g.dim - self.h.dim

    @property
    def ss(self):
        return engine(self.filtered)

    def e1_coefficients(self, p: int) -> Representation:
        """∧^p (g/h)* ⊗ V as a representation of h."""
        return tensor_rep(exterior_power_rep(dual_rep(self.bott), p), self.V_h)

    def e1_oracle_complex(self, p: int) -> CochainComplex:
        return ce_complex(self.h_algebra, self.e1_coefficients(p))


def hs_filtration(g: LieAlgebra, h: Subalgebra, V: Representation | None = None) -> HSInstance:
    if V is None:
        V = _trivial_rep(g)
    if h.parent != g:
        raise PreconditionError("subalgebra belongs to a different Lie algebra")
    if not h.is_closed():
        raise PreconditionError("Hochschild-Serre filtration needs a subalgebra")
    c = ce_complex(g, V)
    f = FilteredComplex(c, hs_levels(g, h, V))
    return HSInstance(g, h, V, f, h.complement)


def unchecked_hs_filtered_complex(g: LieAlgebra, vectors: Sequence, V: Representation | None = None) -> FilteredComplex:
    """The same construction for an arbitrary subspace; used as a negative control."""
    if V is None:
        V = _trivial_rep(g)
    h = Subalgebra(g, vectors, check=False)
    return FilteredComplex(ce_complex(g, V), hs_levels(g, h, V))


# E_0 and E_1

def _pr_h_last(inst: HSInstance, vectors: Sequence, p: int, q: int) -> ExactMatrix:
    """pr(ω)(α_1..α_q) = ω(α_1..α_q, c_·) in the coordinates of Ω^q(h, ∧^p(g/h)* ⊗ V)."""
    N, m = inst.g.dim, inst.V.dim
    hb, cb = inst.h.basis, inst.h.complement
    I_list = wedge_basis(len(hb), q)
    J_list = wedge_basis(len(cb), p)
    cols = []
    for w in vectors:
        out = []
        for I in I_list:
            for J in J_list:
                args = [hb[i] for i in I] + [cb[j] for j in J]
                out.extend(evaluate_form(w, N, p + q, m, args))
        cols.append(out)
    return ExactMatrix.from_columns(cols, len(I_list) * len(J_list) * m)


def e0_pr_map(inst: HSInstance, p: int, q: int) -> ExactMatrix:
    """E_0^{p,q} -> Ω^q(h, ∧^p(g/h)* ⊗ V), in the quotient coordinates of E_0."""
    entry = e_entry(inst.filtered, 0, p, q)
    return _pr_h_last(inst, entry.space.representatives.columns(), p, q)


def e0_check(inst: HSInstance, p: int, q: int) -> Verdict:
    """pr is invertible on E_0^{p,q} and intertwines d_0 with the CE differential."""
    pr = e0_pr_map(inst, p, q)
    if pr.rows != pr.cols or pr.rank() != pr.cols:
        return Verdict.failed(f"pr is not invertible on E_0^{{{p},{q}}} (shape {pr.shape})", site=(p, q))
    if q + 1 > inst.h.dim or p + q + 1 > inst.g.dim:
        return Verdict.passed("invertible (no outgoing d_0)")
    oracle = inst.e1_oracle_complex(p)
    lhs = e0_pr_map(inst, p, q + 1) @ d0_matrix(inst.filtered, p, q)
    rhs = oracle.d(q) @ pr
    if lhs != rhs:
        return Verdict.failed(f"pr does not intertwine d_0 at ({p},{q})", site=(p, q))
    return Verdict.passed("invertible and intertwines d_0")


def e1_identification(inst: HSInstance, p: int, q: int):
    """(engine dim E_1^{p,q}, oracle dim H^q(h, ∧^p(g/h)* ⊗ V), verdict)."""
    entry = e_entry(inst.filtered, 1, p, q)
    if p < 0 or p > inst.codim or q < 0 or q > inst.h.dim:
        oracle_dim = 0
        ok = entry.dim == 0
        return entry.dim, oracle_dim, Verdict(ok, "outside the support" if ok else "nonzero outside support")
    oracle = inst.e1_oracle_complex(p)
    H = cohomology(oracle, q)
    if entry.dim != H.dim:
        return entry.dim, H.dim, Verdict.failed(f"E_1^{{{p},{q}}}: engine {entry.dim}, oracle {H.dim}",
                                                site=(p, q))
    if entry.dim:
        values = _pr_h_last(inst, entry.space.representatives.columns(), p, q)
        for j in range(values.cols):
            if not H.numerator.contains(values.column(j)):
                return entry.dim, H.dim, Verdict.failed("pr of an E_1 representative is not closed", site=(p, q))
        classes = H.projector @ values
        if classes.rank() != entry.dim:
            return entry.dim, H.dim, Verdict.failed("pr does not descend to an isomorphism on E_1", site=(p, q))
    return entry.dim, H.dim, Verdict.passed("E_1 identified")


# induced representation of g/h on H^q(h, V)

@dataclass
class InducedRep:
    rep: Representation           # of g/h, basis = quotient_lie_algebra basis
    cohomology: QuotientSpace     # H^q(h, V|_h) with the chosen basis
    h_complex: CochainComplex


def _extend_from_h(inst_g: LieAlgebra, h: Subalgebra, eta: Sequence, q: int, m: int) -> list:
    """η̃(x_1..x_q) = η(π_h x_1, ..., π_h x_q): zero on monomials with a complement factor."""
    N = inst_g.dim
    h_index = {I: t for t, I in enumerate(wedge_basis(h.dim, q))}
    pivots = h.space.pivots
    pos = {piv: i for i, piv in enumerate(pivots)}
    out = []
    for K in wedge_basis(N, q):
        if all(k in pos for k in K):
            t = h_index[tuple(pos[k] for k in K)]
            out.extend(eta[t * m:(t + 1) * m])
        else:
            out.extend([ZERO] * m)
    return out


def induced_representation(g: LieAlgebra, h: Subalgebra, V: Representation, q: int, *,
                           lift_shifts: Sequence | None = None,
                           extension_shifts: Sequence | None = None) -> InducedRep:
    """∇_β [η] = [i^*(ι_β̃ d η̃)] for β in the quotient basis.

    ``lift_shifts[j]`` (a vector in h) is added to the default lift of the
    j-th quotient basis vector; ``extension_shifts[s]`` (a g-cochain in F^1)
    is added to the default extension of the s-th cohomology representative.
    """
    if not h.is_ideal():
        raise PreconditionError("induced representation on H(h, V) needs an ideal")
    N, m = g.dim, V.dim
    h_alg = h.as_lie_algebra()
    Vh = restrict_rep(V, h)
    hc = ce_complex(h_alg, Vh)
    H = cohomology(hc, q)
    gc = ce_complex(g, V)
    d_q = gc.d(q)
    lifts = [list(c) for c in h.complement]
    if lift_shifts is not None:
        lifts = [[a + b for a, b in zip(l, s)] for l, s in zip(lifts, lift_shifts)]
    ext = []
    for s in range(H.dim):
        e = _extend_from_h(g, h, H.representative(s), q, m)
        if extension_shifts is not None:
            e = [a + b for a, b in zip(e, extension_shifts[s])]
        ext.append(e)
    hb = h.basis
    mats = []
    for beta in lifts:
        cols = []
        for e in ext:
            de = d_q.apply(e)
            restricted = []
            for I in wedge_basis(h.dim, q):
                restricted.extend(evaluate_form(de, N, q + 1, m, [beta] + [hb[i] for i in I]))
            if not H.numerator.contains(restricted):
                raise PreconditionError("restricted contraction is not closed; input is inconsistent")
            cols.append(H.project(restricted))
        mats.append(ExactMatrix.from_columns(cols, H.dim))
    rep = Representation(H.dim, tuple(mats))
    return InducedRep(rep, H, hc)


def induced_rep_on_H(g: LieAlgebra, h: Subalgebra, V: Representation, q: int) -> Representation:
    ind = induced_representation(g, h, V, q)
    quot = quotient_lie_algebra(g, h)
    v = check_flat(quot, ind.rep)
    if not v:
        raise PreconditionError(f"induced representation is not flat: {v.message}")
    return ind.rep


# E_2 for ideals

@dataclass
class E2Model:
    quotient_algebra: LieAlgebra
    induced: InducedRep
    complex: CochainComplex       # Ω^•(g/h, H^q(h, V))


def e2_model(inst: HSInstance, q: int) -> E2Model:
    B = quotient_lie_algebra(inst.g, inst.h)
    ind = induced_representation(inst.g, inst.h, inst.V, q)
    return E2Model(B, ind, ce_complex(B, ind.rep))


def pr_b_first(inst: HSInstance, vectors: Sequence, p: int, q: int, model: E2Model) -> ExactMatrix:
    """ω ↦ (β_J ↦ [λ_I ↦ ω(β̃_J, λ_I)]) in C^p(g/h, H^q(h, V)) coordinates.

    The values are projected to H^q; callers must pass vectors whose values are closed.
    """
    N, m = inst.g.dim, inst.V.dim
    hb, cb = inst.h.basis, inst.h.complement
    H = model.induced.cohomology
    I_list = wedge_basis(len(hb), q)
    cols = []
    for w in vectors:
        out = []
        for J in wedge_basis(len(cb), p):
            val = []
            for I in I_list:
                val.extend(evaluate_form(w, N, p + q, m, [cb[j] for j in J] + [hb[i] for i in I]))
            out.extend(H.project(val))
        cols.append(out)
    rows = len(wedge_basis(len(cb), p)) * H.dim
    return ExactMatrix.from_columns(cols, rows)


def e2_transport(inst: HSInstance, p: int, q: int, model: E2Model | None = None) -> ExactMatrix:
    """Matrix from engine E_2^{p,q} coordinates to H^p(g/h, H^q(h, V)) coordinates."""
    model = e2_model(inst, q) if model is None else model
    entry = e_entry(inst.filtered, 2, p, q)
    Hp = cohomology(model.complex, p)
    if entry.dim == 0:
        return ExactMatrix.zeros(Hp.dim, 0)
    cochains = pr_b_first(inst, entry.space.representatives.columns(), p, q, model)
    for j in range(cochains.cols):
        if not Hp.numerator.contains(cochains.column(j)):
            raise PreconditionError(f"transport of an E_2^{{{p},{q}}} representative is not a cocycle")
    return Hp.projector @ cochains


def e2_identification(inst: HSInstance, p: int, q: int):
    """(engine dim E_2^{p,q}, oracle dim H^p(g/h, H^q(h, V)), verdict)."""
    if not inst.h.is_ideal():
        raise PreconditionError("E_2 identification needs an ideal")
    entry = e_entry(inst.filtered, 2, p, q)
    if p < 0 or p > inst.codim or q < 0 or q > inst.h.dim:
        ok = entry.dim == 0
        return entry.dim, 0, Verdict(ok, "outside the support" if ok else "nonzero outside support")
    model = e2_model(inst, q)
    v = check_flat(model.quotient_algebra, model.induced.rep)
    if not v:
        return entry.dim, -1, Verdict.failed(f"induced representation not flat: {v.message}", site=(p, q))
    oracle_dim = cohomology(model.complex, p).dim
    if entry.dim != oracle_dim:
        return entry.dim, oracle_dim, Verdict.failed(
            f"E_2^{{{p},{q}}}: engine {entry.dim}, oracle {oracle_dim}", site=(p, q))
    T = e2_transport(inst, p, q, model)
    if T.rank() != entry.dim:
        return entry.dim, oracle_dim, Verdict.failed("transport map is not an isomorphism", site=(p, q))
    return entry.dim, oracle_dim, Verdict.passed("E_2 identified")


def d1_identification(inst: HSInstance, p: int, q: int, model: E2Model | None = None) -> Verdict:
    """Transported d_1: E_1^{p,q} -> E_1^{p+1,q} against the CE differential of g/h on H^q(h, V)."""
    if not inst.h.is_ideal():
        raise PreconditionError("d_1 identification needs an ideal")
    model = e2_model(inst, q) if model is None else model
    src = e_entry(inst.filtered, 1, p, q)
    tgt = e_entry(inst.filtered, 1, p + 1, q)
    D = inst.ss.differential(1, p, p + q)
    Ts = pr_b_first(inst, src.space.representatives.columns(), p, q, model)
    Tt = pr_b_first(inst, tgt.space.representatives.columns(), p + 1, q, model)
    if Ts.rank() != src.dim or Tt.rank() != tgt.dim:
        return Verdict.failed("E_1 transport is not injective", site=(p, q))
    if Tt @ D != model.complex.d(p) @ Ts:
        return Verdict.failed(f"d_1 at ({p},{q}) differs from the quotient CE differential", site=(p, q))
    return Verdict.passed("d_1 identified")


def e1_table_oracle(inst: HSInstance) -> dict:
    out = {}
    for p in range(inst.codim + 1):
        oracle = inst.e1_oracle_complex(p)
        for q in range(inst.h.dim + 1):
            d = cohomology(oracle, q).dim
            if d:
                out[(p, q)] = d
    return out


def e2_table_oracle(inst: HSInstance) -> dict:
    out = {}
    for q in range(inst.h.dim + 1):
        model = e2_model(inst, q)
        for p in range(inst.codim + 1):
            d = cohomology(model.complex, p).dim
            if d:
                out[(p, q)] = d
    return out


def verify(inst: HSInstance) -> list:
    """All identification verdicts for an instance: [(name, Verdict), ...]."""
    results = []
    for p in range(inst.codim + 1):
        for q in range(inst.h.dim + 1):
            results.append((f"e0 ({p},{q})", e0_check(inst, p, q)))
            results.append((f"e1 ({p},{q})", e1_identification(inst, p, q)[2]))
    if inst.h.is_ideal():
        for q in range(inst.h.dim + 1):
            model = e2_model(inst, q)
            for p in range(inst.codim):
                results.append((f"d1 ({p},{q})", d1_identification(inst, p, q, model)))
        for p in range(inst.codim + 1):
            for q in range(inst.h.dim + 1):
                results.append((f"e2 ({p},{q})", e2_identification(inst, p, q)[2]))
    results.append(("convergence", inst.ss.convergence_check()))
    return results
