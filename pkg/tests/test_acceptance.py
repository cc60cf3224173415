import random
from itertools import permutations

from lass import catalog
from lass.ce import Representation, ce_complex
from lass.cochain import betti
from lass.exactq import ExactMatrix, inverse
from lass.extension import d2_check
from lass.jets import action_algebroid, e1_invariant_check, e1_oracle_table, jet_complex
from lass.serre import e1_identification, e2_identification, hs_filtration
from independent import ce_betti_sympy, rho_of, structure_of
from permute import page_tables, permute_rep, permuted_base, permuted_fiber, permuted_hs
from random_complexes import random_known_complex

HS_KINDS = ("hs", "extension")


def hs_entries():
    return [e for e in catalog.load_all() if e.kind in HS_KINDS]


def jet_instances():
    for e in catalog.load_all("jet"):
        for k in e.orders:
            yield e, k, e.jet_algebroid(k), e.jet_representation()


def test_criterion_1_semisimple_vanishing(criterion):
    got = {}
    for name in ("sl2", "so3"):
        g = catalog.load(name).lie_algebra()
        got[name] = (betti(ce_complex(g)), ce_betti_sympy(structure_of(g)))
    ok = all(a == b == (1, 0, 0, 1) for a, b in got.values())
    assert criterion(1, "semisimple Betti numbers (1,0,0,1)", ok, str(got))


def test_criterion_2_e2_identification(criterion):
    bad = []
    for name in ("heisenberg_center", "aff1_ideal"):
        inst = catalog.load(name).hs_instance()
        for p in range(-1, inst.codim + 2):
            for q in range(-1, inst.h.dim + 2):
                got, want, v = e2_identification(inst, p, q)
                if not v or got != want:
                    bad.append((name, p, q, got, want))
    assert criterion(2, "E_2 equals H^p(g/h, H^q(h, V))", not bad, f"mismatches {bad}" if bad else "")


def test_criterion_3_d2_contraction(criterion):
    v, cells = d2_check(catalog.load("heisenberg_center").extension())
    cell = {c.pq: c for c in cells}[(0, 1)]
    ok = bool(v) and cell.equal and cell.engine_rank == cell.oracle_rank == 1
    assert criterion(3, "d_2 equals (-1)^p i_[γ] on heisenberg_center", ok,
                     f"rank at (0,1) {cell.engine_rank}/{cell.oracle_rank}, {len(cells)} cells")


def test_criterion_4_convergence(criterion):
    bad = []
    for e in hs_entries():
        inst = e.hs_instance()
        ss = inst.ss
        N = inst.g.dim
        if any(ss.ranks(r) for r in range(N + 1, N + 3)):
            bad.append((e.name, "d_r nonzero beyond dim g"))
        einf = ss.dims(max(ss.stabilization(), N + 1))
        b = betti(inst.filtered.complex)
        totals = [sum(d for (p, q), d in einf.items() if p + q == n) for n in range(N + 1)]
        if tuple(totals) != b:
            bad.append((e.name, totals, b))
        if not ss.convergence_check():
            bad.append((e.name, "convergence_check"))
    assert criterion(4, "E_inf sums to Betti numbers on every HS entry", not bad, str(bad) if bad else "")


def test_criterion_5_cartan_first_page(criterion):
    inst = catalog.load("sl2_cartan").hs_instance()
    bad = []
    for p in range(-1, inst.codim + 2):
        for q in range(-1, inst.h.dim + 2):
            got, want, v = e1_identification(inst, p, q)
            if not v or got != want:
                bad.append((p, q, got, want))
    ss = inst.ss
    d2 = ss.ranks(2)
    einf = ss.nonzero_dims(ss.stabilization())
    ok = not bad and d2 == {(0, 1): 1} and set(einf) == {(0, 0), (2, 1)}
    assert criterion(5, "sl2 over its Cartan: E_1, d_2 and E_inf", ok,
                     f"E_1 mismatches {bad}, d_2 ranks {d2}, E_inf {einf}")


def test_criterion_6_jet_first_page(criterion):
    bad = []
    cases = [("sl2_standard_jet", k) for k in (1, 2, 3)] + [("quadratic_jet", 2)]
    for name, k in cases:
        e = catalog.load(name)
        v, got, want = e1_invariant_check(e.jet_algebroid(k), e.jet_representation())
        beyond = {pq: d for pq, d in got.items() if pq[0] > k}
        if not v or got != want or beyond:
            bad.append((name, k, got, want))
    assert criterion(6, "jet E_1 equals H(g, S^p W* ⊗ V), zero beyond the order", not bad,
                     str(bad) if bad else f"{len(cases)} instances")


def test_criterion_7_linearisable(criterion):
    bad = []
    for e, k, A, V in jet_instances():
        if not A.is_linear():
            continue
        jc = jet_complex(A, V)
        ss = jc.ss
        if any(ss.ranks(r) for r in range(1, k + 3)):
            bad.append((e.name, k, "nonzero d_r"))
        total = [0] * (A.fiber_dim + 1)
        for (p, q), d in e1_oracle_table(A, V).items():
            total[p + q] += d
        if tuple(total) != betti(jc.complex):
            bad.append((e.name, k, total, betti(jc.complex)))
    q = jet_complex(catalog.load("quadratic_jet").jet_algebroid())
    control = (q.ss.ranks(1) == {(1, -1): 1} and betti(q.complex) == (2, 2)
               and bool(q.ss.convergence_check()))
    assert criterion(7, "linear instances degenerate at E_1; quadratic control", not bad and control,
                     f"failures {bad}, control d_1 {q.ss.ranks(1)} H {betti(q.complex)}")


def engine_consistency(ss, rng):
    failures = []
    for r in range(ss.stabilization() + 2):
        if not ss.turn_page_check(r):
            failures.append(("turn page", r))
        if r >= 1:
            if not ss.d_squared_check(r):
                failures.append(("d squared", r))
            if not ss.well_defined_check(r, rng):
                failures.append(("representatives", r))
    if not ss.convergence_check():
        failures.append(("convergence",))
    return failures


def test_criterion_8_engine_self_consistency(criterion):
    rng = random.Random(8)
    bad = []
    count = 0
    for e in hs_entries():
        f = engine_consistency(e.hs_instance().ss, rng)
        count += 1
        if f:
            bad.append((e.name, f))
    for e, k, A, V in jet_instances():
        f = engine_consistency(jet_complex(A, V).ss, rng)
        count += 1
        if f:
            bad.append((e.name, k, f))
    for seed in range(50):
        kc = random_known_complex(seed, max_dim=30)
        from lass.spectral import engine
        ss = engine(kc.filtered)
        f = engine_consistency(ss, rng)
        for r in range(kc.length + 2):
            if ss.nonzero_dims(r) != {pq: d for pq, d in kc.dims(r).items() if d}:
                f.append(("dims", r))
        count += 1
        if f:
            bad.append((f"random {seed}", f))
    assert criterion(8, "turn page, d^2, representatives and convergence", not bad,
                     f"{count} complexes" + (f", failures {bad}" if bad else ""))


def test_criterion_9_basis_invariance(criterion):
    rng = random.Random(9)
    bad = []
    for e in catalog.load_all():
        if e.kind == "jet":
            continue
        g = e.lie_algebra()
        V = e.representation(g)
        perms = list(permutations(range(g.dim)))
        chosen = rng.sample(perms, min(3, len(perms)))
        P = ExactMatrix.identity(V.dim) + ExactMatrix.from_rows(
            [[rng.randint(0, 2) if j > i else 0 for j in range(V.dim)] for i in range(V.dim)], cols=V.dim)
        P = P.scale(rng.choice([2, -3]))
        W = V.conjugated(P, inverse(P))
        if e.kind == "lie":
            base = betti(ce_complex(g, V))
            for perm in chosen:
                if betti(ce_complex(g.permuted(perm), permute_rep(V, perm))) != base:
                    bad.append((e.name, perm))
            if betti(ce_complex(g, W)) != base:
                bad.append((e.name, "conjugated V"))
            continue
        h = e.subalgebra(g)
        base = page_tables(hs_filtration(g, h, V).ss)
        for perm in chosen:
            if page_tables(permuted_hs(g, h, V, perm).ss) != base:
                bad.append((e.name, perm))
        if page_tables(hs_filtration(g, h, W).ss) != base:
            bad.append((e.name, "conjugated V"))
    for e, k, A, V in jet_instances():
        base = page_tables(jet_complex(A, V).ss)
        for perm in rng.sample(list(permutations(range(A.fiber_dim))), min(3, A.fiber_dim)):
            if page_tables(jet_complex(permuted_fiber(A, perm), permute_rep(V, perm)).ss) != base:
                bad.append((e.name, k, "fiber", perm))
        for perm in permutations(range(A.base_dim)):
            if page_tables(jet_complex(permuted_base(A, perm), V).ss) != base:
                bad.append((e.name, k, "base", perm))
    # a non-permutation change of W for the sl2 action algebroid
    sl2 = catalog.load("sl2").lie_algebra()
    M = ExactMatrix.from_rows
    std = Representation(2, (M([[1, 0], [0, -1]]), M([[0, 1], [0, 0]]), M([[0, 0], [1, 0]])))
    P = M([[2, 1], [1, 1]])
    for k in (1, 2, 3):
        if page_tables(jet_complex(action_algebroid(sl2, std, k)).ss) != \
                page_tables(jet_complex(action_algebroid(sl2, std.conjugated(P, inverse(P)), k)).ss):
            bad.append(("sl2 action", k, "conjugated W"))
    assert criterion(9, "page tables invariant under basis permutation and conjugation", not bad,
                     str(bad) if bad else "")
