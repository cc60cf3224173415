import pytest
import sympy

from lass import catalog
from lass.ce import LieAlgebra, Representation
from lass.cochain import betti, check_complex, check_filtration
from lass.errors import PreconditionError, StructuralError
from lass.exactq import ExactMatrix
from lass.jets import (
    PolyJetAlgebroid,
    action_algebroid,
    apply_field,
    check_axioms_mod,
    e1_invariant_check,
    e1_oracle_table,
    is_degree_preserving,
    jet_betti,
    jet_complex,
    linearisable_stabilization_check,
    monomial_basis,
    poly_mul,
    scalar_pullback_check,
)
from independent import jet_betti_sympy, structure_of

JETS = [e.name for e in catalog.load_all("jet")]
ORDERS = [(e.name, k) for e in catalog.load_all("jet") for k in e.orders]


@pytest.fixture(scope="module")
def sl2():
    return catalog.load("sl2").lie_algebra()


@pytest.fixture(scope="module")
def std(sl2):
    M = ExactMatrix.from_rows
    return Representation(2, (M([[1, 0], [0, -1]]), M([[0, 1], [0, 0]]), M([[0, 0], [1, 0]])))


def sympy_fields(A):
    w = sympy.symbols(f"w0:{A.base_dim}")
    out = []
    for X in A.anchor:
        comp = []
        for P in X:
            e = 0
            for alpha, c in P.items():
                term = sympy.Rational(c.numerator, c.denominator)
                for wi, ai in zip(w, alpha):
                    term *= wi ** ai
                e += term
            comp.append(e)
        out.append(comp)
    return out


def test_polynomial_helpers():
    assert monomial_basis(2, 1) == [(0, 0), (1, 0), (0, 1)]
    assert len(monomial_basis(2, 3)) == 10
    assert poly_mul({(1,): 1}, {(2,): 1}, 2) == {}
    # -w∂_w applied to w^2
    assert apply_field([{(1,): -1}], {(2,): 1}) == {(2,): -2}


def test_action_algebroid_axioms(sl2, std):
    for k in range(4):
        assert check_axioms_mod(action_algebroid(sl2, std, k))


def test_opposite_anchor_sign_fails(sl2, std):
    A = action_algebroid(sl2, std, 2)
    flipped = PolyJetAlgebroid(A.fiber_dim, A.base_dim, 2,
                               [[{a: -c for a, c in P.items()} for P in X] for X in A.anchor],
                               A.structure)
    v = check_axioms_mod(flipped)
    assert not v and "anchor" in v.message


def test_corrupted_structure_detected(sl2, std):
    A = action_algebroid(sl2, std, 1)
    c = [[[dict(P) for P in v] for v in row] for row in A.structure]
    c[1][2][0] = {(0, 0): 2}
    c[2][1][0] = {(0, 0): -2}
    bad = PolyJetAlgebroid(3, 2, 1, A.anchor, c)
    assert not check_axioms_mod(bad)
    with pytest.raises(PreconditionError):
        jet_complex(bad)


def test_structural_errors():
    with pytest.raises(StructuralError):
        PolyJetAlgebroid(1, 1, 1, [[{(1,): 1}], [{}]], [[[{}]]])
    with pytest.raises(PreconditionError):
        PolyJetAlgebroid(1, 1, 1, [[{(0,): 1}]], [[[{}]]])


@pytest.mark.parametrize("name,k", ORDERS)
def test_complex_and_filtration(name, k):
    e = catalog.load(name)
    jc = jet_complex(e.jet_algebroid(k), e.jet_representation())
    assert check_complex(jc.complex)
    assert check_filtration(jc.filtered)


@pytest.mark.parametrize("name,k", ORDERS)
def test_betti_against_sympy(name, k):
    e = catalog.load(name)
    A = e.jet_algebroid(k)
    L, _ = A.linearization()
    if not all(degree == 0 for row in A.structure for v in row for P in v for degree in map(sum, P)):
        pytest.skip("structure functions not constant")
    V = e.jet_representation()
    rho = [[list(r) for r in m.entries] for m in V.matrices]
    assert jet_betti(A, V) == jet_betti_sympy(structure_of(L), sympy_fields(A), A.base_dim, k, rho)


def test_sl2_standard_betti(sl2, std):
    for k in (1, 2, 3):
        assert jet_betti(action_algebroid(sl2, std, k)) == (1, 0, 0, 1)


def test_scaling_and_trivial():
    assert jet_betti(catalog.load("scaling_jet").jet_algebroid()) == (1, 1)
    assert jet_betti(catalog.load("trivial_jet").jet_algebroid()) == (3, 3)


@pytest.mark.parametrize("name,k", ORDERS)
def test_e1_invariant(name, k):
    e = catalog.load(name)
    v, got, want = e1_invariant_check(e.jet_algebroid(k), e.jet_representation())
    assert v, v.message
    assert all(p <= k for p, _ in got)


@pytest.mark.parametrize("name,k", ORDERS)
def test_stabilization_and_convergence(name, k):
    e = catalog.load(name)
    ss = jet_complex(e.jet_algebroid(k), e.jet_representation()).ss
    assert ss.stabilization() <= k + 1
    assert ss.convergence_check()


@pytest.mark.parametrize("name", [n for n in JETS if catalog.load(n).expected.linear])
def test_linearisable_degenerates(name):
    e = catalog.load(name)
    for k in e.orders:
        A = e.jet_algebroid(k)
        assert linearisable_stabilization_check(A, e.jet_representation())
        assert is_degree_preserving(jet_complex(A, e.jet_representation()))
        assert scalar_pullback_check(A, 2, e.jet_representation())
        assert scalar_pullback_check(A, -3, e.jet_representation())


def test_quadratic_negative_control():
    A = catalog.load("quadratic_jet").jet_algebroid()
    jc = jet_complex(A)
    ss = jc.ss
    assert {pq: r for pq, r in ss.ranks(1).items() if r} == {(1, -1): 1}
    assert betti(jc.complex) == (2, 2)
    assert ss.stabilization() == 2
    assert ss.convergence_check()
    assert not linearisable_stabilization_check(A)
    assert not scalar_pullback_check(A, 2)
    assert not is_degree_preserving(jc)


def test_e1_oracle_sl2(sl2, std):
    # S^p of the standard representation has no invariants and no cohomology except p = 0
    table = e1_oracle_table(action_algebroid(sl2, std, 3))
    assert table == {(0, 0): 1, (0, 3): 1}


def test_json_round_trip():
    for name in JETS:
        A = catalog.load(name).jet_algebroid()
        assert PolyJetAlgebroid.from_json(A.to_json()) == A


def test_pullback_needs_nonzero_lambda():
    with pytest.raises(PreconditionError):
        scalar_pullback_check(catalog.load("scaling_jet").jet_algebroid(), 0)
