import pytest

from lass import catalog
from lass.ce import ce_complex
from lass.cochain import (
    CochainComplex,
    FilteredComplex,
    betti,
    check_complex,
    check_filtration,
    cohomology,
    graded_H,
    induced_filtration_on_H,
)
from lass.errors import StructuralError
from lass.exactq import ExactMatrix, Subspace
from lass.serre import unchecked_hs_filtered_complex


def line(*entries):
    return ExactMatrix.from_rows([list(entries)])


def test_zero_differentials_pass_and_give_everything():
    c = CochainComplex([2, 3], [ExactMatrix.zeros(3, 2)])
    assert check_complex(c)
    assert [cohomology(c, n).dim for n in range(2)] == [2, 3]


def test_d_squared_failure_is_located():
    c = CochainComplex([1, 1, 1], [line(1), line(1)])
    v = check_complex(c)
    assert not v and v.site == 0
    with pytest.raises(StructuralError):
        cohomology(c, 1)


def test_isomorphism_has_no_cohomology():
    c = CochainComplex([1, 1], [line(1)])
    assert betti(c) == (0, 0)


def test_shape_mismatch_rejected():
    with pytest.raises(StructuralError):
        CochainComplex([2, 2], [ExactMatrix.zeros(2, 3)])
    with pytest.raises(StructuralError):
        CochainComplex([1, 1, 1], [line(0)])


def test_heisenberg_ce_complex():
    g = catalog.load("heisenberg3").lie_algebra()
    c = ce_complex(g)
    assert check_complex(c)
    assert betti(c) == (1, 2, 2, 1)


def test_trivial_filtration():
    c = ce_complex(catalog.load("heisenberg3").lie_algebra())
    f = FilteredComplex.trivial(c)
    assert check_filtration(f)
    assert f.length == 0
    for n in range(4):
        assert induced_filtration_on_H(f, n) == [betti(c)[n], 0]
    assert f.F(-3, 1) == Subspace.full(3)


def test_non_subalgebra_filtration_fails():
    g = catalog.load("sl2").lie_algebra()
    # span{e, f} is not closed: [e, f] = h
    f = unchecked_hs_filtered_complex(g, [[0, 1, 0], [0, 0, 1]])
    assert not check_filtration(f)


def test_one_dimensional_span_is_always_a_subalgebra():
    g = catalog.load("sl2").lie_algebra()
    f = unchecked_hs_filtered_complex(g, [[1, 1, 0]])
    assert check_filtration(f)


def test_induced_filtration_heisenberg_center():
    inst = catalog.load("heisenberg_center").hs_instance()
    assert induced_filtration_on_H(inst.filtered, 1)[:3] == [2, 2, 0]
    assert graded_H(inst.filtered, 1)[:2] == [0, 2]


def test_induced_filtration_sl2_cartan():
    inst = catalog.load("sl2_cartan").hs_instance()
    assert graded_H(inst.filtered, 3)[:3] == [0, 0, 1]
    dims = induced_filtration_on_H(inst.filtered, 3)
    assert dims == sorted(dims, reverse=True)


def test_euler_characteristic_on_catalog():
    for e in catalog.load_all():
        if e.kind == "jet":
            continue
        c = ce_complex(e.lie_algebra(), e.representation())
        chi_c = sum((-1) ** n * d for n, d in enumerate(c.dims))
        chi_h = sum((-1) ** n * b for n, b in enumerate(betti(c)))
        assert chi_c == chi_h, e.name


def test_json_round_trip():
    inst = catalog.load("sl2_cartan").hs_instance()
    data = inst.filtered.to_json()
    back = FilteredComplex.from_json(data)
    assert back.complex.dims == inst.filtered.complex.dims
    for n in range(4):
        assert back.complex.d(n) == inst.filtered.complex.d(n)
        for p in range(4):
            assert back.F(p, n) == inst.filtered.F(p, n)
    c = CochainComplex.from_json(inst.filtered.complex.to_json())
    assert c.labels(1) == inst.filtered.complex.labels(1)


def test_duplicate_labels_rejected():
    with pytest.raises(StructuralError):
        CochainComplex([2], [], [["a", "a"]])
