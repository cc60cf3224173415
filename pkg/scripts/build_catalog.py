"""Write the catalog payloads and freeze their expected values.

Run after changing a payload; the test suite recomputes every stored value
and fails on any drift.
"""

from lass.catalog import CatalogEntry, Expected, compute_expected, save
from lass.ce import LieAlgebra, Representation
from lass.exactq import ExactMatrix
from lass.jets import action_algebroid


def lie_payload(g, V=None, sub=None, splitting=None):
    data = g.to_json()
    if V is not None:
        rep = V.to_json()
        rep["basis"] = list(V.labels)
        data["representation"] = rep
    if sub is not None:
        data["subalgebra"] = {"basis": [[str(x) for x in v] for v in sub]}
    if splitting is not None:
        data["splitting"] = [[str(x) for x in c] for c in splitting]
    return data


def unit(n, k):
    return [1 if i == k else 0 for i in range(n)]


def mat(rows):
    return ExactMatrix.from_rows(rows)


sl2 = LieAlgebra.from_brackets(3, {(0, 1): {1: 2}, (0, 2): {2: -2}, (1, 2): {0: 1}}, ("h", "e", "f"))
so3 = LieAlgebra.from_brackets(3, {(0, 1): {2: 1}, (1, 2): {0: 1}, (2, 0): {1: 1}}, ("e1", "e2", "e3"))
aff1 = LieAlgebra.from_brackets(2, {(0, 1): {1: 1}}, ("x", "y"))
hei3 = LieAlgebra.from_brackets(3, {(0, 1): {2: 1}}, ("x", "y", "z"))
hei5 = LieAlgebra.from_brackets(5, {(0, 2): {4: 1}, (1, 3): {4: 1}}, ("x1", "x2", "y1", "y2", "z"))
fn3 = LieAlgebra.from_brackets(6, {(0, 1): {3: 1}, (0, 2): {4: 1}, (1, 2): {5: 1}},
                               ("x1", "x2", "x3", "z12", "z13", "z23"))
aff1_x_line = LieAlgebra.from_brackets(3, {(0, 1): {1: 1}}, ("x", "y", "t"))
scaled_hei = LieAlgebra.from_brackets(4, {(1, 2): {3: 1}, (0, 1): {1: 1}, (0, 3): {3: 1}},
                                      ("d", "x", "y", "z"))
std = Representation(2, (mat([[1, 0], [0, -1]]), mat([[0, 1], [0, 0]]), mat([[0, 0], [1, 0]])),
                     ("w1", "w2"))

entries = []


def add(name, kind, desc, payload, origin):
    entries.append(CatalogEntry(name, kind, desc, payload, Expected(), origin))


for n in range(1, 5):
    add(f"abelian_{n}", "lie", f"abelian Lie algebra of dimension {n}",
        lie_payload(LieAlgebra.abelian(n, tuple(f"a{i + 1}" for i in range(n)))),
        {"betti": "trivial"})
add("aff1", "lie", "affine Lie algebra of the line, [x,y]=y", lie_payload(aff1), {"betti": "derived"})
add("heisenberg3", "lie", "Heisenberg algebra, [x,y]=z", lie_payload(hei3), {"betti": "derived"})
add("sl2", "lie", "sl(2) in the basis h, e, f", lie_payload(sl2),
    {"betti": ["derived", "classical", "classical", "derived"]})
add("so3", "lie", "so(3) with cyclic structure constants", lie_payload(so3),
    {"betti": ["derived", "classical", "classical", "derived"]})
add("sl2_adjoint", "lie", "sl(2) with coefficients in the adjoint representation",
    lie_payload(sl2, Representation.adjoint(sl2)), {"betti": "derived"})

hs_origin = {"betti": "derived", "stabilization": "derived", "pages": "derived",
             "ranks": "derived", "e1_oracle": "derived", "e2_oracle": "derived"}
ext_origin = dict(hs_origin, extension_class_zero="derived", d2_ranks="derived")

add("sl2_cartan", "hs", "sl(2) relative to its Cartan subalgebra span{h}",
    lie_payload(sl2, sub=[unit(3, 0)]), hs_origin)
add("sl2_borel", "hs", "sl(2) relative to the Borel subalgebra span{h, e}",
    lie_payload(sl2, sub=[unit(3, 0), unit(3, 1)]), hs_origin)
add("heisenberg_center", "extension", "Heisenberg algebra over its center span{z}",
    lie_payload(hei3, sub=[unit(3, 2)]), ext_origin)
add("heisenberg_center_shifted", "extension",
    "Heisenberg algebra over its center with the splitting x̄ ↦ x + z, ȳ ↦ y",
    lie_payload(hei3, sub=[unit(3, 2)], splitting=[[1, 0, 1], [0, 1, 0]]), ext_origin)
add("heisenberg_center_twisted", "extension",
    "Heisenberg algebra over its center, one-dimensional coefficients with x acting by 1",
    lie_payload(hei3, Representation(1, (mat([[1]]), mat([[0]]), mat([[0]]))), sub=[unit(3, 2)]),
    ext_origin)
add("aff1_ideal", "extension", "aff(1) over the ideal span{y}", lie_payload(aff1, sub=[unit(2, 1)]), ext_origin)
add("heisenberg5_center", "extension", "five-dimensional Heisenberg algebra over its center",
    lie_payload(hei5, sub=[unit(5, 4)]), ext_origin)
add("free_nilpotent3_center", "extension",
    "free two-step nilpotent algebra on three generators over its center",
    lie_payload(fn3, sub=[unit(6, k) for k in (3, 4, 5)]), ext_origin)
add("aff1_times_line", "extension", "direct product aff(1) ⊕ Q over the factor Q",
    lie_payload(aff1_x_line, sub=[unit(3, 2)]), ext_origin)
add("scaled_heisenberg_center", "extension",
    "[d,x]=x, [x,y]=z, [d,z]=z over span{z}, coefficients diag(1,2) for d",
    lie_payload(scaled_hei, Representation(2, (ExactMatrix.diagonal([1, 2]),) +
                                           tuple(ExactMatrix.zeros(2, 2) for _ in range(3))),
                sub=[unit(4, 3)]), ext_origin)

jet_origin = {"linear": "trivial", "orders": "derived"}
Q = LieAlgebra.abelian(1, ("e",))


def jet_payload(A, orders):
    data = A.to_json()
    data["orders"] = orders
    return data


add("sl2_standard_jet", "jet", "sl(2) acting on Q^2, jets of order 1 to 3",
    jet_payload(action_algebroid(sl2, std, 3), [1, 2, 3]), jet_origin)
add("scaling_jet", "jet", "Q acting on Q by scaling, anchor -w∂_w",
    jet_payload(action_algebroid(Q, Representation(1, (mat([[1]]),), ("w",)), 2), [2]), jet_origin)
add("trivial_jet", "jet", "Q acting trivially on Q",
    jet_payload(action_algebroid(Q, Representation(1, (mat([[0]]),), ("w",)), 2), [2]), jet_origin)
quad = {"fiber_dim": 1, "base_dim": 1, "order": 2, "fiber_basis": ["e"], "base_basis": ["w"],
        "anchor": [{"gen": 0, "field": [{"coord": 0, "monomial": [2], "coeff": "1"}]}],
        "structure_functions": [], "orders": [2]}
add("quadratic_jet", "jet", "rank one algebroid with anchor w^2∂_w, not linearisable", quad, jet_origin)

if __name__ == "__main__":
    for e in entries:
        e.expected = Expected(compute_expected(e))
        e.origin = {k: v for k, v in e.origin.items() if k in e.expected}
        print(e.name, save(e))
