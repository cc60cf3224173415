import json

import pytest

from lass import catalog
from lass.catalog import CatalogEntry, Expected, UnknownEntry
from lass.errors import StructuralError


@pytest.mark.parametrize("name", catalog.names())
def test_stored_values_reproduce(name):
    assert catalog.diff(catalog.load(name)) == []


@pytest.mark.parametrize("name", catalog.names())
def test_origin_tags_cover_expected(name):
    e = catalog.load(name)
    assert set(e.origin) <= set(e.expected) | {"payload"}
    for tag in e.origin.values():
        tags = tag if isinstance(tag, list) else [tag]
        assert all(t in catalog.ORIGINS for t in tags)


def test_known_values():
    assert catalog.load("sl2").expected.betti == [1, 0, 0, 1]
    assert catalog.load("so3").expected.betti == [1, 0, 0, 1]
    assert catalog.load("heisenberg3").expected.betti == [1, 2, 2, 1]
    e = catalog.load("heisenberg_center")
    assert e.expected.d2_rank_at_0_1 == 1
    assert e.expected.d2_rank_at_1_1 == 0
    assert catalog.load("sl2_cartan").expected.stabilization == 3


def test_every_kind_present():
    kinds = {e.kind for e in catalog.load_all()}
    assert kinds == set(catalog.KINDS)


def test_unknown_name():
    with pytest.raises(UnknownEntry):
        catalog.load("no_such_algebra")
    with pytest.raises(KeyError):
        catalog.load("no_such_algebra")


def test_schema_validation():
    data = catalog.load("sl2").to_json()
    CatalogEntry.from_json(data)
    for key, value in (("schema", "other/1"), ("kind", "group")):
        bad = dict(data, **{key: value})
        with pytest.raises(StructuralError):
            CatalogEntry.from_json(bad)
    bad = dict(data, origin={"betti": "folklore"})
    with pytest.raises(StructuralError):
        CatalogEntry.from_json(bad)


def test_save_round_trip(tmp_path):
    e = catalog.load("heisenberg_center")
    path = catalog.save(e, tmp_path)
    again = CatalogEntry.from_json(json.loads(path.read_text()))
    assert again == e


def test_expected_attribute_access():
    x = Expected({"betti": [1], "d2_ranks": {"2,0": 3}})
    assert x.betti == [1] and x.d2_rank_at_2_0 == 3 and x.d2_rank_at_0_0 == 0
    with pytest.raises(AttributeError):
        x.nothing


def test_extension_needs_subalgebra():
    with pytest.raises(StructuralError):
        catalog.load("sl2").extension()
