from pathlib import Path

import pytest

import catalog as catalog_module
from catalog import (
    CatalogParseError,
    DeclaredOrderMismatchError,
    InvalidParameterError,
    abelian,
    builtin,
    cyclic,
    dihedral,
    is_two_generated,
    load_catalog,
    load_catalogs,
    matrix_order_mod_p,
    parse_catalog,
    psl2,
    resolve_group_spec,
    save_catalog,
    sl2,
    sl2_matrix_to_permutation,
    symmetric,
    two_generated_classes,
)
from permcore import are_isomorphic

FIXTURES = Path(__file__).parent / "fixtures"


def test_builtin_orders():
    assert cyclic(7).order == 7
    assert dihedral(5).order == 10
    assert dihedral(2).order == 4
    assert abelian([2, 4]).order == 8
    assert abelian([2, 4]).id == "Ab(2,4)"
    assert symmetric(5).order == 120
    assert builtin("alternating", 5).order == 60


def test_sl2_and_psl2():
    g = sl2(7)
    assert g.order == 336
    assert g.group.degree == 48
    h = psl2(7)
    assert h.order == 168
    assert h.group.degree == 24


def test_matrix_orders_mod_7():
    assert matrix_order_mod_p(7, [[1, 1], [0, 1]]) == 7
    assert matrix_order_mod_p(7, [[0, 1], [-1, 0]]) == 4
    assert matrix_order_mod_p(7, [[-1, 1], [-1, 0]]) == 3
    assert sl2_matrix_to_permutation(7, [[0, 1], [-1, 0]]).order() == 4


def test_matrix_outside_sl2_rejected():
    with pytest.raises(InvalidParameterError):
        sl2_matrix_to_permutation(7, [[2, 0], [0, 2]])


@pytest.mark.parametrize(
    "make",
    [
        lambda: cyclic(0),
        lambda: sl2(4),
        lambda: sl2(37),
        lambda: psl2(2),
        lambda: builtin("monster"),
        lambda: resolve_group_spec("Z9"),
    ],
)
def test_invalid_parameters(make):
    with pytest.raises(InvalidParameterError):
        make()


def test_resolve_group_spec():
    assert resolve_group_spec("S4").order == 24
    assert resolve_group_spec("SL2(5)").order == 120
    assert resolve_group_spec("Ab(2,2)").order == 4
    assert resolve_group_spec("H4").order == 40
    product = resolve_group_spec("C2xC3")
    assert product.id == "C2xC3"
    assert product.order == 6
    inline = resolve_group_spec("(1,2,3);(1,2)")
    assert inline.id == "inline"
    assert inline.order == 6


def test_load_fixture_catalog():
    catalog = load_catalog(FIXTURES / "order8.catalog")
    assert [e.id for e in catalog.entries] == ["C8", "C4xC2", "C2^3", "D4", "Q8"]
    assert catalog.covers_order(8)
    assert not catalog.covers_order(16)
    assert all(e.order == 8 for e in catalog.entries)
    assert "quaternion" in catalog.get("Q8").tags
    assert resolve_group_spec("Q8", catalog).order == 8


def test_declared_order_mismatch():
    with pytest.raises(DeclaredOrderMismatchError):
        load_catalog(FIXTURES / "bad_order.catalog")


@pytest.mark.parametrize(
    "text",
    [
        "id=A degree=3 gens=(1,2,3)",
        "id=A degree=3 gens=(1,2,3) order=3 colour=red",
        "id=A degree=3 gens=(1,2,3) order=3\n\nid=A degree=2 gens=(1,2) order=2",
        "id=A degree=3 gens=(1,2,3) order=3 stray",
        "coverage=everything",
        "id=A degree=3 gens=(1,2,9) order=3",
    ],
)
def test_catalog_parse_errors(text):
    with pytest.raises(CatalogParseError):
        parse_catalog(text)


def test_merged_catalogs_reject_duplicate_ids():
    path = str(FIXTURES / "order8.catalog")
    with pytest.raises(CatalogParseError):
        load_catalogs([path, path])


def test_save_and_reload(tmp_path):
    catalog = load_catalog(FIXTURES / "order8.catalog")
    out = tmp_path / "copy.catalog"
    save_catalog(catalog, out)
    again = load_catalog(out)
    assert [e.id for e in again.entries] == [e.id for e in catalog.entries]
    assert again.coverage == ["all-of-order:8"]


def test_two_generated():
    assert is_two_generated(symmetric(4).group) is not None
    assert is_two_generated(abelian([2, 2, 2]).group) is None
    x, y = is_two_generated(dihedral(6).group)
    assert dihedral(6).group.generates([x, y])


def test_two_generated_classes_of_order_8():
    catalog = load_catalog(FIXTURES / "order8.catalog")
    found = two_generated_classes(catalog, 8)
    assert sorted(g.id for g in found.groups) == ["C4xC2", "C8", "D4", "Q8"]
    assert found.unresolved == []


def test_undecided_isomorphism_is_reported(monkeypatch):
    catalog = load_catalog(FIXTURES / "order8.catalog")
    monkeypatch.setattr(catalog_module, "are_isomorphic", lambda H, G, node_budget=None: None)
    found = two_generated_classes(catalog, 8)
    assert len(found.groups) == 4
    assert len(found.unresolved) == 6
    assert ("C8", "C4xC2") in found.unresolved


def test_order_40_catalog():
    catalog = load_catalog(FIXTURES / "order40.catalog")
    assert len(catalog.entries) == 14
    assert catalog.covers_order(40)
    assert all(e.order == 40 for e in catalog.entries)
    # dicyclic: a single involution
    assert len(catalog.get("Dic10").group.elements_of_order(2)) == 1


@pytest.mark.slow
def test_order_40_catalog_groups_are_distinct():
    entries = load_catalog(FIXTURES / "order40.catalog").entries
    for i, a in enumerate(entries):
        for b in entries[i + 1:]:
            assert are_isomorphic(a.group, b.group) is False, (a.id, b.id)


def test_order_120_catalog():
    catalog = load_catalog(FIXTURES / "order120.catalog")
    assert [e.id for e in catalog.of_order(120)] == ["S5", "SL2(5)", "C5xS4"]
    assert catalog.get("SL2(5)").group.order == sl2(5).order
    assert len(catalog.get("SL2(5)").group.elements_of_order(2)) == 1
