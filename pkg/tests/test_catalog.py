"""Tests for schema loading and the restricted metadata views."""

import pytest

from refactordb.catalog import (
    AdapterError,
    CatalogAdapter,
    CatalogIoError,
    SqliteCatalogAdapter,
    describe_table,
    get_imported_keys,
    get_primary_keys,
    load_from_catalog,
    load_from_scripts,
    schema_from_metadata_views,
    table_from_metadata_views,
    table_row_counts,
)
from refactordb.demo import FIXTURE_DIR
from refactordb.model import ConstraintKind, TableNotFound, tables_equivalent
from refactordb.parser import UnsupportedConstruct


def test_load_directory_in_sorted_file_order():
    schema = load_from_scripts(FIXTURE_DIR)
    assert [t.name for t in schema.tables] == [
        "EMP",
        "DEPT",
        "PK1TEMP",
        "FK1TEMP",
        "COLSONLY",
        "PK2TEMP",
        "UQTEMP",
        "FK3TEMP",
        "FK2TEMP",
        "TESTNULL",
        "SUPPLIERS",
    ]
    assert schema.owner == "SCOTT"
    by_table = dict(schema.sources)
    assert by_table["EMP"].endswith("01_emp_dept.sql")


def test_load_explicit_path_list():
    schema = load_from_scripts([FIXTURE_DIR / "04_composite_pk.sql"])
    assert [t.name for t in schema.tables] == ["PK2TEMP"]


def test_load_errors(tmp_path):
    with pytest.raises(CatalogIoError):
        load_from_scripts(tmp_path / "missing")
    with pytest.raises(CatalogIoError):
        load_from_scripts(tmp_path)
    with pytest.raises(CatalogIoError):
        load_from_scripts([])


def test_load_prefixes_parse_errors_with_file_name(tmp_path):
    bad = tmp_path / "bad.sql"
    bad.write_text("CREATE TABLE X (Y BLOB);", encoding="utf-8")
    with pytest.raises(UnsupportedConstruct) as info:
        load_from_scripts(tmp_path)
    assert str(info.value).startswith("bad.sql:")


def test_load_rejects_mixed_owners(tmp_path):
    (tmp_path / "a.sql").write_text("CREATE TABLE SCOTT.A (X NUMBER);", encoding="utf-8")
    (tmp_path / "b.sql").write_text("CREATE TABLE OTHER.B (Y NUMBER);", encoding="utf-8")
    with pytest.raises(UnsupportedConstruct) as info:
        load_from_scripts(tmp_path)
    assert "multiple schema owners" in str(info.value)


def test_sqlite_adapter_round_trips_ddl():
    ddl = (
        "CREATE TABLE STOCK\n"
        "( ITEM_ID NUMBER(4,0),\n"
        "  LABEL VARCHAR2(12) NOT NULL,\n"
        "  CONSTRAINT STOCK_PK PRIMARY KEY (ITEM_ID)\n"
        ")"
    )
    adapter = SqliteCatalogAdapter.in_memory(
        [ddl], {"STOCK": [(1, "bolt"), (2, "nut")]}
    )
    assert adapter.list_tables() == ["STOCK"]
    assert adapter.row_count("STOCK") == 2
    schema = load_from_catalog(adapter)
    table = schema.table("STOCK")
    assert table.primary_key().name == "STOCK_PK"
    assert not table.column("LABEL").nullable


def test_sqlite_adapter_errors():
    adapter = SqliteCatalogAdapter.in_memory(["CREATE TABLE T (A NUMBER)"])
    with pytest.raises(AdapterError):
        adapter.get_table_ddl("NOPE")
    with pytest.raises(AdapterError):
        adapter.row_count("T; DROP TABLE T")


class _OwnedAdapter(CatalogAdapter):
    def list_tables(self):
        return ["T1"]

    def get_table_ddl(self, name):
        return "CREATE TABLE SCOTT.T1 (A NUMBER)"

    def row_count(self, name):
        return 0


def test_load_from_catalog_rejects_owner_mismatch():
    with pytest.raises(AdapterError) as info:
        load_from_catalog(_OwnedAdapter(), owner="OTHER")
    assert "belongs to SCOTT" in str(info.value)


def test_describe_table_field_values(demo):
    rows = describe_table(demo.schema.table("SUPPLIERS"), owner="SCOTT")
    assert len(rows) == 5
    first = rows[0]
    assert first.table_schem == "SCOTT"
    assert first.table_name == "SUPPLIERS"
    assert first.column_name == "SUP_ID"
    assert first.data_type == 3
    assert first.type_name == "NUMBER"
    assert first.column_size == 3
    assert first.decimal_digits == 0
    assert first.nullable == 0
    assert first.is_nullable == "NO"
    assert first.char_octet_length == 22
    assert first.ordinal_position == 1

    street = rows[2]
    assert street.data_type == 12
    assert street.type_name == "VARCHAR2"
    assert street.column_size == 32
    assert street.char_octet_length == 32
    assert street.is_nullable == "YES"


def test_describe_table_reports_defaults_and_dates(corpus):
    rows = {r.column_name: r for r in describe_table(corpus.table("TESTNULL"))}
    assert rows["DEFVAL"].column_def == "49"
    assert rows["ACCEPTNULLVAL"].column_def is None

    dates = {r.column_name: r for r in describe_table(corpus.table("COLSONLY"))}
    assert dates["ENTERED"].data_type == 91
    assert dates["ENTERED"].column_size == 7


def test_table_row_counts(demo):
    counts = table_row_counts(demo, ["EMP24JAN09120206", "SUPPLIERS"])
    assert counts == [("EMP24JAN09120206", 9), ("SUPPLIERS", 6)]
    with pytest.raises(TableNotFound):
        table_row_counts(demo, ["GHOST"])


def test_primary_key_view(corpus):
    rows = get_primary_keys(corpus.table("PK2TEMP"), owner="SCOTT")
    assert [(r.column_name, r.key_seq) for r in rows] == [("NUMB", 1), ("VALUE", 2)]
    assert all(r.pk_name == "PK_NUMBVALUE" for r in rows)
    assert get_primary_keys(corpus.table("COLSONLY")) == []


def test_imported_keys_serve_only_pk_targets(corpus):
    rows = get_imported_keys(corpus, corpus.table("FK2TEMP"))
    names = {r.fk_name for r in rows}
    assert names == {"FK_NUMB2VAL2_PK2TEMP_NUMBVL2"}
    assert [(r.fkcolumn_name, r.pkcolumn_name) for r in rows] == [
        ("NUMB2", "NUMB"),
        ("VALUE2", "VALUE"),
    ]
    assert all(r.pktable_schem == "SCOTT" for r in rows)

    single = get_imported_keys(corpus, corpus.table("FK1TEMP"))
    assert [(r.fk_name, r.pkcolumn_name) for r in single] == [
        ("FK_NUMB1_PK1TEMP_NUMB", "NUMB")
    ]


def test_view_reconstruction_loses_checks_and_fk_on_unique(corpus):
    rebuilt = schema_from_metadata_views(corpus)

    testnull = rebuilt.table("TESTNULL")
    assert all(c.kind is not ConstraintKind.CHECK for c in testnull.constraints)
    assert any(
        c.kind is ConstraintKind.CHECK for c in corpus.table("TESTNULL").constraints
    )

    fk2 = rebuilt.table("FK2TEMP")
    assert fk2.constraint("FK2TEMP_FK03") is None
    assert corpus.table("FK2TEMP").constraint("FK2TEMP_FK03") is not None

    uqtemp = rebuilt.table("UQTEMP")
    assert all(c.kind is not ConstraintKind.UNIQUE for c in uqtemp.constraints)


def test_view_reconstruction_keeps_what_the_views_carry(corpus):
    for name in ("EMP", "DEPT", "PK1TEMP", "FK1TEMP", "COLSONLY"):
        original = corpus.table(name)
        rebuilt = table_from_metadata_views(corpus, original)
        assert tables_equivalent(original, rebuilt), name
