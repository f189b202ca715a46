import pytest

from refactordb.dialect import ANSI, ORACLELIKE
from refactordb.model import ConstraintKind, TypeBase, tables_equivalent
from refactordb.parser import (
    DdlSyntaxError,
    UnsupportedConstruct,
    extract_constraint_strings,
    parse_create_table,
    parse_data_type,
    parse_script,
    parse_statements,
    render_create_table,
)

SUPPLIERS_DDL = """CREATE TABLE SUPPLIERS
( SUP_ID NUMBER(3,0),
  SUP_NAME VARCHAR2(32),
  STREET VARCHAR2(32),
  CITY VARCHAR2(32),
  STATE VARCHAR2(3),
  CONSTRAINT SUPP_PK PRIMARY KEY (SUP_ID)
)"""


def test_parse_create_table_basics():
    table, owner = parse_create_table(SUPPLIERS_DDL)
    assert owner is None
    assert table.name == "SUPPLIERS"
    assert [c.name for c in table.columns] == ["SUP_ID", "SUP_NAME", "STREET", "CITY", "STATE"]
    assert table.column("SUP_ID").data_type.precision == 3
    assert table.primary_key().name == "SUPP_PK"


def test_owner_prefix_is_returned():
    _, owner = parse_create_table("CREATE TABLE SCOTT.T (A NUMBER)")
    assert owner == "SCOTT"


def test_unquoted_identifiers_fold_uppercase():
    table, _ = parse_create_table("create table t (a number, primary key (a))")
    assert table.name == "T"
    assert table.columns[0].name == "A"


def test_data_types():
    assert parse_data_type("NUMBER").base is TypeBase.FIXED_NUMBER
    assert parse_data_type("NUMBER(10)").precision == 10
    assert parse_data_type("NUMERIC(10,2)").scale == 2
    assert parse_data_type("VARCHAR2(32)").length == 32
    assert parse_data_type("VARCHAR(32)").base is TypeBase.VARCHAR_TEXT
    assert parse_data_type("DATE").base is TypeBase.DATE


def test_unsupported_type_is_flagged():
    with pytest.raises(UnsupportedConstruct):
        parse_create_table("CREATE TABLE T (A BLOB)")


def test_syntax_error_carries_position():
    with pytest.raises(DdlSyntaxError) as info:
        parse_create_table("CREATE TABLE T (A NUMBER,,)")
    assert info.value.line >= 1
    assert info.value.column >= 1


def test_check_expression_is_captured_verbatim():
    table, _ = parse_create_table(
        "CREATE TABLE T (A NUMBER, CONSTRAINT CH CHECK (a > 10 AND a < (20)))"
    )
    con = table.constraint("CH")
    assert con.kind is ConstraintKind.CHECK
    assert con.check_expression == "a > 10 AND a < (20)"


def test_column_level_constraints():
    ddl = (
        "CREATE TABLE T ("
        " A NUMBER(3,0) CONSTRAINT NN1 NOT NULL,"
        " B VARCHAR2(5) DEFAULT 'x' NOT NULL,"
        " C NUMBER CONSTRAINT UQ1 UNIQUE"
        ")"
    )
    table, _ = parse_create_table(ddl)
    assert table.constraint("NN1").kind is ConstraintKind.NOT_NULL
    assert table.column("B").default_value == "'x'"
    assert not table.column("B").nullable
    assert table.constraint("UQ1").kind is ConstraintKind.UNIQUE


def test_fk_without_column_list():
    table, _ = parse_create_table(
        "CREATE TABLE C (P NUMBER, CONSTRAINT FK FOREIGN KEY (P) REFERENCES SCOTT.PARENT)"
    )
    fk = table.constraint("FK")
    assert fk.referenced_owner == "SCOTT"
    assert fk.referenced_table == "PARENT"
    assert fk.referenced_columns == ()


def test_parse_statements_prefixes_errors():
    text = "CREATE TABLE A (X NUMBER);\nCREATE TABLE B (Y BLOB);"
    with pytest.raises(UnsupportedConstruct) as info:
        parse_statements(text)
    assert str(info.value).startswith("statement 2:")


def test_parse_script_single_owner():
    schema = parse_script("CREATE TABLE SCOTT.A (X NUMBER); CREATE TABLE B (Y NUMBER);")
    assert schema.owner == "SCOTT"
    assert [t.name for t in schema.tables] == ["A", "B"]


def test_parse_script_rejects_mixed_owners():
    with pytest.raises(UnsupportedConstruct):
        parse_script("CREATE TABLE SCOTT.A (X NUMBER); CREATE TABLE OTHER.B (Y NUMBER);")


def test_render_create_table_matches_reference_layout(corpus):
    suppliers, _ = parse_create_table(SUPPLIERS_DDL)
    assert render_create_table(suppliers, ORACLELIKE) == SUPPLIERS_DDL


def test_render_ansi_spells_types_differently():
    table, _ = parse_create_table("CREATE TABLE T (A VARCHAR2(5), B NUMBER(3,0))")
    text = render_create_table(table, ANSI)
    assert "VARCHAR(5)" in text
    assert "NUMERIC(3,0)" in text


def test_round_trip_over_corpus(corpus):
    for table in corpus.tables:
        for dialect in (ORACLELIKE, ANSI):
            rendered = render_create_table(table, dialect)
            parsed, _ = parse_create_table(rendered)
            assert tables_equivalent(table, parsed), table.name


def test_extract_constraint_strings_reference_rows():
    suppliers, _ = parse_create_table(SUPPLIERS_DDL)
    rows = extract_constraint_strings(suppliers, ORACLELIKE)
    listed = [(r.column_name, r.row_index, r.table_name, r.constraint_string) for r in rows]
    assert listed == [
        ("SUP_ID", 1, "SUPPLIERS", "SUP_ID NUMBER(3,0) CONSTRAINT SUPP_PK PRIMARY KEY (SUP_ID)"),
        ("SUP_NAME", 2, "SUPPLIERS", "SUP_NAME VARCHAR2(32)"),
        ("STREET", 3, "SUPPLIERS", "STREET VARCHAR2(32)"),
        ("CITY", 4, "SUPPLIERS", "CITY VARCHAR2(32)"),
        ("STATE", 5, "SUPPLIERS", "STATE VARCHAR2(3)"),
    ]


def test_corpus_constraint_counts(corpus):
    by_kind = {}
    for con in corpus.table("TESTNULL").constraints:
        by_kind[con.kind] = by_kind.get(con.kind, 0) + 1
    assert by_kind == {
        ConstraintKind.NOT_NULL: 5,
        ConstraintKind.DEFAULT: 1,
        ConstraintKind.CHECK: 1,
        ConstraintKind.PRIMARY_KEY: 1,
        ConstraintKind.UNIQUE: 1,
    }
