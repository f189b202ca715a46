from datetime import datetime

import pytest

from refactordb.dialect import (
    ANSI,
    DIALECTS,
    ORACLELIKE,
    emit_step,
    enforce_identifier,
    render_column_def,
    sql_string,
)
from refactordb.model import Column, Constraint, ConstraintKind, ConstraintLevel, number, varchar
from refactordb.refactorings import (
    AddColumnStep,
    AddConstraintStep,
    BackupStep,
    ConcatPayload,
    CopyDataStep,
    DropColumnStep,
    DropConstraintStep,
    DropTableStep,
    FillNullsPayload,
    ModifyColumnStep,
    RenameColumnStep,
    UpdateDataStep,
    VersionRecordStep,
)
from refactordb.versioning import VersionEntry


def test_registry_names():
    assert set(DIALECTS) == {"oraclelike", "ansi"}
    assert ORACLELIKE.max_identifier_length == 30
    assert ANSI.max_identifier_length == 128


def test_type_spellings():
    assert ORACLELIKE.spell_type(varchar(32)) == "VARCHAR2(32)"
    assert ANSI.spell_type(varchar(32)) == "VARCHAR(32)"
    assert ORACLELIKE.spell_type(number(3, 0)) == "NUMBER(3,0)"
    assert ANSI.spell_type(number(3, 0)) == "NUMERIC(3,0)"
    assert ORACLELIKE.spell_type(number()) == "NUMBER"


def test_enforce_identifier_short_names_pass_through():
    assert enforce_identifier("EMPNO", ORACLELIKE) == "EMPNO"


def test_enforce_identifier_truncates_deterministically():
    long_name = "A_VERY_LONG_CONSTRAINT_NAME_THAT_KEEPS_GOING_AND_GOING"
    squeezed = enforce_identifier(long_name, ORACLELIKE)
    assert len(squeezed) <= 30
    assert squeezed == enforce_identifier(long_name, ORACLELIKE)
    other = enforce_identifier(long_name + "_X", ORACLELIKE)
    assert squeezed != other
    assert enforce_identifier(long_name, ANSI) == long_name


def test_sql_string_escapes_quotes():
    assert sql_string("it's") == "'it''s'"


def test_render_column_def():
    text = render_column_def("A", varchar(5), ORACLELIKE, default="'x'", not_null=True)
    assert text == "A VARCHAR2(5) DEFAULT 'x' NOT NULL"
    named = render_column_def(
        "A", varchar(5), ORACLELIKE, not_null=True, not_null_constraint="NN1"
    )
    assert named == "A VARCHAR2(5) CONSTRAINT NN1 NOT NULL"


def test_emit_backup_and_drop_steps():
    assert (
        emit_step(BackupStep("EMP", backup_name="EMP24JAN09120206"), ORACLELIKE)
        == "CREATE TABLE EMP24JAN09120206 AS SELECT * FROM EMP"
    )
    assert emit_step(DropColumnStep("T", "A"), ORACLELIKE) == "ALTER TABLE T DROP COLUMN A"
    assert emit_step(DropTableStep("T"), ORACLELIKE) == "DROP TABLE T"


def test_emit_add_column_with_constraints():
    column = Column("STREET", varchar(32))
    assert (
        emit_step(AddColumnStep("EMP", column), ORACLELIKE)
        == "ALTER TABLE EMP ADD STREET VARCHAR2(32)"
    )
    defaulted = AddColumnStep(
        "EMP",
        Column("FLAG", varchar(1), nullable=False, default_value="'Y'"),
        (
            Constraint(
                "SYS_EMP_DEFAULT_1",
                ConstraintKind.DEFAULT,
                ("FLAG",),
                default_literal="'Y'",
                level=ConstraintLevel.COLUMN_LEVEL,
                is_synthetic=True,
            ),
            Constraint(
                "SYS_EMP_NOT_NULL_2",
                ConstraintKind.NOT_NULL,
                ("FLAG",),
                level=ConstraintLevel.COLUMN_LEVEL,
                is_synthetic=True,
            ),
        ),
    )
    assert (
        emit_step(defaulted, ORACLELIKE)
        == "ALTER TABLE EMP ADD FLAG VARCHAR2(1) DEFAULT 'Y' NOT NULL"
    )


def test_emit_modify_column_actions_differ_by_dialect():
    set_type = ModifyColumnStep("T", "A", "SET_TYPE", new_type=varchar(64))
    assert emit_step(set_type, ORACLELIKE) == "ALTER TABLE T MODIFY A VARCHAR2(64)"
    assert emit_step(set_type, ANSI) == "ALTER TABLE T ALTER COLUMN A SET DATA TYPE VARCHAR(64)"

    not_null = ModifyColumnStep("T", "A", "SET_NOT_NULL")
    assert emit_step(not_null, ORACLELIKE) == "ALTER TABLE T MODIFY A NOT NULL"
    assert emit_step(not_null, ANSI) == "ALTER TABLE T ALTER COLUMN A SET NOT NULL"

    drop_default = ModifyColumnStep("T", "A", "DROP_DEFAULT")
    assert emit_step(drop_default, ORACLELIKE) == "ALTER TABLE T MODIFY A DEFAULT NULL"
    assert emit_step(drop_default, ANSI) == "ALTER TABLE T ALTER COLUMN A DROP DEFAULT"


def test_emit_constraint_steps():
    add = AddConstraintStep(
        "T", Constraint("UQ_A", ConstraintKind.UNIQUE, ("A",))
    )
    assert emit_step(add, ORACLELIKE) == "ALTER TABLE T ADD CONSTRAINT UQ_A UNIQUE (A)"
    drop = DropConstraintStep("T", "UQ_A", ConstraintKind.UNIQUE)
    assert emit_step(drop, ORACLELIKE) == "ALTER TABLE T DROP CONSTRAINT UQ_A"
    drop_nn = DropConstraintStep("T", "NN_A", ConstraintKind.NOT_NULL, column="A")
    assert emit_step(drop_nn, ORACLELIKE) == "ALTER TABLE T MODIFY A NULL"


def test_emit_update_steps():
    concat = UpdateDataStep("T", ConcatPayload("A", ("A", "B"), "-"))
    assert emit_step(concat, ORACLELIKE) == "UPDATE T SET A = A||'-'||B"
    fill = UpdateDataStep("T", FillNullsPayload("A", "'x'"))
    assert emit_step(fill, ORACLELIKE) == "UPDATE T SET A = 'x' WHERE A IS NULL"


def test_emit_copy_data():
    step = CopyDataStep("S", "T", "COL", "S.ID = T.ID")
    text = emit_step(step, ORACLELIKE)
    assert text.startswith("UPDATE T SET COL = (SELECT")
    assert "S.ID = T.ID" in text


def test_emit_rename_column():
    step = RenameColumnStep("T", "OLD", "NEW")
    assert emit_step(step, ORACLELIKE) == "ALTER TABLE T RENAME COLUMN OLD TO NEW"


def test_emit_version_record_lists_all_nine_columns():
    entry = VersionEntry(
        owner="SCOTT",
        constraint_name="SUPP_PK",
        constraint_type="P",
        table_name="SUPPLIERS",
        new_modification_date=datetime(2009, 1, 24, 12, 2, 6),
    )
    text = emit_step(VersionRecordStep(entry), ORACLELIKE)
    assert text.startswith("INSERT INTO NOVCODE_CONSTRAINTS_MODIFIED (OWNER,CONSTRAINT_NAME,")
    assert "NEW_TABLE_NAME" in text
    assert "'SUPP_PK'" in text
    assert "TO_DATE('2009-01-24 12:02:06','YYYY-MM-DD HH24:MI:SS')" in text


def test_emit_version_record_ansi_uses_timestamp_literal():
    entry = VersionEntry(
        owner="SCOTT",
        constraint_name="SUPP_PK",
        constraint_type="P",
        table_name="SUPPLIERS",
        new_modification_date=datetime(2009, 1, 24, 12, 2, 6),
    )
    text = emit_step(VersionRecordStep(entry), ANSI)
    assert "TIMESTAMP '2009-01-24 12:02:06'" in text


def test_emit_step_rejects_unknown_kind():
    class Mystery:
        kind = "MYSTERY"

    with pytest.raises(Exception):
        emit_step(Mystery(), ORACLELIKE)
