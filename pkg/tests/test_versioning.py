"""Tests for timestamp suffixes, backup names, and the modification log."""

from datetime import datetime

import pytest

from refactordb.dialect import ANSI, ORACLELIKE
from refactordb.versioning import (
    FIELD_WIDTHS,
    FieldOverflow,
    LOG_TABLE_NAME,
    VersionEntry,
    VersionLog,
    backup_name,
    emit_log_table_ddl,
    log_table_model,
    mirror_line,
    record_modification,
    timestamp_suffix,
    versioned_constraint_name,
    write_mirror,
)

MOMENT = datetime(2009, 1, 24, 12, 2, 6)


def test_timestamp_suffix_exemplar():
    assert timestamp_suffix(MOMENT) == "24JAN09120206"


def test_timestamp_suffix_always_thirteen_chars():
    for moment in (
        datetime(2025, 12, 3, 9, 5, 59),
        datetime(2000, 2, 29, 0, 0, 0),
        datetime(1999, 10, 31, 23, 59, 1),
    ):
        suffix = timestamp_suffix(moment)
        assert len(suffix) == 13
        assert suffix == suffix.upper()


def test_backup_name_exemplar():
    assert backup_name("EMP", MOMENT) == "EMP24JAN09120206"


def test_backup_name_truncates_base_not_suffix():
    base = "A_VERY_LONG_TABLE_NAME_INDEED"
    name = backup_name(base, MOMENT, ORACLELIKE)
    assert len(name) == ORACLELIKE.max_identifier_length
    assert name.endswith("24JAN09120206")
    assert name.startswith(base[: 30 - 13])


def test_backup_name_fits_wider_limits_untruncated():
    base = "A_VERY_LONG_TABLE_NAME_INDEED"
    assert backup_name(base, MOMENT, ANSI) == base + "24JAN09120206"


def test_versioned_constraint_name_inserts_underscore():
    assert versioned_constraint_name("SUPP_PK", MOMENT) == "SUPP_PK_24JAN09120206"


def test_versioned_constraint_name_truncates_within_limit():
    name = versioned_constraint_name("CONSTRAINT_WITH_A_LONG_NAME", MOMENT, ORACLELIKE)
    assert len(name) == ORACLELIKE.max_identifier_length
    assert name.endswith("_24JAN09120206")


def test_versioned_constraint_name_serial_spends_name_not_suffix():
    plain = versioned_constraint_name("SYS_TESTNULL_NOT_NULL_4", MOMENT, ORACLELIKE)
    assert plain == "SYS_TESTNULL_NOT_24JAN09120206"
    second = versioned_constraint_name("SYS_TESTNULL_NOT_NULL_4", MOMENT, ORACLELIKE, serial=2)
    assert second == "SYS_TESTNULL_NO2_24JAN09120206"
    assert len(second) == ORACLELIKE.max_identifier_length


def _entry(**overrides):
    fields = dict(
        owner="SCOTT",
        constraint_name="SUPP_PK",
        constraint_type="P",
        table_name="SUPPLIERS",
        new_modification_date=MOMENT,
    )
    fields.update(overrides)
    return VersionEntry(**fields)


def test_entry_rejects_unknown_type_letter():
    with pytest.raises(ValueError):
        _entry(constraint_type="X")


def test_referential_entries_need_referential_fields():
    with pytest.raises(ValueError):
        _entry(constraint_type="R")
    entry = _entry(constraint_type="R", r_owner="SCOTT", r_constraint_name="PK_NUMB")
    assert entry.r_constraint_name == "PK_NUMB"


def test_non_referential_entries_must_not_carry_them():
    with pytest.raises(ValueError):
        _entry(r_owner="SCOTT", r_constraint_name="PK_NUMB")


def test_record_modification_appends_without_mutating():
    log = VersionLog()
    first = record_modification(_entry(), log)
    second = record_modification(_entry(constraint_type="U"), first)
    assert log.entries == ()
    assert [e.constraint_type for e in first.entries] == ["P"]
    assert [e.constraint_type for e in second.entries] == ["P", "U"]


def test_record_modification_enforces_field_widths():
    long_name = "X" * (FIELD_WIDTHS["constraint_name"] + 1)
    with pytest.raises(FieldOverflow) as info:
        record_modification(_entry(constraint_name=long_name), VersionLog())
    assert info.value.field == "constraint_name"


def test_log_table_model_columns_in_order():
    table = log_table_model()
    assert table.name == LOG_TABLE_NAME
    assert [c.name for c in table.columns] == [
        "OWNER",
        "CONSTRAINT_NAME",
        "CONSTRAINT_TYPE",
        "TABLE_NAME",
        "R_OWNER",
        "R_CONSTRAINT_NAME",
        "NEW_MODIFICATION_DATE",
        "NEW_CONSTRAINT_NAME",
        "NEW_TABLE_NAME",
    ]


def test_log_table_ddl_spells_types_per_dialect():
    text = emit_log_table_ddl(ORACLELIKE)
    assert f"CREATE TABLE {LOG_TABLE_NAME}" in text
    assert "OWNER VARCHAR2(30)" in text
    assert "NEW_MODIFICATION_DATE DATE" in text
    ansi_text = emit_log_table_ddl(ANSI)
    assert "OWNER VARCHAR(30)" in ansi_text


def test_mirror_line_is_tab_separated_iso():
    entry = _entry(
        constraint_type="R",
        r_owner="SCOTT",
        r_constraint_name="PK_NUMB",
        new_constraint_name="FK_NEW",
    )
    line = mirror_line(entry)
    assert line.split("\t") == [
        "SCOTT",
        "SUPP_PK",
        "R",
        "SUPPLIERS",
        "SCOTT",
        "PK_NUMB",
        "2009-01-24T12:02:06",
        "FK_NEW",
        "",
    ]


def test_write_mirror_one_line_per_entry(tmp_path):
    log = record_modification(_entry(), VersionLog())
    log = record_modification(_entry(constraint_type="C"), log)
    path = tmp_path / "log.tsv"
    write_mirror(log, str(path))
    lines = path.read_text(encoding="utf-8").splitlines()
    assert len(lines) == 2
    assert lines[0].startswith("SCOTT\tSUPP_PK\tP\t")
