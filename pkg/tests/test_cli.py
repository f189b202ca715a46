"""Tests for the console front end: menus, batch parsing, exit codes."""

import io
from pathlib import Path

import pytest

import refactordb
from refactordb.cli import (
    BatchSyntaxError,
    Console,
    main,
    parse_batch_request,
    render_menu,
    run_batch,
    run_interactive,
)
from refactordb.demo import demo_store
from refactordb.dialect import ANSI
from refactordb.executor import empty_store, store_from_rows
from refactordb.model import Column, Constraint, ConstraintKind, Schema, build_table, number, varchar
from refactordb.refactorings import MergeMode, RefactoringKind

from conftest import FIXED, make_session

FIXTURES = Path(refactordb.__file__).parent / "fixtures"


# ---------------------------------------------------------------------------
# Menu and console plumbing


def test_menu_lists_every_flow():
    menu = render_menu()
    assert menu.startswith("Choose Refactoring by entering the number")
    for line in (
        "1. Drop Column",
        "2. Drop Table",
        "3. Move Column",
        "4. Merge Columns : for single table only",
        "5. Merge Tables",
        "24. Drop Constraint",
        "31. Introduce Default Value",
        "32. Make Column Non Nullable",
        "41. Add New Column",
        "91. create tables to test",
        "92. Display constraints on table",
        "93. Display table schema",
        "94. Display table",
        "99. exit",
    ):
        assert line in menu


def test_menu_section_headings():
    menu = render_menu()
    for heading in (
        "Structural Refactoring",
        "Referential Integrity Refactoring",
        "Data Quality Refactoring",
        "Data Transformations",
        "HouseKeeping",
    ):
        assert heading in menu


def test_console_echoes_piped_answers():
    out = io.StringIO()
    console = Console(stdin=io.StringIO("scott\n"), stdout=out)
    assert console.ask("user : ") == "scott"
    assert out.getvalue() == "user : scott\n"


def test_console_raises_on_exhausted_input():
    console = Console(stdin=io.StringIO(""), stdout=io.StringIO())
    with pytest.raises(EOFError):
        console.ask("anything : ")


def test_console_say_appends_newline():
    out = io.StringIO()
    console = Console(stdin=io.StringIO(""), stdout=out)
    console.say("hello")
    console.say()
    assert out.getvalue() == "hello\n\n"


# ---------------------------------------------------------------------------
# Batch line parsing


def test_batch_blank_and_comment_lines_are_skipped():
    assert parse_batch_request("") is None
    assert parse_batch_request("   ") is None
    assert parse_batch_request("# drop everything") is None


def test_batch_parses_kind_and_params():
    request = parse_batch_request("drop_column table=EMP column=JOB backup=yes")
    assert request.kind is RefactoringKind.DROP_COLUMN
    assert request.params == {"table": "EMP", "column": "JOB", "backup": True}


def test_batch_list_keys_split_on_commas():
    request = parse_batch_request(
        'MERGE_COLUMNS table=SUPPLIERS source_columns=STREET,CITY,STATE mode=C delimiter=", "'
    )
    assert request.params["source_columns"] == ("STREET", "CITY", "STATE")
    assert request.params["mode"] is MergeMode.CONCATENATE
    assert request.params["delimiter"] == ", "


def test_batch_flag_spellings():
    for word in ("true", "TRUE", "Yes", "y", "1"):
        assert parse_batch_request(f"DROP_COLUMN table=T backup={word}").params["backup"] is True
    for word in ("false", "no", "N", "0", ""):
        assert parse_batch_request(f"DROP_COLUMN table=T backup={word}").params["backup"] is False


def test_batch_mode_aliases():
    assert parse_batch_request("MERGE_COLUMNS mode=C").params["mode"] is MergeMode.CONCATENATE
    assert parse_batch_request("MERGE_COLUMNS mode=m").params["mode"] is MergeMode.MERGE
    assert parse_batch_request("MERGE_COLUMNS mode=MERGE").params["mode"] is MergeMode.MERGE
    with pytest.raises(BatchSyntaxError, match="unknown merge mode"):
        parse_batch_request("MERGE_COLUMNS mode=X")


def test_batch_unknown_kind_rejected():
    with pytest.raises(BatchSyntaxError, match="unknown refactoring kind"):
        parse_batch_request("EXPLODE table=T")


def test_batch_bare_token_rejected():
    with pytest.raises(BatchSyntaxError, match="expected key=value"):
        parse_batch_request("DROP_COLUMN EMP")


def test_batch_new_column_builds_column():
    request = parse_batch_request(
        "INTRODUCE_NEW_COLUMN table=COLSONLY column=tagged type=VARCHAR2(8)"
        " not_null=yes default=\"'x'\""
    )
    built = request.params["column"]
    assert built == Column("TAGGED", varchar(8), nullable=False, default_value="'x'")
    assert set(request.params) == {"table", "column"}


def test_batch_new_column_requires_column_and_type():
    with pytest.raises(BatchSyntaxError, match="needs type="):
        parse_batch_request("INTRODUCE_NEW_COLUMN table=T column=A")
    with pytest.raises(BatchSyntaxError, match="needs column="):
        parse_batch_request("INTRODUCE_NEW_COLUMN table=T type=DATE")


def test_batch_new_column_rejects_unknown_type():
    with pytest.raises(BatchSyntaxError):
        parse_batch_request("INTRODUCE_NEW_COLUMN table=T column=A type=BLOB")


# ---------------------------------------------------------------------------
# Batch runs


def _batch_file(tmp_path, text):
    path = tmp_path / "requests.txt"
    path.write_text(text, encoding="utf-8")
    return str(path)


def test_run_batch_applies_and_returns_zero(tmp_path):
    session, _ = make_session(demo_store(FIXED), [])
    path = _batch_file(tmp_path, "DROP_COLUMN table=SUPPLIERS column=STATE backup=false\n")
    assert run_batch(session, path) == 0
    names = [c.name for c in session.schema.table("SUPPLIERS").columns]
    assert "STATE" not in names
    script = "".join(session.script_parts)
    assert "ALTER TABLE SUPPLIERS DROP COLUMN STATE;" in script


def test_run_batch_keeps_earlier_lines_on_failure(tmp_path, capsys):
    session, _ = make_session(demo_store(FIXED), [])
    path = _batch_file(
        tmp_path,
        "DROP_COLUMN table=SUPPLIERS column=STATE backup=false\n"
        "DROP_COLUMN table=PK1TEMP column=NUMB backup=false\n",
    )
    assert run_batch(session, path) == 1
    err = capsys.readouterr().err
    assert "refactordb: line 2 (DROP_COLUMN):" in err
    names = [c.name for c in session.schema.table("SUPPLIERS").columns]
    assert "STATE" not in names


def test_run_batch_syntax_error_returns_three(tmp_path, capsys):
    session, _ = make_session(demo_store(FIXED), [])
    path = _batch_file(tmp_path, "FROB table=X\n")
    assert run_batch(session, path) == 3
    assert "refactordb: line 1:" in capsys.readouterr().err


def test_run_batch_missing_file_returns_three(tmp_path, capsys):
    session, _ = make_session(demo_store(FIXED), [])
    assert run_batch(session, str(tmp_path / "absent.txt")) == 3
    assert "refactordb:" in capsys.readouterr().err


def test_run_batch_aborted_apply_returns_two(tmp_path, capsys):
    parent = build_table("P", [Column("ID", number(3, 0)), Column("TAG", varchar(8))])
    child = build_table("C", [Column("REF", number(3, 0)), Column("NOTE", varchar(8))])
    schema = Schema("SCOTT", (parent, child))
    store = store_from_rows(schema, {"P": [(1, "x")], "C": [(1, "a"), (1, "b")]})
    session, _ = make_session(store, [])
    path = _batch_file(
        tmp_path,
        'MOVE_COLUMN source_table=C target_table=P column=NOTE migration_condition="C.REF = P.ID"\n',
    )
    assert run_batch(session, path) == 2
    err = capsys.readouterr().err
    assert "line 1 (MOVE_COLUMN)" in err
    assert "matched 2" in err
    assert session.store == store


def test_batch_and_interactive_emit_the_same_script(tmp_path):
    batch_session, _ = make_session(demo_store(FIXED), [])
    run_batch(
        batch_session,
        _batch_file(tmp_path, "DROP_COLUMN table=SUPPLIERS column=STATE backup=false\n"),
    )

    inputs = ["", "", "", "1", "suppliers", "state", "n", "Y", "99"]
    live_session, _ = make_session(demo_store(FIXED), inputs)
    assert run_interactive(live_session) == 0
    assert live_session.script_parts == batch_session.script_parts
    assert live_session.store == batch_session.store


# ---------------------------------------------------------------------------
# Interactive runs


def test_interactive_banner_login_and_exit(demo):
    session, out = make_session(demo, ["", "", "", "99"])
    assert run_interactive(session) == 0
    text = out.getvalue()
    assert "24 - Jan - 2009 12:02:06" in text
    assert "connect made by : userid scott password tiger" in text
    assert "Choose Refactoring by entering the number" in text
    assert "Type : " in text


def test_interactive_dialect_switch():
    session, out = make_session(demo_store(FIXED), ["ansi", "", "", "99"])
    assert run_interactive(session) == 0
    assert session.dialect is ANSI
    assert "connect made by : userid scott password tiger" in out.getvalue()


def test_interactive_unknown_choice():
    session, out = make_session(demo_store(FIXED), ["", "", "", "77", "99"])
    assert run_interactive(session) == 0
    assert "invalid choice" in out.getvalue()


def test_interactive_eof_exits_cleanly():
    session, _ = make_session(demo_store(FIXED), ["", ""])
    assert run_interactive(session) == 0


def test_interactive_drop_column_declined_leaves_store():
    store = demo_store(FIXED)
    inputs = ["", "", "", "1", "suppliers", "state", "n", "N", "99"]
    session, out = make_session(store, inputs)
    assert run_interactive(session) == 0
    text = out.getvalue()
    assert "ALTER TABLE SUPPLIERS DROP COLUMN STATE" in text
    assert "Do you wish to continue with the changes? Press Y for Yes, N for No : " in text
    assert session.store == demo_store(FIXED)
    assert session.script_parts == []


def test_interactive_drop_column_applies_on_yes():
    inputs = ["", "", "", "1", "suppliers", "state", "n", "Y", "99"]
    session, out = make_session(demo_store(FIXED), inputs)
    assert run_interactive(session) == 0
    names = [c.name for c in session.schema.table("SUPPLIERS").columns]
    assert "STATE" not in names
    assert "nothing to change" not in out.getvalue()


def test_interactive_unknown_table_returns_to_menu():
    session, out = make_session(demo_store(FIXED), ["", "", "", "1", "nope", "99"])
    assert run_interactive(session) == 0
    assert "no table named NOPE" in out.getvalue()


def test_interactive_guard_failures_are_listed(corpus):
    inputs = ["", "", "", "1", "pk1temp", "numb", "n", "99"]
    session, out = make_session(empty_store(corpus), inputs)
    assert run_interactive(session) == 0
    text = out.getvalue()
    assert "Guards failed :" in text
    assert "FK_NUMB1_PK1TEMP_NUMB" in text


def test_interactive_seed_then_constraint_grid():
    inputs = ["", "", "", "91", "92", "fk2temp", "99"]
    session, out = make_session(demo_store(FIXED), inputs)
    assert run_interactive(session) == 0
    text = out.getvalue()
    assert "created : FK2TEMP" in text
    assert "[0]CONSTRAINT_NAME\t[1]CONSTRAINT_TYPE\t[2]COLUMNS\t[3]DETAIL" in text
    assert "FK_NUMB2VAL2_PK2TEMP_NUMBVL2" in text
    assert "REFERENCES SCOTT.PK2TEMP (NUMB,VALUE)" in text
    assert "FK2TEMP_FK03" in text
    assert "REFERENCES SCOTT.FK3TEMP (SRNO)" in text


def test_interactive_seeding_twice_reports_existing():
    inputs = ["", "", "", "91", "91", "99"]
    session, out = make_session(demo_store(FIXED), inputs)
    assert run_interactive(session) == 0
    text = out.getvalue()
    assert "created : PK1TEMP" in text
    assert "exists : PK1TEMP" in text


def test_interactive_display_table_grid():
    inputs = ["", "", "", "94", "dept", "99"]
    session, out = make_session(demo_store(FIXED), inputs)
    assert run_interactive(session) == 0
    text = out.getvalue()
    assert "[1] DEPTNO\t[2] DNAME\t[3] LOC" in text
    assert "10\tACCOUNTING\tNEW YORK" in text


def test_interactive_table_description_grid():
    inputs = ["", "", "", "93", "suppliers", "99"]
    session, out = make_session(demo_store(FIXED), inputs)
    assert run_interactive(session) == 0
    text = out.getvalue()
    assert "Table description" in text
    assert "column names :" in text
    type_row = next(line for line in text.splitlines() if line.startswith("[6] TYPE_NAME"))
    assert "NUMBER" in type_row and "VARCHAR2" in type_row


def test_interactive_add_column_flow():
    inputs = ["", "", "", "41", "dept", "budget", "NUMBER(7,2)", "", "n", "Y", "99"]
    session, out = make_session(demo_store(FIXED), inputs)
    assert run_interactive(session) == 0
    assert "ALTER TABLE DEPT ADD BUDGET NUMBER(7,2)" in out.getvalue()
    added = session.schema.table("DEPT").column("BUDGET")
    assert added is not None
    assert added.nullable is True


# ---------------------------------------------------------------------------
# Entry point


def test_main_batch_writes_script_and_log(tmp_path):
    batch = tmp_path / "work.txt"
    batch.write_text("DROP_COLUMN table=TESTNULL column=UNIQUVAL backup=false\n", encoding="utf-8")
    script_path = tmp_path / "out.sql"
    log_path = tmp_path / "out.log"
    code = main(
        [
            "--schema-dir",
            str(FIXTURES),
            "--batch",
            str(batch),
            "--fixed-timestamp",
            "2009-01-24T12:02:06",
            "--out-script",
            str(script_path),
            "--out-log",
            str(log_path),
        ]
    )
    assert code == 0
    script = script_path.read_text(encoding="utf-8")
    assert "-- refactoring: DROP_COLUMN @ 2009-01-24T12:02:06" in script
    assert "ALTER TABLE TESTNULL DROP COLUMN UNIQUVAL;" in script
    log_lines = log_path.read_text(encoding="utf-8").splitlines()
    assert len(log_lines) == 2
    assert all("TESTNULL" in line for line in log_lines)


def test_main_rejects_bad_timestamp(capsys):
    assert main(["--fixed-timestamp", "notatime"]) == 3
    assert "refactordb: --fixed-timestamp:" in capsys.readouterr().err


def test_main_rejects_missing_schema_dir(tmp_path, capsys):
    batch = tmp_path / "noop.txt"
    batch.write_text("# nothing\n", encoding="utf-8")
    code = main(["--schema-dir", str(tmp_path / "void"), "--batch", str(batch)])
    assert code == 3
    assert "refactordb:" in capsys.readouterr().err
