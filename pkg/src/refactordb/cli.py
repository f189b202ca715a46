"""Interactive refactoring console and batch runner.

The interactive mode is a menu wizard: it renders the refactoring menu,
gathers the parameters for the chosen refactoring prompt by prompt, shows
the pending statements, and applies them after a confirmation.  Batch mode
reads one request per line and applies each without prompting, stopping at
the first failure.  Both modes share a Session that owns the data store,
the accumulated SQL script, and the version log.
"""

from __future__ import annotations

import argparse
import os
import shlex
import sys
from dataclasses import dataclass, field
from datetime import date, datetime
from decimal import Decimal
from pathlib import Path
from typing import Any, Callable, TextIO

from .catalog import (
    CatalogIoError,
    describe_table,
    load_from_scripts,
    table_row_counts,
)
from .demo import demo_store, seed_tables
from .dialect import DIALECTS, Dialect, ORACLELIKE, emit_step
from .executor import (
    DataStore,
    ExecutionAborted,
    apply_plan,
    bind_plan,
    empty_store,
)
from .model import (
    CONSTRAINT_TYPE_CODES,
    Column,
    Constraint,
    ConstraintKind,
    RefactorError,
    Schema,
    Table,
    resolve_fk_columns,
)
from .parser import (
    DdlSyntaxError,
    UnsupportedConstruct,
    extract_constraint_strings,
    parse_data_type,
    render_create_table,
)
from .refactorings import (
    GuardFailure,
    MergeMode,
    Plan,
    RefactoringKind,
    RefactoringRequest,
    plan_request,
)
from .versioning import VersionLog, record_modification, write_mirror


class Console:
    """Prompt and response channel writing a flat transcript to stdout.
    When input is piped, responses are echoed so the transcript reads the
    way a recorded terminal session does."""

    def __init__(self, stdin: TextIO | None = None, stdout: TextIO | None = None) -> None:
        self.stdin = stdin if stdin is not None else sys.stdin
        self.stdout = stdout if stdout is not None else sys.stdout
        try:
            self.echo = not self.stdin.isatty()
        except (AttributeError, ValueError):
            self.echo = True

    def say(self, text: str = "") -> None:
        self.stdout.write(text + "\n")

    def ask(self, prompt: str) -> str:
        self.stdout.write(prompt)
        self.stdout.flush()
        line = self.stdin.readline()
        if line == "":
            raise EOFError
        text = line.rstrip("\n")
        if self.echo:
            self.stdout.write(text + "\n")
        return text


@dataclass
class Session:
    """One console run: the dialect, the evolving store, and everything
    the run has emitted so far."""

    dialect: Dialect
    store: DataStore
    console: Console
    clock: Callable[[], datetime]
    script_parts: list[str] = field(default_factory=list)
    log: VersionLog = field(default_factory=VersionLog)

    @property
    def schema(self) -> Schema:
        return self.store.schema


MENU = """Choose Refactoring by entering the number

Structural Refactoring

1. Drop Column
2. Drop Table
3. Move Column
4. Merge Columns : for single table only
5. Merge Tables

Referential Integrity Refactoring

24. Drop Constraint

Data Quality Refactoring

31. Introduce Default Value
32. Make Column Non Nullable

Data Transformations

41. Add New Column

HouseKeeping

91. create tables to test
92. Display constraints on table
93. Display table schema
94. Display table
99. exit"""


def render_menu() -> str:
    return MENU


COLUMN_GRID_HEADER = (
    "[0]TABLE_NAME\t[1]COLUMN_NAME\t[3]TYPE_NAME\t[4]COLUMN_SIZE"
    "\t[5]DECIMAL_DIGITS\t[7]COLUMN_DEF\t[8]ORDINAL_POSITION\t[9]IS_NULLABLE"
)

DESCRIPTION_FIELDS = (
    ("TABLE_CAT", "table_cat"),
    ("TABLE_SCHEM", "table_schem"),
    ("TABLE_NAME", "table_name"),
    ("COLUMN_NAME", "column_name"),
    ("DATA_TYPE", "data_type"),
    ("TYPE_NAME", "type_name"),
    ("COLUMN_SIZE", "column_size"),
    ("BUFFER_LENGTH", "buffer_length"),
    ("DECIMAL_DIGITS", "decimal_digits"),
    ("NUM_PREC_RADIX", "num_prec_radix"),
    ("NULLABLE", "nullable"),
    ("REMARKS", "remarks"),
    ("COLUMN_DEF", "column_def"),
    ("SQL_DATA_TYPE", "sql_data_type"),
    ("SQL_DATETIME_SUB", "sql_datetime_sub"),
    ("CHAR_OCTET_LENGTH", "char_octet_length"),
    ("ORDINAL_POSITION", "ordinal_position"),
    ("IS_NULLABLE", "is_nullable"),
)


def _cell(value: Any) -> str:
    if value is None:
        return "null"
    if isinstance(value, Decimal):
        return format(value, "f")
    if isinstance(value, datetime):
        return value.isoformat(sep=" ")
    if isinstance(value, date):
        return value.isoformat()
    return str(value)


def _grid(console: Console, header: str, rows: list[tuple]) -> None:
    console.say(header)
    for row in rows:
        console.say("\t".join(_cell(v) for v in row))


def _column_grid_rows(session: Session, table: Table) -> list[tuple]:
    return [
        (
            r.table_name,
            r.column_name,
            r.type_name,
            r.column_size,
            r.decimal_digits,
            r.column_def,
            r.ordinal_position,
            r.is_nullable,
        )
        for r in describe_table(table, session.schema.owner, session.dialect)
    ]


def _constraint_detail(schema: Schema, con: Constraint) -> str | None:
    if con.kind is ConstraintKind.FOREIGN_KEY:
        owner = f"{con.referenced_owner}." if con.referenced_owner else ""
        text = f"REFERENCES {owner}{con.referenced_table or '?'}"
        columns = resolve_fk_columns(schema, con) or con.referenced_columns
        if columns:
            text += " (" + ",".join(columns) + ")"
        return text
    if con.kind is ConstraintKind.CHECK:
        return con.check_expression
    if con.kind is ConstraintKind.DEFAULT:
        return f"DEFAULT {con.default_literal}"
    if con.kind is ConstraintKind.NOT_NULL:
        return "NOT NULL"
    return None


def _ask_existing_table(session: Session, prompt: str) -> Table | None:
    name = session.console.ask(prompt).strip()
    table = session.schema.table(name)
    if table is None:
        session.console.say(f"no table named {name.upper()}")
    return table


def _ask_yes(session: Session, prompt: str) -> bool:
    return session.console.ask(prompt).strip().upper() == "Y"


def _plan(session: Session, kind: RefactoringKind, params: dict) -> Plan | None:
    """Build the plan for a gathered request; print why it cannot be built."""
    request = RefactoringRequest(kind, params)
    try:
        return plan_request(
            request, session.schema, timestamp=session.clock(), data=session.store
        )
    except GuardFailure as exc:
        session.console.say("Guards failed :")
        for failure in exc.failures:
            session.console.say(str(failure))
        return None
    except RefactorError as exc:
        session.console.say(str(exc))
        return None


def _record_result(session: Session, result) -> None:
    session.store = result.store
    if result.script:
        session.script_parts.append(result.script)
    for entry in result.version_entries:
        session.log = record_modification(entry, session.log)


def _preview(session: Session, plan: Plan) -> None:
    bound = bind_plan(plan, session.dialect)
    for step in bound.steps:
        session.console.say(emit_step(step, session.dialect))


def _confirm_and_apply(session: Session, plan: Plan) -> None:
    if not plan.steps:
        session.console.say("nothing to change")
        return
    _preview(session, plan)
    session.console.say("")
    answer = session.console.ask(
        "Do you wish to continue with the changes? Press Y for Yes, N for No : "
    )
    if answer.strip().upper() != "Y":
        return
    try:
        result = apply_plan(plan, session.store, session.dialect)
    except ExecutionAborted as exc:
        session.console.say(str(exc))
        return
    _record_result(session, result)


def _finish(session: Session, kind: RefactoringKind, params: dict) -> None:
    plan = _plan(session, kind, params)
    if plan is not None:
        _confirm_and_apply(session, plan)


# ---------------------------------------------------------------------------
# Menu flows


def _flow_drop_column(session: Session) -> None:
    c = session.console
    c.say("1. Drop Column")
    c.say("")
    table = _ask_existing_table(session, "enter the Tablename :")
    if table is None:
        return
    column = c.ask("enter the Columnname :").strip()
    backup = _ask_yes(
        session, "Do you want a backup of the table? Press Y for Yes, N for No : "
    )
    c.say("")
    _finish(
        session,
        RefactoringKind.DROP_COLUMN,
        {"table": table.name, "column": column, "backup": backup},
    )


def _flow_drop_table(session: Session) -> None:
    c = session.console
    c.say("2. Drop Table")
    c.say("")
    table = _ask_existing_table(session, "enter the Tablename :")
    if table is None:
        return
    backup = _ask_yes(
        session, "Do you want a backup of the table? Press Y for Yes, N for No : "
    )
    c.say("")
    _finish(session, RefactoringKind.DROP_TABLE, {"table": table.name, "backup": backup})


def _flow_move_column(session: Session) -> None:
    c = session.console
    c.say("3. Move Column")
    c.say("")
    source = _ask_existing_table(session, "enter the Tablename to move the column from :")
    if source is None:
        return
    target = _ask_existing_table(session, "enter the Tablename to move the column to :")
    if target is None:
        return
    column = c.ask(
        f"Type the column name that you would like to shift to table {target.name}\n"
    ).strip()
    condition = c.ask("enter the condition matching rows between the tables : ").strip()
    backup = _ask_yes(
        session, "Do you want a backup of the table? Press Y for Yes, N for No : "
    )
    c.say("")
    _finish(
        session,
        RefactoringKind.MOVE_COLUMN,
        {
            "source_table": source.name,
            "target_table": target.name,
            "column": column,
            "migration_condition": condition,
            "backup": backup,
        },
    )


def _ask_column_names(session: Session, first_prompt: str) -> list[str]:
    """Gather column names one at a time: a name, then an offer to continue."""
    c = session.console
    names: list[str] = []
    prompt = first_prompt
    while True:
        name = c.ask(prompt + "\n").strip()
        c.say("")
        if name:
            names.append(name)
        more = c.ask("Continue entering more column names\n").strip().upper()
        c.say("")
        if more != "Y":
            return names


def _flow_merge_columns(session: Session) -> None:
    c = session.console
    c.say("4. Merge Columns : for single table only")
    c.say("")
    table = _ask_existing_table(session, "enter the Tablename :")
    if table is None:
        return
    c.say("")
    c.say("The FIRST COLUMN that you enter WILL BE MODIFIED .")
    c.say("")
    columns = _ask_column_names(
        session, "Type the column name that will hold the merged value"
    )
    mode_answer = c.ask("Press C for Concatenate, M for Merge : ").strip().upper()
    mode = MergeMode.CONCATENATE if mode_answer != "M" else MergeMode.MERGE
    delimiter = None
    update_condition = None
    if mode is MergeMode.CONCATENATE:
        delimiter = c.ask("enter the delimiter : ")
    else:
        update_condition = c.ask("enter the update statement after the keyword SET : ")
    backup = _ask_yes(
        session, "Do you desire a backup of the table? Press Y for Yes, N for No : "
    )
    c.say("")
    _finish(
        session,
        RefactoringKind.MERGE_COLUMNS,
        {
            "table": table.name,
            "source_columns": tuple(columns),
            "mode": mode,
            "delimiter": delimiter,
            "update_condition": update_condition,
            "backup": backup,
        },
    )


def _flow_merge_tables(session: Session) -> None:
    c = session.console
    c.say("5. Merge Tables")
    c.say("")
    c.say("you can merge between 2 tables .The FIRST TABLE that you enter WILL BE MODIFIED .")
    c.say("")
    target = _ask_existing_table(session, "enter the 1 Tablename :")
    if target is None:
        return
    c.say("")
    source = _ask_existing_table(session, "enter the 2 Tablename :")
    if source is None:
        return
    c.say("")
    c.say("Details entered for tables in function to Merge column")
    c.say("")
    _grid(
        c,
        COLUMN_GRID_HEADER,
        _column_grid_rows(session, target) + _column_grid_rows(session, source),
    )
    c.say("")
    c.say("Unless stated otherwise, Press Y for YES, Press N for No.")
    c.say("")
    columns = _ask_column_names(
        session,
        f"Type the column name that you would like to shift to table {target.name}",
    )
    c.say("Details entered for tables in function to Merge column")
    c.say("")
    counts = table_row_counts(session.store, [target.name, source.name])
    _grid(c, "[0]TABLENAME\t[1]NoOfRows", counts)
    c.say("")
    c.say("Details entered for tables in function to Merge column")
    c.say("")
    c.say(render_create_table(source, session.dialect))
    c.say("")
    c.say("Details entered for tables in function extract constraints")
    c.say("")
    extraction = extract_constraint_strings(source, session.dialect)
    _grid(
        c,
        "[0]Column Name\t[1]Row found at\t[2] Table Name\t[3] Constraint String",
        [
            (r.column_name, r.row_index, r.table_name, r.constraint_string)
            for r in extraction
        ],
    )
    c.say("")
    plan = _plan(
        session,
        RefactoringKind.MERGE_TABLES,
        {
            "target_table": target.name,
            "source_table": source.name,
            "columns_to_move": tuple(columns),
        },
    )
    if plan is None:
        return
    c.say("Value of update function is true")
    c.say("")
    _confirm_and_apply(session, plan)


def _flow_rename_column(session: Session) -> None:
    c = session.console
    c.say("6. Rename Column")
    c.say("")
    table = _ask_existing_table(session, "enter the Tablename :")
    if table is None:
        return
    old_name = c.ask("enter the Columnname :").strip()
    new_name = c.ask("enter the new Columnname :").strip()
    c.say("")
    _finish(
        session,
        RefactoringKind.RENAME_COLUMN,
        {"table": table.name, "old_name": old_name, "new_name": new_name},
    )


def _flow_drop_constraint(session: Session) -> None:
    c = session.console
    c.say("24. Drop Constraint")
    c.say("")
    table = _ask_existing_table(session, "enter the Tablename :")
    if table is None:
        return
    c.say("")
    _constraint_grid(session, table)
    c.say("")
    name = c.ask("enter the Constraintname :").strip()
    backup = _ask_yes(
        session, "Do you want a backup of the table? Press Y for Yes, N for No : "
    )
    c.say("")
    _finish(
        session,
        RefactoringKind.DROP_CONSTRAINT,
        {"table": table.name, "constraint_name": name, "backup": backup},
    )


def _flow_introduce_default(session: Session) -> None:
    c = session.console
    c.say("31. Introduce Default Value")
    c.say("")
    table = _ask_existing_table(session, "enter the Tablename :")
    if table is None:
        return
    column = c.ask("enter the Columnname :").strip()
    literal = c.ask("enter the default value : ").strip()
    c.say("")
    _finish(
        session,
        RefactoringKind.INTRODUCE_DEFAULT_VALUE,
        {"table": table.name, "column": column, "literal": literal},
    )


def _flow_make_non_nullable(session: Session) -> None:
    c = session.console
    c.say("32. Make Column Non Nullable")
    c.say("")
    table = _ask_existing_table(session, "enter the Tablename :")
    if table is None:
        return
    column = c.ask("enter the Columnname :").strip()
    fill = c.ask("enter a value to fill existing nulls. Press Enter to skip : ").strip()
    c.say("")
    _finish(
        session,
        RefactoringKind.MAKE_COLUMN_NON_NULLABLE,
        {"table": table.name, "column": column, "fill_value": fill or None},
    )


def _flow_add_column(session: Session) -> None:
    c = session.console
    c.say("41. Add New Column")
    c.say("")
    table = _ask_existing_table(session, "enter the Tablename :")
    if table is None:
        return
    name = c.ask("enter the new Columnname :").strip()
    type_text = c.ask("enter the datatype : ").strip()
    try:
        data_type = parse_data_type(type_text)
    except (DdlSyntaxError, UnsupportedConstruct) as exc:
        c.say(str(exc))
        return
    default = c.ask("enter the default value. Press Enter to skip : ").strip() or None
    not_null = _ask_yes(
        session, "Should the column be NOT NULL? Press Y for Yes, N for No : "
    )
    c.say("")
    column = Column(name.upper(), data_type, nullable=not not_null, default_value=default)
    _finish(
        session,
        RefactoringKind.INTRODUCE_NEW_COLUMN,
        {"table": table.name, "column": column},
    )


def _flow_create_tables(session: Session) -> None:
    c = session.console
    c.say("91. create tables to test")
    c.say("")
    store, created, skipped = seed_tables(session.store)
    session.store = store
    for name in created:
        c.say(f"created : {name}")
    for name in skipped:
        c.say(f"exists : {name}")


def _constraint_grid(session: Session, table: Table) -> None:
    rows = [
        (
            con.name,
            CONSTRAINT_TYPE_CODES[con.kind],
            ",".join(con.columns),
            _constraint_detail(session.schema, con),
        )
        for con in table.constraints
    ]
    _grid(
        session.console,
        "[0]CONSTRAINT_NAME\t[1]CONSTRAINT_TYPE\t[2]COLUMNS\t[3]DETAIL",
        rows,
    )


def _flow_show_constraints(session: Session) -> None:
    c = session.console
    c.say("92. Display constraints on table")
    table = _ask_existing_table(session, "")
    if table is None:
        return
    c.say("")
    _constraint_grid(session, table)


def _flow_show_schema(session: Session) -> None:
    c = session.console
    c.say("93. Display table Schema")
    table = _ask_existing_table(session, "")
    if table is None:
        return
    c.say("Table description")
    c.say("column names :")
    c.say("")
    rows = describe_table(table, session.schema.owner, session.dialect)
    for index, (label, attr) in enumerate(DESCRIPTION_FIELDS, start=1):
        cells = [_cell(getattr(r, attr)) for r in rows]
        c.say("\t".join([f"[{index}] {label}"] + cells))


def _flow_show_table(session: Session) -> None:
    c = session.console
    c.say("94. Display table")
    table = _ask_existing_table(session, "")
    if table is None:
        return
    c.say("")
    header = "\t".join(
        f"[{i}] {col.name}" for i, col in enumerate(table.columns, start=1)
    )
    rows = session.store.table_rows(table.name) or ()
    _grid(c, header, list(rows))


_FLOWS: dict[str, Callable[[Session], None]] = {
    "1": _flow_drop_column,
    "2": _flow_drop_table,
    "3": _flow_move_column,
    "4": _flow_merge_columns,
    "5": _flow_merge_tables,
    "6": _flow_rename_column,
    "24": _flow_drop_constraint,
    "31": _flow_introduce_default,
    "32": _flow_make_non_nullable,
    "41": _flow_add_column,
    "91": _flow_create_tables,
    "92": _flow_show_constraints,
    "93": _flow_show_schema,
    "94": _flow_show_table,
}


def run_interactive(session: Session) -> int:
    c = session.console
    c.say(session.clock().strftime("%d - %b - %Y %H:%M:%S"))
    c.say("")
    try:
        choice = c.ask(
            "Enter Choice for the Database Technology Else press enter to choose"
            " Oracle for default\n"
        ).strip().lower()
        if choice in DIALECTS:
            session.dialect = DIALECTS[choice]
        c.say("")
        username = c.ask("Enter the username. Press Enter to use default\n").strip()
        c.say("")
        password = c.ask("Enter the password. Press Enter to use default\n").strip()
        c.say("")
        c.say(
            f"connect made by : userid {username or 'scott'}"
            f" password {password or 'tiger'}"
        )
        while True:
            c.say("")
            c.say(render_menu())
            c.say("")
            number = c.ask("Type : ").strip()
            c.say("")
            if number == "99":
                return 0
            flow = _FLOWS.get(number)
            if flow is None:
                c.say("invalid choice")
                continue
            flow(session)
    except EOFError:
        return 0


# ---------------------------------------------------------------------------
# Batch mode


class BatchSyntaxError(RefactorError):
    pass


_LIST_KEYS = {"source_columns", "columns_to_move"}
_FLAG_KEYS = {"backup", "not_null"}


def _parse_flag(value: str) -> bool:
    return value.strip().upper() in ("TRUE", "YES", "Y", "1")


def parse_batch_request(line: str) -> RefactoringRequest | None:
    """One request per line: ``KIND key=value key=value …``.  Quoting
    follows shell rules; ``#`` starts a comment."""
    tokens = shlex.split(line, comments=True)
    if not tokens:
        return None
    try:
        kind = RefactoringKind(tokens[0].upper())
    except ValueError:
        raise BatchSyntaxError(f"unknown refactoring kind {tokens[0]!r}") from None
    params: dict[str, Any] = {}
    for token in tokens[1:]:
        key, sep, value = token.partition("=")
        if not sep or not key:
            raise BatchSyntaxError(f"expected key=value, got {token!r}")
        key = key.lower()
        if key in _LIST_KEYS:
            params[key] = tuple(part.strip() for part in value.split(",") if part.strip())
        elif key in _FLAG_KEYS:
            params[key] = _parse_flag(value)
        elif key == "mode":
            upper = value.strip().upper()
            aliases = {"C": "CONCATENATE", "M": "MERGE"}
            try:
                params[key] = MergeMode(aliases.get(upper, upper))
            except ValueError:
                raise BatchSyntaxError(f"unknown merge mode {value!r}") from None
        else:
            params[key] = value

    if kind is RefactoringKind.INTRODUCE_NEW_COLUMN:
        for required in ("column", "type"):
            if required not in params:
                raise BatchSyntaxError(f"{kind.value} needs {required}=")
        try:
            data_type = parse_data_type(str(params.pop("type")))
        except (DdlSyntaxError, UnsupportedConstruct) as exc:
            raise BatchSyntaxError(str(exc)) from None
        params["column"] = Column(
            str(params["column"]).upper(),
            data_type,
            nullable=not params.pop("not_null", False),
            default_value=params.pop("default", None),
        )
    return RefactoringRequest(kind, params)


def run_batch(session: Session, path: str) -> int:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        sys.stderr.write(f"refactordb: {exc}\n")
        return 3

    for number, line in enumerate(text.splitlines(), start=1):
        try:
            request = parse_batch_request(line)
        except BatchSyntaxError as exc:
            sys.stderr.write(f"refactordb: line {number}: {exc}\n")
            return 3
        if request is None:
            continue
        label = f"line {number} ({request.kind.value})"
        try:
            plan = plan_request(
                request,
                session.schema,
                timestamp=session.clock(),
                data=session.store,
            )
        except GuardFailure as exc:
            sys.stderr.write(f"refactordb: {label}: {exc}\n")
            return 1
        except RefactorError as exc:
            sys.stderr.write(f"refactordb: {label}: {exc}\n")
            return 1
        try:
            result = apply_plan(plan, session.store, session.dialect)
        except ExecutionAborted as exc:
            sys.stderr.write(f"refactordb: {label}: {exc}\n")
            return 2
        _record_result(session, result)
    return 0


# ---------------------------------------------------------------------------
# Entry point


def _load_store(args: argparse.Namespace, dialect: Dialect, moment: datetime) -> DataStore:
    schema_dir = args.schema_dir or os.environ.get("REFACTORDB_SCHEMA_DIR")
    if schema_dir:
        return empty_store(load_from_scripts(schema_dir))
    if Path("schema").is_dir():
        return empty_store(load_from_scripts("schema"))
    return demo_store(moment, dialect)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="refactordb",
        description="Plan and apply schema refactorings over an in-memory data store.",
    )
    parser.add_argument("--dialect", choices=sorted(DIALECTS), default="oraclelike")
    parser.add_argument("--schema-dir", help="directory of CREATE TABLE scripts")
    parser.add_argument("--batch", help="run requests from a file instead of prompting")
    parser.add_argument("--out-script", help="write the emitted SQL script here on exit")
    parser.add_argument("--out-log", help="write the version-log mirror here on exit")
    parser.add_argument(
        "--fixed-timestamp",
        metavar="ISO8601",
        help="pin the session clock (backup and version names become stable)",
    )
    args = parser.parse_args(argv)

    if args.fixed_timestamp:
        try:
            pinned = datetime.fromisoformat(args.fixed_timestamp)
        except ValueError as exc:
            sys.stderr.write(f"refactordb: --fixed-timestamp: {exc}\n")
            return 3
        clock: Callable[[], datetime] = lambda: pinned
    else:
        clock = datetime.now

    dialect = DIALECTS[args.dialect]
    try:
        store = _load_store(args, dialect, clock())
    except (CatalogIoError, DdlSyntaxError, UnsupportedConstruct, OSError) as exc:
        sys.stderr.write(f"refactordb: {exc}\n")
        return 3

    session = Session(dialect=dialect, store=store, console=Console(), clock=clock)
    if args.batch:
        code = run_batch(session, args.batch)
    else:
        code = run_interactive(session)

    try:
        if args.out_script is not None:
            Path(args.out_script).write_text("".join(session.script_parts), encoding="utf-8")
        if args.out_log is not None:
            write_mirror(session.log, args.out_log)
    except OSError as exc:
        sys.stderr.write(f"refactordb: {exc}\n")
        return 3
    return code


if __name__ == "__main__":
    sys.exit(main())
