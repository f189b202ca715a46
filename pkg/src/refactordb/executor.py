"""Plan binding and execution against an in-memory data store.

The executor is the only place a dialect touches a plan.  ``bind_plan``
resolves the name intents the planners left open (backup table names,
timestamped constraint names, rename targets squeezed to the identifier
limit); ``apply_plan`` then runs the bound steps against an immutable
store, checking schema validity and data conformance after every step.
The first failing step aborts the whole plan: every structure is a value,
so the caller's store is untouched.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from datetime import date, datetime
from decimal import Decimal
from typing import Any, Iterable, Mapping

from .dialect import Dialect, ORACLELIKE, emit_step, enforce_identifier
from .model import (
    Column,
    Constraint,
    ConstraintKind,
    ConstraintLevel,
    RefactorError,
    Schema,
    Table,
    TableNotFound,
    TypeBase,
    build_table,
    ident_eq,
    literal_value,
    resolve_fk_columns,
    validate_schema,
)
from .refactorings import (
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
    Plan,
    RawUpdatePayload,
    RenameColumnStep,
    Step,
    UpdateDataStep,
    VersionRecordStep,
    parse_join_condition,
)
from .versioning import (
    LOG_TABLE_NAME,
    VersionEntry,
    VersionLog,
    backup_name,
    record_modification,
    versioned_constraint_name,
)

Row = tuple[Any, ...]


class NameCollision(RefactorError):
    pass


class StepFailure(RefactorError):
    def __init__(self, index: int, step: Step, cause: str) -> None:
        super().__init__(f"step {index} ({step.kind}): {cause}")
        self.index = index
        self.step = step
        self.cause = cause


class ExecutionAborted(RefactorError):
    """The plan stopped at a failing step; no change was published."""

    def __init__(self, failure: StepFailure) -> None:
        super().__init__(str(failure))
        self.failure = failure


@dataclass(frozen=True, slots=True)
class TableData:
    rows: tuple[Row, ...] = ()


@dataclass(frozen=True)
class DataStore:
    """A schema plus rows per table, keyed by upper-cased table name.
    Never mutated: every change builds a new store."""

    schema: Schema
    tables: Mapping[str, TableData] = field(default_factory=dict)

    def table_rows(self, name: str) -> tuple[Row, ...] | None:
        data = self.tables.get(name.upper())
        return None if data is None else data.rows

    def has_table(self, name: str) -> bool:
        return name.upper() in self.tables

    def with_schema(self, schema: Schema) -> "DataStore":
        return replace(self, schema=schema)

    def with_rows(self, name: str, rows: Iterable[Row]) -> "DataStore":
        updated = dict(self.tables)
        updated[name.upper()] = TableData(tuple(tuple(r) for r in rows))
        return replace(self, tables=updated)

    def without_table(self, name: str) -> "DataStore":
        updated = dict(self.tables)
        updated.pop(name.upper(), None)
        return replace(self, tables=updated)


def empty_store(schema: Schema) -> DataStore:
    """A store for a schema with zero rows everywhere."""
    return DataStore(schema, {t.name.upper(): TableData() for t in schema.tables})


def _canonical_value(value: Any) -> Any:
    if isinstance(value, bool):
        raise ValueError("boolean values have no column type")
    if isinstance(value, (int, float)):
        return Decimal(str(value))
    return value


def canonical_row(values: Iterable[Any]) -> Row:
    """One row with plain int/float values converted to Decimal."""
    return tuple(_canonical_value(v) for v in values)


def store_from_rows(
    schema: Schema, rows_by_table: Mapping[str, Iterable[Iterable[Any]]]
) -> DataStore:
    """Build a store from plain nested sequences; numbers become Decimal.
    Tables without listed rows start empty."""
    store = empty_store(schema)
    for name, rows in rows_by_table.items():
        store = store.with_rows(name, [canonical_row(row) for row in rows])
    return store


# ---------------------------------------------------------------------------
# Conformance: does the data satisfy the schema the store claims?


def _decimal_fits(value: Decimal, precision: int | None, scale: int | None) -> str | None:
    digits = value.as_tuple()
    declared_scale = scale or 0
    fractional = max(-digits.exponent, 0)
    integral = len(digits.digits) - fractional
    if fractional > declared_scale:
        return f"{value} has {fractional} decimal places, scale is {declared_scale}"
    if precision is not None and max(integral, 0) > precision - declared_scale:
        return f"{value} needs {max(integral, 0)} integer digits, {precision - declared_scale} available"
    return None


def _value_problem(column: Column, value: Any) -> str | None:
    if value is None:
        return f"{column.name} is NOT NULL" if not column.nullable else None
    dt = column.data_type
    if dt.base is TypeBase.VARCHAR_TEXT:
        if not isinstance(value, str):
            return f"{column.name}: {value!r} is not text"
        if dt.length is not None and len(value) > dt.length:
            return f"{column.name}: {len(value)} characters over VARCHAR({dt.length})"
        return None
    if dt.base is TypeBase.FIXED_NUMBER:
        if not isinstance(value, Decimal):
            return f"{column.name}: {value!r} is not a number"
        problem = _decimal_fits(value, dt.precision, dt.scale)
        return f"{column.name}: {problem}" if problem else None
    if not isinstance(value, (datetime, date)):
        return f"{column.name}: {value!r} is not a date"
    return None


def _key_tuples(table: Table, rows: tuple[Row, ...], columns: tuple[str, ...]) -> list[tuple]:
    indexes = [table.column(c).ordinal - 1 for c in columns]
    keys = []
    for row in rows:
        key = tuple(row[i] for i in indexes)
        if any(v is None for v in key):
            continue
        keys.append(key)
    return keys


def _fk_problems(store: DataStore, table: Table, fk: Constraint, rows: tuple[Row, ...]) -> list[str]:
    schema = store.schema
    if fk.referenced_owner and not ident_eq(fk.referenced_owner, schema.owner):
        return []  # cross-owner targets live outside the store
    target_columns = resolve_fk_columns(schema, fk)
    parent = schema.table(fk.referenced_table or "")
    if parent is None or target_columns is None:
        return []  # schema validation reports the broken reference
    parent_rows = store.table_rows(parent.name)
    if parent_rows is None:
        return []
    parent_keys = set(_key_tuples(parent, parent_rows, target_columns))
    problems = []
    for key in _key_tuples(table, rows, fk.columns):
        if key not in parent_keys:
            problems.append(f"{table.name}: {fk.name} value {key!r} missing from {parent.name}")
    return problems


def conformance(store: DataStore) -> list[str]:
    """Every way the store's rows fail its schema.  CHECK expressions are
    carried, not evaluated, so they are never reported here."""
    problems: list[str] = []
    schema = store.schema
    names = {t.name.upper() for t in schema.tables}
    for name in sorted(store.tables):
        if name not in names:
            problems.append(f"store table {name} has no schema table")
    for table in schema.tables:
        rows = store.table_rows(table.name)
        if rows is None:
            problems.append(f"schema table {table.name} has no store table")
            continue
        width = len(table.columns)
        for n, row in enumerate(rows, start=1):
            if len(row) != width:
                problems.append(f"{table.name} row {n}: {len(row)} values for {width} columns")
                continue
            for column in table.columns:
                problem = _value_problem(column, row[column.ordinal - 1])
                if problem:
                    problems.append(f"{table.name} row {n}: {problem}")
        for con in table.constraints:
            if con.kind in (ConstraintKind.PRIMARY_KEY, ConstraintKind.UNIQUE):
                keys = _key_tuples(table, rows, con.columns)
                if len(keys) != len(set(keys)):
                    problems.append(f"{table.name}: duplicate keys under {con.name}")
            elif con.kind is ConstraintKind.FOREIGN_KEY:
                problems.extend(_fk_problems(store, table, con, rows))
    return problems


# ---------------------------------------------------------------------------
# Backups


def backup_table_model(table: Table, name: str) -> Table:
    """Structure of a backup copy: all columns, NOT NULL kept (including the
    kind implied by a primary key), every other constraint left behind."""
    columns = [Column(c.name, c.data_type) for c in table.columns]
    keeps = [
        Constraint(None, ConstraintKind.NOT_NULL, (c.name,), level=ConstraintLevel.COLUMN_LEVEL)
        for c in table.columns
        if not c.nullable
    ]
    return build_table(name, columns, keeps)


def create_backup(
    store: DataStore,
    table: str,
    moment: datetime,
    *,
    dialect: Dialect = ORACLELIKE,
) -> tuple[DataStore, str]:
    """Snapshot a table under its timestamped backup name."""
    tab = store.schema.require_table(table)
    name = backup_name(tab.name, moment, dialect)
    if store.schema.table(name) is not None or store.has_table(name):
        raise NameCollision(f"backup table {name} already exists")
    rows = store.table_rows(tab.name) or ()
    copied = store.with_schema(store.schema.with_table(backup_table_model(tab, name)))
    return copied.with_rows(name, rows), name


# ---------------------------------------------------------------------------
# Binding: resolve dialect-dependent name intents


class _VersionedNames:
    """One versioned name per source constraint name within a plan.

    Identifier truncation can collapse two long names onto the same
    versioned form; later sources then get a serial spliced into the
    truncated part so every bound name in the plan stays distinct."""

    def __init__(self, timestamp: datetime, dialect: Dialect) -> None:
        self.timestamp = timestamp
        self.dialect = dialect
        self.by_source: dict[str, str] = {}
        self.taken: set[str] = set()

    def resolve(self, source: str) -> str:
        known = self.by_source.get(source)
        if known is not None:
            return known
        candidate = versioned_constraint_name(source, self.timestamp, self.dialect)
        serial = 1
        while candidate in self.taken:
            serial += 1
            candidate = versioned_constraint_name(
                source, self.timestamp, self.dialect, serial=serial
            )
        self.by_source[source] = candidate
        self.taken.add(candidate)
        return candidate


def bind_step(
    step: Step, timestamp: datetime, dialect: Dialect, names: _VersionedNames | None = None
) -> Step:
    if names is None:
        names = _VersionedNames(timestamp, dialect)
    if isinstance(step, BackupStep) and step.backup_name is None:
        return replace(step, backup_name=backup_name(step.table, timestamp, dialect))
    if isinstance(step, AddConstraintStep) and step.versioned_from is not None:
        renamed = replace(step.constraint, name=names.resolve(step.versioned_from))
        return replace(step, constraint=renamed, versioned_from=None)
    if isinstance(step, RenameColumnStep):
        return replace(step, new_name=enforce_identifier(step.new_name, dialect))
    if isinstance(step, VersionRecordStep) and step.version_new_name:
        entry = replace(
            step.entry,
            new_constraint_name=names.resolve(
                step.entry.new_constraint_name or step.entry.constraint_name
            ),
        )
        return replace(step, entry=entry, version_new_name=False)
    return step


def bind_plan(plan: Plan, dialect: Dialect = ORACLELIKE) -> Plan:
    names = _VersionedNames(plan.timestamp, dialect)
    return replace(
        plan,
        steps=tuple(bind_step(s, plan.timestamp, dialect, names) for s in plan.steps),
    )


def script_header(plan: Plan) -> str:
    return f"-- refactoring: {plan.request.kind.value} @ {plan.timestamp.isoformat()}"


def script_only(plan: Plan, dialect: Dialect = ORACLELIKE) -> str:
    """The SQL script a successful apply_plan would produce, without a
    store: a comment header, then one semicolon-terminated statement per
    line.  An empty plan yields empty text."""
    bound = bind_plan(plan, dialect)
    if not bound.steps:
        return ""
    lines = [script_header(bound)]
    lines += [emit_step(step, dialect) + ";" for step in bound.steps]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Step handlers


def _require_free_constraint_name(schema: Schema, name: str) -> None:
    for table in schema.tables:
        if table.constraint(name) is not None:
            raise NameCollision(f"constraint {name} already exists on {table.name}")


def _text_of(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, Decimal):
        return format(value, "f")
    if isinstance(value, datetime):
        return value.isoformat(sep=" ")
    if isinstance(value, date):
        return value.isoformat()
    return str(value)


def _apply_backup(store: DataStore, step: BackupStep) -> DataStore:
    tab = store.schema.require_table(step.table)
    name = step.backup_name
    if name is None:
        raise RefactorError("backup step is not bound to a name")
    if store.schema.table(name) is not None or store.has_table(name):
        raise NameCollision(f"backup table {name} already exists")
    rows = store.table_rows(tab.name) or ()
    copied = store.with_schema(store.schema.with_table(backup_table_model(tab, name)))
    return copied.with_rows(name, rows)


def _apply_add_column(store: DataStore, step: AddColumnStep) -> DataStore:
    tab = store.schema.require_table(step.table)
    if tab.column(step.column.name) is not None:
        raise RefactorError(f"column {step.column.name} already exists on {tab.name}")
    new_table = build_table(
        tab.name,
        list(tab.columns) + [step.column],
        list(tab.constraints) + list(step.constraints),
    )
    filler = None
    default = next(
        (c.default_literal for c in step.constraints if c.kind is ConstraintKind.DEFAULT),
        None,
    )
    if default is not None:
        filler = literal_value(default, step.column.data_type)
    rows = [row + (filler,) for row in (store.table_rows(tab.name) or ())]
    return store.with_schema(store.schema.replace_table(new_table)).with_rows(tab.name, rows)


def _apply_drop_column(store: DataStore, step: DropColumnStep) -> DataStore:
    tab = store.schema.require_table(step.table)
    col = tab.column(step.column)
    if col is None:
        raise RefactorError(f"no column {step.column} on {tab.name}")
    holdouts = [c.name for c in tab.constraints if c.mentions(col.name)]
    if holdouts:
        raise RefactorError(
            f"column {col.name} still constrained by {', '.join(map(str, holdouts))}"
        )
    index = col.ordinal - 1
    new_table = build_table(
        tab.name,
        [c for c in tab.columns if not ident_eq(c.name, col.name)],
        list(tab.constraints),
    )
    rows = [row[:index] + row[index + 1 :] for row in (store.table_rows(tab.name) or ())]
    return store.with_schema(store.schema.replace_table(new_table)).with_rows(tab.name, rows)


def _constraints_minus(tab: Table, doomed: list[Constraint]) -> list[Constraint]:
    gone = {id(c) for c in doomed}
    return [c for c in tab.constraints if id(c) not in gone]


def _apply_modify_column(store: DataStore, step: ModifyColumnStep) -> DataStore:
    tab = store.schema.require_table(step.table)
    col = tab.column(step.column)
    if col is None:
        raise RefactorError(f"no column {step.column} on {tab.name}")
    columns = list(tab.columns)
    constraints = list(tab.constraints)
    action = step.action

    if action == "SET_TYPE":
        if step.new_type is None:
            raise RefactorError("SET_TYPE without a type")
        columns[col.ordinal - 1] = replace(col, data_type=step.new_type)
    elif action == "SET_NOT_NULL":
        if not col.nullable:
            raise RefactorError(f"{col.name} is already NOT NULL")
        constraints.append(
            Constraint(
                step.constraint_name,
                ConstraintKind.NOT_NULL,
                (col.name,),
                level=ConstraintLevel.COLUMN_LEVEL,
                is_synthetic=step.constraint_name is None
                or step.constraint_name.startswith("SYS_"),
            )
        )
    elif action == "DROP_NOT_NULL":
        doomed = [
            c for c in constraints if c.kind is ConstraintKind.NOT_NULL and c.mentions(col.name)
        ]
        if not doomed:
            raise RefactorError(f"{col.name} carries no NOT NULL constraint")
        constraints = _constraints_minus(tab, doomed)
    elif action == "SET_DEFAULT":
        if step.operand is None:
            raise RefactorError("SET_DEFAULT without a literal")
        doomed = [
            c for c in constraints if c.kind is ConstraintKind.DEFAULT and c.mentions(col.name)
        ]
        constraints = _constraints_minus(tab, doomed)
        constraints.append(
            Constraint(
                step.constraint_name,
                ConstraintKind.DEFAULT,
                (col.name,),
                default_literal=step.operand,
                level=ConstraintLevel.COLUMN_LEVEL,
                is_synthetic=step.constraint_name is None
                or step.constraint_name.startswith("SYS_"),
            )
        )
    elif action == "DROP_DEFAULT":
        doomed = [
            c for c in constraints if c.kind is ConstraintKind.DEFAULT and c.mentions(col.name)
        ]
        if not doomed:
            raise RefactorError(f"{col.name} carries no DEFAULT")
        constraints = _constraints_minus(tab, doomed)
    else:
        raise RefactorError(f"unknown column action {action!r}")

    new_table = build_table(tab.name, columns, constraints)
    return store.with_schema(store.schema.replace_table(new_table))


_IDENT_BOUNDARY = r"(?<![A-Za-z0-9_$#]){}(?![A-Za-z0-9_$#])"


def _rewrite_expression(expression: str, old: str, new: str) -> str:
    pattern = re.compile(_IDENT_BOUNDARY.format(re.escape(old)), re.IGNORECASE)
    return pattern.sub(new, expression)


def _apply_rename_column(store: DataStore, step: RenameColumnStep) -> DataStore:
    schema = store.schema
    tab = schema.require_table(step.table)
    col = tab.column(step.old_name)
    if col is None:
        raise RefactorError(f"no column {step.old_name} on {tab.name}")
    if tab.column(step.new_name) is not None and not ident_eq(step.old_name, step.new_name):
        raise NameCollision(f"column {step.new_name} already exists on {tab.name}")

    def rename_in(names: tuple[str, ...]) -> tuple[str, ...]:
        return tuple(step.new_name if ident_eq(n, step.old_name) else n for n in names)

    new_tables = []
    for table in schema.tables:
        constraints = []
        for con in table.constraints:
            if ident_eq(table.name, tab.name):
                con = replace(con, columns=rename_in(con.columns))
                if con.check_expression is not None:
                    con = replace(
                        con,
                        check_expression=_rewrite_expression(
                            con.check_expression, step.old_name, step.new_name
                        ),
                    )
            if (
                con.kind is ConstraintKind.FOREIGN_KEY
                and con.referenced_table is not None
                and ident_eq(con.referenced_table, tab.name)
            ):
                con = replace(con, referenced_columns=rename_in(con.referenced_columns))
            constraints.append(con)
        columns = [
            replace(c, name=step.new_name)
            if ident_eq(table.name, tab.name) and ident_eq(c.name, step.old_name)
            else c
            for c in table.columns
        ]
        new_tables.append(build_table(table.name, columns, constraints))
    return store.with_schema(replace(schema, tables=tuple(new_tables)))


def _apply_drop_table(store: DataStore, step: DropTableStep) -> DataStore:
    tab = store.schema.require_table(step.table)
    return store.with_schema(store.schema.without_table(tab.name)).without_table(tab.name)


def _apply_add_constraint(store: DataStore, step: AddConstraintStep) -> DataStore:
    tab = store.schema.require_table(step.table)
    con = step.constraint
    if step.versioned_from is not None:
        raise RefactorError("add-constraint step is not bound to a final name")
    if con.name is not None:
        _require_free_constraint_name(store.schema, con.name)
    new_table = build_table(tab.name, list(tab.columns), list(tab.constraints) + [con])
    return store.with_schema(store.schema.replace_table(new_table))


def _apply_drop_constraint(store: DataStore, step: DropConstraintStep) -> DataStore:
    tab = store.schema.require_table(step.table)
    con = tab.constraint(step.constraint_name)
    if con is None:
        raise RefactorError(f"no constraint {step.constraint_name} on {tab.name}")
    remaining = [c for c in tab.constraints if c is not con]
    new_table = build_table(tab.name, list(tab.columns), remaining)
    return store.with_schema(store.schema.replace_table(new_table))


# --- the small in-memory UPDATE evaluator ----------------------------------


def _split_where(text: str) -> tuple[str, str | None]:
    depth = 0
    in_string = False
    upper = text.upper()
    for i, ch in enumerate(text):
        if in_string:
            in_string = ch != "'"
            continue
        if ch == "'":
            in_string = True
        elif ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif depth == 0 and upper.startswith("WHERE", i):
            before = i == 0 or not (upper[i - 1].isalnum() or upper[i - 1] == "_")
            after = i + 5 >= len(upper) or not (upper[i + 5].isalnum() or upper[i + 5] == "_")
            if before and after:
                return text[:i].strip(), text[i + 5 :].strip()
    return text.strip(), None


def _where_test(condition: str, table: Table, row: Row) -> bool:
    for clause in re.split(r"\bAND\b", condition, flags=re.IGNORECASE):
        clause = clause.strip()
        m = re.fullmatch(
            r"([A-Za-z_][A-Za-z0-9_$#]*)\s+IS\s+(NOT\s+)?NULL", clause, flags=re.IGNORECASE
        )
        if m:
            col = table.column(m.group(1))
            if col is None:
                raise RefactorError(f"unknown column in WHERE: {m.group(1)}")
            value = row[col.ordinal - 1]
            if (value is None) == bool(m.group(2)):
                return False
            continue
        m = re.fullmatch(
            r"([A-Za-z_][A-Za-z0-9_$#]*)\s*(=|<>)\s*('(?:[^']|'')*'|[-+]?\d+(?:\.\d+)?)",
            clause,
            flags=re.IGNORECASE,
        )
        if m:
            col = table.column(m.group(1))
            if col is None:
                raise RefactorError(f"unknown column in WHERE: {m.group(1)}")
            wanted = literal_value(m.group(3), col.data_type)
            value = row[col.ordinal - 1]
            # Null compares as neither equal nor unequal.
            if m.group(2) == "=":
                ok = value is not None and value == wanted
            else:
                ok = value is not None and value != wanted
            if not ok:
                return False
            continue
        raise RefactorError(f"cannot evaluate WHERE clause in memory: {clause!r}")
    return True


def _split_concat(expression: str) -> list[str]:
    parts: list[str] = []
    current: list[str] = []
    in_string = False
    i = 0
    while i < len(expression):
        ch = expression[i]
        if in_string:
            current.append(ch)
            if ch == "'":
                in_string = False
            i += 1
            continue
        if ch == "'":
            in_string = True
            current.append(ch)
            i += 1
            continue
        if expression.startswith("||", i):
            parts.append("".join(current))
            current = []
            i += 2
            continue
        current.append(ch)
        i += 1
    parts.append("".join(current))
    return parts


def _raw_assignment(text: str, table: Table) -> tuple[Column, list[Any], str | None]:
    """Parse ``COL = piece [|| piece ...] [WHERE ...]`` into the target
    column, the pieces (a Column or a literal token), and the WHERE text."""
    body, where = _split_where(text)
    m = re.match(r"\s*([A-Za-z_][A-Za-z0-9_$#]*)\s*=\s*(.+)$", body, flags=re.DOTALL)
    if m is None:
        raise RefactorError(f"cannot apply raw update in memory: {text!r}")
    target = table.column(m.group(1))
    if target is None:
        raise RefactorError(f"unknown column in update: {m.group(1)}")
    pieces: list[Any] = []
    for token in _split_concat(m.group(2)):
        token = token.strip()
        if re.fullmatch(r"[A-Za-z_][A-Za-z0-9_$#]*", token) and table.column(token) is not None:
            pieces.append(table.column(token))
        elif re.fullmatch(r"'(?:[^']|'')*'|[-+]?\d+(?:\.\d+)?|NULL", token, flags=re.IGNORECASE):
            pieces.append(token)
        else:
            raise RefactorError(f"cannot evaluate update expression in memory: {token!r}")
    return target, pieces, where


def _piece_text(piece: Any, row: Row) -> str:
    if isinstance(piece, Column):
        return _text_of(row[piece.ordinal - 1])
    if piece.startswith("'"):
        return piece[1:-1].replace("''", "'")
    return piece


def _apply_raw_update(table: Table, rows: tuple[Row, ...], text: str) -> list[Row]:
    target, pieces, where = _raw_assignment(text, table)
    result: list[Row] = []
    for row in rows:
        if where is not None and not _where_test(where, table, row):
            result.append(row)
            continue
        if len(pieces) == 1 and isinstance(pieces[0], Column):
            value: Any = row[pieces[0].ordinal - 1]
        elif len(pieces) == 1:
            token = pieces[0]
            value = None if token.upper() == "NULL" else literal_value(token, target.data_type)
        else:
            value = "".join(_piece_text(p, row) for p in pieces)
        updated = list(row)
        updated[target.ordinal - 1] = value
        result.append(tuple(updated))
    return result


def _apply_update(store: DataStore, step: UpdateDataStep) -> DataStore:
    tab = store.schema.require_table(step.table)
    rows = store.table_rows(tab.name)
    if rows is None:
        raise RefactorError(f"no data table for {tab.name}")
    payload = step.payload

    if isinstance(payload, ConcatPayload):
        target = tab.column(payload.target)
        sources = [tab.column(c) for c in payload.sources]
        if target is None or any(c is None for c in sources):
            raise RefactorError("concatenation names a missing column")
        new_rows = []
        for row in rows:
            joined = payload.delimiter.join(_text_of(row[c.ordinal - 1]) for c in sources)
            updated = list(row)
            updated[target.ordinal - 1] = joined
            new_rows.append(tuple(updated))
    elif isinstance(payload, FillNullsPayload):
        col = tab.column(payload.column)
        if col is None:
            raise RefactorError(f"no column {payload.column} on {tab.name}")
        value = literal_value(payload.literal, col.data_type)
        new_rows = []
        for row in rows:
            updated = list(row)
            if updated[col.ordinal - 1] is None:
                updated[col.ordinal - 1] = value
            new_rows.append(tuple(updated))
    elif isinstance(payload, RawUpdatePayload):
        new_rows = _apply_raw_update(tab, rows, payload.text)
    else:
        raise RefactorError(f"unknown update payload {payload!r}")
    return store.with_rows(tab.name, new_rows)




def _apply_copy_data(store: DataStore, step: CopyDataStep) -> DataStore:
    source = store.schema.require_table(step.source_table)
    target = store.schema.require_table(step.target_table)
    src_col = source.column(step.column)
    dst_col = target.column(step.column)
    if src_col is None or dst_col is None:
        raise RefactorError(f"column {step.column} must exist on both tables during the copy")

    pairs = parse_join_condition(step.condition, source, target)
    source_rows = store.table_rows(source.name) or ()
    target_rows = store.table_rows(target.name)
    if target_rows is None:
        raise RefactorError(f"no data table for {target.name}")

    new_rows = []
    for row in target_rows:
        matches = [
            s
            for s in source_rows
            if all(
                s[sc.ordinal - 1] is not None and s[sc.ordinal - 1] == row[tc.ordinal - 1]
                for sc, tc in pairs
            )
        ]
        if len(matches) > 1:
            raise RefactorError(
                f"migration condition matched {len(matches)} {source.name} rows"
                f" for one {target.name} row"
            )
        updated = list(row)
        if matches:
            updated[dst_col.ordinal - 1] = matches[0][src_col.ordinal - 1]
        new_rows.append(tuple(updated))
    return store.with_rows(target.name, new_rows)


def _log_row(entry: VersionEntry) -> Row:
    return (
        entry.owner,
        entry.constraint_name,
        entry.constraint_type,
        entry.table_name,
        entry.r_owner,
        entry.r_constraint_name,
        entry.new_modification_date,
        entry.new_constraint_name,
        entry.new_table_name,
    )


@dataclass(frozen=True)
class ExecutionResult:
    store: DataStore
    script: str
    version_log: VersionLog
    steps: tuple[Step, ...]
    statements: tuple[str, ...]

    @property
    def applied_steps(self) -> int:
        return len(self.statements)

    @property
    def version_entries(self) -> tuple[VersionEntry, ...]:
        return self.version_log.entries


def apply_plan(
    plan: Plan,
    store: DataStore,
    dialect: Dialect = ORACLELIKE,
) -> ExecutionResult:
    """Run a plan atomically against a store.

    Steps execute in order on a working value; after each one the schema
    must validate and the rows must conform to it.  Any failure raises
    ExecutionAborted carrying the failing step, and the caller's store is
    exactly as passed.  An UpdateData step with no earlier Backup of its
    table is itself a failure.
    """
    bound = bind_plan(plan, dialect)
    current = store
    log = VersionLog()
    statements: list[str] = []
    backed_up: set[str] = set()

    for index, step in enumerate(bound.steps, start=1):
        try:
            if isinstance(step, BackupStep):
                current = _apply_backup(current, step)
                backed_up.add(step.table.upper())
            elif isinstance(step, AddColumnStep):
                current = _apply_add_column(current, step)
            elif isinstance(step, DropColumnStep):
                current = _apply_drop_column(current, step)
            elif isinstance(step, ModifyColumnStep):
                current = _apply_modify_column(current, step)
            elif isinstance(step, RenameColumnStep):
                current = _apply_rename_column(current, step)
            elif isinstance(step, DropTableStep):
                current = _apply_drop_table(current, step)
            elif isinstance(step, AddConstraintStep):
                current = _apply_add_constraint(current, step)
            elif isinstance(step, DropConstraintStep):
                current = _apply_drop_constraint(current, step)
            elif isinstance(step, UpdateDataStep):
                if step.table.upper() not in backed_up:
                    raise RefactorError(f"no backup of {step.table} precedes the update")
                current = _apply_update(current, step)
            elif isinstance(step, CopyDataStep):
                current = _apply_copy_data(current, step)
            elif isinstance(step, VersionRecordStep):
                log = record_modification(step.entry, log)
                if current.schema.table(LOG_TABLE_NAME) is not None:
                    rows = list(current.table_rows(LOG_TABLE_NAME) or ())
                    rows.append(_log_row(step.entry))
                    current = current.with_rows(LOG_TABLE_NAME, rows)
            else:
                raise RefactorError(f"no handler for step kind {step.kind!r}")
        except RefactorError as exc:
            raise ExecutionAborted(StepFailure(index, step, str(exc))) from exc

        problems = [str(v) for v in validate_schema(current.schema)]
        problems += conformance(current)
        if problems:
            raise ExecutionAborted(StepFailure(index, step, "; ".join(problems)))
        statements.append(emit_step(step, dialect) + ";")

    script = ""
    if statements:
        script = "\n".join([script_header(bound)] + statements) + "\n"
    return ExecutionResult(
        store=current,
        script=script,
        version_log=log,
        steps=bound.steps,
        statements=tuple(statements),
    )
