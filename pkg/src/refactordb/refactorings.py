"""The refactoring catalog: guarded requests planned as atomic step sequences.

Each planner resolves its referents (raising TableNotFound and friends),
evaluates every guard without short-circuiting, and only then builds the
plan.  Plans are dialect-neutral: name intents that depend on a dialect's
identifier limit (backup names, timestamped constraint names, rename
targets) stay unresolved until the executor or emitter binds them.

One timestamp is bound per plan.  Every destructive step is preceded by a
Backup step when one was requested, and always before an UPDATE rewrites
rows in place.  Steps that drop, create or rename constraints are followed
by one VersionRecord per affected constraint.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from typing import TYPE_CHECKING, Any, ClassVar

from .model import (
    CONSTRAINT_TYPE_CODES,
    Column,
    ColumnNotFound,
    Constraint,
    ConstraintKind,
    ConstraintLevel,
    ConstraintNotFound,
    DataType,
    RefactorError,
    Schema,
    Table,
    TypeBase,
    dependent_constraints,
    ident_eq,
    inbound_foreign_keys,
    literal_error,
    render_constraint_clause,
    resolve_fk_key,
    synthetic_name,
    varchar,
)
from .versioning import VersionEntry

if TYPE_CHECKING:
    from .executor import DataStore


class RefactoringKind(Enum):
    DROP_COLUMN = "DROP_COLUMN"
    DROP_TABLE = "DROP_TABLE"
    MERGE_COLUMNS = "MERGE_COLUMNS"
    MERGE_TABLES = "MERGE_TABLES"
    MOVE_COLUMN = "MOVE_COLUMN"
    RENAME_COLUMN = "RENAME_COLUMN"
    DROP_CONSTRAINT = "DROP_CONSTRAINT"
    INTRODUCE_DEFAULT_VALUE = "INTRODUCE_DEFAULT_VALUE"
    MAKE_COLUMN_NON_NULLABLE = "MAKE_COLUMN_NON_NULLABLE"
    INTRODUCE_NEW_COLUMN = "INTRODUCE_NEW_COLUMN"


class MergeMode(Enum):
    CONCATENATE = "CONCATENATE"
    MERGE = "MERGE"


@dataclass(frozen=True)
class RefactoringRequest:
    kind: RefactoringKind
    params: dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True, slots=True)
class GuardResult:
    """Outcome of one guard: what was checked, whether it held, and why not."""

    guard: str
    passed: bool
    detail: str = ""

    def __str__(self) -> str:
        state = "ok" if self.passed else "FAILED"
        text = f"{self.guard}: {state}"
        return f"{text} ({self.detail})" if self.detail else text


class GuardFailure(RefactorError):
    def __init__(self, results: list[GuardResult]) -> None:
        self.failures = [r for r in results if not r.passed]
        super().__init__("; ".join(str(r) for r in self.failures) or "guard failure")


# ---------------------------------------------------------------------------
# Plan steps


class Step:
    __slots__ = ()
    kind: ClassVar[str] = ""


@dataclass(frozen=True, slots=True)
class BackupStep(Step):
    kind: ClassVar[str] = "Backup"
    table: str
    # None until bound against a dialect (backup_name needs its length limit).
    backup_name: str | None = None


@dataclass(frozen=True, slots=True)
class AddColumnStep(Step):
    kind: ClassVar[str] = "AddColumn"
    table: str
    column: Column
    constraints: tuple[Constraint, ...] = ()


@dataclass(frozen=True, slots=True)
class DropColumnStep(Step):
    kind: ClassVar[str] = "DropColumn"
    table: str
    column: str


@dataclass(frozen=True, slots=True)
class ModifyColumnStep(Step):
    kind: ClassVar[str] = "ModifyColumn"
    table: str
    column: str
    action: str  # SET_TYPE | SET_NOT_NULL | DROP_NOT_NULL | SET_DEFAULT | DROP_DEFAULT
    new_type: DataType | None = None
    operand: str | None = None
    constraint_name: str | None = None  # name for the constraint the action creates


@dataclass(frozen=True, slots=True)
class RenameColumnStep(Step):
    kind: ClassVar[str] = "RenameColumn"
    table: str
    old_name: str
    new_name: str


@dataclass(frozen=True, slots=True)
class DropTableStep(Step):
    kind: ClassVar[str] = "DropTable"
    table: str


@dataclass(frozen=True, slots=True)
class AddConstraintStep(Step):
    kind: ClassVar[str] = "AddConstraint"
    table: str
    constraint: Constraint
    # Original name to version with the plan timestamp at bind time.
    versioned_from: str | None = None


@dataclass(frozen=True, slots=True)
class DropConstraintStep(Step):
    kind: ClassVar[str] = "DropConstraint"
    table: str
    constraint_name: str
    constraint_kind: ConstraintKind
    column: str | None = None  # NOT NULL / DEFAULT drops emit column syntax


@dataclass(frozen=True, slots=True)
class ConcatPayload:
    kind: ClassVar[str] = "CONCAT"
    target: str
    sources: tuple[str, ...]
    delimiter: str


@dataclass(frozen=True, slots=True)
class FillNullsPayload:
    kind: ClassVar[str] = "FILL_NULLS"
    column: str
    literal: str


@dataclass(frozen=True, slots=True)
class RawUpdatePayload:
    kind: ClassVar[str] = "RAW"
    text: str


@dataclass(frozen=True, slots=True)
class UpdateDataStep(Step):
    kind: ClassVar[str] = "UpdateData"
    table: str
    payload: ConcatPayload | FillNullsPayload | RawUpdatePayload


@dataclass(frozen=True, slots=True)
class CopyDataStep(Step):
    kind: ClassVar[str] = "CopyData"
    source_table: str
    target_table: str
    column: str
    condition: str


@dataclass(frozen=True, slots=True)
class VersionRecordStep(Step):
    kind: ClassVar[str] = "VersionRecord"
    entry: VersionEntry
    # When set, new_constraint_name holds an original name to be replaced by
    # its timestamped form at bind time.
    version_new_name: bool = False


@dataclass(frozen=True)
class Plan:
    """An ordered, atomic step sequence for one refactoring request."""

    request: RefactoringRequest
    timestamp: datetime
    steps: tuple[Step, ...]
    guards: tuple[GuardResult, ...] = ()


def _describe_type(data_type: DataType) -> str:
    if data_type.base is TypeBase.VARCHAR_TEXT:
        return f"text({data_type.length})"
    if data_type.base is TypeBase.FIXED_NUMBER:
        if data_type.precision is None:
            return "number"
        if data_type.scale is None:
            return f"number({data_type.precision})"
        return f"number({data_type.precision},{data_type.scale})"
    return "date"


def describe_step(step: Step) -> str:
    if isinstance(step, BackupStep):
        suffix = f" AS {step.backup_name}" if step.backup_name else ""
        return f"Backup {step.table}{suffix}"
    if isinstance(step, AddColumnStep):
        extras = "".join(
            f" {c.kind.value}" + (f" {c.default_literal}" if c.default_literal else "")
            for c in step.constraints
        )
        return f"AddColumn {step.table}.{step.column.name} {_describe_type(step.column.data_type)}{extras}"
    if isinstance(step, DropColumnStep):
        return f"DropColumn {step.table}.{step.column}"
    if isinstance(step, ModifyColumnStep):
        operand = ""
        if step.action == "SET_TYPE" and step.new_type is not None:
            operand = f" {_describe_type(step.new_type)}"
        elif step.operand is not None:
            operand = f" {step.operand}"
        return f"ModifyColumn {step.table}.{step.column} {step.action}{operand}"
    if isinstance(step, RenameColumnStep):
        return f"RenameColumn {step.table}.{step.old_name} -> {step.new_name}"
    if isinstance(step, DropTableStep):
        return f"DropTable {step.table}"
    if isinstance(step, AddConstraintStep):
        con = step.constraint
        if con.kind in (ConstraintKind.NOT_NULL, ConstraintKind.DEFAULT):
            detail = f"{con.kind.value} ({','.join(con.columns)})"
        else:
            detail = render_constraint_clause(con)
        return f"AddConstraint {step.table}: {detail}"
    if isinstance(step, DropConstraintStep):
        return f"DropConstraint {step.table}.{step.constraint_name}"
    if isinstance(step, UpdateDataStep):
        payload = step.payload
        if isinstance(payload, ConcatPayload):
            joined = f"||'{payload.delimiter}'||".join(payload.sources)
            detail = f"{payload.target} = {joined}"
        elif isinstance(payload, FillNullsPayload):
            detail = f"{payload.column} = {payload.literal} WHERE {payload.column} IS NULL"
        else:
            detail = payload.text
        return f"UpdateData {step.table}: {detail}"
    if isinstance(step, CopyDataStep):
        return f"CopyData {step.source_table} -> {step.target_table}.{step.column} WHERE {step.condition}"
    if isinstance(step, VersionRecordStep):
        entry = step.entry
        return f"VersionRecord {entry.constraint_name} ({entry.constraint_type}) on {entry.table_name}"
    return repr(step)


def describe_plan(plan: Plan) -> str:
    header = f"{plan.request.kind.value} @ {plan.timestamp.isoformat()}"
    lines = [header] + [f"{i}. {describe_step(s)}" for i, s in enumerate(plan.steps, start=1)]
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Guard helpers

_SQL_KEYWORDS = {
    "WHERE", "AND", "OR", "NOT", "IS", "NULL", "SET", "IN", "LIKE", "BETWEEN",
    "CASE", "WHEN", "THEN", "ELSE", "END", "UPPER", "LOWER", "TRIM", "SUBSTR",
    "CONCAT", "NVL", "COALESCE", "TO_CHAR", "LENGTH", "ABS", "EXISTS", "SELECT",
    "FROM", "AS", "ON", "JOIN",
}

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_$#]*")
_STRING_RE = re.compile(r"'(?:[^']|'')*'")


def _condition_identifiers(text: str) -> set[str]:
    bare = _STRING_RE.sub(" ", text)
    return {tok.upper() for tok in _IDENT_RE.findall(bare)} - _SQL_KEYWORDS


def parse_join_condition(
    condition: str, source: Table, target: Table
) -> list[tuple[Column, Column]]:
    """Equality conjunctions pairing one source column with one target
    column; either side may be table-qualified.  The move-column guard and
    the executor share this so a condition that passes planning cannot fail
    resolution later."""

    def resolve(token: str) -> tuple[str, Column]:
        token = token.strip()
        if "." in token:
            qualifier, name = token.split(".", 1)
            if ident_eq(qualifier, source.name) and source.column(name) is not None:
                return "source", source.column(name)
            if ident_eq(qualifier, target.name) and target.column(name) is not None:
                return "target", target.column(name)
            raise RefactorError(f"cannot resolve {token} in migration condition")
        in_source = source.column(token)
        in_target = target.column(token)
        if in_source is not None and in_target is not None:
            raise RefactorError(f"ambiguous column {token} in migration condition")
        if in_source is not None:
            return "source", in_source
        if in_target is not None:
            return "target", in_target
        raise RefactorError(f"unknown column {token} in migration condition")

    pairs: list[tuple[Column, Column]] = []
    for clause in re.split(r"\bAND\b", condition, flags=re.IGNORECASE):
        clause = clause.strip()
        m = re.fullmatch(r"([A-Za-z0-9_$#.]+)\s*=\s*([A-Za-z0-9_$#.]+)", clause)
        if m is None:
            raise RefactorError(f"cannot evaluate migration condition in memory: {clause!r}")
        left = resolve(m.group(1))
        right = resolve(m.group(2))
        if {left[0], right[0]} != {"source", "target"}:
            raise RefactorError(f"migration condition must join source to target: {clause!r}")
        src = left[1] if left[0] == "source" else right[1]
        dst = left[1] if left[0] == "target" else right[1]
        pairs.append((src, dst))
    return pairs


def _row_count(data: "DataStore | None", table: str) -> int | None:
    if data is None:
        return None
    rows = data.table_rows(table)
    return None if rows is None else len(rows)


def _null_count(data: "DataStore | None", table: Table, column: str) -> int | None:
    if data is None:
        return None
    rows = data.table_rows(table.name)
    if rows is None:
        return None
    col = table.column(column)
    index = col.ordinal - 1
    return sum(1 for row in rows if row[index] is None)


def _single_column_constraints(table: Table, column: str) -> list[Constraint]:
    return [c for c in table.constraints if c.mentions(column) and len(c.columns) == 1]


def _multi_column_constraints(table: Table, column: str) -> list[Constraint]:
    return [c for c in table.constraints if c.mentions(column) and len(c.columns) > 1]


def _inbound_fk_guard(schema: Schema, table: Table, column: str | None) -> GuardResult:
    what = f"column {table.name}.{column}" if column else f"table {table.name}"
    inbound = [
        (con, owner)
        for con, owner in inbound_foreign_keys(schema, table.name, column)
        if not ident_eq(owner, table.name) or column is not None
    ]
    names = ", ".join(f"{con.name} on {owner}" for con, owner in inbound)
    return GuardResult(
        f"no inbound foreign key references {what}",
        not inbound,
        f"referenced by {names}" if inbound else "",
    )


def _multi_constraint_guard(table: Table, column: str) -> GuardResult:
    multi = _multi_column_constraints(table, column)
    names = ", ".join(c.name or "?" for c in multi)
    return GuardResult(
        f"column {column} is not part of a multi-column constraint",
        not multi,
        f"member of {names}" if multi else "",
    )


def _fk_resolution_guard(schema: Schema, constraints: list[Constraint]) -> GuardResult:
    fks = [c for c in constraints if c.kind is ConstraintKind.FOREIGN_KEY]
    unresolved = [c.name or "?" for c in fks if resolve_fk_key(schema, c) is None]
    return GuardResult(
        "affected foreign keys resolve to a target key",
        not unresolved,
        f"unresolved: {', '.join(unresolved)}" if unresolved else "",
    )


def _fail(results: list[GuardResult]) -> None:
    if any(not r.passed for r in results):
        raise GuardFailure(results)


def _drop_entry(schema: Schema, table: Table, con: Constraint, ts: datetime) -> VersionEntry:
    r_owner = r_name = None
    if con.kind is ConstraintKind.FOREIGN_KEY:
        key = resolve_fk_key(schema, con)
        r_owner = con.referenced_owner or schema.owner
        r_name = key.name if key is not None else None
    return VersionEntry(
        owner=schema.owner,
        constraint_name=con.name or "?",
        constraint_type=CONSTRAINT_TYPE_CODES[con.kind],
        table_name=table.name,
        new_modification_date=ts,
        r_owner=r_owner,
        r_constraint_name=r_name,
    )


def _drop_constraint_steps(
    schema: Schema, table: Table, constraints: list[Constraint], ts: datetime
) -> list[Step]:
    steps: list[Step] = []
    for con in constraints:
        steps.append(
            DropConstraintStep(
                table=table.name,
                constraint_name=con.name or "?",
                constraint_kind=con.kind,
                column=con.columns[0] if con.columns else None,
            )
        )
        steps.append(VersionRecordStep(_drop_entry(schema, table, con, ts)))
    return steps


def _concat_width(data_type: DataType) -> int:
    # Worst-case rendered width of a value when concatenated into text.
    if data_type.base is TypeBase.VARCHAR_TEXT:
        return data_type.length or 0
    if data_type.base is TypeBase.FIXED_NUMBER:
        return (data_type.precision + 2) if data_type.precision is not None else 40
    return 19


# ---------------------------------------------------------------------------
# Guard evaluation per request kind


def _guards_drop_column(schema: Schema, params: dict, data: "DataStore | None") -> list[GuardResult]:
    table = schema.require_table(params["table"])
    column = params["column"]
    if table.column(column) is None:
        raise ColumnNotFound(table.name, column)
    singles = _single_column_constraints(table, column)
    return [
        _inbound_fk_guard(schema, table, column),
        _multi_constraint_guard(table, column),
        _fk_resolution_guard(schema, singles),
    ]


def _guards_drop_table(schema: Schema, params: dict, data: "DataStore | None") -> list[GuardResult]:
    table = schema.require_table(params["table"])
    inbound = [
        (con, owner)
        for con, owner in inbound_foreign_keys(schema, table.name)
        if not ident_eq(owner, table.name)
    ]
    names = ", ".join(f"{con.name} on {owner}" for con, owner in inbound)
    return [
        GuardResult(
            f"no inbound foreign key references table {table.name}",
            not inbound,
            f"referenced by {names}" if inbound else "",
        ),
        _fk_resolution_guard(schema, list(table.constraints)),
    ]


def _guards_merge_columns(schema: Schema, params: dict, data: "DataStore | None") -> list[GuardResult]:
    table = schema.require_table(params["table"])
    columns: tuple[str, ...] = tuple(params["source_columns"])
    for name in columns:
        if table.column(name) is None:
            raise ColumnNotFound(table.name, name)
    results = [
        GuardResult(
            "at least two source columns",
            len(columns) >= 2,
            f"{len(columns)} given" if len(columns) < 2 else "",
        )
    ]
    seen: set[str] = set()
    duplicates: list[str] = []
    for name in columns:
        if name.upper() in seen:
            duplicates.append(name)
        seen.add(name.upper())
    results.append(
        GuardResult(
            "source columns are distinct",
            not duplicates,
            f"duplicate source column {duplicates[0]}" if duplicates else "",
        )
    )

    mode: MergeMode = params["mode"]
    if mode is MergeMode.CONCATENATE:
        delimiter = params.get("delimiter")
        results.append(
            GuardResult("concatenate requires a delimiter", delimiter is not None)
        )
        target = table.column(columns[0]) if columns else None
        results.append(
            GuardResult(
                "concatenate target is text-typed",
                target is not None and target.data_type.base is TypeBase.VARCHAR_TEXT,
                "" if target is None or target.data_type.base is TypeBase.VARCHAR_TEXT
                else f"{target.name} is {_describe_type(target.data_type)}",
            )
        )
    else:
        condition = (params.get("update_condition") or "").strip()
        results.append(GuardResult("merge requires an update condition", bool(condition)))
        if condition:
            unknown = sorted(
                ident
                for ident in _condition_identifiers(condition)
                if table.column(ident) is None
            )
            results.append(
                GuardResult(
                    "update condition references known columns",
                    not unknown,
                    f"unknown: {', '.join(unknown)}" if unknown else "",
                )
            )

    dropped: list[Constraint] = []
    for name in columns[1:]:
        results.append(_inbound_fk_guard(schema, table, name))
        results.append(_multi_constraint_guard(table, name))
        dropped.extend(_single_column_constraints(table, name))
    results.append(_fk_resolution_guard(schema, dropped))
    return results


def _guards_merge_tables(schema: Schema, params: dict, data: "DataStore | None") -> list[GuardResult]:
    target = schema.require_table(params["target_table"])
    source = schema.require_table(params["source_table"])
    columns: tuple[str, ...] = tuple(params["columns_to_move"])
    for name in columns:
        if source.column(name) is None:
            raise ColumnNotFound(source.name, name)

    results = [
        GuardResult("at least one column to move", bool(columns)),
    ]
    taken = [c for c in columns if target.column(c) is not None]
    results.append(
        GuardResult(
            f"moved columns are new to {target.name}",
            not taken,
            f"already present: {', '.join(taken)}" if taken else "",
        )
    )

    moved = {c.upper() for c in columns}
    imported = _imported_constraints(source, columns)
    spanning = [
        c.name or "?"
        for c in source.constraints
        if any(col.upper() in moved for col in c.columns)
        and not all(col.upper() in moved for col in c.columns)
    ]
    results.append(
        GuardResult(
            "moved columns' constraints are self-contained",
            not spanning,
            f"spans unmoved columns: {', '.join(spanning)}" if spanning else "",
        )
    )
    pk_import = any(c.kind is ConstraintKind.PRIMARY_KEY for c in imported)
    results.append(
        GuardResult(
            "target has no primary key when one is imported",
            not (pk_import and target.primary_key() is not None),
            "target already has primary key" if pk_import and target.primary_key() else "",
        )
    )
    results.append(_fk_resolution_guard(schema, imported))

    rows = _row_count(data, target.name)
    if rows:
        blocked = [
            c.columns[0]
            for c in imported
            if c.kind is ConstraintKind.NOT_NULL
            and not any(
                d.kind is ConstraintKind.DEFAULT and d.mentions(c.columns[0]) for d in imported
            )
        ]
        results.append(
            GuardResult(
                "imported NOT NULL columns are safe on a populated target",
                not blocked,
                f"target rows would violate NOT NULL on {', '.join(blocked)}" if blocked else "",
            )
        )
    return results


def _guards_move_column(schema: Schema, params: dict, data: "DataStore | None") -> list[GuardResult]:
    source = schema.require_table(params["source_table"])
    target = schema.require_table(params["target_table"])
    column = params["column"]
    if source.column(column) is None:
        raise ColumnNotFound(source.name, column)

    condition = (params.get("migration_condition") or "").strip()
    results = [
        GuardResult(
            "migration condition provided", bool(condition), "migration condition required" if not condition else ""
        )
    ]
    if condition:
        try:
            parse_join_condition(condition, source, target)
            results.append(GuardResult("migration condition joins source to target", True))
        except RefactorError as exc:
            results.append(
                GuardResult("migration condition joins source to target", False, str(exc))
            )
    results.append(
        GuardResult(
            f"column is new to {target.name}",
            target.column(column) is None,
            f"{column} already exists on {target.name}" if target.column(column) else "",
        )
    )
    results.append(_inbound_fk_guard(schema, source, column))
    results.append(_multi_constraint_guard(source, column))
    results.append(_fk_resolution_guard(schema, _single_column_constraints(source, column)))
    return results


def _guards_rename_column(schema: Schema, params: dict, data: "DataStore | None") -> list[GuardResult]:
    table = schema.require_table(params["table"])
    old, new = params["old_name"], params["new_name"]
    if table.column(old) is None:
        raise ColumnNotFound(table.name, old)
    return [
        GuardResult(
            "new name is free",
            table.column(new) is None or ident_eq(old, new),
            f"column {new} already exists" if table.column(new) and not ident_eq(old, new) else "",
        ),
        GuardResult(
            "new name is a legal identifier",
            bool(new) and _IDENT_RE.fullmatch(new) is not None,
            f"illegal identifier: {new!r}" if not new or _IDENT_RE.fullmatch(new) is None else "",
        ),
    ]


def _guards_drop_constraint(schema: Schema, params: dict, data: "DataStore | None") -> list[GuardResult]:
    table = schema.require_table(params["table"])
    name = params["constraint_name"]
    con = table.constraint(name)
    if con is None:
        raise ConstraintNotFound(table.name, name)
    dependents: list[str] = []
    if con.kind in (ConstraintKind.PRIMARY_KEY, ConstraintKind.UNIQUE):
        for tab in schema.tables:
            for fk in tab.constraints:
                if fk.kind is ConstraintKind.FOREIGN_KEY and resolve_fk_key(schema, fk) is con:
                    dependents.append(f"{fk.name} on {tab.name}")
    return [
        GuardResult(
            f"no foreign key depends on {con.name}",
            not dependents,
            f"depended on by {', '.join(dependents)}" if dependents else "",
        ),
        _fk_resolution_guard(schema, [con]),
    ]


def _guards_introduce_default(schema: Schema, params: dict, data: "DataStore | None") -> list[GuardResult]:
    table = schema.require_table(params["table"])
    column = params["column"]
    col = table.column(column)
    if col is None:
        raise ColumnNotFound(table.name, column)
    problem = literal_error(params["literal"], col.data_type)
    return [GuardResult("default literal fits the column type", problem is None, problem or "")]


def _guards_make_non_nullable(schema: Schema, params: dict, data: "DataStore | None") -> list[GuardResult]:
    table = schema.require_table(params["table"])
    column = params["column"]
    col = table.column(column)
    if col is None:
        raise ColumnNotFound(table.name, column)
    if not col.nullable:
        return [GuardResult("column already non-nullable", True, "no steps required")]

    results: list[GuardResult] = []
    fill = params.get("fill_value")
    nulls = _null_count(data, table, column)
    if nulls:
        results.append(
            GuardResult(
                "fill value provided for existing nulls",
                fill is not None,
                f"null rows present: {nulls}" if fill is None else "",
            )
        )
    if fill is not None:
        problem = literal_error(fill, col.data_type)
        results.append(GuardResult("fill literal fits the column type", problem is None, problem or ""))
    if not results:
        results.append(GuardResult("column can be made non-nullable", True))
    return results


def _guards_introduce_new_column(schema: Schema, params: dict, data: "DataStore | None") -> list[GuardResult]:
    table = schema.require_table(params["table"])
    column: Column = params["column"]
    results = [
        GuardResult(
            "column name is free",
            table.column(column.name) is None,
            f"{column.name} already exists" if table.column(column.name) else "",
        ),
        GuardResult(
            "column name is a legal identifier",
            bool(column.name) and _IDENT_RE.fullmatch(column.name) is not None,
        ),
    ]
    if column.default_value is not None:
        problem = literal_error(column.default_value, column.data_type)
        results.append(GuardResult("default literal fits the column type", problem is None, problem or ""))
    rows = _row_count(data, table.name)
    if not column.nullable and column.default_value is None and rows:
        results.append(
            GuardResult(
                "NOT NULL on a populated table requires a default",
                False,
                f"{table.name} holds {rows} rows",
            )
        )
    return results


_GUARDS = {
    RefactoringKind.DROP_COLUMN: _guards_drop_column,
    RefactoringKind.DROP_TABLE: _guards_drop_table,
    RefactoringKind.MERGE_COLUMNS: _guards_merge_columns,
    RefactoringKind.MERGE_TABLES: _guards_merge_tables,
    RefactoringKind.MOVE_COLUMN: _guards_move_column,
    RefactoringKind.RENAME_COLUMN: _guards_rename_column,
    RefactoringKind.DROP_CONSTRAINT: _guards_drop_constraint,
    RefactoringKind.INTRODUCE_DEFAULT_VALUE: _guards_introduce_default,
    RefactoringKind.MAKE_COLUMN_NON_NULLABLE: _guards_make_non_nullable,
    RefactoringKind.INTRODUCE_NEW_COLUMN: _guards_introduce_new_column,
}


def validate_guards(
    request: RefactoringRequest, schema: Schema, data: "DataStore | None" = None
) -> list[GuardResult]:
    """Evaluate every guard for a request; the full list is always returned,
    never cut short at the first failure.  Missing referents raise
    TableNotFound/ColumnNotFound/ConstraintNotFound instead."""
    return _GUARDS[request.kind](schema, request.params, data)


# ---------------------------------------------------------------------------
# Constraint import helper (merge_tables)


def _imported_constraints(source: Table, columns: tuple[str, ...]) -> list[Constraint]:
    moved = {c.upper() for c in columns}
    found: list[Constraint] = []
    for con in source.constraints:
        if con.columns and all(c.upper() in moved for c in con.columns):
            found.append(con)
    return found


def _import_entry(
    schema: Schema, source: Table, target: str, con: Constraint, ts: datetime
) -> VersionEntry:
    r_owner = r_name = None
    if con.kind is ConstraintKind.FOREIGN_KEY:
        key = resolve_fk_key(schema, con)
        r_owner = con.referenced_owner or schema.owner
        r_name = key.name if key is not None else None
    return VersionEntry(
        owner=schema.owner,
        constraint_name=con.name or "?",
        constraint_type=CONSTRAINT_TYPE_CODES[con.kind],
        table_name=source.name,
        new_modification_date=ts,
        r_owner=r_owner,
        r_constraint_name=r_name,
        new_constraint_name=con.name or "?",
        new_table_name=target,
    )


# ---------------------------------------------------------------------------
# Planners


def _start(
    kind: RefactoringKind,
    params: dict,
    schema: Schema,
    data: "DataStore | None",
    timestamp: datetime | None,
) -> tuple[RefactoringRequest, list[GuardResult], datetime]:
    request = RefactoringRequest(kind, params)
    results = validate_guards(request, schema, data)
    _fail(results)
    return request, results, timestamp or datetime.now()


def plan_drop_column(
    schema: Schema,
    table: str,
    column: str,
    backup: bool = False,
    *,
    timestamp: datetime | None = None,
    data: "DataStore | None" = None,
) -> Plan:
    """Drop a column after dropping the single-column constraints on it."""
    request, guards, ts = _start(
        RefactoringKind.DROP_COLUMN,
        {"table": table, "column": column, "backup": backup},
        schema,
        data,
        timestamp,
    )
    tab = schema.require_table(table)
    steps: list[Step] = [BackupStep(tab.name)] if backup else []
    steps += _drop_constraint_steps(schema, tab, _single_column_constraints(tab, column), ts)
    steps.append(DropColumnStep(tab.name, tab.column(column).name))
    return Plan(request, ts, tuple(steps), tuple(guards))


def plan_drop_table(
    schema: Schema,
    table: str,
    backup: bool = False,
    *,
    timestamp: datetime | None = None,
    data: "DataStore | None" = None,
) -> Plan:
    request, guards, ts = _start(
        RefactoringKind.DROP_TABLE, {"table": table, "backup": backup}, schema, data, timestamp
    )
    tab = schema.require_table(table)
    steps: list[Step] = [BackupStep(tab.name)] if backup else []
    steps.append(DropTableStep(tab.name))
    steps += [VersionRecordStep(_drop_entry(schema, tab, con, ts)) for con in tab.constraints]
    return Plan(request, ts, tuple(steps), tuple(guards))


def plan_merge_columns(
    schema: Schema,
    table: str,
    source_columns: list[str] | tuple[str, ...],
    mode: MergeMode,
    delimiter: str | None = None,
    update_condition: str | None = None,
    backup: bool = False,
    *,
    timestamp: datetime | None = None,
    data: "DataStore | None" = None,
) -> Plan:
    """Merge several columns of one table into the first listed column.

    CONCATENATE widens the target to the sum of the source widths plus the
    delimiters, joins the values, then drops the other columns.  MERGE runs
    the caller's update payload verbatim instead.  A backup always precedes
    the UPDATE, whatever the backup flag says.
    """
    request, guards, ts = _start(
        RefactoringKind.MERGE_COLUMNS,
        {
            "table": table,
            "source_columns": tuple(source_columns),
            "mode": mode,
            "delimiter": delimiter,
            "update_condition": update_condition,
            "backup": backup,
        },
        schema,
        data,
        timestamp,
    )
    tab = schema.require_table(table)
    columns = tuple(tab.column(c).name for c in source_columns)
    target = columns[0]

    steps: list[Step] = [BackupStep(tab.name)]
    if mode is MergeMode.CONCATENATE:
        width = sum(_concat_width(tab.column(c).data_type) for c in columns)
        width += (len(columns) - 1) * len(delimiter or "")
        steps.append(
            ModifyColumnStep(tab.name, target, "SET_TYPE", new_type=varchar(width))
        )
        steps.append(
            UpdateDataStep(tab.name, ConcatPayload(target, columns, delimiter or ""))
        )
    else:
        steps.append(UpdateDataStep(tab.name, RawUpdatePayload((update_condition or "").strip())))
    for name in columns[1:]:
        steps += _drop_constraint_steps(schema, tab, _single_column_constraints(tab, name), ts)
        steps.append(DropColumnStep(tab.name, name))
    return Plan(request, ts, tuple(steps), tuple(guards))


def plan_merge_tables(
    schema: Schema,
    target_table: str,
    source_table: str,
    columns_to_move: list[str] | tuple[str, ...],
    *,
    timestamp: datetime | None = None,
    data: "DataStore | None" = None,
) -> Plan:
    """Copy columns from a source table onto a target table.

    The source keeps its columns; imported constraint clauses are renamed
    with the plan timestamp so schema-wide constraint names stay unique, and
    each import is version-recorded.
    """
    request, guards, ts = _start(
        RefactoringKind.MERGE_TABLES,
        {
            "target_table": target_table,
            "source_table": source_table,
            "columns_to_move": tuple(columns_to_move),
        },
        schema,
        data,
        timestamp,
    )
    target = schema.require_table(target_table)
    source = schema.require_table(source_table)
    columns = tuple(source.column(c).name for c in columns_to_move)

    steps: list[Step] = [
        AddColumnStep(target.name, Column(source.column(c).name, source.column(c).data_type))
        for c in columns
    ]
    for con in _imported_constraints(source, columns):
        steps.append(
            AddConstraintStep(target.name, con, versioned_from=con.name)
        )
        steps.append(
            VersionRecordStep(_import_entry(schema, source, target.name, con, ts), version_new_name=True)
        )
    return Plan(request, ts, tuple(steps), tuple(guards))


def plan_move_column(
    schema: Schema,
    source_table: str,
    target_table: str,
    column: str,
    migration_condition: str,
    backup: bool = False,
    *,
    timestamp: datetime | None = None,
    data: "DataStore | None" = None,
) -> Plan:
    """Move a column to another table, migrating values under a join."""
    request, guards, ts = _start(
        RefactoringKind.MOVE_COLUMN,
        {
            "source_table": source_table,
            "target_table": target_table,
            "column": column,
            "migration_condition": migration_condition,
            "backup": backup,
        },
        schema,
        data,
        timestamp,
    )
    source = schema.require_table(source_table)
    target = schema.require_table(target_table)
    col = source.column(column)

    steps: list[Step] = [
        AddColumnStep(target.name, Column(col.name, col.data_type)),
        CopyDataStep(source.name, target.name, col.name, migration_condition.strip()),
    ]
    if backup:
        steps.append(BackupStep(source.name))
    steps += _drop_constraint_steps(schema, source, _single_column_constraints(source, col.name), ts)
    steps.append(DropColumnStep(source.name, col.name))
    return Plan(request, ts, tuple(steps), tuple(guards))


def plan_rename_column(
    schema: Schema,
    table: str,
    old_name: str,
    new_name: str,
    *,
    timestamp: datetime | None = None,
    data: "DataStore | None" = None,
) -> Plan:
    """Rename a column; every constraint whose definition mentions it is
    version-recorded with its new definition."""
    request, guards, ts = _start(
        RefactoringKind.RENAME_COLUMN,
        {"table": table, "old_name": old_name, "new_name": new_name},
        schema,
        data,
        timestamp,
    )
    tab = schema.require_table(table)
    steps: list[Step] = [RenameColumnStep(tab.name, tab.column(old_name).name, new_name.upper())]
    for con, owner in dependent_constraints(schema, tab.name, old_name):
        steps.append(
            VersionRecordStep(
                VersionEntry(
                    owner=schema.owner,
                    constraint_name=con.name or "?",
                    constraint_type=CONSTRAINT_TYPE_CODES[con.kind],
                    table_name=owner,
                    new_modification_date=ts,
                    r_owner=(con.referenced_owner or schema.owner)
                    if con.kind is ConstraintKind.FOREIGN_KEY
                    else None,
                    r_constraint_name=(
                        (resolve_fk_key(schema, con) or con).name
                        if con.kind is ConstraintKind.FOREIGN_KEY
                        else None
                    ),
                )
            )
        )
    return Plan(request, ts, tuple(steps), tuple(guards))


def plan_drop_constraint(
    schema: Schema,
    table: str,
    constraint_name: str,
    backup: bool = False,
    *,
    timestamp: datetime | None = None,
    data: "DataStore | None" = None,
) -> Plan:
    request, guards, ts = _start(
        RefactoringKind.DROP_CONSTRAINT,
        {"table": table, "constraint_name": constraint_name, "backup": backup},
        schema,
        data,
        timestamp,
    )
    tab = schema.require_table(table)
    con = tab.constraint(constraint_name)
    steps: list[Step] = [BackupStep(tab.name)] if backup else []
    steps += _drop_constraint_steps(schema, tab, [con], ts)
    return Plan(request, ts, tuple(steps), tuple(guards))


def plan_introduce_default_value(
    schema: Schema,
    table: str,
    column: str,
    literal: str,
    *,
    timestamp: datetime | None = None,
    data: "DataStore | None" = None,
) -> Plan:
    """Give a column a DEFAULT, replacing any default already declared."""
    request, guards, ts = _start(
        RefactoringKind.INTRODUCE_DEFAULT_VALUE,
        {"table": table, "column": column, "literal": literal},
        schema,
        data,
        timestamp,
    )
    tab = schema.require_table(table)
    col = tab.column(column)
    existing = [
        c
        for c in tab.constraints
        if c.kind is ConstraintKind.DEFAULT and c.mentions(col.name)
    ]
    steps: list[Step] = _drop_constraint_steps(schema, tab, existing, ts)
    remaining = len(tab.constraints) - len(existing)
    new_name = synthetic_name(tab.name, ConstraintKind.DEFAULT, remaining + 1)
    steps.append(
        ModifyColumnStep(tab.name, col.name, "SET_DEFAULT", operand=literal.strip(), constraint_name=new_name)
    )
    steps.append(
        VersionRecordStep(
            VersionEntry(
                owner=schema.owner,
                constraint_name=new_name,
                constraint_type=CONSTRAINT_TYPE_CODES[ConstraintKind.DEFAULT],
                table_name=tab.name,
                new_modification_date=ts,
            )
        )
    )
    return Plan(request, ts, tuple(steps), tuple(guards))


def plan_make_column_non_nullable(
    schema: Schema,
    table: str,
    column: str,
    fill_value: str | None = None,
    data: "DataStore | None" = None,
    *,
    timestamp: datetime | None = None,
) -> Plan:
    """Add NOT NULL to a column, filling existing nulls first when a fill
    value is supplied.  Already non-nullable columns yield an empty plan
    with a warning guard."""
    request = RefactoringRequest(
        RefactoringKind.MAKE_COLUMN_NON_NULLABLE,
        {"table": table, "column": column, "fill_value": fill_value},
    )
    guards = validate_guards(request, schema, data)
    _fail(guards)
    ts = timestamp or datetime.now()
    tab = schema.require_table(table)
    col = tab.column(column)
    if not col.nullable:
        return Plan(request, ts, (), tuple(guards))

    steps: list[Step] = []
    nulls = _null_count(data, tab, col.name)
    if fill_value is not None and (nulls is None or nulls > 0):
        steps.append(BackupStep(tab.name))
        steps.append(UpdateDataStep(tab.name, FillNullsPayload(col.name, fill_value.strip())))
    new_name = synthetic_name(tab.name, ConstraintKind.NOT_NULL, len(tab.constraints) + 1)
    steps.append(ModifyColumnStep(tab.name, col.name, "SET_NOT_NULL", constraint_name=new_name))
    steps.append(
        VersionRecordStep(
            VersionEntry(
                owner=schema.owner,
                constraint_name=new_name,
                constraint_type=CONSTRAINT_TYPE_CODES[ConstraintKind.NOT_NULL],
                table_name=tab.name,
                new_modification_date=ts,
            )
        )
    )
    return Plan(request, ts, tuple(steps), tuple(guards))


def plan_introduce_new_column(
    schema: Schema,
    table: str,
    column: Column,
    *,
    timestamp: datetime | None = None,
    data: "DataStore | None" = None,
) -> Plan:
    """Add a new column; its NOT NULL/DEFAULT intents ride on the AddColumn
    step and are version-recorded as created constraints."""
    request, guards, ts = _start(
        RefactoringKind.INTRODUCE_NEW_COLUMN,
        {"table": table, "column": column},
        schema,
        data,
        timestamp,
    )
    tab = schema.require_table(table)
    name = column.name.upper()

    attached: list[Constraint] = []
    ordinal = len(tab.constraints) + 1
    if column.default_value is not None:
        attached.append(
            Constraint(
                synthetic_name(tab.name, ConstraintKind.DEFAULT, ordinal),
                ConstraintKind.DEFAULT,
                (name,),
                default_literal=column.default_value,
                level=ConstraintLevel.COLUMN_LEVEL,
                is_synthetic=True,
            )
        )
        ordinal += 1
    if not column.nullable:
        attached.append(
            Constraint(
                synthetic_name(tab.name, ConstraintKind.NOT_NULL, ordinal),
                ConstraintKind.NOT_NULL,
                (name,),
                level=ConstraintLevel.COLUMN_LEVEL,
                is_synthetic=True,
            )
        )

    steps: list[Step] = [
        AddColumnStep(
            tab.name,
            Column(name, column.data_type, nullable=column.nullable, default_value=column.default_value),
            tuple(attached),
        )
    ]
    for con in attached:
        steps.append(
            VersionRecordStep(
                VersionEntry(
                    owner=schema.owner,
                    constraint_name=con.name or "?",
                    constraint_type=CONSTRAINT_TYPE_CODES[con.kind],
                    table_name=tab.name,
                    new_modification_date=ts,
                )
            )
        )
    return Plan(request, ts, tuple(steps), tuple(guards))


_PLANNERS = {
    RefactoringKind.DROP_COLUMN: lambda s, p, **kw: plan_drop_column(
        s, p["table"], p["column"], p.get("backup", False), **kw
    ),
    RefactoringKind.DROP_TABLE: lambda s, p, **kw: plan_drop_table(
        s, p["table"], p.get("backup", False), **kw
    ),
    RefactoringKind.MERGE_COLUMNS: lambda s, p, **kw: plan_merge_columns(
        s,
        p["table"],
        p["source_columns"],
        p["mode"],
        p.get("delimiter"),
        p.get("update_condition"),
        p.get("backup", False),
        **kw,
    ),
    RefactoringKind.MERGE_TABLES: lambda s, p, **kw: plan_merge_tables(
        s, p["target_table"], p["source_table"], p["columns_to_move"], **kw
    ),
    RefactoringKind.MOVE_COLUMN: lambda s, p, **kw: plan_move_column(
        s,
        p["source_table"],
        p["target_table"],
        p["column"],
        p["migration_condition"],
        p.get("backup", False),
        **kw,
    ),
    RefactoringKind.RENAME_COLUMN: lambda s, p, **kw: plan_rename_column(
        s, p["table"], p["old_name"], p["new_name"], **kw
    ),
    RefactoringKind.DROP_CONSTRAINT: lambda s, p, **kw: plan_drop_constraint(
        s, p["table"], p["constraint_name"], p.get("backup", False), **kw
    ),
    RefactoringKind.INTRODUCE_DEFAULT_VALUE: lambda s, p, **kw: plan_introduce_default_value(
        s, p["table"], p["column"], p["literal"], **kw
    ),
    RefactoringKind.MAKE_COLUMN_NON_NULLABLE: lambda s, p, **kw: plan_make_column_non_nullable(
        s, p["table"], p["column"], p.get("fill_value"), kw.pop("data", None), **kw
    ),
    RefactoringKind.INTRODUCE_NEW_COLUMN: lambda s, p, **kw: plan_introduce_new_column(
        s, p["table"], p["column"], **kw
    ),
}


def plan_request(
    request: RefactoringRequest,
    schema: Schema,
    *,
    timestamp: datetime | None = None,
    data: "DataStore | None" = None,
) -> Plan:
    """Plan any catalog request from its parameter mapping."""
    return _PLANNERS[request.kind](schema, request.params, timestamp=timestamp, data=data)
