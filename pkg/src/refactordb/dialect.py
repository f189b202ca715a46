"""SQL dialect abstraction.

Refactoring plans are dialect-neutral; this module is the single variation
point that turns a bound plan step into concrete DDL/DML text.  Shared
statement shapes live in :func:`emit_step`; the pieces that genuinely differ
between engines (type spellings, ADD/MODIFY column syntax, date literals,
identifier length) are template methods on :class:`Dialect`.
"""

from __future__ import annotations

import hashlib
from abc import ABC, abstractmethod
from datetime import datetime
from typing import TYPE_CHECKING, Any

from .model import (
    ConstraintKind,
    DataType,
    RefactorError,
    TypeBase,
    render_constraint_clause,
)

if TYPE_CHECKING:  # plan steps are duck-typed here to keep the layering acyclic
    from .refactorings import Step


class UnsupportedType(RefactorError):
    pass


class UnsupportedStep(RefactorError):
    pass


class Dialect(ABC):
    """One target SQL engine family."""

    name: str
    max_identifier_length: int

    @abstractmethod
    def spell_type(self, data_type: DataType) -> str:
        """Render a model data type in this dialect's keywords."""

    @abstractmethod
    def add_column_sql(self, table: str, column_def: str) -> str:
        ...

    @abstractmethod
    def modify_column_sql(self, table: str, column: str, action: str, operand: str | None) -> str:
        """One of SET_TYPE, SET_NOT_NULL, DROP_NOT_NULL, SET_DEFAULT, DROP_DEFAULT."""

    @abstractmethod
    def date_literal(self, moment: datetime) -> str:
        ...


class OracleLikeDialect(Dialect):
    name = "oraclelike"
    max_identifier_length = 30

    def spell_type(self, data_type: DataType) -> str:
        if data_type.base is TypeBase.VARCHAR_TEXT:
            if data_type.length is None:
                raise UnsupportedType("text type without a length")
            return f"VARCHAR2({data_type.length})"
        if data_type.base is TypeBase.FIXED_NUMBER:
            if data_type.precision is None:
                return "NUMBER"
            if data_type.scale is None:
                return f"NUMBER({data_type.precision})"
            return f"NUMBER({data_type.precision},{data_type.scale})"
        return "DATE"

    def add_column_sql(self, table: str, column_def: str) -> str:
        return f"ALTER TABLE {table} ADD {column_def}"

    def modify_column_sql(self, table: str, column: str, action: str, operand: str | None) -> str:
        forms = {
            "SET_TYPE": f"MODIFY {column} {operand}",
            "SET_NOT_NULL": f"MODIFY {column} NOT NULL",
            "DROP_NOT_NULL": f"MODIFY {column} NULL",
            "SET_DEFAULT": f"MODIFY {column} DEFAULT {operand}",
            "DROP_DEFAULT": f"MODIFY {column} DEFAULT NULL",
        }
        return f"ALTER TABLE {table} {forms[action]}"

    def date_literal(self, moment: datetime) -> str:
        stamp = moment.strftime("%Y-%m-%d %H:%M:%S")
        return f"TO_DATE('{stamp}','YYYY-MM-DD HH24:MI:SS')"


class AnsiDialect(Dialect):
    name = "ansi"
    max_identifier_length = 128

    def spell_type(self, data_type: DataType) -> str:
        if data_type.base is TypeBase.VARCHAR_TEXT:
            if data_type.length is None:
                raise UnsupportedType("text type without a length")
            return f"VARCHAR({data_type.length})"
        if data_type.base is TypeBase.FIXED_NUMBER:
            if data_type.precision is None:
                return "NUMERIC"
            if data_type.scale is None:
                return f"NUMERIC({data_type.precision})"
            return f"NUMERIC({data_type.precision},{data_type.scale})"
        return "DATE"

    def add_column_sql(self, table: str, column_def: str) -> str:
        return f"ALTER TABLE {table} ADD COLUMN {column_def}"

    def modify_column_sql(self, table: str, column: str, action: str, operand: str | None) -> str:
        forms = {
            "SET_TYPE": f"SET DATA TYPE {operand}",
            "SET_NOT_NULL": "SET NOT NULL",
            "DROP_NOT_NULL": "DROP NOT NULL",
            "SET_DEFAULT": f"SET DEFAULT {operand}",
            "DROP_DEFAULT": "DROP DEFAULT",
        }
        return f"ALTER TABLE {table} ALTER COLUMN {column} {forms[action]}"

    def date_literal(self, moment: datetime) -> str:
        return f"TIMESTAMP '{moment.strftime('%Y-%m-%d %H:%M:%S')}'"


ORACLELIKE = OracleLikeDialect()
ANSI = AnsiDialect()
DIALECTS: dict[str, Dialect] = {d.name: d for d in (ORACLELIKE, ANSI)}


def map_type(data_type: DataType, dialect: Dialect) -> str:
    return dialect.spell_type(data_type)


_BASE36 = "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ"


def _base36_hash(name: str, width: int = 5) -> str:
    value = int.from_bytes(hashlib.sha1(name.encode("utf-8")).digest()[:8], "big")
    value %= len(_BASE36) ** width
    digits = []
    for _ in range(width):
        value, rem = divmod(value, len(_BASE36))
        digits.append(_BASE36[rem])
    return "".join(reversed(digits))


def enforce_identifier(name: str, dialect: Dialect) -> str:
    """Shorten a too-long identifier deterministically.

    Names within the dialect limit pass through unchanged; longer names keep
    a (limit-6)-character prefix followed by ``_`` and a 5-character base-36
    hash of the full name, so the result is exactly the limit and distinct
    inputs stay distinct at desk scale.  Idempotent by construction.
    """
    if len(name) <= dialect.max_identifier_length:
        return name
    prefix = name[: dialect.max_identifier_length - 6]
    return f"{prefix}_{_base36_hash(name)}"


def sql_string(value: str) -> str:
    return "'" + value.replace("'", "''") + "'"


def render_column_def(
    name: str,
    data_type: DataType,
    dialect: Dialect,
    *,
    default: str | None = None,
    not_null: bool = False,
    not_null_constraint: str | None = None,
) -> str:
    """Canonical column definition text: NAME TYPE [DEFAULT lit] [NOT NULL],
    with an explicit inline constraint name when one was declared."""
    parts = [name, map_type(data_type, dialect)]
    if default is not None:
        parts += ["DEFAULT", default]
    if not_null:
        if not_null_constraint is not None:
            parts += ["CONSTRAINT", not_null_constraint]
        parts.append("NOT NULL")
    return " ".join(parts)


def _column_def_for_step(step: Any, dialect: Dialect) -> str:
    not_null = any(c.kind is ConstraintKind.NOT_NULL for c in step.constraints)
    default = next(
        (c.default_literal for c in step.constraints if c.kind is ConstraintKind.DEFAULT),
        None,
    )
    return render_column_def(
        step.column.name, step.column.data_type, dialect, default=default, not_null=not_null
    )


def _concat_expression(sources: tuple[str, ...], delimiter: str) -> str:
    pieces: list[str] = []
    for col in sources:
        if pieces and delimiter:
            pieces.append(sql_string(delimiter))
        pieces.append(col)
    return "||".join(pieces)


def _emit_update(step: Any, dialect: Dialect) -> str:
    payload = step.payload
    if payload.kind == "CONCAT":
        expr = _concat_expression(payload.sources, payload.delimiter)
        return f"UPDATE {step.table} SET {payload.target} = {expr}"
    if payload.kind == "FILL_NULLS":
        return (
            f"UPDATE {step.table} SET {payload.column} = {payload.literal} "
            f"WHERE {payload.column} IS NULL"
        )
    return f"UPDATE {step.table} SET {payload.text}"


def _emit_version_record(step: Any, dialect: Dialect) -> str:
    entry = step.entry
    fields = (
        sql_string(entry.owner),
        sql_string(entry.constraint_name),
        sql_string(entry.constraint_type),
        sql_string(entry.table_name),
        sql_string(entry.r_owner) if entry.r_owner else "NULL",
        sql_string(entry.r_constraint_name) if entry.r_constraint_name else "NULL",
        dialect.date_literal(entry.new_modification_date),
        sql_string(entry.new_constraint_name) if entry.new_constraint_name else "NULL",
        sql_string(entry.new_table_name) if entry.new_table_name else "NULL",
    )
    return (
        "INSERT INTO NOVCODE_CONSTRAINTS_MODIFIED "
        "(OWNER,CONSTRAINT_NAME,CONSTRAINT_TYPE,TABLE_NAME,R_OWNER,R_CONSTRAINT_NAME,"
        "NEW_MODIFICATION_DATE,NEW_CONSTRAINT_NAME,NEW_TABLE_NAME) "
        f"VALUES ({','.join(fields)})"
    )


def _emit_drop_constraint(step: Any, dialect: Dialect) -> str:
    if step.constraint_kind is ConstraintKind.NOT_NULL:
        return dialect.modify_column_sql(step.table, step.column, "DROP_NOT_NULL", None)
    if step.constraint_kind is ConstraintKind.DEFAULT:
        return dialect.modify_column_sql(step.table, step.column, "DROP_DEFAULT", None)
    return f"ALTER TABLE {step.table} DROP CONSTRAINT {step.constraint_name}"


def _emit_add_constraint(step: Any, dialect: Dialect) -> str:
    con = step.constraint
    if con.kind is ConstraintKind.NOT_NULL:
        return dialect.modify_column_sql(step.table, con.columns[0], "SET_NOT_NULL", None)
    if con.kind is ConstraintKind.DEFAULT:
        return dialect.modify_column_sql(step.table, con.columns[0], "SET_DEFAULT", con.default_literal)
    return f"ALTER TABLE {step.table} ADD {render_constraint_clause(con)}"


def emit_step(step: "Step", dialect: Dialect) -> str:
    """SQL text for one fully bound plan step (no trailing semicolon)."""
    kind = step.kind
    if kind == "Backup":
        return f"CREATE TABLE {step.backup_name} AS SELECT * FROM {step.table}"
    if kind == "AddColumn":
        return dialect.add_column_sql(step.table, _column_def_for_step(step, dialect))
    if kind == "DropColumn":
        return f"ALTER TABLE {step.table} DROP COLUMN {step.column}"
    if kind == "ModifyColumn":
        operand = step.operand
        if step.action == "SET_TYPE":
            operand = map_type(step.new_type, dialect)
        return dialect.modify_column_sql(step.table, step.column, step.action, operand)
    if kind == "RenameColumn":
        return f"ALTER TABLE {step.table} RENAME COLUMN {step.old_name} TO {step.new_name}"
    if kind == "DropTable":
        return f"DROP TABLE {step.table}"
    if kind == "AddConstraint":
        return _emit_add_constraint(step, dialect)
    if kind == "DropConstraint":
        return _emit_drop_constraint(step, dialect)
    if kind == "UpdateData":
        return _emit_update(step, dialect)
    if kind == "CopyData":
        return (
            f"UPDATE {step.target_table} SET {step.column} = "
            f"(SELECT s.{step.column} FROM {step.source_table} s WHERE {step.condition})"
        )
    if kind == "VersionRecord":
        return _emit_version_record(step, dialect)
    raise UnsupportedStep(f"no emission rule for step kind {kind!r}")
