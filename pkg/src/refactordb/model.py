"""Canonical in-memory model for relational schemas.

Tables, columns, data types and constraints are immutable values; every
refactoring produces new objects instead of mutating shared state, so model
values can be handed between planner, executor and display code freely.

NOT NULL and DEFAULT are modeled as single-column constraints rather than
column flags.  ``Column.nullable`` and ``Column.default_value`` are derived
views kept consistent by :func:`build_table`; a column is also non-nullable
when it belongs to the table's primary key.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from datetime import date, datetime
from decimal import Decimal, InvalidOperation
from enum import Enum


class RefactorError(Exception):
    """Base class for every error raised by this package."""


class TableNotFound(RefactorError):
    def __init__(self, name: str) -> None:
        super().__init__(f"table not found: {name}")
        self.name = name


class ColumnNotFound(RefactorError):
    def __init__(self, table: str, column: str) -> None:
        super().__init__(f"column not found: {table}.{column}")
        self.table = table
        self.column = column


class ConstraintNotFound(RefactorError):
    def __init__(self, table: str, constraint: str) -> None:
        super().__init__(f"constraint not found on {table}: {constraint}")
        self.table = table
        self.constraint = constraint


class TypeBase(Enum):
    VARCHAR_TEXT = "VARCHAR_TEXT"
    FIXED_NUMBER = "FIXED_NUMBER"
    DATE = "DATE"


class ConstraintKind(Enum):
    PRIMARY_KEY = "PRIMARY_KEY"
    UNIQUE = "UNIQUE"
    FOREIGN_KEY = "FOREIGN_KEY"
    CHECK = "CHECK"
    NOT_NULL = "NOT_NULL"
    DEFAULT = "DEFAULT"


class ConstraintLevel(Enum):
    COLUMN_LEVEL = "COLUMN_LEVEL"
    TABLE_LEVEL = "TABLE_LEVEL"


#: Short kind tokens used in version entries (one character, catalog style).
#: NOT NULL and DEFAULT share the check/column-rule letter.
CONSTRAINT_TYPE_CODES = {
    ConstraintKind.PRIMARY_KEY: "P",
    ConstraintKind.FOREIGN_KEY: "R",
    ConstraintKind.UNIQUE: "U",
    ConstraintKind.CHECK: "C",
    ConstraintKind.NOT_NULL: "C",
    ConstraintKind.DEFAULT: "C",
}


def ident_eq(a: str, b: str) -> bool:
    """Case-insensitive identifier comparison on the canonical form."""
    return a.upper() == b.upper()


@dataclass(frozen=True, slots=True)
class DataType:
    """A column type: text with a length, fixed-point number, or date.

    ``length`` applies to VARCHAR_TEXT, ``precision``/``scale`` to
    FIXED_NUMBER (both optional, matching NUMBER without a size), and DATE
    carries neither.
    """

    base: TypeBase
    length: int | None = None
    precision: int | None = None
    scale: int | None = None


def varchar(length: int) -> DataType:
    return DataType(TypeBase.VARCHAR_TEXT, length=length)


def number(precision: int | None = None, scale: int | None = None) -> DataType:
    return DataType(TypeBase.FIXED_NUMBER, precision=precision, scale=scale)


def date_type() -> DataType:
    return DataType(TypeBase.DATE)


@dataclass(frozen=True, slots=True)
class Column:
    """One table column.  ``nullable`` and ``default_value`` are derived from
    the owning table's constraints by :func:`build_table`."""

    name: str
    data_type: DataType
    nullable: bool = True
    default_value: str | None = None
    ordinal: int = 0


@dataclass(frozen=True, slots=True)
class Constraint:
    """A named constraint.  Unnamed constraints receive a synthetic
    SYS_<table>_<kind>_<ordinal> name at build time and are flagged."""

    name: str | None
    kind: ConstraintKind
    columns: tuple[str, ...] = ()
    referenced_owner: str | None = None
    referenced_table: str | None = None
    # Empty for a REFERENCES clause without a column list; resolution then
    # falls to the target's primary key, else a unique key of equal arity.
    referenced_columns: tuple[str, ...] = ()
    check_expression: str | None = None
    default_literal: str | None = None
    level: ConstraintLevel = ConstraintLevel.TABLE_LEVEL
    is_synthetic: bool = False

    def mentions(self, column: str) -> bool:
        return any(ident_eq(c, column) for c in self.columns)


@dataclass(frozen=True, slots=True)
class Table:
    name: str
    columns: tuple[Column, ...] = ()
    constraints: tuple[Constraint, ...] = ()

    def column(self, name: str) -> Column | None:
        for col in self.columns:
            if ident_eq(col.name, name):
                return col
        return None

    def constraint(self, name: str) -> Constraint | None:
        for con in self.constraints:
            if con.name is not None and ident_eq(con.name, name):
                return con
        return None

    def primary_key(self) -> Constraint | None:
        for con in self.constraints:
            if con.kind is ConstraintKind.PRIMARY_KEY:
                return con
        return None

    def constraints_on_column(self, column: str) -> tuple[Constraint, ...]:
        return tuple(c for c in self.constraints if c.mentions(column))


@dataclass(frozen=True, slots=True)
class Schema:
    """All tables owned by one schema owner; the refactoring scope."""

    owner: str
    tables: tuple[Table, ...] = ()
    # Source script path per table, for diagnostics only.
    sources: tuple[tuple[str, str], ...] = field(default=(), compare=False)

    def table(self, name: str) -> Table | None:
        for tab in self.tables:
            if ident_eq(tab.name, name):
                return tab
        return None

    def require_table(self, name: str) -> Table:
        tab = self.table(name)
        if tab is None:
            raise TableNotFound(name)
        return tab

    def with_table(self, table: Table) -> Schema:
        return replace(self, tables=self.tables + (table,))

    def without_table(self, name: str) -> Schema:
        return replace(
            self, tables=tuple(t for t in self.tables if not ident_eq(t.name, name))
        )

    def replace_table(self, table: Table) -> Schema:
        return replace(
            self,
            tables=tuple(
                table if ident_eq(t.name, table.name) else t for t in self.tables
            ),
        )


def synthetic_name(table: str, kind: ConstraintKind, ordinal: int) -> str:
    return f"SYS_{table.upper()}_{kind.value}_{ordinal}"


def build_table(
    name: str,
    columns: list[Column] | tuple[Column, ...],
    constraints: list[Constraint] | tuple[Constraint, ...] = (),
) -> Table:
    """Normalizing table factory.

    Assigns contiguous 1..n ordinals in listed column order, gives unnamed
    constraints synthetic names, and recomputes each column's ``nullable``
    and ``default_value`` views from the constraint list.
    """
    named: list[Constraint] = []
    for i, con in enumerate(constraints, start=1):
        if con.name is None:
            con = replace(con, name=synthetic_name(name, con.kind, i), is_synthetic=True)
        named.append(con)

    pk_columns: set[str] = set()
    not_null: set[str] = set()
    defaults: dict[str, str] = {}
    for con in named:
        if con.kind is ConstraintKind.PRIMARY_KEY:
            pk_columns.update(c.upper() for c in con.columns)
        elif con.kind is ConstraintKind.NOT_NULL:
            not_null.update(c.upper() for c in con.columns)
        elif con.kind is ConstraintKind.DEFAULT and con.columns:
            defaults[con.columns[0].upper()] = con.default_literal or ""

    fixed: list[Column] = []
    for ordinal, col in enumerate(columns, start=1):
        key = col.name.upper()
        fixed.append(
            replace(
                col,
                ordinal=ordinal,
                nullable=key not in pk_columns and key not in not_null,
                default_value=defaults.get(key),
            )
        )
    return Table(name=name, columns=tuple(fixed), constraints=tuple(named))


def find_column(schema: Schema, table: str, column: str) -> Column:
    tab = schema.require_table(table)
    col = tab.column(column)
    if col is None:
        raise ColumnNotFound(tab.name, column)
    return col


def resolve_fk_columns(schema: Schema, fk: Constraint) -> tuple[str, ...] | None:
    """Referenced columns of a foreign key, resolving an omitted column list
    to the target's primary key, else a unique key matching the FK's arity.
    Returns None when no key resolves."""
    if fk.kind is not ConstraintKind.FOREIGN_KEY or fk.referenced_table is None:
        return None
    if fk.referenced_columns:
        return fk.referenced_columns
    target = schema.table(fk.referenced_table)
    if target is None:
        return None
    pk = target.primary_key()
    if pk is not None and len(pk.columns) == len(fk.columns):
        return pk.columns
    for con in target.constraints:
        if con.kind is ConstraintKind.UNIQUE and len(con.columns) == len(fk.columns):
            return con.columns
    return None


def resolve_fk_key(schema: Schema, fk: Constraint) -> Constraint | None:
    """The PRIMARY KEY or UNIQUE constraint a foreign key points at."""
    referenced = resolve_fk_columns(schema, fk)
    if referenced is None or fk.referenced_table is None:
        return None
    target = schema.table(fk.referenced_table)
    if target is None:
        return None
    wanted = tuple(c.upper() for c in referenced)
    for con in target.constraints:
        if con.kind in (ConstraintKind.PRIMARY_KEY, ConstraintKind.UNIQUE):
            if tuple(c.upper() for c in con.columns) == wanted:
                return con
    return None


def inbound_foreign_keys(
    schema: Schema, table: str, column: str | None = None
) -> list[tuple[Constraint, str]]:
    """Foreign keys anywhere in the schema that reference ``table`` (and,
    when given, whose resolved referenced columns include ``column``)."""
    found: list[tuple[Constraint, str]] = []
    for tab in schema.tables:
        for con in tab.constraints:
            if con.kind is not ConstraintKind.FOREIGN_KEY:
                continue
            if con.referenced_table is None or not ident_eq(con.referenced_table, table):
                continue
            if column is not None:
                resolved = resolve_fk_columns(schema, con) or ()
                if not any(ident_eq(c, column) for c in resolved):
                    continue
            found.append((con, tab.name))
    return found


def dependent_constraints(
    schema: Schema, table: str, column: str | None = None
) -> list[tuple[Constraint, str]]:
    """Every constraint that depends on a table or on one of its columns,
    paired with the name of the table that declares it.  Includes inbound
    foreign keys declared on other tables."""
    tab = schema.require_table(table)
    if column is not None and tab.column(column) is None:
        raise ColumnNotFound(tab.name, column)

    found: list[tuple[Constraint, str]] = []
    for con in tab.constraints:
        if column is None or con.mentions(column):
            found.append((con, tab.name))
    for con, owner in inbound_foreign_keys(schema, table, column):
        if not any(existing is con for existing, _ in found):
            found.append((con, owner))
    return found


_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_$#]*")


def expression_columns(expression: str, table_columns: list[str] | tuple[str, ...]) -> tuple[str, ...]:
    """Column names referenced by a CHECK expression, by identifier scan."""
    mentioned = {tok.upper() for tok in _IDENT_RE.findall(expression)}
    return tuple(c for c in table_columns if c.upper() in mentioned)


def unquote_literal(literal: str) -> str | None:
    """Contents of a single-quoted SQL string literal, or None."""
    text = literal.strip()
    if len(text) >= 2 and text.startswith("'") and text.endswith("'"):
        return text[1:-1].replace("''", "'")
    return None


def literal_error(literal: str, data_type: DataType) -> str | None:
    """Why ``literal`` cannot serve as a default/fill for ``data_type``;
    None when it fits."""
    text = literal.strip()
    if not text:
        return "empty literal"
    if data_type.base is TypeBase.FIXED_NUMBER:
        if unquote_literal(text) is not None:
            return "quoted text literal for a numeric column"
        try:
            value = Decimal(text)
        except InvalidOperation:
            return f"not a numeric literal: {literal}"
        digits = value.as_tuple()
        scale = data_type.scale or 0
        fractional = max(-digits.exponent, 0)
        integral = len(digits.digits) - fractional
        if fractional > scale:
            return f"scale overflow: {literal} has {fractional} decimal places, scale is {scale}"
        if data_type.precision is not None and max(integral, 0) > data_type.precision - scale:
            return (
                f"precision overflow: {literal} needs {max(integral, 0)} integer digits, "
                f"{data_type.precision - scale} available"
            )
        return None
    if data_type.base is TypeBase.VARCHAR_TEXT:
        content = unquote_literal(text)
        if content is None:
            content = text
        if data_type.length is not None and len(content) > data_type.length:
            return f"length overflow: {len(content)} characters over VARCHAR({data_type.length})"
        return None
    # DATE: accept a quoted ISO date or date-time, with optional DATE keyword.
    if text.upper().startswith("DATE"):
        text = text[4:].strip()
    content = unquote_literal(text)
    if content is None:
        return f"date literal must be quoted: {literal}"
    try:
        datetime.fromisoformat(content)
    except ValueError:
        return f"not an ISO date literal: {literal}"
    return None


def literal_value(literal: str, data_type: DataType) -> object:
    """In-memory value for a SQL literal, per the column's type."""
    text = literal.strip()
    if data_type.base is TypeBase.FIXED_NUMBER:
        return Decimal(text)
    if data_type.base is TypeBase.VARCHAR_TEXT:
        content = unquote_literal(text)
        return text if content is None else content
    if text.upper().startswith("DATE"):
        text = text[4:].strip()
    content = unquote_literal(text) or text
    parsed = datetime.fromisoformat(content)
    return parsed if parsed.time() != parsed.min.time() else parsed.date()


def render_constraint_clause(constraint: Constraint) -> str:
    """Canonical table-level clause text for a PK/UNIQUE/FK/CHECK constraint.

    Column lists are comma-joined without spaces; CHECK expressions are kept
    verbatim from the parse.  Synthetic names are bookkeeping, not part of the
    declared DDL, so synthetic constraints render as bare clauses.
    """
    prefix = "" if constraint.is_synthetic else f"CONSTRAINT {constraint.name} "
    cols = ",".join(constraint.columns)
    if constraint.kind is ConstraintKind.PRIMARY_KEY:
        return f"{prefix}PRIMARY KEY ({cols})"
    if constraint.kind is ConstraintKind.UNIQUE:
        return f"{prefix}UNIQUE ({cols})"
    if constraint.kind is ConstraintKind.FOREIGN_KEY:
        target = constraint.referenced_table or ""
        if constraint.referenced_owner:
            target = f"{constraint.referenced_owner}.{target}"
        clause = f"{prefix}FOREIGN KEY ({cols}) REFERENCES {target}"
        if constraint.referenced_columns:
            clause += f" ({','.join(constraint.referenced_columns)})"
        return clause
    if constraint.kind is ConstraintKind.CHECK:
        return f"{prefix}CHECK ({constraint.check_expression})"
    raise ValueError(f"{constraint.kind.value} is not a table-level clause")


@dataclass(frozen=True, slots=True)
class Violation:
    """One invariant violation found by validate_schema."""

    table: str | None
    constraint: str | None
    message: str

    def __str__(self) -> str:
        where = self.table or "<schema>"
        if self.constraint:
            where += f".{self.constraint}"
        return f"{where}: {self.message}"


def _validate_data_type(table: str, column: Column, report: list[Violation]) -> None:
    dt = column.data_type
    where = f"column {column.name}"
    if dt.base is TypeBase.VARCHAR_TEXT:
        if dt.length is None or dt.length < 1:
            report.append(Violation(table, None, f"{where}: text type requires a positive length"))
        if dt.precision is not None or dt.scale is not None:
            report.append(Violation(table, None, f"{where}: text type carries numeric size"))
    elif dt.base is TypeBase.FIXED_NUMBER:
        if dt.length is not None:
            report.append(Violation(table, None, f"{where}: numeric type carries a text length"))
        if dt.scale is not None and dt.precision is None:
            report.append(Violation(table, None, f"{where}: scale given without precision"))
        if dt.scale is not None and dt.precision is not None and dt.scale > dt.precision:
            report.append(Violation(table, None, f"{where}: scale {dt.scale} exceeds precision {dt.precision}"))
    else:
        if dt.length is not None or dt.precision is not None or dt.scale is not None:
            report.append(Violation(table, None, f"{where}: DATE carries no size"))


def _validate_constraint(
    schema: Schema, table: Table, con: Constraint, report: list[Violation]
) -> None:
    name = con.name
    if name is None:
        report.append(Violation(table.name, None, f"unnamed {con.kind.value} constraint"))
    if con.kind is not ConstraintKind.CHECK and not con.columns:
        report.append(Violation(table.name, name, "constraint names no columns"))
    seen: set[str] = set()
    for col in con.columns:
        if col.upper() in seen:
            report.append(Violation(table.name, name, f"column {col} listed twice"))
        seen.add(col.upper())
        if table.column(col) is None:
            report.append(Violation(table.name, name, f"column {col} does not exist"))

    if con.kind in (ConstraintKind.NOT_NULL, ConstraintKind.DEFAULT):
        if len(con.columns) != 1:
            report.append(Violation(table.name, name, f"{con.kind.value} must name exactly one column"))
        if con.level is not ConstraintLevel.COLUMN_LEVEL:
            report.append(Violation(table.name, name, f"{con.kind.value} must be column-level"))
    if con.kind is ConstraintKind.DEFAULT:
        if not con.default_literal:
            report.append(Violation(table.name, name, "DEFAULT carries no literal"))
        elif len(con.columns) == 1:
            col = table.column(con.columns[0])
            if col is not None:
                problem = literal_error(con.default_literal, col.data_type)
                if problem:
                    report.append(Violation(table.name, name, f"default literal: {problem}"))
    if con.kind is ConstraintKind.CHECK and not con.check_expression:
        report.append(Violation(table.name, name, "CHECK carries no expression"))

    if con.kind is ConstraintKind.FOREIGN_KEY:
        if con.referenced_table is None:
            report.append(Violation(table.name, name, "foreign key names no referenced table"))
            return
        target = schema.table(con.referenced_table)
        if target is None:
            report.append(
                Violation(table.name, name, f"referenced table {con.referenced_table} does not exist")
            )
            return
        for col in con.referenced_columns:
            if target.column(col) is None:
                report.append(
                    Violation(table.name, name, f"referenced column {target.name}.{col} does not exist")
                )
                return
        if con.referenced_columns and len(con.referenced_columns) != len(con.columns):
            report.append(
                Violation(
                    table.name,
                    name,
                    f"foreign key arity {len(con.columns)} does not match "
                    f"referenced column count {len(con.referenced_columns)}",
                )
            )
            return
        if resolve_fk_key(schema, con) is None:
            report.append(
                Violation(
                    table.name,
                    name,
                    f"no primary or unique key on {target.name} matches the referenced columns",
                )
            )


def validate_schema(schema: Schema) -> list[Violation]:
    """Check every model invariant; an empty report means the schema is valid.

    Validation is pure and idempotent: the schema is never modified, and
    repeated runs return equal reports.
    """
    report: list[Violation] = []

    seen_tables: set[str] = set()
    for tab in schema.tables:
        if tab.name.upper() in seen_tables:
            report.append(Violation(tab.name, None, "duplicate table name"))
        seen_tables.add(tab.name.upper())

    seen_constraints: dict[str, str] = {}
    for tab in schema.tables:
        seen_cols: set[str] = set()
        for i, col in enumerate(tab.columns, start=1):
            if col.name.upper() in seen_cols:
                report.append(Violation(tab.name, None, f"duplicate column name {col.name}"))
            seen_cols.add(col.name.upper())
            if col.ordinal != i:
                report.append(
                    Violation(tab.name, None, f"column {col.name} ordinal {col.ordinal}, expected {i}")
                )
            _validate_data_type(tab.name, col, report)

        pk_count = sum(1 for c in tab.constraints if c.kind is ConstraintKind.PRIMARY_KEY)
        if pk_count > 1:
            report.append(Violation(tab.name, None, f"{pk_count} primary keys declared"))

        for con in tab.constraints:
            if con.name is not None:
                key = con.name.upper()
                if key in seen_constraints:
                    report.append(
                        Violation(
                            tab.name,
                            con.name,
                            f"constraint name already used on {seen_constraints[key]}",
                        )
                    )
                else:
                    seen_constraints[key] = tab.name
            _validate_constraint(schema, tab, con, report)

        # Column flags must agree with the constraint list.
        for col in tab.columns:
            implied = any(
                c.kind in (ConstraintKind.NOT_NULL, ConstraintKind.PRIMARY_KEY) and c.mentions(col.name)
                for c in tab.constraints
            )
            if col.nullable == implied:
                state = "nullable" if col.nullable else "non-nullable"
                report.append(
                    Violation(tab.name, None, f"column {col.name} marked {state} against its constraints")
                )
            declared = next(
                (
                    c.default_literal
                    for c in tab.constraints
                    if c.kind is ConstraintKind.DEFAULT and c.mentions(col.name)
                ),
                None,
            )
            if (col.default_value or None) != (declared or None):
                report.append(
                    Violation(tab.name, None, f"column {col.name} default does not match its DEFAULT constraint")
                )

    return report


def _constraint_key(con: Constraint) -> tuple:
    return (
        con.kind.value,
        "" if con.is_synthetic else (con.name or "").upper(),
        tuple(c.upper() for c in con.columns),
        (con.referenced_table or "").upper(),
        (con.referenced_owner or "").upper(),
        tuple(c.upper() for c in con.referenced_columns),
        con.check_expression or "",
        con.default_literal or "",
    )


def tables_equivalent(a: Table, b: Table) -> bool:
    """Structural equality up to synthetic constraint names and the
    column-level/table-level distinction for key constraints."""
    if not ident_eq(a.name, b.name) or len(a.columns) != len(b.columns):
        return False
    for ca, cb in zip(a.columns, b.columns):
        if (
            not ident_eq(ca.name, cb.name)
            or ca.data_type != cb.data_type
            or ca.nullable != cb.nullable
            or (ca.default_value or None) != (cb.default_value or None)
            or ca.ordinal != cb.ordinal
        ):
            return False
    return sorted(map(_constraint_key, a.constraints)) == sorted(map(_constraint_key, b.constraints))


def schemas_equivalent(a: Schema, b: Schema) -> bool:
    if len(a.tables) != len(b.tables):
        return False
    for ta in a.tables:
        tb = b.table(ta.name)
        if tb is None or not tables_equivalent(ta, tb):
            return False
    return True
