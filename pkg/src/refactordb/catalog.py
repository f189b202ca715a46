"""Schema acquisition and table description.

A schema enters the engine one of two ways: a directory of CREATE TABLE
scripts, or a live catalog behind a CatalogAdapter that can list tables and
hand back their DDL.  This module also produces the per-column description
rows a metadata API serves, and can rebuild a schema from those restricted
views alone, which is how much of a table's truth such an API loses.
"""

from __future__ import annotations

import sqlite3
from abc import ABC, abstractmethod
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

from .dialect import Dialect, ORACLELIKE
from .executor import DataStore
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
    DataType,
    build_table,
    ident_eq,
    resolve_fk_columns,
    resolve_fk_key,
)
from .parser import (
    DEFAULT_OWNER,
    DdlSyntaxError,
    UnsupportedConstruct,
    parse_create_table,
    parse_statements,
)


class AdapterError(RefactorError):
    pass


class CatalogIoError(RefactorError):
    pass


def load_from_scripts(source: str | Path | Iterable[str | Path]) -> Schema:
    """Parse CREATE TABLE scripts into one schema.

    ``source`` is either a directory (every ``*.sql`` file in it, sorted by
    name) or an ordered collection of file paths.  Parse errors are
    re-raised with the file name prefixed.
    """
    if isinstance(source, (str, Path)):
        root = Path(source)
        if not root.is_dir():
            raise CatalogIoError(f"not a directory: {root}")
        paths = sorted(root.glob("*.sql"))
        if not paths:
            raise CatalogIoError(f"no .sql files in {root}")
    else:
        paths = [Path(p) for p in source]
        if not paths:
            raise CatalogIoError("no script files given")

    tables: list[Table] = []
    owners: set[str] = set()
    sources: list[tuple[str, str]] = []
    for path in paths:
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise CatalogIoError(f"{path}: {exc}") from exc
        try:
            parsed = parse_statements(text)
        except (DdlSyntaxError, UnsupportedConstruct) as exc:
            exc.args = (f"{path.name}: {exc.args[0]}",)
            raise
        for table, owner in parsed:
            tables.append(table)
            sources.append((table.name, str(path)))
            if owner is not None:
                owners.add(owner)
    if len(owners) > 1:
        raise UnsupportedConstruct(
            f"scripts name multiple schema owners: {', '.join(sorted(owners))}"
        )
    owner = owners.pop() if owners else DEFAULT_OWNER
    return Schema(owner=owner, tables=tuple(tables), sources=tuple(sources))


class CatalogAdapter(ABC):
    """What the engine needs from a live catalog: the table list, each
    table's DDL, and a row count."""

    @abstractmethod
    def list_tables(self) -> list[str]: ...

    @abstractmethod
    def get_table_ddl(self, name: str) -> str: ...

    @abstractmethod
    def row_count(self, name: str) -> int: ...


class SqliteCatalogAdapter(CatalogAdapter):
    """Adapter over a sqlite3 connection.

    sqlite stores each table's CREATE TABLE text verbatim in sqlite_master,
    so DDL written in the engine's grammar comes back parseable.  Owner
    prefixes are not accepted by sqlite; catalogs loaded this way take the
    engine's default owner.
    """

    def __init__(self, connection: sqlite3.Connection) -> None:
        self.connection = connection

    @classmethod
    def in_memory(
        cls,
        seed_ddl: Iterable[str] = (),
        seed_rows: Mapping[str, Iterable[tuple]] = {},
    ) -> "SqliteCatalogAdapter":
        connection = sqlite3.connect(":memory:")
        for statement in seed_ddl:
            connection.execute(statement)
        for table, rows in seed_rows.items():
            rows = [tuple(r) for r in rows]
            if rows:
                marks = ",".join("?" * len(rows[0]))
                connection.executemany(
                    f'INSERT INTO "{table}" VALUES ({marks})', rows
                )
        connection.commit()
        return cls(connection)

    def list_tables(self) -> list[str]:
        cursor = self.connection.execute(
            "SELECT name FROM sqlite_master"
            " WHERE type = 'table' AND name NOT LIKE 'sqlite_%' ORDER BY rowid"
        )
        return [row[0] for row in cursor.fetchall()]

    def get_table_ddl(self, name: str) -> str:
        cursor = self.connection.execute(
            "SELECT sql FROM sqlite_master WHERE type = 'table' AND upper(name) = upper(?)",
            (name,),
        )
        row = cursor.fetchone()
        if row is None or row[0] is None:
            raise AdapterError(f"no DDL for table {name}")
        return row[0]

    def row_count(self, name: str) -> int:
        if not name.replace("_", "").replace("$", "").replace("#", "").isalnum():
            raise AdapterError(f"unsafe table name {name!r}")
        cursor = self.connection.execute(f'SELECT COUNT(*) FROM "{name}"')
        return int(cursor.fetchone()[0])


def load_from_catalog(adapter: CatalogAdapter, owner: str = DEFAULT_OWNER) -> Schema:
    """Assemble a schema by parsing the DDL an adapter serves for each of
    its tables."""
    tables: list[Table] = []
    sources: list[tuple[str, str]] = []
    for name in adapter.list_tables():
        ddl = adapter.get_table_ddl(name)
        try:
            table, explicit = parse_create_table(ddl)
        except (DdlSyntaxError, UnsupportedConstruct) as exc:
            exc.args = (f"table {name}: {exc.args[0]}",)
            raise
        if explicit is not None and not ident_eq(explicit, owner):
            raise AdapterError(f"table {name} belongs to {explicit}, not {owner}")
        tables.append(table)
        sources.append((table.name, "catalog"))
    return Schema(owner=owner, tables=tuple(tables), sources=tuple(sources))


# ---------------------------------------------------------------------------
# Description rows, in the column order a JDBC-style metadata call returns.

#: DATA_TYPE codes: fixed-point number, variable text, date.
TYPE_CODE_NUMBER = 3
TYPE_CODE_VARCHAR = 12
TYPE_CODE_DATE = 91


@dataclass(frozen=True, slots=True)
class TableDescriptionRow:
    """One column of one table, described the way a metadata API reports it.
    Field order matches the 18-column result row."""

    table_cat: str | None
    table_schem: str
    table_name: str
    column_name: str
    data_type: int
    type_name: str
    column_size: int | None
    buffer_length: int
    decimal_digits: int | None
    num_prec_radix: int
    nullable: int
    remarks: str | None
    column_def: str | None
    sql_data_type: int
    sql_datetime_sub: int
    char_octet_length: int
    ordinal_position: int
    is_nullable: str


def _type_fields(data_type: DataType, dialect: Dialect) -> tuple[int, str, int | None, int | None, int]:
    """(data_type, type_name, column_size, decimal_digits, char_octet_length)"""
    spelled = dialect.spell_type(data_type).split("(")[0]
    if data_type.base is TypeBase.VARCHAR_TEXT:
        return TYPE_CODE_VARCHAR, spelled, data_type.length, None, data_type.length or 0
    if data_type.base is TypeBase.FIXED_NUMBER:
        return TYPE_CODE_NUMBER, spelled, data_type.precision, data_type.scale, 22
    return TYPE_CODE_DATE, spelled, 7, None, 7


def describe_table(
    table: Table, owner: str = DEFAULT_OWNER, dialect: Dialect = ORACLELIKE
) -> list[TableDescriptionRow]:
    rows: list[TableDescriptionRow] = []
    for col in table.columns:
        code, type_name, size, digits, octets = _type_fields(col.data_type, dialect)
        rows.append(
            TableDescriptionRow(
                table_cat=None,
                table_schem=owner,
                table_name=table.name,
                column_name=col.name,
                data_type=code,
                type_name=type_name,
                column_size=size,
                buffer_length=0,
                decimal_digits=digits,
                num_prec_radix=10,
                nullable=0 if not col.nullable else 1,
                remarks=None,
                column_def=col.default_value,
                sql_data_type=0,
                sql_datetime_sub=0,
                char_octet_length=octets,
                ordinal_position=col.ordinal,
                is_nullable="NO" if not col.nullable else "YES",
            )
        )
    return rows


def table_row_counts(store: DataStore, names: Iterable[str]) -> list[tuple[str, int]]:
    counts = []
    for name in names:
        rows = store.table_rows(name)
        if rows is None:
            raise TableNotFound(f"no data table named {name}")
        counts.append((name, len(rows)))
    return counts


# ---------------------------------------------------------------------------
# Restricted metadata views.  A metadata API serves column descriptions,
# primary keys, and imported keys that point at primary keys; everything a
# table knows beyond that never crosses the wire.


@dataclass(frozen=True, slots=True)
class PrimaryKeyRow:
    table_schem: str
    table_name: str
    column_name: str
    key_seq: int
    pk_name: str | None


@dataclass(frozen=True, slots=True)
class ImportedKeyRow:
    pktable_schem: str
    pktable_name: str
    pkcolumn_name: str
    fktable_name: str
    fkcolumn_name: str
    key_seq: int
    fk_name: str | None
    pk_name: str | None


def get_columns(
    table: Table, owner: str = DEFAULT_OWNER, dialect: Dialect = ORACLELIKE
) -> list[TableDescriptionRow]:
    return describe_table(table, owner, dialect)


def get_primary_keys(table: Table, owner: str = DEFAULT_OWNER) -> list[PrimaryKeyRow]:
    pk = table.primary_key()
    if pk is None:
        return []
    return [
        PrimaryKeyRow(owner, table.name, column, seq, pk.name)
        for seq, column in enumerate(pk.columns, start=1)
    ]


def get_imported_keys(schema: Schema, table: Table) -> list[ImportedKeyRow]:
    """Foreign keys of ``table`` whose target key is a primary key.  Keys
    that resolve to a UNIQUE constraint are not served; this is the
    restriction the reconstruction test measures."""
    rows: list[ImportedKeyRow] = []
    for fk in table.constraints:
        if fk.kind is not ConstraintKind.FOREIGN_KEY:
            continue
        target = resolve_fk_key(schema, fk)
        if target is None or target.kind is not ConstraintKind.PRIMARY_KEY:
            continue
        target_columns = resolve_fk_columns(schema, fk) or ()
        for seq, (local, remote) in enumerate(zip(fk.columns, target_columns), start=1):
            rows.append(
                ImportedKeyRow(
                    pktable_schem=fk.referenced_owner or schema.owner,
                    pktable_name=fk.referenced_table or "",
                    pkcolumn_name=remote,
                    fktable_name=table.name,
                    fkcolumn_name=local,
                    key_seq=seq,
                    fk_name=fk.name,
                    pk_name=target.name,
                )
            )
    return rows


def _type_from_description(row: TableDescriptionRow) -> DataType:
    if row.data_type == TYPE_CODE_VARCHAR:
        return DataType(TypeBase.VARCHAR_TEXT, length=row.column_size)
    if row.data_type == TYPE_CODE_NUMBER:
        return DataType(TypeBase.FIXED_NUMBER, precision=row.column_size, scale=row.decimal_digits)
    return DataType(TypeBase.DATE)


def table_from_metadata_views(schema: Schema, table: Table, owner: str = DEFAULT_OWNER) -> Table:
    """Rebuild one table from the three restricted views alone."""
    columns: list[Column] = []
    constraints: list[Constraint] = []
    for row in sorted(get_columns(table, owner), key=lambda r: r.ordinal_position):
        columns.append(Column(row.column_name, _type_from_description(row)))
        if row.column_def is not None:
            constraints.append(
                Constraint(
                    None,
                    ConstraintKind.DEFAULT,
                    (row.column_name,),
                    default_literal=row.column_def,
                    level=ConstraintLevel.COLUMN_LEVEL,
                )
            )
        if row.nullable == 0:
            constraints.append(
                Constraint(
                    None,
                    ConstraintKind.NOT_NULL,
                    (row.column_name,),
                    level=ConstraintLevel.COLUMN_LEVEL,
                )
            )

    pk_rows = get_primary_keys(table, owner)
    if pk_rows:
        name = pk_rows[0].pk_name
        constraints.append(
            Constraint(
                name,
                ConstraintKind.PRIMARY_KEY,
                tuple(r.column_name for r in sorted(pk_rows, key=lambda r: r.key_seq)),
                is_synthetic=bool(name and name.startswith("SYS_")),
            )
        )
        # The primary key already implies NOT NULL; the column view reports
        # those columns as non-nullable, so drop the duplicates it produced.
        pk_columns = {r.column_name.upper() for r in pk_rows}
        constraints = [
            c
            for c in constraints
            if not (
                c.kind is ConstraintKind.NOT_NULL and c.columns[0].upper() in pk_columns
            )
        ]

    fk_rows = get_imported_keys(schema, table)
    by_name: dict[str, list[ImportedKeyRow]] = {}
    for row in fk_rows:
        by_name.setdefault(row.fk_name or "", []).append(row)
    for name, group in by_name.items():
        group = sorted(group, key=lambda r: r.key_seq)
        constraints.append(
            Constraint(
                name or None,
                ConstraintKind.FOREIGN_KEY,
                tuple(r.fkcolumn_name for r in group),
                referenced_table=group[0].pktable_name,
                referenced_owner=group[0].pktable_schem,
                referenced_columns=tuple(r.pkcolumn_name for r in group),
                is_synthetic=name.startswith("SYS_"),
            )
        )
    return build_table(table.name, columns, constraints)


def schema_from_metadata_views(schema: Schema, owner: str | None = None) -> Schema:
    """Rebuild the whole schema through the restricted views.  UNIQUE
    constraints, CHECK expressions, and foreign keys that point at UNIQUE
    keys have no view to ride on, so the result is missing exactly those."""
    owner = owner or schema.owner
    return Schema(
        owner=owner,
        tables=tuple(table_from_metadata_views(schema, t, owner) for t in schema.tables),
    )
