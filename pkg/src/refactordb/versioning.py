"""Timestamped versioning of backups and constraint modifications.

Every plan binds one timestamp; backup tables and renamed constraints carry
it as a DDMONYYHHMISS suffix so earlier states stay recoverable by name.
Constraint-affecting changes are appended to the NOVCODE_CONSTRAINTS_MODIFIED
log, which lives both as a table in the data store and as a tab-separated
mirror file.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from datetime import datetime

from .dialect import Dialect, ORACLELIKE
from .model import Column, RefactorError, Table, build_table, date_type, varchar
from .parser import render_create_table


class FieldOverflow(RefactorError):
    def __init__(self, field: str, value: str, width: int) -> None:
        super().__init__(f"{field} value {value!r} exceeds {width} characters")
        self.field = field


_MONTHS = ("JAN", "FEB", "MAR", "APR", "MAY", "JUN", "JUL", "AUG", "SEP", "OCT", "NOV", "DEC")


def timestamp_suffix(moment: datetime) -> str:
    """DDMONYYHHMISS, always 13 characters with an uppercase English month."""
    return (
        f"{moment.day:02d}{_MONTHS[moment.month - 1]}{moment.year % 100:02d}"
        f"{moment.hour:02d}{moment.minute:02d}{moment.second:02d}"
    )


def backup_name(base: str, moment: datetime, dialect: Dialect = ORACLELIKE) -> str:
    """Backup table name: base + timestamp suffix.

    When the result would exceed the dialect's identifier limit the base is
    truncated; the suffix is never shortened.
    """
    suffix = timestamp_suffix(moment)
    limit = dialect.max_identifier_length
    if len(base) + len(suffix) > limit:
        base = base[: limit - len(suffix)]
    return f"{base}{suffix}"


def versioned_constraint_name(
    name: str, moment: datetime, dialect: Dialect = ORACLELIKE, serial: int = 0
) -> str:
    """Constraint name carrying a version timestamp: name + ``_`` + suffix.

    Truncation can make two long names version identically; callers that
    detect such a clash pass a ``serial`` greater than zero, which is spliced
    in before the underscore at the expense of the name, never the suffix.
    """
    suffix = timestamp_suffix(moment)
    tag = str(serial) if serial else ""
    room = dialect.max_identifier_length - len(suffix) - 1 - len(tag)
    if len(name) > room:
        name = name[:room]
    return f"{name}{tag}_{suffix}"


LOG_TABLE_NAME = "NOVCODE_CONSTRAINTS_MODIFIED"

#: Declared text widths of the log table, also enforced on entries.
FIELD_WIDTHS = {
    "owner": 30,
    "constraint_name": 50,
    "constraint_type": 1,
    "table_name": 50,
    "r_owner": 50,
    "r_constraint_name": 50,
    "new_constraint_name": 50,
    "new_table_name": 50,
}


@dataclass(frozen=True, slots=True)
class VersionEntry:
    """One constraint-modification event.

    ``constraint_type`` is the catalog letter (P=primary key, R=referential,
    U=unique, C=check/not-null); the referential fields are present exactly
    for type R.  ``new_constraint_name``/``new_table_name`` record renames
    and imports.
    """

    owner: str
    constraint_name: str
    constraint_type: str
    table_name: str
    new_modification_date: datetime
    r_owner: str | None = None
    r_constraint_name: str | None = None
    new_constraint_name: str | None = None
    new_table_name: str | None = None

    def __post_init__(self) -> None:
        if self.constraint_type not in ("P", "R", "U", "C"):
            raise ValueError(f"constraint_type must be one of P,R,U,C: {self.constraint_type!r}")
        referential = self.constraint_type == "R"
        if referential and (self.r_owner is None or self.r_constraint_name is None):
            raise ValueError("type R entries must carry r_owner and r_constraint_name")
        if not referential and (self.r_owner is not None or self.r_constraint_name is not None):
            raise ValueError("only type R entries may carry referential fields")


@dataclass(frozen=True, slots=True)
class VersionLog:
    """Append-only sequence of version entries."""

    entries: tuple[VersionEntry, ...] = ()


def record_modification(entry: VersionEntry, log: VersionLog) -> VersionLog:
    """Append one entry, enforcing the log table's declared field widths."""
    for field_name, width in FIELD_WIDTHS.items():
        value = getattr(entry, field_name)
        if value is not None and len(value) > width:
            raise FieldOverflow(field_name, value, width)
    return replace(log, entries=log.entries + (entry,))


def log_table_model() -> Table:
    """The NOVCODE_CONSTRAINTS_MODIFIED table as a model value."""
    return build_table(
        LOG_TABLE_NAME,
        [
            Column("OWNER", varchar(30)),
            Column("CONSTRAINT_NAME", varchar(50)),
            Column("CONSTRAINT_TYPE", varchar(1)),
            Column("TABLE_NAME", varchar(50)),
            Column("R_OWNER", varchar(50)),
            Column("R_CONSTRAINT_NAME", varchar(50)),
            Column("NEW_MODIFICATION_DATE", date_type()),
            Column("NEW_CONSTRAINT_NAME", varchar(50)),
            Column("NEW_TABLE_NAME", varchar(50)),
        ],
    )


def emit_log_table_ddl(dialect: Dialect = ORACLELIKE) -> str:
    return render_create_table(log_table_model(), dialect)


def mirror_line(entry: VersionEntry) -> str:
    """Tab-separated mirror-file line in log-table column order, ISO dates."""
    cells = (
        entry.owner,
        entry.constraint_name,
        entry.constraint_type,
        entry.table_name,
        entry.r_owner or "",
        entry.r_constraint_name or "",
        entry.new_modification_date.isoformat(),
        entry.new_constraint_name or "",
        entry.new_table_name or "",
    )
    return "\t".join(cells)


def write_mirror(log: VersionLog, path: str) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for entry in log.entries:
            handle.write(mirror_line(entry) + "\n")
