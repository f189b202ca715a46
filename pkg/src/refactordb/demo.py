"""Bundled example schemas and seed data.

The package ships a small corpus of CREATE TABLE scripts covering the
constraint combinations the engine is exercised against, plus an employee
and supplier pair with row data.  The CLI starts from the seeded pair when
no schema source is given, and its housekeeping choice creates the whole
corpus inside a running session.
"""

from __future__ import annotations

from datetime import datetime
from pathlib import Path

from .catalog import load_from_scripts
from .dialect import Dialect, ORACLELIKE
from .executor import DataStore, canonical_row, create_backup, store_from_rows
from .model import Schema
from .versioning import log_table_model

FIXTURE_DIR = Path(__file__).with_name("fixtures")

#: The constraint-combination corpus, one numbered script per combination.
CORPUS_FILES = (
    "01_emp_dept.sql",
    "02_pk_fk_single.sql",
    "03_columns_only.sql",
    "04_composite_pk.sql",
    "05_unique_only.sql",
    "06_fk_on_unique.sql",
    "07_check_and_null.sql",
)

EMP_ROWS = [
    (7369, "SMITH", "CLERK", 7902),
    (7499, "ALLEN", "SALESMAN", 7698),
    (7521, "WARD", "SALESMAN", 7698),
    (7566, "JONES", "MANAGER", 7839),
    (7654, "MARTIN", "SALESMAN", 7698),
    (7698, "BLAKE", "MANAGER", 7839),
    (7782, "CLARK", "MANAGER", 7839),
    (7839, "KING", "PRESIDENT", None),
    (7902, "FORD", "ANALYST", 7566),
]

DEPT_ROWS = [
    (10, "ACCOUNTING", "NEW YORK"),
    (20, "RESEARCH", "DALLAS"),
    (30, "SALES", "CHICAGO"),
    (40, "OPERATIONS", "BOSTON"),
]

SUPPLIERS_ROWS = [
    (1, "ACME SUPPLY", "12 HIGH STREET", "SPRINGFIELD", "IL"),
    (2, "NORTHERN TRADING", "4 MARKET SQUARE", "SHELBYVILLE", "IN"),
    (3, "LAKESIDE PARTS", "9 OAK AVENUE", "AUSTIN", "TX"),
    (4, "CENTRAL FREIGHT", "77 LAKE ROAD", "MADISON", "WI"),
    (5, "HARBOR GOODS", "200 FIFTH AVENUE", "NEW YORK", "NY"),
    (6, "SUMMIT WHOLESALE", "1 HARBOR WAY", "PORTLAND", "OR"),
]

_SEED_ROWS = {"EMP": EMP_ROWS, "DEPT": DEPT_ROWS, "SUPPLIERS": SUPPLIERS_ROWS}


def corpus_schema() -> Schema:
    """The whole constraint-combination corpus as one schema."""
    return load_from_scripts([FIXTURE_DIR / name for name in CORPUS_FILES])


def demo_schema() -> Schema:
    """The employee and supplier tables plus the constraint log table."""
    schema = load_from_scripts([FIXTURE_DIR / "01_emp_dept.sql", FIXTURE_DIR / "suppliers.sql"])
    return schema.with_table(log_table_model())


def demo_store(moment: datetime, dialect: Dialect = ORACLELIKE) -> DataStore:
    """The seeded session: employee and supplier rows, and a backup of the
    employee table taken at ``moment`` under its timestamped name."""
    store = store_from_rows(demo_schema(), _SEED_ROWS)
    store, _ = create_backup(store, "EMP", moment, dialect=dialect)
    return store


def seed_tables(store: DataStore) -> tuple[DataStore, list[str], list[str]]:
    """Add every corpus and demo table the store does not yet hold.

    Returns the grown store plus the names created and the names skipped
    because they already existed.  Seeded tables get their demo rows where
    they have any; the rest start empty.
    """
    created: list[str] = []
    skipped: list[str] = []
    wanted = list(corpus_schema().tables)
    for table in demo_schema().tables:
        if not any(t.name == table.name for t in wanted):
            wanted.append(table)
    for table in wanted:
        if store.schema.table(table.name) is not None:
            skipped.append(table.name)
            continue
        rows = [canonical_row(r) for r in _SEED_ROWS.get(table.name, [])]
        store = store.with_schema(store.schema.with_table(table)).with_rows(table.name, rows)
        created.append(table.name)
    return store, created, skipped
