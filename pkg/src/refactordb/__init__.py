"""Dialect-independent schema refactoring over parsed CREATE TABLE DDL.

The package parses a schema into immutable model values, plans a catalog
of refactorings as typed step lists guarded by precondition checks, and
executes those plans against an in-memory data store while emitting the
equivalent SQL script for a chosen dialect.  Every change is version
logged under timestamped names so nothing is lost in place.
"""

from .model import (
    Column,
    Constraint,
    ConstraintKind,
    ConstraintLevel,
    DataType,
    RefactorError,
    Schema,
    Table,
    TypeBase,
    ColumnNotFound,
    ConstraintNotFound,
    TableNotFound,
    build_table,
    validate_schema,
)
from .parser import (
    DdlSyntaxError,
    UnsupportedConstruct,
    parse_create_table,
    parse_script,
    render_create_table,
)
from .dialect import ANSI, DIALECTS, Dialect, ORACLELIKE, emit_step, enforce_identifier
from .refactorings import (
    GuardFailure,
    GuardResult,
    MergeMode,
    Plan,
    RefactoringKind,
    RefactoringRequest,
    plan_request,
)
from .executor import (
    DataStore,
    ExecutionAborted,
    ExecutionResult,
    StepFailure,
    apply_plan,
    conformance,
    create_backup,
    empty_store,
    script_only,
    store_from_rows,
)
from .catalog import (
    CatalogAdapter,
    SqliteCatalogAdapter,
    describe_table,
    load_from_catalog,
    load_from_scripts,
    schema_from_metadata_views,
)
from .versioning import (
    FieldOverflow,
    VersionEntry,
    VersionLog,
    backup_name,
    emit_log_table_ddl,
    record_modification,
    timestamp_suffix,
    versioned_constraint_name,
)

__version__ = "0.1.0"

__all__ = [
    "ANSI",
    "CatalogAdapter",
    "Column",
    "ColumnNotFound",
    "Constraint",
    "ConstraintKind",
    "ConstraintLevel",
    "ConstraintNotFound",
    "DIALECTS",
    "DataStore",
    "DataType",
    "DdlSyntaxError",
    "Dialect",
    "ExecutionAborted",
    "ExecutionResult",
    "FieldOverflow",
    "GuardFailure",
    "GuardResult",
    "MergeMode",
    "ORACLELIKE",
    "Plan",
    "RefactorError",
    "RefactoringKind",
    "RefactoringRequest",
    "Schema",
    "SqliteCatalogAdapter",
    "StepFailure",
    "Table",
    "TableNotFound",
    "TypeBase",
    "UnsupportedConstruct",
    "VersionEntry",
    "VersionLog",
    "apply_plan",
    "backup_name",
    "build_table",
    "conformance",
    "create_backup",
    "describe_table",
    "emit_log_table_ddl",
    "emit_step",
    "empty_store",
    "enforce_identifier",
    "load_from_catalog",
    "load_from_scripts",
    "parse_create_table",
    "parse_script",
    "plan_request",
    "record_modification",
    "render_create_table",
    "schema_from_metadata_views",
    "script_only",
    "store_from_rows",
    "timestamp_suffix",
    "validate_schema",
    "versioned_constraint_name",
]
