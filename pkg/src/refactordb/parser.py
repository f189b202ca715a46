"""CREATE TABLE parsing and canonical rendering.

The grammar is deliberately the corpus dialect, nothing more::

    CREATE TABLE [owner.]name ( item {, item} ) [;]
    item       = column_def | table_constraint
    column_def = name type { DEFAULT literal
                           | [CONSTRAINT name] NOT NULL
                           | CONSTRAINT name inline_constraint }
    type       = NUMBER[(p[,s])] | NUMERIC[(p[,s])] | VARCHAR2(n) | VARCHAR(n) | DATE

Table constraints are ``[CONSTRAINT name]`` followed by PRIMARY KEY, UNIQUE,
FOREIGN KEY ... REFERENCES (the referenced column list may be omitted, in
which case resolution falls to the target's key), or CHECK.  CHECK
expressions are captured as raw text between balanced parentheses and never
interpreted.  Unquoted identifiers fold to uppercase; quoted ones are kept
verbatim.  Parsing is loss-free up to whitespace and case canonicalization.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .dialect import Dialect, ORACLELIKE, render_column_def
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
    build_table,
    expression_columns,
    render_constraint_clause,
)


class DdlSyntaxError(RefactorError):
    """Malformed DDL, with a 1-based source position."""

    def __init__(self, message: str, line: int, column: int) -> None:
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class UnsupportedConstruct(RefactorError):
    """Recognized SQL that falls outside the supported grammar."""


@dataclass(frozen=True, slots=True)
class Token:
    text: str
    upper: str
    line: int
    column: int
    offset: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>--[^\n]*)
  | (?P<string>'(?:[^']|'')*')
  | (?P<quoted>"[^"]*")
  | (?P<number>\d+(?:\.\d+)?)
  | (?P<word>[A-Za-z_][A-Za-z0-9_$#]*)
  | (?P<punct>[(),;.=<>!*/+-])
    """,
    re.VERBOSE,
)

_BARE_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_$#]*")

# Type keywords we recognize but do not support; anything else is a plain
# syntax error.
_FOREIGN_TYPES = {
    "CHAR", "NCHAR", "NVARCHAR2", "CLOB", "BLOB", "LONG", "RAW", "TIMESTAMP",
    "INTEGER", "INT", "SMALLINT", "BIGINT", "FLOAT", "REAL", "DOUBLE",
    "DECIMAL", "DEC", "TEXT", "BOOLEAN",
}

_FOREIGN_STATEMENTS = {
    "ALTER", "DROP", "INSERT", "UPDATE", "DELETE", "SELECT", "GRANT",
    "REVOKE", "COMMENT", "TRUNCATE", "MERGE",
}


def _lex(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, line_start = 1, 0
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            raise DdlSyntaxError(
                f"unexpected character {text[pos]!r}", line, pos - line_start + 1
            )
        kind = match.lastgroup
        raw = match.group()
        if kind not in ("ws", "comment"):
            tokens.append(Token(raw, raw.upper(), line, pos - line_start + 1, pos))
        newlines = raw.count("\n")
        if newlines:
            line += newlines
            line_start = pos + raw.rindex("\n") + 1
        pos = match.end()
    return tokens


class _Parser:
    def __init__(self, text: str, tokens: list[Token]) -> None:
        self.text = text
        self.tokens = tokens
        self.index = 0

    def peek(self, ahead: int = 0) -> Token | None:
        i = self.index + ahead
        return self.tokens[i] if i < len(self.tokens) else None

    def advance(self) -> Token:
        tok = self.peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else None
            line = last.line if last else 1
            col = last.column + len(last.text) if last else 1
            raise DdlSyntaxError("unexpected end of input", line, col)
        self.index += 1
        return tok

    def error(self, message: str) -> DdlSyntaxError:
        tok = self.peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else None
            return DdlSyntaxError(
                f"{message}, found end of input",
                last.line if last else 1,
                last.column + len(last.text) if last else 1,
            )
        return DdlSyntaxError(f"{message}, found {tok.text!r}", tok.line, tok.column)

    def at_word(self, *words: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.upper in words

    def expect_word(self, word: str) -> Token:
        if not self.at_word(word):
            raise self.error(f"expected {word}")
        return self.advance()

    def expect_punct(self, punct: str) -> Token:
        tok = self.peek()
        if tok is None or tok.text != punct:
            raise self.error(f"expected {punct!r}")
        return self.advance()

    def identifier(self, what: str) -> str:
        tok = self.peek()
        if tok is None:
            raise self.error(f"expected {what}")
        if tok.text.startswith('"'):
            self.advance()
            return tok.text[1:-1]
        if _BARE_IDENT_RE.fullmatch(tok.text):
            self.advance()
            return tok.upper
        raise self.error(f"expected {what}")

    def integer(self, what: str) -> int:
        tok = self.peek()
        if tok is None or not tok.text.isdigit():
            raise self.error(f"expected {what}")
        self.advance()
        return int(tok.text)

    # ------------------------------------------------------------------

    def qualified_name(self, what: str) -> tuple[str | None, str]:
        first = self.identifier(what)
        tok = self.peek()
        if tok is not None and tok.text == ".":
            self.advance()
            return first, self.identifier(what)
        return None, first

    def data_type(self) -> DataType:
        tok = self.peek()
        if tok is None:
            raise self.error("expected a type keyword")
        word = tok.upper
        if word in ("VARCHAR2", "VARCHAR"):
            self.advance()
            self.expect_punct("(")
            length = self.integer("a text length")
            self.expect_punct(")")
            return DataType(TypeBase.VARCHAR_TEXT, length=length)
        if word in ("NUMBER", "NUMERIC"):
            self.advance()
            precision = scale = None
            if self.peek() is not None and self.peek().text == "(":
                self.advance()
                precision = self.integer("a precision")
                if self.peek() is not None and self.peek().text == ",":
                    self.advance()
                    scale = self.integer("a scale")
                self.expect_punct(")")
            return DataType(TypeBase.FIXED_NUMBER, precision=precision, scale=scale)
        if word == "DATE":
            self.advance()
            return DataType(TypeBase.DATE)
        if word in _FOREIGN_TYPES:
            raise UnsupportedConstruct(f"unsupported type {tok.text} at line {tok.line}")
        raise self.error("expected a type keyword")

    def literal(self) -> str:
        tok = self.peek()
        if tok is None:
            raise self.error("expected a literal")
        if tok.text == "-":
            self.advance()
            number = self.peek()
            if number is None or not re.fullmatch(r"\d+(\.\d+)?", number.text):
                raise self.error("expected a number after '-'")
            self.advance()
            return f"-{number.text}"
        if re.fullmatch(r"\d+(\.\d+)?", tok.text) or tok.text.startswith("'"):
            self.advance()
            return tok.text
        if tok.upper == "DATE":
            self.advance()
            value = self.peek()
            if value is None or not value.text.startswith("'"):
                raise self.error("expected a quoted date")
            self.advance()
            return f"DATE {value.text}"
        if tok.upper == "NULL":
            self.advance()
            return "NULL"
        raise self.error("expected a literal")

    def balanced_expression(self) -> str:
        """Raw source text between the parentheses starting at the cursor."""
        opening = self.expect_punct("(")
        depth = 1
        while depth:
            tok = self.advance()
            if tok.text == "(":
                depth += 1
            elif tok.text == ")":
                depth -= 1
                closing = tok
        return self.text[opening.offset + 1 : closing.offset].strip()

    def column_list(self) -> tuple[str, ...]:
        self.expect_punct("(")
        columns = [self.identifier("a column name")]
        while self.peek() is not None and self.peek().text == ",":
            self.advance()
            columns.append(self.identifier("a column name"))
        self.expect_punct(")")
        return tuple(columns)

    def references_clause(
        self, name: str | None, columns: tuple[str, ...], level: ConstraintLevel
    ) -> Constraint:
        self.expect_word("REFERENCES")
        owner, table = self.qualified_name("a referenced table")
        referenced: tuple[str, ...] = ()
        if self.peek() is not None and self.peek().text == "(":
            referenced = self.column_list()
        return Constraint(
            name=name,
            kind=ConstraintKind.FOREIGN_KEY,
            columns=columns,
            referenced_owner=owner,
            referenced_table=table,
            referenced_columns=referenced,
            level=level,
        )

    def table_constraint(self) -> Constraint:
        name: str | None = None
        if self.at_word("CONSTRAINT"):
            self.advance()
            name = self.identifier("a constraint name")
        if self.at_word("PRIMARY"):
            self.advance()
            self.expect_word("KEY")
            return Constraint(name, ConstraintKind.PRIMARY_KEY, self.column_list())
        if self.at_word("UNIQUE"):
            self.advance()
            return Constraint(name, ConstraintKind.UNIQUE, self.column_list())
        if self.at_word("FOREIGN"):
            self.advance()
            self.expect_word("KEY")
            columns = self.column_list()
            return self.references_clause(name, columns, ConstraintLevel.TABLE_LEVEL)
        if self.at_word("CHECK"):
            self.advance()
            expression = self.balanced_expression()
            return Constraint(name, ConstraintKind.CHECK, check_expression=expression)
        raise self.error("expected PRIMARY KEY, UNIQUE, FOREIGN KEY or CHECK")

    def column_items(self, column: str) -> list[Constraint]:
        """Inline DEFAULT / NOT NULL / named constraint items after a type."""
        found: list[Constraint] = []
        while True:
            if self.at_word("DEFAULT"):
                self.advance()
                found.append(
                    Constraint(
                        None,
                        ConstraintKind.DEFAULT,
                        (column,),
                        default_literal=self.literal(),
                        level=ConstraintLevel.COLUMN_LEVEL,
                    )
                )
                continue
            if self.at_word("NOT"):
                self.advance()
                self.expect_word("NULL")
                found.append(
                    Constraint(
                        None, ConstraintKind.NOT_NULL, (column,), level=ConstraintLevel.COLUMN_LEVEL
                    )
                )
                continue
            if self.at_word("CONSTRAINT"):
                self.advance()
                name = self.identifier("a constraint name")
                if self.at_word("NOT"):
                    self.advance()
                    self.expect_word("NULL")
                    found.append(
                        Constraint(
                            name, ConstraintKind.NOT_NULL, (column,), level=ConstraintLevel.COLUMN_LEVEL
                        )
                    )
                elif self.at_word("UNIQUE"):
                    self.advance()
                    found.append(
                        Constraint(name, ConstraintKind.UNIQUE, (column,), level=ConstraintLevel.COLUMN_LEVEL)
                    )
                elif self.at_word("PRIMARY"):
                    self.advance()
                    self.expect_word("KEY")
                    found.append(
                        Constraint(
                            name, ConstraintKind.PRIMARY_KEY, (column,), level=ConstraintLevel.COLUMN_LEVEL
                        )
                    )
                elif self.at_word("CHECK"):
                    self.advance()
                    found.append(
                        Constraint(
                            name,
                            ConstraintKind.CHECK,
                            (column,),
                            check_expression=self.balanced_expression(),
                            level=ConstraintLevel.COLUMN_LEVEL,
                        )
                    )
                elif self.at_word("REFERENCES"):
                    found.append(self.references_clause(name, (column,), ConstraintLevel.COLUMN_LEVEL))
                else:
                    raise self.error("expected an inline constraint kind")
                continue
            if self.at_word("REFERENCES"):
                found.append(self.references_clause(None, (column,), ConstraintLevel.COLUMN_LEVEL))
                continue
            return found

    def create_table(self) -> tuple[Table, str | None]:
        leading = self.peek()
        if leading is not None and leading.upper in _FOREIGN_STATEMENTS:
            raise UnsupportedConstruct(f"unsupported statement {leading.text} at line {leading.line}")
        self.expect_word("CREATE")
        if not self.at_word("TABLE"):
            tok = self.peek()
            if tok is not None and _BARE_IDENT_RE.fullmatch(tok.text or ""):
                raise UnsupportedConstruct(f"unsupported statement CREATE {tok.text} at line {tok.line}")
            raise self.error("expected TABLE")
        self.advance()
        owner, name = self.qualified_name("a table name")
        self.expect_punct("(")

        columns: list[Column] = []
        constraints: list[Constraint] = []
        while True:
            if self.at_word("CONSTRAINT", "PRIMARY", "UNIQUE", "FOREIGN", "CHECK"):
                constraints.append(self.table_constraint())
            else:
                col_name = self.identifier("a column or constraint definition")
                data_type = self.data_type()
                columns.append(Column(col_name, data_type))
                constraints.extend(self.column_items(col_name))
            tok = self.peek()
            if tok is not None and tok.text == ",":
                self.advance()
                continue
            self.expect_punct(")")
            break

        if self.peek() is not None and self.peek().text == ";":
            self.advance()

        # A table-level CHECK names the columns its expression mentions.
        col_names = tuple(c.name for c in columns)
        fixed = [
            con
            if con.kind is not ConstraintKind.CHECK or con.columns
            else Constraint(
                con.name,
                con.kind,
                expression_columns(con.check_expression or "", col_names),
                check_expression=con.check_expression,
                level=con.level,
            )
            for con in constraints
        ]
        return build_table(name, columns, fixed), owner

    def at_end(self) -> bool:
        return self.peek() is None


def parse_create_table(text: str) -> tuple[Table, str | None]:
    """Parse a single CREATE TABLE statement.

    Returns the table plus the optional ``owner.`` prefix.  Raises
    DdlSyntaxError with a 1-based line/column position, or
    UnsupportedConstruct for recognized SQL outside the grammar.
    """
    parser = _Parser(text, _lex(text))
    table, owner = parser.create_table()
    if not parser.at_end():
        raise parser.error("expected end of statement")
    return table, owner


def parse_statements(text: str) -> list[tuple[Table, str | None]]:
    """Parse every statement in a script, annotating errors with the
    1-based statement index."""
    parser = _Parser(text, _lex(text))
    parsed: list[tuple[Table, str | None]] = []
    while not parser.at_end():
        try:
            parsed.append(parser.create_table())
        except (DdlSyntaxError, UnsupportedConstruct) as exc:
            exc.args = (f"statement {len(parsed) + 1}: {exc.args[0]}",)
            raise
    return parsed


DEFAULT_OWNER = "SCOTT"


def parse_script(text: str) -> Schema:
    """Parse a script of CREATE TABLE statements into a Schema.

    The schema owner is the single explicit ``owner.`` prefix when one
    appears; mixing two distinct owners is rejected (refactoring is scoped
    to one schema).  Duplicate table names are kept for validate_schema to
    flag.
    """
    parsed = parse_statements(text)
    owners = {owner for _, owner in parsed if owner is not None}
    if len(owners) > 1:
        raise UnsupportedConstruct(f"script names multiple schema owners: {', '.join(sorted(owners))}")
    owner = owners.pop() if owners else DEFAULT_OWNER
    return Schema(owner=owner, tables=tuple(table for table, _ in parsed))


def parse_data_type(text: str) -> DataType:
    """Parse a bare type spelling such as ``VARCHAR2(32)`` or ``NUMBER(3,0)``."""
    parser = _Parser(text, _lex(text))
    data_type = parser.data_type()
    if not parser.at_end():
        raise parser.error("expected end of type")
    return data_type


def _maybe_quote(name: str) -> str:
    if _BARE_IDENT_RE.fullmatch(name) and name == name.upper():
        return name
    return f'"{name}"'


def render_create_table(table: Table, dialect: Dialect = ORACLELIKE) -> str:
    """Canonical CREATE TABLE text: one item per line, keywords uppercase,
    NOT NULL and DEFAULT inline on their columns, every other constraint as
    a table-level clause.  Declared constraint names are kept; synthetic
    ones are left unnamed so the text re-parses to an equivalent table."""
    items: list[str] = []
    for col in table.columns:
        inline_nn = next(
            (
                c
                for c in table.constraints
                if c.kind is ConstraintKind.NOT_NULL and c.mentions(col.name)
            ),
            None,
        )
        items.append(
            render_column_def(
                _maybe_quote(col.name),
                col.data_type,
                dialect,
                default=col.default_value,
                not_null=inline_nn is not None,
                not_null_constraint=(
                    inline_nn.name if inline_nn is not None and not inline_nn.is_synthetic else None
                ),
            )
        )
    for con in table.constraints:
        if con.kind in (ConstraintKind.NOT_NULL, ConstraintKind.DEFAULT):
            continue
        items.append(render_constraint_clause(con))

    body = ",\n  ".join(items)
    return f"CREATE TABLE {_maybe_quote(table.name)}\n( {body}\n)"


@dataclass(frozen=True, slots=True)
class ConstraintStringRow:
    """One row of the per-column constraint-string extraction."""

    column_name: str
    row_index: int
    table_name: str
    constraint_string: str


def extract_constraint_strings(
    table: Table, dialect: Dialect = ORACLELIKE
) -> list[ConstraintStringRow]:
    """Per-column constraint strings: the column definition followed by every
    table-level constraint clause that references the column.

    Concatenating all rows mentions every constraint of the table at least
    once; row indexes are contiguous from 1 in column order.
    """
    rows: list[ConstraintStringRow] = []
    for index, col in enumerate(table.columns, start=1):
        inline_nn = next(
            (
                c
                for c in table.constraints
                if c.kind is ConstraintKind.NOT_NULL and c.mentions(col.name)
            ),
            None,
        )
        parts = [
            render_column_def(
                col.name,
                col.data_type,
                dialect,
                default=col.default_value,
                not_null=inline_nn is not None,
            )
        ]
        for con in table.constraints:
            if con.kind in (ConstraintKind.NOT_NULL, ConstraintKind.DEFAULT):
                continue
            if con.mentions(col.name):
                parts.append(render_constraint_clause(con))
        rows.append(ConstraintStringRow(col.name, index, table.name, " ".join(parts)))
    return rows
