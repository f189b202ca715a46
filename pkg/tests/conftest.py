import io
from datetime import datetime

import pytest

from refactordb.cli import Console, Session
from refactordb.demo import corpus_schema, demo_store
from refactordb.dialect import ORACLELIKE

FIXED = datetime(2009, 1, 24, 12, 2, 6)


@pytest.fixture(scope="session")
def corpus():
    return corpus_schema()


@pytest.fixture()
def demo():
    return demo_store(FIXED)


def make_session(store, inputs, dialect=ORACLELIKE):
    """An in-process CLI session fed from a list of input lines."""
    stdin = io.StringIO("".join(line + "\n" for line in inputs))
    stdout = io.StringIO()
    console = Console(stdin=stdin, stdout=stdout)
    session = Session(dialect=dialect, store=store, console=console, clock=lambda: FIXED)
    return session, stdout
