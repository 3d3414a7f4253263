from pathlib import Path

import pytest

from regtype import parse_definitions, parse_type_expr, simplify

DATA = Path(__file__).resolve().parent.parent / "data"


def load(name):
    return parse_definitions((DATA / name).read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def data_dir():
    return DATA


@pytest.fixture(scope="session")
def ex0():
    return load("ex0.rt")


@pytest.fixture(scope="session")
def ex1():
    return load("ex1.rt")


@pytest.fixture(scope="session")
def ex3():
    return load("ex3.rt")


@pytest.fixture(scope="session")
def null_defs():
    return load("null.rt")


@pytest.fixture(scope="session")
def nat_only():
    # the ex1 rules without lists; small enough to enumerate deep
    return parse_definitions("""
        type Nat = 0 | s(Nat);
        type Even = 0 | s(Odd);
        type Odd = s(Even);
    """)


@pytest.fixture
def q():
    return parse_type_expr


@pytest.fixture
def simple():
    return simplify
