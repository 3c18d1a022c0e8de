"""Shared fixtures: generated circuits and the on-disk QASM corpus."""

import pathlib

import pytest

from qpart import generate, parse_qasm

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "fixtures"


def load_fixture(name: str):
    path = FIXTURES / name
    return parse_qasm(path.read_text(), name=path.stem)


def fixture_names() -> list[str]:
    return sorted(p.name for p in FIXTURES.glob("*.qasm"))


@pytest.fixture(scope="session")
def fixtures_dir() -> pathlib.Path:
    return FIXTURES


@pytest.fixture(scope="session")
def ghz4():
    return generate("ghz", 4)


@pytest.fixture(scope="session")
def ghz10():
    return generate("ghz", 10)


@pytest.fixture(scope="session")
def qft4():
    return generate("qft", 4)


@pytest.fixture(scope="session")
def qft8():
    return generate("qft", 8)
