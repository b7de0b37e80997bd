"""Shared fixtures: model files, sessions and an isolated configuration file."""

from __future__ import annotations

from pathlib import Path

import pytest

from sullivanloops.config import RunConfig
from sullivanloops.modelfile import load_model
from sullivanloops.workspace import Session

MODELS = Path(__file__).resolve().parent.parent / "models"

CORRUPTED_MODEL = """\
model broken
generator x : 2
generator y : 3
generator z : 4
d y = x^2
d z = x*y
relation x^4 = 0
dimension 2
fundamental x
"""


@pytest.fixture(autouse=True)
def isolated_config(tmp_path, monkeypatch):
    """Point the configuration file at a temporary path for every test."""
    path = tmp_path / "sullivanloops.conf"
    monkeypatch.setenv("SULLIVANLOOPS_CONFIG", str(path))
    return path


def model_path(name: str) -> Path:
    return MODELS / f"{name}.model"


def make_session(name: str, max_degree: int) -> Session:
    description = load_model(model_path(name))
    config = RunConfig(model_path=model_path(name), max_degree=max_degree)
    return Session(description, config)


@pytest.fixture(scope="session")
def cp1():
    return make_session("cp1", 10)


@pytest.fixture(scope="session")
def cp2():
    return make_session("cp2", 12)


@pytest.fixture(scope="session")
def s3():
    return make_session("s3", 9)


@pytest.fixture(scope="session")
def s2():
    return make_session("s2", 8)


@pytest.fixture
def corrupted_model(tmp_path) -> Path:
    path = tmp_path / "broken.model"
    path.write_text(CORRUPTED_MODEL)
    return path
