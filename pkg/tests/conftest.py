from __future__ import annotations

import pathlib

import pytest

from urm import Jump, Program, Succ, Transfer, Zero

SAMPLES = pathlib.Path(__file__).resolve().parent.parent / "samples"


@pytest.fixture
def u_minus() -> Program:
    return Program((Jump(1, 2, 5), Succ(2), Succ(3), Jump(1, 1, 1), Transfer(3, 1)))


@pytest.fixture
def prog_b() -> Program:
    return Program((Jump(1, 2, 2), Jump(1, 2, 2)))


@pytest.fixture
def prog_v() -> Program:
    return Program((Succ(1), Jump(2, 3, 1)))


@pytest.fixture
def prog_loop() -> Program:
    return Program((Jump(1, 1, 1),))


@pytest.fixture
def samples_dir() -> pathlib.Path:
    return SAMPLES
