"""Shared fixtures: engine results are expensive, so compute each once per session."""

from __future__ import annotations

import functools

import pytest

from dwplane import dwengine, oracle
from dwplane.normspace import DualOf, build_norm, parse_norm

SHIPPED = ("mixed:inf,1", "mixed:2,1", "lp:inf", "regular:12", "lp:2")

# The oracle's directions coincide with the engine's default coarse angle grid
# (so every oracle cell is an engine starting cell); the t grid is as fine as
# the time budget allows, since it limits the oracle near t -> 1.
ORACLE_CFG = oracle.OracleConfig(angle_n=720, t_n=1000)


@functools.lru_cache(maxsize=None)
def norm(spec: str):
    return build_norm(parse_norm(spec))


@functools.lru_cache(maxsize=None)
def dual_norm(spec: str):
    return build_norm(DualOf(parse_norm(spec)))


@functools.lru_cache(maxsize=None)
def dw(spec: str):
    return dwengine.compute_dw(norm(spec))


@functools.lru_cache(maxsize=None)
def dw_dual(spec: str):
    return dwengine.compute_dw(dual_norm(spec))


@functools.lru_cache(maxsize=None)
def dwb(spec: str):
    return dwengine.compute_dwb(norm(spec))


@functools.lru_cache(maxsize=None)
def ib(spec: str):
    return dwengine.compute_ib(norm(spec))


@functools.lru_cache(maxsize=None)
def equivalences(spec: str):
    return dwengine.check_equivalences(norm(spec))


@functools.lru_cache(maxsize=None)
def oracle_dw(spec: str):
    return oracle.oracle_dw(norm(spec), ORACLE_CFG)


@pytest.fixture(params=SHIPPED)
def shipped(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import LINES
    except ImportError:
        return
    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)
