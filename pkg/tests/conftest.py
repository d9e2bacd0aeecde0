"""Fixtures shared across the test suite."""

import pathlib

import pytest

from richman import parse_game_graph, solve_exact

DATA = pathlib.Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def fig1():
    return parse_game_graph((DATA / "fig1.rg").read_text())


@pytest.fixture(scope="session")
def path_graph():
    return parse_game_graph((DATA / "path.rg").read_text())


@pytest.fixture(scope="session")
def star():
    return parse_game_graph((DATA / "star.rg").read_text())


@pytest.fixture(scope="session")
def fig1_costs(fig1):
    return solve_exact(fig1)


@pytest.fixture(scope="session")
def path_costs(path_graph):
    return solve_exact(path_graph)


@pytest.fixture(scope="session")
def star_costs(star):
    return solve_exact(star)


@pytest.fixture(scope="session")
def data_dir():
    return DATA


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: end-to-end acceptance checks")
