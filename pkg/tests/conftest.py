from pathlib import Path

import pytest

from cactoid.graph import make_block
from cactoid.io import load_spec, parse_graph_spec

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def fixture_path(name: str) -> str:
    return str(FIXTURES / name)


@pytest.fixture
def figure_block():
    # path 2, 1; cycle 1 branch -1, -1 closing -1; cycle 2 branch 2, 1 closing 1
    return make_block([2, 1], [([-1, -1], -1), ([2, 1], 1)])


@pytest.fixture
def two_triangles():
    return parse_graph_spec(load_spec(fixture_path("two_triangles.json")))
