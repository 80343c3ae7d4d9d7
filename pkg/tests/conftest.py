import pytest

from dictcore.fixture import make_fixture
from dictcore.graph import graph_from_edges
from dictcore.ingest import link_graph


@pytest.fixture(scope="session")
def fixture_data():
    return make_fixture()


@pytest.fixture(scope="session")
def fixture_graph(fixture_data):
    g, _ = link_graph(fixture_data.records, "noun")
    return g


@pytest.fixture
def triangle():
    return graph_from_edges(3, [(0, 1), (1, 2), (2, 0)])
