import functools
import os
import random

import pytest

from src.config.settings import AGL_FIXTURES, DATA_DIR, M20_FIXTURE
from src.core.derangement_graph import Graph, graph_complement
from src.utils.spec_parser import load_group_file


def pytest_addoption(parser):
    parser.addoption('--runslow', action='store_true', default=False, help='run slow tests')


def pytest_collection_modifyitems(config, items):
    if config.getoption('--runslow'):
        return
    skip_slow = pytest.mark.skip(reason='needs --runslow')
    for item in items:
        if 'slow' in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(scope='session')
def data_dir():
    return DATA_DIR


@pytest.fixture(scope='session')
def m20():
    return load_group_file(M20_FIXTURE, 'M20')


@pytest.fixture(scope='session')
def agl():
    """AGL(1, q) from the shipped generator files, keyed by q."""
    return {q: load_group_file(path, f'AGL(1,{q})') for q, path in AGL_FIXTURES.items()}


def _exhaustive_alpha(X: Graph) -> int:
    rows = X.rows

    @functools.lru_cache(maxsize=None)
    def best(mask):
        if not mask:
            return 0
        low = mask & -mask
        v = low.bit_length() - 1
        return max(best(mask ^ low), 1 + best(mask & ~rows[v] & ~low))

    return best(X.all_mask)


@pytest.fixture(scope='session')
def exhaustive_alpha():
    return _exhaustive_alpha


@pytest.fixture(scope='session')
def exhaustive_omega():
    return lambda X: _exhaustive_alpha(graph_complement(X))


def random_graph(rng: random.Random, n: int, density: float) -> Graph:
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < density]
    return Graph.from_edges(n, edges)


@pytest.fixture(scope='session')
def random_graphs():
    rng = random.Random(20240611)
    graphs = []
    for _ in range(200):
        n = rng.randint(1, 18)
        graphs.append(random_graph(rng, n, rng.choice([0.1, 0.3, 0.5, 0.7, 0.9])))
    return graphs


@pytest.fixture
def write_file(tmp_path):
    def write(name, text):
        path = os.path.join(tmp_path, name)
        with open(path, 'w', encoding='utf-8') as f:
            f.write(text)
        return path
    return write
