import random

import pytest

from rdfeq.workloads import pex, random_instance


@pytest.fixture
def pex_instance():
    return pex()


@pytest.fixture
def random_instances():
    def make(count, seed=0, shape=None):
        rng = random.Random(seed)
        return [random_instance(rng, shape) for _ in range(count)]

    return make


def labels(dictionary, triples):
    """Readable, sortable form of encoded triples for assertions."""
    return sorted(tuple(dictionary.show(r) for r in t) for t in triples)


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
