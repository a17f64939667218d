import sys
from functools import lru_cache

import pytest

from tamedeg import from_type
from tamedeg.catalog import Catalog
from tamedeg.order import DegenOrder
from tamedeg.tubes import TubeCategory


@lru_cache(maxsize=None)
def order_for(type_name: str, sink: int | None = None) -> DegenOrder:
    return DegenOrder(Catalog(from_type(type_name, sink=sink)))


@lru_cache(maxsize=None)
def tube_order(p: int) -> DegenOrder:
    return DegenOrder(TubeCategory(p))


@pytest.fixture
def e6():
    return order_for("E~6", 3)


@pytest.fixture
def tube4():
    return tube_order(4)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
