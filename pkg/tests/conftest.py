import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from mealygroup import hanoi_automaton


@pytest.fixture(scope="session")
def ha3():
    return hanoi_automaton(3)


@pytest.fixture(scope="session")
def ha4():
    return hanoi_automaton(4)


@pytest.fixture(scope="session")
def ha5():
    return hanoi_automaton(5)
