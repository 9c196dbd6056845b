import itertools
import sys

import pytest

from coxsplit.coxeter import INF, dihedral, free_product, racg_cycle, triangle_system, type_a
from coxsplit.oracles import perm_of_word


@pytest.fixture
def a2():
    return type_a(2)


@pytest.fixture
def d_inf():
    return dihedral(INF)


@pytest.fixture
def affine():
    return triangle_system(3, 3, 3)


@pytest.fixture
def free3():
    return free_product(3)


@pytest.fixture
def racg4():
    return racg_cycle(4)


def shortlex_table(perms, max_len):
    """Map each permutation to the ShortLex-least word producing it (brute force)."""
    rank = len(perms)
    table = {}
    for n in range(max_len + 1):
        for word in itertools.product(range(1, rank + 1), repeat=n):
            p = perm_of_word(perms, word)
            table.setdefault(p, word)
    return table


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(module.RESULTS):
        name, passed = module.RESULTS[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if passed else 'FAIL'}  {name}")
