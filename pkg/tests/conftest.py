import random
import sys

import pytest
from hypothesis import HealthCheck, settings

from grouprem.groups import ElementSet, make_cyclic, make_dihedral, make_direct_product, make_symmetric

settings.register_profile(
    "repo",
    deadline=None,
    max_examples=60,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")


def small_groups():
    z2 = make_cyclic(2)
    return [
        make_cyclic(1),
        make_cyclic(2),
        make_cyclic(5),
        make_cyclic(12),
        make_dihedral(3),
        make_dihedral(4),
        make_symmetric(3),
        make_direct_product(make_direct_product(z2, z2), make_cyclic(3)),
    ]


def random_set(rng: random.Random, n: int, density: float | None = None) -> ElementSet:
    d = rng.random() if density is None else density
    return ElementSet.of([x for x in range(n) if rng.random() < d], n)


@pytest.fixture
def rng():
    return random.Random(20240611)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.report_line(num))
