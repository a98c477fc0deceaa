import functools
from collections import defaultdict

import pytest
from hypothesis import HealthCheck, settings

from wrcomm import oracle
from wrcomm.groups import GroupId, GroupKind, standard_generators
from wrcomm.tree import signature

settings.register_profile("wrcomm", deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("wrcomm")


@functools.lru_cache(maxsize=None)
def full_group(arities: tuple[int, ...]) -> frozenset:
    return oracle.enumerate_group(GroupId(GroupKind.FULL_WREATH, signature(arities)))


@functools.lru_cache(maxsize=None)
def sylow_alt_group(k: int) -> frozenset:
    return oracle.enumerate_group(GroupId.binary(GroupKind.SYLOW_ALT, k))


@functools.lru_cache(maxsize=None)
def derived_closure(kind: GroupKind, arities: tuple[int, ...]) -> frozenset:
    """Oracle derived subgroup computed from the standard generators."""
    sig = signature(arities)
    gens = standard_generators(GroupId(kind, sig))
    return oracle.derived_subgroup_closure(gens, sig)


# -- one summary line per acceptance criterion ---------------------------------

_criteria: dict[int, list[str]] = defaultdict(list)


def pytest_runtest_logreport(report):
    for key, value in report.user_properties:
        if key == "criterion" and (report.when == "call" or report.outcome != "passed"):
            _criteria[value].append(report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        ok = all(o == "passed" for o in _criteria[n])
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}")


@pytest.fixture
def criterion(record_property):
    return lambda n: record_property("criterion", n)
