"""Shared fixtures: cached instance/pair construction and suite-wide
hypothesis settings.  Also prints one summary line per acceptance criterion
at the end of the run (see test_acceptance.py)."""

import functools

from hypothesis import HealthCheck, settings

settings.register_profile(
    "suite",
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much,
                           HealthCheck.function_scoped_fixture],
)
settings.load_profile("suite")

from orbfl.instances import generate


@functools.lru_cache(maxsize=None)
def cached_instance(q, regime, kind, r=0, v=None, seed=0):
    return generate(q, regime, kind, r=r, v=v, seed=seed)


@functools.lru_cache(maxsize=None)
def cached_pair(q, regime, kind, r=0, v=None, seed=0):
    from orbfl.pairs import geometric_pair
    return geometric_pair(cached_instance(q, regime, kind, r=r, v=v, seed=seed))


# (q, regime, kind, r, v, seed) combinations for which geometric_pair is
# defined (even v_L(z^2) and recorded second-algebra data)
PAIR_GRID = tuple(
    (q, regime, kind, r, None, seed)
    for q in (3, 5)
    for regime, kind, r in (("small_w", "unramified", 0),
                            ("small_w", "unramified", 1),
                            ("small_w", "ramified", 0),
                            ("small_w", "ramified", 1),
                            ("small_w", "unramified", 2),
                            ("small_w", "ramified", 2),
                            ("unit_w", "unramified", 0),
                            ("unit_w", "ramified", 0))
    for seed in (0, 1, 2)
)

ACCEPTANCE_RESULTS = {}


def record_criterion(number, description, ok):
    ACCEPTANCE_RESULTS[number] = (description, bool(ok))
    return ok


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        description, ok = ACCEPTANCE_RESULTS[number]
        terminalreporter.write_line(
            "criterion %d [%s]: %s" % (number, "PASS" if ok else "FAIL",
                                       description))
