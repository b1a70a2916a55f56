import random

import pytest

from clifford4.atlas import build, write_cache


@pytest.fixture(scope="session")
def complex_atlas():
    return build("complex")


@pytest.fixture(scope="session")
def real_atlas():
    return build("real")


@pytest.fixture(scope="session")
def atlases(complex_atlas, real_atlas):
    return {"complex": complex_atlas, "real": real_atlas}


@pytest.fixture(scope="session")
def cli_cache(tmp_path_factory, complex_atlas, real_atlas):
    """A cache directory pre-populated for both modes (CLI tests reuse it)."""
    d = tmp_path_factory.mktemp("cache")
    write_cache(complex_atlas, d)
    write_cache(real_atlas, d)
    return d


@pytest.fixture
def rng():
    return random.Random(20240601)


def sample_states(S, n, rng):
    idx = sorted(rng.sample(range(len(S)), min(n, len(S))))
    return [S.state(i) for i in idx]


# ---------------------------------------------------------------------------
# acceptance summary: tests/test_acceptance.py records one result per check;
# one PASS/FAIL line per criterion is printed at the end of the run.

ACCEPTANCE: dict[int, list[tuple[str, bool, str]]] = {}


@pytest.fixture
def criterion():
    def record(n: int, check: str, ok: bool, detail: str = "") -> bool:
        ACCEPTANCE.setdefault(n, []).append((check, bool(ok), detail))
        return bool(ok)
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        checks = ACCEPTANCE[n]
        ok = all(c[1] for c in checks)
        tr.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}")
        for name, c_ok, detail in checks:
            tr.write_line(f"    {'ok  ' if c_ok else 'FAIL'} {name}" + (f" -- {detail}" if detail else ""))
