from __future__ import annotations

import os

import pytest
from hypothesis import HealthCheck, settings

from dqcount.generators import generate, random_corpus

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("thorough", max_examples=400, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# criterion id -> (passed, detail), filled in by tests/test_acceptance.py
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture(scope="session")
def corpus2():
    """Seeded random 2-DQBFs, n <= 6, dependency widths <= 3."""
    return [generate(s) for s in random_corpus(500, seed=1, n_max=6, width_max=3, k=2)]


@pytest.fixture(scope="session")
def corpus_k():
    """Seeded random k-DQBFs, k in {3, 4}, n <= 4, widths <= 2."""
    specs = random_corpus(50, seed=41, n_max=4, width_max=2, k=3)
    specs += random_corpus(50, seed=42, n_max=4, width_max=2, k=4)
    return [generate(s) for s in specs]


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[cid]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {cid}: {detail}")
