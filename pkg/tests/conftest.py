import os

import pytest

from rigid_deform.acceptance import AcceptanceConfig, _Runs

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def acceptance_runs():
    cfg = AcceptanceConfig(workers=min(4, os.cpu_count() or 1))
    return cfg, _Runs(cfg)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
