import functools
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from qthermo.protocol import ExperimentConfig, sweep  # noqa: E402

DEFAULTS = ExperimentConfig()
P_GRID = (0.0, 0.25, 0.5, 0.75, 1.0)


@functools.lru_cache(maxsize=None)
def cached_sweep(scheme, p, dchi=0.1, chi_max=100.0):
    return sweep(scheme, DEFAULTS.replace(p=p, dchi=dchi, chi_max=chi_max))


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
