import functools

from disk_fronts.analysis import build_series

ACCEPTANCE_LINES = []


@functools.lru_cache(maxsize=None)
def cached_series(a, t_min, t_max, dt, N=10, quad_tol=1e-6):
    """Simulated series shared by the analysis and acceptance tests."""
    return build_series(a, t_min, t_max, dt, N, quad_tol, n_jobs=1)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("#")[1].split()[0])):
            terminalreporter.write_line(line)
