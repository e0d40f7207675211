import pytest

from lm05decoy.core import ChannelPoint, MeasuredStats

# Weak+vacuum measurements: loss_db, Q_mu, E_mu, Q_nu, E_nu, Y0
TABLE1 = [
    (1.24, 1.182e-2, 4.487e-2, 5.245e-3, 4.448e-2, 4.383e-6),
    (3.26, 4.588e-3, 4.141e-2, 2.137e-3, 4.180e-2, 3.518e-6),
    (5.23, 2.059e-3, 4.964e-2, 8.470e-4, 5.084e-2, 3.251e-6),
    (6.50, 1.086e-3, 5.397e-2, 4.706e-4, 5.410e-2, 3.686e-6),
    (8.38, 4.995e-4, 5.274e-2, 2.120e-4, 5.468e-2, 3.918e-6),
    (9.46, 2.837e-4, 6.215e-2, 1.340e-5, 6.850e-2, 3.947e-6),
    (11.01, 1.303e-4, 6.117e-2, 5.711e-5, 8.473e-2, 4.005e-6),
]

# Published derived values per row: Q12^L, e12^U, R^L
TABLE2 = [
    (9.535e-3, 5.546e-2, 3.108e-3),
    (3.518e-3, 5.361e-2, 1.188e-3),
    (1.573e-3, 6.421e-2, 3.689e-4),
    (8.310e-4, 6.887e-2, 1.560e-4),
    (4.060e-4, 6.135e-2, 1.029e-4),
    (2.340e-4, 6.910e-2, 4.058e-5),
    (9.825e-5, 6.625e-2, 1.411e-5),
]


def table1_row(i: int) -> tuple[ChannelPoint, MeasuredStats]:
    loss, *values = TABLE1[i]
    return ChannelPoint(loss), MeasuredStats(*values)


# -- acceptance reporting ----------------------------------------------------

_criteria: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _criteria[number] = (title, "PASS" if report.passed else "FAIL")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, verdict = _criteria[number]
        terminalreporter.write_line(f"[{verdict}] criterion {number}: {title}")
