import warnings

import pytest

from bsosim.field import AdiabaticityWarning, FieldParams


def make_params(**kw):
    """FieldParams with the adiabaticity warning silenced."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", AdiabaticityWarning)
        return FieldParams(**kw)


@pytest.fixture
def paper_params():
    # eta0 = 0.05, tau_sw * omega = 100
    return make_params(g0M=0.2, omega=1.0, phi=0.3, tau_sw=100.0)


def pytest_terminal_summary(terminalreporter):
    lines = []
    for reports in terminalreporter.stats.values():
        for rep in reports:
            for name, value in getattr(rep, "user_properties", ()):
                if name == "criterion" and getattr(rep, "when", "") == "call":
                    lines.append(value)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
