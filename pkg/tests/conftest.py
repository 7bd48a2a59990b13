import numpy as np
import pytest

ALPHA_GRID_21 = np.linspace(0.0, 1.0, 21)

_acceptance = []


def random_density(rng, n_qubits, rank=None):
    d = 2**n_qubits
    rank = rank or d
    g = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_unitary(rng, d):
    z = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, part): exit criterion and the sub-check it covers")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        part = marker.args[1]
        if hasattr(item, "callspec"):
            part += f" [{item.callspec.id}]"
        _acceptance.append((marker.args[0], part, rep.outcome == "passed"))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    grouped = {}
    for number, part, ok in _acceptance:
        grouped.setdefault(number, []).append((part, ok))
    for number in sorted(grouped):
        parts = grouped[number]
        status = "PASS" if all(ok for _, ok in parts) else "FAIL"
        detail = "; ".join(f"{part} {'ok' if ok else 'FAILED'}" for part, ok in parts)
        terminalreporter.write_line(f"{status} criterion {number}: {detail}")
