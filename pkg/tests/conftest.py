import pytest

from constshape import io


@pytest.fixture(scope="session")
def tm():
    return io.fixture("triangular")


@pytest.fixture(scope="session")
def s1():
    return io.fixture("sigma1")


@pytest.fixture(scope="session")
def tm1():
    return io.fixture("thue_morse_1d")


@pytest.fixture(scope="session")
def sparse():
    return io.fixture("sparse13")


@pytest.fixture(scope="session")
def phi(s1, tm):
    from constshape.factor import BlockMap
    return BlockMap.from_doc(io.read_json("phi_sigma1_to_triangular"), s1, tm)


@pytest.fixture(scope="session")
def psi(s1, tm):
    from constshape.factor import BlockMap
    return BlockMap.from_doc(io.read_json("psi_triangular_to_sigma1"), tm, s1)


# ------------------------------------------------------ acceptance report

CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): part of acceptance criterion n")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when not in ("setup", "call"):
        return
    if rep.when == "setup" and not rep.failed:
        return
    xfail = getattr(rep, "wasxfail", None)
    CRITERIA.setdefault(mark.args[0], []).append((item.name, rep.passed and not xfail, xfail))


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    tr = terminalreporter
    tr.write_sep("=", "acceptance criteria")
    for n in sorted(CRITERIA):
        parts = CRITERIA[n]
        bad = [name for name, ok, _ in parts if not ok]
        status = "PASS" if not bad else "FAIL"
        line = f"criterion {n:2d}: {status} ({len(parts) - len(bad)}/{len(parts)} checks)"
        if bad:
            line += " failing: " + ", ".join(bad)
        tr.write_line(line)
