import pytest

from cornellqes.model import preset

_CRITERIA = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(cid, title): acceptance criterion reported in the summary")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    # record the call phase, or a setup failure that prevented it
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        cid, title = mark.args
        detail = ""
        if rep.failed and call.excinfo is not None:
            detail = str(call.excinfo.value).splitlines()[0][:160] if str(call.excinfo.value) else call.excinfo.typename
        _CRITERIA.append((cid, title, rep.passed, detail))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for cid, title, ok, detail in sorted(_CRITERIA, key=lambda c: c[0]):
        line = f"[{'PASS' if ok else 'FAIL'}] {cid:4s} {title}"
        if detail:
            line += f"  -- {detail}"
        tr.write_line(line)
    n_ok = sum(1 for c in _CRITERIA if c[2])
    tr.write_line(f"{n_ok}/{len(_CRITERIA)} criteria passed")


@pytest.fixture(scope="session")
def charm():
    return preset("charmonium")


@pytest.fixture(scope="session")
def bottom():
    return preset("bottomonium")
