import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("repo", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")


@pytest.fixture(params=["python", "cython"])
def backend(request):
    """Run the test once per kernel backend."""
    from conepf import kernels

    if request.param == "cython":
        try:
            kernels.backend_module("cython")
        except ImportError:
            pytest.skip("compiled backend not built")
    prev = kernels.BACKEND
    kernels.use_backend(request.param)
    yield request.param
    kernels.use_backend(prev)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(name): acceptance criterion reported in the summary")
    config._criteria = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call":
        return
    detail = dict(item.user_properties).get("detail", "")
    line = f"[{'PASS' if rep.passed else 'FAIL'}] {mark.args[0]}"
    item.config._criteria.append(line + (f": {detail}" if detail else ""))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if config._criteria:
        terminalreporter.section("acceptance criteria")
        for line in config._criteria:
            terminalreporter.write_line(line)
