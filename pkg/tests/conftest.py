import pytest

ACCEPTANCE = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[ACCEPTANCE] = {}


@pytest.fixture
def acceptance_log(request):
    """Per-criterion outcomes, keyed by number, collected for the terminal summary."""
    return request.config.stash[ACCEPTANCE]


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    log = config.stash.get(ACCEPTANCE, {})
    if not log:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(log):
        checks = log[number]
        verdict = "PASS" if all(ok for _, ok, _, _ in checks) else "FAIL"
        detail = "; ".join(f"{name} {'pass' if ok else 'fail'} ({note})" for name, ok, note, _ in checks)
        terminalreporter.write_line(f"criterion {number:2d}: {verdict}  {detail}")
