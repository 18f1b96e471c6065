from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): acceptance criterion")
    config._acceptance = {}
    config._acceptance_notes = {}


def pytest_collection_modifyitems(config, items):
    for item in items:
        mark = item.get_closest_marker("acceptance")
        if mark is not None:
            config._acceptance[item.nodeid] = mark.args


def pytest_terminal_summary(terminalreporter, config):
    if not config._acceptance:
        return
    outcome = {}
    for key in ("passed", "failed", "error", "skipped"):
        for rep in terminalreporter.stats.get(key, []):
            if rep.nodeid in config._acceptance and (rep.when == "call" or key != "passed"):
                outcome[rep.nodeid] = "PASS" if key == "passed" else "FAIL"
    terminalreporter.section("acceptance criteria")
    for nodeid, (number, title) in sorted(config._acceptance.items(), key=lambda kv: kv[1][0]):
        note = config._acceptance_notes.get(nodeid, "")
        terminalreporter.write_line(f"[{outcome.get(nodeid, 'NOT RUN')}] {number}. {title}" + (f": {note}" if note else ""))


@pytest.fixture
def note(request):
    """Attach a one-line measurement to the acceptance summary."""
    def write(text):
        request.config._acceptance_notes[request.node.nodeid] = text
    return write


@pytest.fixture
def fixtures():
    return FIXTURES
