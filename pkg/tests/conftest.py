"""Shared fixtures; collects acceptance verdicts for a one-line-per-criterion summary."""

import re

import pytest

ACCEPTANCE: dict[str, tuple[bool, str]] = {}


@pytest.fixture
def criterion(request):
    """Call ``criterion(ok, detail)`` once; the verdict is printed at the end of the run."""
    name = request.node.name

    def record(ok: bool, detail: str) -> bool:
        ACCEPTANCE[name] = (bool(ok), detail)
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    def order(name):
        m = re.search(r"criterion_(\d+)", name)
        return (int(m.group(1)) if m else 99, name)

    for name in sorted(ACCEPTANCE, key=order):
        ok, detail = ACCEPTANCE[name]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
