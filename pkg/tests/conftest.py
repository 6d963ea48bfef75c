import pytest

from purecode import kernels

BACKENDS = kernels.available_backends()


@pytest.fixture(params=sorted(BACKENDS))
def backend(request, monkeypatch):
    """Run the test once per importable kernel backend."""
    impl = BACKENDS[request.param]
    for name in ("block_entropy", "sample_block", "sample_code_block", "decode_scan"):
        monkeypatch.setattr(kernels, name, getattr(impl, name))
    return request.param


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
