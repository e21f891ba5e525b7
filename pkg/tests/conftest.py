import pytest

from revmult.sim import simulate


def load(c, **values):
    """Integer basis state with each named register set to ``values[name]``."""
    state = 0
    for name, v in values.items():
        reg = c.register(name)
        assert 0 <= v < 1 << len(reg), f"{name}={v} does not fit {len(reg)} wires"
        for k, w in enumerate(reg.wires):
            state |= ((v >> k) & 1) << w
    return state


def read(c, state, name):
    return sum(((state >> w) & 1) << k for k, w in enumerate(c.register(name).wires))


def run(c, **values):
    """Simulate from the given register values; return every register's final value."""
    out = simulate(c, load(c, **values))
    return {r.name: read(c, out, r.name) for r in c.registers}


@pytest.fixture
def runner():
    return run


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
