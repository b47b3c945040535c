import pytest

from class2groups.engine import family_parameters, make_group

ACCEPTANCE = []


def groups_up_to(max_order, families=("Q1", "Q2", "R3")):
    return [make_group(f, n, r) for f in families for n, r in family_parameters(f, max_order)]


def group_id(G):
    return G.name


@pytest.fixture(scope="session")
def d8():
    return make_group("Q1", 2, 1)


@pytest.fixture(scope="session")
def q8():
    return make_group("R3", 1)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, ok, detail in sorted(ACCEPTANCE, key=lambda row: row[0]):
        line = f"[{'PASS' if ok else 'FAIL'}] {number:2d}. {title}"
        if detail:
            line += f" -- {detail}"
        terminalreporter.write_line(line)
