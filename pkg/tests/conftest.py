import pytest

from blackboard import (
    CommonProperty, ConditionPair, Container, Fact, GenericRule, Link, Network,
)

IS_EMPLOYEE, IS_MANAGER, IS_TEAM, HAS_MANAGER = range(4)
JOHN_DOE, FRONT_DESK = 0, 1


def build_hr_network(ignore=True, create=True) -> Network:
    """Employee-promotion model: John Doe linked to the front desk team."""
    net = Network()
    for name in ("isEmployee", "isManager", "isTeam", "hasManager"):
        net.add(CommonProperty(None, name))
    net.add(Fact(None, True, property_id=IS_EMPLOYEE))
    net.add(Fact(None, True, property_id=IS_TEAM))
    net.add(Fact(None, False, property_id=HAS_MANAGER))
    net.add(Container(JOHN_DOE, "John Doe", [0]))
    net.add(Container(FRONT_DESK, "Front Desk", [1, 2]))
    net.add(Link(0, JOHN_DOE, FRONT_DESK, "member of"))
    net.add(Link(1, FRONT_DESK, JOHN_DOE, "has member"))
    net.add(GenericRule(
        0, "Promote Employee",
        before_one=[ConditionPair(IS_EMPLOYEE, True), ConditionPair(IS_MANAGER, False)],
        before_two=[ConditionPair(IS_TEAM, True), ConditionPair(HAS_MANAGER, False)],
        after_one=[ConditionPair(IS_MANAGER, True)],
        after_two=[ConditionPair(HAS_MANAGER, True)],
        ignore_if_not_present=ignore,
        create_if_not_present=create,
    ))
    net.set_endpoints(JOHN_DOE, FRONT_DESK)
    return net


@pytest.fixture
def hr_network():
    return build_hr_network()


# -- acceptance report -------------------------------------------------------

_ACCEPTANCE = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when == "call" and item.module.__name__.endswith("test_acceptance"):
        doc = (item.function.__doc__ or item.name).strip().splitlines()[0]
        _ACCEPTANCE.append(("PASS" if report.passed else "FAIL", doc))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for status, doc in _ACCEPTANCE:
        terminalreporter.write_line(f"{status}  {doc}")
