import pytest

from symvenn.core import ClusterForm, parse_sequence

NEWROZ_ALPHA = parse_sequence(
    "3 2 3 4 3 4 5 4 3 2 3 4 3 4 5 4 3 4 5 4 5 6 5 4 5 6 5 6 7 6 5 4 3 2 5 4 3 4 "
    "6 5 4 5 6 7 6 7 8 7 6 5 6 5 4 3 4 5 7 6 5 4 6 5 8 7 6 5 4 5 7 6 5 6 8 7 6 5 "
    "4 6 5 7 6 5 6 7"
)
M4_ALPHA = (3, 2, 3, 4)
HAMILTON_ALPHA = (3, 2, 4, 3)
# every free half the full-sweep check accepts at n=7
VALID_N7 = {(3, 2, 3, 4), (3, 2, 4, 3), (3, 4, 2, 3), (3, 4, 3, 2)}


@pytest.fixture(scope="session")
def m4():
    return ClusterForm(7, M4_ALPHA)


@pytest.fixture(scope="session")
def hamilton():
    return ClusterForm(7, HAMILTON_ALPHA)


@pytest.fixture(scope="session")
def newroz():
    return ClusterForm(11, NEWROZ_ALPHA)


def known_valid_forms():
    return [
        ClusterForm(3, ()),
        ClusterForm(5, ()),
        *(ClusterForm(7, a) for a in sorted(VALID_N7)),
        ClusterForm(11, NEWROZ_ALPHA),
    ]
