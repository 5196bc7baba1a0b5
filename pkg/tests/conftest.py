import pathlib
import sys

import pytest

SRC = pathlib.Path(__file__).resolve().parent.parent / "src"
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))

from toeplitztame.substitution import parse_text  # noqa: E402

EX22 = "a -> aaca\nb -> abba\nc -> aaba"
EX23 = "a -> aaca\nb -> abba\nc -> acba"
EX217A = "a -> aabaa\nb -> abbaa"
EX217B = "a -> aaaba\nb -> abbaa"
THUE_MORSE = "a -> ab\nb -> ba"
PD_COINCIDENCE = "a -> ab\nb -> aa"
HEIGHT2 = "a -> aba\nb -> bcd\nc -> abc\nd -> dcd"


@pytest.fixture(scope="session")
def ex22():
    return parse_text(EX22)


@pytest.fixture(scope="session")
def ex23():
    return parse_text(EX23)


@pytest.fixture(scope="session")
def ex217a():
    return parse_text(EX217A)


@pytest.fixture(scope="session")
def ex217b():
    return parse_text(EX217B)


@pytest.fixture(scope="session")
def thue_morse():
    return parse_text(THUE_MORSE)


@pytest.fixture(scope="session")
def pd_coincidence():
    return parse_text(PD_COINCIDENCE)


@pytest.fixture(scope="session")
def height2():
    return parse_text(HEIGHT2)
