import math

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from concave_forge.homology import Surface
from concave_forge.twistword import TwistLetter, TwistWord

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")


# --- acceptance reporting ------------------------------------------------------

ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture
def acceptance():
    def record(number: int, passed: bool, text: str) -> None:
        line = f"[acceptance {number}] {'PASS' if passed else 'FAIL'} {text}"
        ACCEPTANCE_LINES[number] = line
        print(line)
        assert passed, line

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])


# --- strategies ------------------------------------------------------------------


@st.composite
def surfaces(draw, max_genus=3, max_boundary=3, min_genus=0):
    g = draw(st.integers(min_genus, max_genus))
    b = draw(st.integers(1, max_boundary))
    return Surface(g, b)


@st.composite
def primitive_vectors(draw, rank, bound=3):
    v = draw(st.lists(st.integers(-bound, bound), min_size=rank, max_size=rank))
    if math.gcd(*v) != 1:
        v[draw(st.integers(0, rank - 1))] = draw(st.sampled_from([1, -1]))
    return tuple(v)


@st.composite
def letters_on(draw, surface, allow_trivial=True, max_trivial_genus=None, signs=(1, -1)):
    sign = draw(st.sampled_from(signs))
    options = ["boundary"]
    if surface.genus:
        options.append("chain")
    if surface.rank:
        options.append("class")
    if allow_trivial:
        options.append("trivial")
    kind = draw(st.sampled_from(options))
    if kind == "chain":
        return TwistLetter.chain(draw(st.integers(1, 2 * surface.genus)), sign)
    if kind == "boundary":
        return TwistLetter.boundary(draw(st.integers(1, surface.boundary)), sign)
    if kind == "class":
        return TwistLetter.of_class(draw(primitive_vectors(surface.rank)), sign)
    top = surface.genus if max_trivial_genus is None else max_trivial_genus
    return TwistLetter.of_class((0,) * surface.rank, sign, trivial_genus=draw(st.integers(0, top)))


@st.composite
def words(draw, surface=None, max_len=8, **kw):
    if surface is None:
        surface = draw(surfaces())
    n = draw(st.integers(0, max_len))
    return TwistWord(surface, [draw(letters_on(surface, **kw)) for _ in range(n)])
