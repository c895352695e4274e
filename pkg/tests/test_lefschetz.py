import pytest
from hypothesis import given
from hypothesis import strategies as st

from concave_forge import _intmat
from concave_forge.cobordism import Side, emit_kirby_script
from concave_forge.lefschetz import (
    NECESSARY_ONLY,
    PencilData,
    build_pencil_assembly,
    monodromy_matrix,
    validate_pencil,
)

A, B = (1, 0), (0, 1)


def torus(cycles, n=1):
    return PencilData(1, tuple(cycles), n)


def test_twelve_cycles_close_up():
    v = validate_pencil(torus([A, B] * 6))
    assert v.ok and v.label == NECESSARY_ONLY


def test_thirteen_cycles_fail():
    v = validate_pencil(torus([A, B] * 6 + [A]))
    assert not v.ok and v.label == "FailsHomologyTest"
    # the first twelve factors cancel, leaving one twist about a
    assert _intmat.equal(v.matrix, monodromy_matrix(torus([A])))
    assert not _intmat.is_identity(v.matrix)
    with pytest.raises(ValueError):
        build_pencil_assembly(torus([A, B] * 6 + [A]))


def test_single_section_assembly():
    asm = build_pencil_assembly(torus([A, B] * 6))
    assert asm.chi == asm.chi_formula == 11
    assert [name for name, _ in asm.pieces] == [
        "convex filling", "vanishing cycles", "binding caps", "convex filling"
    ]


def test_chi_with_sections():
    assert build_pencil_assembly(torus([A, B] * 6, n=2)).chi == 10
    assert build_pencil_assembly(PencilData(0, (), 1)).chi == 3


def test_handles_and_framings():
    asm = build_pencil_assembly(torus([A, B] * 6, n=3))
    hs = asm.decomposition.handles
    assert all(h.side is Side.PENCIL for h in hs)
    cycles = [h for h in hs if h.locus == "page"]
    caps = [h for h in hs if h.locus and h.locus.startswith("binding")]
    assert len(cycles) == 12 and all(h.framing == "pf-1" for h in cycles)
    assert [h.locus for h in caps] == ["binding:1", "binding:2", "binding:3"]
    assert all(h.framing == "pf+1" for h in caps)
    # page classes are padded with zeros for the extra boundary slots
    assert cycles[0].coords == (1, 0, 0, 0)
    assert "monodromy" in emit_kirby_script(asm.decomposition)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(fiber_genus=1, cycles=((2, 0),), sections=1),
        dict(fiber_genus=1, cycles=((1, 0, 0),), sections=1),
        dict(fiber_genus=1, cycles=(), sections=0),
    ],
)
def test_rejects_bad_data(kwargs):
    with pytest.raises(ValueError):
        PencilData(**kwargs)


@given(k=st.integers(0, 11))
def test_rotation_preserves_verdict(k):
    cycles = [A, B] * 6
    rot = cycles[k:] + cycles[:k]
    assert validate_pencil(torus(rot)).ok


@given(cycles=st.lists(st.sampled_from([A, B, (1, 1), (1, -1), (2, 1)]), max_size=14), k=st.integers(0, 20))
def test_rotation_is_conjugation(cycles, k):
    if not cycles:
        return
    k %= len(cycles)
    m0 = monodromy_matrix(torus(cycles))
    m1 = monodromy_matrix(torus(cycles[k:] + cycles[:k]))
    assert _intmat.is_identity(m0) == _intmat.is_identity(m1)
    # traces agree for conjugate matrices
    assert int(m0[0, 0] + m0[1, 1]) == int(m1[0, 0] + m1[1, 1])
