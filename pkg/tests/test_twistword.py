import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from concave_forge import _intmat
from concave_forge.homology import Surface
from concave_forge.twistword import (
    TwistLetter,
    TwistWord,
    chain_word,
    commute_boundary_front,
    conjugation_rewrite,
    letters_inverse_action,
    parse_letter,
    substitute_trivial_twist,
    word_action,
    word_hash,
)

from conftest import letters_on, surfaces, words

T = Surface(1, 1)


def _same_action(u: TwistWord, v: TwistWord) -> bool:
    return _intmat.equal(word_action(u), word_action(v))


def test_empty_word_acts_trivially():
    assert _intmat.is_identity(word_action(TwistWord(T, [])))


def test_ab_has_order_six():
    p = word_action(TwistWord(T, [TwistLetter.chain(1), TwistLetter.chain(2)]))
    assert _intmat.to_rows(p) == [[0, -1], [1, 1]]
    p3 = np.linalg.matrix_power(p, 3)
    assert _intmat.to_rows(p3) == [[-1, 0], [0, -1]]
    assert _intmat.is_identity(np.linalg.matrix_power(p, 6))


def test_boundary_twist_acts_trivially():
    assert _intmat.is_identity(word_action(TwistWord(T, [TwistLetter.boundary(1)])))


@pytest.mark.parametrize("k, length", [(1, 12), (2, 40), (3, 84), (4, 144)])
def test_chain_word_length_and_action(k, length):
    w = chain_word(Surface(k, 1), k)
    assert len(w) == length
    assert _intmat.is_identity(word_action(w))


def test_chain_word_too_long():
    with pytest.raises(ValueError):
        chain_word(T, 2)


def test_letter_validation():
    with pytest.raises(ValueError):
        TwistLetter.of_class((2, 4))
    with pytest.raises(ValueError):
        TwistLetter.of_class((0, 0))
    with pytest.raises(ValueError):
        TwistLetter.of_class((1, 0), trivial_genus=1)
    with pytest.raises(ValueError):
        TwistWord(T, [TwistLetter.chain(3)])
    with pytest.raises(ValueError):
        TwistWord(T, [TwistLetter.boundary(2)])


def test_conjugation_empty_suffix():
    w = TwistWord(T, [TwistLetter.chain(2)])
    assert conjugation_rewrite(w, 0) == w


def test_conjugation_b1_past_a1():
    w = TwistWord(T, [TwistLetter.chain(2), TwistLetter.chain(1)])
    out = conjugation_rewrite(w, 0)
    assert out.letters[-1] == TwistLetter.of_class((1, 1))
    assert _same_action(w, out)


def test_conjugation_bad_position():
    with pytest.raises(IndexError):
        conjugation_rewrite(TwistWord(T, []), 0)


@given(w=words(max_len=8), data=st.data())
def test_conjugation_preserves_action(w, data):
    if not len(w):
        return
    pos = data.draw(st.integers(0, len(w) - 1))
    assert _same_action(w, conjugation_rewrite(w, pos))


def test_commute_single():
    s = Surface(1, 1)
    w = TwistWord(s, [TwistLetter.chain(1), TwistLetter.boundary(1), TwistLetter.chain(2)])
    assert commute_boundary_front(w).letters == (TwistLetter.boundary(1), TwistLetter.chain(1), TwistLetter.chain(2))


def test_commute_without_boundary_letters():
    w = TwistWord(T, [TwistLetter.chain(1, -1), TwistLetter.chain(2)])
    assert commute_boundary_front(w) == w


def test_commute_requires_one_boundary():
    with pytest.raises(ValueError):
        commute_boundary_front(TwistWord(Surface(1, 2), []))


@given(data=st.data())
def test_commute_preserves_action(data):
    s = data.draw(surfaces(max_boundary=1))
    w = data.draw(words(s))
    assert _same_action(w, commute_boundary_front(w))


def test_substitute_right_trivial():
    w = TwistWord(T, [TwistLetter.of_class((0, 0), 1, trivial_genus=1)])
    out = substitute_trivial_twist(w, 0)
    assert len(out) == 12 and all(x.is_right for x in out)


def test_substitute_left_trivial():
    w = TwistWord(T, [TwistLetter.of_class((0, 0), -1, trivial_genus=1)])
    out = substitute_trivial_twist(w, 0)
    assert len(out) == 12 and not any(x.is_right for x in out)
    assert out.letters[0] == TwistLetter.chain(2, -1)


def test_substitute_disk_twist_deletes():
    w = TwistWord(T, [TwistLetter.of_class((0, 0), 1, trivial_genus=0)])
    assert len(substitute_trivial_twist(w, 0)) == 0


def test_substitute_needs_genus():
    w = TwistWord(T, [TwistLetter.of_class((0, 0), 1, trivial_genus=2)])
    with pytest.raises(ValueError):
        substitute_trivial_twist(w, 0)


@given(data=st.data())
def test_substitute_preserves_action(data):
    s = data.draw(surfaces(min_genus=1))
    w = data.draw(words(s))
    for i, x in enumerate(w):
        if x.is_trivial_class:
            assert _same_action(w, substitute_trivial_twist(w, i))


@given(u=words(Surface(2, 2)), v=words(Surface(2, 2)))
def test_action_is_homomorphism(u, v):
    assert _intmat.equal(word_action(u + v), _intmat.matmul(word_action(u), word_action(v)))


@given(w=words())
def test_inverse_word_inverts_action(w):
    assert _intmat.is_identity(_intmat.matmul(word_action(w), word_action(w.inverse())))
    assert _intmat.equal(word_action(w.inverse()), letters_inverse_action(w.surface, w.letters))


@given(data=st.data())
def test_letter_serialization_round_trip(data):
    s = data.draw(surfaces())
    x = data.draw(letters_on(s))
    assert parse_letter(x.serialize()) == x


def test_serialized_forms():
    assert TwistLetter.chain(3).serialize() == "chain:3+"
    assert TwistLetter.of_class((1, 0, -2), -1).serialize() == "class:[1,0,-2]-"
    assert TwistLetter.of_class((0, 0), 1, 2).serialize() == "class:[0,0]+/k=2"
    assert TwistLetter.boundary(1).serialize() == "boundary:1+"


@pytest.mark.parametrize("bad", ["chain:3", "chain:x+", "klass:1+", "class:[1,a]+", ""])
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        parse_letter(bad)


def test_hash_frozen_values():
    assert word_hash([]) == "0-0000000000000000"
    h = word_hash([TwistLetter.chain(1), TwistLetter.chain(2)])
    assert h == "2-0bf810fbb0e7e82a"
    assert h != word_hash([TwistLetter.chain(2), TwistLetter.chain(1)])


def test_certification_labels():
    assert TwistWord(T, [TwistLetter.chain(1)]).certification == "chain-index exact"
    assert TwistWord(T, [TwistLetter.of_class((1, 1))]).certification == "homology-certified"
