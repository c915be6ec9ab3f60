import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fpgroups.words import (
    UnknownGeneratorError,
    Word,
    WordSyntaxError,
    commutator,
    cyclic_reduce,
    exponent_vector,
    format_word,
    free_reduce,
    parse_word,
    power_decompose,
)
from oracles import divisor_sweep_power, has_proper_period, letters_of, naive_reduce

XY = ["x", "y"]
x, y = Word.gen("x"), Word.gen("y")


def W(text, alphabet=XY):
    return parse_word(text, alphabet)


letter = st.tuples(st.sampled_from(["a", "b", "c"]), st.sampled_from([1, -1]))
raw_words = st.lists(letter, max_size=16)
words = raw_words.map(Word)


# -- parsing ---------------------------------------------------------------------


def test_parse_commutator_power():
    assert W("[x,y]^2").letters() == [
        ("x", 1), ("y", 1), ("x", -1), ("y", -1), ("x", 1), ("y", 1), ("x", -1), ("y", -1)
    ]


def test_parse_free_cancellation():
    assert W("x x^-1 y") == y


def test_parse_juxtaposed_identifiers():
    assert W("(xy)^3") == Word([("x", 1), ("y", 1)] * 3)


def test_parse_multichar_names():
    w = parse_word("x1 y1 x1^-1 y1^-1 z12^3", ["x1", "y1", "z12"])
    assert w.runs == (("x1", 1), ("y1", 1), ("x1", -1), ("y1", -1), ("z12", 3))
    assert parse_word("x1y1", ["x1", "y1"]) == parse_word("x1 y1", ["x1", "y1"])


def test_parse_exponent_zero_and_negative():
    assert W("(x y)^0 x") == x
    assert W("(x y)^-1") == Word([("y", -1), ("x", -1)])
    assert W("[x, y^-1]") == commutator(x, y.inverse())


def test_parse_identity_literal():
    assert W("1") == Word()


@pytest.mark.parametrize("text,pos", [("x ^", 3), ("(x y", 4), ("[x y]", 4), ("x )", 2), ("", 0)])
def test_syntax_errors_report_position(text, pos):
    with pytest.raises(WordSyntaxError) as info:
        W(text)
    assert info.value.position == pos


def test_unknown_generator():
    with pytest.raises(UnknownGeneratorError) as info:
        W("x q")
    assert info.value.name == "q"
    assert info.value.position == 2


def test_uppercase_is_not_inverse():
    with pytest.raises(UnknownGeneratorError):
        W("X")


def test_empty_alphabet_rejected():
    with pytest.raises(ValueError):
        parse_word("x", [])


@given(words)
def test_format_parse_roundtrip(w):
    assert parse_word(format_word(w), ["a", "b", "c"]) == w


# -- reduction -------------------------------------------------------------------


def test_free_reduce_examples():
    assert free_reduce([("x", 1), ("x", -1), ("y", 1)]) == y
    assert free_reduce(Word()) == Word()
    assert free_reduce([("y", 1), ("x", -1), ("x", 1), ("y", 1)]).runs == (("y", 2),)


@given(raw_words)
def test_free_reduce_matches_naive(letters):
    assert Word(letters).letters() == naive_reduce(letters)


@given(words)
def test_free_reduce_idempotent(w):
    assert free_reduce(free_reduce(w)) == free_reduce(w)


@given(words)
def test_run_form_canonical(w):
    assert all(a[0] != b[0] for a, b in zip(w.runs, w.runs[1:]))
    assert all(e != 0 for _, e in w.runs)


def test_cyclic_reduce_examples():
    assert cyclic_reduce(W("x^-1 y x")) == (y, x.inverse())
    c = commutator(x, y)
    assert cyclic_reduce(c) == (c, Word())
    assert cyclic_reduce(W("x^-1 y^2 x")) == (W("y^2"), x.inverse())


def test_cyclic_reduce_partial_runs():
    core, conj = cyclic_reduce(W("x^3 y x^-1"))
    assert core == W("x^2 y") and conj == x
    core, conj = cyclic_reduce(W("x y x^-1"))
    assert core == y and conj == x


@given(words)
def test_cyclic_reduce_reassembles(w):
    core, conj = cyclic_reduce(w)
    assert len(core) <= len(w)
    assert conj * core * conj.inverse() == w
    letters = core.letters()
    if len(letters) >= 2:
        (a, s), (b, t) = letters[0], letters[-1]
        assert not (a == b and s == -t)


# -- powers ----------------------------------------------------------------------


def test_power_decompose_examples():
    assert power_decompose(W("x y x y x y")) == (W("x y"), 3)
    c = commutator(x, y)
    assert power_decompose(c) == (c, 1)
    assert power_decompose(W("x^6")) == (x, 6)
    assert power_decompose(W("x^-4")) == (x.inverse(), 4)


def test_power_decompose_empty():
    with pytest.raises(ValueError):
        power_decompose(Word())


cyclic_words = words.map(lambda w: cyclic_reduce(w)[0]).filter(lambda w: len(w) > 0)


@settings(max_examples=300)
@given(cyclic_words)
def test_power_decompose_matches_divisor_sweep(w):
    root, n = power_decompose(w)
    assert n == divisor_sweep_power(w.letters())
    assert root ** n == w
    assert not has_proper_period(root.letters())


# -- exponent sums ---------------------------------------------------------------


def test_exponent_vector_examples():
    gens = ["x1", "y1", "x2", "y2"]
    w = parse_word("([x1,y1][x2,y2])^5", gens)
    assert exponent_vector(w, gens) == [0, 0, 0, 0]
    assert exponent_vector(W("x^2 y^-1"), XY) == [2, -1]
    gens = ["x", "y", "z1", "z2"]
    assert exponent_vector(parse_word("[x,y] z1 z2", gens), gens) == [0, 0, 1, 1]


@given(words, words)
def test_exponent_vector_homomorphism(u, v):
    abc = ["a", "b", "c"]
    lhs = exponent_vector(u * v, abc)
    assert lhs == [p + q for p, q in zip(exponent_vector(u, abc), exponent_vector(v, abc))]


def test_words_are_immutable_and_hashable():
    w = W("x y")
    with pytest.raises(AttributeError):
        w.runs = ()
    assert {w: 1}[W("x y")] == 1


@given(raw_words)
def test_letters_roundtrip(letters):
    w = Word(letters)
    assert letters_of(w.runs) == w.letters()
