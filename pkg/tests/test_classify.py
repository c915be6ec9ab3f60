import itertools
import json
import random
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fpgroups.classify import (
    KAHLER,
    KAHLER_IFF_SURFACE,
    NOT_KAHLER,
    OPEN_DEFICIENCIES,
    UNKNOWN,
    GroupFacts,
    InconsistentFactsError,
    Verdict,
    classify,
    cyclic_cube_row,
    deficiency_interval,
    deficiency_table,
    match_normal_form,
    multiple_fiber_bound,
    recognize_orbifold_form,
)
from fpgroups.presentations import (
    Family,
    OrbifoldSignature,
    Presentation,
    family_presentation,
    free_presentation,
    one_relator_orbifold,
    orbifold_presentation,
    parse_presentation,
    rename_generators,
    surface_presentation,
)

GOLDEN = Path(__file__).parent / "golden" / "classify.json"

signatures = st.builds(
    OrbifoldSignature,
    st.integers(1, 10),
    st.lists(st.integers(2, 10), max_size=4).map(tuple),
)


def _yes_no(value):
    return {"yes": True, "no": False}[value]


def scramble(p: Presentation, rnd: random.Random) -> Presentation:
    """Rename generators, shuffle relators, rotate and possibly invert each one."""
    names = [f"u{i}" for i in range(p.num_generators)]
    rnd.shuffle(names)
    q = rename_generators(p, dict(zip(p.generators, names)))
    rels = []
    for r in q.relators:
        letters = r.letters()
        i = rnd.randrange(len(letters))
        w = type(r)(letters[i:] + letters[:i])
        rels.append(w.inverse() if rnd.random() < 0.5 else w)
    rnd.shuffle(rels)
    return Presentation(tuple(sorted(q.generators)), tuple(rels))


# -- recognition -----------------------------------------------------------------


def test_recognize_one_relator_form():
    assert recognize_orbifold_form(parse_presentation("< a, b | ([a,b])^3 >")) == OrbifoldSignature(1, (3,))
    assert match_normal_form(one_relator_orbifold(2, 4))[1] == "one-relator"


def test_recognize_shuffled_orbifold():
    p = orbifold_presentation(OrbifoldSignature(2, (2, 5)))
    q = scramble(p, random.Random(3))
    assert q != p
    sig = recognize_orbifold_form(q)
    assert sig.genus == 2 and sorted(sig.multiplicities) == [2, 5]


def test_recognize_rejects_non_normal_forms():
    for text in ["< a, b | a^2 b^2 >", "< a, b | [a,b], a^2 >", "< a, b, c | [a,b] c, c^2, a^3 >",
                 "< a, b | [a,b] [a,b^-1] >", "< a, b, c | [a,b] >"]:
        assert recognize_orbifold_form(parse_presentation(text)) is None
    assert recognize_orbifold_form(free_presentation(2)) is None


@settings(max_examples=200)
@given(signatures, st.randoms(use_true_random=False))
def test_recognition_roundtrip_and_invariance(sig, rnd):
    p = orbifold_presentation(sig)
    assert recognize_orbifold_form(p) == sig
    got = recognize_orbifold_form(scramble(p, rnd))
    assert got.genus == sig.genus
    assert sorted(got.multiplicities) == sorted(sig.multiplicities)


# -- intervals -------------------------------------------------------------------


def test_interval_examples():
    assert deficiency_interval(
        GroupFacts(surface_presentation(3), family=(Family.surface(3),))) == (5, 5)
    fam = (Family.surface(1), Family.free_abelian(2))
    assert deficiency_interval(GroupFacts(family_presentation(fam), family=fam)) == (-2, -2)
    # two generators, one relator, and no closed form
    assert deficiency_interval(GroupFacts(parse_presentation("< a, b | a^2 b^2 >"))) == (1, None)


def test_family_tag_mismatch():
    with pytest.raises(InconsistentFactsError):
        deficiency_interval(GroupFacts(surface_presentation(2), family=(Family.surface(3),)))
    with pytest.raises(InconsistentFactsError):
        deficiency_interval(GroupFacts(free_presentation(2), family=(Family.free_abelian(2),)))


@given(signatures)
def test_orbifold_interval_is_closed_and_odd(sig):
    lower, upper = deficiency_interval(GroupFacts(orbifold_presentation(sig)))
    assert lower == upper == 2 * sig.genus - 1


def test_multiple_fiber_bound():
    for g in range(1, 6):
        assert multiple_fiber_bound(2 * g, 2 * g, 1) == 1
    assert multiple_fiber_bound(6, 4, 3) == 3
    assert multiple_fiber_bound(4, 4, 2) == 1
    with pytest.raises(InconsistentFactsError):
        multiple_fiber_bound(6, 2, 3)
    with pytest.raises(InconsistentFactsError):
        multiple_fiber_bound(2, 3, 5)


# -- verdicts --------------------------------------------------------------------


def test_classify_examples():
    v = classify(GroupFacts(orbifold_presentation(OrbifoldSignature(2, (2,)))))
    assert v.status == KAHLER and [h.id for h in v.justification] == ["R1"]
    v = classify(GroupFacts(free_presentation(2), is_limit_group=True))
    assert v.status == NOT_KAHLER and [h.id for h in v.justification] == ["R2", "R4"]
    assert v.interval == (2, 2)
    v = classify(GroupFacts(parse_presentation("< a, b | a^2 b^2 >")))
    assert v.status == UNKNOWN and v.justification == ()


def test_one_relator_infinite_flag():
    p = parse_presentation("< x, y | ([x,y])^2 >")
    v = classify(GroupFacts(p, is_infinite=True))
    assert v.status == KAHLER and v.justification[0].id == "R1'"
    # b1 = 2 already forces an infinite group
    assert classify(GroupFacts(p)).justification == v.justification
    with pytest.raises(InconsistentFactsError):
        classify(GroupFacts(p, is_infinite=False))


def test_limit_group_fallback():
    p = parse_presentation("< a, b | a^2 b^2 >")
    v = classify(GroupFacts(p, is_limit_group=True, is_abelian=False))
    assert v.status == KAHLER_IFF_SURFACE
    assert [h.id for h in v.justification] == ["R4"]


def test_r3_on_deficiency_two_limit_group():
    p = parse_presentation("< a, b, c | a b c a^-1 b^-2 >")
    v = classify(GroupFacts(p, is_limit_group=True, is_abelian=False))
    assert v.status == NOT_KAHLER and [h.id for h in v.justification] == ["R3"]
    assert "Theorem (limit)" in v.justification[0].citation
    assert "Theorem (master)" in v.justification[0].citation


def test_b1_promotes_infinite():
    v = classify(GroupFacts(surface_presentation(2)))
    assert "is_infinite inferred from b1 > 0" in v.notes
    with pytest.raises(InconsistentFactsError):
        classify(GroupFacts(surface_presentation(2), is_infinite=False))


def test_inconsistent_facts():
    with pytest.raises(InconsistentFactsError):
        classify(GroupFacts(free_presentation(3), is_abelian=True))
    with pytest.raises(InconsistentFactsError):
        classify(GroupFacts(free_presentation(2), is_limit_group=False))
    # an orbifold group with torsion is not a limit group
    with pytest.raises(InconsistentFactsError):
        classify(GroupFacts(orbifold_presentation(OrbifoldSignature(2, (3,))),
                            is_limit_group=True, is_abelian=False))


def test_minimal_relations_note():
    v = classify(GroupFacts(orbifold_presentation(OrbifoldSignature(2, (2, 3)))))
    assert any("minimal number of relations" in n for n in v.notes)
    v = classify(GroupFacts(orbifold_presentation(OrbifoldSignature(2, (2,)))))
    assert not any("minimal number of relations" in n for n in v.notes)


def test_decisive_verdict_needs_justification():
    with pytest.raises(ValueError):
        Verdict(KAHLER, (), (3, 3))


def test_golden_verdicts():
    golden = json.loads(GOLDEN.read_text(encoding="utf-8"))
    assert len(golden) >= 15
    for name, case in golden.items():
        facts = {k: _yes_no(v) for k, v in case["facts"].items()}
        v = classify(GroupFacts(parse_presentation(case["presentation"]), **facts))
        assert v.as_json() == case["verdict"], name


@pytest.mark.parametrize("g", range(1, 11))
def test_r1_and_r2_never_both_fire(g):
    for k in range(5):
        for ms in itertools.combinations_with_replacement(range(2, 11), k):
            if k >= 3 and ms[0] != ms[-1] and ms[1] not in (2, 10):
                continue  # thin the sweep; the interval only depends on g
            sig = OrbifoldSignature(g, ms)
            v = classify(GroupFacts(orbifold_presentation(sig)))
            ids = {h.id for h in v.justification}
            assert "R2" not in ids
            assert ("R1" in ids) == (g >= 2)
            assert v.interval == (2 * g - 1, 2 * g - 1)
            if g >= 2:
                assert v.status == KAHLER


@settings(max_examples=100)
@given(signatures, st.booleans(), st.randoms(use_true_random=False))
def test_classify_invariant_under_scrambling(sig, one_relator, rnd):
    p = one_relator_orbifold(sig.genus, sig.multiplicities[0]) if (
        one_relator and sig.k) else orbifold_presentation(sig)
    base = classify(GroupFacts(p, is_infinite=True))
    other = classify(GroupFacts(scramble(p, rnd), is_infinite=True))
    assert other.status == base.status
    assert other.justification == base.justification
    assert other.interval == base.interval


# -- negative deficiencies --------------------------------------------------------


@pytest.mark.parametrize("g", range(1, 6))
@pytest.mark.parametrize("p", [2, 3, 5])
def test_deficiency_table(g, p):
    rows = deficiency_table(g, p)
    assert [(r.lower, r.upper) for r in rows] == [
        (v, v) for v in (-2 * g, -1, -3 - 6 * g, -5 - 6 * g, -7 - 6 * g)
    ]
    cube = cyclic_cube_row(p)
    assert (cube.lower, cube.upper) == (-3, -3)


def test_table_examples():
    assert [r.lower for r in deficiency_table(1, 2)] == [-2, -1, -9, -11, -13]
    assert [r.lower for r in deficiency_table(2, 3)] == [-4, -1, -15, -17, -19]
    assert OPEN_DEFICIENCIES == (-5, -7)
    with pytest.raises(ValueError):
        deficiency_table(1, 4)
