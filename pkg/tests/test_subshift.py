import random
from fractions import Fraction

import pytest

from oracles import ZOracle, random_z_sft_data, z_sft
from symdyn import (FreeGroup, Pattern, PatternPresentation, ZdGroup, debruijn, from_word,
                    language_exact_1d, language_upper, locally_admissible, metric_D, restrict, sft_build,
                    subset_semidecide, to_word, verify_certificate, wang_sft)
from symdyn.subshift import Sft, language, render_grid, sft_doc, sft_from_doc
from symdyn.verdict import AlphabetMismatchError, DocumentError

Z1 = ZdGroup(1)
GOLDEN = z_sft("01", [{0: "1", 1: "1"}])
FULL = z_sft("01", [])
EVEN = z_sft("01", [{0: "1", 1: "0", 2: "1"}])  # forbids 101: an even-shift flavour of constraint


def test_build_from_presentations():
    X = sft_build(Z1, "01", [PatternPresentation.from_dict({"": "1", "a": "1"})])
    assert X == GOLDEN and X.range == 1
    assert FULL.range == 0 and FULL.forbidden == ()


def test_normal_form_dedupes_translates():
    X = z_sft("01", [{0: "1", 1: "1"}, {5: "1", 6: "1"}, {-3: "1", -2: "1"}])
    assert len(X.forbidden) == 1


def test_rejects_bad_forbidden():
    with pytest.raises(ValueError):
        Sft(Z1, ("0", "1"), (Pattern(()),))
    with pytest.raises(AlphabetMismatchError):
        z_sft("01", [{0: "2"}])


def test_locally_admissible_examples():
    v = locally_admissible(GOLDEN, from_word("11"), 0)
    assert v.no and verify_certificate(v.certificate).ok
    for r in range(5):
        v = locally_admissible(GOLDEN, from_word("10"), r)
        assert v.unknown and restrict(v.witness, from_word("10").support) == from_word("10")
    alt = z_sft("01", [{0: "0", 1: "0"}, {0: "1", 1: "1"}])
    assert locally_admissible(alt, from_word("01"), 3).unknown


def test_all_single_cells_forbidden():
    X = z_sft("01", [{0: "0"}, {0: "1"}])
    for r in range(3):
        assert locally_admissible(X, Pattern(()), r).no
        assert len(language_upper(X, 1, r)) == 0


def test_language_upper_examples():
    assert len(language_upper(GOLDEN, 1, 2)) == 5
    assert len(language_upper(FULL, 1)) == 8
    assert len(language_upper(GOLDEN, 2, 3)) == 13


@pytest.mark.parametrize("seed", range(10))
def test_margin_monotone_and_sound(seed):
    rng = random.Random(seed)
    data = random_z_sft_data(rng, "01")
    X = z_sft("01", data)
    for n in range(3):
        exact = language_exact_1d(X, n).patterns
        prev = None
        for r in range(5):
            up = language_upper(X, n, r).patterns
            assert exact <= up
            if prev is not None:
                assert up <= prev
            prev = up


@pytest.mark.parametrize("seed", range(10))
def test_upper_converges_at_vertex_count(seed):
    rng = random.Random(100 + seed)
    data = random_z_sft_data(rng, "01")
    X = z_sft("01", data)
    r = max(1, len(debruijn(X).vertices))
    for n in range(3):
        assert language_upper(X, n, r).patterns == language_exact_1d(X, n).patterns


def test_local_admissibility_matches_brute_force():
    rng = random.Random(7)
    for _ in range(40):
        data = random_z_sft_data(rng, "012", max_range=2)
        X, orc = z_sft("012", data), ZOracle("012", data)
        w = "".join(rng.choice("012") for _ in range(rng.randint(1, 3)))
        r = rng.randint(0, 2)
        v = locally_admissible(X, from_word(w), r)
        assert v.unknown == orc.admissible(dict(enumerate(w)), r)


def test_metric_examples():
    assert metric_D(GOLDEN, GOLDEN, 4).value == 0
    assert metric_D(GOLDEN, FULL, 4).value == 1
    five = z_sft("01", [dict(enumerate("11111"))])
    m = metric_D(FULL, five, 4)
    assert m.value == Fraction(1, 2) and m.agree_radius == 1 and m.certified
    assert metric_D(FULL, FULL, 3).upto_nmax


def test_metric_rejects_mismatch():
    with pytest.raises(AlphabetMismatchError):
        metric_D(GOLDEN, z_sft("012", []), 2)


def test_metric_uncertified_off_z():
    Z2 = ZdGroup(2)
    A = Sft(Z2, ("0", "1"), ())
    B = Sft(Z2, ("0", "1"), (Pattern((((0, 0), "1"), ((1, 0), "1"))),))
    m = metric_D(A, B, 2, r=1)
    assert not m.certified and m.value == 1


def test_subset_examples():
    assert subset_semidecide(GOLDEN, FULL).yes
    v = subset_semidecide(FULL, GOLDEN)
    assert v.no and to_word(v.witness).count("11")
    assert subset_semidecide(EVEN, EVEN).yes


def test_doc_round_trip():
    for X in (GOLDEN, FULL, EVEN):
        assert sft_from_doc(sft_doc(X)) == X
    with pytest.raises(DocumentError):
        sft_from_doc({"group": {"type": "zd", "d": 1}, "alphabet": []})
    with pytest.raises(DocumentError):
        sft_from_doc({"group": {"type": "zd", "d": 1}, "alphabet": ["0", "1"],
                      "forbidden": [{"support": ["", "aA"], "values": ["0", "1"]}]})


def test_wang_tiles():
    tiles = [{"n": "r", "e": "g", "s": "r", "w": "g"}, {"n": "g", "e": "r", "s": "g", "w": "r"}]
    X = wang_sft(tiles)
    L = language_upper(X, 1, 1)
    # each tile only matches itself on every side
    assert {frozenset(q.symbols) for q in L.patterns} == {frozenset("0"), frozenset("1")}
    grid = render_grid(L.sorted(X.alphabet)[0])
    assert grid.splitlines() == [". 0 .", "0 0 0", ". 0 ."]


def test_language_free_group():
    F1 = FreeGroup(1)
    X = Sft(F1, ("0", "1"), (Pattern((("", "1"), ("a", "1"))),))
    assert len(language(X, 1, 1)) == 5
