import itertools
import random

import pytest

import oracles
from mealygroup import (
    Automaton,
    AutomatonError,
    BudgetError,
    GrowthReport,
    apply,
    common_fixed_letter,
    fixed_block_count,
    fixing_threshold,
    growth_function,
    hanoi_automaton,
    is_identity,
    render_growth_csv,
    render_threshold_csv,
    section_closure,
    section_count,
    section_word,
    strict_log2,
    strip_fixed_letter,
    survey,
    threshold_bound,
    threshold_survey,
    word_depth,
)
from mealygroup import analysis
from mealygroup.analysis import (
    _canonical_prefixes,
    _depth_count,
    _make_stats,
    automaton_symmetries,
    orbit_count,
)


def w(auto, *names):
    return auto.word_from_names(names)


def odometer():
    """Carry machine over {1,2}: not of the dies-or-stays shape, so it
    exercises the generic closure path."""
    return Automaton(2, ["add", "id"], [[1, 0], [1, 1]], [[2, 1], [1, 2]])


def all_words(auto, max_len, skip_trivial=False):
    lo = 1 if skip_trivial else 0
    for n in range(max_len + 1):
        yield from itertools.product(range(lo, len(auto.states)), repeat=n)


# --- closures ---------------------------------------------------------------


def test_closure_single_generator(ha4):
    sc = section_closure(ha4, w(ha4, "a(1,2)"))
    assert sc.count == 2
    assert sc.depth == 1
    assert sc.all_sections == {w(ha4, "a(1,2)"), w(ha4, "e")}


def test_closure_all_trivial(ha4):
    sc = section_closure(ha4, (0, 0))
    assert sc.count == 1
    assert sc.depth == 0


def test_closure_overlapping_pair(ha4):
    sc = section_closure(ha4, w(ha4, "a(1,2)", "a(1,3)"))
    assert (sc.depth, sc.count) == (1, 4)


def test_closure_disjoint_pair_reaches_depth_two(ha4):
    sc = section_closure(ha4, w(ha4, "a(1,2)", "a(3,4)"))
    assert (sc.depth, sc.count) == (2, 4)


@pytest.mark.parametrize("pegs, max_len", [(3, 3), (4, 3)])
def test_closure_matches_brute_enumeration(pegs, max_len):
    auto = hanoi_automaton(pegs)
    for word in all_words(auto, max_len):
        sc = section_closure(auto, word)
        levels = oracles.first_seen_levels(auto, word)
        assert sc.depth == len(levels) - 1
        assert [set(lvl) for lvl in sc.levels] == levels
        # every section at inputs up to depth+2 is in the closure, and
        # nothing else is
        everything = set()
        for length in range(sc.depth + 3):
            everything |= oracles.sections_at_length(auto, word, length)
        assert sc.all_sections == everything


def test_closure_generic_machine_matches_brute():
    auto = odometer()
    assert auto._kill_rows is None
    for word in all_words(auto, 4):
        d, c = _depth_count(auto, word)
        bd, bc = oracles.brute_depth_and_count(auto, word)
        assert (d, c) == (bd, bc)


def test_mask_and_tuple_backends_agree(ha4):
    mask_stats = _make_stats("mask", 4, ha4._kill_rows, ha4._next, ha4._emit0, True)
    tuple_stats = _make_stats("tuple", 4, None, ha4._next, ha4._emit0, True)
    rng = random.Random(3)
    for _ in range(300):
        word = [rng.randrange(7) for _ in range(rng.randrange(9))]
        assert mask_stats(word) == tuple_stats(word)


def test_count_bounded_by_geometric_sum(ha5):
    rng = random.Random(9)
    for _ in range(100):
        word = tuple(rng.randrange(len(ha5.states)) for _ in range(rng.randrange(8)))
        d, c = _depth_count(ha5, word)
        assert c <= sum(5**i for i in range(d + 1))


def test_word_depth_examples(ha4):
    assert word_depth(ha4, w(ha4, "a(1,2)")) == 1
    assert word_depth(ha4, w(ha4, "e")) == 0
    assert section_count(ha4, w(ha4, "a(1,2)")) == 2


# --- word problem -----------------------------------------------------------


def test_is_identity_examples(ha4):
    assert is_identity(ha4, (0, 0, 0, 0))
    assert not is_identity(ha4, w(ha4, "a(1,2)"))
    assert is_identity(ha4, w(ha4, "a(1,2)", "a(1,2)"))
    assert is_identity(ha4, ())


@pytest.mark.parametrize("pegs", [3, 4])
def test_is_identity_matches_brute_action_testing(pegs):
    auto = hanoi_automaton(pegs)
    for word in all_words(auto, 3):
        depth = word_depth(auto, word)
        assert is_identity(auto, word) == oracles.brute_identity(auto, word, depth + 1)


def test_is_identity_generic_machine():
    auto = odometer()
    add = (0,)
    assert not is_identity(auto, add + add)
    assert not is_identity(auto, add)
    assert is_identity(auto, (1, 1))
    for word in all_words(auto, 4):
        depth = word_depth(auto, word)
        assert is_identity(auto, word) == oracles.brute_identity(auto, word, depth + 1)


def test_is_identity_requires_invertible():
    auto = Automaton(2, ["s"], [[0, 0]], [[1, 1]])
    with pytest.raises(AutomatonError):
        is_identity(auto, (0,))


# --- fixed letters ----------------------------------------------------------


def test_common_fixed_letter_examples(ha4, ha3):
    assert common_fixed_letter(ha4, w(ha4, "a(1,2)", "a(1,3)")) == 4
    assert common_fixed_letter(ha4, (0, 0)) == 1
    assert common_fixed_letter(ha3, w(ha3, "a(1,2)", "a(1,3)", "a(2,3)")) is None
    assert common_fixed_letter(ha4, ()) == 1


def test_strip_fixed_letter_examples():
    assert strip_fixed_letter((1, 4, 2, 4, 3), 4) == (1, 2, 3)
    assert strip_fixed_letter((4, 4, 4), 4) == ()
    assert strip_fixed_letter((1, 2, 3), 4) == (1, 2, 3)


def test_sections_ignore_letters_fixed_by_every_state(ha4):
    rng = random.Random(17)
    for x in range(1, 5):
        fixing = [s for s in range(len(ha4.states)) if apply(ha4, (s,), (x,)) == (x,)]
        for _ in range(100):
            word = tuple(rng.choice(fixing) for _ in range(rng.randrange(8)))
            v = tuple(rng.randint(1, 4) for _ in range(rng.randrange(12)))
            assert section_word(ha4, word, v) == section_word(
                ha4, word, strip_fixed_letter(v, x)
            )


def test_fixed_block_count_examples(ha3, ha4):
    assert fixed_block_count(ha4, w(ha4, "a(1,2)")) == 1
    assert fixed_block_count(ha4, (0, 0, 0)) == 1
    assert fixed_block_count(ha4, ()) == 0
    assert fixed_block_count(ha3, w(ha3, "a(1,2)", "a(1,3)", "a(2,3)")) == 3


@pytest.mark.parametrize("pegs, max_len", [(3, 5), (4, 4)])
def test_fixed_block_count_is_minimal(pegs, max_len):
    auto = hanoi_automaton(pegs)
    for word in all_words(auto, max_len, skip_trivial=True):
        assert fixed_block_count(auto, word) == oracles.brute_min_blocks(auto, word)


def test_fixed_block_count_rejects_fixless_states():
    auto = Automaton(3, ["r"], [[0, 0, 0]], [[2, 3, 1]])
    with pytest.raises(AutomatonError, match="fixes no letter"):
        fixed_block_count(auto, (0,))


# --- symmetries -------------------------------------------------------------


@pytest.mark.parametrize("pegs, size", [(3, 6), (4, 24), (5, 120)])
def test_hanoi_symmetry_group_size(pegs, size):
    assert len(automaton_symmetries(hanoi_automaton(pegs))) == size


def test_asymmetric_machine_has_identity_only():
    auto = odometer()
    assert automaton_symmetries(auto) == ((0, 1),)


def test_duplicate_states_are_interchangeable():
    auto = Automaton(2, ["e1", "e2"], [[0, 0], [1, 1]], [[1, 2], [1, 2]])
    syms = automaton_symmetries(auto)
    assert (1, 0) in syms


@pytest.mark.parametrize("pegs, length", [(3, 3), (3, 4), (4, 2), (4, 3)])
def test_orbit_count_matches_explicit_orbits(pegs, length):
    auto = hanoi_automaton(pegs)
    sigmas = automaton_symmetries(auto)
    allowed = tuple(range(1, len(auto.states)))
    assert orbit_count(allowed, sigmas, length) == oracles.explicit_orbit_count(
        allowed, sigmas, length
    )


def test_canonical_enumeration_hits_every_orbit_once(ha4):
    sigmas = automaton_symmetries(ha4)
    non_id = tuple(sg for sg in sigmas if sg != tuple(range(7)))
    allowed = tuple(range(1, 7))
    for n in range(1, 5):
        reps = _canonical_prefixes(allowed, non_id, n)
        assert len(reps) == orbit_count(allowed, sigmas, n)
        # representatives are lexicographically least in their orbit
        for prefix, _ in reps[:50]:
            assert all(tuple(sg[s] for s in prefix) >= prefix for sg in sigmas)


def test_relabeling_preserves_depth_and_count(ha4):
    sigmas = automaton_symmetries(ha4)
    for word in all_words(ha4, 4, skip_trivial=True):
        base = _depth_count(ha4, word)
        for sg in sigmas:
            assert _depth_count(ha4, tuple(sg[s] for s in word)) == base


def test_inserting_trivial_state_changes_nothing(ha4):
    for word in all_words(ha4, 3, skip_trivial=True):
        base = _depth_count(ha4, word)
        for pos in range(len(word) + 1):
            padded = word[:pos] + (0,) + word[pos:]
            assert _depth_count(ha4, padded) == base


# --- survey -----------------------------------------------------------------


def test_survey_reproduces_published_small_table(ha4):
    report = survey(ha4, 6)
    assert report.depths() == [1, 2, 2, 3, 4, 4]
    assert report.thetas() == [2, 4, 8, 13, 17, 24]


def test_survey_single_length(ha3):
    report = growth_function(ha3, 1)
    assert report.thetas() == [2]
    assert report.depths() == [1]


def test_survey_reductions_do_not_change_values(ha4):
    reduced = survey(ha4, 3)
    plain = survey(ha4, 3, exclude_trivial=False, symmetry=False)
    assert reduced.depths() == plain.depths()
    assert reduced.thetas() == plain.thetas()
    assert [r.depth_witness for r in reduced.rows] == [r.depth_witness for r in plain.rows]
    assert [r.theta_witness for r in reduced.rows] == [r.theta_witness for r in plain.rows]
    assert [r.words_examined for r in plain.rows] == [7, 49, 343]


def test_survey_rows_are_monotone_and_witnesses_attain(ha4):
    report = survey(ha4, 5)
    prev_d = prev_t = 0
    for row in report.rows:
        assert row.depth >= prev_d and row.theta >= prev_t
        prev_d, prev_t = row.depth, row.theta
        assert word_depth(ha4, row.depth_witness) == row.depth
        assert section_count(ha4, row.theta_witness) == row.theta
        assert row.words_examined == row.orbits  # one representative per orbit


def test_survey_is_deterministic_across_jobs(ha4):
    r1 = survey(ha4, 4, jobs=1)
    r2 = survey(ha4, 4, jobs=2)
    assert render_growth_csv(r1, ha4, timings=False) == render_growth_csv(
        r2, ha4, timings=False
    )


def test_survey_checkpoint_resume(tmp_path, ha4):
    ck = tmp_path / "scan.ckpt"
    first = survey(ha4, 2, checkpoint=ck)
    extended = survey(ha4, 4, checkpoint=ck)
    assert extended.depths()[:2] == first.depths()
    assert [r.words_examined for r in extended.rows] == [1, 3, 12, 60]
    # a different option set must not reuse the file
    with pytest.raises(AutomatonError, match="different automaton or option"):
        survey(ha4, 2, checkpoint=ck, symmetry=False)


def test_survey_budget_gate(ha4):
    with pytest.raises(BudgetError, match="long_run"):
        survey(ha4, 12)
    # long_run at small n is accepted and harmless
    assert survey(ha4, 2, long_run=True).thetas() == [2, 4]


def test_survey_input_validation(ha4):
    with pytest.raises(ValueError):
        survey(ha4, 0)
    broken = Automaton(2, ["s"], [[0, 0]], [[1, 1]])
    with pytest.raises(AutomatonError):
        survey(broken, 2)


def test_survey_root_section_convention(ha4):
    with_root = survey(ha4, 3)
    without = survey(ha4, 3, include_root_section=False)
    assert with_root.thetas() == [2, 4, 8]
    # dropping the empty-input section can only lower counts, by at most one
    assert all(
        0 <= a - b <= 1 for a, b in zip(with_root.thetas(), without.thetas())
    )


def test_growth_csv_shape(ha4):
    report = survey(ha4, 2)
    text = render_growth_csv(report, ha4)
    lines = text.splitlines()
    assert lines[0] == "n,depth,theta,depth_witness,theta_witness,words_examined,seconds"
    assert len(lines) == 3
    assert '"a(1,2)"' in lines[1]  # names contain commas, so fields are quoted
    blank = render_growth_csv(report, ha4, timings=False)
    assert blank.splitlines()[1].endswith(",")
    empty = render_growth_csv(
        GrowthReport(rows=(), exclude_trivial=True, symmetry=True, include_root_section=True),
        ha4,
    )
    assert empty == "n,depth,theta,depth_witness,theta_witness,words_examined,seconds\n"


# --- fixing thresholds ------------------------------------------------------


def test_strict_log2_values():
    assert [strict_log2(n) for n in (1, 2, 3, 4, 8, 9, 16)] == [1, 2, 2, 3, 4, 4, 5]
    with pytest.raises(ValueError):
        strict_log2(0)


def test_threshold_bound_values():
    assert threshold_bound(3, 8) == 9 * 4
    assert threshold_bound(4, 16) == 144 * 25
    assert threshold_bound(5, 16) == 144 * 25 * 125
    with pytest.raises(ValueError):
        threshold_bound(2, 4)


def test_fixing_threshold_frozen_cases(ha4):
    for s in range(1, 7):
        assert fixing_threshold(ha4, (s,)) == 0
    assert fixing_threshold(ha4, w(ha4, "a(1,2)", "a(3,4)")) == 1
    assert fixing_threshold(ha4, ()) == 0


def test_fixing_threshold_matches_direct_level_scan(ha4):
    rng = random.Random(23)
    for _ in range(25):
        word = tuple(rng.randrange(1, 7) for _ in range(rng.randrange(1, 5)))
        t_star = fixing_threshold(ha4, word)
        assert t_star is not None
        for length in range(7):
            bad = any(
                common_fixed_letter(ha4, sec) is None
                for sec in oracles.sections_at_length(ha4, word, length)
            )
            if length >= t_star:
                assert not bad
        if t_star > 0:
            assert any(
                common_fixed_letter(ha4, sec) is None
                for sec in oracles.sections_at_length(ha4, word, t_star - 1)
            )


def test_fixing_threshold_unbounded_when_no_letter_is_ever_fixed():
    auto = Automaton(3, ["r"], [[0, 0, 0]], [[2, 3, 1]])
    assert fixing_threshold(auto, (0,)) is None
    report = threshold_survey(auto, [2], 5, seed=1)
    assert not report.all_passed
    assert all(s.t_star is None for s in report.samples)


def test_threshold_survey_deterministic_and_bounded(ha4):
    a = threshold_survey(ha4, [4, 8], 30, seed=42)
    b = threshold_survey(ha4, [4, 8], 30, seed=42)
    assert a == b
    assert a.all_passed
    assert all(s.t_star <= s.bound for s in a.samples)
    assert set(a.max_by_length()) == {4, 8}
    # samples avoid the do-nothing state
    assert all(0 not in s.word for s in a.samples)


def test_threshold_three_pegs_logarithmic(ha3):
    report = threshold_survey(ha3, [4, 8, 16], 60, seed=2)
    for sample in report.samples:
        assert sample.t_star <= strict_log2(sample.length) + 1


def test_threshold_csv_shape(ha4):
    report = threshold_survey(ha4, [4], 3, seed=0)
    lines = render_threshold_csv(report, ha4).splitlines()
    assert lines[0] == "n,word,t_star,bound,pass"
    assert len(lines) == 4
    assert all(line.endswith(",1296,true") for line in lines[1:])
