import itertools
import random
from fractions import Fraction

import pytest

from staircase_lab.constraints import (ConstraintSet, Requirement,
                                       second_diag_event, third_diag_event)
from staircase_lab.core import STATISTIC_NAMES, staircase_boxes
from staircase_lab.dpcount import (N_DP, ScaledWeights, conditional_cell_law,
                                   constrained_partition, event_prob,
                                   statistic_pmf, sweep_order)
from staircase_lab.enumeration import (all_tableaux, oracle_event_prob,
                                       oracle_statistic_pmf)
from staircase_lab.formulas import (box_law, partition_closed,
                                    second_diag_joint_alpha,
                                    second_diag_joint_nonempty)
from staircase_lab.measure import Weights

F = Fraction
R = Requirement
GRID = [Weights(1, 1), Weights(F(1, 2), 3), Weights(3, F(1, 2)),
        Weights(0, 1), Weights(F(5, 2), 0)]


def test_sweep_order():
    assert sweep_order(2) == ((1, 1), (2, 1), (1, 2))
    assert len(sweep_order(5)) == 15


def test_scaled_weights():
    s = ScaledWeights.of(Weights(F(1, 2), F(2, 3)))
    assert (s.q, s.pa, s.pb) == (6, 3, 4)
    assert s.factors() == (24, 6, 18, 6)
    # the bound is exactly the scaled unconstrained total
    w = Weights(F(1, 2), F(2, 3))
    assert s.total_bound(4) == w.normalizer(4) * s.q ** 8


def test_unconstrained_partition_both_engines():
    for n in (1, 2, 3, 5, 8):
        for w in GRID:
            closed = partition_closed(n, w)
            assert constrained_partition(n, w, engine="crt") == closed
            if n <= 5:
                assert constrained_partition(n, w, engine="fractions") == closed


def test_size_two_event_probabilities():
    w = Weights(1, 1)
    for box, want in [((1, 1), F(1, 6)), ((1, 2), F(2, 3)), ((2, 1), F(1, 3))]:
        c = ConstraintSet.of(2, {box: R.MUST_ALPHA})
        assert event_prob(2, w, c) == want


def test_contradictory_constraints_give_zero():
    c = ConstraintSet.of(4, {(1, 4): R.MUST_EMPTY})  # main-diagonal box
    for engine in ("crt", "fractions"):
        assert constrained_partition(4, Weights(1, 1), c, engine=engine) == 0


def test_random_constraint_sets_match_oracle():
    rng = random.Random(7)
    reqs = list(R)
    for n in (3, 4, 5):
        boxes = list(staircase_boxes(n))
        for w in (Weights(1, 1), Weights(F(2, 7), F(5, 3)), Weights(0, F(1, 2))):
            for _ in range(12):
                chosen = rng.sample(boxes, rng.randint(1, min(5, len(boxes))))
                c = ConstraintSet.of(n, {box: rng.choice(reqs) for box in chosen})
                want = oracle_event_prob(n, w, c)
                assert event_prob(n, w, c, engine="crt") == want
                assert event_prob(n, w, c, engine="fractions") == want


def test_diagonal_events_match_closed_forms_beyond_enumeration():
    # sizes far past what enumeration could visit
    w = Weights(F(3, 4), F(7, 5))
    for n in (12, 17):
        for cols in [(1,), (n // 2,), (1, 4), (2, n - 2)]:
            alpha = event_prob(n, w, second_diag_event(n, cols, R.MUST_ALPHA))
            assert alpha == second_diag_joint_alpha(n, w, cols).value
            filled = event_prob(n, w, second_diag_event(n, cols, R.MUST_NONEMPTY))
            assert filled == second_diag_joint_nonempty(n, w, cols).value


def test_box_law_matches_dp_beyond_enumeration():
    w = Weights(F(1, 3), F(9, 2))
    n = 13
    for box in [(1, 1), (4, 7), (13, 1), (1, 13), (6, 6), (11, 2)]:
        law = box_law(n, w, box)
        assert event_prob(n, w, ConstraintSet.of(n, {box: R.MUST_ALPHA})) == law.alpha
        assert event_prob(n, w, ConstraintSet.of(n, {box: R.MUST_BETA})) == law.beta
        assert event_prob(n, w, ConstraintSet.of(n, {box: R.MUST_EMPTY})) == law.empty


def test_statistic_pmf_matches_oracle():
    for n in (2, 4, 5):
        for w in (Weights(1, 1), Weights(F(1, 2), 3), Weights(0, 1)):
            for statistic in STATISTIC_NAMES:
                assert statistic_pmf(n, w, statistic) == \
                    oracle_statistic_pmf(n, w, statistic), (n, w, statistic)


def test_statistic_pmf_validation():
    with pytest.raises(ValueError):
        statistic_pmf(4, Weights(1, 1), "A9")
    with pytest.raises(ValueError):
        statistic_pmf(N_DP + 1, Weights(1, 1), "A2")


def test_third_diag_gap_one_is_possible_gap_two_is_not():
    # Adjacent third-diagonal alphas exist: at n = 4 the pattern forces
    # the tableau shown, whose probability is b^2 / (a+b)^(rising 4).
    w = Weights(F(2, 3), F(5, 7))
    got = event_prob(4, w, third_diag_event(4, (1, 2), R.MUST_ALPHA))
    assert got == w.b ** 2 / w.normalizer(4)
    assert got == oracle_event_prob(4, w, third_diag_event(4, (1, 2), R.MUST_ALPHA))
    # while a gap of exactly two kills the event at any kind
    for n in (5, 8):
        for req in (R.MUST_ALPHA, R.MUST_NONEMPTY):
            assert event_prob(n, w, third_diag_event(n, (1, 3), req)) == 0


def test_conditional_cell_law_chains_to_tableau_prob():
    # multiplying P(cell | earlier cells) along the sweep recovers P(S)
    w = Weights(F(1, 2), F(4, 3))
    for n, pick in ((3, 5), (4, 40)):
        t = all_tableaux(n)[pick]
        req_of = {"A": R.MUST_ALPHA, "B": R.MUST_BETA, ".": R.MUST_EMPTY}
        prob = F(1)
        seen = {}
        for box in sweep_order(n):
            law = conditional_cell_law(n, w, box, ConstraintSet.of(n, seen))
            code = t.cell(*box)
            prob *= {"A": law.alpha, "B": law.beta, ".": law.empty}[code]
            seen[box] = req_of[code]
        assert prob == w.prob(t)


def test_conditional_cell_law_marginal_and_errors():
    w = Weights(1, 2)
    law = conditional_cell_law(6, w, (2, 3))
    direct = box_law(6, w, (2, 3))
    assert (law.alpha, law.beta, law.empty) == \
        (direct.alpha, direct.beta, direct.empty)
    impossible = ConstraintSet.of(6, {(1, 6): R.MUST_EMPTY})
    with pytest.raises(ValueError):
        conditional_cell_law(6, w, (1, 1), impossible)


def test_statistic_pmf_cross_checks_tuple_sums():
    # second factorial moment assembled from per-pair event counts
    w = Weights(F(3, 2), F(1, 5))
    n = 9
    pmf = statistic_pmf(n, w, "X2")
    pair_sum = sum(
        event_prob(n, w, second_diag_event(n, cols, R.MUST_NONEMPTY))
        for cols in itertools.combinations(range(1, n), 2)
    )
    assert pmf.factorial_moment(2) == 2 * pair_sum
