"""Moment formulas checked against brute sums, oracles, and inversion."""

import itertools
import math
from fractions import Fraction as F

import pytest

from staircase_lab import dpcount, formulas, moments
from staircase_lab.enumeration import oracle_statistic_pmf
from staircase_lab.measure import Weights
from staircase_lab.moments import (
    CSV_HEADER,
    POISSON_RATES,
    ConvergenceRow,
    convergence_report,
    exact_statistic_pmf,
    factorial_moments_second_diag,
    factorial_moments_third_diag,
    pmf_from_factorial_moments,
    second_diag_max_count,
    third_diag_max_count,
    tv_to_poisson,
)
from staircase_lab.pmf import Pmf

WEIGHTS = [Weights(1, 1), Weights(F(1, 2), 3), Weights(0, 1)]


# ----------------------------------------------------------------------
# the monotone-tuple recurrence against literal tuple listings

@pytest.mark.parametrize("position_shift", [False, True])
def test_tuple_sum_table_matches_brute_listing(position_shift):
    b = F(2, 3)
    if position_shift:
        factor = lambda t, k: b + t + k - 2
        value = lambda u, pos: b + u + pos - 1
    else:
        factor = lambda t, k: b + t - 1
        value = lambda u, pos: b + u
    table = moments._tuple_sum_table(factor, 7, 3)
    for t in range(8):
        for k in range(4):
            brute = sum(
                math.prod(value(u, pos) for pos, u in enumerate(tup, start=1))
                for tup in itertools.combinations_with_replacement(range(t), k)
            )
            assert table[t][k] == brute, (t, k)


# ----------------------------------------------------------------------
# closed moments against sums of the closed joint laws (large m)

@pytest.mark.parametrize("w", [Weights(1, 1), Weights(F(1, 2), 3)])
def test_second_diag_moments_match_joint_law_sums(w):
    n = 31  # 30 second-diagonal columns
    for r in (1, 2, 3):
        brute = math.factorial(r) * sum(
            formulas.second_diag_joint_alpha(n, w, cols).value
            for cols in itertools.combinations(range(1, n), r)
        )
        assert factorial_moments_second_diag(n, w, "alpha", r)[-1] == brute
        brute = math.factorial(r) * sum(
            formulas.second_diag_joint_nonempty(n, w, cols).value
            for cols in itertools.combinations(range(1, n), r)
        )
        assert factorial_moments_second_diag(n, w, "nonempty", r)[-1] == brute


@pytest.mark.parametrize("w", [Weights(1, 1), Weights(F(1, 2), 3)])
def test_third_diag_main_moments_match_main_term_sums(w):
    n = 20  # 18 third-diagonal columns
    for r in (1, 2, 3):
        for kind in ("alpha", "nonempty"):
            brute = math.factorial(r) * sum(
                formulas.third_diag_main_term(n, w, cols, kind).value
                for cols in itertools.combinations(range(1, n - 1), r)
            )
            got = factorial_moments_third_diag(n, w, kind, r, "main_term")[-1]
            assert got == brute, (kind, r)


# ----------------------------------------------------------------------
# spec'd point values and symmetry

def test_known_moment_values():
    w = Weights(1, 1)
    assert factorial_moments_second_diag(2, w, "nonempty", 1) == [F(1, 3)]
    assert factorial_moments_second_diag(3, w, "alpha", 1) == [F(1, 4)]
    assert factorial_moments_third_diag(10, w, "nonempty", 1, "main_term") == [F(8, 11)]


def test_beta_moments_are_alpha_with_swapped_weights():
    w = Weights(F(1, 2), 3)
    assert factorial_moments_second_diag(9, w, "beta", 3) == \
        factorial_moments_second_diag(9, w.swapped(), "alpha", 3)
    assert factorial_moments_third_diag(9, w, "beta", 2, "exact_dp") == \
        factorial_moments_third_diag(9, w.swapped(), "alpha", 2, "exact_dp")
    assert factorial_moments_third_diag(30, w, "beta", 2, "main_term") == \
        factorial_moments_third_diag(30, w.swapped(), "alpha", 2, "main_term")


def test_moment_argument_validation():
    w = Weights(1, 1)
    with pytest.raises(ValueError):
        factorial_moments_second_diag(6, w, "gamma", 1)
    with pytest.raises(ValueError):
        factorial_moments_second_diag(6, w, "alpha", 0)
    with pytest.raises(ValueError):
        factorial_moments_second_diag(6, w, "alpha", second_diag_max_count(6) + 2)
    with pytest.raises(ValueError):
        factorial_moments_third_diag(8, w, "alpha", 1, "fast")
    with pytest.raises(ValueError):
        factorial_moments_third_diag(8, w, "alpha", third_diag_max_count(8) + 2)


def test_structural_caps():
    assert [second_diag_max_count(n) for n in (1, 2, 3, 4, 5)] == [0, 1, 1, 2, 2]
    assert [third_diag_max_count(n) for n in (2, 3, 4, 5, 6, 8)] == [0, 1, 2, 2, 2, 4]
    # one past the cap is allowed and vanishes exactly
    w = Weights(F(1, 2), 3)
    assert factorial_moments_second_diag(6, w, "alpha", 4)[-1] == 0
    assert factorial_moments_third_diag(
        8, w, "alpha", third_diag_max_count(8) + 1, "exact_dp")[-1] == 0


# ----------------------------------------------------------------------
# moments against the enumeration oracle and the counting engine

@pytest.mark.parametrize("w", WEIGHTS)
@pytest.mark.parametrize("n", [2, 4, 5, 7])
def test_second_diag_moments_match_oracle(n, w):
    R = min(3, second_diag_max_count(n) + 1)
    for kind, name in (("alpha", "A2"), ("beta", "B2"), ("nonempty", "X2")):
        oracle = oracle_statistic_pmf(n, w, name)
        got = factorial_moments_second_diag(n, w, kind, R)
        assert got == [oracle.factorial_moment(r) for r in range(1, R + 1)]


@pytest.mark.parametrize("w", WEIGHTS)
@pytest.mark.parametrize("n", [3, 5, 7])
def test_third_diag_exact_moments_match_oracle(n, w):
    R = min(3, third_diag_max_count(n) + 1)
    for kind, name in (("alpha", "A3"), ("nonempty", "X3")):
        oracle = oracle_statistic_pmf(n, w, name)
        got = factorial_moments_third_diag(n, w, kind, R, "exact_dp")
        assert got == [oracle.factorial_moment(r) for r in range(1, R + 1)]


@pytest.mark.parametrize("n", [6, 10, 12])
def test_inverted_second_diag_law_matches_counting_engine(n):
    for w in (Weights(1, 1), Weights(F(1, 2), 3)):
        for name in ("A2", "B2", "X2"):
            assert exact_statistic_pmf(n, w, name) == dpcount.statistic_pmf(n, w, name)


def test_exact_statistic_pmf_dispatch():
    w = Weights(1, 1)
    assert exact_statistic_pmf(1, w, "A2") == Pmf.point_mass(0)
    assert exact_statistic_pmf(4, w, "Nalpha") == dpcount.statistic_pmf(4, w, "Nalpha")
    with pytest.raises(ValueError):
        exact_statistic_pmf(4, w, "Z9")


# ----------------------------------------------------------------------
# inversion

def test_inversion_examples_and_errors():
    p = pmf_from_factorial_moments([1, F(1, 3)])
    assert p.masses == (F(2, 3), F(1, 3))
    assert pmf_from_factorial_moments([1]) == Pmf.point_mass(0)
    with pytest.raises(ValueError):
        pmf_from_factorial_moments([])
    with pytest.raises(ValueError):
        pmf_from_factorial_moments([F(1, 2), F(1, 3)])
    with pytest.raises(ValueError):
        pmf_from_factorial_moments([1, 2, 0])  # forces negative mass at 0
    with pytest.raises(TypeError):
        pmf_from_factorial_moments([1, 0.5])


@pytest.mark.parametrize("n", [2, 5, 9, 30, 100, 200])
def test_inversion_round_trips(n):
    w = Weights(F(1, 2), 3)
    law = exact_statistic_pmf(n, w, "X2")
    mus = [law.factorial_moment(r) for r in range(law.max_value + 1)]
    assert pmf_from_factorial_moments(mus) == law
    cap = second_diag_max_count(n)
    if cap >= 1:
        assert mus[1:] == factorial_moments_second_diag(n, w, "nonempty", cap)


# ----------------------------------------------------------------------
# the exact_dp to main_term gap on the third diagonal

def test_main_term_approaches_exact_moments():
    w = Weights(1, 1)
    for r in (1, 2):
        gaps = []
        for n in range(10, 19, 4):
            exact = factorial_moments_third_diag(n, w, "alpha", r, "exact_dp")[-1]
            main = factorial_moments_third_diag(n, w, "alpha", r, "main_term")[-1]
            gaps.append(abs(float(exact - main)))
        assert all(g > 0 for g in gaps)
        assert gaps == sorted(gaps, reverse=True)


# ----------------------------------------------------------------------
# Poisson distances

def test_tv_to_poisson_point_mass():
    tv = tv_to_poisson(Pmf.point_mass(0), 1)
    assert math.isclose(tv, 1 - math.exp(-1), rel_tol=1e-12)


def test_tv_to_poisson_truncated_poisson_is_tiny():
    lam, top = F(1, 2), 40
    masses = [F(lam.numerator, lam.denominator) ** k / math.factorial(k)
              for k in range(top + 1)]
    scale = sum(masses)
    law = Pmf(tuple(mk / scale for mk in masses))
    assert tv_to_poisson(law, lam) < 1e-40


def test_tv_to_poisson_validation_and_precision():
    p = Pmf.point_mass(2)
    with pytest.raises(ValueError):
        tv_to_poisson(p, 0)
    with pytest.raises(ValueError):
        tv_to_poisson(p, 1, precision=0)
    with pytest.raises(TypeError):
        tv_to_poisson(p, 0.5)
    loose = tv_to_poisson(p, F(1, 2), precision=1e-6)
    tight = tv_to_poisson(p, F(1, 2), precision=1e-12)
    assert math.isclose(loose, tight, abs_tol=1e-6)


def test_convergence_report_rows_and_pairing():
    w = Weights(1, 1)
    rows = convergence_report([8, 16, 32], w, "X2")
    assert [row.n for row in rows] == [8, 16, 32]
    assert all(isinstance(row, ConvergenceRow) for row in rows)
    tvs = [row.tv for row in rows]
    assert tvs[0] > tvs[1] > tvs[2] > 0
    for row in rows:
        assert row.moments[0] == exact_statistic_pmf(row.n, w, "X2").factorial_moment(1)
        assert len(row.as_csv().split(",")) == len(CSV_HEADER.split(","))
    assert convergence_report([8], w, "X2", lam=1) == [rows[0]]
    with pytest.raises(ValueError):
        convergence_report([8], w, "X2", lam=F(1, 2))
    with pytest.raises(ValueError):
        convergence_report([8], w, "Nalpha")
    with pytest.raises(ValueError):
        convergence_report([], w, "X2")
    assert POISSON_RATES["A3"] == F(1, 2)


def test_convergence_report_parallel_matches_serial():
    w = Weights(F(1, 2), 3)
    serial = convergence_report([4, 6, 9], w, "A2")
    parallel = convergence_report([4, 6, 9], w, "A2", threads=2)
    assert serial == parallel
