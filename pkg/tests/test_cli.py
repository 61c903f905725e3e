"""End-to-end command-line checks with frozen outputs."""

import json
from fractions import Fraction

import pytest
from click.testing import CliRunner

from staircase_lab import cli, dpcount
from staircase_lab.core import Tableau
from staircase_lab.measure import Weights


@pytest.fixture()
def runner():
    return CliRunner()


def run(runner, *args, env=None, expect=0):
    result = runner.invoke(cli.main, args, env=env, catch_exceptions=False)
    assert result.exit_code == expect, result.output
    return result.output


def test_count_golden(runner):
    out = run(runner, "count", "--n", "3")
    assert out == "form,value\nclosed,24\nbrute,24\n"


def test_count_four_symbol_json(runner):
    out = run(runner, "count", "--n", "3", "--four", "1,1,1,1", "--json")
    assert json.loads(out) == [
        {"form": "closed", "value": "384"},
        {"form": "brute", "value": "384"},
    ]


def test_count_skips_brute_force_at_large_sizes(runner):
    out = run(runner, "count", "--n", "40")
    assert "brute" not in out and out.startswith("form,value\nclosed,")


def test_count_rejects_malformed_four(runner):
    run(runner, "count", "--n", "3", "--four", "1,1,1", expect=2)
    run(runner, "count", "--n", "3", "--four", "1,1,x,1", expect=2)


def test_prob_golden(runner):
    out = run(runner, "prob", "--n", "6", "--a", "1/2", "--b", "3",
              "--box", "2,3")
    assert out == "cell,probability\nalpha,4/39\nbeta,2/65\nempty,13/15\n"


def test_prob_rejects_outside_box(runner):
    out = runner.invoke(cli.main, ["prob", "--n", "4", "--box", "3,3"])
    assert out.exit_code == 2
    assert "outside" in out.output


def test_joint_second_diag_adjacent_columns_vanish(runner):
    out = run(runner, "joint", "--diag", "2", "--kind", "nonempty",
              "--cols", "1,2", "--n", "6", "--a", "1", "--b", "1")
    lines = out.splitlines()
    assert lines[0] == "route,value,note"
    routes = {line.split(",")[0]: line.split(",")[1] for line in lines[1:]}
    assert routes == {"closed": "0", "exact_dp": "0", "oracle": "0"}


def test_joint_second_diag_routes_agree(runner):
    out = json.loads(run(runner, "joint", "--diag", "2", "--kind", "alpha",
                         "--cols", "1,3", "--n", "7", "--a", "2", "--b", "1/3",
                         "--json"))
    values = {row["route"]: row["value"] for row in out}
    assert values["closed"] == values["exact_dp"] == values["oracle"]
    assert Fraction(values["closed"]) > 0


def test_joint_third_diag_reports_main_term_and_exact(runner):
    out = run(runner, "joint", "--diag", "3", "--kind", "alpha",
              "--cols", "1,4", "--n", "8", "--a", "1/2", "--b", "3")
    lines = out.splitlines()
    assert lines[1].startswith("main_term,") and "remainder_order_3" in lines[1]
    assert lines[2].startswith("exact_dp,") and lines[2].endswith(",exact")


def test_joint_third_diag_adjacent_columns_order_only(runner):
    out = run(runner, "joint", "--diag", "3", "--kind", "nonempty",
              "--cols", "2,3", "--n", "9")
    assert "order_only" in out.splitlines()[1]


def test_joint_rejects_columns_off_the_diagonal(runner):
    run(runner, "joint", "--diag", "2", "--kind", "alpha", "--cols", "9",
        "--n", "6", expect=2)


def test_moments_second_diag_golden(runner):
    out = run(runner, "moments", "--diag", "2", "--kind", "alpha",
              "--n", "10", "--a", "1", "--b", "1", "--r", "3")
    assert out == "r,value\n1,9/22\n2,7/60\n3,5/264\n"


def test_moments_third_diag_modes_differ_but_lead_identically(runner):
    exact = run(runner, "moments", "--diag", "3", "--kind", "nonempty",
                "--n", "12", "--r", "2")
    main = run(runner, "moments", "--diag", "3", "--kind", "nonempty",
               "--n", "12", "--r", "2", "--mode", "main_term")
    assert exact != main
    assert exact.splitlines()[0] == main.splitlines()[0] == "r,value"


def test_moments_rejects_order_past_cap(runner):
    run(runner, "moments", "--diag", "2", "--kind", "alpha", "--n", "4",
        "--r", "9", expect=2)


def test_pmf_matches_counting_engine(runner):
    out = json.loads(run(runner, "pmf", "--stat", "A2", "--n", "5", "--json"))
    law = dpcount.statistic_pmf(5, Weights(1, 1), "A2")
    assert {int(row["k"]): Fraction(row["probability"]) for row in out} \
        == law.as_dict()


def test_pmf_rejects_unknown_statistic(runner):
    result = runner.invoke(cli.main, ["pmf", "--stat", "Z9", "--n", "5"])
    assert result.exit_code == 2


def test_converge_golden_and_decreasing(runner):
    out = run(runner, "converge", "--stat", "X2", "--ns", "8,16,32",
              "--a", "1", "--b", "1")
    lines = out.splitlines()
    assert lines[0] == "n,r1,r2,r3,r4,tv"
    tvs = [float(line.split(",")[-1]) for line in lines[1:]]
    assert tvs == sorted(tvs, reverse=True) and len(tvs) == 3


def test_converge_is_byte_identical_across_thread_counts(runner):
    args = ("converge", "--stat", "A2", "--ns", "6,10", "--a", "1/2", "--b", "3")
    serial = run(runner, *args, env={"STAIRCASE_LAB_THREADS": "1"})
    parallel = run(runner, *args, env={"STAIRCASE_LAB_THREADS": "2"})
    assert serial == parallel


def test_converge_rejects_bad_thread_env(runner):
    run(runner, "converge", "--stat", "X2", "--ns", "6",
        env={"STAIRCASE_LAB_THREADS": "many"}, expect=2)


def test_converge_rejects_mismatched_rate(runner):
    run(runner, "converge", "--stat", "X2", "--ns", "6,8", "--lam", "1/2",
        expect=2)


def test_sample_output_round_trips(runner):
    out = run(runner, "sample", "--n", "4", "--a", "1", "--b", "2",
              "--count", "3", "--seed", "11")
    header, *blocks = out.split("\n\n")
    head_line, first_block = header.split("\n", 1)
    assert json.loads(head_line) == {
        "n": 4, "a": "1", "b": "2", "seed": 11,
        "method": "chain_rule", "count": 3,
    }
    texts = [first_block] + [b for b in blocks if b]
    assert len(texts) == 3
    for text in texts:
        t = Tableau.parse(text)
        assert t.n == 4 and t.is_valid


def test_sample_is_deterministic_per_seed(runner):
    args = ("sample", "--n", "5", "--count", "4", "--seed", "3",
            "--method", "enum_alias")
    assert run(runner, *args) == run(runner, *args)
    other = run(runner, "sample", "--n", "5", "--count", "4", "--seed", "4",
                "--method", "enum_alias")
    assert other != run(runner, *args)


def test_sample_requires_seed(runner):
    result = runner.invoke(cli.main, ["sample", "--n", "3"])
    assert result.exit_code == 2
    assert "--seed" in result.output


def test_sample_validates_before_emitting_anything(runner):
    result = runner.invoke(cli.main, ["sample", "--n", "99", "--seed", "1"])
    assert result.exit_code == 2
    assert not any(line.startswith("{") for line in result.output.splitlines())


def test_asep_verify_reports_matching_convention(runner):
    out = json.loads(run(runner, "asep-verify", "--n", "2",
                         "--rates", "2,1,3,1,1,1/2"))
    assert out["matching_conventions"] == ["alpha_delta"]
    states = {row["state"] for conv in out["conventions"]
              for row in conv["per_state"]}
    assert states == {"00", "01", "10", "11"}


def test_asep_verify_rejects_bad_rates(runner):
    run(runner, "asep-verify", "--n", "2", "--rates", "1,1,1,1,1", expect=2)
    run(runner, "asep-verify", "--n", "2", "--rates", "-1,1,1,1,1,0", expect=2)


def test_selftest_passes(runner):
    out = run(runner, "selftest")
    lines = out.splitlines()
    assert len(lines) == 8 and all(line.startswith("ok ") for line in lines)


def test_selftest_exits_three_on_mismatch(runner, monkeypatch):
    monkeypatch.setattr(cli, "_selftest_suites",
                        lambda: [("forced_failure", lambda: False)])
    result = runner.invoke(cli.main, ["selftest"])
    assert result.exit_code == 3
    assert "MISMATCH forced_failure" in result.output


def test_rational_option_reads_decimals_exactly(runner):
    decimal = run(runner, "count", "--n", "3", "--a", "0.5", "--b", "0.25")
    slashed = run(runner, "count", "--n", "3", "--a", "1/2", "--b", "1/4")
    assert decimal == slashed
    run(runner, "count", "--n", "3", "--a", "half", expect=2)
