"""Batch command-line front end.

Every command writes deterministic machine-readable output: CSV by
default with a ``--json`` alternative where tabular, JSON where the
result is a structured report.  Exact rationals are printed as p/q
and never silently rounded; the only float columns are the ones
documented as approximations (total variation distances).  Exit code
2 flags bad usage, 3 a self-test mismatch.
"""

from __future__ import annotations

import json
import math
import os
import random
import sys
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import click

from . import asep, constraints, dpcount, enumeration, formulas, moments, sampler
from .core import STATISTIC_NAMES, Tableau, diagonal_statistic
from .measure import FourWeights, Weights, parse_rational
from .pmf import Pmf


class RationalType(click.ParamType):
    name = "rational"

    def convert(self, value, param, ctx):
        if isinstance(value, Fraction):
            return value
        try:
            return parse_rational(value)
        except (ValueError, ZeroDivisionError) as exc:
            self.fail(f"{value!r} is not an exact rational: {exc}", param, ctx)


RATIONAL = RationalType()


def _ints(text: str, what: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part != ""]
    except ValueError:
        raise click.UsageError(f"{what} must be comma-separated integers, got {text!r}")


def _weights(a: Fraction, b: Fraction) -> Weights:
    try:
        return Weights(a, b)
    except ValueError as exc:
        raise click.UsageError(str(exc))


def _cell(value):
    return value if isinstance(value, (int, float, str)) else str(value)


def _emit(header: Sequence[str], rows: Sequence[Sequence], as_json: bool) -> None:
    if as_json:
        click.echo(json.dumps(
            [dict(zip(header, map(_cell, row))) for row in rows], indent=2
        ))
    else:
        click.echo(",".join(header))
        for row in rows:
            click.echo(",".join(str(cell) for cell in row))


def _fail_on_value_error(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except ValueError as exc:
        raise click.UsageError(str(exc))


@click.group()
def main():
    """Exact distributions, samplers, and cross-checks for weighted
    staircase tableaux."""


@main.command()
@click.option("--n", type=int, required=True, help="Tableau size.")
@click.option("--a", type=RATIONAL, default="1", show_default=True)
@click.option("--b", type=RATIONAL, default="1", show_default=True)
@click.option("--four", default=None, metavar="A,B,G,D",
              help="Four symbol weights; overrides --a/--b.")
@click.option("--json", "as_json", is_flag=True, help="Emit JSON instead of CSV.")
def count(n, a, b, four, as_json):
    """Partition value: closed product and, at small sizes, brute force."""
    if four is not None:
        parts = four.split(",")
        if len(parts) != 4:
            raise click.UsageError("--four needs exactly four rationals A,B,G,D")
        w = _fail_on_value_error(
            FourWeights, *[RATIONAL.convert(p, None, None) for p in parts]
        )
    else:
        w = _weights(a, b)
    rows: List[Tuple[str, Fraction]] = [
        ("closed", _fail_on_value_error(formulas.partition_closed, n, w))
    ]
    if n <= enumeration.N_ENUM:
        rows.append(("brute", enumeration.brute_partition(n, w)))
    _emit(("form", "value"), rows, as_json)


@main.command()
@click.option("--n", type=int, required=True)
@click.option("--a", type=RATIONAL, default="1", show_default=True)
@click.option("--b", type=RATIONAL, default="1", show_default=True)
@click.option("--box", required=True, metavar="I,J", help="Box as row,column.")
@click.option("--json", "as_json", is_flag=True)
def prob(n, a, b, box, as_json):
    """Exact single-box cell law."""
    pair = _ints(box, "--box")
    if len(pair) != 2:
        raise click.UsageError("--box needs exactly two integers I,J")
    law = _fail_on_value_error(formulas.box_law, n, _weights(a, b), tuple(pair))
    _emit(("cell", "probability"),
          [("alpha", law.alpha), ("beta", law.beta), ("empty", law.empty)],
          as_json)


@main.command()
@click.option("--diag", type=click.Choice(["2", "3"]), required=True)
@click.option("--kind", type=click.Choice(["alpha", "nonempty"]), required=True)
@click.option("--cols", required=True, metavar="J1,J2,..")
@click.option("--n", type=int, required=True)
@click.option("--a", type=RATIONAL, default="1", show_default=True)
@click.option("--b", type=RATIONAL, default="1", show_default=True)
@click.option("--json", "as_json", is_flag=True)
def joint(diag, kind, cols, n, a, b, as_json):
    """Joint diagonal cell law by every applicable route."""
    columns = _ints(cols, "--cols")
    w = _weights(a, b)
    rows = []
    if diag == "2":
        closed = _fail_on_value_error(
            formulas.second_diag_joint_alpha if kind == "alpha"
            else formulas.second_diag_joint_nonempty,
            n, w, columns,
        )
        rows.append(("closed", closed.value, closed.reason or "exact"))
        event = constraints.second_diag_event(
            n, columns,
            constraints.Requirement.MUST_ALPHA if kind == "alpha"
            else constraints.Requirement.MUST_NONEMPTY,
        )
    else:
        term = _fail_on_value_error(formulas.third_diag_main_term, n, w, columns, kind)
        note = term.reason or f"remainder_order_{term.remainder_exponent}"
        if term.order_only:
            note += ",order_only"
        rows.append(("main_term", term.value, note))
        event = constraints.third_diag_event(
            n, columns,
            constraints.Requirement.MUST_ALPHA if kind == "alpha"
            else constraints.Requirement.MUST_NONEMPTY,
        )
    if n <= dpcount.N_DP:
        rows.append(("exact_dp", dpcount.event_prob(n, w, event), "exact"))
    if n <= 7:
        rows.append(("oracle", enumeration.oracle_event_prob(n, w, event), "exact"))
    _emit(("route", "value", "note"), rows, as_json)


@main.command("moments")
@click.option("--diag", type=click.Choice(["2", "3"]), required=True)
@click.option("--kind", type=click.Choice(["alpha", "beta", "nonempty"]),
              required=True)
@click.option("--n", type=int, required=True)
@click.option("--a", type=RATIONAL, default="1", show_default=True)
@click.option("--b", type=RATIONAL, default="1", show_default=True)
@click.option("--r", "order", type=int, required=True, help="Highest moment order.")
@click.option("--mode", type=click.Choice(["exact_dp", "main_term"]),
              default="exact_dp", show_default=True,
              help="Third-diagonal route; ignored for --diag 2.")
@click.option("--json", "as_json", is_flag=True)
def moments_cmd(diag, kind, n, a, b, order, mode, as_json):
    """Exact factorial moments of a diagonal count."""
    w = _weights(a, b)
    if diag == "2":
        values = _fail_on_value_error(
            moments.factorial_moments_second_diag, n, w, kind, order)
    else:
        values = _fail_on_value_error(
            moments.factorial_moments_third_diag, n, w, kind, order, mode)
    _emit(("r", "value"), list(enumerate(values, start=1)), as_json)


@main.command()
@click.option("--stat", type=click.Choice(list(STATISTIC_NAMES)), required=True)
@click.option("--n", type=int, required=True)
@click.option("--a", type=RATIONAL, default="1", show_default=True)
@click.option("--b", type=RATIONAL, default="1", show_default=True)
@click.option("--json", "as_json", is_flag=True)
def pmf(stat, n, a, b, as_json):
    """Exact law of a named statistic."""
    law = _fail_on_value_error(moments.exact_statistic_pmf, n, _weights(a, b), stat)
    _emit(("k", "probability"), law.items(), as_json)


@main.command()
@click.option("--stat", type=click.Choice(sorted(moments.POISSON_RATES)),
              required=True)
@click.option("--ns", required=True, metavar="N1,N2,..")
@click.option("--a", type=RATIONAL, default="1", show_default=True)
@click.option("--b", type=RATIONAL, default="1", show_default=True)
@click.option("--lam", type=RATIONAL, default=None,
              help="Poisson rate; must match the statistic's limit.")
@click.option("--json", "as_json", is_flag=True)
def converge(stat, ns, a, b, lam, as_json):
    """Moment table and Poisson distances across sizes."""
    threads = os.environ.get("STAIRCASE_LAB_THREADS")
    if threads is not None:
        try:
            threads = int(threads)
        except ValueError:
            raise click.UsageError(
                f"STAIRCASE_LAB_THREADS must be an integer, got {threads!r}")
    rows = _fail_on_value_error(
        moments.convergence_report,
        _ints(ns, "--ns"), _weights(a, b), stat, lam, threads,
    )
    _emit(
        moments.CSV_HEADER.split(","),
        [(r.n, *[repr(float(mu)) for mu in r.moments], repr(r.tv)) for r in rows],
        as_json,
    )


@main.command()
@click.option("--n", type=int, required=True)
@click.option("--a", type=RATIONAL, default="1", show_default=True)
@click.option("--b", type=RATIONAL, default="1", show_default=True)
@click.option("--count", type=int, default=1, show_default=True)
@click.option("--seed", type=int, required=True,
              help="Explicit seed; there is no default on purpose.")
@click.option("--method", type=click.Choice(["enum_alias", "chain_rule"]),
              default="chain_rule", show_default=True)
def sample(n, a, b, count, seed, method):
    """Draw tableaux; a JSON header line, then one text block each."""
    w = _weights(a, b)
    draws = _fail_on_value_error(
        sampler.sample_many, n, w, random.Random(seed), count, method)
    click.echo(json.dumps({
        "n": n, "a": str(w.a), "b": str(w.b), "seed": seed,
        "method": method, "count": count,
    }, sort_keys=True))
    for t in draws:
        click.echo(t.to_text())
        click.echo("")


@main.command("asep-verify")
@click.option("--n", type=int, required=True)
@click.option("--rates", required=True, metavar="A,B,G,D,U,Q",
              help="alpha,beta,gamma,delta,u,q as rationals.")
def asep_verify(n, rates):
    """Cross-validate the tableaux route against the generator solve."""
    parts = rates.split(",")
    if len(parts) != 6:
        raise click.UsageError("--rates needs exactly six rationals A,B,G,D,U,Q")
    values = [RATIONAL.convert(p, None, None) for p in parts]
    params = _fail_on_value_error(asep.AsepParams, *values[:4], u=values[4],
                                  q=values[5])
    report = _fail_on_value_error(asep.cross_validate, n, params)
    click.echo(json.dumps(report, indent=2))


def _selftest_suites():
    ones = Weights(1, 1)
    mixed = Weights(Fraction(1, 2), 3)

    def counts():
        return all(enumeration.count_tableaux(n) == math.factorial(n + 1)
                   for n in range(1, 6))

    def partitions():
        return all(
            enumeration.brute_partition(n, w) == formulas.partition_closed(n, w)
            for n in range(1, 6) for w in (ones, mixed)
        )

    def box_laws():
        for n in (5, 6):
            for box in ((1, n), (2, 3), (3, 1)):
                law = formulas.box_law(n, mixed, box)
                got = dpcount.conditional_cell_law(n, mixed, box)
                if (law.alpha, law.beta, law.empty) != (got.alpha, got.beta, got.empty):
                    return False
        return True

    def statistic_laws():
        return all(
            dpcount.statistic_pmf(4, w, s) == enumeration.oracle_statistic_pmf(4, w, s)
            for w in (ones, mixed) for s in STATISTIC_NAMES
        )

    def moment_formulas():
        for n in (4, 5):
            for kind, stat in (("alpha", "A2"), ("nonempty", "X2")):
                R = moments.second_diag_max_count(n)
                got = moments.factorial_moments_second_diag(n, mixed, kind, R)
                oracle = enumeration.oracle_statistic_pmf(n, mixed, stat)
                if got != [oracle.factorial_moment(r) for r in range(1, R + 1)]:
                    return False
        return True

    def inversion():
        return all(
            moments.exact_statistic_pmf(8, mixed, s) == dpcount.statistic_pmf(8, mixed, s)
            for s in ("A2", "B2", "X2")
        )

    def sampler_chain():
        rng = random.Random(7)
        draws = sampler.sample_many(4, mixed, rng, 200, "chain_rule")
        return all(t.is_valid for t in draws)

    def asep_bridge():
        report = asep.cross_validate(
            2, asep.AsepParams(2, 1, 3, 1, u=1, q=Fraction(1, 2)))
        return "alpha_delta" in report["matching_conventions"]

    return [
        ("counts_match_factorial", counts),
        ("brute_partition_matches_closed", partitions),
        ("box_laws_match_counting_engine", box_laws),
        ("statistic_laws_match_oracle", statistic_laws),
        ("moment_formulas_match_oracle", moment_formulas),
        ("moment_inversion_matches_counting_engine", inversion),
        ("chain_sampler_emits_valid_tableaux", sampler_chain),
        ("asep_routes_agree", asep_bridge),
    ]


@main.command()
def selftest():
    """Run the oracle-equivalence suites; exit 3 on any mismatch."""
    failed = False
    for name, check in _selftest_suites():
        ok = check()
        failed = failed or not ok
        click.echo(f"{'ok' if ok else 'MISMATCH'} {name}")
    if failed:
        sys.exit(3)


if __name__ == "__main__":  # pragma: no cover - direct module execution
    main()
