"""Concurrency tests for batch classification."""

import asyncio
import json

import pytest

from singcat.classify import Budget
from singcat import cli
from singcat.cli import run_batch

PAIRS = [
    ("x^3", "x", "x^4", "x"),
    ("x^2 + y^2", "x,y", "x*y", "x,y"),
    ("x^3", "x", "x^3 + y^2", "x,y"),
    ("x^2*y + y^3", "x,y", "x^2*y + y^3 + z^2 + w^2", "x,y,z,w"),
    ("x^5 + y^2", "x,y", "x^2*y + y^3", "x,y"),
    ("x^3 + y^4", "x,y", "x^3 + y^4", "x,y"),
]


def batch_line(left, left_vars, right, right_vars):
    return json.dumps(
        {
            "left": {"variables": left_vars.split(","), "germ": left},
            "right": {"variables": right_vars.split(","), "germ": right},
        }
    )


@pytest.mark.asyncio
async def test_concurrent_batch_matches_sequential():
    lines = [batch_line(*pair) for pair in PAIRS]
    budget = Budget()

    concurrent = await run_batch(lines, budget, concurrency=4)
    sequential = await run_batch(lines, budget, concurrency=1)

    assert [code for code, _ in concurrent] == [0] * len(PAIRS)
    assert concurrent == sequential

    outcomes = [json.loads(text)["payload"]["verdict"]["verdict"]["outcome"] for _, text in concurrent]
    assert outcomes == [
        "not_equivalent",
        "equivalent",
        "not_equivalent",
        "equivalent",
        "not_equivalent",
        "equivalent",
    ]


@pytest.mark.asyncio
async def test_batch_errors_stay_on_their_line():
    lines = [batch_line("x^3", "x", "x^4", "x"), '{"left": {}}', batch_line("x + y", "x,y", "x^2", "x")]
    results = await run_batch(lines, Budget(), concurrency=3, verify=True)

    codes = [code for code, _ in results]
    assert codes == [0, 2, 3]
    assert json.loads(results[1][1])["line"] == 2
    assert json.loads(results[2][1])["line"] == 3
    assert json.loads(results[0][1])["payload"]["verdict"]["verified"] is True


def test_batch_runs_inside_event_loop():
    results = asyncio.run(run_batch([batch_line("x^2", "x", "y^2", "y")], Budget(), concurrency=1))
    assert results[0][0] == 0


@pytest.mark.asyncio
async def test_unexpected_failure_keeps_other_lines(monkeypatch):
    decide = cli.decide_dg_equivalence

    def failing_on_u(g1, g2, budget):
        if g1.ring.var_names == ("u",):
            raise RuntimeError("solver crashed")
        return decide(g1, g2, budget)

    monkeypatch.setattr(cli, "decide_dg_equivalence", failing_on_u)
    lines = [batch_line("x^3", "x", "x^4", "x"), batch_line("u^3", "u", "u^3", "u"), batch_line("x^2", "x", "y^2", "y")]
    results = await run_batch(lines, Budget(), concurrency=3)

    assert [code for code, _ in results] == [0, 1, 0]
    assert json.loads(results[1][1]) == {"error": "internal error: RuntimeError", "exit_code": 1, "line": 2}
