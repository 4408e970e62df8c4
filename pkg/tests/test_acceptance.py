"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v``; the verdicts are repeated in
an "acceptance criteria" section at the end of the session.
"""

import itertools
import math
import random
import re
import subprocess
import sys
import time

import pytest

from cheesescript.kernel import evaluate
from cheesescript.kernel.values import Atom, show
from cheesescript.runtime import Machine, explore_interleavings, run_with_big_stack, scheduler_run
from cheesescript.stdlib import corpus_names, corpus_source
from cheesescript.syntax import parse_program

from conftest import parse_trace, run_values
from datalog import brute_force_saturation, random_program, run_engine, shuffled_order

FRINGE_TREE = "Fork[Leaf[3], Fork[Leaf[4], Leaf[5]]]"
SECOND_TREE = "Fork[Fork[Leaf[3], Leaf[4]], Leaf[5]]"


def outcome(result) -> str:
    if result.kind == "error":
        v = result.value
        return f"exception: {v.name if type(v) is Atom else show(v)}"
    return show(result.value)


def run_items(machine: Machine, items) -> list[str]:
    """Run each item on its own so that an exception does not stop the rest."""
    return run_with_big_stack(lambda: [outcome(machine.run_item(i)) for i in items])


# ---------------------------------------------------------------- 1


def test_criterion_01_fringe(report):
    src = corpus_source("fringe").split("Fringe(Fork", 1)[0] + f"Fringe({FRINGE_TREE});;"
    start = time.perf_counter()
    values = run_values(src)
    elapsed = time.perf_counter() - start
    ok = values == ["[3, 4, 5]"] and elapsed < 1.0
    assert report(1, ok, f"Fringe -> {values[-1]} in {elapsed:.3f}s")


# ---------------------------------------------------------------- 2


def test_criterion_02_same_fringe_under_50_seeds(report):
    src = corpus_source("fringe").split("Fringe(Fork", 1)[0] + f"SameFringe({FRINGE_TREE}, {SECOND_TREE});;"
    answers = {seed: run_values(src, seed=seed)[-1] for seed in range(50)}
    wrong = [s for s, v in answers.items() if v != "true"]
    assert report(2, not wrong, f"50 seeds, {len(wrong)} not true")


# ---------------------------------------------------------------- 3


def test_criterion_03_sort(report):
    items = parse_program(corpus_source("sort"))
    machine = Machine()
    lists = [list(p) for n in range(8) for p in itertools.product((1, 2, 3), repeat=n)]

    def go():
        machine.run_program(items[:-1])
        paper = outcome(machine.run_item(items[-1]))
        bad = []
        for xs in lists:
            got = outcome(machine.run_item(parse_program(f"Sort({xs});;")[0]))
            if got != str(sorted(xs)):
                bad.append((xs, got))
        return paper, bad

    start = time.perf_counter()
    paper, bad = run_with_big_stack(go)
    elapsed = time.perf_counter() - start
    ok = paper == "[1, 2, 3, 7, 8, 9]" and not bad and elapsed < 30
    assert report(3, ok, f"Sort([3, 7, 2, 9, 8, 1]) -> {paper}; {len(lists)} lists, {len(bad)} wrong, {elapsed:.1f}s")


# ---------------------------------------------------------------- 4


def test_criterion_04_account_nondeterminism(report):
    start = time.perf_counter()
    comma = explore_interleavings(corpus_source("account_block"))
    semicolon = explore_interleavings(corpus_source("account_sequential"))
    elapsed = time.perf_counter() - start
    ok = (
        comma.results == {"2", "3", "4", "5"}
        and semicolon.results == {"2"}
        and not comma.partial and not semicolon.partial
        and elapsed < 10
    )
    assert report(4, ok, f"comma block {comma.show()}, semicolon block {semicolon.show()}, {elapsed:.2f}s")


# ---------------------------------------------------------------- 5


def test_criterion_05_overdraft(report):
    defs = parse_program(corpus_source("account"))[:-1]
    steps = parse_program("a :=: SimpleAccount(balance: 5, penalty: 1);; a.withdraw(7);; a.getBalance;;")
    machine = Machine()
    run_items(machine, defs)
    _, thrown, balance = run_items(machine, steps)
    ok = thrown == "exception: OverdrawnException" and balance == "4"
    assert report(5, ok, f"withdraw(7) -> {thrown}; balance {balance}")


# ---------------------------------------------------------------- 6

FEE_DEFS = parse_program(corpus_source("fee_account"))[:-1]


def account_trace(kind: str, balance: int, penalty: int, fee: int, ops) -> list[str]:
    machine = Machine()
    run_items(machine, FEE_DEFS)
    make = parse_program(f"a :=: {kind}(balance: {balance}, penalty: {penalty}, fee: {fee});;")
    run_items(machine, make)
    out = []
    for op in ops:
        out.extend(run_items(machine, parse_program(f"a.{op};; a.getBalance;;")))
    return out


def test_fee_account_matches_hand_derived_trace():
    ops = ["withdraw(5)", "withdraw(2)", "deposit(4)", "withdraw(5)", "withdraw(1)"]
    expected = [
        "void", "3",
        "exception: OverdrawnException", "0",
        "void", "4",
        "exception: OverdrawnException", "3",
        "void", "0",
    ]
    assert account_trace("FeeAccount", 10, 1, 2, ops) == expected


def test_fee_account_withdraw_runs_override_then_base():
    src = corpus_source("fee_account")
    _, trace = scheduler_run(src, seed=0)
    withdraws = [e for e in parse_trace(trace) if e[2] == "dispatch" and e[3] == "withdraw"]
    assert len(withdraws) == 2
    assert withdraws[0][4] == withdraws[1][4]


def random_operations(rng: random.Random):
    ops = []
    for _ in range(rng.randint(1, 8)):
        kind = rng.choice(("deposit", "withdraw", "withdraw"))
        ops.append(f"{kind}({rng.randint(1, 8)})")
    return rng.randint(0, 12), rng.randint(0, 3), rng.randint(0, 3), ops


@pytest.mark.xfail(strict=True, reason="relay and non-relay accounts differ when amount <= balance < amount + fee")
def test_criterion_06_fee_account_agreement(report):
    rng = random.Random(6)
    hand = account_trace("FeeAccount", 10, 1, 2, ["withdraw(5)"]) == ["void", "3"]
    disagreements = []
    for _ in range(200):
        balance, penalty, fee, ops = random_operations(rng)
        a = account_trace("FeeAccount", balance, penalty, fee, ops)
        b = account_trace("DirectFeeAccount", balance, penalty, fee, ops)
        if a != b:
            disagreements.append((balance, penalty, fee, ops))
    ok = hand and not disagreements
    detail = f"hand trace {'ok' if hand else 'wrong'}; versions disagree on {len(disagreements)}/200 sequences"
    if disagreements:
        detail += f", e.g. balance/penalty/fee {disagreements[0][:3]} ops {disagreements[0][3]}"
    assert report(6, ok, detail)


# ---------------------------------------------------------------- 7


def test_criterion_07_latch(report):
    problems = []

    def check(machine, text):
        if text != '"released"':
            problems.append(text)
        if machine.invariant_failures:
            problems.append(f"invariant {machine.invariant_failures[0]}")
        if machine.invariant_checks == 0:
            problems.append("invariant never checked")

    r = explore_interleavings(corpus_source("latch"), on_run=check)
    ok = r.results == {'"released"'} and not problems and not r.partial
    assert report(7, ok, f"{r.runs} runs ({r.pruned} pruned), results {r.show()}, {len(problems)} problems")


# ---------------------------------------------------------------- 8

RW_ITEMS = parse_program(corpus_source("readers_writer"))
WRITING_FIX = "also dequeue (empty(writersQ) ?? (true -> readersQ, false -> writersQ)) also writing = false"
WRITING_VERBATIM = "also dequeue (empty(readersQ) ?? (true -> writersQ, false -> null Queue)) also writing = false"


def test_criterion_08_readers_writer(report):
    reading = RW_ITEMS[:-1]
    writing = RW_ITEMS[:-2] + RW_ITEMS[-1:]
    start = time.perf_counter()
    results = {}
    for name, program in (("ReadingPriority", reading), ("WritingPriority", writing)):
        results[name] = explore_interleavings(program, bound=100_000)
    elapsed = time.perf_counter() - start
    ok = elapsed < 120 and all(
        r.results == {'"ok"'} and not r.partial and r.invariant_failures == 0 for r in results.values()
    )
    detail = ", ".join(f"{n} {r.show()} in {r.runs} runs" for n, r in results.items())
    assert report(8, ok, f"{detail}, {elapsed:.1f}s")


def test_verbatim_writing_priority_can_deadlock_but_never_trips_the_monitor():
    src = corpus_source("readers_writer")
    assert src.count(WRITING_FIX) == 1
    items = parse_program(src.replace(WRITING_FIX, WRITING_VERBATIM))
    r = explore_interleavings(items[:-2] + items[-1:], bound=100_000)
    assert not r.partial
    assert "deadlock" in r.results
    assert not any(x.startswith("exception") for x in r.results)


# ---------------------------------------------------------------- 9


def test_criterion_09_cartesian(report):
    real, angle, *_ = run_values(corpus_source("complex"))
    ok = real == "1" and abs(float(angle) - 45) <= 1e-9
    assert report(9, ok, f"real {real}, angle {angle}")


# ---------------------------------------------------------------- 10


def test_criterion_10_casting(report):
    machine = Machine()
    widened, narrowed = run_items(machine, parse_program("Float <- 3;; Integer <- 3.1;;"))
    ok = widened == "3.0" and narrowed.startswith("exception: ")
    assert report(10, ok, f"Float <- 3 is {widened}; Integer <- 3.1 gives {narrowed}")


# ---------------------------------------------------------------- 11

MAP_CASES = [
    ('map(3 -> "a", 4 -> "b") = map(4 -> "b", 3 -> "a")', "true"),
    ('map(4 -> "b", 4 -> "a")', "exception: DuplicateKey"),
    ('multimap(4 -> {| "b" |}, ...multimap(4 -> {| "a" |})) = multimap(4 -> {| "b", "a" |})', "true"),
    ('multimap(4 -> {| "a" |}, ...map(4 -> "b")) = multimap(4 -> {| "b", "a" |})', "true"),
    ('map(3 -> "a", 4 -> "b")(3)', '"a"'),
    ('multimap(4 -> {| "a" |}, ...map(4 -> "b"))(4) = [| "b", "a" |]', "true"),
    ("map()(2)", "exception: KeyNotFound"),
    ("multimap()(2)", "[| |]"),
]


def test_criterion_11_maps(report):
    got = run_items(Machine(), parse_program(";;\n".join(src for src, _ in MAP_CASES) + ";;"))
    wrong = [src for (src, want), have in zip(MAP_CASES, got) if want != have]
    assert report(11, not wrong, f"{len(MAP_CASES) - len(wrong)}/{len(MAP_CASES)} map facts reproduced")


# ---------------------------------------------------------------- 12

DAYS = ["Monday", "Tuesday", "Wednesday", "Thursday", "Friday", "Saturday", "Sunday"]


def test_criterion_12_enumerations(report):
    machine = Machine()
    run_items(machine, parse_program(corpus_source("enum"))[:-2])
    checks = []
    for i, day in enumerate(DAYS):
        by_cases, by_arithmetic = run_items(
            machine, parse_program(f"FollowingDay(DayName.{day});; followingDay(DayName.{day});;")
        )
        expected = f"DayName.{DAYS[(i + 1) % 7]}"
        checks.append(by_cases == by_arithmetic == expected)
    assert report(12, all(checks), f"{sum(checks)}/7 days agree")


# ---------------------------------------------------------------- 13


def test_criterion_13_postpone_stream(report):
    machine = Machine()
    values = run_items(machine, parse_program(corpus_source("postpone_stream")))
    first_ten = values[-1]
    eager = str(list(range(1, 11)))
    forced = [p.forced for p in machine.proxies if p.forced]
    ok = first_ten == eager and all(n == 1 for n in forced) and machine.proxy_forces == 9
    assert report(13, ok, f"take 10 -> {first_ten}; {len(forced)} cells forced, max {max(forced)} time(s) each")


# ---------------------------------------------------------------- 14


def test_criterion_14_inline(report):
    factorial = evaluate("inline factorial(n = 9, value = 1) -> n ?? (0 -> value, (> 0) -> factorial(n - 1, n * value))")
    limit = sys.getrecursionlimit()
    countdown = evaluate('inline countdown(n = 1000000) -> n ?? (0 -> "done", (> 0) -> countdown(n - 1))')
    product = math.prod(range(1, 10))
    ok = getattr(factorial, "value", None) == product and getattr(countdown, "value", None) == "done"
    assert report(14, ok, f"factorial(9) = {getattr(factorial, 'value', factorial)} (oracle {product}); "
                          f"countdown from 10^6 under recursion limit {limit}")


# ---------------------------------------------------------------- 15

GCD_DEFS = corpus_source("gcd_queue").rsplit("let g", 1)[0]


def test_criterion_15_gcd_queue(report):
    blocks = ", ".join(f"g.dispatch_sync(() -> log.add({i}))" for i in range(20))
    sync = GCD_DEFS + f"let g = SimpleGCDqueue() with log = Log() -> {{{blocks}; log.contents}};;"
    fifo = []
    for seed in range(5):
        results, trace = scheduler_run(sync, seed=seed)
        arrivals = [by for _, _, kind, detail, by in parse_trace(trace) if kind == "dispatch" and detail == "dispatch_sync"]
        order = [int(by.rsplit(".", 1)[1]) - 1 for by in arrivals]
        fifo.append(show(results[-1].value) == str(order) and sorted(order) == list(range(20)))
    async_src = GCD_DEFS + "let g = SimpleGCDqueue() with log = Log() -> {g.dispatch_async(() -> log.add(1)); log.contents};;"
    explored = explore_interleavings(async_src)
    early = "[]" in explored.results
    ok = all(fifo) and early
    assert report(15, ok, f"FIFO completion on {sum(fifo)}/5 seeds; dispatch_async outcomes {explored.show()}")


# ---------------------------------------------------------------- 16


def test_criterion_16_logic(report):
    forward, backward = run_values(corpus_source("logic"))[1::2]
    socrates = forward == backward == "[Mortal[Socrates]]"
    agree = 0
    for seed in range(100):
        rng = random.Random(seed)
        facts, rules = random_program(rng)
        if run_engine(facts, rules, shuffled_order(rng, facts, rules)) == brute_force_saturation(facts, rules):
            agree += 1
    ok = socrates and agree == 100
    assert report(16, ok, f"forward {forward}, backward {backward}; {agree}/100 random programs match the oracle")


# ---------------------------------------------------------------- 17


def test_criterion_17_determinism(report, tmp_path):
    differing = []
    for name in corpus_names():
        path = tmp_path / f"{name}.acts"
        path.write_text(corpus_source(name), encoding="utf-8")
        runs = [
            subprocess.run(
                [sys.executable, "-m", "cheesescript", "run", "--trace", "--seed", "5", str(path)],
                capture_output=True, timeout=300,
            )
            for _ in range(2)
        ]
        a, b = runs
        if (a.stdout, a.stderr, a.returncode) != (b.stdout, b.stderr, b.returncode) or not re.search(rb"step=", a.stderr):
            differing.append(name)
    n = len(corpus_names())
    assert report(17, not differing, f"{n - len(differing)}/{n} corpus programs byte-identical across two traced runs")
