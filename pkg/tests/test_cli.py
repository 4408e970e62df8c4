import io
import json
import os
import subprocess
import sys
from argparse import Namespace

import pytest

from cheesescript.cli import Repl, build_parser
from cheesescript.stdlib import corpus_source


def cli(*args, stdin=None, env=None):
    full_env = {k: v for k, v in os.environ.items() if k != "CHEESESCRIPT_SEED"}
    full_env.update(env or {})
    return subprocess.run(
        [sys.executable, "-m", "cheesescript", *args],
        input=stdin, capture_output=True, text=True, env=full_env, timeout=300,
    )


@pytest.fixture
def program(tmp_path):
    def write(text, name="prog.acts"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)

    return write


def test_run_prints_each_value(program):
    r = cli("run", program(corpus_source("sort")))
    assert (r.returncode, r.stdout) == (0, "[1, 2, 3, 7, 8, 9]\n")


def test_run_concatenates_files_in_order(program):
    defs = program("double(x) :=: x * 2;;", "defs.acts")
    use = program("double(21);;", "use.acts")
    assert cli("run", defs, use).stdout == "42\n"


def test_explore_prints_the_result_set(program):
    r = cli("explore", "--bound", "64", program(corpus_source("account_block")))
    assert (r.returncode, r.stdout) == (0, "{2, 3, 4, 5}\n")


def test_explore_requires_a_bound(program):
    r = cli("explore", program("1;;"))
    assert r.returncode == 2 and "--bound" in r.stderr


def test_explore_warns_when_cut_short(program):
    r = cli("explore", "--bound", "2", program(corpus_source("latch")))
    assert r.returncode == 0 and "incomplete" in r.stderr


def test_parse_error_exits_2_with_position(program):
    path = program("x :=: 1;;\ny :=: (2 +;;\n", "bad.acts")
    r = cli("run", path)
    assert r.returncode == 2
    assert r.stderr.startswith(f"parse error: {path}:2:")


def test_uncaught_exception_exits_1_with_span(program):
    path = program("1;;\n  throw Oops;;\n2;;\n", "oops.acts")
    r = cli("run", path)
    assert r.returncode == 1
    assert r.stdout == "1\n"
    assert r.stderr.strip() == f"{path}:2:3: exception: Oops"


def test_step_limit_exits_3(program):
    src = "A :=: actor() (| loop(n) -> A().loop(n + 1) |);; A().loop(0);;"
    r = cli("run", "--steps", "500", program(src))
    assert r.returncode == 3 and "step limit" in r.stderr


def test_deadlock_exits_3(program):
    r = cli("run", program("W :=: actor() queue q (| w -> passThru q -> 1 |);; W().w;;"))
    assert r.returncode == 3 and "deadlock" in r.stderr


def test_json_output(program):
    r = cli("run", "--output", "json", program("1 + 1;;\n[1, 2];;"))
    doc = json.loads(r.stdout)
    assert doc["results"] == ["2", "[1, 2]"]
    assert doc["exit"] == 0 and isinstance(doc["steps"], int)


def test_json_output_for_explore(program):
    r = cli("explore", "--bound", "100", "--output", "json", program(corpus_source("account_block")))
    assert json.loads(r.stdout)["results"] == ["2", "3", "4", "5"]


def test_json_output_reports_failure_code(program):
    r = cli("run", "--output", "json", program("throw Oops;;"))
    assert r.returncode == 1 and json.loads(r.stdout)["exit"] == 1


def test_trace_goes_to_stderr(program):
    r = cli("run", "--trace", program(corpus_source("account_block")))
    assert r.stdout.strip() in {"2", "3", "4", "5"}
    lines = r.stderr.splitlines()
    assert lines and all(line.startswith("step=") for line in lines)
    assert any("event=dispatch" in line for line in lines)


def test_seed_flag_and_environment_agree(program):
    path = program(corpus_source("account_block"))
    outputs = {s: cli("run", "--seed", str(s), path).stdout for s in range(12)}
    assert len(set(outputs.values())) > 1
    for s in (3, 7):
        assert cli("run", path, env={"CHEESESCRIPT_SEED": str(s)}).stdout == outputs[s]


def test_seed_defaults_to_zero(program):
    path = program(corpus_source("account_block"))
    assert cli("run", path).stdout == cli("run", "--seed", "0", path).stdout


# ---------------------------------------------------------------- repl


def repl_session(text: str, seed: int = 0) -> tuple[str, str]:
    cfg = build_parser().parse_args(["repl", "--seed", str(seed)])
    out, err = io.StringIO(), io.StringIO()
    Repl(cfg, out, err).loop(io.StringIO(text))
    return out.getvalue(), err.getvalue()


def test_repl_definitions_persist():
    out, _ = repl_session(
        "factorial(n) :=: n ?? (0 -> 1, (> 0) -> n * factorial(n - 1));;\nfactorial(3);;\n"
    )
    assert out == "factorial defined\n6\n"


def test_repl_items_may_span_lines():
    out, _ = repl_session("[1,\n 2,\n 3];;\n")
    assert out == "[1, 2, 3]\n"


def test_repl_survives_exceptions_and_parse_errors():
    out, err = repl_session("throw Oops;;\n(1 +;;\n5;;\n")
    assert out == "exception: Oops\n5\n"
    assert "parse error" in err


def test_repl_quit_stops_reading():
    out, _ = repl_session("1;;\n:quit\n2;;\n")
    assert out == "1\n"


def test_repl_seed_command_is_repeatable():
    block = corpus_source("account_block")
    first, _ = repl_session(f":seed 7\n{block}\n")
    second, _ = repl_session(f":seed 7\n{block}\n")
    assert first == second


def test_repl_trace_toggle():
    _, quiet = repl_session("A :=: actor() (| m -> 1 |);;\nA().m;;\n")
    _, loud = repl_session(":trace on\nA :=: actor() (| m -> 1 |);;\nA().m;;\n:trace off\nA().m;;\n")
    assert quiet == ""
    assert "event=dispatch" in loud
    assert loud.count("event=dispatch") == 1


def test_repl_recovers_from_step_limit():
    cfg = Namespace(seed=0, steps=300, trace=False, output="text", mode="repl")
    out = io.StringIO()
    Repl(cfg, out, io.StringIO()).loop(io.StringIO(
        "A :=: actor() (| loop(n) -> A().loop(n + 1) |);;\nA().loop(0);;\n1 + 1;;\n"
    ))
    lines = out.getvalue().splitlines()
    assert lines[0] == "A defined"
    assert lines[1].startswith("step limit exceeded")
    assert lines[2] == "2"


def test_repl_via_subprocess():
    r = cli("repl", stdin="1 + 2;;\n:quit\n")
    assert (r.returncode, r.stdout) == (0, "3\n")
