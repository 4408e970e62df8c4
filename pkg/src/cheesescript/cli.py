"""Command line: ``cheesescript run|explore|repl``.

Exit codes: 0 success, 1 uncaught exception, 2 parse error, 3 step limit
(or deadlock).
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys

from .kernel.evaluator import Deadlock, StepLimitExceeded
from .kernel.values import Atom, show
from .runtime import DEFAULT_STEP_LIMIT, Machine, explore_interleavings, run_with_big_stack
from .runtime.scheduler import Scheduler
from .syntax import ParseError, parse_program

EXIT_OK, EXIT_EXCEPTION, EXIT_PARSE, EXIT_STEPS = 0, 1, 2, 3


def exception_name(v) -> str:
    return v.name if type(v) is Atom else show(v)


def _default_seed() -> int:
    try:
        return int(os.environ.get("CHEESESCRIPT_SEED", "0"))
    except ValueError:
        return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="scheduler seed (default: $CHEESESCRIPT_SEED or 0)")
    common.add_argument("--steps", type=int, default=DEFAULT_STEP_LIMIT, help="scheduler step limit")
    common.add_argument("--trace", action="store_true", help="write scheduler events to stderr")
    common.add_argument("--output", choices=("text", "json"), default="text")

    parser = argparse.ArgumentParser(prog="cheesescript", description="Run ActorScript programs.")
    sub = parser.add_subparsers(dest="mode", required=True)
    run = sub.add_parser("run", parents=[common], help="evaluate files top to bottom")
    run.add_argument("files", nargs="+")
    explore = sub.add_parser("explore", parents=[common], help="print every possible result")
    explore.add_argument("--bound", type=int, required=True, help="maximum number of explored runs")
    explore.add_argument("files", nargs="+")
    sub.add_parser("repl", parents=[common], help="interactive session")
    return parser


def _load(files) -> list:
    items = []
    for path in files:
        with open(path, encoding="utf-8") as fh:
            items.extend(parse_program(fh.read(), path))
    return items


def _emit_trace(lines, start: int = 0) -> None:
    for line in lines[start:]:
        print(line, file=sys.stderr)


def _finish(cfg, results: list[str], steps: int, code: int) -> int:
    if cfg.output == "json":
        print(json.dumps({"results": results, "steps": steps, "exit": code}))
    return code


def cmd_run(cfg) -> int:
    try:
        items = _load(cfg.files)
    except ParseError as ex:
        print(f"parse error: {ex}", file=sys.stderr)
        return _finish(cfg, [], 0, EXIT_PARSE)
    machine = Machine(seed=cfg.seed, step_limit=cfg.steps, trace=cfg.trace)
    printed: list[str] = []
    code = EXIT_OK
    try:
        for item in items:
            r = machine.run_item(item)
            if r.kind == "error":
                print(f"{r.extra['span']}: exception: {exception_name(r.value)}", file=sys.stderr)
                code = EXIT_EXCEPTION
                break
            if r.kind == "value":
                text = show(r.value)
                printed.append(text)
                if cfg.output == "text":
                    print(text)
    except Deadlock as ex:
        print(f"{ex}", file=sys.stderr)
        code = EXIT_STEPS
    except StepLimitExceeded as ex:
        print(f"step limit exceeded: {ex}", file=sys.stderr)
        code = EXIT_STEPS
    if cfg.trace:
        _emit_trace(machine.sched.trace)
    return _finish(cfg, printed, machine.sched.steps, code)


def cmd_explore(cfg) -> int:
    try:
        items = _load(cfg.files)
    except ParseError as ex:
        print(f"parse error: {ex}", file=sys.stderr)
        return _finish(cfg, [], 0, EXIT_PARSE)
    result = explore_interleavings(items, bound=cfg.bound, step_limit=cfg.steps, seed=cfg.seed)
    if result.partial:
        print(f"warning: stopped after {result.runs} runs; the result set may be incomplete", file=sys.stderr)
    if cfg.output == "json":
        return _finish(cfg, result.sorted_results(), result.runs, EXIT_OK)
    print(result.show())
    return EXIT_OK


class Repl:
    """A session: definitions persist, each item ends with ``;;``."""

    def __init__(self, cfg, out=None, err=None):
        self.cfg = cfg
        self.out = out or sys.stdout
        self.err = err or sys.stderr
        self.machine = Machine(seed=cfg.seed, step_limit=cfg.steps, trace=cfg.trace)

    def _fresh_scheduler(self, seed: int) -> None:
        old = self.machine.sched
        self.machine.sched = Scheduler(seed, old.step_limit, None, old.trace_on)

    def meta(self, line: str) -> bool:
        """Handle a ``:command``; returns False when the session should end."""
        parts = line.split()
        cmd = parts[0]
        if cmd == ":quit":
            return False
        if cmd == ":trace" and len(parts) == 2 and parts[1] in ("on", "off"):
            self.machine.sched.trace_on = parts[1] == "on"
        elif cmd == ":seed" and len(parts) == 2 and parts[1].lstrip("-").isdigit():
            self.machine.sched.rng = random.Random(int(parts[1]))
        else:
            print(f"unknown command: {line}", file=self.err)
        return True

    def evaluate(self, source: str) -> None:
        try:
            items = parse_program(source, "<repl>")
        except ParseError as ex:
            print(f"parse error: {ex}", file=self.err)
            return
        sched = self.machine.sched
        mark = len(sched.trace)
        try:
            for item in items:
                r = self.machine.run_item(item)
                if r.kind == "error":
                    print(f"exception: {exception_name(r.value)}", file=self.out)
                    break
                if r.kind == "value":
                    print(show(r.value), file=self.out)
                else:
                    print(f"{r.value} defined", file=self.out)
        except StepLimitExceeded as ex:
            print(f"step limit exceeded: {ex}", file=self.out)
            self._fresh_scheduler(self.cfg.seed)
        if sched.trace_on:
            for line in sched.trace[mark:]:
                print(line, file=self.err)

    def loop(self, stream) -> int:
        interactive = stream.isatty()
        buf: list[str] = []
        while True:
            if interactive:
                print("cheese> " if not buf else "...... ", end="", file=self.out, flush=True)
            line = stream.readline()
            if not line:
                break
            stripped = line.strip()
            if not buf and stripped.startswith(":"):
                if not self.meta(stripped):
                    break
                continue
            buf.append(line)
            if stripped.endswith(";;"):
                self.evaluate("".join(buf))
                buf = []
        if "".join(buf).strip():
            self.evaluate("".join(buf))
        return EXIT_OK


def main(argv=None) -> int:
    cfg = build_parser().parse_args(argv)
    if cfg.seed is None:
        cfg.seed = _default_seed()
    if cfg.mode == "run":
        return run_with_big_stack(cmd_run, cfg)
    if cfg.mode == "explore":
        return cmd_explore(cfg)
    return run_with_big_stack(lambda: Repl(cfg).loop(sys.stdin))


if __name__ == "__main__":
    sys.exit(main())
