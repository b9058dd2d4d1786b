"""Command line driver: ``lindg verify <file>`` and ``lindg --list-builtin``.

Exit codes: 0 every check passed, 1 some check failed, 2 malformed input.
"""

from __future__ import annotations

import argparse
import sys
from importlib import resources

from .report import emit_report, report_document
from .scenario import ScenarioError, load_scenario, run_scenario

DEFAULT_SEED = 0
BUILTIN_PREFIX = "builtin:"


def builtin_scenarios() -> dict:
    """{name: text} for the scenarios shipped inside the package."""
    root = resources.files("lindg") / "scenarios"
    out = {}
    for entry in sorted(root.iterdir(), key=lambda p: p.name):
        if entry.name.endswith(".scn"):
            out[entry.name] = entry.read_text(encoding="utf-8")
    return out


def _summary_line(text: str) -> str:
    for line in text.splitlines():
        if line.startswith("#"):
            return line.lstrip("# ").strip()
    return ""


def read_scenario_text(target: str) -> tuple:
    """(name, text) for a path or a builtin name (with or without 'builtin:')."""
    builtins = builtin_scenarios()
    name = target[len(BUILTIN_PREFIX):] if target.startswith(BUILTIN_PREFIX) else target
    try:
        with open(target, encoding="utf-8") as fh:
            return target, fh.read()
    except FileNotFoundError:
        for cand in (name, name + ".scn"):
            if cand in builtins:
                return cand, builtins[cand]
        raise
    except UnicodeDecodeError as exc:
        raise ScenarioError(f"file is not UTF-8 ({exc.reason} at byte {exc.start})") from None


def verify(target: str, fmt: str = "text", seed: int = DEFAULT_SEED) -> tuple:
    """Run one scenario; returns (exit code, output text)."""
    try:
        name, text = read_scenario_text(target)
    except FileNotFoundError:
        return 2, f"error: no such scenario file or builtin: {target}\n"
    except OSError as exc:
        return 2, f"error: cannot read {target}: {exc}\n"
    except ScenarioError as exc:
        return 2, f"error: {target}: {exc}\n"
    try:
        sc = load_scenario(text, name)
    except ScenarioError as exc:
        return 2, f"error: {name}: {exc}\n"
    results = run_scenario(sc, seed)
    doc = report_document(sc.name, seed, results)
    code = 0 if doc["status"] == "pass" else 1
    return code, emit_report(doc, fmt)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="lindg",
        description="Check linearisation scenarios over exact DG-categories.")
    p.add_argument("--list-builtin", action="store_true",
                   help="list the scenarios shipped with the package and exit")
    sub = p.add_subparsers(dest="command")
    v = sub.add_parser("verify", help="run a scenario file and report")
    v.add_argument("file", help="scenario path, or the name of a builtin scenario")
    v.add_argument("--format", choices=("text", "machine"), default="text")
    v.add_argument("--sample-seed", type=int, default=DEFAULT_SEED,
                   help="seed for randomized samples (default %(default)s)")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    if args.list_builtin:
        for name, text in builtin_scenarios().items():
            print(f"{name}  {_summary_line(text)}".rstrip())
        return 0
    if args.command != "verify":
        parser.print_usage(sys.stderr)
        return 2
    code, out = verify(args.file, args.format, args.sample_seed)
    (sys.stdout if code != 2 else sys.stderr).write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
