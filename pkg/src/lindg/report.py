"""Text and machine renderings of scenario results.

The machine format is JSON (UTF-8, two-space indent). Mapping keys are sorted,
integer keys numerically before string keys, and every scalar of the field is
an exact string such as "1/2" or "-z-1", so reports are byte-stable.
"""

from __future__ import annotations

import json

REPORT_VERSION = 1


def _canonical(v):
    if isinstance(v, dict):
        keys = sorted(v, key=lambda k: (0, k, "") if isinstance(k, int) and not isinstance(k, bool)
                      else (1, 0, str(k)))
        return {str(k): _canonical(v[k]) for k in keys}
    if isinstance(v, (list, tuple)):
        return [_canonical(x) for x in v]
    if isinstance(v, (bool, int, str)) or v is None:
        return v
    return str(v)


def report_document(name: str, seed: int, results: list) -> dict:
    tasks = []
    for r in results:
        tasks.append({
            "index": r.index,
            "task": r.kind,
            "label": r.label,
            "status": "pass" if r.passed else "fail",
            "checks": [{"name": c.name, "status": "pass" if c.passed else "fail",
                        "detail": c.detail} for c in r.checks],
            "results": r.results,
        })
    return {
        "report_version": REPORT_VERSION,
        "scenario": name,
        "sample_seed": seed,
        "status": "pass" if all(r.passed for r in results) else "fail",
        "tasks": tasks,
    }


def emit_machine(doc: dict) -> str:
    return json.dumps(_canonical(doc), indent=2, ensure_ascii=False) + "\n"


def emit_text(doc: dict) -> str:
    lines = [f"scenario {doc['scenario']} (sample seed {doc['sample_seed']})"]
    rows = []
    for t in doc["tasks"]:
        head = f"{t['index']}:{t['task']}" + (f" [{t['label']}]" if t["label"] else "")
        if not t["checks"]:
            rows.append(("INFO", head, "-", "results only"))
        for c in t["checks"]:
            rows.append(("PASS" if c["status"] == "pass" else "FAIL", head, c["name"], c["detail"]))
    if rows:
        w1 = max(len(r[1]) for r in rows)
        w2 = max(len(r[2]) for r in rows)
        for status, head, name, detail in rows:
            lines.append(f"{status}  {head:<{w1}}  {name:<{w2}}  {detail}".rstrip())
    n_checks = sum(len(t["checks"]) for t in doc["tasks"])
    n_fail = sum(1 for t in doc["tasks"] for c in t["checks"] if c["status"] == "fail")
    lines.append(f"overall {doc['status'].upper()}: {len(doc['tasks'])} tasks, "
                 f"{n_checks} checks, {n_fail} failed")
    return "\n".join(lines) + "\n"


def emit_report(doc: dict, fmt: str = "text") -> str:
    if fmt == "machine":
        return emit_machine(doc)
    if fmt == "text":
        return emit_text(doc)
    raise ValueError(f"unknown format {fmt!r}")
