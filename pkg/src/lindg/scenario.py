"""Scenario files: parsing, object construction and task execution.

A scenario is a YAML document. Every value that is a scalar of the field uses
the exact syntax of ``field.parse_scalar``. Errors in the document raise
ScenarioError carrying the line and column of the offending node.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from typing import Any

import yaml

from .dg import (
    DGMorphism,
    check_exceptional,
    hom_h_dims,
    validate_dg_category,
)
from .field import CyclotomicField, ScalarSyntaxError, format_scalar
from .group import (
    FiniteGroup,
    GroupTableError,
    Linearisation,
    StrictAction,
    UnsupportedEnumerationError,
    check_star_condition,
    enumerate_linearisations_cyclic,
    inflate,
    linearisation_from_generator,
    validate_linearisation,
    validate_strict_action,
)
from .linearised import (
    build_linearised_category,
    conjugated_action,
    conjugation_equivalence,
    iso_classify,
    quasi_fully_faithful_check,
)
from .dg import functors_agree, validate_functor, strict_inverse, h0_is_isomorphism
from .pretr import (
    MalformedTwistedComplexError,
    TwistedComplex,
    embed,
    extend_action_to_hull,
    hull_soundness,
    make_twisted_complex,
    pretr_category,
)
from .spherical import (
    B,
    FreeModule,
    NotARootError,
    PerfGen,
    ScalingFunctor,
    SphericalAlgebra,
    X_ZERO,
    build_perf_gen,
    random_twisted_complex,
    reproduce_section5,
    section5_expectations,
)
from .tables import LabelScalingFunctor, TableCategory, TableError

FORMAT_VERSION = 1
TASK_KINDS = ("validate", "enumerate", "iso-classify", "invariant-homs", "hull-checks",
              "reproduce-section5", "star-condition", "conjugate")


class ScenarioError(ValueError):
    """Malformed scenario; ``line`` and ``column`` are 1-based when known."""

    def __init__(self, message, line=None, column=None):
        self.line, self.column = line, column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)


# --- YAML with positions ----------------------------------------------------------

class _Doc:
    """Plain Python data plus a map from node paths to (line, column)."""

    def __init__(self, text: str):
        try:
            node = yaml.compose(text, Loader=yaml.SafeLoader)
        except yaml.YAMLError as exc:
            mark = getattr(exc, "problem_mark", None)
            msg = getattr(exc, "problem", None) or str(exc)
            if mark is not None:
                raise ScenarioError(f"YAML syntax: {msg}", mark.line + 1, mark.column + 1) from None
            raise ScenarioError(f"YAML syntax: {msg}") from None
        self.marks: dict = {}
        self.quoted: set = set()
        self._loader = yaml.SafeLoader("")
        self.data = self._convert(node, ()) if node is not None else None

    def _convert(self, node, path):
        self.marks[path] = (node.start_mark.line + 1, node.start_mark.column + 1)
        if isinstance(node, yaml.MappingNode):
            out = {}
            for k, v in node.value:
                key = self._convert(k, path + ("<key>",))
                if not isinstance(key, (str, int)):
                    raise ScenarioError("mapping keys must be strings or integers",
                                        *self.marks[path + ("<key>",)])
                if key in out:
                    raise ScenarioError(f"duplicate key {key!r}", k.start_mark.line + 1,
                                        k.start_mark.column + 1)
                out[key] = self._convert(v, path + (key,))
            return out
        if isinstance(node, yaml.SequenceNode):
            return [self._convert(v, path + (i,)) for i, v in enumerate(node.value)]
        if node.style in ("'", '"'):
            self.quoted.add(path)
        return self._loader.construct_object(node, deep=True)

    def error(self, path, message):
        for n in range(len(path), -1, -1):
            if path[:n] in self.marks:
                return ScenarioError(f"{_fmt_path(path)}: {message}", *self.marks[path[:n]])
        return ScenarioError(f"{_fmt_path(path)}: {message}")


def _fmt_path(path):
    out = ""
    for p in path:
        out += f"[{p}]" if isinstance(p, int) else (("." if out else "") + str(p))
    return out or "<document>"


# --- scenario model ---------------------------------------------------------------

@dataclass
class Task:
    kind: str
    args: dict
    expect: dict | None
    path: tuple
    label: str = ""


@dataclass
class Scenario:
    name: str
    field: Any
    model_kind: str
    category: Any
    action: StrictAction
    objects: dict
    tasks: list
    model_args: dict = dc_field(default_factory=dict)
    doc: Any = None
    _cats: dict = dc_field(default_factory=dict)

    @property
    def linearised(self):
        if "lin" not in self._cats:
            self._cats["lin"] = build_linearised_category(self.action)
        return self._cats["lin"]

    @property
    def hull(self):
        if "hull" not in self._cats:
            self._cats["hull"] = pretr_category(self.category)
        return self._cats["hull"]

    @property
    def hull_action(self):
        if "hact" not in self._cats:
            self._cats["hact"] = extend_action_to_hull(self.action, self.hull)
        return self._cats["hact"]


def _req(doc, d, key, path, kind=None):
    if not isinstance(d, dict) or key not in d:
        raise doc.error(path, f"missing required key {key!r}")
    v = d[key]
    if kind is not None and not isinstance(v, kind) or isinstance(v, bool) and kind is int:
        raise doc.error(path + (key,), f"expected {kind.__name__ if isinstance(kind, type) else kind}")
    return v


def _int(doc, v, path):
    if isinstance(v, bool) or not isinstance(v, int):
        raise doc.error(path, "expected an integer")
    return v


def _scalar(doc, F, v, path):
    if isinstance(v, bool):
        raise doc.error(path, "expected a scalar")
    if isinstance(v, int):
        return F(v)
    if isinstance(v, str):
        try:
            return F.parse(v)
        except ScalarSyntaxError as exc:
            line, col = doc.marks.get(path, (None, None))
            if line is not None and exc.position is not None:
                col = col + exc.position + (1 if path in doc.quoted else 0)
            raise ScenarioError(f"{_fmt_path(path)}: {exc}", line, col) from None
    raise doc.error(path, "expected a scalar (integer or quoted string such as \"1/2\" or \"z+1\")")


def load_scenario(text: str, name: str = "scenario") -> Scenario:
    doc = _Doc(text)
    data = doc.data
    if not isinstance(data, dict):
        raise doc.error((), "a scenario must be a mapping")
    allowed = {"version", "name", "field", "model", "action", "objects", "tasks"}
    for k in data:
        if k not in allowed:
            raise doc.error((k,), f"unknown top-level key {k!r}")
    version = _req(doc, data, "version", ())
    if version != FORMAT_VERSION:
        raise doc.error(("version",), f"unsupported format version {version!r} "
                                      f"(this build reads version {FORMAT_VERSION})")
    name = str(data.get("name", name))
    fspec = data.get("field", {"conductor": 1})
    if not isinstance(fspec, dict):
        raise doc.error(("field",), "expected a mapping with key 'conductor'")
    n = _int(doc, fspec.get("conductor", 1), ("field", "conductor"))
    if n < 1:
        raise doc.error(("field", "conductor"), "conductor must be positive")
    F = CyclotomicField(n)

    model = _req(doc, data, "model", (), dict)
    if len(model) != 1:
        raise doc.error(("model",), "model must have exactly one of 'spherical' or 'inline'")
    kind = next(iter(model))
    if kind == "spherical":
        m = model[kind]
        if not isinstance(m, dict):
            raise doc.error(("model", kind), "expected a mapping")
        d = _int(doc, _req(doc, m, "d", ("model", kind)), ("model", kind, "d"))
        mode = m.get("mode", "ungraded" if d == 0 else "graded")
        if mode not in ("graded", "ungraded") or (mode == "ungraded") != (d == 0):
            raise doc.error(("model", kind, "mode"),
                            "mode must be 'ungraded' with d = 0 or 'graded' with d >= 1")
        if d < 0:
            raise doc.error(("model", kind, "d"), "d must be non-negative")
        cat = build_perf_gen(SphericalAlgebra(F, d))
        margs = {"d": d, "mode": mode}
    elif kind == "inline":
        cat = _inline_category(doc, F, model[kind], ("model", kind))
        margs = {}
    else:
        raise doc.error(("model", kind), f"unknown model {kind!r}")

    act = _action(doc, F, kind, cat, data.get("action"), ("action",))
    sc = Scenario(name, F, kind, cat, act, {}, [], margs, doc)
    objs = data.get("objects") or {}
    if not isinstance(objs, dict):
        raise doc.error(("objects",), "expected a mapping from names to definitions")
    for oname, spec in objs.items():
        sc.objects[oname] = _object(doc, sc, oname, spec, ("objects", oname))
    tasks = data.get("tasks") or []
    if not isinstance(tasks, list):
        raise doc.error(("tasks",), "expected a list")
    for i, t in enumerate(tasks):
        sc.tasks.append(_task(doc, sc, t, ("tasks", i)))
    return sc


def _inline_category(doc, F, m, path):
    if not isinstance(m, dict):
        raise doc.error(path, "expected a mapping")
    objects = _req(doc, m, "objects", path, list)
    homs, diffs = {}, {}
    for i, h in enumerate(_req(doc, m, "homs", path, list)):
        p = path + ("homs", i)
        X, Y = _req(doc, h, "source", p), _req(doc, h, "target", p)
        basis = _req(doc, h, "basis", p, dict)
        homs[(X, Y)] = {_int(doc, k, p + ("basis", k)): list(v) for k, v in basis.items()}
        if "differential" in h:
            diffs[(X, Y)] = {
                _int(doc, k, p + ("differential", k)):
                    [[_scalar(doc, F, c, p + ("differential", k, r, j)) for j, c in enumerate(row)]
                     for r, row in enumerate(rows)]
                for k, rows in h["differential"].items()}
    ids = _req(doc, m, "identities", path, dict)
    compose = {}
    for i, c in enumerate(m.get("compose") or []):
        p = path + ("compose", i)
        res = _req(doc, c, "result", p, dict)
        compose[(_req(doc, c, "g", p), _req(doc, c, "f", p))] = {
            lab: _scalar(doc, F, v, p + ("result", lab)) for lab, v in res.items()}
    try:
        return TableCategory(F, objects, homs, ids, compose, diffs)
    except TableError as exc:
        raise doc.error(path, str(exc)) from None


def _group(doc, spec, path):
    if "cyclic" in spec:
        n = _int(doc, spec["cyclic"], path + ("cyclic",))
        if n < 1:
            raise doc.error(path + ("cyclic",), "group order must be positive")
        return FiniteGroup.cyclic(n)
    if "table" in spec:
        try:
            return FiniteGroup(spec["table"], spec.get("generator"))
        except (GroupTableError, TypeError, ValueError) as exc:
            raise doc.error(path + ("table",), str(exc)) from None
    raise doc.error(path, "action needs 'cyclic: n' or a group 'table'")


def _action(doc, F, kind, cat, spec, path):
    if spec is None or spec == "trivial":
        G = FiniteGroup.cyclic(1)
        return StrictAction(G, cat, {0: _identity_functor(kind, cat)}, name="trivial")
    if not isinstance(spec, dict):
        raise doc.error(path, "expected a mapping")
    G = _group(doc, spec, path)
    if kind == "spherical":
        if "scalar" in spec:
            a = _scalar(doc, F, spec["scalar"], path + ("scalar",))
            if a ** G.order != F.one:
                raise doc.error(path + ("scalar",), f"{a} is not a {G.order}-th root of unity")
            if not G.is_cyclic:
                raise doc.error(path, "'scalar' needs a cyclic group")
            scal = {}
            cur, elt = F.one, G.identity
            for _ in range(G.order):
                scal[elt] = cur
                cur, elt = cur * a, G.mul(elt, G.generator)
        elif "scalars" in spec:
            scal = {_int(doc, g, path + ("scalars", g)): _scalar(doc, F, v, path + ("scalars", g))
                    for g, v in spec["scalars"].items()}
        else:
            raise doc.error(path, "spherical actions need 'scalar' or 'scalars'")
        missing = [g for g in G.elements if g not in scal]
        if missing:
            raise doc.error(path, f"no functor given for group elements {missing}")
        functors = {g: ScalingFunctor(cat, scal[g]) for g in G.elements}
        return StrictAction(G, cat, functors, name=spec.get("name", "root-of-unity"))
    scalings = spec.get("scalings") or {}
    functors = {}
    for g in G.elements:
        lab = scalings.get(g, {})
        p = path + ("scalings", g)
        try:
            functors[g] = LabelScalingFunctor(
                cat, {k: _scalar(doc, F, v, p + (k,)) for k, v in lab.items()}, name=f"g{g}")
        except TableError as exc:
            raise doc.error(p, str(exc)) from None
    return StrictAction(G, cat, functors, name="scalings")


def _identity_functor(kind, cat):
    return ScalingFunctor(cat, 1, "id") if kind == "spherical" else LabelScalingFunctor(cat, {}, "id")


def _morphism(doc, sc, spec, X, Y, path, degree=None) -> DGMorphism:
    """Spherical: {unit: ..., s: ...} with scalars or target x source matrices.
    Inline: {label: scalar}."""
    F, cat = sc.field, sc.category
    if not isinstance(spec, dict):
        raise doc.error(path, "expected a morphism mapping")
    if sc.model_kind == "spherical":
        for k in spec:
            if k not in ("unit", "s"):
                raise doc.error(path + (k,), "morphism keys are 'unit' and 's'")

        def mat(key):
            v = spec.get(key)
            if v is None:
                return None
            if isinstance(v, list):
                return [[_scalar(doc, F, c, path + (key, i, j)) for j, c in enumerate(row)]
                        for i, row in enumerate(v)]
            return [[_scalar(doc, F, v, path + (key,))]]
        U, S = mat("unit"), mat("s")
        for M in (U, S):
            if M is not None and (len(M) != Y.rank or any(len(r) != X.rank for r in M)):
                raise doc.error(path, f"matrix shape must be {Y.rank} x {X.rank}")
        return cat.element(X, Y, U, S)
    comps: dict = {}
    H = cat.hom(X, Y)
    for lab, v in spec.items():
        where = cat._where.get(lab)
        if where is None or where[:2] != (X, Y):
            raise doc.error(path + (lab,), f"{lab!r} is not a basis label of Hom({X}, {Y})")
        _, _, k, i = where
        vec = comps.setdefault(k, [F.zero] * H.dim(k))
        vec[i] = vec[i] + _scalar(doc, F, v, path + (lab,))
    return DGMorphism.make(X, Y, comps)


def _ref(doc, sc, name, path, kinds=None):
    if not isinstance(name, (str, int)) or name not in sc.objects:
        raise doc.error(path, f"unknown object {name!r}")
    obj = sc.objects[name]
    if kinds is not None and not isinstance(obj, kinds):
        want = " or ".join(k.__name__ for k in (kinds if isinstance(kinds, tuple) else (kinds,)))
        raise doc.error(path, f"{name!r} must be a {want}")
    return obj


def _plain_types(sc):
    return FreeModule if sc.model_kind == "spherical" else str


def _object(doc, sc, name, spec, path):
    cat, act = sc.category, sc.action
    if not isinstance(spec, dict) or len(spec) == 0:
        raise doc.error(path, "object definitions are mappings")
    if "module" in spec:
        if sc.model_kind != "spherical":
            raise doc.error(path, "'module' objects need the spherical model")
        gens = spec["module"]
        if not isinstance(gens, list) or not gens:
            raise doc.error(path + ("module",), "expected a nonempty list of generator degrees")
        return FreeModule(tuple(_int(doc, g, path + ("module", i)) for i, g in enumerate(gens)))
    if "object" in spec:
        if sc.model_kind != "inline" or spec["object"] not in cat.objects:
            raise doc.error(path + ("object",), f"unknown inline object {spec['object']!r}")
        return spec["object"]
    if "linearise" in spec:
        X = _ref(doc, sc, spec["linearise"], path + ("linearise",), _plain_types(sc))
        gX = act.obj(act.group.generator if act.group.is_cyclic else 0, X)
        if "lambda" in spec:
            if not act.group.is_cyclic:
                raise doc.error(path, "'lambda' needs a cyclic group; give 'maps' instead")
            lam = _morphism(doc, sc, spec["lambda"], X, gX, path + ("lambda",))
            return linearisation_from_generator(act, X, lam, str(name))
        if "maps" in spec:
            maps = []
            for g in act.group.elements:
                if g not in spec["maps"]:
                    raise doc.error(path + ("maps",), f"missing lambda for element {g}")
                maps.append(_morphism(doc, sc, spec["maps"][g], X, act.obj(g, X),
                                      path + ("maps", g)))
            return Linearisation(X, tuple(maps), str(name))
        raise doc.error(path, "a linearisation needs 'lambda' or 'maps'")
    if "enumerated" in spec:
        X = _ref(doc, sc, spec["enumerated"], path + ("enumerated",), _plain_types(sc))
        idx = _int(doc, spec.get("index", 0), path + ("index",))
        try:
            en = enumerate_linearisations_cyclic(act, X)
        except UnsupportedEnumerationError as exc:
            raise doc.error(path, str(exc)) from None
        if not 0 <= idx < len(en.linearisations):
            raise doc.error(path + ("index",), f"only {len(en.linearisations)} linearisations")
        L = en.linearisations[idx]
        return Linearisation(L.obj, L.maps, str(name))
    if "inflate" in spec:
        X = _ref(doc, sc, spec["inflate"], path + ("inflate",), _plain_types(sc))
        L = inflate(act, X)
        return Linearisation(L.obj, L.maps, str(name))
    if "twisted" in spec:
        items = []
        for i, it in enumerate(spec["twisted"] or []):
            if not isinstance(it, list) or len(it) != 2:
                raise doc.error(path + ("twisted", i), "items are [object, shift] pairs")
            X = _ref(doc, sc, it[0], path + ("twisted", i, 0), _plain_types(sc))
            items.append((X, _int(doc, it[1], path + ("twisted", i, 1))))
        q = {}
        for key, mspec in (spec.get("q") or {}).items():
            p = path + ("q", key)
            try:
                i, j = (int(x) for x in str(key).split(","))
            except ValueError:
                raise doc.error(p, "q keys are 'i,j' with 0-based item indices") from None
            if not (0 <= i < len(items) and 0 <= j < len(items)):
                raise doc.error(p, f"q entry ({i},{j}) is out of range")
            q[(i, j)] = _morphism(doc, sc, mspec, items[j][0], items[i][0], p)
        try:
            return make_twisted_complex(cat, items, q)
        except MalformedTwistedComplexError as exc:
            raise doc.error(path, str(exc)) from None
    raise doc.error(path, "unknown object kind; use module, object, linearise, enumerated, "
                          "inflate or twisted")


def _task(doc, sc, t, path):
    if not isinstance(t, dict):
        raise doc.error(path, "a task is a mapping with one task kind")
    kinds = [k for k in t if k in TASK_KINDS]
    extra = [k for k in t if k not in TASK_KINDS and k not in ("expect", "label")]
    if len(kinds) != 1 or extra:
        raise doc.error(path, f"a task needs exactly one kind among {', '.join(TASK_KINDS)}"
                              + (f"; unknown keys {extra}" if extra else ""))
    kind = kinds[0]
    args = t[kind] if t[kind] is not None else {}
    if not isinstance(args, dict):
        raise doc.error(path + (kind,), "task arguments are a mapping")
    expect = t.get("expect")
    if expect is not None and not isinstance(expect, dict):
        raise doc.error(path + ("expect",), "expect is a mapping of result keys to values")
    task = Task(kind, args, expect, path, str(t.get("label", "")))
    _check_refs(doc, sc, task)
    return task


def _check_refs(doc, sc, task):
    a, p = task.args, task.path + (task.kind,)
    for key in ("sample", "samples"):
        for i, name in enumerate(a.get(key) or []):
            _ref(doc, sc, name, p + (key, i))
    for key in ("object",):
        if key in a:
            _ref(doc, sc, a[key], p + (key,))
    if "pair" in a:
        pr = a["pair"]
        if not isinstance(pr, list) or len(pr) != 2:
            raise doc.error(p + ("pair",), "a pair is [name, name]")
        for i, name in enumerate(pr):
            _ref(doc, sc, name, p + ("pair", i))
    for i, pr in enumerate(a.get("pairs") or []):
        if not isinstance(pr, list) or len(pr) != 2:
            raise doc.error(p + ("pairs", i), "a pair is [name, name]")
        for j, name in enumerate(pr):
            _ref(doc, sc, name, p + ("pairs", i, j))
    if task.kind == "reproduce-section5":
        if sc.model_kind != "spherical":
            raise doc.error(p, "reproduce-section5 needs the spherical model")
        for key in ("d", "n"):
            if key in a:
                _int(doc, a[key], p + (key,))
    if task.kind == "conjugate":
        if sc.model_kind != "spherical":
            raise doc.error(p, "conjugate needs the spherical model")
        _scalar(doc, sc.field, _req(doc, a, "scalar", p), p + ("scalar",))
    if task.kind == "validate":
        what = a.get("what", "category")
        if what not in ("category", "linearised-category", "hull", "action", "linearisation",
                        "twisted"):
            raise doc.error(p + ("what",), f"cannot validate {what!r}")
    if task.kind == "hull-checks" and "random" in a:
        _int(doc, a["random"], p + ("random",))


# --- execution ---------------------------------------------------------------------

@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class TaskResult:
    index: int
    kind: str
    label: str
    results: dict
    checks: list

    @property
    def passed(self):
        return all(c.passed for c in self.checks)


def render_morphism(sc, f: DGMorphism) -> dict:
    cat = sc.category
    if isinstance(f.source, TwistedComplex):
        return {"degrees": [k for k, _ in f.components]}
    if isinstance(f.source, Linearisation):
        f = sc.linearised.to_base(f)
    if sc.model_kind == "spherical":
        U, S = cat.unit_s_parts(f)
        if len(U) == 1 and len(U[0]) == 1:
            return {"unit": str(U[0][0]), "s": str(S[0][0])}
        return {"unit": [[str(x) for x in r] for r in U], "s": [[str(x) for x in r] for r in S]}
    out = {}
    for k, v in f.components:
        for i, c in enumerate(v):
            if c:
                out[cat.hom(f.source, f.target).label(k, i)] = str(c)
    return out


def _dims(d):
    return {int(k): int(v) for k, v in sorted(d.items())}


def _category_for(sc, objs):
    kinds = {type(o) for o in objs}
    if all(issubclass(k, Linearisation) for k in kinds):
        return sc.linearised
    if all(issubclass(k, TwistedComplex) for k in kinds):
        return sc.hull
    if not any(issubclass(k, (Linearisation, TwistedComplex)) for k in kinds):
        return sc.category
    raise ValueError("mixed object kinds in one pair or sample")


def run_task(sc: Scenario, index: int, task: Task, seed: int) -> TaskResult:
    fn = _RUNNERS[task.kind]
    try:
        results, checks = fn(sc, task, seed * 1009 + index)
    except (ValueError, ArithmeticError, AssertionError) as exc:
        results, checks = {"error": f"{type(exc).__name__}: {exc}"}, [
            Check("runs", False, f"{type(exc).__name__}: {exc}")]
    if task.expect:
        checks = [c for c in checks if not c.name.startswith("default:")]
        checks += compare_expected(sc, task.expect, results)
    else:
        checks = [Check(c.name.removeprefix("default:"), c.passed, c.detail) for c in checks]
    return TaskResult(index, task.kind, task.label, results, checks)


def compare_expected(sc, expect: dict, results: dict, prefix="") -> list:
    out = []
    for key, want in expect.items():
        name = f"{prefix}{key}"
        if key not in results:
            out.append(Check(name, False, "no such result"))
            continue
        got = results[key]
        if isinstance(want, dict) and isinstance(got, dict) and not _is_dims(want):
            out += compare_expected(sc, want, got, name + ".")
            continue
        ok = _normalise(sc, want) == _normalise(sc, got)
        detail = _show(got) if ok else f"expected {_show(want)}, got {_show(got)}"
        out.append(Check(name, ok, detail))
    return out


def _is_dims(d):
    return bool(d) and all(isinstance(k, int) and not isinstance(k, bool) for k in d)


def _normalise(sc, v):
    if isinstance(v, bool) or v is None:
        return v
    if isinstance(v, int):
        return ("scalar", str(v))
    if isinstance(v, str):
        try:
            return ("scalar", format_scalar(sc.field.parse(v)))
        except ScalarSyntaxError:
            return v
    if isinstance(v, dict):
        return {(str(k) if not isinstance(k, int) else k): _normalise(sc, x) for k, x in v.items()}
    if isinstance(v, list):
        return [_normalise(sc, x) for x in v]
    return v


def _show(v):
    if isinstance(v, dict):
        keys = sorted(v, key=lambda k: (isinstance(k, str), k))
        return "{" + ", ".join(f"{k}: {_show(v[k])}" for k in keys) + "}"
    if isinstance(v, list):
        return "[" + ", ".join(_show(x) for x in v) + "]"
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def _names(sc, task, key):
    return [sc.objects[n] for n in task.args.get(key) or []]


def _run_validate(sc, task, seed):
    a = task.args
    what = a.get("what", "category")
    sample = _names(sc, task, "sample")
    if what == "category":
        rep = validate_dg_category(sc.category, sample or _default_sample(sc))
    elif what == "linearised-category":
        rep = validate_dg_category(sc.linearised, sample)
    elif what == "hull":
        objs = [o if isinstance(o, TwistedComplex) else embed(sc.category, o) for o in sample]
        rep = validate_dg_category(sc.hull, objs, associativity=a.get("associativity", True))
    elif what == "action":
        rep = validate_strict_action(sc.action, sample or _default_sample(sc))
    elif what == "linearisation":
        rep = validate_linearisation(sc.action, sc.objects[a["object"]])
    else:   # twisted
        C = sc.objects[a["object"]]
        fails = hull_soundness(sc.hull, C, sc.hull_action, None)
        res = {"valid": not fails, "failures": fails, "sample": [sc.hull.describe(C)]}
        return res, [Check("default:valid", not fails, "; ".join(fails[:3]))]
    res = {"valid": rep.ok, "checked": rep.checked, "failures": list(rep.failures),
           "sample": list(rep.sample)}
    return res, [Check("default:valid", rep.ok, "; ".join(rep.failures[:3]) or
                       f"{rep.checked} checks")]


def _default_sample(sc):
    if sc.model_kind == "spherical":
        return [B]
    return list(sc.category.objects)


def _run_enumerate(sc, task, seed):
    X = sc.objects[task.args["object"]]
    en = enumerate_linearisations_cyclic(sc.action, X)
    g = sc.action.group.generator
    lams = [render_morphism(sc, L.lam(g)) for L in en.linearisations]
    valid = [validate_linearisation(sc.action, L).ok for L in en.linearisations]
    res = {
        "count": len(lams),
        "lambda_g": lams,
        "free_directions": [[render_morphism(sc, v) for v in fd] for fd in en.free_directions],
        "all_valid": all(valid),
        "rejected_noninvertible": en.rejected_noninvertible,
    }
    return res, [Check("default:all_valid", all(valid), f"{len(lams)} linearisations")]


def _run_iso(sc, task, seed):
    L1, L2 = (sc.objects[n] for n in task.args["pair"])
    cat = sc.linearised
    if sc.model_kind == "spherical":
        from .spherical import spherical_iso_classify
        rep = spherical_iso_classify(cat, L1, L2)
    else:
        rep = iso_classify(cat, L1, L2)
    res = {"verdict": rep.verdict, "obstruction": rep.obstruction}
    checks = []
    if rep.isomorphic:
        f = rep.witness
        if sc.model_kind == "spherical" and L1.obj == B and L2.obj == B:
            base = cat.to_base(f)
            x = sc.category.unit_s_parts(base)[0][0][0]
            if x:
                f = cat.from_base(L1, L2, base.scale(x.inverse()))
        ok, _ = h0_is_isomorphism(cat, f)
        strict = strict_inverse(cat, f) is not None
        res.update({"witness": render_morphism(sc, f), "witness_verified": ok,
                    "strict_inverse": strict})
        checks.append(Check("default:witness_verified", ok and strict,
                            "witness is invertible" if ok else "witness is not invertible"))
    else:
        res["x_zero"] = rep.obstruction.startswith(X_ZERO)
    return res, checks


def _run_homs(sc, task, seed):
    res = {}
    for n1, n2 in task.args.get("pairs") or []:
        X, Y = sc.objects[n1], sc.objects[n2]
        cat = _category_for(sc, [X, Y])
        entry = {"h_dims": _dims(hom_h_dims(cat, X, Y)),
                 "dims": _dims(cat.hom(X, Y).dims)}
        if n1 == n2:
            entry["exceptional"] = check_exceptional(cat, X)
        res[f"{n1},{n2}"] = entry
    return res, []


def _run_hull(sc, task, seed):
    a = task.args
    rng = random.Random(seed)
    hact = sc.hull_action
    samples = [o if isinstance(o, TwistedComplex) else embed(sc.category, o)
               for o in _names(sc, task, "samples")]
    count = a.get("random", 0)
    if count and not isinstance(sc.category, PerfGen):
        raise ValueError("random twisted complexes need the spherical model")
    for _ in range(count):
        samples.append(random_twisted_complex(sc.category, rng))
    failures = []
    for i, C in enumerate(samples):
        for f in hull_soundness(sc.hull, C, hact, rng):
            failures.append(f"sample {i} ({sc.hull.describe(C)}): {f}")
    res = {"checked": len(samples), "failures": failures,
           "nontrivial_q": sum(1 for C in samples if C.q)}
    return res, [Check("default:failures", not failures,
                       f"{len(samples)} twisted complexes" if not failures else failures[0])]


def _run_section5(sc, task, seed):
    a = task.args
    d = a.get("d", sc.model_args["d"])
    n = a.get("n", sc.action.group.order if sc.action.group.order > 1 else 2)
    rep = reproduce_section5(d, n)
    exp = section5_expectations(d, n)
    checks = [Check("default:" + c.name, c.passed, c.detail)
              for c in compare_expected(sc, exp, rep)]
    return rep, checks


def _run_star(sc, task, seed):
    L1, L2 = (sc.objects[n] for n in task.args["pair"])
    rep = check_star_condition(sc.action, L1, L2)
    return {"holds": rep.holds, "failing_degrees": list(rep.failing_degrees)}, []


def _run_conjugate(sc, task, seed):
    a = task.args
    F, cat, act = sc.field, sc.category, sc.action
    c = F.parse(str(a["scalar"])) if not isinstance(a["scalar"], int) else F(a["scalar"])
    if c.is_zero():
        raise ValueError("conjugating scalar must be nonzero")
    Phi, Pinv = ScalingFunctor(cat, c), ScalingFunctor(cat, c.inverse())
    base_sample = _default_sample(sc)
    conj = conjugated_action(Phi, Pinv, act, base_sample)
    same = all(functors_agree(conj.functor(g), act.functor(g), base_sample).ok
               for g in act.group.elements)
    lins = [o for o in _names(sc, task, "sample") if isinstance(o, Linearisation)]
    src = sc.linearised
    Fq = conjugation_equivalence(Phi, Pinv, act, conj, base_sample, src)
    images = [Fq.obj(L) for L in lins]
    res = {
        "same_action": same,
        "conjugated_action_valid": validate_strict_action(conj, base_sample).ok,
        "functor_valid": validate_functor(Fq, lins).ok if lins else True,
        "quasi_fully_faithful": quasi_fully_faithful_check(Fq, lins).ok if lins else True,
        "images_valid": all(validate_linearisation(conj, L).ok for L in images),
        "images": [render_morphism(sc, L.lam(act.group.generator)) for L in images],
    }
    return res, [Check("default:" + k, res[k]) for k in
                 ("conjugated_action_valid", "functor_valid", "quasi_fully_faithful",
                  "images_valid")]


_RUNNERS = {
    "validate": _run_validate,
    "enumerate": _run_enumerate,
    "iso-classify": _run_iso,
    "invariant-homs": _run_homs,
    "hull-checks": _run_hull,
    "reproduce-section5": _run_section5,
    "star-condition": _run_star,
    "conjugate": _run_conjugate,
}


def run_scenario(sc: Scenario, seed: int = 0) -> list:
    return [run_task(sc, i, t, seed) for i, t in enumerate(sc.tasks)]


__all__ = ["ScenarioError", "Scenario", "Task", "TaskResult", "Check", "load_scenario",
           "run_scenario", "run_task", "compare_expected", "FORMAT_VERSION", "TASK_KINDS",
           "NotARootError"]
