"""JSON input files: schema validation, construction of the objects and serialization."""

from __future__ import annotations

import dataclasses
import json
from fractions import Fraction
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np

from .algebra import (
    Algebra,
    AlgebraAction,
    AlgebraPresentation,
    Arrow,
    GroupData,
    Quiver,
    action_from_generators,
    build_algebra,
    check_action,
)
from .errors import HcellError, SchemaError, SemanticError
from .field import Field
from .hopf import HopfData, WeightData, hopf_structure

FIXTURES = ("trivial", "sweedler", "taft3", "z2", "z3", "klein4", "s3", "sweedler_bad_antipode")


def schema() -> dict:
    return json.loads(resources.files("hcell").joinpath("data/spec.schema.json").read_text())


def schema_path() -> Path:
    return Path(str(resources.files("hcell").joinpath("data/spec.schema.json")))


def fixture_path(name: str) -> Path:
    """Path of a bundled fixture such as ``sweedler``."""
    return Path(str(resources.files("hcell").joinpath(f"data/fixtures/{name}.json")))


@dataclasses.dataclass
class SpecFile:
    name: str
    group: GroupData
    field: Field | None = None
    algebra: Algebra | None = None
    action: AlgebraAction | None = None
    hopf: HopfData | None = None
    raw: dict = dataclasses.field(default_factory=dict, repr=False)


def _json_path(parts) -> str:
    out = "$"
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else f".{p}"
    return out


def validate_schema(data) -> None:
    """Raise SchemaError at the deepest offending key."""
    validator = jsonschema.Draft202012Validator(schema())
    err = jsonschema.exceptions.best_match(validator.iter_errors(data))
    if err is not None:
        raise SchemaError(err.message, _json_path(err.absolute_path))


def _group(block: dict) -> GroupData:
    labels = list(block["elements"])
    pos = {x: i for i, x in enumerate(labels)}
    if len(pos) != len(labels):
        raise SemanticError("group element labels must be unique")
    table = block["table"]
    if len(table) != len(labels) or any(len(r) != len(labels) for r in table):
        raise SemanticError("group table must be square of size |G|")
    rows = []
    for i, r in enumerate(table):
        for j, x in enumerate(r):
            if x not in pos:
                raise SchemaError(f"unknown group element {x!r}", _json_path(["group", "table", i, j]))
        rows.append(tuple(pos[x] for x in r))
    ident = [e for e in range(len(labels)) if all(rows[e][a] == a and rows[a][e] == a for a in range(len(labels)))]
    if not ident:
        raise SemanticError("group table has no identity element")
    return GroupData(tuple(labels), tuple(rows), ident[0])


def _coeffs(F: Field, combo: dict, where: list) -> dict:
    try:
        return {k: F.scalar(v) for k, v in combo.items()}
    except (ValueError, ZeroDivisionError) as exc:
        raise SemanticError(f"{_json_path(where)}: {exc}") from exc


def _algebra(data: dict, G: GroupData) -> tuple[Field, Algebra, AlgebraAction]:
    try:
        F = Field(data["field"]["char"])
    except ValueError as exc:
        raise SemanticError(f"$.field.char: {exc}") from exc
    q = data["quiver"]
    try:
        quiver = Quiver(tuple(q["vertices"]), tuple(Arrow(a["name"], a["source"], a["target"]) for a in q["arrows"]))
    except ValueError as exc:
        raise SemanticError(f"$.quiver: {exc}") from exc
    names = {a.name for a in quiver.arrows}
    rels = []
    for i, rel in enumerate(data.get("relations", [])):
        terms: dict[tuple[str, ...], object] = {}
        for j, t in enumerate(rel):
            for a in t["word"]:
                if a not in names:
                    raise SemanticError(f"$.relations[{i}][{j}]: unknown arrow {a!r}")
            word = tuple(t["word"])
            terms[word] = F.scalar(t["coeff"]) + terms.get(word, 0)
        rels.append(terms)
    try:
        alg = build_algebra(AlgebraPresentation(quiver, tuple(rels), data["nilpotency_bound"]), F, data.get("name", ""))
    except HcellError as exc:
        raise SemanticError(f"$.relations: {exc}") from exc
    except ValueError as exc:  # paths that do not compose
        raise SemanticError(f"$.relations: {exc}") from exc
    images = {}
    for g in range(G.order):
        lab = G.label(g)
        if lab not in data["action"]:
            raise SemanticError(f"$.action: no entry for group element {lab!r}")
        blk = data["action"][lab]
        img = {}
        for v in quiver.vertices:
            w = blk["vertices"].get(v)
            if w not in quiver.vertices:
                raise SemanticError(f"$.action.{lab}.vertices: vertex {v!r} must map to a vertex")
            img[v] = alg.e(w)
        for a in quiver.arrows:
            combo = _coeffs(F, blk["arrows"].get(a.name, {}), ["action", lab, "arrows", a.name])
            vec = F.zeros(alg.dim)
            for b, c in combo.items():
                if b not in alg.arrow_index:
                    raise SemanticError(f"$.action.{lab}.arrows.{a.name}: unknown arrow {b!r}")
                vec[alg.arrow_index[b]] = c
            img[a.name] = vec
        images[g] = img
    act = action_from_generators(alg, G, images)
    rep = check_action(alg, G, act)
    if not rep.ok:
        c = rep.failures[0]
        raise SemanticError(f"$.action: {c.detail or c.name} (witness {c.witness})")
    return F, alg, act


def _hopf(data: dict, G: GroupData, F: Field, alg: Algebra, act: AlgebraAction) -> HopfData:
    h = data["hopf"]
    try:
        weights = tuple(G.index(w) for w in h["weights"])
    except (KeyError, ValueError) as exc:
        raise SemanticError(f"$.hopf.weights: unknown group element ({exc})") from exc

    def table(key):
        out = {}
        for lab, amap in h[key].items():
            if lab not in G.elements:
                raise SemanticError(f"$.hopf.{key}: unknown group element {lab!r}")
            out[G.index(lab)] = {a: _coeffs(F, c, ["hopf", key, lab, a]) for a, c in amap.items()}
        return out

    wd = WeightData(G, weights, table("left_hit"), table("right_hit"), h.get("antipode_sign", -1))
    try:
        hd, _ = hopf_structure(alg, wd)
    except HcellError as exc:
        raise SemanticError(f"$.hopf: {exc}") from exc
    for g in range(G.order):
        if not F.equal(hd.hit.matrix(g), act.matrix(g)):
            raise SemanticError(f"$.action.{G.label(g)}: differs from the action induced by the Hopf data")
    return hd


def load_spec(data, name: str = "") -> SpecFile:
    """Validate an already decoded JSON document and build its objects."""
    validate_schema(data)
    G = _group(data["group"])
    spec = SpecFile(data.get("name", name), G, raw=data)
    if "quiver" in data:
        spec.field, spec.algebra, spec.action = _algebra(data, G)
        if "hopf" in data:
            spec.hopf = _hopf(data, G, spec.field, spec.algebra, spec.action)
    return spec


def parse_spec(path) -> SpecFile:
    """Read and validate a JSON spec file."""
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise SchemaError(f"cannot read {p}: {exc.strerror}") from exc
    if not text.strip():
        raise SchemaError("empty file")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc.msg} at line {exc.lineno}") from exc
    return load_spec(data, p.stem)


# serialization


def _coeff_out(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    return int(x)


def group_dict(G: GroupData) -> dict:
    return {"elements": list(G.elements), "table": [[G.label(x) for x in row] for row in G.table]}


def _arrow_combo(alg: Algebra, vec: np.ndarray) -> dict:
    arrows = {i: a for a, i in alg.arrow_index.items()}
    out = {}
    for i in np.flatnonzero(vec):
        if int(i) not in arrows:
            raise ValueError("arrow image leaves the span of the arrows")
        out[arrows[int(i)]] = _coeff_out(vec[i])
    return out


def spec_dict(name: str, G: GroupData, alg: Algebra | None = None, act: AlgebraAction | None = None, hd: HopfData | None = None) -> dict:
    """The JSON document describing the given objects."""
    out: dict = {"name": name, "group": group_dict(G)}
    if alg is None:
        return out
    F = alg.field
    out["field"] = {"char": F.char}
    out["quiver"] = {
        "vertices": list(alg.vertices),
        "arrows": [{"name": a.name, "source": a.source, "target": a.target} for a in alg.quiver.arrows],
    }
    out["relations"] = [
        [{"word": list(w), "coeff": _coeff_out(F.scalar(c))} for w, c in rel.items()] for rel in alg.relations
    ]
    out["nilpotency_bound"] = max([2] + [len(p.word) + 1 for p in alg.paths])
    act = act if act is not None else (hd.hit if hd is not None else None)
    if act is not None:
        blocks = {}
        for g in range(G.order):
            M = act.matrix(g)
            blocks[G.label(g)] = {
                "vertices": {v: act.vertex_image(alg, g, v) for v in alg.vertices},
                "arrows": {a: _arrow_combo(alg, M[:, i]) for a, i in alg.arrow_index.items()},
            }
        out["action"] = blocks
    if hd is not None:
        wd = hd.weights

        def table(t):
            return {
                G.label(h): {a: {b: _coeff_out(F.scalar(c)) for b, c in m.items()} for a, m in t[h].items()}
                for h in sorted(t)
            }

        out["hopf"] = {
            "weights": [G.label(w) for w in wd.weights],
            "left_hit": table(wd.left_hit),
            "right_hit": table(wd.right_hit),
            "antipode_sign": int(wd.antipode_sign),
        }
    return out


def dump_spec(data: dict) -> str:
    return json.dumps(data, indent=2) + "\n"
