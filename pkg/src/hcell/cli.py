"""Command line entry point: parse a spec file, run one verification pipeline, emit a report.

Exit codes: 0 when every check passes, 1 when some check fails, 2 for input
errors and for computations refused by a module (field too small, group too
large, ...).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

import numpy as np

from .cells import (
    CellData,
    SymClass,
    cell_structure,
    check_adjunctions,
    check_cell_module,
    check_cell_structure,
    check_h0_simplicity,
    check_symbolic_against_oracle,
    check_vec_g,
    classes,
    proj,
    right_adjoint,
)
from .cohomology import classify, schur_report
from .errors import HcellError, SchemaError, SemanticError
from .hopf import check_adjunction, check_basis_maps, default_test_modules, equivariant_gamma, trivial_module, verify_gamma_monoidal
from .bimodule import regular_module
from .report import PASS, FAIL, ValidationReport, report_from_dict
from .skewcat import skew_category_suite
from .specfile import SpecFile, parse_spec, schema_path

COMMANDS = ("check-hopf", "verify-gamma", "cells", "adjoints", "classify", "schur", "h0-simple", "vec-g", "embed-check")


class UsageError(HcellError):
    """The spec file lacks a block the command needs."""


def jsonable(x: Any) -> Any:
    """Exact JSON-ready form: residues as ints, rationals as "p/q" strings."""
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted(jsonable(v) for v in x)
    if isinstance(x, np.ndarray):
        return jsonable(x.tolist())
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    if x is None or isinstance(x, str):
        return x
    if isinstance(x, SymClass):
        return str(x)
    return str(x)


@dataclass
class RunReport:
    command: str
    spec: str
    reports: list[ValidationReport]
    options: dict = field(default_factory=dict)
    timing: float | None = None

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.reports)

    def to_dict(self) -> dict:
        out = {
            "command": self.command,
            "spec": self.spec,
            "status": PASS if self.ok else FAIL,
            "options": self.options,
            "reports": [r.to_dict() for r in self.reports],
        }
        if self.timing is not None:
            out["seconds"] = round(self.timing, 3)
        return jsonable(out)

    @classmethod
    def from_dict(cls, data: dict) -> "RunReport":
        return cls(data["command"], data["spec"], [report_from_dict(r) for r in data["reports"]], data.get("options", {}), data.get("seconds"))

    def render_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def render_text(self) -> str:
        head = f"hcell {self.command} {self.spec}: {'PASS' if self.ok else 'FAIL'}"
        if self.timing is not None:
            head += f" ({self.timing:.3f} s)"
        parts = [head]
        for r in self.reports:
            clean = ValidationReport(r.subject, r.checks, jsonable(r.data))
            parts.append(clean.render_text())
        return "\n".join(parts) + "\n"


# pipelines


def _need_algebra(spec: SpecFile) -> None:
    if spec.algebra is None:
        raise UsageError(f"spec {spec.name!r} has no algebra; this command needs quiver, relations and action blocks")


def _need_hopf(spec: SpecFile) -> None:
    _need_algebra(spec)
    if spec.hopf is None:
        raise UsageError(f"spec {spec.name!r} has no hopf block")


def _check_hopf(spec: SpecFile, opts) -> list[ValidationReport]:
    _need_hopf(spec)
    return [spec.hopf.report, check_basis_maps(spec.hopf)]


def _verify_gamma(spec: SpecFile, opts) -> list[ValidationReport]:
    _need_hopf(spec)
    hd = spec.hopf
    return [check_adjunction(hd), verify_gamma_monoidal(hd, default_test_modules(hd))]


def _cells(spec: SpecFile, opts) -> list[ValidationReport]:
    _need_algebra(spec)
    data = CellData(spec.algebra, spec.action, opts.tilde)
    cs = cell_structure(data)
    rep = check_cell_structure(cs, data)
    rep.data["two-sided cells"] = len(cs.two_sided_cells)
    rep.data["H-cells"] = len(cs.h_cells)
    one = data.group.label(data.group.identity)
    h0 = cs.h_cells[cs.cell_of(cs.h_cells, proj(one))]
    rep.data["|H_0|"] = len(h0)
    out = [rep, check_symbolic_against_oracle(data)]
    for cell in cs.left_cells:
        out.append(check_cell_module(cell, data))
    return out


def _adjoints(spec: SpecFile, opts) -> list[ValidationReport]:
    _need_algebra(spec)
    data = CellData(spec.algebra, spec.action, True)
    rep = check_adjunctions(data)
    rep.data["right adjoints"] = {str(x): str(right_adjoint(x, data)) for x in classes(data)}
    return [rep]


def _group_of(spec: SpecFile | None, group_spec: SpecFile | None):
    if group_spec is not None:
        return group_spec.group
    return spec.group


def _classify(spec: SpecFile, opts) -> list[ValidationReport]:
    G = opts.group_data
    char = spec.field.char if (spec is not None and spec.field is not None and opts.group_spec is None) else 0
    res = classify(G, char)
    rep = ValidationReport("classification")
    j1 = [e for e in res.entries if e.apex == "J1"]
    rep.record("exactly one apex-J1 entry", len(j1) == 1, len(j1))
    rep.data.update(res.to_dict())
    return [rep]


def _schur(spec: SpecFile, opts) -> list[ValidationReport]:
    return [schur_report(opts.group_data)]


def _h0(spec: SpecFile, opts) -> list[ValidationReport]:
    _need_algebra(spec)
    return [check_h0_simplicity(CellData(spec.algebra, spec.action, False))]


def _vec_g(spec: SpecFile, opts) -> list[ValidationReport]:
    _need_algebra(spec)
    return [check_vec_g(CellData(spec.algebra, spec.action, True))]


def _embed(spec: SpecFile, opts) -> list[ValidationReport]:
    _need_hopf(spec)
    hd = spec.hopf
    out = [skew_category_suite(hd, opts.seed)]
    for M in (trivial_module(hd), regular_module(hd.algebra)):
        _, rep = equivariant_gamma(hd, M)
        out.append(rep)
    return out


PIPELINES: dict[str, Callable] = {
    "check-hopf": _check_hopf,
    "verify-gamma": _verify_gamma,
    "cells": _cells,
    "adjoints": _adjoints,
    "classify": _classify,
    "schur": _schur,
    "h0-simple": _h0,
    "vec-g": _vec_g,
    "embed-check": _embed,
}


@dataclass
class Options:
    tilde: bool = False
    seed: int = 0
    group_spec: SpecFile | None = None
    group_data: Any = None


def run(command: str, spec: SpecFile | None, tilde: bool = False, seed: int = 0, group_spec: SpecFile | None = None, timing: bool = False) -> RunReport:
    """Run one pipeline.  Module errors propagate to the caller."""
    if command not in PIPELINES:
        raise UsageError(f"unknown command {command!r}; choose from {', '.join(COMMANDS)}")
    if spec is None and group_spec is None:
        raise UsageError(f"{command} needs a spec file")
    if spec is None and command not in ("classify", "schur"):
        raise UsageError(f"{command} needs a spec file with an algebra")
    opts = Options(tilde, seed, group_spec, _group_of(spec, group_spec))
    start = time.perf_counter()
    reports = PIPELINES[command](spec, opts)
    elapsed = time.perf_counter() - start
    name = group_spec.name if spec is None else spec.name
    options = {"tilde": tilde, "seed": seed}
    if group_spec is not None:
        options["group"] = group_spec.name
    return RunReport(command, name, reports, options, elapsed if timing else None)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hcell", description="Verify Hopf, bimodule and cell computations for a JSON spec.")
    p.add_argument("command", nargs="?", choices=COMMANDS)
    p.add_argument("specfile", nargs="?", help="JSON spec file (see --schema-path)")
    p.add_argument("--tilde", action="store_true", help="use the configuration with the semisimple factor added")
    p.add_argument("--output", choices=("text", "json"), default="text")
    p.add_argument("--group", metavar="GROUPFILE", help="group-only spec for classify and schur")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized searches (default 0)")
    p.add_argument("--timing", action="store_true", help="include wall-clock time (output is then not reproducible)")
    p.add_argument("--report", metavar="PATH", help="also write the report to PATH")
    p.add_argument("--schema-path", action="store_true", help="print the path of the bundled JSON schema and exit")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.schema_path:
        print(schema_path())
        return 0
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 2
    try:
        spec = parse_spec(args.specfile) if args.specfile else None
        group_spec = parse_spec(args.group) if args.group else None
        result = run(args.command, spec, args.tilde, args.seed, group_spec, args.timing)
    except (SchemaError, SemanticError, UsageError) as exc:
        print(f"hcell: input error: {exc}", file=sys.stderr)
        return 2
    except HcellError as exc:
        print(f"hcell: {args.command} refused: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    text = result.render_json() if args.output == "json" else result.render_text()
    sys.stdout.write(text)
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(text)
    return 0 if result.ok else 1


if __name__ == "__main__":
    sys.exit(main())
