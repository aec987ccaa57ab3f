"""Command-line front end.

Exit codes: 0 verdict Yes/true, 1 No/false, 2 Unknown, 3 input error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from importlib.resources import files
from typing import Optional

from . import docfmt
from .ce import ce_exact_report, is_ce_exact, is_ce_projective
from .complex import ComplexError
from .docfmt import DocumentError
from .gp import GpError, build_resolution, classify_strongly_ce_gp, verify_resolution
from .homotopy import HomotopyError, classify_gp_object, is_homotopy_equivalence, is_xi_triangle, minimize
from .module import GpBounds, is_gorenstein_projective, is_projective
from .suites import SUITES, run_suite

EXIT = {"Yes": 0, True: 0, "No": 1, False: 1, "Unknown": 2}
INPUT_ERROR = 3
COMMANDS = (
    "classify",
    "ce-exact",
    "ce-projective",
    "xi-triangle",
    "resolve",
    "verify-resolution",
    "homotopy-equiv",
    "minimize",
    "gp-module",
    "suite",
)
EXAMPLE = "data/dual_numbers_periodic.txt"


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(INPUT_ERROR)


def example_text() -> str:
    return files("cehom").joinpath(EXAMPLE).read_text()


def _yn(b) -> str:
    return "Yes" if b is True else "No" if b is False else str(b)


def _gen_range(text: Optional[str]):
    if text is None:
        return None
    try:
        lo, hi = (int(t) for t in text.split(":"))
    except ValueError as e:
        raise InputError(f"--gen-range expects lo:hi, got {text!r}") from e
    if lo > hi:
        raise InputError("--gen-range needs lo <= hi")
    return list(range(lo, hi + 1))


# --- command implementations: (args, doc) -> (verdict, report, lines) ---------------


def cmd_classify(args, doc):
    G = doc.complex(args.object)
    cls = classify_strongly_ce_gp(G, _bounds(args))
    lines = [f"degree {n}: " + ", ".join(f"{k}={v}" for k, v in row.items()) for n, row in cls.table.items()]
    lines.append("condition sets: " + ", ".join(f"({k}) {v}" for k, v in cls.sets.items()))
    if not cls.consistent:
        lines.append("internal consistency failure: condition sets disagree")
    lines += cls.reasons
    lines.append(f"strongly C-E Gorenstein projective: {cls.overall}")
    report = {"table": {str(n): row for n, row in cls.table.items()}, "sets": {str(k): v for k, v in cls.sets.items()}, "consistent": cls.consistent, "reasons": cls.reasons}
    if args.gp_object:
        try:
            obj = classify_gp_object(G, _bounds(args))
            report["gp_object"] = {"route": obj.route, "verdict": obj.classification.overall}
            lines.append(f"Gorenstein projective object (route {obj.route}): {obj.classification.overall}")
        except HomotopyError as e:
            report["gp_object"] = {"route": None, "verdict": "Unknown", "reason": str(e)}
            lines.append(f"Gorenstein projective object: not decided ({e})")
    return cls.overall, report, lines


def cmd_ce_exact(args, doc):
    maps = doc.sequence(args.object)
    rep = is_ce_exact(doc.short_sequence(args.object)) if len(maps) == 2 else ce_exact_report(maps)
    lines = [f"{fam}: {'exact' if ok else 'not exact'}" for fam, ok in rep.families.items()]
    for fam, where in rep.failures.items():
        n, j = where[0]
        lines.append(f"{fam} fails in degree {n} at junction {j}")
    lines.append(f"C-E exact: {_yn(rep.exact)}")
    report = {"families": rep.families, "failures": {k: [list(w) for w in v] for k, v in rep.failures.items()}}
    return rep.exact, report, lines


def cmd_ce_projective(args, doc):
    P = doc.complex(args.object)
    rep = is_ce_projective(P)
    lines = list(rep.reasons())
    lines.append(f"C-E projective: {_yn(rep.projective)}")
    return rep.projective, {"failures": rep.failures, "reasons": rep.reasons()}, lines


def cmd_xi_triangle(args, doc):
    s = doc.short_sequence(args.object)
    rep = is_xi_triangle(s)
    lines = [f"degreewise split: {_yn(rep.degreewise_split)}"]
    lines += [f"homology exact in degree {n}: {_yn(v)}" for n, v in rep.homology_exact.items()]
    lines.append(f"xi-triangle: {_yn(rep.member)}")
    report = {"degreewise_split": rep.degreewise_split, "homology_exact": {str(k): v for k, v in rep.homology_exact.items()}}
    return rep.member, report, lines


def cmd_resolve(args, doc):
    G = doc.complex(args.object)
    try:
        res = build_resolution(G, args.depth)
    except GpError as e:
        raise InputError(str(e)) from e
    rep = verify_resolution(res, _gen_range(args.gen_range))
    text = docfmt.serialize(docfmt.resolution_document(res))
    lines = [f"built {len(res.right)} right and {len(res.left)} left terms"]
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        lines.append(f"written to {args.out}")
    elif not args.json:
        lines.append(text.rstrip())
    lines += rep.failures
    lines.append(f"resolution verifies: {_yn(rep.ok)}")
    report = {"depth": args.depth, "ok": rep.ok, "failures": rep.failures}
    if args.json and not args.out:
        report["document"] = text
    return rep.ok, report, lines


def cmd_verify_resolution(args, doc):
    if not doc.resolutions:
        raise InputError("document has no resolution block")
    name = args.object or next(iter(doc.resolutions))
    if name not in doc.resolutions:
        raise InputError(f"no resolution named {name!r}")
    res = doc.resolutions[name]
    rep = verify_resolution(res, _gen_range(args.gen_range))
    lines = [
        f"terms C-E projective: {_yn(rep.terms_ce_projective)}",
        f"strongly C-E exact: {_yn(rep.strongly_exact)}",
        f"center is the kernel: {_yn(rep.kernel_ok)}",
        f"Hom into generators exact: {_yn(rep.hom_exact)}",
    ]
    lines += rep.failures
    lines.append(f"resolution verifies: {_yn(rep.ok)}")
    report = {
        "terms_ce_projective": rep.terms_ce_projective,
        "strongly_exact": rep.strongly_exact,
        "kernel_ok": rep.kernel_ok,
        "hom_exact": rep.hom_exact,
        "failures": rep.failures,
    }
    return rep.ok, report, lines


def cmd_homotopy_equiv(args, doc):
    if args.object:
        if args.object not in doc.maps:
            raise InputError(f"no map named {args.object!r}")
        f = doc.maps[args.object]
    elif doc.maps:
        f = next(iter(doc.maps.values()))
    else:
        raise InputError("document has no map")
    eq = is_homotopy_equivalence(f)
    lines = [f"homotopy equivalence: {_yn(eq is not None)}"]
    report: dict = {"equivalence": eq is not None}
    if eq is not None:
        report["backward"] = {str(n): docfmt.format_matrix(f.ring, eq.backward.comp(n)) for n in eq.backward.degrees()}
        lines.insert(0, "certificates verify: " + _yn(eq.verify()))
    return eq is not None, report, lines


def cmd_minimize(args, doc):
    X = doc.complex(args.object)
    try:
        m = minimize(X)
    except HomotopyError as e:
        raise InputError(str(e)) from e
    ok = m.equivalence.verify()
    text = "\n".join(docfmt.format_complex("minimal", m.complex))
    lines = [f"eliminated {m.steps} disk summand(s)", text, f"equivalence verifies: {_yn(ok)}"]
    return ok, {"steps": m.steps, "complex": text, "verified": ok}, lines


def cmd_gp_module(args, doc):
    if args.object:
        if args.object not in doc.modules:
            raise InputError(f"no module named {args.object!r}")
        M = doc.modules[args.object]
    elif doc.modules:
        M = next(iter(doc.modules.values()))
    else:
        raise InputError("document has no module")
    v = is_gorenstein_projective(M, _bounds(args))
    lines = [f"projective: {_yn(bool(is_projective(M)))}"]
    report: dict = {"status": v.status, "reason": v.reason}
    if v.witness is not None:
        W = v.witness
        report["witness"] = {"period": W.period, "ranks": W.ranks, "maps": [docfmt.format_matrix(M.ring, A) for A in W.maps]}
        lines.append(f"witness: period {W.period}, ranks {W.ranks}")
    if v.reason:
        lines.append(v.reason)
    lines.append(f"Gorenstein projective: {v.status}")
    return v.status, report, lines


def _bounds(args) -> GpBounds:
    return GpBounds(period=args.budget_period, rank=args.budget_rank)


HANDLERS = {
    "classify": cmd_classify,
    "ce-exact": cmd_ce_exact,
    "ce-projective": cmd_ce_projective,
    "xi-triangle": cmd_xi_triangle,
    "resolve": cmd_resolve,
    "verify-resolution": cmd_verify_resolution,
    "homotopy-equiv": cmd_homotopy_equiv,
    "minimize": cmd_minimize,
    "gp-module": cmd_gp_module,
}


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cehom", description="Cartan-Eilenberg and Gorenstein projective checks for complexes over finite rings.")
    p.add_argument("command", help="one of: " + ", ".join(COMMANDS))
    p.add_argument("input", nargs="?", help="input document, '-' for stdin, or the suite name for 'suite'")
    p.add_argument("--example", action="store_true", help="use the shipped periodic dual-numbers example as input")
    p.add_argument("--object", help="name of the complex, sequence, map, module or resolution to use")
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--out", help="where 'resolve' writes the resolution document")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--count", type=int, default=50)
    p.add_argument("--gen-range", help="generator degree range lo:hi for Hom-exactness checks")
    p.add_argument("--json", action="store_true", help="emit the report as JSON")
    p.add_argument("--budget-period", type=int, default=2)
    p.add_argument("--budget-rank", type=int, default=4)
    p.add_argument("--gp-object", action="store_true", help="with 'classify', also reduce up to homotopy first")
    return p


def _emit(report: dict, lines: list, as_json: bool):
    if as_json:
        print(json.dumps(report, indent=2, default=str))
    else:
        for line in lines:
            print(line)


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    t0 = time.perf_counter()
    report: dict = {"command": args.command, "seed": args.seed}
    if args.command not in COMMANDS:
        print(f"unknown command {args.command!r}; choose from {', '.join(COMMANDS)}", file=sys.stderr)
        return INPUT_ERROR
    try:
        if args.command == "suite":
            return _run_suite(args, report, t0)
        text = _read_input(args)
        report["input_sha256"] = hashlib.sha256(text.encode()).hexdigest()
        doc = docfmt.parse(text)
        verdict, body, lines = HANDLERS[args.command](args, doc)
    except (DocumentError, InputError, OSError, ComplexError) as e:
        if args.json:
            print(json.dumps({**report, "error": str(e)}))
        else:
            print(f"input error: {e}", file=sys.stderr)
        return INPUT_ERROR
    report.update(body)
    report["verdict"] = _yn(verdict)
    report["seconds"] = round(time.perf_counter() - t0, 4)
    _emit(report, lines, args.json)
    return EXIT[verdict]


def _read_input(args) -> str:
    if args.example:
        return example_text()
    if args.input is None:
        raise InputError("missing input document (or pass --example)")
    if args.input == "-":
        return sys.stdin.read()
    with open(args.input) as fh:
        return fh.read()


def _run_suite(args, report, t0) -> int:
    name = args.input
    if name not in SUITES:
        raise InputError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    res = run_suite(name, args.seed, args.count, bounds=_bounds(args))
    report.update(
        {
            "suite": name,
            "count": res.total,
            "passed": res.passed,
            "failed": res.failed,
            "counterexample": res.counterexample,
            "verdict": _yn(res.ok),
            "seconds": round(time.perf_counter() - t0, 4),
        }
    )
    lines = [f"suite {name}: {res.passed}/{res.total} pass (seed {args.seed})"]
    if res.counterexample:
        lines += [f"first counterexample ({res.note}):", res.counterexample.rstrip()]
    _emit(report, lines, args.json)
    return EXIT[res.ok]


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
