"""Command-line front end.

    python3 -m epsint check FILE [--jobs N] [--format json|text] ...
    python3 -m epsint generate --seed S --profile P
    python3 -m epsint examples l2 --dim D [--point ...]
    python3 -m epsint examples l1 --nmax N [--step H]
    python3 -m epsint verify FILE

Exit codes: 0 when every check passes, 1 when a check fails, 2 on malformed
input (unreadable file, bad JSON, schema violation, limits exceeded).
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

from . import analytic
from .approx import br_decompose_run, dyadic_schedule
from .calculus import (
    DecompositionCertificate,
    certificate_defects,
    check_conjugate_formula,
    check_epigraph_formula,
    check_restricted_formula,
    check_sum_rule,
    normal_set_four_ways,
)
from .errors import EpsIntError, LimitExceeded
from .generate import PROFILES, generate
from .integral import IntegralInstance, SubspaceRestriction
from .rational import parse_rational
from .report import COLLAPSE_NOTES, CheckReport, to_jsonable
from .serialize import SchemaError, dumps, instance_from_json, load_document

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


@dataclass(frozen=True)
class Limits:
    """Desk-scale guardrails; double description is exponential in the worst case."""

    max_dim: int = 6
    max_atoms: int = 8
    max_pieces: int = 16
    max_constraints: int = 32

    def check(self, inst: IntegralInstance) -> None:
        if inst.dim > self.max_dim:
            raise LimitExceeded(f"dimension {inst.dim} exceeds {self.max_dim}")
        if len(inst.atoms) > self.max_atoms:
            raise LimitExceeded(f"{len(inst.atoms)} atoms exceed {self.max_atoms}")
        for atom, _, f in inst.items():
            if len(f.pieces) > self.max_pieces:
                raise LimitExceeded(f"atom {atom}: {len(f.pieces)} pieces exceed {self.max_pieces}")
            if len(f.domain.h_rep) > self.max_constraints:
                raise LimitExceeded(f"atom {atom}: {len(f.domain.h_rep)} domain constraints exceed {self.max_constraints}")


def _parse_list(text: Optional[str]) -> Optional[list]:
    if text is None:
        return None
    return [parse_rational(t.strip()) for t in text.split(",") if t.strip()]


def _schedule(args, query: dict) -> list:
    if "schedule" in query:
        return query["schedule"]
    eps = _parse_list(args.eps_schedule)
    lam = _parse_list(args.lambda_schedule)
    if eps is None and lam is None:
        return dyadic_schedule(12)
    default = dyadic_schedule(max(len(eps or []), len(lam or [])))
    eps = eps or [e for e, _ in default]
    lam = lam or [l for _, l in default]
    if len(eps) != len(lam):
        raise SchemaError("--eps-schedule and --lambda-schedule need equal lengths", "flags")
    return list(zip(eps, lam))


def _br_report(inst, query, args) -> CheckReport:
    rep = CheckReport("br_run")
    run = br_decompose_run(inst, query["x"], query["xstar"], _schedule(args, query))
    for k, step in enumerate(run.steps):
        for (atom, _, f), pair, y in zip(inst.items(), step.pairs, step.certificate.selections):
            bad = pair.bound_violations(f, query["x"], y)
            if bad:
                return rep.fail(f"step {k}, atom {atom}: {'; '.join(bad)}", pair=pair.to_json())
    rep.witnesses.append(run.to_json())
    rep.witnesses.append({
        "displacement_nonincreasing": run.is_nonincreasing("displacement"),
        "condition_c_nonincreasing": run.is_nonincreasing("condition_c"),
    })
    rep.notes = list(COLLAPSE_NOTES) + list(run.notes)
    return rep


def run_query(inst: IntegralInstance, query: dict, args) -> list[CheckReport]:
    kind = query["kind"]
    seed = args.seed
    if kind == "sum_rule":
        return [check_sum_rule(inst, query["x"], e, seed=seed) for e in query["eps"]]
    if kind == "normal_sets":
        return [normal_set_four_ways(inst, query["x"], e) for e in query["eps"]]
    if kind == "restricted":
        L = SubspaceRestriction.spanned_by(query["L"], inst.dim)
        return [check_restricted_formula(inst, L, query["x"], e, seed=seed) for e in query["eps"]]
    if kind == "conjugate":
        return [check_conjugate_formula(inst, query["points"])]
    if kind == "epigraph":
        return [check_epigraph_formula(inst)]
    if kind == "br_run":
        return [_br_report(inst, query, args)]
    if kind == "gateaux":
        return [analytic.gateaux_correspondence(inst, query["x"])]
    raise SchemaError(f"unknown query kind {kind!r}")


def _execute(inst, index, query, args) -> dict:
    t0 = time.perf_counter()
    entry: dict = {"index": index, "kind": query["kind"]}
    try:
        reports = run_query(inst, query, args)
        entry["status"] = "pass" if all(r.passed for r in reports) else "fail"
        entry["reports"] = [r.to_json() for r in reports]
    except (EpsIntError, ValueError) as exc:
        entry["status"] = "error"
        entry["error"] = f"{type(exc).__name__}: {exc}"
    if args.timing:
        entry["seconds"] = round(time.perf_counter() - t0, 4)
    return entry


def _emit(doc: dict, fmt: str) -> None:
    if fmt == "json":
        print(dumps(to_jsonable(doc)))
        return
    print(f"[{doc['status'].upper()}] {doc.get('file', '')}")
    for q in doc.get("queries", []):
        line = f"  #{q['index']} {q['kind']}: {q['status']}"
        if "seconds" in q:
            line += f" ({q['seconds']}s)"
        print(line)
        if q["status"] == "error":
            print(f"    {q['error']}")
        for r in q.get("reports", []):
            if r["status"] != "pass":
                print(f"    {r['theorem']}: {r['counterexample'].get('message')}")
    for n in doc.get("notes", []):
        print(f"  note: {n}")


def _input_error(msg: str, fmt: str) -> int:
    if fmt == "json":
        print(dumps({"status": "error", "error": msg}))
    else:
        print(f"error: {msg}", file=sys.stderr)
    return EXIT_INPUT


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load(path: str, args):
    """``(instance, queries, text)`` or raises one of the input errors."""
    text = _read(path)
    inst, queries = load_document(text)
    if not args.override_limits:
        Limits().check(inst)
    return inst, queries, text


def cmd_check(args) -> int:
    try:
        inst, queries, _ = _load(args.file, args)
    except OSError as exc:
        return _input_error(f"cannot read {args.file}: {exc.strerror}", args.format)
    except json.JSONDecodeError as exc:
        return _input_error(f"invalid JSON at line {exc.lineno} column {exc.colno} (char {exc.pos}): {exc.msg}", args.format)
    except (SchemaError, EpsIntError, ValueError) as exc:
        return _input_error(f"{type(exc).__name__}: {exc}", args.format)

    if args.jobs > 1:
        with ThreadPoolExecutor(args.jobs) as pool:
            entries = list(pool.map(lambda iq: _execute(inst, iq[0], iq[1], args), enumerate(queries)))
    else:
        entries = [_execute(inst, i, q, args) for i, q in enumerate(queries)]
    statuses = {e["status"] for e in entries}
    status = "fail" if "fail" in statuses else ("error" if "error" in statuses else "pass")
    doc = {"file": args.file, "status": status, "queries": entries, "notes": list(COLLAPSE_NOTES)}
    _emit(doc, args.format)
    return {"pass": EXIT_OK, "fail": EXIT_FAIL, "error": EXIT_INPUT}[status]


def cmd_generate(args) -> int:
    print(dumps(generate(args.seed, args.profile)))
    return EXIT_OK


def cmd_examples(args) -> int:
    try:
        if args.which == "l2":
            point = [float(v) for v in args.point.split(",")] if args.point else None
            if point is not None and len(point) != args.dim:
                return _input_error(f"--point needs {args.dim} coordinates", args.format)
            rep = analytic.l2_example(args.dim, point)
        else:
            rep = analytic.l1_example(args.nmax, step=args.step)
    except ValueError as exc:
        return _input_error(str(exc), args.format)
    if args.format == "json":
        print(dumps(rep.to_json()))
    else:
        print(rep.to_text())
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_verify(args) -> int:
    """Replay certificates stored next to an instance; every one must verify."""
    try:
        doc = json.loads(_read(args.file))
        inst = instance_from_json(doc)
        items = doc.get("certificates")
        if not isinstance(items, list):
            raise SchemaError("expected a list of certificates", "$.certificates")
        parsed = []
        for i, it in enumerate(items):
            p = f"$.certificates[{i}]"
            try:
                x = [parse_rational(str(c)) for c in it["x"]]
                xs = [parse_rational(str(c)) for c in it["xstar"]]
                eps = parse_rational(str(it["eps"]))
                cert = DecompositionCertificate.from_json(it["certificate"])
            except (KeyError, TypeError, ValueError) as exc:
                raise SchemaError(f"malformed certificate ({exc})", p) from None
            parsed.append((x, xs, eps, cert))
    except OSError as exc:
        return _input_error(f"cannot read {args.file}: {exc.strerror}", args.format)
    except json.JSONDecodeError as exc:
        return _input_error(f"invalid JSON at line {exc.lineno} column {exc.colno} (char {exc.pos}): {exc.msg}", args.format)
    except (SchemaError, EpsIntError, ValueError) as exc:
        return _input_error(f"{type(exc).__name__}: {exc}", args.format)

    results = []
    for i, (x, xs, eps, cert) in enumerate(parsed):
        try:
            defects = certificate_defects(inst, x, xs, eps, cert)
        except (ValueError, TypeError, EpsIntError) as exc:
            defects = [f"{type(exc).__name__}: {exc}"]
        results.append({"index": i, "status": "pass" if not defects else "fail", "defects": defects})
    status = "pass" if all(r["status"] == "pass" for r in results) else "fail"
    out = {"file": args.file, "status": status, "certificates": results}
    if args.format == "json":
        print(dumps(out))
    else:
        print(f"[{status.upper()}] {args.file}")
        for r in results:
            print(f"  certificate #{r['index']}: {r['status']}" + (f" ({'; '.join(r['defects'])})" if r["defects"] else ""))
    return EXIT_OK if status == "pass" else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="epsint", description="Exact checks of eps-subdifferential calculus for integral functionals.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("json", "text"), default="json")

    c = sub.add_parser("check", help="run the queries of an instance file")
    c.add_argument("file")
    common(c)
    c.add_argument("--jobs", type=int, default=1)
    c.add_argument("--seed", type=int, default=0, help="seed for sampled certificates")
    c.add_argument("--eps-schedule", help="comma-separated rationals for br_run queries")
    c.add_argument("--lambda-schedule", help="comma-separated rationals for br_run queries")
    c.add_argument("--override-limits", action="store_true")
    c.add_argument("--timing", action="store_true", help="add wall-clock seconds per query")
    c.set_defaults(func=cmd_check)

    g = sub.add_parser("generate", help="emit a random instance file")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--profile", choices=PROFILES, default="box-domains")
    g.set_defaults(func=cmd_generate)

    e = sub.add_parser("examples", help="floating-point example families")
    e.add_argument("which", choices=("l2", "l1"))
    common(e)
    e.add_argument("--dim", type=int, default=8)
    e.add_argument("--point", help="comma-separated coordinates for l2")
    e.add_argument("--nmax", type=int, default=1000)
    e.add_argument("--step", type=float, default=None, help="fixed Gateaux step for l1")
    e.set_defaults(func=cmd_examples)

    v = sub.add_parser("verify", help="replay stored decomposition certificates")
    v.add_argument("file")
    common(v)
    v.set_defaults(func=cmd_verify)
    return ap


def main(argv: Optional[list] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
