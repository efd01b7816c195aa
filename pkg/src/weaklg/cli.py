"""Command line front end: batch verification and per-model reports.

Exit codes are a stable contract: 0 success, 1 verification or computation
failure, 2 usage errors (unknown command, unknown model, malformed input).
JSON output carries no wall-clock timings so identical invocations stay
byte-identical; timings appear in the text renderings only.
"""

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass

from .catalog import (
    CatalogEntry,
    CatalogSchemaError,
    UnknownModelError,
    find_entry,
    load_catalog,
    load_model_file,
)
from .critical import check_expected_values, cluster_values, find_critical_points
from .laurent import LaurentError
from .periods import (
    PowerSeries,
    SeriesBudgetError,
    constant_terms_series,
    constant_terms_series_naive,
    series_equal,
)
from .pfops import (
    _SYSTEM_EXTRA_ROWS,
    PFError,
    is_d3_shape,
    recover_minimal_operator,
    recover_operator,
)
from .polytopes import (
    PolytopeError,
    check_toric_condition,
    dual_polytope,
    face_fan,
    interior_lattice_points,
    is_canonical,
    newton_polytope,
    picard_rank,
)

DEFAULT_ORDER = 60
DEFAULT_MMAX = 3
DEFAULT_STARTS = 512
DEFAULT_SEED = 1
DEFAULT_TOL = 1e-10
CROSS_MODEL_ORDER = 24
ORACLE_ORDER = 10


class _UsageError(Exception):
    pass


def _emit_json(obj) -> None:
    print(json.dumps(obj, indent=2))


def _resolve_ref(ref: str) -> CatalogEntry:
    """A model reference is a catalog id or a path to a model file."""
    try:
        return find_entry(ref)
    except UnknownModelError:
        if os.path.exists(ref):
            return load_model_file(ref)
        raise _UsageError(f"unknown model {ref!r} (not a catalog id or file)")


def _resolve_model(args) -> CatalogEntry:
    name = getattr(args, "model", None)
    path = getattr(args, "file", None)
    if (name is None) == (path is None):
        raise _UsageError("give exactly one of: catalog id, --file PATH")
    if path is not None:
        if not os.path.exists(path):
            raise _UsageError(f"no such file: {path}")
        return load_model_file(path)
    return _resolve_ref(name)


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise _UsageError(message)


def _complex_text(v: complex) -> str:
    return f"{v.real:+.9f}{v.imag:+.9f}j"


def _pair(v: complex) -> list:
    return [v.real, v.imag]


def cmd_series(args) -> int:
    _require(args.order >= 1, "order must be at least 1")
    entry = _resolve_model(args)
    s = constant_terms_series(entry.polynomial, args.order)
    if args.json:
        _emit_json({"id": entry.id, "series": s.to_obj()})
    else:
        print(", ".join(str(c) for c in s.coeffs))
    return 0


def _held_out(order: int, ord_D: int, shape_deg_t: int, op_deg_t: int) -> int:
    unknowns = (ord_D + 1) * (shape_deg_t + 1)
    return (order - op_deg_t) - (unknowns + _SYSTEM_EXTRA_ROWS)


def cmd_pf(args) -> int:
    _require(args.order >= 1, "order must be at least 1")
    _require(args.ord_d >= 1, "ord-d must be at least 1")
    _require(args.deg_t is None or args.deg_t >= 0, "deg-t must be nonnegative")
    entry = _resolve_model(args)
    s = constant_terms_series(entry.polynomial, args.order)
    if args.deg_t is None:
        op, shape_deg_t = recover_minimal_operator(s, ord_D=args.ord_d)
    else:
        shape_deg_t = args.deg_t
        op = recover_operator(s, args.ord_d, args.deg_t)
    if op is None:
        print(f"recovery failed for {entry.id}: no validated operator", file=sys.stderr)
        return 1
    held = _held_out(s.order, args.ord_d, shape_deg_t, op.deg_t)
    if args.json:
        _emit_json({"id": entry.id, "operator": op.to_obj(), "held_out": held})
    else:
        print(op.to_text())
        print(f"held-out coefficients annihilated: {held}")
    return 0


def cmd_polytope(args) -> int:
    _require(args.mmax >= 1, "mmax must be at least 1")
    entry = _resolve_model(args)
    newton = newton_polytope(entry.polynomial)
    interior = interior_lattice_points(newton)
    dual = dual_polytope(newton)
    toric_ok, rows = check_toric_condition(entry.polynomial, entry.degree, args.mmax)
    canonical = is_canonical(entry.polynomial)
    try:
        rank = picard_rank(face_fan(newton))
    except PolytopeError:
        rank = None
    if args.json:
        _emit_json(
            {
                "id": entry.id,
                "vertices": [list(v) for v in newton.vertices],
                "interior_lattice_points": [list(p) for p in interior],
                "volume": str(dual.volume()),
                "newton_volume": str(newton.volume()),
                "canonical": canonical,
                "toric": {
                    "degree": entry.degree,
                    "ok": toric_ok,
                    "rows": [
                        {
                            "m": r["m"],
                            "count": r["count"],
                            "predicted": str(r["predicted"]),
                            "ok": r["ok"],
                        }
                        for r in rows
                    ],
                },
                "picard_rank": rank,
            }
        )
        return 0
    print("vertices:", ", ".join(str(v) for v in newton.vertices))
    print("interior lattice points:", ", ".join(str(p) for p in interior) or "none")
    print("dual volume:", dual.volume())
    print("newton volume:", newton.volume())
    for r in rows:
        print(f"E({r['m']}) = {r['count']} (predicted {r['predicted']})")
    print("canonical:", str(canonical).lower())
    print(f"toric at degree {entry.degree}:", str(toric_ok).lower())
    print("picard rank:", rank if rank is not None else "undetermined")
    return 0


def cmd_critical(args) -> int:
    _require(args.starts >= 1, "starts must be at least 1")
    _require(args.tol > 0, "tol must be positive")
    entry = _resolve_model(args)
    points = find_critical_points(
        entry.polynomial, starts=args.starts, seed=args.seed, tol=args.tol
    )
    found = cluster_values(points)
    expectation = None
    if entry.expected_critical_values is not None:
        ok, report = check_expected_values(found, entry.expected_critical_values)
        expectation = {
            "match": ok,
            "missing": [_pair(v) for v in report["missing"]],
            "extra": [_pair(v) for v in report["extra"]],
        }
    if args.json:
        _emit_json(
            {
                "id": entry.id,
                "starts": args.starts,
                "seed": args.seed,
                "tol": args.tol,
                "clusters": found.to_obj(),
                "expected": expectation,
            }
        )
        return 0
    print(f"critical value clusters ({args.starts} starts, seed {args.seed}):")
    for c in found.clusters:
        print(
            f"  {_complex_text(c.value)}"
            f"  count {c.count}  residual<={c.residual_max:.2e}"
        )
    if not found.clusters:
        print("  none found")
    if expectation is not None:
        print("expected values matched:", str(expectation["match"]).lower())
        for v in expectation["missing"]:
            print(f"  missing {_complex_text(complex(v[0], v[1]))}")
    return 0


def cmd_compare(args) -> int:
    _require(args.order >= 1, "order must be at least 1")
    first = _resolve_ref(args.model1)
    second = _resolve_ref(args.model2)
    s1 = constant_terms_series(first.polynomial, args.order)
    s2 = constant_terms_series(second.polynomial, args.order)
    equal, index = series_equal(s1, s2)
    if args.json:
        _emit_json(
            {
                "model1": first.id,
                "model2": second.id,
                "order": args.order,
                "equal": equal,
                "mismatch_index": index,
            }
        )
    elif equal:
        print(f"equal ({args.order} coefficients)")
    else:
        print(f"mismatch at index {index}")
    return 0 if equal else 1


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: str
    seconds: float
    detail: str = ""


@dataclass(frozen=True)
class VerificationReport:
    model_id: str
    checks: tuple

    @property
    def overall(self) -> str:
        return "fail" if any(c.status == "fail" for c in self.checks) else "pass"


def _timed_check(name, applicable, run) -> CheckResult:
    """Run one named check; inapplicable checks are skipped, never passed."""
    if not applicable:
        return CheckResult(name, "skipped", 0.0, "not applicable")
    t0 = time.perf_counter()
    ok, detail = run()
    return CheckResult(
        name, "pass" if ok else "fail", time.perf_counter() - t0, detail
    )


def _verify_entry(entry, peers, get_series, starts, seed, tol) -> VerificationReport:
    series = get_series(entry)

    def series_oracle():
        naive = constant_terms_series_naive(entry.polynomial, ORACLE_ORDER)
        fast = PowerSeries(series.coeffs[:ORACLE_ORDER])
        equal, index = series_equal(naive, fast)
        return equal, (
            f"{ORACLE_ORDER} coefficients" if equal else f"mismatch at index {index}"
        )

    def toric():
        ok, rows = check_toric_condition(entry.polynomial, entry.degree, DEFAULT_MMAX)
        bad = [r["m"] for r in rows if not r["ok"]]
        return ok, f"m <= {DEFAULT_MMAX}" if ok else f"fails at m = {bad}"

    def canonical():
        ok = is_canonical(entry.polynomial)
        return ok, "" if ok else "interior lattice points differ from the origin"

    recovered = {}

    def pf_recovery():
        op, shape_deg_t = recover_minimal_operator(series)
        if op is None:
            return False, "no validated operator"
        recovered["op"] = op
        held = _held_out(series.order, 3, shape_deg_t, op.deg_t)
        return held >= 20, f"deg_t {op.deg_t}, held-out {held}"

    def pf_shape():
        op = recovered.get("op")
        if op is None:
            return False, "no operator to test"
        ok, witness = is_d3_shape(op)
        return ok, "" if ok else f"violates {witness}"

    def critical_values():
        points = find_critical_points(
            entry.polynomial, starts=starts, seed=seed, tol=tol
        )
        ok, report = check_expected_values(
            cluster_values(points), entry.expected_critical_values
        )
        if ok:
            return True, f"matched {len(report['matched'])} expected values"
        missing = ", ".join(_complex_text(v) for v in report["missing"])
        return False, f"missing {missing}"

    def cross_model():
        for peer in peers:
            s1 = PowerSeries(series.coeffs[:CROSS_MODEL_ORDER])
            s2 = PowerSeries(get_series(peer).coeffs[:CROSS_MODEL_ORDER])
            equal, index = series_equal(s1, s2)
            if not equal:
                return False, f"differs from {peer.id} at index {index}"
        return True, f"agrees with {', '.join(p.id for p in peers)} to 24 terms"

    checks = (
        _timed_check("series-oracle", True, series_oracle),
        _timed_check("toric", entry.is_toric_claimed, toric),
        _timed_check("canonical", entry.is_canonical_claimed, canonical),
        _timed_check("pf-recovery", True, pf_recovery),
        _timed_check("pf-shape", True, pf_shape),
        _timed_check(
            "critical-values", entry.expected_critical_values is not None,
            critical_values,
        ),
        _timed_check("cross-model-series-equality", bool(peers), cross_model),
    )
    return VerificationReport(entry.id, checks)


def cmd_verify(args) -> int:
    _require(args.starts >= 1, "starts must be at least 1")
    _require(args.tol > 0, "tol must be positive")
    if args.all == (args.model is not None):
        raise _UsageError("give exactly one of: catalog id, --all")
    full = load_catalog()
    if args.all:
        targets = full
    else:
        try:
            targets = [find_entry(args.model)]
        except UnknownModelError:
            raise _UsageError(f"unknown model {args.model!r}")

    cache = {}

    def get_series(entry):
        if entry.id not in cache:
            cache[entry.id] = constant_terms_series(entry.polynomial, DEFAULT_ORDER)
        return cache[entry.id]

    reports = []
    for entry in targets:
        peers = [
            e for e in full if e.fano_name == entry.fano_name and e.id != entry.id
        ]
        reports.append(
            _verify_entry(entry, peers, get_series, args.starts, args.seed, args.tol)
        )

    all_pass = all(r.overall == "pass" for r in reports)
    if args.json:
        _emit_json(
            {
                "reports": [
                    {
                        "id": r.model_id,
                        "overall": r.overall,
                        "checks": [
                            {"name": c.name, "status": c.status, "detail": c.detail}
                            for c in r.checks
                        ],
                    }
                    for r in reports
                ],
                "overall": "pass" if all_pass else "fail",
            }
        )
    else:
        for r in reports:
            print(f"{r.model_id}: {r.overall}")
            for c in r.checks:
                note = f"  [{c.detail}]" if c.detail else ""
                print(f"  {c.name}: {c.status} ({c.seconds:.2f}s){note}")
        passed = sum(1 for r in reports if r.overall == "pass")
        print(f"overall: {'pass' if all_pass else 'fail'} ({passed}/{len(reports)})")
    return 0 if all_pass else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="weaklg",
        description="Verification toolkit for torus Laurent models: "
        "constant-terms series, operator recovery, polytope criteria, "
        "critical values.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_model(p):
        p.add_argument("model", nargs="?", help="catalog id (or a model file path)")
        p.add_argument("--file", help="model file path")

    def add_json(p):
        p.add_argument("--json", action="store_true", help="machine-readable output")

    p = sub.add_parser("series", help="print the constant-terms series")
    add_model(p)
    p.add_argument("-n", "--order", type=int, default=DEFAULT_ORDER)
    add_json(p)
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("pf", help="recover and print the annihilating operator")
    add_model(p)
    p.add_argument("-n", "--order", type=int, default=DEFAULT_ORDER)
    p.add_argument("--ord-d", type=int, default=3, help="derivation order")
    p.add_argument(
        "--deg-t", type=int, default=None,
        help="fix the t-degree (default: smallest unambiguous)",
    )
    add_json(p)
    p.set_defaults(func=cmd_pf)

    p = sub.add_parser("polytope", help="report support polytope data")
    add_model(p)
    p.add_argument("-m", "--mmax", type=int, default=DEFAULT_MMAX)
    add_json(p)
    p.set_defaults(func=cmd_polytope)

    p = sub.add_parser("critical", help="locate and cluster critical values")
    add_model(p)
    p.add_argument("--starts", type=int, default=DEFAULT_STARTS)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    add_json(p)
    p.set_defaults(func=cmd_critical)

    p = sub.add_parser("compare", help="compare two models' series")
    p.add_argument("model1")
    p.add_argument("model2")
    p.add_argument("-n", "--order", type=int, default=DEFAULT_ORDER)
    add_json(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("verify", help="run the applicable check suite")
    p.add_argument("model", nargs="?", help="catalog id")
    p.add_argument("--all", action="store_true", help="verify the whole catalog")
    p.add_argument("--starts", type=int, default=DEFAULT_STARTS)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    add_json(p)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CatalogSchemaError as exc:
        print(f"error: bad model file: {exc}", file=sys.stderr)
        return 2
    except (LaurentError, PFError, PolytopeError, SeriesBudgetError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
