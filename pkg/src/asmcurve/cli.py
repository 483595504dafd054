"""``asmcurve`` command line: ``verify`` runs check suites, ``explore`` answers point queries.

Reports are JSON with ``"schema": 1``.  Field elements appear as integer
encodings next to the descriptor of the field they live in.  Exit codes:
0 all checks pass, 1 a check failed, 2 bad curve spec, 3 a budget ran out
(and nothing failed).  A check cut off by a budget is recorded as ``skip``
with the error in its data.
"""
from __future__ import annotations

import argparse
import ast
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, _config
from . import autgroup as ag
from . import fnspace as fs
from . import galois as gl
from .curve import Curve, Place, load_curve, singular_locus
from .errors import AsmError, BudgetExceeded, SpecError, VerificationFailed
from .gf import build_field, embedding_map
from .linpoly import subfield_index_k
from .poly import BiPoly
from .series import ord_of_function

SUITES = ("genus", "canonical", "weierstrass", "autgroup", "exhaustive", "galois-points", "galois-lines")


def _plain(obj):
    """Recursively turn numpy scalars/arrays and tuples into JSON-ready values."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set)):
        items = sorted(obj) if isinstance(obj, set) else obj
        return [_plain(v) for v in items]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


class Runner:
    """Collects check records; a check is a callable returning (passed, data)."""

    def __init__(self, timing: bool = True):
        self.timing = timing
        self.checks = []
        self.budget_hit = False

    def run(self, name, fn):
        t0 = time.perf_counter()
        try:
            res = fn()
            if res is None:
                status, data = "skip", {}
            else:
                ok, data = res
                status = "skip" if ok is None else ("pass" if ok else "fail")
        except VerificationFailed as exc:
            status, data = "fail", {"error": type(exc).__name__, "message": str(exc), **exc.diagnostics}
        except BudgetExceeded as exc:
            status, data = "skip", {"error": type(exc).__name__, "message": str(exc)}
            self.budget_hit = True
        rec = {"name": name, "status": status, "data": _plain(data)}
        if self.timing:
            rec["timing"] = round(time.perf_counter() - t0, 4)
        self.checks.append(rec)
        return rec

    @property
    def failed(self) -> bool:
        return any(c["status"] == "fail" for c in self.checks)


# -- suites -------------------------------------------------------------------


class Context:
    """Lazily computed objects shared between suites."""

    def __init__(self, cv: Curve, args):
        self.cv = cv
        self.args = args
        self._G = None

    @property
    def G(self):
        if self._G is None:
            self._G = ag.closure(ag.build_generators(self.cv))
        return self._G

    def enum_ctx(self):
        return gl.enum_field(self.cv, self.args.enum_degree)


def suite_genus(r: Runner, cx: Context):
    cv = cx.cv
    q, g = cv.q, cv.genus
    r.run("places_at_infinity", lambda: (len(cv.omega1) == q and len(cv.omega2) == q,
                                         {"omega1": cv.betas, "omega2": cv.alphas}))
    r.run("singular_locus", lambda: (singular_locus(cv) == [(1, 0, 0), (0, 1, 0)],
                                     {"points": [[1, 0, 0], [0, 1, 0]]}))

    def dim():
        d, _, _ = fs.space_dimension(cv, q - 2)
        return d == g, {"dim": d, "genus": g}

    r.run("genus_dimension", dim)
    r.run("degree_bookkeeping", lambda: (cv.deg_D == 2 * q and 2 * g - 2 == 2 * q * (q - 2),
                                         {"deg_D": cv.deg_D, "canonical_degree": 2 * g - 2}))


def suite_canonical(r: Runner, cx: Context):
    cv = cx.cv

    def canon():
        b = fs.verify_canonical_basis(cv)
        return True, {"dim": b.dim, **b.checks}

    def lofd():
        b = fs.verify_L_of_D(cv)
        return True, {"dim": b.dim, **b.checks}

    r.run("canonical_basis", canon)
    r.run("complete_linear_system", lofd)
    r.run("embedding_infrastructure", lambda: (True, gl.line_infrastructure_checks(cv)))


def suite_weierstrass(r: Runner, cx: Context):
    cv = cx.cv

    def witnesses():
        data = {}
        ok = True
        for P in cv.omega1 + cv.omega2:
            good, d = fs.q_in_semigroup(cv, P)
            ok &= good
            data[P.label()] = {"witness": d["witness"], "pole_order": d["pole_order"],
                               "regular_elsewhere": d["regular_elsewhere"]}
        return ok, data

    def characterization():
        w = fs.weierstrass_check(cv)
        ok = w["matches"] and w["non_hyperelliptic"]
        return ok, {k: v for k, v in w.items() if k != "verdicts"}

    r.run("witness_functions", witnesses)
    r.run("weierstrass_places", characterization)


def suite_autgroup(r: Runner, cx: Context):
    cv = cx.cv

    def gens():
        g = ag.build_generators(cv)
        return True, {"sigma": len(g.sigmas), "theta": len(g.thetas), "tau": g.tau is not None,
                      "k": g.k, "field": g.ctx.descriptor()}

    r.run("generators", gens)
    r.run("closure_order", lambda: (cx.G.order == ag.expected_order(cv),
                                    {"order": cx.G.order, "expected": ag.expected_order(cv)}))
    r.run("structure", lambda: (True, ag.verify_structure(cx.G, cv)))

    def action():
        a = ag.action_on_omega(cx.G, cv)
        return a["faithful"] and a["fixing_maps_keep_omega1"], a

    r.run("omega_action", action)
    r.run("lift_homomorphism", lambda: (ag.check_lift_homomorphism(cx.G, cv),
                                        {"pairs": len(ag.lift_pairs(cx.G)),
                                         "mode": "all" if cx.G.order**2 <= _config.MAX_LIFT_PAIRS else "generators"}))


def suite_exhaustive(r: Runner, cx: Context):
    cv = cx.cv
    ctx = build_field(cv.p, cx.args.search_degree) if cx.args.search_degree else ag.group_field(cv)

    def run():
        E = ag.exhaustive_stabilizer(cv, ctx)
        same = ag.same_group(cx.G, E)
        return same, {"field": ctx.descriptor(), "order": E.order, "closure_order": cx.G.order, **E.structure}

    r.run("exhaustive_stabilizer", run)


def suite_galois_points(r: Runner, cx: Context):
    cv = cx.cv
    ctx = cx.enum_ctx()
    reports = gl.galois_points(cv, cx.G, ctx)
    summary = gl.galois_point_summary(cv, reports)

    r.run("galois_points", lambda: (summary["count"] == summary["expected"] and summary["all_in_family"]
                                    and summary["all_on_z0"], {"field": ctx.descriptor(), **summary}))

    def generation():
        if not cv.same_polys:
            return None
        H = gl.generated_by_galois_groups(reports)
        ok = gl.galois_group_generation_check(cv, cx.G, reports)
        return ok, {"galois_points": summary["count"], "generated_order": H.order, "group_order": cx.G.order}

    r.run("galois_groups_generate", generation)
    r.run("fiber_transitivity", lambda: (lambda t: (t["ok"], t))(gl.fiber_transitivity_points(cv, reports)))


def suite_galois_lines(r: Runner, cx: Context):
    cv = cx.cv
    ctx = cx.enum_ctx()
    reports = gl.galois_lines(cv, cx.G, ctx)
    summary = gl.galois_line_summary(cv, reports, ctx)

    def verdict():
        data = {"field": ctx.descriptor(), "k": subfield_index_k(cv.spec.L1, cv.spec.L2), **summary}
        if summary["matches"] is None:
            data["note"] = "no classification to compare against (k = e); enumeration is informational"
            return None, data
        return summary["matches"], data

    r.run("galois_lines", verdict)

    def chord():
        # the degree argument needs k < e (or L1 != L2); for k = e the chord is reported only
        H1, H2 = gl.chord_line(cv)
        emb_line = [int(v) for v in embedding_map(cv.ctx, ctx)[H1 + H2]]
        key = gl.line_key(ctx, emb_line[:4], emb_line[4:])
        rep = next(x for x in reports if tuple(x.H1 + x.H2) == key)
        data = {"line": list(key), "deg_projection": rep.deg_projection, "group_order": rep.group_order,
                "is_galois": rep.is_galois}
        if summary["matches"] is None:
            return None, data
        return rep.deg_projection == 2 * cv.q - 2 and not rep.is_galois, data

    r.run("chord_rejected", chord)
    r.run("fiber_transitivity", lambda: (lambda t: (t["ok"], t))(gl.fiber_transitivity_lines(cv, reports)))


SUITE_FUNCS = {
    "genus": suite_genus,
    "canonical": suite_canonical,
    "weierstrass": suite_weierstrass,
    "autgroup": suite_autgroup,
    "exhaustive": suite_exhaustive,
    "galois-points": suite_galois_points,
    "galois-lines": suite_galois_lines,
}


def _curve_echo(cv: Curve) -> dict:
    return {**cv.spec.to_dict(), "q": cv.q, "genus": cv.genus,
            "base_field": cv.spec.base_ctx.descriptor(), "work_field": cv.ctx.descriptor()}


def _report(cv, command, extra, checks):
    return {"schema": 1, "tool": "asmcurve", "version": __version__, "command": command,
            "curve": _curve_echo(cv), **extra, "checks": checks}


def _emit(report, out):
    text = json.dumps(report, indent=2) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_verify(args) -> int:
    cv = load_curve(args.spec)
    chosen = args.suite or ["all"]
    suites = SUITES if "all" in chosen else tuple(dict.fromkeys(chosen))
    r = Runner(timing=not args.no_timing)
    cx = Context(cv, args)
    for s in suites:
        try:
            SUITE_FUNCS[s](r, cx)
        except BudgetExceeded as exc:  # raised while preparing a suite's shared data
            r.run(s, lambda exc=exc: _raise(exc))
    _emit(_report(cv, "verify", {"suites": list(suites)}, r.checks), args.out)
    if r.failed:
        return 1
    return 3 if r.budget_hit else 0


def _raise(exc):
    raise exc


# -- explore ------------------------------------------------------------------


def parse_function(text: str, cv: Curve, bindings: dict):
    """Rational function in x, y from text such as ``y-b`` or ``1/(x^2*y + 1)``.

    Returns ``(num, den)`` as polynomials.  ``a`` and ``b`` stand for the
    coordinates of the place being queried; integer literals are read in the
    prime field; ``^`` and ``**`` both mean power.
    """
    ctx = cv.ctx
    try:
        # '^' binds looser than '*' in Python, so read it as '**' up front
        tree = ast.parse(text.strip().replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise SpecError(f"cannot parse function {text!r}") from exc
    one = BiPoly.const(ctx, 1)

    def const(n):
        return BiPoly.const(ctx, ctx.from_int(n))

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.BinOp):
            op = type(node.op)
            if op is ast.Pow:
                n = node.right
                if isinstance(n, ast.UnaryOp) and isinstance(n.op, ast.USub) and isinstance(n.operand, ast.Constant):
                    k = -n.operand.value
                elif isinstance(n, ast.Constant):
                    k = n.value
                else:
                    raise SpecError("exponents must be integer literals")
                if not isinstance(k, int):
                    raise SpecError("exponents must be integer literals")
                u, v = ev(node.left)
                return (u ** k, v ** k) if k >= 0 else (v ** -k, u ** -k)
            (u1, v1), (u2, v2) = ev(node.left), ev(node.right)
            if op is ast.Add:
                return u1 * v2 + u2 * v1, v1 * v2
            if op is ast.Sub:
                return u1 * v2 - u2 * v1, v1 * v2
            if op is ast.Mult:
                return u1 * u2, v1 * v2
            if op is ast.Div:
                if cv.reduce(u2).is_zero():
                    raise SpecError(f"division by zero in {text!r}")
                return u1 * v2, v1 * u2
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            u, v = ev(node.operand)
            return -u, v
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return const(node.value), one
        if isinstance(node, ast.Name):
            if node.id == "x":
                return BiPoly.x(ctx), one
            if node.id == "y":
                return BiPoly.y(ctx), one
            if node.id in bindings:
                return BiPoly.const(ctx, bindings[node.id]), one
            raise SpecError(f"name {node.id!r} is not bound at this place")
        raise SpecError(f"unsupported syntax in {text!r}")

    return ev(tree)


def parse_places(text: str, cv: Curve) -> list:
    """``omega1:<enc>``, ``omega1:b`` (every beta), ``omega2:<enc>``, ``omega2:a`` or ``affine:<a>,<b>``."""
    try:
        kind, _, rest = text.partition(":")
        if kind == "omega1":
            places = cv.omega1 if rest == "b" else [Place("omega1", (int(rest),))]
        elif kind == "omega2":
            places = cv.omega2 if rest == "a" else [Place("omega2", (int(rest),))]
        elif kind == "affine":
            a, b = (int(v) for v in rest.split(","))
            places = [Place("affine", (a, b))]
        else:
            raise ValueError(kind)
    except ValueError as exc:
        raise SpecError(f"bad place {text!r}") from exc
    for P in places:
        if not cv.is_place(P):
            raise SpecError(f"{P.label()} is not a place of the curve over {cv.ctx}")
    return places


def _bindings(P: Place) -> dict:
    if P.kind == "omega1":
        return {"b": P.coords[0]}
    if P.kind == "omega2":
        return {"a": P.coords[0]}
    return {"a": P.coords[0], "b": P.coords[1]}


def cmd_explore(args) -> int:
    cv = load_curve(args.spec)
    results = []
    needs_place = args.ord or args.gaps or args.series
    if needs_place and not args.at:
        raise SpecError("--ord, --gaps and --series need --at")
    places = parse_places(args.at, cv) if args.at else []
    if args.ord:
        opts = dict(kv.split("=", 1) for kv in _split_ord(args.ord))
        power = int(opts.get("i", 1))
        for P in places:
            num, den = parse_function(opts["f"], cv, _bindings(P))
            order = power * (ord_of_function(cv, num, P) - ord_of_function(cv, den, P))
            results.append({"query": "ord", "place": P.label(), "f": opts["f"], "i": power, "ord": order})
    if args.gaps:
        for P in places:
            rep = fs.order_sequence(cv, P)
            results.append({"query": "gaps", "place": P.label(), "orders": rep.orders,
                            "canonical_orders": rep.canonical_orders, "gaps": rep.gaps,
                            "nongaps_upto_2g": rep.nongaps, "q_is_nongap": cv.q in rep.nongaps})
    if args.series:
        for P in places:
            ch = cv.chart(P, args.series)
            results.append({"query": "series", "place": P.label(), "parameter": ch.parameter,
                            "x": {"val": ch.x.val, "coeffs": ch.x.coeffs[: args.series].tolist()},
                            "y": {"val": ch.y.val, "coeffs": ch.y.coeffs[: args.series].tolist()},
                            "prec": args.series})
    if args.list_group:
        G = ag.closure(ag.build_generators(cv))
        results.append({"query": "group", "order": G.order, "field": G.ctx.descriptor(),
                        "elements": [M.to_list() for M in G.sorted()]})
    _emit(_plain(_report(cv, "explore", {}, []) | {"results": results}), args.out)
    return 0


def _split_ord(text: str) -> list:
    # "f=x^2+y,i=2": split on the comma that starts a new key
    parts, cur = [], ""
    for chunk in text.split(","):
        if "=" in chunk and cur:
            parts.append(cur)
            cur = chunk
        else:
            cur = f"{cur},{chunk}" if cur else chunk
    parts.append(cur)
    if not parts or not parts[0].startswith("f="):
        raise SpecError("--ord expects f=<expression>[,i=<power>]")
    return parts


# -- entry point ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="asmcurve", description="Exact checks on curves L1(x) L2(y) + c = 0.")
    ap.add_argument("--version", action="version", version=f"asmcurve {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def budgets(p):
        p.add_argument("--max-field-bits", type=int, default=_config.MAX_FIELD_BITS)
        p.add_argument("--max-closure", type=int, default=_config.MAX_CLOSURE)
        p.add_argument("--max-precision-doublings", type=int, default=_config.MAX_PRECISION_DOUBLINGS)
        p.add_argument("--out", help="write the JSON report here instead of stdout")

    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("spec")
    v.add_argument("--suite", choices=SUITES + ("all",), action="append",
                   help="repeat to run several suites (default: all)")
    v.add_argument("--no-timing", action="store_true", help="omit timings (byte-identical reruns)")
    v.add_argument("--enum-degree", type=int, help="degree over F_p of the enumeration field for Galois searches")
    v.add_argument("--search-degree", type=int, help="degree over F_p of the field for the exhaustive search")
    budgets(v)

    e = sub.add_parser("explore", help="orders, gaps, expansions and group listings")
    e.add_argument("spec")
    e.add_argument("--ord", help="f=<expression>[,i=<power>]")
    e.add_argument("--gaps", action="store_true")
    e.add_argument("--series", type=int, nargs="?", const=8, help="expansion of x and y to this precision")
    e.add_argument("--list-group", action="store_true")
    e.add_argument("--at", help="omega1:<enc>|omega1:b|omega2:<enc>|omega2:a|affine:<a>,<b>")
    budgets(e)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    _config.MAX_FIELD_BITS = args.max_field_bits
    _config.MAX_CLOSURE = args.max_closure
    _config.MAX_PRECISION_DOUBLINGS = args.max_precision_doublings
    try:
        return cmd_verify(args) if args.command == "verify" else cmd_explore(args)
    except BudgetExceeded as exc:  # before SpecError: FieldTooLarge is both
        print(f"budget exceeded: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except SpecError as exc:
        print(f"invalid input: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except VerificationFailed as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return 1
    except AsmError as exc:  # e.g. the zero function or a non-place in an explore query
        print(f"invalid input: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
