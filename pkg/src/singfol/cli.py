"""Command-line front end.

Exit codes: 0 for EXISTS/true, 2 for OBSTRUCTED/false, 3 for UNKNOWN,
64 for usage errors and 65 for invalid input data.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from . import __version__
from .bundles import InvariantViolation, solve_modification
from .catalog import EXPECTED, entries, load_manifold
from .existence import (
    DEFAULT_BOUND,
    Status,
    Verdict,
    achiral_exists,
    enumerate_complex_classes,
    find_splittings,
    foliation_exists,
    Splitting,
    infinite_splittings_witness,
)
from .geometry import (
    Box,
    GeometryError,
    GridField,
    expression_field,
    orthogonal_j_from_frame,
    random_smooth_data,
    verify_domega,
)
from .lattice import CohClass, DomainError, LatticeError, ManifoldInvariants
from .singularities import (
    MENU,
    BivarPoly,
    FoliationPlan,
    PolynomialError,
    hopf_degree,
    hopf_degree_oracle,
    ledger_check,
    parse_model,
    reduce,
    synthesize_plan,
    tangent_field,
)
from .surfaces import SurfaceData, adjunct_surfaces, kronheimer_bound, leaf_check, transversal_check

SCHEMA = 1
EXIT = {Status.EXISTS: 0, Status.OBSTRUCTED: 2, Status.UNKNOWN: 3, True: 0, False: 2}
EX_USAGE, EX_DATAERR = 64, 65


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class Report:
    command: str
    argv: list[str]
    inputs: dict
    result: Any
    citations: list[str] = field(default_factory=list)
    seed: int | None = None
    exit_code: int = 0
    text: str = ""

    def to_dict(self) -> dict:
        return {"schema": SCHEMA, "tool": "singfol", "version": __version__, "command": self.command,
                "argv": self.argv, "inputs": self.inputs, "result": self.result,
                "citations": self.citations, "seed": self.seed, "exit_code": self.exit_code}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _manifold_inputs(inv: ManifoldInvariants) -> dict:
    return {"manifold": inv.name, "b1": inv.b1, "Q": [list(r) for r in inv.form.matrix],
            "chi": inv.chi, "sigma": inv.sigma, "p1": inv.p1}


def _cls(inv: ManifoldInvariants, text: str | None, label: str) -> CohClass:
    if text is None:
        raise UsageError(f"--{label} is required")
    return CohClass.parse(text, inv.b2)


def _verdict_report(cmd, argv, inputs, v: Verdict, seed=None) -> Report:
    w = v.to_dict()
    lines = [f"{v.status.value}: {v.reason}", f"  [{v.citation}]"]
    if isinstance(v.witness, FoliationPlan):
        p = v.witness
        lines.append(f"  (m, n) = ({p.m}, {p.n}); positive: {', '.join(map(str, p.positive)) or '-'}; "
                     f"negative: {', '.join(map(str, p.negative)) or '-'}")
    return Report(cmd, argv, inputs, w, [v.citation], seed, EXIT[v.status], "\n".join(lines))


def _models(text: str | None, sign: str):
    if text is None:
        return None
    if text.strip() == "":
        return []
    return [parse_model(t, sign) for t in _split_top(text)]


def _split_top(text: str) -> list[str]:
    """Split on ';' (or on ',' outside parentheses)."""
    if ";" in text:
        return [t for t in (s.strip() for s in text.split(";")) if t]
    out, depth, cur = [], 0, ""
    for ch in text:
        depth += ch == "("
        depth -= ch == ")"
        if ch == "," and depth == 0:
            out.append(cur)
            cur = ""
        else:
            cur += ch
    out.append(cur)
    return [t.strip() for t in out if t.strip()]


# -- subcommands -------------------------------------------------------------------

def cmd_catalog(a, argv) -> Report:
    rows = []
    ok = True
    for e in entries():
        inv = e.invariants
        exp = EXPECTED.get(e.name)
        match = exp == (inv.chi, inv.sigma, inv.p1) if exp else None
        ok &= match is not False
        rows.append({"name": e.name, "b1": inv.b1, "b2": inv.b2, "chi": inv.chi, "sigma": inv.sigma,
                     "p1": inv.p1, "parity": inv.form.parity, "definiteness": inv.form.definiteness,
                     "self_test": match, "provenance": e.provenance})
    text = "\n".join(f"{r['name']:8s} b1={r['b1']} b2={r['b2']:2d} chi={r['chi']:3d} sigma={r['sigma']:4d} "
                     f"p1={r['p1']:4d} {r['parity']:4s} {r['definiteness']:10s} self-test="
                     f"{'ok' if r['self_test'] else 'FAIL'}" for r in rows)
    return Report("catalog", argv, {}, {"entries": rows, "self_test": ok}, [], None, EXIT[ok], text)


def cmd_classes(a, argv) -> Report:
    inv = load_manifold(a.manifold)
    cs = enumerate_complex_classes(inv, a.bound)
    res = {"bound": a.bound, "complex_classes": [list(c.coords) for c in cs]}
    text = f"{len(cs)} complex classes of {inv.name} with |coords| <= {a.bound}"
    if cs:
        text += ":\n" + "\n".join(f"  {c}" for c in cs)
    return Report("classes", argv, _manifold_inputs(inv), res,
                  ["complex class: c = w2 mod 2 and p1 = c^2 - 2 chi"], None, EXIT[bool(cs)], text)


def cmd_splittings(a, argv) -> Report:
    inv = load_manifold(a.manifold)
    c = _cls(inv, a.c, "c")
    sps = find_splittings(inv, c, a.bound)
    wit = infinite_splittings_witness(inv, c)
    res = {"c": list(c.coords), "bound": a.bound, "splittings": [s.to_dict() for s in sps],
           "infinite_witness": wit.to_dict() if wit else None}
    text = "\n".join([f"{len(sps)} splittings of c = {c} with chi - tau.nu >= 0 (|tau| <= {a.bound})"]
                     + [f"  tau={s.tau} nu={s.nu} n={s.n}" for s in sps])
    if wit:
        text += f"\ninfinitely many: tau = c - k*{wit.alpha}, nu = k*{wit.alpha} for all k >= {wit.k0}"
    return Report("splittings", argv, _manifold_inputs(inv), res,
                  ["existence theorem for singular foliations"], None, EXIT[bool(sps)], text)


def cmd_exists(a, argv) -> Report:
    inv = load_manifold(a.manifold)
    tau, nu = _cls(inv, a.tau, "tau"), _cls(inv, a.nu, "nu")
    v = foliation_exists(inv, tau, nu, _models(a.plan, "positive"))
    inputs = {**_manifold_inputs(inv), "tau": list(tau.coords), "nu": list(nu.coords), "plan": a.plan}
    return _verdict_report("exists", argv, inputs, v)


def cmd_achiral(a, argv) -> Report:
    inv = load_manifold(a.manifold)
    tau, nu = _cls(inv, a.tau, "tau"), _cls(inv, a.nu, "nu")
    v = achiral_exists(inv, tau, nu, _models(a.pos, "positive"), _models(a.neg, "negative"))
    inputs = {**_manifold_inputs(inv), "tau": list(tau.coords), "nu": list(nu.coords), "pos": a.pos, "neg": a.neg}
    return _verdict_report("achiral", argv, inputs, v)


def _surface(inv, a) -> SurfaceData:
    return SurfaceData(_cls(inv, a.cls, "class"), a.genus)


def cmd_surface(a, argv) -> Report:
    inv = load_manifold(a.manifold)
    S = _surface(inv, a)
    tau, nu = _cls(inv, a.tau, "tau"), _cls(inv, a.nu, "nu")
    sp = Splitting(tau, nu, 0, inv.chi - inv.form.pair(tau, nu))
    check = leaf_check if a.command == "leaf" else transversal_check
    v = check(inv, sp, S)
    inputs = {**_manifold_inputs(inv), "tau": list(tau.coords), "nu": list(nu.coords), "surface": S.to_dict()}
    return _verdict_report(a.command, argv, inputs, v)


def cmd_adjunct(a, argv) -> Report:
    inv = load_manifold(a.manifold)
    S = _surface(inv, a)
    c = _cls(inv, a.c, "c")
    v1, v2 = adjunct_surfaces(inv, c, S)
    inputs = {**_manifold_inputs(inv), "c": list(c.coords), "surface": S.to_dict()}
    res = {"F1_transversal": v1.to_dict(), "F2_leaf": v2.to_dict()}
    text = f"F1 (S transverse): {v1.status.value}: {v1.reason}\nF2 (S a leaf):     {v2.status.value}: {v2.reason}"
    code = 0 if v1.exists or v2.exists else 3
    return Report("adjunct", argv, inputs, res, [v1.citation, v2.citation], None, code, text)


def cmd_degree(a, argv) -> Report:
    f = BivarPoly.parse(a.polynomial)
    g = tangent_field(f)
    h = reduce(*g)
    deg = hopf_degree(f)
    res = {"polynomial": str(f), "tangent_field": [str(g[0]), str(g[1])],
           "reduced_field": [str(h[0]), str(h[1])], "hopf_degree": deg}
    if a.oracle:
        res["oracle"] = hopf_degree_oracle(f, radius=a.radius, trials=a.trials, seed=a.seed)
    text = f"Hopf degree of levels of {f}: {deg}"
    if a.oracle:
        text += f" (oracle count: {res['oracle']})"
    ok = not a.oracle or res["oracle"] == deg
    return Report("degree", argv, {"polynomial": a.polynomial}, res, ["Hopf degree = local intersection multiplicity"],
                  a.seed if a.oracle else None, EXIT[ok], text)


def cmd_ledger(a, argv) -> Report:
    inv = load_manifold(a.manifold)
    tau, nu = _cls(inv, a.tau, "tau"), _cls(inv, a.nu, "nu")
    try:
        m, n = solve_modification(inv, tau, nu)
    except DomainError:
        m, n = 0, inv.chi - inv.form.pair(tau, nu)
    if a.pos is None and a.neg is None:
        rng = random.Random(a.seed)
        pos = synthesize_plan(n, list(MENU), rng=rng) if n >= 0 else []
        neg = synthesize_plan(m, list(MENU), "negative", rng) if m > 0 else []
    else:
        pos = _models(a.pos, "positive") or []
        neg = _models(a.neg, "negative") or []
    plan = FoliationPlan(tau.coords, nu.coords, m, n, tuple(pos), tuple(neg))
    ok = ledger_check(inv, plan)
    inputs = {**_manifold_inputs(inv), "tau": list(tau.coords), "nu": list(nu.coords), "pos": a.pos, "neg": a.neg}
    res = {"plan": plan.to_dict(), "holds": ok, "chi": inv.chi, "tau_nu": inv.form.pair(tau, nu)}
    text = (f"{'holds' if ok else 'FAILS'}: chi = {inv.chi}, tau.nu = {inv.form.pair(tau, nu)}, "
            f"positive degrees {sum(s.degree for s in pos)}, negative degrees {sum(s.degree for s in neg)}")
    return Report("ledger", argv, inputs, res, ["index formula chi(M) = sum deg p_i + tau.nu"], a.seed,
                  EXIT[ok], text)


def cmd_genus_bound(a, argv) -> Report:
    inv = load_manifold(a.manifold)
    eps = _cls(inv, a.eps, "eps")
    cls = _cls(inv, a.cls, "class")
    b = kronheimer_bound(inv.form, eps, cls)
    res = b.to_dict()
    text = f"genus >= {b.genus} ({b.label})" + "".join(f"\n  warning: {w}" for w in b.warnings)
    code = 0
    if a.genus is not None:
        res["genus"] = a.genus
        res["satisfies_bound"] = a.genus >= b.genus
        code = EXIT[a.genus >= b.genus]
        text += f"\ngenus {a.genus} {'satisfies' if a.genus >= b.genus else 'violates'} the bound"
    inputs = {**_manifold_inputs(inv), "eps": list(eps.coords), "class": list(cls.coords), "genus": a.genus}
    return Report("genus-bound", argv, inputs, res, ["chi(S) + S.S <= eps.S"], None, code, text)


def _fields_from_file(path: str):
    doc = json.loads(open(path).read())

    def load(key, shape):
        v = doc[key]
        if isinstance(v, str):
            return GridField.load(v, shape)
        return expression_field(v)
    g = load("g", (4, 4))
    box = Box(tuple(doc.get("lo", (-1.0,) * 4)), tuple(doc.get("hi", (1.0,) * 4)))
    if isinstance(doc["g"], str):
        box = g.box()
    return g, load("x", (4,)), load("z", (4,)), box


def _grid_nodes(G: GridField, rng, n: int, margin: float) -> np.ndarray:
    k = int(np.ceil(margin / G.spacing - 1e-9))
    counts = np.asarray(G.data.shape[:4])
    if np.any(counts - 2 * k < 1):
        raise GeometryError(f"grid too small for stencil margin {margin:g}")
    idx = rng.integers(k, counts - k, size=(n, 4))
    return G.origin + G.spacing * idx


def cmd_verify_domega(a, argv) -> Report:
    rng = np.random.default_rng(a.seed)
    if a.fields:
        g, x, z, box = _fields_from_file(a.fields)
    else:
        d = random_smooth_data(a.seed)
        g, x, z, box = d.g, d.x, d.z, d.box
    J = orthogonal_j_from_frame(g, a.j_seed)
    if isinstance(g, GridField):
        # grid data is only known at nodes: steps are multiples of the spacing
        s = g.spacing
        hs = [2 * s, s]
        pts = _grid_nodes(g, rng, a.points, margin=2 * hs[0])
    else:
        hs = [a.h, a.h / 2, a.h / 4]
        pts = box.sample(rng, a.points)
    maxres = []
    for h in hs:
        maxres.append(max(verify_domega(g, J, x, z, p, h, box).residual for p in pts))
    ratios = [maxres[i] / maxres[i + 1] if maxres[i + 1] > 0 else float("inf") for i in range(len(hs) - 1)]
    ok = maxres[0] <= a.tol
    res = {"h": hs, "max_residual": maxres, "ratios": ratios, "tolerance": a.tol, "passed": ok}
    text = "\n".join(f"h={h:.3g}  max residual {r:.3e}" for h, r in zip(hs, maxres))
    text += f"\nhalving ratios {', '.join(f'{r:.3f}' for r in ratios)}; {'PASS' if ok else 'FAIL'} (tol {a.tol:g})"
    inputs = {"h": hs[0], "points": a.points, "fields": a.fields, "j_seed": a.j_seed}
    return Report("verify-domega", argv, inputs, res, ["d omega(x, Jx, z) identity"], a.seed, EXIT[ok], text)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="singfol", description="Singular foliations on closed 4-manifolds")
    p.add_argument("--version", action="version", version=f"singfol {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, seed=False):
        sp.add_argument("--json", action="store_true", help="emit the JSON report")
        if seed:
            sp.add_argument("--seed", type=int, default=0)
        return sp

    common(sub.add_parser("catalog", help="list catalog manifolds and run the self-test"))

    sp = common(sub.add_parser("classes", help="enumerate complex classes"))
    sp.add_argument("manifold")
    sp.add_argument("--bound", type=int, default=DEFAULT_BOUND)

    sp = common(sub.add_parser("splittings", help="splittings c = tau + nu with chi - tau.nu >= 0"))
    sp.add_argument("manifold")
    sp.add_argument("--c", required=True)
    sp.add_argument("--bound", type=int, default=DEFAULT_BOUND)

    sp = common(sub.add_parser("exists", help="singular foliation existence"))
    sp.add_argument("manifold")
    sp.add_argument("--tau", required=True)
    sp.add_argument("--nu", required=True)
    sp.add_argument("--plan", help="singularities, e.g. 'cusp,pencil' or 'z1^3 - z2^2; pencil'")

    sp = common(sub.add_parser("achiral", help="achiral singular foliation existence"))
    sp.add_argument("manifold")
    sp.add_argument("--tau", required=True)
    sp.add_argument("--nu", required=True)
    sp.add_argument("--pos")
    sp.add_argument("--neg")

    for name in ("leaf", "transversal"):
        sp = common(sub.add_parser(name, help=f"closed {name} conditions"))
        sp.add_argument("manifold")
        sp.add_argument("--tau", required=True)
        sp.add_argument("--nu", required=True)
        sp.add_argument("--class", dest="cls", required=True)
        sp.add_argument("--genus", type=int, required=True)

    sp = common(sub.add_parser("adjunct", help="adjunct surface verdicts"))
    sp.add_argument("manifold")
    sp.add_argument("--c", required=True)
    sp.add_argument("--class", dest="cls", required=True)
    sp.add_argument("--genus", type=int, required=True)

    sp = common(sub.add_parser("degree", help="Hopf degree of a polynomial singularity"), seed=True)
    sp.add_argument("polynomial")
    sp.add_argument("--oracle", action="store_true", help="cross-check by root counting")
    sp.add_argument("--radius", type=float, default=0.5)
    sp.add_argument("--trials", type=int, default=7)

    sp = common(sub.add_parser("ledger", help="check the singularity index identity"), seed=True)
    sp.add_argument("manifold")
    sp.add_argument("--tau", required=True)
    sp.add_argument("--nu", required=True)
    sp.add_argument("--pos")
    sp.add_argument("--neg")

    sp = common(sub.add_parser("genus-bound", help="genus lower bound from chi(S) + S.S <= eps.S"))
    sp.add_argument("manifold")
    sp.add_argument("--eps", required=True)
    sp.add_argument("--class", dest="cls", required=True)
    sp.add_argument("--genus", type=int, default=None, help="also test this genus against the bound")

    sp = common(sub.add_parser("verify-domega", help="finite-difference check of the d omega identity"), seed=True)
    sp.add_argument("--h", type=float, default=1e-3)
    sp.add_argument("--points", type=int, default=100)
    sp.add_argument("--tol", type=float, default=1e-4)
    sp.add_argument("--j-seed", type=int, default=0)
    sp.add_argument("--fields", help="JSON file with g, x, z as expressions or grid file paths")
    return p


COMMANDS = {
    "catalog": cmd_catalog, "classes": cmd_classes, "splittings": cmd_splittings, "exists": cmd_exists,
    "achiral": cmd_achiral, "leaf": cmd_surface, "transversal": cmd_surface, "adjunct": cmd_adjunct,
    "degree": cmd_degree, "ledger": cmd_ledger, "genus-bound": cmd_genus_bound,
    "verify-domega": cmd_verify_domega,
}


def run(argv: Sequence[str]) -> Report:
    """Parse and execute; raises UsageError or input errors."""
    argv = list(argv)
    a = build_parser().parse_args(argv)
    return COMMANDS[a.command](a, argv)


def rerun(report_json: str) -> Report:
    return run(json.loads(report_json)["argv"])


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        rep = run(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EX_USAGE
    except (LatticeError, DomainError, PolynomialError, GeometryError, InvariantViolation, OSError,
            json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EX_DATAERR
    print(rep.to_json() if "--json" in argv else rep.text)
    return rep.exit_code


if __name__ == "__main__":
    sys.exit(main())
