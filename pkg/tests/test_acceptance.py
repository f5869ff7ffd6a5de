"""Acceptance criteria, one test each.

Every test prints a single ``criterion N: PASS|FAIL`` line; the lines are
repeated in the pytest terminal summary. Run directly with
``python tests/test_acceptance.py`` to get only those lines.
"""

import random

import numpy as np

from singfol.bundles import BundleClasses, dold_whitney_equal, modify, solve_modification, trivial_bundle
from singfol.catalog import entries, lookup
from singfol.existence import (
    achiral_exists,
    enumerate_complex_classes,
    find_splittings,
    infinite_splittings_witness,
    is_complex_class,
)
from singfol.geometry import (
    Box,
    OrthogonalJ,
    flat_metric,
    linear_field,
    orthogonal_j_from_frame,
    random_smooth_data,
    verify_domega,
)
from singfol.lattice import CohClass
from singfol.singularities import (
    MENU,
    FoliationPlan,
    hopf_degree,
    hopf_degree_oracle,
    ledger_check,
    synthesize_plan,
    total_degree,
)
from singfol.surfaces import SurfaceData, adjunct_surfaces, jhol_representable, leaf_check, transversal_check

RESULTS: dict[int, tuple[bool, str]] = {}


def report(n: int, ok: bool, detail: str = "") -> None:
    RESULTS[n] = (ok, detail)
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'}{'  ' + detail if detail else ''}")
    assert ok, detail


def C(*xs):
    return CohClass(tuple(xs))


def catalog():
    return [e.invariants for e in entries()]


def random_characteristic(inv, bound, rng):
    """Uniform class in the box with the parity of w2."""
    w2 = inv.form.w2
    out = []
    for bit in w2:
        choices = [v for v in range(-bound, bound + 1) if v % 2 == bit]
        out.append(rng.choice(choices))
    return CohClass(tuple(out))


def sparse_class(rank, rng, support=3, bound=2):
    """At most ``support`` nonzero coordinates, so that large forms still give n >= 0 often."""
    v = [0] * rank
    for i in rng.sample(range(rank), min(support, rank)):
        v[i] = rng.randint(-bound, bound)
    return CohClass(tuple(v))


def test_criterion_1_surgery_arithmetic():
    T = trivial_bundle(0)
    bad = [(m, n) for m in range(-5, 6) for n in range(-5, 6)
           if (modify(T, m, n).e, modify(T, m, n).p1) != (m + n, 2 * m - 2 * n)]
    E = modify(T, 1, 1)
    sphere = dold_whitney_equal(E, BundleClasses((), 2, 0))
    report(1, not bad and sphere, f"{121 - len(bad)}/121 grid points; S4 (1,1) tangent match {sphere}")


def test_criterion_2_kirby_formulas():
    rng = random.Random(2)
    checked = failures = 0
    for inv in catalog():
        zero_ok = inv.form.rank == 0 or all(b == 0 for b in inv.form.w2)
        cases = [(inv.zero(), inv.zero())] if zero_ok else []
        cases += [(c, inv.zero()) for c in enumerate_complex_classes(inv, 3 if inv.b2 <= 4 else 1)]
        for _ in range(200):
            c = random_characteristic(inv, 3, rng)
            tau = CohClass(tuple(rng.randint(-3, 3) for _ in range(inv.b2)))
            cases.append((tau, c - tau))
        for tau, nu in cases:
            m, n = solve_modification(inv, tau, nu)  # raises on non-integral m, n
            ok = isinstance(m, int) and isinstance(n, int) and m + n == inv.chi - inv.form.pair(tau, nu)
            if is_complex_class(inv, tau + nu):
                ok = ok and m == 0
            checked += 1
            failures += not ok
    report(2, failures == 0, f"{checked} splittings over {len(catalog())} catalog manifolds, {failures} failures")


def test_criterion_3_hopf_degrees():
    cases = [("z1^3 - z2^2", 2)]
    for p in range(1, 5):
        for q in range(1, 5):
            cases.append((f"z1^{p}*z2^{q}", 1))
            cases.append((f"z1^{p + 1} + z2^{q + 1}", p * q))
    bad = []
    for text, want in cases:
        exact = hopf_degree(text)
        oracle = hopf_degree_oracle(text, radius=0.5, trials=7, w_size=1e-3)
        if exact != want or oracle != want:
            bad.append((text, want, exact, oracle))
    report(3, not bad, f"{len(cases) - len(bad)}/{len(cases)} exact and oracle agree" + (f"; {bad}" if bad else ""))


def test_criterion_4_achiral_verdicts():
    got = {}
    for name in ["S4", "S3xS1"] + [f"{k}S3xS1" for k in range(2, 6)]:
        inv = lookup(name)
        v = achiral_exists(inv, inv.zero(), inv.zero())
        mn = solve_modification(inv, inv.zero(), inv.zero())
        got[name] = (v.status.value, mn, v.details.get("1-b1+b2"))
    ok = got["S4"][:2] == ("EXISTS", (1, 1)) and got["S3xS1"][:2] == ("EXISTS", (0, 0))
    for k in range(2, 6):
        ok = ok and got[f"{k}S3xS1"] == ("OBSTRUCTED", (1 - k, 1 - k), 1 - k)
    report(4, ok, "; ".join(f"{k}: {v[0]} {v[1]}" for k, v in got.items()))


def test_criterion_5_adjunct_surfaces():
    cp2, c = lookup("CP2"), C(3)
    line, conic, torus_h = SurfaceData(C(1), 0), SurfaceData(C(2), 0), SurfaceData(C(1), 1)
    jh = (jhol_representable(cp2, c, line), jhol_representable(cp2, c, conic), jhol_representable(cp2, c, torus_h))
    line_v = [v.status.value for v in adjunct_surfaces(cp2, c, line)]
    conic_v = [v.status.value for v in adjunct_surfaces(cp2, c, conic)]
    ok = jh == (True, True, False) and line_v == ["EXISTS", "EXISTS"] and conic_v == ["EXISTS", "UNKNOWN"]
    report(5, ok, f"jhol {jh}; line {line_v}; conic {conic_v}")


def test_criterion_6_trivial_torus():
    checked, bad = [], []
    for inv in catalog():
        cs = enumerate_complex_classes(inv, 3 if inv.b2 <= 4 else 1)
        if not cs:
            continue
        T = SurfaceData(inv.zero(), 1)
        sp = find_splittings(inv, cs[0], 1 if inv.b2 <= 4 else 0)[0]
        leaf, trans = leaf_check(inv, sp, T).status.value, transversal_check(inv, sp, T).status.value
        checked.append(inv.name)
        if (leaf, trans) != ("EXISTS", "EXISTS"):
            bad.append((inv.name, leaf, trans))
    report(6, bool(checked) and not bad, f"checked {checked}" + (f"; failures {bad}" if bad else ""))


def test_criterion_7_ledger_identity():
    rng = random.Random(7)
    total = bad = 0
    for inv in catalog():
        cs = enumerate_complex_classes(inv, 3 if inv.b2 <= 4 else 1)
        count = 0
        attempts = 0
        while count < 100 and attempts < 5000:
            attempts += 1
            if cs:
                c = rng.choice(cs)
                tau = sparse_class(inv.b2, rng)
                nu = c - tau
                n = inv.chi - inv.form.pair(tau, nu)
                if n < 0:
                    continue
                plan = FoliationPlan(tau.coords, nu.coords, 0, n,
                                     tuple(synthesize_plan(n, list(MENU), rng=rng)))
            else:
                c = random_characteristic(inv, 3, rng)
                tau = CohClass(tuple(rng.randint(-3, 3) for _ in range(inv.b2)))
                nu = c - tau
                m, n = solve_modification(inv, tau, nu)
                if m < 0 or n < 0:
                    continue
                plan = FoliationPlan(tau.coords, nu.coords, m, n,
                                     tuple(synthesize_plan(n, list(MENU), rng=rng)),
                                     tuple(synthesize_plan(m, list(MENU), sign="negative", rng=rng)))
            tn = inv.form.pair(CohClass(plan.tau), CohClass(plan.nu))
            degs = total_degree(plan.positive) + total_degree(plan.negative)
            ok = ledger_check(inv, plan) and inv.chi == degs + tn
            bad += not ok
            count += 1
        total += count
        if count < 100:
            bad += 1
    report(7, bad == 0, f"{total} plans over {len(catalog())} catalog manifolds, {bad} failures")


def test_criterion_8_domega():
    rng = np.random.default_rng(8)
    J = OrthogonalJ(flat_metric)
    x = linear_field(rng.uniform(-1, 1, 4), rng.uniform(-1, 1, (4, 4)))
    z = linear_field(rng.uniform(-1, 1, 4), rng.uniform(-1, 1, (4, 4)))
    flat = max(verify_domega(flat_metric, J, x, z, p).residual for p in Box().sample(rng, 20))

    data = random_smooth_data(1)
    Jr = orthogonal_j_from_frame(data.g)
    pts = data.box.sample(np.random.default_rng(1), 100)
    r1 = max(verify_domega(data.g, Jr, data.x, data.z, p, 1e-3, data.box).residual for p in pts)
    r2 = max(verify_domega(data.g, Jr, data.x, data.z, p, 5e-4, data.box).residual for p in pts)
    ratio = r1 / r2
    ok = flat <= 1e-12 and r1 <= 1e-4 and 3.5 <= ratio <= 4.5
    report(8, ok, f"flat {flat:.2e}; random max {r1:.2e} at h=1e-3; halving ratio {ratio:.3f}")


def test_criterion_9_enumeration():
    got = {
        "CP2": enumerate_complex_classes(lookup("CP2"), 3),
        "S4": enumerate_complex_classes(lookup("S4"), 3),
        "K3": enumerate_complex_classes(lookup("K3"), 1),
        "S2xS2": enumerate_complex_classes(lookup("S2xS2"), 2),
    }
    want = {"CP2": [C(-3), C(3)], "S4": [], "K3": [lookup("K3").zero()], "S2xS2": [C(-2, -2), C(2, 2)]}
    report(9, got == want, "; ".join(f"{k}: {[str(c) for c in v] if len(v) < 4 else len(v)}" for k, v in got.items()))


def test_criterion_10_infinitude():
    w1 = infinite_splittings_witness(lookup("CP2"), C(3))
    w2 = infinite_splittings_witness(lookup("S2xS2"), C(2, 2))
    rank0 = [e.invariants for e in entries() if e.invariants.b2 == 0]
    rank0 += [lookup(f"{k}S3xS1") for k in range(2, 6)]
    nones = [infinite_splittings_witness(inv, inv.zero()) is None for inv in rank0]
    ok = (w1 is not None and (w1.alpha, w1.k0) == (C(1), 0)
          and w2 is not None and (w2.alpha, w2.k0) == (C(1, 1), 0) and all(nones))
    report(10, ok, f"CP2 {w1.to_dict() if w1 else None}; S2xS2 {w2.to_dict() if w2 else None}; "
                   f"rank 0 none {sum(nones)}/{len(nones)}")


if __name__ == "__main__":
    import sys

    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]
    tests.sort(key=lambda f: int(f.__name__.split("_")[2]))
    failed = 0
    for t in tests:
        try:
            t()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
