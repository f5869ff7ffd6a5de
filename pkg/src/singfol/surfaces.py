"""Closed leaves, closed transversals, adjunct surfaces and genus bounds."""

from __future__ import annotations

from dataclasses import dataclass, field

from .bundles import solve_modification
from .existence import Splitting, Status, Verdict, is_complex_class
from .lattice import CohClass, DomainError, IntersectionForm, ManifoldInvariants, is_characteristic
from .singularities import FoliationPlan, pencil

CITE_TRANSVERSAL = "closed transversal theorem (chi(S) = nu.S, S.S = tau.S, chi - tau.nu >= 0)"
CITE_LEAF = "closed leaf theorem (chi(S) = tau.S, S.S = nu.S, chi - tau.nu >= S.S >= 0)"
CITE_ACHIRAL_LEAF = "achiral closed leaf (m >= -S.S, n >= 0)"
CITE_ADJUNCT = "adjunct surfaces (chi(S) + S.S = c.S)"


class WrongRoute(DomainError):
    """A check was called on input that belongs to a different check."""


@dataclass(frozen=True)
class SurfaceData:
    cls: CohClass
    genus: int
    connected: bool = True

    def __post_init__(self):
        if self.genus < 0:
            raise ValueError("genus must be nonnegative")

    @property
    def chi(self) -> int:
        return 2 - 2 * self.genus

    def self_int(self, form: IntersectionForm) -> int:
        return form.square(self.cls)

    def to_dict(self) -> dict:
        return {"class": list(self.cls.coords), "genus": self.genus, "chi": self.chi}


@dataclass(frozen=True)
class SurfaceWitness:
    splitting: dict
    role: str
    singularities_on_surface: int = 0
    plan: FoliationPlan | None = None

    def to_dict(self) -> dict:
        d = {"splitting": self.splitting, "role": self.role,
             "singularities_on_surface": self.singularities_on_surface}
        if self.plan is not None:
            d["plan"] = self.plan.to_dict()
        return d


def _connected(S: SurfaceData) -> None:
    if not S.connected:
        raise DomainError("surface must be connected")


def _sp(tau: CohClass, nu: CohClass, m: int = 0, n: int | None = None) -> dict:
    return {"tau": list(tau.coords), "nu": list(nu.coords), "m": m, "n": n}


def transversal_check(inv: ManifoldInvariants, sp: Splitting, S: SurfaceData) -> Verdict:
    _connected(S)
    form = inv.form
    tau, nu = sp.tau, sp.nu
    n = inv.chi - form.pair(tau, nu)
    ss = S.self_int(form)
    failures = []
    if not is_complex_class(inv, tau + nu):
        failures.append(f"tau + nu = {tau + nu} is not a complex class")
    if n < 0:
        failures.append(f"chi - tau.nu = {n} < 0")
    if S.chi != form.pair(nu, S.cls):
        failures.append(f"chi(S) = {S.chi} != nu.S = {form.pair(nu, S.cls)}")
    if ss != form.pair(tau, S.cls):
        failures.append(f"S.S = {ss} != tau.S = {form.pair(tau, S.cls)}")
    if failures:
        return Verdict(Status.UNKNOWN, "; ".join(failures), CITE_TRANSVERSAL)
    return Verdict(Status.EXISTS, f"S is a closed transversal; n = {n}", CITE_TRANSVERSAL,
                   witness=SurfaceWitness(_sp(tau, nu, 0, n), "transversal"))


def leaf_check(inv: ManifoldInvariants, sp: Splitting, S: SurfaceData) -> Verdict:
    _connected(S)
    form = inv.form
    ss = S.self_int(form)
    if ss < 0:
        return achiral_leaf_check(inv, sp, S)
    tau, nu = sp.tau, sp.nu
    n = inv.chi - form.pair(tau, nu)
    failures = []
    if not is_complex_class(inv, tau + nu):
        failures.append(f"tau + nu = {tau + nu} is not a complex class")
    if n < ss:
        failures.append(f"chi - tau.nu = {n} < S.S = {ss}")
    if S.chi != form.pair(tau, S.cls):
        failures.append(f"chi(S) = {S.chi} != tau.S = {form.pair(tau, S.cls)}")
    if ss != form.pair(nu, S.cls):
        failures.append(f"S.S = {ss} != nu.S = {form.pair(nu, S.cls)}")
    if failures:
        return Verdict(Status.UNKNOWN, "; ".join(failures), CITE_LEAF)
    plan = FoliationPlan(tau.coords, nu.coords, 0, n, tuple(pencil() for _ in range(n)), ())
    return Verdict(Status.EXISTS, f"S is a closed leaf carrying {ss} of the {n} singularities", CITE_LEAF,
                   witness=SurfaceWitness(_sp(tau, nu, 0, n), "leaf", ss, plan))


def achiral_leaf_check(inv: ManifoldInvariants, sp: Splitting, S: SurfaceData) -> Verdict:
    """Leaf of negative self-intersection in an achiral singular foliation."""
    _connected(S)
    form = inv.form
    ss = S.self_int(form)
    if ss >= 0:
        raise WrongRoute(f"S.S = {ss} >= 0: use leaf_check")
    tau, nu = sp.tau, sp.nu
    if not is_characteristic(form, tau + nu):
        return Verdict(Status.UNKNOWN, f"tau + nu = {tau + nu} is not characteristic", CITE_ACHIRAL_LEAF)
    m, n = solve_modification(inv, tau, nu)
    failures = []
    if m < -ss:
        failures.append(f"m = {m} < -S.S = {-ss}")
    if n < 0:
        failures.append(f"n = {n} < 0")
    if failures:
        return Verdict(Status.UNKNOWN, "; ".join(failures), CITE_ACHIRAL_LEAF, details={"m": m, "n": n})
    return Verdict(Status.EXISTS, f"(m, n) = ({m}, {n}); {-ss} negative singularities on S", CITE_ACHIRAL_LEAF,
                   witness=SurfaceWitness(_sp(tau, nu, m, n), "achiral leaf", -ss))


def adjunct_surfaces(inv: ManifoldInvariants, c: CohClass, S: SurfaceData) -> tuple[Verdict, Verdict]:
    """Verdicts for F1 (S transverse, tau = S) and F2 (S a leaf, nu = S)."""
    if not is_complex_class(inv, c):
        raise DomainError(f"{c} is not a complex class of {inv.name}")
    _connected(S)
    form = inv.form
    ss = S.self_int(form)
    cs = form.pair(c, S.cls)
    if S.chi + ss != cs:
        msg = f"chi(S) + S.S = {S.chi + ss} != c.S = {cs}"
        return (Verdict(Status.UNKNOWN, msg, CITE_ADJUNCT), Verdict(Status.UNKNOWN, msg, CITE_ADJUNCT))
    # both splittings have tau.nu = chi(S)
    room = inv.chi - S.chi
    sp1 = Splitting(S.cls, c - S.cls, 0, room)
    sp2 = Splitting(c - S.cls, S.cls, 0, room)
    if room >= 0:
        v1 = transversal_check(inv, sp1, S)
    else:
        v1 = Verdict(Status.UNKNOWN, f"chi(M) - chi(S) = {room} < 0", CITE_ADJUNCT)
    if room >= ss >= 0:
        v2 = leaf_check(inv, sp2, S)
    else:
        v2 = Verdict(Status.UNKNOWN, f"need chi(M) - chi(S) = {room} >= S.S = {ss} >= 0", CITE_ADJUNCT)
    return v1, v2


def jhol_representable(inv: ManifoldInvariants, c: CohClass, S: SurfaceData) -> bool:
    """Whether some J with c1(J) = c makes S holomorphic: chi(S) + S.S = c.S."""
    if not is_complex_class(inv, c):
        raise DomainError(f"{c} is not a complex class of {inv.name}")
    _connected(S)
    form = inv.form
    return S.chi + S.self_int(form) == form.pair(c, S.cls)


@dataclass(frozen=True)
class GenusBound:
    genus: int
    label: str
    warnings: tuple[str, ...] = field(default_factory=tuple)

    def to_dict(self) -> dict:
        return {"genus_lower_bound": self.genus, "label": self.label, "warnings": list(self.warnings)}


def kronheimer_bound(form: IntersectionForm, eps: CohClass, a: CohClass,
                     proven_setting: bool = False) -> GenusBound:
    """Least genus allowed by ``chi(S) + S.S <= eps.S`` for a surface in class a.

    Outside the product setting N^3 x S^1 the inequality is conjectural and
    the result is labelled so.
    """
    ea, aa = form.pair(eps, a), form.square(a)
    # 2 - 2g + aa <= ea  <=>  g >= (2 + aa - ea) / 2
    num = 2 + aa - ea
    g = max(0, -((-num) // 2))
    warnings = ["bound assumes S has no sphere components"]
    if a.is_zero():
        warnings.append("trivial class: spheres are excluded by hypothesis, a null-homologous sphere still exists")
    return GenusBound(g, "proven bound" if proven_setting else "conjectural bound", tuple(warnings))
