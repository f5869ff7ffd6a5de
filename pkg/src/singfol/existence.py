"""Existence and obstruction verdicts for singular foliations.

The existence theorems give sufficient conditions only. When a hypothesis
fails the verdict is UNKNOWN; OBSTRUCTED is reserved for proven
obstructions.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from typing import Any, Sequence

from .bundles import solve_modification
from .lattice import (
    CohClass,
    DomainError,
    ManifoldInvariants,
    SearchTooLarge,
    box,
    characteristic_classes,
    is_characteristic,
)
from .singularities import FoliationPlan, SingularityModel, synthesize_plan, total_degree

DEFAULT_BOUND = 5


class Status(str, enum.Enum):
    EXISTS = "EXISTS"
    OBSTRUCTED = "OBSTRUCTED"
    UNKNOWN = "UNKNOWN"


CITE_EXIST = "existence theorem for singular foliations (complex class, chi - tau.nu >= 0)"
CITE_EXIST_SING = "existence with prescribed singularities (Hopf degrees sum to chi - tau.nu)"
CITE_INDEX = "index formula chi(M) = sum deg p_i + tau.nu"
CITE_COMPLEX = "complex class: c = w2 mod 2 and p1 = c^2 - 2 chi"
CITE_ACHIRAL = "achiral existence theorem (m >= 0 and n >= 0)"
CITE_ACHIRAL_OBS = "achiral obstruction for positive-definite forms (1 - b1 + b2 >= m)"
CITE_SPLIT = "splitting of the tangent bundle: (L_tau + L_nu)_{m,n} = TM"


@dataclass(frozen=True)
class Splitting:
    tau: CohClass
    nu: CohClass
    m: int
    n: int

    @property
    def c(self) -> CohClass:
        return self.tau + self.nu

    def to_dict(self) -> dict:
        return {"tau": list(self.tau.coords), "nu": list(self.nu.coords), "c": list(self.c.coords),
                "m": self.m, "n": self.n}


@dataclass(frozen=True)
class Verdict:
    status: Status
    reason: str
    citation: str
    witness: Any = None
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status is Status.EXISTS and self.witness is None:
            raise ValueError("an EXISTS verdict needs a witness")
        if self.status is Status.OBSTRUCTED and not self.citation:
            raise ValueError("an OBSTRUCTED verdict needs a cited obstruction")

    @property
    def exists(self) -> bool:
        return self.status is Status.EXISTS

    def to_dict(self) -> dict:
        w = self.witness
        if hasattr(w, "to_dict"):
            w = w.to_dict()
        return {"status": self.status.value, "witness": w, "reason": self.reason,
                "citation": self.citation, **({"details": self.details} if self.details else {})}


def splitting(inv: ManifoldInvariants, tau: CohClass, nu: CohClass) -> Splitting:
    m, n = solve_modification(inv, tau, nu)
    return Splitting(tau, nu, m, n)


def is_complex_class(inv: ManifoldInvariants, c: CohClass) -> bool:
    form = inv.form
    return is_characteristic(form, c) and form.square(c) == 2 * inv.chi + inv.p1


def enumerate_complex_classes(inv: ManifoldInvariants, bound: int = DEFAULT_BOUND) -> list[CohClass]:
    """Complex classes with ``|coords| <= bound``, sorted lexicographically."""
    target = 2 * inv.chi + inv.p1
    form = inv.form
    return sorted(
        {c for c in characteristic_classes(form, bound) if form.square(c) == target},
        key=lambda c: c.coords,
    )


def _check_positive(models: Sequence[SingularityModel], label: str) -> None:
    bad = [s for s in models if s.sign != "positive"]
    if bad:
        raise DomainError(f"{label}: negative-type singularity {bad[0]} not allowed here")


def foliation_exists(inv: ManifoldInvariants, tau: CohClass, nu: CohClass,
                     singularities: Sequence[SingularityModel] | None = None) -> Verdict:
    """Verdict for a singular foliation with e(TF) = tau, e(NF) = nu.

    Without a singularity list the plan is n pencil singularities.
    """
    if singularities is not None:
        _check_positive(singularities, "chiral foliation")
    c = tau + nu
    tn = inv.form.pair(tau, nu)
    n = inv.chi - tn
    if not is_complex_class(inv, c):
        return Verdict(Status.OBSTRUCTED, f"c = tau + nu = {c} is not a complex class of {inv.name}",
                       CITE_COMPLEX, details={"c": list(c.coords), "n": n})
    if n < 0:
        return Verdict(Status.UNKNOWN, f"chi - tau.nu = {n} < 0: no singularity of negative degree is known",
                       CITE_EXIST, details={"n": n})
    plan = list(singularities) if singularities is not None else synthesize_plan(n)
    deg = total_degree(plan)
    if deg != n:
        return Verdict(Status.OBSTRUCTED, f"singularity degrees sum to {deg}, index formula needs {n}",
                       CITE_INDEX, details={"n": n, "degree_sum": deg})
    witness = FoliationPlan(tau.coords, nu.coords, 0, n, tuple(plan), ())
    cite = CITE_EXIST if singularities is None else CITE_EXIST_SING
    return Verdict(Status.EXISTS, f"complex class {c}, n = {n} singularities of total degree {n}", cite,
                   witness=witness)


def positive_definite_obstruction(inv: ManifoldInvariants, m: int) -> bool:
    """True when ``1 - b1 + b2 < m``: no achiral foliation with only negative
    singularities of total degree m exists. Needs a positive-definite form."""
    if inv.form.definiteness not in ("positive", "zero-rank"):
        raise DomainError(f"obstruction needs a positive-definite form; {inv.name} is {inv.form.definiteness}")
    return 1 - inv.b1 + inv.b2 < m


def achiral_exists(inv: ManifoldInvariants, tau: CohClass, nu: CohClass,
                   pos_sings: Sequence[SingularityModel] | None = None,
                   neg_sings: Sequence[SingularityModel] | None = None) -> Verdict:
    form = inv.form
    c = tau + nu
    if not is_characteristic(form, c):
        raise DomainError(f"c = tau + nu = {c} is not characteristic (not an integral lift of w2)")
    m, n = solve_modification(inv, tau, nu)
    sp = Splitting(tau, nu, m, n)
    if m < 0 or n < 0:
        details = {"m": m, "n": n}
        if form.definiteness in ("positive", "zero-rank"):
            lhs = 1 - inv.b1 + inv.b2
            details["1-b1+b2"] = lhs
            # negative singularities have total degree >= 0, so the demand is max(m, 0)
            need = max(m, 0)
            if positive_definite_obstruction(inv, need):
                return Verdict(Status.OBSTRUCTED,
                               f"(m, n) = ({m}, {n}); 1 - b1 + b2 = {lhs} < {need} <= negative degree total",
                               CITE_ACHIRAL_OBS, details=details)
        return Verdict(Status.UNKNOWN, f"(m, n) = ({m}, {n}) has a negative entry", CITE_ACHIRAL,
                       details=details)
    if pos_sings is not None:
        _check_positive(pos_sings, "positive plan")
    if neg_sings is not None and any(s.sign != "negative" for s in neg_sings):
        raise DomainError("negative plan contains a positive-type singularity")
    pos = list(pos_sings) if pos_sings is not None else synthesize_plan(n)
    neg = list(neg_sings) if neg_sings is not None else synthesize_plan(m, sign="negative")
    if total_degree(pos) != n or total_degree(neg) != m:
        return Verdict(Status.OBSTRUCTED,
                       f"plan degrees ({total_degree(pos)}, {total_degree(neg)}) != (n, m) = ({n}, {m})",
                       CITE_INDEX, details={"m": m, "n": n})
    plan = FoliationPlan(tau.coords, nu.coords, m, n, tuple(pos), tuple(neg))
    return Verdict(Status.EXISTS, f"(m, n) = ({m}, {n}): {n} positive and {m} negative singularities",
                   CITE_ACHIRAL, witness=plan, details={"splitting": sp.to_dict()})


def find_splittings(inv: ManifoldInvariants, c: CohClass, bound: int = DEFAULT_BOUND) -> list[Splitting]:
    """All tau with ``|tau| <= bound`` and chi - tau.(c - tau) >= 0, sorted by tau."""
    if not is_complex_class(inv, c):
        raise DomainError(f"{c} is not a complex class of {inv.name}")
    out = []
    for tau in box(inv.b2, bound):
        nu = c - tau
        n = inv.chi - inv.form.pair(tau, nu)
        if n >= 0:
            out.append(Splitting(tau, nu, 0, n))
    return out


@dataclass(frozen=True)
class InfiniteWitness:
    alpha: CohClass
    k0: int
    alpha_sq: int
    c_alpha: int

    def to_dict(self) -> dict:
        return {"alpha": list(self.alpha.coords), "k0": self.k0, "alpha_sq": self.alpha_sq,
                "c_alpha": self.c_alpha}


def least_k0(chi: int, c_alpha: int, alpha_sq: int) -> int:
    """Least k0 >= 0 with chi - k c_alpha + k^2 alpha_sq >= 0 for all k >= k0."""
    if alpha_sq <= 0:
        raise ValueError("alpha must have positive square")

    def q(k: int) -> int:
        return chi - k * c_alpha + k * k * alpha_sq

    disc = c_alpha * c_alpha - 4 * alpha_sq * chi
    if disc < 0:
        return 0
    # q < 0 only strictly between the roots; the larger root is below this bound
    top = (c_alpha + math.isqrt(disc) + 1) // (2 * alpha_sq) + 1
    for k in range(top, -1, -1):
        if q(k) < 0:
            return k + 1
    return 0


def _sparse_box(rank: int, bound: int, support: int):
    """Classes with at most ``support`` nonzero coordinates, each in [-bound, bound]."""
    values = [v for v in range(-bound, bound + 1) if v]
    yield CohClass((0,) * rank)
    for k in range(1, support + 1):
        for idx in itertools.combinations(range(rank), k):
            for vals in itertools.product(values, repeat=k):
                v = [0] * rank
                for i, x in zip(idx, vals):
                    v[i] = x
                yield CohClass(tuple(v))


def infinite_splittings_witness(inv: ManifoldInvariants, c: CohClass,
                                bound: int = 3) -> InfiniteWitness | None:
    """A class alpha with alpha^2 > 0 so that tau = c - k alpha, nu = k alpha
    works for every k >= k0. None when b2+ = 0 (checked first, since no such
    alpha exists whatever c is) or nothing is found in the box.

    When the full box is too large, only classes with at most two nonzero
    coordinates are searched.
    """
    form = inv.form
    if form.b2_plus == 0:
        return None
    if not is_complex_class(inv, c):
        raise DomainError(f"{c} is not a complex class of {inv.name}")
    try:
        candidates = list(box(form.rank, bound))
    except SearchTooLarge:
        candidates = list(_sparse_box(form.rank, bound, support=2))
    best = None
    for a in candidates:
        sq = form.square(a)
        if sq <= 0:
            continue
        ca = form.pair(c, a)
        key = (sq, -ca, a.coords)
        if best is None or key < best[0]:
            best = (key, a, sq, ca)
    if best is None:
        return None
    _, a, sq, ca = best
    return InfiniteWitness(a, least_k0(inv.chi, ca, sq), sq, ca)
