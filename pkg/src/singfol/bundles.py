"""Characteristic classes of oriented rank-4 bundles under (m, n)-surgery.

A bundle over a closed 4-manifold is identified with its triple
(w2, e, p1); two bundles with equal triples are isomorphic (Dold-Whitney).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from numbers import Rational

import numpy as np

from .lattice import CohClass, DomainError, IntersectionForm, LatticeError, ManifoldInvariants, is_characteristic


class InvariantViolation(ArithmeticError):
    """An identity that must hold by construction failed."""


@dataclass(frozen=True)
class BundleClasses:
    w2: tuple[int, ...]
    e: int
    p1: int
    c1: CohClass | None = None
    c2: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "w2", tuple(v % 2 for v in self.w2))


def whitney_sum_classes(form: IntersectionForm, tau: CohClass, nu: CohClass) -> BundleClasses:
    """Classes of ``L_tau + L_nu`` for complex line bundles with c1 = tau, nu."""
    c = tau + nu
    tn = form.pair(tau, nu)
    return BundleClasses(w2=c.mod2(), e=tn, p1=form.square(c) - 2 * tn, c1=c, c2=tn)


def modify(E: BundleClasses, m: int, n: int) -> BundleClasses:
    """(m, n)-surgery at one point: e += m + n, p1 += 2m - 2n.

    A complex structure survives only for m = 0 (the gluing map h -> h q^n is
    complex linear); otherwise c1, c2 are dropped.
    """
    if m == 0 and E.c2 is not None:
        return replace(E, e=E.e + n, p1=E.p1 - 2 * n, c2=E.c2 + n)
    return BundleClasses(w2=E.w2, e=E.e + m + n, p1=E.p1 + 2 * m - 2 * n)


def trivial_bundle(rank: int) -> BundleClasses:
    """Trivial R^4 over a base with H^2/torsion of the given rank."""
    return BundleClasses(w2=(0,) * rank, e=0, p1=0, c1=CohClass.zero(rank), c2=0)


def tangent_classes(inv: ManifoldInvariants) -> BundleClasses:
    return BundleClasses(w2=inv.form.w2, e=inv.chi, p1=inv.p1)


def dold_whitney_equal(E1: BundleClasses, E2: BundleClasses) -> bool:
    if len(E1.w2) != len(E2.w2):
        raise LatticeError("bundles live over different bases (w2 lengths differ)")
    return E1.w2 == E2.w2 and E1.e == E2.e and E1.p1 == E2.p1


def solve_modification(inv: ManifoldInvariants, tau: CohClass, nu: CohClass) -> tuple[int, int]:
    """The (m, n) with ``(L_tau + L_nu)_{m,n}`` isomorphic to TM."""
    form = inv.form
    c = tau + nu
    if not is_characteristic(form, c):
        raise DomainError(f"tau + nu = {c} is not characteristic, so no (m, n) exists")
    c2 = form.square(c)
    tn = form.pair(tau, nu)
    m4 = inv.p1 + 2 * inv.chi - c2
    n4 = -inv.p1 + 2 * inv.chi + c2 - 4 * tn
    if m4 % 4 or n4 % 4:
        raise InvariantViolation(f"non-integral surgery coefficients m = {m4}/4, n = {n4}/4 for {inv.name}")
    m, n = m4 // 4, n4 // 4
    if m + n != inv.chi - tn:
        raise InvariantViolation("m + n != chi - tau.nu")
    if not dold_whitney_equal(modify(whitney_sum_classes(form, tau, nu), m, n), tangent_classes(inv)):
        raise InvariantViolation("modified Whitney sum does not match the tangent bundle classes")
    return m, n


def _exact(v):
    if isinstance(v, (int, Fraction, Rational)):
        return Fraction(v)
    return float(v)


@dataclass(frozen=True)
class Quaternion:
    """``w + x i + y j + z k``; exact when all components are rational."""

    w: object = 0
    x: object = 0
    y: object = 0
    z: object = 0

    def __post_init__(self):
        comps = [_exact(v) for v in (self.w, self.x, self.y, self.z)]
        if any(isinstance(v, float) for v in comps):
            comps = [float(v) for v in comps]
        for name, v in zip("wxyz", comps):
            object.__setattr__(self, name, v)

    @classmethod
    def from_array(cls, a) -> "Quaternion":
        return cls(*(float(v) for v in a))

    def as_array(self) -> np.ndarray:
        return np.array([float(self.w), float(self.x), float(self.y), float(self.z)])

    @property
    def is_exact(self) -> bool:
        return isinstance(self.w, Fraction)

    def __mul__(self, o: "Quaternion") -> "Quaternion":
        a1, b1, c1, d1 = self.w, self.x, self.y, self.z
        a2, b2, c2, d2 = o.w, o.x, o.y, o.z
        return Quaternion(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )

    def __add__(self, o: "Quaternion") -> "Quaternion":
        return Quaternion(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)

    def conj(self) -> "Quaternion":
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm2(self):
        return self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z

    def norm(self) -> float:
        return float(self.norm2()) ** 0.5

    def inverse(self) -> "Quaternion":
        n2 = self.norm2()
        if n2 == 0:
            raise ZeroDivisionError("zero quaternion")
        c = self.conj()
        return Quaternion(c.w / n2, c.x / n2, c.y / n2, c.z / n2)

    def __pow__(self, k: int) -> "Quaternion":
        base = self if k >= 0 else self.inverse()
        out = Quaternion(1)
        for _ in range(abs(k)):
            out = out * base
        return out


BASIS = (Quaternion(1), Quaternion(0, 1), Quaternion(0, 0, 1), Quaternion(0, 0, 0, 1))


def left_mult_matrix(p: Quaternion) -> np.ndarray:
    return np.column_stack([(p * b).as_array() for b in BASIS])


def xi(m: int, n: int, q: Quaternion, tol: float = 1e-9) -> np.ndarray:
    """Matrix of ``h -> q^m h q^n`` on H = R^4 in the basis (1, i, j, k)."""
    if abs(q.norm() - 1.0) > tol:
        raise DomainError(f"xi needs a unit quaternion, |q| = {q.norm()}")
    left, right = q**m, q**n
    return np.column_stack([(left * b * right).as_array() for b in BASIS])
