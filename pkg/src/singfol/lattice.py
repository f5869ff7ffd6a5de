"""Exact arithmetic on intersection forms and second cohomology classes.

Classes live in H^2(M;Z)/torsion, written as integer coordinate vectors in a
fixed basis; every product is computed through the intersection matrix.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Iterable, Iterator, NamedTuple, Sequence


class LatticeError(ValueError):
    """Bad input to a lattice operation (shape mismatch, invalid form)."""


class DomainError(ValueError):
    """An operation was called outside the domain where it is defined."""


class SearchTooLarge(DomainError):
    """A bounded lattice search would visit more candidates than allowed."""


# Hard cap on enumerated candidates; large-rank forms must use small bounds.
MAX_CANDIDATES = 5_000_000


@dataclass(frozen=True)
class CohClass:
    coords: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(int(v) for v in self.coords))

    @classmethod
    def zero(cls, rank: int) -> "CohClass":
        return cls((0,) * rank)

    @classmethod
    def parse(cls, text: str, rank: int) -> "CohClass":
        """Parse ``"a1,a2,..."``; a bare ``"0"`` is the zero class of any rank."""
        text = text.strip()
        if text in ("0", ""):
            return cls.zero(rank)
        try:
            vals = tuple(int(t) for t in text.replace(" ", "").split(","))
        except ValueError as exc:
            raise LatticeError(f"cannot parse class {text!r}") from exc
        if len(vals) != rank:
            raise LatticeError(f"class {text!r} has {len(vals)} coordinates, form has rank {rank}")
        return cls(vals)

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self) -> Iterator[int]:
        return iter(self.coords)

    def _check(self, other: "CohClass") -> None:
        if len(other.coords) != len(self.coords):
            raise LatticeError(f"dimension mismatch: {len(self.coords)} vs {len(other.coords)}")

    def __add__(self, other: "CohClass") -> "CohClass":
        self._check(other)
        return CohClass(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "CohClass") -> "CohClass":
        self._check(other)
        return CohClass(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "CohClass":
        return CohClass(tuple(-a for a in self.coords))

    def __rmul__(self, k: int) -> "CohClass":
        return CohClass(tuple(k * a for a in self.coords))

    def mod2(self) -> tuple[int, ...]:
        return tuple(a % 2 for a in self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __str__(self) -> str:
        return "(" + ",".join(str(a) for a in self.coords) + ")"


def _as_class(x) -> CohClass:
    return x if isinstance(x, CohClass) else CohClass(tuple(x))


def exact_det(rows: Sequence[Sequence[int]]) -> int:
    """Integer determinant by fraction-free (Bareiss) elimination."""
    a = [list(r) for r in rows]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def congruence_diagonal(rows: Sequence[Sequence[int]]) -> list[Fraction]:
    """Diagonal of a rational congruence diagonalization P^T Q P.

    Sylvester's law of inertia makes the sign pattern basis independent.
    """
    a = [[Fraction(v) for v in r] for r in rows]
    n = len(a)
    diag: list[Fraction] = []
    k = 0
    while k < n:
        if a[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if a[i][i] != 0), None)
            if piv is not None:
                a[k], a[piv] = a[piv], a[k]
                for r in a:
                    r[k], r[piv] = r[piv], r[k]
            else:
                j = next((j for j in range(k + 1, n) if a[k][j] != 0), None)
                if j is None:
                    diag.append(Fraction(0))
                    k += 1
                    continue
                # e_k <- e_k + e_j makes the pivot 2 a_kj != 0
                for c in range(n):
                    a[k][c] += a[j][c]
                for r in range(n):
                    a[r][k] += a[r][j]
        p = a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] / p
            if f:
                for c in range(k, n):
                    a[i][c] -= f * a[k][c]
                for r in range(k, n):
                    a[r][i] -= f * a[r][k]
        diag.append(p)
        k += 1
    return diag


@dataclass(frozen=True)
class IntersectionForm:
    """Symmetric unimodular integer pairing ``Q(a, b) = a^T Q b``."""

    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        m = tuple(tuple(int(v) for v in row) for row in self.matrix)
        object.__setattr__(self, "matrix", m)
        n = len(m)
        if any(len(row) != n for row in m):
            raise LatticeError("intersection matrix must be square")
        if any(m[i][j] != m[j][i] for i in range(n) for j in range(i)):
            raise LatticeError("intersection matrix must be symmetric")
        if n and abs(self.det) != 1:
            raise LatticeError(f"intersection form is not unimodular (det = {self.det})")

    @property
    def rank(self) -> int:
        return len(self.matrix)

    @cached_property
    def det(self) -> int:
        return exact_det(self.matrix)

    @cached_property
    def _inertia(self) -> tuple[int, int]:
        d = congruence_diagonal(self.matrix)
        return sum(1 for v in d if v > 0), sum(1 for v in d if v < 0)

    @property
    def b2_plus(self) -> int:
        return self._inertia[0]

    @property
    def b2_minus(self) -> int:
        return self._inertia[1]

    @property
    def signature(self) -> int:
        return self.b2_plus - self.b2_minus

    @property
    def parity(self) -> str:
        return "even" if all(self.matrix[i][i] % 2 == 0 for i in range(self.rank)) else "odd"

    @property
    def definiteness(self) -> str:
        if self.rank == 0:
            return "zero-rank"
        if self.b2_plus == self.rank:
            return "positive"
        if self.b2_minus == self.rank:
            return "negative"
        return "indefinite"

    def pair(self, a, b) -> int:
        a, b = _as_class(a), _as_class(b)
        if len(a) != self.rank or len(b) != self.rank:
            raise LatticeError(
                f"dimension mismatch: classes of length {len(a)}, {len(b)} on a rank-{self.rank} form"
            )
        return sum(
            ai * sum(qij * bj for qij, bj in zip(row, b.coords))
            for ai, row in zip(a.coords, self.matrix)
        )

    def square(self, a) -> int:
        return self.pair(a, a)

    def basis(self) -> list[CohClass]:
        n = self.rank
        return [CohClass(tuple(int(i == j) for j in range(n))) for i in range(n)]

    def zero(self) -> CohClass:
        return CohClass.zero(self.rank)

    def block_sum(self, other: "IntersectionForm") -> "IntersectionForm":
        n, k = self.rank, other.rank
        rows = [list(r) + [0] * k for r in self.matrix]
        rows += [[0] * n + list(r) for r in other.matrix]
        return IntersectionForm(tuple(tuple(r) for r in rows))

    def transformed(self, p: Sequence[Sequence[int]]) -> "IntersectionForm":
        """The form in the basis given by the columns of ``p``: P^T Q P."""
        n = self.rank
        qp = [[sum(self.matrix[i][k] * p[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
        return IntersectionForm(
            tuple(tuple(sum(p[k][i] * qp[k][j] for k in range(n)) for j in range(n)) for i in range(n))
        )

    @cached_property
    def w2(self) -> tuple[int, ...]:
        """The mod-2 reduction shared by all characteristic classes.

        Solves ``Q c = diag(Q)`` over Z/2; unimodularity makes the solution
        unique.
        """
        n = self.rank
        aug = [[self.matrix[i][j] % 2 for j in range(n)] + [self.matrix[i][i] % 2] for i in range(n)]
        row = 0
        pivots = []
        for col in range(n):
            piv = next((r for r in range(row, n) if aug[r][col]), None)
            if piv is None:
                raise LatticeError("form is singular mod 2")
            aug[row], aug[piv] = aug[piv], aug[row]
            for r in range(n):
                if r != row and aug[r][col]:
                    aug[r] = [x ^ y for x, y in zip(aug[r], aug[row])]
            pivots.append(col)
            row += 1
        return tuple(aug[i][n] for i in range(n))

    @classmethod
    def diagonal(cls, entries: Iterable[int]) -> "IntersectionForm":
        e = list(entries)
        return cls(tuple(tuple(e[i] if i == j else 0 for j in range(len(e))) for i in range(len(e))))


def pair(form: IntersectionForm, a, b) -> int:
    return form.pair(a, b)


def is_characteristic(form: IntersectionForm, c) -> bool:
    """``c . a == a . a (mod 2)`` for all ``a``; linear mod 2, so basis vectors suffice."""
    c = _as_class(c)
    if len(c) != form.rank:
        raise LatticeError(f"dimension mismatch: class of length {len(c)} on a rank-{form.rank} form")
    return all((form.pair(c, e) - form.matrix[i][i]) % 2 == 0 for i, e in enumerate(form.basis()))


@dataclass(frozen=True)
class ManifoldInvariants:
    name: str
    b1: int
    form: IntersectionForm = field(default_factory=lambda: IntersectionForm(()))

    def __post_init__(self):
        if self.b1 < 0:
            raise LatticeError("b1 must be nonnegative")

    @property
    def b2(self) -> int:
        return self.form.rank

    @property
    def chi(self) -> int:
        return 2 - 2 * self.b1 + self.form.rank

    @property
    def sigma(self) -> int:
        return self.form.signature

    @property
    def p1(self) -> int:
        return 3 * self.form.signature

    def zero(self) -> CohClass:
        return self.form.zero()

    def connected_sum(self, other: "ManifoldInvariants", name: str | None = None) -> "ManifoldInvariants":
        return ManifoldInvariants(
            name or f"{self.name}#{other.name}", self.b1 + other.b1, self.form.block_sum(other.form)
        )

    def to_json(self) -> dict:
        return {"name": self.name, "b1": self.b1, "Q": [list(r) for r in self.form.matrix]}

    @classmethod
    def from_json(cls, doc: dict) -> "ManifoldInvariants":
        try:
            name, b1, q = doc["name"], doc["b1"], doc["Q"]
        except (KeyError, TypeError) as exc:
            raise LatticeError(f"manifold description needs name, b1, Q: {exc}") from exc
        if not isinstance(b1, int) or not all(isinstance(v, int) for r in q for v in r):
            raise LatticeError("b1 and Q entries must be integers")
        return cls(str(name), b1, IntersectionForm(tuple(tuple(r) for r in q)))

    @classmethod
    def load(cls, path: str | Path) -> "ManifoldInvariants":
        try:
            doc = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise LatticeError(f"{path}: {exc}") from exc
        return cls.from_json(doc)


def euler_characteristic(inv: ManifoldInvariants) -> int:
    return inv.chi


def p1(inv: ManifoldInvariants) -> int:
    return inv.p1


def box(rank: int, bound: int, parity: Sequence[int] | None = None) -> Iterator[CohClass]:
    """All integer vectors with ``|coords| <= bound``, lexicographic order.

    With ``parity`` given, coordinate i is restricted to values ``== parity[i] (mod 2)``.
    """
    if bound < 0:
        raise LatticeError("bound must be nonnegative")
    if parity is None:
        axes = [list(range(-bound, bound + 1))] * rank
    else:
        axes = [[v for v in range(-bound, bound + 1) if (v - p) % 2 == 0] for p in parity]
    total = 1
    for ax in axes:
        total *= len(ax)
    if total > MAX_CANDIDATES:
        raise SearchTooLarge(
            f"search box has {total} candidates (rank {rank}, bound {bound}); lower the bound"
        )
    for v in itertools.product(*axes):
        yield CohClass(v)


def characteristic_classes(form: IntersectionForm, bound: int) -> Iterator[CohClass]:
    """Characteristic vectors in the box, lexicographic order."""
    return box(form.rank, bound, form.w2)


class CharSquareBound(NamedTuple):
    minimum: int
    floor: int
    bound: int
    witness: CohClass


def min_characteristic_square(form: IntersectionForm, bound: int = 3) -> CharSquareBound:
    """Least ``c.c`` over characteristic ``c`` with ``|coords| <= bound``.

    ``floor`` is b2, the value attained by the all-odd vector once the form is
    diagonal. The minimum is only claimed within the searched box.
    """
    if form.rank and form.definiteness != "positive":
        raise DomainError("min_characteristic_square needs a positive-definite form")
    if form.rank == 0:
        return CharSquareBound(0, 0, bound, form.zero())
    best = min(characteristic_classes(form, bound), key=form.square, default=None)
    if best is None:
        raise DomainError(f"no characteristic vector within bound {bound}")
    return CharSquareBound(form.square(best), form.rank, bound, best)
