"""Hopf degrees of foliation singularities given by levels of f(z1, z2).

The tangent plane field of the level foliation is spanned by the kernel
field ``(df/dz2, -df/dz1)``. After removing the common polynomial factor of
the two components, the Hopf degree of an isolated singularity at the origin
is the local intersection multiplicity of the reduced pair.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import mpmath
import sympy
from sympy import I, Poly, Rational
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

from .lattice import DomainError

z1, z2 = sympy.symbols("z1 z2")
GENS = (z1, z2)
DOMAIN = sympy.QQ_I


class PolynomialError(ValueError):
    pass


def _poly(expr) -> Poly:
    return Poly(expr, *GENS, domain=DOMAIN)


@dataclass(frozen=True)
class BivarPoly:
    """Sparse bivariate polynomial with Gaussian-rational coefficients."""

    poly: Poly

    def __post_init__(self):
        if not isinstance(self.poly, Poly) or self.poly.gens != GENS:
            object.__setattr__(self, "poly", _poly(self.poly))

    @classmethod
    def parse(cls, text: str) -> "BivarPoly":
        """Parse strings such as ``"z1^3 - z2^2"`` or ``"1/2*z1*z2 + I*z2^3"``."""
        try:
            expr = parse_expr(
                text,
                local_dict={"z1": z1, "z2": z2, "I": I, "i": I},
                transformations=standard_transformations + (convert_xor,),
                evaluate=True,
            )
        except (SyntaxError, TypeError, sympy.SympifyError) as exc:
            raise PolynomialError(f"cannot parse polynomial {text!r}") from exc
        extra = expr.free_symbols - set(GENS)
        if extra:
            raise PolynomialError(f"unknown symbols {sorted(map(str, extra))} in {text!r}")
        try:
            return cls(_poly(expr))
        except sympy.PolynomialError as exc:
            raise PolynomialError(f"{text!r} is not a polynomial in z1, z2") from exc

    @property
    def terms(self) -> dict[tuple[int, int], object]:
        return {m: c for m, c in self.poly.terms() if c}

    @property
    def total_degree(self) -> int:
        return self.poly.total_degree() if not self.poly.is_zero else -1

    def is_zero(self) -> bool:
        return self.poly.is_zero

    def __str__(self) -> str:
        return str(self.poly.as_expr())


def tangent_field(f: BivarPoly) -> tuple[BivarPoly, BivarPoly]:
    """``(df/dz2, -df/dz1)``, spanning ker Df."""
    if f.total_degree < 1:
        raise PolynomialError("tangent field of a constant is undefined")
    p = f.poly
    return BivarPoly(p.diff(z2)), BivarPoly(-p.diff(z1))


def _grlex_monic(g: Poly) -> Poly:
    lc = g.coeffs(order="grlex")[0]
    return g.quo_ground(lc)


def common_factor(g1: BivarPoly, g2: BivarPoly) -> Poly:
    """GCD of the pair, normalized to grlex leading coefficient 1."""
    if g1.is_zero() and g2.is_zero():
        raise PolynomialError("both components vanish identically")
    if g1.is_zero():
        return _grlex_monic(g2.poly)
    if g2.is_zero():
        return _grlex_monic(g1.poly)
    return _grlex_monic(sympy.gcd(g1.poly, g2.poly))


def reduce(g1: BivarPoly, g2: BivarPoly) -> tuple[BivarPoly, BivarPoly]:
    """Divide both components by their normalized GCD."""
    g = common_factor(g1, g2)
    out = []
    for gi in (g1, g2):
        q, r = gi.poly.div(g)
        if not r.is_zero:
            raise PolynomialError("inexact division by the common factor")
        out.append(BivarPoly(q))
    return out[0], out[1]


def _at_origin(p: Poly):
    return p.eval({z1: 0, z2: 0}) if not p.is_zero else 0


def _order_in_z1(p: Poly) -> int:
    """Lowest power of z1 in the univariate p(z1, 0); ``p(z1, 0)`` must be nonzero."""
    u = Poly(p.as_expr().subs(z2, 0), z1, domain=DOMAIN)
    return min(m[0] for m, c in u.terms() if c)


def _restrict(p: Poly) -> Poly:
    return Poly(p.as_expr().subs(z2, 0), z1, domain=DOMAIN)


def intersection_multiplicity(F: Poly, G: Poly) -> int:
    """Local intersection multiplicity at the origin (Fulton's algorithm).

    Raises :class:`DomainError` when F and G share a branch through the origin.
    """
    F, G = _poly(F.as_expr()), _poly(G.as_expr())
    total = 0
    for _ in range(10_000):
        if F.is_zero or G.is_zero:
            raise DomainError("a component vanishes identically: zero is not isolated")
        if _at_origin(F) != 0 or _at_origin(G) != 0:
            return total
        f0, g0 = _restrict(F), _restrict(G)
        r = f0.degree() if not f0.is_zero else 0
        s = g0.degree() if not g0.is_zero else 0
        if r > s or (r == s and f0.is_zero and not g0.is_zero):
            F, G, f0, g0, r, s = G, F, g0, f0, s, r
        if f0.is_zero:
            if g0.is_zero:
                raise DomainError("common branch z2 = 0 through the origin: zero is not isolated")
            # F = z2 * H;  I(F, G) = I(z2, G) + I(H, G)
            total += _order_in_z1(G)
            F = F.quo(_poly(z2))
            continue
        G = G.mul_ground(f0.LC()) - F.mul_ground(g0.LC()) * _poly(z1 ** (s - r))
    raise DomainError("intersection multiplicity did not terminate")


def _isolation_check(h1: BivarPoly, h2: BivarPoly) -> None:
    g = common_factor(h1, h2)
    if g.total_degree() > 0 and _at_origin(g) == 0:
        raise DomainError(f"common factor {g.as_expr()} passes through the origin: zero is not isolated")


def hopf_degree(f: BivarPoly | str) -> int:
    """Hopf degree of the level foliation of ``f`` at the origin.

    A regular point (Df(0) != 0) has degree 0. A critical point whose reduced
    field does not vanish lies on a curve of critical points and is rejected.
    """
    if isinstance(f, str):
        f = BivarPoly.parse(f)
    g1, g2 = tangent_field(f)
    h1, h2 = reduce(g1, g2)
    _isolation_check(h1, h2)
    critical = _at_origin(g1.poly) == 0 and _at_origin(g2.poly) == 0
    reduced_vanishes = _at_origin(h1.poly) == 0 and _at_origin(h2.poly) == 0
    if critical and not reduced_vanishes:
        factor = common_factor(g1, g2).as_expr()
        raise DomainError(
            f"origin is a non-isolated critical point of {f}: Df vanishes along {factor} = 0"
        )
    if not reduced_vanishes:
        return 0
    return intersection_multiplicity(h1.poly, h2.poly)


def _small_value(rng: random.Random, size: float) -> sympy.Expr:
    """Gaussian rational with modulus in [size/2, 3*size/2]."""
    denom = 10**6
    while True:
        re_, im_ = (rng.randint(-1000, 1000) * size / 1000 for _ in range(2))
        if 0.5 * size <= abs(complex(re_, im_)) <= 1.5 * size:
            return Rational(round(re_ * denom), denom) + I * Rational(round(im_ * denom), denom)


def _mp_roots(coeffs):
    coeffs = list(coeffs)
    while coeffs and abs(coeffs[0]) < mpmath.mpf(10) ** -40:
        coeffs.pop(0)
    if len(coeffs) < 2:
        return []
    return mpmath.polyroots(coeffs, maxsteps=500, extraprec=300)


def _count_near_origin(h1: Poly, h2: Poly, w, radius: float, shear) -> int:
    u, v = sympy.symbols("u v")
    # z1 = u + shear*v makes the projection onto u generic
    sub = {z1: u + shear * v, z2: v}
    a = sympy.expand(h1.as_expr().subs(sub) - w[0])
    b = sympy.expand(h2.as_expr().subs(sub) - w[1])
    res = Poly(sympy.resultant(a, b, v), u, domain=DOMAIN)
    if res.is_zero:
        raise DomainError("resultant vanishes identically: solution set is not finite")
    if res.degree() < 1:
        return 0
    a_v = [sympy.lambdify(u, c, modules="mpmath") for c in Poly(a, v).all_coeffs()]
    b_uv = sympy.lambdify((u, v), b, modules="mpmath")
    count = 0
    with mpmath.workdps(60):
        coeffs = [mpmath.mpc(*(mpmath.mpf(str(sympy.Rational(part))) for part in c.as_real_imag()))
                  for c in (DOMAIN.to_sympy(x) for x in res.rep.to_list())]
        for ru in _mp_roots(coeffs):
            cand = _mp_roots([fn(ru) for fn in a_v])
            if not cand:
                continue
            rv = min(cand, key=lambda t: abs(b_uv(ru, t)))
            if abs(b_uv(ru, rv)) > mpmath.mpf(10) ** -20:
                continue
            if abs(ru + shear * rv) < radius and abs(rv) < radius:
                count += 1
    return count


def hopf_degree_oracle(f: BivarPoly | str, radius: float = 0.5, trials: int = 7,
                       w_size: float = 1e-3, seed: int = 0) -> int:
    """Count preimages of a small generic value near the origin.

    Solves ``(h1, h2)(z) = w`` by resultant elimination and numerical roots,
    keeps solutions in the polydisc ``|z1|, |z2| < radius`` and returns the
    modal count over ``trials`` values of ``w`` with ``|w_k| ~ w_size``.
    Trial t is seeded by ``(seed, t)`` alone.
    """
    if isinstance(f, str):
        f = BivarPoly.parse(f)
    h1, h2 = reduce(*tangent_field(f))
    counts = []
    for t in range(trials):
        rng = random.Random(seed * 1_000_003 + t)
        w = (_small_value(rng, w_size), _small_value(rng, w_size))
        shear = Rational(rng.randint(1, 97), 101)
        counts.append(_count_near_origin(h1.poly, h2.poly, w, radius, shear))
    value, freq = Counter(counts).most_common(1)[0]
    if freq * 2 <= trials:
        raise DomainError(f"oracle root counts unstable across trials: {counts}")
    return value


# -- singularity models and plans -------------------------------------------------

NAMED_POLYS = {
    "pencil": None,  # levels of z1/z2; no polynomial model, degree 1
    "quadratic": "z1*z2",
    "cusp": "z1^3 - z2^2",
}


@dataclass(frozen=True)
class SingularityModel:
    kind: str  # "pencil", "quadratic", "cusp", "power", "polynomial", "explicit"
    sign: str = "positive"
    degree: int = 1
    polynomial: str | None = None

    def __post_init__(self):
        if self.sign not in ("positive", "negative"):
            raise ValueError(f"sign must be positive or negative, got {self.sign!r}")
        if self.degree < 0:
            raise ValueError("Hopf degree is nonnegative")

    def negated(self) -> "SingularityModel":
        return SingularityModel(self.kind, "negative" if self.sign == "positive" else "positive",
                                self.degree, self.polynomial)

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "sign": self.sign, "degree": self.degree}
        if self.polynomial:
            d["polynomial"] = self.polynomial
        return d

    def __str__(self) -> str:
        body = self.polynomial or self.kind
        return f"{body}[{'+' if self.sign == 'positive' else '-'}{self.degree}]"


@lru_cache(maxsize=None)
def _degree_of(text: str) -> int:
    return hopf_degree(BivarPoly.parse(text))


def pencil(sign: str = "positive") -> SingularityModel:
    return SingularityModel("pencil", sign, 1)


def quadratic(sign: str = "positive") -> SingularityModel:
    return SingularityModel("quadratic", sign, _degree_of("z1*z2"), "z1*z2")


def cusp(sign: str = "positive") -> SingularityModel:
    return SingularityModel("cusp", sign, _degree_of("z1^3 - z2^2"), "z1^3 - z2^2")


def normal_crossing(p: int, q: int, sign: str = "positive") -> SingularityModel:
    text = f"z1^{p}*z2^{q}"
    return SingularityModel("normal_crossing", sign, _degree_of(text), text)


def power(p: int, q: int, sign: str = "positive") -> SingularityModel:
    """Levels of ``z1^(p+1) + z2^(q+1)``, degree p*q."""
    text = f"z1^{p + 1} + z2^{q + 1}"
    return SingularityModel("power", sign, _degree_of(text), text)


def from_polynomial(text: str, sign: str = "positive") -> SingularityModel:
    return SingularityModel("polynomial", sign, _degree_of(text), text)


def explicit(degree: int, sign: str = "positive") -> SingularityModel:
    return SingularityModel("explicit", sign, degree)


def parse_model(token: str, sign: str = "positive") -> SingularityModel:
    """``pencil``, ``quadratic``, ``cusp``, ``power(p,q)``, ``deg(k)`` or a polynomial."""
    t = token.strip()
    if t == "pencil":
        return pencil(sign)
    if t == "quadratic":
        return quadratic(sign)
    if t == "cusp":
        return cusp(sign)
    if t.startswith("power(") and t.endswith(")"):
        p, q = (int(v) for v in t[6:-1].split(","))
        return power(p, q, sign)
    if t.startswith("deg(") and t.endswith(")"):
        return explicit(int(t[4:-1]), sign)
    return from_polynomial(t, sign)


def total_degree(models: Sequence[SingularityModel]) -> int:
    return sum(s.degree for s in models)


MENU = ("pencil", "quadratic", "cusp", "power")


def synthesize_plan(n: int, menu: str | Sequence[str] = "pencil", sign: str = "positive",
                    rng: random.Random | None = None) -> list[SingularityModel]:
    """Singularities with Hopf degrees summing to ``n``.

    ``menu="pencil"`` gives n pencils; ``"single"`` gives the one singularity
    ``z1^(n+1) + z2^2``. A sequence menu draws randomly from it with ``rng``.
    """
    if n < 0:
        raise ValueError("cannot synthesize a plan of negative total degree")
    if n == 0:
        return []
    if menu == "pencil":
        return [pencil(sign) for _ in range(n)]
    if menu == "quadratic":
        return [quadratic(sign) for _ in range(n)]
    if menu == "single":
        return [power(n, 1, sign)]
    menu = list(menu) if not isinstance(menu, str) else [menu]
    if not menu:
        raise ValueError("empty singularity menu")
    rng = rng or random.Random(0)
    plan: list[SingularityModel] = []
    left = n
    while left > 0:
        choices = []
        for item in menu:
            if item == "pencil":
                choices.append(pencil(sign))
            elif item == "quadratic":
                choices.append(quadratic(sign))
            elif item == "cusp" and left >= 2:
                choices.append(cusp(sign))
            elif item == "power":
                p = rng.randint(1, min(left, 4))
                q = rng.randint(1, max(1, min(4, left // p)))
                choices.append(power(p, q, sign))
        choices = [c for c in choices if 0 < c.degree <= left]
        if not choices:
            raise ValueError(f"menu {menu} cannot fill remaining degree {left}")
        pick = rng.choice(choices)
        plan.append(pick)
        left -= pick.degree
    return plan


@dataclass(frozen=True)
class FoliationPlan:
    tau: tuple[int, ...]
    nu: tuple[int, ...]
    m: int
    n: int
    positive: tuple[SingularityModel, ...] = ()
    negative: tuple[SingularityModel, ...] = field(default_factory=tuple)

    @property
    def achiral(self) -> bool:
        return bool(self.negative) or self.m != 0

    def to_dict(self) -> dict:
        return {
            "tau": list(self.tau),
            "nu": list(self.nu),
            "m": self.m,
            "n": self.n,
            "positive": [s.to_dict() for s in self.positive],
            "negative": [s.to_dict() for s in self.negative],
        }


def ledger_check(inv, plan: FoliationPlan) -> bool:
    """Index identity: chi(M) = sum deg p_i + tau.nu.

    In the achiral case the positive degrees must total n, the negative ones m,
    and m + n = chi - tau.nu.
    """
    from .lattice import CohClass

    tn = inv.form.pair(CohClass(plan.tau), CohClass(plan.nu))
    if any(s.sign != "positive" for s in plan.positive) or any(s.sign != "negative" for s in plan.negative):
        return False
    if not plan.achiral:
        return inv.chi == total_degree(plan.positive) + tn
    return (total_degree(plan.positive) == plan.n and total_degree(plan.negative) == plan.m
            and plan.m + plan.n == inv.chi - tn)
