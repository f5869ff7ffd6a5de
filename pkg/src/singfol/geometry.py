"""Finite-difference check of the identity

    d(omega)(x, Jx, z) = <[x, Jx], Jz> - <nabla_x x + nabla_Jx Jx, z>

for a metric g, a g-orthogonal almost-complex structure J and its
fundamental form omega(a, b) = <Ja, b>, plus a pointwise audit of the
leafwise-positive, leafwise-closed 2-form condition for tautness.

Fields are callables on a box in R^4: a metric maps a point to a 4x4
symmetric positive-definite array, vector fields to 4-vectors, 2-forms to
antisymmetric 4x4 arrays. Index convention: ``gamma[k, i, j]`` is the
Christoffel symbol with upper index k.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np
import sympy

Field = Callable[[np.ndarray], np.ndarray]

J0 = np.array(
    [[0.0, -1.0, 0.0, 0.0],
     [1.0, 0.0, 0.0, 0.0],
     [0.0, 0.0, 0.0, -1.0],
     [0.0, 0.0, 1.0, 0.0]]
)


class GeometryError(ValueError):
    pass


@dataclass(frozen=True)
class Box:
    lo: tuple[float, ...] = (-1.0,) * 4
    hi: tuple[float, ...] = (1.0,) * 4

    def check_interior(self, p: np.ndarray, margin: float) -> None:
        lo, hi = np.asarray(self.lo), np.asarray(self.hi)
        if np.any(p - margin < lo) or np.any(p + margin > hi):
            raise GeometryError(f"point {p} is within {margin:g} of the chart boundary")

    def sample(self, rng: np.random.Generator, n: int, shrink: float = 0.5) -> np.ndarray:
        lo, hi = np.asarray(self.lo), np.asarray(self.hi)
        mid, half = (lo + hi) / 2, (hi - lo) / 2 * shrink
        return mid + half * rng.uniform(-1.0, 1.0, size=(n, 4))


@dataclass
class ChartField:
    """Metric and vector fields on a coordinate box."""

    g: Field
    x: Field | None = None
    z: Field | None = None
    mu: Field | None = None
    box: Box = field(default_factory=Box)
    grid_h: float | None = None

    def metric(self, p) -> np.ndarray:
        gp = np.asarray(self.g(np.asarray(p, dtype=float)), dtype=float)
        return gp

    def check_metric(self, p, tol: float = 1e-8) -> None:
        gp = self.metric(p)
        if np.max(np.abs(gp - gp.T)) > 1e-12:
            raise GeometryError(f"metric not symmetric at {p}")
        if np.linalg.eigvalsh(gp).min() <= tol:
            raise GeometryError(f"metric not positive definite at {p}")


def partials(F: Field, p: np.ndarray, h: float, order: int = 2) -> np.ndarray:
    """Central-difference partial derivatives, stacked along a new axis 0."""
    p = np.asarray(p, dtype=float)
    out = []
    for a in range(4):
        e = np.zeros(4)
        e[a] = h
        if order == 2:
            d = (np.asarray(F(p + e)) - np.asarray(F(p - e))) / (2 * h)
        elif order == 4:
            d = (-np.asarray(F(p + 2 * e)) + 8 * np.asarray(F(p + e))
                 - 8 * np.asarray(F(p - e)) + np.asarray(F(p - 2 * e))) / (12 * h)
        else:
            raise ValueError("order must be 2 or 4")
        out.append(d)
    return np.stack(out)


def christoffel(g: Field, p, h: float = 1e-3, box: Box | None = None, order: int = 2) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if box is not None:
        box.check_interior(p, 2 * h)
    gp = np.asarray(g(p), dtype=float)
    dg = partials(g, p, h, order)  # dg[a, i, j] = d_a g_ij
    ginv = np.linalg.inv(gp)
    # lowered: Gamma_{l, ij} = 1/2 (d_i g_jl + d_j g_il - d_l g_ij)
    low = 0.5 * (np.einsum("ijl->lij", dg) + np.einsum("jil->lij", dg) - dg)
    return np.einsum("kl,lij->kij", ginv, low)


@dataclass
class OrthogonalJ:
    """g-orthogonal almost-complex structure from a Gram-Schmidt frame."""

    g: Field
    perm: tuple[int, ...] = (0, 1, 2, 3)

    def frame(self, p) -> np.ndarray:
        gp = np.asarray(self.g(np.asarray(p, dtype=float)), dtype=float)
        vecs = []
        for idx in self.perm:
            v = np.zeros(4)
            v[idx] = 1.0
            for e in vecs:
                v = v - (e @ gp @ v) * e
            n2 = v @ gp @ v
            if n2 <= 1e-14:
                raise GeometryError(f"degenerate metric at {p}")
            vecs.append(v / np.sqrt(n2))
        return np.column_stack(vecs)

    def __call__(self, p) -> np.ndarray:
        E = self.frame(p)
        return E @ J0 @ np.linalg.inv(E)

    def residuals(self, p) -> tuple[float, float]:
        """(|J^2 + I|, |J^T g J - g|) at p."""
        Jp = self(p)
        gp = np.asarray(self.g(np.asarray(p, dtype=float)), dtype=float)
        return (float(np.max(np.abs(Jp @ Jp + np.eye(4)))),
                float(np.max(np.abs(Jp.T @ gp @ Jp - gp))))


def orthogonal_j_from_frame(g: Field, seed: int = 0) -> OrthogonalJ:
    """Seed 0 uses the coordinate order; other seeds a fixed random permutation."""
    perm = (0, 1, 2, 3) if seed == 0 else tuple(int(i) for i in np.random.default_rng(seed).permutation(4))
    return OrthogonalJ(g, perm)


def fundamental_form(g: Field, J: Field) -> Field:
    """omega_ab = g(J e_a, e_b)."""
    def omega(p):
        return np.asarray(J(p)).T @ np.asarray(g(p))
    return omega


def exterior_derivative(alpha: Field, p, h: float, order: int = 2) -> np.ndarray:
    """(d alpha)_abc = d_a alpha_bc + d_b alpha_ca + d_c alpha_ab."""
    da = partials(alpha, p, h, order)
    return da + np.einsum("bca->abc", da) + np.einsum("cab->abc", da)


def covariant_d2form(alpha: Field, g: Field, p, h: float, order: int = 2) -> np.ndarray:
    """d alpha as the cyclic sum of nabla alpha (torsion-free connection)."""
    gam = christoffel(g, p, h, order=order)
    ap = np.asarray(alpha(p))
    da = partials(alpha, p, h, order)
    # (nabla_a alpha)_bc = d_a alpha_bc - G^d_ab alpha_dc - G^d_ac alpha_bd
    nab = da - np.einsum("dab,dc->abc", gam, ap) - np.einsum("dac,bd->abc", gam, ap)
    return nab + np.einsum("bca->abc", nab) + np.einsum("cab->abc", nab)


def covariant_derivative(v: Field, w: Field, g: Field, p, h: float, order: int = 2) -> np.ndarray:
    """(nabla_v w)(p)."""
    vp, wp = np.asarray(v(p)), np.asarray(w(p))
    dw = partials(w, p, h, order)  # dw[a, k]
    gam = christoffel(g, p, h, order=order)
    return vp @ dw + np.einsum("kij,i,j->k", gam, vp, wp)


def lie_bracket(v: Field, w: Field, p, h: float, order: int = 2) -> np.ndarray:
    vp, wp = np.asarray(v(p)), np.asarray(w(p))
    return vp @ partials(w, p, h, order) - wp @ partials(v, p, h, order)


@dataclass(frozen=True)
class DomegaResult:
    lhs: float
    rhs: float
    residual: float


def verify_domega(g: Field, J: Field, x: Field, z: Field, p, h: float = 1e-3, box: Box | None = None,
                  order: int = 2, j_tol: float = 1e-9) -> DomegaResult:
    p = np.asarray(p, dtype=float)
    if box is not None:
        box.check_interior(p, 2 * h * (2 if order == 4 else 1))
    Jp, gp = np.asarray(J(p)), np.asarray(g(p))
    if np.max(np.abs(Jp @ Jp + np.eye(4))) > j_tol or np.max(np.abs(Jp.T @ gp @ Jp - gp)) > j_tol:
        raise GeometryError(f"J is not a g-orthogonal almost-complex structure at {p}")

    def Jx(q):
        return np.asarray(J(q)) @ np.asarray(x(q))

    omega = fundamental_form(g, J)
    xp, zp = np.asarray(x(p)), np.asarray(z(p))
    lhs = float(np.einsum("abc,a,b,c->", covariant_d2form(omega, g, p, h, order), xp, Jp @ xp, zp))
    bracket = lie_bracket(x, Jx, p, h, order)
    acc = covariant_derivative(x, x, g, p, h, order) + covariant_derivative(Jx, Jx, g, p, h, order)
    rhs = float(bracket @ gp @ (Jp @ zp) - acc @ gp @ zp)
    return DomegaResult(lhs, rhs, abs(lhs - rhs))


# -- test data ---------------------------------------------------------------------

def flat_metric(p) -> np.ndarray:
    return np.eye(4)


def linear_field(a: Sequence[float], B: Sequence[Sequence[float]]) -> Field:
    a_, B_ = np.asarray(a, float), np.asarray(B, float)
    return lambda p: a_ + B_ @ np.asarray(p)


def conformal_metric(phi: Callable[[np.ndarray], float]) -> Field:
    return lambda p: np.exp(2.0 * phi(np.asarray(p))) * np.eye(4)


@dataclass(frozen=True)
class SmoothData:
    g: Field
    x: Field
    z: Field
    box: Box


def random_smooth_data(seed: int, amplitude: float = 0.1) -> SmoothData:
    """Metric ``I + amplitude * (symmetric sine bumps)`` and quadratic vector fields."""
    rng = np.random.default_rng(seed)
    nb = 3
    A = rng.uniform(-1, 1, size=(nb, 4, 4))
    A = (A + A.transpose(0, 2, 1)) / 8.0
    freq = rng.uniform(-1.5, 1.5, size=(nb, 4))
    phase = rng.uniform(0, 2 * np.pi, size=nb)

    def g(p):
        s = np.sin(freq @ np.asarray(p) + phase)
        return np.eye(4) + amplitude * np.einsum("b,bij->ij", s, A)

    def quad(r):
        a, B, C = r.uniform(-1, 1, 4), r.uniform(-1, 1, (4, 4)), r.uniform(-0.5, 0.5, (4, 4, 4))
        return lambda p: a + B @ np.asarray(p) + np.einsum("kij,i,j->k", C, p, p)

    return SmoothData(g, quad(rng), quad(rng), Box())


# -- expression and grid fields ---------------------------------------------------

COORDS = sympy.symbols("x1 x2 x3 x4")


def expression_field(exprs) -> Field:
    """Field from (nested lists of) expression strings in x1..x4."""
    arr = np.array(exprs, dtype=object)
    local = {str(s): s for s in COORDS}
    parsed = [sympy.sympify(str(e), locals=local) for e in arr.ravel()]
    extra = set().union(*(e.free_symbols for e in parsed)) - set(COORDS)
    if extra:
        raise GeometryError(f"unknown symbols {sorted(map(str, extra))} in field expressions")
    fns = [sympy.lambdify(COORDS, e, modules="numpy") for e in parsed]
    shape = arr.shape

    def f(p):
        p = np.asarray(p, dtype=float)
        return np.array([float(fn(*p)) for fn in fns]).reshape(shape)
    return f


GRID_MAGIC = b"SFG1"


@dataclass
class GridField:
    """Field sampled on a regular grid; only evaluable at grid nodes.

    File layout (little endian): magic ``SFG1``, 4 x int32 node counts,
    int32 component count, 4 x float64 origin, float64 spacing, then the
    float64 samples in row-major order of shape (n1, n2, n3, n4, ncomp).
    """

    data: np.ndarray
    origin: np.ndarray
    spacing: float
    shape: tuple[int, ...] = ()

    def __call__(self, p) -> np.ndarray:
        idx = (np.asarray(p, dtype=float) - self.origin) / self.spacing
        node = np.rint(idx)
        if np.max(np.abs(idx - node)) > 1e-6 or np.any(node < 0) or np.any(node >= self.data.shape[:4]):
            raise GeometryError(f"point {p} is not a grid node")
        v = self.data[tuple(node.astype(int))]
        return v.reshape(self.shape) if self.shape else v

    def box(self) -> Box:
        n = np.asarray(self.data.shape[:4])
        return Box(tuple(self.origin), tuple(self.origin + (n - 1) * self.spacing))

    def save(self, path: str | Path) -> None:
        n = self.data.shape
        with open(path, "wb") as fh:
            fh.write(GRID_MAGIC)
            fh.write(struct.pack("<5i", *n[:4], int(np.prod(n[4:]))))
            fh.write(struct.pack("<5d", *self.origin, self.spacing))
            fh.write(np.ascontiguousarray(self.data, dtype="<f8").tobytes())

    @classmethod
    def load(cls, path: str | Path, shape: tuple[int, ...] = ()) -> "GridField":
        raw = Path(path).read_bytes()
        if raw[:4] != GRID_MAGIC:
            raise GeometryError(f"{path}: not a grid file")
        n1, n2, n3, n4, nc = struct.unpack_from("<5i", raw, 4)
        *origin, h = struct.unpack_from("<5d", raw, 24)
        data = np.frombuffer(raw, dtype="<f8", offset=64)
        if data.size != n1 * n2 * n3 * n4 * nc:
            raise GeometryError(f"{path}: expected {n1 * n2 * n3 * n4 * nc} samples, found {data.size}")
        return cls(data.reshape(n1, n2, n3, n4, nc).copy(), np.asarray(origin), h, shape)

    @classmethod
    def sample(cls, F: Field, origin, spacing: float, counts, shape: tuple[int, ...] = ()) -> "GridField":
        origin = np.asarray(origin, dtype=float)
        out = np.empty(tuple(counts) + (int(np.prod(shape)) if shape else 1,))
        for idx in np.ndindex(*counts):
            out[idx] = np.asarray(F(origin + spacing * np.asarray(idx))).ravel()
        return cls(out, origin, spacing, shape)


# -- tautness audit ----------------------------------------------------------------

@dataclass
class RummlerReport:
    points: int
    positive: int
    closed: int
    failures: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.positive == self.points and self.closed == self.points

    def to_dict(self) -> dict:
        return {"points": self.points, "positive": self.positive, "closed": self.closed,
                "passed": self.passed, "kind": "pointwise necessary-condition audit",
                "failures": self.failures[:20]}


def rummler_check(mu: Field, tau1: Field, tau2: Field, points, h: float = 1e-3,
                  tol: float = 1e-6) -> RummlerReport:
    """At each point: mu(t1, t2) > 0 and |d mu(t1, t2, e_k)| < tol for all k.

    Sampled necessary conditions only; tautness is a global property.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    pos = closed = 0
    failures = []
    for p in pts:
        t1, t2 = np.asarray(tau1(p)), np.asarray(tau2(p))
        wedge = np.outer(t1, t2) - np.outer(t2, t1)
        if np.sqrt(0.5 * np.sum(wedge**2)) < 1e-10:
            raise GeometryError(f"plane field degenerate at {p}")
        val = float(t1 @ np.asarray(mu(p)) @ t2)
        dmu = np.einsum("abc,a,b->c", exterior_derivative(mu, p, h), t1, t2)
        ok_pos, ok_closed = val > 0, bool(np.max(np.abs(dmu)) < tol)
        pos += ok_pos
        closed += ok_closed
        if not (ok_pos and ok_closed):
            failures.append({"point": p.tolist(), "mu": val, "dmu": dmu.tolist()})
    return RummlerReport(len(pts), pos, closed, failures)
