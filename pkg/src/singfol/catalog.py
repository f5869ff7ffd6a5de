"""Named closed 4-manifolds and the ``A#B`` connected-sum notation."""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from .lattice import IntersectionForm, LatticeError, ManifoldInvariants

H = ((0, 1), (1, 0))

E8 = (
    (2, -1, 0, 0, 0, 0, 0, 0),
    (-1, 2, -1, 0, 0, 0, 0, 0),
    (0, -1, 2, -1, 0, 0, 0, 0),
    (0, 0, -1, 2, -1, 0, 0, 0),
    (0, 0, 0, -1, 2, -1, 0, -1),
    (0, 0, 0, 0, -1, 2, -1, 0),
    (0, 0, 0, 0, 0, -1, 2, 0),
    (0, 0, 0, 0, -1, 0, 0, 2),
)


def _form(rows) -> IntersectionForm:
    return IntersectionForm(tuple(tuple(r) for r in rows))


def _k3_form() -> IntersectionForm:
    hyp = _form(H)
    neg_e8 = _form(tuple(tuple(-v for v in r) for r in E8))
    q = hyp.block_sum(hyp).block_sum(hyp)
    return q.block_sum(neg_e8).block_sum(neg_e8)


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    invariants: ManifoldInvariants
    provenance: str


_ENTRIES = {
    "S4": CatalogEntry("S4", ManifoldInvariants("S4", 0, _form(())), "4-sphere, H^2 = 0"),
    "CP2": CatalogEntry("CP2", ManifoldInvariants("CP2", 0, _form(((1,),))), "complex projective plane, basis: line h"),
    "CP2bar": CatalogEntry(
        "CP2bar", ManifoldInvariants("CP2bar", 0, _form(((-1,),))), "CP2 with reversed orientation"
    ),
    "S2xS2": CatalogEntry(
        "S2xS2", ManifoldInvariants("S2xS2", 0, _form(H)), "product of spheres, basis: the two factors"
    ),
    "K3": CatalogEntry("K3", ManifoldInvariants("K3", 0, _k3_form()), "K3 surface, form 3H + 2(-E8)"),
    "S3xS1": CatalogEntry(
        "S3xS1", ManifoldInvariants("S3xS1", 1, _form(())), "Hopf-type product, b1 = 1, H^2/torsion = 0"
    ),
}

# name -> (chi, sigma, p1), written out by hand for the self-test
EXPECTED = {
    "S4": (2, 0, 0),
    "CP2": (3, 1, 3),
    "CP2bar": (3, -1, -3),
    "S2xS2": (4, 0, 0),
    "K3": (24, -16, -48),
    "S3xS1": (0, 0, 0),
    "2S3xS1": (-2, 0, 0),
    "3S3xS1": (-4, 0, 0),
    "CP2#CP2bar": (4, 0, 0),
}

_MULTIPLE = re.compile(r"^(\d+)\s*(.+)$")


def names() -> list[str]:
    return list(_ENTRIES)


def entries() -> list[CatalogEntry]:
    return list(_ENTRIES.values())


def _single(token: str) -> ManifoldInvariants:
    token = token.strip()
    if token in _ENTRIES:
        return _ENTRIES[token].invariants
    m = _MULTIPLE.match(token)
    if m and m.group(2) in _ENTRIES:
        k = int(m.group(1))
        if k == 0:
            return ManifoldInvariants(token, 0, _form(()))  # empty sum is S4
        base = _ENTRIES[m.group(2)].invariants
        out = base
        for _ in range(k - 1):
            out = out.connected_sum(base)
        return ManifoldInvariants(token, out.b1, out.form)
    raise LatticeError(f"unknown manifold {token!r}; catalog: {', '.join(names())}")


def lookup(name: str) -> ManifoldInvariants:
    """Catalog name, ``kNAME`` for a k-fold connected sum, or ``A#B#...``."""
    parts = name.split("#")
    out = _single(parts[0])
    for p in parts[1:]:
        out = out.connected_sum(_single(p))
    return ManifoldInvariants(name, out.b1, out.form)


def load_manifold(source: str | Path) -> ManifoldInvariants:
    """A JSON manifold description file if ``source`` is an existing path, else a catalog name."""
    p = Path(source)
    if str(source).endswith(".json") or p.is_file():
        return ManifoldInvariants.load(p)
    return lookup(str(source))


def standard_test_set() -> list[ManifoldInvariants]:
    """Catalog entries plus the connected sums used throughout the tests."""
    extra = ["2S3xS1", "3S3xS1", "4S3xS1", "5S3xS1", "CP2#CP2bar", "CP2#CP2", "2CP2bar"]
    return [e.invariants for e in entries()] + [lookup(n) for n in extra]
