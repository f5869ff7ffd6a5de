"""Singular 2-dimensional foliations on closed 4-manifolds: lattice arithmetic,
bundle surgery, existence verdicts, Hopf degrees and a curvature identity check."""

__version__ = "0.1.0"
