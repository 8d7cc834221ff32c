"""Calculator for lattices over Z[C_{p^2}] and the profinite genus of Z^n x| C_{p^2}."""

from .classdata import ClassData, builtin, load_config
from .galois import twist, twisted_isomorphic
from .genus import (
    SemidirectDescriptor,
    closed_form_count,
    enumerate_genus,
    genus_report,
    group_isomorphic,
    orbit_genus_count,
    profinite_isomorphic,
)
from .iso import invariants_of, isomorphic, padic_completion, same_genus
from .lattice import LatticeDescriptor, parse, render

__version__ = "0.1.0"

__all__ = [
    "ClassData",
    "LatticeDescriptor",
    "SemidirectDescriptor",
    "builtin",
    "closed_form_count",
    "enumerate_genus",
    "genus_report",
    "group_isomorphic",
    "invariants_of",
    "isomorphic",
    "load_config",
    "orbit_genus_count",
    "padic_completion",
    "parse",
    "profinite_isomorphic",
    "render",
    "same_genus",
    "twist",
    "twisted_isomorphic",
]
