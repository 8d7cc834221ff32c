"""Profinite genus of the groups Z^n x| C_{p^2}.

For a faithful semidirect product the genus size is computed two ways:

* a closed-form dispatch over module shapes, multiplying orbit counts
  of the Galois actions on the two class groups, on U_t, and the
  two-element split detected by Sigma;

* direct enumeration: list every isomorphism-invariant tuple in the
  genus of the module, then count orbits of the diagonal G(p^2) action.

The two engines agree on every tested shape with trivial class groups;
with nontrivial class data any disagreement is reported, never
suppressed.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from . import galois, iso, lattice, modring
from .abelian import apply_action, orbit_count, primitive_root
from .classdata import ClassData
from .errors import EnumerationGuard, NotFaithful
from .iso import IsoInvariants
from .lattice import Faithfulness, LatticeDescriptor

DEFAULT_GUARD = 10**6

CASE_TRIVIAL = "TrivialModule"
CASE_NONFAITHFUL = "NonFaithfulNontrivial"
CASE_SO_CS = "SoCs"
CASE_CS_BS = "CsBsAbsorption"
CASE_SEM_ABSORCAO = "SemAbsorcaoSemD"
CASE_MAIS_SIMPLES = "MaisSimples"
CASE_COM_BC = "ComBC"
CASE_ULTIMAO = "Ultimao"


@dataclass(frozen=True)
class SemidirectDescriptor:
    """The group Z^rank(module) x| C_{p^2} acting through the module."""

    module: LatticeDescriptor


@dataclass(frozen=True)
class GenusReport:
    closed_form: Optional[tuple[int, str]]
    enumeration: Optional[int]
    agree: Optional[bool]
    bounds: Optional[tuple[int, int]]
    notes: tuple[str, ...]

    @property
    def value(self) -> Optional[int]:
        if self.enumeration is not None:
            return self.enumeration
        return self.closed_form[0] if self.closed_form else None


def _require_faithful(E: SemidirectDescriptor):
    if lattice.faithfulness(E.module) != Faithfulness.FAITHFUL:
        raise NotFaithful(
            "this decision procedure applies only to faithful actions; "
            f"module is {lattice.faithfulness(E.module)}"
        )


def group_isomorphic(E1: SemidirectDescriptor, E2: SemidirectDescriptor) -> bool:
    """Group isomorphism of the semidirect products: the modules must be
    isomorphic up to a Galois twist."""
    _require_faithful(E1)
    _require_faithful(E2)
    return galois.twisted_isomorphic(E1.module, E2.module) is not None


def profinite_isomorphic(E1: SemidirectDescriptor, E2: SemidirectDescriptor) -> bool:
    """Isomorphism of profinite completions: equality of the p-adic
    parameters (with the C/D columns merged)."""
    _require_faithful(E1)
    _require_faithful(E2)
    return iso.same_genus(E1.module, E2.module)


@lru_cache(maxsize=None)
def ut_orbit_count(context: ClassData, t: int) -> int:
    """Orbits of the Galois action on the coset representatives of U_t."""
    quotient = context.unit_quotient(t)
    gen = primitive_root(context.p ** 2)
    seen: set = set()
    count = 0
    for rep in quotient.reps:
        if rep in seen:
            continue
        count += 1
        x = rep
        while x not in seen:
            seen.add(x)
            x = quotient.rep_of(modring.galois_on_unit(gen, x))
    return count


def enumerate_genus(D: LatticeDescriptor, guard: int = DEFAULT_GUARD) -> list[IsoInvariants]:
    """Every isomorphism-invariant tuple realized in the genus of D.

    Class coordinates range over the full class group exactly when some
    summand carries the corresponding ideal slot; the U_t coordinate
    ranges over all cosets exactly when the coset invariant applies and
    an extension summand is present; the quadratic character takes both
    signs exactly when it applies and the merged C/D part is nonzero.
    """
    ctx = D.context
    base = iso.invariants_of(D)
    Hp, Hp2 = ctx.H_p.target, ctx.H_p2.target

    r_size = Hp.order if lattice.has_R_slot(D) else 1
    s_size = Hp2.order if lattice.has_S_slot(D) else 1
    has_ext = any(s.kind in lattice.EXTENSION_KINDS for s in D.summands)
    if base.u0_class is not None and has_ext:
        u_range = list(ctx.unit_quotient(base.t).reps)
    else:
        u_range = [base.u0_class]
    if base.quad_char is not None and sum(base.padic.cd) >= 1:
        chi_range = [1, -1]
    else:
        chi_range = [base.quad_char]

    total = r_size * s_size * len(u_range) * len(chi_range)
    if total > guard:
        raise EnumerationGuard(f"genus of size {total} exceeds guard {guard}")

    r_range = Hp.elements(guard) if lattice.has_R_slot(D) else [Hp.identity()]
    s_range = Hp2.elements(guard) if lattice.has_S_slot(D) else [Hp2.identity()]
    out = []
    for rc in r_range:
        for sc in s_range:
            for u in u_range:
                for chi in chi_range:
                    out.append(
                        IsoInvariants(
                            padic=base.padic,
                            R_class=rc,
                            S_class=sc,
                            t=base.t,
                            u0_class=u,
                            quad_char=chi,
                        )
                    )
    return out


def _act_on_invariants(
    ctx: ClassData, k: int, inv: IsoInvariants, quotient
) -> IsoInvariants:
    u = inv.u0_class
    if u is not None:
        u = quotient.rep_of(modring.galois_on_unit(k, u))
    return IsoInvariants(
        padic=inv.padic,
        R_class=apply_action(ctx.H_p, k % ctx.p, inv.R_class),
        S_class=apply_action(ctx.H_p2, k, inv.S_class),
        t=inv.t,
        u0_class=u,
        quad_char=inv.quad_char,
    )


def orbit_genus_count(D: LatticeDescriptor, guard: int = DEFAULT_GUARD) -> int:
    """Number of orbits of the diagonal Galois action on the genus of D.

    For a faithful module this is exactly the number of isomorphism
    classes of groups in the profinite genus of Z^n x| C_{p^2}.
    """
    ctx = D.context
    tuples = enumerate_genus(D, guard)
    # the U_t quotient is only needed when the coset coordinate is live
    quotient = None
    if tuples and tuples[0].u0_class is not None:
        quotient = ctx.unit_quotient(lattice.t_of(D))
    gen = primitive_root(ctx.p ** 2)
    seen: set = set()
    count = 0
    for inv in tuples:
        if inv in seen:
            continue
        count += 1
        x = inv
        while x not in seen:
            seen.add(x)
            x = _act_on_invariants(ctx, gen, x, quotient)
    return count


def closed_form_count(E: SemidirectDescriptor) -> Optional[tuple[int, str]]:
    """The genus size by shape dispatch, or None when no case matches.

    Case tags name the matched shape; uncovered faithful shapes (for
    example an Ec summand next to a type C part when p = 1 mod 4) are
    deliberately left to the enumeration engine.
    """
    D = E.module
    ctx = D.context
    p = D.p
    n = lattice.counts(D)
    faith = lattice.faithfulness(D)
    if faith == Faithfulness.TRIVIAL:
        return (1, CASE_TRIVIAL)
    orb_hp = orbit_count(ctx.H_p)
    if faith == Faithfulness.ORDER_P:
        return (orb_hp, CASE_NONFAITHFUL)
    orb_hp2 = orbit_count(ctx.H_p2)
    n_q = n["B"] + n["C"] + n["D"] + n["E"] + n["F"]
    r_side = n["b"] + n["Eb"] >= 1
    s_side = n["c"] + n["Ec"] >= 1

    if not r_side and n_q == 0 and s_side:
        return (orb_hp2, CASE_SO_CS)

    if p % 4 != 1:
        if sum([r_side, s_side, n_q >= 1]) >= 2:
            return (orb_hp * orb_hp2, CASE_CS_BS)
        if not r_side and not s_side and n_q >= 1:
            orb_ut = ut_orbit_count(ctx, lattice.t_of(D))
            return (orb_hp * orb_hp2 * orb_ut, CASE_SEM_ABSORCAO)
        return None

    # p = 1 (mod 4)
    sig = lattice.sigma(D)
    if not r_side and not s_side and n_q >= 1:
        orb_ut = ut_orbit_count(ctx, lattice.t_of(D))
        return (orb_hp * orb_hp2 * orb_ut * sig, CASE_MAIS_SIMPLES)
    if n["Z"] + n["Eb"] + n["Ec"] + n["B"] + n["F"] == 0:
        cde = n["C"] + n["D"] + n["E"]
        if (n["b"] >= 1 and (n["c"] >= 1 or cde >= 1)) or (
            n["b"] + n["c"] >= 1 and cde >= 1
        ):
            return (orb_hp * orb_hp2 * sig, CASE_COM_BC)
    if (n["Ec"] >= 1 and n["Eb"] >= 1) or (
        n["b"] + n["c"] >= 1
        and (n["Z"] + n["Eb"] + n["Ec"] >= 1 or n["B"] + n["F"] >= 1)
    ):
        return (orb_hp * orb_hp2, CASE_ULTIMAO)
    return None


def genus_bounds(E: SemidirectDescriptor) -> tuple[int, int]:
    """Lower and upper bounds for the genus size of a faithful product."""
    _require_faithful(E)
    ctx = E.module.context
    orb_hp = orbit_count(ctx.H_p)
    orb_hp2 = orbit_count(ctx.H_p2)
    orb_ut = ut_orbit_count(ctx, lattice.t_of(E.module))
    return (orb_hp2, 2 * orb_hp * orb_hp2 * orb_ut)


def genus_report(E: SemidirectDescriptor, guard: int = DEFAULT_GUARD) -> GenusReport:
    """Run both engines, record agreement, and check the genus bounds."""
    D = E.module
    notes = []
    closed = closed_form_count(E)
    if closed is None:
        notes.append("no closed-form case matches this shape; enumeration only")
    enumeration = None
    try:
        enumeration = orbit_genus_count(D, guard)
    except EnumerationGuard as exc:
        notes.append(f"enumeration skipped: {exc}")
    agree = None
    if closed is not None and enumeration is not None:
        agree = closed[0] == enumeration
        if not agree:
            notes.append(
                "closed form and enumeration disagree; closed-form products "
                "of orbit counts are only verified for trivial class groups"
            )
    bounds = None
    if lattice.faithfulness(D) == Faithfulness.FAITHFUL:
        bounds = genus_bounds(E)
        for label, value in (("closed form", closed[0] if closed else None),
                             ("enumeration", enumeration)):
            if value is not None and not bounds[0] <= value <= bounds[1]:
                notes.append(f"{label} value {value} violates bounds {bounds}")
    return GenusReport(closed, enumeration, agree, bounds, tuple(notes))


def report_to_json(rep: GenusReport) -> dict:
    return {
        "closed_form": (
            {"value": rep.closed_form[0], "case": rep.closed_form[1]}
            if rep.closed_form
            else None
        ),
        "enumeration": rep.enumeration,
        "agree": rep.agree,
        "bounds": list(rep.bounds) if rep.bounds else None,
        "notes": list(rep.notes),
    }
