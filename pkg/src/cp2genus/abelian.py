"""Finite abelian groups with cyclic automorphism actions and orbit counting.

Groups are given by invariant factors (Smith form convention: each factor
divides the next); elements are exponent tuples, one residue per factor.
A CyclicAction records how the unit group (Z/p^i)^* acts through a chosen
generator, which is how the ideal class groups H(Z[zeta_{p^i}]) carry
their Galois action here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

from .errors import Cp2Error, EnumerationGuard

DEFAULT_GUARD = 10**6


@dataclass(frozen=True)
class AbGroup:
    factors: tuple[int, ...]

    def __post_init__(self):
        for f in self.factors:
            if f < 2:
                raise Cp2Error(f"invariant factor {f} must be >= 2")
        for a, b in zip(self.factors, self.factors[1:]):
            if b % a != 0:
                raise Cp2Error(f"invariant factors {self.factors} violate divisibility")

    @property
    def order(self) -> int:
        return math.prod(self.factors)

    @property
    def rank(self) -> int:
        return len(self.factors)

    def identity(self) -> tuple[int, ...]:
        return (0,) * len(self.factors)

    def contains(self, x) -> bool:
        return len(x) == len(self.factors) and all(
            0 <= xi < f for xi, f in zip(x, self.factors)
        )

    def elements(self, guard: int = DEFAULT_GUARD):
        if self.order > guard:
            raise EnumerationGuard(f"group of order {self.order} exceeds guard {guard}")
        return list(product(*(range(f) for f in self.factors)))


TRIVIAL_GROUP = AbGroup(())


def _check_member(G: AbGroup, x):
    if len(x) != len(G.factors):
        raise Cp2Error(f"element {x} has wrong length for factors {G.factors}")
    if not G.contains(x):
        raise Cp2Error(f"element {x} out of range for factors {G.factors}")


def element_add(G: AbGroup, x, y) -> tuple[int, ...]:
    _check_member(G, x)
    _check_member(G, y)
    return tuple((a + b) % f for a, b, f in zip(x, y, G.factors))


def element_neg(G: AbGroup, x) -> tuple[int, ...]:
    _check_member(G, x)
    return tuple((-a) % f for a, f in zip(x, G.factors))


def reduce_element(G: AbGroup, raw) -> tuple[int, ...]:
    """Coerce an exponent vector into G, padding missing entries with zeros.

    Out-of-range entries are an error, as are nonzero entries beyond the
    number of invariant factors (there is nothing for them to index).
    """
    raw = tuple(raw)
    n = len(G.factors)
    if len(raw) > n and any(c != 0 for c in raw[n:]):
        raise Cp2Error(f"exponent vector {raw} too long for factors {G.factors}")
    for i in range(min(n, len(raw))):
        if not 0 <= raw[i] < G.factors[i]:
            raise Cp2Error(
                f"class exponent {raw[i]} out of range [0, {G.factors[i]}) "
                f"at position {i}"
            )
    return tuple(raw[i] if i < len(raw) else 0 for i in range(n))


@lru_cache(maxsize=None)
def primitive_root(modulus: int) -> int:
    """Smallest generator of (Z/modulus)^* for modulus in {1, 2, 4, p^i, 2p^i}."""
    if modulus in (1, 2):
        return 1
    if modulus == 4:
        return 3
    units = [k for k in range(1, modulus) if math.gcd(k, modulus) == 1]
    target = len(units)
    for g in units[1:]:
        x, order = g, 1
        while x != 1:
            x = x * g % modulus
            order += 1
        if order == target:
            return g
    raise Cp2Error(f"(Z/{modulus})^* is not cyclic")


@dataclass(frozen=True)
class CyclicAction:
    """An action of (Z/modulus)^* on a finite abelian group.

    generator_matrix gives the automorphism induced by generator_residue;
    every unit k acts as the d-th matrix power where
    generator_residue^d = k (mod modulus).
    """

    target: AbGroup
    modulus: int
    acting_order: int
    generator_residue: int
    generator_matrix: tuple[tuple[int, ...], ...]

    def validate(self, where: str = "action"):
        n = self.target.rank
        if len(self.generator_matrix) != n or any(
            len(row) != n for row in self.generator_matrix
        ):
            raise Cp2Error(f"{where}: generator_matrix is not {n}x{n}")
        if self.acting_order < 1:
            raise Cp2Error(f"{where}: acting_order must be >= 1")
        if math.gcd(self.generator_residue, self.modulus) != 1:
            raise Cp2Error(
                f"{where}: generator_residue {self.generator_residue} "
                f"is not a unit mod {self.modulus}"
            )
        if pow(self.generator_residue, self.acting_order, self.modulus) != 1:
            raise Cp2Error(
                f"{where}: generator_residue^acting_order != 1 mod {self.modulus}"
            )
        # well-definedness on the quotient: factor_i | M[i][j]*factor_j
        fs = self.target.factors
        for i in range(n):
            for j in range(n):
                if (self.generator_matrix[i][j] * fs[j]) % fs[i] != 0:
                    raise Cp2Error(
                        f"{where}: matrix entry [{i}][{j}] does not define "
                        f"a map on the group"
                    )
        # applying acting_order times must give the identity; this also
        # forces the matrix to act as an automorphism
        for j in range(n):
            e = tuple(1 if i == j else 0 for i in range(n))
            x = e
            for _ in range(self.acting_order):
                x = self._apply_matrix(x)
            if x != e:
                raise Cp2Error(
                    f"{where}: matrix^acting_order is not the identity on the group"
                )

    def _apply_matrix(self, x) -> tuple[int, ...]:
        fs = self.target.factors
        M = self.generator_matrix
        return tuple(
            sum(M[i][j] * x[j] for j in range(len(x))) % fs[i] for i in range(len(x))
        )

    def dlog(self, k: int) -> int:
        """Exponent d with generator_residue^d = k (mod modulus)."""
        k %= self.modulus
        if self.modulus == 1:
            return 0
        if math.gcd(k, self.modulus) != 1:
            raise Cp2Error(f"{k} is not a unit mod {self.modulus}")
        x = 1
        for d in range(self.acting_order):
            if x == k:
                return d
            x = x * self.generator_residue % self.modulus
        raise Cp2Error(
            f"{k} is not a power of generator {self.generator_residue} "
            f"mod {self.modulus}"
        )


def trivial_action(modulus: int, acting_order: int) -> CyclicAction:
    return CyclicAction(TRIVIAL_GROUP, modulus, acting_order, primitive_root(modulus), ())


def apply_action(A: CyclicAction, k: int, x) -> tuple[int, ...]:
    _check_member(A.target, x)
    d = A.dlog(k)
    for _ in range(d):
        x = A._apply_matrix(x)
    return x


def orbits(A: CyclicAction, guard: int = DEFAULT_GUARD) -> list[list[tuple[int, ...]]]:
    """Partition of the group into orbits of the action.

    The count is cross-checked against the Burnside average internally.
    """
    elems = A.target.elements(guard)
    seen: set = set()
    parts = []
    for e in elems:
        if e in seen:
            continue
        orbit = [e]
        seen.add(e)
        x = A._apply_matrix(e)
        while x != e:
            orbit.append(x)
            seen.add(x)
            x = A._apply_matrix(x)
        parts.append(orbit)
    assert len(parts) == burnside_orbit_count(A, guard)
    return parts


def burnside_orbit_count(A: CyclicAction, guard: int = DEFAULT_GUARD) -> int:
    """Average number of fixed points over the acting group."""
    elems = A.target.elements(guard)
    total = 0
    for d in range(A.acting_order):
        power = _matrix_power_map(A, d)
        total += sum(1 for e in elems if power(e) == e)
    assert total % A.acting_order == 0
    return total // A.acting_order


def _matrix_power_map(A: CyclicAction, d: int):
    def go(x):
        for _ in range(d):
            x = A._apply_matrix(x)
        return x

    return go


def orbit_count(A: CyclicAction, guard: int = DEFAULT_GUARD) -> int:
    return len(orbits(A, guard))


def diagonal_orbits(
    driver_modulus: int,
    actions: tuple[CyclicAction, ...],
    extras: tuple = (),
    guard: int = DEFAULT_GUARD,
) -> int:
    """Orbit count of the simultaneous action on the Cartesian product.

    A unit k mod driver_modulus drives every component at once, acting on
    the i-th group through k mod actions[i].modulus; the extras are
    plain finite sets carrying the trivial action.
    """
    if driver_modulus < 2:
        raise Cp2Error("driver modulus must be >= 2")
    for A in actions:
        if driver_modulus % A.modulus != 0:
            raise Cp2Error(
                f"action modulus {A.modulus} does not divide driver {driver_modulus}"
            )
    sizes = [A.target.order for A in actions] + [len(s) for s in extras]
    if math.prod(sizes) > guard:
        raise EnumerationGuard(f"product of size {math.prod(sizes)} exceeds guard {guard}")
    component_elems = [A.target.elements(guard) for A in actions]
    points = list(product(*component_elems, *[list(s) for s in extras]))
    units = [k for k in range(1, driver_modulus) if math.gcd(k, driver_modulus) == 1]
    na = len(actions)

    def act(k, pt):
        moved = tuple(
            apply_action(actions[i], k % actions[i].modulus, pt[i]) for i in range(na)
        )
        return moved + pt[na:]

    seen: set = set()
    count = 0
    for pt in points:
        if pt in seen:
            continue
        count += 1
        for k in units:
            seen.add(act(k, pt))
    # Burnside cross-check over the full driving group
    total = sum(sum(1 for pt in points if act(k, pt) == pt) for k in units)
    assert total % len(units) == 0 and total // len(units) == count
    return count
