"""Finite groups by multiplication table, twisted sectors, and degree shifting.

Conjugacy classes index the sectors of the inertia object of a global
quotient; each sector carries rotation numbers theta_i = m_i/m in [0,1)
whose sum is the rational degree shift, and a formal Betti table standing
in for the sector cohomology.  All arithmetic here is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .contact import MonodromyTable
from .errors import ValidationError

MAX_TABLE_ORDER = 64


@dataclass(frozen=True)
class FiniteGroupTable:
    """A finite group given extensionally: mul[a][b] is the product index."""

    order: int
    mul: tuple[tuple[int, ...], ...]
    identity: int = 0

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], identity: int = 0) -> "FiniteGroupTable":
        table = cls(order=len(rows), mul=tuple(tuple(int(x) for x in row) for row in rows),
                    identity=identity)
        table.validate()
        return table

    @classmethod
    def cyclic(cls, n: int) -> "FiniteGroupTable":
        if n <= 0:
            raise ValidationError(f"cyclic group order must be positive, got {n}")
        rows = tuple(tuple((a + b) % n for b in range(n)) for a in range(n))
        return cls(order=n, mul=rows, identity=0)

    def validate(self) -> None:
        n = self.order
        if n <= 0 or n > MAX_TABLE_ORDER:
            raise ValidationError(f"group order {n} outside supported range 1..{MAX_TABLE_ORDER}")
        if len(self.mul) != n or any(len(row) != n for row in self.mul):
            raise ValidationError(f"multiplication table is not {n}x{n}")
        for a in range(n):
            for b in range(n):
                if not 0 <= self.mul[a][b] < n:
                    raise ValidationError(f"table entry mul[{a}][{b}]={self.mul[a][b]} out of range")
        e = self.identity
        if not 0 <= e < n:
            raise ValidationError(f"identity index {e} out of range")
        for a in range(n):
            if self.mul[e][a] != a or self.mul[a][e] != a:
                raise ValidationError(f"element {a} breaks the two-sided unit law at identity {e}")
        for a in range(n):
            if all(self.mul[a][b] != e or self.mul[b][a] != e for b in range(n)):
                raise ValidationError(f"element {a} has no two-sided inverse")
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    if self.mul[self.mul[a][b]][c] != self.mul[a][self.mul[b][c]]:
                        raise ValidationError(f"associativity fails on triple ({a},{b},{c})")

    def inverse(self, a: int) -> int:
        e = self.identity
        for b in range(self.order):
            if self.mul[a][b] == e and self.mul[b][a] == e:
                return b
        raise ValidationError(f"element {a} has no two-sided inverse")

    def element_order(self, a: int) -> int:
        x = a
        n = 1
        while x != self.identity:
            x = self.mul[x][a]
            n += 1
            if n > self.order:
                raise ValidationError(f"element {a} does not generate a finite cycle")
        return n


@dataclass(frozen=True)
class ConjugacyClass:
    representative: int
    members: frozenset[int]
    ord: int

    def __contains__(self, element: int) -> bool:
        return element in self.members


def conjugacy_classes(group: FiniteGroupTable) -> list[ConjugacyClass]:
    """Conjugation orbits; the identity class comes first, then by least member."""
    group.validate()
    n = group.order
    seen: set[int] = set()
    classes: list[ConjugacyClass] = []
    inverses = [group.inverse(g) for g in range(n)]
    for a in range(n):
        if a in seen:
            continue
        orbit = {group.mul[group.mul[g][a]][inverses[g]] for g in range(n)}
        seen |= orbit
        rep = min(orbit)
        classes.append(ConjugacyClass(rep, frozenset(orbit), group.element_order(rep)))
    for cls_ in classes:
        orders = {group.element_order(m) for m in cls_.members}
        if orders != {cls_.ord}:
            raise ValidationError(f"class of {cls_.representative} mixes element orders {orders}")
    classes.sort(key=lambda c: (c.representative != group.identity, min(c.members)))
    return classes


def inverse_class(group: FiniteGroupTable, cls_: ConjugacyClass) -> ConjugacyClass:
    """The class of inverses; applying twice is the identity on classes."""
    inv_members = frozenset(group.inverse(m) for m in cls_.members)
    for candidate in conjugacy_classes(group):
        if candidate.members == inv_members:
            return candidate
    raise ValidationError(f"no class holds the inverses of class of {cls_.representative}")


def class_label(index: int) -> str:
    return f"c{index}"


def monodromy_table(group: FiniteGroupTable) -> MonodromyTable:
    """Label the classes c0,c1,... (c0 = identity) and record orders and inverses."""
    classes = conjugacy_classes(group)
    index_of = {cls_.members: i for i, cls_ in enumerate(classes)}
    orders: dict[str, int] = {}
    inverses: dict[str, str] = {}
    for i, cls_ in enumerate(classes):
        orders[class_label(i)] = cls_.ord
        inv = inverse_class(group, cls_)
        inverses[class_label(i)] = class_label(index_of[inv.members])
    return MonodromyTable(orders=orders, inverses=inverses)


@dataclass(frozen=True)
class SectorDatum:
    """One twisted sector: rotation numbers and a formal Betti table.

    shift and sector_dim are always recomputed from the rotations; betti maps
    an integer cohomology degree of the sector to a multiplicity.
    """

    cls: ConjugacyClass
    rotations: tuple[Fraction, ...]
    betti: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for theta in self.rotations:
            if not 0 <= theta < 1:
                raise ValidationError(
                    f"rotation {theta} of class of {self.cls.representative} outside [0,1)"
                )
            if self.cls.ord % theta.denominator != 0:
                raise ValidationError(
                    f"rotation {theta} has denominator not dividing ord={self.cls.ord} "
                    f"(class of {self.cls.representative})"
                )
        for degree, mult in self.betti.items():
            if mult < 0:
                raise ValidationError(f"negative Betti number at degree {degree}")

    @property
    def shift(self) -> Fraction:
        return sum(self.rotations, Fraction(0))

    def sector_dim(self, ambient_dim: int) -> int:
        return ambient_dim - sum(1 for t in self.rotations if t != 0)

    def total_rank(self) -> int:
        return sum(self.betti.values())


def degree_shift(sector: SectorDatum) -> Fraction:
    """Sum of the rotation numbers, an exact rational in [0, n)."""
    return sector.shift


@dataclass(frozen=True)
class CRProfile:
    """Sector data covering every conjugacy class of a fixed ambient dimension."""

    group: FiniteGroupTable
    ambient_dim: int
    sectors: tuple[SectorDatum, ...]

    def __post_init__(self) -> None:
        classes = conjugacy_classes(self.group)
        by_members = {s.cls.members: s for s in self.sectors}
        if len(by_members) != len(self.sectors):
            raise ValidationError("duplicate sector for a conjugacy class")
        for cls_ in classes:
            if cls_.members not in by_members:
                raise ValidationError(f"no sector for the class of {cls_.representative}")
        for sector in self.sectors:
            if len(sector.rotations) != self.ambient_dim:
                raise ValidationError(
                    f"sector of class of {sector.cls.representative} has "
                    f"{len(sector.rotations)} rotations, ambient dim is {self.ambient_dim}"
                )
        for sector in self.sectors:
            if self.group.identity in sector.cls.members:
                if any(t != 0 for t in sector.rotations):
                    raise ValidationError("untwisted sector has a nonzero rotation")
        # inverse-class rotations must be the complements (1 - theta) mod 1
        for sector in self.sectors:
            inv = inverse_class(self.group, sector.cls)
            partner = by_members[inv.members]
            expected = sorted((1 - t) % 1 if t != 0 else Fraction(0) for t in sector.rotations)
            if sorted(partner.rotations) != expected:
                raise ValidationError(
                    f"rotations of the inverse of class of {sector.cls.representative} "
                    f"are not the complements"
                )

    def sector_of(self, cls_: ConjugacyClass) -> SectorDatum:
        for sector in self.sectors:
            if sector.cls.members == cls_.members:
                return sector
        raise ValidationError(f"no sector for the class of {cls_.representative}")

    def labeled_sectors(self) -> list[tuple[str, SectorDatum]]:
        """Sectors in class order with their c{i} labels."""
        classes = conjugacy_classes(self.group)
        return [(class_label(i), self.sector_of(cls_)) for i, cls_ in enumerate(classes)]


@dataclass(frozen=True)
class PairingViolation:
    sector: str
    degree: int
    found: int
    expected: int
    detail: str


@dataclass(frozen=True)
class PairingReport:
    violations: tuple[PairingViolation, ...]
    checked_pairs: int

    @property
    def ok(self) -> bool:
        return not self.violations


def _pairing_scan(profile: CRProfile) -> PairingReport:
    classes = conjugacy_classes(profile.group)
    label_of = {cls_.members: class_label(i) for i, cls_ in enumerate(classes)}
    n = profile.ambient_dim
    violations: list[PairingViolation] = []
    checked = 0
    for sector in profile.sectors:
        label = label_of[sector.cls.members]
        inv = inverse_class(profile.group, sector.cls)
        partner = profile.sector_of(inv)
        dim = sector.sector_dim(n)
        degrees = sorted(set(sector.betti) | {2 * dim - d for d in partner.betti})
        for d in degrees:
            checked += 1
            found = sector.betti.get(d, 0)
            expected = partner.betti.get(2 * dim - d, 0)
            if found != expected:
                violations.append(PairingViolation(
                    sector=label, degree=d, found=found, expected=expected,
                    detail=f"betti[{d}]={found} but inverse sector betti[{2 * dim - d}]={expected}",
                ))
        # paired CR degrees must sum to 2n: (d + 2 shift) + (2 dim - d + 2 shift') = 2n
        cr_sum = 2 * dim + 2 * sector.shift + 2 * partner.shift
        if cr_sum != 2 * n:
            violations.append(PairingViolation(
                sector=label, degree=-1, found=0, expected=0,
                detail=f"paired CR degrees sum to {cr_sum}, expected {2 * n}",
            ))
    return PairingReport(tuple(violations), checked)


def pairing_check(profile: CRProfile) -> PairingReport:
    """Report (never raise) every violation of the graded pairing shape."""
    return _pairing_scan(profile)


def cr_poincare_polynomial(profile: CRProfile) -> list[tuple[Fraction, int]]:
    """Rationally graded Betti counts: each sector's table shifted up by 2*shift."""
    report = _pairing_scan(profile)
    if not report.ok:
        first = report.violations[0]
        raise ValidationError(f"pairing shape violated at sector {first.sector}: {first.detail}")
    counts: dict[Fraction, int] = {}
    for sector in profile.sectors:
        for degree, mult in sector.betti.items():
            if mult == 0:
                continue
            cr_degree = Fraction(degree) + 2 * sector.shift
            counts[cr_degree] = counts.get(cr_degree, 0) + mult
    return sorted(counts.items())
