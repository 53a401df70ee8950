"""Fractional contact orders, partition enumeration, and insertion automorphisms.

A contact order at an orbifold point with local group Z_r is a positive
rational l = k/r carried as the raw pair (k, r); k is the lowest nonzero
degree of the normal component of the local lift and is NOT reduced against
r, because downstream degree products need the raw numerators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, Sequence

from .errors import ValidationError


@dataclass(frozen=True, order=True)
class ContactOrder:
    """A fractional contact order k/r with monodromy order r."""

    k: int
    r: int = 1

    def __post_init__(self) -> None:
        if self.k <= 0 or self.r <= 0:
            raise ValidationError(f"contact order needs k>0 and r>0, got k={self.k}, r={self.r}")

    @property
    def value(self) -> Fraction:
        return Fraction(self.k, self.r)

    def __str__(self) -> str:
        return f"{self.k}/{self.r}"

    @classmethod
    def parse(cls, text: str) -> "ContactOrder":
        """Parse the raw 'k/r' form ('k' alone means r=1)."""
        parts = text.strip().split("/")
        if len(parts) == 1:
            return cls(int(parts[0]), 1)
        if len(parts) == 2:
            return cls(int(parts[0]), int(parts[1]))
        raise ValidationError(f"cannot parse contact order {text!r}")


@dataclass(frozen=True)
class MonodromyTable:
    """Conjugacy-class labels of the divisor group with orders and inverses.

    This is the label-level shadow of a finite group's class data: enough to
    check edge balance (mutually inverse half decorations) and the r = ord(h)
    tie between a contact order and its monodromy class.
    """

    orders: Mapping[str, int]
    inverses: Mapping[str, str]

    def __post_init__(self) -> None:
        for label, order in self.orders.items():
            if order <= 0:
                raise ValidationError(f"class {label!r} has non-positive order {order}")
            inv = self.inverses.get(label)
            if inv is None:
                raise ValidationError(f"class {label!r} has no inverse entry")
            if inv not in self.orders:
                raise ValidationError(f"inverse {inv!r} of class {label!r} is not a known class")
            if self.inverses[inv] != label:
                raise ValidationError(f"inverse map is not an involution at class {label!r}")
            if self.orders[inv] != order:
                raise ValidationError(f"class {label!r} and its inverse differ in order")

    def order_of(self, label: str) -> int:
        if label not in self.orders:
            raise ValidationError(f"unknown monodromy class {label!r}")
        return self.orders[label]

    def inverse_of(self, label: str) -> str:
        if label not in self.inverses:
            raise ValidationError(f"unknown monodromy class {label!r}")
        return self.inverses[label]

    def __contains__(self, label: str) -> bool:
        return label in self.orders

    @classmethod
    def trivial(cls, label: str = "e") -> "MonodromyTable":
        return cls(orders={label: 1}, inverses={label: label})

    @classmethod
    def cyclic(cls, n: int) -> "MonodromyTable":
        """Class table of Z_n with labels 'c0'..'c{n-1}', cj the singleton {j}."""
        if n <= 0:
            raise ValidationError(f"cyclic order must be positive, got {n}")
        orders = {f"c{j}": n // math.gcd(n, j) if j else 1 for j in range(n)}
        inverses = {f"c{j}": f"c{(n - j) % n}" for j in range(n)}
        return cls(orders=orders, inverses=inverses)


@dataclass(frozen=True)
class RelInsertion:
    """A relative insertion (contact order, monodromy class, formal basis label)."""

    order: ContactOrder
    monodromy: str = "e"
    basis_label: str = ""

    def triple(self) -> tuple[Fraction, str, str]:
        return (self.order.value, self.monodromy, self.basis_label)

    def check_order(self, table: MonodromyTable) -> None:
        r = table.order_of(self.monodromy)
        if self.order.r != r:
            raise ValidationError(
                f"contact order {self.order} has r={self.order.r} but class "
                f"{self.monodromy!r} has order {r}"
            )


def floor_bracket(value: Fraction | int) -> int:
    """Floor of a positive rational; at integers this returns the integer itself."""
    q = Fraction(value)
    if q <= 0:
        raise ValidationError(f"floor bracket needs a positive argument, got {q}")
    return q.numerator // q.denominator


class SumCheck(NamedTuple):
    ok: bool
    computed: Fraction
    expected: Fraction


def contact_sum_check(orders: Sequence[ContactOrder], total: Fraction | int) -> SumCheck:
    """Exact check that the contact orders sum to the divisor pairing total."""
    expected = Fraction(total)
    if expected < 0:
        raise ValidationError(f"total must be non-negative, got {expected}")
    computed = sum((o.value for o in orders), Fraction(0))
    return SumCheck(computed == expected, computed, expected)


def enumerate_partitions(
    total: Fraction | int, slot_orders: Sequence[int]
) -> list[tuple[ContactOrder, ...]]:
    """All ordered tuples (l_1..l_k), l_j = k_j/r_j with k_j >= 1, summing to total.

    Output is in lexicographic order of the value tuples; infeasible input
    yields an empty list.
    """
    goal = Fraction(total)
    if goal <= 0:
        raise ValidationError(f"partition total must be positive, got {goal}")
    for r in slot_orders:
        if r < 1:
            raise ValidationError(f"slot orders must be >= 1, got {r}")
    out: list[tuple[ContactOrder, ...]] = []
    prefix: list[ContactOrder] = []
    # later slots each need at least 1/r_j
    reserves = [Fraction(0)] * (len(slot_orders) + 1)
    for j in range(len(slot_orders) - 1, -1, -1):
        reserves[j] = reserves[j + 1] + Fraction(1, slot_orders[j])

    def fill(slot: int, remaining: Fraction) -> None:
        if slot == len(slot_orders):
            if remaining == 0:
                out.append(tuple(prefix))
            return
        r = slot_orders[slot]
        if slot == len(slot_orders) - 1:
            k = remaining * r
            if k >= 1 and k.denominator == 1:
                prefix.append(ContactOrder(int(k), r))
                fill(slot + 1, Fraction(0))
                prefix.pop()
            return
        cap = (remaining - reserves[slot + 1]) * r
        k = 1
        while k <= cap:
            prefix.append(ContactOrder(k, r))
            fill(slot + 1, remaining - Fraction(k, r))
            prefix.pop()
            k += 1

    fill(0, goal)
    return out


def aut_order(insertions: Iterable[RelInsertion]) -> int:
    """Order of the permutation group preserving every (l, h, beta) triple."""
    counts: dict[tuple[Fraction, str, str], int] = {}
    for ins in insertions:
        key = ins.triple()
        counts[key] = counts.get(key, 0) + 1
    result = 1
    for c in counts.values():
        result *= math.factorial(c)
    return result


def branch_cover_degree(r: int) -> int:
    """Degree of the smoothing-parameter cover at an orbifold node of multiplicity r."""
    if r < 1:
        raise ValidationError(f"multiplicity must be >= 1, got {r}")
    return r
