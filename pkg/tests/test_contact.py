import math
import random
from fractions import Fraction as F

import pytest

from orbidegen.contact import (
    ContactOrder,
    MonodromyTable,
    RelInsertion,
    aut_order,
    branch_cover_degree,
    contact_sum_check,
    enumerate_partitions,
    floor_bracket,
)
from orbidegen.errors import ValidationError


def brute_force_partitions(total, slot_orders):
    """Independent oracle: scan every numerator tuple up to the obvious cap."""
    total = F(total)
    caps = [int(total * r) for r in slot_orders]
    out = []

    def rec(i, prefix, acc):
        if i == len(slot_orders):
            if acc == total:
                out.append(tuple(prefix))
            return
        for k in range(1, caps[i] + 1):
            rec(i + 1, prefix + [(k, slot_orders[i])], acc + F(k, slot_orders[i]))

    rec(0, [], F(0))
    return out


class TestFloorBracket:
    def test_three_halves(self):
        assert floor_bracket(F(3, 2)) == 1

    def test_integer_stays(self):
        # integer contact orders must not lose a unit (smooth specialization)
        assert floor_bracket(F(2)) == 2

    def test_below_one(self):
        assert floor_bracket(F(1, 3)) == 0

    def test_rejects_nonpositive(self):
        with pytest.raises(ValidationError):
            floor_bracket(F(0))
        with pytest.raises(ValidationError):
            floor_bracket(F(-1, 2))

    def test_floor_plus_fraction(self):
        rng = random.Random(5)
        for _ in range(200):
            q = F(rng.randint(1, 60), rng.randint(1, 12))
            frac = q - floor_bracket(q)
            assert 0 <= frac < 1
            assert floor_bracket(q) + frac == q


class TestSumCheck:
    def test_matching_integers(self):
        orders = [ContactOrder(1, 1), ContactOrder(1, 1)]
        assert contact_sum_check(orders, 2).ok

    def test_matching_halves(self):
        orders = [ContactOrder(1, 2), ContactOrder(3, 2)]
        report = contact_sum_check(orders, 2)
        assert report.ok and report.computed == 2

    def test_mismatch(self):
        assert not contact_sum_check([ContactOrder(1, 2)], 1).ok


class TestEnumeratePartitions:
    def test_two_unit_slots(self):
        assert enumerate_partitions(2, [1, 1]) == [(ContactOrder(1, 1), ContactOrder(1, 1))]

    def test_two_half_slots(self):
        got = enumerate_partitions(2, [2, 2])
        assert got == [
            (ContactOrder(1, 2), ContactOrder(3, 2)),
            (ContactOrder(2, 2), ContactOrder(2, 2)),
            (ContactOrder(3, 2), ContactOrder(1, 2)),
        ]

    def test_infeasible_is_empty(self):
        assert enumerate_partitions(1, [1, 1]) == []

    @pytest.mark.parametrize("total,orders", [
        (2, [2, 2]), (3, [1, 2]), (F(5, 2), [2, 2, 2]), (2, [3, 6]), (4, [1, 1, 1]),
    ])
    def test_against_brute_force(self, total, orders):
        got = [tuple((o.k, o.r) for o in tup) for tup in enumerate_partitions(total, orders)]
        assert sorted(got) == sorted(brute_force_partitions(total, orders))
        assert got == sorted(got)  # lexicographic output order

    @pytest.mark.parametrize("n", range(1, 9))
    @pytest.mark.parametrize("k", range(1, 5))
    def test_composition_counts(self, n, k):
        got = len(enumerate_partitions(n, [1] * k))
        assert got == math.comb(n - 1, k - 1)

    def test_slot_permutation_bijection(self):
        orders = [2, 3, 1]
        base = {tuple((o.k, o.r) for o in tup)
                for tup in enumerate_partitions(3, orders)}
        permuted = {tuple((o.k, o.r) for o in tup)
                    for tup in enumerate_partitions(3, [orders[2], orders[0], orders[1]])}
        assert {(t[2], t[0], t[1]) for t in base} == permuted

    def test_rejects_bad_input(self):
        with pytest.raises(ValidationError):
            enumerate_partitions(0, [1])
        with pytest.raises(ValidationError):
            enumerate_partitions(2, [0])


class TestAutOrder:
    def test_distinct_triples(self):
        ins = [RelInsertion(ContactOrder(1), "h", "b1"),
               RelInsertion(ContactOrder(2), "h", "b2")]
        assert aut_order(ins) == 1

    def test_spec_example(self):
        ins = [RelInsertion(ContactOrder(1), "h", "b1"),
               RelInsertion(ContactOrder(1), "h", "b1"),
               RelInsertion(ContactOrder(2), "h", "b2")]
        assert aut_order(ins) == 2

    def test_three_identical(self):
        ins = [RelInsertion(ContactOrder(1), "h", "b")] * 3
        assert aut_order(ins) == 6

    def test_divides_factorial_and_max_iff_identical(self):
        rng = random.Random(11)
        for _ in range(100):
            k = rng.randint(1, 5)
            ins = [RelInsertion(ContactOrder(rng.randint(1, 2)), "h", rng.choice("ab"))
                   for _ in range(k)]
            order = aut_order(ins)
            assert math.factorial(k) % order == 0
            identical = len({i.triple() for i in ins}) == 1
            assert (order == math.factorial(k)) == identical


class TestBranchCover:
    @pytest.mark.parametrize("r", [1, 3, 5])
    def test_degree_is_r(self, r):
        assert branch_cover_degree(r) == r

    def test_rejects_zero(self):
        with pytest.raises(ValidationError):
            branch_cover_degree(0)


class TestContactOrder:
    def test_value_and_raw_pair(self):
        order = ContactOrder(2, 2)
        assert order.value == 1 and order.k == 2 and order.r == 2

    def test_parse_roundtrip(self):
        assert ContactOrder.parse("3/2") == ContactOrder(3, 2)
        assert ContactOrder.parse("4") == ContactOrder(4, 1)
        assert str(ContactOrder(3, 2)) == "3/2"

    def test_rejects_nonpositive(self):
        with pytest.raises(ValidationError):
            ContactOrder(0, 1)


class TestMonodromyTable:
    def test_cyclic_orders_and_inverses(self):
        table = MonodromyTable.cyclic(6)
        assert table.order_of("c2") == 3
        assert table.order_of("c3") == 2
        assert table.inverse_of("c1") == "c5"
        for label in table.orders:
            assert table.inverse_of(table.inverse_of(label)) == label

    def test_rel_insertion_order_check(self):
        table = MonodromyTable.cyclic(2)
        RelInsertion(ContactOrder(1, 2), "c1").check_order(table)
        with pytest.raises(ValidationError):
            RelInsertion(ContactOrder(1, 3), "c1").check_order(table)

    def test_broken_involution_rejected(self):
        with pytest.raises(ValidationError):
            MonodromyTable(orders={"a": 2, "b": 2}, inverses={"a": "b", "b": "b"})

    def test_mutually_inverse_pair_accepted(self):
        table = MonodromyTable(orders={"a": 3, "b": 3}, inverses={"a": "b", "b": "a"})
        assert table.inverse_of("a") == "b"
